use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub const MAX_VARS: usize = 32;

/// Exponent vector over a fixed window of variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono([u8; MAX_VARS]);

impl Mono {
    pub fn one() -> Self {
        Mono([0; MAX_VARS])
    }

    pub fn var(v: usize) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: usize, e: u32) -> Self {
        assert!(v < MAX_VARS, "variable index {v} out of range");
        let mut m = [0u8; MAX_VARS];
        m[v] = u8::try_from(e).expect("exponent overflow");
        Mono(m)
    }

    pub fn exp(&self, v: usize) -> u32 {
        self.0[v] as u32
    }

    pub fn deg(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut m = self.0;
        for i in 0..MAX_VARS {
            m[i] = m[i].checked_add(o.0[i]).expect("exponent overflow");
        }
        Mono(m)
    }

    pub fn div(&self, o: &Mono) -> Option<Mono> {
        let mut m = self.0;
        for i in 0..MAX_VARS {
            m[i] = m[i].checked_sub(o.0[i])?;
        }
        Some(Mono(m))
    }

    pub fn with_exp(&self, v: usize, e: u32) -> Mono {
        let mut m = self.0;
        m[v] = u8::try_from(e).expect("exponent overflow");
        Mono(m)
    }

    pub fn vars(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i, e as u32))
    }

    /// All monomials of total degree `d` in the given variables.
    pub fn all_of_degree(vars: &[usize], d: u32) -> Vec<Mono> {
        let mut out = vec![];
        fn rec(vars: &[usize], d: u32, cur: Mono, out: &mut Vec<Mono>) {
            match vars.split_first() {
                None => {
                    if d == 0 {
                        out.push(cur)
                    }
                }
                Some((&v, rest)) => {
                    if rest.is_empty() {
                        out.push(cur.with_exp(v, d));
                        return;
                    }
                    for e in (0..=d).rev() {
                        rec(rest, d - e, cur.with_exp(v, e), out);
                    }
                }
            }
        }
        if vars.is_empty() {
            if d == 0 {
                out.push(Mono::one());
            }
            return out;
        }
        rec(vars, d, Mono::one(), &mut out);
        out
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|v| format!("x{v}")))
    }
}

impl Mono {
    pub fn render(&self, name: &dyn Fn(usize) -> String) -> String {
        let parts: Vec<String> = self
            .vars()
            .map(|(v, e)| if e == 1 { name(v) } else { format!("{}^{}", name(v), e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Poly {
    terms: BTreeMap<Mono, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::term(c, Mono::one())
    }

    pub fn int(c: i64) -> Self {
        Self::constant(q(c))
    }

    pub fn var(v: usize) -> Self {
        Self::term(Q::one(), Mono::var(v))
    }

    pub fn term(c: Q, m: Mono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Mono::one()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeff(&self, m: &Mono) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Mono, c: &Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.deg()).max()
    }

    /// Quantum filtration level: every variable has degree 2.
    pub fn level(&self) -> Option<i64> {
        self.degree().map(|d| 2 * d as i64)
    }

    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.deg() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut ds = self.terms.keys().map(|m| m.deg());
        match ds.next() {
            None => true,
            Some(d) => ds.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn vars(&self) -> Vec<usize> {
        let mut seen = [false; MAX_VARS];
        for m in self.terms.keys() {
            for (v, _) in m.vars() {
                seen[v] = true;
            }
        }
        (0..MAX_VARS).filter(|&v| seen[v]).collect()
    }

    /// Coefficients of `self` viewed as a polynomial in `v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let mut out: Vec<Poly> = vec![];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            if out.len() <= e {
                out.resize(e + 1, Poly::zero());
            }
            out[e].add_term(m.with_exp(v, 0), c);
        }
        out
    }

    /// Substitute `v := p`.
    pub fn subst(&self, v: usize, p: &Poly) -> Poly {
        if !self.uses_var(v) {
            return self.clone();
        }
        let cs = self.coeffs_in(v);
        let mut r = Poly::zero();
        for c in cs.iter().rev() {
            r = &(&r * p) + c;
        }
        r
    }

    /// Simultaneous substitution of several variables.
    pub fn subst_many(&self, s: &[(usize, Poly)]) -> Poly {
        if s.is_empty() {
            return self.clone();
        }
        let mut out = Poly::zero();
        let mut cache: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut base = *m;
            let mut t = Poly::one();
            for (v, p) in s {
                let e = m.exp(*v);
                if e > 0 {
                    base = base.with_exp(*v, 0);
                    let pw = cache.entry((*v, e)).or_insert_with(|| p.pow(e)).clone();
                    t = &t * &pw;
                }
            }
            out += &t.mul_mono(&base).scale(c);
        }
        out
    }

    pub fn rename(&self, map: &dyn Fn(usize) -> usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut nm = Mono::one();
            for (v, e) in m.vars() {
                let w = map(v);
                nm = nm.with_exp(w, nm.exp(w) + e);
            }
            out.add_term(nm, c);
        }
        out
    }

    /// Divide by `v - l` where `l` does not involve `v`: returns (quotient, remainder = self|_{v=l}).
    pub fn div_linear(&self, v: usize, l: &Poly) -> (Poly, Poly) {
        debug_assert!(!l.uses_var(v));
        let cs = self.coeffs_in(v);
        if cs.len() <= 1 {
            return (Poly::zero(), self.clone());
        }
        let d = cs.len() - 1;
        let mut qs = vec![Poly::zero(); d];
        qs[d - 1] = cs[d].clone();
        for k in (1..d).rev() {
            qs[k - 1] = &cs[k] + &(l * &qs[k]);
        }
        let r = &cs[0] + &(l * &qs[0]);
        let mut quo = Poly::zero();
        for (k, c) in qs.into_iter().enumerate() {
            quo += &c.mul_mono(&Mono::var_pow(v, k as u32));
        }
        (quo, r)
    }

    /// Exact quotient by a polynomial of degree one; panics on a nonzero remainder.
    pub fn exact_div_affine(&self, b: &Poly) -> Poly {
        let (v, c, l) = b.affine_pivot().expect("divisor must have a nonzero linear part");
        let (quo, r) = self.div_linear(v, &l);
        assert!(r.is_zero(), "inexact division by {b:?}: remainder {r:?}");
        quo.scale(&(Q::one() / c))
    }

    /// For a polynomial of degree exactly one, pick the largest variable `v` with nonzero
    /// coefficient `c` and return `(v, c, l)` with `self = c (v - l)`.
    pub fn affine_pivot(&self) -> Option<(usize, Q, Poly)> {
        if self.degree() != Some(1) {
            return None;
        }
        let v = self
            .terms
            .keys()
            .filter(|m| m.deg() == 1)
            .map(|m| m.vars().next().unwrap().0)
            .max()?;
        let c = self.coeff(&Mono::var(v));
        let mut rest = self.clone();
        rest.terms.remove(&Mono::var(v));
        Some((v, c.clone(), rest.scale(&(-Q::one() / c))))
    }

    pub fn eval(&self, pt: &dyn Fn(usize) -> Q) -> Q {
        let mut s = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.vars() {
                let x = pt(v);
                for _ in 0..e {
                    t *= &x;
                }
            }
            s += t;
        }
        s
    }

    pub fn render(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&m.render(name));
            } else {
                s.push_str(&format!("{}*{}", a, m.render(name)));
            }
        }
        s
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|v| format!("x{v}")))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, o: &Poly) {
        for (m, c) in &o.terms {
            self.add_term(*m, c);
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, o: &Poly) {
        for (m, c) in &o.terms {
            self.add_term(*m, &-c);
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        if self.is_zero() || o.is_zero() {
            return r;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        r
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, o: Poly) -> Poly {
                (&self).$f(&o)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, o: &Poly) -> Poly {
                (&self).$f(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Univariate polynomial in `v` from coefficients (index = power).
pub fn univariate(coeffs: &[Q], v: usize) -> Poly {
    let mut p = Poly::zero();
    for (i, c) in coeffs.iter().enumerate() {
        p.add_term(Mono::var_pow(v, i as u32), c);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn div_linear_roundtrip() {
        let f = &(&x(0).pow(3) - &(&x(0) * &x(1))) + &Poly::int(5);
        let l = &x(1) + &Poly::int(2);
        let (quo, r) = f.div_linear(0, &l);
        let back = &(&quo * &(&x(0) - &l)) + &r;
        assert_eq!(back, f);
        assert_eq!(r, f.subst(0, &l));
    }

    #[test]
    fn subst_many_matches_sequential() {
        let f = &(&x(0) * &x(1)) + &x(2).pow(2);
        let a = &x(2) + &Poly::int(1);
        let b = x(3);
        let one = f.subst_many(&[(0, a.clone()), (1, b.clone())]);
        let two = f.subst(0, &a).subst(1, &b);
        assert_eq!(one, two);
    }

    #[test]
    fn monomials_of_degree() {
        assert_eq!(Mono::all_of_degree(&[0, 1, 2], 2).len(), 6);
        assert_eq!(Mono::all_of_degree(&[], 0).len(), 1);
        assert_eq!(Mono::all_of_degree(&[], 1).len(), 0);
    }
}
