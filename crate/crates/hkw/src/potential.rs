use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{q, univariate, Mono, Poly, Q};

/// Scratch variables used while building the symmetric-function polynomials.
/// Edge variables must stay below `AUX_BASE`.
pub const AUX_BASE: usize = 28;
const S1: usize = AUX_BASE;
const S2: usize = AUX_BASE + 1;
const T1: usize = AUX_BASE + 2;
const T2: usize = AUX_BASE + 3;

/// A potential `w` of degree `n+1` with `dw = (n+1) prod (x - root)` and zero constant term.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    pub n: usize,
    pub roots: Vec<Q>,
    w: Vec<Q>,
    dw: Vec<Q>,
}

impl Potential {
    pub fn new(roots: Vec<Q>) -> Result<Self> {
        let n = roots.len();
        if n == 0 {
            return Err(Error::Validation("a potential needs at least one root".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if roots[i] == roots[j] {
                    return Err(Error::Validation(format!("repeated root {}", roots[i])));
                }
            }
        }
        // dw = (n+1) prod (x - r)
        let mut dw = vec![q(n as i64 + 1)];
        for r in &roots {
            let mut next = vec![Q::zero(); dw.len() + 1];
            for (i, c) in dw.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            dw = next;
        }
        let mut w = vec![Q::zero(); n + 2];
        for (i, c) in dw.iter().enumerate() {
            w[i + 1] = c / q(i as i64 + 1);
        }
        Ok(Potential { n, roots, w, dw })
    }

    /// Default potential with roots `1, 2, ..., n`.
    pub fn standard(n: usize) -> Self {
        Self::new((1..=n as i64).map(q).collect()).expect("distinct default roots")
    }

    pub fn w_coeffs(&self) -> &[Q] {
        &self.w
    }

    pub fn dw_coeffs(&self) -> &[Q] {
        &self.dw
    }

    pub fn w(&self, x: usize) -> Poly {
        univariate(&self.w, x)
    }

    pub fn dw(&self, x: usize) -> Poly {
        univariate(&self.dw, x)
    }

    /// `pi_xy = (w(x) - w(y)) / (x - y)`, and `dw(x)` on the diagonal.
    pub fn pi(&self, x: usize, y: usize) -> Poly {
        if x == y {
            return self.dw(x);
        }
        (&self.w(x) - &self.w(y)).exact_div_affine(&(&Poly::var(x) - &Poly::var(y)))
    }

    /// The polynomial `p(s, t)` with `p(x + y, xy) = w(x) + w(y)`.
    pub fn split(&self, s: usize, t: usize) -> Poly {
        let (sv, tv) = (Poly::var(s), Poly::var(t));
        // power sums P_k = s P_{k-1} - t P_{k-2}
        let mut ps = vec![Poly::int(2), sv.clone()];
        while ps.len() < self.w.len() {
            let k = ps.len();
            let next = &(&sv * &ps[k - 1]) - &(&tv * &ps[k - 2]);
            ps.push(next);
        }
        let mut p = Poly::zero();
        for (k, c) in self.w.iter().enumerate().skip(1) {
            p += &ps[k].scale(c);
        }
        p
    }

    /// `(u1, u2)` for the thick edge with outgoing `x1, x2` and incoming `x3, x4`.
    pub fn thick_u(&self, x: [usize; 4]) -> (Poly, Poly) {
        let [x1, x2, x3, x4] = x.map(Poly::var);
        let s1 = &x1 + &x2;
        let s2 = &x3 + &x4;
        let t1 = &x1 * &x2;
        let t2 = &x3 * &x4;
        let p_s1 = self.split(S1, T1);
        let p_s2 = self.split(S2, T1);
        let u1 = (&p_s1 - &p_s2).exact_div_affine(&(&Poly::var(S1) - &Poly::var(S2)));
        let p_t1 = self.split(S2, T1);
        let p_t2 = self.split(S2, T2);
        let u2 = (&p_t1 - &p_t2).exact_div_affine(&(&Poly::var(T1) - &Poly::var(T2)));
        let sub = [(S1, s1), (S2, s2), (T1, t1), (T2, t2)];
        (u1.subst_many(&sub), u2.subst_many(&sub))
    }

    /// The correction term `a = (u1 + x3 u2 - pi_24) / (x1 - x3)` of the chi maps.
    pub fn chi_a(&self, x: [usize; 4]) -> Poly {
        let (u1, u2) = self.thick_u(x);
        let num = &(&u1 + &(&Poly::var(x[2]) * &u2)) - &self.pi(x[1], x[3]);
        num.exact_div_affine(&(&Poly::var(x[0]) - &Poly::var(x[2])))
    }

    /// `e_ijk = (pi_ik - pi_jk) / (x_i - x_j)`.
    pub fn e(&self, i: usize, j: usize, k: usize) -> Poly {
        assert_ne!(i, j);
        (&self.pi(i, k) - &self.pi(j, k)).exact_div_affine(&(&Poly::var(i) - &Poly::var(j)))
    }

    /// Root idempotent `q_beta(x) = prod_{a != beta} (x - a) / (beta - a)`.
    pub fn q_beta(&self, beta: &Q, x: usize) -> Poly {
        assert!(self.roots.contains(beta), "{beta} is not a root of dw");
        let mut p = Poly::one();
        for a in self.roots.iter().filter(|a| *a != beta) {
            let lin = &Poly::var(x) - &Poly::constant(a.clone());
            p = (&p * &lin).scale(&(Q::one() / (beta - a)));
        }
        p
    }

    /// `prod_{a != beta} (beta - a)^{-1}`, the coefficient of `x^{n-1}` in `q_beta`.
    pub fn trace_of_q(&self, beta: &Q) -> Q {
        self.roots
            .iter()
            .filter(|a| *a != beta)
            .fold(Q::one(), |acc, a| acc / (beta - a))
    }

    /// Reidemeister I polynomial `alpha = (p(x1+x2, x1x2) - p(x1+x2, x1x3)) / (x1 (x2 - x3))`.
    pub fn r1_alpha(&self, x1: usize, x2: usize, x3: usize) -> Poly {
        let p1 = self.split(S1, T1);
        let p2 = self.split(S1, T2);
        let dd = (&p1 - &p2).exact_div_affine(&(&Poly::var(T1) - &Poly::var(T2)));
        let (a, b, c) = (Poly::var(x1), Poly::var(x2), Poly::var(x3));
        dd.subst_many(&[(S1, &a + &b), (T1, &a * &b), (T2, &a * &c)])
    }

    /// The basis-change form of the module map `beta` of the Reidemeister I.1 inverse: writes `f` in the basis
    /// `x1^i (i <= n-2)`, `x1^{i-1} (dw(x1) - c) (i >= 0)` over the other variables and sends
    /// the latter to `(x2 - x3)^i`. It only commutes with the differentials when `c = dw(0) = 0`;
    /// see [`Potential::r1_beta`].
    pub fn r1_beta_basis(&self, f: &Poly, x1: usize, x2: usize, x3: usize) -> Poly {
        let n = self.n;
        let g0: Vec<Q> = self.dw[1..].to_vec(); // (dw - c)/x, degree n-1, leading n+1
        let lead = g0[n - 1].clone();
        let mut cs = f.coeffs_in(x1);
        let diff = &Poly::var(x2) - &Poly::var(x3);
        let mut out = Poly::zero();
        while cs.len() >= n {
            let d = cs.len() - 1;
            let i = d + 1 - n;
            let k = cs[d].scale(&(Q::one() / &lead));
            for (j, gc) in g0.iter().enumerate() {
                let t = k.scale(gc);
                cs[i + j] -= &t;
            }
            out += &(&k * &diff.pow(i as u32));
            while cs.last().is_some_and(|p| p.is_zero()) {
                cs.pop();
            }
        }
        out
    }

    /// The Reidemeister I.1 map `beta`, corrected so that `beta(dw(x1) f) = (x2 - x3) f(x2 - x3)`
    /// for every `f`: divide by `dw(x1)`, send the quotient `q` to `(x2 - x3) q(x2 - x3)` and the
    /// remainder to its `x1^{n-1}` coefficient over `n + 1`. Agrees with
    /// [`Potential::r1_beta_basis`] when `dw(0) = 0`.
    pub fn r1_beta(&self, f: &Poly, x1: usize, x2: usize, x3: usize) -> Poly {
        let n = self.n;
        let lead = self.dw[n].clone();
        let mut cs = f.coeffs_in(x1);
        let mut quot = vec![Poly::zero(); cs.len().saturating_sub(n)];
        while cs.len() > n {
            let d = cs.len() - 1;
            let k = cs[d].scale(&(Q::one() / &lead));
            for (j, c) in self.dw.iter().enumerate() {
                let t = k.scale(c);
                cs[d - n + j] -= &t;
            }
            quot[d - n] = k;
            while cs.last().is_some_and(|p| p.is_zero()) {
                cs.pop();
            }
        }
        let diff = &Poly::var(x2) - &Poly::var(x3);
        let mut out = cs
            .get(n - 1)
            .cloned()
            .unwrap_or_else(Poly::zero)
            .scale(&(Q::one() / &lead));
        for (i, k) in quot.iter().enumerate() {
            out += &(k * &diff.pow(i as u32 + 1));
        }
        out
    }

    /// `1_{1 -> 2,3}`: substitute `x1 := x2 - x3`.
    pub fn r1_one(&self, f: &Poly, x1: usize, x2: usize, x3: usize) -> Poly {
        f.subst(x1, &(&Poly::var(x2) - &Poly::var(x3)))
    }

    /// Reduce `f` modulo `dw(x)` in the variable `x`.
    pub fn reduce_mod_dw(&self, f: &Poly, x: usize) -> Poly {
        let n = self.n;
        let mut cs = f.coeffs_in(x);
        let lead = self.dw[n].clone();
        while cs.len() > n {
            let d = cs.len() - 1;
            let k = cs[d].scale(&(Q::one() / &lead));
            for (j, c) in self.dw.iter().enumerate() {
                let t = k.scale(c);
                cs[d - n + j] -= &t;
            }
            while cs.last().is_some_and(|p| p.is_zero()) {
                cs.pop();
            }
        }
        let mut out = Poly::zero();
        for (i, c) in cs.into_iter().enumerate() {
            out += &c.mul_mono(&Mono::var_pow(x, i as u32));
        }
        out
    }

    /// Reduce modulo `dw` in each of the listed variables.
    pub fn reduce_mod_dw_all(&self, f: &Poly, xs: &[usize]) -> Poly {
        xs.iter().fold(f.clone(), |acc, &x| self.reduce_mod_dw(&acc, x))
    }

    /// Coefficient of `x^{n-1}` after reducing modulo `dw(x)`: the trace of the circle algebra.
    pub fn trace(&self, f: &Poly, x: usize) -> Poly {
        let r = self.reduce_mod_dw(f, x);
        r.coeffs_in(x).get(self.n - 1).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn is_root(&self, r: &Q) -> bool {
        self.roots.contains(r)
    }

    pub fn describe(&self) -> String {
        let p = self.w(0);
        let s = p.render(&|_| "x".into());
        let roots: Vec<String> = self.roots.iter().map(|r| r.to_string()).collect();
        format!("n={} roots={{{}}} w={}", self.n, roots.join(","), s)
    }

    pub fn leading_is_one(&self) -> bool {
        self.w.last().is_some_and(|c| c.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> Potential {
        Potential::new(vec![q(1), q(-1)]).unwrap()
    }

    #[test]
    fn cubic_is_x3_minus_3x() {
        let w = cubic();
        assert_eq!(w.w_coeffs(), &[q(0), q(-3), q(0), q(1)]);
    }

    #[test]
    fn standard_n2() {
        let w = Potential::standard(2);
        assert_eq!(w.dw_coeffs(), &[q(6), q(-9), q(3)]);
        assert!(w.leading_is_one());
    }

    #[test]
    fn beta_sends_shifted_dw_to_one() {
        let w = cubic();
        let g = &w.dw(0) - &Poly::constant(w.dw_coeffs()[0].clone());
        let g0 = g.exact_div_affine(&Poly::var(0));
        assert_eq!(w.r1_beta(&g0, 0, 1, 2), Poly::one());
        assert_eq!(w.r1_beta(&Poly::one(), 0, 1, 2), Poly::zero());
        assert_eq!(w.r1_beta(&g, 0, 1, 2), &Poly::var(1) - &Poly::var(2));
    }
}
