//! Koszul matrix factorizations `(a_i, b_i)` with sorted exterior bases.
//!
//! A basis element is a bitmask `S` standing for `e_{i1} ^ ... ^ e_{ik}` with `i1 < ... < ik`.
//! The differential is `sum_i a_i e_i ^ (-) + b_i iota_i`, and `e_i ^ e_S = (-1)^{#(S below i)} e_{S+i}`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::poly::{Poly, Q};

/// Sign of moving `e_i` past the bits of `mask` below `i`.
pub fn sign_below(mask: u64, i: usize) -> bool {
    (mask & ((1u64 << i) - 1)).count_ones() % 2 == 1
}

/// Sign of moving `e_i` past the bits of `mask` above `i`.
pub fn sign_above(mask: u64, i: usize) -> bool {
    if i >= 63 {
        return false;
    }
    (mask >> (i + 1)).count_ones() % 2 == 1
}

/// An element of a Koszul factorization: bitmask -> polynomial coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain(pub BTreeMap<u64, Poly>);

impl Chain {
    pub fn zero() -> Self {
        Chain(BTreeMap::new())
    }

    pub fn mono(mask: u64, p: Poly) -> Self {
        let mut c = Chain::zero();
        c.add(mask, &p);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&mut self, mask: u64, p: &Poly) {
        if p.is_zero() {
            return;
        }
        let e = self.0.entry(mask).or_default();
        *e += p;
        if e.is_zero() {
            self.0.remove(&mask);
        }
    }

    pub fn sub(&mut self, mask: u64, p: &Poly) {
        self.add(mask, &-p);
    }

    pub fn add_chain(&mut self, o: &Chain) {
        for (m, p) in &o.0 {
            self.add(*m, p);
        }
    }

    pub fn sub_chain(&mut self, o: &Chain) {
        for (m, p) in &o.0 {
            self.sub(*m, p);
        }
    }

    pub fn scale(&self, c: &Q) -> Chain {
        if c.is_zero() {
            return Chain::zero();
        }
        Chain(self.0.iter().map(|(m, p)| (*m, p.scale(c))).collect())
    }

    pub fn mul_poly(&self, f: &Poly) -> Chain {
        let mut out = Chain::zero();
        for (m, p) in &self.0 {
            out.add(*m, &(p * f));
        }
        out
    }

    pub fn map_polys(&self, f: &dyn Fn(&Poly) -> Poly) -> Chain {
        let mut out = Chain::zero();
        for (m, p) in &self.0 {
            out.add(*m, &f(p));
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u64, &Poly)> {
        self.0.iter()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub a: Poly,
    pub b: Poly,
    /// Shift of `e_i` relative to `e_0`: `deg(a) + delta = n + 1` at top level.
    pub delta: i64,
}

/// Tensor product of Koszul factors over a polynomial ring; only the `active` factors take part.
#[derive(Clone, Debug)]
pub struct Koszul {
    pub n: usize,
    pub factors: Vec<Factor>,
    pub active: u64,
    pub base_shift: i64,
    pub base_parity: u8,
    a_top: Vec<Poly>,
    b_top: Vec<Poly>,
}

impl Koszul {
    pub fn new(n: usize, factors: Vec<Factor>, base_shift: i64, base_parity: u8) -> Self {
        assert!(factors.len() < 64, "too many Koszul factors");
        let active = if factors.is_empty() {
            0
        } else {
            (1u64 << factors.len()) - 1
        };
        let mut k = Koszul {
            n,
            factors,
            active,
            base_shift,
            base_parity,
            a_top: vec![],
            b_top: vec![],
        };
        k.refresh_tops();
        k
    }

    pub fn with_active(mut self, active: u64) -> Self {
        self.active = active;
        self
    }

    /// Recompute the expected-degree components used by the graded differential.
    pub fn refresh_tops(&mut self) {
        let n = self.n as i64;
        self.a_top = self
            .factors
            .iter()
            .map(|f| {
                let d = n + 1 - f.delta;
                debug_assert!(d >= 0 && d % 2 == 0);
                f.a.homogeneous_part((d / 2) as u32)
            })
            .collect();
        self.b_top = self
            .factors
            .iter()
            .map(|f| {
                let d = n + 1 + f.delta;
                debug_assert!(d >= 0 && d % 2 == 0);
                f.b.homogeneous_part((d / 2) as u32)
            })
            .collect();
    }

    pub fn active_indices(&self) -> Vec<usize> {
        (0..self.factors.len()).filter(|&i| self.active >> i & 1 == 1).collect()
    }

    pub fn shift(&self, mask: u64) -> i64 {
        let mut s = self.base_shift;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            s += self.factors[i].delta;
            m &= m - 1;
        }
        s
    }

    pub fn parity(&self, mask: u64) -> u8 {
        ((mask.count_ones() as u8) + self.base_parity) % 2
    }

    pub fn level(&self, c: &Chain) -> Option<i64> {
        c.terms().map(|(m, p)| self.shift(*m) + p.level().unwrap()).max()
    }

    /// The part of `c` sitting exactly at filtration level `l`.
    pub fn level_part(&self, c: &Chain, l: i64) -> Chain {
        let mut out = Chain::zero();
        for (m, p) in c.terms() {
            let r = l - self.shift(*m);
            if r >= 0 && r % 2 == 0 {
                out.add(*m, &p.homogeneous_part((r / 2) as u32));
            }
        }
        out
    }

    fn apply(&self, c: &Chain, top: bool, skip: Option<usize>) -> Chain {
        let mut out = Chain::zero();
        for (&mask, p) in c.terms() {
            for i in 0..self.factors.len() {
                if self.active >> i & 1 == 0 || Some(i) == skip {
                    continue;
                }
                let neg = sign_below(mask, i);
                let (coef, target) = match (mask >> i & 1 == 0, top) {
                    (true, false) => (&self.factors[i].a, mask | 1 << i),
                    (true, true) => (&self.a_top[i], mask | 1 << i),
                    (false, false) => (&self.factors[i].b, mask & !(1 << i)),
                    (false, true) => (&self.b_top[i], mask & !(1 << i)),
                };
                if coef.is_zero() {
                    continue;
                }
                let t = coef * p;
                if neg {
                    out.sub(target, &t);
                } else {
                    out.add(target, &t);
                }
            }
        }
        out
    }

    pub fn d(&self, c: &Chain) -> Chain {
        self.apply(c, false, None)
    }

    /// Differential with factor `skip` left out.
    pub fn d_without(&self, c: &Chain, skip: usize) -> Chain {
        self.apply(c, false, Some(skip))
    }

    /// Associated graded differential: each entry replaced by its expected-degree part.
    pub fn d_top(&self, c: &Chain) -> Chain {
        self.apply(c, true, None)
    }

    /// `sum a_i b_i` over the active factors; zero for a genuine complex.
    pub fn potential(&self) -> Poly {
        let mut p = Poly::zero();
        for i in self.active_indices() {
            p += &(&self.factors[i].a * &self.factors[i].b);
        }
        p
    }

    /// Filtration audit of every nonzero entry: level(entry) + shift(src) <= shift(tgt) + n + 1.
    pub fn audit_filtration(&self) -> bool {
        let n = self.n as i64;
        self.factors.iter().all(|f| {
            f.a.level().is_none_or(|l| l + f.delta <= n + 1) && f.b.level().is_none_or(|l| l - f.delta <= n + 1)
        })
    }
}

/// A local map between the two-factor complexes of one site, in the local Koszul basis.
///
/// Local masks: bit 0 = slot 0, bit 1 = slot 1. `m[t][s]` is the coefficient of local mask `t`
/// in the image of local mask `s`; polynomials use the site variables `0..4`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteMap {
    pub odd: bool,
    pub m: [[Poly; 4]; 4],
    pub degree: i64,
}

impl SiteMap {
    pub fn zero(odd: bool, degree: i64) -> Self {
        SiteMap {
            odd,
            m: Default::default(),
            degree,
        }
    }

    pub fn set(&mut self, tgt: usize, src: usize, p: Poly) {
        self.m[tgt][src] = p;
    }

    pub fn rename(&self, f: &dyn Fn(usize) -> usize) -> SiteMap {
        let mut out = SiteMap::zero(self.odd, self.degree);
        for t in 0..4 {
            for s in 0..4 {
                out.m[t][s] = self.m[t][s].rename(f);
            }
        }
        out
    }

    pub fn map_polys(&self, f: &dyn Fn(&Poly) -> Poly) -> SiteMap {
        let mut out = SiteMap::zero(self.odd, self.degree);
        for t in 0..4 {
            for s in 0..4 {
                out.m[t][s] = f(&self.m[t][s]);
            }
        }
        out
    }

    pub fn compose(&self, first: &SiteMap) -> SiteMap {
        let mut out = SiteMap::zero(self.odd ^ first.odd, self.degree + first.degree);
        for t in 0..4 {
            for s in 0..4 {
                let mut acc = Poly::zero();
                for k in 0..4 {
                    acc += &(&self.m[t][k] * &first.m[k][s]);
                }
                out.m[t][s] = acc;
            }
        }
        out
    }

    pub fn is_scalar_times_identity(&self, f: &Poly) -> bool {
        (0..4).all(|t| {
            (0..4).all(|s| {
                if t == s {
                    &self.m[t][s] == f
                } else {
                    self.m[t][s].is_zero()
                }
            })
        })
    }

    /// Apply to the site occupying factor slots `2 site` and `2 site + 1`.
    /// Odd maps pick up the sign of the factors after the site.
    pub fn apply(&self, site: usize, c: &Chain) -> Chain {
        let lo = 2 * site;
        let mut out = Chain::zero();
        for (&mask, p) in c.terms() {
            let s = ((mask >> lo) & 3) as usize;
            let rest = mask & !(3u64 << lo);
            let neg = self.odd && lo + 1 < 63 && (mask >> (lo + 2)).count_ones() % 2 == 1;
            for t in 0..4 {
                let coef = &self.m[t][s];
                if coef.is_zero() {
                    continue;
                }
                let v = coef * p;
                let tm = rest | (t as u64) << lo;
                if neg {
                    out.sub(tm, &v);
                } else {
                    out.add(tm, &v);
                }
            }
        }
        out
    }
}

/// The local two-factor complex of a site, as a standalone Koszul complex in variables `0..4`.
pub fn local_complex(n: usize, f0: Factor, f1: Factor, base_shift: i64) -> Koszul {
    Koszul::new(n, vec![f0, f1], base_shift, 0)
}

/// Check `d_tgt A = A d_src` on the local bases (for odd maps with the same convention).
pub fn is_local_chain_map(src: &Koszul, tgt: &Koszul, a: &SiteMap) -> bool {
    (0..4u64).all(|s| {
        let e = Chain::mono(s, Poly::one());
        let lhs = tgt.d(&a.apply(0, &e));
        let rhs = a.apply(0, &src.d(&e));
        lhs == rhs
    })
}

/// Filtration audit of a local map: level(entry) + shift(tgt) <= shift(src) + degree.
pub fn audit_site_map(src: &Koszul, tgt: &Koszul, a: &SiteMap) -> bool {
    (0..4u64).all(|s| {
        (0..4u64).all(|t| {
            a.m[t as usize][s as usize]
                .level()
                .is_none_or(|l| l + tgt.shift(t) <= src.shift(s) + a.degree)
        })
    })
}
