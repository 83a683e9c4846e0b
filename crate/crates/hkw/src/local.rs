//! Local pieces of a resolution: site configurations, their two-factor complexes and the maps
//! between them (chi, eta, and the saddle map), all in site variables `0..4`.

use num_traits::One;

use crate::koszul::{Factor, Koszul, SiteMap};
use crate::poly::{Poly, Q};
use crate::potential::Potential;

/// How the four endpoints of a site are joined.
///
/// `Arcs` lists two `(out, in)` pairs of local endpoints; `Thick` is the wide edge with
/// outgoing endpoints `0, 1` and incoming endpoints `2, 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Config {
    Arcs([(usize, usize); 2]),
    Thick,
}

/// Crossing endpoints are `(x1, x2, x3, x4)` = two outgoing, then two incoming.
pub const ORIENTED: Config = Config::Arcs([(0, 2), (1, 3)]);
pub const CROSSED: Config = Config::Arcs([(0, 3), (1, 2)]);
pub const THICK: Config = Config::Thick;
/// Saddle endpoints: `x1, x3` outgoing and `x2, x4` incoming.
pub const SADDLE0: Config = Config::Arcs([(0, 3), (2, 1)]);
pub const SADDLE1: Config = Config::Arcs([(0, 1), (2, 3)]);

impl Config {
    pub fn name(&self) -> &'static str {
        match *self {
            ORIENTED => "oriented",
            CROSSED => "crossed",
            THICK => "thick",
            SADDLE0 => "saddle0",
            SADDLE1 => "saddle1",
            _ => "arcs",
        }
    }

    pub fn outs(&self) -> [usize; 2] {
        match self {
            Config::Arcs(p) => [p[0].0, p[1].0],
            Config::Thick => [0, 1],
        }
    }

    pub fn ins(&self) -> [usize; 2] {
        match self {
            Config::Arcs(p) => [p[0].1, p[1].1],
            Config::Thick => [2, 3],
        }
    }
}

/// A 2x2 block basis: each entry is a Koszul mask with a sign.
pub type BlockBasis = [(u64, bool); 2];

/// Site polynomials over the local variables, computed once per potential.
#[derive(Clone, Debug)]
pub struct Locals {
    pub pot: Potential,
    pub n: usize,
    pi: Vec<Vec<Poly>>,
    pub u1: Poly,
    pub u2: Poly,
    pub a: Poly,
}

fn x(i: usize) -> Poly {
    Poly::var(i)
}

impl Locals {
    pub fn new(pot: &Potential) -> Self {
        let pi = (0..4).map(|i| (0..4).map(|j| pot.pi(i, j)).collect()).collect();
        let (u1, u2) = pot.thick_u([0, 1, 2, 3]);
        let a = pot.chi_a([0, 1, 2, 3]);
        Locals {
            pot: pot.clone(),
            n: pot.n,
            pi,
            u1,
            u2,
            a,
        }
    }

    pub fn pi(&self, i: usize, j: usize) -> &Poly {
        &self.pi[i][j]
    }

    pub fn arc_factor(&self, o: usize, i: usize) -> Factor {
        Factor {
            a: self.pi[o][i].clone(),
            b: &x(o) - &x(i),
            delta: 1 - self.n as i64,
        }
    }

    /// The two factors and base shift of a configuration.
    pub fn factors(&self, c: Config) -> ([Factor; 2], i64) {
        let n = self.n as i64;
        match c {
            Config::Arcs([p, q]) => ([self.arc_factor(p.0, p.1), self.arc_factor(q.0, q.1)], 0),
            Config::Thick => {
                let f1 = Factor {
                    a: self.u1.clone(),
                    b: &(&x(0) + &x(1)) - &(&x(2) + &x(3)),
                    delta: 1 - n,
                };
                let f2 = Factor {
                    a: self.u2.clone(),
                    b: &(&x(0) * &x(1)) - &(&x(2) * &x(3)),
                    delta: 3 - n,
                };
                ([f1, f2], -1)
            }
        }
    }

    pub fn complex(&self, c: Config) -> Koszul {
        let ([f0, f1], s) = self.factors(c);
        Koszul::new(self.n, vec![f0, f1], s, 0)
    }

    /// `chi_0`: oriented smoothing to thick edge.
    pub fn chi0(&self) -> SiteMap {
        let u0 = [[&x(2) - &x(1), Poly::zero()], [self.a.clone(), Poly::one()]];
        let u1 = [[x(2), -&x(1)], [-Poly::one(), Poly::one()]];
        from_blocks(
            &CROSSING_EVEN,
            &CROSSING_ODD,
            &CROSSING_EVEN,
            &CROSSING_ODD,
            &u0,
            &u1,
            false,
            1,
        )
    }

    /// `chi_1`: thick edge to oriented smoothing.
    pub fn chi1(&self) -> SiteMap {
        let v0 = [[Poly::one(), Poly::zero()], [-&self.a, &x(2) - &x(1)]];
        let v1 = [[Poly::one(), x(1)], [Poly::one(), x(2)]];
        from_blocks(
            &CROSSING_EVEN,
            &CROSSING_ODD,
            &CROSSING_EVEN,
            &CROSSING_ODD,
            &v0,
            &v1,
            false,
            1,
        )
    }

    /// `eta_0`: crossed arcs to thick edge, `chi_0` conjugated by `x3 <-> x4`.
    pub fn eta0(&self) -> SiteMap {
        self.chi0().rename(&swap34)
    }

    /// `eta_1`: thick edge to crossed arcs.
    pub fn eta1(&self) -> SiteMap {
        self.chi1().rename(&swap34)
    }

    /// `chi0, chi1` (and their `eta` conjugates) are chain maps within their filtered degree, and
    /// both composites are multiplication by `x3 - x2`.
    pub fn chi_identities(&self) -> bool {
        use crate::koszul::{audit_site_map, is_local_chain_map};
        let (o, t, c) = (self.complex(ORIENTED), self.complex(THICK), self.complex(CROSSED));
        let f = &x(2) - &x(1);
        is_local_chain_map(&o, &t, &self.chi0())
            && is_local_chain_map(&t, &o, &self.chi1())
            && is_local_chain_map(&c, &t, &self.eta0())
            && is_local_chain_map(&t, &c, &self.eta1())
            && audit_site_map(&o, &t, &self.chi0())
            && audit_site_map(&t, &o, &self.chi1())
            && self.chi1().compose(&self.chi0()).is_scalar_times_identity(&f)
            && self.chi0().compose(&self.chi1()).is_scalar_times_identity(&f)
    }

    /// The saddle map `F: C(saddle0) -> C(saddle1)<1>`, odd of filtered degree `n - 1`.
    pub fn saddle(&self) -> SiteMap {
        let pot = &self.pot;
        let e123 = pot.e(0, 1, 2);
        let e134 = pot.e(0, 2, 3);
        let f0 = [[e123.clone(), -Poly::one()], [-&e134, -Poly::one()]];
        // F1 as a plain saddle anticommutes with the differentials; negate it so that F commutes.
        let f1 = [[Poly::one(), -Poly::one()], [-e123, -e134]];
        // C(saddle1)<1> has M0 = (e_A, e_B) and M1 = (e0, e_AB).
        from_blocks(
            &SADDLE_EVEN,
            &CROSSING_ODD,
            &CROSSING_ODD,
            &SADDLE_EVEN,
            &f0,
            &f1,
            true,
            self.n as i64 - 1,
        )
    }
}

/// `(e0, -e_AB)`: the even block basis at crossings.
pub const CROSSING_EVEN: BlockBasis = [(0, false), (3, true)];
/// `(e_A, e_B)`.
pub const CROSSING_ODD: BlockBasis = [(1, false), (2, false)];
/// `(e0, e_AB)`: the even block basis at a saddle.
pub const SADDLE_EVEN: BlockBasis = [(0, false), (3, false)];

fn swap34(v: usize) -> usize {
    match v {
        2 => 3,
        3 => 2,
        v => v,
    }
}

/// Translate a pair of 2x2 block matrices (columns = images of source basis vectors) into a
/// local Koszul map.
#[allow(clippy::too_many_arguments)]
pub fn from_blocks(
    src0: &BlockBasis,
    src1: &BlockBasis,
    tgt0: &BlockBasis,
    tgt1: &BlockBasis,
    g0: &[[Poly; 2]; 2],
    g1: &[[Poly; 2]; 2],
    odd: bool,
    degree: i64,
) -> SiteMap {
    let mut m = SiteMap::zero(odd, degree);
    for (src, tgt, g) in [(src0, tgt0, g0), (src1, tgt1, g1)] {
        for j in 0..2 {
            for i in 0..2 {
                let mut p = g[i][j].clone();
                if src[j].1 != tgt[i].1 {
                    p = -p;
                }
                m.set(tgt[i].0 as usize, src[j].0 as usize, p);
            }
        }
    }
    m
}

/// Local complex written back in a block basis: `(d0, d1)` as 2x2 matrices.
pub fn to_blocks(k: &Koszul, even: &BlockBasis, odd: &BlockBasis) -> ([[Poly; 2]; 2], [[Poly; 2]; 2]) {
    use crate::koszul::Chain;
    let col = |src: &BlockBasis, tgt: &BlockBasis| {
        let mut out: [[Poly; 2]; 2] = Default::default();
        for j in 0..2 {
            let mut e = Chain::mono(src[j].0, Poly::one());
            if src[j].1 {
                e = e.scale(&-Q::one());
            }
            let de = k.d(&e);
            for i in 0..2 {
                let c = de.0.get(&tgt[i].0).cloned().unwrap_or_default();
                out[i][j] = if tgt[i].1 { -c } else { c };
            }
        }
        out
    };
    (col(even, odd), col(odd, even))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::{audit_site_map, is_local_chain_map};
    use crate::poly::q;

    fn locals() -> Locals {
        Locals::new(&Potential::new(vec![q(1), q(-1)]).unwrap())
    }

    #[test]
    fn block_matrices_of_oriented_and_thick() {
        let l = locals();
        let (p0, p1) = to_blocks(&l.complex(ORIENTED), &CROSSING_EVEN, &CROSSING_ODD);
        assert_eq!(p0[0][0], *l.pi(0, 2));
        assert_eq!(p0[0][1], &x(1) - &x(3));
        assert_eq!(p0[1][1], &x(2) - &x(0));
        assert_eq!(p1[1][1], -l.pi(0, 2));
        let (q0, _) = to_blocks(&l.complex(THICK), &CROSSING_EVEN, &CROSSING_ODD);
        assert_eq!(q0[0][1], &(&x(0) * &x(1)) - &(&x(2) * &x(3)));
        assert_eq!(q0[1][1], &(&x(2) + &x(3)) - &(&x(0) + &x(1)));
    }

    #[test]
    fn chi_maps_are_chain_maps() {
        for roots in [vec![q(1), q(-1)], vec![q(1), q(2), q(3)]] {
            let l = Locals::new(&Potential::new(roots).unwrap());
            let (o, t, c) = (l.complex(ORIENTED), l.complex(THICK), l.complex(CROSSED));
            assert!(is_local_chain_map(&o, &t, &l.chi0()));
            assert!(is_local_chain_map(&t, &o, &l.chi1()));
            assert!(is_local_chain_map(&c, &t, &l.eta0()));
            assert!(is_local_chain_map(&t, &c, &l.eta1()));
            assert!(audit_site_map(&o, &t, &l.chi0()));
            assert!(audit_site_map(&t, &o, &l.chi1()));
        }
    }

    #[test]
    fn chi_composites_are_multiplication() {
        let l = locals();
        let f = &x(2) - &x(1);
        assert!(l.chi1().compose(&l.chi0()).is_scalar_times_identity(&f));
        assert!(l.chi0().compose(&l.chi1()).is_scalar_times_identity(&f));
    }

    #[test]
    fn saddle_is_chain_map() {
        for roots in [vec![q(1), q(-1)], vec![q(0), q(2), q(5)]] {
            let l = Locals::new(&Potential::new(roots).unwrap());
            let (s0, s1) = (l.complex(SADDLE0), l.complex(SADDLE1));
            assert!(is_local_chain_map(&s0, &s1, &l.saddle()));
            assert!(audit_site_map(&s0, &s1, &l.saddle()));
            let (p0, _) = to_blocks(&s0, &SADDLE_EVEN, &CROSSING_ODD);
            assert_eq!(p0[0][1], &x(1) - &x(2));
        }
    }
}
