//! Matrix factorizations in explicit matrix form, their tensor products, and removal of marks
//! with the explicit homotopy data `K`, `L`, `H`.
//!
//! The cube engine works with Koszul complexes instead; this module keeps the explicit 2x2 block
//! matrices so that the local identities can be checked entry by entry.

use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::potential::Potential;

/// Row-major matrix of polynomials.
pub type Mat = Vec<Vec<Poly>>;
pub type Vector = Vec<Poly>;

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![Poly::zero(); c]; r]
}

pub fn identity(r: usize) -> Mat {
    scalar(r, &Poly::one())
}

pub fn scalar(r: usize, p: &Poly) -> Mat {
    let mut m = zeros(r, r);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = p.clone();
    }
    m
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = zeros(a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b[k].iter().enumerate() {
                if !y.is_zero() {
                    out[i][j] += &(x * y);
                }
            }
        }
    }
    out
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn sub(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn map(a: &Mat, f: &dyn Fn(&Poly) -> Poly) -> Mat {
    a.iter().map(|r| r.iter().map(f).collect()).collect()
}

pub fn apply(a: &Mat, v: &[Poly]) -> Vector {
    a.iter()
        .map(|row| {
            let mut s = Poly::zero();
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    s += &(x * y);
                }
            }
            s
        })
        .collect()
}

/// `[[a, b], [c, d]]` assembled from blocks.
pub fn blocks(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
    let mut out: Mat = a.iter().zip(b).map(|(x, y)| [x.clone(), y.clone()].concat()).collect();
    out.extend(c.iter().zip(d).map(|(x, y)| [x.clone(), y.clone()].concat()));
    out
}

fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ar, br) = (a.len(), b.len());
    let (ac, bc) = (a.first().map_or(0, |r| r.len()), b.first().map_or(0, |r| r.len()));
    let mut out = zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    if !b[k][l].is_zero() {
                        out[i * br + k][j * bc + l] = &a[i][j] * &b[k][l];
                    }
                }
            }
        }
    }
    out
}

fn add_vec(a: &[Poly], b: &[Poly]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vec(a: &[Poly], b: &[Poly]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn neg_vec(a: &[Poly]) -> Vector {
    a.iter().map(|x| -x).collect()
}

/// A filtered matrix factorization `M0 -d0-> M1 -d1-> M0` with `d1 d0 = d0 d1 = potential`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixMF {
    pub shifts0: Vec<i64>,
    pub shifts1: Vec<i64>,
    pub d0: Mat,
    pub d1: Mat,
    pub potential: Poly,
}

impl MatrixMF {
    /// `R -pi_12-> R{1-n} -(x1 - x2)-> R`, a factorization of `w(x1) - w(x2)`.
    pub fn arc(pot: &Potential, x1: usize, x2: usize) -> MatrixMF {
        MatrixMF {
            shifts0: vec![0],
            shifts1: vec![1 - pot.n as i64],
            d0: vec![vec![pot.pi(x1, x2)]],
            d1: vec![vec![&Poly::var(x1) - &Poly::var(x2)]],
            potential: &pot.w(x1) - &pot.w(x2),
        }
    }

    /// The wide edge with outgoing `x1, x2` and incoming `x3, x4`, in the standard block basis.
    pub fn thick(pot: &Potential, x: [usize; 4]) -> MatrixMF {
        let n = pot.n as i64;
        let [x1, x2, x3, x4] = x.map(Poly::var);
        let (u1, u2) = pot.thick_u(x);
        let s = &(&x1 + &x2) - &(&x3 + &x4);
        let t = &(&x1 * &x2) - &(&x3 * &x4);
        MatrixMF {
            shifts0: vec![-1, 3 - 2 * n],
            shifts1: vec![-n, 2 - n],
            d0: vec![vec![u1.clone(), t.clone()], vec![u2.clone(), -&s]],
            d1: vec![vec![s, t], vec![u2, -u1]],
            potential: &(&pot.w(x[0]) + &pot.w(x[1])) - &(&pot.w(x[2]) + &pot.w(x[3])),
        }
    }

    pub fn rank(&self) -> usize {
        self.shifts0.len()
    }

    /// Tensor product with the block signs `[[f0, g1], [-g0, f1]]` and `[[f1, -g1], [g0, f0]]`.
    pub fn tensor(&self, o: &MatrixMF) -> MatrixMF {
        let (ia, ib) = (identity(self.rank()), identity(o.rank()));
        let f = |m: &Mat| kron(m, &ib);
        let g = |m: &Mat| kron(&ia, m);
        let neg = |m: Mat| map(&m, &|p| -p);
        let pair = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect() };
        MatrixMF {
            shifts0: [pair(&self.shifts0, &o.shifts0), pair(&self.shifts1, &o.shifts1)].concat(),
            shifts1: [pair(&self.shifts1, &o.shifts0), pair(&self.shifts0, &o.shifts1)].concat(),
            d0: blocks(&f(&self.d0), &g(&o.d1), &neg(g(&o.d0)), &f(&self.d1)),
            d1: blocks(&f(&self.d1), &neg(g(&o.d1)), &g(&o.d0), &f(&self.d0)),
            potential: &self.potential + &o.potential,
        }
    }

    pub fn rename(&self, v: usize, p: &Poly) -> MatrixMF {
        let s = |m: &Mat| map(m, &|e| e.subst(v, p));
        MatrixMF {
            shifts0: self.shifts0.clone(),
            shifts1: self.shifts1.clone(),
            d0: s(&self.d0),
            d1: s(&self.d1),
            potential: self.potential.subst(v, p),
        }
    }

    /// Both compositions equal `potential * id`.
    pub fn verify(&self) -> Result<()> {
        let want = scalar(self.rank(), &self.potential);
        if mul(&self.d1, &self.d0) != want || mul(&self.d0, &self.d1) != want {
            return Err(Error::Invariant("d1 d0 or d0 d1 differs from the potential".into()));
        }
        Ok(())
    }
}

/// A pair `(g0, g1)` of matrices between factorizations.
#[derive(Clone, Debug, PartialEq)]
pub struct MFMap {
    pub g0: Mat,
    pub g1: Mat,
    pub degree: i64,
}

impl MFMap {
    /// `d~0 g0 = g1 d0` and `d~1 g1 = g0 d1`.
    pub fn is_map(&self, src: &MatrixMF, tgt: &MatrixMF) -> bool {
        mul(&tgt.d0, &self.g0) == mul(&self.g1, &src.d0) && mul(&tgt.d1, &self.g1) == mul(&self.g0, &src.d1)
    }

    /// Filtered degree audit: every entry respects the shifts and the declared degree.
    pub fn respects_degree(&self, src: &MatrixMF, tgt: &MatrixMF) -> bool {
        let ok = |g: &Mat, s: &[i64], t: &[i64]| {
            g.iter().enumerate().all(|(i, row)| {
                row.iter()
                    .enumerate()
                    .all(|(j, p)| p.degree().is_none_or(|d| 2 * d as i64 + t[i] - s[j] <= self.degree))
            })
        };
        ok(&self.g0, &src.shifts0, &tgt.shifts0) && ok(&self.g1, &src.shifts1, &tgt.shifts1)
    }
}

/// Removal of the mark `y` from `N = Q (x) P`, where `P` is the arc from `x` to `y`.
///
/// `N0 = Q0 P0 + Q1 P1` and `N1 = Q1 P0 + Q0 P1` with
/// `d0 = [[f_y, -(x - y)], [pi_xy, g_y]]` and `d1 = [[g_y, x - y], [-pi_xy, f_y]]`;
/// the reduced factorization is `M = Q` with `y` renamed to `x`.
#[derive(Clone, Debug)]
pub struct MarkRemoval {
    pub q: MatrixMF,
    pub n: MatrixMF,
    pub reduced: MatrixMF,
    pub x: usize,
    pub y: usize,
    pub k: MFMap,
}

impl MarkRemoval {
    pub fn new(pot: &Potential, q: &MatrixMF, x: usize, y: usize) -> Result<MarkRemoval> {
        let (xp, yp) = (Poly::var(x), Poly::var(y));
        let w_y = pot.w(y);
        if q.potential.uses_var(x) || !(&q.potential - &w_y).coeffs_in(y).iter().skip(1).all(|c| c.is_zero()) {
            return Err(Error::Validation(
                "the mark must be an outgoing endpoint of Q and x must be fresh".into(),
            ));
        }
        let r = q.rank();
        let xy = &xp - &yp;
        let pi = pot.pi(x, y);
        let neg = |m: &Mat| map(m, &|p| -p);
        let d0 = blocks(&q.d0, &scalar(r, &-&xy), &scalar(r, &pi), &q.d1);
        let d1 = blocks(&q.d1, &scalar(r, &xy), &scalar(r, &-&pi), &q.d0);
        let n_shift = 1 - pot.n as i64;
        let shifted = |s: &[i64]| s.iter().map(|v| v + n_shift).collect::<Vec<_>>();
        let n = MatrixMF {
            shifts0: [q.shifts0.clone(), shifted(&q.shifts1)].concat(),
            shifts1: [q.shifts1.clone(), shifted(&q.shifts0)].concat(),
            d0,
            d1,
            potential: &(&q.potential + &pot.w(x)) - &w_y,
        };
        let reduced = q.rename(y, &xp);
        let dd = |m_x: &Mat, m_y: &Mat| map(&sub(m_x, m_y), &|p| p.exact_div_affine(&xy));
        let k0 = [identity(r), neg(&dd(&reduced.d0, &q.d0))].concat();
        let k1 = [identity(r), dd(&reduced.d1, &q.d1)].concat();
        let k = MFMap {
            g0: k0,
            g1: k1,
            degree: 0,
        };
        Ok(MarkRemoval {
            q: q.clone(),
            n,
            reduced,
            x,
            y,
            k,
        })
    }

    fn rank(&self) -> usize {
        self.q.rank()
    }

    fn p(&self, v: &[Poly]) -> Vector {
        v.iter().map(|e| e.subst(self.y, &Poly::var(self.x))).collect()
    }

    /// `(1 - P_{y -> x}) / (x - y)` entrywise.
    fn delta(&self, v: &[Poly]) -> Vector {
        let xy = &Poly::var(self.x) - &Poly::var(self.y);
        sub_vec(v, &self.p(v)).iter().map(|e| e.exact_div_affine(&xy)).collect()
    }

    /// `L0 = L1 = (P_{y -> x}, 0)`.
    pub fn l(&self, v: &[Poly]) -> Vector {
        self.p(&v[..self.rank()])
    }

    pub fn k0(&self, m: &[Poly]) -> Vector {
        apply(&self.k.g0, m)
    }

    pub fn k1(&self, m: &[Poly]) -> Vector {
        apply(&self.k.g1, m)
    }

    /// `H0 = [[0, 0], [(1 - P)/(x - y), 0]]: N0 -> N1`.
    pub fn h0(&self, v: &[Poly]) -> Vector {
        let r = self.rank();
        [vec![Poly::zero(); r], self.delta(&v[..r])].concat()
    }

    /// `H1 = [[0, 0], [(P - 1)/(x - y), 0]]: N1 -> N0`.
    pub fn h1(&self, v: &[Poly]) -> Vector {
        let r = self.rank();
        [vec![Poly::zero(); r], neg_vec(&self.delta(&v[..r]))].concat()
    }

    /// Test vectors `e_i y^k` of `N`; every operator here is linear over the other variables.
    fn probes(&self, max_k: u32) -> Vec<Vector> {
        let r2 = 2 * self.rank();
        let mut out = vec![];
        for i in 0..r2 {
            for k in 0..=max_k {
                let mut v = vec![Poly::zero(); r2];
                v[i] = Poly::var(self.y).pow(k);
                out.push(v);
            }
        }
        out
    }

    /// Checks every identity of the construction and returns the number of probes used.
    pub fn verify(&self, max_k: u32) -> Result<usize> {
        let fail = |what: &str| Err(Error::Invariant(format!("mark removal: {what}")));
        self.q.verify()?;
        self.n.verify()?;
        self.reduced.verify()?;
        if !self.k.is_map(&self.reduced, &self.n) {
            return fail("K is not a map of factorizations");
        }
        let r = self.rank();
        let mut count = 0;
        for i in 0..r {
            for k in 0..=max_k {
                let mut m = vec![Poly::zero(); r];
                m[i] = Poly::var(self.x).pow(k);
                if self.l(&self.k0(&m)) != m || self.l(&self.k1(&m)) != m {
                    return fail("L K is not the identity");
                }
                count += 1;
            }
        }
        for v in self.probes(max_k) {
            // L is a map of factorizations
            if self.l(&apply(&self.n.d0, &v)) != apply(&self.reduced.d0, &self.l(&v))
                || self.l(&apply(&self.n.d1, &v)) != apply(&self.reduced.d1, &self.l(&v))
            {
                return fail("L does not commute with the differentials");
            }
            let lhs0 = sub_vec(&v, &self.k0(&self.l(&v)));
            let rhs0 = add_vec(&self.h1(&apply(&self.n.d0, &v)), &apply(&self.n.d1, &self.h0(&v)));
            let lhs1 = sub_vec(&v, &self.k1(&self.l(&v)));
            let rhs1 = add_vec(&apply(&self.n.d0, &self.h1(&v)), &self.h0(&apply(&self.n.d1, &v)));
            if lhs0 != rhs0 || lhs1 != rhs1 {
                return fail("id - K L differs from dH + Hd");
            }
            count += 1;
        }
        Ok(count)
    }

    /// `alpha_x = L A K` for a map `A = (a0, a1)` of the `Q` sides, extended by the identity on `P`.
    pub fn transport(&self, tgt: &MarkRemoval, a: &MFMap) -> MFMap {
        let (r, s) = (self.rank(), tgt.rank());
        let z = |i, j| zeros(i, j);
        let a_n0 = blocks(&a.g0, &z(s, r), &z(s, r), &a.g1);
        let a_n1 = blocks(&a.g1, &z(s, r), &z(s, r), &a.g0);
        let col = |k: &Mat, an: &Mat| {
            let img = mul(an, k);
            map(&img[..s].to_vec(), &|p| p.subst(self.y, &Poly::var(self.x)))
        };
        MFMap {
            g0: col(&self.k.g0, &a_n0),
            g1: col(&self.k.g1, &a_n1),
            degree: a.degree,
        }
    }
}

/// A random open graph: arcs and wide edges with some endpoints glued, the mark `y` left free
/// as an outgoing endpoint. Returns the factorization and `(x, y)`.
pub fn random_assembly(pot: &Potential, rng: &mut impl Rng, max_pieces: usize) -> (MatrixMF, usize, usize) {
    let pieces = rng.random_range(1..=max_pieces);
    let mut next = 0usize;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let mut shapes: Vec<(bool, Vec<usize>, Vec<usize>)> = vec![];
    for _ in 0..pieces {
        let thick = rng.random_bool(0.5);
        let w = if thick { 2 } else { 1 };
        let outs: Vec<usize> = (0..w).map(|_| fresh()).collect();
        let ins: Vec<usize> = (0..w).map(|_| fresh()).collect();
        shapes.push((thick, outs, ins));
    }
    let y = shapes[0].1[0];
    let mut free_outs: Vec<usize> = shapes.iter().flat_map(|s| s.1.clone()).filter(|&o| o != y).collect();
    for s in shapes.iter_mut() {
        for i in s.2.iter_mut() {
            if !free_outs.is_empty() && rng.random_bool(0.5) {
                let k = rng.random_range(0..free_outs.len());
                *i = free_outs.swap_remove(k);
            }
        }
    }
    let x = fresh();
    let mut q: Option<MatrixMF> = None;
    for (thick, outs, ins) in &shapes {
        let m = if *thick {
            MatrixMF::thick(pot, [outs[0], outs[1], ins[0], ins[1]])
        } else {
            MatrixMF::arc(pot, outs[0], ins[0])
        };
        q = Some(match q {
            None => m,
            Some(acc) => acc.tensor(&m),
        });
    }
    (q.expect("at least one piece"), x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cubic() -> Potential {
        Potential::new(vec![q(1), q(-1)]).unwrap()
    }

    #[test]
    fn arc_and_thick_are_factorizations() {
        let pot = Potential::new(vec![q(0), q(1), q(3)]).unwrap();
        MatrixMF::arc(&pot, 0, 1).verify().unwrap();
        let t = MatrixMF::thick(&pot, [0, 1, 2, 3]);
        t.verify().unwrap();
        assert_eq!(
            t.d0[0][1],
            &(&Poly::var(0) * &Poly::var(1)) - &(&Poly::var(2) * &Poly::var(3))
        );
    }

    #[test]
    fn arc_matches_divided_difference() {
        let a = MatrixMF::arc(&cubic(), 0, 1);
        // w = x^3 - 3x
        let (x1, x2) = (Poly::var(0), Poly::var(1));
        let want = &(&(&(&x1 * &x1) + &(&x1 * &x2)) + &(&x2 * &x2)) - &Poly::int(3);
        assert_eq!(a.d0[0][0], want);
    }

    #[test]
    fn thick_is_a_signed_tensor_of_two_rows() {
        let pot = cubic();
        let t = MatrixMF::thick(&pot, [0, 1, 2, 3]);
        let (u1, u2) = pot.thick_u([0, 1, 2, 3]);
        let row = |a: Poly, b: Poly, s0: i64, s1: i64| MatrixMF {
            shifts0: vec![s0],
            shifts1: vec![s1],
            d0: vec![vec![a]],
            d1: vec![vec![b]],
            potential: Poly::zero(),
        };
        let [x1, x2, x3, x4] = [0, 1, 2, 3].map(Poly::var);
        let r1 = row(u1, &(&x1 + &x2) - &(&x3 + &x4), -1, -2);
        let r2 = row(u2, &(&x1 * &x2) - &(&x3 * &x4), 0, 1);
        let k = r1.tensor(&r2);
        let sign = vec![vec![Poly::one(), Poly::zero()], vec![Poly::zero(), -Poly::one()]];
        assert_eq!(mul(&sign, &k.d0), t.d0);
        assert_eq!(mul(&k.d1, &sign), t.d1);
        assert_eq!(k.shifts0, t.shifts0);
        assert_eq!(k.shifts1, t.shifts1);
    }

    #[test]
    fn tensor_adds_potentials() {
        let pot = cubic();
        let m = MatrixMF::arc(&pot, 0, 1).tensor(&MatrixMF::arc(&pot, 2, 3));
        m.verify().unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn two_arcs_reduce_to_one() {
        let pot = cubic();
        let q = MatrixMF::arc(&pot, 1, 0);
        let mr = MarkRemoval::new(&pot, &q, 2, 1).unwrap();
        assert_eq!(mr.reduced, MatrixMF::arc(&pot, 2, 0));
        assert!(mr.verify(4).unwrap() > 0);
    }

    #[test]
    fn closed_circle_gives_dw_and_zero() {
        let pot = cubic();
        let mr = MarkRemoval::new(&pot, &MatrixMF::arc(&pot, 1, 0), 2, 1).unwrap();
        let c = mr.reduced.rename(0, &Poly::var(2));
        assert_eq!(c.d0[0][0], pot.dw(2));
        assert!(c.d1[0][0].is_zero());
    }

    #[test]
    fn random_assemblies_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for roots in [vec![q(1), q(-1)], vec![q(0), q(1), q(3)]] {
            let pot = Potential::new(roots).unwrap();
            for _ in 0..8 {
                let (q, x, y) = random_assembly(&pot, &mut rng, 2);
                let mr = MarkRemoval::new(&pot, &q, x, y).unwrap();
                mr.verify(3).unwrap();
                assert!(mr.k.respects_degree(&mr.reduced, &mr.n));
            }
        }
    }

    #[test]
    fn transport_of_identity_is_identity() {
        let pot = cubic();
        let q = MatrixMF::thick(&pot, [1, 2, 3, 4]);
        let mr = MarkRemoval::new(&pot, &q, 0, 1).unwrap();
        let id = MFMap {
            g0: identity(2),
            g1: identity(2),
            degree: 0,
        };
        let t = mr.transport(&mr, &id);
        assert_eq!((t.g0, t.g1), (identity(2), identity(2)));
    }

    #[test]
    fn rejects_an_incoming_mark() {
        let pot = cubic();
        assert!(MarkRemoval::new(&pot, &MatrixMF::arc(&pot, 0, 1), 2, 1).is_err());
    }
}
