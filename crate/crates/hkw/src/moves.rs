//! Elementary cobordisms: the Morse moves and Reidemeister I/II, with generator tracking.
//!
//! Morse maps are evaluated on the homology engine (the saddle map transported through the
//! reductions of closed-up saddle graphs). Reidemeister maps are checked on their explicit local
//! matrices, and move sequences track root colorings of components through the resulting scalars.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{Graph, Site};
use crate::homology::{state_cycle, VertexHomology};
use crate::koszul::{is_local_chain_map, Chain, Koszul, SiteMap};
use crate::linalg::{Echelon, SVec};
use crate::local::{Locals, CROSSED, ORIENTED, SADDLE0, SADDLE1, THICK};
use crate::mf::{self, apply, identity, map, mul, sub, MFMap, Mat, MatrixMF};
use crate::poly::{Mono, Poly, Q};
use crate::potential::{Potential, AUX_BASE};
use crate::reduce::Transport;

fn x(i: usize) -> Poly {
    Poly::var(i)
}

fn level_of(h: &VertexHomology, v: &SVec) -> Option<i64> {
    v.0.keys().map(|i| h.classes[*i].level).max()
}

/// `c` with `a = c b`, if the two coordinate vectors are proportional.
fn ratio(a: &SVec, b: &SVec) -> Option<Q> {
    let (&k, bk) = b.0.iter().next()?;
    let c = a.get(k) / bk;
    (b.scale(&c) == *a).then_some(c)
}

fn circles(k: usize) -> Graph {
    Graph {
        nvars: k,
        sites: vec![],
        circles: (0..k).collect(),
    }
}

/// The two closures of a saddle site: merge (`x4 = x1`, `x3 = x2`) and split (`x2 = x1`, `x4 = x3`).
fn saddle_graphs(merge: bool) -> (Graph, Graph) {
    let vars = if merge { [0, 1, 1, 0] } else { [0, 0, 1, 1] };
    let g = |c| Graph {
        nvars: 2,
        sites: vec![Site { vars, config: c }],
        circles: vec![],
    };
    (g(SADDLE0), g(SADDLE1))
}

/// Results of the Morse-move audit for one potential.
#[derive(Clone, Debug)]
pub struct MorseAudit {
    /// `(a, b) -> c` with `q_a q_b -> c q_a` under the merge, `c = 0` when `a != b`.
    pub merge: BTreeMap<(usize, usize), Q>,
    /// `a -> c` with `q_a -> c q_a q_a` under the split.
    pub split: BTreeMap<usize, Q>,
    /// `b -> eps(q_b)`.
    pub counit: BTreeMap<usize, Q>,
    pub unit_degree: i64,
    pub counit_degree: i64,
    pub saddle_degree: i64,
}

/// `1 (x) i: H(circle) -> H(circle, circle)`, appending the new circle's factor.
fn unit_chain(z: &Chain, slot: usize) -> Chain {
    Chain(z.0.iter().map(|(m, p)| (m | 1 << slot, p.clone())).collect())
}

/// `1 (x) eps`: contract the last circle factor, reading the coefficient of `x^{n-1}`.
fn counit_chain(pot: &Potential, z: &Chain, slot: usize, var: usize) -> Chain {
    let mut out = Chain::zero();
    for (m, p) in z.terms() {
        if m >> slot & 1 == 1 {
            out.add(m & !(1 << slot), &pot.trace(p, var));
        }
    }
    out
}

fn site_saddle(loc: &Locals, g: &Graph) -> SiteMap {
    let vars = g.sites[0].vars;
    loc.saddle().rename(&|v| vars[v])
}

fn saddle_image(loc: &Locals, merge: bool, phi: &[usize]) -> Result<(VertexHomology, SVec)> {
    let (g0, g1) = saddle_graphs(merge);
    let (red0, z) = state_cycle(&g0, loc, phi)?;
    let mut h1 = VertexHomology::compute(&g1, loc)?;
    let t = Transport::new(&red0, &h1.red, 0, &site_saddle(loc, &g0))?;
    let img = h1.express(&t.apply(&z))?;
    Ok((h1, img))
}

/// Evaluate the unit, counit and both saddles on canonical generators.
pub fn morse_audit(loc: &Locals) -> Result<MorseAudit> {
    let pot = &loc.pot;
    let n = pot.n;
    let one = circles(1);
    let two = circles(2);
    let mut h1 = VertexHomology::compute(&one, loc)?;
    let mut h2 = VertexHomology::compute(&two, loc)?;

    // unit: g -> sum_b g (x) q_b
    let mut unit_degree = i64::MIN;
    for a in 0..n {
        let (_, z) = state_cycle(&one, loc, &[a])?;
        let img = h2.express(&unit_chain(&z, 1))?;
        let mut want = SVec::new();
        for b in 0..n {
            let (_, zb) = state_cycle(&two, loc, &[a, b])?;
            want.axpy(&Q::one(), &h2.express(&zb)?);
        }
        if img != want {
            return Err(Error::Invariant("unit map is not the sum of generators".into()));
        }
    }
    for i in 0..h1.dim() {
        let z = h1.classes[i].cycle.clone();
        let img = h2.express(&unit_chain(&z, 1))?;
        let d = level_of(&h2, &img).expect("unit is injective") - h1.classes[i].level;
        unit_degree = unit_degree.max(d);
    }

    // counit: g (x) q_b -> eps(q_b) g
    let mut counit = BTreeMap::new();
    for a in 0..n {
        let (_, za) = state_cycle(&one, loc, &[a])?;
        let ga = h1.express(&za)?;
        for b in 0..n {
            let (_, z) = state_cycle(&two, loc, &[a, b])?;
            let img = h1.express(&counit_chain(pot, &z, 1, 1))?;
            let c = ratio(&img, &ga).ok_or_else(|| Error::Invariant("counit image is not a multiple".into()))?;
            if c != pot.trace_of_q(&pot.roots[b]) {
                return Err(Error::Invariant(format!("counit of q_{b} is {c}")));
            }
            counit.insert(b, c);
        }
    }
    let mut counit_degree = i64::MIN;
    for i in 0..h2.dim() {
        let z = h2.classes[i].cycle.clone();
        let img = h1.express(&counit_chain(pot, &z, 1, 1))?;
        if let Some(l) = level_of(&h1, &img) {
            counit_degree = counit_degree.max(l - h2.classes[i].level);
        }
    }

    // merge: q_a (x) q_b -> c q_a
    let mut merge = BTreeMap::new();
    let mut saddle_degree = i64::MIN;
    for a in 0..n {
        for b in 0..n {
            let (mut h, img) = saddle_image(loc, true, &[a, b])?;
            let (_, target) = state_cycle(&h.graph.clone(), loc, &[a, a])?;
            let ga = h.express(&target)?;
            let c = ratio(&img, &ga).ok_or_else(|| Error::Invariant("merge image is not a multiple".into()))?;
            merge.insert((a, b), c);
        }
    }
    // split: q_a -> c q_a q_a
    let mut split = BTreeMap::new();
    for a in 0..n {
        let (mut h, img) = saddle_image(loc, false, &[a, a])?;
        let (_, target) = state_cycle(&h.graph.clone(), loc, &[a, a])?;
        let ga = h.express(&target)?;
        let c = ratio(&img, &ga).ok_or_else(|| Error::Invariant("split image is not a multiple".into()))?;
        split.insert(a, c);
    }
    for merge_side in [true, false] {
        let (g0, _) = saddle_graphs(merge_side);
        let src = VertexHomology::compute(&g0, loc)?;
        for cls in &src.classes {
            let (_, g1) = saddle_graphs(merge_side);
            let mut tgt = VertexHomology::compute(&g1, loc)?;
            let t = Transport::new(&src.red, &tgt.red, 0, &site_saddle(loc, &g0))?;
            let img = tgt.express(&t.apply(&cls.cycle))?;
            if let Some(l) = level_of(&tgt, &img) {
                saddle_degree = saddle_degree.max(l - cls.level);
            }
        }
    }
    Ok(MorseAudit {
        merge,
        split,
        counit,
        unit_degree,
        counit_degree,
        saddle_degree,
    })
}

/// `sum_b q_b = 1` in `Q[x]`.
pub fn unit_is_sum_of_idempotents(pot: &Potential) -> bool {
    let mut s = Poly::zero();
    for r in &pot.roots {
        s += &pot.q_beta(r, 0);
    }
    s == Poly::one()
}

/// The expected split scalar `prod_{b != a} (a - b)`.
pub fn split_scalar(pot: &Potential, a: usize) -> Q {
    let ra = &pot.roots[a];
    pot.roots
        .iter()
        .filter(|b| *b != ra)
        .fold(Q::one(), |acc, b| acc * (ra - b))
}

/// Is the local map `d` between two site complexes of the form `d_tgt h + h d_src` for some
/// odd `h` with entries of degree at most `max_deg`?
pub fn is_null_homotopic(src: &Koszul, tgt: &Koszul, d: &SiteMap, max_deg: u32) -> bool {
    let mut index = BTreeMap::new();
    let mut flatten = |m: &SiteMap| {
        let mut v = SVec::new();
        for t in 0..4 {
            for s in 0..4 {
                for (mono, c) in m.m[t][s].terms() {
                    let k = index.len();
                    let i = *index.entry((t, s, *mono)).or_insert(k);
                    v.add_at(i, c);
                }
            }
        }
        v
    };
    let mut ech: Echelon<()> = Echelon::new();
    let parity = |m: usize| (m as u32).count_ones() % 2;
    for t in 0..4 {
        for s in (0..4).filter(|&s| parity(s) != parity(t)) {
            for deg in 0..=max_deg {
                for mono in Mono::all_of_degree(&[0, 1, 2, 3], deg) {
                    let mut h = SiteMap::zero(true, 0);
                    h.set(t, s, Poly::term(Q::one(), mono));
                    let mut img = SiteMap::zero(d.odd, d.degree);
                    for src_mask in 0..4u64 {
                        let e = Chain::mono(src_mask, Poly::one());
                        let mut c = tgt.d(&h.apply(0, &e));
                        c.add_chain(&h.apply(0, &src.d(&e)));
                        for (tm, p) in c.terms() {
                            img.m[*tm as usize][src_mask as usize] = p.clone();
                        }
                    }
                    let _ = ech.insert(&flatten(&img), ());
                }
            }
        }
    }
    ech.contains(&flatten(d))
}

/// Sign lemma for the eta maps: conjugating `chi` by `x1 <-> x2` instead of `x3 <-> x4` gives
/// the same map up to sign and homotopy, once the two arc factors are put back in order.
/// Returns the signs `(s0, s1)` with `eta_i ~ s_i alt_i`.
pub fn eta_sign_lemma(loc: &Locals) -> Result<(Q, Q)> {
    let swap12 = |v: usize| match v {
        0 => 1,
        1 => 0,
        v => v,
    };
    // sigma: C(crossed) -> C(crossed, factors swapped): e_A <-> e_B, e_AB -> -e_AB
    let mut sigma = SiteMap::zero(false, 0);
    sigma.set(0, 0, Poly::one());
    sigma.set(2, 1, Poly::one());
    sigma.set(1, 2, Poly::one());
    sigma.set(3, 3, -Poly::one());
    let crossed = loc.complex(CROSSED);
    let thick = loc.complex(THICK);
    let swapped = {
        let ([a, b], s) = loc.factors(CROSSED);
        crate::koszul::local_complex(loc.n, b, a, s)
    };
    if !is_local_chain_map(&crossed, &swapped, &sigma) {
        return Err(Error::Invariant("factor swap is not a chain isomorphism".into()));
    }
    let alt0 = loc.chi0().rename(&swap12).compose(&sigma);
    let alt1 = sigma.compose(&loc.chi1().rename(&swap12));
    if !is_local_chain_map(&crossed, &thick, &alt0) || !is_local_chain_map(&thick, &crossed, &alt1) {
        return Err(Error::Invariant("swapped eta is not a chain map".into()));
    }
    let deg = loc.n as u32;
    let sign_of = |e: &SiteMap, alt: &SiteMap, src: &Koszul, tgt: &Koszul| {
        [Q::one(), -Q::one()].into_iter().find(|sign| {
            let mut m = alt.clone();
            for t in 0..4 {
                for k in 0..4 {
                    m.m[t][k] = &e.m[t][k].scale(sign) - &alt.m[t][k];
                }
            }
            is_null_homotopic(src, tgt, &m, deg)
        })
    };
    match (
        sign_of(&loc.eta0(), &alt0, &crossed, &thick),
        sign_of(&loc.eta1(), &alt1, &thick, &crossed),
    ) {
        (Some(s0), Some(s1)) => Ok((s0, s1)),
        _ => Err(Error::Invariant(
            "the two eta conventions differ by more than a sign".into(),
        )),
    }
}

/// Reidemeister I.1 in variables `x1, x2, x3 = 0, 1, 2`: the straight strand `M`, the kinked
/// oriented resolution `N` and the kinked thick resolution `P`, with the maps `chi0: N -> P`,
/// `F: M -> N` and the null-homotopy `H` of `chi0 F`.
#[derive(Clone, Debug)]
pub struct R11 {
    pub pot: Potential,
    pub m: MatrixMF,
    pub n: MatrixMF,
    pub p: MatrixMF,
    pub chi0: MFMap,
    pub f: MFMap,
    pub h0: Mat,
    pub h1: Mat,
    pub alpha: Poly,
}

const X1: usize = 0;
const X2: usize = 1;
const X3: usize = 2;

impl R11 {
    pub fn new(pot: &Potential) -> Result<R11> {
        let n = pot.n as i64;
        let (x1, x2, x3) = (x(X1), x(X2), x(X3));
        let d23 = &x2 - &x3;
        let pi23 = pot.pi(X2, X3);
        let dw1 = pot.dw(X1);
        let m = MatrixMF::arc(pot, X2, X3);
        let nn = MatrixMF {
            shifts0: vec![2 - 2 * n, 2 - 2 * n],
            shifts1: vec![1 - n, 3 - 3 * n],
            d0: vec![vec![Poly::zero(), d23.clone()], vec![-&pi23, dw1.clone()]],
            d1: vec![vec![dw1, -&d23], vec![pi23.clone(), Poly::zero()]],
            potential: &pot.w(X2) - &pot.w(X3),
        };
        let (u1, u2) = pot.thick_u([X1, X2, X1, X3]);
        let t = &x1 * &d23;
        let p = MatrixMF {
            shifts0: vec![-2 * n, 2 - 2 * n],
            shifts1: vec![-1 - n, 3 - 3 * n],
            d0: vec![vec![d23.clone(), t.clone()], vec![-&u2, u1.clone()]],
            d1: vec![vec![u1, -&t], vec![u2.clone(), d23.clone()]],
            potential: &pot.w(X2) - &pot.w(X3),
        };
        // a of chi0 at the site (x1, x2 | x1', x3), with the loop endpoint x1' glued to x1 afterwards
        let aux = AUX_BASE - 1;
        let a = pot.chi_a([X1, X2, aux, X3]).subst(aux, &x1);
        let g0 = vec![vec![x1.clone(), -&x2], vec![-Poly::one(), Poly::one()]];
        let mut chi0 = None;
        for s in [Poly::one(), -Poly::one()] {
            let cand = MFMap {
                g0: g0.clone(),
                g1: vec![
                    vec![&x1 - &x2, Poly::zero()],
                    vec![&(&s * &a) * &-Poly::one(), Poly::one()],
                ],
                degree: 1 - n,
            };
            if cand.is_map(&nn, &p) {
                chi0 = Some(cand);
            }
        }
        let chi0 = chi0.ok_or_else(|| Error::Invariant("no sign of a makes chi0 a map".into()))?;
        let alpha = pot.r1_alpha(X1, X2, X3);
        let f = MFMap {
            g0: vec![vec![alpha.clone()], vec![Poly::zero()]],
            g1: vec![vec![Poly::zero()], vec![-&alpha]],
            degree: 0,
        };
        let h0 = vec![vec![-Poly::one()], vec![(&u2 - &alpha).exact_div_affine(&d23)]];
        let h1 = vec![vec![Poly::one()], vec![Poly::zero()]];
        Ok(R11 {
            pot: pot.clone(),
            m,
            n: nn,
            p,
            chi0,
            f,
            h0,
            h1,
            alpha,
        })
    }

    /// Every identity of the construction, as exact matrix equalities.
    pub fn verify(&self) -> Result<()> {
        let fail = |w: &str| Err(Error::Invariant(format!("Reidemeister I.1: {w}")));
        self.m.verify()?;
        self.n.verify()?;
        self.p.verify()?;
        if !self.f.is_map(&self.m, &self.n) {
            return fail("F is not a map of factorizations");
        }
        if !self.f.respects_degree(&self.m, &self.n) {
            return fail("F is not of filtered degree 0");
        }
        let cf0 = mul(&self.chi0.g0, &self.f.g0);
        let cf1 = mul(&self.chi0.g1, &self.f.g1);
        let x1 = x(X1);
        if cf0 != vec![vec![&x1 * &self.alpha], vec![-&self.alpha]]
            || cf1 != vec![vec![Poly::zero()], vec![-&self.alpha]]
        {
            return fail("chi0 F differs from (x1 alpha, -alpha; 0, -alpha)");
        }
        let rhs0 = mf::add(&mul(&self.h1, &self.m.d0), &mul(&self.p.d1, &self.h0));
        let rhs1 = mf::add(&mul(&self.h0, &self.m.d1), &mul(&self.p.d0, &self.h1));
        if cf0 != rhs0 || cf1 != rhs1 {
            return fail("H is not a null-homotopy of chi0 F");
        }
        self.verify_g(self.pot.n as u32 + 2)
    }

    /// `G = ((beta, 0), (1_{1->2,3}, -beta))` commutes with the differentials on every probe
    /// `e_i x1^k`; all entries are linear over `Q[x2, x3]`.
    fn verify_g(&self, max_k: u32) -> Result<()> {
        for i in 0..2 {
            for k in 0..=max_k {
                let mut v = vec![Poly::zero(); 2];
                v[i] = x(X1).pow(k);
                let l0 = apply(&self.m.d0, &self.g0(&v));
                let r0 = self.g1(&apply(&self.n.d0, &v));
                let l1 = apply(&self.m.d1, &self.g1(&v));
                let r1 = self.g0(&apply(&self.n.d1, &v));
                if l0 != r0 || l1 != r1 {
                    return Err(Error::Invariant(
                        "Reidemeister I.1: G is not a map of factorizations".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn beta(&self, f: &Poly) -> Poly {
        self.pot.r1_beta(f, X1, X2, X3)
    }

    pub fn g0(&self, v: &[Poly]) -> Vec<Poly> {
        vec![self.beta(&v[0])]
    }

    pub fn g1(&self, v: &[Poly]) -> Vec<Poly> {
        vec![&self.pot.r1_one(&v[0], X1, X2, X3) - &self.beta(&v[1])]
    }

    /// `alpha` with `x3 -> x2`, which equals `-(dw(x1) - dw(x2))/(x1 - x2)`.
    pub fn closed_alpha(&self) -> Poly {
        self.alpha.subst(X3, &x(X2))
    }

    fn reduce(&self, p: &Poly) -> Poly {
        self.pot.reduce_mod_dw_all(p, &[X1, X2])
    }

    /// `F~` on `dw(x2)/(x2 - psi)`, compared with `-(dw(x1)/(x1 - psi)) (dw(x2)/(x2 - psi))`;
    /// returns the scalar `c` with `F~(q_psi(x2)) = c q_psi(x1) q_psi(x2)`.
    pub fn birth_scalar(&self, psi: usize) -> Result<Q> {
        let pot = &self.pot;
        let r = &pot.roots[psi];
        let lin = |v: usize| &x(v) - &Poly::constant(r.clone());
        let g2 = pot.dw(X2).exact_div_affine(&lin(X2));
        let g1 = pot.dw(X1).exact_div_affine(&lin(X1));
        let image = self.reduce(&(&self.closed_alpha() * &g2));
        if image != self.reduce(&-&(&g1 * &g2)) {
            return Err(Error::Invariant("F~ does not send the generator to -g1 g2".into()));
        }
        let q = |v| pot.q_beta(r, v);
        let img = self.reduce(&(&self.closed_alpha() * &q(X2)));
        scalar_multiple(&img, &self.reduce(&(&q(X1) * &q(X2))))
    }

    /// `G~` on `q_psi(x1) q_psi(x2)`: returns `c` with image `c q_psi(x2)`.
    pub fn death_scalar(&self, psi: usize) -> Result<Q> {
        let pot = &self.pot;
        let r = &pot.roots[psi];
        let g = &pot.q_beta(r, X1) * &pot.q_beta(r, X2);
        let img = pot.reduce_mod_dw(&self.beta(&g).subst(X3, &x(X2)), X2);
        scalar_multiple(&img, &pot.q_beta(r, X2))
    }
}

fn scalar_multiple(a: &Poly, b: &Poly) -> Result<Q> {
    let (m, c) = b
        .terms()
        .next()
        .ok_or_else(|| Error::Invariant("zero reference".into()))?;
    let k = a.coeff(m) / c;
    if *a != b.scale(&k) || k.is_zero() {
        return Err(Error::Invariant(
            "image is not a nonzero multiple of the generator".into(),
        ));
    }
    Ok(k)
}

/// The Reidemeister II.1 composite from the leftmost singly thick factorization to the target of
/// the upward `phi`, in variables `x1..x6 = 0..5`: `(b0, b1)` after the projection `Pi`.
pub fn r21_b_matrices(pot: &Potential) -> Result<(Mat, Mat)> {
    let [x1, x2, x3, x4, x5, x6] = [0, 1, 2, 3, 4, 5];
    let v = |i: usize| x(i);
    // singly thick box with (o1, o2) on one side and (x3, x4) on the other
    let boxed = |o1: usize, o2: usize| -> (Mat, Mat) {
        let (u1, u2) = pot.thick_u([o1, o2, x3, x4]);
        let s = &(&v(o1) + &v(o2)) - &(&v(x3) + &v(x4));
        let t = &(&v(o1) * &v(o2)) - &(&v(x3) * &v(x4));
        (
            vec![vec![u1.clone(), -&t], vec![u2.clone(), s.clone()]],
            vec![vec![s, t], vec![-&u2, u1]],
        )
    };
    let dd = |a: &Mat, b: &Mat, i: usize, j: usize| map(&sub(a, b), &|p| p.exact_div_affine(&(&v(i) - &v(j))));
    let (f2, g2) = boxed(x1, x2);
    let (f6, g6) = boxed(x1, x6);
    let (_, g5) = boxed(x5, x6);
    let f26 = dd(&f2, &f6, x2, x6);
    let g15 = dd(&g6, &g5, x1, x5);
    let g26 = dd(&g2, &g6, x2, x6);
    let a1 = pot.chi_a([x1, x2, x5, x6]);
    let (u1, u2) = pot.thick_u([x1, x2, x5, x6]);
    let alt = -(&(&u1 + &(&v(x2) * &u2)) - &pot.pi(x1, x5)).exact_div_affine(&(&v(x2) - &v(x6)));
    if alt != a1 {
        return Err(Error::Invariant("the two expressions for a1 disagree".into()));
    }
    let z = Poly::zero;
    let e21: Mat = vec![vec![z(), z()], vec![Poly::one(), z()]];
    let b0 = sub(
        &vec![vec![&v(x5) - &v(x2), z()], vec![-&a1, z()]],
        &mul(&e21, &mul(&g15, &f26)),
    );
    let b1 = mf::add(
        &mul(&vec![vec![v(x5), z()], vec![-Poly::one(), z()]], &g15),
        &mul(&vec![vec![-v(x2), z()], vec![Poly::one(), z()]], &g26),
    );
    let pi = |p: &Poly| -> Poly {
        // Q[x1..x6]/(x5 + x6 - x3 - x4, x5 x6 - x3 x4) = Q[x1..x4] 1 + Q[x1..x4] x5, keep the x5 part
        let p = p.subst(x6, &(&(&v(x3) + &v(x4)) - &v(x5)));
        let mut cs = p.coeffs_in(x5);
        let (e1, e0) = (&v(x3) + &v(x4), -&(&v(x3) * &v(x4)));
        while cs.len() > 2 {
            let top = cs.pop().expect("nonempty");
            let d = cs.len();
            cs[d - 1] += &(&top * &e1);
            cs[d - 2] += &(&top * &e0);
        }
        cs.get(1).cloned().unwrap_or_else(Poly::zero)
    };
    Ok((map(&b0, &pi), map(&b1, &pi)))
}

pub fn r21_b_is_identity(pot: &Potential) -> Result<bool> {
    let (b0, b1) = r21_b_matrices(pot)?;
    Ok(b0 == identity(2) && b1 == identity(2))
}

/// `chi1 chi0` on the two circles through a Reidemeister II.1 site colored `(a1, a2)`:
/// returns `c` with image `c` times the generator; `c = +-(a2 - a1)` when the roots differ.
pub fn r21_generator_scalar(loc: &Locals, a1: usize, a2: usize) -> Result<Q> {
    let vars = [0, 1, 0, 1];
    let g = |c| Graph {
        nvars: 2,
        sites: vec![Site { vars, config: c }],
        circles: vec![],
    };
    let (go, gt) = (g(ORIENTED), g(THICK));
    let (red, z) = state_cycle(&go, loc, &[a1, a2])?;
    let mut ho = VertexHomology::compute(&go, loc)?;
    let ht = VertexHomology::compute(&gt, loc)?;
    let rn = |m: SiteMap| m.rename(&|v| vars[v]);
    let up = Transport::new(&red, &ht.red, 0, &rn(loc.chi0()))?.apply(&z);
    let back = Transport::new(&ht.red, &ho.red, 0, &rn(loc.chi1()))?.apply(&up);
    let (img, gen) = (ho.express(&back)?, ho.express(&z)?);
    if img.is_zero() {
        return Ok(Q::zero());
    }
    ratio(&img, &gen).ok_or_else(|| Error::Invariant("chi1 chi0 image is not a multiple".into()))
}

/// One elementary cobordism acting on root colorings of link components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    /// Birth of a new component.
    Handle0,
    /// Merge two components into the first.
    Merge(usize, usize),
    /// Split a component; the new one is appended.
    Split(usize),
    /// Death of a component.
    Handle2(usize),
    /// Kink birth on a component (`inverse` for the kink death).
    R11 {
        comp: usize,
        inverse: bool,
    },
    R12 {
        comp: usize,
    },
    /// Two strands of the listed components pushed over each other.
    R21 {
        a: usize,
        b: usize,
    },
    R22 {
        a: usize,
        b: usize,
    },
}

impl Move {
    pub fn degree(&self, n: usize) -> i64 {
        let n = n as i64;
        match self {
            Move::Handle0 | Move::Handle2(_) => 1 - n,
            Move::Merge(..) | Move::Split(_) => n - 1,
            _ => 0,
        }
    }
}

impl FromStr for Move {
    type Err = Error;

    fn from_str(s: &str) -> Result<Move> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let bad = || Error::Validation(format!("bad move line {s:?}"));
        let num = |i: usize| -> Result<usize> { parts.get(i).ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let kind = *parts.first().ok_or_else(bad)?;
        let (m, arity) = match kind {
            "handle0" => (Move::Handle0, 1),
            "handle1" => match parts.get(1).copied() {
                Some("merge") => (Move::Merge(num(2)?, num(3)?), 4),
                Some("split") => (Move::Split(num(2)?), 3),
                _ => return Err(bad()),
            },
            "handle2" => (Move::Handle2(num(1)?), 2),
            "R1.1" => (
                Move::R11 {
                    comp: num(1)?,
                    inverse: false,
                },
                2,
            ),
            "R1.1^-1" => (
                Move::R11 {
                    comp: num(1)?,
                    inverse: true,
                },
                2,
            ),
            "R1.2" => (Move::R12 { comp: num(1)? }, 2),
            "R2.1" => (Move::R21 { a: num(1)?, b: num(2)? }, 3),
            "R2.2" => (Move::R22 { a: num(1)?, b: num(2)? }, 3),
            k if k.starts_with("R3") => {
                return Err(Error::Validation(
                    "Reidemeister III has no chain map here; rewrite the sequence".into(),
                ))
            }
            _ => return Err(bad()),
        };
        if parts.len() != arity {
            return Err(bad());
        }
        Ok(m)
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Handle0 => write!(f, "handle0"),
            Move::Merge(a, b) => write!(f, "handle1 merge {a} {b}"),
            Move::Split(a) => write!(f, "handle1 split {a}"),
            Move::Handle2(a) => write!(f, "handle2 {a}"),
            Move::R11 { comp, inverse: false } => write!(f, "R1.1 {comp}"),
            Move::R11 { comp, inverse: true } => write!(f, "R1.1^-1 {comp}"),
            Move::R12 { comp } => write!(f, "R1.2 {comp}"),
            Move::R21 { a, b } => write!(f, "R2.1 {a} {b}"),
            Move::R22 { a, b } => write!(f, "R2.2 {a} {b}"),
        }
    }
}

/// A move sequence: `components k` on the first line, then one move per line.
/// Blank lines and `#` comments are ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveSequence {
    pub components: usize,
    pub moves: Vec<Move>,
}

impl FromStr for MoveSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<MoveSequence> {
        let mut components = None;
        let mut moves = vec![];
        for line in s
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
        {
            if let Some(k) = line.strip_prefix("components") {
                components = Some(
                    k.trim()
                        .parse()
                        .map_err(|_| Error::Validation(format!("bad line {line:?}")))?,
                );
            } else {
                moves.push(line.parse()?);
            }
        }
        Ok(MoveSequence {
            components: components.unwrap_or(0),
            moves,
        })
    }
}

/// Linear combination of colorings, one root index per component.
pub type Colored = BTreeMap<Vec<usize>, Q>;

/// Scalars of the elementary maps on generators, computed once per potential.
#[derive(Clone, Debug)]
pub struct MoveScalars {
    pub pot: Potential,
    pub morse: MorseAudit,
    pub birth: Vec<Q>,
    pub death: Vec<Q>,
    /// `chi1 chi0` scalar for distinct roots.
    pub r21: BTreeMap<(usize, usize), Q>,
}

impl MoveScalars {
    pub fn new(loc: &Locals) -> Result<MoveScalars> {
        let n = loc.n;
        let r11 = R11::new(&loc.pot)?;
        r11.verify()?;
        let mut r21 = BTreeMap::new();
        for a in 0..n {
            for b in (0..n).filter(|&b| b != a) {
                r21.insert((a, b), r21_generator_scalar(loc, a, b)?);
            }
        }
        Ok(MoveScalars {
            pot: loc.pot.clone(),
            morse: morse_audit(loc)?,
            birth: (0..n).map(|p| r11.birth_scalar(p)).collect::<Result<_>>()?,
            death: (0..n).map(|p| r11.death_scalar(p)).collect::<Result<_>>()?,
            r21,
        })
    }

    fn r21_scalar(&self, a: usize, b: usize) -> Q {
        if a == b {
            Q::one()
        } else {
            self.r21[&(a, b)].clone()
        }
    }

    /// Image of one colored generator under a move.
    fn apply_one(&self, m: &Move, psi: &[usize], c: &Q, out: &mut Colored) -> Result<()> {
        let n = self.pot.n;
        let l = psi.len();
        let check = |i: usize| {
            if i < l {
                Ok(())
            } else {
                Err(Error::Validation(format!("component {i} out of range (have {l})")))
            }
        };
        let mut push = |p: Vec<usize>, k: Q| {
            if !k.is_zero() {
                let e = out.entry(p).or_insert_with(Q::zero);
                *e += k;
            }
        };
        match *m {
            Move::Handle0 => {
                for b in 0..n {
                    push([psi.to_vec(), vec![b]].concat(), c.clone());
                }
            }
            Move::Handle2(i) => {
                check(i)?;
                let mut p = psi.to_vec();
                let b = p.remove(i);
                push(p, c * &self.morse.counit[&b]);
            }
            Move::Merge(i, j) => {
                check(i)?;
                check(j)?;
                if i == j {
                    return Err(Error::Validation("merge needs two components".into()));
                }
                let k = &self.morse.merge[&(psi[i], psi[j])];
                let mut p = psi.to_vec();
                p.remove(j);
                push(p, c * k);
            }
            Move::Split(i) => {
                check(i)?;
                push([psi.to_vec(), vec![psi[i]]].concat(), c * &self.morse.split[&psi[i]]);
            }
            Move::R11 { comp, inverse } => {
                check(comp)?;
                let k = if inverse {
                    &self.death[psi[comp]]
                } else {
                    &self.birth[psi[comp]]
                };
                push(psi.to_vec(), c * k);
            }
            Move::R12 { comp } => {
                // 0-handle, kink on the new circle, merge it into the strand
                check(comp)?;
                let a = psi[comp];
                push(psi.to_vec(), c * &self.birth[a] * &self.morse.merge[&(a, a)]);
            }
            Move::R21 { a, b } => {
                check(a)?;
                check(b)?;
                push(psi.to_vec(), c * self.r21_scalar(psi[a], psi[b]));
            }
            Move::R22 { a, b } => {
                // 0-handle, R2.1 of the new circle against b, merge it into a
                check(a)?;
                check(b)?;
                let k = self.r21_scalar(psi[a], psi[b]) * &self.morse.merge[&(psi[a], psi[a])];
                push(psi.to_vec(), c * k);
            }
        }
        Ok(())
    }
}

/// Per-move audit line of a sequence run.
#[derive(Clone, Debug)]
pub struct SequenceStep {
    pub mv: Move,
    pub degree: i64,
    pub terms: usize,
}

/// Track the canonical generator of `psi` through the sequence; fails if it is annihilated.
pub fn apply_sequence(
    sc: &MoveScalars,
    seq: &MoveSequence,
    psi: &[usize],
) -> Result<(Colored, i64, Vec<SequenceStep>)> {
    if psi.len() != seq.components {
        return Err(Error::Validation(format!(
            "{} roots for {} components",
            psi.len(),
            seq.components
        )));
    }
    if psi.iter().any(|&r| r >= sc.pot.n) {
        return Err(Error::Validation("root index out of range".into()));
    }
    let mut cur: Colored = [(psi.to_vec(), Q::one())].into_iter().collect();
    let mut degree = 0;
    let mut steps = vec![];
    for m in &seq.moves {
        let mut next = Colored::new();
        for (p, c) in &cur {
            sc.apply_one(m, p, c, &mut next)?;
        }
        next.retain(|_, c| !c.is_zero());
        if next.is_empty() {
            return Err(Error::Invariant(format!("generator annihilated by {m}")));
        }
        degree += m.degree(sc.pot.n);
        steps.push(SequenceStep {
            mv: m.clone(),
            degree,
            terms: next.len(),
        });
        cur = next;
    }
    Ok((cur, degree, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    fn loc(roots: &[i64]) -> Locals {
        Locals::new(&Potential::new(roots.iter().map(|r| q(*r)).collect()).unwrap())
    }

    #[test]
    fn r11_identities() {
        for roots in [vec![1, -1], vec![0, 1, 3], vec![1, 2, 4]] {
            let pot = loc(&roots).pot;
            let r = R11::new(&pot).unwrap();
            r.verify().unwrap();
            // chi0 carries -a in G1
            let a = pot.chi_a([X1, X2, AUX_BASE - 1, X3]).subst(AUX_BASE - 1, &x(X1));
            assert_eq!(r.chi0.g1[1][0], -a);
        }
    }

    #[test]
    fn basis_beta_needs_zero_root() {
        let x1 = x(X1);
        for (roots, ok) in [(vec![0, 2], true), (vec![1, -1], false)] {
            let pot = loc(&roots).pot;
            let f = &pot.dw(X1) * &x1;
            let want = &(&x(X2) - &x(X3)) * &(&x(X2) - &x(X3));
            assert_eq!(pot.r1_beta_basis(&f, X1, X2, X3) == want, ok);
            assert_eq!(pot.r1_beta(&f, X1, X2, X3), want);
        }
    }

    #[test]
    fn r11_closed_alpha() {
        let l = loc(&[1, -1]);
        let r = R11::new(&l.pot).unwrap();
        let want = -(&l.pot.dw(X1) - &l.pot.dw(X2)).exact_div_affine(&(&x(X1) - &x(X2)));
        assert_eq!(r.closed_alpha(), want);
    }

    #[test]
    fn r21_b_identity() {
        for roots in [vec![1, -1], vec![0, 1, 3]] {
            assert!(r21_b_is_identity(&loc(&roots).pot).unwrap());
        }
    }

    #[test]
    fn sequence_parse_roundtrip() {
        let s: MoveSequence = "components 1\nhandle0\nhandle1 merge 0 1\n# comment\nhandle2 0\n"
            .parse()
            .unwrap();
        assert_eq!(s.moves, vec![Move::Handle0, Move::Merge(0, 1), Move::Handle2(0)]);
        assert!("components 1\nR3 0 1 2".parse::<MoveSequence>().is_err());
        assert!("handle1 twist 0".parse::<MoveSequence>().is_err());
    }

    #[test]
    fn morse_scalars() {
        for roots in [vec![1, -1], vec![1, 2, 4]] {
            let l = loc(&roots);
            let n = l.n as i64;
            let m = morse_audit(&l).unwrap();
            for ((a, b), c) in &m.merge {
                assert_eq!(*c, if a == b { -Q::one() } else { Q::zero() });
            }
            for (a, c) in &m.split {
                // -(n+1) prod(a - b): q_a carries a 1/(n+1)
                assert_eq!(*c, -split_scalar(&l.pot, *a) * q(n + 1));
                assert_eq!(m.counit[a], Q::one() / split_scalar(&l.pot, *a));
            }
            assert_eq!((m.unit_degree, m.counit_degree, m.saddle_degree), (1 - n, 1 - n, n - 1));
            assert!(unit_is_sum_of_idempotents(&l.pot));
        }
        let l = loc(&[1, -1]);
        assert_eq!(split_scalar(&l.pot, 0), q(2));
    }

    #[test]
    fn eta_signs() {
        for roots in [vec![1, -1], vec![0, 2, 5]] {
            assert_eq!(eta_sign_lemma(&loc(&roots)).unwrap(), (-Q::one(), Q::one()));
        }
    }

    #[test]
    fn r11_generator_scalars() {
        for roots in [vec![1, -1], vec![1, 2, 4]] {
            let l = loc(&roots);
            let r = R11::new(&l.pot).unwrap();
            for p in 0..l.n {
                let (b, d) = (r.birth_scalar(p).unwrap(), r.death_scalar(p).unwrap());
                assert_eq!(b, -split_scalar(&l.pot, p) * q(l.n as i64 + 1));
                assert_eq!(&b * &d, -Q::one());
            }
        }
    }

    #[test]
    fn r21_scalars() {
        for roots in [vec![1, -1], vec![1, 2, 4]] {
            let l = loc(&roots);
            for a in 0..l.n {
                for b in 0..l.n {
                    let want = if a == b {
                        Q::zero()
                    } else {
                        &l.pot.roots[a] - &l.pot.roots[b]
                    };
                    assert_eq!(r21_generator_scalar(&l, a, b).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn sequences() {
        let sc = MoveScalars::new(&loc(&[1, -1])).unwrap();
        let run = |text: &str, psi: &[usize]| apply_sequence(&sc, &text.parse().unwrap(), psi);
        let (out, deg, _) = run("components 1\n", &[0]).unwrap();
        assert_eq!((out.len(), deg), (1, 0));
        // a birth merged straight back in is the identity up to -1, of degree 1 - n + n - 1 = 0
        let (out, deg, steps) = run("components 1\nhandle0\nhandle1 merge 0 1\n", &[1]).unwrap();
        assert_eq!(deg, 0);
        assert_eq!(out, [(vec![1], -Q::one())].into_iter().collect());
        assert_eq!(steps.len(), 2);
        let (out, deg, _) = run("components 1\nhandle0\nhandle1 merge 0 1\nhandle2 0\n", &[0]).unwrap();
        assert_eq!(deg, -1);
        assert_eq!(
            out,
            [(vec![], -Q::one() / split_scalar(&sc.pot, 0))].into_iter().collect()
        );
        // a sphere evaluates to sum_b eps(q_b) = 0
        assert!(run("components 1\nhandle0\nhandle2 1\n", &[0]).is_err());
        let (out, deg, _) = run("components 1\nR1.1 0\nR1.1^-1 0\n", &[0]).unwrap();
        assert_eq!((deg, out[&vec![0]].clone()), (0, -Q::one()));
        let (out, _, _) = run("components 2\nR2.1 0 1\nR2.2 0 1\n", &[0, 1]).unwrap();
        assert_eq!(out.len(), 1);
        assert!(run("components 2\nhandle1 merge 0 1\n", &[0, 1]).is_err());
        assert!(run("components 1\nhandle2 3\n", &[0]).is_err());
    }
}
