//! Gaussian elimination of Koszul factors with an affine entry.
//!
//! A factor `(a, b)` whose `b` is affine is removed by substituting the pivot variable of `b`
//! (generalized removal of marks); a factor whose `a` is affine is removed the same way with the
//! exterior bit kept. Each step comes with an inclusion `K` and a projection `L` with `L K = id`.
//! The reduced complex is canonical: it depends only on the set of excluded factors.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::koszul::{sign_above, Chain, Koszul, SiteMap};
use crate::poly::{Poly, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    /// Excluded along `b`: the bit is forced to 0.
    B,
    /// Excluded along `a`: the bit is forced to 1.
    A,
}

/// One elimination: the equation `coef (var - expr) = 0` taken from factor `factor`.
#[derive(Clone, Debug)]
pub struct Step {
    pub factor: usize,
    pub kind: Kind,
    pub var: usize,
    pub coef: Q,
    pub expr: Poly,
}

impl Step {
    fn ev(&self, p: &Poly) -> Poly {
        p.subst(self.var, &self.expr)
    }

    /// Divided difference `(p - ev p) / equation`.
    fn delta(&self, p: &Poly) -> Poly {
        let (quo, _) = p.div_linear(self.var, &self.expr);
        quo.scale(&(Q::one() / &self.coef))
    }
}

/// Factors whose original `b` (or, failing that, `a`) is affine.
pub fn candidates(full: &Koszul) -> Vec<(usize, Kind)> {
    let mut out = vec![];
    for i in full.active_indices() {
        let f = &full.factors[i];
        if f.b.degree() == Some(1) {
            out.push((i, Kind::B));
        } else if matches!(f.a.degree(), Some(0) | Some(1)) {
            out.push((i, Kind::A));
        }
    }
    out
}

fn apply_step(cur: &Koszul, st: &Step) -> Koszul {
    let mut next = cur.clone();
    for f in next.factors.iter_mut() {
        f.a = st.ev(&f.a);
        f.b = st.ev(&f.b);
    }
    next.active &= !(1u64 << st.factor);
    if st.kind == Kind::A {
        next.base_shift += cur.factors[st.factor].delta;
        next.base_parity = (next.base_parity + 1) % 2;
    }
    next.refresh_tops();
    next
}

enum Outcome {
    Step(Step),
    Skip,
    Unit,
}

fn make_step(cur: &Koszul, j: usize, kind: Kind) -> Outcome {
    let f = &cur.factors[j];
    let eq = match kind {
        Kind::B => &f.b,
        Kind::A => &f.a,
    };
    if eq.is_zero() {
        return Outcome::Skip;
    }
    if eq.is_constant() {
        return Outcome::Unit;
    }
    match eq.affine_pivot() {
        Some((var, coef, expr)) => Outcome::Step(Step {
            factor: j,
            kind,
            var,
            coef,
            expr,
        }),
        None => Outcome::Skip,
    }
}

/// A chain of eliminations together with every intermediate complex.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub steps: Vec<Step>,
    /// `stages[i]` is the complex after `i` steps.
    pub stages: Vec<Koszul>,
    /// Sign turning the sequential projection into the canonical one.
    pub sign: bool,
}

impl Pipeline {
    /// Run the given eliminations in order; every equation must stay non-constant.
    fn forced(full: &Koszul, order: &[(usize, Kind)]) -> Result<Pipeline> {
        let mut stages = vec![full.clone()];
        let mut steps = vec![];
        for &(j, kind) in order {
            let cur = stages.last().unwrap();
            match make_step(cur, j, kind) {
                Outcome::Step(st) => {
                    stages.push(apply_step(cur, &st));
                    steps.push(st);
                }
                _ => return Err(Error::Invariant(format!("elimination of factor {j} degenerated"))),
            }
        }
        let mut p = Pipeline {
            steps,
            stages,
            sign: false,
        };
        p.sign = p.compute_sign();
        Ok(p)
    }

    fn compute_sign(&self) -> bool {
        let amask: u64 = self
            .steps
            .iter()
            .filter(|s| s.kind == Kind::A)
            .map(|s| 1u64 << s.factor)
            .sum();
        let e = self.project_seq(0, &Chain::mono(amask, Poly::one()));
        let c =
            e.0.get(&0)
                .expect("projection of the excluded top is a unit")
                .constant_term();
        c < Q::zero()
    }

    pub fn last(&self) -> &Koszul {
        self.stages.last().unwrap()
    }

    /// Sequential projection from stage `from` to the end.
    fn project_seq(&self, from: usize, c: &Chain) -> Chain {
        let mut cur = c.clone();
        for st in &self.steps[from..] {
            cur = project_step(st, &cur);
        }
        cur
    }

    /// Sequential inclusion from the end back to stage `to`.
    fn include_seq(&self, to: usize, c: &Chain) -> Chain {
        let mut cur = c.clone();
        for i in (to..self.steps.len()).rev() {
            cur = include_step(&self.stages[i], &self.steps[i], &cur);
        }
        cur
    }
}

fn project_step(st: &Step, c: &Chain) -> Chain {
    let j = st.factor;
    let mut out = Chain::zero();
    for (&mask, p) in c.terms() {
        let has = mask >> j & 1 == 1;
        match st.kind {
            Kind::B if !has => out.add(mask, &st.ev(p)),
            Kind::A if has => {
                let v = st.ev(p);
                let m = mask & !(1u64 << j);
                if sign_above(mask, j) {
                    out.sub(m, &v)
                } else {
                    out.add(m, &v)
                }
            }
            _ => {}
        }
    }
    out
}

fn include_step(stage: &Koszul, st: &Step, m: &Chain) -> Chain {
    let j = st.factor;
    let bit = 1u64 << j;
    let mut out = Chain::zero();
    for (&mask, p) in m.terms() {
        let term = Chain::mono(mask, p.clone());
        let dd = stage.d_without(&term, j);
        let odd = mask.count_ones() % 2 == 1;
        match st.kind {
            Kind::B => {
                out.add(mask, p);
                for (&m2, f) in dd.terms() {
                    let v = st.delta(f);
                    let neg = odd ^ sign_above(m2, j);
                    if neg {
                        out.sub(m2 | bit, &v)
                    } else {
                        out.add(m2 | bit, &v)
                    }
                }
            }
            Kind::A => {
                if sign_above(mask, j) {
                    out.sub(mask | bit, p)
                } else {
                    out.add(mask | bit, p)
                }
                for (&m2, f) in dd.terms() {
                    let v = st.delta(f);
                    if odd {
                        out.sub(m2, &v)
                    } else {
                        out.add(m2, &v)
                    }
                }
            }
        }
    }
    out
}

/// The canonical reduction of a complex.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub full: Koszul,
    pub pipeline: Pipeline,
    /// A unit appeared: the complex is contractible and `reduced` is meaningless.
    pub contractible: bool,
    /// Normal form: pivot variable := expression in the free variables.
    pub subst: Vec<(usize, Poly)>,
    pub free_vars: Vec<usize>,
}

impl Reduction {
    pub fn new(full: Koszul, nvars: usize) -> Reduction {
        let mut order = vec![];
        let mut cur = full.clone();
        let mut contractible = false;
        for (j, kind) in candidates(&full) {
            match make_step(&cur, j, kind) {
                Outcome::Step(st) => {
                    cur = apply_step(&cur, &st);
                    order.push((j, kind));
                }
                Outcome::Skip => {}
                Outcome::Unit => {
                    contractible = true;
                    break;
                }
            }
        }
        let pipeline = Pipeline::forced(&full, &order).expect("replaying a successful elimination");
        let mut subst: Vec<(usize, Poly)> = vec![];
        for st in &pipeline.steps {
            for (_, e) in subst.iter_mut() {
                *e = e.subst(st.var, &st.expr);
            }
            subst.push((st.var, st.expr.clone()));
        }
        let pivots: Vec<usize> = subst.iter().map(|(v, _)| *v).collect();
        let free_vars = (0..nvars).filter(|v| !pivots.contains(v)).collect();
        Reduction {
            full,
            pipeline,
            contractible,
            subst,
            free_vars,
        }
    }

    pub fn reduced(&self) -> &Koszul {
        self.pipeline.last()
    }

    pub fn excluded(&self) -> Vec<(usize, Kind)> {
        self.pipeline.steps.iter().map(|s| (s.factor, s.kind)).collect()
    }

    /// Normal form of a polynomial in the reduced ring.
    pub fn nf(&self, p: &Poly) -> Poly {
        p.subst_many(&self.subst)
    }

    /// Canonical projection `L` from the full complex.
    pub fn project(&self, c: &Chain) -> Chain {
        let out = self.pipeline.project_seq(0, c);
        if self.pipeline.sign {
            out.scale(&-Q::one())
        } else {
            out
        }
    }

    /// Canonical inclusion `K` into the full complex.
    pub fn include(&self, c: &Chain) -> Chain {
        let out = self.pipeline.include_seq(0, c);
        if self.pipeline.sign {
            out.scale(&-Q::one())
        } else {
            out
        }
    }
}

/// A site map carried between the reductions of two complexes that differ only at one site.
///
/// Eliminations shared by both sides away from the site are performed first; the map is applied
/// on that common intermediate complex and the remaining steps are undone and redone.
pub struct Transport {
    src: Pipeline,
    tgt: Pipeline,
    shared: usize,
    site: usize,
    map: SiteMap,
}

impl Transport {
    pub fn new(src: &Reduction, tgt: &Reduction, site: usize, map: &SiteMap) -> Result<Transport> {
        let sb = 3u64 << (2 * site);
        let se = src.excluded();
        let te = tgt.excluded();
        let mut shared: Vec<(usize, Kind)> = se
            .iter()
            .filter(|(j, _)| sb >> j & 1 == 0)
            .filter(|e| te.contains(e))
            .cloned()
            .collect();
        shared.sort();
        let with_rest = |ex: &[(usize, Kind)]| {
            let mut o = shared.clone();
            o.extend(ex.iter().filter(|e| !shared.contains(e)));
            o
        };
        let sp = Pipeline::forced(&src.full, &with_rest(&se))?;
        let tp = Pipeline::forced(&tgt.full, &with_rest(&te))?;
        let k = shared.len();
        let subst: Vec<(usize, Poly)> = {
            let mut s: Vec<(usize, Poly)> = vec![];
            for st in &sp.steps[..k] {
                for (_, e) in s.iter_mut() {
                    *e = e.subst(st.var, &st.expr);
                }
                s.push((st.var, st.expr.clone()));
            }
            s
        };
        let mut map = map.map_polys(&|p| p.subst_many(&subst));
        let a_shared = sp.steps[..k].iter().filter(|s| s.kind == Kind::A).count();
        if map.odd && a_shared % 2 == 1 {
            map = map.map_polys(&|p| -p);
        }
        Ok(Transport {
            src: sp,
            tgt: tp,
            shared: k,
            site,
            map,
        })
    }

    pub fn apply(&self, z: &Chain) -> Chain {
        let up = self.src.include_seq(self.shared, z);
        let mapped = self.map.apply(self.site, &up);
        let down = self.tgt.project_seq(self.shared, &mapped);
        if self.src.sign ^ self.tgt.sign {
            down.scale(&-Q::one())
        } else {
            down
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::Factor;
    use crate::poly::q;
    use crate::potential::Potential;

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }

    /// Two arcs glued into a circle, plus an arc joining the circle to itself.
    fn sample(pot: &Potential) -> Koszul {
        let n = pot.n;
        let arc = |o: usize, i: usize| Factor {
            a: pot.pi(o, i),
            b: &x(o) - &x(i),
            delta: 1 - n as i64,
        };
        Koszul::new(n, vec![arc(0, 1), arc(1, 2), arc(2, 0), arc(3, 3)], 0, 0)
    }

    #[test]
    fn circle_reduces_to_dw() {
        let pot = Potential::new(vec![q(1), q(-1)]).unwrap();
        let r = Reduction::new(sample(&pot), 4);
        assert!(!r.contractible);
        let red = r.reduced();
        assert_eq!(red.active.count_ones(), 2);
        for i in red.active_indices() {
            assert!(red.factors[i].b.is_zero());
            assert_eq!(red.factors[i].a.degree(), Some(2));
        }
    }

    #[test]
    fn include_project_roundtrip_and_chain_maps() {
        let pot = Potential::new(vec![q(1), q(2), q(4)]).unwrap();
        let r = Reduction::new(sample(&pot), 4);
        let red = r.reduced();
        for mask in 0..16u64 {
            if mask & !red.active != 0 {
                continue;
            }
            let e = Chain::mono(mask, &x(0) * &x(3) + Poly::int(2));
            let k = r.include(&e);
            assert_eq!(r.project(&k), e);
            assert_eq!(r.full.d(&k), r.include(&red.d(&e)));
            let full = Chain::mono(0b1111 & !mask, x(1).pow(2));
            assert_eq!(red.d(&r.project(&full)), r.project(&r.full.d(&full)));
        }
    }
}
