//! Homology of a single closed resolution graph.
//!
//! The reduced Koszul complex is filtered by `level = shift + 2 deg`. Its associated graded
//! differential `d0` is the undeformed one; we compute `H(d0)` level by level, lift every class to
//! a genuine cycle of `d` by solving `d0 y = top(d z)` downwards, and express arbitrary cycles in
//! the lifted basis. The total must match the number of admissible colorings and sit in a single
//! parity, which certifies that nothing was lost along the way.

use std::collections::{BTreeMap, HashMap};

use num_traits::One;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::koszul::{Chain, Koszul};
use crate::linalg::{Echelon, SVec};
use crate::local::Locals;
use crate::poly::{Mono, Poly, Q};
use crate::reduce::{Reduction, Transport};

#[derive(Clone, Debug, Default)]
struct LevelSpace {
    basis: Vec<(u64, Mono)>,
    index: HashMap<(u64, Mono), usize>,
}

/// A basis class: its graded representative and a lift to a cycle of `d`.
#[derive(Clone, Debug)]
pub struct Class {
    pub level: i64,
    pub parity: u8,
    pub top: Chain,
    pub cycle: Chain,
}

type Row = (SVec, SVec);

#[derive(Clone, Debug)]
pub struct VertexHomology {
    pub graph: Graph,
    pub red: Reduction,
    pub n: usize,
    pub admissible: usize,
    pub classes: Vec<Class>,
    masks: Vec<(u64, i64, u8)>,
    spaces: BTreeMap<(i64, u8), LevelSpace>,
    /// Per level: rows of `d0`-images (tag: preimage one level group down) and of classes.
    exp: BTreeMap<(i64, u8), Echelon<Row>>,
    min_level: i64,
    processed: i64,
}

fn submasks(active: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut s = active;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & active;
    }
    out
}

impl VertexHomology {
    pub fn compute(graph: &Graph, loc: &Locals) -> Result<VertexHomology> {
        let full = graph.koszul(loc);
        let red = Reduction::new(full, graph.nvars);
        let admissible = graph.admissible_states(loc.n).len();
        let rk = red.reduced();
        let masks: Vec<(u64, i64, u8)> = submasks(rk.active)
            .into_iter()
            .map(|m| (m, rk.shift(m), rk.parity(m)))
            .collect();
        let min_level = masks.iter().map(|m| m.1).min().unwrap_or(0);
        let mut h = VertexHomology {
            graph: graph.clone(),
            red,
            n: loc.n,
            admissible,
            classes: vec![],
            masks,
            spaces: BTreeMap::new(),
            exp: BTreeMap::new(),
            min_level,
            processed: min_level - 1,
        };
        if h.red.contractible {
            if admissible != 0 {
                return Err(Error::Invariant(format!(
                    "contractible resolution with {admissible} admissible colorings"
                )));
            }
            return Ok(h);
        }
        h.run()?;
        Ok(h)
    }

    fn reduced(&self) -> &Koszul {
        self.red.reduced()
    }

    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    pub fn step(&self) -> i64 {
        self.n as i64 + 1
    }

    /// Graded dimensions `(level, parity) -> count` of the associated graded homology.
    pub fn graded_dims(&self) -> BTreeMap<(i64, u8), usize> {
        let mut m = BTreeMap::new();
        for c in &self.classes {
            *m.entry((c.level, c.parity)).or_default() += 1;
        }
        m
    }

    fn run(&mut self) -> Result<()> {
        let slack = 2 * self.step();
        let ceiling = self.min_level.abs() + slack;
        loop {
            let l = self.processed + 1;
            self.process(l)?;
            let count = self.classes.len();
            if count > self.admissible {
                return Err(Error::Invariant(format!(
                    "resolution homology exceeds the {} admissible colorings",
                    self.admissible
                )));
            }
            let lo = self.classes.iter().map(|c| c.level).min();
            let hi = self.classes.iter().map(|c| c.level).max();
            let done = match (lo, hi) {
                (Some(lo), Some(hi)) => count == self.admissible && l >= (-lo).max(hi),
                _ => self.admissible == 0 && l >= ceiling,
            };
            if done {
                break;
            }
            let bound = lo.map_or(ceiling, |lo| -lo + slack);
            if l > bound.max(hi.unwrap_or(i64::MIN) + slack) {
                return Err(Error::Invariant(format!(
                    "found {count} classes up to level {l}, expected {}",
                    self.admissible
                )));
            }
        }
        let parities: std::collections::BTreeSet<u8> = self.classes.iter().map(|c| c.parity).collect();
        if parities.len() > 1 {
            return Err(Error::Invariant(
                "resolution homology is not concentrated in one parity".into(),
            ));
        }
        Ok(())
    }

    fn space(&mut self, l: i64, q: u8) -> &LevelSpace {
        if !self.spaces.contains_key(&(l, q)) {
            let mut sp = LevelSpace::default();
            if l >= self.min_level {
                let free = self.red.free_vars.clone();
                for &(m, s, p) in &self.masks {
                    let r = l - s;
                    if p != q || r < 0 || r % 2 != 0 {
                        continue;
                    }
                    for mono in Mono::all_of_degree(&free, (r / 2) as u32) {
                        sp.index.insert((m, mono), sp.basis.len());
                        sp.basis.push((m, mono));
                    }
                }
            }
            self.spaces.insert((l, q), sp);
        }
        &self.spaces[&(l, q)]
    }

    fn to_vec(&mut self, c: &Chain, l: i64, q: u8) -> Result<SVec> {
        self.space(l, q);
        let sp = &self.spaces[&(l, q)];
        let mut v = SVec::new();
        for (m, p) in c.terms() {
            for (mono, x) in p.terms() {
                let i = sp
                    .index
                    .get(&(*m, *mono))
                    .ok_or_else(|| Error::Invariant(format!("term outside level space ({l}, {q}): mask {m:b}")))?;
                v.add_at(*i, x);
            }
        }
        Ok(v)
    }

    fn to_chain(&mut self, v: &SVec, l: i64, q: u8) -> Chain {
        if v.is_zero() {
            return Chain::zero();
        }
        let sp = self.space(l, q);
        let mut c = Chain::zero();
        for (i, x) in &v.0 {
            let (m, mono) = sp.basis[*i];
            c.add(m, &Poly::term(x.clone(), mono));
        }
        c
    }

    fn process(&mut self, l: i64) -> Result<()> {
        let step = self.step();
        for q in 0..2u8 {
            let t = (l + step, 1 - q);
            let basis = self.space(l, q).basis.clone();
            self.space(t.0, t.1);
            let mut kernel = vec![];
            for (i, (m, mono)) in basis.iter().enumerate() {
                let img = self.reduced().d_top(&Chain::mono(*m, Poly::term(Q::one(), *mono)));
                let v = self.to_vec(&img, t.0, t.1)?;
                let e = self.exp.entry(t).or_default();
                if let Err((_, k)) = e.insert(&v, (SVec::new(), SVec::unit(i))) {
                    kernel.push(k);
                }
            }
            for k in kernel {
                let id = self.classes.len();
                let e = self.exp.entry((l, q)).or_default();
                if e.insert(&k, (SVec::unit(id), SVec::new())).is_ok() {
                    let top = self.to_chain(&k, l, q);
                    let cycle = self.lift(&top)?;
                    self.classes.push(Class {
                        level: l,
                        parity: q,
                        top,
                        cycle,
                    });
                }
            }
        }
        self.processed = l;
        Ok(())
    }

    /// Correct a `d0`-cycle downwards into a `d`-cycle.
    fn lift(&mut self, top: &Chain) -> Result<Chain> {
        let mut z = top.clone();
        loop {
            let r = self.reduced().d(&z);
            let Some(m) = self.reduced().level(&r) else {
                return Ok(z);
            };
            let q = self.reduced().parity(*r.0.keys().next().unwrap());
            let t = self.reduced().level_part(&r, m);
            let v = self.to_vec(&t, m, q)?;
            let (rem, (cls, pre)) = self.exp.entry((m, q)).or_default().reduce(&v);
            if !rem.is_zero() || !cls.is_zero() {
                return Err(Error::Invariant(format!("class at level {m} does not lift to a cycle")));
            }
            let y = self.to_chain(&pre, m - self.step(), 1 - q);
            z.sub_chain(&y);
        }
    }

    pub fn ensure(&mut self, l: i64) -> Result<()> {
        while self.processed < l {
            self.process(self.processed + 1)?;
        }
        Ok(())
    }

    /// Coordinates of the homology class of a `d`-cycle of the reduced complex.
    pub fn express(&mut self, z: &Chain) -> Result<SVec> {
        let mut z = z.clone();
        let mut out = SVec::new();
        while let Some(l) = self.reduced().level(&z) {
            self.ensure(l)?;
            let t = self.reduced().level_part(&z, l);
            for q in 0..2u8 {
                let part = Chain(
                    t.0.iter()
                        .filter(|(m, _)| self.reduced().parity(**m) == q)
                        .map(|(m, p)| (*m, p.clone()))
                        .collect(),
                );
                if part.is_zero() {
                    continue;
                }
                let v = self.to_vec(&part, l, q)?;
                let (rem, (cls, pre)) = self.exp.entry((l, q)).or_default().reduce(&v);
                if !rem.is_zero() {
                    return Err(Error::Invariant(format!("element at level {l} is not a cycle")));
                }
                for (i, c) in &cls.0 {
                    z.sub_chain(&self.classes[*i].cycle.scale(c));
                    out.add_at(*i, c);
                }
                let y = self.to_chain(&pre, l - self.step(), 1 - q);
                z.sub_chain(&self.reduced().d(&y));
            }
        }
        Ok(out)
    }

    /// Chain of a coordinate vector.
    pub fn cycle_of(&self, v: &SVec) -> Chain {
        let mut c = Chain::zero();
        for (i, x) in &v.0 {
            c.add_chain(&self.classes[*i].cycle.scale(x));
        }
        c
    }

    /// Multiply a class by a polynomial in the graph variables.
    pub fn multiply(&mut self, p: &Poly, v: &SVec) -> Result<SVec> {
        let f = self.red.nf(p);
        let z = self.cycle_of(v).mul_poly(&f);
        self.express(&z)
    }
}

/// The cycle of `H(Gamma)` attached to an admissible coloring: the product of root idempotents on
/// the circles of `Gamma'`, pushed back through the opening maps one thick edge at a time.
pub fn state_cycle(graph: &Graph, loc: &Locals, phi: &[usize]) -> Result<(Reduction, Chain)> {
    let opened = graph.opened(phi);
    let mut cur = opened.clone();
    let mut red = Reduction::new(cur.koszul(loc), cur.nvars);
    if red.contractible {
        return Err(Error::Invariant("opened resolution is contractible".into()));
    }
    let rk = red.reduced();
    if rk.active_indices().iter().any(|&i| !rk.factors[i].b.is_zero()) {
        return Err(Error::Invariant("circle complex did not reduce to free factors".into()));
    }
    let mut poly = Poly::one();
    for circle in opened.circles_of_arcs() {
        let root = &loc.pot.roots[phi[circle[0]]];
        poly = &poly * &loc.pot.q_beta(root, circle[0]);
    }
    let mut z = Chain::mono(rk.active, red.nf(&poly));
    for s in 0..graph.sites.len() {
        if graph.sites[s].config == opened.sites[s].config {
            continue;
        }
        let map = if opened.sites[s].config == crate::local::ORIENTED {
            loc.chi0()
        } else {
            loc.eta0()
        };
        let vars = graph.sites[s].vars;
        let map = map.rename(&|v| vars[v]);
        let next = cur.with_config(s, graph.sites[s].config);
        let nred = Reduction::new(next.koszul(loc), next.nvars);
        z = Transport::new(&red, &nred, s, &map)?.apply(&z);
        cur = next;
        red = nred;
    }
    Ok((red, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Diagram;
    use crate::poly::q;
    use crate::potential::Potential;

    fn locals(roots: &[i64]) -> Locals {
        Locals::new(&Potential::new(roots.iter().map(|r| q(*r)).collect()).unwrap())
    }

    #[test]
    fn unknot_levels() {
        for n in 2..=4 {
            let loc = Locals::new(&Potential::standard(n));
            let g = Graph::resolve(&Diagram::unknot(), 0);
            let h = VertexHomology::compute(&g, &loc).unwrap();
            let levels: Vec<i64> = h.classes.iter().map(|c| c.level).collect();
            let want: Vec<i64> = (0..n as i64).map(|k| 1 - n as i64 + 2 * k).collect();
            assert_eq!(levels, want);
        }
    }

    #[test]
    fn every_resolution_matches_colorings() {
        let loc = locals(&[1, -1]);
        for name in ["unknot-kink1", "hopf+", "trefoil+", "figure8"] {
            let d = Diagram::preset(name).unwrap();
            for v in 0..1u64 << d.crossings.len() {
                let g = Graph::resolve(&d, v);
                let h = VertexHomology::compute(&g, &loc).unwrap();
                assert_eq!(h.dim(), g.admissible_states(2).len(), "{name} {v:b}");
            }
        }
    }

    #[test]
    fn state_cycles_are_root_eigenvectors() {
        let loc = locals(&[1, 2, 4]);
        let d = Diagram::preset("trefoil+").unwrap();
        for v in [0b001u64, 0b111] {
            let g = Graph::resolve(&d, v);
            let mut h = VertexHomology::compute(&g, &loc).unwrap();
            let states = g.admissible_states(3);
            let mut gens = vec![];
            for phi in &states {
                let (_, z) = state_cycle(&g, &loc, phi).unwrap();
                let c = h.express(&z).unwrap();
                assert!(!c.is_zero());
                for x in 0..g.nvars {
                    let xc = h.multiply(&Poly::var(x), &c).unwrap();
                    assert_eq!(xc, c.scale(&loc.pot.roots[phi[x]]), "x{x} on {phi:?}");
                }
                gens.push(c);
            }
            assert_eq!(crate::linalg::rank(&gens), states.len());
        }
    }
}
