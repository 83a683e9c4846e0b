//! Filtered homology of the cube complex, canonical generators, and the slice-genus bound.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cube::{apply, Cube, FilteredComplex, Matrix};
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::homology::state_cycle;
use crate::linalg::{rank, Echelon, SVec};
use crate::local::Locals;
use crate::poly::Q;

#[derive(Clone, Debug, Serialize)]
pub struct Generator {
    /// Root index per component.
    pub psi: Vec<usize>,
    pub degree: i64,
    pub level: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyResult {
    pub n: usize,
    pub components: usize,
    /// `(i, j) -> dim F^j H^i / F^{j-2} H^i`.
    pub dims: BTreeMap<(i64, i64), usize>,
    pub total: usize,
    pub generators: Vec<Generator>,
}

fn cut(levels: &[i64], j: i64) -> usize {
    levels.partition_point(|&l| l <= j)
}

fn truncated(m: &Matrix, c: usize) -> Matrix {
    m.iter().map(|v| v.above(c)).collect()
}

/// Associated graded dimensions of the filtered homology.
pub fn filtered_dims(cx: &FilteredComplex) -> BTreeMap<(i64, i64), usize> {
    let mut out = BTreeMap::new();
    for (&i, gens) in &cx.gens {
        let levels: Vec<i64> = gens.iter().map(|g| g.level).collect();
        let d_out = cx.differential(i);
        let d_in = cx.differential(i - 1);
        let r_in = rank(&d_in);
        let mut distinct = levels.clone();
        distinct.dedup();
        let mut ech: Echelon<()> = Echelon::new();
        let mut inserted = 0;
        let mut prev = 0i64;
        for &j in &distinct {
            let c = cut(&levels, j);
            while inserted < c {
                let _ = ech.insert(&d_out[inserted], ());
                inserted += 1;
            }
            let cycles = c as i64 - ech.rank() as i64;
            let bounds = r_in as i64 - rank(&truncated(&d_in, c)) as i64;
            let f = cycles - bounds;
            if f > prev {
                out.insert((i, j), (f - prev) as usize);
            }
            prev = f;
        }
    }
    out
}

/// Filtration level of the homology class of a cycle `z` in degree `i`.
pub fn class_level(cx: &FilteredComplex, i: i64, z: &SVec) -> Result<i64> {
    let gens = &cx.gens[&i];
    if !apply(&cx.differential(i), z).is_zero() {
        return Err(Error::Invariant(format!("generator in degree {i} is not a cycle")));
    }
    let levels: Vec<i64> = gens.iter().map(|g| g.level).collect();
    let d_in = cx.differential(i - 1);
    let in_image = |c: usize| {
        let mut e: Echelon<()> = Echelon::new();
        for col in truncated(&d_in, c) {
            let _ = e.insert(&col, ());
        }
        e.contains(&z.above(c))
    };
    if in_image(0) {
        return Err(Error::Invariant(format!("generator in degree {i} is a boundary")));
    }
    let mut distinct = levels.clone();
    distinct.dedup();
    for &j in &distinct {
        if in_image(cut(&levels, j)) {
            return Ok(j);
        }
    }
    Err(Error::Invariant("class level search fell off the top".into()))
}

/// Every assignment of roots to components.
pub fn assignments(n: usize, l: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..l {
        out = out
            .into_iter()
            .flat_map(|p| (0..n).map(move |r| [p.clone(), vec![r]].concat()))
            .collect();
    }
    out
}

/// Vertex and edge coloring of the resolution attached to a root assignment `psi`.
pub fn psi_state(d: &Diagram, psi: &[usize]) -> (u64, Vec<usize>) {
    let comp = d.edge_components();
    let ncomp = comp.values().max().map_or(0, |m| m + 1);
    let mut v = 0u64;
    for (c, x) in d.crossings.iter().enumerate() {
        let [(a, _), (b, _)] = x.strands();
        let thick = psi[comp[&a]] != psi[comp[&b]];
        if thick == x.positive {
            v |= 1 << c;
        }
    }
    let mut phi: Vec<usize> = d.edges().iter().map(|e| psi[comp[e]]).collect();
    phi.extend((0..d.loops).map(|i| psi[ncomp + i]));
    (v, phi)
}

/// The canonical generator of `psi` as a cycle of the cube complex.
pub fn generator_vector(cube: &mut Cube, cx: &FilteredComplex, loc: &Locals, psi: &[usize]) -> Result<(i64, SVec)> {
    let (v, phi) = psi_state(&cube.diagram, psi);
    let g = Graph::resolve(&cube.diagram, v);
    let (_, z) = state_cycle(&g, loc, &phi)?;
    let coords = cube.vertices[v as usize].express(&z)?;
    if coords.is_zero() {
        return Err(Error::Invariant(format!("state generator of {psi:?} vanishes")));
    }
    let i = cube.hom_degree(v);
    let mut out = SVec::new();
    for (c, x) in &coords.0 {
        out.add_at(cx.index[&(v, *c)], x);
    }
    Ok((i, out))
}

pub fn canonical_generators(cube: &mut Cube, cx: &FilteredComplex, loc: &Locals) -> Result<Vec<Generator>> {
    let l = cube.diagram.components();
    let mut out = vec![];
    for psi in assignments(cube.n, l) {
        let (i, z) = generator_vector(cube, cx, loc, &psi)?;
        let level = class_level(cx, i, &z)?;
        out.push(Generator { psi, degree: i, level });
    }
    Ok(out)
}

/// Build the cube, check it, and compute the filtered homology with its generators.
pub fn homology(d: &Diagram, loc: &Locals, cap: usize) -> Result<HomologyResult> {
    let mut cube = Cube::build(d, loc, cap)?;
    cube.check_faces()?;
    cube.check_edge_degrees()?;
    let cx = cube.complex();
    cx.check_d2()?;
    let dims = filtered_dims(&cx);
    let generators = canonical_generators(&mut cube, &cx, loc)?;
    let total = dims.values().sum();
    let components = d.components();
    let expected = loc.n.pow(components as u32);
    if total != expected {
        return Err(Error::Invariant(format!(
            "total dimension {total}, expected n^l = {expected}"
        )));
    }
    Ok(HomologyResult {
        n: loc.n,
        components,
        dims,
        total,
        generators,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceBound {
    pub j_top: i64,
    /// Lower bound for the slice genus; a half-integer in general.
    pub bound: String,
    #[serde(skip)]
    pub value: Q,
}

impl SliceBound {
    fn new(j_top: i64, n: usize) -> SliceBound {
        let value = (Q::from_integer((-j_top).into()) / Q::from_integer((n as i64 - 1).into())
            + Q::from_integer(1.into()))
            / Q::from_integer(2.into());
        SliceBound {
            j_top,
            bound: value.to_string(),
            value,
        }
    }

    pub fn render(&self) -> String {
        format!("j_top={}, g*>={}", self.j_top, self.bound)
    }
}

pub fn slice_bound(h: &HomologyResult) -> Result<SliceBound> {
    if h.components != 1 {
        return Err(Error::Validation(format!(
            "slice bound needs a knot, got {} components",
            h.components
        )));
    }
    let j_top = h
        .dims
        .keys()
        .filter(|(i, _)| *i == 0)
        .map(|(_, j)| *j)
        .max()
        .ok_or_else(|| Error::Invariant("no homology in degree 0".into()))?;
    Ok(SliceBound::new(j_top, h.n))
}

/// Positive knot diagrams: the generators sit at `(1-n)(k-s)` with `s` Seifert circles, and the
/// Seifert surface of genus `(k-s+1)/2` realizes the bound.
pub fn positive_fast_path(d: &Diagram, n: usize) -> Result<(SliceBound, usize)> {
    let st = d.stats();
    if !st.all_positive {
        return Err(Error::Validation("the fast path needs a positive diagram".into()));
    }
    if st.components != 1 {
        return Err(Error::Validation("the fast path needs a knot".into()));
    }
    let (k, s) = (st.crossings as i64, d.seifert_circles() as i64);
    let b = SliceBound::new((1 - n as i64) * (k - s), n);
    Ok((b, ((k - s + 1) / 2) as usize))
}

/// Slice genus of the torus knot `T(p, q)` from its positive braid closure.
pub fn milnor(p: usize, q: usize) -> Result<usize> {
    let d = Diagram::torus(p, q)?;
    Ok(positive_fast_path(&d, 2)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;
    use crate::potential::Potential;

    fn loc2() -> Locals {
        Locals::new(&Potential::new(vec![q(1), q(-1)]).unwrap())
    }

    #[test]
    fn unknot_and_kink() {
        for name in ["unknot", "unknot-kink1"] {
            let h = homology(&Diagram::preset(name).unwrap(), &loc2(), 8).unwrap();
            let want: BTreeMap<(i64, i64), usize> = [((0, -1), 1), ((0, 1), 1)].into_iter().collect();
            assert_eq!(h.dims, want, "{name}");
        }
    }

    #[test]
    fn trefoil_bound() {
        let h = homology(&Diagram::preset("trefoil+").unwrap(), &loc2(), 8).unwrap();
        assert_eq!(h.total, 2);
        let b = slice_bound(&h).unwrap();
        assert_eq!(b.render(), "j_top=-1, g*>=1");
        let (fast, g) = positive_fast_path(&Diagram::preset("trefoil+").unwrap(), 2).unwrap();
        assert_eq!((fast, g), (b, 1));
    }

    #[test]
    fn milnor_values() {
        for (p, qq, g) in [(2, 3, 1), (2, 5, 2), (2, 7, 3), (3, 4, 3), (3, 5, 4)] {
            assert_eq!(milnor(p, qq).unwrap(), g);
        }
    }
}
