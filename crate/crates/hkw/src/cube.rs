//! The cube of resolutions: vertex homologies joined by the maps induced from `chi_0`/`chi_1`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::homology::VertexHomology;
use crate::koszul::{Chain, SiteMap};
use crate::linalg::SVec;
use crate::local::Locals;
use crate::poly::q;
use crate::reduce::Transport;

/// Columns of a matrix: `cols[j]` is the image of basis vector `j`.
pub type Matrix = Vec<SVec>;

pub fn apply(m: &Matrix, v: &SVec) -> SVec {
    let mut out = SVec::new();
    for (j, c) in &v.0 {
        out.axpy(c, &m[*j]);
    }
    out
}

pub fn compose(second: &Matrix, first: &Matrix) -> Matrix {
    first.iter().map(|c| apply(second, c)).collect()
}

#[derive(Clone, Debug)]
pub struct Cube {
    pub n: usize,
    pub diagram: Diagram,
    pub vertices: Vec<VertexHomology>,
    /// `(v, c)` for `c` not in `v`: the unsigned map `H(v) -> H(v + c)`.
    pub edges: BTreeMap<(u64, usize), Matrix>,
}

/// Minus sign on edge `(v, c)` iff an odd number of bits of `v` lie below `c`.
pub fn edge_sign(v: u64, c: usize) -> bool {
    (v & ((1u64 << c) - 1)).count_ones() % 2 == 1
}

/// The local map carried by crossing `c` in direction `0 -> 1`.
pub fn crossing_map(loc: &Locals, d: &Diagram, g: &Graph, c: usize) -> SiteMap {
    let m = if d.crossings[c].positive {
        loc.chi0()
    } else {
        loc.chi1()
    };
    let vars = g.sites[c].vars;
    m.rename(&|v| vars[v])
}

impl Cube {
    pub fn build(d: &Diagram, loc: &Locals, cap: usize) -> Result<Cube> {
        let k = d.crossings.len();
        if k > cap {
            return Err(Error::Validation(format!("{k} crossings exceed the cap of {cap}")));
        }
        let graphs: Vec<Graph> = (0..1u64 << k).map(|v| Graph::resolve(d, v)).collect();
        let mut vertices: Vec<VertexHomology> = graphs
            .par_iter()
            .map(|g| VertexHomology::compute(g, loc))
            .collect::<Result<_>>()?;
        let edge_list: Vec<(u64, usize)> = (0..1u64 << k)
            .flat_map(|v| (0..k).filter(move |c| v >> c & 1 == 0).map(move |c| (v, c)))
            .collect();
        let images: Vec<((u64, usize), Vec<Chain>)> = edge_list
            .par_iter()
            .map(|&(v, c)| {
                let (src, tgt) = (&vertices[v as usize], &vertices[(v | 1 << c) as usize]);
                if src.dim() == 0 || tgt.dim() == 0 {
                    return Ok(((v, c), vec![Chain::zero(); src.dim()]));
                }
                let map = crossing_map(loc, d, &graphs[v as usize], c);
                let t = Transport::new(&src.red, &tgt.red, c, &map)?;
                Ok(((v, c), src.classes.iter().map(|cl| t.apply(&cl.cycle)).collect()))
            })
            .collect::<Result<_>>()?;
        let mut by_target: Vec<Vec<((u64, usize), Vec<Chain>)>> = vec![vec![]; 1 << k];
        for (e, zs) in images {
            by_target[(e.0 | 1 << e.1) as usize].push((e, zs));
        }
        let edges: Vec<Vec<((u64, usize), Matrix)>> = vertices
            .par_iter_mut()
            .zip(by_target.into_par_iter())
            .map(|(h, list)| {
                list.into_iter()
                    .map(|(e, zs)| {
                        let cols = zs.iter().map(|z| h.express(z)).collect::<Result<Vec<_>>>()?;
                        Ok((e, cols))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(Cube {
            n: loc.n,
            diagram: d.clone(),
            vertices,
            edges: edges.into_iter().flatten().collect(),
        })
    }

    pub fn k(&self) -> usize {
        self.diagram.crossings.len()
    }

    pub fn negative(&self) -> usize {
        self.diagram.crossings.iter().filter(|c| !c.positive).count()
    }

    pub fn hom_degree(&self, v: u64) -> i64 {
        v.count_ones() as i64 - self.negative() as i64
    }

    /// Quantum shift of vertex `v`: `1-n` or `-n` per positive crossing, `n` or `n-1` per negative.
    pub fn shift(&self, v: u64) -> i64 {
        let n = self.n as i64;
        let base: i64 = self
            .diagram
            .crossings
            .iter()
            .map(|c| if c.positive { 1 - n } else { n })
            .sum();
        base - v.count_ones() as i64
    }

    /// Unsigned commutativity of every square face.
    pub fn check_faces(&self) -> Result<()> {
        let k = self.k();
        for v in 0..1u64 << k {
            for c1 in 0..k {
                for c2 in c1 + 1..k {
                    if v >> c1 & 1 == 1 || v >> c2 & 1 == 1 {
                        continue;
                    }
                    let a = compose(&self.edges[&(v | 1 << c1, c2)], &self.edges[&(v, c1)]);
                    let b = compose(&self.edges[&(v | 1 << c2, c1)], &self.edges[&(v, c2)]);
                    if a != b {
                        return Err(Error::Invariant(format!(
                            "face at vertex {v:b}, crossings {c1},{c2} does not commute"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Every edge map has filtered degree at most 0 after the vertex shifts.
    pub fn check_edge_degrees(&self) -> Result<()> {
        for (&(v, c), m) in &self.edges {
            let w = v | 1 << c;
            let (hv, hw) = (&self.vertices[v as usize], &self.vertices[w as usize]);
            for (j, col) in m.iter().enumerate() {
                for i in col.0.keys() {
                    if hw.classes[*i].level + self.shift(w) > hv.classes[j].level + self.shift(v) {
                        return Err(Error::Invariant(format!("edge ({v:b}, {c}) raises the filtration")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn complex(&self) -> FilteredComplex {
        let mut gens: BTreeMap<i64, Vec<Gen>> = BTreeMap::new();
        for (v, h) in self.vertices.iter().enumerate() {
            let v = v as u64;
            for (c, cl) in h.classes.iter().enumerate() {
                gens.entry(self.hom_degree(v)).or_default().push(Gen {
                    vertex: v,
                    class: c,
                    level: cl.level + self.shift(v),
                });
            }
        }
        for g in gens.values_mut() {
            g.sort_by_key(|x| (x.level, x.vertex, x.class));
        }
        let index: BTreeMap<(u64, usize), usize> = gens
            .values()
            .flat_map(|g| g.iter().enumerate().map(|(i, x)| ((x.vertex, x.class), i)))
            .collect();
        let mut d: BTreeMap<i64, Matrix> = BTreeMap::new();
        for (&i, g) in &gens {
            let cols = g
                .iter()
                .map(|x| {
                    let mut col = SVec::new();
                    for c in 0..self.k() {
                        if x.vertex >> c & 1 == 1 {
                            continue;
                        }
                        let w = x.vertex | 1 << c;
                        let s = if edge_sign(x.vertex, c) { q(-1) } else { q(1) };
                        for (t, y) in &self.edges[&(x.vertex, c)][x.class].0 {
                            col.add_at(index[&(w, *t)], &(&s * y));
                        }
                    }
                    col
                })
                .collect();
            d.insert(i, cols);
        }
        FilteredComplex { gens, index, d }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gen {
    pub vertex: u64,
    pub class: usize,
    pub level: i64,
}

/// Chain groups with basis sorted by filtration level, and the differentials as columns.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    pub gens: BTreeMap<i64, Vec<Gen>>,
    pub index: BTreeMap<(u64, usize), usize>,
    pub d: BTreeMap<i64, Matrix>,
}

impl FilteredComplex {
    pub fn differential(&self, i: i64) -> Matrix {
        self.d.get(&i).cloned().unwrap_or_default()
    }

    pub fn check_d2(&self) -> Result<()> {
        for (&i, m) in &self.d {
            let Some(next) = self.d.get(&(i + 1)) else {
                continue;
            };
            for (j, col) in m.iter().enumerate() {
                if !apply(next, col).is_zero() {
                    let g = &self.gens[&i][j];
                    return Err(Error::Invariant(format!(
                        "d^2 != 0 on vertex {:b} class {}",
                        g.vertex, g.class
                    )));
                }
            }
        }
        Ok(())
    }

    /// `sum (-1)^i q^level` over the basis, as exponent -> coefficient.
    pub fn euler(&self) -> BTreeMap<i64, i64> {
        let mut out: BTreeMap<i64, i64> = BTreeMap::new();
        for (&i, g) in &self.gens {
            for x in g {
                *out.entry(x.level).or_default() += if i % 2 == 0 { 1 } else { -1 };
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    pub fn total_rank(&self) -> usize {
        self.gens.values().map(|g| g.len()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Potential;

    #[test]
    fn hopf_cube_is_a_complex() {
        let loc = Locals::new(&Potential::new(vec![q(1), q(-1)]).unwrap());
        let cube = Cube::build(&Diagram::preset("hopf+").unwrap(), &loc, 8).unwrap();
        cube.check_faces().unwrap();
        cube.check_edge_degrees().unwrap();
        let cx = cube.complex();
        cx.check_d2().unwrap();
        assert_eq!(cx.gens.keys().copied().collect::<Vec<_>>(), vec![0, 1, 2]);
    }
}
