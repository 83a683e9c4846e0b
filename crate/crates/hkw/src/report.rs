//! Text and structured renderings of results. Ordering is deterministic everywhere.

use serde::Serialize;

use crate::filtered::{HomologyResult, SliceBound};
use crate::potential::Potential;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Serialize)]
struct DimRow {
    i: i64,
    j: i64,
    dim: usize,
}

#[derive(Serialize)]
struct GenRow {
    psi: Vec<String>,
    i: i64,
    j: i64,
}

#[derive(Serialize)]
struct HomologyDoc<'a> {
    n: usize,
    roots: Vec<String>,
    diagram: &'a str,
    components: usize,
    total_dim: usize,
    dims: Vec<DimRow>,
    generators: Vec<GenRow>,
}

fn psi_roots(pot: &Potential, psi: &[usize]) -> Vec<String> {
    psi.iter().map(|r| pot.roots[*r].to_string()).collect()
}

/// `i j dim` lines, then the generator table as `#`-prefixed lines.
pub fn homology(h: &HomologyResult, pot: &Potential, pd: &str, fmt: Format) -> String {
    match fmt {
        Format::Text => {
            let mut s = String::new();
            for ((i, j), d) in &h.dims {
                s.push_str(&format!("{i} {j} {d}\n"));
            }
            s.push_str(&format!("# total {}\n", h.total));
            for g in &h.generators {
                s.push_str(&format!(
                    "# psi ({}) i={} j={}\n",
                    psi_roots(pot, &g.psi).join(","),
                    g.degree,
                    g.level
                ));
            }
            s
        }
        Format::Structured => {
            let doc = HomologyDoc {
                n: h.n,
                roots: pot.roots.iter().map(|r| r.to_string()).collect(),
                diagram: pd,
                components: h.components,
                total_dim: h.total,
                dims: h
                    .dims
                    .iter()
                    .map(|((i, j), d)| DimRow { i: *i, j: *j, dim: *d })
                    .collect(),
                generators: h
                    .generators
                    .iter()
                    .map(|g| GenRow {
                        psi: psi_roots(pot, &g.psi),
                        i: g.degree,
                        j: g.level,
                    })
                    .collect(),
            };
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
    }
}

pub fn bound(b: &SliceBound, fmt: Format) -> String {
    match fmt {
        Format::Text => b.render() + "\n",
        Format::Structured => serde_json::to_string_pretty(b).expect("serializable") + "\n",
    }
}
