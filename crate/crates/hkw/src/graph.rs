//! Resolution graphs: sites (arcs or thick edges) on shared edge variables, plus free circles.

use crate::diagram::Diagram;
use crate::koszul::{Factor, Koszul};
use crate::local::{Config, Locals, CROSSED, ORIENTED, THICK};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Site {
    /// Global variables of the local endpoints `x1..x4`.
    pub vars: [usize; 4],
    pub config: Config,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    pub nvars: usize,
    pub sites: Vec<Site>,
    /// Variables of crossingless circles.
    pub circles: Vec<usize>,
}

/// Which resolution a thick edge takes under an admissible coloring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThickType {
    /// `phi(x1) = phi(x3)`: opened into the oriented smoothing.
    I,
    /// `phi(x1) = phi(x4)`: opened into the crossed arcs.
    II,
}

impl Graph {
    /// The resolution of `d` picking, at crossing `c`, the thick edge iff the crossing is
    /// positive and bit `c` of `v` is set, or negative and the bit is clear.
    pub fn resolve(d: &Diagram, v: u64) -> Graph {
        let edges = d.edges();
        let var = |e: usize| edges.binary_search(&e).unwrap();
        let sites = d
            .crossings
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let bit = v >> i & 1 == 1;
                let thick = bit == c.positive;
                let l = c.site_labels();
                Site {
                    vars: l.map(var),
                    config: if thick { THICK } else { ORIENTED },
                }
            })
            .collect();
        let nv = edges.len();
        Graph {
            nvars: nv + d.loops,
            sites,
            circles: (nv..nv + d.loops).collect(),
        }
    }

    pub fn with_config(&self, site: usize, c: Config) -> Graph {
        let mut g = self.clone();
        g.sites[site].config = c;
        g
    }

    pub fn thick_count(&self) -> usize {
        self.sites.iter().filter(|s| s.config == THICK).count()
    }

    /// Global factors: site `s` in slots `2s, 2s+1`, then one factor per circle.
    pub fn koszul(&self, loc: &Locals) -> Koszul {
        let mut factors = vec![];
        let mut shift = 0;
        for s in &self.sites {
            let (fs, sh) = loc.factors(s.config);
            shift += sh;
            let m = |v: usize| s.vars[v];
            for f in fs {
                factors.push(Factor {
                    a: f.a.rename(&m),
                    b: f.b.rename(&m),
                    delta: f.delta,
                });
            }
        }
        for &c in &self.circles {
            factors.push(Factor {
                a: loc.pot.dw(c),
                b: crate::poly::Poly::zero(),
                delta: 1 - loc.n as i64,
            });
        }
        Koszul::new(loc.n, factors, shift, 0)
    }

    fn arc_classes(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.nvars).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for s in &self.sites {
            if let Config::Arcs(pairs) = s.config {
                for (o, i) in pairs {
                    let (a, b) = (find(&mut parent, s.vars[o]), find(&mut parent, s.vars[i]));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        (0..self.nvars).map(|v| find(&mut parent, v)).collect()
    }

    /// Colorings of the variables by root indices satisfying the arc and thick-edge rules.
    pub fn admissible_states(&self, n: usize) -> Vec<Vec<usize>> {
        let class = self.arc_classes();
        let reps: Vec<usize> = (0..self.nvars).filter(|&v| class[v] == v).collect();
        let pos = |v: usize| reps.binary_search(&class[v]).unwrap();
        // Thick constraints indexed by the last class they involve.
        let thick: Vec<[usize; 4]> = self
            .sites
            .iter()
            .filter(|s| s.config == THICK)
            .map(|s| s.vars.map(pos))
            .collect();
        let mut due: Vec<Vec<usize>> = vec![vec![]; reps.len()];
        for (t, vs) in thick.iter().enumerate() {
            due[*vs.iter().max().unwrap()].push(t);
        }
        let ok = |c: &[usize], vs: &[usize; 4]| {
            let [a, b, x, y] = vs.map(|v| c[v]);
            a != b && ((a == x && b == y) || (a == y && b == x))
        };
        let mut out = vec![];
        let mut col = vec![0usize; reps.len()];
        fn rec(
            k: usize,
            n: usize,
            col: &mut Vec<usize>,
            due: &[Vec<usize>],
            thick: &[[usize; 4]],
            ok: &dyn Fn(&[usize], &[usize; 4]) -> bool,
            out: &mut Vec<Vec<usize>>,
        ) {
            if k == col.len() {
                out.push(col.clone());
                return;
            }
            for r in 0..n {
                col[k] = r;
                if due[k].iter().all(|&t| ok(col, &thick[t])) {
                    rec(k + 1, n, col, due, thick, ok, out);
                }
            }
        }
        rec(0, n, &mut col, &due, &thick, &ok, &mut out);
        out.into_iter()
            .map(|c| (0..self.nvars).map(|v| c[pos(v)]).collect())
            .collect()
    }

    pub fn thick_type(&self, site: usize, phi: &[usize]) -> ThickType {
        let v = self.sites[site].vars;
        if phi[v[0]] == phi[v[2]] {
            ThickType::I
        } else {
            ThickType::II
        }
    }

    /// `Gamma'_phi`: every thick edge opened according to its type.
    pub fn opened(&self, phi: &[usize]) -> Graph {
        let mut g = self.clone();
        for i in 0..g.sites.len() {
            if g.sites[i].config == THICK {
                g.sites[i].config = match self.thick_type(i, phi) {
                    ThickType::I => ORIENTED,
                    ThickType::II => CROSSED,
                };
            }
        }
        g
    }

    /// Circles of an arcs-only graph, as the list of variables on each.
    pub fn circles_of_arcs(&self) -> Vec<Vec<usize>> {
        assert!(self.thick_count() == 0, "circles are defined for arcs-only graphs");
        let class = self.arc_classes();
        let mut out: Vec<Vec<usize>> = vec![];
        let mut idx = std::collections::BTreeMap::new();
        for v in 0..self.nvars {
            let k = *idx.entry(class[v]).or_insert_with(|| {
                out.push(vec![]);
                out.len() - 1
            });
            out[k].push(v);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_kink_state_counts() {
        let d = Diagram::preset("unknot-kink1").unwrap();
        for n in 2..=4 {
            let g0 = Graph::resolve(&d, 0);
            assert_eq!(g0.thick_count(), 0);
            assert_eq!(g0.admissible_states(n).len(), n * n);
            // The tadpole: n (n - 1) colorings.
            let g1 = Graph::resolve(&d, 1);
            assert_eq!(g1.admissible_states(n).len(), n * (n - 1));
        }
    }

    #[test]
    fn opened_graph_is_arcs_only() {
        let d = Diagram::preset("trefoil+").unwrap();
        let g = Graph::resolve(&d, 0b111);
        for phi in g.admissible_states(3) {
            let o = g.opened(&phi);
            assert_eq!(o.thick_count(), 0);
            assert_eq!(o.admissible_states(3).iter().filter(|p| **p == phi).count(), 1);
        }
    }
}
