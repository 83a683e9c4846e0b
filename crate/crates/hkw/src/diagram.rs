//! Oriented link diagrams in planar-diagram notation with explicit crossing signs.
//!
//! `X+(i,j,k,l)`: strands enter at `i, l` and leave at `j, k`; the under strand runs `i -> k`
//! and the over strand `l -> j`. `X-(i,j,k,l)`: strands enter at `i, j` and leave at `k, l`;
//! under `i -> k`, over `j -> l`. Labels go counterclockwise starting at the incoming under strand.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub positive: bool,
    pub e: [usize; 4],
}

impl Crossing {
    pub fn ins(&self) -> [usize; 2] {
        if self.positive {
            [self.e[0], self.e[3]]
        } else {
            [self.e[0], self.e[1]]
        }
    }

    pub fn outs(&self) -> [usize; 2] {
        if self.positive {
            [self.e[1], self.e[2]]
        } else {
            [self.e[2], self.e[3]]
        }
    }

    /// Strand pairs `(in, out)`.
    pub fn strands(&self) -> [(usize, usize); 2] {
        let [i, j, k, l] = self.e;
        if self.positive {
            [(i, k), (l, j)]
        } else {
            [(i, k), (j, l)]
        }
    }

    /// Endpoints `(x1, x2, x3, x4)` of the local model: two outgoing, then two incoming, with
    /// the oriented smoothing joining `x3 -> x1` and `x4 -> x2`.
    pub fn site_labels(&self) -> [usize; 4] {
        let [i, j, k, l] = self.e;
        if self.positive {
            [j, k, i, l]
        } else {
            [l, k, i, j]
        }
    }
}

/// A diagram: crossings plus `loops` extra crossingless unknotted components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub crossings: Vec<Crossing>,
    pub loops: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub crossings: usize,
    pub positive: usize,
    pub negative: usize,
    pub writhe: i64,
    pub components: usize,
    pub all_positive: bool,
}

impl Diagram {
    pub fn unknot() -> Self {
        Diagram {
            crossings: vec![],
            loops: 1,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = t
            .strip_prefix("PD[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected PD[...], got {s:?}")))?;
        if body.is_empty() {
            return Ok(Diagram::unknot());
        }
        let mut crossings = vec![];
        let mut loops = 0;
        let mut rest = body;
        loop {
            if let Some(r) = rest.strip_prefix('O') {
                loops += 1;
                rest = r;
                if rest.is_empty() {
                    break;
                }
                rest = rest
                    .strip_prefix(',')
                    .ok_or_else(|| Error::Parse(format!("expected ',' at {rest:?}")))?;
                continue;
            }
            let positive = if let Some(r) = rest.strip_prefix("X+(") {
                rest = r;
                true
            } else if let Some(r) = rest.strip_prefix("X-(") {
                rest = r;
                false
            } else {
                return Err(Error::Parse(format!("expected X+(, X-( or O at {rest:?}")));
            };
            let close = rest.find(')').ok_or_else(|| Error::Parse("unclosed crossing".into()))?;
            let labels: Vec<usize> = rest[..close]
                .split(',')
                .map(|x| x.parse::<usize>().map_err(|_| Error::Parse(format!("bad label {x:?}"))))
                .collect::<Result<_>>()?;
            if labels.len() != 4 {
                return Err(Error::Parse(format!("crossing needs 4 labels, got {}", labels.len())));
            }
            crossings.push(Crossing {
                positive,
                e: [labels[0], labels[1], labels[2], labels[3]],
            });
            rest = &rest[close + 1..];
            if rest.is_empty() {
                break;
            }
            rest = rest
                .strip_prefix(',')
                .ok_or_else(|| Error::Parse(format!("expected ',' at {rest:?}")))?;
        }
        let d = Diagram { crossings, loops }.normalized();
        d.validate()?;
        Ok(d)
    }

    /// `O` marks a crossingless unknotted component; `PD[]` is the unknot.
    pub fn to_pd(&self) -> String {
        if self.crossings.is_empty() && self.loops == 1 {
            return "PD[]".into();
        }
        let mut xs: Vec<String> = self
            .crossings
            .iter()
            .map(|c| {
                let s = if c.positive { '+' } else { '-' };
                format!("X{s}({},{},{},{})", c.e[0], c.e[1], c.e[2], c.e[3])
            })
            .collect();
        xs.extend((0..self.loops).map(|_| "O".to_string()));
        format!("PD[{}]", xs.join(", "))
    }

    /// Relabel edges `1..=2k` in order of first appearance.
    fn normalized(mut self) -> Self {
        let mut map = BTreeMap::new();
        for c in &self.crossings {
            for &e in &c.e {
                let next = map.len() + 1;
                map.entry(e).or_insert(next);
            }
        }
        for c in self.crossings.iter_mut() {
            for e in c.e.iter_mut() {
                *e = map[e];
            }
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let mut ins: BTreeMap<usize, usize> = BTreeMap::new();
        let mut outs: BTreeMap<usize, usize> = BTreeMap::new();
        for c in &self.crossings {
            for e in c.ins() {
                *ins.entry(e).or_default() += 1;
            }
            for e in c.outs() {
                *outs.entry(e).or_default() += 1;
            }
        }
        for (e, k) in ins.iter().chain(outs.iter()) {
            if *k != 1 {
                return Err(Error::Validation(format!("edge {e} is used {k} times at one end")));
            }
        }
        if ins.keys().ne(outs.keys()) {
            return Err(Error::Validation(
                "every edge must leave one crossing and enter another".into(),
            ));
        }
        if self.crossings.is_empty() && self.loops == 0 {
            return Err(Error::Validation("empty diagram".into()));
        }
        Ok(())
    }

    pub fn edges(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.crossings.iter().flat_map(|c| c.e).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Component index of every edge label; crossingless loops come after these.
    pub fn edge_components(&self) -> BTreeMap<usize, usize> {
        let mut next = BTreeMap::new();
        for c in &self.crossings {
            for (i, o) in c.strands() {
                next.insert(i, o);
            }
        }
        let mut comp = BTreeMap::new();
        let mut count = 0;
        for &start in next.keys() {
            if comp.contains_key(&start) {
                continue;
            }
            let mut e = start;
            while comp.insert(e, count).is_none() {
                e = next[&e];
            }
            count += 1;
        }
        comp
    }

    pub fn components(&self) -> usize {
        let comp = self.edge_components();
        comp.values().max().map_or(0, |m| m + 1) + self.loops
    }

    /// Number of circles in the oriented resolution.
    pub fn seifert_circles(&self) -> usize {
        let v = self
            .crossings
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.positive)
            .map(|(i, _)| 1u64 << i)
            .sum();
        crate::graph::Graph::resolve(self, v).circles_of_arcs().len()
    }

    pub fn stats(&self) -> Stats {
        let positive = self.crossings.iter().filter(|c| c.positive).count();
        let negative = self.crossings.len() - positive;
        Stats {
            crossings: self.crossings.len(),
            positive,
            negative,
            writhe: positive as i64 - negative as i64,
            components: self.components(),
            all_positive: negative == 0,
        }
    }

    pub fn mirror(&self) -> Diagram {
        let crossings = self
            .crossings
            .iter()
            .map(|c| {
                let [i, j, k, l] = c.e;
                // Same strands with the over/under roles exchanged, relabelled from the new
                // incoming under strand.
                if c.positive {
                    Crossing {
                        positive: false,
                        e: [l, i, j, k],
                    }
                } else {
                    Crossing {
                        positive: true,
                        e: [j, k, l, i],
                    }
                }
            })
            .collect();
        Diagram {
            crossings,
            loops: self.loops,
        }
    }

    /// Closure of a braid word on `strands` strands; letter `+i` is `sigma_i`, `-i` its inverse.
    pub fn braid_closure(strands: usize, word: &[i32]) -> Result<Diagram> {
        if strands == 0 {
            return Err(Error::Validation("a braid needs at least one strand".into()));
        }
        let mut cur: Vec<usize> = (1..=strands).collect();
        let mut fresh = strands + 1;
        let mut touched = vec![false; strands];
        let mut crossings = vec![];
        for &w in word {
            let i = w.unsigned_abs() as usize;
            if i == 0 || i >= strands {
                return Err(Error::Validation(format!(
                    "generator {w} out of range for {strands} strands"
                )));
            }
            let (a, b) = (cur[i - 1], cur[i]);
            let (c, d) = (fresh, fresh + 1);
            fresh += 2;
            let e = if w > 0 { [a, c, d, b] } else { [a, b, d, c] };
            crossings.push(Crossing { positive: w > 0, e });
            cur[i - 1] = c;
            cur[i] = d;
            touched[i - 1] = true;
            touched[i] = true;
        }
        let close: BTreeMap<usize, usize> = cur.iter().enumerate().map(|(p, &e)| (e, p + 1)).collect();
        for c in crossings.iter_mut() {
            for e in c.e.iter_mut() {
                if let Some(&t) = close.get(e) {
                    *e = t;
                }
            }
        }
        let loops = touched.iter().filter(|t| !**t).count();
        let d = Diagram { crossings, loops }.normalized();
        d.validate()?;
        Ok(d)
    }

    pub fn torus(p: usize, q: usize) -> Result<Diagram> {
        if p < 2 || q < 1 {
            return Err(Error::Validation(format!(
                "torus link T({p},{q}) needs p >= 2 and q >= 1"
            )));
        }
        let mut word = vec![];
        for _ in 0..q {
            word.extend(1..p as i32);
        }
        Diagram::braid_closure(p, &word)
    }

    pub fn preset(name: &str) -> Result<Diagram> {
        let b = Diagram::braid_closure;
        match name {
            "unknot" => Ok(Diagram::unknot()),
            "unknot-kink1" => b(2, &[1]),
            "unknot-kink2" => b(3, &[1, 2]),
            "hopf+" => b(2, &[1, 1]),
            "hopf-" => b(2, &[-1, -1]),
            "trefoil+" => b(2, &[1, 1, 1]),
            "trefoil-" => b(2, &[-1, -1, -1]),
            "figure8" => b(3, &[1, -2, 1, -2]),
            "trefoil+r2" => b(2, &[1, 1, 1, 1, -1]),
            "faux-borromean" => b(3, &[1, 2, 1, -2, -1, -2]),
            _ => {
                if let Some((p, q)) = parse_torus(name) {
                    Diagram::torus(p, q)
                } else {
                    Err(Error::Validation(format!(
                        "unknown preset {name:?}; known: {}",
                        PRESETS.join(", ")
                    )))
                }
            }
        }
    }
}

pub const PRESETS: &[&str] = &[
    "unknot",
    "unknot-kink1",
    "unknot-kink2",
    "hopf+",
    "hopf-",
    "trefoil+",
    "trefoil-",
    "figure8",
    "trefoil+r2",
    "faux-borromean",
    "T(p,q)",
];

fn parse_torus(s: &str) -> Option<(usize, usize)> {
    let r = s
        .strip_prefix("T(")
        .or_else(|| s.strip_prefix("t("))?
        .strip_suffix(')')?;
    let (p, q) = r.split_once(',')?;
    Some((p.trim().parse().ok()?, q.trim().parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let d = Diagram::parse("PD[X+(1,5,2,4), X+(3,1,4,6), X+(5,3,6,2)]").unwrap();
        assert_eq!(Diagram::parse(&d.to_pd()).unwrap(), d);
        assert_eq!(d.stats().writhe, 3);
        assert_eq!(d.components(), 1);
        let split = Diagram::parse("PD[X+(1,1,2,2), O]").unwrap();
        assert_eq!((split.loops, split.components()), (1, 2));
        assert_eq!(split.to_pd(), "PD[X+(1,1,2,2), O]");
        assert_eq!(Diagram::parse("PD[O,O]").unwrap().components(), 2);
        assert_eq!(Diagram::parse("PD[]").unwrap(), Diagram::unknot());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Diagram::parse("PD[X(1,2,3,4)]").is_err());
        assert!(Diagram::parse("PD[X+(1,2,3)]").is_err());
        assert!(Diagram::parse("PD[X+(1,2,3,4)]").is_err());
    }

    #[test]
    fn presets_have_expected_stats() {
        let cases = [
            ("unknot", 0, 0, 1),
            ("unknot-kink1", 1, 1, 1),
            ("unknot-kink2", 2, 2, 1),
            ("hopf+", 2, 2, 2),
            ("trefoil-", 3, -3, 1),
            ("figure8", 4, 0, 1),
            ("trefoil+r2", 5, 3, 1),
            ("faux-borromean", 6, 0, 3),
            ("T(3,4)", 8, 8, 1),
            ("T(2,4)", 4, 4, 2),
        ];
        for (name, k, w, l) in cases {
            let s = Diagram::preset(name).unwrap().stats();
            assert_eq!((s.crossings, s.writhe, s.components), (k, w, l), "{name}");
        }
    }

    #[test]
    fn mirror_flips_signs() {
        let d = Diagram::preset("trefoil+").unwrap();
        let m = d.mirror();
        m.validate().unwrap();
        assert_eq!(m.stats().writhe, -3);
        assert_eq!(m.components(), 1);
    }
}
