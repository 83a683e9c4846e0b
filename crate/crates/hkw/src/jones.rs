//! Kauffman-bracket state sum for the unnormalized Jones polynomial, as an independent oracle.

use std::collections::BTreeMap;

use crate::diagram::Diagram;
use crate::error::{Error, Result};

/// Laurent polynomial in `q`: exponent -> coefficient.
pub type Laurent = BTreeMap<i64, i64>;

fn mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (i, x) in a {
        for (j, y) in b {
            *out.entry(i + j).or_default() += x * y;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn loops(pairs: &[(usize, usize)], labels: usize) -> usize {
    let mut parent: Vec<usize> = (0..=labels).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(a, b) in pairs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    (1..=labels).filter(|&x| find(&mut parent, x) == x).count()
}

/// Khovanov's normalization: `(-1)^{n-} q^{n+ - 2n-} sum_s (-q)^{r(s)} (q + 1/q)^{|s|}`, so the
/// unknot gives `q + 1/q` and the right-handed trefoil `q + q^3 + q^5 - q^9`.
pub fn khovanov_jones(d: &Diagram) -> Result<Laurent> {
    let k = d.crossings.len();
    if k > 12 {
        return Err(Error::Validation(format!(
            "bracket oracle is capped at 12 crossings, got {k}"
        )));
    }
    let labels = d.edges().len();
    let circle: Laurent = [(1, 1), (-1, 1)].into_iter().collect();
    let mut total = Laurent::new();
    for s in 0..1u64 << k {
        let mut pairs = vec![];
        for (c, x) in d.crossings.iter().enumerate() {
            let [i, j, kk, l] = x.e;
            if s >> c & 1 == 0 {
                pairs.push((i, j));
                pairs.push((kk, l));
            } else {
                pairs.push((i, l));
                pairs.push((j, kk));
            }
        }
        let r = s.count_ones() as i64;
        let mut term: Laurent = [(r, if r % 2 == 0 { 1 } else { -1 })].into_iter().collect();
        for _ in 0..loops(&pairs, labels) {
            term = mul(&term, &circle);
        }
        for (e, c) in term {
            *total.entry(e).or_default() += c;
        }
    }
    for _ in 0..d.loops {
        total = mul(&total, &circle);
    }
    let np = d.crossings.iter().filter(|c| c.positive).count() as i64;
    let nm = k as i64 - np;
    let sign = if nm % 2 == 0 { 1 } else { -1 };
    let mut out: Laurent = total.into_iter().map(|(e, c)| (e + np - 2 * nm, sign * c)).collect();
    out.retain(|_, c| *c != 0);
    Ok(out)
}

/// `P_2` in the filtration convention of the homology: the bracket with `q -> 1/q`.
pub fn p2(d: &Diagram) -> Result<Laurent> {
    Ok(khovanov_jones(d)?.into_iter().map(|(e, c)| (-e, c)).collect())
}

pub fn render(p: &Laurent) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (e, c)) in p.iter().rev().enumerate() {
        let sign = match (i, *c < 0) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        };
        let a = c.abs();
        let coef = if a == 1 && *e != 0 {
            String::new()
        } else {
            a.to_string()
        };
        let var = match e {
            0 => String::new(),
            1 => "q".into(),
            _ => format!("q^{e}"),
        };
        s.push_str(&format!("{sign}{coef}{var}"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(xs: &[(i64, i64)]) -> Laurent {
        xs.iter().copied().collect()
    }

    #[test]
    fn known_values() {
        let j = |n: &str| khovanov_jones(&Diagram::preset(n).unwrap()).unwrap();
        assert_eq!(j("unknot"), lp(&[(-1, 1), (1, 1)]));
        assert_eq!(j("unknot-kink1"), lp(&[(-1, 1), (1, 1)]));
        assert_eq!(j("trefoil+"), lp(&[(1, 1), (3, 1), (5, 1), (9, -1)]));
        assert_eq!(j("trefoil-"), lp(&[(-1, 1), (-3, 1), (-5, 1), (-9, -1)]));
        assert_eq!(j("figure8"), lp(&[(-5, 1), (5, 1)]));
        assert_eq!(j("hopf+"), lp(&[(0, 1), (2, 1), (4, 1), (6, 1)]));
    }
}
