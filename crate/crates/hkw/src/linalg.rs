//! Sparse rational vectors and an incremental echelon form that remembers how each row was built.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::poly::Q;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SVec(pub BTreeMap<usize, Q>);

impl SVec {
    pub fn new() -> Self {
        SVec(BTreeMap::new())
    }

    pub fn unit(i: usize) -> Self {
        let mut v = SVec::new();
        v.0.insert(i, Q::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Q {
        self.0.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_at(&mut self, i: usize, c: &Q) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(i).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&i);
        }
    }

    /// `self += c * o`.
    pub fn axpy(&mut self, c: &Q, o: &SVec) {
        if c.is_zero() {
            return;
        }
        for (i, x) in &o.0 {
            self.add_at(*i, &(c * x));
        }
    }

    pub fn scale(&self, c: &Q) -> SVec {
        if c.is_zero() {
            return SVec::new();
        }
        SVec(self.0.iter().map(|(i, x)| (*i, x * c)).collect())
    }

    pub fn lead(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    /// Entries with index `>= cut`.
    pub fn above(&self, cut: usize) -> SVec {
        SVec(self.0.range(cut..).map(|(i, x)| (*i, x.clone())).collect())
    }
}

/// Bookkeeping carried along with each row; must be linear.
pub trait Tag: Clone {
    fn zero() -> Self;
    fn axpy(&mut self, c: &Q, o: &Self);
    fn scale(&self, c: &Q) -> Self;
}

impl Tag for () {
    fn zero() -> Self {}
    fn axpy(&mut self, _: &Q, _: &Self) {}
    fn scale(&self, _: &Q) -> Self {}
}

impl Tag for SVec {
    fn zero() -> Self {
        SVec::new()
    }
    fn axpy(&mut self, c: &Q, o: &Self) {
        SVec::axpy(self, c, o)
    }
    fn scale(&self, c: &Q) -> Self {
        SVec::scale(self, c)
    }
}

impl<A: Tag, B: Tag> Tag for (A, B) {
    fn zero() -> Self {
        (A::zero(), B::zero())
    }
    fn axpy(&mut self, c: &Q, o: &Self) {
        self.0.axpy(c, &o.0);
        self.1.axpy(c, &o.1);
    }
    fn scale(&self, c: &Q) -> Self {
        (self.0.scale(c), self.1.scale(c))
    }
}

/// Rows keyed by their leading (largest) index, each normalized to leading coefficient 1.
/// Invariant: `row = sum of tagged inputs`, i.e. tags transform along with the rows.
#[derive(Clone, Debug)]
pub struct Echelon<T: Tag> {
    pub rows: BTreeMap<usize, (SVec, T)>,
}

impl<T: Tag> Default for Echelon<T> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<T: Tag> Echelon<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Subtract rows until no entry of `v` sits at a pivot; returns the remainder and the tag
    /// combination `t` with `v_in = remainder + (rows combined as in t)`.
    pub fn reduce(&self, v: &SVec) -> (SVec, T) {
        let mut v = v.clone();
        let mut t = T::zero();
        let mut cursor: Option<usize> = None;
        loop {
            let next = match cursor {
                None => v.0.keys().rev().find(|k| self.rows.contains_key(k)).copied(),
                Some(c) => {
                    v.0.range(..c)
                        .rev()
                        .map(|(k, _)| *k)
                        .find(|k| self.rows.contains_key(k))
                }
            };
            let Some(p) = next else { break };
            let c = v.get(p);
            let (row, tag) = &self.rows[&p];
            v.axpy(&-c.clone(), row);
            t.axpy(&c, tag);
            cursor = Some(p);
        }
        (v, t)
    }

    /// Insert `v` carrying `tag`. Returns `Err(t)` with `tag - t` describing a zero combination
    /// when `v` is dependent on the existing rows, otherwise the new pivot.
    pub fn insert(&mut self, v: &SVec, tag: T) -> std::result::Result<usize, T> {
        let (r, t) = self.reduce(v);
        let mut tag = tag;
        tag.axpy(&-Q::one(), &t);
        match r.lead() {
            None => Err(tag),
            Some(p) => {
                let inv = Q::one() / r.get(p);
                self.rows.insert(p, (r.scale(&inv), tag.scale(&inv)));
                Ok(p)
            }
        }
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce(v).0.is_zero()
    }
}

/// Rank of a list of columns.
pub fn rank(cols: &[SVec]) -> usize {
    let mut e: Echelon<()> = Echelon::new();
    for c in cols {
        let _ = e.insert(c, ());
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    fn v(xs: &[(usize, i64)]) -> SVec {
        let mut s = SVec::new();
        for (i, x) in xs {
            s.add_at(*i, &q(*x));
        }
        s
    }

    #[test]
    fn kernel_from_dependent_insert() {
        let mut e: Echelon<SVec> = Echelon::new();
        let cols = [v(&[(0, 1), (2, 1)]), v(&[(1, 1), (2, 2)]), v(&[(0, 1), (1, 2), (2, 5)])];
        let mut ker = vec![];
        for (i, c) in cols.iter().enumerate() {
            if let Err(k) = e.insert(c, SVec::unit(i)) {
                ker.push(k);
            }
        }
        assert_eq!(e.rank(), 2);
        assert_eq!(ker.len(), 1);
        let mut acc = SVec::new();
        for (i, c) in ker[0].0.iter() {
            acc.axpy(c, &cols[*i]);
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn reduce_reports_combination() {
        let mut e: Echelon<SVec> = Echelon::new();
        e.insert(&v(&[(3, 2), (1, 1)]), SVec::unit(0)).unwrap();
        e.insert(&v(&[(1, 1)]), SVec::unit(1)).unwrap();
        let (r, t) = e.reduce(&v(&[(3, 4), (1, 5), (0, 1)]));
        assert_eq!(r, v(&[(0, 1)]));
        assert_eq!(t, v(&[(0, 2), (1, 3)]));
    }
}
