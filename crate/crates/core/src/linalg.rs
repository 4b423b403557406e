//! Incremental reduced row echelon form over `Q(q)`.
//!
//! Vectors are sparse maps from an ordered column key to a coefficient. The
//! pivot of every stored row is its largest key, and stored rows are kept
//! fully inter-reduced, so the row set is the unique reduced echelon basis of
//! the span and does not depend on insertion order.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use crate::scalar::RatFunc;

pub type SparseVec<K> = BTreeMap<K, RatFunc>;

/// `dst += c * src`, dropping cancelled entries.
pub fn axpy<K: Ord + Clone>(dst: &mut SparseVec<K>, c: &RatFunc, src: &SparseVec<K>) {
    if c.is_zero() {
        return;
    }
    for (k, v) in src {
        let t = c * v;
        match dst.get_mut(k) {
            Some(x) => {
                *x = &*x + &t;
                if x.is_zero() {
                    dst.remove(k);
                }
            }
            None => {
                dst.insert(k.clone(), t);
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct RowSpace<K: Ord + Clone + Hash> {
    rows: Vec<SparseVec<K>>,
    pivots: HashMap<K, usize>,
}

impl<K: Ord + Clone + Hash> Default for RowSpace<K> {
    fn default() -> Self {
        RowSpace {
            rows: Vec::new(),
            pivots: HashMap::new(),
        }
    }
}

impl<K: Ord + Clone + Hash> RowSpace<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors<'a, I>(vs: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseVec<K>>,
        K: 'a,
    {
        let mut s = RowSpace::new();
        for v in vs {
            s.insert(v.clone());
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Fully reduces `v` against the stored rows.
    pub fn reduce(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        // Stored rows carry no pivot keys besides their own, so eliminating
        // one pivot never reintroduces another: a single sweep suffices.
        let keys: Vec<K> = v
            .keys()
            .filter(|k| self.pivots.contains_key(*k))
            .cloned()
            .collect();
        for k in keys {
            if let Some(c) = v.get(&k).cloned() {
                axpy(&mut v, &-&c, &self.rows[self.pivots[&k]]);
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Adds `v` to the span; returns false if it was already contained.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let mut r = self.reduce(v);
        let Some((pivot, lead)) = r.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.inv().expect("nonzero pivot");
        for x in r.values_mut() {
            *x = &*x * &inv;
        }
        for row in self.rows.iter_mut() {
            if let Some(c) = row.get(&pivot).cloned() {
                axpy(row, &-&c, &r);
            }
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(r);
        true
    }

    /// Rows sorted by descending pivot.
    pub fn rows(&self) -> Vec<&SparseVec<K>> {
        let mut rs: Vec<&SparseVec<K>> = self.rows.iter().collect();
        rs.sort_by(|a, b| b.keys().next_back().cmp(&a.keys().next_back()));
        rs
    }

    pub fn pivot_row(&self, k: &K) -> Option<&SparseVec<K>> {
        self.pivots.get(k).map(|&i| &self.rows[i])
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.pivots.contains_key(k)
    }

    pub fn same_span(&self, other: &RowSpace<K>) -> bool {
        self.rank() == other.rank() && other.rows.iter().all(|v| self.contains(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(u32, i64)]) -> SparseVec<u32> {
        entries.iter().map(|&(k, c)| (k, RatFunc::int(c))).collect()
    }

    #[test]
    fn rank_and_membership() {
        let mut s = RowSpace::new();
        assert!(s.insert(v(&[(0, 1), (1, 1)])));
        assert!(s.insert(v(&[(1, 1), (2, 1)])));
        assert!(!s.insert(v(&[(0, 1), (2, -1)])));
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&v(&[(0, 2), (1, 3), (2, 1)])));
        assert!(!s.contains(&v(&[(0, 1)])));
    }

    #[test]
    fn reduced_basis_is_order_independent() {
        let a = v(&[(0, 1), (1, 2), (3, 1)]);
        let b = v(&[(1, 1), (3, 5)]);
        let c = v(&[(0, 7), (2, 1)]);
        let s1 = RowSpace::from_vectors([&a, &b, &c]);
        let s2 = RowSpace::from_vectors([&c, &a, &b]);
        assert_eq!(s1.rows(), s2.rows());
        assert!(s1.same_span(&s2));
    }
}
