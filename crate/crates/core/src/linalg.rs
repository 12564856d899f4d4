//! Incremental row echelon form over exact rationals, for vectors indexed by
//! any totally ordered key. The pivot of a row is its largest key.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

pub type SparseVec<K> = BTreeMap<K, Scalar>;

#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    /// pivot key -> row with leading coefficient 1
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon {
            rows: BTreeMap::new(),
        }
    }
}

fn axpy<K: Ord + Clone>(acc: &mut SparseVec<K>, c: &Scalar, row: &SparseVec<K>) {
    for (k, v) in row {
        let entry = acc.entry(k.clone()).or_insert_with(Scalar::zero);
        *entry += &(c * v);
        if entry.is_zero() {
            acc.remove(k);
        }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.rows.contains_key(k)
    }

    /// Remainder of `v` after eliminating every pivot, top-down.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut v = v.clone();
        let mut bound: Option<K> = None;
        loop {
            let next = match &bound {
                None => v.iter().next_back(),
                Some(b) => v.range(..b.clone()).next_back(),
            }
            .map(|(k, c)| (k.clone(), c.clone()));
            let Some((k, c)) = next else {
                return v;
            };
            if let Some(row) = self.rows.get(&k) {
                axpy(&mut v, &-c, row);
            }
            bound = Some(k);
        }
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns the new pivot when `v` was independent.
    pub fn insert(&mut self, v: &SparseVec<K>) -> Option<K> {
        let mut r = self.reduce(v);
        let (k, lead) = r.iter().next_back().map(|(k, c)| (k.clone(), c.clone()))?;
        let inv = lead.recip();
        for c in r.values_mut() {
            *c = &*c * &inv;
        }
        self.rows.insert(k.clone(), r);
        Some(k)
    }
}
