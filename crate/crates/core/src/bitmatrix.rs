//! Dense square boolean matrices stored as one bitset per row.

use fixedbitset::FixedBitSet;

/// A binary relation on `0..len`, row `u` holding every `v` with `(u, v)` present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<FixedBitSet>,
}

impl BitMatrix {
    pub fn new(len: usize) -> Self {
        Self { rows: vec![FixedBitSet::with_capacity(len); len] }
    }

    pub fn identity(len: usize) -> Self {
        let mut m = Self::new(len);
        for (i, row) in m.rows.iter_mut().enumerate() {
            row.insert(i);
        }
        m
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn insert(&mut self, u: usize, v: usize) {
        self.rows[u].insert(v);
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn row(&self, u: usize) -> &FixedBitSet {
        &self.rows[u]
    }

    pub fn rows(&self) -> &[FixedBitSet] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<FixedBitSet> {
        self.rows
    }

    /// Number of pairs in the relation.
    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    /// Number of pairs `(u, v)` with `u != v`.
    pub fn off_diagonal_count(&self) -> usize {
        self.rows
            .iter()
            .enumerate()
            .map(|(u, r)| r.count_ones(..) - usize::from(r.contains(u)))
            .sum()
    }

    /// All pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(u, r)| r.ones().map(move |v| (u, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::new(self.len());
        for (u, v) in self.pairs() {
            t.insert(v, u);
        }
        t
    }

    /// Reflexive-transitive closure: one breadth-first sweep per source, each
    /// frontier expanded by word-parallel row unions.
    pub fn reflexive_closure(&self) -> Self {
        let n = self.len();
        let mut rows = Vec::with_capacity(n);
        let mut next = FixedBitSet::with_capacity(n);
        for source in 0..n {
            let mut seen = FixedBitSet::with_capacity(n);
            seen.insert(source);
            let mut frontier = seen.clone();
            loop {
                next.clear();
                for v in frontier.ones() {
                    next.union_with(&self.rows[v]);
                }
                next.difference_with(&seen);
                if next.is_clear() {
                    break;
                }
                seen.union_with(&next);
                std::mem::swap(&mut frontier, &mut next);
            }
            rows.push(seen);
        }
        Self { rows }
    }
}
