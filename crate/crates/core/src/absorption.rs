//! Monochromatic reachability and absorbing sets.
//!
//! `x` is absorbed by `y` when a monochromatic path of length at least one
//! runs from `x` to `y`. The coverage set `A(y)` is `y` together with every
//! vertex absorbed by `y`, so a set `S` is absorbing exactly when the
//! coverage sets of its members cover every vertex.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::bitmatrix::BitMatrix;
use crate::construction::{validate_structure, BagLayout, Violation};
use crate::tournament::{ColourId, ColouredTournament, ModelError, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AbsorptionError {
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: u32, vertex_count: usize },
    #[error("instance violates the bag colour rule: {0}")]
    Structure(Violation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsorptionRelation {
    coverage: Vec<FixedBitSet>,
}

impl AbsorptionRelation {
    /// `coverage[y]` must contain `y`.
    pub(crate) fn from_coverage(coverage: Vec<FixedBitSet>) -> Self {
        debug_assert!(coverage.iter().enumerate().all(|(y, a)| a.contains(y)));
        Self { coverage }
    }

    pub fn vertex_count(&self) -> usize {
        self.coverage.len()
    }

    /// `A(y)`.
    pub fn coverage(&self, y: usize) -> &FixedBitSet {
        &self.coverage[y]
    }

    pub fn coverage_sets(&self) -> &[FixedBitSet] {
        &self.coverage
    }

    pub fn is_absorbed_by(&self, x: usize, y: usize) -> bool {
        x != y && self.coverage[y].contains(x)
    }

    /// Number of ordered pairs `(x, y)`, `x != y`, with `x` absorbed by `y`.
    pub fn pair_count(&self) -> usize {
        self.coverage.iter().map(|a| a.count_ones(..) - 1).sum()
    }

    /// Pairs `(x, y)` ordered by `y`, then `x`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.coverage
            .iter()
            .enumerate()
            .flat_map(|(y, a)| a.ones().filter(move |&x| x != y).map(move |x| (x, y)))
    }

    /// Map from `|A(y)|` to the number of vertices `y` with that coverage size.
    pub fn coverage_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for a in &self.coverage {
            *hist.entry(a.count_ones(..)).or_insert(0) += 1;
        }
        hist
    }

    pub fn covered_by(&self, set: &[VertexId]) -> Result<FixedBitSet, AbsorptionError> {
        let n = self.vertex_count();
        let mut covered = FixedBitSet::with_capacity(n);
        for &v in set {
            if v.index() >= n {
                return Err(AbsorptionError::VertexOutOfRange { vertex: v.0, vertex_count: n });
            }
            covered.union_with(&self.coverage[v.index()]);
        }
        Ok(covered)
    }

    /// True iff every vertex outside `set` is absorbed by a member of `set`.
    pub fn is_absorbing(&self, set: &[VertexId]) -> Result<bool, AbsorptionError> {
        Ok(self.covered_by(set)?.is_full())
    }
}

/// Reflexive-transitive closure of the colour-`c` subgraph.
pub fn monochromatic_reachability(t: &ColouredTournament, c: ColourId) -> Result<BitMatrix, ModelError> {
    Ok(t.colour_subgraph(c)?.reflexive_closure())
}

/// General absorption: per-colour closure over reversed arcs, so that row `y`
/// of each closure is the set of vertices with a colour-`c` path into `y`.
pub fn absorbed_by(t: &ColouredTournament) -> AbsorptionRelation {
    let n = t.vertex_count();
    let mut coverage = BitMatrix::identity(n).into_rows();
    for c in 1..=t.colour_count() {
        let sub = t.colour_subgraph(ColourId(c)).expect("colour in range");
        if sub.pair_count() == 0 {
            continue;
        }
        let into = sub.transpose().reflexive_closure();
        for (a, row) in coverage.iter_mut().zip(into.rows()) {
            a.union_with(row);
        }
    }
    AbsorptionRelation::from_coverage(coverage)
}

/// Absorption on a bag instance. Monochromatic paths there either stay inside
/// a bag or have length one, so coverage is every in-neighbour plus the
/// in-bag ancestors under colour `n`. In-bag reachability uses a Warshall
/// pass on each bag's own adjacency matrix.
pub fn absorbed_by_construction(
    t: &ColouredTournament,
    layout: &BagLayout,
) -> Result<AbsorptionRelation, AbsorptionError> {
    if let Some(v) = validate_structure(t, layout).violations.into_iter().next() {
        return Err(AbsorptionError::Structure(v));
    }
    let n = t.vertex_count();
    let mut coverage = vec![FixedBitSet::with_capacity(n); n];
    for (x, succ) in t.orientation().rows().iter().enumerate() {
        for y in succ.ones() {
            coverage[y].insert(x);
        }
    }
    let size = layout.copies();
    let mut reach = vec![false; size * size];
    for bag in 0..layout.bag_count() {
        let base = layout.bag_members(bag).start;
        for i in 0..size {
            for j in 0..size {
                reach[i * size + j] = i != j && t.has_arc(base + i, base + j);
            }
        }
        for k in 0..size {
            for i in 0..size {
                if reach[i * size + k] {
                    for j in 0..size {
                        if reach[k * size + j] {
                            reach[i * size + j] = true;
                        }
                    }
                }
            }
        }
        for j in 0..size {
            let a = &mut coverage[base + j];
            a.insert(base + j);
            for i in 0..size {
                if reach[i * size + j] {
                    a.insert(base + i);
                }
            }
        }
    }
    Ok(AbsorptionRelation::from_coverage(coverage))
}

/// A colour-`c` path `u -> v -> w` of length two, if any.
pub fn find_monochromatic_two_path(t: &ColouredTournament, c: ColourId) -> Result<Option<[VertexId; 3]>, ModelError> {
    let sub = t.colour_subgraph(c)?;
    for (u, v) in sub.pairs() {
        if let Some(w) = sub.row(v).ones().next() {
            return Ok(Some([u.into(), v.into(), w.into()]));
        }
    }
    Ok(None)
}
