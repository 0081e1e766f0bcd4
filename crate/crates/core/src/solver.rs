//! Minimum absorbing sets as set cover over the coverage sets `A(y)`.
//!
//! The exact search branches on the uncovered vertex with the fewest
//! remaining candidates and tries those candidates in ascending id order.
//! Candidate `y_i` of a branch point is forbidden in the subtrees of
//! `y_{i+1}, ...`, since any cover using it was already explored. A subtree
//! is pruned when `chosen + ceil(uncovered / best gain)` exceeds the size
//! still allowed.

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use thiserror::Error;

use crate::absorption::AbsorptionRelation;
use crate::tournament::VertexId;

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// Largest vertex count accepted by [`min_absorbing_brute`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("node budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
    #[error("set size {k} outside [0, {vertex_count}]")]
    SizeOutOfRange { k: usize, vertex_count: usize },
    #[error("brute force is limited to {BRUTE_FORCE_LIMIT} vertices, instance has {0}")]
    TooLargeForBruteForce(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub optimum: usize,
    /// Ascending vertex ids.
    pub witness: Vec<VertexId>,
    pub nodes_explored: u64,
    pub proved_optimal: bool,
    pub budget_exhausted: bool,
}

/// Outcome of a fixed-size query that ran to completion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeQuery {
    /// An absorbing set of exactly the requested size, if one exists.
    pub witness: Option<Vec<VertexId>>,
    pub nodes_explored: u64,
}

fn to_ids(mut v: Vec<usize>) -> Vec<VertexId> {
    v.sort_unstable();
    v.into_iter().map(VertexId::from).collect()
}

/// Greedy cover: repeatedly take the `y` covering the most uncovered
/// vertices, ties to the smallest id.
pub fn greedy_upper_bound(rel: &AbsorptionRelation) -> Vec<VertexId> {
    let n = rel.vertex_count();
    let mut uncovered = FixedBitSet::with_capacity(n);
    uncovered.insert_range(..);
    let mut chosen = Vec::new();
    while !uncovered.is_clear() {
        let (best, _) = (0..n)
            .map(|y| (y, rel.coverage(y).intersection_count(&uncovered)))
            .fold((0, 0), |acc, cand| if cand.1 > acc.1 { cand } else { acc });
        uncovered.difference_with(rel.coverage(best));
        chosen.push(best);
    }
    to_ids(chosen)
}

struct Search<'a> {
    coverage: &'a [FixedBitSet],
    /// `covered_by[x] = { y : x in A(y) }`.
    covered_by: Vec<FixedBitSet>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
    chosen: Vec<usize>,
    /// Largest cover size still worth finding.
    limit: usize,
    stop_at_first: bool,
    best: Option<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(rel: &'a AbsorptionRelation, budget: u64, limit: usize, stop_at_first: bool) -> Self {
        let n = rel.vertex_count();
        let mut covered_by = vec![FixedBitSet::with_capacity(n); n];
        for (y, a) in rel.coverage_sets().iter().enumerate() {
            for x in a.ones() {
                covered_by[x].insert(y);
            }
        }
        Self {
            coverage: rel.coverage_sets(),
            covered_by,
            nodes: 0,
            budget,
            exhausted: false,
            chosen: Vec::new(),
            limit,
            stop_at_first,
            best: None,
        }
    }

    fn run(&mut self) {
        let n = self.coverage.len();
        let mut uncovered = FixedBitSet::with_capacity(n);
        uncovered.insert_range(..);
        self.descend(&uncovered, &FixedBitSet::with_capacity(n));
    }

    /// Returns `true` when the search should unwind.
    fn descend(&mut self, uncovered: &FixedBitSet, forbidden: &FixedBitSet) -> bool {
        if self.nodes >= self.budget {
            self.exhausted = true;
            return true;
        }
        self.nodes += 1;

        if uncovered.is_clear() {
            self.best = Some(self.chosen.clone());
            if self.stop_at_first || self.chosen.is_empty() {
                return true;
            }
            self.limit = self.chosen.len() - 1;
            return false;
        }
        if self.chosen.len() >= self.limit {
            return false;
        }

        let remaining = uncovered.count_ones(..);
        let max_gain = (0..self.coverage.len())
            .filter(|&y| !forbidden.contains(y))
            .map(|y| self.coverage[y].intersection_count(uncovered))
            .max()
            .unwrap_or(0);
        if max_gain == 0 || self.chosen.len() + remaining.div_ceil(max_gain) > self.limit {
            return false;
        }

        let mut pivot = None;
        for x in uncovered.ones() {
            let options = self.covered_by[x].difference_count(forbidden);
            if pivot.is_none_or(|(_, best)| options < best) {
                pivot = Some((x, options));
            }
        }
        let Some((x, options)) = pivot else { return false };
        if options == 0 {
            return false;
        }

        let candidates: Vec<usize> = self.covered_by[x].difference(forbidden).collect();
        let mut banned = forbidden.clone();
        for y in candidates {
            if self.chosen.len() >= self.limit {
                break;
            }
            let mut rest = uncovered.clone();
            rest.difference_with(&self.coverage[y]);
            self.chosen.push(y);
            let stop = self.descend(&rest, &banned);
            self.chosen.pop();
            if stop {
                return true;
            }
            banned.insert(y);
        }
        false
    }
}

/// Exact minimum absorbing set, seeded with the greedy cover.
pub fn min_absorbing_set_exact(rel: &AbsorptionRelation, node_budget: Option<u64>) -> SolveResult {
    let greedy: Vec<usize> = greedy_upper_bound(rel).into_iter().map(VertexId::index).collect();
    let mut search = Search::new(rel, node_budget.unwrap_or(DEFAULT_NODE_BUDGET), greedy.len() - 1, false);
    search.run();
    let witness = search.best.take().unwrap_or(greedy);
    SolveResult {
        optimum: witness.len(),
        witness: to_ids(witness),
        nodes_explored: search.nodes,
        proved_optimal: !search.exhausted,
        budget_exhausted: search.exhausted,
    }
}

/// Decides whether an absorbing set of exactly `k` vertices exists.
pub fn exists_absorbing_of_size(
    rel: &AbsorptionRelation,
    k: usize,
    node_budget: Option<u64>,
) -> Result<SizeQuery, SolverError> {
    let n = rel.vertex_count();
    if k > n {
        return Err(SolverError::SizeOutOfRange { k, vertex_count: n });
    }
    let mut search = Search::new(rel, node_budget.unwrap_or(DEFAULT_NODE_BUDGET), k, true);
    search.run();
    if search.exhausted {
        return Err(SolverError::BudgetExhausted { nodes: search.nodes });
    }
    // Supersets of absorbing sets absorb, so pad to exactly k.
    let witness = search.best.map(|mut found| {
        let mut members = FixedBitSet::with_capacity(n);
        found.iter().for_each(|&v| members.insert(v));
        found.extend(members.zeroes().take(k - found.len()));
        to_ids(found)
    });
    Ok(SizeQuery { witness, nodes_explored: search.nodes })
}

/// Tries every subset by increasing size, lexicographic within a size.
pub fn min_absorbing_brute(rel: &AbsorptionRelation) -> Result<SolveResult, SolverError> {
    let n = rel.vertex_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(SolverError::TooLargeForBruteForce(n));
    }
    let mut tried = 0u64;
    for k in 1..=n {
        for subset in (0..n).combinations(k) {
            tried += 1;
            let mut covered = FixedBitSet::with_capacity(n);
            for &y in &subset {
                covered.union_with(rel.coverage(y));
            }
            if covered.is_full() {
                return Ok(SolveResult {
                    optimum: k,
                    witness: to_ids(subset),
                    nodes_explored: tried,
                    proved_optimal: true,
                    budget_exhausted: false,
                });
            }
        }
    }
    unreachable!("the full vertex set always absorbs")
}
