//! Finite arc-coloured tournaments.
//!
//! Vertices are dense ids `0..N`. Colours are 1-based, `1..=n`, and need not
//! all be used. Every unordered pair of distinct vertices carries exactly one
//! arc.

use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::bitmatrix::BitMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(u32::try_from(i).expect("vertex index exceeds u32"))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColourId(pub u32);

impl fmt::Display for ColourId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
    pub colour: ColourId,
}

impl Arc {
    pub fn new(tail: u32, head: u32, colour: u32) -> Self {
        Self { tail: VertexId(tail), head: VertexId(head), colour: ColourId(colour) }
    }
}

/// Largest colour count the arc store can hold.
pub const MAX_COLOURS: u32 = u16::MAX as u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("vertex count must be at least 1")]
    NoVertices,
    #[error("colour count must be in [1, {MAX_COLOURS}], got {0}")]
    BadColourCount(u32),
    #[error("arc ({tail},{head}): vertex out of range for {vertex_count} vertices")]
    VertexOutOfRange { tail: u32, head: u32, vertex_count: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("arc ({tail},{head}): colour {colour} outside [1, {colour_count}]")]
    ColourOutOfRange { tail: u32, head: u32, colour: u32, colour_count: u32 },
    #[error("duplicate arc for pair {{{0},{1}}}")]
    DuplicatePair(u32, u32),
    #[error("missing arc for pair {{{0},{1}}}")]
    MissingPair(u32, u32),
    #[error("colour {colour} outside [1, {colour_count}]")]
    NoSuchColour { colour: u32, colour_count: u32 },
}

/// An immutable, validated arc-coloured tournament.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColouredTournament {
    vertex_count: usize,
    colour_count: u32,
    /// `out.contains(u, v)` iff the arc on `{u, v}` is `u -> v`.
    out: BitMatrix,
    /// Colour of pair `{u, v}`, `u < v`, at `pair_index(u, v)`.
    colours: Vec<u16>,
}

impl ColouredTournament {
    /// Builds and validates a tournament from an arc list in any order.
    pub fn build(vertex_count: usize, colour_count: u32, arcs: &[Arc]) -> Result<Self, ModelError> {
        if vertex_count == 0 {
            return Err(ModelError::NoVertices);
        }
        if colour_count == 0 || colour_count > MAX_COLOURS {
            return Err(ModelError::BadColourCount(colour_count));
        }
        let pairs = vertex_count * (vertex_count - 1) / 2;
        let mut out = BitMatrix::new(vertex_count);
        let mut colours = vec![0u16; pairs];
        for arc in arcs {
            let (tail, head, colour) = (arc.tail.0, arc.head.0, arc.colour.0);
            if tail as usize >= vertex_count || head as usize >= vertex_count {
                return Err(ModelError::VertexOutOfRange { tail, head, vertex_count });
            }
            if tail == head {
                return Err(ModelError::SelfLoop(tail));
            }
            if colour == 0 || colour > colour_count {
                return Err(ModelError::ColourOutOfRange { tail, head, colour, colour_count });
            }
            let (lo, hi) = (tail.min(head), tail.max(head));
            let slot = &mut colours[pair_index(vertex_count, lo as usize, hi as usize)];
            if *slot != 0 {
                return Err(ModelError::DuplicatePair(lo, hi));
            }
            *slot = colour as u16;
            out.insert(tail as usize, head as usize);
        }
        if let Some(missing) = colours.iter().position(|&c| c == 0) {
            let (lo, hi) = pair_at(vertex_count, missing);
            return Err(ModelError::MissingPair(lo as u32, hi as u32));
        }
        Ok(Self { vertex_count, colour_count, out, colours })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn colour_count(&self) -> u32 {
        self.colour_count
    }

    pub fn arc_count(&self) -> usize {
        self.colours.len()
    }

    /// True iff the arc between `u` and `v` points from `u` to `v`.
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out.contains(u, v)
    }

    /// Colour of the arc on the unordered pair `{u, v}`, `u != v`.
    pub fn colour_between(&self, u: usize, v: usize) -> ColourId {
        assert_ne!(u, v, "no arc on a single vertex");
        let (lo, hi) = (u.min(v), u.max(v));
        ColourId(u32::from(self.colours[pair_index(self.vertex_count, lo, hi)]))
    }

    /// The oriented arc on the unordered pair `{u, v}`.
    pub fn arc_between(&self, u: usize, v: usize) -> Arc {
        let colour = self.colour_between(u, v);
        let (tail, head) = if self.has_arc(u, v) { (u, v) } else { (v, u) };
        Arc { tail: tail.into(), head: head.into(), colour }
    }

    /// All arcs ordered by `(min id, max id)`.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        let n = self.vertex_count;
        (0..n).flat_map(move |u| (u + 1..n).map(move |v| self.arc_between(u, v)))
    }

    /// Out-neighbourhood of `u` across all colours.
    pub fn successors(&self, u: usize) -> &FixedBitSet {
        self.out.row(u)
    }

    pub fn orientation(&self) -> &BitMatrix {
        &self.out
    }

    pub fn check_colour(&self, c: ColourId) -> Result<(), ModelError> {
        if c.0 == 0 || c.0 > self.colour_count {
            return Err(ModelError::NoSuchColour { colour: c.0, colour_count: self.colour_count });
        }
        Ok(())
    }

    /// The relation `{(u, v) : u -> v has colour c}`.
    pub fn colour_subgraph(&self, c: ColourId) -> Result<BitMatrix, ModelError> {
        self.check_colour(c)?;
        let mut sub = BitMatrix::new(self.vertex_count);
        for arc in self.arcs().filter(|a| a.colour == c) {
            sub.insert(arc.tail.index(), arc.head.index());
        }
        Ok(sub)
    }

    /// Returns a copy with the colour of pair `{u, v}` replaced.
    pub fn with_recoloured(&self, u: usize, v: usize, colour: ColourId) -> Result<Self, ModelError> {
        let mut arcs: Vec<Arc> = self.arcs().collect();
        let (lo, hi) = (u.min(v), u.max(v));
        let i = pair_index(self.vertex_count, lo, hi);
        arcs[i].colour = colour;
        Self::build(self.vertex_count, self.colour_count, &arcs)
    }
}

fn pair_index(n: usize, lo: usize, hi: usize) -> usize {
    debug_assert!(lo < hi && hi < n);
    lo * (2 * n - lo - 1) / 2 + (hi - lo - 1)
}

fn pair_at(n: usize, mut index: usize) -> (usize, usize) {
    for lo in 0..n {
        let row = n - lo - 1;
        if index < row {
            return (lo, lo + 1 + index);
        }
        index -= row;
    }
    unreachable!("pair index out of range")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(m: &BitMatrix) -> Vec<(usize, usize)> {
        m.pairs().collect()
    }

    #[test]
    fn single_vertex() {
        let t = ColouredTournament::build(1, 1, &[]).unwrap();
        assert_eq!(t.vertex_count(), 1);
        assert_eq!(t.arc_count(), 0);
    }

    #[test]
    fn two_vertices() {
        let t = ColouredTournament::build(2, 1, &[Arc::new(0, 1, 1)]).unwrap();
        assert!(t.has_arc(0, 1));
        assert!(!t.has_arc(1, 0));
        assert_eq!(t.colour_between(1, 0), ColourId(1));
    }

    #[test]
    fn missing_pair_is_reported() {
        let err = ColouredTournament::build(3, 2, &[Arc::new(0, 1, 1), Arc::new(1, 2, 2)]).unwrap_err();
        assert_eq!(err, ModelError::MissingPair(0, 2));
        assert_eq!(err.to_string(), "missing arc for pair {0,2}");
    }

    #[test]
    fn build_errors() {
        assert_eq!(ColouredTournament::build(0, 1, &[]).unwrap_err(), ModelError::NoVertices);
        assert_eq!(
            ColouredTournament::build(2, 1, &[Arc::new(0, 1, 1), Arc::new(1, 0, 1)]).unwrap_err(),
            ModelError::DuplicatePair(0, 1)
        );
        assert_eq!(ColouredTournament::build(2, 1, &[Arc::new(1, 1, 1)]).unwrap_err(), ModelError::SelfLoop(1));
        assert!(matches!(
            ColouredTournament::build(2, 1, &[Arc::new(0, 1, 2)]).unwrap_err(),
            ModelError::ColourOutOfRange { colour: 2, .. }
        ));
        assert!(matches!(
            ColouredTournament::build(2, 1, &[Arc::new(0, 5, 1)]).unwrap_err(),
            ModelError::VertexOutOfRange { .. }
        ));
    }

    #[test]
    fn colour_subgraph_read_off() {
        let t = ColouredTournament::build(2, 2, &[Arc::new(0, 1, 1)]).unwrap();
        assert_eq!(pairs(&t.colour_subgraph(ColourId(1)).unwrap()), vec![(0, 1)]);
        assert!(pairs(&t.colour_subgraph(ColourId(2)).unwrap()).is_empty());
        assert!(t.colour_subgraph(ColourId(3)).is_err());

        let t = ColouredTournament::build(3, 2, &[Arc::new(0, 1, 1), Arc::new(1, 2, 1), Arc::new(0, 2, 2)]).unwrap();
        assert_eq!(pairs(&t.colour_subgraph(ColourId(1)).unwrap()), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn pair_indexing_is_a_bijection() {
        let n = 7;
        let mut k = 0;
        for lo in 0..n {
            for hi in lo + 1..n {
                assert_eq!(pair_index(n, lo, hi), k);
                assert_eq!(pair_at(n, k), (lo, hi));
                k += 1;
            }
        }
    }
}
