//! Seeded random bag construction.
//!
//! The family is every `floor((n-1)/2)`-subset of `{1, ..., n-1}` in
//! lexicographic order; each subset owns a bag of `m` vertices. Each pair of
//! vertices gets one fair orientation coin. An arc inside a bag has colour
//! `n`; an arc from bag `P` to bag `P'` has a colour drawn uniformly from
//! `P' \ P`, which is nonempty because distinct subsets have equal size.
//!
//! Random stream: one SplitMix64 seeded with `seed`. Pairs `u < v` are
//! visited in lexicographic order. Each pair draws one word whose low bit
//! picks the orientation (`0` is `u -> v`). An inter-bag arc with `s >= 2`
//! candidate colours then draws an index with [`SplitMix64::below`] into the
//! ascending candidate list; otherwise no colour draw is made.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::bounds::{self, BoundsError};
use crate::rng::SplitMix64;
use crate::tournament::{Arc, ColourId, ColouredTournament, ModelError, VertexId};

pub const DEFAULT_VERTEX_CAP: usize = 20_000;

/// A subset of `{1, ..., n-1}` with ascending elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(Vec<u32>);

impl Subset {
    /// Panics unless `elements` is strictly ascending.
    pub fn new(elements: Vec<u32>) -> Self {
        assert!(elements.windows(2).all(|w| w[0] < w[1]), "subset elements must be strictly ascending");
        Self(elements)
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: u32) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    /// Elements of `self` not in `other`, ascending.
    pub fn minus(&self, other: &Subset) -> Vec<u32> {
        self.0.iter().copied().filter(|&c| !other.contains(c)).collect()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructionParams {
    pub n: u32,
    pub m: usize,
    pub seed: u64,
}

impl ConstructionParams {
    pub fn new(n: u32, m: usize, seed: u64) -> Self {
        Self { n, m, seed }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("copies per bag must be at least 1")]
    NoCopies,
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("instance would have {requested} vertices, above the cap of {cap}")]
    TooManyVertices { requested: u128, cap: usize },
    #[error("bag family is empty")]
    EmptyFamily,
    #[error("bag {0} repeats an earlier subset")]
    DuplicateBag(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Bag metadata: the ordered family and the bag-major vertex numbering
/// `vertex_of(copy i, bag b) = b * m + (i - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BagLayout {
    family: Vec<Subset>,
    copies: usize,
}

impl BagLayout {
    pub fn new(family: Vec<Subset>, copies: usize) -> Result<Self, ConstructionError> {
        if family.is_empty() {
            return Err(ConstructionError::EmptyFamily);
        }
        if copies == 0 {
            return Err(ConstructionError::NoCopies);
        }
        let mut seen = BTreeSet::new();
        for (i, s) in family.iter().enumerate() {
            if !seen.insert(s) {
                return Err(ConstructionError::DuplicateBag(i));
            }
        }
        Ok(Self { family, copies })
    }

    pub fn family(&self) -> &[Subset] {
        &self.family
    }

    pub fn bag_count(&self) -> usize {
        self.family.len()
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn vertex_count(&self) -> usize {
        self.family.len() * self.copies
    }

    /// `copy` is 1-based.
    pub fn vertex_of(&self, copy: usize, bag: usize) -> VertexId {
        assert!((1..=self.copies).contains(&copy) && bag < self.family.len());
        VertexId::from(bag * self.copies + copy - 1)
    }

    pub fn bag_of(&self, v: usize) -> usize {
        v / self.copies
    }

    /// 1-based copy index of `v` within its bag.
    pub fn copy_of(&self, v: usize) -> usize {
        v % self.copies + 1
    }

    pub fn subset_of(&self, v: usize) -> &Subset {
        &self.family[self.bag_of(v)]
    }

    pub fn bag_members(&self, bag: usize) -> std::ops::Range<usize> {
        bag * self.copies..(bag + 1) * self.copies
    }
}

/// Every `floor((n-1)/2)`-subset of `{1, ..., n-1}`, lexicographic.
pub fn enumerate_family(n: u32) -> Vec<Subset> {
    assert!(n >= 1, "colour count must be at least 1");
    let k = ((n - 1) / 2) as usize;
    (1..n).combinations(k).map(Subset::new).collect()
}

pub fn generate(params: ConstructionParams) -> Result<(ColouredTournament, BagLayout), ConstructionError> {
    generate_with_cap(params, DEFAULT_VERTEX_CAP)
}

pub fn generate_with_cap(
    params: ConstructionParams,
    vertex_cap: usize,
) -> Result<(ColouredTournament, BagLayout), ConstructionError> {
    let ConstructionParams { n, m, seed } = params;
    if m == 0 {
        return Err(ConstructionError::NoCopies);
    }
    let p = bounds::family_size(n)?;
    let requested = u128::from(p) * m as u128;
    if requested > vertex_cap as u128 {
        return Err(ConstructionError::TooManyVertices { requested, cap: vertex_cap });
    }
    let layout = BagLayout::new(enumerate_family(n), m)?;
    let total = layout.vertex_count();

    let mut rng = SplitMix64::new(seed);
    let mut arcs = Vec::with_capacity(total * total.saturating_sub(1) / 2);
    for u in 0..total {
        for v in u + 1..total {
            let (tail, head) = if rng.next_u64() & 1 == 0 { (u, v) } else { (v, u) };
            let colour = if layout.bag_of(tail) == layout.bag_of(head) {
                n
            } else {
                let candidates = layout.subset_of(head).minus(layout.subset_of(tail));
                match candidates.len() {
                    0 => unreachable!("distinct equal-size subsets always differ"),
                    1 => candidates[0],
                    s => candidates[rng.below(s as u64) as usize],
                }
            };
            arcs.push(Arc { tail: tail.into(), head: head.into(), colour: ColourId(colour) });
        }
    }
    let t = ColouredTournament::build(total, n, &arcs)?;
    Ok((t, layout))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Tournament and layout disagree on the vertex count.
    Dimension { vertices: usize, layout_vertices: usize },
    /// Intra-bag arc with a colour other than `n`.
    IntraBagColour { tail: usize, head: usize, colour: u32 },
    /// Arc from bag `P` to bag `P'` whose colour is not in `P' \ P`.
    InterBagColour { tail: usize, head: usize, colour: u32 },
    /// A colour appears in two of: incoming arcs, outgoing arcs, `{n}`.
    SharedColour { bag: usize, colour: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Dimension { vertices, layout_vertices } => {
                write!(f, "tournament has {vertices} vertices but layout describes {layout_vertices}")
            }
            Violation::IntraBagColour { tail, head, colour } => {
                write!(f, "intra-bag arc {tail}->{head} has colour {colour}")
            }
            Violation::InterBagColour { tail, head, colour } => {
                write!(f, "inter-bag arc {tail}->{head} has colour {colour} outside head-bag minus tail-bag")
            }
            Violation::SharedColour { bag, colour } => {
                write!(f, "bag {bag}: colour {colour} shared between incoming, outgoing, or internal arcs")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub violations: Vec<Violation>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the colour rule of the bag construction against `t`.
pub fn validate_structure(t: &ColouredTournament, layout: &BagLayout) -> StructureReport {
    let mut violations = Vec::new();
    if t.vertex_count() != layout.vertex_count() {
        violations.push(Violation::Dimension {
            vertices: t.vertex_count(),
            layout_vertices: layout.vertex_count(),
        });
        return StructureReport { violations };
    }
    let n = t.colour_count();
    let bags = layout.bag_count();
    let mut incoming = vec![BTreeSet::new(); bags];
    let mut outgoing = vec![BTreeSet::new(); bags];
    for arc in t.arcs() {
        let (tail, head, colour) = (arc.tail.index(), arc.head.index(), arc.colour.0);
        let (bt, bh) = (layout.bag_of(tail), layout.bag_of(head));
        if bt == bh {
            if colour != n {
                violations.push(Violation::IntraBagColour { tail, head, colour });
            }
        } else {
            let allowed = layout.family()[bh].contains(colour) && !layout.family()[bt].contains(colour);
            if !allowed {
                violations.push(Violation::InterBagColour { tail, head, colour });
            }
            outgoing[bt].insert(colour);
            incoming[bh].insert(colour);
        }
    }
    for bag in 0..bags {
        let shared = incoming[bag]
            .intersection(&outgoing[bag])
            .copied()
            .chain([n].into_iter().filter(|c| incoming[bag].contains(c) || outgoing[bag].contains(c)));
        violations.extend(shared.collect::<BTreeSet<_>>().into_iter().map(|colour| Violation::SharedColour { bag, colour }));
    }
    StructureReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(family: &[Subset]) -> Vec<Vec<u32>> {
        family.iter().map(|s| s.elements().to_vec()).collect()
    }

    #[test]
    fn family_examples() {
        assert_eq!(sets(&enumerate_family(3)), vec![vec![1], vec![2]]);
        assert_eq!(sets(&enumerate_family(1)), vec![Vec::<u32>::new()]);
        assert_eq!(sets(&enumerate_family(2)), vec![Vec::<u32>::new()]);
        assert_eq!(
            sets(&enumerate_family(5)),
            vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]
        );
    }

    #[test]
    fn family_size_agrees() {
        for n in 1..=12 {
            assert_eq!(enumerate_family(n).len() as u64, bounds::family_size(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn two_bag_colour_rule() {
        for seed in 0..20 {
            let (t, layout) = generate(ConstructionParams::new(3, 1, seed)).unwrap();
            assert_eq!(t.vertex_count(), 2);
            assert_eq!(layout.bag_count(), 2);
            let arc = t.arc_between(0, 1);
            // vertex 0 is bag {1}, vertex 1 is bag {2}
            let expected = if arc.tail.0 == 0 { 2 } else { 1 };
            assert_eq!(arc.colour, ColourId(expected));
        }
    }

    #[test]
    fn single_bag_is_monochromatic() {
        let (t, layout) = generate(ConstructionParams::new(2, 4, 77)).unwrap();
        assert_eq!(t.vertex_count(), 4);
        assert_eq!(sets(layout.family()), vec![Vec::<u32>::new()]);
        assert!(t.arcs().all(|a| a.colour == ColourId(2)));
        assert_eq!(t.arc_count(), 6);
    }

    #[test]
    fn n5_cross_bag_colour() {
        let (t, layout) = generate(ConstructionParams::new(5, 2, 12345)).unwrap();
        assert_eq!(t.vertex_count(), 12);
        let bag12 = layout.family().iter().position(|s| s.elements() == [1, 2]).unwrap();
        let bag34 = layout.family().iter().position(|s| s.elements() == [3, 4]).unwrap();
        let mut seen = 0;
        for u in layout.bag_members(bag12) {
            for v in layout.bag_members(bag34) {
                let arc = t.arc_between(u, v);
                if arc.tail.index() == u {
                    assert!([3, 4].contains(&arc.colour.0));
                    seen += 1;
                } else {
                    assert!([1, 2].contains(&arc.colour.0));
                }
            }
        }
        assert_eq!(seen, 2);
        // Exact arcs from an independent reimplementation of the stream.
        let between: Vec<_> = [(0, 10), (0, 11), (1, 10), (1, 11)].iter().map(|&(u, v)| t.arc_between(u, v)).collect();
        assert_eq!(between, vec![Arc::new(10, 0, 2), Arc::new(0, 11, 3), Arc::new(1, 10, 4), Arc::new(11, 1, 2)]);
        assert_eq!(crate::witness::instance_digest(&t, Some(&layout)), 0xa921a393995c9be4);
        assert!(validate_structure(&t, &layout).passed());
    }

    #[test]
    fn layout_numbering() {
        let layout = BagLayout::new(enumerate_family(4), 3).unwrap();
        assert_eq!(layout.vertex_of(1, 0), VertexId(0));
        assert_eq!(layout.vertex_of(3, 2), VertexId(8));
        assert_eq!(layout.bag_of(8), 2);
        assert_eq!(layout.copy_of(8), 3);
        assert_eq!(layout.bag_members(1), 3..6);
        assert!(matches!(
            BagLayout::new(vec![Subset::new(vec![1]), Subset::new(vec![1])], 1),
            Err(ConstructionError::DuplicateBag(1))
        ));
    }

    #[test]
    fn vertex_cap() {
        let err = generate_with_cap(ConstructionParams::new(5, 10, 0), 50).unwrap_err();
        assert_eq!(err, ConstructionError::TooManyVertices { requested: 60, cap: 50 });
        assert_eq!(generate(ConstructionParams::new(3, 0, 0)).unwrap_err(), ConstructionError::NoCopies);
    }

    #[test]
    fn recoloured_inter_bag_arc_fails_rule_b() {
        let (t, layout) = generate(ConstructionParams::new(3, 1, 5)).unwrap();
        let bad = t.with_recoloured(0, 1, ColourId(3)).unwrap();
        let report = validate_structure(&bad, &layout);
        assert!(report.violations.iter().any(|v| matches!(v, Violation::InterBagColour { .. })));
    }

    #[test]
    fn recoloured_intra_bag_arc_fails_rule_a() {
        let (t, layout) = generate(ConstructionParams::new(4, 2, 5)).unwrap();
        assert!(validate_structure(&t, &layout).passed());
        let bad = t.with_recoloured(0, 1, ColourId(1)).unwrap();
        let report = validate_structure(&bad, &layout);
        assert!(!report.passed());
        assert!(report.violations.iter().any(|v| matches!(v, Violation::IntraBagColour { colour: 1, .. })));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let (t, _) = generate(ConstructionParams::new(3, 2, 5)).unwrap();
        let layout = BagLayout::new(enumerate_family(3), 1).unwrap();
        assert!(matches!(validate_structure(&t, &layout).violations[..], [Violation::Dimension { .. }]));
    }
}
