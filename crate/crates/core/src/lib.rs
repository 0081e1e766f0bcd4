//! Arc-coloured tournaments and monochromatic absorbing sets.
//!
//! The crate covers the whole pipeline for producing checkable lower-bound
//! witnesses on the size of absorbing sets:
//!
//! * [`tournament`] and [`format`]: validated arc-coloured tournaments and the
//!   line-oriented `act 1` text format.
//! * [`construction`]: the seeded random bag construction over the central
//!   binomial layer of colour subsets.
//! * [`absorption`]: monochromatic reachability, coverage sets, and the
//!   absorbing-set predicate, with a fast path for bag instances.
//! * [`solver`]: exact minimum absorbing sets via set-cover branch and bound.
//! * [`bounds`]: log-space evaluation of the union bound and its relaxation.
//! * [`witness`]: hunting, emitting, and verifying certificates.

pub mod absorption;
pub mod bitmatrix;
pub mod bounds;
pub mod construction;
pub mod format;
pub mod rng;
pub mod solver;
pub mod tournament;
pub mod witness;

pub use absorption::{absorbed_by, absorbed_by_construction, monochromatic_reachability, AbsorptionRelation};
pub use bitmatrix::BitMatrix;
pub use bounds::{family_size, minimal_m, relaxed_bound_log, stirling_ratio, union_bound_log, BoundKind, BoundReport};
pub use construction::{enumerate_family, generate, validate_structure, BagLayout, ConstructionParams, Subset};
pub use format::{parse, serialize};
pub use solver::{exists_absorbing_of_size, greedy_upper_bound, min_absorbing_brute, min_absorbing_set_exact, SolveResult};
pub use tournament::{Arc, ColourId, ColouredTournament, VertexId};
pub use witness::{hunt, verify, Certificate};
