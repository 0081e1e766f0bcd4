//! Lower-bound certificates.
//!
//! A certificate names a generated instance by `(n, m, seed)` and claims that
//! no set of fewer than `optimum_at_least` vertices absorbs it. The instance
//! is pinned by the FNV-1a digest of its canonical serialization. Checking a
//! certificate recomputes absorption with the general closure algorithm and
//! refutes every candidate set exhaustively, so it trusts neither the bag
//! fast path nor the branch-and-bound solver.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use thiserror::Error;

use crate::absorption::{absorbed_by, absorbed_by_construction, AbsorptionError, AbsorptionRelation};
use crate::bounds::{self, BoundsError};
use crate::construction::{generate, validate_structure, BagLayout, ConstructionError, ConstructionParams, Violation};
use crate::format::serialize;
use crate::solver::{exists_absorbing_of_size, SolverError, DEFAULT_NODE_BUDGET};
use crate::tournament::{ColouredTournament, VertexId};

/// Largest number of size-`k` candidate sets an exhaustive refutation will enumerate.
pub const EXHAUSTIVE_LIMIT: u128 = 100_000_000;

/// Instances up to this size are cross-checked against the general algorithm
/// while hunting.
pub const CROSS_CHECK_LIMIT: usize = 200;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes.iter().fold(OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

pub fn instance_digest(t: &ColouredTournament, layout: Option<&BagLayout>) -> u64 {
    fnv1a64(serialize(t, layout).as_bytes())
}

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("not certified exhaustively: C({vertices}, {k}) = {candidates} candidate sets exceeds {EXHAUSTIVE_LIMIT}")]
    Guard { vertices: usize, k: usize, candidates: u128 },
    #[error("digest mismatch: certificate has {expected:016x}, instance hashes to {actual:016x}")]
    DigestMismatch { expected: u64, actual: u64 },
    #[error("claim refuted: {{{}}} absorbs the instance", .counterexample.iter().join(","))]
    Refuted { counterexample: Vec<VertexId> },
    #[error("certificate states p = {stated}, but n = {n} gives p = {actual}")]
    WrongFamilySize { n: u32, stated: u64, actual: u64 },
    #[error("generated instance breaks the colour rule: {0}")]
    Structure(Violation),
    #[error("seed {seed}: bag fast path disagrees with the general absorption relation")]
    FastPathMismatch { seed: u64 },
    #[error("seed {seed}: solver found no absorbing set but exhaustive search found {{{}}}", .counterexample.iter().join(","))]
    SolverDisagreement { seed: u64, counterexample: Vec<VertexId> },
    #[error(transparent)]
    Absorption(#[from] AbsorptionError),
    #[error("invalid hunt arguments: {0}")]
    Arguments(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub n: u32,
    pub m: usize,
    pub seed: u64,
    pub p: u64,
    pub optimum_at_least: u64,
    pub instance_digest: u64,
    pub solver_nodes: u64,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "cert 1")?;
        writeln!(f, "n {}", self.n)?;
        writeln!(f, "m {}", self.m)?;
        writeln!(f, "seed {}", self.seed)?;
        writeln!(f, "p {}", self.p)?;
        writeln!(f, "optimum-at-least {}", self.optimum_at_least)?;
        writeln!(f, "digest {:016x}", self.instance_digest)?;
        writeln!(f, "solver-nodes {}", self.solver_nodes)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("certificate line {line}: {message}")]
pub struct CertificateParseError {
    pub line: usize,
    pub message: String,
}

impl FromStr for Certificate {
    type Err = CertificateParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        const KEYS: [&str; 8] = ["cert", "n", "m", "seed", "p", "optimum-at-least", "digest", "solver-nodes"];
        let mut values = [0u64; 8];
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        for (slot, key) in KEYS.iter().enumerate() {
            let err = |line, message: String| CertificateParseError { line, message };
            let (line, content) = lines.next().ok_or_else(|| err(0, format!("missing `{key}` line")))?;
            let Some((k, v)) = content.split_whitespace().collect_tuple() else {
                return Err(err(line, format!("expected `{key} <value>`")));
            };
            if k != *key {
                return Err(err(line, format!("expected `{key}`, found `{k}`")));
            }
            values[slot] = if *key == "digest" {
                if v.len() != 16 {
                    return Err(err(line, "digest must be 16 hex digits".into()));
                }
                u64::from_str_radix(v, 16).map_err(|_| err(line, format!("invalid digest {v:?}")))?
            } else {
                v.parse().map_err(|_| err(line, format!("invalid number {v:?}")))?
            };
        }
        if let Some((line, _)) = lines.next() {
            return Err(CertificateParseError { line, message: "trailing content".into() });
        }
        if values[0] != 1 {
            return Err(CertificateParseError { line: 1, message: format!("unsupported version {}", values[0]) });
        }
        let too_big = |what: &str| CertificateParseError { line: 0, message: format!("{what} out of range") };
        Ok(Certificate {
            n: u32::try_from(values[1]).map_err(|_| too_big("n"))?,
            m: usize::try_from(values[2]).map_err(|_| too_big("m"))?,
            seed: values[3],
            p: values[4],
            optimum_at_least: values[5],
            instance_digest: values[6],
            solver_nodes: values[7],
        })
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial_saturating(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        match acc.checked_mul(n - i) {
            Some(v) => acc = v / (i + 1),
            None => return u128::MAX,
        }
    }
    acc
}

fn guard(vertices: usize, k: usize) -> Result<(), WitnessError> {
    let candidates = binomial_saturating(vertices as u128, k as u128);
    if candidates > EXHAUSTIVE_LIMIT {
        return Err(WitnessError::Guard { vertices, k, candidates });
    }
    Ok(())
}

/// Checks every vertex set of size at most `k`. Returns the number of sets
/// checked, or the first absorbing set found.
pub fn refute_exhaustive(rel: &AbsorptionRelation, k: usize) -> Result<u64, Vec<VertexId>> {
    let n = rel.vertex_count();
    let mut checked = 0u64;
    for size in 0..=k.min(n) {
        for subset in (0..n).combinations(size) {
            checked += 1;
            let mut covered = FixedBitSet::with_capacity(n);
            for &y in &subset {
                covered.union_with(rel.coverage(y));
            }
            if covered.is_full() {
                return Err(subset.into_iter().map(VertexId::from).collect());
            }
        }
    }
    Ok(checked)
}

#[derive(Clone, Copy, Debug)]
pub struct HuntOptions {
    pub node_budget: u64,
    /// Seeds evaluated concurrently; the smallest successful seed wins.
    pub jobs: usize,
}

impl Default for HuntOptions {
    fn default() -> Self {
        Self { node_budget: DEFAULT_NODE_BUDGET, jobs: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrialOutcome {
    Certified { solver_nodes: u64, subsets_checked: u64 },
    /// An absorbing set of size `p - 1` exists.
    Absorbed { witness: Vec<VertexId> },
    BudgetExhausted { nodes: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trial {
    pub seed: u64,
    pub outcome: TrialOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HuntReport {
    pub certificate: Option<Certificate>,
    /// Per-seed outcomes in seed order, ending at the certified seed if any.
    pub trials: Vec<Trial>,
}

fn run_trial(n: u32, m: usize, seed: u64, p: u64, budget: u64) -> Result<(TrialOutcome, u64), WitnessError> {
    let (t, layout) = generate(ConstructionParams::new(n, m, seed))?;
    if let Some(v) = validate_structure(&t, &layout).violations.into_iter().next() {
        return Err(WitnessError::Structure(v));
    }
    let rel = absorbed_by_construction(&t, &layout)?;
    if t.vertex_count() <= CROSS_CHECK_LIMIT && rel != absorbed_by(&t) {
        return Err(WitnessError::FastPathMismatch { seed });
    }
    let k = (p - 1) as usize;
    let digest = instance_digest(&t, Some(&layout));
    let outcome = match exists_absorbing_of_size(&rel, k, Some(budget)) {
        Ok(q) => match q.witness {
            Some(witness) => TrialOutcome::Absorbed { witness },
            None => match refute_exhaustive(&rel, k) {
                Ok(subsets_checked) => TrialOutcome::Certified { solver_nodes: q.nodes_explored, subsets_checked },
                Err(counterexample) => return Err(WitnessError::SolverDisagreement { seed, counterexample }),
            },
        },
        Err(SolverError::BudgetExhausted { nodes }) => TrialOutcome::BudgetExhausted { nodes },
        Err(other) => unreachable!("size p-1 is below the vertex count: {other}"),
    };
    Ok((outcome, digest))
}

/// Tries seeds `seed_start, seed_start + 1, ...` until one instance has no
/// absorbing set of size `p - 1`.
pub fn hunt(
    n: u32,
    m: usize,
    seed_start: u64,
    max_trials: u64,
    options: HuntOptions,
) -> Result<HuntReport, WitnessError> {
    if max_trials == 0 {
        return Err(WitnessError::Arguments("max_trials must be at least 1"));
    }
    if m == 0 {
        return Err(ConstructionError::NoCopies.into());
    }
    let p = bounds::family_size(n)?;
    let vertices = usize::try_from(u128::from(p) * m as u128).unwrap_or(usize::MAX);
    guard(vertices, (p - 1) as usize)?;

    let jobs = options.jobs.max(1) as u64;
    let mut trials = Vec::new();
    let mut next = 0u64;
    while next < max_trials {
        let batch: Vec<u64> = (next..max_trials.min(next + jobs)).map(|i| seed_start.wrapping_add(i)).collect();
        next += batch.len() as u64;
        let results: Vec<_> = if batch.len() == 1 {
            vec![run_trial(n, m, batch[0], p, options.node_budget)]
        } else {
            std::thread::scope(|s| {
                let handles: Vec<_> = batch
                    .iter()
                    .map(|&seed| s.spawn(move || run_trial(n, m, seed, p, options.node_budget)))
                    .collect();
                handles.into_iter().map(|h| h.join().expect("trial thread panicked")).collect()
            })
        };
        for (seed, result) in batch.into_iter().zip(results) {
            let (outcome, digest) = result?;
            let certified = match outcome {
                TrialOutcome::Certified { solver_nodes, .. } => Some(Certificate {
                    n,
                    m,
                    seed,
                    p,
                    optimum_at_least: p,
                    instance_digest: digest,
                    solver_nodes,
                }),
                _ => None,
            };
            trials.push(Trial { seed, outcome });
            if certified.is_some() {
                return Ok(HuntReport { certificate: certified, trials });
            }
        }
    }
    Ok(HuntReport { certificate: None, trials })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verification {
    pub subsets_checked: u64,
}

/// Re-checks a certificate from scratch. With `instance` absent, the instance
/// is regenerated from `(n, m, seed)`.
pub fn verify(
    cert: &Certificate,
    instance: Option<(&ColouredTournament, Option<&BagLayout>)>,
) -> Result<Verification, WitnessError> {
    let p = bounds::family_size(cert.n)?;
    if p != cert.p {
        return Err(WitnessError::WrongFamilySize { n: cert.n, stated: cert.p, actual: p });
    }
    let regenerated;
    let (t, layout) = match instance {
        Some(pair) => pair,
        None => {
            regenerated = generate(ConstructionParams::new(cert.n, cert.m, cert.seed))?;
            (&regenerated.0, Some(&regenerated.1))
        }
    };
    let actual = instance_digest(t, layout);
    if actual != cert.instance_digest {
        return Err(WitnessError::DigestMismatch { expected: cert.instance_digest, actual });
    }
    let rel = absorbed_by(t);
    let k = usize::try_from(cert.optimum_at_least.saturating_sub(1)).unwrap_or(usize::MAX).min(t.vertex_count());
    guard(t.vertex_count(), k)?;
    match refute_exhaustive(&rel, k) {
        Ok(subsets_checked) => Ok(Verification { subsets_checked }),
        Err(counterexample) => Err(WitnessError::Refuted { counterexample }),
    }
}
