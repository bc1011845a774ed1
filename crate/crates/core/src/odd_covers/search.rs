//! Randomized construction of simple odd tuples with monodromy `A_d`.
//!
//! A witness for a shape is `(τ_1, …, τ_b, σ_∞)` with every `τ_i` a 3-cycle,
//! `b = three_cycle_branch_count(shape)` and `σ_∞` the inverse of the
//! canonical block cycles `(1 … d_1)(d_1+1 … d_1+d_2)…`.
//!
//! Two phases share one trial budget:
//!
//! * forced completion: draw `b - 1` random 3-cycles, solve for the last one
//!   and keep the tuple if that is a 3-cycle. Cheap, but the forced entry is
//!   a 3-cycle with probability that shrinks quickly with `d`.
//! * chain skeleton: peel random 3-cycles off `σ_∞⁻¹` while the remainder
//!   stays all-odd and can still be finished with the remaining count, then
//!   finish with the shared-anchor chains of the remainder's cycles and mix
//!   with random braid moves among the 3-cycles.
//!
//! Every candidate must be valid of the right genus and pass the `A_d`
//! certificate. Results depend only on `(shape, seed, budget, stream)`.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::obstruction::{decomposability_obstruction, ObstructionError};
use super::shape::{check_feasibility, three_cycle_branch_count, CoverShape, FeasibilityEvidence, ShapeSummary};
use crate::certificate::{Certificate, Verdict};
use crate::degeneration::odd_cycle_factorization;
use crate::group::{GroupError, Lemma1Evidence};
use crate::perm::Permutation;
use crate::tuple::HurwitzTuple;
use crate::util::{alternating_order, biguint_string};

pub const DEFAULT_BUDGET: u64 = 1_000_000;
/// Cap on forced-completion trials; the rest of the budget goes to the skeleton phase.
pub const FORCED_TRIAL_CAP: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("shape {shape} is infeasible: {}", .certificate.evidence.failed.join("; "))]
    Infeasible {
        shape: CoverShape,
        certificate: Box<Certificate<FeasibilityEvidence>>,
    },
    #[error("degree {0} is too small for a simple odd tuple")]
    DegreeTooSmall(u64),
    #[error("trial budget must be positive")]
    ZeroBudget,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Obstruction(#[from] ObstructionError),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchPhase {
    ForcedCompletion,
    ChainSkeleton,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub trials: u64,
    pub forced_trials: u64,
    pub skeleton_trials: u64,
    pub forced_not_three_cycle: u64,
    pub skeleton_dead_ends: u64,
    pub intransitive: u64,
    pub not_alternating: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub budget: u64,
    /// ChaCha stream, for independent workers sharing a seed.
    pub stream: u64,
}

impl SearchConfig {
    pub fn new(seed: u64, budget: u64) -> Self {
        SearchConfig {
            seed,
            budget,
            stream: 0,
        }
    }

    pub fn with_stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchEvidence {
    pub shape: ShapeSummary,
    pub seed: u64,
    pub budget: u64,
    pub stream: u64,
    pub phase: SearchPhase,
    /// 1-based index of the successful trial.
    pub trial: u64,
    pub three_cycle_count: u64,
    pub genus: u64,
    #[serde(with = "biguint_string")]
    pub group_order: BigUint,
    #[serde(with = "biguint_string")]
    pub alternating_order: BigUint,
    pub alternating: Lemma1Evidence,
    /// Absent when the ∞ fiber falls outside the obstruction's range.
    pub decomposability: Option<Verdict>,
    pub primitive: bool,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Found {
        tuple: HurwitzTuple,
        certificate: Certificate<SearchEvidence>,
    },
    Exhausted {
        stats: SearchStats,
    },
}

impl SearchOutcome {
    pub fn tuple(&self) -> Option<&HurwitzTuple> {
        match self {
            SearchOutcome::Found { tuple, .. } => Some(tuple),
            SearchOutcome::Exhausted { .. } => None,
        }
    }

    pub fn stats(&self) -> &SearchStats {
        match self {
            SearchOutcome::Found { certificate, .. } => &certificate.evidence.stats,
            SearchOutcome::Exhausted { stats } => stats,
        }
    }
}

/// Inverse of the product of the consecutive block cycles of lengths `d_1, …, d_k`.
pub fn canonical_infinity_permutation(s: &CoverShape) -> Permutation {
    let d = s.degree() as usize;
    let mut start = 1;
    let cycles: Vec<Vec<usize>> = s
        .pole_orders()
        .iter()
        .map(|&len| {
            let c: Vec<usize> = (start..start + len as usize).collect();
            start += len as usize;
            c
        })
        .collect();
    Permutation::from_cycles(d, &cycles)
        .expect("blocks partition the points")
        .inverse()
}

/// Searches for a witness tuple of `shape`. Genus-0 shapes skip the
/// feasibility check so small cases can be exercised.
pub fn search_simple_odd_tuple(s: &CoverShape, config: SearchConfig) -> Result<SearchOutcome, SearchError> {
    if s.genus() > 0 {
        let cert = check_feasibility(s);
        if !cert.is_positive() {
            return Err(SearchError::Infeasible {
                shape: s.clone(),
                certificate: Box::new(cert),
            });
        }
    }
    if s.degree() < 3 {
        return Err(SearchError::DegreeTooSmall(s.degree()));
    }
    if config.budget == 0 {
        return Err(SearchError::ZeroBudget);
    }

    let d = s.degree() as usize;
    let b = three_cycle_branch_count(s) as usize;
    let sigma_inf = canonical_infinity_permutation(s);
    let mut rng = config.rng();
    let mut stats = SearchStats::default();
    let forced_trials = (config.budget / 2).clamp(1, FORCED_TRIAL_CAP);

    while stats.trials < config.budget {
        stats.trials += 1;
        let phase = if stats.trials <= forced_trials {
            SearchPhase::ForcedCompletion
        } else {
            SearchPhase::ChainSkeleton
        };
        let candidate = match phase {
            SearchPhase::ForcedCompletion => {
                stats.forced_trials += 1;
                forced_trial(d, b, &sigma_inf, &mut rng)
                    .ok_or_else(|| stats.forced_not_three_cycle += 1)
            }
            SearchPhase::ChainSkeleton => {
                stats.skeleton_trials += 1;
                skeleton_trial(d, b, &sigma_inf, &mut rng).ok_or_else(|| stats.skeleton_dead_ends += 1)
            }
        };
        let Ok(entries) = candidate else {
            continue;
        };
        let tuple = HurwitzTuple::new(d, entries)
            .and_then(|t| t.with_infinity(b))
            .map_err(|e| SearchError::InternalInconsistency(e.to_string()))?;
        if !tuple.is_transitive() {
            stats.intransitive += 1;
            continue;
        }
        if let Some(found) = certify(s, &tuple, config, phase, &stats)? {
            return Ok(SearchOutcome::Found {
                tuple,
                certificate: found,
            });
        }
        stats.not_alternating += 1;
    }
    Ok(SearchOutcome::Exhausted { stats })
}

fn forced_trial(d: usize, b: usize, sigma_inf: &Permutation, rng: &mut ChaCha8Rng) -> Option<Vec<Permutation>> {
    let mut entries: Vec<Permutation> = (0..b - 1).map(|_| Permutation::random_three_cycle(d, rng)).collect();
    let prefix = entries.iter().fold(Permutation::identity(d), |acc, t| acc.then(t));
    let forced = sigma_inf.then(&prefix).inverse();
    if !forced.is_three_cycle() {
        return None;
    }
    entries.push(forced);
    entries.push(sigma_inf.clone());
    Some(entries)
}

/// Number of 3-cycles in the shared-anchor factorization of an all-odd `p`.
fn chain_length(p: &Permutation) -> usize {
    (p.degree() - p.cycle_count()) / 2
}

fn skeleton_trial(d: usize, b: usize, sigma_inf: &Permutation, rng: &mut ChaCha8Rng) -> Option<Vec<Permutation>> {
    // Invariant: rest · peeled[last] ⋯ peeled[0] = σ_∞⁻¹, rest all-odd and
    // chain_length(rest) ≤ remaining with the same parity.
    let mut rest = sigma_inf.inverse();
    let mut remaining = b;
    if chain_length(&rest) > remaining {
        return None;
    }
    let mut peeled = Vec::new();
    let mut misses = 0;
    while chain_length(&rest) < remaining {
        if misses > 64 * d {
            return None;
        }
        let tau = Permutation::random_three_cycle(d, rng);
        let next = rest.then(&tau.inverse());
        if !next.is_all_odd_cycles() || chain_length(&next) > remaining - 1 {
            misses += 1;
            continue;
        }
        peeled.push(tau);
        rest = next;
        remaining -= 1;
    }
    let mut entries = Vec::with_capacity(b + 1);
    for cycle in rest.cycles() {
        entries.extend(odd_cycle_factorization(d, &cycle).ok()?);
    }
    entries.extend(peeled.into_iter().rev());
    entries.push(sigma_inf.clone());
    if entries.len() != b + 1 {
        return None;
    }
    scramble(&mut entries, b, rng);
    Some(entries)
}

/// Random braid moves among the first `b` entries.
fn scramble(entries: &mut [Permutation], b: usize, rng: &mut ChaCha8Rng) {
    if b < 2 {
        return;
    }
    for _ in 0..4 * b {
        let i = rng.gen_range(0..b - 1);
        let (x, y) = (entries[i].clone(), entries[i + 1].clone());
        if rng.gen_bool(0.5) {
            entries[i] = y.clone();
            entries[i + 1] = y.inverse().then(&x).then(&y);
        } else {
            entries[i] = x.then(&y).then(&x.inverse());
            entries[i + 1] = x;
        }
    }
}

fn certify(
    s: &CoverShape,
    tuple: &HurwitzTuple,
    config: SearchConfig,
    phase: SearchPhase,
    stats: &SearchStats,
) -> Result<Option<Certificate<SearchEvidence>>, SearchError> {
    let fail = |what: String| Err(SearchError::InternalInconsistency(what));
    if !tuple.is_valid() || !tuple.is_even() {
        return fail("candidate tuple is not a valid even tuple".into());
    }
    let genus = tuple
        .genus()
        .map_err(|e| SearchError::InternalInconsistency(e.to_string()))?;
    if genus != s.genus() as u64 {
        return fail(format!("candidate has genus {genus}, expected {}", s.genus()));
    }
    let b = three_cycle_branch_count(s) as usize;
    if tuple.entries()[..b].iter().any(|e| !e.is_three_cycle()) {
        return fail("candidate has a non-3-cycle entry".into());
    }
    let group = tuple.monodromy_group();
    let recognition = group.lemma1_certify()?;
    if recognition.verdict != Verdict::MonodromyIsAd {
        return Ok(None);
    }
    let alt = alternating_order(s.degree() as usize);
    if *group.order() != alt {
        return fail("certified group has the wrong order".into());
    }
    let decomposability = match decomposability_obstruction(tuple) {
        Ok(c) => Some(c.verdict),
        Err(ObstructionError::UnsupportedFiber(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let primitive = group.is_primitive()?;
    Ok(Some(Certificate::new(
        Verdict::MonodromyIsAd,
        SearchEvidence {
            shape: s.summary(),
            seed: config.seed,
            budget: config.budget,
            stream: config.stream,
            phase,
            trial: stats.trials,
            three_cycle_count: b as u64,
            genus,
            group_order: group.order().clone(),
            alternating_order: alt,
            alternating: recognition.evidence,
            decomposability,
            primitive,
            stats: *stats,
        },
    )))
}
