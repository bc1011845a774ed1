//! Splitting branch points into simple ones.
//!
//! An odd cycle `(p_1 … p_m)` is the left-to-right product of the chain
//! `(p_1 p_2 p_3)(p_1 p_4 p_5)⋯(p_1 p_{m-1} p_m)`: `(m-1)/2` three-cycles
//! sharing the anchor `p_1`. Replacing a tuple entry by the concatenated chains
//! of its cycles keeps the product, the genus and the ramification count
//! (each cycle contributes `m - 1 = 2 · (m-1)/2`), and the old entry lies in
//! the group generated by the new ones.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{PermError, Permutation};
use crate::tuple::{HurwitzTuple, TupleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegenerationError {
    #[error("cycle length {0} must be odd and at least 3")]
    BadCycleLength(usize),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Tuple(#[from] TupleError),
    #[error("the tuple is not valid")]
    InvalidTuple,
    #[error("the tuple has an entry with an even cycle")]
    NotEven,
    #[error("entry {0} has nothing to refine")]
    NothingToRefine(usize),
    #[error("index {index} is out of range for a tuple of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

/// The shared-anchor chain of `(m-1)/2` three-cycles whose left-to-right
/// product is the cycle `(support[0] support[1] … support[m-1])`.
pub fn odd_cycle_factorization(
    degree: usize,
    support: &[usize],
) -> Result<Vec<Permutation>, DegenerationError> {
    let m = support.len();
    if m < 3 || m % 2 == 0 {
        return Err(DegenerationError::BadCycleLength(m));
    }
    // validates range and distinctness
    Permutation::cycle(degree, support)?;
    let anchor = support[0];
    support[1..]
        .chunks(2)
        .map(|pair| Ok(Permutation::cycle(degree, &[anchor, pair[0], pair[1]])?))
        .collect()
}

/// How a single entry is split: one factor chain per nontrivial cycle, in the
/// entry's canonical cycle order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementPlan {
    pub target_entry: usize,
    pub per_cycle_factors: Vec<Vec<Permutation>>,
    /// `(cycle index, factor index)` in splice order.
    pub splice_order: Vec<(usize, usize)>,
}

impl RefinementPlan {
    pub fn for_entry(target_entry: usize, entry: &Permutation) -> Result<Self, DegenerationError> {
        let mut per_cycle_factors = Vec::new();
        for cycle in entry.cycles() {
            per_cycle_factors.push(odd_cycle_factorization(entry.degree(), &cycle)?);
        }
        let splice_order = per_cycle_factors
            .iter()
            .enumerate()
            .flat_map(|(c, fs)| (0..fs.len()).map(move |f| (c, f)))
            .collect();
        Ok(RefinementPlan {
            target_entry,
            per_cycle_factors,
            splice_order,
        })
    }

    pub fn factors(&self) -> Vec<Permutation> {
        self.splice_order
            .iter()
            .map(|&(c, f)| self.per_cycle_factors[c][f].clone())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.splice_order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.splice_order.is_empty()
    }
}

/// Where an entry of a refined tuple came from. Indices are 1-based, matching
/// the tuple file format; `cycle` and `factor` are absent for untouched entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub original_entry: usize,
    pub cycle: Option<usize>,
    pub factor: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub tuple: HurwitzTuple,
    pub provenance: Vec<Provenance>,
}

fn check_even_valid(t: &HurwitzTuple) -> Result<(), DegenerationError> {
    if !t.is_valid() {
        return Err(DegenerationError::InvalidTuple);
    }
    if !t.is_even() {
        return Err(DegenerationError::NotEven);
    }
    Ok(())
}

/// Splits every entry whose index satisfies `select` and is not already a 3-cycle.
fn refine_where(
    t: &HurwitzTuple,
    select: impl Fn(usize) -> bool,
) -> Result<Refinement, DegenerationError> {
    let mut entries = Vec::new();
    let mut provenance = Vec::new();
    let mut infinity = None;
    for (i, e) in t.entries().iter().enumerate() {
        let split = select(i) && !e.is_three_cycle();
        if !split {
            if t.infinity_index() == Some(i) {
                infinity = Some(entries.len());
            }
            entries.push(e.clone());
            provenance.push(Provenance {
                original_entry: i + 1,
                cycle: None,
                factor: None,
            });
            continue;
        }
        let plan = RefinementPlan::for_entry(i, e)?;
        for &(c, f) in &plan.splice_order {
            entries.push(plan.per_cycle_factors[c][f].clone());
            provenance.push(Provenance {
                original_entry: i + 1,
                cycle: Some(c + 1),
                factor: Some(f + 1),
            });
        }
    }
    let mut tuple = HurwitzTuple::new(t.degree(), entries)?;
    if let Some(k) = infinity {
        tuple = tuple.with_infinity(k)?;
    }
    verify_refinement(t, &tuple)?;
    Ok(Refinement { tuple, provenance })
}

fn verify_refinement(original: &HurwitzTuple, refined: &HurwitzTuple) -> Result<(), DegenerationError> {
    let fail = |what: &str| Err(DegenerationError::InternalInconsistency(what.to_string()));
    if refined.product() != original.product() {
        return fail("refinement changed the product");
    }
    if !refined.is_valid() || !refined.is_even() {
        return fail("refinement produced an invalid tuple");
    }
    if refined.genus()? != original.genus()? {
        return fail("refinement changed the genus");
    }
    if !monodromy_containment(original, refined)? {
        return fail("original monodromy is not contained in the refined monodromy");
    }
    Ok(())
}

/// Replaces entry `idx` (0-based) by the three-cycle chains of its cycles.
/// If `idx` is the ∞ entry the marker is dropped, since that branch point splits.
pub fn refine_branch_point(t: &HurwitzTuple, idx: usize) -> Result<Refinement, DegenerationError> {
    check_even_valid(t)?;
    let entry = t.entries().get(idx).ok_or(DegenerationError::IndexOutOfRange {
        index: idx,
        len: t.len(),
    })?;
    if entry.is_three_cycle() || entry.is_identity() {
        return Err(DegenerationError::NothingToRefine(idx + 1));
    }
    refine_where(t, |i| i == idx)
}

/// Refines every entry; the result consists of 3-cycles only.
pub fn refine_to_simple(t: &HurwitzTuple) -> Result<Refinement, DegenerationError> {
    check_even_valid(t)?;
    refine_where(t, |_| true)
}

/// Refines every entry except `keep` (0-based), e.g. the fiber over ∞.
pub fn refine_all_but(t: &HurwitzTuple, keep: usize) -> Result<Refinement, DegenerationError> {
    if keep >= t.len() {
        return Err(DegenerationError::IndexOutOfRange {
            index: keep,
            len: t.len(),
        });
    }
    check_even_valid(t)?;
    refine_where(t, |i| i != keep)
}

/// True iff every entry of `t` lies in the group generated by `refined`.
pub fn monodromy_containment(
    t: &HurwitzTuple,
    refined: &HurwitzTuple,
) -> Result<bool, DegenerationError> {
    if t.degree() != refined.degree() {
        return Err(PermError::DegreeMismatch {
            left: t.degree(),
            right: refined.degree(),
        }
        .into());
    }
    let group = refined.monodromy_group();
    Ok(t.entries().iter().all(|e| group.contains(e)))
}

/// Number of entries `refine_to_simple` produces: `Σ_entries Σ_cycles (m_j - 1)/2`.
pub fn simple_entry_count(t: &HurwitzTuple) -> usize {
    t.entries()
        .iter()
        .flat_map(|e| e.cycles())
        .map(|c| (c.len() - 1) / 2)
        .sum()
}
