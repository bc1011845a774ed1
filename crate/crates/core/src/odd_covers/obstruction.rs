use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{Certificate, Verdict};
use crate::group::GroupError;
use crate::tuple::HurwitzTuple;
use crate::util::{gcd_all, is_prime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("the tuple is not valid")]
    InvalidTuple,
    #[error("the tuple has no marked fiber over infinity")]
    NoInfinity,
    #[error("the fiber over infinity has cycle type {0:?}, outside the supported range")]
    UnsupportedFiber(Vec<usize>),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionEvidence {
    /// Cycle lengths of the ∞ entry, descending.
    pub fiber_indices: Vec<usize>,
    pub gcd: u64,
    pub prime_degree: bool,
    pub criterion: String,
    pub primitive: bool,
    /// A nontrivial block system (1-based points) when the monodromy is imprimitive.
    pub block_system: Option<Vec<Vec<usize>>>,
}

/// Indecomposability from the fiber over ∞ alone.
///
/// A factorization `f = f_2 ∘ f_1` forces the ramification indices over ∞ to
/// share a factor when there are at most three of them, all odd if three; so
/// coprime indices (or a single prime one) certify indecomposability. Shared
/// factors prove nothing. The verdict is cross-checked against primitivity of
/// the monodromy group.
pub fn decomposability_obstruction(
    t: &HurwitzTuple,
) -> Result<Certificate<ObstructionEvidence>, ObstructionError> {
    if !t.is_valid() {
        return Err(ObstructionError::InvalidTuple);
    }
    let infinity = t.infinity_entry().ok_or(ObstructionError::NoInfinity)?;
    let fiber = infinity.cycle_type().parts().to_vec();
    let in_scope = fiber.len() <= 3
        && fiber.iter().all(|&e| e > 1)
        && (fiber.len() < 3 || fiber.iter().all(|&e| e % 2 == 1));
    if !in_scope {
        return Err(ObstructionError::UnsupportedFiber(fiber));
    }

    let as_u64: Vec<u64> = fiber.iter().map(|&e| e as u64).collect();
    let gcd = gcd_all(&as_u64);
    let prime_degree = fiber.len() == 1 && is_prime(as_u64[0]);
    let (indecomposable, criterion) = if fiber.len() == 1 {
        if prime_degree {
            (true, format!("degree {} is prime, so it has no factorization d_1·d_2 with both > 1", fiber[0]))
        } else {
            (false, format!("single fiber index {} is composite", fiber[0]))
        }
    } else if gcd == 1 {
        (true, "fiber indices over infinity are coprime".to_string())
    } else {
        (false, format!("fiber indices over infinity share the factor {gcd}"))
    };

    let group = t.monodromy_group();
    let block_system = group.nontrivial_block_system()?;
    let primitive = block_system.is_none();
    if indecomposable && !primitive {
        return Err(ObstructionError::InternalInconsistency(format!(
            "fiber {fiber:?} certifies indecomposability but the monodromy preserves {:?}",
            block_system.unwrap_or_default()
        )));
    }
    let verdict = if indecomposable {
        Verdict::Indecomposable
    } else {
        Verdict::Inconclusive
    };
    Ok(Certificate::new(
        verdict,
        ObstructionEvidence {
            fiber_indices: fiber,
            gcd,
            prime_degree,
            criterion,
            primitive,
            block_system,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: usize, entries: &[&str], inf: usize) -> HurwitzTuple {
        HurwitzTuple::parse(d, entries).unwrap().with_infinity(inf).unwrap()
    }

    #[test]
    fn prime_cycle_is_indecomposable() {
        let x = t(5, &["(1 2 3)", "(1 4 5)", "(1 5 4 3 2)"], 2);
        let c = decomposability_obstruction(&x).unwrap();
        assert_eq!(c.verdict, Verdict::Indecomposable);
        assert!(c.evidence.prime_degree && c.evidence.primitive);
    }

    #[test]
    fn shared_factor_is_inconclusive() {
        // degree-4 composite of two double covers
        let x = t(4, &["(1 3)(2 4)", "(1 2)", "(1 4 2 3)"], 2);
        assert!(x.is_valid());
        let c = decomposability_obstruction(&x).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert_eq!(c.evidence.fiber_indices, vec![4]);
        assert!(!c.evidence.primitive);

        let y = t(4, &["(1 3)(2 4)", "(1 2)(3 4)", "(1 4)(2 3)"], 2);
        let c = decomposability_obstruction(&y).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert_eq!(c.evidence.gcd, 2);
    }

    #[test]
    fn preconditions() {
        let x = HurwitzTuple::parse(3, &["(1 2 3)", "(1 3 2)"]).unwrap();
        assert_eq!(decomposability_obstruction(&x), Err(ObstructionError::NoInfinity));
        let x = t(3, &["(1 2)", "(2 3)", "(1 2 3)"], 0);
        assert!(matches!(decomposability_obstruction(&x), Err(ObstructionError::UnsupportedFiber(_))));
        let bad = t(3, &["(1 2 3)", "(1 2 3)"], 0);
        assert_eq!(decomposability_obstruction(&bad), Err(ObstructionError::InvalidTuple));
    }
}
