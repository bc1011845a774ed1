//! Seeded experiments behind `lemma1-stress` and `decomp-test`.

use std::ops::RangeInclusive;

use hurwitz_core::certificate::Verdict;
use hurwitz_core::group::PermGroup;
use hurwitz_core::odd_covers::{
    random_wreath_instance, search_simple_odd_tuple, CoverShape, SearchConfig, SearchError, SearchOutcome,
};
use hurwitz_core::perm::Permutation;
use hurwitz_core::util::{alternating_order, gcd_all};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Draws per degree before giving up on filling the quota.
const STRESS_ATTEMPTS_PER_GROUP: usize = 1000;

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A random 3-cycle together with one or two random even permutations.
pub fn random_stress_generators<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Vec<Permutation> {
    let mut gens = vec![Permutation::random_three_cycle(degree, rng), Permutation::random_even(degree, rng)];
    if rng.gen_bool(0.5) {
        gens.push(Permutation::random_even(degree, rng));
    }
    gens
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StressException {
    pub generators: Vec<String>,
    pub order: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StressRow {
    pub degree: usize,
    pub attempts: usize,
    pub intransitive: usize,
    pub imprimitive: usize,
    pub groups: usize,
    pub certified: usize,
    pub expected_order: String,
    pub exceptions: Vec<StressException>,
}

/// Fills a quota of `trials` transitive primitive groups generated by a
/// 3-cycle and even permutations, and checks each has order `d!/2`.
pub fn stress_degree(degree: usize, trials: usize, seed: u64) -> StressRow {
    let mut rng = stream_rng(seed, degree as u64);
    let expected = alternating_order(degree);
    let mut row = StressRow {
        degree,
        attempts: 0,
        intransitive: 0,
        imprimitive: 0,
        groups: 0,
        certified: 0,
        expected_order: expected.to_string(),
        exceptions: Vec::new(),
    };
    while row.groups < trials && row.attempts < trials * STRESS_ATTEMPTS_PER_GROUP {
        row.attempts += 1;
        let gens = random_stress_generators(degree, &mut rng);
        let names: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
        let group = PermGroup::from_generators(gens).expect("generators share a degree");
        if !group.is_transitive() {
            row.intransitive += 1;
            continue;
        }
        match group.is_primitive() {
            Ok(true) => {}
            Ok(false) => {
                row.imprimitive += 1;
                continue;
            }
            Err(e) => {
                row.exceptions.push(StressException {
                    generators: names,
                    order: group.order().to_string(),
                    detail: e.to_string(),
                });
                continue;
            }
        }
        row.groups += 1;
        let mut detail = None;
        match group.lemma1_certify() {
            Ok(c) if c.verdict == Verdict::MonodromyIsAd => row.certified += 1,
            Ok(c) => detail = Some(format!("verdict {}: {}", c.verdict, c.evidence.failed.join("; "))),
            Err(e) => detail = Some(e.to_string()),
        }
        if *group.order() != expected {
            detail.get_or_insert_with(|| "order differs from d!/2".to_string());
        }
        if let Some(detail) = detail {
            row.exceptions.push(StressException {
                generators: names,
                order: group.order().to_string(),
                detail,
            });
        }
    }
    row
}

pub fn stress(range: RangeInclusive<usize>, trials: usize, seed: u64) -> Vec<StressRow> {
    range.map(|d| stress_degree(d, trials, seed)).collect()
}

/// Outer and inner degrees cycled through by the composite experiment.
pub const WREATH_DEGREES: [(usize, usize); 6] = [(3, 2), (3, 3), (3, 4), (5, 3), (3, 5), (5, 5)];
const WREATH_ATTEMPTS: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WreathCase {
    pub outer_degree: usize,
    pub inner_degree: usize,
    pub degree: usize,
    pub entries: usize,
    pub fiber_indices: Vec<usize>,
    pub gcd: u64,
    pub primitive: bool,
    pub valid: bool,
}

impl WreathCase {
    pub fn passes(&self) -> bool {
        self.valid && self.gcd > 1 && !self.primitive
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessCase {
    pub shape: String,
    pub pole_orders: Vec<u64>,
    pub coprime: bool,
    pub found: bool,
    pub primitive: Option<bool>,
    pub decomposability: Option<Verdict>,
}

impl WitnessCase {
    pub fn passes(&self) -> bool {
        self.found && (!self.coprime || self.primitive == Some(true))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompSummary {
    pub requested: usize,
    pub generated: usize,
    pub failures: usize,
    pub cases: Vec<WreathCase>,
    pub witnesses: Vec<WitnessCase>,
}

impl DecompSummary {
    pub fn passes(&self) -> bool {
        self.generated == self.requested && self.failures == 0 && self.witnesses.iter().all(WitnessCase::passes)
    }
}

/// One composite with at most three odd indices over ∞.
pub fn wreath_case<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Option<WreathCase> {
    let entries = rng.gen_range(3..=4);
    let inst = random_wreath_instance(m, n, entries, WREATH_ATTEMPTS, rng)?;
    let t = &inst.tuple;
    let fiber = t.infinity_entry()?.cycle_type().parts().to_vec();
    let as_u64: Vec<u64> = fiber.iter().map(|&e| e as u64).collect();
    Some(WreathCase {
        outer_degree: m,
        inner_degree: n,
        degree: t.degree(),
        entries: t.len(),
        gcd: gcd_all(&as_u64),
        fiber_indices: fiber,
        primitive: t.monodromy_group().is_primitive().unwrap_or(true),
        valid: t.is_valid(),
    })
}

/// Shapes with coprime pole orders used for the converse check.
pub fn coprime_witness_shapes() -> Vec<CoverShape> {
    [(0, vec![3]), (0, vec![4, 3]), (0, vec![4, 3, 2]), (0, vec![7]), (1, vec![5, 4])]
        .into_iter()
        .map(|(g, n)| CoverShape::new(g, n).expect("fixed shapes are well formed"))
        .collect()
}

pub fn witness_case(shape: &CoverShape, seed: u64) -> Result<WitnessCase, SearchError> {
    let out = search_simple_odd_tuple(shape, SearchConfig::new(seed, 200_000))?;
    let orders = shape.pole_orders();
    let coprime = if orders.len() == 1 {
        hurwitz_core::util::is_prime(orders[0])
    } else {
        gcd_all(&orders) == 1
    };
    let (found, primitive, decomposability) = match &out {
        SearchOutcome::Found { tuple, certificate } => (
            true,
            tuple.monodromy_group().is_primitive().ok(),
            certificate.evidence.decomposability,
        ),
        SearchOutcome::Exhausted { .. } => (false, None, None),
    };
    Ok(WitnessCase {
        shape: shape.to_string(),
        pole_orders: orders,
        coprime,
        found,
        primitive,
        decomposability,
    })
}

pub fn decomp_test(trials: usize, seed: u64) -> Result<DecompSummary, SearchError> {
    let mut rng = stream_rng(seed, 0);
    let mut cases = Vec::with_capacity(trials);
    for i in 0..trials {
        let (m, n) = WREATH_DEGREES[i % WREATH_DEGREES.len()];
        if let Some(case) = wreath_case(m, n, &mut rng) {
            cases.push(case);
        }
    }
    let witnesses = coprime_witness_shapes()
        .iter()
        .enumerate()
        .map(|(i, s)| witness_case(s, seed.wrapping_add(i as u64)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DecompSummary {
        requested: trials,
        generated: cases.len(),
        failures: cases.iter().filter(|c| !c.passes()).count(),
        cases,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stress_is_deterministic_and_clean() {
        let a = stress_degree(6, 20, 3);
        assert_eq!(a, stress_degree(6, 20, 3));
        assert_eq!(a.groups, 20);
        assert_eq!(a.certified, 20);
        assert!(a.exceptions.is_empty());
    }

    #[test]
    fn composites_fail_primitivity() {
        let s = decomp_test(12, 1).unwrap();
        assert_eq!(s.generated, 12);
        assert!(s.passes(), "{s:?}");
    }
}
