//! Composite coverings `f_2 ∘ f_1` as tuples in a wreath product.
//!
//! A degree-`m` outer tuple and, for each of its entries, one degree-`n`
//! permutation per outer sheet give a degree-`m·n` tuple. Point `(a, b)`
//! (sheet `a` of the outer cover, point `b` of the fiber) is numbered
//! `(a-1)·n + b`, so the blocks `{1..n}, {n+1..2n}, …` are preserved.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{PermError, Permutation};
use crate::tuple::{HurwitzTuple, TupleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Tuple(#[from] TupleError),
    #[error("the outer tuple is not valid")]
    InvalidOuter,
    #[error("expected {expected} inner permutations, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("inner permutations must have degree {expected}, got {got}")]
    InnerDegree { expected: usize, got: usize },
    #[error("assembled product is not the identity")]
    ProductNotIdentity,
    #[error("assembled tuple is not transitive")]
    Intransitive,
    #[error("assembled entry {0} is the identity")]
    IdentityEntry(usize),
}

/// `(σ; h_1, …, h_m)` acting by `(a, b) ↦ (σ(a), h_a(b))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathElement {
    outer: Permutation,
    inner: Vec<Permutation>,
}

impl WreathElement {
    pub fn new(outer: Permutation, inner: Vec<Permutation>) -> Result<Self, ComposeError> {
        if inner.len() != outer.degree() {
            return Err(ComposeError::ShapeMismatch {
                expected: outer.degree(),
                got: inner.len(),
            });
        }
        let n = inner.first().map(Permutation::degree).unwrap_or(1);
        if let Some(bad) = inner.iter().find(|h| h.degree() != n) {
            return Err(ComposeError::InnerDegree {
                expected: n,
                got: bad.degree(),
            });
        }
        Ok(WreathElement { outer, inner })
    }

    pub fn outer(&self) -> &Permutation {
        &self.outer
    }

    pub fn inner(&self) -> &[Permutation] {
        &self.inner
    }

    pub fn fiber_degree(&self) -> usize {
        self.inner[0].degree()
    }

    /// Left-to-right product.
    pub fn then(&self, other: &WreathElement) -> WreathElement {
        let inner = self
            .inner
            .iter()
            .enumerate()
            .map(|(a, h)| h.then(&other.inner[self.outer.apply0(a)]))
            .collect();
        WreathElement {
            outer: self.outer.then(&other.outer),
            inner,
        }
    }

    pub fn inverse(&self) -> WreathElement {
        let outer_inv = self.outer.inverse();
        let inner = (0..self.inner.len())
            .map(|a| self.inner[outer_inv.apply0(a)].inverse())
            .collect();
        WreathElement {
            outer: outer_inv,
            inner,
        }
    }

    pub fn to_permutation(&self) -> Permutation {
        let m = self.outer.degree();
        let n = self.fiber_degree();
        let images: Vec<usize> = (0..m * n)
            .map(|x| {
                let (a, b) = (x / n, x % n);
                self.outer.apply0(a) * n + self.inner[a].apply0(b) + 1
            })
            .collect();
        Permutation::from_images(&images).expect("wreath action is a bijection")
    }

    /// For each outer cycle, the product of the inner permutations along it,
    /// read from the cycle's first sheet. Its cycles of length `μ` become
    /// cycles of length `ℓ·μ` of the composite, `ℓ` the outer cycle length.
    pub fn cycle_products(&self) -> Vec<(usize, Permutation)> {
        let n = self.fiber_degree();
        self.outer
            .cycles_with_fixed()
            .into_iter()
            .map(|cycle| {
                let mut acc = Permutation::identity(n);
                for &a in &cycle {
                    acc = acc.then(&self.inner[a - 1]);
                }
                (cycle.len(), acc)
            })
            .collect()
    }

    /// The cycle type of the composite predicted from [`cycle_products`](Self::cycle_products).
    pub fn predicted_cycle_type(&self) -> Vec<usize> {
        let mut parts: Vec<usize> = self
            .cycle_products()
            .iter()
            .flat_map(|(len, c)| {
                c.cycle_type()
                    .parts()
                    .iter()
                    .map(|&mu| len * mu)
                    .collect::<Vec<_>>()
            })
            .collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts
    }
}

/// Inner data for [`compose_covers`]: `per_entry[j][a]` acts on the fiber
/// over sheet `a` (0-based) at entry `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InnerAssignment {
    pub degree: usize,
    pub per_entry: Vec<Vec<Permutation>>,
    /// Branch points of the inner cover lying over unbranched points of the outer one.
    #[serde(default)]
    pub extra: Vec<ExtraBranchPoint>,
}

/// An entry `(1; h_1, …, h_m)` inserted before outer entry `position`
/// (0-based; the outer length appends it).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtraBranchPoint {
    pub position: usize,
    pub inner: Vec<Permutation>,
}

impl InnerAssignment {
    pub fn new(degree: usize, per_entry: Vec<Vec<Permutation>>) -> Self {
        InnerAssignment {
            degree,
            per_entry,
            extra: Vec::new(),
        }
    }

    pub fn with_extra(mut self, position: usize, inner: Vec<Permutation>) -> Self {
        self.extra.push(ExtraBranchPoint { position, inner });
        self
    }
}

/// The composite's entries as wreath elements, extras spliced in, together
/// with the new position of the outer ∞ entry.
pub fn wreath_elements(
    outer: &HurwitzTuple,
    inner: &InnerAssignment,
) -> Result<(Vec<WreathElement>, Option<usize>), ComposeError> {
    if inner.per_entry.len() != outer.len() {
        return Err(ComposeError::ShapeMismatch {
            expected: outer.len(),
            got: inner.per_entry.len(),
        });
    }
    if let Some(x) = inner.extra.iter().find(|x| x.position > outer.len()) {
        return Err(ComposeError::ShapeMismatch {
            expected: outer.len(),
            got: x.position,
        });
    }
    let element = |sigma: &Permutation, hs: &[Permutation]| {
        if let Some(bad) = hs.iter().find(|h| h.degree() != inner.degree) {
            return Err(ComposeError::InnerDegree {
                expected: inner.degree,
                got: bad.degree(),
            });
        }
        WreathElement::new(sigma.clone(), hs.to_vec())
    };
    let unit = Permutation::identity(outer.degree());
    let mut elements = Vec::new();
    let mut infinity = None;
    for j in 0..=outer.len() {
        for x in inner.extra.iter().filter(|x| x.position == j) {
            elements.push(element(&unit, &x.inner)?);
        }
        if j < outer.len() {
            if outer.infinity_index() == Some(j) {
                infinity = Some(elements.len());
            }
            elements.push(element(&outer.entries()[j], &inner.per_entry[j])?);
        }
    }
    Ok((elements, infinity))
}

/// The degree `m·n` tuple of the composite cover. The ∞ marker carries over.
pub fn compose_covers(
    outer: &HurwitzTuple,
    inner: &InnerAssignment,
) -> Result<HurwitzTuple, ComposeError> {
    if !outer.is_valid() {
        return Err(ComposeError::InvalidOuter);
    }
    let (elements, infinity) = wreath_elements(outer, inner)?;
    let entries: Vec<Permutation> = elements.iter().map(WreathElement::to_permutation).collect();
    let mut tuple = HurwitzTuple::new(outer.degree() * inner.degree, entries)?;
    if let Some(i) = infinity {
        tuple = tuple.with_infinity(i)?;
    }
    if !tuple.product().is_identity() {
        return Err(ComposeError::ProductNotIdentity);
    }
    if let Some(i) = tuple.entries().iter().position(Permutation::is_identity) {
        return Err(ComposeError::IdentityEntry(i + 1));
    }
    if !tuple.is_transitive() {
        return Err(ComposeError::Intransitive);
    }
    Ok(tuple)
}

/// The blocks `{(a-1)·n + 1, …, a·n}` preserved by every composite.
pub fn sheet_blocks(m: usize, n: usize) -> Vec<Vec<usize>> {
    (0..m).map(|a| (a * n + 1..=a * n + n).collect()).collect()
}

/// A randomly generated composite whose fiber over ∞ has at most three
/// points, all of odd index greater than one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathInstance {
    pub outer: HurwitzTuple,
    pub inner: InnerAssignment,
    pub tuple: HurwitzTuple,
}

/// Draws an outer tuple of degree `m` with `entries` branch points and odd
/// ∞-type, then inner data of degree `n`, retrying up to `attempts` times
/// until the composite is a valid tuple with the required ∞ fiber.
pub fn random_wreath_instance<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    entries: usize,
    attempts: usize,
    rng: &mut R,
) -> Option<WreathInstance> {
    assert!(m >= 2 && n >= 2 && entries >= 2);
    for _ in 0..attempts {
        let Some(outer) = random_outer(m, entries, rng) else {
            continue;
        };
        let inf = entries - 1;
        let mut per_entry: Vec<Vec<Permutation>> = (0..entries)
            .map(|_| (0..m).map(|_| Permutation::random(n, rng)).collect())
            .collect();
        let inf_elem = WreathElement::new(outer.entries()[inf].clone(), per_entry[inf].clone()).ok()?;
        let fiber = inf_elem.predicted_cycle_type();
        if fiber.len() > 3 || fiber.iter().any(|&e| e < 2 || e % 2 == 0) {
            continue;
        }
        // force the first entry so the product is trivial
        let rest = (1..entries)
            .map(|j| WreathElement::new(outer.entries()[j].clone(), per_entry[j].clone()).ok())
            .collect::<Option<Vec<_>>>()?;
        let tail = rest[1..].iter().fold(rest[0].clone(), |acc, w| acc.then(w));
        let first = tail.inverse();
        debug_assert_eq!(first.outer(), &outer.entries()[0]);
        per_entry[0] = first.inner().to_vec();
        let inner = InnerAssignment::new(n, per_entry);
        if let Ok(tuple) = compose_covers(&outer, &inner) {
            return Some(WreathInstance { outer, inner, tuple });
        }
    }
    None
}

/// A valid degree-`m` tuple whose last entry (marked ∞) has only odd
/// cycles, at most three of them, all nontrivial.
fn random_outer<R: Rng + ?Sized>(m: usize, entries: usize, rng: &mut R) -> Option<HurwitzTuple> {
    let inf = Permutation::random(m, rng);
    let ct = inf.cycle_type();
    if ct.num_cycles() > 3 || ct.parts().iter().any(|&e| e < 2 || e % 2 == 0) {
        return None;
    }
    let mut list: Vec<Permutation> = (0..entries - 2).map(|_| Permutation::random(m, rng)).collect();
    let tail = list.iter().fold(Permutation::identity(m), |acc, p| acc.then(p)).then(&inf);
    let first = tail.inverse();
    if first.is_identity() {
        return None;
    }
    list.insert(0, first);
    list.push(inf);
    let t = HurwitzTuple::new(m, list).ok()?.with_infinity(entries - 1).ok()?;
    (t.is_valid() && t.entries().iter().all(|e| !e.is_identity())).then_some(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::gcd_all;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(d: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(d, s).unwrap()
    }

    #[test]
    fn wreath_arithmetic_matches_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let m = rng.gen_range(1..=4);
            let n = rng.gen_range(1..=4);
            let mk = |rng: &mut ChaCha8Rng| {
                WreathElement::new(
                    Permutation::random(m, rng),
                    (0..m).map(|_| Permutation::random(n, rng)).collect(),
                )
                .unwrap()
            };
            let x = mk(&mut rng);
            let y = mk(&mut rng);
            assert_eq!(x.then(&y).to_permutation(), x.to_permutation().then(&y.to_permutation()));
            assert_eq!(x.inverse().to_permutation(), x.to_permutation().inverse());
            assert_eq!(x.predicted_cycle_type(), x.to_permutation().cycle_type().parts());
        }
    }

    #[test]
    fn two_by_two_composite() {
        let outer = HurwitzTuple::parse(2, &["(1 2)", "(1 2)"]).unwrap().with_infinity(1).unwrap();
        let id = p(2, "()");
        let swap = p(2, "(1 2)");
        let inner = InnerAssignment::new(2, vec![vec![id.clone(), id.clone()], vec![id.clone(), id.clone()]])
            .with_extra(1, vec![swap.clone(), id.clone()])
            .with_extra(1, vec![swap.clone(), id.clone()]);
        let t = compose_covers(&outer, &inner).unwrap();
        assert_eq!(t.degree(), 4);
        assert!(t.is_valid());
        assert_eq!(t.entries()[0], p(4, "(1 3)(2 4)"));
        assert_eq!(t.entries()[1], p(4, "(1 2)"));
        assert_eq!(t.infinity_index(), Some(3));
        let inf = t.infinity_entry().unwrap();
        assert_eq!(inf.cycle_type().parts(), &[2, 2]);
        assert_eq!(t.genus(), Ok(0));
        let group = t.monodromy_group();
        assert!(!group.is_primitive().unwrap());
        let blocks = sheet_blocks(2, 2);
        assert_eq!(blocks, vec![vec![1, 2], vec![3, 4]]);
        for e in t.entries() {
            for b in &blocks {
                let img: Vec<usize> = b.iter().map(|&x| e.image(x)).collect();
                assert!(blocks.iter().any(|c| c.iter().all(|x| img.contains(x))));
            }
        }
    }

    #[test]
    fn incompatible_data_is_rejected() {
        let outer = HurwitzTuple::parse(2, &["(1 2)", "(1 2)"]).unwrap();
        let id = p(2, "()");
        let swap = p(2, "(1 2)");
        let inner = InnerAssignment::new(2, vec![vec![swap.clone(), id.clone()], vec![id.clone(), id.clone()]]);
        assert_eq!(compose_covers(&outer, &inner), Err(ComposeError::ProductNotIdentity));
        let short = InnerAssignment::new(2, vec![vec![swap.clone(), id.clone()]]);
        assert!(matches!(compose_covers(&outer, &short), Err(ComposeError::ShapeMismatch { .. })));
        let intrans = InnerAssignment::new(2, vec![vec![id.clone(), id.clone()], vec![id.clone(), id.clone()]]);
        assert_eq!(compose_covers(&outer, &intrans), Err(ComposeError::Intransitive));
        let trivial_extra = intrans.clone().with_extra(0, vec![id.clone(), id.clone()]);
        assert_eq!(compose_covers(&outer, &trivial_extra), Err(ComposeError::IdentityEntry(1)));
        let far = intrans.with_extra(3, vec![swap, id]);
        assert!(matches!(compose_covers(&outer, &far), Err(ComposeError::ShapeMismatch { .. })));
    }

    #[test]
    fn random_composites_share_a_factor_over_infinity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut made = 0;
        for (m, n) in [(3, 3), (3, 5), (5, 3), (3, 2), (5, 5)] {
            for _ in 0..8 {
                let Some(w) = random_wreath_instance(m, n, 3, 500, &mut rng) else {
                    continue;
                };
                made += 1;
                let t = &w.tuple;
                assert!(t.is_valid());
                assert!(!t.monodromy_group().is_primitive().unwrap());
                let fiber: Vec<u64> = t.infinity_entry().unwrap().cycle_type().parts().iter().map(|&e| e as u64).collect();
                assert!(fiber.len() <= 3 && fiber.iter().all(|e| e % 2 == 1 && *e > 1));
                assert!(gcd_all(&fiber) > 1, "fiber {fiber:?}");
            }
        }
        assert!(made >= 16, "only {made} composites");
    }
}
