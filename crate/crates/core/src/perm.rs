//! Permutations of `{1..d}` stored as image tables.
//!
//! Composition is left-to-right throughout the crate: `p.compose(&q)` applies
//! `p` first and then `q`, so `x^(pq) = (x^p)^q`. Points are 1-based in every
//! public surface; the image table is 0-based internally.

use std::fmt;

use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported degree.
pub const MAX_DEGREE: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree {0} is outside 1..={MAX_DEGREE}")]
    InvalidDegree(usize),
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("point {point} is outside 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {0} appears more than once")]
    RepeatedPoint(usize),
    #[error("cycle notation could not be parsed: {0}")]
    Syntax(String),
}

fn check_degree(degree: usize) -> Result<(), PermError> {
    if degree == 0 || degree > MAX_DEGREE {
        Err(PermError::InvalidDegree(degree))
    } else {
        Ok(())
    }
}

/// A bijection of `{1..d}`.
///
/// The derived ordering is lexicographic on the image table, which is the
/// order used for normal forms of tuples.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    /// The identity of the given degree.
    ///
    /// # Panics
    /// If `degree` is 0 or exceeds [`MAX_DEGREE`].
    pub fn identity(degree: usize) -> Self {
        check_degree(degree).expect("invalid degree");
        Permutation {
            images: (0..degree as u8).collect(),
        }
    }

    /// Builds a permutation from a 1-based image table.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let degree = images.len();
        check_degree(degree)?;
        let mut seen = [false; MAX_DEGREE];
        let mut table = Vec::with_capacity(degree);
        for &img in images {
            if img == 0 || img > degree {
                return Err(PermError::PointOutOfRange { point: img, degree });
            }
            if seen[img - 1] {
                return Err(PermError::RepeatedPoint(img));
            }
            seen[img - 1] = true;
            table.push((img - 1) as u8);
        }
        Ok(Permutation { images: table })
    }

    /// Builds a permutation from disjoint 1-based cycles; points not mentioned are fixed.
    pub fn from_cycles<C: AsRef<[usize]>>(degree: usize, cycles: &[C]) -> Result<Self, PermError> {
        check_degree(degree)?;
        let mut images: Vec<u8> = (0..degree as u8).collect();
        let mut seen = [false; MAX_DEGREE];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for &p in cycle {
                if p == 0 || p > degree {
                    return Err(PermError::PointOutOfRange { point: p, degree });
                }
                if seen[p - 1] {
                    return Err(PermError::RepeatedPoint(p));
                }
                seen[p - 1] = true;
            }
            for (i, &p) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                images[p - 1] = (next - 1) as u8;
            }
        }
        Ok(Permutation { images })
    }

    /// A single cycle, e.g. `Permutation::cycle(5, &[1, 2, 3])`.
    pub fn cycle(degree: usize, points: &[usize]) -> Result<Self, PermError> {
        Self::from_cycles(degree, &[points])
    }

    /// Parses cycle notation such as `(1 2 3)(4 5)`; `()` or an empty string is the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self, PermError> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| PermError::Syntax(text.to_string()))?;
            let close = open
                .find(')')
                .ok_or_else(|| PermError::Syntax(text.to_string()))?;
            let body = &open[..close];
            let points = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| PermError::Syntax(text.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = open[close + 1..].trim_start();
        }
        Self::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 1-based point.
    pub fn image(&self, point: usize) -> usize {
        self.images[point - 1] as usize + 1
    }

    /// The 1-based image table.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    #[inline]
    pub(crate) fn apply0(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    /// `self` first, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    /// Unchecked left-to-right composition; degrees must agree.
    pub(crate) fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    /// `c^-1 * self * c`: relabels every point `x` as `x^c`.
    pub fn conjugate_by(&self, c: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != c.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: c.degree(),
            });
        }
        let mut out = vec![0u8; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            out[c.images[x] as usize] = c.images[y as usize];
        }
        Ok(Permutation { images: out })
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, exp: i64) -> Permutation {
        let n = self.degree();
        let ord = self.order();
        let e = exp.rem_euclid(ord as i64) as u64;
        let mut out = vec![0u8; n];
        for cycle in self.cycles_with_fixed() {
            let len = cycle.len() as u64;
            let shift = (e % len) as usize;
            for (i, &p) in cycle.iter().enumerate() {
                out[p - 1] = (cycle[(i + shift) % cycle.len()] - 1) as u8;
            }
        }
        Permutation { images: out }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Number of moved points.
    pub fn support_size(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i != x as usize)
            .count()
    }

    /// All cycles including fixed points, each starting at its smallest point,
    /// ordered by that point.
    pub fn cycles_with_fixed(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = [false; MAX_DEGREE];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Nontrivial cycles in canonical order (the wire form).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.cycles_with_fixed()
            .into_iter()
            .filter(|c| c.len() > 1)
            .collect()
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        self.cycles_with_fixed().len()
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::new(self.cycles_with_fixed().iter().map(Vec::len).collect())
    }

    /// Element order, the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles_with_fixed()
            .iter()
            .fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    pub fn is_even(&self) -> bool {
        (self.degree() - self.cycle_count()) % 2 == 0
    }

    /// True iff every cycle (fixed points included) has odd length.
    pub fn is_all_odd_cycles(&self) -> bool {
        self.cycle_type().is_all_odd()
    }

    pub fn is_three_cycle(&self) -> bool {
        self.support_size() == 3 && self.order() == 3
    }

    /// Uniformly random permutation.
    pub fn random<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Permutation {
        check_degree(degree).expect("invalid degree");
        let mut images: Vec<u8> = (0..degree as u8).collect();
        for i in (1..degree).rev() {
            let j = rng.gen_range(0..=i);
            images.swap(i, j);
        }
        Permutation { images }
    }

    /// Uniformly random even permutation.
    pub fn random_even<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Permutation {
        let mut p = Self::random(degree, rng);
        if !p.is_even() && degree >= 2 {
            p.images.swap(0, 1);
        }
        p
    }

    /// Uniformly random 3-cycle; requires degree at least 3.
    pub fn random_three_cycle<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Permutation {
        assert!(degree >= 3, "3-cycles need degree >= 3");
        let a = rng.gen_range(0..degree);
        let mut b = rng.gen_range(0..degree - 1);
        if b >= a {
            b += 1;
        }
        let mut c = rng.gen_range(0..degree - 2);
        for lo in [a.min(b), a.max(b)] {
            if c >= lo {
                c += 1;
            }
        }
        let mut images: Vec<u8> = (0..degree as u8).collect();
        images[a] = b as u8;
        images[b] = c as u8;
        images[c] = a as u8;
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}[{}]", self.degree())
    }
}

/// Wire form: `{"degree": d, "cycles": [[1,2,3],[4,5]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PermutationWire {
    degree: usize,
    cycles: Vec<Vec<usize>>,
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PermutationWire {
            degree: self.degree(),
            cycles: self.cycles(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = PermutationWire::deserialize(deserializer)?;
        Permutation::from_cycles(wire.degree, &wire.cycles).map_err(serde::de::Error::custom)
    }
}

/// A partition of the degree, parts sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn num_cycles(&self) -> usize {
        self.parts.len()
    }

    pub fn is_all_odd(&self) -> bool {
        self.parts.iter().all(|p| p % 2 == 1)
    }

    /// Contribution `d - c` of a branch permutation with this type to the
    /// Riemann–Hurwitz sum.
    pub fn ramification_contribution(&self) -> usize {
        self.degree() - self.num_cycles()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}
