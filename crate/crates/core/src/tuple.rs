//! Branch cycle descriptions: ordered tuples `(σ_1, …, σ_r)` of permutations
//! with `σ_1 ⋯ σ_r = id` (left-to-right) generating a transitive group.
//!
//! A [`HurwitzTuple`] may hold data that violates these invariants; use
//! [`HurwitzTuple::validate`] to obtain a verdict.

use std::cmp::Ordering;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::certificate::{Certificate, Verdict};
use crate::group::{GroupError, PermGroup};
use crate::perm::{CycleType, PermError, Permutation, MAX_DEGREE};

/// Degrees up to this bound are normalized by trying every conjugator.
pub const EXACT_NORMALIZATION_MAX_DEGREE: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TupleError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("index {index} is out of range for a tuple of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("Riemann–Hurwitz sum {total} is odd; the tuple is corrupted")]
    NonIntegralGenus { total: i64 },
    #[error("Riemann–Hurwitz gives negative genus {genus}; the tuple is corrupted")]
    NegativeGenus { genus: i64 },
    #[error("a tuple needs at least one entry")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HurwitzTuple {
    degree: usize,
    entries: Vec<Permutation>,
    infinity_index: Option<usize>,
}

/// Per-invariant outcome of [`HurwitzTuple::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationEvidence {
    pub degree: usize,
    pub entries: usize,
    pub product_is_identity: bool,
    pub transitive: bool,
    /// 1-based positions of identity entries.
    pub identity_entries: Vec<usize>,
    pub genus: Option<u64>,
    pub genus_error: Option<String>,
    #[serde(with = "option_biguint_string")]
    pub group_order: Option<BigUint>,
    pub cycle_types: Vec<CycleType>,
}

mod option_biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_some(&v.to_str_radix(10)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| {
            BigUint::parse_bytes(t.as_bytes(), 10)
                .ok_or_else(|| serde::de::Error::custom("not a decimal integer"))
        })
        .transpose()
    }
}

/// Result of [`HurwitzTuple::normalize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub tuple: HurwitzTuple,
    /// The conjugator `c` with `tuple = self^c`.
    pub conjugator: Permutation,
    /// False when the degree is above the exhaustive cutoff and a relabeling
    /// heuristic was used instead.
    pub exact: bool,
}

impl HurwitzTuple {
    pub fn new(degree: usize, entries: Vec<Permutation>) -> Result<Self, TupleError> {
        if entries.is_empty() {
            return Err(TupleError::Empty);
        }
        if let Some(bad) = entries.iter().find(|e| e.degree() != degree) {
            return Err(PermError::DegreeMismatch {
                left: degree,
                right: bad.degree(),
            }
            .into());
        }
        Ok(HurwitzTuple {
            degree,
            entries,
            infinity_index: None,
        })
    }

    /// Convenience constructor from cycle notation strings.
    pub fn parse(degree: usize, entries: &[&str]) -> Result<Self, TupleError> {
        let perms = entries
            .iter()
            .map(|s| Permutation::parse_cycles(degree, s))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(degree, perms)
    }

    /// Marks the (0-based) entry lying over ∞.
    pub fn with_infinity(mut self, index: usize) -> Result<Self, TupleError> {
        if index >= self.entries.len() {
            return Err(TupleError::IndexOutOfRange {
                index,
                len: self.entries.len(),
            });
        }
        self.infinity_index = Some(index);
        Ok(self)
    }

    pub fn without_infinity(mut self) -> Self {
        self.infinity_index = None;
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn entries(&self) -> &[Permutation] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn infinity_index(&self) -> Option<usize> {
        self.infinity_index
    }

    pub fn infinity_entry(&self) -> Option<&Permutation> {
        self.infinity_index.map(|i| &self.entries[i])
    }

    pub fn into_entries(self) -> Vec<Permutation> {
        self.entries
    }

    /// Left-to-right product `σ_1 ⋯ σ_r`.
    pub fn product(&self) -> Permutation {
        self.entries
            .iter()
            .fold(Permutation::identity(self.degree), |acc, e| acc.then(e))
    }

    pub fn cycle_types(&self) -> Vec<CycleType> {
        self.entries.iter().map(Permutation::cycle_type).collect()
    }

    /// Riemann–Hurwitz sum `Σ (d - c(σ_i)) - 2d`, which equals `2g - 2`.
    pub fn ramification_total(&self) -> i64 {
        let sum: usize = self
            .entries
            .iter()
            .map(|e| self.degree - e.cycle_count())
            .sum();
        sum as i64 - 2 * self.degree as i64
    }

    /// Genus of the covering curve: `g = 1 + (Σ (d - c(σ_i)) - 2d) / 2`.
    pub fn genus(&self) -> Result<u64, TupleError> {
        let total = self.ramification_total();
        if total % 2 != 0 {
            return Err(TupleError::NonIntegralGenus { total });
        }
        let genus = 1 + total / 2;
        if genus < 0 {
            return Err(TupleError::NegativeGenus { genus });
        }
        Ok(genus as u64)
    }

    pub fn monodromy_group(&self) -> PermGroup {
        PermGroup::from_generators(self.entries.clone()).expect("entries share one degree")
    }

    /// Orbit-based transitivity of the generated group.
    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for e in &self.entries {
                let y = e.apply0(x);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.degree
    }

    /// True iff every entry has only odd cycles: odd ramification data.
    pub fn is_even(&self) -> bool {
        self.entries.iter().all(Permutation::is_all_odd_cycles)
    }

    /// True iff every entry is a 3-cycle.
    pub fn is_simple(&self) -> bool {
        self.entries.iter().all(Permutation::is_three_cycle)
    }

    pub fn validate(&self) -> Certificate<ValidationEvidence> {
        let product_is_identity = self.product().is_identity();
        let transitive = self.is_transitive();
        let identity_entries: Vec<usize> = self
            .entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_identity())
            .map(|(i, _)| i + 1)
            .collect();
        let (genus, genus_error) = match self.genus() {
            Ok(g) => (Some(g), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let valid = product_is_identity && transitive && identity_entries.is_empty() && genus.is_some();
        let group_order = valid.then(|| self.monodromy_group().order().clone());
        let evidence = ValidationEvidence {
            degree: self.degree,
            entries: self.entries.len(),
            product_is_identity,
            transitive,
            identity_entries,
            genus,
            genus_error,
            group_order,
            cycle_types: self.cycle_types(),
        };
        Certificate::new(
            if valid { Verdict::Valid } else { Verdict::Invalid },
            evidence,
        )
    }

    pub fn is_valid(&self) -> bool {
        self.product().is_identity()
            && self.is_transitive()
            && self.entries.iter().all(|e| !e.is_identity())
    }

    /// Hurwitz move at the 0-based position `i`:
    /// `(σ_i, σ_{i+1}) ↦ (σ_{i+1}, σ_{i+1}^-1 σ_i σ_{i+1})`.
    pub fn braid_move(&self, i: usize) -> Result<Self, TupleError> {
        self.check_move_index(i)?;
        let mut out = self.clone();
        let a = &self.entries[i];
        let b = &self.entries[i + 1];
        out.entries[i] = b.clone();
        out.entries[i + 1] = a.conjugate_by(b)?;
        out.infinity_index = self.infinity_index.map(|k| match k {
            k if k == i => i + 1,
            k if k == i + 1 => i,
            k => k,
        });
        Ok(out)
    }

    /// Inverse of [`Self::braid_move`]: `(σ_i, σ_{i+1}) ↦ (σ_i σ_{i+1} σ_i^-1, σ_i)`.
    pub fn inverse_braid_move(&self, i: usize) -> Result<Self, TupleError> {
        self.check_move_index(i)?;
        let mut out = self.clone();
        let a = &self.entries[i];
        let b = &self.entries[i + 1];
        out.entries[i] = b.conjugate_by(&a.inverse())?;
        out.entries[i + 1] = a.clone();
        out.infinity_index = self.infinity_index.map(|k| match k {
            k if k == i => i + 1,
            k if k == i + 1 => i,
            k => k,
        });
        Ok(out)
    }

    fn check_move_index(&self, i: usize) -> Result<(), TupleError> {
        if i + 1 >= self.entries.len() {
            return Err(TupleError::IndexOutOfRange {
                index: i,
                len: self.entries.len(),
            });
        }
        Ok(())
    }

    /// Simultaneous conjugation: every entry `σ` becomes `c^-1 σ c`.
    pub fn conjugate_by(&self, c: &Permutation) -> Result<Self, TupleError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.conjugate_by(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HurwitzTuple {
            degree: self.degree,
            entries,
            infinity_index: self.infinity_index,
        })
    }

    fn compare_entries(a: &[Permutation], b: &[Permutation]) -> Ordering {
        a.cmp(b)
    }

    /// Lexicographically least simultaneous conjugate. Exhaustive over all
    /// conjugators up to [`EXACT_NORMALIZATION_MAX_DEGREE`]; above it, the least
    /// of the breadth-first relabelings from every start point (not exact).
    pub fn normalize(&self) -> NormalForm {
        if self.degree <= EXACT_NORMALIZATION_MAX_DEGREE {
            self.normalize_exhaustive()
        } else {
            self.normalize_by_relabeling()
        }
    }

    fn normalize_exhaustive(&self) -> NormalForm {
        let d = self.degree;
        let mut best_entries = self.entries.clone();
        let mut best_conj = Permutation::identity(d);
        let mut scratch: Vec<Permutation> = self.entries.clone();
        let mut images: Vec<usize> = (1..=d).collect();
        // Heap's algorithm over image tables of the conjugator.
        let mut counters = vec![0usize; d];
        let mut visit = |images: &[usize]| {
            let c = Permutation::from_images(images).unwrap();
            // compare lazily, entry by entry
            let mut ord = Ordering::Equal;
            for (k, e) in self.entries.iter().enumerate() {
                scratch[k] = e.conjugate_by(&c).unwrap();
                ord = scratch[k].cmp(&best_entries[k]);
                if ord != Ordering::Equal {
                    break;
                }
            }
            if ord == Ordering::Less {
                // the comparison may have stopped early; finish the conjugate
                for (k, e) in self.entries.iter().enumerate() {
                    scratch[k] = e.conjugate_by(&c).unwrap();
                }
                best_entries.clone_from(&scratch);
                best_conj = c;
            }
        };
        visit(&images);
        let mut i = 0;
        while i < d {
            if counters[i] < i {
                if i % 2 == 0 {
                    images.swap(0, i);
                } else {
                    images.swap(counters[i], i);
                }
                visit(&images);
                counters[i] += 1;
                i = 0;
            } else {
                counters[i] = 0;
                i += 1;
            }
        }
        NormalForm {
            tuple: HurwitzTuple {
                degree: d,
                entries: best_entries,
                infinity_index: self.infinity_index,
            },
            conjugator: best_conj,
            exact: true,
        }
    }

    fn normalize_by_relabeling(&self) -> NormalForm {
        let d = self.degree;
        let mut best: Option<(Vec<Permutation>, Permutation)> = None;
        for start in 0..d {
            let mut label = vec![usize::MAX; d];
            let mut order = Vec::with_capacity(d);
            let mut next_unlabeled = 0;
            let mut seed = start;
            loop {
                label[seed] = order.len();
                order.push(seed);
                let mut head = order.len() - 1;
                while head < order.len() {
                    let x = order[head];
                    head += 1;
                    for e in &self.entries {
                        let y = e.apply0(x);
                        if label[y] == usize::MAX {
                            label[y] = order.len();
                            order.push(y);
                        }
                    }
                }
                while next_unlabeled < d && label[next_unlabeled] != usize::MAX {
                    next_unlabeled += 1;
                }
                if next_unlabeled == d {
                    break;
                }
                seed = next_unlabeled;
            }
            let c = Permutation::from_images(&label.iter().map(|&l| l + 1).collect::<Vec<_>>())
                .unwrap();
            let conj: Vec<Permutation> = self
                .entries
                .iter()
                .map(|e| e.conjugate_by(&c).unwrap())
                .collect();
            let better = match &best {
                None => true,
                Some((b, _)) => Self::compare_entries(&conj, b) == Ordering::Less,
            };
            if better {
                best = Some((conj, c));
            }
        }
        let (entries, conjugator) = best.expect("degree is positive");
        NormalForm {
            tuple: HurwitzTuple {
                degree: d,
                entries,
                infinity_index: self.infinity_index,
            },
            conjugator,
            exact: false,
        }
    }

    /// A permutation `c` with `self^c == other` entrywise, if one exists.
    /// Backtracking: once `c` is fixed on one point it is forced along the orbit.
    pub fn find_conjugator(&self, other: &HurwitzTuple) -> Result<Option<Permutation>, TupleError> {
        if self.degree != other.degree {
            return Err(PermError::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            }
            .into());
        }
        if self.entries.len() != other.entries.len() {
            return Ok(None);
        }
        if self.cycle_types() != other.cycle_types() {
            return Ok(None);
        }
        let mut map = vec![usize::MAX; self.degree];
        let mut used = vec![false; self.degree];
        if self.extend_conjugator(other, &mut map, &mut used) {
            let images: Vec<usize> = map.iter().map(|&x| x + 1).collect();
            Ok(Some(Permutation::from_images(&images)?))
        } else {
            Ok(None)
        }
    }

    fn extend_conjugator(&self, other: &HurwitzTuple, map: &mut [usize], used: &mut [bool]) -> bool {
        let Some(start) = map.iter().position(|&x| x == usize::MAX) else {
            return true;
        };
        for target in 0..self.degree {
            if used[target] {
                continue;
            }
            let mut assigned = Vec::new();
            if self.propagate(other, start, target, map, used, &mut assigned)
                && self.extend_conjugator(other, map, used)
            {
                return true;
            }
            for x in assigned {
                used[map[x]] = false;
                map[x] = usize::MAX;
            }
        }
        false
    }

    fn propagate(
        &self,
        other: &HurwitzTuple,
        start: usize,
        target: usize,
        map: &mut [usize],
        used: &mut [bool],
        assigned: &mut Vec<usize>,
    ) -> bool {
        map[start] = target;
        used[target] = true;
        assigned.push(start);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for (a, b) in self.entries.iter().zip(&other.entries) {
                let y = a.apply0(x);
                let want = b.apply0(map[x]);
                if map[y] == usize::MAX {
                    if used[want] {
                        return false;
                    }
                    map[y] = want;
                    used[want] = true;
                    assigned.push(y);
                    stack.push(y);
                } else if map[y] != want {
                    return false;
                }
            }
        }
        true
    }

    /// Equivalence up to simultaneous conjugation (the ordered tuple; the
    /// ∞ marker is ignored).
    pub fn equivalent(&self, other: &HurwitzTuple) -> Result<bool, TupleError> {
        if self.degree != other.degree {
            return Err(PermError::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            }
            .into());
        }
        if self.degree <= EXACT_NORMALIZATION_MAX_DEGREE {
            Ok(self.normalize().tuple.entries == other.normalize().tuple.entries)
        } else {
            Ok(self.find_conjugator(other)?.is_some())
        }
    }
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TupleFileError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violations: {}", .0.join("; "))]
    Schema(Vec<String>),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTupleFile {
    degree: usize,
    entries: Vec<Vec<Vec<usize>>>,
    #[serde(default)]
    infinity_index: Option<usize>,
    #[serde(default)]
    meta: Map<String, Value>,
}

/// A tuple file: `{"degree": d, "entries": [...], "infinity_index": k|null, "meta": {...}}`.
///
/// Entries are lists of disjoint cycles of 1-based points; `infinity_index`
/// is 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleDocument {
    pub tuple: HurwitzTuple,
    pub meta: Map<String, Value>,
}

impl TupleDocument {
    pub fn new(tuple: HurwitzTuple) -> Self {
        TupleDocument {
            tuple,
            meta: Map::new(),
        }
    }

    pub fn with_meta(tuple: HurwitzTuple, meta: Map<String, Value>) -> Self {
        TupleDocument { tuple, meta }
    }

    pub fn parse(text: &str) -> Result<Self, TupleFileError> {
        let raw: RawTupleFile = serde_json::from_str(text).map_err(|e| TupleFileError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let mut violations = Vec::new();
        let degree = raw.degree;
        if degree == 0 || degree > MAX_DEGREE {
            violations.push(format!("degree {degree} is outside 1..={MAX_DEGREE}"));
        }
        if raw.entries.is_empty() {
            violations.push("entries must not be empty".to_string());
        }
        for (i, entry) in raw.entries.iter().enumerate() {
            let mut seen = vec![false; degree.max(1)];
            for (j, cycle) in entry.iter().enumerate() {
                if cycle.is_empty() {
                    violations.push(format!("entry {}: cycle {} is empty", i + 1, j + 1));
                }
                for &p in cycle {
                    if p == 0 || p > degree {
                        violations.push(format!("entry {}: point {p} is outside 1..={degree}", i + 1));
                    } else if seen[p - 1] {
                        violations.push(format!("entry {}: point {p} appears more than once", i + 1));
                    } else {
                        seen[p - 1] = true;
                    }
                }
            }
        }
        if let Some(k) = raw.infinity_index {
            if k == 0 || k > raw.entries.len() {
                violations.push(format!(
                    "infinity_index {k} is outside 1..={}",
                    raw.entries.len()
                ));
            }
        }
        if !violations.is_empty() {
            return Err(TupleFileError::Schema(violations));
        }
        let entries = raw
            .entries
            .iter()
            .map(|cycles| Permutation::from_cycles(degree, cycles))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| TupleFileError::Schema(vec![e.to_string()]))?;
        let mut tuple =
            HurwitzTuple::new(degree, entries).map_err(|e| TupleFileError::Schema(vec![e.to_string()]))?;
        if let Some(k) = raw.infinity_index {
            tuple = tuple.with_infinity(k - 1).expect("checked above");
        }
        Ok(TupleDocument { tuple, meta: raw.meta })
    }

    /// Single-line canonical JSON followed by a newline.
    pub fn emit(&self) -> String {
        let raw = RawTupleFile {
            degree: self.tuple.degree,
            entries: self.tuple.entries.iter().map(Permutation::cycles).collect(),
            infinity_index: self.tuple.infinity_index.map(|k| k + 1),
            meta: self.meta.clone(),
        };
        let mut s = serde_json::to_string(&raw).expect("tuple documents always serialize");
        s.push('\n');
        s
    }
}
