use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{Certificate, Verdict};
use crate::util::{gcd_all, is_prime, ratio_string};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("a shape needs 1 to 3 pole multiplicities, got {0}")]
    PartCount(usize),
    #[error("pole multiplicities must be positive")]
    ZeroMultiplicity,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimensionError {
    #[error("hypothesis fails: {0}")]
    Hypothesis(String),
}

/// Pole data `D = n_1 P_1 + … + n_k P_k` on a genus-`g` curve. The associated
/// odd covering has poles of orders `d_i = 2 n_i - 1` and degree `Σ d_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawShape", into = "RawShape")]
pub struct CoverShape {
    genus: u32,
    multiplicities: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawShape {
    genus: u32,
    multiplicities: Vec<u32>,
}

impl TryFrom<RawShape> for CoverShape {
    type Error = ShapeError;
    fn try_from(raw: RawShape) -> Result<Self, ShapeError> {
        CoverShape::new(raw.genus, raw.multiplicities)
    }
}

impl From<CoverShape> for RawShape {
    fn from(s: CoverShape) -> Self {
        RawShape {
            genus: s.genus,
            multiplicities: s.multiplicities,
        }
    }
}

impl CoverShape {
    /// Multiplicities are sorted descending.
    pub fn new(genus: u32, mut multiplicities: Vec<u32>) -> Result<Self, ShapeError> {
        if multiplicities.is_empty() || multiplicities.len() > 3 {
            return Err(ShapeError::PartCount(multiplicities.len()));
        }
        if multiplicities.contains(&0) {
            return Err(ShapeError::ZeroMultiplicity);
        }
        multiplicities.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CoverShape {
            genus,
            multiplicities,
        })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn k(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn pole_orders(&self) -> Vec<u64> {
        self.multiplicities.iter().map(|&n| 2 * n as u64 - 1).collect()
    }

    pub fn deg_d(&self) -> u64 {
        self.multiplicities.iter().map(|&n| n as u64).sum()
    }

    pub fn degree(&self) -> u64 {
        2 * self.deg_d() - self.k() as u64
    }

    pub fn summary(&self) -> ShapeSummary {
        ShapeSummary {
            genus: self.genus,
            k: self.k(),
            multiplicities: self.multiplicities.clone(),
            pole_orders: self.pole_orders(),
            degree: self.degree(),
            deg_d: self.deg_d(),
        }
    }
}

impl std::fmt::Display for CoverShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n: Vec<String> = self.multiplicities.iter().map(u32::to_string).collect();
        write!(f, "g={} n=({})", self.genus, n.join(","))
    }
}

/// Flattened view of a shape for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeSummary {
    pub genus: u32,
    pub k: usize,
    pub multiplicities: Vec<u32>,
    pub pole_orders: Vec<u64>,
    pub degree: u64,
    pub deg_d: u64,
}

/// `d_1` prime for one pole, otherwise the pole orders have gcd 1.
pub fn is_indecomposable_triple(s: &CoverShape) -> bool {
    let orders = s.pole_orders();
    if orders.len() == 1 {
        is_prime(orders[0])
    } else {
        gcd_all(&orders) == 1
    }
}

/// A strict inequality `lhs > rhs` with both sides evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

impl Inequality {
    fn greater(name: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Inequality {
            name: name.into(),
            lhs,
            rhs,
            holds: lhs > rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibleConclusions {
    pub degree: u64,
    /// Largest possible pole orders of a function in the family.
    pub max_pole_orders: Vec<u64>,
    pub dim_family: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityEvidence {
    pub shape: ShapeSummary,
    pub genus_positive: bool,
    /// `d_i > 3g + k` for every pole.
    pub pole_order_bounds: Vec<Inequality>,
    /// `deg D > 6g + 2k - 3`.
    pub divisor_degree_bound: Inequality,
    pub pole_order_gcd: u64,
    pub indecomposable_triple: bool,
    /// `d > 12g + 3k - 6`, implied by the divisor degree bound.
    pub derived_degree_bound: Inequality,
    pub failed: Vec<String>,
    pub conclusions: Option<FeasibleConclusions>,
}

/// Checks the hypotheses under which a shape yields a family of
/// indecomposable odd coverings: `g > 0`, `d_i > 3g + k`,
/// `deg D > 6g + 2k - 3`, and an indecomposable triple.
pub fn check_feasibility(s: &CoverShape) -> Certificate<FeasibilityEvidence> {
    let g = s.genus() as i64;
    let k = s.k() as i64;
    let genus_positive = g > 0;
    let pole_order_bounds: Vec<Inequality> = s
        .pole_orders()
        .iter()
        .enumerate()
        .map(|(i, &d)| Inequality::greater(format!("d_{} > 3g+k", i + 1), d as i64, 3 * g + k))
        .collect();
    let divisor_degree_bound = Inequality::greater("deg D > 6g+2k-3", s.deg_d() as i64, 6 * g + 2 * k - 3);
    let derived_degree_bound = Inequality::greater("d > 12g+3k-6", s.degree() as i64, 12 * g + 3 * k - 6);
    let pole_order_gcd = gcd_all(&s.pole_orders());
    let indecomposable_triple = is_indecomposable_triple(s);

    let mut failed = Vec::new();
    if !genus_positive {
        failed.push("genus must be positive".to_string());
    }
    for ineq in &pole_order_bounds {
        if !ineq.holds {
            failed.push(format!("{} ({} <= {})", ineq.name, ineq.lhs, ineq.rhs));
        }
    }
    if !divisor_degree_bound.holds {
        failed.push(format!(
            "{} ({} <= {})",
            divisor_degree_bound.name, divisor_degree_bound.lhs, divisor_degree_bound.rhs
        ));
    }
    if !indecomposable_triple {
        failed.push(if s.k() == 1 {
            format!("pole order {} is not prime", s.pole_orders()[0])
        } else {
            format!("pole orders share the factor {pole_order_gcd}")
        });
    }

    let feasible = failed.is_empty();
    let conclusions = feasible.then(|| FeasibleConclusions {
        degree: s.degree(),
        max_pole_orders: s.pole_orders(),
        dim_family: s.deg_d() as i64 - 2 * g - k + 2,
    });
    let evidence = FeasibilityEvidence {
        shape: s.summary(),
        genus_positive,
        pole_order_bounds,
        divisor_degree_bound,
        pole_order_gcd,
        indecomposable_triple,
        derived_degree_bound,
        failed,
        conclusions,
    };
    let verdict = if feasible {
        Verdict::Feasible
    } else {
        Verdict::Infeasible
    };
    Certificate::new(verdict, evidence)
}

pub fn is_feasible(s: &CoverShape) -> bool {
    check_feasibility(s).is_positive()
}

/// Descending partitions of `total` into exactly `parts` positive parts.
fn partitions(total: u32, parts: usize, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 0 {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    let hi = total.min(max);
    for first in (1..=hi).rev() {
        let rest = total - first;
        // the remaining parts are each between 1 and `first`
        if rest < (parts as u32 - 1) || rest > first * (parts as u32 - 1) {
            continue;
        }
        prefix.push(first);
        partitions(rest, parts - 1, first, prefix, out);
        prefix.pop();
    }
}

/// Every feasible shape of genus `g` and degree `d` with two or three poles
/// (one pole too when `include_single_pole`), in descending lexicographic
/// order of the multiplicities.
pub fn enumerate_cover_shapes(g: u32, d: u64, include_single_pole: bool) -> Vec<CoverShape> {
    let mut shapes = Vec::new();
    let ks: &[usize] = if include_single_pole { &[1, 2, 3] } else { &[2, 3] };
    for &k in ks {
        if (d + k as u64) % 2 != 0 {
            continue;
        }
        let Ok(deg_d) = u32::try_from((d + k as u64) / 2) else {
            continue;
        };
        let mut parts = Vec::new();
        partitions(deg_d, k, deg_d, &mut Vec::new(), &mut parts);
        for n in parts {
            let s = CoverShape::new(g, n).expect("partition parts are positive");
            if is_feasible(&s) {
                shapes.push(s);
            }
        }
    }
    shapes.sort_by(|a, b| b.multiplicities.cmp(&a.multiplicities));
    shapes
}

/// `deg D - 2g - k + 1`, defined when `2 n_i > 3g + k - 1` for all `i` and
/// `deg D > 6g + 2k - 4`.
pub fn dim_h(s: &CoverShape) -> Result<i64, DimensionError> {
    let g = s.genus() as i64;
    let k = s.k() as i64;
    for (i, &n) in s.multiplicities().iter().enumerate() {
        if 2 * n as i64 <= 3 * g + k - 1 {
            return Err(DimensionError::Hypothesis(format!(
                "2n_{} = {} is not > 3g+k-1 = {}",
                i + 1,
                2 * n,
                3 * g + k - 1
            )));
        }
    }
    let deg_d = s.deg_d() as i64;
    if deg_d <= 6 * g + 2 * k - 4 {
        return Err(DimensionError::Hypothesis(format!(
            "deg D = {deg_d} is not > 6g+2k-4 = {}",
            6 * g + 2 * k - 4
        )));
    }
    Ok(deg_d - 2 * g - k + 1)
}

/// `deg D - 2g - k + 2` for a feasible shape.
pub fn dim_f_divisor(s: &CoverShape) -> Result<i64, DimensionError> {
    let cert = check_feasibility(s);
    match cert.evidence.conclusions {
        Some(c) => Ok(c.dim_family),
        None => Err(DimensionError::Hypothesis(cert.evidence.failed.join("; "))),
    }
}

/// `⌊(d+3)/2⌋ - 2g + 2`, defined for `d ≥ 12g + 4`.
pub fn dim_f_degree(g: u32, d: u64) -> Result<i64, DimensionError> {
    let g = g as i64;
    let d = d as i64;
    if d < 12 * g + 4 {
        return Err(DimensionError::Hypothesis(format!(
            "d = {d} is below 12g+4 = {}",
            12 * g + 4
        )));
    }
    Ok((d + 3).div_euclid(2) - 2 * g + 2)
}

/// Exact quantities from the branch point count argument for degree `d`
/// odd coverings of a genus-`g` curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchBound {
    pub genus: u32,
    pub degree: u64,
    /// `(2g + 4 + d)/4`.
    #[serde(with = "ratio_string")]
    pub branch_bound: Ratio<i64>,
    /// Largest integer `b` allowed by `branch_bound`.
    pub max_branch_points: i64,
    /// `(2g - 4 + d)/4`.
    #[serde(with = "ratio_string")]
    pub hurwitz_scheme_bound: Ratio<i64>,
    /// `d/2 - 2g + 2`.
    #[serde(with = "ratio_string")]
    pub family_dimension: Ratio<i64>,
    pub family_exceeds_scheme_bound: bool,
    /// `10g - 12`.
    pub threshold: i64,
    pub degree_above_threshold: bool,
}

pub fn hurwitz_branch_bound(g: u32, d: u64) -> BranchBound {
    let gi = g as i64;
    let di = d as i64;
    let branch_bound = Ratio::new(2 * gi + 4 + di, 4);
    let hurwitz_scheme_bound = Ratio::new(2 * gi - 4 + di, 4);
    let family_dimension = Ratio::new(di, 2) - Ratio::from_integer(2 * gi - 2);
    let threshold = 10 * gi - 12;
    BranchBound {
        genus: g,
        degree: d,
        max_branch_points: branch_bound.floor().to_integer(),
        branch_bound,
        hurwitz_scheme_bound,
        family_exceeds_scheme_bound: family_dimension > hurwitz_scheme_bound,
        family_dimension,
        threshold,
        degree_above_threshold: di > threshold,
    }
}

/// `(d + k + 2g - 2)/2`: the number of 3-cycles in a simple odd tuple whose
/// fiber over ∞ has cycle type `(d_1, …, d_k)`.
pub fn three_cycle_branch_count(s: &CoverShape) -> u64 {
    (s.degree() + s.k() as u64 + 2 * s.genus() as u64 - 2) / 2
}
