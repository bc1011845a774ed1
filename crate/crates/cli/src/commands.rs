use std::fmt::Write as _;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use hurwitz_core::certificate::{Certificate, Verdict};
use hurwitz_core::degeneration::{refine_all_but, refine_to_simple, Provenance};
use hurwitz_core::group::Lemma1Evidence;
use hurwitz_core::odd_covers::{
    check_feasibility, dim_f_degree, dim_f_divisor, dim_h, enumerate_cover_shapes, hurwitz_branch_bound,
    search_simple_odd_tuple, BranchBound, CoverShape, FeasibilityEvidence, SearchConfig, SearchError, SearchEvidence,
    SearchOutcome, SearchStats, ShapeSummary,
};
use hurwitz_core::tuple::{HurwitzTuple, TupleDocument, ValidationEvidence};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::Command;
use crate::experiments::{self, DecompSummary, StressRow};
use crate::report::{columns, key_values, yes_no, CliError, Report, Status, Table};

pub const THREADS_ENV: &str = "HURWITZ_FORGE_THREADS";

/// Section of the README describing degrees with no two- or three-pole shape.
pub const FEASIBILITY_GAP_NOTE: &str = "README.md#feasibility-gap";

pub fn run_command(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Validate { file } => validate(file),
        Command::Genus { file } => genus(file),
        Command::Group { file } => group(file),
        Command::Refine { file, keep } => refine(file, *keep),
        Command::Search {
            genus,
            poles,
            seed,
            budget,
        } => search(*genus, poles, *seed, *budget, worker_count()?),
        Command::Shapes {
            genus,
            degree,
            include_k1,
        } => Ok(shapes(*genus, *degree, *include_k1)),
        Command::Dims { genus, degree } => Ok(dims(*genus, *degree)),
        Command::Lemma1Stress {
            degree_range,
            trials,
            seed,
        } => Ok(lemma1_stress(degree_range.clone(), *trials, *seed)),
        Command::DecompTest { trials, seed } => decomp_test(*trials, *seed),
    }
}

pub fn read_tuple(path: &Path) -> Result<TupleDocument, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    TupleDocument::parse(&text).map_err(|source| CliError::TupleFile {
        path: path.to_path_buf(),
        source,
    })
}

/// Worker count from the environment, default 1.
pub fn worker_count() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

// ---------------------------------------------------------------------------
// validate / genus / group
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct ValidateRecord {
    pub command: &'static str,
    pub file: PathBuf,
    pub verdict: Verdict,
    pub evidence: ValidationEvidence,
}

impl Table for ValidateRecord {
    fn table(&self) -> String {
        let e = &self.evidence;
        let types: Vec<String> = e.cycle_types.iter().map(|c| c.to_string()).collect();
        let identity = if e.identity_entries.is_empty() {
            "none".to_string()
        } else {
            format!("{:?}", e.identity_entries)
        };
        key_values(&[
            ("verdict", self.verdict.to_string()),
            ("degree", e.degree.to_string()),
            ("entries", e.entries.to_string()),
            ("product is identity", yes_no(e.product_is_identity)),
            ("transitive", yes_no(e.transitive)),
            ("identity entries", identity),
            (
                "genus",
                match (&e.genus, &e.genus_error) {
                    (Some(g), _) => g.to_string(),
                    (None, Some(err)) => err.clone(),
                    (None, None) => "-".to_string(),
                },
            ),
            (
                "group order",
                e.group_order.as_ref().map_or("-".to_string(), |o| o.to_string()),
            ),
            ("cycle types", types.join(" ")),
        ])
    }
}

pub fn validate(file: &Path) -> Result<Report, CliError> {
    let doc = read_tuple(file)?;
    let cert = doc.tuple.validate();
    let record = ValidateRecord {
        command: "validate",
        file: file.to_path_buf(),
        verdict: cert.verdict,
        evidence: cert.evidence,
    };
    Ok(Report::from_record(&record, Status::from_bool(record.verdict == Verdict::Valid)))
}

#[derive(Debug, Serialize)]
pub struct GenusRecord {
    pub command: &'static str,
    pub file: PathBuf,
    pub degree: usize,
    pub ramification_total: i64,
    pub genus: Option<u64>,
    pub error: Option<String>,
}

impl Table for GenusRecord {
    fn table(&self) -> String {
        match (&self.genus, &self.error) {
            (Some(g), _) => format!("{g}\n"),
            (None, Some(e)) => format!("no genus: {e}\n"),
            (None, None) => "no genus\n".to_string(),
        }
    }
}

pub fn genus(file: &Path) -> Result<Report, CliError> {
    let doc = read_tuple(file)?;
    let t = &doc.tuple;
    let g = t.genus();
    let record = GenusRecord {
        command: "genus",
        file: file.to_path_buf(),
        degree: t.degree(),
        ramification_total: t.ramification_total(),
        genus: g.as_ref().ok().copied(),
        error: g.err().map(|e| e.to_string()),
    };
    Ok(Report::from_record(&record, Status::from_bool(record.genus.is_some())))
}

#[derive(Debug, Serialize)]
pub struct GroupRecord {
    pub command: &'static str,
    pub file: PathBuf,
    pub degree: usize,
    pub order: String,
    pub base: Vec<usize>,
    pub basic_orbit_lengths: Vec<usize>,
    pub transitive: bool,
    pub primitive: Option<bool>,
    pub block_system: Option<Vec<Vec<usize>>>,
    pub generators_even: bool,
    pub alternating: bool,
    pub symmetric: bool,
    pub recognition: Certificate<Lemma1Evidence>,
}

impl Table for GroupRecord {
    fn table(&self) -> String {
        let mut out = key_values(&[
            ("degree", self.degree.to_string()),
            ("order", self.order.clone()),
            ("base", format!("{:?}", self.base)),
            ("basic orbit lengths", format!("{:?}", self.basic_orbit_lengths)),
            ("transitive", yes_no(self.transitive)),
            ("primitive", self.primitive.map_or("-".to_string(), yes_no)),
            ("even generators", yes_no(self.generators_even)),
            ("alternating", yes_no(self.alternating)),
            ("symmetric", yes_no(self.symmetric)),
            ("A_d certificate", self.recognition.verdict.to_string()),
        ]);
        if let Some(blocks) = &self.block_system {
            let _ = writeln!(out, "blocks  {blocks:?}");
        }
        if let Some(c) = &self.recognition.evidence.three_cycle {
            let _ = writeln!(out, "3-cycle  {c}");
        }
        for f in &self.recognition.evidence.failed {
            let _ = writeln!(out, "failed  {f}");
        }
        out
    }
}

pub fn group(file: &Path) -> Result<Report, CliError> {
    let doc = read_tuple(file)?;
    let g = doc.tuple.monodromy_group();
    let internal = |e: hurwitz_core::group::GroupError| CliError::Rejected(e.to_string());
    let transitive = g.is_transitive();
    let block_system = if transitive {
        g.nontrivial_block_system().map_err(internal)?
    } else {
        None
    };
    let record = GroupRecord {
        command: "group",
        file: file.to_path_buf(),
        degree: g.degree(),
        order: g.order().to_string(),
        base: g.base(),
        basic_orbit_lengths: g.basic_orbit_lengths(),
        transitive,
        primitive: transitive.then_some(block_system.is_none()),
        block_system,
        generators_even: g.generators_even(),
        alternating: g.is_alternating(),
        symmetric: g.is_symmetric(),
        recognition: g.lemma1_certify().map_err(internal)?,
    };
    Ok(Report::from_record(&record, Status::Positive))
}

// ---------------------------------------------------------------------------
// refine
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct RefineMeta<'a> {
    command: &'static str,
    source: &'a Path,
    keep: Option<usize>,
    genus: u64,
    monodromy_containment: bool,
    provenance: &'a [Provenance],
}

pub fn refine(file: &Path, keep: Option<usize>) -> Result<Report, CliError> {
    let doc = read_tuple(file)?;
    let result = match keep {
        Some(0) => return Err(CliError::Usage("--keep is 1-based".to_string())),
        Some(k) => refine_all_but(&doc.tuple, k - 1),
        None => refine_to_simple(&doc.tuple),
    }
    .map_err(|e| CliError::Rejected(e.to_string()))?;
    let genus = result
        .tuple
        .genus()
        .map_err(|e| CliError::Rejected(e.to_string()))?;
    let meta = RefineMeta {
        command: "refine",
        source: file,
        keep,
        genus,
        // checked inside the refinement, which fails otherwise
        monodromy_containment: true,
        provenance: &result.provenance,
    };
    let Value::Object(meta) = serde_json::to_value(&meta).expect("meta serializes") else {
        unreachable!("structs serialize to objects")
    };
    let out = TupleDocument::with_meta(result.tuple.clone(), meta);

    let rows: Vec<Vec<String>> = result
        .tuple
        .entries()
        .iter()
        .zip(&result.provenance)
        .enumerate()
        .map(|(i, (e, p))| {
            let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
            vec![
                (i + 1).to_string(),
                e.to_string(),
                p.original_entry.to_string(),
                opt(p.cycle),
                opt(p.factor),
            ]
        })
        .collect();
    let mut table = key_values(&[
        ("source entries", doc.tuple.len().to_string()),
        ("refined entries", result.tuple.len().to_string()),
        ("genus", genus.to_string()),
        ("monodromy contained", "yes".to_string()),
    ]);
    table.push('\n');
    table.push_str(&columns(&["#", "entry", "from", "cycle", "factor"], &rows));
    Ok(Report {
        status: Status::Positive,
        json: out.emit(),
        table,
    })
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

/// Runs one search per worker on ChaCha streams `0..workers` and keeps the
/// success from the lowest stream, so the result does not depend on timing.
pub fn parallel_search(
    shape: &CoverShape,
    seed: u64,
    budget: u64,
    workers: usize,
) -> Result<SearchOutcome, SearchError> {
    if workers <= 1 {
        return search_simple_odd_tuple(shape, SearchConfig::new(seed, budget));
    }
    let results: Vec<Result<SearchOutcome, SearchError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| {
                scope.spawn(move || search_simple_odd_tuple(shape, SearchConfig::new(seed, budget).with_stream(w)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    });
    let mut total = SearchStats::default();
    for r in results {
        match r? {
            found @ SearchOutcome::Found { .. } => return Ok(found),
            SearchOutcome::Exhausted { stats } => {
                total.trials += stats.trials;
                total.forced_trials += stats.forced_trials;
                total.skeleton_trials += stats.skeleton_trials;
                total.forced_not_three_cycle += stats.forced_not_three_cycle;
                total.skeleton_dead_ends += stats.skeleton_dead_ends;
                total.intransitive += stats.intransitive;
                total.not_alternating += stats.not_alternating;
            }
        }
    }
    Ok(SearchOutcome::Exhausted { stats: total })
}

#[derive(Debug, Serialize)]
pub struct SearchFailureRecord {
    pub command: &'static str,
    pub seed: u64,
    pub budget: u64,
    pub shape: ShapeSummary,
    pub verdict: Verdict,
    pub reason: String,
    pub stats: Option<SearchStats>,
    pub feasibility: Option<FeasibilityEvidence>,
}

impl Table for SearchFailureRecord {
    fn table(&self) -> String {
        let mut out = key_values(&[
            ("seed", self.seed.to_string()),
            ("budget", self.budget.to_string()),
            ("degree", self.shape.degree.to_string()),
            ("pole orders", format!("{:?}", self.shape.pole_orders)),
            ("verdict", self.verdict.to_string()),
            ("reason", self.reason.clone()),
        ]);
        if let Some(s) = &self.stats {
            let _ = writeln!(out, "trials  {}", s.trials);
        }
        if let Some(f) = &self.feasibility {
            for line in &f.failed {
                let _ = writeln!(out, "failed  {line}");
            }
        }
        out
    }
}

fn search_table(tuple: &HurwitzTuple, cert: &Certificate<SearchEvidence>) -> String {
    let e = &cert.evidence;
    let mut out = key_values(&[
        ("verdict", cert.verdict.to_string()),
        ("seed", e.seed.to_string()),
        ("budget", e.budget.to_string()),
        ("stream", e.stream.to_string()),
        ("genus", e.genus.to_string()),
        ("degree", e.shape.degree.to_string()),
        ("pole orders", format!("{:?}", e.shape.pole_orders)),
        ("3-cycles", e.three_cycle_count.to_string()),
        ("group order", e.group_order.to_string()),
        ("phase", format!("{:?}", e.phase)),
        ("trial", e.trial.to_string()),
        (
            "decomposability",
            e.decomposability.map_or("-".to_string(), |v| v.to_string()),
        ),
        ("primitive", yes_no(e.primitive)),
    ]);
    let _ = writeln!(out, "\ntuple (infinity last):");
    for (i, entry) in tuple.entries().iter().enumerate() {
        let _ = writeln!(out, "  {:>2}  {entry}", i + 1);
    }
    out
}

pub fn search(genus: u32, poles: &[u32], seed: u64, budget: u64, workers: usize) -> Result<Report, CliError> {
    let shape = CoverShape::new(genus, poles.to_vec()).map_err(|e| CliError::Usage(e.to_string()))?;
    let failure = |verdict, reason: String, stats, feasibility| {
        let record = SearchFailureRecord {
            command: "search",
            seed,
            budget,
            shape: shape.summary(),
            verdict,
            reason,
            stats,
            feasibility,
        };
        Ok(Report::from_record(&record, Status::Negative))
    };
    match parallel_search(&shape, seed, budget, workers) {
        Ok(SearchOutcome::Found { tuple, certificate }) => {
            let mut meta = Map::new();
            meta.insert("command".into(), json!("search"));
            meta.insert("seed".into(), json!(seed));
            meta.insert("budget".into(), json!(budget));
            meta.insert(
                "certificate".into(),
                serde_json::to_value(&certificate).expect("certificates serialize"),
            );
            let table = search_table(&tuple, &certificate);
            let doc = TupleDocument::with_meta(tuple, meta);
            Ok(Report {
                status: Status::Positive,
                json: doc.emit(),
                table,
            })
        }
        Ok(SearchOutcome::Exhausted { stats }) => failure(
            Verdict::Inconclusive,
            "trial budget exhausted".to_string(),
            Some(stats),
            None,
        ),
        Err(SearchError::Infeasible { certificate, .. }) => failure(
            Verdict::Infeasible,
            "shape fails the feasibility bounds".to_string(),
            None,
            Some(certificate.evidence),
        ),
        Err(e @ (SearchError::DegreeTooSmall(_) | SearchError::ZeroBudget)) => Err(CliError::Usage(e.to_string())),
        Err(e) => Err(CliError::Rejected(e.to_string())),
    }
}

// ---------------------------------------------------------------------------
// shapes / dims
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct ShapesRecord {
    pub command: &'static str,
    pub genus: u32,
    pub degree: u64,
    pub include_k1: bool,
    pub shapes: Vec<FeasibilityEvidence>,
    /// Single-pole shapes, listed when the main enumeration is empty.
    pub single_pole_alternatives: Vec<ShapeSummary>,
    pub note: Option<String>,
}

impl Table for ShapesRecord {
    fn table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .shapes
            .iter()
            .map(|e| {
                let dim = e.conclusions.as_ref().map_or("-".to_string(), |c| c.dim_family.to_string());
                vec![
                    e.shape.k.to_string(),
                    format!("{:?}", e.shape.multiplicities),
                    format!("{:?}", e.shape.pole_orders),
                    e.shape.deg_d.to_string(),
                    e.pole_order_gcd.to_string(),
                    dim,
                ]
            })
            .collect();
        let mut out = format!("genus {}, degree {}\n", self.genus, self.degree);
        out.push_str(&columns(&["k", "n", "pole orders", "deg D", "gcd", "dim F(X,D)"], &rows));
        if let Some(note) = &self.note {
            let _ = writeln!(out, "\nnote: {note}");
        }
        out
    }
}

pub fn shapes(genus: u32, degree: u64, include_k1: bool) -> Report {
    let found = enumerate_cover_shapes(genus, degree, include_k1);
    let shapes: Vec<FeasibilityEvidence> = found.iter().map(|s| check_feasibility(s).evidence).collect();
    let mut single_pole_alternatives = Vec::new();
    let mut note = None;
    if shapes.is_empty() {
        if !include_k1 {
            single_pole_alternatives = enumerate_cover_shapes(genus, degree, true)
                .iter()
                .map(CoverShape::summary)
                .collect();
        }
        let mut text = format!(
            "no pole shape of genus {genus} and degree {degree} satisfies the feasibility bounds. \
             Existence for every degree d >= 12g+4 is claimed for this setting but fails here under the \
             stated inequalities; see {FEASIBILITY_GAP_NOTE}."
        );
        if genus > 0 && degree < 12 * genus as u64 + 4 {
            text.push_str(&format!(" (degree is below 12g+4 = {})", 12 * genus + 4));
        }
        if !single_pole_alternatives.is_empty() {
            text.push_str(" A single prime-order pole is feasible; rerun with --include-k1.");
        }
        note = Some(text);
    }
    let record = ShapesRecord {
        command: "shapes",
        genus,
        degree,
        include_k1,
        shapes,
        single_pole_alternatives,
        note,
    };
    let ok = !record.shapes.is_empty();
    Report::from_record(&record, Status::from_bool(ok))
}

#[derive(Debug, Serialize)]
pub struct ShapeDims {
    pub shape: ShapeSummary,
    pub dim_h: Option<i64>,
    pub dim_family: i64,
    /// `dim F(X,D) + k`, to be compared with the degree-level dimension.
    pub dim_family_plus_k: i64,
    pub matches_degree_dimension: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct DimsRecord {
    pub command: &'static str,
    pub genus: u32,
    pub degree: u64,
    pub dim_f_degree: Option<i64>,
    pub dim_f_degree_error: Option<String>,
    pub branch_bound: BranchBound,
    pub shapes: Vec<ShapeDims>,
}

impl Table for DimsRecord {
    fn table(&self) -> String {
        let b = &self.branch_bound;
        let mut out = key_values(&[
            ("genus", self.genus.to_string()),
            ("degree", self.degree.to_string()),
            (
                "dim F(X,d)",
                match (&self.dim_f_degree, &self.dim_f_degree_error) {
                    (Some(v), _) => v.to_string(),
                    (None, Some(e)) => format!("undefined ({e})"),
                    (None, None) => "-".to_string(),
                },
            ),
            ("branch bound (2g+4+d)/4", b.branch_bound.to_string()),
            ("max branch points", b.max_branch_points.to_string()),
            ("scheme bound (2g-4+d)/4", b.hurwitz_scheme_bound.to_string()),
            ("d/2 - 2g + 2", b.family_dimension.to_string()),
            ("exceeds scheme bound", yes_no(b.family_exceeds_scheme_bound)),
            ("d > 10g - 12", format!("{} ({} > {})", yes_no(b.degree_above_threshold), b.degree, b.threshold)),
        ]);
        if !self.shapes.is_empty() {
            let rows: Vec<Vec<String>> = self
                .shapes
                .iter()
                .map(|s| {
                    vec![
                        format!("{:?}", s.shape.multiplicities),
                        s.dim_h.map_or("-".to_string(), |v| v.to_string()),
                        s.dim_family.to_string(),
                        s.dim_family_plus_k.to_string(),
                        s.matches_degree_dimension.map_or("-".to_string(), yes_no),
                    ]
                })
                .collect();
            out.push('\n');
            out.push_str(&columns(&["n", "dim H", "dim F(X,D)", "+k", "matches"], &rows));
        }
        out
    }
}

pub fn dims(genus: u32, degree: u64) -> Report {
    let whole = dim_f_degree(genus, degree);
    let shapes: Vec<ShapeDims> = enumerate_cover_shapes(genus, degree, false)
        .iter()
        .map(|s| {
            let dim_family = dim_f_divisor(s).expect("enumerated shapes are feasible");
            let plus_k = dim_family + s.k() as i64;
            ShapeDims {
                shape: s.summary(),
                dim_h: dim_h(s).ok(),
                dim_family,
                dim_family_plus_k: plus_k,
                matches_degree_dimension: whole.as_ref().ok().map(|&w| w == plus_k),
            }
        })
        .collect();
    let ok = whole.is_ok() && shapes.iter().all(|s| s.matches_degree_dimension != Some(false));
    let record = DimsRecord {
        command: "dims",
        genus,
        degree,
        dim_f_degree: whole.as_ref().ok().copied(),
        dim_f_degree_error: whole.err().map(|e| e.to_string()),
        branch_bound: hurwitz_branch_bound(genus, degree),
        shapes,
    };
    Report::from_record(&record, Status::from_bool(ok))
}

// ---------------------------------------------------------------------------
// experiments
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct StressRecord {
    pub command: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub degrees: Vec<StressRow>,
    pub exceptions: usize,
    pub quota_met: bool,
}

impl Table for StressRecord {
    fn table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .degrees
            .iter()
            .map(|r| {
                vec![
                    r.degree.to_string(),
                    r.groups.to_string(),
                    r.certified.to_string(),
                    r.exceptions.len().to_string(),
                    r.attempts.to_string(),
                    r.intransitive.to_string(),
                    r.imprimitive.to_string(),
                    r.expected_order.clone(),
                ]
            })
            .collect();
        let mut out = format!("seed {}, {} groups per degree\n", self.seed, self.trials);
        out.push_str(&columns(
            &["d", "groups", "A_d", "exceptions", "draws", "intransitive", "imprimitive", "d!/2"],
            &rows,
        ));
        for r in &self.degrees {
            for e in &r.exceptions {
                let _ = writeln!(out, "exception at d={}: {} ({})", r.degree, e.detail, e.generators.join(" "));
            }
        }
        out
    }
}

pub fn lemma1_stress(range: RangeInclusive<usize>, trials: usize, seed: u64) -> Report {
    let degrees = experiments::stress(range, trials, seed);
    let exceptions = degrees.iter().map(|r| r.exceptions.len()).sum();
    let quota_met = degrees.iter().all(|r| r.groups == trials);
    let record = StressRecord {
        command: "lemma1-stress",
        seed,
        trials,
        degrees,
        exceptions,
        quota_met,
    };
    Report::from_record(&record, Status::from_bool(exceptions == 0 && quota_met))
}

#[derive(Debug, Serialize)]
pub struct DecompRecord {
    pub command: &'static str,
    pub seed: u64,
    #[serde(flatten)]
    pub summary: DecompSummary,
}

impl Table for DecompRecord {
    fn table(&self) -> String {
        let s = &self.summary;
        let mut rows = Vec::new();
        for &(m, n) in &experiments::WREATH_DEGREES {
            let of: Vec<_> = s.cases.iter().filter(|c| (c.outer_degree, c.inner_degree) == (m, n)).collect();
            rows.push(vec![
                format!("{m}x{n}"),
                of.len().to_string(),
                of.iter().filter(|c| c.gcd > 1).count().to_string(),
                of.iter().filter(|c| !c.primitive).count().to_string(),
            ]);
        }
        let mut out = key_values(&[
            ("seed", self.seed.to_string()),
            ("requested", s.requested.to_string()),
            ("generated", s.generated.to_string()),
            ("failures", s.failures.to_string()),
        ]);
        out.push('\n');
        out.push_str(&columns(&["m x n", "tuples", "gcd > 1", "imprimitive"], &rows));
        let wrows: Vec<Vec<String>> = s
            .witnesses
            .iter()
            .map(|w| {
                vec![
                    w.shape.clone(),
                    format!("{:?}", w.pole_orders),
                    yes_no(w.coprime),
                    yes_no(w.found),
                    w.primitive.map_or("-".to_string(), yes_no),
                ]
            })
            .collect();
        out.push('\n');
        out.push_str(&columns(&["witness shape", "pole orders", "coprime", "found", "primitive"], &wrows));
        out
    }
}

pub fn decomp_test(trials: usize, seed: u64) -> Result<Report, CliError> {
    let summary = experiments::decomp_test(trials, seed).map_err(|e| CliError::Rejected(e.to_string()))?;
    let ok = summary.passes();
    let record = DecompRecord {
        command: "decomp-test",
        seed,
        summary,
    };
    Ok(Report::from_record(&record, Status::from_bool(ok)))
}
