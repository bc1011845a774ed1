//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hurwitz_core::certificate::Verdict;
use hurwitz_core::degeneration::{monodromy_containment, refine_to_simple};
use hurwitz_core::odd_covers::{
    dim_f_degree, dim_f_divisor, enumerate_cover_shapes, hurwitz_branch_bound, CoverShape,
};
use hurwitz_core::perm::Permutation;
use hurwitz_core::tuple::{HurwitzTuple, TupleDocument};
use hurwitz_core::util::{alternating_order, gcd_all};
use hurwitz_forge::args::Command;
use hurwitz_forge::commands::{self, FEASIBILITY_GAP_NOTE};
use hurwitz_forge::experiments;
use hurwitz_forge::report::Status;
use num_bigint::BigUint;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Criterion {
    number: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { number: 1, name: "dimension formulas", limit: Duration::from_secs(1), run: formula_suite },
        Criterion { number: 2, name: "Riemann-Hurwitz invariance", limit: Duration::from_secs(10), run: riemann_hurwitz },
        Criterion { number: 3, name: "A_d recognition stress", limit: Duration::from_secs(120), run: recognition_stress },
        Criterion { number: 4, name: "composite covers and coprime witnesses", limit: Duration::from_secs(120), run: composites },
        Criterion { number: 5, name: "degeneration fixtures", limit: Duration::from_secs(10), run: degeneration },
        Criterion { number: 6, name: "simple odd witnesses with monodromy A_d", limit: Duration::from_secs(240), run: search_witnesses },
        Criterion { number: 7, name: "branch point bound", limit: Duration::from_secs(1), run: branch_bound },
        Criterion { number: 8, name: "feasibility honesty", limit: Duration::from_secs(1), run: feasibility },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.limit => Err(format!("{detail}; took {elapsed:.2?}, limit {:?}", c.limit)),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {} ({elapsed:.2?}): {detail}", c.number, c.name),
            Err(why) => {
                failures += 1;
                println!("criterion {} FAIL  {} ({elapsed:.2?}): {why}", c.number, c.name);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn formula_suite() -> Outcome {
    ensure!(dim_f_degree(1, 16) == Ok(9), "dim F(X,16) for g=1 is {:?}", dim_f_degree(1, 16));
    let mut checked = 0;
    for g in 1..=3u32 {
        for d in (12 * g as u64 + 4)..=(12 * g as u64 + 40) {
            // floor((d+3)/2) - 2g + 2, evaluated independently
            let expected = ((d + 3) / 2) as i64 - 2 * g as i64 + 2;
            for s in enumerate_cover_shapes(g, d, false) {
                let lhs = dim_f_divisor(&s).map_err(|e| e.to_string())? + s.k() as i64;
                ensure!(lhs == expected, "{s}: dim F(X,D) + k = {lhs}, expected {expected}");
                checked += 1;
            }
        }
    }
    ensure!(checked > 0, "no shapes enumerated");
    Ok(format!("{checked} shapes checked"))
}

/// Genus from raw image tables: cycles counted without the library.
fn oracle_genus(t: &HurwitzTuple) -> Option<i64> {
    let d = t.degree();
    let mut total = 0i64;
    for e in t.entries() {
        let img = e.images();
        let mut seen = vec![false; d];
        let mut cycles = 0;
        for s in 0..d {
            if !seen[s] {
                cycles += 1;
                let mut x = s;
                while !seen[x] {
                    seen[x] = true;
                    x = img[x] - 1;
                }
            }
        }
        total += (d - cycles) as i64;
    }
    let twice = total - 2 * d as i64 + 2;
    (twice % 2 == 0 && twice >= 0).then_some(twice / 2)
}

fn random_valid_tuple(rng: &mut ChaCha8Rng) -> HurwitzTuple {
    loop {
        let d = rng.gen_range(2..=12);
        let r = rng.gen_range(2..=5);
        let mut entries: Vec<Permutation> = (0..r - 1).map(|_| Permutation::random(d, rng)).collect();
        let prod = entries
            .iter()
            .try_fold(Permutation::identity(d), |acc, p| acc.compose(p))
            .expect("equal degrees");
        entries.push(prod.inverse());
        let t = HurwitzTuple::new(d, entries).expect("equal degrees");
        if t.is_valid() {
            return t;
        }
    }
}

fn riemann_hurwitz() -> Outcome {
    let fixed = [
        (HurwitzTuple::parse(2, &["(1 2)", "(1 2)"]), 0),
        (HurwitzTuple::parse(3, &["(1 2 3)", "(1 2 3)", "(1 2 3)"]), 1),
    ];
    for (t, g) in fixed {
        let t = t.map_err(|e| e.to_string())?;
        ensure!(t.genus() == Ok(g), "witness {:?} has genus {:?}, expected {g}", t.entries(), t.genus());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let n = 1200;
    for _ in 0..n {
        let t = random_valid_tuple(&mut rng);
        let g = t.genus().map_err(|e| format!("valid tuple without genus: {e}"))?;
        ensure!(Some(g as i64) == oracle_genus(&t), "genus {g} disagrees with the oracle");
        let i = rng.gen_range(0..t.len() - 1);
        let moved = if rng.gen_bool(0.5) { t.braid_move(i) } else { t.inverse_braid_move(i) }
            .map_err(|e| e.to_string())?;
        ensure!(moved.genus() == Ok(g), "braid move changed the genus");
        ensure!(moved.is_valid(), "braid move broke validity");
        let c = Permutation::random(t.degree(), &mut rng);
        let conj = t.conjugate_by(&c).map_err(|e| e.to_string())?;
        ensure!(conj.genus() == Ok(g), "conjugation changed the genus");
    }
    Ok(format!("{n} random tuples, witnesses g=0 and g=1"))
}

fn recognition_stress() -> Outcome {
    let trials = 500;
    let rows = experiments::stress(5..=12, trials, 0x1e55_0003);
    let mut total = 0;
    for row in &rows {
        ensure!(row.groups >= trials, "degree {} filled only {} groups", row.degree, row.groups);
        ensure!(
            row.exceptions.is_empty(),
            "degree {}: {} exceptions, first {:?}",
            row.degree,
            row.exceptions.len(),
            row.exceptions[0]
        );
        let expected = alternating_order(row.degree);
        ensure!(row.expected_order == expected.to_string(), "degree {} reference order", row.degree);
        ensure!(row.certified == row.groups, "degree {}: {} of {} certified", row.degree, row.certified, row.groups);
        total += row.groups;
    }
    Ok(format!("{total} groups over d=5..12, zero exceptions"))
}

fn composites() -> Outcome {
    let summary = experiments::decomp_test(240, 0xdec0_0004).map_err(|e| e.to_string())?;
    ensure!(summary.generated >= 200, "only {} composites generated", summary.generated);
    for c in &summary.cases {
        let odd: Vec<u64> = c.fiber_indices.iter().map(|&e| e as u64).collect();
        ensure!(odd.len() <= 3 && odd.iter().all(|e| e % 2 == 1 && *e > 1), "fiber {:?} out of scope", odd);
        ensure!(gcd_all(&odd) > 1, "composite with coprime fiber {:?}", odd);
        ensure!(c.valid && !c.primitive, "composite {}x{} is primitive or invalid", c.outer_degree, c.inner_degree);
    }
    ensure!(summary.failures == 0, "{} failing composites", summary.failures);
    for w in &summary.witnesses {
        ensure!(w.found, "no witness for {}", w.shape);
        if w.coprime {
            ensure!(w.primitive == Some(true), "witness for {} is not primitive", w.shape);
            ensure!(w.decomposability == Some(Verdict::Indecomposable), "witness for {} not certified", w.shape);
        }
    }
    Ok(format!(
        "{} composites with shared factor and imprimitive; {} coprime witnesses primitive",
        summary.generated,
        summary.witnesses.len()
    ))
}

fn degeneration() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/degeneration");
    let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    paths.sort();
    let mut largest_seen = false;
    for p in &paths {
        let doc = TupleDocument::parse(&fs::read_to_string(p).map_err(|e| e.to_string())?)
            .map_err(|e| format!("{}: {e}", p.display()))?;
        let t = doc.tuple;
        ensure!(t.is_valid() && t.is_even(), "{} is not a valid even tuple", p.display());
        largest_seen |= t.entries().iter().any(|e| e.cycle_type().parts() == [9, 7]);
        let expected: usize = t
            .entries()
            .iter()
            .flat_map(|e| e.cycles())
            .map(|c| (c.len() - 1) / 2)
            .sum();
        let r = refine_to_simple(&t).map_err(|e| format!("{}: {e}", p.display()))?.tuple;
        ensure!(r.is_simple(), "{}: refinement not simple", p.display());
        ensure!(r.len() == expected, "{}: {} entries, expected {expected}", p.display(), r.len());
        ensure!(r.genus() == t.genus(), "{}: genus changed", p.display());
        ensure!(r.product() == t.product(), "{}: product changed", p.display());
        ensure!(
            monodromy_containment(&t, &r).map_err(|e| e.to_string())?,
            "{}: containment fails",
            p.display()
        );
    }
    ensure!(largest_seen, "no fixture with an entry of type (9,7)");
    Ok(format!("{} fixtures up to type (9,7)", paths.len()))
}

fn run_search(genus: u32, poles: &[u32], seed: u64) -> Result<(TupleDocument, String, Duration), String> {
    let cmd = Command::Search {
        genus,
        poles: poles.to_vec(),
        seed,
        budget: 1_000_000,
    };
    let start = Instant::now();
    let report = commands::run_command(&cmd).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(report.status == Status::Positive, "search for {poles:?} failed: {}", report.table);
    let doc = TupleDocument::parse(&report.json).map_err(|e| e.to_string())?;
    Ok((doc, report.json, elapsed))
}

fn search_witnesses() -> Outcome {
    let (small, _, small_time) = run_search(0, &[3], 1)?;
    ensure!(small_time < Duration::from_secs(1), "degree-5 search took {small_time:?}");
    ensure!(small.tuple.degree() == 5, "degree {}", small.tuple.degree());
    ensure!(
        *small.tuple.monodromy_group().order() == BigUint::from(60u32),
        "degree-5 witness order {}",
        small.tuple.monodromy_group().order()
    );

    let (big, json, big_time) = run_search(1, &[5, 4], 7)?;
    ensure!(big_time < Duration::from_secs(120), "degree-16 search took {big_time:?}");
    let t = &big.tuple;
    ensure!(t.degree() == 16 && t.len() == 10, "shape of witness: degree {} length {}", t.degree(), t.len());
    ensure!(t.entries()[..9].iter().all(Permutation::is_three_cycle), "non-3-cycle entry");
    ensure!(t.genus() == Ok(1), "genus {:?}", t.genus());
    let order = t.monodromy_group().order().clone();
    ensure!(order == alternating_order(16), "order {order}");
    ensure!(big.meta["certificate"]["verdict"] == "monodromy_is_Ad", "certificate verdict");

    let seed = big.meta["certificate"]["evidence"]["seed"].as_u64().ok_or("certificate without seed")?;
    let budget = big.meta["certificate"]["evidence"]["budget"].as_u64().ok_or("certificate without budget")?;
    ensure!(budget == 1_000_000, "budget {budget}");
    let (_, replay, _) = run_search(1, &[5, 4], seed)?;
    ensure!(replay == json, "replay from seed {seed} differs");
    let shape = CoverShape::new(1, vec![5, 4]).map_err(|e| e.to_string())?;
    Ok(format!(
        "d=5 order 60 in {small_time:.2?}; d=16 ({}) order 16!/2 in {big_time:.2?}; replay identical",
        shape
    ))
}

fn branch_bound() -> Outcome {
    let b = hurwitz_branch_bound(1, 16);
    ensure!(b.branch_bound == Ratio::new(22, 4), "bound {}", b.branch_bound);
    ensure!(b.max_branch_points == 5, "b <= {}", b.max_branch_points);
    ensure!(b.family_dimension == Ratio::from_integer(8), "d/2 - 2g + 2 = {}", b.family_dimension);
    ensure!(b.hurwitz_scheme_bound == Ratio::new(7, 2), "scheme bound {}", b.hurwitz_scheme_bound);
    ensure!(b.family_exceeds_scheme_bound, "8 > 7/2 not reported");
    ensure!(b.degree_above_threshold && b.threshold == -2, "d > 10g - 12 not reported");
    Ok("22/4 = 11/2, b <= 5, 8 > 7/2 with 16 > -2".to_string())
}

fn feasibility() -> Outcome {
    let s16 = enumerate_cover_shapes(1, 16, false);
    let want = CoverShape::new(1, vec![5, 4]).map_err(|e| e.to_string())?;
    ensure!(s16 == vec![want], "shapes(1,16) = {s16:?}");
    let s17 = enumerate_cover_shapes(1, 17, false);
    ensure!(s17.is_empty(), "shapes(1,17) = {s17:?}");

    let report = commands::shapes(1, 17, false);
    ensure!(report.status == Status::Negative, "empty shape list must be a negative result");
    ensure!(report.table.contains(FEASIBILITY_GAP_NOTE), "report lacks the gap reference");
    let readme = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../README.md");
    let text = fs::read_to_string(&readme).map_err(|e| format!("{}: {e}", readme.display()))?;
    ensure!(text.contains("## Feasibility gap"), "README has no feasibility gap section");
    Ok("(1,16) -> {(5,4)}, (1,17) -> empty with gap note".to_string())
}
