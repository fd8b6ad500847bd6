//! Acceptance criteria. Runs as a plain binary (`harness = false`) so each
//! criterion prints exactly one PASS/FAIL line; exits non-zero if any hard
//! criterion fails. Soft criteria print WARN instead of failing.

use std::time::Instant;

use localmis::analysis::{
    brute_force_mis_sizes, check_exponent_bounds, check_lemma31_bounds, check_lemma32_case1,
    check_prop33, check_shattering_lemmas, check_survival, estimate_event, luby_deletion_per_node,
    maximal_independent_sets, shatter_report, BoundDirection, EstimateConfig, EstimateReport,
    Gadget, ProbeEvent, SurvivalAlgo, Verdict,
};
use localmis::graph::{
    generate_bipartite_regular, generate_regular_girth, generate_tree, load_named,
    verify_maximal_independent,
};
use localmis::io::{render_reports_csv, write_results, ExperimentManifest};
use localmis::mis::{pre_shattering, run_full_mis, RunOptions};
use localmis::sim::TraceLevel;
use localmis::{Algorithm, Graph, ParamProfile, RngStream};
use rayon::prelude::*;

// Pinned tolerances and sizes.
const C1_RUNS_PER_GRAPH: u64 = 200;
const C1_TIME_LIMIT_S: f64 = 300.0;
const C2_INVOCATIONS: u64 = 10_000;
const C3_RUNS_PER_T: u64 = 40;
const C3_T_VALUES: [u64; 3] = [20, 40, 80];
const C5_DELTA: usize = 100;
const C5_TRIALS: u64 = 2_000_000;
const C5_TIME_LIMIT_S: f64 = 600.0;
const C6_TRIALS: u64 = 1_000_000;
const C7_TRIALS: u64 = 100_000;
const C7_SLACK: f64 = 0.02;
const C8_MAX_NODES: usize = 20;
const C8_SEEDS: u64 = 20;
const C9_GRID: usize = 100;
const C9_SAMPLES: usize = 100_000;
const C11_RUNS: u64 = 100;
const C11_COMPONENT_LIMIT: usize = 50;
const C11_SUCCESS_RATE: f64 = 0.95;
const CONFIDENCE: f64 = 0.99;

struct Outcome {
    pass: bool,
    /// Soft criteria report a warning instead of failing.
    soft: bool,
    detail: String,
}

impl Outcome {
    fn hard(pass: bool, detail: String) -> Self {
        Self {
            pass,
            soft: false,
            detail,
        }
    }
}

fn cfg(trials: u64, seed: u64) -> EstimateConfig {
    EstimateConfig {
        trials,
        seed,
        confidence: CONFIDENCE,
    }
}

fn all_pass(reports: &[EstimateReport]) -> bool {
    reports.iter().all(|r| r.verdict == Verdict::Pass)
}

fn brief(r: &EstimateReport) -> String {
    format!(
        "{} {}/{} ci=[{:.3e},{:.3e}] target={} {}",
        r.name,
        r.successes,
        r.trials,
        r.ci_low,
        r.ci_high,
        r.target_bound.map_or("-".into(), |t| format!("{t:.3e}")),
        r.verdict
    )
}

fn desk_for(g: &Graph, t: u64) -> ParamProfile {
    ParamProfile::desk(g.max_degree().max(1), 0.0001, 1.0, 0.5, 2, t).unwrap()
}

fn c1_correctness() -> Outcome {
    let start = Instant::now();
    let graphs = vec![
        ("cycle(7)", load_named("cycle(7)").unwrap()),
        ("mcgee", load_named("mcgee").unwrap()),
        ("tree(1000)", generate_tree(1000, 1).unwrap()),
        (
            "bipartite(200,50)",
            generate_bipartite_regular(200, 50, 1).unwrap(),
        ),
        (
            "regular(500,3,g7)",
            generate_regular_girth(500, 3, 7, 1).unwrap(),
        ),
    ];
    let mut failures = 0u64;
    let mut runs = 0u64;
    for (name, g) in &graphs {
        let p = desk_for(g, 40);
        let bad: u64 = (0..C1_RUNS_PER_GRAPH)
            .into_par_iter()
            .map(
                |seed| match run_full_mis(g, &p, seed, &RunOptions::default()) {
                    Ok((mis, _)) => u64::from(!verify_maximal_independent(g, &mis).unwrap()),
                    Err(e) => {
                        eprintln!("  {name} seed {seed}: {e}");
                        1
                    }
                },
            )
            .sum();
        failures += bad;
        runs += C1_RUNS_PER_GRAPH;
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::hard(
        failures == 0 && secs < C1_TIME_LIMIT_S,
        format!(
            "{} of {runs} full runs maximal independent in {secs:.1}s",
            runs - failures
        ),
    )
}

fn c2_label_agreement() -> Outcome {
    // Sparse block below sqrt(tau) (C- labels), dense block above (C+).
    let dense = generate_bipartite_regular(100, 40, 2).unwrap();
    let g = dense.disjoint_union(&generate_bipartite_regular(50, 10, 2).unwrap());
    let p = ParamProfile::desk(40, 0.01, 1.0, 0.5, 1, 1).unwrap();
    let out = check_prop33(&g, &p, &cfg(C2_INVOCATIONS, 2)).unwrap();
    Outcome::hard(
        out.mismatched_edges == 0 && out.c_minus > 0 && out.c_plus > 0,
        format!(
            "{} invocations, {} mismatched edges (C- labels {}, C+ labels {})",
            out.report.trials, out.mismatched_edges, out.c_minus, out.c_plus
        ),
    )
}

type Fixture = (&'static str, Graph, Box<dyn Fn(u64) -> ParamProfile>);

/// Fixtures for criteria 3 and 4: a sparse high-girth graph, and a dense
/// one whose degree exceeds `10 ell / tau` so the degree bound is not
/// trivially met.
fn shattering_fixtures() -> Vec<Fixture> {
    vec![
        (
            "regular(2000,8,g5)",
            generate_regular_girth(2000, 8, 5, 3).unwrap(),
            Box::new(|t| ParamProfile::desk(8, 0.04, 2.0, 1.0, 1, t).unwrap()),
        ),
        (
            "bipartite(200,50)",
            generate_bipartite_regular(200, 50, 3).unwrap(),
            Box::new(|t| ParamProfile::desk(50, 0.9, 1.5, 1.0, 1, t).unwrap()),
        ),
    ]
}

fn c3_c4_shattering() -> (Outcome, Outcome) {
    let mut runs = 0;
    let (mut ok37, mut ok310, mut strict310) = (0, 0, 0);
    for (_, g, profile) in shattering_fixtures() {
        for t in C3_T_VALUES {
            let reports = check_shattering_lemmas(&g, &profile(t), &cfg(C3_RUNS_PER_T, t)).unwrap();
            runs += C3_RUNS_PER_T;
            ok37 += reports[0].successes;
            ok310 += reports[1].successes;
            strict310 += reports[2].successes;
        }
    }
    (
        Outcome::hard(ok37 == runs, format!("{ok37} of {runs} pre-shattering runs without budget violations")),
        Outcome::hard(
            ok310 == runs,
            format!(
                "{ok310} of {runs} runs within the hard degree bound; {strict310} within 10*ell/tau{}",
                if strict310 < runs { " (warning)" } else { "" }
            ),
        ),
    )
}

fn c5_two_round_bounds() -> Outcome {
    let start = Instant::now();
    let reports = check_lemma31_bounds(C5_DELTA, 1, &cfg(C5_TRIALS, 5)).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let lines: Vec<String> = reports.iter().map(brief).collect();
    Outcome::hard(
        all_pass(&reports) && secs < C5_TIME_LIMIT_S,
        format!("{} ({secs:.1}s)", lines.join("; ")),
    )
}

fn c6_low_desire_bound() -> Outcome {
    let p = ParamProfile::desk(100, 0.0001, 1.0, 0.5, 1, 1).unwrap();
    assert!(p.beta * p.tau.sqrt() <= 0.01);
    let gadget = Gadget {
        probe_weight: p.tau,
        leaves: 20,
        leaf_weight: p.tau / 4.0,
        host_degree: 5,
        host_weight: p.tau,
    };
    let r = check_lemma32_case1(&p, &gadget, &cfg(C6_TRIALS, 6)).unwrap();
    Outcome::hard(r.verdict == Verdict::Pass, brief(&r))
}

fn c7_luby() -> Outcome {
    let p3 = load_named("path(3)").unwrap();
    let centre = estimate_event(
        &p3,
        Algorithm::Luby,
        None,
        1,
        ProbeEvent::Joins,
        &cfg(C7_TRIALS, 7),
        None,
        BoundDirection::AtLeast,
    )
    .unwrap();
    let a = centre.ci_contains(1.0 / 3.0);

    let mcgee = load_named("mcgee").unwrap();
    let d = 3.0;
    let per_node = luby_deletion_per_node(
        &mcgee,
        &cfg(C7_TRIALS, 7),
        Some(d / (2.0 * d - 1.0) - C7_SLACK),
    )
    .unwrap();
    let b = all_pass(&per_node);
    let worst = per_node
        .iter()
        .map(|r| r.ci_low)
        .fold(f64::INFINITY, f64::min);

    let mut c = true;
    let mut floors = Vec::new();
    for (name, g) in [
        ("mcgee", mcgee.clone()),
        (
            "bipartite(500,20)",
            generate_bipartite_regular(500, 20, 7).unwrap(),
        ),
    ] {
        let delta = g.max_degree() as f64;
        let floor = 1.0 / (2.0 * std::f64::consts::E) - 1.0 / delta - C7_SLACK;
        let r = check_survival(
            &g,
            SurvivalAlgo::Luby,
            None,
            None,
            &cfg(C7_TRIALS, 7),
            Some(floor),
            BoundDirection::AtLeast,
        )
        .unwrap();
        c &= r.verdict == Verdict::Pass;
        floors.push(format!(
            "{name} deleted ci_low={:.3} floor={floor:.3}",
            r.ci_low
        ));
    }
    Outcome::hard(
        a && b && c,
        format!(
            "(a) P3 centre ci=[{:.4},{:.4}] contains 1/3: {a}; (b) mcgee min ci_low={worst:.4} >= {:.4}: {b}; (c) {}",
            centre.ci_low,
            centre.ci_high,
            d / (2.0 * d - 1.0) - C7_SLACK,
            floors.join(", ")
        ),
    )
}

fn c8_oracle() -> Outcome {
    let mut names: Vec<String> = vec!["petersen".into(), "heawood".into()];
    for m in 1..=C8_MAX_NODES {
        names.push(format!("path({m})"));
        names.push(format!("complete({m})"));
        if m >= 3 {
            names.push(format!("cycle({m})"));
        }
    }
    let mut checked = 0;
    let mut bad = Vec::new();
    for name in &names {
        let g = load_named(name).unwrap();
        assert!(g.node_count() <= C8_MAX_NODES);
        let family = maximal_independent_sets(&g).unwrap();
        let census = brute_force_mis_sizes(&g).unwrap();
        let p = desk_for(&g, 10);
        for seed in 0..C8_SEEDS {
            let (mis, _) = run_full_mis(&g, &p, seed, &RunOptions::default()).unwrap();
            checked += 1;
            let sized = census.min_size <= mis.len() && mis.len() <= census.max_size;
            if !sized || !family.contains(&mis) || !verify_maximal_independent(&g, &mis).unwrap() {
                bad.push(format!("{name}/{seed}"));
            }
        }
    }
    Outcome::hard(
        bad.is_empty(),
        format!(
            "{} of {checked} outputs on {} catalog graphs are enumerated MISs {bad:?}",
            checked - bad.len(),
            names.len()
        ),
    )
}

fn c9_exponent() -> Outcome {
    let check = check_exponent_bounds(C9_GRID, C9_SAMPLES, 9);
    Outcome::hard(
        check.holds() && check.checked == C9_GRID * C9_GRID + C9_SAMPLES,
        format!(
            "{} points checked, violation {:?}",
            check.checked, check.violation
        ),
    )
}

fn c10_determinism() -> Outcome {
    let run = |threads: usize| -> Vec<EstimateReport> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let mut reports = check_lemma31_bounds(20, 1, &cfg(50_000, 10)).unwrap();
            let pet = load_named("petersen").unwrap();
            reports.push(
                check_survival(
                    &pet,
                    SurvivalAlgo::Luby,
                    None,
                    None,
                    &cfg(10_000, 10),
                    Some(0.5),
                    BoundDirection::AtLeast,
                )
                .unwrap(),
            );
            let g = generate_bipartite_regular(50, 10, 10).unwrap();
            let p = ParamProfile::desk(10, 0.04, 1.0, 0.5, 1, 1).unwrap();
            reports.push(check_prop33(&g, &p, &cfg(500, 10)).unwrap().report);
            reports
        })
    };
    let dir = tempfile::tempdir().unwrap();
    let mut csvs = Vec::new();
    for (id, threads) in [("a", 1), ("b", 4)] {
        let manifest = ExperimentManifest::new(
            id,
            "fixed",
            "mixed",
            None,
            0,
            10,
            vec!["determinism".into()],
        );
        let path = write_results(&manifest, &run(threads), &[], dir.path()).unwrap();
        csvs.push(std::fs::read(path.join("reports.csv")).unwrap());
    }
    let same = csvs[0] == csvs[1] && !csvs[0].is_empty();
    let direct_same = render_reports_csv(&run(2)).unwrap().into_bytes() == csvs[0];
    Outcome::hard(
        same && direct_same,
        format!(
            "reports.csv identical across reruns with 1, 2 and 4 threads: {}",
            same && direct_same
        ),
    )
}

fn c11_shattering_components() -> Outcome {
    // regular(10^4, 20, girth 7) is only 1.3x the Moore bound (7621 nodes),
    // out of reach of swap repair: use the bipartite fallback.
    let g = generate_bipartite_regular(5000, 20, 11).unwrap();
    // Desire 20 * tau must reach 1/ell for any node to be golden, and a
    // small beta keeps the exclusion floors reachable so some nodes decide.
    let p = ParamProfile::desk(20, 0.02, 10.0, 0.05, 1, 60).unwrap();
    let runs: Vec<(usize, usize, usize)> = (0..C11_RUNS)
        .into_par_iter()
        .map(|seed| {
            let out = pre_shattering(&g, &p, &RngStream::new(seed), TraceLevel::Summary).unwrap();
            let r = shatter_report(&g, &out.trace, &p).unwrap();
            (r.max_component_golden, r.residual_size, r.golden_part_size)
        })
        .collect();
    let sizes: Vec<usize> = runs.iter().map(|r| r.0).collect();
    let mean = |f: fn(&(usize, usize, usize)) -> usize| {
        runs.iter().map(f).sum::<usize>() as f64 / runs.len() as f64
    };
    let good = sizes.iter().filter(|&&s| s <= C11_COMPONENT_LIMIT).count();
    let rate = good as f64 / C11_RUNS as f64;
    let mut sorted = sizes.clone();
    sorted.sort_unstable();
    let q = |f: f64| sorted[((sorted.len() - 1) as f64 * f) as usize];
    Outcome {
        pass: rate >= C11_SUCCESS_RATE,
        soft: true,
        detail: format!(
            "bipartite(5000,20) T=60: {good}/{C11_RUNS} runs with largest golden component <= {C11_COMPONENT_LIMIT}; sizes min={} median={} p95={} max={}; mean residual {:.0}, mean golden part {:.0}",
            q(0.0), q(0.5), q(0.95), q(1.0), mean(|r| r.1), mean(|r| r.2)
        ),
    }
}

fn main() {
    // `cargo test` passes harness flags; a name filter other than ours skips.
    let args: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return;
    }
    if std::env::args().any(|a| a == "--list") {
        return;
    }

    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let (c3, c4) = c3_c4_shattering();
    results.push((1, "correctness", c1_correctness()));
    results.push((2, "adjacent candidates share a label", c2_label_agreement()));
    results.push((3, "iteration budget of survivors", c3));
    results.push((4, "residual degree bound", c4));
    results.push((5, "two-round per-interval bounds", c5_two_round_bounds()));
    results.push((6, "low-desire inclusion bound", c6_low_desire_bound()));
    results.push((7, "Luby baselines", c7_luby()));
    results.push((8, "brute-force oracle equivalence", c8_oracle()));
    results.push((9, "exponential sandwich", c9_exponent()));
    results.push((10, "determinism", c10_determinism()));
    results.push((
        11,
        "shattered components (soft)",
        c11_shattering_components(),
    ));

    let mut hard_failures = 0;
    for (id, name, o) in &results {
        let tag = match (o.pass, o.soft) {
            (true, _) => "PASS",
            (false, true) => "WARN",
            (false, false) => {
                hard_failures += 1;
                "FAIL"
            }
        };
        println!("acceptance {id:>2} [{tag}] {name}: {}", o.detail);
    }
    println!(
        "acceptance: {} passed, {hard_failures} failed, {} warned",
        results.iter().filter(|(_, _, o)| o.pass).count(),
        results.iter().filter(|(_, _, o)| !o.pass && o.soft).count()
    );
    if hard_failures > 0 {
        std::process::exit(1);
    }
}
