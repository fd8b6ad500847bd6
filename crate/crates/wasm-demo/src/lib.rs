//! Browser bindings for the demo page in `www/`.
//!
//! Each export takes plain parameters and returns a JSON string. The
//! `*_json` functions hold the logic and are tested natively; the
//! `wasm_bindgen` wrappers only turn errors into JS exceptions.

use localmis::analysis::{estimate_event, BoundDirection, EstimateConfig, ProbeEvent};
use localmis::graph::{
    generate_bipartite_regular, generate_regular_girth, generate_tree, girth, load_named, Girth,
};
use localmis::io::parse_profile_spec;
use localmis::mis::{intervals_regular, run_algorithm, run_tree_mis, RunOptions};
use localmis::{Algorithm, Graph, ParamProfile};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest graph the page will lay out.
pub const MAX_DRAW_NODES: usize = 2000;
/// Trial cap for in-browser estimates.
pub const MAX_TRIALS: u64 = 200_000;

fn graph_from(family: &str, n: usize, d: usize, seed: u64) -> Result<Graph, String> {
    let g = match family {
        "regular" => generate_regular_girth(n, d, 5, seed),
        "bipartite" => generate_bipartite_regular(n / 2, d, seed),
        "tree" => generate_tree(n, seed),
        name => load_named(name),
    }
    .map_err(|e| e.to_string())?;
    if g.node_count() > MAX_DRAW_NODES {
        return Err(format!("at most {MAX_DRAW_NODES} nodes"));
    }
    Ok(g)
}

fn profile_for(spec: &str, default_delta: usize) -> Result<ParamProfile, String> {
    parse_profile_spec(spec, default_delta.max(1)).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Rounds {
    prelude: u64,
    main: u64,
    completion: u64,
    total: u64,
}

#[derive(Serialize)]
struct MisRun {
    algorithm: String,
    nodes: usize,
    edges: Vec<(usize, usize)>,
    /// `null` for forests.
    girth: Option<usize>,
    mis: Vec<usize>,
    /// Nodes left undecided by algorithms that stop early.
    residual: Vec<usize>,
    /// Alive node count after each iteration.
    alive: Vec<usize>,
    rounds: Rounds,
}

/// Generates a graph and runs one algorithm on it. `family` is `regular`,
/// `bipartite`, `tree` or a catalog name such as `petersen`; `algo` is an
/// algorithm name or `tree`.
pub fn run_mis_json(
    family: &str,
    n: usize,
    d: usize,
    seed: u64,
    algo: &str,
    profile: &str,
) -> Result<String, String> {
    let g = graph_from(family, n, d, seed)?;
    let opts = RunOptions::default();
    let delta = g.max_degree();
    let (mis, trace) = if algo == "tree" {
        run_tree_mis(&g, &profile_for(profile, delta)?, seed, None, &opts)
    } else {
        let a: Algorithm = algo
            .parse()
            .map_err(|e: localmis::MisError| e.to_string())?;
        let p = if a.needs_profile() {
            Some(profile_for(profile, delta)?)
        } else {
            None
        };
        run_algorithm(&g, a, p.as_ref(), seed, &opts)
    }
    .map_err(|e| e.to_string())?;
    let run = MisRun {
        algorithm: trace.algorithm.clone(),
        nodes: g.node_count(),
        edges: g.edges().collect(),
        girth: match girth(&g).girth {
            Girth::Finite(k) => Some(k),
            Girth::Infinite => None,
        },
        mis: mis.to_vec(),
        residual: trace.residual.clone(),
        alive: trace.iterations.iter().map(|r| r.alive_count).collect(),
        rounds: Rounds {
            prelude: trace.prelude_rounds,
            main: trace.main_rounds,
            completion: trace.completion_rounds,
            total: trace.total_rounds(),
        },
    };
    serde_json::to_string(&run).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Ladder {
    profile: ParamProfile,
    /// `(a_i p, a_{i+1} p]` for `p = tau`.
    inclusion_intervals: Vec<(f64, f64)>,
    /// `(b_i, b_{i+1}]` of the two-round regular step, when `delta` allows it.
    regular_intervals: Option<Vec<(f64, f64)>>,
}

/// Resolved constants of a profile spec and the rank intervals they give.
pub fn ladder_json(spec: &str, delta: usize) -> Result<String, String> {
    let profile = profile_for(spec, delta)?;
    let inclusion_intervals = profile
        .a_seq
        .windows(2)
        .map(|w| (w[0] * profile.tau, w[1] * profile.tau))
        .collect();
    let regular_intervals = intervals_regular(profile.delta, Some(profile.k_requested))
        .ok()
        .map(|iv| iv.intervals());
    serde_json::to_string(&Ladder {
        profile,
        inclusion_intervals,
        regular_intervals,
    })
    .map_err(|e| e.to_string())
}

/// Monte-Carlo estimate of `event` (`joins`, `deleted` or `candidate`) at
/// the maximum-degree node after one step of `algo`.
#[allow(clippy::too_many_arguments)]
pub fn estimate_json(
    family: &str,
    n: usize,
    d: usize,
    seed: u64,
    algo: &str,
    profile: &str,
    event: &str,
    trials: u64,
) -> Result<String, String> {
    if trials > MAX_TRIALS {
        return Err(format!("at most {MAX_TRIALS} trials in the browser"));
    }
    let g = graph_from(family, n, d, seed)?;
    let a: Algorithm = algo
        .parse()
        .map_err(|e: localmis::MisError| e.to_string())?;
    let p = if a.needs_profile() {
        Some(profile_for(profile, g.max_degree())?)
    } else {
        None
    };
    let event = match event {
        "joins" => ProbeEvent::Joins,
        "deleted" => ProbeEvent::Deleted,
        "candidate" => ProbeEvent::Candidate,
        other => return Err(format!("unknown event `{other}`")),
    };
    let probe = localmis::analysis::select_probe(&g).ok_or("empty graph")?;
    let report = estimate_event(
        &g,
        a,
        p.as_ref(),
        probe,
        event,
        &EstimateConfig::new(trials, seed),
        None,
        BoundDirection::AtLeast,
    )
    .map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

// Seeds and trial counts cross the boundary as `u32` so the page can pass
// plain numbers instead of BigInt.

#[wasm_bindgen]
pub fn run_mis(
    family: &str,
    n: usize,
    d: usize,
    seed: u32,
    algo: &str,
    profile: &str,
) -> Result<String, JsValue> {
    run_mis_json(family, n, d, seed.into(), algo, profile).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn ladder(spec: &str, delta: usize) -> Result<String, JsValue> {
    ladder_json(spec, delta).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn estimate(
    family: &str,
    n: usize,
    d: usize,
    seed: u32,
    algo: &str,
    profile: &str,
    event: &str,
    trials: u32,
) -> Result<String, JsValue> {
    estimate_json(
        family,
        n,
        d,
        seed.into(),
        algo,
        profile,
        event,
        trials.into(),
    )
    .map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use localmis::graph::verify_maximal_independent;
    use localmis::NodeSet;
    use serde_json::Value;

    #[test]
    fn run_returns_a_maximal_set() {
        let out: Value =
            serde_json::from_str(&run_mis_json("petersen", 0, 0, 1, "luby", "").unwrap()).unwrap();
        let g = load_named("petersen").unwrap();
        let mis: Vec<usize> = serde_json::from_value(out["mis"].clone()).unwrap();
        assert!(verify_maximal_independent(&g, &NodeSet::from_members(10, mis)).unwrap());
        assert_eq!(out["edges"].as_array().unwrap().len(), 15);
        assert_eq!(out["girth"], 5);
    }

    #[test]
    fn full_run_accounts_rounds() {
        let spec = "desk:tau=0.0001,ell=1,beta=0.5,k=2,T=10";
        let out: Value =
            serde_json::from_str(&run_mis_json("regular", 60, 3, 2, "full", spec).unwrap())
                .unwrap();
        assert_eq!(out["rounds"]["main"], 20);
        assert_eq!(out["alive"].as_array().unwrap().len(), 10);
        assert!(
            out["residual"].as_array().unwrap().is_empty()
                || out["rounds"]["completion"].as_u64().unwrap() > 0
        );
    }

    #[test]
    fn tree_pipeline_and_errors() {
        assert!(run_mis_json(
            "tree",
            50,
            0,
            3,
            "tree",
            "desk:tau=0.04,ell=2,beta=1,k=1,T=5"
        )
        .is_ok());
        assert!(run_mis_json("petersen", 0, 0, 1, "bogus", "").is_err());
        assert!(run_mis_json("tree", 5000, 0, 1, "luby", "").is_err());
    }

    #[test]
    fn ladder_lists_intervals() {
        let out: Value = serde_json::from_str(
            &ladder_json("desk:tau=0.0001,ell=1,beta=0.5,k=2,T=40", 1000).unwrap(),
        )
        .unwrap();
        let inc = out["inclusion_intervals"].as_array().unwrap();
        assert_eq!(inc.len(), out["profile"]["k"].as_u64().unwrap() as usize);
        // a_1 = 10 beta = 5.
        assert!((inc[0][0].as_f64().unwrap() - 5e-4).abs() < 1e-12);
        let reg = out["regular_intervals"].as_array().unwrap();
        assert!((reg[0][0].as_f64().unwrap() - 0.005).abs() < 1e-12);
        let small: Value =
            serde_json::from_str(&ladder_json("desk:tau=0.04,ell=2,beta=1,k=1,T=5", 3).unwrap())
                .unwrap();
        assert!(small["regular_intervals"].is_null());
    }

    #[test]
    fn estimate_path_centre() {
        let out: Value = serde_json::from_str(
            &estimate_json("path(3)", 0, 0, 4, "luby", "", "joins", 20_000).unwrap(),
        )
        .unwrap();
        let (lo, hi) = (
            out["ci_low"].as_f64().unwrap(),
            out["ci_high"].as_f64().unwrap(),
        );
        assert!(lo <= 1.0 / 3.0 && 1.0 / 3.0 <= hi, "{out}");
        assert!(estimate_json("path(3)", 0, 0, 4, "luby", "", "joins", MAX_TRIALS + 1).is_err());
        assert!(estimate_json("path(3)", 0, 0, 4, "luby", "", "candidate", 1000).is_err());
    }
}
