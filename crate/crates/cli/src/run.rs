use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::anyhow;
use clap::Args;
use localmis::analysis::EstimateReport;
use localmis::graph::{verify_independent, verify_maximal_independent};
use localmis::io::{write_results, ExperimentManifest};
use localmis::mis::{run_algorithm, run_tree_mis, RunOptions};
use localmis::sim::TraceLevel;
use localmis::{Algorithm, Graph, NodeSet, ParamProfile, RunTrace};

use crate::common::{
    failed, load_graph, resolve_profile, results_root, run_id, usage, CmdResult, Failure,
};

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// luby, ghaffari, two_round_regular, inclusion, pre_shattering, full or tree.
    #[arg(long)]
    pub algo: String,
    /// `desk:tau=..,ell=..,beta=..,k=..,T=..` or `paper:delta=N`.
    #[arg(long)]
    pub profile: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub max_iterations: Option<u64>,
    /// Tree pipeline only: cap on alive degree before pre-shattering.
    #[arg(long)]
    pub degree_cap: Option<usize>,
    /// Record per-node detail in the trace.
    #[arg(long)]
    pub detail: bool,
    #[arg(long, env = "LOCALMIS_RESULTS_DIR", default_value = "results")]
    pub out: PathBuf,
    #[arg(long)]
    pub id: Option<String>,
}

/// An algorithm name, or the tree pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    Algo(Algorithm),
    Tree,
}

impl Pipeline {
    pub fn parse(s: &str) -> Result<Self, Failure> {
        if s == "tree" {
            return Ok(Pipeline::Tree);
        }
        s.parse().map(Pipeline::Algo).map_err(usage)
    }

    pub fn needs_profile(self) -> bool {
        match self {
            Pipeline::Algo(a) => a.needs_profile(),
            Pipeline::Tree => true,
        }
    }

    pub fn complete(self) -> bool {
        match self {
            Pipeline::Algo(a) => a.runs_to_completion(),
            Pipeline::Tree => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Algo(a) => a.as_str(),
            Pipeline::Tree => "tree",
        }
    }

    pub fn run(
        self,
        g: &Graph,
        profile: Option<&ParamProfile>,
        seed: u64,
        degree_cap: Option<usize>,
        opts: &RunOptions,
    ) -> Result<(NodeSet, RunTrace), Failure> {
        match self {
            Pipeline::Algo(a) => run_algorithm(g, a, profile, seed, opts),
            Pipeline::Tree => {
                let p = profile.ok_or_else(|| usage(anyhow!("tree needs a profile")))?;
                run_tree_mis(g, p, seed, degree_cap, opts)
            }
        }
        .map_err(failed)
    }
}

pub fn cmd_run(args: &RunArgs) -> CmdResult {
    let pipeline = Pipeline::parse(&args.algo)?;
    let g = load_graph(&args.graph)?;
    let profile = if pipeline.needs_profile() {
        Some(resolve_profile(args.profile.as_deref(), &g)?)
    } else if args.profile.is_some() {
        return Err(usage(anyhow!("{} takes no profile", pipeline.name())));
    } else {
        None
    };
    let root = results_root(&args.out)?;
    let opts = RunOptions {
        max_iterations: args.max_iterations,
        level: if args.detail {
            TraceLevel::Full
        } else {
            TraceLevel::Summary
        },
    };
    let (mis, trace) = pipeline.run(&g, profile.as_ref(), args.seed, args.degree_cap, &opts)?;

    // Algorithms that stop early leave undecided nodes and are only
    // required to be independent.
    let ok = if pipeline.complete() {
        verify_maximal_independent(&g, &mis).map_err(failed)?
    } else {
        verify_independent(&g, &mis).map_err(failed)?
    };
    let check = if pipeline.complete() {
        "maximal_independent"
    } else {
        "independent"
    };

    let id = run_id(args.id.as_deref(), "run", args.seed);
    let manifest = ExperimentManifest::new(
        id,
        args.graph.display().to_string(),
        pipeline.name(),
        profile,
        1,
        args.seed,
        vec![check.to_string()],
    );
    let report = EstimateReport::deterministic(format!("run/{check}"), u64::from(ok), 1);
    let dir =
        write_results(&manifest, &[report], std::slice::from_ref(&trace), &root).map_err(usage)?;
    let mut members = String::new();
    for v in mis.iter() {
        writeln!(members, "{v}").expect("writing to a String");
    }
    let mis_path = dir.join("mis.txt");
    std::fs::write(&mis_path, members).map_err(failed)?;

    println!(
        "algorithm={} seed={} n={}",
        pipeline.name(),
        args.seed,
        g.node_count()
    );
    println!(
        "mis_size={} rounds: prelude={} main={} completion={} total={}",
        mis.len(),
        trace.prelude_rounds,
        trace.main_rounds,
        trace.completion_rounds,
        trace.total_rounds()
    );
    if !pipeline.complete() {
        println!("undecided={}", trace.residual.len());
    }
    println!(
        "{}: {}",
        check.replace('_', " "),
        if ok { "yes" } else { "NO" }
    );
    println!("results: {}", dir.display());
    println!("mis: {}", mis_path.display());
    Ok(if ok { 0 } else { 1 })
}
