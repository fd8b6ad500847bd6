use std::path::PathBuf;

use anyhow::anyhow;
use clap::{Args, ValueEnum};
use localmis::analysis::{
    check_exponent_bounds, check_lemma31_bounds, check_lemma32_case1, check_prop33,
    check_shattering_lemmas, check_survival, luby_deletion_per_node, AnalysisError, BoundDirection,
    EstimateConfig, EstimateReport, Gadget, SurvivalAlgo, Verdict,
};
use localmis::graph::{girth, Girth};
use localmis::io::{write_results, ExperimentManifest};
use localmis::{Graph, ParamProfile};

use crate::common::{
    failed, load_graph, resolve_profile, results_root, run_id, usage, CmdResult, Failure,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemma31,
    Lemma32,
    Prop33,
    Lemma37,
    Lemma310,
    Survival,
    Exponent,
    All,
}

impl Suite {
    fn as_str(self) -> &'static str {
        match self {
            Suite::Lemma31 => "lemma31",
            Suite::Lemma32 => "lemma32",
            Suite::Prop33 => "prop33",
            Suite::Lemma37 => "lemma37",
            Suite::Lemma310 => "lemma310",
            Suite::Survival => "survival",
            Suite::Exponent => "exponent",
            Suite::All => "all",
        }
    }

    fn needs_graph(self) -> bool {
        matches!(
            self,
            Suite::Prop33 | Suite::Lemma37 | Suite::Lemma310 | Suite::Survival
        )
    }

    fn default_trials(self) -> u64 {
        match self {
            Suite::Lemma31 => 2_000_000,
            Suite::Lemma32 => 1_000_000,
            Suite::Prop33 => 10_000,
            Suite::Lemma37 | Suite::Lemma310 => 100,
            Suite::Survival | Suite::Exponent => 100_000,
            Suite::All => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurvivalArg {
    Luby,
    Inclusion,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Graph file for prop33, lemma37, lemma310 and survival.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub profile: Option<String>,
    /// Degree of the bipartite lemma31 instance.
    #[arg(long, default_value_t = 100)]
    pub delta: usize,
    /// Requested interval count for lemma31.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Trials (runs for lemma37/lemma310, random samples for exponent);
    /// defaults per suite.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.99)]
    pub confidence: f64,
    #[arg(long, value_enum, default_value = "luby")]
    pub survival_algo: SurvivalArg,
    /// lemma32 gadget: neighbours of the probe.
    #[arg(long, default_value_t = 20)]
    pub leaves: usize,
    /// lemma32 gadget: further neighbours of each leaf.
    #[arg(long, default_value_t = 5)]
    pub host_degree: usize,
    #[arg(long, env = "LOCALMIS_RESULTS_DIR", default_value = "results")]
    pub out: PathBuf,
    #[arg(long)]
    pub id: Option<String>,
    /// Print every report, not only those that did not pass.
    #[arg(short, long)]
    pub verbose: bool,
}

fn analysis_err(e: AnalysisError) -> Failure {
    match e {
        AnalysisError::TooFewTrials { .. }
        | AnalysisError::BadGadget(_)
        | AnalysisError::Unsupported(_)
        | AnalysisError::NoGoodNodes
        | AnalysisError::Mis(localmis::MisError::InvalidConstants(_))
        | AnalysisError::Mis(localmis::MisError::DeltaTooSmall { .. }) => usage(e),
        other => failed(other),
    }
}

struct Context<'a> {
    args: &'a CheckArgs,
    graph: Option<Graph>,
}

impl Context<'_> {
    fn cfg(&self, suite: Suite) -> EstimateConfig {
        EstimateConfig {
            trials: self.args.trials.unwrap_or(suite.default_trials()),
            seed: self.args.seed,
            confidence: self.args.confidence,
        }
    }

    fn graph(&self) -> &Graph {
        self.graph.as_ref().expect("graph loaded for graph suites")
    }

    fn profile(&self) -> Result<ParamProfile, Failure> {
        resolve_profile(self.args.profile.as_deref(), self.graph())
    }

    fn run(&self, suite: Suite) -> Result<Vec<EstimateReport>, Failure> {
        let cfg = self.cfg(suite);
        match suite {
            Suite::Exponent => {
                let check = check_exponent_bounds(100, cfg.trials as usize, cfg.seed);
                if let Some((d, x)) = check.violation {
                    eprintln!("exponent bounds fail at delta={d} x={x}");
                }
                Ok(vec![EstimateReport::deterministic(
                    format!("exponent/{}_points", check.checked),
                    u64::from(check.holds()),
                    1,
                )])
            }
            Suite::Lemma31 => {
                check_lemma31_bounds(self.args.delta, self.args.k, &cfg).map_err(analysis_err)
            }
            Suite::Lemma32 => {
                let spec = self
                    .args
                    .profile
                    .as_deref()
                    .unwrap_or("desk:delta=100,tau=0.0001,ell=1,beta=0.5,k=1,T=1");
                let p = localmis::io::parse_profile_spec(spec, 100).map_err(usage)?;
                let gadget = Gadget {
                    probe_weight: p.tau,
                    leaves: self.args.leaves,
                    leaf_weight: p.tau / 4.0,
                    host_degree: self.args.host_degree,
                    host_weight: p.tau,
                };
                check_lemma32_case1(&p, &gadget, &cfg)
                    .map(|r| vec![r])
                    .map_err(analysis_err)
            }
            Suite::Prop33 => {
                let out =
                    check_prop33(self.graph(), &self.profile()?, &cfg).map_err(analysis_err)?;
                println!(
                    "prop33: candidates C-={} C+={} mismatched edges={}",
                    out.c_minus, out.c_plus, out.mismatched_edges
                );
                Ok(vec![out.report])
            }
            Suite::Lemma37 | Suite::Lemma310 => {
                let reports = check_shattering_lemmas(self.graph(), &self.profile()?, &cfg)
                    .map_err(analysis_err)?;
                let prefix = format!("{}/", suite.as_str());
                Ok(reports
                    .into_iter()
                    .filter(|r| r.name.starts_with(&prefix))
                    .collect())
            }
            Suite::Survival => self.survival(&cfg),
            Suite::All => {
                let mut all = Vec::new();
                for s in [Suite::Exponent, Suite::Lemma31, Suite::Lemma32] {
                    all.extend(self.run(s)?);
                }
                if self.graph.is_some() {
                    for s in [
                        Suite::Prop33,
                        Suite::Lemma37,
                        Suite::Lemma310,
                        Suite::Survival,
                    ] {
                        all.extend(self.run(s)?);
                    }
                } else {
                    println!("no --graph: skipping prop33, lemma37, lemma310, survival");
                }
                Ok(all)
            }
        }
    }

    fn survival(&self, cfg: &EstimateConfig) -> Result<Vec<EstimateReport>, Failure> {
        let g = self.graph();
        match self.args.survival_algo {
            SurvivalArg::Luby => {
                let delta = g.max_degree().max(1) as f64;
                let floor = 1.0 / (2.0 * std::f64::consts::E) - 1.0 / delta - 0.02;
                let mut reports = vec![check_survival(
                    g,
                    SurvivalAlgo::Luby,
                    None,
                    None,
                    cfg,
                    Some(floor),
                    BoundDirection::AtLeast,
                )
                .map_err(analysis_err)?];
                // The per-node bound needs a regular graph without short cycles.
                let high_girth = matches!(girth(g).girth, Girth::Infinite)
                    || matches!(girth(g).girth, Girth::Finite(k) if k >= 5);
                if g.regular_degree().is_some() && high_girth {
                    let target = delta / (2.0 * delta - 1.0) - 0.02;
                    reports.extend(
                        luby_deletion_per_node(g, cfg, Some(target)).map_err(analysis_err)?,
                    );
                }
                Ok(reports)
            }
            SurvivalArg::Inclusion => {
                let p = self.profile()?;
                check_survival(
                    g,
                    SurvivalAlgo::Inclusion,
                    Some(&p),
                    None,
                    cfg,
                    None,
                    BoundDirection::AtLeast,
                )
                .map(|r| vec![r])
                .map_err(analysis_err)
            }
        }
    }
}

pub fn cmd_check(args: &CheckArgs) -> CmdResult {
    if !(args.confidence > 0.0 && args.confidence < 1.0) {
        return Err(usage(anyhow!("--confidence must lie in (0, 1)")));
    }
    let graph = match &args.graph {
        Some(path) => Some(load_graph(path)?),
        None if args.suite.needs_graph() => {
            return Err(usage(anyhow!(
                "--suite {} needs --graph",
                args.suite.as_str()
            )))
        }
        None => None,
    };
    let root = results_root(&args.out)?;
    let ctx = Context { args, graph };
    let reports = ctx.run(args.suite)?;

    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    for r in &reports {
        if args.verbose || r.verdict != Verdict::Pass {
            println!(
                "{:<12} {} point={:.6e} ci=[{:.6e}, {:.6e}] target={}",
                r.verdict.as_str(),
                r.name,
                r.point,
                r.ci_low,
                r.ci_high,
                r.target_bound
                    .map_or("-".to_string(), |t| format!("{t:.6e}"))
            );
        }
    }
    let (pass, fail, inconclusive) = (
        count(Verdict::Pass),
        count(Verdict::Fail),
        count(Verdict::Inconclusive),
    );
    println!("pass={pass} fail={fail} inconclusive={inconclusive}");

    let profile = ctx
        .graph
        .as_ref()
        .and_then(|g| resolve_profile(args.profile.as_deref(), g).ok());
    let manifest = ExperimentManifest::new(
        run_id(args.id.as_deref(), "check", args.seed),
        args.graph.as_ref().map_or_else(
            || format!("bipartite(n_per_side={},d={})", 2 * args.delta, args.delta),
            |p| p.display().to_string(),
        ),
        args.suite.as_str(),
        profile,
        args.trials.unwrap_or(args.suite.default_trials()),
        args.seed,
        vec![args.suite.as_str().to_string()],
    );
    let dir = write_results(&manifest, &reports, &[], &root).map_err(usage)?;
    println!("results: {}", dir.display());
    Ok(if fail == 0 { 0 } else { 1 })
}
