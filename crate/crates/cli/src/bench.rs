use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::anyhow;
use clap::Args;
use localmis::graph::girth;
use localmis::mis::RunOptions;
use rayon::prelude::*;

use crate::common::{failed, girth_label, resolve_profile, usage, CmdResult, Failure};
use crate::gen::{generate, Family};
use crate::run::Pipeline;

pub const BENCH_HEADER: &str = "family,n,d,girth,algo,seed,rounds,mis_size";

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Node count (per side for bipartite).
    #[arg(long)]
    pub n: usize,
    /// Comma-separated degrees; ignored for trees.
    #[arg(long, default_value = "")]
    pub d: String,
    /// Minimum girth for the regular family.
    #[arg(long, default_value_t = 5)]
    pub min_girth: usize,
    /// Comma-separated algorithm names (including `tree`).
    #[arg(long, default_value = "luby,full")]
    pub algos: String,
    /// Seeds per cell: base, base+1, ...
    #[arg(long, default_value_t = 3)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub profile: Option<String>,
    /// CSV destination; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn parse_list<T>(s: &str, item: impl Fn(&str) -> Result<T, Failure>) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(item)
        .collect()
}

pub fn cmd_bench(args: &BenchArgs) -> CmdResult {
    if args.family == Family::Named {
        return Err(usage(anyhow!("bench sweeps generated families only")));
    }
    let degrees: Vec<Option<usize>> = if args.family == Family::Tree {
        vec![None]
    } else {
        parse_list(&args.d, |t| {
            t.parse()
                .map(Some)
                .map_err(|_| usage(anyhow!("bad degree `{t}`")))
        })?
    };
    let algos = parse_list(&args.algos, Pipeline::parse)?;
    if let Some(spec) = &args.profile {
        localmis::io::parse_profile_spec(spec, 1).map_err(usage)?;
    }
    let cells: Vec<(Option<usize>, u64)> = degrees
        .iter()
        .flat_map(|&d| (0..args.seeds).map(move |s| (d, args.seed + s)))
        .collect();
    let rows: Vec<String> = cells
        .par_iter()
        .map(|&(d, seed)| -> Result<String, Failure> {
            let g = generate(args.family, Some(args.n), d, args.min_girth, None, seed)?;
            let girth = girth_label(girth(&g).girth);
            let mut out = String::new();
            for algo in &algos {
                let profile = if algo.needs_profile() {
                    Some(resolve_profile(args.profile.as_deref(), &g)?)
                } else {
                    None
                };
                let (mis, trace) =
                    algo.run(&g, profile.as_ref(), seed, None, &RunOptions::default())?;
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    args.family.as_str(),
                    g.node_count(),
                    d.unwrap_or_else(|| g.max_degree()),
                    girth,
                    algo.name(),
                    seed,
                    trace.total_rounds(),
                    mis.len()
                )
                .expect("writing to a String");
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;
    let csv = format!("{BENCH_HEADER}\n{}", rows.concat());
    match &args.output {
        Some(path) => {
            std::fs::write(path, csv).map_err(failed)?;
            println!("wrote {}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(0)
}
