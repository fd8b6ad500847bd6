use std::path::PathBuf;

use anyhow::anyhow;
use clap::{Args, ValueEnum};
use localmis::graph::{
    generate_bipartite_regular, generate_regular_girth, generate_tree, girth, load_named,
};
use localmis::io::write_graph;
use localmis::{Graph, GraphError};

use crate::common::{failed, girth_label, usage, CmdResult, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Random d-regular graph with girth at least --min-girth.
    Regular,
    /// Random d-regular bipartite graph with --n nodes per side.
    Bipartite,
    /// Uniform random labelled tree.
    Tree,
    /// Catalog fixture given by --name.
    Named,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Regular => "regular",
            Family::Bipartite => "bipartite",
            Family::Tree => "tree",
            Family::Named => "named",
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub min_girth: usize,
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: PathBuf,
}

/// Builds a graph from generator parameters. Missing parameters are usage
/// errors, infeasible ones are failures.
pub fn generate(
    family: Family,
    n: Option<usize>,
    d: Option<usize>,
    min_girth: usize,
    name: Option<&str>,
    seed: u64,
) -> Result<Graph, Failure> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| usage(anyhow!("--family {} needs --{flag}", family.as_str())))
    };
    let built = match family {
        Family::Regular => generate_regular_girth(need(n, "n")?, need(d, "d")?, min_girth, seed),
        Family::Bipartite => generate_bipartite_regular(need(n, "n")?, need(d, "d")?, seed),
        Family::Tree => generate_tree(need(n, "n")?, seed),
        Family::Named => {
            let name = name.ok_or_else(|| usage(anyhow!("--family named needs --name")))?;
            load_named(name)
        }
    };
    built.map_err(|e| match e {
        GraphError::UnknownName(_) | GraphError::BadArity { .. } => usage(e),
        other => failed(other),
    })
}

pub fn cmd_gen(args: &GenArgs) -> CmdResult {
    let g = generate(
        args.family,
        args.n,
        args.d,
        args.min_girth,
        args.name.as_deref(),
        args.seed,
    )?;
    write_graph(&g, &args.output).map_err(usage)?;
    println!(
        "n={} m={} delta={} girth={}",
        g.node_count(),
        g.edge_count(),
        g.max_degree(),
        girth_label(girth(&g).girth)
    );
    println!("wrote {}", args.output.display());
    Ok(0)
}
