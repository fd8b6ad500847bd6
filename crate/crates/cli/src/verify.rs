use std::path::{Path, PathBuf};

use anyhow::anyhow;
use clap::Args;
use localmis::graph::{verify_independent, verify_maximal_independent};
use localmis::NodeSet;

use crate::common::{failed, load_graph, usage, CmdResult, Failure};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// File of whitespace-separated node ids, such as the `mis.txt` of a run.
    #[arg(long)]
    pub set: PathBuf,
}

fn read_set(path: &Path, n: usize) -> Result<NodeSet, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(anyhow!("cannot read {}: {e}", path.display())))?;
    let mut set = NodeSet::empty(n);
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split_whitespace() {
            let v: usize =
                tok.parse().ok().filter(|&v| v < n).ok_or_else(|| {
                    usage(anyhow!("{}:{}: bad node `{tok}`", path.display(), i + 1))
                })?;
            set.insert(v);
        }
    }
    Ok(set)
}

pub fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let g = load_graph(&args.graph)?;
    let set = read_set(&args.set, g.node_count())?;
    let independent = verify_independent(&g, &set).map_err(failed)?;
    let maximal = verify_maximal_independent(&g, &set).map_err(failed)?;
    let yes = |b: bool| if b { "yes" } else { "no" };
    println!(
        "size={} independent={} maximal={}",
        set.len(),
        yes(independent),
        yes(maximal)
    );
    Ok(if maximal { 0 } else { 1 })
}
