use std::fmt;
use std::path::{Path, PathBuf};

use localmis::graph::Girth;
use localmis::io::{parse_profile_spec, read_graph, IoError};
use localmis::{Graph, ParamProfile};

/// Profile used when a subcommand needs one and none was given.
pub const DEFAULT_PROFILE: &str = "desk:tau=0.0001,ell=1,beta=0.5,k=2,T=40";

/// A failed command: exit code 2 for usage errors, 1 for failed work.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

pub fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 2,
        error: e.into(),
    }
}

pub fn failed(e: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 1,
        error: e.into(),
    }
}

pub type CmdResult = Result<u8, Failure>;

pub fn load_graph(path: &Path) -> Result<Graph, Failure> {
    read_graph(path).map_err(|e| match e {
        IoError::Io { .. } | IoError::Parse { .. } => {
            usage(anyhow::anyhow!("cannot read graph {}: {e}", path.display()))
        }
        other => failed(other),
    })
}

/// Resolves `spec` (or [`DEFAULT_PROFILE`]) with `delta` defaulting to the
/// graph's maximum degree.
pub fn resolve_profile(spec: Option<&str>, g: &Graph) -> Result<ParamProfile, Failure> {
    let spec = spec.unwrap_or(DEFAULT_PROFILE);
    parse_profile_spec(spec, g.max_degree().max(1)).map_err(usage)
}

pub fn girth_label(g: Girth) -> String {
    match g {
        Girth::Finite(k) => k.to_string(),
        Girth::Infinite => "infinite".into(),
    }
}

/// Creates the results root if needed.
pub fn results_root(dir: &Path) -> Result<PathBuf, Failure> {
    std::fs::create_dir_all(dir)
        .map_err(|e| usage(anyhow::anyhow!("cannot create {}: {e}", dir.display())))?;
    Ok(dir.to_path_buf())
}

/// `<command>-s<seed>-<unix nanos>` unless an id was given.
pub fn run_id(given: Option<&str>, command: &str, seed: u64) -> String {
    given.map(str::to_string).unwrap_or_else(|| {
        let now = unix_nanos();
        format!("{command}-s{seed}-{now}")
    })
}

fn unix_nanos() -> String {
    let d = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .unwrap_or_default();
    format!("{}{:09}", d.as_secs(), d.subsec_nanos())
}
