use std::path::Path;

use super::IoError;
use crate::mis::{ParamProfile, ProfileMode};

/// `key = value` lines. `k` is the requested interval count and
/// `k_effective` the count after truncation; the latter is informational
/// and checked on read.
pub fn render_profile(p: &ParamProfile) -> String {
    format!(
        "mode = {}\ndelta = {}\ntau = {}\nell = {}\nbeta = {}\nk = {}\nk_effective = {}\nT = {}\n",
        p.mode.as_str(),
        p.delta,
        p.tau,
        p.ell,
        p.beta,
        p.k_requested,
        p.k,
        p.t_iterations
    )
}

pub fn write_profile(p: &ParamProfile, path: &Path) -> Result<(), IoError> {
    std::fs::write(path, render_profile(p)).map_err(IoError::io(path))
}

pub fn read_profile(path: &Path) -> Result<ParamProfile, IoError> {
    let text = std::fs::read_to_string(path).map_err(IoError::io(path))?;
    parse_profile(&text)
}

/// Parses a one-line profile such as `desk:tau=0.0001,ell=1,beta=0.5,k=2,T=40`
/// or `paper:delta=4096`. The mode is `desk`, `custom` or `paper`; `delta`
/// may be omitted and then defaults to `default_delta`.
pub fn parse_profile_spec(spec: &str, default_delta: usize) -> Result<ParamProfile, IoError> {
    let bad = |msg: String| IoError::BadProfileSpec(format!("`{spec}`: {msg}"));
    let (mode, rest) = spec.trim().split_once(':').unwrap_or((spec.trim(), ""));
    let mut text = format!("mode = {mode}\n");
    let mut has_delta = false;
    for pair in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| bad(format!("expected key=value, got `{pair}`")))?;
        if !matches!(k.trim(), "delta" | "tau" | "ell" | "beta" | "k" | "T") {
            return Err(bad(format!("unknown key `{}`", k.trim())));
        }
        has_delta |= k.trim() == "delta";
        text.push_str(&format!("{} = {}\n", k.trim(), v.trim()));
    }
    if !has_delta {
        text.push_str(&format!("delta = {default_delta}\n"));
    }
    parse_profile(&text).map_err(|e| match e {
        IoError::Parse { message, .. } => bad(message),
        other => other,
    })
}

#[derive(Default)]
struct Fields {
    mode: Option<ProfileMode>,
    delta: Option<usize>,
    tau: Option<f64>,
    ell: Option<f64>,
    beta: Option<f64>,
    k: Option<usize>,
    k_effective: Option<(usize, usize)>,
    t: Option<u64>,
}

fn value<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, IoError> {
    v.parse()
        .map_err(|_| IoError::parse(line, format!("bad value `{v}` for `{key}`")))
}

pub fn parse_profile(text: &str) -> Result<ParamProfile, IoError> {
    let mut f = Fields::default();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (key, v) = l
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| IoError::parse(line, "expected `key = value`"))?;
        match key {
            "mode" => {
                f.mode = Some(match v {
                    "paper" => ProfileMode::PaperDefault,
                    "desk" => ProfileMode::DeskScale,
                    "custom" => ProfileMode::Custom,
                    _ => return Err(IoError::parse(line, format!("unknown mode `{v}`"))),
                })
            }
            "delta" => f.delta = Some(value(line, key, v)?),
            "tau" => f.tau = Some(value(line, key, v)?),
            "ell" => f.ell = Some(value(line, key, v)?),
            "beta" => f.beta = Some(value(line, key, v)?),
            "k" => f.k = Some(value(line, key, v)?),
            "k_effective" => f.k_effective = Some((line, value(line, key, v)?)),
            "T" => f.t = Some(value(line, key, v)?),
            _ => return Err(IoError::parse(line, format!("unknown key `{key}`"))),
        }
    }
    let missing = |k: &str| IoError::parse(last.max(1), format!("missing `{k}`"));
    let mode = f.mode.ok_or_else(|| missing("mode"))?;
    let delta = f.delta.ok_or_else(|| missing("delta"))?;
    let profile = if mode == ProfileMode::PaperDefault {
        ParamProfile::paper(delta)?
    } else {
        let tau = f.tau.ok_or_else(|| missing("tau"))?;
        let ell = f.ell.ok_or_else(|| missing("ell"))?;
        let beta = f.beta.ok_or_else(|| missing("beta"))?;
        let k = f.k.ok_or_else(|| missing("k"))?;
        let t = f.t.ok_or_else(|| missing("T"))?;
        if mode == ProfileMode::DeskScale {
            ParamProfile::desk(delta, tau, ell, beta, k, t)?
        } else {
            ParamProfile::custom(delta, tau, ell, beta, k, t)?
        }
    };
    if let Some((line, k_eff)) = f.k_effective {
        if k_eff != profile.k {
            return Err(IoError::parse(
                line,
                format!("k_effective = {k_eff} but the constants give {}", profile.k),
            ));
        }
    }
    Ok(profile)
}
