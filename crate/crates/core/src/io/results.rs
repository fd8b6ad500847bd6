use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::IoError;
use crate::analysis::{BoundDirection, EstimateReport, Verdict};
use crate::mis::ParamProfile;
use crate::sim::RunTrace;

pub const SCHEMA_VERSION: u32 = 1;

pub const REPORTS_CSV_HEADER: [&str; 10] = [
    "name",
    "trials",
    "successes",
    "point",
    "ci_low",
    "ci_high",
    "confidence",
    "target",
    "direction",
    "verdict",
];

/// What was run, with which inputs. Stored as `manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub schema_version: u32,
    /// Directory name of the run; unique within a results root.
    pub id: String,
    /// Generator call (`regular(n=500,d=3,girth=7,seed=1)`) or file path.
    pub graph_spec: String,
    pub algo: String,
    pub profile: Option<ParamProfile>,
    pub trials: u64,
    pub seed: u64,
    pub checks: Vec<String>,
    pub created_at: DateTime<Utc>,
}

impl ExperimentManifest {
    pub fn new(
        id: impl Into<String>,
        graph_spec: impl Into<String>,
        algo: impl Into<String>,
        profile: Option<ParamProfile>,
        trials: u64,
        seed: u64,
        checks: Vec<String>,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            id: id.into(),
            graph_spec: graph_spec.into(),
            algo: algo.into(),
            profile,
            trials,
            seed,
            checks,
            created_at: Utc::now(),
        }
    }
}

#[derive(Serialize)]
struct ReportsJson<'a> {
    schema_version: u32,
    reports: &'a [EstimateReport],
}

fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id != "."
        && id != ".."
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

/// Creates `dir/<manifest.id>/` holding `manifest.json`, `reports.csv`,
/// `reports.json` and, when `traces` is non-empty, `traces.jsonl`. An
/// existing run directory is never touched.
pub fn write_results(
    manifest: &ExperimentManifest,
    reports: &[EstimateReport],
    traces: &[RunTrace],
    dir: &Path,
) -> Result<PathBuf, IoError> {
    if !valid_id(&manifest.id) {
        return Err(IoError::BadId(manifest.id.clone()));
    }
    if !dir.is_dir() {
        return Err(IoError::Io {
            path: dir.to_path_buf(),
            source: std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "results root does not exist",
            ),
        });
    }
    let run = dir.join(&manifest.id);
    match std::fs::create_dir(&run) {
        Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
            return Err(IoError::RefuseOverwrite(run))
        }
        r => r.map_err(IoError::io(&run))?,
    }
    let write = |name: &str, bytes: Vec<u8>| {
        let path = run.join(name);
        std::fs::write(&path, bytes).map_err(IoError::io(path))
    };
    write("manifest.json", serde_json::to_vec_pretty(manifest)?)?;
    write("reports.csv", render_reports_csv(reports)?.into_bytes())?;
    write(
        "reports.json",
        serde_json::to_vec_pretty(&ReportsJson {
            schema_version: SCHEMA_VERSION,
            reports,
        })?,
    )?;
    if !traces.is_empty() {
        let mut lines = Vec::new();
        for t in traces {
            serde_json::to_writer(&mut lines, t)?;
            lines.push(b'\n');
        }
        write("traces.jsonl", lines)?;
    }
    Ok(run)
}

/// Header plus one row per report. Floats use the shortest representation
/// that parses back to the same value; a missing target is an empty field.
pub fn render_reports_csv(reports: &[EstimateReport]) -> Result<String, IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(REPORTS_CSV_HEADER)?;
    for r in reports {
        w.write_record([
            r.name.clone(),
            r.trials.to_string(),
            r.successes.to_string(),
            r.point.to_string(),
            r.ci_low.to_string(),
            r.ci_high.to_string(),
            r.confidence.to_string(),
            r.target_bound.map(|t| t.to_string()).unwrap_or_default(),
            r.bound_direction.as_str().to_string(),
            r.verdict.as_str().to_string(),
        ])?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn read_reports_csv(path: &Path) -> Result<Vec<EstimateReport>, IoError> {
    let text = std::fs::read_to_string(path).map_err(IoError::io(path))?;
    parse_reports_csv(&text)
}

pub fn parse_reports_csv(text: &str) -> Result<Vec<EstimateReport>, IoError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers()?.clone();
    if header.iter().ne(REPORTS_CSV_HEADER) {
        return Err(IoError::parse(1, "unexpected reports.csv header"));
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec?;
        let field = |j: usize| rec.get(j).unwrap_or("");
        fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, IoError> {
            s.parse()
                .map_err(|_| IoError::parse(line, format!("bad number `{s}`")))
        }
        out.push(EstimateReport {
            name: field(0).to_string(),
            trials: num(line, field(1))?,
            successes: num(line, field(2))?,
            point: num(line, field(3))?,
            ci_low: num(line, field(4))?,
            ci_high: num(line, field(5))?,
            confidence: num(line, field(6))?,
            target_bound: match field(7) {
                "" => None,
                s => Some(num(line, s)?),
            },
            bound_direction: BoundDirection::parse(field(8))
                .ok_or_else(|| IoError::parse(line, format!("bad direction `{}`", field(8))))?,
            verdict: Verdict::parse(field(9))
                .ok_or_else(|| IoError::parse(line, format!("bad verdict `{}`", field(9))))?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest(id: &str) -> ExperimentManifest {
        ExperimentManifest::new(
            id,
            "named(petersen)",
            "luby",
            None,
            100,
            7,
            vec!["survival".into()],
        )
    }

    fn sample_reports() -> Vec<EstimateReport> {
        vec![
            EstimateReport::from_counts(
                "a, with comma",
                40,
                100,
                0.95,
                Some(0.3),
                BoundDirection::AtLeast,
            ),
            EstimateReport::from_counts("b", 0, 1000, 0.99, None, BoundDirection::AtMost),
            EstimateReport::deterministic("c", 9, 10),
            EstimateReport::from_counts("d", 1, 3, 0.99, Some(1.0 / 3.0), BoundDirection::AtMost)
                .inconclusive(),
        ]
    }

    #[test]
    fn csv_round_trips() {
        let reports = sample_reports();
        let text = render_reports_csv(&reports).unwrap();
        assert_eq!(text.lines().count(), 1 + reports.len());
        assert_eq!(parse_reports_csv(&text).unwrap(), reports);
    }

    #[test]
    fn empty_reports_give_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let run = write_results(&manifest("empty"), &[], &[], dir.path()).unwrap();
        let csv = std::fs::read_to_string(run.join("reports.csv")).unwrap();
        assert_eq!(csv, format!("{}\n", REPORTS_CSV_HEADER.join(",")));
        let m: ExperimentManifest =
            serde_json::from_slice(&std::fs::read(run.join("manifest.json")).unwrap()).unwrap();
        assert_eq!(m, manifest("empty").clone_with_time(m.created_at));
        assert!(!run.join("traces.jsonl").exists());
    }

    #[test]
    fn rerun_refuses_overwrite() {
        let dir = tempfile::tempdir().unwrap();
        write_results(&manifest("r1"), &sample_reports(), &[], dir.path()).unwrap();
        let err = write_results(&manifest("r1"), &[], &[], dir.path()).unwrap_err();
        assert!(matches!(err, IoError::RefuseOverwrite(_)));
        let back = read_reports_csv(&dir.path().join("r1/reports.csv")).unwrap();
        assert_eq!(back, sample_reports());
    }

    #[test]
    fn traces_are_json_lines() {
        let dir = tempfile::tempdir().unwrap();
        let traces = vec![
            RunTrace::new("luby", 1, 3, crate::sim::TraceLevel::Summary),
            RunTrace::new("luby", 2, 3, crate::sim::TraceLevel::Summary),
        ];
        let run = write_results(&manifest("t"), &[], &traces, dir.path()).unwrap();
        let text = std::fs::read_to_string(run.join("traces.jsonl")).unwrap();
        let back: Vec<RunTrace> = text
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(back.len(), 2);
        assert_eq!(back[1].seed, 2);
    }

    #[test]
    fn ids_are_plain_names() {
        let dir = tempfile::tempdir().unwrap();
        for bad in ["", "..", "a/b", "x y"] {
            assert!(matches!(
                write_results(&manifest(bad), &[], &[], dir.path()),
                Err(IoError::BadId(_))
            ));
        }
    }

    impl ExperimentManifest {
        fn clone_with_time(mut self, t: DateTime<Utc>) -> Self {
            self.created_at = t;
            self
        }
    }
}
