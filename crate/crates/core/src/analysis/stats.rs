use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundDirection {
    AtLeast,
    AtMost,
}

impl BoundDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundDirection::AtLeast => "at_least",
            BoundDirection::AtMost => "at_most",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "at_least" => Some(BoundDirection::AtLeast),
            "at_most" => Some(BoundDirection::AtMost),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pass" => Some(Verdict::Pass),
            "fail" => Some(Verdict::Fail),
            "inconclusive" => Some(Verdict::Inconclusive),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Two-sided Wilson score interval for `successes` out of `trials` at the
/// given confidence. The ends are clamped to exactly 0 and 1 when all trials
/// fail or succeed. With no trials the interval is `[0, 1]`.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(successes <= trials);
    assert!(confidence > 0.0 && confidence < 1.0);
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = Normal::new(0.0, 1.0)
        .expect("standard normal")
        .inverse_cdf(1.0 - (1.0 - confidence) / 2.0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if successes == 0 {
        0.0
    } else {
        (centre - half).max(0.0).min(p)
    };
    let high = if successes == trials {
        1.0
    } else {
        (centre + half).min(1.0).max(p)
    };
    (low, high)
}

/// A probability estimate with its Wilson interval and, optionally, the
/// bound it is checked against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub name: String,
    pub trials: u64,
    pub successes: u64,
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence: f64,
    pub target_bound: Option<f64>,
    pub bound_direction: BoundDirection,
    pub verdict: Verdict,
}

impl EstimateReport {
    /// Report from counts. Without a target the verdict is `Inconclusive`.
    pub fn from_counts(
        name: impl Into<String>,
        successes: u64,
        trials: u64,
        confidence: f64,
        target_bound: Option<f64>,
        bound_direction: BoundDirection,
    ) -> Self {
        let (ci_low, ci_high) = wilson_interval(successes, trials, confidence);
        let point = if trials == 0 {
            0.0
        } else {
            successes as f64 / trials as f64
        };
        let mut report = Self {
            name: name.into(),
            trials,
            successes,
            point,
            ci_low,
            ci_high,
            confidence,
            target_bound,
            bound_direction,
            verdict: Verdict::Inconclusive,
        };
        report.verdict = report.judge();
        report
    }

    /// Exact outcome of a deterministic check: `successes` of `trials`
    /// instances satisfied it, the interval is the point itself and the
    /// target is "all of them".
    pub fn deterministic(name: impl Into<String>, successes: u64, trials: u64) -> Self {
        let point = if trials == 0 {
            1.0
        } else {
            successes as f64 / trials as f64
        };
        let mut report = Self {
            name: name.into(),
            trials,
            successes,
            point,
            ci_low: point,
            ci_high: point,
            confidence: 1.0,
            target_bound: Some(1.0),
            bound_direction: BoundDirection::AtLeast,
            verdict: Verdict::Inconclusive,
        };
        report.verdict = report.judge();
        report
    }

    /// Overrides the verdict with `Inconclusive`, used when too few
    /// conditioning events were seen.
    pub fn inconclusive(mut self) -> Self {
        self.verdict = Verdict::Inconclusive;
        self
    }

    pub fn ci_contains(&self, x: f64) -> bool {
        self.ci_low <= x && x <= self.ci_high
    }

    fn judge(&self) -> Verdict {
        let Some(target) = self.target_bound else {
            return Verdict::Inconclusive;
        };
        match self.bound_direction {
            BoundDirection::AtLeast if self.ci_low >= target => Verdict::Pass,
            BoundDirection::AtLeast if self.ci_high < target => Verdict::Fail,
            BoundDirection::AtMost if self.ci_high <= target => Verdict::Pass,
            BoundDirection::AtMost if self.ci_low > target => Verdict::Fail,
            _ => Verdict::Inconclusive,
        }
    }
}
