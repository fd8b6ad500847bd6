use serde::{Deserialize, Serialize};

use super::MisError;

/// Iterated base-2 logarithm: how many applications of `log2` bring `x` to at most 1.
pub fn log_star(x: f64) -> u32 {
    let mut x = x;
    let mut count = 0;
    while x > 1.0 {
        x = x.log2();
        count += 1;
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileMode {
    /// Constants evaluated from the asymptotic formulas in terms of `delta`.
    PaperDefault,
    /// Supplied base constants, same recurrences, `k` truncated to keep
    /// `ell * a_k * sqrt(tau) <= 1/2`.
    DeskScale,
    /// Supplied base constants with `k` taken as given.
    Custom,
}

impl ProfileMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ProfileMode::PaperDefault => "paper",
            ProfileMode::DeskScale => "desk",
            ProfileMode::Custom => "custom",
        }
    }
}

/// Constant schedule shared by the weighted inclusion step and the
/// pre-shattering driver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamProfile {
    pub mode: ProfileMode,
    /// Global maximum degree, known to every node.
    pub delta: usize,
    /// Cap on the desire weights.
    pub tau: f64,
    /// Weight update factor and neighbourhood-desire threshold.
    pub ell: f64,
    pub beta: f64,
    /// Effective number of rank intervals.
    pub k: usize,
    /// Interval count before truncation.
    pub k_requested: usize,
    /// `a_1 ..= a_{k+1}` with `a_1 = 10 beta`, `a_{i+1} = exp(ell a_i) / (16 ell)`.
    pub a_seq: Vec<f64>,
    /// Pre-shattering iteration count (`u64::MAX` when the formula diverges).
    pub t_iterations: u64,
}

impl ParamProfile {
    /// Constants from the asymptotic formulas. At every representable `delta`
    /// the interval count evaluates to 0; such profiles are returned and
    /// rejected later by the algorithms that need `k >= 1`.
    pub fn paper(delta: usize) -> Result<Self, MisError> {
        let lll = (delta as f64).log2().log2().log2();
        if !lll.is_finite() || lll <= 1.0 {
            return Err(MisError::DegenerateProfile { delta });
        }
        let tau = 1.0 / lll;
        let ls = f64::from(log_star(1.0 / tau));
        let ell = ls.powf(0.01);
        let beta = ls / ell;
        let k = (ls / 100.0).floor() as usize;
        let a_seq = a_sequence(beta, ell, k);
        let t = 1e6 * (delta as f64).log2() / ell.log2();
        let t_iterations = if t.is_finite() {
            t.ceil() as u64
        } else {
            u64::MAX
        };
        Ok(Self {
            mode: ProfileMode::PaperDefault,
            delta,
            tau,
            ell,
            beta,
            k,
            k_requested: k,
            a_seq,
            t_iterations,
        })
    }

    /// Desk-scale constants. `k` is truncated to the largest value with
    /// `ell * a_k * sqrt(tau) <= 1/2`, but never below 1.
    pub fn desk(
        delta: usize,
        tau: f64,
        ell: f64,
        beta: f64,
        k: usize,
        t_iterations: u64,
    ) -> Result<Self, MisError> {
        validate_constants(delta, tau, ell, beta, k)?;
        let full = a_sequence(beta, ell, k);
        let limit = 0.5 / (ell * tau.sqrt());
        let kept = (1..=k).take_while(|&i| full[i - 1] <= limit).count().max(1);
        let a_seq = full[..=kept].to_vec();
        check_increasing(&a_seq)?;
        Ok(Self {
            mode: ProfileMode::DeskScale,
            delta,
            tau,
            ell,
            beta,
            k: kept,
            k_requested: k,
            a_seq,
            t_iterations,
        })
    }

    /// Like [`ParamProfile::desk`] without truncating `k`.
    pub fn custom(
        delta: usize,
        tau: f64,
        ell: f64,
        beta: f64,
        k: usize,
        t_iterations: u64,
    ) -> Result<Self, MisError> {
        validate_constants(delta, tau, ell, beta, k)?;
        let a_seq = a_sequence(beta, ell, k);
        check_increasing(&a_seq)?;
        Ok(Self {
            mode: ProfileMode::Custom,
            delta,
            tau,
            ell,
            beta,
            k,
            k_requested: k,
            a_seq,
            t_iterations,
        })
    }

    pub fn is_degenerate(&self) -> bool {
        self.k == 0
    }

    /// Whether `ell * a_1 * sqrt(tau) <= 1/2`; false means `k` was kept at 1
    /// only because the floor applies.
    pub fn first_interval_feasible(&self) -> bool {
        self.ell * self.a_seq[0] * self.tau.sqrt() <= 0.5
    }

    pub fn truncated(&self) -> bool {
        self.k < self.k_requested
    }

    /// `a_i` for `1 <= i <= k + 1`.
    pub fn a(&self, i: usize) -> f64 {
        self.a_seq[i - 1]
    }

    /// `log_ell(delta)`; infinite when `ell == 1`.
    pub fn log_ell_delta(&self) -> f64 {
        if self.ell == 1.0 {
            f64::INFINITY
        } else {
            (self.delta as f64).ln() / self.ell.ln()
        }
    }

    pub(crate) fn require_intervals(&self) -> Result<(), MisError> {
        if self.k == 0 {
            return Err(MisError::DegenerateK);
        }
        Ok(())
    }
}

fn validate_constants(
    delta: usize,
    tau: f64,
    ell: f64,
    beta: f64,
    k: usize,
) -> Result<(), MisError> {
    let bad = |msg: String| Err(MisError::InvalidConstants(msg));
    if delta == 0 {
        return bad("delta must be positive".into());
    }
    if !(tau > 0.0 && tau <= 1.0) {
        return bad(format!("tau must lie in (0, 1], got {tau}"));
    }
    if !(ell >= 1.0 && ell.is_finite()) {
        return bad(format!("ell must be a finite value >= 1, got {ell}"));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return bad(format!("beta must be positive, got {beta}"));
    }
    if k == 0 {
        return bad("k must be at least 1".into());
    }
    // The low-desire branch needs 1 - beta*sqrt(tau) >= 1/100.
    if beta * tau.sqrt() > 0.99 {
        return bad(format!(
            "beta*sqrt(tau) = {} exceeds 99/100",
            beta * tau.sqrt()
        ));
    }
    Ok(())
}

fn check_increasing(a_seq: &[f64]) -> Result<(), MisError> {
    if let Some(w) = a_seq
        .windows(2)
        .find(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
    {
        return Err(MisError::InvalidConstants(format!(
            "interval sequence is not increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// `a_1 = 10 beta`, `a_{i+1} = exp(ell a_i) / (16 ell)`, for `i = 1..=k`.
fn a_sequence(beta: f64, ell: f64, k: usize) -> Vec<f64> {
    let mut seq = Vec::with_capacity(k + 1);
    seq.push(10.0 * beta);
    for i in 0..k {
        seq.push(next_a(seq[i], ell));
    }
    seq
}

pub(crate) fn next_a(a: f64, ell: f64) -> f64 {
    (ell * a).exp() / (16.0 * ell)
}

/// Rank intervals of the two-round procedure for regular graphs:
/// `I_i = (b_i, b_{i+1}]`, `J_i = (b_i, 1]` with `b_i = a_i / delta`,
/// `a_1 = 5` and `a_{i+1} = exp(a_i - 3)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularIntervals {
    pub delta: usize,
    pub k: usize,
    pub k_requested: usize,
    /// `a_1 ..= a_{k+1}`.
    pub a_seq: Vec<f64>,
    /// `b_1 ..= b_{k+1}`.
    pub b_seq: Vec<f64>,
}

impl RegularIntervals {
    /// `(b_i, b_{i+1})` for `i = 1..=k`.
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        self.b_seq.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Whether every `b_i` with `i <= k` is at most 1/100.
    pub fn contained(&self) -> bool {
        self.b_seq[..self.k].iter().all(|&b| b <= 0.01)
    }

    /// Interval index `i` with `r` in `I_i`, if any.
    pub fn interval_of(&self, r: f64) -> Option<usize> {
        (1..=self.k).find(|&i| r > self.b_seq[i - 1] && r <= self.b_seq[i])
    }

    /// Lower end of `J_i`.
    pub fn exclusion_floor(&self, i: usize) -> f64 {
        self.b_seq[i - 1]
    }
}

/// Intervals for the two-round regular-graph procedure.
///
/// Without an override, `k = floor(log*(delta) / 10)` and `delta >= 1000`
/// is required. Either way `k` is cut to the largest value with
/// `b_k <= 1/100`; an explicit override is never cut below 1.
pub fn intervals_regular(
    delta: usize,
    k_override: Option<usize>,
) -> Result<RegularIntervals, MisError> {
    let k_requested = match k_override {
        None => {
            if delta < 1000 {
                return Err(MisError::DeltaTooSmall {
                    delta,
                    minimum: 1000,
                });
            }
            (log_star(delta as f64) / 10) as usize
        }
        Some(k) => {
            if delta <= 5 {
                return Err(MisError::DeltaTooSmall { delta, minimum: 6 });
            }
            k
        }
    };
    if k_requested == 0 {
        return Err(MisError::DegenerateK);
    }
    let mut a_seq: Vec<f64> = vec![5.0];
    for i in 0..k_requested {
        a_seq.push((a_seq[i] - 3.0).exp());
    }
    let d = delta as f64;
    let mut kept = (1..=k_requested)
        .take_while(|&i| a_seq[i - 1] / d <= 0.01)
        .count();
    if kept == 0 {
        if k_override.is_none() {
            return Err(MisError::DegenerateK);
        }
        kept = 1;
    }
    a_seq.truncate(kept + 1);
    let b_seq = a_seq.iter().map(|a| a / d).collect();
    Ok(RegularIntervals {
        delta,
        k: kept,
        k_requested,
        a_seq,
        b_seq,
    })
}
