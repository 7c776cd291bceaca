use serde::Serialize;

use super::trials::TrialStats;
use crate::decoder::DecoderSpec;
use crate::problem::DecodingProblem;

/// Runs with fewer failures than this are flagged as unreliable.
pub const MIN_RELIABLE_FAILURES: usize = 5;

/// Formats `mean ± std` in scientific notation with the uncertainty to one
/// significant figure, e.g. `(3.7±0.2)×10^-2`.
pub fn format_pm(mean: f64, std: f64) -> String {
    if !mean.is_finite() || !std.is_finite() {
        return format!("{mean}±{std}");
    }
    if mean == 0.0 && std == 0.0 {
        return "0".to_string();
    }
    let lead = if mean != 0.0 { mean.abs() } else { std };
    let mut exp = lead.log10().floor() as i32;
    let s_exp = if std > 0.0 {
        let s_exp = std.log10().floor() as i32;
        // Rounding to one figure can carry into the next decade.
        if (std / 10f64.powi(s_exp)).round() >= 10.0 {
            s_exp + 1
        } else {
            s_exp
        }
    } else {
        exp - 1
    };
    let mut decimals = (exp - s_exp).max(0) as usize;
    let mut mantissa = mean / 10f64.powi(exp);
    if round_to(mantissa.abs(), decimals) >= 10.0 {
        exp += 1;
        decimals = (exp - s_exp).max(0) as usize;
        mantissa = mean / 10f64.powi(exp);
    }
    let spread = std / 10f64.powi(exp);
    format!("({mantissa:.decimals$}±{spread:.decimals$})×10^{exp}")
}

fn round_to(x: f64, decimals: usize) -> f64 {
    let f = 10f64.powi(decimals as i32);
    (x * f).round() / f
}

/// One row of a results table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub problem: Option<String>,
    pub num_checks: usize,
    pub num_errors: usize,
    pub num_logicals: usize,
    /// Physical error rate the problem was generated at, when known.
    pub noise: Option<f64>,
    pub decoder: String,
    pub kappa: Option<f64>,
    pub budget: Option<usize>,
    pub seed: Option<u64>,
    pub fails_over_shots: String,
    pub p_fail: f64,
    pub p_fail_std: f64,
    pub p_fail_text: String,
    pub time_per_round: f64,
    pub time_per_round_err: f64,
    pub time_text: String,
    pub note: Option<String>,
    pub stats: TrialStats,
}

impl Report {
    pub fn new(problem: &DecodingProblem, spec: &DecoderSpec, stats: &TrialStats) -> Self {
        let (kappa, budget) = match spec {
            DecoderSpec::Ac(c) => match c.budget {
                crate::ac::Budget::Fraction(k) => (Some(k), Some(c.budget.columns(problem.num_errors()))),
                crate::ac::Budget::Columns(k) => (None, Some(k.min(problem.num_errors()))),
            },
            _ => (None, None),
        };
        Report {
            problem: problem.name.clone(),
            num_checks: problem.num_checks(),
            num_errors: problem.num_errors(),
            num_logicals: problem.num_logicals(),
            noise: None,
            decoder: spec.label(),
            kappa,
            budget,
            seed: None,
            fails_over_shots: format!("{}/{}", stats.failures, stats.shots),
            p_fail: stats.p_fail,
            p_fail_std: stats.p_fail_std,
            p_fail_text: format_pm(stats.p_fail, stats.p_fail_std),
            time_per_round: stats.time_per_round,
            time_per_round_err: stats.time_per_round_err,
            time_text: format_pm(stats.time_per_round, stats.time_per_round_err),
            note: reliability_note(stats),
            stats: stats.clone(),
        }
    }

    pub fn with_noise(mut self, p: f64) -> Self {
        self.noise = Some(p);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Caveat for runs with too few failures to estimate `p_fail` well.
pub fn reliability_note(stats: &TrialStats) -> Option<String> {
    if stats.shots == 0 {
        return Some("no shots".into());
    }
    if stats.failures == 0 {
        // Rule of three: 95% upper bound on the per-shot rate is 3/N.
        let bound = 3.0 / (stats.rounds as f64 * stats.shots as f64);
        return Some(format!("no failures; p_fail < {bound:.3e} at 95% confidence"));
    }
    if stats.failures < MIN_RELIABLE_FAILURES {
        return Some(format!(
            "only {} failure(s); fewer than {MIN_RELIABLE_FAILURES}, estimate unreliable",
            stats.failures
        ));
    }
    None
}
