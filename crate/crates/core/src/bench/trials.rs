use std::time::Instant;

use serde::Serialize;

use super::sample::sample_indexed;
use crate::decoder::{Decoder, DecoderSpec};
use crate::error::{Error, Result};
use crate::problem::DecodingProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TrialConfig {
    pub shots: usize,
    pub seed: u64,
    /// Syndrome extraction rounds covered by one shot.
    pub rounds: usize,
}

impl TrialConfig {
    pub fn new(shots: usize, seed: u64) -> Self {
        TrialConfig { shots, seed, rounds: 1 }
    }

    pub fn with_rounds(mut self, rounds: usize) -> Self {
        self.rounds = rounds;
        self
    }
}

/// What happened on one shot.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ShotOutcome {
    /// Predicted logical effect differed from the true one in any bit, or
    /// the decoder gave up.
    pub failed: bool,
    pub decoder_error: bool,
    /// Seconds spent inside the decode call.
    pub seconds: f64,
    pub bp_converged: Option<bool>,
    pub clusters: usize,
    pub ambiguous_clusters: usize,
    pub candidates: usize,
    pub largest_cluster: usize,
}

/// Decodes shot `index` with `decoder`.
pub fn run_shot(problem: &DecodingProblem, decoder: &mut dyn Decoder, seed: u64, index: u64) -> ShotOutcome {
    let shot = sample_indexed(problem, seed, index);
    let start = Instant::now();
    let result = decoder.decode(&shot.syndrome);
    let seconds = start.elapsed().as_secs_f64();
    match result {
        Ok(r) => {
            let d = &r.diagnostics;
            ShotOutcome {
                failed: r.logical != shot.logical,
                decoder_error: false,
                seconds,
                bp_converged: d.bp_converged,
                clusters: d.clusters,
                ambiguous_clusters: d.ambiguous_clusters,
                candidates: d.candidates,
                largest_cluster: d.cluster_sizes.iter().map(|s| s.1).max().unwrap_or(0),
            }
        }
        Err(e) => ShotOutcome {
            failed: true,
            decoder_error: true,
            seconds,
            bp_converged: matches!(e, Error::NotConverged { .. }).then_some(false),
            ..ShotOutcome::default()
        },
    }
}

fn check(config: &TrialConfig) -> Result<()> {
    if config.rounds == 0 {
        return Err(Error::InvalidInput("rounds must be at least 1".into()));
    }
    Ok(())
}

/// Per-shot outcomes in shot order, decoding on the calling thread.
pub fn collect_outcomes_sequential(
    problem: &DecodingProblem,
    spec: &DecoderSpec,
    config: &TrialConfig,
) -> Result<Vec<ShotOutcome>> {
    check(config)?;
    let mut decoder = spec.build(problem)?;
    Ok((0..config.shots as u64)
        .map(|i| run_shot(problem, decoder.as_mut(), config.seed, i))
        .collect())
}

/// Per-shot outcomes in shot order, decoding across the rayon pool with one
/// decoder per worker. Identical to the sequential version apart from
/// timings.
#[cfg(feature = "parallel")]
pub fn collect_outcomes_parallel(
    problem: &DecodingProblem,
    spec: &DecoderSpec,
    config: &TrialConfig,
) -> Result<Vec<ShotOutcome>> {
    use rayon::prelude::*;

    check(config)?;
    // Fail early on bad parameters; workers then build infallibly.
    drop(spec.build(problem)?);
    Ok((0..config.shots as u64)
        .into_par_iter()
        .map_init(
            || spec.build(problem).expect("validated above"),
            |decoder, i| run_shot(problem, decoder.as_mut(), config.seed, i),
        )
        .collect())
}

/// Per-shot outcomes, in parallel when the `parallel` feature is enabled.
pub fn collect_outcomes(problem: &DecodingProblem, spec: &DecoderSpec, config: &TrialConfig) -> Result<Vec<ShotOutcome>> {
    #[cfg(feature = "parallel")]
    {
        collect_outcomes_parallel(problem, spec, config)
    }
    #[cfg(not(feature = "parallel"))]
    {
        collect_outcomes_sequential(problem, spec, config)
    }
}

pub fn run_trials(problem: &DecodingProblem, spec: &DecoderSpec, config: &TrialConfig) -> Result<TrialStats> {
    Ok(TrialStats::from_outcomes(&collect_outcomes(problem, spec, config)?, config.rounds))
}

pub fn run_trials_sequential(problem: &DecodingProblem, spec: &DecoderSpec, config: &TrialConfig) -> Result<TrialStats> {
    Ok(TrialStats::from_outcomes(
        &collect_outcomes_sequential(problem, spec, config)?,
        config.rounds,
    ))
}

/// Aggregate results of a run.
///
/// `p_fail = failures / (rounds * shots)` with the binomial standard
/// deviation `sqrt(shots * q * (1 - q)) / (rounds * shots)`, `q` the per-shot
/// failure fraction. Decode time per round is the mean per-shot time over
/// `rounds`, with error `std / (rounds * sqrt(shots))`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TrialStats {
    pub shots: usize,
    pub failures: usize,
    pub decoder_errors: usize,
    pub rounds: usize,
    pub p_fail: f64,
    pub p_fail_std: f64,
    pub time_mean: f64,
    pub time_std: f64,
    pub time_per_round: f64,
    pub time_per_round_err: f64,
    pub bp_converged: usize,
    pub total_clusters: usize,
    pub ambiguous_clusters: usize,
    pub total_candidates: usize,
    pub largest_cluster: usize,
}

impl TrialStats {
    pub fn from_outcomes(outcomes: &[ShotOutcome], rounds: usize) -> Self {
        let shots = outcomes.len();
        let failures = outcomes.iter().filter(|o| o.failed).count();
        let mut stats = TrialStats::from_tallies(shots, failures, rounds);
        stats.decoder_errors = outcomes.iter().filter(|o| o.decoder_error).count();
        if shots > 0 {
            let n = shots as f64;
            let mean = outcomes.iter().map(|o| o.seconds).sum::<f64>() / n;
            let var = if shots > 1 {
                outcomes.iter().map(|o| (o.seconds - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            stats.time_mean = mean;
            stats.time_std = var.sqrt();
            stats.time_per_round = mean / rounds as f64;
            stats.time_per_round_err = stats.time_std / (rounds as f64 * n.sqrt());
        }
        for o in outcomes {
            stats.bp_converged += (o.bp_converged == Some(true)) as usize;
            stats.total_clusters += o.clusters;
            stats.ambiguous_clusters += o.ambiguous_clusters;
            stats.total_candidates += o.candidates;
            stats.largest_cluster = stats.largest_cluster.max(o.largest_cluster);
        }
        stats
    }

    /// Failure statistics from bare counts; timing fields stay zero.
    pub fn from_tallies(shots: usize, failures: usize, rounds: usize) -> Self {
        let (p_fail, p_fail_std) = failure_rate(shots, failures, rounds);
        TrialStats {
            shots,
            failures,
            rounds,
            p_fail,
            p_fail_std,
            ..TrialStats::default()
        }
    }

    /// Statistics with the wall-clock fields cleared, for comparing runs.
    pub fn without_timings(&self) -> Self {
        TrialStats {
            time_mean: 0.0,
            time_std: 0.0,
            time_per_round: 0.0,
            time_per_round_err: 0.0,
            ..self.clone()
        }
    }
}

/// Per-round failure rate and its binomial standard deviation.
pub fn failure_rate(shots: usize, failures: usize, rounds: usize) -> (f64, f64) {
    if shots == 0 {
        return (0.0, 0.0);
    }
    let n = shots as f64;
    let q = failures as f64 / n;
    let scale = rounds as f64 * n;
    (failures as f64 / scale, (n * q * (1.0 - q)).sqrt() / scale)
}
