//! Ambiguity clustering.
//!
//! After a short BP run, the syndrome is explained by pivoting at the most
//! likely columns (stage 1). `K` more columns are then admitted, growing the
//! admitted submatrix `C` into independent blocks (stage 2). Each block is
//! decoded on its own (stage 3): when its syndrome fixes its logical effect
//! that effect is read off directly, otherwise a small local search decides.

mod cluster;
mod state;

pub use cluster::{analyse_cluster, combine_verdicts, Cluster, ClusterVerdict, LogicalEvidence};
pub use state::{is_reduced_wrt_syndrome, stage1_reduce, stage2_grow, EliminationState, GrowthSummary};

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bp::{BpConfig, BpDecoder, PosteriorVector};
use crate::decoder::{DecodeResult, Diagnostics};
use crate::error::{Error, Result};
use crate::gf2::{BitVector, SparseBitMatrix};
use crate::problem::DecodingProblem;

/// Stage 2 budget.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    /// `K = round(kappa * n)`.
    Fraction(f64),
    Columns(usize),
}

impl Budget {
    pub fn columns(&self, n: usize) -> usize {
        match *self {
            Budget::Fraction(kappa) => ((kappa * n as f64).round() as usize).min(n),
            Budget::Columns(k) => k.min(n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcConfig {
    pub budget: Budget,
    pub bp: BpConfig,
}

impl AcConfig {
    pub fn with_kappa(kappa: f64) -> Self {
        AcConfig {
            budget: Budget::Fraction(kappa),
            bp: BpConfig::ac_default(),
        }
    }

    pub fn with_columns(k: usize) -> Self {
        AcConfig {
            budget: Budget::Columns(k),
            bp: BpConfig::ac_default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Budget::Fraction(kappa) = self.budget {
            if !(kappa >= 0.0 && kappa.is_finite()) {
                return Err(Error::InvalidInput(format!("kappa must be a non-negative number, got {kappa}")));
            }
        }
        self.bp.validate()
    }
}

impl Default for AcConfig {
    fn default() -> Self {
        Self::with_kappa(0.01)
    }
}

/// Everything a single AC decode produced, for inspection.
#[derive(Clone, Debug)]
pub struct AcOutcome {
    pub result: DecodeResult,
    pub posteriors: PosteriorVector,
    /// Empty when BP converged.
    pub clusters: Vec<Cluster>,
    pub verdicts: Vec<ClusterVerdict>,
    pub growth: GrowthSummary,
}

#[derive(Clone, Debug)]
pub struct AcDecoder {
    config: AcConfig,
    budget: usize,
    bp: BpDecoder,
    state: EliminationState,
    l: SparseBitMatrix,
    prior_llrs: Vec<f64>,
}

impl AcDecoder {
    pub fn new(problem: &DecodingProblem, config: AcConfig) -> Result<Self> {
        config.validate()?;
        Ok(AcDecoder {
            budget: config.budget.columns(problem.num_errors()),
            bp: BpDecoder::new(problem, config.bp)?,
            state: EliminationState::new(problem.h()),
            l: problem.l().clone(),
            prior_llrs: problem.llrs().to_vec(),
            config,
        })
    }

    pub fn config(&self) -> &AcConfig {
        &self.config
    }

    /// `K` after resolving the budget against `n`.
    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn decode(&mut self, syndrome: &BitVector) -> Result<DecodeResult> {
        self.decode_detailed(syndrome).map(|o| o.result)
    }

    pub fn decode_detailed(&mut self, syndrome: &BitVector) -> Result<AcOutcome> {
        let start = Instant::now();
        let posteriors = self.bp.run(syndrome)?;
        let bp_time = start.elapsed();
        let mut outcome = self.decode_with_posteriors(syndrome, posteriors)?;
        outcome.result.diagnostics.timings.bp = bp_time.as_secs_f64();
        Ok(outcome)
    }

    /// Stages 1 to 3 driven by externally supplied posteriors. Converged
    /// posteriors short-circuit to their hard decision.
    pub fn decode_with_posteriors(&mut self, syndrome: &BitVector, posteriors: PosteriorVector) -> Result<AcOutcome> {
        let mut diag = Diagnostics {
            bp_converged: Some(posteriors.converged),
            bp_rounds: posteriors.rounds_used,
            ..Diagnostics::default()
        };
        if posteriors.converged {
            let error = posteriors.hard_decision();
            return Ok(AcOutcome {
                result: DecodeResult {
                    logical: self.l.mul_vec(&error),
                    error: Some(error),
                    diagnostics: diag,
                },
                posteriors,
                clusters: Vec::new(),
                verdicts: Vec::new(),
                growth: GrowthSummary::default(),
            });
        }

        let t = Instant::now();
        self.state.reset(syndrome)?;
        diag.stage1_pivots = self.state.stage1(&posteriors.llrs)?;
        diag.timings.stage1 = t.elapsed().as_secs_f64();

        let t = Instant::now();
        let growth = self.state.stage2(&posteriors.llrs, self.budget)?;
        let clusters = self.state.clusters();
        diag.stage2_columns = growth.added;
        diag.stage2_exhausted = growth.exhausted;
        diag.timings.stage2 = t.elapsed().as_secs_f64();

        let t = Instant::now();
        let n = self.prior_llrs.len();
        let mut error = BitVector::zeros(n);
        let mut verdicts = Vec::with_capacity(clusters.len());
        for cluster in &clusters {
            let cols = cluster.columns();
            let llrs: Vec<f64> = cols.iter().map(|&c| self.prior_llrs[c]).collect();
            let verdict = analyse_cluster(cluster, &cluster.restrict_logicals(&self.l), &llrs)?;
            for local in verdict.solution.iter_ones() {
                error.set(cols[local], true);
            }
            diag.cluster_sizes.push((cluster.num_rows(), cluster.num_cols()));
            diag.ambiguous_clusters += verdict.ambiguous as usize;
            diag.candidates += verdict.candidates;
            diag.covered_log2 += (verdict.candidates as f64).log2();
            verdicts.push(verdict);
        }
        diag.clusters = clusters.len();
        let logical = combine_verdicts(self.l.num_rows(), &verdicts);
        diag.timings.stage3 = t.elapsed().as_secs_f64();

        Ok(AcOutcome {
            result: DecodeResult {
                logical,
                error: Some(error),
                diagnostics: diag,
            },
            posteriors,
            clusters,
            verdicts,
            growth,
        })
    }
}

/// One-shot AC decode.
pub fn ac_decode(problem: &DecodingProblem, syndrome: &BitVector, config: &AcConfig) -> Result<DecodeResult> {
    AcDecoder::new(problem, *config)?.decode(syndrome)
}
