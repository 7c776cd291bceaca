//! A common interface over the decoders, so the trial harness and the CLI
//! can drive any of them.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::ac::{AcConfig, AcDecoder};
use crate::bp::{BpConfig, BpDecoder};
use crate::error::{Error, Result};
use crate::gf2::{BitVector, SparseBitMatrix};
use crate::oracle::MlDecoder;
use crate::osd::{OsdConfig, OsdDecoder, OsdMethod};
use crate::problem::DecodingProblem;

/// Wall-clock seconds per decoder stage. BP-OSD books all OSD work under
/// `stage3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct StageTimings {
    pub bp: f64,
    pub stage1: f64,
    pub stage2: f64,
    pub stage3: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// `None` for decoders that do not run BP.
    pub bp_converged: Option<bool>,
    pub bp_rounds: usize,
    pub stage1_pivots: usize,
    pub stage2_columns: usize,
    pub stage2_exhausted: bool,
    pub clusters: usize,
    pub ambiguous_clusters: usize,
    /// `(m_i, n_i)` per cluster.
    pub cluster_sizes: Vec<(usize, usize)>,
    /// Candidate solutions scored: OSD candidates, or the sum over clusters.
    pub candidates: usize,
    /// log2 of the product of per-cluster candidate counts.
    pub covered_log2: f64,
    pub timings: StageTimings,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub logical: BitVector,
    /// An error consistent with the syndrome, when the decoder produces one.
    pub error: Option<BitVector>,
    pub diagnostics: Diagnostics,
}

pub trait Decoder {
    fn decode(&mut self, syndrome: &BitVector) -> Result<DecodeResult>;
}

impl Decoder for AcDecoder {
    fn decode(&mut self, syndrome: &BitVector) -> Result<DecodeResult> {
        AcDecoder::decode(self, syndrome)
    }
}

/// BP followed by OSD whenever BP fails to satisfy the syndrome.
#[derive(Clone, Debug)]
pub struct BpOsdDecoder {
    bp: BpDecoder,
    osd: OsdDecoder,
    l: SparseBitMatrix,
}

impl BpOsdDecoder {
    pub fn new(problem: &DecodingProblem, bp: BpConfig, osd: OsdConfig) -> Result<Self> {
        Ok(BpOsdDecoder {
            bp: BpDecoder::new(problem, bp)?,
            osd: OsdDecoder::new(problem, osd),
            l: problem.l().clone(),
        })
    }
}

impl Decoder for BpOsdDecoder {
    fn decode(&mut self, syndrome: &BitVector) -> Result<DecodeResult> {
        let start = Instant::now();
        let post = self.bp.run(syndrome)?;
        let mut diagnostics = Diagnostics {
            bp_converged: Some(post.converged),
            bp_rounds: post.rounds_used,
            ..Diagnostics::default()
        };
        diagnostics.timings.bp = start.elapsed().as_secs_f64();
        if post.converged {
            let error = post.hard_decision();
            return Ok(DecodeResult {
                logical: self.l.mul_vec(&error),
                error: Some(error),
                diagnostics,
            });
        }
        let start = Instant::now();
        let out = self.osd.decode(syndrome, &post.llrs)?;
        diagnostics.timings.stage3 = start.elapsed().as_secs_f64();
        diagnostics.candidates = out.candidates;
        Ok(DecodeResult {
            logical: out.logical,
            error: Some(out.error),
            diagnostics,
        })
    }
}

/// BP alone: rounds the posteriors and reports their logical effect. A
/// rounding that does not explain the syndrome is a decoding failure.
#[derive(Clone, Debug)]
pub struct HardDecisionBp {
    bp: BpDecoder,
    l: SparseBitMatrix,
}

impl HardDecisionBp {
    pub fn new(problem: &DecodingProblem, bp: BpConfig) -> Result<Self> {
        Ok(HardDecisionBp {
            bp: BpDecoder::new(problem, bp)?,
            l: problem.l().clone(),
        })
    }
}

impl Decoder for HardDecisionBp {
    fn decode(&mut self, syndrome: &BitVector) -> Result<DecodeResult> {
        let start = Instant::now();
        let post = self.bp.run(syndrome)?;
        if !post.converged {
            return Err(Error::NotConverged {
                rounds: post.rounds_used,
            });
        }
        let error = post.hard_decision();
        let mut diagnostics = Diagnostics {
            bp_converged: Some(true),
            bp_rounds: post.rounds_used,
            ..Diagnostics::default()
        };
        diagnostics.timings.bp = start.elapsed().as_secs_f64();
        Ok(DecodeResult {
            logical: self.l.mul_vec(&error),
            error: Some(error),
            diagnostics,
        })
    }
}

/// A decoder and its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "decoder", rename_all = "snake_case")]
pub enum DecoderSpec {
    Ac(AcConfig),
    BpOsd { bp: BpConfig, osd: OsdConfig },
    Bp(BpConfig),
    /// Exact maximum likelihood by enumeration; small problems only.
    Ml,
}

impl DecoderSpec {
    /// BP-OSD with its usual settings: min-sum BP then combination sweep.
    pub fn bp_osd_cs(order: usize) -> Self {
        DecoderSpec::BpOsd {
            bp: BpConfig::osd_default(),
            osd: OsdConfig::combination_sweep(order),
        }
    }

    pub fn build(&self, problem: &DecodingProblem) -> Result<Box<dyn Decoder + Send>> {
        Ok(match *self {
            DecoderSpec::Ac(config) => Box::new(AcDecoder::new(problem, config)?),
            DecoderSpec::BpOsd { bp, osd } => Box::new(BpOsdDecoder::new(problem, bp, osd)?),
            DecoderSpec::Bp(bp) => Box::new(HardDecisionBp::new(problem, bp)?),
            DecoderSpec::Ml => Box::new(MlDecoder::new(problem)?),
        })
    }

    /// Short label such as `AC(kappa=0.01)` or `BP-OSD-CS(7)`.
    pub fn label(&self) -> String {
        match self {
            DecoderSpec::Ac(c) => match c.budget {
                crate::ac::Budget::Fraction(k) => format!("AC(kappa={k})"),
                crate::ac::Budget::Columns(k) => format!("AC(K={k})"),
            },
            DecoderSpec::BpOsd { osd, .. } => match osd.effective_method() {
                OsdMethod::OrderZero => "BP-OSD-0".to_string(),
                OsdMethod::Exhaustive => format!("BP-OSD-E({})", osd.order),
                OsdMethod::CombinationSweep => format!("BP-OSD-CS({})", osd.order),
            },
            DecoderSpec::Bp(_) => "BP".to_string(),
            DecoderSpec::Ml => "ML".to_string(),
        }
    }
}
