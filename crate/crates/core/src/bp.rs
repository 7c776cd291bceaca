//! Belief propagation on the Tanner graph of `H` with a flooding schedule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::problem::DecodingProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BpVariant {
    SumProduct,
    MinSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BpConfig {
    pub variant: BpVariant,
    pub max_rounds: usize,
    /// Normalisation applied to min-sum check messages.
    pub min_sum_scale: f64,
    /// Bound on the magnitude of every message.
    pub llr_clamp: f64,
    /// Stop as soon as the hard decision satisfies the syndrome.
    pub early_exit: bool,
}

impl BpConfig {
    pub fn sum_product(max_rounds: usize) -> Self {
        BpConfig {
            variant: BpVariant::SumProduct,
            max_rounds,
            min_sum_scale: 0.625,
            llr_clamp: 50.0,
            early_exit: true,
        }
    }

    pub fn min_sum(max_rounds: usize) -> Self {
        BpConfig {
            variant: BpVariant::MinSum,
            ..Self::sum_product(max_rounds)
        }
    }

    /// Nine rounds of sum-product, as used ahead of ambiguity clustering.
    pub fn ac_default() -> Self {
        Self::sum_product(9)
    }

    /// Ten thousand rounds of min-sum, as used ahead of OSD.
    pub fn osd_default() -> Self {
        Self::min_sum(10_000)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_rounds == 0 {
            return Err(Error::InvalidInput("BP needs at least one round".into()));
        }
        if !(self.min_sum_scale > 0.0 && self.min_sum_scale <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "min-sum scale {} outside (0, 1]",
                self.min_sum_scale
            )));
        }
        if !(self.llr_clamp > 0.0 && self.llr_clamp.is_finite()) {
            return Err(Error::InvalidInput(format!("bad LLR clamp {}", self.llr_clamp)));
        }
        Ok(())
    }
}

impl Default for BpConfig {
    fn default() -> Self {
        Self::ac_default()
    }
}

/// BP output. `llrs[j]` is the total log-likelihood ratio `ln((1-p_j)/p_j)`
/// behind `posteriors[j]`, kept unclamped so that orderings by likelihood
/// stay strict where the probabilities round to 0 or 1.
#[derive(Clone, Debug, PartialEq)]
pub struct PosteriorVector {
    pub posteriors: Vec<f64>,
    pub llrs: Vec<f64>,
    pub converged: bool,
    pub rounds_used: usize,
}

impl PosteriorVector {
    pub fn hard_decision(&self) -> BitVector {
        hard_decision(&self.posteriors)
    }
}

/// `e_j = 1` iff `p_j >= 1/2`.
pub fn hard_decision(posteriors: &[f64]) -> BitVector {
    let bits: Vec<bool> = posteriors.iter().map(|&p| p >= 0.5).collect();
    BitVector::from_bools(&bits)
}

/// `ln((1-p)/p)`, clamped to `[-clamp, clamp]`.
pub fn posteriors_as_llr(posteriors: &[f64], clamp: f64) -> Vec<f64> {
    posteriors
        .iter()
        .map(|&p| ((1.0 - p) / p).ln().clamp(-clamp, clamp))
        .collect()
}

/// `-ln(tanh(x / 2))`, an involution on `[0, inf]`.
#[inline]
fn phi(x: f64) -> f64 {
    (2.0 / x.exp_m1()).ln_1p()
}

#[inline]
fn llr_to_probability(llr: f64) -> f64 {
    1.0 / (1.0 + llr.exp())
}

/// Reusable BP engine for one problem. Holds the Tanner graph and message
/// buffers so repeated decodes do not allocate.
#[derive(Clone, Debug)]
pub struct BpDecoder {
    config: BpConfig,
    prior_llrs: Vec<f64>,
    // Edges are numbered check by check; `check_ptr[i]..check_ptr[i + 1]`
    // are the edges of check `i` and `edge_var[e]` their variables.
    check_ptr: Vec<usize>,
    edge_var: Vec<usize>,
    var_ptr: Vec<usize>,
    var_edges: Vec<usize>,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    totals: Vec<f64>,
    scratch: Vec<f64>,
}

impl BpDecoder {
    pub fn new(problem: &DecodingProblem, config: BpConfig) -> Result<Self> {
        config.validate()?;
        let h = problem.h();
        let (m, n) = (h.num_rows(), h.num_cols());
        let mut check_ptr = Vec::with_capacity(m + 1);
        let mut edge_var = Vec::with_capacity(h.nnz());
        check_ptr.push(0);
        for i in 0..m {
            edge_var.extend(h.row(i).iter_ones());
            check_ptr.push(edge_var.len());
        }
        let mut degree = vec![0usize; n];
        for &v in &edge_var {
            degree[v] += 1;
        }
        let mut var_ptr = Vec::with_capacity(n + 1);
        var_ptr.push(0);
        for d in &degree {
            var_ptr.push(var_ptr.last().unwrap() + d);
        }
        let mut fill = var_ptr.clone();
        let mut var_edges = vec![0; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v]] = e;
            fill[v] += 1;
        }
        let edges = edge_var.len();
        Ok(BpDecoder {
            config,
            prior_llrs: problem.llrs().to_vec(),
            check_ptr,
            edge_var,
            var_ptr,
            var_edges,
            v2c: vec![0.0; edges],
            c2v: vec![0.0; edges],
            totals: vec![0.0; n],
            scratch: Vec::new(),
        })
    }

    pub fn config(&self) -> &BpConfig {
        &self.config
    }

    pub fn num_checks(&self) -> usize {
        self.check_ptr.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.prior_llrs.len()
    }

    pub fn run(&mut self, syndrome: &BitVector) -> Result<PosteriorVector> {
        if syndrome.len() != self.num_checks() {
            return Err(Error::DimensionMismatch(format!(
                "syndrome has length {}, H has {} rows",
                syndrome.len(),
                self.num_checks()
            )));
        }
        for j in 0..self.num_vars() {
            let llr = self.prior_llrs[j];
            for &e in &self.var_edges[self.var_ptr[j]..self.var_ptr[j + 1]] {
                self.v2c[e] = llr;
            }
        }
        let mut converged = false;
        let mut rounds_used = 0;
        for _ in 0..self.config.max_rounds {
            rounds_used += 1;
            self.check_update(syndrome);
            self.variable_update();
            converged = self.satisfies(syndrome);
            if converged && self.config.early_exit {
                break;
            }
        }
        Ok(PosteriorVector {
            posteriors: self.totals.iter().map(|&t| llr_to_probability(t)).collect(),
            llrs: self.totals.clone(),
            converged,
            rounds_used,
        })
    }

    fn check_update(&mut self, syndrome: &BitVector) {
        let clamp = self.config.llr_clamp;
        for i in 0..self.num_checks() {
            let range = self.check_ptr[i]..self.check_ptr[i + 1];
            let sign = if syndrome.get(i) { -1.0 } else { 1.0 };
            match self.config.variant {
                BpVariant::SumProduct => {
                    // |out| = phi(sum of phi(|in|)) over the other edges, with
                    // leave-one-out sums from prefix and suffix passes. Working
                    // with phi rather than tanh keeps large magnitudes exact.
                    let t = &mut self.scratch;
                    t.clear();
                    let mut parity = sign;
                    for &m in &self.v2c[range.clone()] {
                        if m < 0.0 {
                            parity = -parity;
                        }
                        t.push(phi(m.abs().min(clamp)));
                    }
                    let (v2c, out) = (&self.v2c[range.clone()], &mut self.c2v[range]);
                    let mut prefix = 0.0;
                    for (k, &x) in t.iter().enumerate() {
                        out[k] = prefix;
                        prefix += x;
                    }
                    let mut suffix = 0.0;
                    for k in (0..t.len()).rev() {
                        let own = if v2c[k] < 0.0 { -1.0 } else { 1.0 };
                        out[k] = parity * own * phi(out[k] + suffix).min(clamp);
                        suffix += t[k];
                    }
                }
                BpVariant::MinSum => {
                    let scale = self.config.min_sum_scale;
                    let mut min1 = f64::INFINITY;
                    let mut min2 = f64::INFINITY;
                    let mut arg = usize::MAX;
                    let mut parity = sign;
                    for e in range.clone() {
                        let m = self.v2c[e];
                        let a = m.abs();
                        if m < 0.0 {
                            parity = -parity;
                        }
                        if a < min1 {
                            min2 = min1;
                            min1 = a;
                            arg = e;
                        } else if a < min2 {
                            min2 = a;
                        }
                    }
                    for e in range {
                        let m = self.v2c[e];
                        let own = if m < 0.0 { -1.0 } else { 1.0 };
                        let mag = if e == arg { min2 } else { min1 };
                        self.c2v[e] = (parity * own * scale * mag).clamp(-clamp, clamp);
                    }
                }
            }
        }
    }

    fn variable_update(&mut self) {
        for j in 0..self.num_vars() {
            let edges = &self.var_edges[self.var_ptr[j]..self.var_ptr[j + 1]];
            let total = self.prior_llrs[j] + edges.iter().map(|&e| self.c2v[e]).sum::<f64>();
            self.totals[j] = total;
            for &e in edges {
                self.v2c[e] = total - self.c2v[e];
            }
        }
    }

    fn satisfies(&self, syndrome: &BitVector) -> bool {
        (0..self.num_checks()).all(|i| {
            let parity = self.edge_var[self.check_ptr[i]..self.check_ptr[i + 1]]
                .iter()
                .filter(|&&v| self.totals[v] <= 0.0)
                .count()
                % 2
                == 1;
            parity == syndrome.get(i)
        })
    }
}

/// One-shot BP run.
pub fn run_bp(problem: &DecodingProblem, syndrome: &BitVector, config: &BpConfig) -> Result<PosteriorVector> {
    BpDecoder::new(problem, *config)?.run(syndrome)
}
