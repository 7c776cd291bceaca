//! Ordered statistics decoding: eliminate `H` with pivots chosen by
//! posterior, then search a small set of free-column assignments for the
//! most probable solution.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitVector, Reduction, SparseBitMatrix};
use crate::problem::DecodingProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OsdMethod {
    OrderZero,
    Exhaustive,
    CombinationSweep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OsdConfig {
    pub method: OsdMethod,
    pub order: usize,
}

impl OsdConfig {
    pub fn order_zero() -> Self {
        OsdConfig {
            method: OsdMethod::OrderZero,
            order: 0,
        }
    }

    pub fn exhaustive(order: usize) -> Self {
        OsdConfig {
            method: OsdMethod::Exhaustive,
            order,
        }
    }

    pub fn combination_sweep(order: usize) -> Self {
        OsdConfig {
            method: OsdMethod::CombinationSweep,
            order,
        }
    }

    /// Order 0 whatever the method when `order == 0`.
    pub fn effective_method(&self) -> OsdMethod {
        if self.order == 0 {
            OsdMethod::OrderZero
        } else {
            self.method
        }
    }
}

impl Default for OsdConfig {
    fn default() -> Self {
        Self::combination_sweep(7)
    }
}

/// Number of candidates examined for an `m x n` full-rank problem. The order
/// is capped at the `n - m` free columns available.
pub fn candidate_count(method: OsdMethod, t: usize, n: usize, m: usize) -> usize {
    let free = n.saturating_sub(m);
    let t = t.min(free);
    if t == 0 {
        return 1;
    }
    match method {
        OsdMethod::OrderZero => 1,
        OsdMethod::Exhaustive => 1usize << t,
        OsdMethod::CombinationSweep => 1 + free + t * (t - 1) / 2,
    }
}

/// Index of the largest score; ties go to the lowest index.
pub fn score_candidates(log_probs: &[f64]) -> Result<usize> {
    let mut best: Option<usize> = None;
    for (k, &s) in log_probs.iter().enumerate() {
        match best {
            Some(b) if s.total_cmp(&log_probs[b]) != Ordering::Greater => {}
            _ => best = Some(k),
        }
    }
    best.ok_or(Error::EmptyCandidates)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OsdResult {
    pub error: BitVector,
    pub logical: BitVector,
    /// Candidates scored.
    pub candidates: usize,
    /// Pivots made during elimination (the rank of `H`).
    pub rank: usize,
}

/// Column ranking by decreasing posterior, i.e. increasing posterior LLR;
/// equal values keep index order.
pub fn rank_columns(posterior_llrs: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..posterior_llrs.len()).collect();
    order.sort_by(|&a, &b| posterior_llrs[a].total_cmp(&posterior_llrs[b]).then(a.cmp(&b)));
    order
}

/// OSD engine for one problem; reuses its elimination buffers across calls.
#[derive(Clone, Debug)]
pub struct OsdDecoder {
    config: OsdConfig,
    pristine: SparseBitMatrix,
    l: SparseBitMatrix,
    prior_llrs: Vec<f64>,
    work: Reduction,
    support: Vec<usize>,
}

impl OsdDecoder {
    pub fn new(problem: &DecodingProblem, config: OsdConfig) -> Self {
        let m = problem.num_checks();
        OsdDecoder {
            config,
            pristine: problem.h().clone(),
            l: problem.l().clone(),
            prior_llrs: problem.llrs().to_vec(),
            work: Reduction::new(problem.h().clone(), BitVector::zeros(m)).expect("dimensions agree"),
            support: Vec::new(),
        }
    }

    pub fn config(&self) -> &OsdConfig {
        &self.config
    }

    /// Decodes `syndrome` with columns prioritised by `posterior_llrs`
    /// (lower means more likely flipped).
    pub fn decode(&mut self, syndrome: &BitVector, posterior_llrs: &[f64]) -> Result<OsdResult> {
        let (m, n) = (self.pristine.num_rows(), self.pristine.num_cols());
        if syndrome.len() != m || posterior_llrs.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected syndrome of length {m} and {n} posteriors, got {} and {}",
                syndrome.len(),
                posterior_llrs.len()
            )));
        }
        self.work.reset(&self.pristine, syndrome);
        let order = rank_columns(posterior_llrs);
        for &col in &order {
            if self.work.pivots().len() == m {
                break;
            }
            self.work.matrix().col_support_into(col, &mut self.support);
            let row = self.support.iter().copied().find(|&r| !self.work.pivots().is_pivot_row(r));
            if let Some(row) = row {
                self.work.pivot(row, col)?;
            }
        }
        let reduced = self.work.syndrome();
        let pivots = self.work.pivots();
        if let Some(row) = (0..m).find(|&r| reduced.get(r) && !pivots.is_pivot_row(r)) {
            return Err(Error::Inconsistent { row });
        }

        let pivot_col_of_row: Vec<Option<usize>> = (0..m).map(|r| pivots.col_of(r)).collect();
        let free: Vec<usize> = order.iter().copied().filter(|&c| !pivots.is_pivot_col(c)).collect();
        let t = self.config.order.min(free.len());
        let method = if t == 0 { OsdMethod::OrderZero } else { self.config.method };

        // A candidate is a set of free columns; its pivot part is the reduced
        // syndrome plus their columns.
        let mut column_cache: Vec<Option<BitVector>> = vec![None; free.len()];
        let matrix = self.work.matrix();
        let mut column = |k: usize| -> BitVector {
            column_cache[k].get_or_insert_with(|| matrix.column(free[k])).clone()
        };
        let llrs = &self.prior_llrs;
        let score = |pivot_part: &BitVector, chosen: &[usize]| -> f64 {
            let mut s = 0.0;
            for r in pivot_part.iter_ones() {
                if let Some(c) = pivot_col_of_row[r] {
                    s -= llrs[c];
                }
            }
            for &k in chosen {
                s -= llrs[free[k]];
            }
            s
        };

        let mut best: Option<(f64, Vec<usize>, BitVector)> = None;
        let mut candidates = 0usize;
        let mut consider = |chosen: Vec<usize>, pivot_part: BitVector| {
            let s = score(&pivot_part, &chosen);
            candidates += 1;
            if best.as_ref().is_none_or(|(b, _, _)| s > *b) {
                best = Some((s, chosen, pivot_part));
            }
        };

        consider(Vec::new(), reduced.clone());
        match method {
            OsdMethod::OrderZero => {}
            OsdMethod::Exhaustive => {
                let cols: Vec<BitVector> = (0..t).map(&mut column).collect();
                for mask in 1u64..1 << t {
                    let mut part = reduced.clone();
                    let chosen: Vec<usize> = (0..t).filter(|&k| mask >> k & 1 == 1).collect();
                    for &k in &chosen {
                        part.xor_assign(&cols[k]);
                    }
                    consider(chosen, part);
                }
            }
            OsdMethod::CombinationSweep => {
                for k in 0..free.len() {
                    consider(vec![k], reduced.xor(&column(k)));
                }
                let cols: Vec<BitVector> = (0..t).map(&mut column).collect();
                for a in 0..t {
                    let with_a = reduced.xor(&cols[a]);
                    for b in a + 1..t {
                        consider(vec![a, b], with_a.xor(&cols[b]));
                    }
                }
            }
        }

        let (_, chosen, pivot_part) = best.expect("g = 0 is always a candidate");
        let mut error = BitVector::zeros(n);
        for r in pivot_part.iter_ones() {
            if let Some(c) = pivot_col_of_row[r] {
                error.set(c, true);
            }
        }
        for k in chosen {
            error.set(free[k], true);
        }
        debug_assert_eq!(&self.pristine.mul_vec(&error), syndrome);
        Ok(OsdResult {
            logical: self.l.mul_vec(&error),
            error,
            candidates,
            rank: self.work.pivots().len(),
        })
    }
}

/// One-shot OSD run.
pub fn osd_decode(
    problem: &DecodingProblem,
    syndrome: &BitVector,
    posterior_llrs: &[f64],
    config: &OsdConfig,
) -> Result<OsdResult> {
    OsdDecoder::new(problem, *config).decode(syndrome, posterior_llrs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn problem(h: &[&[u8]], priors: &[f64]) -> DecodingProblem {
        let h = SparseBitMatrix::from_dense(h);
        let n = h.num_cols();
        DecodingProblem::new(h, SparseBitMatrix::identity(n), priors.to_vec()).unwrap()
    }

    #[test]
    fn order_zero_hand_example() {
        let p = problem(&[&[1, 1, 0], &[0, 1, 1]], &[0.1; 3]);
        // Columns 0 and 1 are favoured.
        let out = osd_decode(&p, &bits("10"), &[-2.0, -1.0, 3.0], &OsdConfig::order_zero()).unwrap();
        assert_eq!(out.error, bits("100"));
        assert!(p.check_solution(&out.error, &bits("10")));
        assert_eq!(out.candidates, 1);
    }

    #[test]
    fn counts() {
        assert_eq!(candidate_count(OsdMethod::CombinationSweep, 7, 20, 10), 32);
        assert_eq!(candidate_count(OsdMethod::Exhaustive, 3, 20, 10), 8);
        assert_eq!(candidate_count(OsdMethod::OrderZero, 5, 20, 10), 1);
        assert_eq!(candidate_count(OsdMethod::CombinationSweep, 0, 20, 10), 1);
        assert_eq!(candidate_count(OsdMethod::Exhaustive, 5, 12, 10), 4);
    }

    #[test]
    fn scoring_ties_and_errors() {
        assert_eq!(score_candidates(&[-3.2, -1.1]).unwrap(), 1);
        assert_eq!(score_candidates(&[-0.5]).unwrap(), 0);
        assert_eq!(score_candidates(&[-1.0, -1.0]).unwrap(), 0);
        assert!(matches!(score_candidates(&[]), Err(Error::EmptyCandidates)));
    }

    #[test]
    fn inconsistent_syndrome_is_an_error() {
        let p = problem(&[&[1, 1], &[1, 1]], &[0.1, 0.1]);
        assert!(matches!(
            osd_decode(&p, &bits("10"), &[0.0, 0.0], &OsdConfig::default()),
            Err(Error::Inconsistent { row: 1 })
        ));
    }

    #[test]
    fn higher_order_finds_cheaper_solution() {
        // BP-style ordering puts the expensive column first; order 0 is stuck
        // with it, while the sweep finds the two cheap columns.
        let p = problem(&[&[1, 1, 0], &[1, 0, 1]], &[0.01, 0.3, 0.3]);
        let llrs = [-5.0, 0.0, 0.1];
        let zero = osd_decode(&p, &bits("11"), &llrs, &OsdConfig::order_zero()).unwrap();
        assert_eq!(zero.error, bits("100"));
        let sweep = osd_decode(&p, &bits("11"), &llrs, &OsdConfig::combination_sweep(2)).unwrap();
        assert_eq!(sweep.error, bits("011"));
        assert_eq!(sweep.candidates, candidate_count(OsdMethod::CombinationSweep, 2, 3, 2));
    }
}
