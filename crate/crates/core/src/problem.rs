//! Decoding problems: a parity check matrix `H`, a logical matrix `L` and
//! independent prior error probabilities, one per column.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitVector, SparseBitMatrix};

/// Observed syndrome, one bit per row of `H`.
pub type Syndrome = BitVector;

/// Logical effect, one bit per row of `L`.
pub type LogicalEffect = BitVector;

/// A probability held in log space.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogProb(pub f64);

impl LogProb {
    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn linear(self) -> f64 {
        self.0.exp()
    }
}

/// One error mechanism before canonicalisation: the detectors (rows of `H`)
/// and logicals (rows of `L`) it flips, and its probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawColumn {
    pub detectors: Vec<usize>,
    pub logicals: Vec<usize>,
    pub prior: f64,
}

impl RawColumn {
    pub fn new(detectors: Vec<usize>, logicals: Vec<usize>, prior: f64) -> Self {
        RawColumn {
            detectors,
            logicals,
            prior,
        }
    }
}

/// Probability that exactly one of two independent events occurs.
#[inline]
pub fn xor_probability(p1: f64, p2: f64) -> f64 {
    p1 * (1.0 - p2) + p2 * (1.0 - p1)
}

#[derive(Clone, Debug)]
pub struct DecodingProblem {
    h: SparseBitMatrix,
    l: SparseBitMatrix,
    priors: Vec<f64>,
    llrs: Vec<f64>,
    log_all_zero: f64,
    pub name: Option<String>,
    /// Rounds of syndrome extraction the problem spans, when known.
    pub rounds: Option<usize>,
}

impl DecodingProblem {
    /// Validates and wraps `H`, `L` and the priors. Every prior must lie
    /// strictly inside (0, 1). Columns are taken as given; see
    /// [`canonicalise`] for merging and pruning.
    pub fn new(h: SparseBitMatrix, l: SparseBitMatrix, priors: Vec<f64>) -> Result<Self> {
        if h.num_cols() != l.num_cols() {
            return Err(Error::DimensionMismatch(format!(
                "H has {} columns but L has {}",
                h.num_cols(),
                l.num_cols()
            )));
        }
        if priors.len() != h.num_cols() {
            return Err(Error::DimensionMismatch(format!(
                "{} priors for {} columns",
                priors.len(),
                h.num_cols()
            )));
        }
        for &p in &priors {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidProbability {
                    value: p,
                    reason: "priors must lie strictly between 0 and 1",
                });
            }
        }
        let llrs = priors.iter().map(|&p| ((1.0 - p) / p).ln()).collect();
        let log_all_zero = priors.iter().map(|&p| (1.0 - p).ln()).sum();
        Ok(DecodingProblem {
            h,
            l,
            priors,
            llrs,
            log_all_zero,
            name: None,
            rounds: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_rounds(mut self, rounds: usize) -> Self {
        self.rounds = Some(rounds);
        self
    }

    /// Same matrices, every prior replaced by `p`.
    pub fn with_uniform_priors(&self, p: f64) -> Result<Self> {
        let mut out = DecodingProblem::new(self.h.clone(), self.l.clone(), vec![p; self.num_errors()])?;
        out.name.clone_from(&self.name);
        out.rounds = self.rounds;
        Ok(out)
    }

    /// Rows of `H` (`m`).
    pub fn num_checks(&self) -> usize {
        self.h.num_rows()
    }

    /// Columns (`n`).
    pub fn num_errors(&self) -> usize {
        self.h.num_cols()
    }

    /// Rows of `L` (`k`).
    pub fn num_logicals(&self) -> usize {
        self.l.num_rows()
    }

    pub fn h(&self) -> &SparseBitMatrix {
        &self.h
    }

    pub fn l(&self) -> &SparseBitMatrix {
        &self.l
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// `ln((1 - p) / p)` for each column.
    pub fn llrs(&self) -> &[f64] {
        &self.llrs
    }

    /// `ln` of the probability that no error occurs.
    pub fn log_prob_no_error(&self) -> f64 {
        self.log_all_zero
    }

    /// Prior probability of the error pattern `e`.
    pub fn prior_probability(&self, e: &BitVector) -> Result<LogProb> {
        if e.len() != self.num_errors() {
            return Err(Error::DimensionMismatch(format!(
                "error vector has length {}, problem has {} columns",
                e.len(),
                self.num_errors()
            )));
        }
        Ok(LogProb(self.log_all_zero - e.iter_ones().map(|j| self.llrs[j]).sum::<f64>()))
    }

    pub fn syndrome_of(&self, e: &BitVector) -> Syndrome {
        self.h.mul_vec(e)
    }

    pub fn logical_of(&self, e: &BitVector) -> LogicalEffect {
        self.l.mul_vec(e)
    }

    /// Whether `e` explains `syndrome`.
    pub fn check_solution(&self, e: &BitVector, syndrome: &BitVector) -> bool {
        e.len() == self.num_errors()
            && syndrome.len() == self.num_checks()
            && self.h.mul_vec(e) == *syndrome
    }

    /// Column `j` as a raw mechanism.
    pub fn column(&self, j: usize) -> RawColumn {
        RawColumn::new(self.h.col_support(j), self.l.col_support(j), self.priors[j])
    }

    pub fn columns(&self) -> Vec<RawColumn> {
        (0..self.num_errors()).map(|j| self.column(j)).collect()
    }

    /// No zero columns and no two identical columns in the stacked `[H; L]`.
    pub fn is_canonical(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        (0..self.num_errors()).all(|j| {
            let key = (self.h.col_support(j), self.l.col_support(j));
            !(key.0.is_empty() && key.1.is_empty()) && seen.insert(key)
        })
    }
}

/// Builds a canonical problem from raw mechanisms.
///
/// Mechanisms with identical footprints are merged with
/// [`xor_probability`]; mechanisms flipping nothing, or with probability
/// zero, are dropped. Output columns keep the order of first occurrence.
/// Repeated targets within one mechanism cancel mod 2.
pub fn canonicalise<I>(num_detectors: usize, num_logicals: usize, columns: I) -> Result<DecodingProblem>
where
    I: IntoIterator<Item = RawColumn>,
{
    type Footprint = (Vec<usize>, Vec<usize>);
    let mut index: HashMap<Footprint, usize> = HashMap::new();
    let mut merged: Vec<(Footprint, f64)> = Vec::new();
    for col in columns {
        if !(0.0..=1.0).contains(&col.prior) {
            return Err(Error::InvalidProbability {
                value: col.prior,
                reason: "probabilities must lie in [0, 1]",
            });
        }
        if col.prior == 1.0 {
            return Err(Error::InvalidProbability {
                value: col.prior,
                reason: "a mechanism that always occurs is ill-posed",
            });
        }
        let detectors = cancel_pairs(col.detectors);
        let logicals = cancel_pairs(col.logicals);
        if let Some(&d) = detectors.iter().find(|&&d| d >= num_detectors) {
            return Err(Error::DimensionMismatch(format!(
                "detector {d} out of range for {num_detectors} detectors"
            )));
        }
        if let Some(&o) = logicals.iter().find(|&&o| o >= num_logicals) {
            return Err(Error::DimensionMismatch(format!(
                "logical {o} out of range for {num_logicals} logicals"
            )));
        }
        if col.prior == 0.0 || (detectors.is_empty() && logicals.is_empty()) {
            continue;
        }
        let key = (detectors, logicals);
        match index.get(&key) {
            Some(&slot) => merged[slot].1 = xor_probability(merged[slot].1, col.prior),
            None => {
                index.insert(key.clone(), merged.len());
                merged.push((key, col.prior));
            }
        }
    }
    let n = merged.len();
    let h = SparseBitMatrix::from_col_supports(num_detectors, n, merged.iter().map(|((d, _), _)| d.iter().copied()))?;
    let l = SparseBitMatrix::from_col_supports(num_logicals, n, merged.iter().map(|((_, o), _)| o.iter().copied()))?;
    DecodingProblem::new(h, l, merged.iter().map(|(_, p)| *p).collect())
}

fn cancel_pairs(mut targets: Vec<usize>) -> Vec<usize> {
    targets.sort_unstable();
    let mut out = Vec::with_capacity(targets.len());
    for t in targets {
        if out.last() == Some(&t) {
            out.pop();
        } else {
            out.push(t);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn two_bit_problem() -> DecodingProblem {
        DecodingProblem::new(
            SparseBitMatrix::from_dense(&[[1, 1]]),
            SparseBitMatrix::from_dense(&[[1, 0]]),
            vec![0.1, 0.2],
        )
        .unwrap()
    }

    #[test]
    fn prior_probability_examples() {
        let p = two_bit_problem();
        assert!((p.prior_probability(&bits("00")).unwrap().linear() - 0.72).abs() < 1e-12);
        assert!((p.prior_probability(&bits("11")).unwrap().linear() - 0.02).abs() < 1e-12);
        assert!(p.prior_probability(&bits("1")).is_err());

        let half = DecodingProblem::new(SparseBitMatrix::zeros(1, 5), SparseBitMatrix::zeros(0, 5), vec![0.5; 5]).unwrap();
        for e in ["00000", "10110", "11111"] {
            assert!((half.prior_probability(&bits(e)).unwrap().linear() - 2f64.powi(-5)).abs() < 1e-15);
        }
    }

    #[test]
    fn merge_identical_columns() {
        let p = canonicalise(
            1,
            1,
            [RawColumn::new(vec![0], vec![0], 0.1), RawColumn::new(vec![0], vec![0], 0.2)],
        )
        .unwrap();
        assert_eq!(p.num_errors(), 1);
        assert!((p.priors()[0] - 0.26).abs() < 1e-15);

        let p = canonicalise(1, 0, [RawColumn::new(vec![0], vec![], 0.5), RawColumn::new(vec![0], vec![], 0.5)]).unwrap();
        assert_eq!(p.priors(), &[0.5]);
    }

    #[test]
    fn zero_columns_and_impossible_errors_are_dropped() {
        let p = canonicalise(
            2,
            1,
            [
                RawColumn::new(vec![], vec![], 0.3),
                RawColumn::new(vec![1], vec![], 0.1),
                RawColumn::new(vec![0, 0], vec![], 0.2),
                RawColumn::new(vec![0], vec![], 0.0),
                RawColumn::new(vec![], vec![0], 0.05),
            ],
        )
        .unwrap();
        assert_eq!(p.num_errors(), 2);
        assert_eq!(p.column(0), RawColumn::new(vec![1], vec![], 0.1));
        assert_eq!(p.column(1), RawColumn::new(vec![], vec![0], 0.05));
        assert!(p.is_canonical());
    }

    #[test]
    fn invalid_probabilities_are_rejected() {
        assert!(canonicalise(1, 0, [RawColumn::new(vec![0], vec![], 1.5)]).is_err());
        assert!(canonicalise(1, 0, [RawColumn::new(vec![0], vec![], -0.1)]).is_err());
        assert!(canonicalise(1, 0, [RawColumn::new(vec![0], vec![], 1.0)]).is_err());
        assert!(canonicalise(1, 0, [RawColumn::new(vec![3], vec![], 0.1)]).is_err());
        assert!(DecodingProblem::new(SparseBitMatrix::zeros(1, 1), SparseBitMatrix::zeros(0, 1), vec![0.0]).is_err());
    }

    #[test]
    fn check_solution_examples() {
        let h = SparseBitMatrix::from_dense(&[[1, 0, 0, 0, 1], [0, 1, 0, 0, 1], [0, 0, 1, 0, 1], [0, 0, 0, 1, 1]]);
        let p = DecodingProblem::new(h, SparseBitMatrix::zeros(0, 5), vec![0.1; 5]).unwrap();
        assert!(p.check_solution(&bits("01100"), &bits("0110")));
        assert!(p.check_solution(&bits("00000"), &bits("0000")));
        assert!(!p.check_solution(&bits("10000"), &bits("0110")));
    }

    fn footprint_multiset(p: &DecodingProblem) -> Vec<(Vec<usize>, Vec<usize>, u64)> {
        let mut out: Vec<_> = p
            .columns()
            .into_iter()
            .map(|c| (c.detectors, c.logicals, (c.prior * 1e12).round() as u64))
            .collect();
        out.sort();
        out
    }

    proptest! {
        #[test]
        fn merging_is_order_independent(
            cols in proptest::collection::vec((0u8..4, 0u8..2, 0.01f64..0.49), 1..16),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let raw: Vec<RawColumn> = cols
                .iter()
                .map(|&(d, o, p)| {
                    let dets = (0..2).filter(|b| d >> b & 1 == 1).collect();
                    let obs = if o == 1 { vec![0] } else { vec![] };
                    RawColumn::new(dets, obs, p)
                })
                .collect();
            let mut shuffled = raw.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let a = canonicalise(2, 1, raw).unwrap();
            let b = canonicalise(2, 1, shuffled).unwrap();
            prop_assert_eq!(footprint_multiset(&a), footprint_multiset(&b));
        }

        #[test]
        fn flipping_a_bit_raises_probability_iff_prior_above_half(
            priors in proptest::collection::vec(0.01f64..0.99, 1..8),
            mask in any::<u8>(),
        ) {
            let n = priors.len();
            let p = DecodingProblem::new(SparseBitMatrix::zeros(0, n), SparseBitMatrix::zeros(0, n), priors.clone()).unwrap();
            let mut e = BitVector::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1));
            for j in 0..n {
                e.set(j, false);
                let before = p.prior_probability(&e).unwrap().ln();
                e.set(j, true);
                let after = p.prior_probability(&e).unwrap().ln();
                prop_assert_eq!(after > before, priors[j] > 0.5);
            }
        }

        #[test]
        fn null_space_shifts_preserve_solutions(
            rows in proptest::collection::vec(proptest::collection::vec(0u8..2, 6), 1..5),
            mask in 0u32..64,
        ) {
            let h = SparseBitMatrix::from_dense(&rows);
            let p = DecodingProblem::new(h.clone(), SparseBitMatrix::zeros(0, 6), vec![0.1; 6]).unwrap();
            let e = BitVector::from_indices(6, (0..6).filter(|i| mask >> i & 1 == 1));
            let s = p.syndrome_of(&e);
            for k in 0u32..64 {
                let v = BitVector::from_indices(6, (0..6).filter(|i| k >> i & 1 == 1));
                if h.mul_vec(&v).is_zero() {
                    prop_assert!(p.check_solution(&e.xor(&v), &s));
                }
            }
        }
    }
}
