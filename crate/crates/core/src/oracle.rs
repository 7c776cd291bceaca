//! Exact decoding by enumerating every solution of `He = s`. Only feasible
//! for small `n`; used as ground truth.

use std::collections::HashMap;

use crate::bp::PosteriorVector;
use crate::decoder::{DecodeResult, Decoder, Diagnostics};
use crate::error::{Error, Result};
use crate::gf2::{BitVector, Reduction};
use crate::problem::DecodingProblem;

/// Largest number of columns the oracle accepts.
pub const MAX_ORACLE_ERRORS: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct MlResult {
    pub logical: BitVector,
    /// Total probability of each logical class with a nonempty coset,
    /// sorted by logical effect.
    pub masses: Vec<(BitVector, f64)>,
}

impl MlResult {
    pub fn mass_of(&self, logical: &BitVector) -> f64 {
        self.masses.iter().find(|(l, _)| l == logical).map_or(0.0, |(_, m)| *m)
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().map(|(_, m)| m).sum()
    }
}

fn check_size(problem: &DecodingProblem) -> Result<()> {
    if problem.num_errors() > MAX_ORACLE_ERRORS {
        return Err(Error::TooLarge {
            n: problem.num_errors(),
            limit: MAX_ORACLE_ERRORS,
        });
    }
    if problem.num_logicals() > 64 {
        return Err(Error::InvalidInput("the oracle handles at most 64 logicals".into()));
    }
    Ok(())
}

/// Calls `visit(e, probability, logical)` for every solution of `He = s`,
/// with `e` and the logical effect packed into `u64`s. Walks a Gray code
/// over the free columns after eliminating `H`.
pub fn for_each_solution<F>(problem: &DecodingProblem, syndrome: &BitVector, mut visit: F) -> Result<()>
where
    F: FnMut(u64, f64, u64),
{
    check_size(problem)?;
    let n = problem.num_errors();
    let mut red = Reduction::new(problem.h().clone(), syndrome.clone())?;
    red.full_reduce(|r| r.first_valid_pivot())?;
    let s = red.syndrome();
    if (0..problem.num_checks()).any(|r| s.get(r) && !red.pivots().is_pivot_row(r)) {
        return Err(Error::NoSolution);
    }
    let free = red.free_columns();
    let pairs = red.pivots().pairs();
    let mut e = pairs.iter().filter(|&&(r, _)| s.get(r)).fold(0u64, |acc, &(_, c)| acc | 1 << c);
    let toggles: Vec<u64> = free
        .iter()
        .map(|&f| {
            pairs
                .iter()
                .filter(|&&(r, _)| red.matrix().get(r, f))
                .fold(1u64 << f, |acc, &(_, c)| acc | 1 << c)
        })
        .collect();

    let l_cols: Vec<u64> = (0..n).map(|j| problem.l().column(j).to_u64()).collect();
    let llrs = problem.llrs();
    let base = problem.log_prob_no_error();
    // Per-byte lookup tables for the logical effect and log weight of `e`.
    let bytes = n.div_ceil(8);
    let mut l_table = vec![[0u64; 256]; bytes];
    let mut w_table = vec![[0f64; 256]; bytes];
    for b in 0..bytes {
        for v in 0..256usize {
            for bit in 0..8 {
                let j = 8 * b + bit;
                if v >> bit & 1 == 1 && j < n {
                    l_table[b][v] ^= l_cols[j];
                    w_table[b][v] -= llrs[j];
                }
            }
        }
    }
    let mut emit = |e: u64| {
        let mut l = 0;
        let mut w = base;
        for b in 0..bytes {
            let v = (e >> (8 * b) & 0xff) as usize;
            l ^= l_table[b][v];
            w += w_table[b][v];
        }
        visit(e, w.exp(), l);
    };

    emit(e);
    for step in 1u64..1 << free.len() {
        e ^= toggles[step.trailing_zeros() as usize];
        emit(e);
    }
    Ok(())
}

/// Maximum likelihood logical class. Ties go to the lexicographically
/// smallest effect.
pub fn ml_decode(problem: &DecodingProblem, syndrome: &BitVector) -> Result<MlResult> {
    let mut masses: HashMap<u64, f64> = HashMap::new();
    for_each_solution(problem, syndrome, |_, p, l| *masses.entry(l).or_insert(0.0) += p)?;
    let k = problem.num_logicals();
    let mut masses: Vec<(BitVector, f64)> = masses.into_iter().map(|(l, m)| (BitVector::from_u64(k, l), m)).collect();
    masses.sort_by(|a, b| a.0.cmp_lex(&b.0));
    let mut best = 0;
    for (i, (_, m)) in masses.iter().enumerate() {
        if *m > masses[best].1 {
            best = i;
        }
    }
    Ok(MlResult {
        logical: masses[best].0.clone(),
        masses,
    })
}

/// `P(e_j = 1 | He = s)` for every column.
pub fn exact_marginals(problem: &DecodingProblem, syndrome: &BitVector) -> Result<PosteriorVector> {
    let n = problem.num_errors();
    let mut ones = vec![0.0; n];
    let mut total = 0.0;
    for_each_solution(problem, syndrome, |e, p, _| {
        total += p;
        for (j, acc) in ones.iter_mut().enumerate() {
            if e >> j & 1 == 1 {
                *acc += p;
            }
        }
    })?;
    let posteriors: Vec<f64> = ones.iter().map(|&x| x / total).collect();
    let hard = crate::bp::hard_decision(&posteriors);
    Ok(PosteriorVector {
        llrs: posteriors.iter().map(|&p| ((1.0 - p) / p).ln()).collect(),
        converged: problem.check_solution(&hard, syndrome),
        posteriors,
        rounds_used: 0,
    })
}

/// [`ml_decode`] behind the [`Decoder`] interface, memoised per syndrome.
#[derive(Clone, Debug)]
pub struct MlDecoder {
    problem: DecodingProblem,
    cache: HashMap<BitVector, BitVector>,
}

impl MlDecoder {
    pub fn new(problem: &DecodingProblem) -> Result<Self> {
        check_size(problem)?;
        Ok(MlDecoder {
            problem: problem.clone(),
            cache: HashMap::new(),
        })
    }
}

impl Decoder for MlDecoder {
    fn decode(&mut self, syndrome: &BitVector) -> Result<DecodeResult> {
        let logical = match self.cache.get(syndrome) {
            Some(l) => l.clone(),
            None => {
                let l = ml_decode(&self.problem, syndrome)?.logical;
                self.cache.insert(syndrome.clone(), l.clone());
                l
            }
        };
        Ok(DecodeResult {
            logical,
            error: None,
            diagnostics: Diagnostics::default(),
        })
    }
}
