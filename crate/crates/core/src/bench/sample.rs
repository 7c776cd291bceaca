use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gf2::BitVector;
use crate::problem::DecodingProblem;

/// A sampled error with its syndrome and true logical effect.
#[derive(Clone, Debug, PartialEq)]
pub struct Shot {
    pub error: BitVector,
    pub syndrome: BitVector,
    pub logical: BitVector,
}

/// Generator for shot `index` of a run seeded with `seed`. Each shot has its
/// own stream, so shots can be drawn in any order or in parallel.
pub fn shot_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Flips each column independently with its prior probability.
pub fn sample_shot<R: Rng + ?Sized>(problem: &DecodingProblem, rng: &mut R) -> Shot {
    let bits: Vec<bool> = problem.priors().iter().map(|&p| rng.random::<f64>() < p).collect();
    let error = BitVector::from_bools(&bits);
    Shot {
        syndrome: problem.syndrome_of(&error),
        logical: problem.logical_of(&error),
        error,
    }
}

/// Shot `index` of run `seed`.
pub fn sample_indexed(problem: &DecodingProblem, seed: u64, index: u64) -> Shot {
    sample_shot(problem, &mut shot_rng(seed, index))
}
