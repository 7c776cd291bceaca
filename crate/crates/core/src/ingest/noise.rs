//! Depolarising noise expressed as independent Pauli mechanisms.
//!
//! Depolarising noise of strength `p` on `t` qubits picks a uniformly random
//! element of the `t`-qubit Pauli group (identity included) with probability
//! `p`. The same distribution arises from XOR-ing together a random subset of
//! all `4^t` Paulis, each included independently with probability
//! `q = (1 - (1 - p)^(1 / 2^(2t - 1))) / 2`.

use rand::Rng;

use super::pauli::PauliString;
use crate::error::{Error, Result};

/// Largest qubit count the samplers enumerate over (`4^t` group elements).
pub const MAX_SAMPLER_QUBITS: usize = 8;

/// Per-mechanism probability equivalent to depolarising strength `p` on `t`
/// qubits.
pub fn depolarising_to_independent(p: f64, t: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability {
            value: p,
            reason: "depolarising strength must lie in [0, 1]",
        });
    }
    if t == 0 {
        return Err(Error::InvalidInput("qubit count must be at least 1".into()));
    }
    let exponent = 1.0 / 2f64.powi(2 * t as i32 - 1);
    Ok((1.0 - (1.0 - p).powf(exponent)) / 2.0)
}

/// Draws the XOR of a subset of all `4^t` Paulis, each included with
/// probability `q`.
pub fn independent_pauli_sampler<R: Rng + ?Sized>(q: f64, t: usize, rng: &mut R) -> Result<PauliString> {
    if !(0.0..=0.5).contains(&q) {
        return Err(Error::InvalidProbability {
            value: q,
            reason: "independent strength must lie in [0, 1/2]",
        });
    }
    check_qubits(t)?;
    let mut acc = 0u64;
    for element in 0..1u64 << (2 * t) {
        if rng.random::<f64>() < q {
            acc ^= element;
        }
    }
    Ok(PauliString::from_symplectic(t, acc))
}

/// Draws from depolarising noise of strength `p` on `t` qubits.
pub fn depolarising_sampler<R: Rng + ?Sized>(p: f64, t: usize, rng: &mut R) -> Result<PauliString> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability {
            value: p,
            reason: "depolarising strength must lie in [0, 1]",
        });
    }
    check_qubits(t)?;
    let element = if rng.random::<f64>() < p {
        rng.random_range(0..1u64 << (2 * t))
    } else {
        0
    };
    Ok(PauliString::from_symplectic(t, element))
}

fn check_qubits(t: usize) -> Result<()> {
    if t == 0 || t > MAX_SAMPLER_QUBITS {
        return Err(Error::InvalidInput(format!(
            "qubit count must lie in 1..={MAX_SAMPLER_QUBITS}"
        )));
    }
    Ok(())
}
