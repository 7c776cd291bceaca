//! Constructors turning external code and noise descriptions into
//! [`DecodingProblem`]s.

mod dem;
mod noise;
mod pauli;

pub use dem::{column_weight_histogram, parse_dem, parse_dem_str, parse_line, write_dem, DemInstruction};
pub use noise::{depolarising_sampler, depolarising_to_independent, independent_pauli_sampler, MAX_SAMPLER_QUBITS};
pub use pauli::{Pauli, PauliString};

use crate::error::{Error, Result};
use crate::gf2::SparseBitMatrix;
use crate::problem::{canonicalise, DecodingProblem, RawColumn};

/// Classical linear code with an `(n - k) x n` parity check matrix whose
/// generator is in standard form `[I *]`, under bit-flip noise `p`.
///
/// The message bits are the first `k` coordinates, so `L = [I 0]`.
pub fn from_classical(h: SparseBitMatrix, k: usize, p: f64) -> Result<DecodingProblem> {
    let n = h.num_cols();
    if k > n || h.num_rows() != n - k {
        return Err(Error::DimensionMismatch(format!(
            "a {}x{n} parity check matrix does not describe a code with k = {k}",
            h.num_rows()
        )));
    }
    let l = SparseBitMatrix::from_row_supports(k, n, (0..k).map(|i| [i]))?;
    DecodingProblem::new(h, l, vec![p; n])
}

/// Anticommutation matrix of `operators` against the single-qubit errors
/// `X_1, Y_1, Z_1, X_2, ...`: entry `(i, 3q + a)` is 1 when the `a`-th
/// non-identity Pauli on qubit `q` anticommutes with operator `i`.
pub fn pauli_check_matrix(operators: &[PauliString], qubits: usize) -> Result<SparseBitMatrix> {
    if let Some(bad) = operators.iter().find(|o| o.num_qubits() != qubits) {
        return Err(Error::DimensionMismatch(format!(
            "operator {bad} acts on {} qubits, expected {qubits}",
            bad.num_qubits()
        )));
    }
    SparseBitMatrix::from_row_supports(
        operators.len(),
        3 * qubits,
        operators.iter().map(|op| {
            (0..qubits).flat_map(move |q| {
                Pauli::NON_IDENTITY
                    .iter()
                    .enumerate()
                    .filter(move |(_, a)| a.anticommutes(op.get(q)))
                    .map(move |(idx, _)| 3 * q + idx)
            })
        }),
    )
}

/// Stabiliser code with perfect measurements under single-qubit depolarising
/// noise of strength `p`, expressed as independent X, Y and Z mechanisms on
/// every qubit.
pub fn from_stabilisers(
    generators: &[PauliString],
    logicals: &[PauliString],
    p: f64,
) -> Result<DecodingProblem> {
    let qubits = generators
        .first()
        .or(logicals.first())
        .map(PauliString::num_qubits)
        .unwrap_or(0);
    let h = pauli_check_matrix(generators, qubits)?;
    let l = pauli_check_matrix(logicals, qubits)?;
    for (i, g) in generators.iter().enumerate() {
        for (j, q) in logicals.iter().enumerate() {
            if g.anticommutes(q) {
                return Err(Error::InvalidInput(format!(
                    "logical {j} ({q}) anticommutes with stabiliser {i} ({g})"
                )));
            }
        }
    }
    let prior = depolarising_to_independent(p, 1)?;
    let columns = (0..3 * qubits).map(|j| RawColumn::new(h.col_support(j), l.col_support(j), prior));
    canonicalise(generators.len(), logicals.len(), columns)
}
