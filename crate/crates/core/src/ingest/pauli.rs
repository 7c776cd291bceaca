use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Symplectic `(x, z)` components.
    pub fn xz(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_xz(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn anticommutes(self, other: Pauli) -> bool {
        let (x1, z1) = self.xz();
        let (x2, z2) = other.xz();
        (x1 & z2) ^ (z1 & x2)
    }

    /// The three non-identity Paulis in column order.
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
}

/// Tensor product of single-qubit Paulis, up to phase.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(paulis: Vec<Pauli>) -> Self {
        PauliString(paulis)
    }

    pub fn identity(qubits: usize) -> Self {
        PauliString(vec![Pauli::I; qubits])
    }

    pub fn num_qubits(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        self.0[qubit]
    }

    pub fn paulis(&self) -> &[Pauli] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&p| p == Pauli::I)
    }

    pub fn anticommutes(&self, other: &PauliString) -> bool {
        assert_eq!(self.num_qubits(), other.num_qubits());
        self.0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| a.anticommutes(**b))
            .count()
            % 2
            == 1
    }

    /// Packs into `2t` bits: qubit `q` contributes `x` at bit `2q` and `z` at
    /// bit `2q + 1`.
    pub fn to_symplectic(&self) -> u64 {
        assert!(self.num_qubits() <= 32);
        self.0.iter().enumerate().fold(0, |acc, (q, p)| {
            let (x, z) = p.xz();
            acc | (x as u64) << (2 * q) | (z as u64) << (2 * q + 1)
        })
    }

    pub fn from_symplectic(qubits: usize, bits: u64) -> Self {
        PauliString(
            (0..qubits)
                .map(|q| Pauli::from_xz(bits >> (2 * q) & 1 == 1, bits >> (2 * q + 1) & 1 == 1))
                .collect(),
        )
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' | '_' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidInput(format!("not a Pauli letter: {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            f.write_str(match p {
                Pauli::I => "I",
                Pauli::X => "X",
                Pauli::Y => "Y",
                Pauli::Z => "Z",
            })?;
        }
        Ok(())
    }
}
