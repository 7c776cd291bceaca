//! Decoders for quantum error correction decoding problems `(H, L, priors)`:
//! ambiguity clustering, BP-OSD, plain BP and an exact small-instance
//! oracle, with the GF(2) machinery they share and a Monte Carlo harness.
//!
//! ```
//! use acdec::ac::{AcConfig, AcDecoder};
//! use acdec::gf2::{BitVector, SparseBitMatrix};
//! use acdec::problem::DecodingProblem;
//!
//! // Repetition code on three bits, one logical.
//! let h = SparseBitMatrix::from_dense(&[[1, 1, 0], [0, 1, 1]]);
//! let l = SparseBitMatrix::from_dense(&[[1, 0, 0]]);
//! let problem = DecodingProblem::new(h, l, vec![0.1; 3]).unwrap();
//! let mut decoder = AcDecoder::new(&problem, AcConfig::with_kappa(0.5)).unwrap();
//! let result = decoder.decode(&"10".parse::<BitVector>().unwrap()).unwrap();
//! assert_eq!(result.logical, "1".parse().unwrap());
//! ```

pub mod ac;
pub mod bench;
pub mod bp;
pub mod decoder;
pub mod error;
pub mod gf2;
pub mod ingest;
pub mod oracle;
pub mod osd;
pub mod problem;

pub use decoder::{DecodeResult, Decoder, DecoderSpec, Diagnostics};
pub use error::{Error, Result};
pub use gf2::{BitVector, SparseBitMatrix};
pub use problem::DecodingProblem;
