//! Binary linear algebra: packed vectors, row-packed sparse matrices and the
//! pivot machinery used by the elimination-based decoders.

mod bitvec;
mod matrix;
mod reduce;

pub use bitvec::{BitVector, Ones};
pub use matrix::SparseBitMatrix;
pub use reduce::{
    is_reduced, pivot_at, row_in_span, solve_from_reduced, PivotAssignment, Reduction, RowOpLog,
};
