//! Pivot operations and the bookkeeping shared by every elimination-based
//! decoder stage.
//!
//! A pivot at `(i, j)` adds row `i` to every other row with a one in column
//! `j`, applying the same additions to the syndrome. The solution set
//! `{e : He = s}` is unchanged, and column `j` is left with a single one in
//! row `i`. Later pivots on other rows never disturb it again.

use super::{BitVector, SparseBitMatrix};
use crate::error::{Error, Result};

/// Pivot row/column pairs chosen so far.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PivotAssignment {
    row_to_col: Vec<Option<usize>>,
    col_to_row: Vec<Option<usize>>,
    order: Vec<(usize, usize)>,
}

impl PivotAssignment {
    pub fn new(n_rows: usize, n_cols: usize) -> Self {
        PivotAssignment {
            row_to_col: vec![None; n_rows],
            col_to_row: vec![None; n_cols],
            order: Vec::new(),
        }
    }

    #[inline]
    pub fn col_of(&self, row: usize) -> Option<usize> {
        self.row_to_col[row]
    }

    #[inline]
    pub fn row_of(&self, col: usize) -> Option<usize> {
        self.col_to_row[col]
    }

    #[inline]
    pub fn is_pivot_row(&self, row: usize) -> bool {
        self.row_to_col[row].is_some()
    }

    #[inline]
    pub fn is_pivot_col(&self, col: usize) -> bool {
        self.col_to_row[col].is_some()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Pivots as `(row, col)` in the order they were made.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.order
    }

    fn insert(&mut self, row: usize, col: usize) {
        self.row_to_col[row] = Some(col);
        self.col_to_row[col] = Some(row);
        self.order.push((row, col));
    }

    fn clear(&mut self) {
        for &(r, c) in &self.order {
            self.row_to_col[r] = None;
            self.col_to_row[c] = None;
        }
        self.order.clear();
    }
}

/// Ordered record of row additions, `(source, target)`.
///
/// Stands in for the matrix `R` with `H' = R H`; it is only ever replayed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RowOpLog {
    ops: Vec<(usize, usize)>,
}

impl RowOpLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, src: usize, tgt: usize) {
        self.ops.push((src, tgt));
    }

    pub fn ops(&self) -> &[(usize, usize)] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn clear(&mut self) {
        self.ops.clear();
    }

    /// Applies the logged additions, in order, to a matrix and vector.
    pub fn replay(&self, matrix: &mut SparseBitMatrix, vector: &mut BitVector) {
        for &(src, tgt) in &self.ops {
            matrix.add_row(src, tgt);
            if vector.get(src) {
                vector.flip(tgt);
            }
        }
    }

    /// Applies the logged additions to a vector only, i.e. computes `R v`.
    pub fn apply_to(&self, vector: &mut BitVector) {
        for &(src, tgt) in &self.ops {
            if vector.get(src) {
                vector.flip(tgt);
            }
        }
    }

    /// Reverts the logged additions. Each addition is its own inverse, so
    /// this is a replay in reverse order.
    pub fn undo(&self, matrix: &mut SparseBitMatrix, vector: &mut BitVector) {
        for &(src, tgt) in self.ops.iter().rev() {
            matrix.add_row(src, tgt);
            if vector.get(src) {
                vector.flip(tgt);
            }
        }
    }
}

/// Pivots at `(row, col)`, updating matrix, syndrome, log and assignment.
///
/// Returns the rows that had the pivot row added to them, in increasing order.
pub fn pivot_at(
    matrix: &mut SparseBitMatrix,
    syndrome: &mut BitVector,
    log: &mut RowOpLog,
    pivots: &mut PivotAssignment,
    row: usize,
    col: usize,
) -> Result<Vec<usize>> {
    let mut targets = Vec::new();
    pivot_into(matrix, syndrome, log, pivots, row, col, &mut targets)?;
    Ok(targets)
}

pub(crate) fn pivot_into(
    matrix: &mut SparseBitMatrix,
    syndrome: &mut BitVector,
    log: &mut RowOpLog,
    pivots: &mut PivotAssignment,
    row: usize,
    col: usize,
    targets: &mut Vec<usize>,
) -> Result<()> {
    if row >= matrix.num_rows() || col >= matrix.num_cols() {
        return Err(Error::InvalidPivot {
            row,
            col,
            reason: "index out of range",
        });
    }
    if !matrix.get(row, col) {
        return Err(Error::InvalidPivot {
            row,
            col,
            reason: "entry is zero",
        });
    }
    if pivots.is_pivot_row(row) {
        return Err(Error::InvalidPivot {
            row,
            col,
            reason: "row is already a pivot row",
        });
    }
    if pivots.is_pivot_col(col) {
        return Err(Error::InvalidPivot {
            row,
            col,
            reason: "column is already a pivot column",
        });
    }
    matrix.col_support_into(col, targets);
    targets.retain(|&r| r != row);
    let flip = syndrome.get(row);
    for &tgt in targets.iter() {
        matrix.add_row(row, tgt);
        if flip {
            syndrome.flip(tgt);
        }
        log.push(row, tgt);
    }
    pivots.insert(row, col);
    Ok(())
}

/// Live elimination state: the transformed matrix and syndrome, the log of
/// row operations that produced them, and the pivots made so far.
#[derive(Clone, Debug)]
pub struct Reduction {
    matrix: SparseBitMatrix,
    syndrome: BitVector,
    log: RowOpLog,
    pivots: PivotAssignment,
    targets: Vec<usize>,
}

impl Reduction {
    pub fn new(matrix: SparseBitMatrix, syndrome: BitVector) -> Result<Self> {
        if syndrome.len() != matrix.num_rows() {
            return Err(Error::DimensionMismatch(format!(
                "syndrome has length {}, matrix has {} rows",
                syndrome.len(),
                matrix.num_rows()
            )));
        }
        let pivots = PivotAssignment::new(matrix.num_rows(), matrix.num_cols());
        Ok(Reduction {
            matrix,
            syndrome,
            log: RowOpLog::new(),
            pivots,
            targets: Vec::new(),
        })
    }

    pub fn matrix(&self) -> &SparseBitMatrix {
        &self.matrix
    }

    pub fn syndrome(&self) -> &BitVector {
        &self.syndrome
    }

    pub fn log(&self) -> &RowOpLog {
        &self.log
    }

    pub fn pivots(&self) -> &PivotAssignment {
        &self.pivots
    }

    pub fn into_parts(self) -> (SparseBitMatrix, BitVector, RowOpLog, PivotAssignment) {
        (self.matrix, self.syndrome, self.log, self.pivots)
    }

    pub fn is_valid_pivot(&self, row: usize, col: usize) -> bool {
        row < self.matrix.num_rows()
            && col < self.matrix.num_cols()
            && !self.pivots.is_pivot_row(row)
            && !self.pivots.is_pivot_col(col)
            && self.matrix.get(row, col)
    }

    /// Pivots at `(row, col)` and returns the rows the pivot row was added to.
    pub fn pivot(&mut self, row: usize, col: usize) -> Result<&[usize]> {
        pivot_into(
            &mut self.matrix,
            &mut self.syndrome,
            &mut self.log,
            &mut self.pivots,
            row,
            col,
            &mut self.targets,
        )?;
        Ok(&self.targets)
    }

    /// Pivots while `choose` proposes entries; stops when it returns `None`.
    /// Returns the number of pivots performed.
    pub fn full_reduce<F>(&mut self, mut choose: F) -> Result<usize>
    where
        F: FnMut(&Reduction) -> Option<(usize, usize)>,
    {
        let mut count = 0;
        while let Some((row, col)) = choose(self) {
            self.pivot(row, col)?;
            count += 1;
        }
        Ok(count)
    }

    /// The lowest-column valid pivot, lowest row within that column.
    pub fn first_valid_pivot(&self) -> Option<(usize, usize)> {
        (0..self.matrix.num_cols())
            .filter(|&c| !self.pivots.is_pivot_col(c))
            .find_map(|c| {
                self.matrix
                    .col_support(c)
                    .into_iter()
                    .find(|&r| !self.pivots.is_pivot_row(r))
                    .map(|r| (r, c))
            })
    }

    /// Non-pivot columns in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.matrix.num_cols())
            .filter(|&c| !self.pivots.is_pivot_col(c))
            .collect()
    }

    /// Reads off the solution with free-column values `g` (indexed like
    /// [`free_columns`](Self::free_columns)) and pivot-column values
    /// `s + B g`.
    pub fn solve_from_reduced(&self, g: &BitVector) -> Result<BitVector> {
        solve_from_reduced(&self.pivots, &self.syndrome, g, &self.matrix)
    }

    /// Clears pivots and log and reinstates `pristine` (the matrix this state
    /// was built from) together with a new syndrome.
    pub fn reset(&mut self, pristine: &SparseBitMatrix, syndrome: &BitVector) {
        self.matrix.restore_from(pristine);
        self.syndrome.clone_from(syndrome);
        self.log.clear();
        self.pivots.clear();
    }

    /// Reverts all logged row operations in place and clears the pivots.
    pub fn undo_all(&mut self) {
        self.log.undo(&mut self.matrix, &mut self.syndrome);
        self.matrix.mark_restored();
        self.log.clear();
        self.pivots.clear();
    }
}

/// See [`Reduction::solve_from_reduced`].
pub fn solve_from_reduced(
    pivots: &PivotAssignment,
    syndrome: &BitVector,
    g: &BitVector,
    matrix: &SparseBitMatrix,
) -> Result<BitVector> {
    let n = matrix.num_cols();
    let free: Vec<usize> = (0..n).filter(|&c| !pivots.is_pivot_col(c)).collect();
    if g.len() != free.len() {
        return Err(Error::DimensionMismatch(format!(
            "free-choice vector has length {}, there are {} non-pivot columns",
            g.len(),
            free.len()
        )));
    }
    for r in 0..matrix.num_rows() {
        if !pivots.is_pivot_row(r) && syndrome.get(r) && matrix.row(r).is_zero() {
            return Err(Error::Inconsistent { row: r });
        }
    }
    let mut e = BitVector::from_indices(n, g.iter_ones().map(|k| free[k]));
    let free_part = e.clone();
    for &(r, c) in pivots.pairs() {
        let bit = syndrome.get(r) ^ matrix.row(r).dot(&free_part);
        e.set(c, bit);
    }
    let check = matrix.mul_vec(&e);
    if let Some(r) = (0..matrix.num_rows()).find(|&r| check.get(r) != syndrome.get(r)) {
        return Err(Error::Inconsistent { row: r });
    }
    Ok(e)
}

/// Tests whether `target` lies in the span of `basis`, whose rows are in
/// reduced form with `pivot_cols[k]` the pivot column of row `k`.
///
/// The only candidate combination has coefficient `target[pivot_cols[k]]`
/// on row `k`; it is returned when it reproduces `target`.
pub fn row_in_span(
    target: &BitVector,
    basis: &[BitVector],
    pivot_cols: &[usize],
) -> Option<BitVector> {
    assert_eq!(basis.len(), pivot_cols.len(), "one pivot column per basis row");
    let coefficients = BitVector::from_indices(
        basis.len(),
        (0..basis.len()).filter(|&k| target.get(pivot_cols[k])),
    );
    let mut combination = BitVector::zeros(target.len());
    for k in coefficients.iter_ones() {
        combination.xor_assign(&basis[k]);
    }
    (combination == *target).then_some(coefficients)
}

/// Whether the matrix is in reduced form: some set of columns with exactly
/// one 1 each covers every row.
pub fn is_reduced(matrix: &SparseBitMatrix) -> bool {
    let mut covered = vec![false; matrix.num_rows()];
    for c in 0..matrix.num_cols() {
        let support = matrix.col_support(c);
        if support.len() == 1 {
            covered[support[0]] = true;
        }
    }
    covered.iter().all(|&x| x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn single_pivot_updates_matrix_and_syndrome() {
        let mut red = Reduction::new(SparseBitMatrix::from_dense(&[[1, 1], [1, 0]]), bits("10")).unwrap();
        let added = red.pivot(0, 0).unwrap().to_vec();
        assert_eq!(added, vec![1]);
        assert_eq!(red.matrix().to_dense(), vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(red.syndrome(), &bits("11"));
        assert_eq!(red.log().ops(), &[(0, 1)]);
        assert_eq!(red.pivots().col_of(0), Some(0));
    }

    #[test]
    fn pivot_on_isolated_column_adds_nothing() {
        let h = SparseBitMatrix::from_dense(&[[1, 1, 0], [0, 1, 1]]);
        let mut red = Reduction::new(h.clone(), bits("11")).unwrap();
        assert!(red.pivot(0, 0).unwrap().is_empty());
        assert_eq!(red.matrix(), &h);
        assert_eq!(red.syndrome(), &bits("11"));
        assert!(red.log().is_empty());
        assert!(red.pivots().is_pivot_col(0));
    }

    #[test]
    fn invalid_pivots_are_rejected() {
        let mut red = Reduction::new(SparseBitMatrix::from_dense(&[[1, 0], [1, 1]]), bits("00")).unwrap();
        assert!(matches!(red.pivot(0, 1), Err(Error::InvalidPivot { reason: "entry is zero", .. })));
        red.pivot(0, 0).unwrap();
        assert!(matches!(
            red.pivot(0, 0),
            Err(Error::InvalidPivot { reason: "row is already a pivot row", .. })
        ));
        assert!(matches!(
            red.pivot(1, 0),
            Err(Error::InvalidPivot { .. })
        ));
    }

    #[test]
    fn full_reduce_edge_cases() {
        let mut zero = Reduction::new(SparseBitMatrix::zeros(3, 4), BitVector::zeros(3)).unwrap();
        assert_eq!(zero.full_reduce(Reduction::first_valid_pivot).unwrap(), 0);

        let id = SparseBitMatrix::identity(4);
        let mut red = Reduction::new(id.clone(), bits("1010")).unwrap();
        assert_eq!(red.full_reduce(Reduction::first_valid_pivot).unwrap(), 4);
        assert_eq!(red.matrix(), &id);
        assert!(is_reduced(red.matrix()));

        let mut empty = Reduction::new(SparseBitMatrix::zeros(0, 0), BitVector::zeros(0)).unwrap();
        assert_eq!(empty.full_reduce(Reduction::first_valid_pivot).unwrap(), 0);
    }

    #[test]
    fn dependent_rows_stay_unpivoted() {
        let h = SparseBitMatrix::from_dense(&[[1, 1, 0], [0, 1, 1], [1, 0, 1]]);
        let mut red = Reduction::new(h, bits("110")).unwrap();
        assert_eq!(red.full_reduce(Reduction::first_valid_pivot).unwrap(), 2);
        let unpivoted = (0..3).find(|&r| !red.pivots().is_pivot_row(r)).unwrap();
        assert!(red.matrix().row(unpivoted).is_zero());
        assert!(!red.syndrome().get(unpivoted));
    }

    #[test]
    fn inconsistent_syndrome_is_detected() {
        let h = SparseBitMatrix::from_dense(&[[1, 1], [1, 1]]);
        let mut red = Reduction::new(h, bits("10")).unwrap();
        red.full_reduce(Reduction::first_valid_pivot).unwrap();
        assert!(matches!(
            red.solve_from_reduced(&BitVector::zeros(1)),
            Err(Error::Inconsistent { row: 1 })
        ));
    }

    #[test]
    fn solve_with_all_zero_syndrome_and_choice() {
        let h = SparseBitMatrix::from_dense(&[[1, 0, 0, 0, 1], [0, 1, 0, 0, 1], [0, 0, 1, 0, 1], [0, 0, 0, 1, 1]]);
        let mut red = Reduction::new(h, BitVector::zeros(4)).unwrap();
        red.full_reduce(Reduction::first_valid_pivot).unwrap();
        assert!(red.solve_from_reduced(&BitVector::zeros(1)).unwrap().is_zero());
    }

    #[test]
    fn undo_restores_the_original_state() {
        let h = SparseBitMatrix::from_dense(&[[1, 1, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1]]);
        let s = bits("101");
        let mut red = Reduction::new(h.clone(), s.clone()).unwrap();
        red.full_reduce(Reduction::first_valid_pivot).unwrap();
        assert!(!red.log().is_empty());
        red.undo_all();
        assert_eq!(red.matrix(), &h);
        assert_eq!(red.syndrome(), &s);
        assert_eq!(red.matrix().num_modified_rows(), 0);
        assert!(red.pivots().is_empty());

        red.full_reduce(Reduction::first_valid_pivot).unwrap();
        red.reset(&h, &bits("011"));
        assert_eq!(red.matrix(), &h);
        assert_eq!(red.syndrome(), &bits("011"));
        assert_eq!(red.matrix().col_support(3), vec![0, 1, 2]);
    }

    #[test]
    fn span_membership() {
        let basis = [bits("11")];
        assert_eq!(row_in_span(&bits("11"), &basis, &[0]), Some(bits("1")));
        assert_eq!(row_in_span(&bits("10"), &basis, &[0]), None);
        assert_eq!(row_in_span(&bits("00"), &basis, &[0]), Some(bits("0")));
    }
}
