use std::fmt;

use super::BitVector;
use crate::error::{Error, Result};

/// Binary matrix supporting fast row addition and column-support queries.
///
/// Rows are stored as packed bit vectors so that adding one row to another is
/// word-parallel. Column supports are answered from a sorted index built at
/// construction time, overlaid with a scan of the rows that have been
/// modified since. For the sparse syndromes seen during decoding only a small
/// fraction of rows is ever modified, so column queries stay close to the cost
/// of the original column weight.
#[derive(Clone)]
pub struct SparseBitMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<BitVector>,
    base_cols: Vec<Vec<usize>>,
    dirty: Vec<bool>,
    dirty_rows: Vec<usize>,
}

impl SparseBitMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        SparseBitMatrix {
            n_rows,
            n_cols,
            rows: vec![BitVector::zeros(n_cols); n_rows],
            base_cols: vec![Vec::new(); n_cols],
            dirty: vec![false; n_rows],
            dirty_rows: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_row_supports(n, n, (0..n).map(|i| vec![i])).expect("identity is well formed")
    }

    /// Builds a matrix from the column indices of the ones in each row.
    /// Repeated indices within a row cancel mod 2.
    pub fn from_row_supports<I, R>(n_rows: usize, n_cols: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = usize>,
    {
        let mut packed = Vec::with_capacity(n_rows);
        for (r, support) in rows.into_iter().enumerate() {
            if r >= n_rows {
                return Err(Error::DimensionMismatch(format!(
                    "more than {n_rows} rows supplied"
                )));
            }
            let mut row = BitVector::zeros(n_cols);
            for c in support {
                if c >= n_cols {
                    return Err(Error::DimensionMismatch(format!(
                        "column index {c} out of range for {n_cols} columns"
                    )));
                }
                row.flip(c);
            }
            packed.push(row);
        }
        if packed.len() != n_rows {
            return Err(Error::DimensionMismatch(format!(
                "expected {n_rows} rows, got {}",
                packed.len()
            )));
        }
        Ok(Self::from_rows(n_cols, packed))
    }

    /// Builds a matrix from the row indices of the ones in each column.
    pub fn from_col_supports<I, C>(n_rows: usize, n_cols: usize, cols: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: IntoIterator<Item = usize>,
    {
        let mut rows = vec![BitVector::zeros(n_cols); n_rows];
        let mut count = 0;
        for (c, support) in cols.into_iter().enumerate() {
            if c >= n_cols {
                return Err(Error::DimensionMismatch(format!(
                    "more than {n_cols} columns supplied"
                )));
            }
            for r in support {
                if r >= n_rows {
                    return Err(Error::DimensionMismatch(format!(
                        "row index {r} out of range for {n_rows} rows"
                    )));
                }
                rows[r].flip(c);
            }
            count += 1;
        }
        if count != n_cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {n_cols} columns, got {count}"
            )));
        }
        Ok(Self::from_rows(n_cols, rows))
    }

    /// Dense constructor, mostly for tests and small examples.
    pub fn from_dense<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let n_cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let packed: Vec<BitVector> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.as_ref().len(), n_cols, "ragged dense matrix");
                BitVector::from_bits(r.as_ref())
            })
            .collect();
        Self::from_rows(n_cols, packed)
    }

    pub fn from_rows(n_cols: usize, rows: Vec<BitVector>) -> Self {
        assert!(rows.iter().all(|r| r.len() == n_cols), "row length mismatch");
        let n_rows = rows.len();
        let mut m = SparseBitMatrix {
            n_rows,
            n_cols,
            rows,
            base_cols: Vec::new(),
            dirty: vec![false; n_rows],
            dirty_rows: Vec::new(),
        };
        m.rebuild_column_index();
        m
    }

    fn rebuild_column_index(&mut self) {
        let mut cols = vec![Vec::new(); self.n_cols];
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                cols[c].push(r);
            }
        }
        self.base_cols = cols;
        self.dirty.iter_mut().for_each(|d| *d = false);
        self.dirty_rows.clear();
    }

    #[inline]
    pub fn num_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn num_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row].get(col)
    }

    #[inline]
    pub fn row(&self, row: usize) -> &BitVector {
        &self.rows[row]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    /// Sorted column indices of the ones in `row`.
    pub fn row_support(&self, row: usize) -> Vec<usize> {
        self.rows[row].ones()
    }

    /// Sorted row indices of the ones in `col`.
    pub fn col_support(&self, col: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.col_support_into(col, &mut out);
        out
    }

    /// Writes the sorted support of `col` into `out`, replacing its contents.
    pub fn col_support_into(&self, col: usize, out: &mut Vec<usize>) {
        out.clear();
        out.extend(self.base_cols[col].iter().copied().filter(|&r| !self.dirty[r]));
        if !self.dirty_rows.is_empty() {
            let before = out.len();
            out.extend(
                self.dirty_rows
                    .iter()
                    .copied()
                    .filter(|&r| self.rows[r].get(col)),
            );
            if out.len() > before {
                out.sort_unstable();
            }
        }
    }

    /// Number of ones in `col`.
    pub fn col_weight(&self, col: usize) -> usize {
        let clean = self.base_cols[col].iter().filter(|&&r| !self.dirty[r]).count();
        clean + self.dirty_rows.iter().filter(|&&r| self.rows[r].get(col)).count()
    }

    pub fn column(&self, col: usize) -> BitVector {
        BitVector::from_indices(self.n_rows, self.col_support(col))
    }

    /// Adds row `src` to row `tgt` (mod 2).
    pub fn add_row(&mut self, src: usize, tgt: usize) {
        assert_ne!(src, tgt, "cannot add a row to itself");
        let (s, t) = if src < tgt {
            let (lo, hi) = self.rows.split_at_mut(tgt);
            (&lo[src], &mut hi[0])
        } else {
            let (lo, hi) = self.rows.split_at_mut(src);
            (&hi[0], &mut lo[tgt])
        };
        for (a, b) in t.words_mut().iter_mut().zip(s.words()) {
            *a ^= *b;
        }
        if !self.dirty[tgt] {
            self.dirty[tgt] = true;
            self.dirty_rows.push(tgt);
        }
    }

    /// Declares that every row once again equals its value at construction.
    /// Only valid after the modifications have been undone.
    pub(crate) fn mark_restored(&mut self) {
        for &r in &self.dirty_rows {
            self.dirty[r] = false;
        }
        self.dirty_rows.clear();
    }

    /// Resets every modified row to its value in `pristine`, the unmodified
    /// matrix this one was cloned from. Costs one row copy per modified row.
    pub fn restore_from(&mut self, pristine: &SparseBitMatrix) {
        debug_assert!(pristine.dirty_rows.is_empty(), "pristine matrix has been modified");
        debug_assert_eq!((self.n_rows, self.n_cols), (pristine.n_rows, pristine.n_cols));
        for &r in &self.dirty_rows {
            self.rows[r]
                .words_mut()
                .copy_from_slice(pristine.rows[r].words());
            self.dirty[r] = false;
        }
        self.dirty_rows.clear();
    }

    pub fn num_modified_rows(&self) -> usize {
        self.dirty_rows.len()
    }

    /// Matrix-vector product over GF(2).
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.n_cols, "vector length must equal column count");
        if self.dirty_rows.is_empty() {
            let mut out = BitVector::zeros(self.n_rows);
            for c in v.iter_ones() {
                for &r in &self.base_cols[c] {
                    out.flip(r);
                }
            }
            out
        } else {
            let mut out = BitVector::zeros(self.n_rows);
            for (r, row) in self.rows.iter().enumerate() {
                if row.dot(v) {
                    out.set(r, true);
                }
            }
            out
        }
    }

    pub fn transpose(&self) -> SparseBitMatrix {
        SparseBitMatrix::from_row_supports(
            self.n_cols,
            self.n_rows,
            (0..self.n_cols).map(|c| self.col_support(c)),
        )
        .expect("transpose preserves bounds")
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BitVector::count_ones).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| (0..self.n_cols).map(|c| r.get(c) as u8).collect())
            .collect()
    }
}

impl PartialEq for SparseBitMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n_rows == other.n_rows && self.n_cols == other.n_cols && self.rows == other.rows
    }
}

impl Eq for SparseBitMatrix {}

impl fmt::Debug for SparseBitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseBitMatrix {}x{} [", self.n_rows, self.n_cols)?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}
