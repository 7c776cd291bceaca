use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::cluster::Cluster;
use crate::error::{Error, Result};
use crate::gf2::{BitVector, Reduction, SparseBitMatrix};

/// Heap entry: the column with the lowest posterior LLR (highest `p_j`)
/// pops first, ties to the lower column index.
#[derive(Clone, Copy, Debug)]
struct Entry {
    llr: f64,
    col: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.llr.total_cmp(&self.llr).then(other.col.cmp(&self.col))
    }
}

/// Outcome of stage 2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GrowthSummary {
    /// Columns admitted to `C` during this stage.
    pub added: usize,
    /// Of those, the ones that seeded a new block with a pivot.
    pub seeds: usize,
    /// Ran out of eligible columns before the budget was spent.
    pub exhausted: bool,
}

/// Elimination state shared by stages 1 and 2, reusable across syndromes.
#[derive(Clone, Debug)]
pub struct EliminationState {
    pristine: SparseBitMatrix,
    red: Reduction,
    touched: Vec<bool>,
    touched_list: Vec<usize>,
    in_c: Vec<bool>,
    c_list: Vec<usize>,
    // Union-find over blocks. Every pivot opens a block; grown columns join
    // the block of their rows.
    parent: Vec<usize>,
    block_of_row: Vec<usize>,
    grown: Vec<(usize, usize)>,
    heap: BinaryHeap<Entry>,
    support: Vec<usize>,
    stage1_pivots: usize,
}

const NONE: usize = usize::MAX;

impl EliminationState {
    pub fn new(h: &SparseBitMatrix) -> Self {
        let (m, n) = (h.num_rows(), h.num_cols());
        EliminationState {
            pristine: h.clone(),
            red: Reduction::new(h.clone(), BitVector::zeros(m)).expect("dimensions agree"),
            touched: vec![false; m],
            touched_list: Vec::new(),
            in_c: vec![false; n],
            c_list: Vec::new(),
            parent: Vec::new(),
            block_of_row: vec![NONE; m],
            grown: Vec::new(),
            heap: BinaryHeap::new(),
            support: Vec::new(),
            stage1_pivots: 0,
        }
    }

    /// Restores `H`, installs a new syndrome and clears all bookkeeping.
    pub fn reset(&mut self, syndrome: &BitVector) -> Result<()> {
        if syndrome.len() != self.pristine.num_rows() {
            return Err(Error::DimensionMismatch(format!(
                "syndrome has length {}, H has {} rows",
                syndrome.len(),
                self.pristine.num_rows()
            )));
        }
        self.red.reset(&self.pristine, syndrome);
        for &r in &self.touched_list {
            self.touched[r] = false;
            self.block_of_row[r] = NONE;
        }
        self.touched_list.clear();
        for &c in &self.c_list {
            self.in_c[c] = false;
        }
        self.c_list.clear();
        self.parent.clear();
        self.grown.clear();
        self.heap.clear();
        self.stage1_pivots = 0;
        Ok(())
    }

    pub fn reduction(&self) -> &Reduction {
        &self.red
    }

    pub fn matrix(&self) -> &SparseBitMatrix {
        self.red.matrix()
    }

    pub fn syndrome(&self) -> &BitVector {
        self.red.syndrome()
    }

    pub fn is_touched(&self, row: usize) -> bool {
        self.touched[row]
    }

    /// Rows that have been a pivot row or had a pivot row added to them.
    pub fn touched_rows(&self) -> Vec<usize> {
        let mut rows = self.touched_list.clone();
        rows.sort_unstable();
        rows
    }

    pub fn in_c(&self, col: usize) -> bool {
        self.in_c[col]
    }

    /// Columns of `C` in increasing order.
    pub fn c_columns(&self) -> Vec<usize> {
        let mut cols = self.c_list.clone();
        cols.sort_unstable();
        cols
    }

    pub fn stage1_pivots(&self) -> usize {
        self.stage1_pivots
    }

    /// `e0`: the reduced syndrome placed on the pivot columns.
    pub fn initial_solution(&self) -> BitVector {
        let n = self.pristine.num_cols();
        let s = self.red.syndrome();
        BitVector::from_indices(
            n,
            self.red.pivots().pairs().iter().filter(|&&(r, _)| s.get(r)).map(|&(_, c)| c),
        )
    }

    fn touch(&mut self, row: usize) -> bool {
        if self.touched[row] {
            return false;
        }
        self.touched[row] = true;
        self.touched_list.push(row);
        true
    }

    fn admit(&mut self, col: usize) {
        debug_assert!(!self.in_c[col]);
        self.in_c[col] = true;
        self.c_list.push(col);
    }

    fn find(&mut self, mut b: usize) -> usize {
        while self.parent[b] != b {
            self.parent[b] = self.parent[self.parent[b]];
            b = self.parent[b];
        }
        b
    }

    fn push_row(&mut self, row: usize, llrs: &[f64]) {
        let matrix = self.red.matrix();
        for col in matrix.row(row).iter_ones() {
            if !self.in_c[col] {
                self.heap.push(Entry { llr: llrs[col], col });
            }
        }
    }

    fn do_pivot(&mut self, row: usize, col: usize, llrs: &[f64], stage1: bool) -> Result<()> {
        let targets = self.red.pivot(row, col)?.to_vec();
        self.admit(col);
        self.touch(row);
        let block = self.parent.len();
        self.parent.push(block);
        self.block_of_row[row] = block;
        for t in targets {
            self.touch(t);
            // Stage 1 only cares about rows left with a nonzero syndrome; in
            // stage 2 every touched row is a source of eligible columns.
            if !stage1 || self.red.syndrome().get(t) {
                self.push_row(t, llrs);
            }
        }
        Ok(())
    }

    /// Stage 1: pivot on nonzero-syndrome rows, always at the most likely
    /// column available, until every such row is a pivot row.
    pub fn stage1(&mut self, llrs: &[f64]) -> Result<usize> {
        self.check_llrs(llrs)?;
        self.heap.clear();
        let m = self.pristine.num_rows();
        for r in 0..m {
            if self.red.syndrome().get(r) {
                self.push_row(r, llrs);
            }
        }
        while let Some(Entry { col, .. }) = self.heap.pop() {
            if self.in_c[col] {
                continue;
            }
            self.red.matrix().col_support_into(col, &mut self.support);
            let red = &self.red;
            let row = self
                .support
                .iter()
                .copied()
                .find(|&r| red.syndrome().get(r) && !red.pivots().is_pivot_row(r));
            if let Some(row) = row {
                self.do_pivot(row, col, llrs, true)?;
                self.stage1_pivots += 1;
            }
        }
        let red = &self.red;
        if let Some(row) = (0..m).find(|&r| red.syndrome().get(r) && !red.pivots().is_pivot_row(r)) {
            return Err(Error::Inconsistent { row });
        }
        Ok(self.stage1_pivots)
    }

    /// Stage 2: admit up to `budget` further columns adjacent to touched
    /// rows, most likely first, seeding or growing blocks.
    pub fn stage2(&mut self, llrs: &[f64], budget: usize) -> Result<GrowthSummary> {
        self.check_llrs(llrs)?;
        self.heap.clear();
        let mut summary = GrowthSummary::default();
        if budget == 0 {
            return Ok(summary);
        }
        for k in 0..self.touched_list.len() {
            let r = self.touched_list[k];
            self.push_row(r, llrs);
        }
        while summary.added < budget {
            let Some(Entry { col, .. }) = self.heap.pop() else {
                summary.exhausted = true;
                break;
            };
            if self.in_c[col] {
                continue;
            }
            self.red.matrix().col_support_into(col, &mut self.support);
            if !self.support.iter().any(|&r| self.touched[r]) {
                continue;
            }
            let red = &self.red;
            let outside = self.support.iter().copied().find(|&r| !red.pivots().is_pivot_row(r));
            match outside {
                Some(row) => {
                    self.do_pivot(row, col, llrs, false)?;
                    summary.seeds += 1;
                }
                None => {
                    self.admit(col);
                    let first = self.block_of_row[self.support[0]];
                    let mut root = self.find(first);
                    for k in 1..self.support.len() {
                        let other = self.block_of_row[self.support[k]];
                        let other = self.find(other);
                        if other != root {
                            // Keep the smaller id as root so merges are
                            // order independent.
                            let (lo, hi) = (root.min(other), root.max(other));
                            self.parent[hi] = lo;
                            root = lo;
                        }
                    }
                    self.grown.push((col, first));
                }
            }
            summary.added += 1;
        }
        Ok(summary)
    }

    /// The blocks of `C` as clusters, ordered by their lowest pivot row.
    pub fn clusters(&mut self) -> Vec<Cluster> {
        let pairs = self.red.pivots().pairs().to_vec();
        let blocks = self.parent.len();
        let mut slot = vec![NONE; blocks];
        let mut parts: Vec<(Vec<(usize, usize)>, Vec<usize>)> = Vec::new();
        let mut sorted_pairs = pairs;
        sorted_pairs.sort_unstable();
        for (r, c) in sorted_pairs {
            let root = self.find(self.block_of_row[r]);
            if slot[root] == NONE {
                slot[root] = parts.len();
                parts.push((Vec::new(), Vec::new()));
            }
            parts[slot[root]].0.push((r, c));
        }
        let mut grown = self.grown.clone();
        grown.sort_unstable();
        for (c, b) in grown {
            let root = self.find(b);
            parts[slot[root]].1.push(c);
        }
        let matrix = self.red.matrix();
        let syndrome = self.red.syndrome();
        parts
            .into_iter()
            .map(|(pairs, free)| {
                let rows: Vec<usize> = pairs.iter().map(|p| p.0).collect();
                let pivot_cols: Vec<usize> = pairs.iter().map(|p| p.1).collect();
                Cluster::extract(matrix, syndrome, rows, pivot_cols, free)
            })
            .collect()
    }

    fn check_llrs(&self, llrs: &[f64]) -> Result<()> {
        if llrs.len() != self.pristine.num_cols() {
            return Err(Error::DimensionMismatch(format!(
                "{} posteriors for {} columns",
                llrs.len(),
                self.pristine.num_cols()
            )));
        }
        Ok(())
    }
}

/// Runs stage 1 on a state freshly reset to a syndrome.
pub fn stage1_reduce(state: &mut EliminationState, posterior_llrs: &[f64]) -> Result<usize> {
    state.stage1(posterior_llrs)
}

/// Runs stage 2 with budget `k` and returns the resulting clusters.
pub fn stage2_grow(state: &mut EliminationState, posterior_llrs: &[f64], k: usize) -> Result<(Vec<Cluster>, GrowthSummary)> {
    let summary = state.stage2(posterior_llrs, k)?;
    Ok((state.clusters(), summary))
}

/// Whether every row with a nonzero syndrome is a pivot row whose column has
/// a single one.
pub fn is_reduced_wrt_syndrome(matrix: &SparseBitMatrix, syndrome: &BitVector, red: &Reduction) -> bool {
    (0..matrix.num_rows()).filter(|&r| syndrome.get(r)).all(|r| match red.pivots().col_of(r) {
        Some(c) => matrix.col_support(c) == [r],
        None => false,
    })
}
