use crate::error::{Error, Result};
use crate::gf2::{row_in_span, BitVector, SparseBitMatrix};

/// One block `C_i = [I B_i]` of the admitted submatrix.
///
/// Local column `k < m_i` is the pivot column of local row `k`; local
/// columns `m_i..n_i` are the free columns in increasing global order.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    rows: Vec<usize>,
    pivot_cols: Vec<usize>,
    free_cols: Vec<usize>,
    syndrome: BitVector,
    local: SparseBitMatrix,
}

impl Cluster {
    /// Cuts the block out of a reduced matrix. `rows` must be sorted and
    /// `pivot_cols[k]` must be the pivot column of `rows[k]`.
    pub(crate) fn extract(
        matrix: &SparseBitMatrix,
        syndrome: &BitVector,
        rows: Vec<usize>,
        pivot_cols: Vec<usize>,
        free_cols: Vec<usize>,
    ) -> Self {
        let m = rows.len();
        let local_syndrome = BitVector::from_indices(m, (0..m).filter(|&k| syndrome.get(rows[k])));
        let supports = pivot_cols.iter().chain(&free_cols).map(|&c| {
            matrix
                .col_support(c)
                .into_iter()
                .map(|r| rows.binary_search(&r).expect("cluster columns stay inside cluster rows"))
                .collect::<Vec<_>>()
        });
        let local = SparseBitMatrix::from_col_supports(m, m + free_cols.len(), supports).expect("local indices in range");
        Cluster {
            rows,
            pivot_cols,
            free_cols,
            syndrome: local_syndrome,
            local,
        }
    }

    /// A standalone cluster whose first `m` columns form an identity.
    pub fn from_local(local: SparseBitMatrix, syndrome: BitVector) -> Result<Self> {
        let (m, n) = (local.num_rows(), local.num_cols());
        if syndrome.len() != m || n < m {
            return Err(Error::DimensionMismatch(format!(
                "cluster of shape {m}x{n} with syndrome of length {}",
                syndrome.len()
            )));
        }
        if (0..m).any(|k| local.col_support(k) != [k]) {
            return Err(Error::InvalidInput("cluster matrix must start with an identity block".into()));
        }
        Ok(Cluster {
            rows: (0..m).collect(),
            pivot_cols: (0..m).collect(),
            free_cols: (m..n).collect(),
            syndrome,
            local,
        })
    }

    /// Global rows, `m_i` of them.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    pub fn free_cols(&self) -> &[usize] {
        &self.free_cols
    }

    /// Global columns in local order: pivots, then free columns.
    pub fn columns(&self) -> Vec<usize> {
        self.pivot_cols.iter().chain(&self.free_cols).copied().collect()
    }

    pub fn syndrome(&self) -> &BitVector {
        &self.syndrome
    }

    /// `C_i` in local coordinates.
    pub fn local_matrix(&self) -> &SparseBitMatrix {
        &self.local
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.pivot_cols.len() + self.free_cols.len()
    }

    /// `L` restricted to this cluster's columns, in local order.
    pub fn restrict_logicals(&self, l: &SparseBitMatrix) -> SparseBitMatrix {
        let cols = self.columns();
        SparseBitMatrix::from_col_supports(l.num_rows(), cols.len(), cols.iter().map(|&c| l.col_support(c)))
            .expect("same row count")
    }

    /// Local solution with free part `g`: `(s_i + B_i g, g)`.
    pub fn solution(&self, g: &BitVector) -> BitVector {
        let m = self.num_rows();
        let mut e = BitVector::zeros(self.num_cols());
        let mut pivot_part = self.syndrome.clone();
        for a in g.iter_ones() {
            pivot_part.xor_assign(&self.local.column(m + a));
            e.set(m + a, true);
        }
        for k in pivot_part.iter_ones() {
            e.set(k, true);
        }
        e
    }
}

/// Relative probability mass, within one cluster, of the candidates that do
/// and do not flip one logical.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogicalEvidence {
    pub flip: f64,
    pub no_flip: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterVerdict {
    pub ambiguous: bool,
    pub logical: BitVector,
    /// Per-logical masses, present for ambiguous clusters. Both masses are
    /// scaled by a common factor.
    pub evidence: Option<Vec<LogicalEvidence>>,
    /// Local candidates examined.
    pub candidates: usize,
    /// Most probable local solution found, in local column order.
    pub solution: BitVector,
}

/// Decides the logical effect of one cluster.
///
/// If every row of `L_i` is a combination `R_i C_i` of cluster rows, the
/// effect is `R_i s_i` whatever the local error. Otherwise every local
/// solution with at most two free columns set is weighed, and each logical
/// is flipped when the flipping solutions carry strictly more probability.
pub fn analyse_cluster(cluster: &Cluster, l_local: &SparseBitMatrix, llrs_local: &[f64]) -> Result<ClusterVerdict> {
    let (m, n) = (cluster.num_rows(), cluster.num_cols());
    let k = l_local.num_rows();
    if l_local.num_cols() != n || llrs_local.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "cluster has {n} columns, logicals have {} and priors {}",
            l_local.num_cols(),
            llrs_local.len()
        )));
    }
    let basis = cluster.local.rows();
    let pivots: Vec<usize> = (0..m).collect();
    let sigma = &cluster.syndrome;

    let mut logical = BitVector::zeros(k);
    let mut unambiguous = true;
    for j in 0..k {
        match row_in_span(l_local.row(j), basis, &pivots) {
            Some(coeffs) => logical.set(j, coeffs.dot(sigma)),
            None => {
                unambiguous = false;
                break;
            }
        }
    }
    if unambiguous {
        return Ok(ClusterVerdict {
            ambiguous: false,
            logical,
            evidence: None,
            candidates: 1,
            solution: cluster.solution(&BitVector::zeros(n - m)),
        });
    }

    let f = n - m;
    let l_cols: Vec<BitVector> = (0..n).map(|c| l_local.column(c)).collect();
    let b_cols: Vec<BitVector> = (m..n).map(|c| cluster.local.column(c)).collect();
    // The logical effect is affine in g: lambda(g) = lambda0 + sum of
    // effects[a] over set free columns a.
    let mut lambda0 = BitVector::zeros(k);
    for r in sigma.iter_ones() {
        lambda0.xor_assign(&l_cols[r]);
    }
    let effects: Vec<BitVector> = (0..f)
        .map(|a| {
            let mut eff = l_cols[m + a].clone();
            for r in b_cols[a].iter_ones() {
                eff.xor_assign(&l_cols[r]);
            }
            eff
        })
        .collect();
    let weight = |pivot_part: &BitVector, free: &[usize]| -> f64 {
        -pivot_part.iter_ones().map(|r| llrs_local[r]).sum::<f64>() - free.iter().map(|&a| llrs_local[m + a]).sum::<f64>()
    };

    let mut acc = MassAccumulator::new(k);
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut candidates = 0;
    let mut visit = |free: &[usize], pivot_part: &BitVector, lambda: &BitVector| {
        let w = weight(pivot_part, free);
        acc.add(w, lambda);
        candidates += 1;
        if w > best.0 {
            best = (w, free.to_vec());
        }
    };

    visit(&[], sigma, &lambda0);
    for a in 0..f {
        visit(&[a], &sigma.xor(&b_cols[a]), &lambda0.xor(&effects[a]));
    }
    for a in 0..f {
        let part_a = sigma.xor(&b_cols[a]);
        let lambda_a = lambda0.xor(&effects[a]);
        for b in a + 1..f {
            visit(&[a, b], &part_a.xor(&b_cols[b]), &lambda_a.xor(&effects[b]));
        }
    }

    let evidence = acc.evidence();
    let logical = BitVector::from_bools(&evidence.iter().map(|e| e.flip > e.no_flip).collect::<Vec<_>>());
    let g = BitVector::from_indices(f, best.1);
    Ok(ClusterVerdict {
        ambiguous: true,
        logical,
        evidence: Some(evidence),
        candidates,
        solution: cluster.solution(&g),
    })
}

/// Sums `exp(w)` per logical bit with a running shift so large clusters do
/// not underflow.
struct MassAccumulator {
    shift: f64,
    flip: Vec<f64>,
    no_flip: Vec<f64>,
}

impl MassAccumulator {
    fn new(k: usize) -> Self {
        MassAccumulator {
            shift: f64::NEG_INFINITY,
            flip: vec![0.0; k],
            no_flip: vec![0.0; k],
        }
    }

    fn add(&mut self, w: f64, lambda: &BitVector) {
        if w > self.shift {
            let scale = (self.shift - w).exp();
            for x in self.flip.iter_mut().chain(self.no_flip.iter_mut()) {
                *x *= scale;
            }
            self.shift = w;
        }
        let x = (w - self.shift).exp();
        for j in 0..self.flip.len() {
            if lambda.get(j) {
                self.flip[j] += x;
            } else {
                self.no_flip[j] += x;
            }
        }
    }

    fn evidence(&self) -> Vec<LogicalEvidence> {
        self.flip
            .iter()
            .zip(&self.no_flip)
            .map(|(&flip, &no_flip)| LogicalEvidence { flip, no_flip })
            .collect()
    }
}

/// GF(2) sum of the per-cluster logical effects.
pub fn combine_verdicts<'a, I>(num_logicals: usize, verdicts: I) -> BitVector
where
    I: IntoIterator<Item = &'a ClusterVerdict>,
{
    let mut total = BitVector::zeros(num_logicals);
    for v in verdicts {
        total.xor_assign(&v.logical);
    }
    total
}
