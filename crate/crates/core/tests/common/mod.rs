#![allow(dead_code)]

use acdec::gf2::{BitVector, SparseBitMatrix};
use acdec::ingest::{from_stabilisers, PauliString};
use acdec::problem::DecodingProblem;
use rand::Rng;

pub fn bits(s: &str) -> BitVector {
    s.parse().unwrap()
}

pub fn random_matrix<R: Rng>(rng: &mut R, m: usize, n: usize, density: f64) -> SparseBitMatrix {
    let rows: Vec<Vec<u8>> = (0..m)
        .map(|_| (0..n).map(|_| (rng.random::<f64>() < density) as u8).collect())
        .collect();
    SparseBitMatrix::from_dense(&rows)
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> BitVector {
    let b: Vec<bool> = (0..n).map(|_| rng.random()).collect();
    BitVector::from_bools(&b)
}

/// Every `e` with `He = s`, by trying all `2^n` vectors.
pub fn brute_solutions(h: &SparseBitMatrix, s: &BitVector) -> Vec<BitVector> {
    let n = h.num_cols();
    assert!(n <= 20);
    (0..1u64 << n)
        .map(|x| BitVector::from_u64(n, x))
        .filter(|e| &h.mul_vec(e) == s)
        .collect()
}

pub fn brute_probability(priors: &[f64], e: &BitVector) -> f64 {
    priors
        .iter()
        .enumerate()
        .map(|(j, &p)| if e.get(j) { p } else { 1.0 - p })
        .product()
}

/// `P(e_j = 1 | He = s)` by direct enumeration.
pub fn brute_marginals(problem: &DecodingProblem, s: &BitVector) -> Vec<f64> {
    let n = problem.num_errors();
    let mut ones = vec![0.0; n];
    let mut total = 0.0;
    for e in brute_solutions(problem.h(), s) {
        let p = brute_probability(problem.priors(), &e);
        total += p;
        for j in e.iter_ones() {
            ones[j] += p;
        }
    }
    ones.iter().map(|x| x / total).collect()
}

/// Probability mass per logical class, by direct enumeration.
pub fn brute_masses(problem: &DecodingProblem, s: &BitVector) -> Vec<(BitVector, f64)> {
    let mut out: Vec<(BitVector, f64)> = Vec::new();
    for e in brute_solutions(problem.h(), s) {
        let p = brute_probability(problem.priors(), &e);
        let l = problem.logical_of(&e);
        match out.iter_mut().find(|(x, _)| *x == l) {
            Some(slot) => slot.1 += p,
            None => out.push((l, p)),
        }
    }
    out
}

/// A random cycle-free Tanner graph with `n` error nodes, with random priors
/// in `(0.01, 0.4)` and no logicals.
pub fn random_tree_problem<R: Rng>(rng: &mut R, n: usize) -> DecodingProblem {
    // Node kinds: false = error node, true = check node.
    let mut kinds = vec![false];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut vars = 1;
    while vars < n || kinds.iter().filter(|k| **k).count() == 0 {
        let want_check = vars >= n || rng.random_bool(0.45);
        let parents: Vec<usize> = (0..kinds.len()).filter(|&i| kinds[i] != want_check).collect();
        if parents.is_empty() {
            continue;
        }
        let parent = parents[rng.random_range(0..parents.len())];
        let id = kinds.len();
        kinds.push(want_check);
        if !want_check {
            vars += 1;
        }
        edges.push((parent, id));
    }
    let var_index: Vec<Option<usize>> = {
        let mut next = 0;
        kinds
            .iter()
            .map(|&k| {
                (!k).then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let check_index: Vec<Option<usize>> = {
        let mut next = 0;
        kinds
            .iter()
            .map(|&k| {
                k.then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let m = kinds.iter().filter(|k| **k).count();
    let mut rows = vec![Vec::new(); m];
    for (a, b) in edges {
        let (c, v) = if kinds[a] { (a, b) } else { (b, a) };
        rows[check_index[c].unwrap()].push(var_index[v].unwrap());
    }
    let h = SparseBitMatrix::from_row_supports(m, n, rows).unwrap();
    let priors = (0..n).map(|_| rng.random_range(0.01..0.4)).collect();
    DecodingProblem::new(h, SparseBitMatrix::zeros(0, n), priors).unwrap()
}

/// Longest shortest path in the Tanner graph, in message-passing rounds.
pub fn tanner_diameter(h: &SparseBitMatrix) -> usize {
    h.num_rows() + h.num_cols()
}

/// One check over two equally likely errors, syndrome `1`. The two
/// explanations `10` and `01` are equally likely and the two error nodes are
/// mirror images, so BP gives both exactly the same posterior of 1/2 and
/// rounding yields `00` or `11`, neither of which is a solution. The logical
/// reads the first error only, so the two explanations differ logically.
pub fn split_belief_problem() -> (DecodingProblem, BitVector) {
    let h = SparseBitMatrix::from_dense(&[[1, 1]]);
    let l = SparseBitMatrix::from_dense(&[[1, 0]]);
    (DecodingProblem::new(h, l, vec![0.1; 2]).unwrap(), bits("1"))
}

pub fn paulis(strings: &[&str]) -> Vec<PauliString> {
    strings.iter().map(|s| s.parse().unwrap()).collect()
}

/// Steane code under depolarising noise, 21 columns, with every prior then
/// set to `eps`.
pub fn steane_problem(eps: f64) -> DecodingProblem {
    let gens = paulis(&["IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"]);
    let logs = paulis(&["XXXXXXX", "ZZZZZZZ"]);
    from_stabilisers(&gens, &logs, 0.1)
        .unwrap()
        .with_uniform_priors(eps)
        .unwrap()
        .with_name("steane")
}

/// Bit-flip errors on the edges of an `d x d` toric code, detected by vertex
/// checks. Columns `0..d^2` are horizontal edges, `d^2..2d^2` vertical ones.
pub fn toric_problem(d: usize, p: f64) -> DecodingProblem {
    let h_edge = |x: usize, y: usize| (y % d) * d + (x % d);
    let v_edge = |x: usize, y: usize| d * d + (y % d) * d + (x % d);
    let rows = (0..d * d).map(|i| {
        let (x, y) = (i % d, i / d);
        vec![h_edge(x, y), h_edge(x + d - 1, y), v_edge(x, y), v_edge(x, y + d - 1)]
    });
    let h = SparseBitMatrix::from_row_supports(d * d, 2 * d * d, rows).unwrap();
    let l = SparseBitMatrix::from_row_supports(
        2,
        2 * d * d,
        vec![(0..d).map(|y| h_edge(0, y)).collect::<Vec<_>>(), (0..d).map(|x| v_edge(x, 0)).collect()],
    )
    .unwrap();
    DecodingProblem::new(h, l, vec![p; 2 * d * d])
        .unwrap()
        .with_name(format!("toric-{d}"))
}

/// Classical repetition code of length `n` with one logical on bit 0.
pub fn repetition_problem(n: usize, p: f64) -> DecodingProblem {
    let rows = (0..n - 1).map(|i| vec![i, i + 1]);
    let h = SparseBitMatrix::from_row_supports(n - 1, n, rows).unwrap();
    acdec::ingest::from_classical(h, 1, p).unwrap()
}

/// Connected components of the bipartite graph of `matrix` restricted to
/// `cols`, as sorted `(rows, cols)` pairs, ignoring isolated rows.
pub fn components(matrix: &SparseBitMatrix, cols: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let m = matrix.num_rows();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    for &c in cols {
        let s = matrix.col_support(c);
        for w in s.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut out: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut root_slot = std::collections::HashMap::new();
    for &c in cols {
        let s = matrix.col_support(c);
        let root = find(&mut parent, s[0]);
        let slot = *root_slot.entry(root).or_insert_with(|| {
            out.push((Vec::new(), Vec::new()));
            out.len() - 1
        });
        out[slot].1.push(c);
        for r in s {
            out[slot].0.push(r);
        }
    }
    for (rows, cols) in &mut out {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
    }
    out.sort();
    out
}
