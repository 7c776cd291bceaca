mod common;

use std::fs;
use std::path::PathBuf;

use acdec::error::Error;
use acdec::ingest::{column_weight_histogram, from_classical, from_stabilisers, parse_dem, parse_dem_str, write_dem, Pauli};
use acdec::problem::{canonicalise, RawColumn};
use common::{paulis, random_matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[test]
fn golden_model_snapshot() {
    let text = fs::read_to_string(fixture("golden.dem")).unwrap();
    let p = parse_dem_str(&text).unwrap();
    assert_eq!((p.num_checks(), p.num_errors(), p.num_logicals()), (5, 5, 2));
    let expected = [
        (vec![0, 1], vec![], 0.1 * 0.8 + 0.2 * 0.9),
        (vec![1, 2], vec![0], 0.05),
        (vec![3], vec![], 0.01),
        (vec![], vec![0], 0.125),
        (vec![3], vec![0], 0.02),
    ];
    for (j, (d, l, prior)) in expected.into_iter().enumerate() {
        let col = p.column(j);
        assert_eq!(col.detectors, d);
        assert_eq!(col.logicals, l);
        assert!((col.prior - prior).abs() < 1e-15, "column {j}: {} vs {prior}", col.prior);
    }
    assert!((p.priors()[0] - 0.26).abs() < 1e-15);

    let canonical = fs::read_to_string(fixture("golden.canonical.dem")).unwrap();
    assert_eq!(write_dem(&p), canonical);
    let again = parse_dem_str(&canonical).unwrap();
    assert_eq!(write_dem(&again), canonical);
}

#[test]
fn reader_errors_carry_line_numbers() {
    let file = fs::File::open(fixture("golden.dem")).unwrap();
    assert!(parse_dem(std::io::BufReader::new(file)).is_ok());
    let bad = "error(0.1) D0\n# fine\nerror(0.1) D0 Q1\n";
    match parse_dem(bad.as_bytes()) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn serialisation_round_trips_random_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..100 {
        let m = rng.random_range(0..6);
        let k = rng.random_range(0..3);
        let cols: Vec<RawColumn> = (0..rng.random_range(0..12))
            .map(|_| {
                let d = (0..rng.random_range(0..4)).map(|_| rng.random_range(0..m.max(1))).filter(|_| m > 0).collect();
                let l = (0..rng.random_range(0..3)).map(|_| rng.random_range(0..k.max(1))).filter(|_| k > 0).collect();
                RawColumn::new(d, l, rng.random_range(0.0..0.5))
            })
            .collect();
        let p = canonicalise(m, k, cols).unwrap();
        let text = write_dem(&p);
        let q = parse_dem_str(&text).unwrap();
        assert_eq!(q.h(), p.h());
        assert_eq!(q.l(), p.l());
        assert_eq!(q.priors(), p.priors());
        assert_eq!(write_dem(&q), text);
    }
}

#[test]
fn stabiliser_matrix_matches_commutation() {
    let gens = paulis(&["IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"]);
    let logs = paulis(&["XXXXXXX", "ZZZZZZZ"]);
    let p = from_stabilisers(&gens, &logs, 0.05).unwrap();
    for q in 0..7 {
        for (a, pauli) in Pauli::NON_IDENTITY.iter().enumerate() {
            let col = 3 * q + a;
            for (i, g) in gens.iter().enumerate() {
                assert_eq!(p.h().get(i, col), g.get(q).anticommutes(*pauli));
            }
            for (i, g) in logs.iter().enumerate() {
                assert_eq!(p.l().get(i, col), g.get(q).anticommutes(*pauli));
            }
        }
    }
    // Single-qubit errors are all distinguishable on the Steane code.
    assert!(p.is_canonical());
    assert_eq!(column_weight_histogram(&p)[0], 0);
}

#[test]
fn classical_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for _ in 0..20 {
        let n = rng.random_range(2..10);
        let k = rng.random_range(0..n);
        let h = random_matrix(&mut rng, n - k, n, 0.4);
        let p = from_classical(h, k, 0.07).unwrap();
        for i in 0..k {
            assert_eq!(p.l().row_support(i), vec![i]);
        }
        assert_eq!(p.num_checks(), n - k);
    }
}
