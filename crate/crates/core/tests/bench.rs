mod common;

use acdec::ac::AcConfig;
use acdec::bench::{
    collect_outcomes, collect_outcomes_sequential, failure_rate, format_pm, read_syndromes, run_trials,
    run_trials_sequential, sample_indexed, sample_shot, shot_rng, write_predictions, Report, ShotOutcome,
    TrialConfig, TrialStats,
};
use acdec::bp::BpConfig;
use acdec::gf2::SparseBitMatrix;
use acdec::problem::DecodingProblem;
use acdec::{BitVector, DecoderSpec};
use common::{bits, random_vector, split_belief_problem, steane_problem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn within_sigmas(count: usize, shots: usize, p: f64, k: f64) -> bool {
    let n = shots as f64;
    let sd = (n * p * (1.0 - p)).sqrt();
    (count as f64 - n * p).abs() <= k * sd
}

fn strip_time(o: &[ShotOutcome]) -> Vec<ShotOutcome> {
    o.iter().map(|x| ShotOutcome { seconds: 0.0, ..*x }).collect()
}

#[test]
fn sampled_columns_follow_priors() {
    let priors = vec![1e-300, 0.5, 0.02, 0.3, 0.75];
    let n = priors.len();
    let h = SparseBitMatrix::from_dense(&[[1, 1, 0, 0, 1], [0, 1, 1, 1, 0]]);
    let p = DecodingProblem::new(h, SparseBitMatrix::from_dense(&[[1, 0, 0, 1, 0]]), priors.clone()).unwrap();
    let shots = 100_000;
    let mut counts = vec![0usize; n];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..shots {
        let shot = sample_shot(&p, &mut rng);
        assert_eq!(shot.syndrome, p.h().mul_vec(&shot.error));
        assert_eq!(shot.logical, p.l().mul_vec(&shot.error));
        for j in shot.error.iter_ones() {
            counts[j] += 1;
        }
    }
    assert_eq!(counts[0], 0);
    for j in 1..n {
        assert!(within_sigmas(counts[j], shots, priors[j], 3.0), "column {j}: {}", counts[j]);
    }
}

#[test]
fn shots_are_order_independent() {
    let p = steane_problem(0.2);
    let a: Vec<_> = (0..50).map(|i| sample_indexed(&p, 9, i)).collect();
    let b: Vec<_> = (0..50).rev().map(|i| sample_indexed(&p, 9, i)).collect();
    assert!(a.iter().eq(b.iter().rev()));
    assert_eq!(sample_shot(&p, &mut shot_rng(9, 3)), a[3]);
    assert_ne!(sample_indexed(&p, 10, 3).error, a[3].error);
}

#[test]
fn noiseless_problem_never_fails() {
    let p = steane_problem(1e-15);
    let config = TrialConfig::new(1000, 1);
    let specs = [
        DecoderSpec::Ac(AcConfig::with_kappa(0.1)),
        DecoderSpec::bp_osd_cs(7),
        DecoderSpec::Bp(BpConfig::default()),
        DecoderSpec::Ml,
    ];
    for spec in specs {
        let stats = run_trials(&p, &spec, &config).unwrap();
        assert_eq!(stats.failures, 0, "{}", spec.label());
        assert_eq!(stats.p_fail, 0.0);
    }
}

#[test]
fn hard_decision_bp_fails_on_split_belief() {
    let (p, _) = split_belief_problem();
    let config = TrialConfig::new(100_000, 77);
    let stats = run_trials(&p, &DecoderSpec::Bp(BpConfig::sum_product(20)), &config).unwrap();
    // Fails on every shot with syndrome 1 (probability 2 * 0.1 * 0.9) and on
    // the double flip (0.01), which decodes to no error.
    let expected = 2.0 * 0.1 * 0.9 + 0.1 * 0.1;
    assert!(within_sigmas(stats.failures, stats.shots, expected, 3.0), "{}", stats.failures);
    let ones = (0..config.shots as u64)
        .filter(|&i| sample_indexed(&p, config.seed, i).syndrome == bits("1"))
        .count();
    assert_eq!(stats.decoder_errors, ones);
    assert_eq!(stats.bp_converged, stats.shots - ones);
}

#[test]
fn paired_runs_see_the_same_syndromes() {
    let p = steane_problem(0.05);
    let seed = 1234;
    let mut seen = Vec::new();
    for spec in [DecoderSpec::Ac(AcConfig::with_kappa(1.0)), DecoderSpec::bp_osd_cs(7)] {
        let mut decoder = spec.build(&p).unwrap();
        let mut syndromes = Vec::new();
        for i in 0..200 {
            let shot = sample_indexed(&p, seed, i);
            decoder.decode(&shot.syndrome).unwrap();
            syndromes.push(shot.syndrome);
        }
        seen.push(syndromes);
    }
    assert_eq!(seen[0], seen[1]);
}

#[test]
fn runs_are_reproducible() {
    let p = steane_problem(0.08);
    let spec = DecoderSpec::Ac(AcConfig::with_kappa(0.2));
    let config = TrialConfig::new(2000, 42).with_rounds(3);
    let a = run_trials(&p, &spec, &config).unwrap();
    let b = run_trials_sequential(&p, &spec, &config).unwrap();
    assert_eq!(a.without_timings(), b.without_timings());
    assert!(a.failures > 0);
    let other = run_trials(&p, &spec, &TrialConfig::new(2000, 43).with_rounds(3)).unwrap();
    assert_ne!(a.without_timings(), other.without_timings());
}

#[test]
fn sequential_and_parallel_outcomes_agree() {
    let p = steane_problem(0.1);
    let config = TrialConfig::new(500, 8);
    for spec in [DecoderSpec::Ac(AcConfig::with_kappa(0.5)), DecoderSpec::bp_osd_cs(4)] {
        let seq = collect_outcomes_sequential(&p, &spec, &config).unwrap();
        let any = collect_outcomes(&p, &spec, &config).unwrap();
        assert_eq!(strip_time(&seq), strip_time(&any));
    }
}

#[test]
fn failure_rate_arithmetic() {
    let (p, sd) = failure_rate(16891, 251, 6);
    let q: f64 = 251.0 / 16891.0;
    assert_eq!(p, 251.0 / (6.0 * 16891.0));
    assert!((sd - (16891.0 * q * (1.0 - q)).sqrt() / (6.0 * 16891.0)).abs() < 1e-18);
    assert_eq!(format_pm(p, sd), "(2.5±0.2)×10^-3");

    let (p, sd) = failure_rate(1130, 251, 6);
    assert_eq!(format_pm(p, sd), "(3.7±0.2)×10^-2");

    assert_eq!(failure_rate(0, 0, 1), (0.0, 0.0));
    assert_eq!(failure_rate(10, 10, 1), (1.0, 0.0));
    let stats = TrialStats::from_tallies(400, 100, 2);
    assert_eq!(stats.p_fail, 0.125);
    assert!((stats.p_fail_std - (400.0f64 * 0.25 * 0.75).sqrt() / 800.0).abs() < 1e-15);
}

#[test]
fn report_serialises_table_columns() {
    let p = steane_problem(0.05);
    let spec = DecoderSpec::Ac(AcConfig::with_kappa(0.1));
    let stats = TrialStats::from_tallies(16891, 251, 6);
    let report = Report::new(&p, &spec, &stats).with_noise(0.003).with_seed(7);
    let v: serde_json::Value = serde_json::to_value(&report).unwrap();
    assert_eq!(v["num_errors"], 21);
    assert_eq!(v["kappa"], 0.1);
    assert_eq!(v["budget"], 2);
    assert_eq!(v["fails_over_shots"], "251/16891");
    assert_eq!(v["p_fail_text"], "(2.5±0.2)×10^-3");
    assert_eq!(v["decoder"], "AC(kappa=0.1)");
    assert!(v["note"].is_null());

    let none = Report::new(&p, &spec, &TrialStats::from_tallies(1000, 0, 1));
    assert!(none.note.unwrap().contains("3.000e-3"));
    let one = Report::new(&p, &spec, &TrialStats::from_tallies(1000, 1, 1));
    assert!(one.note.unwrap().contains("unreliable"));
}

#[test]
fn syndrome_files_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let v: Vec<BitVector> = (0..40).map(|_| random_vector(&mut rng, 13)).collect();
    let mut buf = Vec::new();
    write_predictions(&mut buf, &v).unwrap();
    assert_eq!(read_syndromes(buf.as_slice(), Some(13)).unwrap(), v);
    assert!(read_syndromes("".as_bytes(), Some(13)).unwrap().is_empty());
    assert_eq!(read_syndromes("01".as_bytes(), None).unwrap(), vec![bits("01")]);
    let err = read_syndromes("01\n0x\n".as_bytes(), None).unwrap_err();
    assert!(err.to_string().starts_with("line 2"));
}
