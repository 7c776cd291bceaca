use std::hint::black_box;

use acdec::ac::AcConfig;
use acdec::bench::sample_indexed;
use acdec::DecoderSpec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

#[path = "../tests/common/mod.rs"]
mod common;

fn decode_shots(c: &mut Criterion) {
    let mut group = c.benchmark_group("decode");
    group.sample_size(20);
    for d in [8, 16] {
        let problem = common::toric_problem(d, 0.03);
        let syndromes: Vec<_> = (0..64).map(|i| sample_indexed(&problem, 1, i).syndrome).collect();
        let specs = [DecoderSpec::Ac(AcConfig::with_kappa(0.01)), DecoderSpec::bp_osd_cs(7)];
        for spec in specs {
            let mut decoder = spec.build(&problem).unwrap();
            group.bench_with_input(BenchmarkId::new(spec.label(), problem.num_errors()), &syndromes, |b, syndromes| {
                let mut i = 0;
                b.iter(|| {
                    i = (i + 1) % syndromes.len();
                    black_box(decoder.decode(&syndromes[i]).unwrap());
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, decode_shots);
criterion_main!(benches);
