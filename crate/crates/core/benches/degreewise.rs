use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use flagcoh::flag::{e3_base_presentation, flag_presentation};
use flagcoh::{par, CoeffRing, GroupSpec, RingPresentation};

// Fresh quotient per iteration: pieces are cached inside QuotientRing.
fn groups(pres: &RingPresentation, max_degree: u32) -> usize {
    let q = pres.quotient().expect("quotient");
    q.groups(max_degree).expect("groups").total_factor_count()
}

fn degreewise(c: &mut Criterion) {
    let cases: Vec<(&str, RingPresentation, u32)> = vec![
        ("SU(5)/T", flag_presentation(&GroupSpec::su(5).unwrap()).unwrap(), 20),
        ("Sp(3)/T", flag_presentation(&GroupSpec::sp(3).unwrap()).unwrap(), 18),
        ("E3 PE6", e3_base_presentation(&GroupSpec::pe6(), CoeffRing::Integers).unwrap(), 48),
    ];
    let mut g = c.benchmark_group("degreewise_groups");
    g.sample_size(10);
    for (name, pres, d) in &cases {
        g.bench_with_input(BenchmarkId::new("parallel", name), pres, |b, p| b.iter(|| groups(p, *d)));
        g.bench_with_input(BenchmarkId::new("sequential", name), pres, |b, p| {
            b.iter(|| par::sequential(|| groups(p, *d)))
        });
    }
    g.finish();
}

criterion_group!(benches, degreewise);
criterion_main!(benches);
