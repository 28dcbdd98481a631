use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use heattrace::catalog;
use heattrace::dirichlet::heat_trace_direct;
use heattrace::expansion::{build_expansion, evaluate_expansion};
use heattrace::par::{map_par, map_seq};

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| 10f64.powf(-3.0 + 3.5 * i as f64 / (n - 1) as f64)).collect()
}

fn direct_sums(c: &mut Criterion) {
    let mut g = c.benchmark_group("direct");
    for name in ["sphere_absD:3", "theta_operator"] {
        let spec = catalog::entry(name).unwrap().spec;
        let ts = grid(64);
        let f = |t: &f64| heat_trace_direct(&spec, *t, 1e-15).unwrap();
        g.bench_with_input(BenchmarkId::new("seq", name), &ts, |b, ts| b.iter(|| map_seq(black_box(ts), f)));
        g.bench_with_input(BenchmarkId::new("par", name), &ts, |b, ts| b.iter(|| map_par(black_box(ts), f)));
    }
    g.finish();
}

fn verify_rows(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(20);
    let spec = catalog::entry("q_exponential:0.5,1").unwrap().spec;
    let exp = build_expansion(&spec, 8).unwrap();
    let ts = grid(32);
    let row = |t: &f64| {
        let direct = heat_trace_direct(&spec, *t, 1e-15).unwrap();
        (1..=8).map(|k| direct - evaluate_expansion(&exp, *t, k)).collect::<Vec<_>>()
    };
    g.bench_function("seq", |b| b.iter(|| map_seq(black_box(&ts), row)));
    g.bench_function("par", |b| b.iter(|| map_par(black_box(&ts), row)));
    g.finish();
}

criterion_group!(benches, direct_sums, verify_rows);
criterion_main!(benches);
