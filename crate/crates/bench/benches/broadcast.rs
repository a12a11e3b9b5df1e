use criterion::{criterion_group, criterion_main, Criterion};
use ejnet::analytics::{analytic_rows, total_senders};
use ejnet::broadcast::{run_all_to_all, run_one_to_all, Algorithm};
use ejnet::residue::Modulus;
use ejnet_bench::{network, table_network};

fn one_to_all(c: &mut Criterion) {
    let net = table_network();
    let mut g = c.benchmark_group("one_to_all_3_4_cubed");
    g.sample_size(20);
    for algo in Algorithm::ALL {
        g.bench_function(algo.name(), |b| {
            b.iter(|| run_one_to_all(&net, 0, algo).unwrap())
        });
    }
    g.finish();
}

fn all_to_all(c: &mut Criterion) {
    let net = network(2, 3, 2);
    let mut g = c.benchmark_group("all_to_all");
    g.sample_size(10);
    g.bench_function("2_3_squared", |b| b.iter(|| run_all_to_all(&net).unwrap()));
    g.finish();
}

fn analytics(c: &mut Criterion) {
    let m = Modulus::new(3, 4).unwrap();
    c.bench_function("analytic_improved_6d", |b| {
        b.iter(|| analytic_rows(&m, 6, Algorithm::Improved).unwrap())
    });
    c.bench_function("total_senders_previous_12d", |b| {
        b.iter(|| total_senders(&m, 12, Algorithm::Previous).unwrap())
    });
}

fn topology(c: &mut Criterion) {
    c.bench_function("build_3_4_cubed", |b| b.iter(table_network));
    let net = table_network();
    c.bench_function("bfs_3_4_cubed", |b| b.iter(|| net.bfs_from(0).unwrap()));
}

criterion_group!(benches, one_to_all, all_to_all, analytics, topology);
criterion_main!(benches);
