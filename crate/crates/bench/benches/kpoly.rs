use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use kpoly::cycbar;
use kpoly::exactalg::smith_normal_form;
use kpoly::tcassemble::tc_groups;
use kpoly::wittsplit::{brute_force_quotient, DEFAULT_ENUM_BOUND};
use kpoly_bench::{complex, int_matrix, split_params};

fn snf(c: &mut Criterion) {
    let mut group = c.benchmark_group("smith_normal_form");
    for n in [8, 16, 24] {
        let m = int_matrix(n, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| smith_normal_form(black_box(m)))
        });
    }
    group.finish();
}

fn homology(c: &mut Criterion) {
    let mut group = c.benchmark_group("bar_homology");
    group.sample_size(10);
    for (e, m) in [(3, 8), (4, 10), (6, 12)] {
        group.bench_function(format!("e{e}_m{m}"), |b| {
            b.iter(|| cycbar::reduced_homology(&complex(e, m, 3)).unwrap())
        });
    }
    group.finish();
}

fn brute_force(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_force_quotient");
    group.sample_size(10);
    for (p, r, e) in [(2, 4, 3), (2, 4, 4), (3, 3, 3)] {
        let params = split_params(p, r, e);
        group.bench_function(format!("p{p}_r{r}_e{e}"), |b| {
            b.iter(|| brute_force_quotient(&params, DEFAULT_ENUM_BOUND).unwrap())
        });
    }
    group.finish();
}

fn assembly(c: &mut Criterion) {
    c.bench_function("tc_groups_p2_e6_r6", |b| b.iter(|| tc_groups(2, 6, black_box(6), 1).unwrap()));
    c.bench_function("tc_groups_p3_e4_r20", |b| b.iter(|| tc_groups(3, 4, black_box(20), 1).unwrap()));
}

criterion_group!(benches, snf, homology, brute_force, assembly);
criterion_main!(benches);
