//! Sequential vs rayon execution of the batch entry points.
//!
//! `cargo bench -p wnk-spectra`; build with `--no-default-features` to see
//! the `Parallel` policy fall back to the sequential path.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use wnk_spectra::analysis::{scan_subcubic_bipartite, verify_grid, AnalysisConfig, ScanParams};
use wnk_spectra::graph::{adjacency_matrix, build_wnk};
use wnk_spectra::spectral::{eigenvalues_symmetric, SolverOptions};
use wnk_spectra::Exec;

const POLICIES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn grid(c: &mut Criterion) {
    let ns: Vec<usize> = (2..=12).collect();
    let ks: Vec<usize> = (2..=6).collect();
    let mut group = c.benchmark_group("verify_grid");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        let cfg = AnalysisConfig::default().with_exec(exec);
        group.bench_function(name, |b| {
            b.iter(|| verify_grid(black_box(&ns), black_box(&ks), 1e-8, &cfg).unwrap())
        });
    }
    group.finish();
}

fn scan(c: &mut Criterion) {
    let params = ScanParams {
        order_min: 4,
        order_max: 16,
        samples_per_order: 50,
        seed: 42,
        include_catalog: true,
    };
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        let cfg = AnalysisConfig::default().with_exec(exec);
        group.bench_function(name, |b| {
            b.iter(|| scan_subcubic_bipartite(black_box(&params), &cfg).unwrap())
        });
    }
    group.finish();
}

// The solve itself is sequential; only the per-eigenpair residual loop
// follows the policy.
fn residuals(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigensolve_residuals");
    group.sample_size(10);
    for (n, k) in [(20, 3), (40, 4)] {
        let m = adjacency_matrix(&build_wnk(n, k).unwrap()).to_real();
        for (name, exec) in POLICIES {
            let opts = SolverOptions {
                exec,
                ..SolverOptions::default()
            };
            group.bench_with_input(BenchmarkId::new(name, 2 * n * k), &m, |b, m| {
                b.iter(|| eigenvalues_symmetric(m, &opts).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, grid, scan, residuals);
criterion_main!(benches);
