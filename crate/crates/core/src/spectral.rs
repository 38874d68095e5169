//! Dense symmetric eigensolves and the spectrum-level predicates built on
//! them: multiplicity clustering, multiset comparison, median eigenvalues,
//! forbidden-interval checks and Cauchy interlacing.
//!
//! Eigenvalue lists are always sorted descending and positions are 1-based,
//! so `values[i - 1]` is `lambda_i`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::closed_form::ClosedFormSpectrum;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::graph::{adjacency_matrix, Graph, DEFAULT_SIZE_CAP};

pub const DEFAULT_SOLVER_TOL: f64 = 1e-9;
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Upper bound accepted for the scaled residual.
    pub tol: f64,
    pub cluster_tol: f64,
    /// Total QR sweep budget; `None` scales with the dimension.
    pub max_iter: Option<usize>,
    pub cap: usize,
    /// Policy for the per-eigenpair residual loop.
    pub exec: Exec,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: DEFAULT_SOLVER_TOL,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            max_iter: None,
            cap: DEFAULT_SIZE_CAP,
            exec: Exec::Parallel,
        }
    }
}

impl SolverOptions {
    pub fn sequential(self) -> Self {
        SolverOptions {
            exec: Exec::Sequential,
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// `lambda_1 >= ... >= lambda_N`.
    pub values: Vec<f64>,
    pub order: usize,
    /// `max_i |A v_i - lambda_i v_i|_2 / scale`.
    pub residual_bound: f64,
    /// `max(1, |A|_inf)`.
    pub scale: f64,
    pub clusters: Vec<(f64, usize)>,
}

impl SpectrumReport {
    /// Absolute residual; every computed eigenvalue is within this distance
    /// of an exact eigenvalue.
    pub fn abs_error_bound(&self) -> f64 {
        self.residual_bound * self.scale
    }

    /// `lambda_i`, 1-based.
    pub fn lambda(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    /// One row per eigenvalue: `index,value,cluster_id` (both ids 1-based).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,value,cluster_id\n");
        let mut cluster = 0;
        let mut left = 0;
        for (i, v) in self.values.iter().enumerate() {
            if left == 0 {
                left = self.clusters[cluster].1;
                cluster += 1;
            }
            left -= 1;
            writeln!(out, "{},{},{}", i + 1, v, cluster).unwrap();
        }
        out
    }
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    for c in 0..cols {
        for r in (c + 1)..rows {
            let diff = (m[(r, c)] - m[(c, r)]).abs();
            if diff.is_nan() || diff > SYMMETRY_TOL {
                return Err(Error::NotSymmetric {
                    row: r,
                    col: c,
                    diff,
                });
            }
        }
    }
    Ok(())
}

/// Full spectrum of a real symmetric matrix with a certified residual.
///
/// The residual of every eigenpair is measured against the input matrix;
/// a bound above `opts.tol` is an error, as is running out of QR sweeps.
pub fn eigenvalues_symmetric(m: &DMatrix<f64>, opts: &SolverOptions) -> Result<SpectrumReport> {
    check_symmetric(m)?;
    let n = m.nrows();
    if n > opts.cap {
        return Err(Error::SizeCap {
            order: n,
            cap: opts.cap,
        });
    }
    let scale = m
        .row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(1.0, f64::max);
    if n == 0 {
        return Ok(SpectrumReport {
            values: Vec::new(),
            order: 0,
            residual_bound: 0.0,
            scale,
            clusters: Vec::new(),
        });
    }
    let max_iter = opts.max_iter.unwrap_or(100 * n + 1000);
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, max_iter)
        .ok_or(Error::NoConvergence { max_iter })?;

    let residuals = exec::map_indexed(n, opts.exec, |i| {
        let v = eig.eigenvectors.column(i);
        let lambda = eig.eigenvalues[i];
        let av = m * v;
        av.iter()
            .zip(v.iter())
            .map(|(a, x)| (a - lambda * x).powi(2))
            .sum::<f64>()
            .sqrt()
    });
    let residual_bound = residuals.into_iter().fold(0.0, f64::max) / scale;
    if residual_bound.is_nan() || residual_bound > opts.tol {
        return Err(Error::ResidualTooLarge {
            residual: residual_bound,
            tol: opts.tol,
        });
    }

    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    let clusters = cluster_multiplicities(&values, opts.cluster_tol);
    Ok(SpectrumReport {
        order: n,
        values,
        residual_bound,
        scale,
        clusters,
    })
}

/// Adjacency spectrum of a graph.
pub fn graph_spectrum(g: &Graph, opts: &SolverOptions) -> Result<SpectrumReport> {
    eigenvalues_symmetric(&adjacency_matrix(g).to_real(), opts)
}

/// Greedy left-to-right grouping of a descending list: a value joins the
/// current cluster iff it is within `cluster_tol` of the cluster's first
/// element. Each cluster is reported as `(mean, size)`.
pub fn cluster_multiplicities(values: &[f64], cluster_tol: f64) -> Vec<(f64, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < values.len() {
        let head = values[start];
        let end = values[start..]
            .iter()
            .position(|v| (head - v).abs() > cluster_tol)
            .map_or(values.len(), |p| start + p);
        let group = &values[start..end];
        out.push((group.iter().sum::<f64>() / group.len() as f64, group.len()));
        start = end;
    }
    out
}

/// Anything that can be flattened into a multiset of reals.
pub trait SpectrumMultiset {
    /// Descending list, each value repeated by its multiplicity.
    fn expanded_descending(&self) -> Vec<f64>;
}

impl SpectrumMultiset for SpectrumReport {
    fn expanded_descending(&self) -> Vec<f64> {
        self.values.clone()
    }
}

impl SpectrumMultiset for ClosedFormSpectrum {
    fn expanded_descending(&self) -> Vec<f64> {
        self.expanded()
    }
}

impl SpectrumMultiset for [f64] {
    fn expanded_descending(&self) -> Vec<f64> {
        let mut v = self.to_vec();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }
}

impl SpectrumMultiset for Vec<f64> {
    fn expanded_descending(&self) -> Vec<f64> {
        self.as_slice().expanded_descending()
    }
}

/// `max_i |a_i - b_i|` over the sorted expansions. Different sizes are an
/// error rather than a large distance.
pub fn multiset_distance<A, B>(a: &A, b: &B) -> Result<f64>
where
    A: SpectrumMultiset + ?Sized,
    B: SpectrumMultiset + ?Sized,
{
    let a = a.expanded_descending();
    let b = b.expanded_descending();
    if a.len() != b.len() {
        return Err(Error::CountMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MedianPair {
    pub high: f64,
    pub low: f64,
    /// 1-based positions `floor((N+1)/2)` and `ceil((N+1)/2)`.
    pub indices: (usize, usize),
}

impl MedianPair {
    /// Both values lie in `[lo - guard, hi + guard]`.
    pub fn within(&self, lo: f64, hi: f64, guard: f64) -> bool {
        self.low >= lo - guard && self.high <= hi + guard
    }
}

pub fn median_eigenvalues(s: &SpectrumReport) -> Result<MedianPair> {
    let n = s.values.len();
    if n == 0 {
        return Err(Error::EmptySpectrum);
    }
    let hi_idx = n.div_ceil(2);
    let lo_idx = (n + 2) / 2;
    Ok(MedianPair {
        high: s.lambda(hi_idx),
        low: s.lambda(lo_idx),
        indices: (hi_idx, lo_idx),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn open(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    /// Membership after shrinking both ends by `guard`.
    pub fn contains_guarded(&self, x: f64, guard: f64) -> bool {
        let (lo, hi) = (self.lo + guard, self.hi - guard);
        let above = if self.lo_closed { x >= lo } else { x > lo };
        let below = if self.hi_closed { x <= hi } else { x < hi };
        above && below
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// 1-based eigenvalue position.
    pub index: usize,
    pub value: f64,
    /// Position in the checked interval list.
    pub interval: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalCheckResult {
    pub intervals: Vec<Interval>,
    pub guard: f64,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

/// Ten times the absolute residual of the solve.
pub fn default_guard(s: &SpectrumReport) -> f64 {
    10.0 * s.abs_error_bound()
}

/// Flags eigenvalues inside any of `intervals`. Values within `guard` of a
/// boundary are not violations.
pub fn forbidden_interval_check(
    s: &SpectrumReport,
    intervals: &[Interval],
    guard: f64,
) -> Result<IntervalCheckResult> {
    if let Some(bad) = intervals
        .iter()
        .find(|iv| iv.lo.is_nan() || iv.hi.is_nan() || iv.lo >= iv.hi)
    {
        return Err(Error::param(format!("interval {bad} needs lo < hi")));
    }
    let mut violations = Vec::new();
    for (i, &value) in s.values.iter().enumerate() {
        for (which, iv) in intervals.iter().enumerate() {
            if iv.contains_guarded(value, guard) {
                violations.push(Violation {
                    index: i + 1,
                    value,
                    interval: which,
                });
            }
        }
    }
    Ok(IntervalCheckResult {
        intervals: intervals.to_vec(),
        guard,
        pass: violations.is_empty(),
        violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterlacingReport {
    pub pass: bool,
    /// Smallest slack over all inequalities; negative means the inequality
    /// is violated by that much.
    pub worst_margin: f64,
    pub guard: f64,
    pub violations: usize,
}

/// Cauchy interlacing for an induced subgraph missing `k` vertices:
/// `lambda_i(W) >= lambda_i(P) >= lambda_{i+k}(W)` for `i = 1..=N-k`.
pub fn interlacing_check(
    spec_w: &SpectrumReport,
    spec_p: &SpectrumReport,
    k: usize,
) -> Result<InterlacingReport> {
    if spec_w.order != spec_p.order + k {
        return Err(Error::OrderMismatch {
            order_w: spec_w.order,
            order_p: spec_p.order,
            k,
        });
    }
    let guard = 10.0 * (spec_w.abs_error_bound() + spec_p.abs_error_bound());
    let mut worst = f64::INFINITY;
    let mut violations = 0;
    for i in 1..=spec_p.order {
        let p = spec_p.lambda(i);
        for margin in [spec_w.lambda(i) - p, p - spec_w.lambda(i + k)] {
            worst = worst.min(margin);
            if margin < -guard {
                violations += 1;
            }
        }
    }
    Ok(InterlacingReport {
        pass: violations == 0,
        worst_margin: worst,
        guard,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::closed_form_spectrum;
    use crate::graph::{build_cycle, build_heawood, build_pnk, build_wnk};

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn c4_spectrum() {
        let s = graph_spectrum(&build_cycle(4).unwrap(), &opts()).unwrap();
        let d = multiset_distance(&s, &vec![2.0, 0.0, 0.0, -2.0]).unwrap();
        assert!(d < 1e-12, "{d}");
        assert_eq!(s.clusters.len(), 3);
        assert_eq!(s.clusters[1].1, 2);
    }

    #[test]
    fn w42_matches_closed_form() {
        let s = graph_spectrum(&build_wnk(4, 2).unwrap(), &opts()).unwrap();
        let cf = closed_form_spectrum(4, 2).unwrap();
        assert!(multiset_distance(&s, &cf).unwrap() <= 1e-8);
        assert!(s.residual_bound <= 1e-9);
        let c = cluster_multiplicities(&s.values, 1e-6);
        assert_eq!(
            c.iter().map(|x| x.1).collect::<Vec<_>>(),
            vec![1, 2, 5, 5, 2, 1]
        );
        assert!((c[1].0 - 5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn heawood_spectrum() {
        let s = graph_spectrum(&build_heawood(), &opts()).unwrap();
        assert!((s.lambda(1) - 3.0).abs() < 1e-12);
        let r2 = 2f64.sqrt();
        let mults: Vec<_> = s.clusters.iter().map(|c| c.1).collect();
        assert_eq!(mults, vec![1, 6, 6, 1]);
        assert!((s.clusters[1].0 - r2).abs() < 1e-12);
        assert!((s.clusters[2].0 + r2).abs() < 1e-12);
        let m = median_eigenvalues(&s).unwrap();
        assert_eq!(m.indices, (7, 8));
        assert!((m.high - r2).abs() < 1e-12 && (m.low + r2).abs() < 1e-12);
    }

    #[test]
    fn clustering_edge_cases() {
        let c = cluster_multiplicities(&[1.0 + 1e-10, 1.0, -1.0], 1e-6);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, 2);
        assert!((c[0].0 - 1.0).abs() < 1e-9);
        assert_eq!(c[1], (-1.0, 1));
        assert!(cluster_multiplicities(&[], 1e-6).is_empty());
        // chain of small steps does not merge past the head's tolerance
        let c = cluster_multiplicities(&[0.0, -0.6e-6, -1.2e-6], 1e-6);
        assert_eq!(c.iter().map(|x| x.1).collect::<Vec<_>>(), vec![2, 1]);
    }

    #[test]
    fn distance_errors_on_size_mismatch() {
        let a = vec![0.0; 16];
        let b = vec![0.0; 18];
        assert!(matches!(
            multiset_distance(&a, &b),
            Err(Error::CountMismatch {
                left: 16,
                right: 18
            })
        ));
        assert_eq!(multiset_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn medians() {
        let single = SpectrumReport {
            values: vec![0.0],
            order: 1,
            residual_bound: 0.0,
            scale: 1.0,
            clusters: vec![(0.0, 1)],
        };
        let m = median_eigenvalues(&single).unwrap();
        assert_eq!((m.high, m.low, m.indices), (0.0, 0.0, (1, 1)));
        let five = SpectrumReport {
            values: vec![2.0, 1.0, 0.0, -1.0, -2.0],
            order: 5,
            ..single.clone()
        };
        assert_eq!(median_eigenvalues(&five).unwrap().indices, (3, 3));
        let empty = SpectrumReport {
            values: vec![],
            order: 0,
            ..single
        };
        assert!(matches!(
            median_eigenvalues(&empty),
            Err(Error::EmptySpectrum)
        ));
    }

    #[test]
    fn interval_checks() {
        let c4 = graph_spectrum(&build_cycle(4).unwrap(), &opts()).unwrap();
        let r = forbidden_interval_check(&c4, &[Interval::open(-1.0, 1.0)], default_guard(&c4))
            .unwrap();
        assert!(!r.pass);
        assert_eq!(r.violations.len(), 2);
        assert!(r.violations.iter().all(|v| v.value.abs() < 1e-12));

        let w = graph_spectrum(&build_wnk(6, 2).unwrap(), &opts()).unwrap();
        let r =
            forbidden_interval_check(&w, &[Interval::open(-1.0, 1.0)], default_guard(&w)).unwrap();
        assert!(r.pass, "{r:?}");

        let w = graph_spectrum(&build_wnk(5, 4).unwrap(), &opts()).unwrap();
        let gaps = [Interval::open(1.0, 3.0), Interval::open(-3.0, -1.0)];
        assert!(
            forbidden_interval_check(&w, &gaps, default_guard(&w))
                .unwrap()
                .pass
        );

        assert!(forbidden_interval_check(&w, &[Interval::open(1.0, 1.0)], 0.0).is_err());
    }

    #[test]
    fn guard_band_spares_boundary_values() {
        let s = SpectrumReport {
            values: vec![1.0 - 1e-12, 0.5],
            order: 2,
            residual_bound: 0.0,
            scale: 1.0,
            clusters: vec![],
        };
        let r = forbidden_interval_check(&s, &[Interval::open(-1.0, 1.0)], 1e-9).unwrap();
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].index, 2);
        let r = forbidden_interval_check(&s, &[Interval::closed(0.5, 0.9)], 0.0).unwrap();
        assert_eq!(r.violations.len(), 1);
    }

    #[test]
    fn interlacing() {
        for (n, k) in [(4, 2), (10, 3)] {
            let w = graph_spectrum(&build_wnk(n, k).unwrap(), &opts()).unwrap();
            let p = graph_spectrum(&build_pnk(n, k).unwrap(), &opts()).unwrap();
            let r = interlacing_check(&w, &p, k).unwrap();
            assert!(r.pass, "({n},{k}) {r:?}");
        }
        let w = graph_spectrum(&build_wnk(4, 2).unwrap(), &opts()).unwrap();
        let c = graph_spectrum(&build_cycle(15).unwrap(), &opts()).unwrap();
        assert!(matches!(
            interlacing_check(&w, &c, 2),
            Err(Error::OrderMismatch {
                order_w: 16,
                order_p: 15,
                k: 2
            })
        ));
    }

    #[test]
    fn rejects_asymmetric_and_oversized() {
        let mut m = DMatrix::<f64>::zeros(3, 3);
        m[(0, 1)] = 1.0;
        assert!(matches!(
            eigenvalues_symmetric(&m, &opts()),
            Err(Error::NotSymmetric { .. })
        ));
        let m = DMatrix::<f64>::zeros(2, 3);
        assert!(matches!(
            eigenvalues_symmetric(&m, &opts()),
            Err(Error::NotSquare { .. })
        ));
        let o = SolverOptions { cap: 4, ..opts() };
        let m = DMatrix::<f64>::identity(5, 5);
        assert!(matches!(
            eigenvalues_symmetric(&m, &o),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn csv_rows() {
        let s = graph_spectrum(&build_cycle(4).unwrap(), &opts()).unwrap();
        let csv = s.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "index,value,cluster_id");
        assert!(lines[2].ends_with(",2") && lines[3].ends_with(",2"));
        assert!(lines[4].starts_with("4,") && lines[4].ends_with(",3"));
    }
}
