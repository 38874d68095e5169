use serde::{Deserialize, Serialize};

use super::AnalysisConfig;
use crate::closed_form::{closed_form_spectrum, gram_identities_check, GramReport};
use crate::error::Result;
use crate::exec;
use crate::graph::build_wnk_with_cap;
use crate::spectral::{
    forbidden_interval_check, graph_spectrum, median_eigenvalues, multiset_distance, Interval,
    IntervalCheckResult, MedianPair,
};

/// Tolerance for the two Gram identities.
pub const GRAM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandCheck {
    pub pass: bool,
    /// Eigenvalues that are neither `+-1` nor inside `+-[k-1, k+1]`.
    pub outside: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    pub k: usize,
    pub pass: bool,
    pub tol: f64,
    pub order: usize,
    pub closed_form_total: usize,
    pub multiset_distance: f64,
    pub median_pair: MedianPair,
    pub median_pass: bool,
    pub interval_checks: Vec<IntervalCheckResult>,
    pub band_check: BandCheck,
    pub gram: GramReport,
    pub residual_bound: f64,
    pub notes: Vec<String>,
}

fn coincidence_notes(n: usize, k: usize) -> Vec<String> {
    let mut notes = Vec::new();
    let pairs = (1..n).filter(|&j| j < n - j).count();
    if pairs > 0 {
        notes.push(format!(
            "tau_j = tau_(n-j): {pairs} pair(s) merged into multiplicity-2 values"
        ));
    }
    if k == 2 && n.is_multiple_of(2) {
        notes.push(format!(
            "tau_{} = 1 coincides with the +-1 eigenvalues, raising their multiplicity to {}",
            n / 2,
            n + 1
        ));
    }
    notes
}

/// Solve W(n,k) numerically and check it against the closed form, the
/// median pair `(1, -1)`, the empty open intervals `(-1, 1)` and
/// `+-(1, k-1)`, the band containment, and both Gram identities.
pub fn verify_theorem_evals(
    n: usize,
    k: usize,
    tol: f64,
    cfg: &AnalysisConfig,
) -> Result<VerificationReport> {
    let g = build_wnk_with_cap(n, k, cfg.solver.cap)?;
    let predicted = closed_form_spectrum(n, k)?;
    let s = graph_spectrum(&g, &cfg.solver)?;
    let distance = multiset_distance(&s, &predicted)?;

    let median = median_eigenvalues(&s)?;
    let median_pass = (median.high - 1.0).abs() <= tol && (median.low + 1.0).abs() <= tol;

    let kf = k as f64;
    let mut intervals = vec![Interval::open(-1.0, 1.0)];
    if k > 2 {
        intervals.push(Interval::open(1.0, kf - 1.0));
        intervals.push(Interval::open(-kf + 1.0, -1.0));
    }
    let guard = cfg.guard(&s);
    let interval_check = forbidden_interval_check(&s, &intervals, guard)?;

    let in_band = |v: f64| {
        let a = v.abs();
        a >= kf - 1.0 - tol && a <= kf + 1.0 + tol
    };
    let outside: Vec<f64> = s
        .values
        .iter()
        .copied()
        .filter(|&v| (v.abs() - 1.0).abs() > cfg.atom_tol && !in_band(v))
        .collect();
    let band_check = BandCheck {
        pass: outside.is_empty(),
        outside,
    };

    let gram = gram_identities_check(n, k, GRAM_TOL)?;
    let order = g.order();
    let total = predicted.total();
    let pass = total == order
        && distance <= tol
        && median_pass
        && interval_check.pass
        && band_check.pass
        && gram.pass;
    Ok(VerificationReport {
        n,
        k,
        pass,
        tol,
        order,
        closed_form_total: total,
        multiset_distance: distance,
        median_pair: median,
        median_pass,
        interval_checks: vec![interval_check],
        band_check,
        gram,
        residual_bound: s.residual_bound,
        notes: coincidence_notes(n, k),
    })
}

/// [`verify_theorem_evals`] over every `(n, k)` in `ns x ks`, n-major.
pub fn verify_grid(
    ns: &[usize],
    ks: &[usize],
    tol: f64,
    cfg: &AnalysisConfig,
) -> Result<Vec<VerificationReport>> {
    let points: Vec<(usize, usize)> = ns
        .iter()
        .flat_map(|&n| ks.iter().map(move |&k| (n, k)))
        .collect();
    exec::try_map_slice(&points, cfg.exec, |&(n, k)| {
        verify_theorem_evals(n, k, tol, cfg)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w42_passes_with_coincidence_note() {
        let r = verify_theorem_evals(4, 2, 1e-8, &AnalysisConfig::default()).unwrap();
        assert!(r.pass, "{r:#?}");
        assert!(
            r.notes.iter().any(|n| n.contains("tau_2 = 1")),
            "{:?}",
            r.notes
        );
    }

    #[test]
    fn w23_passes() {
        let r = verify_theorem_evals(2, 3, 1e-8, &AnalysisConfig::default()).unwrap();
        assert!(r.pass);
        assert_eq!(r.order, 12);
        assert!(r.multiset_distance <= 1e-8);
    }

    #[test]
    fn w54_bands() {
        let r = verify_theorem_evals(5, 4, 1e-8, &AnalysisConfig::default()).unwrap();
        assert!(r.pass && r.band_check.pass);
        assert_eq!(r.interval_checks[0].intervals.len(), 3);
    }

    #[test]
    fn propagates_parameter_errors() {
        assert!(verify_theorem_evals(4, 1, 1e-8, &AnalysisConfig::default()).is_err());
    }
}
