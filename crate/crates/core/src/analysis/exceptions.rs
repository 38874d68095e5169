use serde::{Deserialize, Serialize};

use super::AnalysisConfig;
use crate::error::Result;
use crate::graph::build_pnk_with_cap;
use crate::spectral::graph_spectrum;

/// Eigenvalues of P(n,k) that are neither `+-1` nor in `+-[k-1, k+1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionReport {
    pub n: usize,
    pub k: usize,
    pub count_total: usize,
    /// In `(-1, 1)`.
    pub count_in_pm_open_unit: usize,
    /// In `(1, k-1)`.
    pub count_in_pos_gap: usize,
    /// In `(-k+1, -1)`.
    pub count_in_neg_gap: usize,
    /// Beyond `+-(k+1)`; interlacing forbids these.
    pub count_beyond_bands: usize,
    pub exceptions: Vec<f64>,
    /// `count_total <= 3k` and each region count `<= k`.
    pub pass: bool,
}

pub fn exception_count_pnk(n: usize, k: usize, cfg: &AnalysisConfig) -> Result<ExceptionReport> {
    let g = build_pnk_with_cap(n, k, cfg.solver.cap)?;
    let s = graph_spectrum(&g, &cfg.solver)?;
    let guard = cfg.guard(&s);
    let kf = k as f64;

    let mut report = ExceptionReport {
        n,
        k,
        count_total: 0,
        count_in_pm_open_unit: 0,
        count_in_pos_gap: 0,
        count_in_neg_gap: 0,
        count_beyond_bands: 0,
        exceptions: Vec::new(),
        pass: false,
    };
    for &v in &s.values {
        let a = v.abs();
        let atom = (a - 1.0).abs() <= cfg.atom_tol;
        let band = a >= kf - 1.0 - guard && a <= kf + 1.0 + guard;
        if atom || band {
            continue;
        }
        report.count_total += 1;
        report.exceptions.push(v);
        if a < 1.0 {
            report.count_in_pm_open_unit += 1;
        } else if a < kf - 1.0 {
            if v > 0.0 {
                report.count_in_pos_gap += 1;
            } else {
                report.count_in_neg_gap += 1;
            }
        } else {
            report.count_beyond_bands += 1;
        }
    }
    report.pass = report.count_total <= 3 * k
        && report.count_in_pm_open_unit <= k
        && report.count_in_pos_gap <= k
        && report.count_in_neg_gap <= k
        && report.count_beyond_bands == 0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets() {
        let cfg = AnalysisConfig::default();
        let r = exception_count_pnk(4, 2, &cfg).unwrap();
        assert!(r.pass && r.count_total <= 6, "{r:?}");
        let r = exception_count_pnk(10, 3, &cfg).unwrap();
        assert!(r.pass && r.count_total <= 9, "{r:?}");
        let r = exception_count_pnk(2, 2, &cfg).unwrap();
        assert!(r.pass);
        assert_eq!(
            r.count_total,
            r.count_in_pm_open_unit
                + r.count_in_pos_gap
                + r.count_in_neg_gap
                + r.count_beyond_bands
        );
    }
}
