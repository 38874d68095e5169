//! Exact spectral formulas for W(n,k) and the matrices used to derive them.
//!
//! The non-unit eigenvalues of W(n,k) are `+-tau_j` with
//! `tau_j = sqrt(k^2 + 1 + 2k cos(2 pi j / n))`, `j = 0..n`, and the rest of
//! the spectrum is `+-1` with multiplicity `(k-1)n` each. The derivation goes
//! through an `n x nk` matrix `Q` whose two Gram products are
//! `k^2 I + k A(C_n)` and `k I + A_V`; [`gram_identities_check`] verifies
//! both numerically.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_wnk_with_cap, cycle_multigraph_adjacency, square_decompose};

/// Values closer than this are the same eigenvalue when building the
/// predicted multiset.
pub const COINCIDENCE_TOL: f64 = 1e-9;

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::param(format!("n >= 2 required (got n = {n})")));
    }
    if k < 2 {
        return Err(Error::param(format!("k >= 2 required (got k = {k})")));
    }
    Ok(())
}

/// `cos(2 pi j / n)`, evaluated at `min(j, n - j)` so that `j` and `n - j`
/// give bit-identical results, and `j = n/2` gives exactly `-1`.
fn cos_turn(j: usize, n: usize) -> f64 {
    let j = j.min(n - j);
    (PI * ((2 * j) as f64 / n as f64)).cos()
}

/// `tau_j` for W(n,k).
pub fn tau(n: usize, k: usize, j: usize) -> Result<f64> {
    check_nk(n, k)?;
    if j >= n {
        return Err(Error::param(format!("j must lie in 0..{n} (got j = {j})")));
    }
    let k = k as f64;
    Ok((k * k + 1.0 + 2.0 * k * cos_turn(j, n)).sqrt())
}

/// A spectrum as distinct values with multiplicities, sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormSpectrum {
    pub entries: Vec<(f64, usize)>,
}

impl ClosedFormSpectrum {
    pub fn total(&self) -> usize {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    /// Flat descending list with each value repeated by its multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|&(v, m)| std::iter::repeat_n(v, m))
            .collect()
    }

    pub fn multiplicity_of(&self, value: f64, tol: f64) -> usize {
        self.entries
            .iter()
            .filter(|(v, _)| (v - value).abs() <= tol)
            .map(|&(_, m)| m)
            .sum()
    }
}

/// Group `(value, multiplicity)` pairs whose values lie within `tol` of the
/// first value of the group. Representative is the weighted mean.
fn merge_descending(mut items: Vec<(f64, usize)>, tol: f64) -> Vec<(f64, usize)> {
    items.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut head = f64::NAN;
    let mut sum = 0.0;
    for (v, m) in items {
        match out.last_mut() {
            Some(last) if (head - v).abs() <= tol => {
                sum += v * m as f64;
                last.1 += m;
                last.0 = sum / last.1 as f64;
            }
            _ => {
                head = v;
                sum = v * m as f64;
                out.push((v, m));
            }
        }
    }
    out
}

/// The predicted spectrum of W(n,k): `+tau_j` and `-tau_j` once for each
/// `j`, plus `+-1` with multiplicity `(k-1)n` each, with coincident values
/// merged. The total is always `2nk`.
pub fn closed_form_spectrum(n: usize, k: usize) -> Result<ClosedFormSpectrum> {
    check_nk(n, k)?;
    let ones = (k - 1) * n;
    let mut items = Vec::with_capacity(2 * n + 2);
    for j in 0..n {
        let t = tau(n, k, j)?;
        items.push((t, 1));
        items.push((-t, 1));
    }
    items.push((1.0, ones));
    items.push((-1.0, ones));
    Ok(ClosedFormSpectrum {
        entries: merge_descending(items, COINCIDENCE_TOL),
    })
}

/// `2 cos(2 pi j / n)` for `j = 0..n`, descending. Accepts `n = 2`, where
/// it is the spectrum of the doubled edge used for the two-ring case.
pub(crate) fn cycle_eigenvalues(n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|j| 2.0 * cos_turn(j, n)).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Eigenvalues of the cycle `C_n`, descending.
pub fn cycle_spectrum(n: usize) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::param(format!(
            "n >= 3 required for a cycle (got n = {n})"
        )));
    }
    Ok(cycle_eigenvalues(n))
}

/// Predicted spectrum of `Q Q^T`: `k^2 + 2k cos(2 pi j / n)`, descending.
pub fn qqt_eigenvalues(n: usize, k: usize) -> Result<Vec<f64>> {
    check_nk(n, k)?;
    let k = k as f64;
    Ok(cycle_eigenvalues(n)
        .into_iter()
        .map(|c| k * k + k * c)
        .collect())
}

/// The weights `alpha = sqrt(k/2 + sqrt(k^2 - 4)/2)` and `beta = 1/alpha`,
/// which satisfy `alpha beta = 1` and `alpha^2 + beta^2 = k`.
pub fn alpha_beta(k: usize) -> Result<(f64, f64)> {
    if k < 2 {
        return Err(Error::param(format!("k >= 2 required (got k = {k})")));
    }
    let k = k as f64;
    // k^2 - 4 = (k-2)(k+2) avoids cancellation for large k
    let disc = ((k - 2.0) * (k + 2.0)).sqrt();
    let alpha = (0.5 * k + 0.5 * disc).sqrt();
    Ok((alpha, 1.0 / alpha))
}

/// The `n x nk` matrix `Q`: row `i` holds `alpha` on the `k` columns of ring
/// `i` and `beta` on the `k` columns of ring `i-1` (cyclically).
pub fn build_q(n: usize, k: usize) -> Result<DMatrix<f64>> {
    check_nk(n, k)?;
    let (alpha, beta) = alpha_beta(k)?;
    Ok(DMatrix::from_fn(n, n * k, |row, col| {
        let ring = col / k;
        if ring == row {
            alpha
        } else if ring == (row + n - 1) % n {
            beta
        } else {
            0.0
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub pass: bool,
    pub max_abs_deviation_qqt: f64,
    pub max_abs_deviation_qtq: f64,
}

fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Compare `Q Q^T` with `k^2 I + k A(C_n)` and `Q^T Q` with `k I + A_V`,
/// where `A_V` comes from the actual W(n,k) graph.
pub fn gram_identities_check(n: usize, k: usize, tol: f64) -> Result<GramReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::param("tol > 0 required"));
    }
    let q = build_q(n, k)?;
    let kf = k as f64;

    let qqt = &q * q.transpose();
    let cycle = cycle_multigraph_adjacency(n).to_real();
    let want_qqt = DMatrix::identity(n, n) * (kf * kf) + cycle * kf;

    let blocks = square_decompose(&build_wnk_with_cap(n, k, usize::MAX)?)?;
    let qtq = q.transpose() * &q;
    let want_qtq = DMatrix::identity(n * k, n * k) * kf + blocks.a_v.to_real();

    let dev_qqt = max_abs_diff(&qqt, &want_qqt);
    let dev_qtq = max_abs_diff(&qtq, &want_qtq);
    Ok(GramReport {
        pass: dev_qqt <= tol && dev_qtq <= tol,
        max_abs_deviation_qqt: dev_qqt,
        max_abs_deviation_qtq: dev_qtq,
    })
}

/// Point masses and bands of a spectral measure on the real line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitMeasure {
    /// `(location, mass)`.
    pub atoms: Vec<(f64, f64)>,
    /// `(lo, hi, mass)`.
    pub bands: Vec<(f64, f64, f64)>,
}

impl LimitMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum::<f64>() + self.bands.iter().map(|b| b.2).sum::<f64>()
    }

    pub fn atom_mass(&self, location: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.0 == location)
            .map(|a| a.1)
            .sum()
    }
}

/// Spectral measure of the infinite limit graph `Z_k`: atoms at `+-1` of
/// mass `1/2 - 1/(2k)` and bands `[k-1, k+1]`, `[-k-1, -k+1]` of mass
/// `1/(2k)` each.
pub fn zk_limit_measure(k: usize) -> Result<LimitMeasure> {
    if k < 2 {
        return Err(Error::param(format!("k >= 2 required (got k = {k})")));
    }
    let kf = k as f64;
    let band = 1.0 / (2.0 * kf);
    let atom = 0.5 - band;
    Ok(LimitMeasure {
        atoms: vec![(1.0, atom), (-1.0, atom)],
        bands: vec![(kf - 1.0, kf + 1.0, band), (-kf - 1.0, -kf + 1.0, band)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn tau_values() {
        for n in 2..8 {
            for k in 2..6 {
                assert_eq!(tau(n, k, 0).unwrap(), (k + 1) as f64);
            }
        }
        assert_eq!(tau(4, 2, 2).unwrap(), 1.0);
        assert!(close(tau(4, 2, 1).unwrap(), 5f64.sqrt(), 1e-15));
        assert!(tau(4, 2, 4).is_err());
        assert!(tau(1, 2, 0).is_err());
    }

    #[test]
    fn tau_reflection_is_exact() {
        for n in 2..40 {
            for k in 2..7 {
                for j in 1..n {
                    assert_eq!(tau(n, k, j).unwrap(), tau(n, k, n - j).unwrap());
                }
            }
        }
    }

    #[test]
    fn spectrum_w42() {
        let s = closed_form_spectrum(4, 2).unwrap();
        let r5 = 5f64.sqrt();
        let want = [(3.0, 1), (r5, 2), (1.0, 5), (-1.0, 5), (-r5, 2), (-3.0, 1)];
        assert_eq!(s.entries.len(), want.len());
        for (&(v, m), &(wv, wm)) in s.entries.iter().zip(&want) {
            assert!(close(v, wv, 1e-12), "{v} vs {wv}");
            assert_eq!(m, wm);
        }
        assert_eq!(s.total(), 16);
    }

    #[test]
    fn spectrum_w23() {
        let s = closed_form_spectrum(2, 3).unwrap();
        let want = [
            (4.0, 1),
            (2.0, 1),
            (1.0, 4),
            (-1.0, 4),
            (-2.0, 1),
            (-4.0, 1),
        ];
        assert_eq!(s.entries, want.to_vec());
    }

    #[test]
    fn cycle_spectra() {
        let c4 = cycle_spectrum(4).unwrap();
        let want = [2.0, 0.0, 0.0, -2.0];
        assert!(c4.iter().zip(want).all(|(a, b)| close(*a, b, 1e-15)));
        let c3 = cycle_spectrum(3).unwrap();
        assert!(c3
            .iter()
            .zip([2.0, -1.0, -1.0])
            .all(|(a, b)| close(*a, b, 1e-15)));
        let c6 = cycle_spectrum(6).unwrap();
        let want = [2.0, 1.0, 1.0, -1.0, -1.0, -2.0];
        assert!(c6.iter().zip(want).all(|(a, b)| close(*a, b, 1e-15)));
        assert!(cycle_spectrum(2).is_err());
    }

    #[test]
    fn alpha_beta_identities() {
        assert_eq!(alpha_beta(2).unwrap(), (1.0, 1.0));
        let (a, b) = alpha_beta(3).unwrap();
        assert!(close(a * a + b * b, 3.0, 1e-12));
        let (a, b) = alpha_beta(5).unwrap();
        assert!(close(a * b, 1.0, 1e-12));
        assert!(alpha_beta(1).is_err());
    }

    #[test]
    fn q_shape_and_pattern() {
        let q = build_q(2, 2).unwrap();
        assert_eq!(q.shape(), (2, 4));
        assert!(q.iter().all(|&x| x == 1.0));

        let q = build_q(4, 2).unwrap();
        let (a, b) = alpha_beta(2).unwrap();
        let row0: Vec<f64> = q.row(0).iter().copied().collect();
        assert_eq!(row0, vec![a, a, 0.0, 0.0, 0.0, 0.0, b, b]);

        let q = build_q(3, 3).unwrap();
        let (a, b) = alpha_beta(3).unwrap();
        for r in 0..3 {
            assert_eq!(q.row(r).iter().filter(|&&x| x != 0.0).count(), 6);
        }
        for c in 0..9 {
            let col: Vec<f64> = q.column(c).iter().copied().filter(|&x| x != 0.0).collect();
            assert_eq!(col.len(), 2);
            assert!(col.contains(&a) && col.contains(&b));
        }
    }

    #[test]
    fn gram_checks() {
        for (n, k) in [(4, 2), (2, 2), (6, 5)] {
            let r = gram_identities_check(n, k, 1e-10).unwrap();
            assert!(r.pass, "({n},{k}): {r:?}");
        }
    }

    #[test]
    fn limit_measures() {
        let m = zk_limit_measure(2).unwrap();
        assert_eq!(m.atoms, vec![(1.0, 0.25), (-1.0, 0.25)]);
        assert_eq!(m.bands, vec![(1.0, 3.0, 0.25), (-3.0, -1.0, 0.25)]);
        let m = zk_limit_measure(3).unwrap();
        assert!(close(m.atom_mass(1.0), 1.0 / 3.0, 1e-15));
        assert!(close(m.bands[0].2, 1.0 / 6.0, 1e-15));
        assert_eq!((m.bands[0].0, m.bands[0].1), (2.0, 4.0));
        assert_eq!((m.bands[1].0, m.bands[1].1), (-4.0, -2.0));
    }

    #[test]
    fn serializes_as_pairs() {
        let s = closed_form_spectrum(2, 3).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(
            json.starts_with(r#"{"entries":[[4.0,1],[2.0,1],[1.0,4]"#),
            "{json}"
        );
        let m = serde_json::to_string(&zk_limit_measure(2).unwrap()).unwrap();
        assert_eq!(
            m,
            r#"{"atoms":[[1.0,0.25],[-1.0,0.25]],"bands":[[1.0,3.0,0.25],[-3.0,-1.0,0.25]]}"#
        );
    }
}
