//! Empirical spectral distribution of P(n,k) against the limit measure of
//! the infinite graph `Z_k`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::AnalysisConfig;
use crate::closed_form::{zk_limit_measure, LimitMeasure};
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{build_pnk_with_cap, build_wnk_with_cap, Graph};
use crate::spectral::{graph_spectrum, SpectrumReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EsdMasses {
    pub atom_mass_plus1: f64,
    pub atom_mass_minus1: f64,
    pub band_mass_pos: f64,
    pub band_mass_neg: f64,
    pub out_of_support_mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: usize,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsdReport {
    pub n: usize,
    pub k: usize,
    /// Order of P(n,k).
    pub order: usize,
    pub atom_mass_plus1: f64,
    pub atom_mass_minus1: f64,
    pub band_mass_pos: f64,
    pub band_mass_neg: f64,
    pub out_of_support_count: usize,
    pub out_of_support_mass: f64,
    /// `bins` bins over `[-k-1, -k+1]` followed by `bins` over `[k-1, k+1]`;
    /// only band eigenvalues are binned.
    pub histogram: Vec<HistogramBin>,
    /// The same masses for W(n,k).
    pub wnk_reference: EsdMasses,
}

impl EsdReport {
    pub fn masses(&self) -> EsdMasses {
        EsdMasses {
            atom_mass_plus1: self.atom_mass_plus1,
            atom_mass_minus1: self.atom_mass_minus1,
            band_mass_pos: self.band_mass_pos,
            band_mass_neg: self.band_mass_neg,
            out_of_support_mass: self.out_of_support_mass,
        }
    }

    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,count,mass\n");
        for b in &self.histogram {
            writeln!(out, "{},{},{},{}", b.bin_lo, b.bin_hi, b.count, b.mass).unwrap();
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    AtomPlus,
    AtomMinus,
    BandPos,
    BandNeg,
    Outside,
}

struct Classified {
    counts: [usize; 5],
    band_values: Vec<f64>,
    order: usize,
}

fn classify(s: &SpectrumReport, k: usize, cfg: &AnalysisConfig) -> Classified {
    let kf = k as f64;
    let guard = cfg.guard(s);
    let mut counts = [0usize; 5];
    let mut band_values = Vec::new();
    for &v in &s.values {
        let class = if (v - 1.0).abs() <= cfg.atom_tol {
            Class::AtomPlus
        } else if (v + 1.0).abs() <= cfg.atom_tol {
            Class::AtomMinus
        } else if v >= kf - 1.0 - guard && v <= kf + 1.0 + guard {
            Class::BandPos
        } else if v <= -kf + 1.0 + guard && v >= -kf - 1.0 - guard {
            Class::BandNeg
        } else {
            Class::Outside
        };
        counts[class as usize] += 1;
        if matches!(class, Class::BandPos | Class::BandNeg) {
            band_values.push(v);
        }
    }
    Classified {
        counts,
        band_values,
        order: s.values.len(),
    }
}

impl Classified {
    fn masses(&self) -> EsdMasses {
        let m = |c: Class| self.counts[c as usize] as f64 / self.order as f64;
        EsdMasses {
            atom_mass_plus1: m(Class::AtomPlus),
            atom_mass_minus1: m(Class::AtomMinus),
            band_mass_pos: m(Class::BandPos),
            band_mass_neg: m(Class::BandNeg),
            out_of_support_mass: m(Class::Outside),
        }
    }

    fn histogram(&self, k: usize, bins: usize) -> Vec<HistogramBin> {
        let kf = k as f64;
        let width = 2.0 / bins as f64;
        let mut out = Vec::with_capacity(2 * bins);
        for lo in [-kf - 1.0, kf - 1.0] {
            let mut counts = vec![0usize; bins];
            for &v in &self.band_values {
                if (v < 0.0) == (lo < 0.0) {
                    let b = ((v - lo) / width).floor().clamp(0.0, (bins - 1) as f64) as usize;
                    counts[b] += 1;
                }
            }
            out.extend(
                counts
                    .into_iter()
                    .enumerate()
                    .map(|(i, count)| HistogramBin {
                        bin_lo: lo + i as f64 * width,
                        bin_hi: lo + (i + 1) as f64 * width,
                        count,
                        mass: count as f64 / self.order as f64,
                    }),
            );
        }
        out
    }
}

/// Classify the spectrum of P(n,k) into atoms at `+-1`, the two bands, and
/// everything else, and bin the band eigenvalues.
pub fn esd(n: usize, k: usize, bins: usize, cfg: &AnalysisConfig) -> Result<EsdReport> {
    if bins < 1 {
        return Err(Error::param("bins >= 1 required"));
    }
    let graphs = [
        build_pnk_with_cap(n, k, cfg.solver.cap)?,
        build_wnk_with_cap(n, k, cfg.solver.cap)?,
    ];
    let spectra = exec::try_map_slice(&graphs, cfg.exec, |g: &Graph| {
        graph_spectrum(g, &cfg.solver)
    })?;
    let p = classify(&spectra[0], k, cfg);
    let w = classify(&spectra[1], k, cfg);
    let m = p.masses();
    Ok(EsdReport {
        n,
        k,
        order: p.order,
        atom_mass_plus1: m.atom_mass_plus1,
        atom_mass_minus1: m.atom_mass_minus1,
        band_mass_pos: m.band_mass_pos,
        band_mass_neg: m.band_mass_neg,
        out_of_support_count: p.counts[Class::Outside as usize],
        out_of_support_mass: m.out_of_support_mass,
        histogram: p.histogram(k, bins),
        wnk_reference: w.masses(),
    })
}

/// Absolute deviation of each mass from the limit measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassDeviation {
    pub atom_plus1: f64,
    pub atom_minus1: f64,
    pub band_pos: f64,
    pub band_neg: f64,
}

impl MassDeviation {
    pub fn between(m: &EsdMasses, limit: &LimitMeasure) -> Self {
        let atom = limit.atom_mass(1.0);
        let band = limit.bands[0].2;
        MassDeviation {
            atom_plus1: (m.atom_mass_plus1 - atom).abs(),
            atom_minus1: (m.atom_mass_minus1 - atom).abs(),
            band_pos: (m.band_mass_pos - band).abs(),
            band_neg: (m.band_mass_neg - band).abs(),
        }
    }

    fn as_array(&self) -> [f64; 4] {
        [
            self.atom_plus1,
            self.atom_minus1,
            self.band_pos,
            self.band_neg,
        ]
    }

    pub fn max(&self) -> f64 {
        self.as_array().into_iter().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub report: EsdReport,
    pub deviation: MassDeviation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub k: usize,
    pub limit: LimitMeasure,
    pub rows: Vec<ConvergenceRow>,
    /// Each deviation at `n_(i+1)` is at most its value at `n_i` plus
    /// `2 / n_(i+1)`.
    pub monotone: bool,
}

pub fn esd_convergence(
    k: usize,
    n_list: &[usize],
    bins: usize,
    cfg: &AnalysisConfig,
) -> Result<ConvergenceTable> {
    if n_list.is_empty() {
        return Err(Error::param("n list must not be empty"));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("n list must be strictly ascending"));
    }
    let limit = zk_limit_measure(k)?;
    let reports = exec::try_map_slice(n_list, cfg.exec, |&n| esd(n, k, bins, cfg))?;
    let rows: Vec<ConvergenceRow> = reports
        .into_iter()
        .map(|report| ConvergenceRow {
            n: report.n,
            deviation: MassDeviation::between(&report.masses(), &limit),
            report,
        })
        .collect();
    let monotone = rows.windows(2).all(|w| {
        let slack = 2.0 / w[1].n as f64;
        let prev = w[0].deviation.as_array();
        let next = w[1].deviation.as_array();
        prev.iter().zip(&next).all(|(p, q)| *q <= p + slack)
    });
    Ok(ConvergenceTable {
        k,
        limit,
        rows,
        monotone,
    })
}
