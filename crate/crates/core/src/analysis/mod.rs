//! Experiments on top of the spectral engine.
//!
//! Every batch entry point takes an [`AnalysisConfig`]; its `exec` field
//! decides whether independent work items (grid points, sampled graphs)
//! run on the rayon pool. Results are always collected in work-item order.

mod enumerate;
mod esd;
mod exceptions;
mod proof;
mod scan;
mod verify;

use crate::exec::Exec;
use crate::spectral::{default_guard, SolverOptions, SpectrumReport};

pub use enumerate::{enumerate_cubic_bipartite_14, EnumerationReport};
pub use esd::{
    esd, esd_convergence, ConvergenceRow, ConvergenceTable, EsdMasses, EsdReport, HistogramBin,
    MassDeviation,
};
pub use exceptions::{exception_count_pnk, ExceptionReport};
pub use proof::{proof_machinery_check, ProofReport};
pub use scan::{
    catalog, derive_seed, is_heawood, random_subcubic_bipartite, scan_catalog,
    scan_subcubic_bipartite, ExceptionRecord, GraphRecord, ScanParams, ScanReport,
};
pub use verify::{verify_grid, verify_theorem_evals, BandCheck, VerificationReport, GRAM_TOL};

pub const DEFAULT_ATOM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub solver: SolverOptions,
    /// Distance within which an eigenvalue counts as the atom `+-1`.
    pub atom_tol: f64,
    /// Policy for the outer loop over work items.
    pub exec: Exec,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            solver: SolverOptions::default(),
            atom_tol: DEFAULT_ATOM_TOL,
            exec: Exec::Parallel,
        }
    }
}

impl AnalysisConfig {
    pub fn sequential() -> Self {
        AnalysisConfig {
            solver: SolverOptions::default().sequential(),
            exec: Exec::Sequential,
            ..Default::default()
        }
    }

    pub fn with_exec(self, exec: Exec) -> Self {
        AnalysisConfig {
            solver: SolverOptions {
                exec,
                ..self.solver
            },
            exec,
            ..self
        }
    }

    /// Boundary guard for a solved spectrum: the residual-based guard, never
    /// tighter than the solver tolerance.
    pub(crate) fn guard(&self, s: &SpectrumReport) -> f64 {
        default_guard(s).max(self.solver.tol)
    }
}
