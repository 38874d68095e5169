use serde::{Deserialize, Serialize};

use super::AnalysisConfig;
use crate::closed_form::{build_q, gram_identities_check, qqt_eigenvalues, GramReport};
use crate::error::Result;
use crate::graph::{build_wnk_with_cap, square_decompose};
use crate::spectral::{eigenvalues_symmetric, multiset_distance};

/// Numeric check of each step in the derivation of the W(n,k) spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofReport {
    pub n: usize,
    pub k: usize,
    pub pass: bool,
    pub gram: GramReport,
    /// Numeric `sigma(Q Q^T)` against `k^2 + 2k cos(2 pi j / n)`.
    pub qqt_distance: f64,
    /// Numeric `sigma(Q^T Q)` against the same values plus `nk - n` zeros.
    pub qtq_distance: f64,
    /// Numeric `sigma(A_V)` against `sigma(A_W)`.
    pub blocks_distance: f64,
    /// Every row of both blocks sums to exactly `k^2 + k`.
    pub block_row_sums_exact: bool,
    /// `A_V = B1 + k B2` entrywise.
    pub ring_structure: bool,
}

pub fn proof_machinery_check(
    n: usize,
    k: usize,
    tol: f64,
    gram_tol: f64,
    cfg: &AnalysisConfig,
) -> Result<ProofReport> {
    let gram = gram_identities_check(n, k, gram_tol)?;
    let q = build_q(n, k)?;
    let predicted = qqt_eigenvalues(n, k)?;

    let qqt = eigenvalues_symmetric(&(&q * q.transpose()), &cfg.solver)?;
    let qqt_distance = multiset_distance(&qqt, &predicted)?;

    let qtq = eigenvalues_symmetric(&(q.transpose() * &q), &cfg.solver)?;
    let mut with_zeros = predicted.clone();
    with_zeros.extend(std::iter::repeat_n(0.0, n * k - n));
    let qtq_distance = multiset_distance(&qtq, &with_zeros)?;

    let blocks = square_decompose(&build_wnk_with_cap(n, k, cfg.solver.cap)?)?;
    let sv = eigenvalues_symmetric(&blocks.a_v.to_real(), &cfg.solver)?;
    let sw = eigenvalues_symmetric(&blocks.a_w.to_real(), &cfg.solver)?;
    let blocks_distance = multiset_distance(&sv, &sw)?;
    let want = (k * k + k) as i64;
    let block_row_sums_exact = blocks
        .a_v
        .row_sums()
        .iter()
        .chain(blocks.a_w.row_sums().iter())
        .all(|&s| s == want);
    let ring_structure = blocks.matches_ring_structure();

    Ok(ProofReport {
        n,
        k,
        pass: gram.pass
            && qqt_distance <= tol
            && qtq_distance <= tol
            && blocks_distance <= tol
            && block_row_sums_exact
            && ring_structure,
        gram,
        qqt_distance,
        qtq_distance,
        blocks_distance,
        block_row_sums_exact,
        ring_structure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        for (n, k) in [(2, 2), (4, 2), (3, 3), (6, 5)] {
            let r = proof_machinery_check(n, k, 1e-8, 1e-10, &AnalysisConfig::default()).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}
