//! Finite-difference Jacobian rank certification for holomorphic maps
//! C^m -> C^n supplied as evaluation callbacks.

use super::NumError;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Evidence for a claimed Jacobian rank: the full singular spectrum plus the
/// accepted/rejected gap, the step that produced it, and the instance seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankCertificate {
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub gap_ratio: f64,
    pub step: f64,
    pub seed: u64,
}

/// Builds the n x m complex matrix of central differences of `f` around
/// `base` and reports the number of singular values above `gap_tol` relative
/// to the largest.
pub fn jacobian_rank<E: std::fmt::Display>(
    mut f: impl FnMut(&[Complex64]) -> Result<Vec<Complex64>, E>,
    base: &[Complex64],
    step: f64,
    gap_tol: f64,
    seed: u64,
) -> Result<RankCertificate, NumError> {
    if !(step.is_normal() && step > 0.0) {
        return Err(NumError::DegenerateStep);
    }
    let m = base.len();
    let probe = f(base).map_err(|e| NumError::EvaluationFailure(e.to_string()))?;
    let n = probe.len();
    let mut jac = nalgebra::DMatrix::<Complex64>::zeros(n, m);
    let h = Complex64::new(step, 0.0);
    for col in 0..m {
        let mut zp = base.to_vec();
        let mut zm = base.to_vec();
        zp[col] += h;
        zm[col] -= h;
        let fp = f(&zp).map_err(|e| NumError::EvaluationFailure(e.to_string()))?;
        let fm = f(&zm).map_err(|e| NumError::EvaluationFailure(e.to_string()))?;
        if fp.len() != n || fm.len() != n {
            return Err(NumError::EvaluationFailure(format!(
                "callback output length changed ({} vs {})",
                fp.len(),
                n
            )));
        }
        for row in 0..n {
            jac[(row, col)] = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    let mut sv: Vec<f64> = jac.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    let top = sv.first().copied().unwrap_or(0.0);
    let (rank, gap_ratio) = if top <= 0.0 {
        (0, 1.0)
    } else {
        let rank = sv.iter().filter(|s| *s / top > gap_tol).count();
        let gap = if rank == 0 { 1.0 } else { sv[rank - 1] / top };
        (rank, gap)
    };
    Ok(RankCertificate {
        singular_values: sv,
        rank,
        gap_ratio,
        step,
        seed,
    })
}
