//! Single source of truth for the numerical tolerances used by the
//! floating-point modules. Every certificate is reproducible from a seed and
//! one of these profiles; nothing reads tolerances from globals.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceProfile {
    /// Relative threshold below which a coefficient counts as zero.
    pub zero_tol: f64,
    /// |F(p)| bound for a unit-norm curve and unit-norm point to count as on-curve.
    pub on_curve_tol: f64,
    /// Floor distance for merging root approximants into one cluster.
    pub cluster_tol: f64,
    /// Residual bound for geometric assertions (base points, flexes).
    pub residual_tol: f64,
    /// sigma_i / sigma_max threshold for accepting a singular value as nonzero.
    pub gap_tol: f64,
    /// Central finite-difference step on unit-scaled inputs.
    pub step: f64,
    /// Chordal tolerance when matching point multisets / continuation.
    pub match_tol: f64,
    /// Chordal tolerance for group-law assertions.
    pub group_tol: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile {
            zero_tol: 1e-12,
            on_curve_tol: 1e-8,
            cluster_tol: 1e-4,
            residual_tol: 1e-8,
            gap_tol: 1e-6,
            step: 1e-5,
            match_tol: 1e-6,
            group_tol: 1e-7,
        }
    }
}

impl ToleranceProfile {
    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            ("zero_tol", self.zero_tol),
            ("on_curve_tol", self.on_curve_tol),
            ("cluster_tol", self.cluster_tol),
            ("residual_tol", self.residual_tol),
            ("gap_tol", self.gap_tol),
            ("step", self.step),
            ("match_tol", self.match_tol),
            ("group_tol", self.group_tol),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("tolerance {name} must be positive and finite, got {v}"));
            }
        }
        Ok(())
    }
}
