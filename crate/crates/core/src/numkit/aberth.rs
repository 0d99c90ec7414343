//! Ehrlich-Aberth simultaneous iteration with deterministic perturbed-circle
//! initialization. Multiple roots converge linearly and stall at roughly
//! eps^(1/m); the stopping rule therefore accepts an approximant once its
//! residual drops to the evaluation noise floor, and reports a per-root
//! Newton-step error estimate for the clustering stage.

use super::{NumError, UniPoly};
use num_complex::Complex64;

const MAX_ITERS: usize = 600;

pub(super) struct Approximant {
    pub value: Complex64,
    pub error: f64,
}

/// Residual scale sum |a_i| |z|^i, the roundoff envelope of Horner evaluation.
fn noise_scale(p: &UniPoly, z: Complex64) -> f64 {
    let r = z.norm();
    let mut acc = 0.0;
    let mut pw = 1.0;
    for c in p.coeffs() {
        acc += c.norm() * pw;
        pw *= r;
    }
    acc.max(f64::MIN_POSITIVE)
}

pub(super) fn solve(p: &UniPoly) -> Result<Vec<Approximant>, NumError> {
    let n = p.degree();
    debug_assert!(n >= 1);
    let lead = p.leading();
    let cauchy = 1.0
        + p.coeffs()[..n]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max);
    let radius = cauchy.min(1e6).max(0.5);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.41;
            Complex64::from_polar(radius * (1.0 + 1e-3 * (k as f64)), theta)
        })
        .collect();
    let deriv = p.derivative().expect("degree >= 1");
    let eps = f64::EPSILON;
    let mut newton = vec![f64::INFINITY; n];
    let mut frozen = vec![false; n];
    for _ in 0..MAX_ITERS {
        let mut moved = false;
        for k in 0..n {
            if frozen[k] {
                continue;
            }
            let pv = p.eval(z[k]);
            let noise = 4.0 * (n as f64 + 1.0) * eps * noise_scale(p, z[k]);
            if pv.norm() <= noise {
                frozen[k] = true;
                let dv = deriv.eval(z[k]);
                newton[k] = if dv.norm() > 0.0 {
                    (pv / dv).norm().max(eps * (1.0 + z[k].norm()))
                } else {
                    eps.sqrt() * (1.0 + z[k].norm())
                };
                continue;
            }
            let dv = deriv.eval(z[k]);
            let w = if dv.norm() * f64::MAX.sqrt() > pv.norm() {
                pv / dv
            } else {
                // derivative vanished: nudge off the stationary point
                let scale = 1.0 + z[k].norm();
                z[k] += Complex64::new(1e-6, 2e-6) * scale;
                moved = true;
                continue;
            };
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    let d = z[k] - z[j];
                    if d.norm() > 0.0 {
                        s += Complex64::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let corr = if denom.norm() > 1e-14 { w / denom } else { w };
            z[k] -= corr;
            newton[k] = w.norm();
            if corr.norm() > eps * (1.0 + z[k].norm()) {
                moved = true;
            } else {
                frozen[k] = true;
            }
        }
        if !moved {
            break;
        }
    }
    let mut worst = 0.0f64;
    for k in 0..n {
        let ratio = p.eval(z[k]).norm() / noise_scale(p, z[k]);
        worst = worst.max(ratio);
    }
    // Converged approximants sit at the noise floor (~1e-15); anything many
    // orders above that means the iteration genuinely failed.
    if worst > 1e-6 {
        return Err(NumError::NonConvergence(worst));
    }
    Ok((0..n)
        .map(|k| Approximant {
            value: z[k],
            error: newton[k].max(eps * (1.0 + z[k].norm())),
        })
        .collect())
}
