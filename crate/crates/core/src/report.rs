//! Seeded instance generation and the experiment runner behind the CLI.

use crate::cubic::{is_smooth, Projectivity, TernaryCubic};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Deterministic smooth cubic for a seed: rejection-sampled on the
/// smoothness gate.
pub fn random_smooth_cubic(seed: u64) -> TernaryCubic {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    loop {
        let mut c = [cx(0.0, 0.0); 10];
        for v in &mut c {
            *v = random_complex(&mut rng);
        }
        if let Ok(f) = TernaryCubic::new(c) {
            if is_smooth(&f, 1e-6) {
                return f;
            }
        }
    }
}

/// Deterministic well-conditioned projectivity for a seed.
pub fn random_projectivity(seed: u64) -> Projectivity {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6a09e667f3bcc909);
    loop {
        let m = nalgebra::Matrix3::from_fn(|_, _| random_complex(&mut rng));
        let scale = m.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if m.determinant().norm() > 0.05 * scale.powi(3) {
            if let Ok(p) = Projectivity::new(m) {
                return p;
            }
        }
    }
}
