use period_lab::cubic::*;
use period_lab::report::*;
use period_lab::ToleranceProfile;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};

fn main() {
    let tols = ToleranceProfile::default();
    let cx = |re: f64, im: f64| Complex64::new(re, im);
    let g = CubicGroup::new(random_smooth_cubic(21), &tols).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let x0 = cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let y0 = cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let p = g.point_over(x0, y0, rng.random_range(0usize..3)).unwrap();
    println!("origin {:?} residual {:.3e}", g.origin().coords(), g.curve().residual(g.origin()));
    println!("p {:?} residual {:.3e}", p.coords(), g.curve().residual(&p));
    let r = g.third_intersection(&p, g.origin()).unwrap();
    println!("third(p,O) {:?} residual {:.3e}", r.coords(), g.curve().residual(&r));
    let sum = g.add(&p, g.origin()).unwrap();
    println!("p+O {:?} dist to p {:.3e}", sum.coords(), sum.chordal(&p));
}
