use super::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn poly(coeffs: &[(f64, f64)]) -> UniPoly {
    UniPoly::new(coeffs.iter().map(|&(re, im)| c(re, im)).collect(), 1e-12).unwrap()
}

#[test]
fn roots_of_quadratic_are_plus_minus_i() {
    let p = poly(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
    let cl = roots(&p, 1e-4).unwrap();
    assert_eq!(cl.len(), 2);
    for r in &cl {
        assert_eq!(r.multiplicity, 1);
        assert!((r.center.im.abs() - 1.0).abs() < 1e-12 && r.center.re.abs() < 1e-12);
    }
}

#[test]
fn triple_root_clusters_to_multiplicity_three() {
    // (z-1)^3 = z^3 - 3z^2 + 3z - 1
    let p = poly(&[(-1.0, 0.0), (3.0, 0.0), (-3.0, 0.0), (1.0, 0.0)]);
    let cl = roots(&p, 1e-4).unwrap();
    assert_eq!(cl.len(), 1);
    // a multiplicity-3 root is only locatable to about eps^(1/3)
    assert_eq!(cl[0].multiplicity, 3);
    assert!((cl[0].center - c(1.0, 0.0)).norm() < 1e-4);
}

#[test]
fn cube_roots_of_unity() {
    let p = poly(&[(-1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
    let cl = roots(&p, 1e-4).unwrap();
    assert_eq!(cl.len(), 3);
    for r in &cl {
        assert_eq!(r.multiplicity, 1);
        assert!((r.center.norm() - 1.0).abs() < 1e-12);
        assert!((r.center.powu(3) - c(1.0, 0.0)).norm() < 1e-10);
    }
}

#[test]
fn zero_polynomial_is_rejected() {
    assert!(matches!(
        UniPoly::new(vec![c(0.0, 0.0), c(1e-20, 0.0)], 1e-12),
        Err(NumError::ZeroPolynomial)
    ));
}

#[test]
fn resultant_linear_case() {
    let a = c(0.3, 0.7);
    let b = c(-1.1, 0.2);
    // z - a and z - b
    let p = UniPoly::new(vec![-a, c(1.0, 0.0)], 1e-12).unwrap();
    let q = UniPoly::new(vec![-b, c(1.0, 0.0)], 1e-12).unwrap();
    let r = resultant(&p, &q).unwrap();
    assert!((r - (a - b)).norm() < 1e-12);
}

#[test]
fn resultant_vanishes_on_shared_root() {
    let p = poly(&[(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]); // z^2 - 1
    let q = poly(&[(-1.0, 0.0), (1.0, 0.0)]); // z - 1
    assert!(resultant(&p, &q).unwrap().norm() < 1e-12);
}

/// Independent oracle: res(p, q) = lead(p)^deg(q) * prod q(root_i(p)).
fn resultant_oracle(p: &UniPoly, q: &UniPoly) -> Complex64 {
    let mut acc = p.leading().powu(q.degree() as u32);
    for cl in roots(p, 1e-9).unwrap() {
        for _ in 0..cl.multiplicity {
            acc *= q.eval(cl.center);
        }
    }
    acc
}

#[test]
fn resultant_matches_product_over_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let rand_poly = |rng: &mut ChaCha8Rng| {
            let coeffs: Vec<Complex64> = (0..4)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            UniPoly::new(coeffs, 1e-12).unwrap()
        };
        let p = rand_poly(&mut rng);
        let q = rand_poly(&mut rng);
        if p.degree() < 1 || q.degree() < 1 {
            continue;
        }
        let det = resultant(&p, &q).unwrap();
        let oracle = resultant_oracle(&p, &q);
        assert!(
            (det - oracle).norm() <= 1e-9 * (1.0 + oracle.norm()),
            "sylvester {det} vs oracle {oracle}"
        );
    }
}

#[test]
fn jacobian_rank_identity_map() {
    let base = [c(0.2, 0.1), c(-0.4, 0.3), c(0.9, -0.2)];
    let cert = jacobian_rank(
        |z: &[Complex64]| Ok::<_, NumError>(z.to_vec()),
        &base,
        1e-5,
        1e-6,
        0,
    )
    .unwrap();
    assert_eq!(cert.rank, 3);
    assert!((cert.gap_ratio - 1.0).abs() < 1e-8);
}

#[test]
fn jacobian_rank_constant_map() {
    let base = [c(0.2, 0.1), c(-0.4, 0.3)];
    let cert = jacobian_rank(
        |_z: &[Complex64]| Ok::<_, NumError>(vec![c(1.0, 2.0)]),
        &base,
        1e-5,
        1e-6,
        0,
    )
    .unwrap();
    assert_eq!(cert.rank, 0);
    assert_eq!(cert.gap_ratio, 1.0);
}

#[test]
fn jacobian_rank_square_map_matches_analytic_derivative() {
    let base = [c(1.0, 0.0)];
    let step = 1e-5;
    let cert = jacobian_rank(
        |z: &[Complex64]| Ok::<_, NumError>(vec![z[0] * z[0]]),
        &base,
        step,
        1e-6,
        0,
    )
    .unwrap();
    assert_eq!(cert.rank, 1);
    // analytic derivative 2z = 2; central differences are exact to O(step^2)
    assert!((cert.singular_values[0] - 2.0).abs() < 10.0 * step * step + 1e-11);
}

#[test]
fn jacobian_rank_rejects_bad_step() {
    let base = [c(0.0, 0.0)];
    assert!(matches!(
        jacobian_rank(
            |z: &[Complex64]| Ok::<_, NumError>(z.to_vec()),
            &base,
            0.0,
            1e-6,
            0
        ),
        Err(NumError::DegenerateStep)
    ));
}

#[test]
fn jacobian_rank_recovers_linear_map_ranks() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (n, m) = (5usize, 4usize);
    for r in 0..=m.min(n) {
        // A = B (n x r) * C (r x m) has rank exactly r almost surely
        let b: Vec<Vec<Complex64>> = (0..n)
            .map(|_| {
                (0..r)
                    .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect()
            })
            .collect();
        let cmat: Vec<Vec<Complex64>> = (0..r)
            .map(|_| {
                (0..m)
                    .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect()
            })
            .collect();
        let apply = |z: &[Complex64]| {
            let mid: Vec<Complex64> = (0..r)
                .map(|i| (0..m).map(|j| cmat[i][j] * z[j]).sum())
                .collect();
            Ok::<_, NumError>(
                (0..n)
                    .map(|i| (0..r).map(|k| b[i][k] * mid[k]).sum())
                    .collect(),
            )
        };
        let base: Vec<Complex64> = (0..m).map(|_| c(0.0, 0.0)).collect();
        let cert = jacobian_rank(apply, &base, 1e-5, 1e-6, 0).unwrap();
        assert_eq!(cert.rank, r, "rank {r} not recovered");
    }
}

#[test]
fn binary_form_interpolation_roundtrip() {
    // (x - 2y)(x + y) x = x^3 - x^2 y - 2 x y^2
    let form = BinaryForm {
        coeffs: vec![c(0.0, 0.0), c(-2.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)],
    };
    let rec = interpolate_binary_form(3, |x, y| form.eval(x, y));
    for (a, b) in form.coeffs.iter().zip(rec.coeffs.iter()) {
        assert!((a - b).norm() < 1e-12);
    }
    let roots = rec.project_roots(1e-9, 1e-6).unwrap();
    assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<usize>(), 3);
    // x = 0 shows up as the coefficient drop at the leading end
    assert!(roots
        .iter()
        .any(|r| r.dir.0.norm() < 1e-12 && r.multiplicity == 1));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, .. ProptestConfig::default() })]

    #[test]
    fn cluster_multiplicities_sum_to_degree(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // build a polynomial from a known root multiset with repeats
        let mut roots_list = Vec::new();
        let distinct = rng.random_range(1usize..4);
        for _ in 0..distinct {
            let root = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let mult = rng.random_range(1usize..4);
            for _ in 0..mult {
                roots_list.push(root);
            }
        }
        let p = UniPoly::from_roots(&roots_list);
        let cl = roots(&p, 1e-4).unwrap();
        let total: usize = cl.iter().map(|r| r.multiplicity).sum();
        prop_assert_eq!(total, roots_list.len());
    }

    #[test]
    fn resultant_antisymmetry(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rand_poly = |deg: usize| {
            let mut coeffs: Vec<Complex64> = (0..deg)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            coeffs.push(c(1.0, 0.0));
            UniPoly::new(coeffs, 1e-12).unwrap()
        };
        let p = rand_poly(3);
        let q = rand_poly(2);
        let rpq = resultant(&p, &q).unwrap();
        let rqp = resultant(&q, &p).unwrap();
        let sign = if (p.degree() * q.degree()) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((rpq - sign * rqp).norm() <= 1e-9 * (1.0 + rpq.norm()));
    }
}
