use super::*;
use crate::pencil::x9111;
use crate::report::{random_projectivity, random_smooth_cubic};
use crate::ToleranceProfile;
use nalgebra::Matrix3;
use proptest::prelude::*;

fn tols() -> ToleranceProfile {
    ToleranceProfile::default()
}

fn fermat() -> TernaryCubic {
    let mut c = [cx(0.0, 0.0); 10];
    c[0] = cx(1.0, 0.0);
    c[6] = cx(1.0, 0.0);
    c[9] = cx(1.0, 0.0);
    TernaryCubic::new(c).unwrap()
}

fn pt(x: f64, y: f64, z: f64) -> ProjectivePoint {
    ProjectivePoint::new(cx(x, 0.0), cx(y, 0.0), cx(z, 0.0))
}

fn zeta3() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)
}

fn diag_zeta() -> Projectivity {
    let z = zeta3();
    Projectivity::new(Matrix3::from_diagonal(&nalgebra::Vector3::new(
        cx(1.0, 0.0),
        z,
        z * z,
    )))
    .unwrap()
}

/// A random point of the curve: fix a random x:y direction and solve for z.
fn random_curve_point(g: &CubicGroup, seed: u64) -> ProjectivePoint {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let x0 = cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let y0 = cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    g.point_over(x0, y0, rng.random_range(0usize..3)).unwrap()
}

#[test]
fn fermat_cubic_is_smooth() {
    assert!(is_smooth(&fermat(), 1e-8));
}

#[test]
fn nodal_cubic_is_singular() {
    // y^2 z - x^3 - x^2 z, singular at [0:0:1]
    let mut c = [cx(0.0, 0.0); 10];
    c[7] = cx(1.0, 0.0);
    c[0] = cx(-1.0, 0.0);
    c[2] = cx(-1.0, 0.0);
    let f = TernaryCubic::new(c).unwrap();
    assert!(!is_smooth(&f, 1e-8));
}

#[test]
fn fermat_flexes_include_the_real_one() {
    let f = fermat();
    let fl = flexes(&f, &tols()).unwrap();
    assert_eq!(fl.len(), 9);
    let known = pt(1.0, -1.0, 0.0);
    assert!(fl.iter().any(|p| p.chordal(&known) < 1e-8));
    let hess = f.hessian().unwrap();
    for p in &fl {
        assert!(f.residual(p) < 1e-8);
        assert!(hess.residual(p) < 1e-8);
    }
}

#[test]
fn random_smooth_cubic_has_nine_flexes() {
    let f = random_smooth_cubic(3);
    let fl = flexes(&f, &tols()).unwrap();
    assert_eq!(fl.len(), 9);
    for p in &fl {
        assert!(f.residual(p) < 1e-8);
    }
}

#[test]
fn group_identity_and_inverse() {
    let g = CubicGroup::new(random_smooth_cubic(21), &tols()).unwrap();
    let p = random_curve_point(&g, 5);
    let sum = g.add(&p, g.origin()).unwrap();
    assert!(sum.chordal(&p) < 1e-7);
    let np = g.neg(&p).unwrap();
    let zero = g.add(&p, &np).unwrap();
    assert!(zero.chordal(g.origin()) < 1e-7);
}

#[test]
fn flex_differences_are_three_torsion() {
    let f = random_smooth_cubic(22);
    let fl = flexes(&f, &tols()).unwrap();
    let g = CubicGroup::new(f, &tols()).unwrap();
    let d = g.sub(&fl[0], &fl[1]).unwrap();
    assert!(g.is_torsion(&d, 3, 1e-7).unwrap());
    // and a generic point is not 9-torsion
    let p = random_curve_point(&g, 6);
    assert!(!g.is_torsion(&p, 9, 1e-6).unwrap());
    // origin is torsion for every n
    assert!(g.is_torsion(g.origin(), 5, 1e-9).unwrap());
}

#[test]
fn group_law_is_commutative_and_associative() {
    let g = CubicGroup::new(random_smooth_cubic(23), &tols()).unwrap();
    let a = random_curve_point(&g, 11);
    let b = random_curve_point(&g, 12);
    let c = random_curve_point(&g, 13);
    let ab = g.add(&a, &b).unwrap();
    let ba = g.add(&b, &a).unwrap();
    assert!(ab.chordal(&ba) < 1e-7);
    let abc1 = g.add(&ab, &c).unwrap();
    let bc = g.add(&b, &c).unwrap();
    let abc2 = g.add(&a, &bc).unwrap();
    assert!(abc1.chordal(&abc2) < 1e-7);
}

#[test]
fn scale_matches_repeated_addition() {
    let g = CubicGroup::new(random_smooth_cubic(24), &tols()).unwrap();
    let p = random_curve_point(&g, 14);
    assert!(g.scale(0, &p).unwrap().chordal(g.origin()) < 1e-12);
    let neg = g.scale(-1, &p).unwrap();
    assert!(neg.chordal(&g.neg(&p).unwrap()) < 1e-7);
    let mut acc = p;
    for _ in 1..5 {
        acc = g.add(&acc, &p).unwrap();
    }
    let five = g.scale(5, &p).unwrap();
    assert!(five.chordal(&acc) < 1e-7);
}

#[test]
fn abel_jacobi_consistency_of_differences() {
    // construct a + b = c + d, then check a - c = d - b
    let g = CubicGroup::new(random_smooth_cubic(25), &tols()).unwrap();
    let a = random_curve_point(&g, 15);
    let b = random_curve_point(&g, 16);
    let c = random_curve_point(&g, 17);
    let s = g.add(&a, &b).unwrap();
    let d = g.sub(&s, &c).unwrap();
    let lhs = g.sub(&a, &c).unwrap();
    let rhs = g.sub(&d, &b).unwrap();
    assert!(lhs.chordal(&rhs) < 1e-7);
}

#[test]
fn off_curve_points_are_rejected() {
    let g = CubicGroup::new(random_smooth_cubic(26), &tols()).unwrap();
    let bad = pt(0.123, 0.456, 0.789);
    assert!(matches!(
        g.add(&bad, g.origin()),
        Err(CubicError::OffCurve(_))
    ));
}

#[test]
fn act_rotates_the_x9111_parameter_by_a_cube_root() {
    // with the pushforward convention, diag(1, z, z^2) sends the member at
    // [l : m] to the member at [z^2 l : m]; the conjugate primitive root
    // realizes the rotation by z.
    let member = x9111(cx(1.0, 0.0), cx(0.7, 0.3)).unwrap();
    let moved = act(&diag_zeta(), &member);
    let expect = x9111(zeta3() * zeta3() * cx(1.0, 0.0), cx(0.7, 0.3)).unwrap();
    assert!(moved.alignment(&expect) > 1.0 - 1e-10);
    // identity acts trivially, and the inverse undoes the action
    let f = random_smooth_cubic(27);
    let id = act(&Projectivity::identity(), &f);
    assert!(id.alignment(&f) > 1.0 - 1e-12);
    let gamma = random_projectivity(28);
    let round = act(&gamma.inverse(), &act(&gamma, &f));
    assert!(round.alignment(&f) > 1.0 - 1e-9);
}

#[test]
fn act_preserves_incidence() {
    let f = random_smooth_cubic(29);
    let g = CubicGroup::new(f.clone(), &tols()).unwrap();
    let gamma = random_projectivity(30);
    let moved = act(&gamma, &f);
    for seed in 31..34 {
        let p = random_curve_point(&g, seed);
        let q = gamma.apply(&p);
        assert!(moved.residual(&q) < 1e-8);
    }
}

#[test]
fn tangent_lines_of_the_x9111_member() {
    let member = x9111(cx(1.0, 0.0), cx(1.0, 0.0)).unwrap();
    let t1 = tangent_line(&member, &pt(1.0, 0.0, 0.0)).unwrap();
    // gradient at [1:0:0] is (0, lambda, 0): the line y = 0
    assert!(t1.0[0].norm() < 1e-12 && t1.0[2].norm() < 1e-12);
    assert!(t1.eval(&pt(0.0, 0.0, 1.0)).norm() < 1e-12);
    let t2 = tangent_line(&member, &pt(0.0, 1.0, 0.0)).unwrap();
    // line z = 0
    assert!(t2.0[0].norm() < 1e-12 && t2.0[1].norm() < 1e-12);
    let tf = tangent_line(&fermat(), &pt(1.0, -1.0, 0.0)).unwrap();
    // gradient (3, 3, 0): the line x + y = 0
    assert!((tf.0[0] - tf.0[1]).norm() < 1e-12 && tf.0[2].norm() < 1e-12);
}

#[test]
fn tangent_line_rejects_singular_points() {
    let mut c = [cx(0.0, 0.0); 10];
    c[7] = cx(1.0, 0.0);
    c[0] = cx(-1.0, 0.0);
    c[2] = cx(-1.0, 0.0);
    let nodal = TernaryCubic::new(c).unwrap();
    assert!(matches!(
        tangent_line(&nodal, &pt(0.0, 0.0, 1.0)),
        Err(CubicError::SingularPoint(_))
    ));
}

#[test]
fn singular_member_of_x9111_fails_the_smoothness_gate() {
    let tri = x9111(cx(0.0, 0.0), cx(1.0, 0.0)).unwrap();
    assert!(!is_smooth(&tri, 1e-8));
}

#[test]
fn cluster_points_merges_copies_and_keeps_separated_points() {
    let p = pt(1.0, 2.0, 3.0);
    let copies: Vec<ProjectivePoint> = (0..9).map(|_| p).collect();
    let cl = cluster_points(&copies, 1e-6).unwrap();
    assert_eq!(cl.len(), 1);
    assert_eq!(cl[0].1, 9);

    let distinct: Vec<ProjectivePoint> = (0..9)
        .map(|k| pt(1.0, k as f64, (k * k) as f64 + 0.5))
        .collect();
    let cl = cluster_points(&distinct, 1e-6).unwrap();
    assert_eq!(cl.len(), 9);
    assert!(cl.iter().all(|(_, m)| *m == 1));
}

#[test]
fn cluster_points_resolves_three_perturbed_triples() {
    let anchors = [pt(1.0, 0.0, 0.0), pt(0.0, 1.0, 0.0), pt(0.0, 0.0, 1.0)];
    let mut pts = Vec::new();
    for (k, a) in anchors.iter().enumerate() {
        for i in 0..3 {
            let eps = 1e-10 * ((i + 1) as f64);
            let mut c = *a.coords();
            c[(k + 1) % 3] += cx(eps, -eps);
            pts.push(ProjectivePoint::from_array(c));
        }
    }
    let cl = cluster_points(&pts, 1e-6).unwrap();
    assert_eq!(cl.len(), 3);
    assert!(cl.iter().all(|(_, m)| *m == 3));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, .. ProptestConfig::default() })]

    #[test]
    fn act_incidence_property(seed in 0u64..200) {
        let f = random_smooth_cubic(seed);
        let gamma = random_projectivity(seed.wrapping_add(1000));
        let g = CubicGroup::new(f.clone(), &tols()).unwrap();
        let p = random_curve_point(&g, seed.wrapping_add(2000));
        let moved = act(&gamma, &f);
        prop_assert!(moved.residual(&gamma.apply(&p)) < 1e-8);
        // and the reverse: a point on act(gamma, F) maps back onto F
        prop_assert!(f.residual(&gamma.inverse().apply(&gamma.apply(&p))) < 1e-8);
    }
}
