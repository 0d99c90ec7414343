//! Pencils of plane cubics: base points with multiplicity, singular members
//! via the interpolated degree-12 discriminant form, and the extremal
//! X_9111 family.

use crate::cubic::{
    act, generic_frame, CubicError, Projectivity, ProjectivePoint, TernaryCubic, TernaryForm,
};
use crate::numkit::{self, interpolate_binary_form, BinaryForm, NumError, UniPoly};
use crate::ToleranceProfile;
use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PencilError {
    #[error("generators share a component; base locus is not finite")]
    NonFinitelyMany,
    #[error("two variable eliminations disagree: {0}")]
    InconsistentElimination(String),
    #[error("pencil parameters are both zero")]
    ZeroParameters,
    #[error("no coordinate frame separated the base points")]
    NoGenericFrame,
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Cubic(#[from] CubicError),
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Two non-proportional cubic generators.
#[derive(Debug, Clone)]
pub struct CubicPencil {
    pub f: TernaryCubic,
    pub g: TernaryCubic,
}

impl CubicPencil {
    pub fn new(f: TernaryCubic, g: TernaryCubic) -> Self {
        CubicPencil { f, g }
    }

    /// Gram determinant of the two unit coefficient vectors, small when the
    /// generators are proportional.
    pub fn gram_gap(&self) -> f64 {
        1.0 - self.f.alignment(&self.g).powi(2)
    }

    pub fn member(&self, lambda: Complex64, mu: Complex64) -> Result<TernaryCubic, PencilError> {
        if lambda.norm() < 1e-300 && mu.norm() < 1e-300 {
            return Err(PencilError::ZeroParameters);
        }
        let mut form = self.f.form().scale(lambda);
        form.add_scaled(self.g.form(), mu);
        TernaryCubic::from_form(form).map_err(PencilError::Cubic)
    }
}

/// The extremal pencil member lambda (x^2 y + y^2 z + z^2 x) + mu (x y z).
pub fn x9111(lambda: Complex64, mu: Complex64) -> Result<TernaryCubic, PencilError> {
    if lambda.norm() < 1e-300 && mu.norm() < 1e-300 {
        return Err(PencilError::ZeroParameters);
    }
    let mut c = [cx(0.0, 0.0); 10];
    c[1] = lambda; // x^2 y
    c[5] = lambda; // x z^2
    c[7] = lambda; // y^2 z
    c[4] = mu; // x y z
    TernaryCubic::new(c).map_err(PencilError::Cubic)
}

pub fn x9111_pencil() -> CubicPencil {
    CubicPencil::new(
        x9111(cx(1.0, 0.0), cx(0.0, 0.0)).expect("nonzero"),
        x9111(cx(0.0, 0.0), cx(1.0, 0.0)).expect("nonzero"),
    )
}

/// One base point with its intersection multiplicity and on-curve residuals.
#[derive(Debug, Clone, Serialize)]
pub struct BaseLocusEntry {
    pub point: ProjectivePoint,
    pub multiplicity: usize,
    pub residual_f: f64,
    pub residual_g: f64,
}

/// The scheme-theoretic intersection multiset of the two generators.
#[derive(Debug, Clone, Serialize)]
pub struct BaseLocus {
    pub entries: Vec<BaseLocusEntry>,
}

impl BaseLocus {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Points repeated by multiplicity, in lexicographic order.
    pub fn expand(&self) -> Vec<ProjectivePoint> {
        let mut out = Vec::new();
        for e in &self.entries {
            for _ in 0..e.multiplicity {
                out.push(e.point);
            }
        }
        out
    }

    pub fn max_residual(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.residual_f.max(e.residual_g))
            .fold(0.0, f64::max)
    }
}

/// Candidate coordinate frames: identity first, then fixed generic changes.
fn frames() -> Vec<Projectivity> {
    let mk = |m: Matrix3<Complex64>| Projectivity::new(m).expect("hardcoded frames are invertible");
    vec![
        Projectivity::identity(),
        generic_frame(),
        mk(Matrix3::new(
            cx(0.91, -0.23),
            cx(0.44, 0.31),
            cx(0.12, -0.52),
            cx(-0.35, 0.18),
            cx(1.07, 0.26),
            cx(0.29, 0.14),
            cx(0.21, 0.43),
            cx(-0.17, -0.38),
            cx(0.89, -0.11),
        )),
        mk(Matrix3::new(
            cx(1.11, 0.32),
            cx(-0.27, 0.48),
            cx(0.33, 0.21),
            cx(0.19, -0.41),
            cx(0.87, 0.13),
            cx(-0.42, 0.27),
            cx(-0.31, 0.22),
            cx(0.36, -0.19),
            cx(1.02, 0.37),
        )),
    ]
}

/// Coefficients of H(x0, y0, z) as a polynomial in z.
fn restrict_to_direction(h: &TernaryForm, x0: Complex64, y0: Complex64) -> Vec<Complex64> {
    let mut coeffs = vec![cx(0.0, 0.0); h.degree() + 1];
    for (idx, (i, j, k)) in h.monomials().enumerate() {
        coeffs[k] += h.coeffs()[idx] * x0.powu(i as u32) * y0.powu(j as u32);
    }
    coeffs
}

/// Res_z(F, G) sampled numerically: a 6x6 Sylvester determinant per direction.
fn resultant_in_z(f: &TernaryForm, g: &TernaryForm) -> BinaryForm {
    interpolate_binary_form(9, |x0, y0| {
        let fc = restrict_to_direction(f, x0, y0);
        let gc = restrict_to_direction(g, x0, y0);
        let mut m = DMatrix::<Complex64>::zeros(6, 6);
        for row in 0..3 {
            for (k, c) in fc.iter().enumerate() {
                m[(row, row + 3 - k)] = *c;
            }
            for (k, c) in gc.iter().enumerate() {
                m[(row + 3, row + 3 - k)] = *c;
            }
        }
        m.determinant()
    })
}

/// Swaps the roles of x and z in a form (used to run the second elimination
/// through the same code path).
fn swap_xz(h: &TernaryForm) -> TernaryForm {
    let mut out = TernaryForm::zero(h.degree());
    for (idx, (_i, j, k)) in h.monomials().enumerate() {
        let c = h.coeffs()[idx];
        let cur = out.get(k, j);
        out.set(k, j, cur + c);
    }
    out
}

struct FrameIntersections {
    /// (point in the working frame, multiplicity)
    points: Vec<(ProjectivePoint, usize)>,
}

/// One elimination pass inside a fixed frame. `swap` runs it with x and z
/// exchanged. Returns None when the frame is not generic enough.
fn eliminate_once(
    f: &TernaryForm,
    g: &TernaryForm,
    swap: bool,
    tols: &ToleranceProfile,
) -> Result<Option<FrameIntersections>, PencilError> {
    let (fw, gw) = if swap {
        (swap_xz(f), swap_xz(g))
    } else {
        (f.clone(), g.clone())
    };
    // projection center [0:0:1] must avoid both curves so the z-degree stays 3
    let corner = [cx(0.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0)];
    if fw.eval(&corner).norm() < 1e-3 || gw.eval(&corner).norm() < 1e-3 {
        return Ok(None);
    }
    let res = resultant_in_z(&fw, &gw);
    let rmax = res.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if rmax < 1e-12 {
        return Err(PencilError::NonFinitelyMany);
    }
    let dirs = res.project_roots(1e-9, tols.cluster_tol)?;
    let mut points = Vec::new();
    for root in dirs {
        let (x0, y0) = root.dir;
        let fc = restrict_to_direction(&fw, x0, y0);
        let poly = UniPoly::new(fc, 1e-13)?;
        if poly.degree() < 1 {
            return Ok(None);
        }
        let zroots = numkit::roots(&poly, tols.cluster_tol)?;
        let mut scored: Vec<(Complex64, f64)> = zroots
            .iter()
            .map(|cl| {
                let v = [x0, y0, cl.center];
                let n = (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt();
                let q = [v[0] / n, v[1] / n, v[2] / n];
                (cl.center, gw.eval(&q).norm())
            })
            .collect();
        scored.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        if scored.len() > 1 && scored[1].1 < 1e-5 {
            let p0 = ProjectivePoint::new(x0, y0, scored[0].0);
            let p1 = ProjectivePoint::new(x0, y0, scored[1].0);
            if p0.chordal(&p1) > 1e-5 {
                // two base points share this coordinate line: frame no good
                return Ok(None);
            }
        }
        let z = scored
            .first()
            .ok_or_else(|| PencilError::InconsistentElimination("no z-root".into()))?
            .0;
        let p = ProjectivePoint::new(x0, y0, z);
        let p = if swap {
            let c = p.coords();
            ProjectivePoint::new(c[2], c[1], c[0])
        } else {
            p
        };
        points.push((p, root.multiplicity));
    }
    Ok(Some(FrameIntersections { points }))
}

/// Scheme-theoretic intersection of two cubics as a point multiset of total
/// multiplicity nine. Eliminates z and x inside a generic frame, requires
/// the two eliminations to agree, and back-substitutes through one Newton
/// projection per point.
pub fn intersect_cubics(
    f: &TernaryCubic,
    g: &TernaryCubic,
    tols: &ToleranceProfile,
) -> Result<Vec<(ProjectivePoint, usize)>, PencilError> {
    for frame in frames() {
        let finv = frame.inverse();
        let ff = act(&finv, f);
        let gg = act(&finv, g);
        let first = match eliminate_once(ff.form(), gg.form(), false, tols)? {
            Some(r) => r,
            None => continue,
        };
        let second = match eliminate_once(ff.form(), gg.form(), true, tols)? {
            Some(r) => r,
            None => continue,
        };
        let match_tol = tols.match_tol.max(10.0 * tols.cluster_tol);
        if first.points.len() != second.points.len() {
            continue;
        }
        let mut consistent = true;
        for (p, m) in &first.points {
            let found = second
                .points
                .iter()
                .any(|(q, mq)| mq == m && p.chordal(q) <= match_tol);
            if !found {
                consistent = false;
                break;
            }
        }
        if !consistent {
            continue;
        }
        // map back and polish onto the original f
        let mut out: Vec<(ProjectivePoint, usize)> = first
            .points
            .iter()
            .map(|(p, m)| (f.project_onto(&frame.apply(p)), *m))
            .collect();
        out.sort_by(|a, b| a.0.lex_cmp(&b.0));
        let total: usize = out.iter().map(|(_, m)| m).sum();
        if total != 9 {
            return Err(PencilError::InconsistentElimination(format!(
                "total multiplicity {total} != 9"
            )));
        }
        return Ok(out);
    }
    Err(PencilError::NoGenericFrame)
}

/// Base locus of the pencil, with residual bookkeeping.
pub fn base_points(p: &CubicPencil, tols: &ToleranceProfile) -> Result<BaseLocus, PencilError> {
    if p.gram_gap() < 1e-12 {
        return Err(PencilError::NonFinitelyMany);
    }
    let pts = intersect_cubics(&p.f, &p.g, tols)?;
    let entries = pts
        .into_iter()
        .map(|(point, multiplicity)| BaseLocusEntry {
            residual_f: p.f.residual(&point),
            residual_g: p.g.residual(&point),
            point,
            multiplicity,
        })
        .collect();
    Ok(BaseLocus { entries })
}

/// Resultant of the three partial quadrics of a cubic form, proportional to
/// the cubic's discriminant: the 6x6 determinant built from the quadrics and
/// the partials of their Jacobian cubic. Polynomial of degree 12 in the
/// input coefficients, vanishing exactly on singular cubics.
pub fn cubic_disc_value(h: &TernaryForm) -> Complex64 {
    assert_eq!(h.degree(), 3);
    let q = [h.partial(0), h.partial(1), h.partial(2)];
    // Jacobian determinant of the three quadrics, a cubic form
    let d = |a: usize, b: usize| q[a].partial(b);
    let mut jac = d(0, 0).mul(&d(1, 1).mul(&d(2, 2)));
    jac.add_scaled(&d(0, 0).mul(&d(1, 2).mul(&d(2, 1))), cx(-1.0, 0.0));
    jac.add_scaled(&d(0, 1).mul(&d(1, 0).mul(&d(2, 2))), cx(-1.0, 0.0));
    jac.add_scaled(&d(0, 1).mul(&d(1, 2).mul(&d(2, 0))), cx(1.0, 0.0));
    jac.add_scaled(&d(0, 2).mul(&d(1, 0).mul(&d(2, 1))), cx(1.0, 0.0));
    jac.add_scaled(&d(0, 2).mul(&d(1, 1).mul(&d(2, 0))), cx(-1.0, 0.0));
    let jq = [jac.partial(0), jac.partial(1), jac.partial(2)];
    let mut m = DMatrix::<Complex64>::zeros(6, 6);
    for (row, quad) in q.iter().chain(jq.iter()).enumerate() {
        for (col, c) in quad.coeffs().iter().enumerate() {
            m[(row, col)] = *c;
        }
    }
    m.determinant()
}

/// A point of the pencil's parameter line, canonically represented.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PencilParam {
    pub lambda: [f64; 2],
    pub mu: [f64; 2],
}

impl PencilParam {
    fn new(l: Complex64, m: Complex64) -> Self {
        let n = (l.norm_sqr() + m.norm_sqr()).sqrt();
        let (mut l, mut m) = (l / n, m / n);
        let anchor = if l.norm() > 1e-8 { l } else { m };
        let phase = anchor / anchor.norm();
        l /= phase;
        m /= phase;
        PencilParam {
            lambda: [l.re, l.im],
            mu: [m.re, m.im],
        }
    }

    pub fn lambda_c(&self) -> Complex64 {
        cx(self.lambda[0], self.lambda[1])
    }

    pub fn mu_c(&self) -> Complex64 {
        cx(self.mu[0], self.mu[1])
    }

    pub fn dist(&self, other: &PencilParam) -> f64 {
        let inner = self.lambda_c() * other.lambda_c().conj() + self.mu_c() * other.mu_c().conj();
        (1.0 - inner.norm_sqr()).max(0.0).sqrt()
    }
}

/// Parameters of the singular members with multiplicity: the roots of the
/// degree-12 discriminant binary form of lambda F + mu G, interpolated from
/// 13 member evaluations.
pub fn singular_members(
    p: &CubicPencil,
    tols: &ToleranceProfile,
) -> Result<Vec<(PencilParam, usize)>, PencilError> {
    if p.gram_gap() < 1e-12 {
        return Err(PencilError::NonFinitelyMany);
    }
    let form = interpolate_binary_form(12, |l, m| {
        let mut h = p.f.form().scale(l);
        h.add_scaled(p.g.form(), m);
        cubic_disc_value(&h)
    });
    let rmax = form.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if rmax < 1e-12 {
        return Err(PencilError::NonFinitelyMany);
    }
    let roots = form.project_roots(1e-9, tols.cluster_tol)?;
    let mut out: Vec<(PencilParam, usize)> = roots
        .into_iter()
        .map(|r| (PencilParam::new(r.dir.0, r.dir.1), r.multiplicity))
        .collect();
    out.sort_by(|a, b| {
        (b.1, a.0.lambda, a.0.mu)
            .partial_cmp(&(a.1, b.0.lambda, b.0.mu))
            .unwrap()
    });
    Ok(out)
}

/// True when act(g, .) maps the pencil into itself, tested on a three-point
/// parameter grid.
pub fn is_fixed_by(g: &Projectivity, p: &CubicPencil, tol: f64) -> bool {
    let grid = [
        (cx(1.0, 0.0), cx(0.0, 0.0)),
        (cx(0.0, 0.0), cx(1.0, 0.0)),
        (cx(1.0, 0.0), cx(1.0, 0.0)),
    ];
    // orthonormalize the span of the two generators' coefficient vectors
    let f = p.f.coeffs().to_vec();
    let mut gvec: Vec<Complex64> = p.g.coeffs().to_vec();
    let inner: Complex64 = gvec.iter().zip(f.iter()).map(|(a, b)| a * b.conj()).sum();
    for (gi, fi) in gvec.iter_mut().zip(f.iter()) {
        *gi -= inner * fi;
    }
    let gn = gvec.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if gn < 1e-9 {
        return true; // degenerate pencil: the span is a single curve
    }
    for v in &mut gvec {
        *v /= gn;
    }
    for (l, m) in grid {
        let member = match p.member(l, m) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let h = act(g, &member);
        let hc = h.coeffs();
        let pf: Complex64 = hc.iter().zip(f.iter()).map(|(a, b)| a * b.conj()).sum();
        let pg: Complex64 = hc.iter().zip(gvec.iter()).map(|(a, b)| a * b.conj()).sum();
        let in_span = (pf.norm_sqr() + pg.norm_sqr()).sqrt();
        let residual = (1.0 - in_span.powi(2)).max(0.0).sqrt();
        if residual > tol {
            return false;
        }
    }
    true
}
