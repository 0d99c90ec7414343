//! Plane cubic curves over C: smoothness, flexes, the PGL_3 action, tangent
//! lines, and the chord-tangent group law on a smooth cubic with a flex
//! origin.

mod group;
#[cfg(test)]
mod tests;

pub use group::CubicGroup;

use crate::numkit::{self, BinaryForm, NumError, UniPoly};
use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CubicError {
    #[error("point is not on the curve (residual {0:.3e})")]
    OffCurve(f64),
    #[error("matrix is numerically singular")]
    SingularMatrix,
    #[error("curve is singular at the given point (gradient norm {0:.3e})")]
    SingularPoint(f64),
    #[error("hessian vanishes identically; numerical breakdown")]
    DegenerateHessian,
    #[error("coefficient vector is numerically zero")]
    ZeroCubic,
    #[error("origin candidate is not a flex (residual {0:.3e})")]
    NotAFlex(f64),
    #[error("numerical breakdown: {0}")]
    Numerical(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A point of P^2(C), stored as the canonical representative: unit Euclidean
/// norm, with the first coordinate of significant modulus rotated to the
/// positive real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectivePoint {
    coords: [Complex64; 3],
}

impl ProjectivePoint {
    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        let mut c = [x, y, z];
        let norm = (c.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt();
        assert!(
            norm > 1e-300 && norm.is_finite(),
            "projective point needs a nonzero finite representative"
        );
        for v in &mut c {
            *v /= norm;
        }
        let anchor = c
            .iter()
            .position(|v| v.norm() > 1e-8)
            .expect("unit vector has a significant coordinate");
        let phase = c[anchor] / c[anchor].norm();
        for v in &mut c {
            *v /= phase;
        }
        ProjectivePoint { coords: c }
    }

    pub fn from_array(c: [Complex64; 3]) -> Self {
        Self::new(c[0], c[1], c[2])
    }

    pub fn coords(&self) -> &[Complex64; 3] {
        &self.coords
    }

    /// Fubini-Study chordal distance, in [0, 1].
    pub fn chordal(&self, other: &ProjectivePoint) -> f64 {
        let inner: Complex64 = self
            .coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| a * b.conj())
            .sum();
        (1.0 - inner.norm_sqr()).max(0.0).sqrt()
    }

    /// Lexicographic key on the canonical representative.
    pub fn lex_key(&self) -> [f64; 6] {
        let c = &self.coords;
        [c[0].re, c[0].im, c[1].re, c[1].im, c[2].re, c[2].im]
    }

    pub fn lex_cmp(&self, other: &ProjectivePoint) -> std::cmp::Ordering {
        self.lex_key()
            .partial_cmp(&other.lex_key())
            .expect("canonical coordinates are finite")
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let arr: Vec<[f64; 2]> = self.coords.iter().map(|c| [c.re, c.im]).collect();
        arr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let arr = <[[f64; 2]; 3]>::deserialize(d)?;
        Ok(ProjectivePoint::new(
            cx(arr[0][0], arr[0][1]),
            cx(arr[1][0], arr[1][1]),
            cx(arr[2][0], arr[2][1]),
        ))
    }
}

/// Dense homogeneous form of fixed degree in x, y, z. Coefficients are
/// ordered with the x-exponent descending, then the y-exponent, so degree 3
/// reads x^3, x^2 y, x^2 z, x y^2, x y z, x z^2, y^3, y^2 z, y z^2, z^3.
#[derive(Debug, Clone, PartialEq)]
pub struct TernaryForm {
    degree: usize,
    coeffs: Vec<Complex64>,
}

fn monomial_count(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

impl TernaryForm {
    pub fn zero(degree: usize) -> Self {
        TernaryForm {
            degree,
            coeffs: vec![cx(0.0, 0.0); monomial_count(degree)],
        }
    }

    pub fn from_coeffs(degree: usize, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), monomial_count(degree));
        TernaryForm { degree, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        let d = self.degree;
        debug_assert!(i + j <= d);
        let before: usize = ((i + 1)..=d).map(|ii| d - ii + 1).sum();
        before + (d - i - j)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.coeffs[self.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let idx = self.index(i, j);
        self.coeffs[idx] = v;
    }

    pub fn monomials(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let d = self.degree;
        (0..=d)
            .rev()
            .flat_map(move |i| (0..=(d - i)).rev().map(move |j| (i, j, d - i - j)))
    }

    pub fn eval(&self, p: &[Complex64; 3]) -> Complex64 {
        let d = self.degree;
        let pw = |base: Complex64| -> Vec<Complex64> {
            let mut v = Vec::with_capacity(d + 1);
            let mut acc = cx(1.0, 0.0);
            for _ in 0..=d {
                v.push(acc);
                acc *= base;
            }
            v
        };
        let (xs, ys, zs) = (pw(p[0]), pw(p[1]), pw(p[2]));
        let mut acc = cx(0.0, 0.0);
        for (idx, (i, j, k)) in self.monomials().enumerate() {
            acc += self.coeffs[idx] * xs[i] * ys[j] * zs[k];
        }
        acc
    }

    pub fn partial(&self, var: usize) -> TernaryForm {
        assert!(self.degree >= 1);
        let mut out = TernaryForm::zero(self.degree - 1);
        for (idx, (i, j, k)) in self.monomials().enumerate() {
            let c = self.coeffs[idx];
            let e = match var {
                0 => i,
                1 => j,
                _ => k,
            };
            if e == 0 {
                continue;
            }
            let (ti, tj) = match var {
                0 => (i - 1, j),
                1 => (i, j - 1),
                _ => (i, j),
            };
            let tgt = out.index(ti, tj);
            out.coeffs[tgt] += c * (e as f64);
        }
        out
    }

    pub fn mul(&self, other: &TernaryForm) -> TernaryForm {
        let mut out = TernaryForm::zero(self.degree + other.degree);
        for (ia, (i1, j1, _)) in self.monomials().enumerate() {
            let a = self.coeffs[ia];
            if a.norm() == 0.0 {
                continue;
            }
            for (ib, (i2, j2, _)) in other.monomials().enumerate() {
                let b = other.coeffs[ib];
                if b.norm() == 0.0 {
                    continue;
                }
                let tgt = out.index(i1 + i2, j1 + j2);
                out.coeffs[tgt] += a * b;
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &TernaryForm, scale: Complex64) {
        assert_eq!(self.degree, other.degree);
        for (a, b) in self.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *a += b * scale;
        }
    }

    pub fn scale(&self, s: Complex64) -> TernaryForm {
        TernaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// F(M v) as a form in v, by expanding powers of the pulled-back linear
    /// forms row_i(M) . v.
    pub fn substitute_linear(&self, m: &Matrix3<Complex64>) -> TernaryForm {
        let lin = |r: usize| {
            let mut f = TernaryForm::zero(1);
            f.set(1, 0, m[(r, 0)]);
            f.set(0, 1, m[(r, 1)]);
            f.set(0, 0, m[(r, 2)]);
            f
        };
        let (lx, ly, lz) = (lin(0), lin(1), lin(2));
        let mut out = TernaryForm::zero(self.degree);
        for (idx, (i, j, k)) in self.monomials().enumerate() {
            let c = self.coeffs[idx];
            if c.norm() == 0.0 {
                continue;
            }
            let mut term = TernaryForm::zero(0);
            term.coeffs[0] = c;
            for _ in 0..i {
                term = term.mul(&lx);
            }
            for _ in 0..j {
                term = term.mul(&ly);
            }
            for _ in 0..k {
                term = term.mul(&lz);
            }
            out.add_scaled(&term, cx(1.0, 0.0));
        }
        out
    }
}

/// A plane cubic by its ten coefficients, held at unit coefficient norm.
#[derive(Debug, Clone, PartialEq)]
pub struct TernaryCubic {
    form: TernaryForm,
}

impl TernaryCubic {
    pub fn new(coeffs: [Complex64; 10]) -> Result<Self, CubicError> {
        let form = TernaryForm::from_coeffs(3, coeffs.to_vec());
        let n = form.norm();
        if !(n > 1e-300 && n.is_finite()) {
            return Err(CubicError::ZeroCubic);
        }
        Ok(TernaryCubic {
            form: form.scale(cx(1.0 / n, 0.0)),
        })
    }

    pub fn from_form(form: TernaryForm) -> Result<Self, CubicError> {
        assert_eq!(form.degree(), 3);
        let n = form.norm();
        if !(n > 1e-300 && n.is_finite()) {
            return Err(CubicError::ZeroCubic);
        }
        Ok(TernaryCubic {
            form: form.scale(cx(1.0 / n, 0.0)),
        })
    }

    pub fn form(&self) -> &TernaryForm {
        &self.form
    }

    pub fn coeffs(&self) -> &[Complex64] {
        self.form.coeffs()
    }

    pub fn eval(&self, p: &ProjectivePoint) -> Complex64 {
        self.form.eval(p.coords())
    }

    pub fn gradient(&self, p: &ProjectivePoint) -> [Complex64; 3] {
        [
            self.form.partial(0).eval(p.coords()),
            self.form.partial(1).eval(p.coords()),
            self.form.partial(2).eval(p.coords()),
        ]
    }

    /// |F(p)| for the unit-norm curve and unit-norm point.
    pub fn residual(&self, p: &ProjectivePoint) -> f64 {
        self.eval(p).norm()
    }

    /// Modulus of the cosine between the two coefficient vectors; 1 means
    /// projectively equal curves.
    pub fn alignment(&self, other: &TernaryCubic) -> f64 {
        let inner: Complex64 = self
            .form
            .coeffs()
            .iter()
            .zip(other.form.coeffs())
            .map(|(a, b)| a * b.conj())
            .sum();
        inner.norm()
    }

    /// Determinant of the matrix of second partials, a cubic.
    pub fn hessian(&self) -> Result<TernaryCubic, CubicError> {
        let p = |a: usize, b: usize| self.form.partial(a).partial(b);
        let (xx, xy, xz) = (p(0, 0), p(0, 1), p(0, 2));
        let (yy, yz, zz) = (p(1, 1), p(1, 2), p(2, 2));
        let mut det = xx.mul(&yy.mul(&zz));
        det.add_scaled(&xx.mul(&yz.mul(&yz)), cx(-1.0, 0.0));
        det.add_scaled(&xy.mul(&xy.mul(&zz)), cx(-1.0, 0.0));
        det.add_scaled(&xy.mul(&yz.mul(&xz)), cx(1.0, 0.0));
        det.add_scaled(&xz.mul(&xy.mul(&yz)), cx(1.0, 0.0));
        det.add_scaled(&xz.mul(&yy.mul(&xz)), cx(-1.0, 0.0));
        if det.norm() < 1e-12 {
            return Err(CubicError::DegenerateHessian);
        }
        TernaryCubic::from_form(det)
    }

    /// One tangential Newton projection step onto the curve, repeated; points
    /// produced by root extraction drift by ~1e-14 and this pins them back.
    pub fn project_onto(&self, p: &ProjectivePoint) -> ProjectivePoint {
        let mut c = *p.coords();
        for _ in 0..3 {
            let pt = ProjectivePoint::from_array(c);
            let f = self.eval(&pt);
            let g = self.gradient(&pt);
            let gn: f64 = g.iter().map(|v| v.norm_sqr()).sum();
            if gn < 1e-24 {
                break;
            }
            for k in 0..3 {
                c[k] = pt.coords()[k] - f * g[k].conj() / gn;
            }
        }
        ProjectivePoint::from_array(c)
    }
}

impl Serialize for TernaryCubic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let arr: Vec<[f64; 2]> = self.form.coeffs().iter().map(|c| [c.re, c.im]).collect();
        arr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TernaryCubic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let arr = <Vec<[f64; 2]>>::deserialize(d)?;
        if arr.len() != 10 {
            return Err(D::Error::custom("expected 10 cubic coefficients"));
        }
        let mut coeffs = [cx(0.0, 0.0); 10];
        for (k, c) in arr.iter().enumerate() {
            coeffs[k] = cx(c[0], c[1]);
        }
        TernaryCubic::new(coeffs).map_err(D::Error::custom)
    }
}

/// An element of PGL_3(C), stored with determinant normalized to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Projectivity {
    matrix: Matrix3<Complex64>,
}

impl Projectivity {
    pub fn new(matrix: Matrix3<Complex64>) -> Result<Self, CubicError> {
        let det = matrix.determinant();
        let scale = matrix.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if det.norm() < 1e-12 * scale.powi(3).max(1e-30) {
            return Err(CubicError::SingularMatrix);
        }
        let root = det.powf(1.0 / 3.0);
        Ok(Projectivity {
            matrix: matrix.map(|c| c / root),
        })
    }

    pub fn identity() -> Self {
        Projectivity {
            matrix: Matrix3::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix3<Complex64> {
        &self.matrix
    }

    pub fn inverse(&self) -> Projectivity {
        let inv = self
            .matrix
            .try_inverse()
            .expect("determinant is normalized to 1");
        Projectivity { matrix: inv }
    }

    pub fn apply(&self, p: &ProjectivePoint) -> ProjectivePoint {
        let v = nalgebra::Vector3::from_column_slice(p.coords());
        let w = self.matrix * v;
        ProjectivePoint::new(w[0], w[1], w[2])
    }
}

impl Serialize for Projectivity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..3)
            .map(|i| (0..3).map(|j| [self.matrix[(i, j)].re, self.matrix[(i, j)].im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Projectivity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = <Vec<Vec<[f64; 2]>>>::deserialize(d)?;
        if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
            return Err(D::Error::custom("expected a 3x3 matrix"));
        }
        let m = Matrix3::from_fn(|i, j| cx(rows[i][j][0], rows[i][j][1]));
        Projectivity::new(m).map_err(D::Error::custom)
    }
}

/// Defining cubic of the image curve: (act(g, F))(v) is proportional to
/// F(g^{-1} v).
pub fn act(g: &Projectivity, f: &TernaryCubic) -> TernaryCubic {
    let sub = f.form().substitute_linear(g.inverse().matrix());
    TernaryCubic::from_form(sub).expect("projectivity action preserves nonzero forms")
}

/// A projective line by its three coefficients; p lies on it when the
/// bilinear pairing sum l_i p_i vanishes.
#[derive(Debug, Clone, Copy)]
pub struct Line(pub [Complex64; 3]);

impl Line {
    pub fn eval(&self, p: &ProjectivePoint) -> Complex64 {
        self.0
            .iter()
            .zip(p.coords().iter())
            .map(|(l, v)| l * v)
            .sum()
    }

    pub fn normalized(&self) -> Line {
        let n = self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        Line([self.0[0] / n, self.0[1] / n, self.0[2] / n])
    }

    /// Two points spanning the line, Hermitian-orthonormal for conditioning.
    pub fn span(&self) -> (ProjectivePoint, ProjectivePoint) {
        let l = self.normalized().0;
        let k = (0..3)
            .max_by(|&a, &b| l[a].norm().partial_cmp(&l[b].norm()).unwrap())
            .unwrap();
        let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
        let mk = |free: usize| -> [Complex64; 3] {
            let mut v = [cx(0.0, 0.0); 3];
            v[free] = cx(1.0, 0.0);
            v[k] = -l[free] / l[k];
            v
        };
        let a = mk(others[0]);
        let b0 = mk(others[1]);
        // Gram-Schmidt inside the kernel
        let an: f64 = a.iter().map(|c| c.norm_sqr()).sum();
        let inner: Complex64 = b0.iter().zip(a.iter()).map(|(x, y)| x * y.conj()).sum();
        let mut b = [cx(0.0, 0.0); 3];
        for i in 0..3 {
            b[i] = b0[i] - inner / an * a[i];
        }
        (
            ProjectivePoint::from_array(a),
            ProjectivePoint::from_array(b),
        )
    }
}

/// Line through two distinct points (the coordinate cross product).
pub fn join(p: &ProjectivePoint, q: &ProjectivePoint) -> Line {
    let a = p.coords();
    let b = q.coords();
    Line([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

/// Gradient line of F at a smooth point of the curve.
pub fn tangent_line(f: &TernaryCubic, p: &ProjectivePoint) -> Result<Line, CubicError> {
    let g = f.gradient(p);
    let n = g.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if n < 1e-8 {
        return Err(CubicError::SingularPoint(n));
    }
    Ok(Line([g[0] / n, g[1] / n, g[2] / n]).normalized())
}

/// Fixed generic coordinate change used to push inputs off non-generic
/// configurations before eliminating variables.
pub fn generic_frame() -> Projectivity {
    let m = Matrix3::new(
        cx(1.03, 0.11),
        cx(0.31, 0.17),
        cx(-0.22, 0.41),
        cx(-0.14, 0.52),
        cx(1.12, -0.07),
        cx(0.23, -0.33),
        cx(0.35, -0.12),
        cx(-0.27, 0.19),
        cx(0.93, 0.21),
    );
    Projectivity::new(m).expect("hardcoded frame is invertible")
}

/// Resultant of two quadratics a t^2 + b t + c and d t^2 + e t + f:
/// (af - cd)^2 - (ae - bd)(bf - ce), with binary-form coefficients.
fn quadratic_resultant_forms(
    q1: &(BinaryForm, BinaryForm, BinaryForm),
    q2: &(BinaryForm, BinaryForm, BinaryForm),
) -> BinaryForm {
    let (a, b, c) = q1;
    let (d, e, f) = q2;
    let mul = |p: &BinaryForm, q: &BinaryForm| -> BinaryForm {
        let dg = p.coeffs.len() + q.coeffs.len() - 2;
        let mut out = vec![cx(0.0, 0.0); dg + 1];
        for (i, x) in p.coeffs.iter().enumerate() {
            for (j, y) in q.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        BinaryForm { coeffs: out }
    };
    let sub = |p: &BinaryForm, q: &BinaryForm| -> BinaryForm {
        let n = p.coeffs.len().max(q.coeffs.len());
        let mut out = vec![cx(0.0, 0.0); n];
        for (i, x) in p.coeffs.iter().enumerate() {
            out[i] += x;
        }
        for (i, y) in q.coeffs.iter().enumerate() {
            out[i] -= y;
        }
        BinaryForm { coeffs: out }
    };
    let afcd = sub(&mul(a, f), &mul(c, d));
    let aebd = sub(&mul(a, e), &mul(b, d));
    let bfce = sub(&mul(b, f), &mul(c, e));
    sub(&mul(&afcd, &afcd), &mul(&aebd, &bfce))
}

/// Splits a quadric Q(x, y, z) into binary-form coefficients of z^2, z, 1.
fn quadric_in_z(q: &TernaryForm) -> (BinaryForm, BinaryForm, BinaryForm) {
    assert_eq!(q.degree(), 2);
    // z^2: constant in (x, y); z: linear; 1: quadratic
    let a = BinaryForm {
        coeffs: vec![q.get(0, 0)],
    };
    let b = BinaryForm {
        coeffs: vec![q.get(0, 1), q.get(1, 0)],
    };
    let c = BinaryForm {
        coeffs: vec![q.get(0, 2), q.get(1, 1), q.get(2, 0)],
    };
    (a, b, c)
}

/// Smallest gradient-system residual over candidate singular points of F,
/// computed in a generic frame by eliminating z between pairs of partials
/// and back-substituting.
pub fn min_singular_residual(f: &TernaryCubic, cluster_tol: f64) -> f64 {
    let frame = generic_frame();
    let g = act(&frame, f);
    let gx = g.form().partial(0);
    let gy = g.form().partial(1);
    let gz = g.form().partial(2);
    let partials = [&gx, &gy, &gz];
    let residual_at = |p: &ProjectivePoint| -> f64 {
        partials
            .iter()
            .map(|q| q.eval(p.coords()).norm())
            .fold(0.0, f64::max)
    };
    let scale = [gx.norm(), gy.norm(), gz.norm()]
        .into_iter()
        .fold(0.0, f64::max);
    if scale < 1e-12 {
        return 0.0;
    }
    let z1 = quadric_in_z(&gx);
    let z2 = quadric_in_z(&gy);
    let z3 = quadric_in_z(&gz);
    let r1 = quadratic_resultant_forms(&z1, &z2);
    let r2 = quadratic_resultant_forms(&z1, &z3);
    let mut candidates: Vec<ProjectivePoint> = vec![ProjectivePoint::new(
        cx(0.0, 0.0),
        cx(0.0, 0.0),
        cx(1.0, 0.0),
    )];
    let r1max = r1.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let r2max = r2.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if r1max < 1e-14 || r2max < 1e-14 {
        // partials share a component: certainly singular
        return 0.0;
    }
    if let Ok(dirs) = r1.project_roots(1e-9, cluster_tol) {
        for root in dirs {
            let (x0, y0) = root.dir;
            // z-roots of each partial restricted to the direction
            for q in [&z1, &z2] {
                let qa = q.0.eval(x0, y0);
                let qb = q.1.eval(x0, y0);
                let qc = q.2.eval(x0, y0);
                if let Ok(p) = UniPoly::new(vec![qc, qb, qa], 1e-12) {
                    if p.degree() >= 1 {
                        if let Ok(zr) = numkit::roots(&p, cluster_tol) {
                            for cl in zr {
                                candidates.push(ProjectivePoint::new(x0, y0, cl.center));
                            }
                        }
                    }
                }
            }
            candidates.push(ProjectivePoint::new(x0, y0, cx(0.0, 0.0)));
        }
    }
    candidates
        .iter()
        .map(|p| residual_at(p) / scale)
        .fold(f64::INFINITY, f64::min)
}

/// Smoothness gate: true when the three partials have no common projective
/// zero, i.e. every candidate from the elimination has residual above `tol`.
pub fn is_smooth(f: &TernaryCubic, tol: f64) -> bool {
    min_singular_residual(f, 1e-6) > tol
}

/// The nine flexes: intersection of the curve with its Hessian cubic.
pub fn flexes(f: &TernaryCubic, tols: &crate::ToleranceProfile) -> Result<Vec<ProjectivePoint>, CubicError> {
    let hess = f.hessian()?;
    let locus = crate::pencil::intersect_cubics(f, &hess, tols)
        .map_err(|e| CubicError::Numerical(e.to_string()))?;
    let mut out = Vec::new();
    for (p, m) in locus {
        if m != 1 {
            return Err(CubicError::Numerical(format!(
                "flex of multiplicity {m}; curve is singular or near-singular"
            )));
        }
        let polished = polish_flex(f, &hess, &p);
        let r = f.residual(&polished).max(hess.residual(&polished));
        if r > tols.residual_tol {
            return Err(CubicError::Numerical(format!(
                "flex residual {r:.3e} above tolerance"
            )));
        }
        out.push(polished);
    }
    if out.len() != 9 {
        return Err(CubicError::Numerical(format!(
            "expected 9 flexes, found {}",
            out.len()
        )));
    }
    out.sort_by(|a, b| a.lex_cmp(b));
    Ok(out)
}

/// Newton iteration on the pair (F, H) in a local affine chart; flexes of a
/// smooth cubic are transverse intersections, so this converges quadratically.
fn polish_flex(f: &TernaryCubic, h: &TernaryCubic, p: &ProjectivePoint) -> ProjectivePoint {
    let mut c = *p.coords();
    let anchor = (0..3)
        .max_by(|&a, &b| c[a].norm().partial_cmp(&c[b].norm()).unwrap())
        .unwrap();
    let free: Vec<usize> = (0..3).filter(|&i| i != anchor).collect();
    for _ in 0..6 {
        let pt = ProjectivePoint::from_array(c);
        let c0 = *pt.coords();
        let fv = f.eval(&pt);
        let hv = h.eval(&pt);
        let fg = f.gradient(&pt);
        let hg = h.gradient(&pt);
        let a = fg[free[0]];
        let b = fg[free[1]];
        let d = hg[free[0]];
        let e = hg[free[1]];
        let det = a * e - b * d;
        if det.norm() < 1e-18 {
            return pt;
        }
        let du = (fv * e - b * hv) / det;
        let dv = (a * hv - fv * d) / det;
        c = c0;
        c[free[0]] -= du;
        c[free[1]] -= dv;
        if du.norm() + dv.norm() < 1e-15 {
            break;
        }
    }
    ProjectivePoint::from_array(c)
}

/// Greedy chordal matching of equal-length point lists; `None` when any pair
/// is farther than `tol` or the assignment is not a bijection.
pub fn match_points(
    from: &[ProjectivePoint],
    to: &[ProjectivePoint],
    tol: f64,
) -> Option<Vec<usize>> {
    if from.len() != to.len() {
        return None;
    }
    let mut used = vec![false; to.len()];
    let mut assign = vec![usize::MAX; from.len()];
    for (i, p) in from.iter().enumerate() {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (j, q) in to.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = p.chordal(q);
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        if best == usize::MAX || best_d > tol {
            return None;
        }
        used[best] = true;
        assign[i] = best;
    }
    Some(assign)
}

/// Chordal-tolerance clustering of projective points into a multiset, with
/// phase-aligned centroids.
pub fn cluster_points(
    points: &[ProjectivePoint],
    tol: f64,
) -> Result<Vec<(ProjectivePoint, usize)>, NumError> {
    numkit::cluster_by(
        points,
        tol,
        |a, b| a.chordal(b),
        |members| {
            let base = members[0];
            let mut acc = [cx(0.0, 0.0); 3];
            for m in members {
                let inner: Complex64 = base
                    .coords()
                    .iter()
                    .zip(m.coords().iter())
                    .map(|(a, b)| a * b.conj())
                    .sum();
                let phase = if inner.norm() > 0.0 {
                    inner / inner.norm()
                } else {
                    cx(1.0, 0.0)
                };
                for k in 0..3 {
                    acc[k] += m.coords()[k] * phase;
                }
            }
            ProjectivePoint::from_array(acc)
        },
    )
}
