//! Chord-tangent group law on a smooth plane cubic with a flex origin. The
//! third intersection of a line with the curve is found by parametrizing the
//! line, rooting the restricted cubic, and removing the two known points
//! with multiplicity bookkeeping.

use super::{join, tangent_line, CubicError, Line, ProjectivePoint, TernaryCubic};
use crate::numkit::{self, UniPoly};
use crate::ToleranceProfile;
use num_complex::Complex64;

/// A smooth plane cubic together with a flex chosen as the group origin,
/// realizing Pic^0 of the curve through p - q differences.
#[derive(Debug, Clone)]
pub struct CubicGroup {
    curve: TernaryCubic,
    origin: ProjectivePoint,
    tols: ToleranceProfile,
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl CubicGroup {
    /// Origin = the flex with the lexicographically largest canonical
    /// representative. Periods are origin-independent differences, so any
    /// deterministic choice works; this one is reproducible.
    pub fn new(curve: TernaryCubic, tols: &ToleranceProfile) -> Result<Self, CubicError> {
        let flexes = super::flexes(&curve, tols)?;
        let origin = flexes
            .into_iter()
            .max_by(|a, b| a.lex_cmp(b))
            .expect("nine flexes");
        Self::with_origin(curve, origin, tols)
    }

    /// Same curve, n-th flex in lexicographic order as origin (used by the
    /// origin-independence checks).
    pub fn with_flex_index(
        curve: TernaryCubic,
        index: usize,
        tols: &ToleranceProfile,
    ) -> Result<Self, CubicError> {
        let flexes = super::flexes(&curve, tols)?;
        let origin = flexes[index % 9];
        Self::with_origin(curve, origin, tols)
    }

    pub fn with_origin(
        curve: TernaryCubic,
        origin: ProjectivePoint,
        tols: &ToleranceProfile,
    ) -> Result<Self, CubicError> {
        let r = curve.residual(&origin);
        if r > tols.on_curve_tol {
            return Err(CubicError::OffCurve(r));
        }
        let hess = curve.hessian()?;
        let hr = hess.residual(&origin);
        if hr > tols.residual_tol.max(1e-6) {
            return Err(CubicError::NotAFlex(hr));
        }
        Ok(CubicGroup {
            curve,
            origin,
            tols: *tols,
        })
    }

    pub fn curve(&self) -> &TernaryCubic {
        &self.curve
    }

    pub fn origin(&self) -> &ProjectivePoint {
        &self.origin
    }

    pub fn check_on_curve(&self, p: &ProjectivePoint) -> Result<(), CubicError> {
        let r = self.curve.residual(p);
        if r > self.tols.on_curve_tol {
            return Err(CubicError::OffCurve(r));
        }
        Ok(())
    }

    /// Chord through p and q (tangent when they coincide), then the residual
    /// intersection point. The chord is parametrized as p + t u2, so p sits
    /// at t = 0 and q at a known parameter; deflating those roots by Vieta
    /// keeps full precision even at tangencies and flexes, where a root
    /// solver would lose two thirds of the digits.
    pub fn third_intersection(
        &self,
        p: &ProjectivePoint,
        q: &ProjectivePoint,
    ) -> Result<ProjectivePoint, CubicError> {
        let same = p.chordal(q) < 1e-9;
        let inner = |a: &ProjectivePoint, b: &ProjectivePoint| -> Complex64 {
            a.coords()
                .iter()
                .zip(b.coords().iter())
                .map(|(x, y)| x * y.conj())
                .sum()
        };
        // direction u2: in the chord, Hermitian-orthogonal to p
        let (u2, t_q) = if same {
            let line: Line = tangent_line(&self.curve, p)?;
            let (a, b) = line.span();
            let mut w = [cx(0.0, 0.0); 3];
            let ap = inner(&a, p);
            for k in 0..3 {
                w[k] = a.coords()[k] - ap * p.coords()[k];
            }
            let wn: f64 = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let u2 = if wn > 0.1 {
                ProjectivePoint::from_array(w)
            } else {
                let bp = inner(&b, p);
                let mut wb = [cx(0.0, 0.0); 3];
                for k in 0..3 {
                    wb[k] = b.coords()[k] - bp * p.coords()[k];
                }
                ProjectivePoint::from_array(wb)
            };
            (u2, None) // tangency: q = p at t = 0
        } else {
            let alpha = inner(q, p);
            let mut w = [cx(0.0, 0.0); 3];
            for k in 0..3 {
                w[k] = q.coords()[k] - alpha * p.coords()[k];
            }
            let wn: f64 = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let u2 = ProjectivePoint::from_array(w);
            if alpha.norm() < 1e-6 {
                (u2, None) // q sits at the parametrization's infinity
            } else {
                // q = alpha p + wn u2, so its parameter is wn / alpha
                (u2, Some(cx(wn, 0.0) / alpha))
            }
        };
        // c(t) = F(p + t u2), interpolated exactly from 4 samples
        let samples = [cx(0.0, 0.0), cx(1.0, 0.0), cx(-1.0, 0.0), cx(2.0, 0.0)];
        let vals: Vec<Complex64> = samples
            .iter()
            .map(|t| {
                let v = [
                    p.coords()[0] + t * u2.coords()[0],
                    p.coords()[1] + t * u2.coords()[1],
                    p.coords()[2] + t * u2.coords()[2],
                ];
                self.curve.form().eval(&v)
            })
            .collect();
        let c0 = vals[0];
        let s1 = vals[1] - c0;
        let s2 = vals[2] - c0;
        let s3 = vals[3] - c0;
        let c2 = (s1 + s2) / 2.0;
        let ac = s1 - c2; // c1 + c3
        let c3 = (s3 - 4.0 * c2 - 2.0 * ac) / 6.0;
        let c1 = ac - c3;
        let scale = [c0, c1, c2, c3]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if scale < 1e-14 {
            return Err(CubicError::Numerical(
                "line lies on the cubic; degenerate configuration".into(),
            ));
        }
        let c3_ok = c3.norm() > 1e-9 * scale;
        // deflate the known root at t = 0: c3 t^2 + c2 t + c1 carries the
        // other two intersections
        let t_r = match t_q {
            None if same => {
                // tangent at p: c1 is the vanishing directional derivative,
                // the deflated quadratic has a second root at 0
                if c3_ok {
                    Some(-c2 / c3)
                } else {
                    None // residual intersection at infinity: u2 itself
                }
            }
            None => {
                // q is at infinity (so c3 ~ 0); remaining finite root of c2 t + c1
                if c2.norm() > 1e-9 * scale {
                    Some(-c1 / c2)
                } else {
                    None // tangent at q: residual intersection is q = u2
                }
            }
            Some(tq) => {
                if c3_ok {
                    Some(-c2 / c3 - tq)
                } else {
                    // degree drop: the third intersection is at infinity
                    None
                }
            }
        };
        let r = match t_r {
            Some(t) if t.norm() < 1e12 => {
                let v = [
                    p.coords()[0] + t * u2.coords()[0],
                    p.coords()[1] + t * u2.coords()[1],
                    p.coords()[2] + t * u2.coords()[2],
                ];
                ProjectivePoint::from_array(v)
            }
            _ => u2,
        };
        let polished = self.curve.project_onto(&r);
        let res = self.curve.residual(&polished);
        if res > 1e-6 {
            return Err(CubicError::Numerical(format!(
                "third intersection residual {res:.3e}"
            )));
        }
        Ok(polished)
    }

    pub fn neg(&self, p: &ProjectivePoint) -> Result<ProjectivePoint, CubicError> {
        self.check_on_curve(p)?;
        self.third_intersection(&self.origin, p)
    }

    pub fn add(
        &self,
        p: &ProjectivePoint,
        q: &ProjectivePoint,
    ) -> Result<ProjectivePoint, CubicError> {
        self.check_on_curve(p)?;
        self.check_on_curve(q)?;
        let r = self.third_intersection(p, q)?;
        self.third_intersection(&self.origin, &r)
    }

    pub fn sub(
        &self,
        p: &ProjectivePoint,
        q: &ProjectivePoint,
    ) -> Result<ProjectivePoint, CubicError> {
        let nq = self.neg(q)?;
        self.add(p, &nq)
    }

    /// n-fold sum by double-and-add; n = 0 gives the origin.
    pub fn scale(&self, n: i64, p: &ProjectivePoint) -> Result<ProjectivePoint, CubicError> {
        self.check_on_curve(p)?;
        if n == 0 {
            return Ok(self.origin);
        }
        if n < 0 {
            let pos = self.scale(-n, p)?;
            return self.neg(&pos);
        }
        let mut acc: Option<ProjectivePoint> = None;
        let mut base = *p;
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base,
                    Some(a) => self.add(&a, &base)?,
                });
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base)?;
            }
        }
        Ok(acc.expect("n > 0"))
    }

    pub fn is_torsion(
        &self,
        p: &ProjectivePoint,
        n: u64,
        tol: f64,
    ) -> Result<bool, CubicError> {
        let s = self.scale(n as i64, p)?;
        Ok(s.chordal(&self.origin) < tol)
    }

    /// Group elements are points of the curve; the same divisor class r - o1
    /// reads in another origin chart as add_{o2}(r, neg_{o2}(o1)).
    pub fn transport_from(
        &self,
        other: &CubicGroup,
        r: &ProjectivePoint,
    ) -> Result<ProjectivePoint, CubicError> {
        let neg_o1 = self.neg(other.origin())?;
        self.add(r, &neg_o1)
    }

    /// A point of the curve lying over a given x:y direction, used by tests
    /// and instance generators: solves F(x0, y0, z) = 0 for z.
    pub fn point_over(
        &self,
        x0: Complex64,
        y0: Complex64,
        branch: usize,
    ) -> Result<ProjectivePoint, CubicError> {
        let f = self.curve.form();
        let mut coeffs = vec![cx(0.0, 0.0); 4];
        for (idx, (i, j, k)) in f.monomials().enumerate() {
            coeffs[k] += f.coeffs()[idx] * x0.powu(i as u32) * y0.powu(j as u32);
        }
        let p = UniPoly::new(coeffs, 1e-13).map_err(CubicError::Num)?;
        if p.degree() == 0 {
            return Err(CubicError::Numerical("no curve point over direction".into()));
        }
        let mut roots = numkit::roots(&p, self.tols.cluster_tol).map_err(CubicError::Num)?;
        roots.sort_by(|a, b| {
            (a.center.re, a.center.im)
                .partial_cmp(&(b.center.re, b.center.im))
                .unwrap()
        });
        let z = roots[branch % roots.len()].center;
        Ok(self
            .curve
            .project_onto(&ProjectivePoint::new(x0, y0, z)))
    }
}
