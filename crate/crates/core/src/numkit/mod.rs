//! Complex-scalar and polynomial numerics shared by the geometric modules:
//! simultaneous root finding with multiplicity clustering, Sylvester
//! resultants, binary-form rooting, and finite-difference Jacobian rank
//! certification.

mod aberth;
mod jacobian;

pub use jacobian::{jacobian_rank, RankCertificate};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumError {
    #[error("polynomial is numerically zero")]
    ZeroPolynomial,
    #[error("root iteration failed to converge (worst residual ratio {0:.3e})")]
    NonConvergence(f64),
    #[error("finite-difference step underflows")]
    DegenerateStep,
    #[error("evaluation callback failed: {0}")]
    EvaluationFailure(String),
    #[error("two cluster centers closer than the separation guard ({0:.3e})")]
    AmbiguousClustering(f64),
}

/// Univariate polynomial over C with ascending coefficients and a nonzero
/// leading coefficient after trimming.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Complex64>,
}

impl UniPoly {
    /// Trims coefficients below `zero_tol` relative to the largest one.
    pub fn new(mut coeffs: Vec<Complex64>, zero_tol: f64) -> Result<Self, NumError> {
        let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if !max.is_finite() || max <= zero_tol {
            return Err(NumError::ZeroPolynomial);
        }
        let thr = zero_tol * max.max(1.0);
        while let Some(last) = coeffs.last() {
            if last.norm() <= thr {
                coeffs.pop();
            } else {
                break;
            }
        }
        if coeffs.is_empty() {
            return Err(NumError::ZeroPolynomial);
        }
        Ok(UniPoly { coeffs })
    }

    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        UniPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().expect("nonempty by construction")
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Option<UniPoly> {
        if self.coeffs.len() == 1 {
            return None;
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * (i as f64))
            .collect();
        Some(UniPoly { coeffs })
    }
}

/// A cluster of converged root approximants: one complex root counted with
/// multiplicity.
#[derive(Debug, Clone)]
pub struct RootCluster {
    pub center: Complex64,
    pub multiplicity: usize,
    pub radius: f64,
}

/// All complex roots of `p`, clustered into multiplicities.
///
/// Approximants are merged when closer than `cluster_tol` or than ten times
/// the sum of their Newton-step error estimates, whichever is larger; the
/// latter is what lets a multiplicity-m root (whose approximants can only be
/// located to about eps^(1/m)) collapse to a single cluster.
pub fn roots(p: &UniPoly, cluster_tol: f64) -> Result<Vec<RootCluster>, NumError> {
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let approx = aberth::solve(p)?;
    let items: Vec<(Complex64, f64)> = approx.iter().map(|a| (a.value, a.error)).collect();
    let clusters = cluster_adaptive(&items, cluster_tol);
    Ok(clusters)
}

fn cluster_adaptive(items: &[(Complex64, f64)], tol: f64) -> Vec<RootCluster> {
    let n = items.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (items[i].0 - items[j].0).norm();
            if d <= tol.max(10.0 * (items[i].1 + items[j].1)) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    let mut out: Vec<RootCluster> = groups
        .iter()
        .map(|g| {
            let mut center = Complex64::new(0.0, 0.0);
            for &i in g {
                center += items[i].0;
            }
            center /= g.len() as f64;
            let radius = g
                .iter()
                .map(|&i| (items[i].0 - center).norm())
                .fold(0.0, f64::max);
            RootCluster {
                center,
                multiplicity: g.len(),
                radius,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        (a.center.re, a.center.im)
            .partial_cmp(&(b.center.re, b.center.im))
            .expect("finite root centers")
    });
    out
}

/// Generic tolerance clustering of arbitrary items under a caller-supplied
/// metric and centroid. Errors out when two resulting centers sit closer
/// than three times the tolerance, since cluster membership would then
/// depend on iteration order.
pub fn cluster_by<T: Clone>(
    items: &[T],
    tol: f64,
    dist: impl Fn(&T, &T) -> f64,
    centroid: impl Fn(&[T]) -> T,
) -> Result<Vec<(T, usize)>, NumError> {
    let n = items.len();
    let mut assigned: Vec<Option<usize>> = vec![None; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if assigned[i].is_some() {
            continue;
        }
        let g = groups.len();
        groups.push(vec![i]);
        assigned[i] = Some(g);
        // grow the group transitively
        let mut frontier = vec![i];
        while let Some(k) = frontier.pop() {
            for j in 0..n {
                if assigned[j].is_none() && dist(&items[k], &items[j]) <= tol {
                    assigned[j] = Some(g);
                    groups[g].push(j);
                    frontier.push(j);
                }
            }
        }
    }
    let reps: Vec<(T, usize)> = groups
        .iter()
        .map(|g| {
            let members: Vec<T> = g.iter().map(|&i| items[i].clone()).collect();
            (centroid(&members), g.len())
        })
        .collect();
    for a in 0..reps.len() {
        for b in (a + 1)..reps.len() {
            let d = dist(&reps[a].0, &reps[b].0);
            if d < 3.0 * tol {
                return Err(NumError::AmbiguousClustering(d));
            }
        }
    }
    Ok(reps)
}

/// Sylvester-matrix resultant of two univariate polynomials.
pub fn resultant(p: &UniPoly, q: &UniPoly) -> Result<Complex64, NumError> {
    let (m, n) = (p.degree(), q.degree());
    if m == 0 && n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if m == 0 {
        return Ok(p.coeffs[0].powu(n as u32));
    }
    if n == 0 {
        return Ok(q.coeffs[0].powu(m as u32));
    }
    let size = m + n;
    let mut mat = nalgebra::DMatrix::<Complex64>::zeros(size, size);
    for row in 0..n {
        for (k, c) in p.coeffs.iter().enumerate() {
            mat[(row, row + m - k)] = *c;
        }
    }
    for row in 0..m {
        for (k, c) in q.coeffs.iter().enumerate() {
            mat[(n + row, row + n - k)] = *c;
        }
    }
    Ok(mat.determinant())
}

/// Homogeneous binary form sum c_i x^i y^(d-i), held by its d+1 coefficients.
#[derive(Debug, Clone)]
pub struct BinaryForm {
    pub coeffs: Vec<Complex64>,
}

/// A projective root [x:y] of a binary form, with multiplicity.
#[derive(Debug, Clone)]
pub struct DirectionRoot {
    pub dir: (Complex64, Complex64),
    pub multiplicity: usize,
}

impl BinaryForm {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        let d = self.degree();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut xp = Complex64::new(1.0, 0.0);
        let mut ypow: Vec<Complex64> = Vec::with_capacity(d + 1);
        let mut yp = Complex64::new(1.0, 0.0);
        for _ in 0..=d {
            ypow.push(yp);
            yp *= y;
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * xp * ypow[d - i];
            xp *= x;
        }
        acc
    }

    /// Roots in P^1 with multiplicity. Multiplicities at [0:1] and [1:0] are
    /// read off from runs of relatively-tiny coefficients (which is how they
    /// appear after interpolation); interior roots go through the Aberth
    /// solver with adaptive clustering.
    pub fn project_roots(&self, drop_tol: f64, cluster_tol: f64) -> Result<Vec<DirectionRoot>, NumError> {
        let d = self.degree();
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return Err(NumError::ZeroPolynomial);
        }
        let small = |c: &Complex64| c.norm() <= drop_tol * max;
        let mut lead = 0usize; // multiplicity of [0:1], i.e. x = 0
        while lead <= d && small(&self.coeffs[lead]) {
            lead += 1;
        }
        let mut trail = 0usize; // multiplicity of [1:0], i.e. y = 0
        while trail + lead <= d && small(&self.coeffs[d - trail]) {
            trail += 1;
        }
        let mut out = Vec::new();
        if lead > 0 {
            out.push(DirectionRoot {
                dir: (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
                multiplicity: lead,
            });
        }
        if trail > 0 {
            out.push(DirectionRoot {
                dir: (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
                multiplicity: trail,
            });
        }
        let inner: Vec<Complex64> = self.coeffs[lead..=(d - trail)].to_vec();
        if inner.len() > 1 {
            let p = UniPoly::new(inner, drop_tol)?;
            for cl in roots(&p, cluster_tol)? {
                let norm = (cl.center.norm_sqr() + 1.0).sqrt();
                out.push(DirectionRoot {
                    dir: (cl.center / norm, Complex64::new(1.0 / norm, 0.0)),
                    multiplicity: cl.multiplicity,
                });
            }
        }
        let total: usize = out.iter().map(|r| r.multiplicity).sum();
        debug_assert_eq!(total, d);
        Ok(out)
    }
}

/// Recovers a binary form of known degree from evaluations on the d+1 points
/// (omega^k, 1) with omega a primitive (d+1)-th root of unity: an inverse DFT,
/// exact to rounding.
pub fn interpolate_binary_form(
    degree: usize,
    mut sample: impl FnMut(Complex64, Complex64) -> Complex64,
) -> BinaryForm {
    let n = degree + 1;
    let vals: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
            sample(Complex64::from_polar(1.0, theta), Complex64::new(1.0, 0.0))
        })
        .collect();
    let coeffs = (0..n)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, v) in vals.iter().enumerate() {
                let theta = -2.0 * std::f64::consts::PI * (j as f64) * (k as f64) / (n as f64);
                acc += v * Complex64::from_polar(1.0, theta);
            }
            acc / (n as f64)
        })
        .collect();
    BinaryForm { coeffs }
}

#[cfg(test)]
mod tests;
