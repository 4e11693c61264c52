//! Canonical interpolation of complex structures over a simplex and the
//! complex-line determination certificate.
//!
//! Given structures J_1..J_k and barycentric coordinates t, the interpolant
//! is j(B_t) with B_t = sum t_i J_i. When the vertices are tamed by a common
//! form, B_t automatically has no real eigenvalues; when they are compatible
//! with it, so is the interpolant.

use crate::calculus::{retraction_j, NoRealEigMatrix};
use crate::error::{CoreError, Result};
use crate::forms::{is_tame, taming_margin, ComplexStructure, SkewForm};
use crate::linalg::{fro_norm, lambda_min_sym, RMat};
use crate::tolerance::Tolerance;
use nalgebra::DVector;

/// Barycentric coordinates: nonnegative, summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    t: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(t: Vec<f64>) -> Result<Self> {
        if t.is_empty() {
            return Err(CoreError::InvalidSimplexPoint("empty coordinate vector".into()));
        }
        if let Some(bad) = t.iter().find(|&&x| !(x >= 0.0)) {
            return Err(CoreError::InvalidSimplexPoint(format!(
                "coordinate {bad} is negative or NaN"
            )));
        }
        let sum: f64 = t.iter().sum();
        if (sum - 1.0).abs() > 1e-9 * (t.len() as f64) {
            return Err(CoreError::InvalidSimplexPoint(format!("coordinates sum to {sum}, not 1")));
        }
        Ok(SimplexPoint { t })
    }

    /// The i-th vertex of the k-simplex.
    pub fn vertex(k: usize, i: usize) -> Self {
        assert!(i < k);
        let mut t = vec![0.0; k];
        t[i] = 1.0;
        SimplexPoint { t }
    }

    pub fn uniform(k: usize) -> Self {
        SimplexPoint { t: vec![1.0 / k as f64; k] }
    }

    pub fn coords(&self) -> &[f64] {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

fn convex_combination(structures: &[ComplexStructure], t: &SimplexPoint) -> Result<RMat> {
    if structures.is_empty() {
        return Err(CoreError::Precondition("no structures to interpolate".into()));
    }
    if structures.len() != t.len() {
        return Err(CoreError::DimensionMismatch {
            context: format!("{} structures but {} simplex coordinates", structures.len(), t.len()),
        });
    }
    let m = structures[0].dim();
    for (i, s) in structures.iter().enumerate() {
        if s.dim() != m {
            return Err(CoreError::DimensionMismatch {
                context: format!("structure {i} has dim {} but structure 0 has dim {m}", s.dim()),
            });
        }
    }
    let mut b = RMat::zeros(m, m);
    for (s, &w) in structures.iter().zip(t.coords()) {
        b += s.matrix() * w;
    }
    Ok(b)
}

/// j(B_t) for B_t = sum t_i J_i. If `omega` is given, every vertex must be
/// omega-tame (which guarantees B_t has no real eigenvalues); otherwise the
/// spectral margin of B_t itself is the gate.
pub fn interpolate_simplex(
    structures: &[ComplexStructure],
    t: &SimplexPoint,
    omega: Option<&SkewForm>,
    tol: &Tolerance,
) -> Result<ComplexStructure> {
    let b = convex_combination(structures, t)?;
    if let Some(omega) = omega {
        for (i, s) in structures.iter().enumerate() {
            if !is_tame(omega, s, tol)? {
                return Err(CoreError::Precondition(format!(
                    "vertex {i} is not tamed by the supplied form (margin {:.3e})",
                    taming_margin(omega, s)?
                )));
            }
        }
    }
    let gate = NoRealEigMatrix::new(b, tol)?;
    retraction_j(&gate, tol)
}

/// Scalar objective for the taming question: lambda_min(sym(Omega j(B_t))).
/// Positive means j(B_t) is omega-tame.
pub fn taming_probe(
    structures: &[ComplexStructure],
    t: &SimplexPoint,
    omega: &SkewForm,
    tol: &Tolerance,
) -> Result<f64> {
    let j = interpolate_simplex(structures, t, Some(omega), tol)?;
    Ok(lambda_min_sym(&(omega.matrix() * j.matrix())))
}

/// Finite certificate that two structures share their 1-dimensional complex
/// subspaces (restricted to a standard-basis-derived family), hence are
/// equal. Dimension 2 is excluded: there the complex lines carry no
/// information.
///
/// For each ordered pair (v, w) of J1-independent standard basis vectors the
/// J1-complex planes span(w), span(v+w) and span(v + J1 w) are tested for
/// J2-invariance with matching orientation. A `true` verdict asserts
/// ||J1 - J2|| <= tol_certificate and is an internal error otherwise.
pub fn shared_lines_certificate(
    j1: &ComplexStructure,
    j2: &ComplexStructure,
    tol: &Tolerance,
) -> Result<bool> {
    let m = j1.dim();
    if j2.dim() != m {
        return Err(CoreError::DimensionMismatch {
            context: format!("structure dims {} vs {}", m, j2.dim()),
        });
    }
    if m < 4 {
        return Err(CoreError::CertificateDimension(m));
    }
    let plane_tol = tol.tol_nullspace;
    for a in 0..m {
        for b in 0..m {
            if a == b {
                continue;
            }
            let mut v = DVector::<f64>::zeros(m);
            v[a] = 1.0;
            let mut w = DVector::<f64>::zeros(m);
            w[b] = 1.0;
            // Skip pairs where w lies in the J1-line of v.
            let line = plane_basis(&v, j1);
            let resid = &w - &line * (line.transpose() * &w);
            if resid.norm() < 1e-8 {
                continue;
            }
            let j1w = j1.matrix() * &w;
            let generators = [w.clone(), &v + &w, &v + j1w];
            for u in generators {
                if !plane_invariant_oriented(&u, j1, j2, plane_tol) {
                    return Ok(false);
                }
            }
        }
    }
    // Soundness of the certificate: all planes shared forces equality.
    let diff = fro_norm(&(j1.matrix() - j2.matrix()));
    if diff > tol.tol_certificate {
        return Err(CoreError::Internal(format!(
            "line certificate accepted structures {diff:.3e} apart (> {:.1e})",
            tol.tol_certificate
        )));
    }
    Ok(true)
}

/// Orthonormal basis (2 columns) of the J-complex line through u.
fn plane_basis(u: &DVector<f64>, j: &ComplexStructure) -> RMat {
    let m = u.len();
    let q1 = u / u.norm();
    let ju = j.matrix() * &q1;
    let q2r = &ju - &q1 * (q1.dot(&ju));
    let q2 = &q2r / q2r.norm();
    let mut p = RMat::zeros(m, 2);
    p.set_column(0, &q1);
    p.set_column(1, &q2);
    p
}

/// Is the J1-complex line through u also J2-invariant, with the orientation
/// induced by J2 matching the one induced by J1?
fn plane_invariant_oriented(
    u: &DVector<f64>,
    j1: &ComplexStructure,
    j2: &ComplexStructure,
    tol: f64,
) -> bool {
    let p = plane_basis(u, j1);
    let m = u.len();
    let proj = &p * p.transpose();
    let eye = RMat::identity(m, m);
    let out_of_plane = fro_norm(&((&eye - &proj) * j2.matrix() * &p));
    if out_of_plane > tol {
        return false;
    }
    // Orientation on the plane: compare the rotation sense of J1 and J2 in
    // the (q1, q2) frame.
    let q1 = p.column(0).into_owned();
    let q2 = p.column(1).into_owned();
    let s1 = q2.dot(&(j1.matrix() * &q1));
    let s2 = q2.dot(&(j2.matrix() * &q1));
    s1 * s2 > 0.0
}
