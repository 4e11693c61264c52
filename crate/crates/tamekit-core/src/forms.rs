//! Skew forms, complex structures, linear slices, and the taming /
//! compatibility predicates.
//!
//! Conventions: a form is the matrix Omega with omega(v, w) = v^T Omega w,
//! so omega tames J exactly when the symmetric part of Omega*J is positive
//! definite. The standard structure J_std is multiplication by i in
//! coordinates (x1, y1, x2, y2, ...), and the standard form is
//! sum dx_i ^ dy_i.

use crate::error::{CoreError, Result};
use crate::linalg::pfaffian::pfaffian;
use crate::linalg::{
    fro_norm, lambda_min_sym, max_principal_angle_sin, null_space_basis, pseudo_inverse,
    sym_part, symmetric_eigen_sorted, RMat,
};
use crate::tolerance::Tolerance;

/// Nondegenerate skew-symmetric bilinear form on R^m, m even.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewForm {
    dim: usize,
    omega: RMat,
}

impl SkewForm {
    pub fn new(omega: RMat, tol: &Tolerance) -> Result<Self> {
        let m = omega.nrows();
        if m != omega.ncols() {
            return Err(CoreError::DimensionMismatch {
                context: format!("form matrix must be square, got {}x{}", m, omega.ncols()),
            });
        }
        if m == 0 || m % 2 != 0 {
            return Err(CoreError::OddDimension(m));
        }
        let scale = fro_norm(&omega).max(1.0);
        let residual = fro_norm(&(&omega + omega.transpose()));
        if residual > tol.tol_skew * scale {
            return Err(CoreError::NotSkew { residual, tol: tol.tol_skew * scale });
        }
        let det = omega.determinant();
        if det.abs() <= tol.tol_degenerate {
            return Err(CoreError::DegenerateForm { det: det.abs(), tol: tol.tol_degenerate });
        }
        Ok(SkewForm { dim: m, omega })
    }

    /// Standard form sum dx_i ^ dy_i on R^m.
    pub fn standard(m: usize) -> Self {
        assert!(m > 0 && m % 2 == 0, "standard form needs even positive dim");
        let mut omega = RMat::zeros(m, m);
        for b in 0..m / 2 {
            omega[(2 * b, 2 * b + 1)] = 1.0;
            omega[(2 * b + 1, 2 * b)] = -1.0;
        }
        SkewForm { dim: m, omega }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &RMat {
        &self.omega
    }

    /// omega(v, w) = v^T Omega w.
    pub fn eval(&self, v: &nalgebra::DVector<f64>, w: &nalgebra::DVector<f64>) -> f64 {
        (v.transpose() * &self.omega * w)[(0, 0)]
    }
}

/// Linear complex structure: real matrix J with J^2 = -I, even dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure {
    dim: usize,
    j: RMat,
}

impl ComplexStructure {
    pub fn new(j: RMat, tol: &Tolerance) -> Result<Self> {
        let m = j.nrows();
        if m != j.ncols() {
            return Err(CoreError::DimensionMismatch {
                context: format!("structure matrix must be square, got {}x{}", m, j.ncols()),
            });
        }
        if m == 0 || m % 2 != 0 {
            return Err(CoreError::OddDimension(m));
        }
        let residual = fro_norm(&(&j * &j + RMat::identity(m, m)));
        if residual > tol.tol_structure {
            return Err(CoreError::NotComplexStructure { residual, tol: tol.tol_structure });
        }
        Ok(ComplexStructure { dim: m, j })
    }

    /// Multiplication by i in coordinates (x1, y1, ..., xn, yn).
    pub fn standard(m: usize) -> Self {
        assert!(m > 0 && m % 2 == 0, "standard structure needs even positive dim");
        let mut j = RMat::zeros(m, m);
        for b in 0..m / 2 {
            j[(2 * b, 2 * b + 1)] = -1.0;
            j[(2 * b + 1, 2 * b)] = 1.0;
        }
        ComplexStructure { dim: m, j }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &RMat {
        &self.j
    }
}

/// A linear map T: E -> F (k x m, k <= m) together with a nondegenerate skew
/// form on the target F. Houses df_x at a sample point.
#[derive(Debug, Clone)]
pub struct LinearSlice {
    t: RMat,
    target_form: SkewForm,
}

impl LinearSlice {
    pub fn new(t: RMat, target_form: SkewForm) -> Result<Self> {
        let (k, m) = (t.nrows(), t.ncols());
        if k != target_form.dim() {
            return Err(CoreError::DimensionMismatch {
                context: format!("slice is {}x{} but target form has dim {}", k, m, target_form.dim()),
            });
        }
        if k % 2 != 0 || m % 2 != 0 || k == 0 || m == 0 {
            return Err(CoreError::OddDimension(if k % 2 != 0 { k } else { m }));
        }
        if k > m {
            return Err(CoreError::DimensionMismatch {
                context: format!("slice must have k <= m, got {}x{}", k, m),
            });
        }
        Ok(LinearSlice { t, target_form })
    }

    pub fn map(&self) -> &RMat {
        &self.t
    }

    pub fn target_form(&self) -> &SkewForm {
        &self.target_form
    }

    pub fn domain_dim(&self) -> usize {
        self.t.ncols()
    }

    pub fn target_dim(&self) -> usize {
        self.t.nrows()
    }
}

/// Pullback T^* omega = T^T Omega T. Returned as a raw matrix because the
/// result may be degenerate (never wrapped as SkewForm).
pub fn pullback_form(t: &RMat, omega: &SkewForm) -> Result<RMat> {
    if t.nrows() != omega.dim() {
        return Err(CoreError::DimensionMismatch {
            context: format!(
                "pullback: T is {}x{} but form has dim {}",
                t.nrows(),
                t.ncols(),
                omega.dim()
            ),
        });
    }
    Ok(t.transpose() * omega.matrix() * t)
}

fn check_dims(omega: &SkewForm, j: &ComplexStructure) -> Result<()> {
    if omega.dim() != j.dim() {
        return Err(CoreError::DimensionMismatch {
            context: format!("form dim {} vs structure dim {}", omega.dim(), j.dim()),
        });
    }
    Ok(())
}

/// Taming margin: smallest eigenvalue of sym(Omega J). Positive means omega
/// tames J.
pub fn taming_margin(omega: &SkewForm, j: &ComplexStructure) -> Result<f64> {
    check_dims(omega, j)?;
    Ok(lambda_min_sym(&(omega.matrix() * j.matrix())))
}

/// omega(v, Jv) > 0 for all v != 0, decided through the smallest eigenvalue
/// of the symmetric part of Omega*J.
pub fn is_tame(omega: &SkewForm, j: &ComplexStructure, tol: &Tolerance) -> Result<bool> {
    Ok(taming_margin(omega, j)? > tol.tol_psd)
}

/// Invariance residual ||J^T Omega J - Omega||_F.
pub fn invariance_residual(omega: &SkewForm, j: &ComplexStructure) -> Result<f64> {
    check_dims(omega, j)?;
    Ok(fro_norm(&(j.matrix().transpose() * omega.matrix() * j.matrix() - omega.matrix())))
}

/// Taming plus J-invariance of omega.
pub fn is_compatible(omega: &SkewForm, j: &ComplexStructure, tol: &Tolerance) -> Result<bool> {
    if !is_tame(omega, j, tol)? {
        return Ok(false);
    }
    let scale = fro_norm(omega.matrix()).max(1.0);
    Ok(invariance_residual(omega, j)? <= tol.tol_skew * scale)
}

/// Breakdown of the slice-taming check, exposed for diagnostics.
#[derive(Debug, Clone)]
pub struct SliceTameReport {
    /// Smallest eigenvalue of sym(T^T Omega T J).
    pub lambda_min: f64,
    /// Kernel dimension of T.
    pub kernel_dim: usize,
    /// Number of near-null eigenvalues of the symmetric part.
    pub null_count: usize,
    /// sin of the largest principal angle between the null space and ker T.
    pub null_angle_sin: f64,
    /// ||(I - P_ker) J P_ker||_F.
    pub kernel_invariance: f64,
    pub tame: bool,
}

/// Full diagnostic for the slice-taming decision.
pub fn slice_tame_report(slice: &LinearSlice, j: &ComplexStructure, tol: &Tolerance) -> Result<SliceTameReport> {
    let m = slice.domain_dim();
    if j.dim() != m {
        return Err(CoreError::DimensionMismatch {
            context: format!("slice domain dim {} vs structure dim {}", m, j.dim()),
        });
    }
    let g = pullback_form(slice.map(), slice.target_form())?;
    let s = sym_part(&(&g * j.matrix()));
    let (vals, vecs) = symmetric_eigen_sorted(&s);
    let scale = vals.iter().map(|v| v.abs()).fold(1.0_f64, f64::max);
    let thr = tol.tol_psd * scale;

    let kernel = null_space_basis(slice.map(), 1e-12);
    let kernel_dim = kernel.ncols();

    let null_count = vals.iter().filter(|&&v| v.abs() <= thr).count();
    let negative = vals.iter().any(|&v| v < -thr);
    let positive_rest = vals.iter().filter(|&&v| v.abs() > thr).all(|&v| v > 0.0);

    // Null eigenvectors vs ker T, compared through principal angles.
    let null_vecs = vecs.columns(0, null_count.min(vecs.ncols())).into_owned();
    let null_angle_sin = if null_count == kernel_dim && kernel_dim > 0 {
        max_principal_angle_sin(&null_vecs, &kernel)
    } else if kernel_dim == 0 && null_count == 0 {
        0.0
    } else {
        1.0
    };

    // J-invariance of ker T.
    let kernel_invariance = if kernel_dim == 0 {
        0.0
    } else {
        let p = &kernel * kernel.transpose();
        let eye = RMat::identity(m, m);
        fro_norm(&((&eye - &p) * j.matrix() * &p))
    };

    let tame = !negative
        && positive_rest
        && null_count == kernel_dim
        && null_angle_sin <= tol.tol_nullspace
        && kernel_invariance <= tol.tol_nullspace
        && (kernel_dim == m || vals[vals.len() - 1] > thr);

    Ok(SliceTameReport {
        lambda_min: vals[0],
        kernel_dim,
        null_count,
        null_angle_sin,
        kernel_invariance,
        tame,
    })
}

/// (omega, T)-tameness: sym(T^T Omega T J) is PSD, its null space equals
/// ker T, and ker T is J-invariant.
pub fn is_slice_tame(slice: &LinearSlice, j: &ComplexStructure, tol: &Tolerance) -> Result<bool> {
    Ok(slice_tame_report(slice, j, tol)?.tame)
}

/// (omega, T)-compatibility: slice-tame plus J-invariance of the pullback.
pub fn is_slice_compatible(slice: &LinearSlice, j: &ComplexStructure, tol: &Tolerance) -> Result<bool> {
    if !is_slice_tame(slice, j, tol)? {
        return Ok(false);
    }
    let g = pullback_form(slice.map(), slice.target_form())?;
    let resid = fro_norm(&(j.matrix().transpose() * &g * j.matrix() - &g));
    let scale = fro_norm(&g).max(1.0);
    Ok(resid <= tol.tol_skew * scale)
}

/// The structure T_* J induced on Im T, expressed on an orthonormal basis of
/// Im T (returned alongside).
#[derive(Debug, Clone)]
pub struct Pushforward {
    /// k x r matrix whose orthonormal columns span Im T.
    pub basis: RMat,
    /// T_* J on that basis.
    pub structure: ComplexStructure,
}

impl Pushforward {
    /// Representation of T_* J as a k x k matrix acting on Im T inside the
    /// ambient target space (zero on the orthogonal complement).
    pub fn ambient(&self) -> RMat {
        &self.basis * self.structure.matrix() * self.basis.transpose()
    }
}

/// Pushforward T_* J with T_* J (T v) = T (J v); well defined because ker T
/// is J-invariant for a slice-tame structure. Errors if the precondition
/// fails or the defining relation T J = (T_* J) T does not hold.
pub fn pushforward_structure(
    slice: &LinearSlice,
    j: &ComplexStructure,
    tol: &Tolerance,
) -> Result<Pushforward> {
    let report = slice_tame_report(slice, j, tol)?;
    if !report.tame {
        return Err(CoreError::Precondition(format!(
            "structure is not (omega, T)-tame (lambda_min {:.3e}, kernel invariance {:.3e})",
            report.lambda_min, report.kernel_invariance
        )));
    }
    let t = slice.map();
    let svd = t.clone().svd(true, false);
    let u = svd.u.as_ref().expect("svd u");
    let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-12 * smax.max(f64::MIN_POSITIVE))
        .count();
    let basis = u.columns(0, rank).into_owned();
    let t_pinv = pseudo_inverse(t, 1e-12);
    let ambient = t * j.matrix() * &t_pinv;
    let small = basis.transpose() * &ambient * &basis;
    let structure = ComplexStructure::new(small, tol)?;

    // Defining relation: T J = (T_* J) T.
    let lhs = t * j.matrix();
    let rhs = (&basis * structure.matrix() * basis.transpose()) * t;
    let resid = fro_norm(&(lhs - rhs));
    let scale = fro_norm(t).max(1.0);
    if resid > tol.tol_residual * scale {
        return Err(CoreError::Internal(format!(
            "pushforward naturality residual {resid:.3e} exceeds {:.1e}",
            tol.tol_residual * scale
        )));
    }
    Ok(Pushforward { basis, structure })
}

/// Orientation induced by a nondegenerate skew form: the sign of its
/// Pfaffian.
pub fn orientation_sign_form(omega: &SkewForm) -> i8 {
    if pfaffian(omega.matrix()) >= 0.0 {
        1
    } else {
        -1
    }
}

/// Orientation induced by a complex structure: sign of det of the real basis
/// (v1, J v1, ..., vn, J vn) built greedily from the standard basis.
pub fn orientation_sign_structure(j: &ComplexStructure) -> i8 {
    let m = j.dim();
    let mut basis: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(m);
    let mut span = RMat::zeros(m, 0);
    for a in 0..m {
        if basis.len() == m {
            break;
        }
        let mut e = nalgebra::DVector::zeros(m);
        e[a] = 1.0;
        // Residual of e against the current span.
        let resid = if span.ncols() == 0 {
            e.clone()
        } else {
            &e - &span * (span.transpose() * &e)
        };
        if resid.norm() < 1e-9 {
            continue;
        }
        let je = j.matrix() * &e;
        basis.push(e);
        basis.push(je);
        // Re-orthonormalize the span (Gram-Schmidt over the chosen pairs).
        let mut cols = RMat::zeros(m, basis.len());
        for (c, v) in basis.iter().enumerate() {
            cols.set_column(c, v);
        }
        let qr = cols.qr();
        span = qr.q().columns(0, basis.len()).into_owned();
    }
    let mut full = RMat::zeros(m, m);
    for (c, v) in basis.iter().enumerate() {
        full.set_column(c, v);
    }
    if full.determinant() >= 0.0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn standard_pair_is_tame_and_compatible() {
        let omega = SkewForm::standard(2);
        let j = ComplexStructure::standard(2);
        assert!(is_tame(&omega, &j, &tol()).unwrap());
        assert!(is_compatible(&omega, &j, &tol()).unwrap());
        assert!((taming_margin(&omega, &j).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sign_flipped_structure_is_not_tame() {
        let omega = SkewForm::standard(2);
        let j = ComplexStructure::new(RMat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]), &tol())
            .unwrap();
        assert!(!is_tame(&omega, &j, &tol()).unwrap());
    }

    #[test]
    fn zero_form_is_degenerate() {
        let err = SkewForm::new(RMat::zeros(2, 2), &tol());
        assert!(matches!(err, Err(CoreError::DegenerateForm { .. })));
    }

    #[test]
    fn dim_mismatch_is_an_error() {
        let omega = SkewForm::standard(2);
        let j = ComplexStructure::standard(4);
        assert!(matches!(
            is_tame(&omega, &j, &tol()),
            Err(CoreError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn identity_slice_reduces_to_plain_predicates() {
        let omega = SkewForm::standard(4);
        let j = ComplexStructure::standard(4);
        let slice = LinearSlice::new(RMat::identity(4, 4), omega.clone()).unwrap();
        assert!(is_slice_tame(&slice, &j, &tol()).unwrap());
        assert!(is_slice_compatible(&slice, &j, &tol()).unwrap());
        let p = pushforward_structure(&slice, &j, &tol()).unwrap();
        assert!(fro_norm(&(p.ambient() - j.matrix())) < 1e-10);
    }

    #[test]
    fn split_projection_slice() {
        // T projects R^4 onto the first two coordinates; block J is slice
        // tame and compatible, and pushes forward to the standard structure.
        let omega2 = SkewForm::standard(2);
        let mut t = RMat::zeros(2, 4);
        t[(0, 0)] = 1.0;
        t[(1, 1)] = 1.0;
        let slice = LinearSlice::new(t, omega2).unwrap();
        let j = ComplexStructure::standard(4);
        assert!(is_slice_tame(&slice, &j, &tol()).unwrap());
        assert!(is_slice_compatible(&slice, &j, &tol()).unwrap());
        let p = pushforward_structure(&slice, &j, &tol()).unwrap();
        let amb = p.ambient();
        let j2 = ComplexStructure::standard(2);
        assert!(fro_norm(&(amb - j2.matrix())) < 1e-10);
    }

    #[test]
    fn swapped_blocks_break_kernel_invariance() {
        // J exchanging the two R^2 blocks: ker T = span(e3, e4) is not
        // J-invariant, so the slice-tame check fails.
        let omega2 = SkewForm::standard(2);
        let mut t = RMat::zeros(2, 4);
        t[(0, 0)] = 1.0;
        t[(1, 1)] = 1.0;
        let slice = LinearSlice::new(t, omega2).unwrap();
        #[rustfmt::skip]
        let j_swap = RMat::from_row_slice(4, 4, &[
            0.0, 0.0, -1.0, 0.0,
            0.0, 0.0, 0.0, -1.0,
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
        ]);
        // Direct check that J e3 is not in span(e3, e4).
        assert!(j_swap[(0, 2)].abs() > 0.5);
        let j = ComplexStructure::new(j_swap, &tol()).unwrap();
        assert!(!is_slice_tame(&slice, &j, &tol()).unwrap());
        assert!(!is_slice_compatible(&slice, &j, &tol()).unwrap());
        assert!(pushforward_structure(&slice, &j, &tol()).is_err());
    }

    #[test]
    fn pullback_examples() {
        let omega = SkewForm::standard(4);
        let id = RMat::identity(4, 4);
        assert_eq!(pullback_form(&id, &omega).unwrap(), omega.matrix().clone());
        let zero = RMat::zeros(4, 4);
        assert_eq!(pullback_form(&zero, &omega).unwrap(), RMat::zeros(4, 4));
        // 2x4 projection from a dim-2 form: rank-2 skew padded with zeros.
        let omega2 = SkewForm::standard(2);
        let mut t = RMat::zeros(2, 4);
        t[(0, 0)] = 1.0;
        t[(1, 1)] = 1.0;
        let g = pullback_form(&t, &omega2).unwrap();
        let mut expect = RMat::zeros(4, 4);
        expect[(0, 1)] = 1.0;
        expect[(1, 0)] = -1.0;
        assert_eq!(g, expect);
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(orientation_sign_form(&SkewForm::standard(2)), 1);
        assert_eq!(orientation_sign_form(&SkewForm::standard(4)), 1);
        let mut flipped = SkewForm::standard(4).matrix().clone();
        flipped[(2, 3)] = -1.0;
        flipped[(3, 2)] = 1.0;
        let f = SkewForm::new(flipped, &tol()).unwrap();
        assert_eq!(orientation_sign_form(&f), -1);
        assert_eq!(orientation_sign_structure(&ComplexStructure::standard(4)), 1);
    }
}
