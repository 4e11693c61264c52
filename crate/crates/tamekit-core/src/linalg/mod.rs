//! Small dense linear-algebra layer shared by the rest of the crate.
//!
//! Everything here targets desk-scale matrices (dim <= 16). The complex
//! Schur decomposition and the Pfaffian are implemented locally because the
//! functional calculus needs Schur reordering, which general-purpose crates
//! do not expose.

pub mod pfaffian;
pub mod schur;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type RMat = DMatrix<f64>;
pub type CMat = DMatrix<Complex64>;

/// Frobenius norm of a real matrix.
pub fn fro_norm(m: &RMat) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Frobenius norm of a complex matrix.
pub fn fro_norm_c(m: &CMat) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest absolute entry.
pub fn max_abs(m: &RMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn max_abs_c(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.norm()))
}

/// Symmetric part (M + M^T)/2.
pub fn sym_part(m: &RMat) -> RMat {
    (m + m.transpose()) * 0.5
}

/// Skewness residual ||M + M^T||_F.
pub fn skew_residual(m: &RMat) -> f64 {
    fro_norm(&(m + m.transpose()))
}

pub fn to_complex(m: &RMat) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| Complex64::new(m[(i, j)], 0.0))
}

/// Real part of a complex matrix, together with the largest imaginary entry
/// (returned so callers can decide whether truncation was legitimate).
pub fn real_part_with_residual(m: &CMat) -> (RMat, f64) {
    let re = RMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re);
    let imag = m.iter().fold(0.0_f64, |acc, x| acc.max(x.im.abs()));
    (re, imag)
}

/// Eigenvalues of a symmetric matrix, ascending, with eigenvectors as the
/// columns of the returned matrix.
pub fn symmetric_eigen_sorted(m: &RMat) -> (Vec<f64>, RMat) {
    let se = nalgebra::SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let vals: Vec<f64> = idx.iter().map(|&i| se.eigenvalues[i]).collect();
    let vecs = RMat::from_fn(n, n, |r, c| se.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

/// Smallest eigenvalue of the symmetric part of `m`.
pub fn lambda_min_sym(m: &RMat) -> f64 {
    let s = sym_part(m);
    let se = nalgebra::SymmetricEigen::new(s);
    se.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Largest principal angle between the column spans of `a` and `b`, reported
/// through its sine (well conditioned near zero, unlike the cosine route).
/// Both inputs must have orthonormal columns of equal count.
pub fn max_principal_angle_sin(a: &RMat, b: &RMat) -> f64 {
    assert_eq!(a.ncols(), b.ncols());
    if a.ncols() == 0 {
        return 0.0;
    }
    // sin(theta_max) = || (I - B B^T) A ||_2
    let proj = b * b.transpose();
    let resid = a - &proj * a;
    let svd = resid.svd(false, false);
    svd.singular_values.iter().cloned().fold(0.0_f64, f64::max)
}

/// Orthonormal basis of the column span of `m` (columns), via SVD with the
/// given relative rank tolerance.
pub fn column_space_basis(m: &RMat, rel_tol: f64) -> RMat {
    let svd = m.clone().svd(true, false);
    let u = svd.u.as_ref().expect("svd requested u");
    let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let thr = rel_tol * smax.max(f64::MIN_POSITIVE);
    let rank = svd.singular_values.iter().filter(|&&s| s > thr).count();
    u.columns(0, rank).into_owned()
}

/// Orthonormal basis of the null space of `m` (columns).
pub fn null_space_basis(m: &RMat, rel_tol: f64) -> RMat {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.as_ref().expect("svd requested v_t");
    let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let thr = rel_tol * smax.max(f64::MIN_POSITIVE);
    let rank = svd.singular_values.iter().filter(|&&s| s > thr).count();
    if rank == n {
        return RMat::zeros(n, 0);
    }
    // For a matrix with at least as many rows as columns, V^T is square and
    // its trailing rows span the kernel directly.
    if vt.nrows() == n {
        let mut out = RMat::zeros(n, n - rank);
        for (c, r) in (rank..n).enumerate() {
            out.set_column(c, &vt.row(r).transpose());
        }
        return out;
    }
    // Wide matrix: V^T only carries min(k, n) rows, so take the orthogonal
    // complement of the (accurately computed) row space instead. Squaring
    // into the Gram matrix would halve the usable precision.
    let vr = vt.rows(0, rank).transpose(); // n x rank
    let mut cols: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(n - rank);
    for i in 0..n {
        if cols.len() == n - rank {
            break;
        }
        let mut v = nalgebra::DVector::<f64>::zeros(n);
        v[i] = 1.0;
        // Two rounds of projection for orthogonality at roundoff level.
        for _ in 0..2 {
            v -= &vr * (vr.transpose() * &v);
            for c in &cols {
                let d = c.dot(&v);
                v -= c * d;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            cols.push(v / norm);
        }
    }
    let mut out = RMat::zeros(n, cols.len());
    for (c, col) in cols.iter().enumerate() {
        out.set_column(c, col);
    }
    out
}

/// Matrix inverse with an explicit error instead of a panic.
pub fn try_inverse(m: &RMat) -> Option<RMat> {
    m.clone().try_inverse()
}

/// Moore-Penrose pseudo-inverse via SVD.
pub fn pseudo_inverse(m: &RMat, rel_tol: f64) -> RMat {
    let svd = m.clone().svd(true, true);
    svd.pseudo_inverse(rel_tol).expect("pseudo inverse")
}
