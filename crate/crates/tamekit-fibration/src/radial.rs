//! The radial base-locus model on C^n - {0}: the connection 1-form beta of
//! the tautological circle bundle, the pulled-back Fubini-Study form (scaled
//! so the standard line has unit area), the 2-form
//!
//!   eta = r^2 f*omega_std + (1/2pi) d(r^2) ^ beta
//!
//! and the radial change of variables R^2 = (1 + t r^2)/(1 + t) that matches
//! eta(R) with omega_t(r)/(1+t).
//!
//! Realification convention: C^n coordinates z_j = x_j + i y_j map to R^{2n}
//! coordinates (x_1, y_1, ..., x_n, y_n); the Hermitian product is
//! conjugate-linear in its first slot.

use crate::FibrationError;
use nalgebra::DMatrix;
use num_complex::Complex64;

type RMat = DMatrix<f64>;

pub fn herm(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sq(z: &[Complex64]) -> f64 {
    z.iter().map(|x| x.norm_sqr()).sum()
}

/// The a-th realified basis vector of R^{2n} as a complex vector.
pub fn real_basis_vector(n: usize, a: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    if a % 2 == 0 {
        v[a / 2] = Complex64::new(1.0, 0.0);
    } else {
        v[a / 2] = Complex64::new(0.0, 1.0);
    }
    v
}

/// Realified coordinates -> complex point.
pub fn coords_to_point(coords: &[f64]) -> Vec<Complex64> {
    assert!(coords.len() % 2 == 0);
    coords.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

/// Connection form of the tautological bundle: beta_z(v) = Im<z, v>/|z|^2.
/// Normalized so that beta(i z / |z|) |z| = 1 on the unit fiber direction.
pub fn beta(z: &[Complex64], v: &[Complex64]) -> f64 {
    herm(z, v).im / norm_sq(z)
}

/// d(r^2) as a 1-form: 2 Re<z, v>.
pub fn dr_squared(z: &[Complex64], v: &[Complex64]) -> f64 {
    2.0 * herm(z, v).re
}

/// Pullback of the Fubini-Study form under projectivization, normalized so
/// a projective line has unit area: (1/pi)[Im<v,w>/r^2 + Im(<z,v> conj<z,w>)/r^4].
pub fn fs_pullback(z: &[Complex64], v: &[Complex64], w: &[Complex64]) -> f64 {
    let r2 = norm_sq(z);
    let zv = herm(z, v);
    let zw = herm(z, w);
    (herm(v, w).im / r2 + (zv * zw.conj()).im / (r2 * r2)) / std::f64::consts::PI
}

/// eta(v, w) = r^2 f*omega_std(v, w) + (1/2pi) (d(r^2) ^ beta)(v, w).
pub fn eta_at(z: &[Complex64], v: &[Complex64], w: &[Complex64]) -> f64 {
    let r2 = norm_sq(z);
    let wedge = dr_squared(z, v) * beta(z, w) - dr_squared(z, w) * beta(z, v);
    r2 * fs_pullback(z, v, w) + wedge / (2.0 * std::f64::consts::PI)
}

/// omega_t(v, w) = (1 + t r^2) f*omega_std + (t/2pi) d(r^2) ^ beta.
pub fn omega_t_at(t: f64, z: &[Complex64], v: &[Complex64], w: &[Complex64]) -> f64 {
    let r2 = norm_sq(z);
    let wedge = dr_squared(z, v) * beta(z, w) - dr_squared(z, w) * beta(z, v);
    (1.0 + t * r2) * fs_pullback(z, v, w) + t * wedge / (2.0 * std::f64::consts::PI)
}

fn check_point(z: &[Complex64], tol: f64) -> Result<f64, FibrationError> {
    let r = norm_sq(z).sqrt();
    if r <= tol {
        return Err(FibrationError::PointTooCloseToOrigin { r, tol });
    }
    Ok(r)
}

/// Materialize a bilinear form callback as its matrix over the realified
/// basis of R^{2n}.
fn form_matrix(
    n: usize,
    mut f: impl FnMut(&[Complex64], &[Complex64]) -> f64,
) -> RMat {
    let d = 2 * n;
    let basis: Vec<Vec<Complex64>> = (0..d).map(|a| real_basis_vector(n, a)).collect();
    RMat::from_fn(d, d, |a, b| f(&basis[a], &basis[b]))
}

/// Matrix of eta at z over the realified basis. Equals the standard
/// symplectic form scaled by 1/pi; kept as the displayed formula so tests
/// can confirm that identity rather than assume it.
pub fn radial_eta(z: &[Complex64], tol: f64) -> Result<RMat, FibrationError> {
    check_point(z, tol)?;
    Ok(form_matrix(z.len(), |v, w| eta_at(z, v, w)))
}

/// Matrix of the Fubini-Study pullback at z over the realified basis.
pub fn fs_pullback_matrix(z: &[Complex64], tol: f64) -> Result<RMat, FibrationError> {
    check_point(z, tol)?;
    Ok(form_matrix(z.len(), |v, w| fs_pullback(z, v, w)))
}

/// Residual of the radial change of variables: with R^2 = (1+t r^2)/(1+t)
/// and phi the radial map sending |z| = r to |z| = R, the pullback phi*eta
/// equals omega_t(r)/(1+t). Returns the max-abs entrywise difference of the
/// two matrices over the realified basis.
pub fn radial_change_check(t: f64, z: &[Complex64], tol: f64) -> Result<f64, FibrationError> {
    if !(t > 0.0) {
        return Err(FibrationError::DomainViolation(format!(
            "radial change of variables needs t > 0, got {t}"
        )));
    }
    let r = check_point(z, tol)?;
    let n = z.len();
    let r2 = r * r;
    let big_r = ((1.0 + t * r2) / (1.0 + t)).sqrt();
    let g = big_r / r;
    // dR/dr = t r / ((1+t) R); g'(r) = (R' r - R)/r^2.
    let rp = t * r / ((1.0 + t) * big_r);
    let gp = (rp * r - big_r) / r2;

    let phi_z: Vec<Complex64> = z.iter().map(|x| x * g).collect();
    let dphi = |v: &[Complex64]| -> Vec<Complex64> {
        let radial = herm(z, v).re / r;
        v.iter().zip(z).map(|(vi, zi)| vi * g + zi * (gp * radial)).collect()
    };

    let d = 2 * n;
    let basis: Vec<Vec<Complex64>> = (0..d).map(|a| real_basis_vector(n, a)).collect();
    let images: Vec<Vec<Complex64>> = basis.iter().map(|b| dphi(b)).collect();
    let mut resid = 0.0_f64;
    for a in 0..d {
        for b in 0..d {
            let lhs = eta_at(&phi_z, &images[a], &images[b]);
            let rhs = omega_t_at(t, z, &basis[a], &basis[b]) / (1.0 + t);
            resid = resid.max((lhs - rhs).abs());
        }
    }
    Ok(resid)
}

/// Form-field adapters over realified coordinates, for the discrete
/// exterior-derivative checks.
pub fn radial_eta_field(coords: &[f64], tol: f64) -> Result<RMat, FibrationError> {
    radial_eta(&coords_to_point(coords), tol)
}

pub fn fs_pullback_field(coords: &[f64], tol: f64) -> Result<RMat, FibrationError> {
    fs_pullback_matrix(&coords_to_point(coords), tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn n1_polar_area_form() {
        // On C, f*omega_std = 0 and eta = (1/2pi) d(r^2) ^ beta, which in
        // polar coordinates is 2 r dr ^ dtheta / 2pi = (1/pi) dx ^ dy.
        let z = vec![c(0.3, -0.7)];
        let m = radial_eta(&z, 1e-9).unwrap();
        let inv_pi = 1.0 / std::f64::consts::PI;
        assert!((m[(0, 1)] - inv_pi).abs() < 1e-14);
        assert!((m[(1, 0)] + inv_pi).abs() < 1e-14);
        assert!(m[(0, 0)].abs() < 1e-15 && m[(1, 1)].abs() < 1e-15);
        // And the FS pullback really vanishes for n = 1.
        let fs = fs_pullback_matrix(&z, 1e-9).unwrap();
        assert!(fs.iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn eta_is_the_scaled_standard_form() {
        let pts = [
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.4, -0.2), c(0.9, 1.3)],
            vec![c(-0.1, 0.02), c(0.0, -2.0)],
            vec![c(0.5, 0.5), c(0.5, -0.5)],
        ];
        let inv_pi = 1.0 / std::f64::consts::PI;
        for z in &pts {
            let m = radial_eta(z, 1e-9).unwrap();
            let mut expect = RMat::zeros(4, 4);
            for b in 0..2 {
                expect[(2 * b, 2 * b + 1)] = inv_pi;
                expect[(2 * b + 1, 2 * b)] = -inv_pi;
            }
            let err = (&m - &expect).iter().fold(0.0_f64, |a, x| a.max(x.abs()));
            assert!(err < 1e-12, "max err {err:.3e} at z={z:?}");
        }
    }

    #[test]
    fn fiber_direction_pairs_only_with_radial() {
        // At |z| = 1 the fiber direction iz pairs to zero with horizontal
        // vectors and to 1/pi with the radial direction.
        let z = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let iz = vec![c(0.0, 1.0), c(0.0, 0.0)];
        let horiz = vec![c(0.0, 0.0), c(1.0, 0.0)];
        let radial = z.clone();
        assert!(eta_at(&z, &iz, &horiz).abs() < 1e-15);
        assert!((eta_at(&z, &radial, &iz) - 1.0 / std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn origin_rejected() {
        let z = vec![c(0.0, 0.0), c(0.0, 0.0)];
        assert!(matches!(
            radial_eta(&z, 1e-9),
            Err(FibrationError::PointTooCloseToOrigin { .. })
        ));
    }

    #[test]
    fn radial_change_unit_radius() {
        // r = 1, t = 1 gives R = 1 and a residual at roundoff.
        let z = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let resid = radial_change_check(1.0, &z, 1e-9).unwrap();
        assert!(resid <= 1e-6, "residual {resid:.3e}");
    }

    #[test]
    fn horizontal_block_scaling_identity() {
        // Restricted to horizontal vectors both sides reduce to the scalar
        // factor (1 + t r^2)/(1 + t) against the FS pullback.
        let z = vec![c(0.0, 1.3), c(0.0, 0.0)];
        let h1 = vec![c(0.0, 0.0), c(1.0, 0.0)];
        let h2 = vec![c(0.0, 0.0), c(0.0, 1.0)];
        let t = 0.7;
        let r2 = norm_sq(&z);
        let lhs = omega_t_at(t, &z, &h1, &h2) / (1.0 + t);
        let rhs = (1.0 + t * r2) / (1.0 + t) * fs_pullback(&z, &h1, &h2);
        assert!((lhs - rhs).abs() < 1e-15);
    }
}
