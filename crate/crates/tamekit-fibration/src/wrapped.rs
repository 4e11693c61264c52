//! Wrapped-point check: the span of limiting regular kernel planes must
//! have codimension at most 2 inside the kernel at the candidate point.

use crate::sample::KernelCloud;
use crate::FibrationError;
use nalgebra::DMatrix;
use tamekit_core::linalg::fro_norm;
use tamekit_core::Tolerance;

type RMat = DMatrix<f64>;

pub fn wrapped_check(cloud: &KernelCloud, tol: &Tolerance) -> Result<bool, FibrationError> {
    let m = cloud.kernel_basis.nrows();
    let kd = cloud.kernel_basis.ncols();
    let proj = &cloud.kernel_basis * cloud.kernel_basis.transpose();
    let eye = RMat::identity(m, m);

    let mut columns: Vec<nalgebra::DVector<f64>> = Vec::new();
    for (i, plane) in cloud.planes.iter().enumerate() {
        if plane.nrows() != m || plane.ncols() != 2 {
            return Err(FibrationError::DomainViolation(format!(
                "plane {i} has shape {}x{}, expected {}x2",
                plane.nrows(),
                plane.ncols(),
                m
            )));
        }
        let sv = plane.clone().svd(false, false).singular_values;
        if sv.iter().cloned().fold(f64::INFINITY, f64::min) <= 1e-10 {
            return Err(FibrationError::DomainViolation(format!("plane {i} has rank < 2")));
        }
        // Containment in ker T_x.
        let outside = fro_norm(&((&eye - &proj) * plane));
        if outside > tol.tol_nullspace * fro_norm(plane).max(1.0) {
            return Err(FibrationError::PlaneOutsideKernel { plane: i, residual: outside });
        }
        for c in 0..2 {
            columns.push(plane.column(c).into_owned());
        }
    }

    let rank = if columns.is_empty() {
        0
    } else {
        let mut span = RMat::zeros(m, columns.len());
        for (c, v) in columns.iter().enumerate() {
            span.set_column(c, v);
        }
        let sv = span.svd(false, false).singular_values;
        let smax = sv.iter().cloned().fold(0.0_f64, f64::max);
        sv.iter().filter(|&&s| s > 1e-10 * smax.max(f64::MIN_POSITIVE)).count()
    };
    Ok(kd.saturating_sub(rank) <= 2)
}
