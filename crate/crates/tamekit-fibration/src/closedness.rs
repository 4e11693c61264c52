//! Discrete exterior derivative of a 2-form field by central differences:
//! for every coordinate triple (a, b, c) the cyclic sum
//! d_a w_bc + d_b w_ca + d_c w_ab, O(h^2) accurate for smooth fields.

use crate::FibrationError;
use nalgebra::DMatrix;

type RMat = DMatrix<f64>;

/// Max residual of the discrete exterior derivative at `point`. The field
/// callback returns the form's matrix at given coordinates.
pub fn discrete_closedness<F>(field: F, point: &[f64], h: f64) -> Result<f64, FibrationError>
where
    F: Fn(&[f64]) -> Result<RMat, FibrationError>,
{
    if !(h > 0.0) {
        return Err(FibrationError::DomainViolation(format!("step must be positive, got {h}")));
    }
    let d = point.len();
    if d < 3 {
        return Err(FibrationError::DomainViolation(
            "closedness of a 2-form needs at least 3 coordinates".into(),
        ));
    }
    // Evaluate the field at the 2d offset points.
    let mut plus = Vec::with_capacity(d);
    let mut minus = Vec::with_capacity(d);
    for a in 0..d {
        let mut p = point.to_vec();
        p[a] += h;
        plus.push(field(&p)?);
        let mut m = point.to_vec();
        m[a] -= h;
        minus.push(field(&m)?);
    }
    let deriv = |a: usize, b: usize, c: usize| (plus[a][(b, c)] - minus[a][(b, c)]) / (2.0 * h);
    let mut max_resid = 0.0_f64;
    for a in 0..d {
        for b in a + 1..d {
            for c in b + 1..d {
                let r = deriv(a, b, c) + deriv(b, c, a) + deriv(c, a, b);
                max_resid = max_resid.max(r.abs());
            }
        }
    }
    Ok(max_resid)
}
