//! Taming-parameter assembly: per-sample taming intervals for
//! omega_t = t eta + f*omega_Y, the global threshold, the assembled forms,
//! and the kernel convexity check.
//!
//! lambda_min(sym((t eta + G) J)) is concave in t (a minimum of affine
//! functions), so the set where it is positive is an interval and the first
//! sign-change bracket found by bisection is the only one.

use crate::sample::{taming_lambda_min, PointSample, SampledFibration};
use crate::FibrationError;
use nalgebra::DMatrix;
use tamekit_core::linalg::lambda_min_sym;
use tamekit_core::pfaffian_sign;
use tamekit_core::{is_tame, SimplexPoint, SkewForm, Tolerance};

type RMat = DMatrix<f64>;

/// sup { t in (0, t_max] : omega_t tames J at the sample }, reported as
/// infinity when the property holds at the horizon and the one-sided
/// derivative shows no decline there. Bisection to relative tolerance 1e-6.
pub fn taming_interval(
    sample: &PointSample,
    omega_y: &SkewForm,
    t_max: f64,
    tol: &Tolerance,
) -> Result<f64, FibrationError> {
    if !(t_max > 0.0) {
        return Err(FibrationError::DomainViolation(format!(
            "t_max_search must be positive, got {t_max}"
        )));
    }
    sample.validate(omega_y, tol)?;
    let phi = |t: f64| taming_lambda_min(sample, t);

    let phi_max = phi(t_max);
    if phi_max > tol.tol_psd {
        let h = t_max * 1e-4;
        let slope = (phi_max - phi(t_max - h)) / h;
        if slope >= -tol.tol_psd {
            return Ok(f64::INFINITY);
        }
        return Ok(t_max);
    }
    // Bracket a positive value from below; one exists under the sample
    // invariants (positivity for small t > 0).
    let mut t_hi = t_max;
    let mut t_lo = t_max;
    loop {
        t_lo *= 0.5;
        if phi(t_lo) > tol.tol_psd {
            break;
        }
        t_hi = t_lo;
        if t_lo < t_max * 1e-18 {
            return Err(FibrationError::NoTamingWindow { id: sample.id.clone() });
        }
    }
    while (t_hi - t_lo) > 1e-6 * t_lo {
        let mid = 0.5 * (t_hi + t_lo);
        if phi(mid) > tol.tol_psd {
            t_lo = mid;
        } else {
            t_hi = mid;
        }
    }
    Ok(0.5 * (t_lo + t_hi))
}

/// Minimum taming interval over all samples; infinity-aware.
pub fn global_taming_threshold(
    fib: &SampledFibration,
    t_max: f64,
    tol: &Tolerance,
) -> Result<f64, FibrationError> {
    fib.validate(tol)?;
    let mut min = f64::INFINITY;
    for sample in &fib.samples {
        let t0 = taming_interval(sample, &fib.omega_y, t_max, tol).map_err(|e| {
            FibrationError::AtSample { id: sample.id.clone(), source: Box::new(e) }
        })?;
        min = min.min(t0);
    }
    Ok(min)
}

/// One assembled form omega_t = t eta + f*omega_Y at a sample.
#[derive(Debug, Clone)]
pub struct AssembledForm {
    pub id: String,
    pub omega_t: SkewForm,
    pub taming_margin: f64,
    pub pfaffian_sign: i8,
}

/// Assemble omega_t at every sample. Requires 0 < t below the threshold
/// with a safety factor (default callers use 5%); every output is verified
/// nondegenerate and taming.
pub fn assemble_omega_t(
    fib: &SampledFibration,
    t: f64,
    threshold: f64,
    safety: f64,
    tol: &Tolerance,
) -> Result<Vec<AssembledForm>, FibrationError> {
    let limit = if threshold.is_finite() { threshold * (1.0 - safety) } else { f64::INFINITY };
    if !(t > 0.0) || t >= limit {
        return Err(FibrationError::TOutOfRange { t, limit });
    }
    fib.validate(tol)?;
    let mut out = Vec::with_capacity(fib.samples.len());
    for sample in &fib.samples {
        let raw = &sample.eta * t + &sample.base_pullback;
        // Exact skew-symmetrization: the summands are skew only to rounding.
        let raw = (&raw - raw.transpose()) * 0.5;
        let omega_t = SkewForm::new(raw, tol).map_err(|e| FibrationError::AtSample {
            id: sample.id.clone(),
            source: Box::new(e.into()),
        })?;
        let margin = taming_lambda_min(sample, t);
        if !is_tame(&omega_t, &sample.j, tol)? {
            return Err(FibrationError::AtSample {
                id: sample.id.clone(),
                source: Box::new(FibrationError::DomainViolation(format!(
                    "assembled form fails to tame J (margin {margin:.3e})"
                ))),
            });
        }
        let sign = pfaffian_sign(omega_t.matrix());
        out.push(AssembledForm {
            id: sample.id.clone(),
            omega_t,
            taming_margin: margin,
            pfaffian_sign: sign,
        });
    }
    Ok(out)
}

/// Convexity of kernel taming: if every eta_i tames J on ker df, so does
/// any convex combination. A `false` here indicates an internal error, not
/// a finding.
pub fn kernel_convexity_check(
    sample: &PointSample,
    etas: &[RMat],
    weights: &SimplexPoint,
    tol: &Tolerance,
) -> Result<bool, FibrationError> {
    if etas.len() != weights.len() {
        return Err(FibrationError::DomainViolation(format!(
            "{} forms but {} weights",
            etas.len(),
            weights.len()
        )));
    }
    let kd = sample.kernel_dim();
    if kd == 0 {
        return Ok(true);
    }
    let k = &sample.kernel_basis;
    let jk = sample.j_on_kernel();
    let mut combined = RMat::zeros(kd, kd);
    for (i, (eta, &w)) in etas.iter().zip(weights.coords()).enumerate() {
        let block = k.transpose() * eta * k;
        let margin = lambda_min_sym(&(&block * &jk));
        if !(margin > tol.tol_psd) {
            return Err(FibrationError::DomainViolation(format!(
                "eta[{i}] does not tame J on ker df at sample {} (margin {margin:.3e})",
                sample.id
            )));
        }
        combined += block * w;
    }
    Ok(lambda_min_sym(&(combined * &jk)) > tol.tol_psd)
}
