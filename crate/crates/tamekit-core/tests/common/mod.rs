//! Shared generators for the property suites. Everything is seeded and
//! deterministic.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use tamekit_core::linalg::{CMat, RMat};
use tamekit_core::{ComplexStructure, SkewForm, SlitMatrix, Tolerance};

pub fn tol() -> Tolerance {
    Tolerance::default()
}

/// Well-conditioned random invertible matrix I + amp*G.
pub fn random_invertible(rng: &mut ChaCha12Rng, m: usize, amp: f64) -> RMat {
    loop {
        let q = RMat::from_fn(m, m, |i, j| {
            (if i == j { 1.0 } else { 0.0 }) + amp * rng.gen_range(-1.0..1.0)
        });
        let svd = q.clone().svd(false, false);
        let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
        let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
        if smin > 0.05 * smax {
            return q;
        }
    }
}

/// Random nondegenerate skew form by congruence of the standard form.
pub fn random_skew_form(rng: &mut ChaCha12Rng, m: usize) -> SkewForm {
    let q = random_invertible(rng, m, 0.3);
    let omega = q.transpose() * SkewForm::standard(m).matrix() * &q;
    SkewForm::new(omega, &tol()).expect("congruent form is nondegenerate")
}

/// Random omega-tame structure: conjugate a compatible reference and reject
/// until the taming margin clears `floor`.
pub fn random_tame_structure(
    rng: &mut ChaCha12Rng,
    omega: &SkewForm,
    floor: f64,
) -> ComplexStructure {
    let reference = reference_compatible(omega);
    loop {
        let q = random_invertible(rng, omega.dim(), 0.4);
        let qi = q.clone().try_inverse().expect("conditioned");
        let j = &q * reference.matrix() * qi;
        if let Ok(j) = ComplexStructure::new(j, &tol()) {
            if tamekit_core::forms::taming_margin(omega, &j).unwrap() > floor {
                return j;
            }
        }
    }
}

/// The canonical omega-compatible structure j(Omega^{-1}).
pub fn reference_compatible(omega: &SkewForm) -> ComplexStructure {
    let b = omega.matrix().clone().try_inverse().expect("nondegenerate");
    let gate = tamekit_core::NoRealEigMatrix::new(b, &tol()).expect("skew inverse has no real eigenvalues");
    tamekit_core::retraction_j(&gate, &tol()).expect("retraction of skew inverse")
}

/// Random omega-compatible structure j(Omega^{-1} G) for a random SPD metric G.
pub fn random_compatible_structure(rng: &mut ChaCha12Rng, omega: &SkewForm) -> ComplexStructure {
    let m = omega.dim();
    let l = RMat::from_fn(m, m, |i, j| {
        if i == j {
            (0.4 * rng.gen_range(-1.0..1.0_f64)).exp()
        } else if i > j {
            0.25 * rng.gen_range(-1.0..1.0)
        } else {
            0.0
        }
    });
    let g = &l * l.transpose();
    let oi = omega.matrix().clone().try_inverse().expect("nondegenerate");
    let b = oi * g;
    let gate = tamekit_core::NoRealEigMatrix::new(b, &tol()).expect("metric operator");
    tamekit_core::retraction_j(&gate, &tol()).expect("compatible retraction")
}

/// Random complex structure without reference to any form.
pub fn random_structure(rng: &mut ChaCha12Rng, m: usize) -> ComplexStructure {
    let q = random_invertible(rng, m, 0.4);
    let qi = q.clone().try_inverse().expect("conditioned");
    let j = &q * ComplexStructure::standard(m).matrix() * qi;
    ComplexStructure::new(j, &tol()).expect("conjugated structure")
}

/// Distance from an eigenvalue to the slit (-inf, 0].
pub fn slit_distance(l: Complex64) -> f64 {
    if l.re <= 0.0 {
        l.im.abs()
    } else {
        l.norm()
    }
}

/// Random matrix in the slit domain with a safety margin: every eigenvalue
/// at relative distance >= `margin` from (-inf, 0].
pub fn random_slit_matrix(rng: &mut ChaCha12Rng, m: usize, real: bool, margin: f64) -> SlitMatrix {
    loop {
        let cand = if real {
            let a = RMat::from_fn(m, m, |_, _| rng.gen_range(-1.0..1.0));
            SlitMatrix::from_real(&a, &tol())
        } else {
            let a = CMat::from_fn(m, m, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            SlitMatrix::new(a, &tol())
        };
        if let Ok(s) = cand {
            let scale = s.eigenvalues().iter().map(|e| e.norm()).fold(1.0_f64, f64::max);
            let ok = s.eigenvalues().iter().all(|&l| slit_distance(l) >= margin * scale);
            if ok {
                return s;
            }
        }
    }
}

/// Random real matrix with no real eigenvalues and a controlled margin:
/// conjugated block sum of rotation-scale blocks.
pub fn random_no_real_eig(rng: &mut ChaCha12Rng, m: usize) -> tamekit_core::NoRealEigMatrix {
    assert!(m % 2 == 0);
    let mut b = RMat::zeros(m, m);
    for blk in 0..m / 2 {
        let a = rng.gen_range(-1.0..1.0);
        let mut rot = rng.gen_range(0.3..1.5_f64);
        if rng.gen_bool(0.5) {
            rot = -rot;
        }
        let s = rng.gen_range(0.5..1.6_f64);
        b[(2 * blk, 2 * blk)] = s * a;
        b[(2 * blk, 2 * blk + 1)] = s * rot;
        b[(2 * blk + 1, 2 * blk)] = -s * rot;
        b[(2 * blk + 1, 2 * blk + 1)] = s * a;
    }
    let q = random_invertible(rng, m, 0.3);
    let qi = q.clone().try_inverse().expect("conditioned");
    let out = &q * b * qi;
    tamekit_core::NoRealEigMatrix::new(out, &tol()).expect("constructed without real eigenvalues")
}

/// Convenience: DMatrix relative Frobenius distance.
pub fn rel_err(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let scale = tamekit_core::linalg::fro_norm(b).max(1.0);
    tamekit_core::linalg::fro_norm(&(a - b)) / scale
}
