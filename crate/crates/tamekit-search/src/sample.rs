//! Instance generators: omega-tame structures by rejection-sampled
//! conjugation, omega-compatible structures through random metrics, and
//! simplex points.

use crate::SearchError;
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use tamekit_core::forms::taming_margin;
use tamekit_core::{retraction_j, ComplexStructure, NoRealEigMatrix, SimplexPoint, SkewForm, Tolerance};

type RMat = DMatrix<f64>;

/// Deterministic per-trial seed stream (splitmix64 of campaign seed and
/// trial index), so trial results are independent of scheduling order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha12Rng {
    let mut z = seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    rand::SeedableRng::seed_from_u64(z)
}

pub fn random_invertible(rng: &mut ChaCha12Rng, m: usize, amp: f64) -> RMat {
    loop {
        let q = RMat::from_fn(m, m, |i, j| {
            (if i == j { 1.0 } else { 0.0 }) + amp * rng.gen_range(-1.0..1.0)
        });
        let sv = q.clone().svd(false, false).singular_values;
        let smax = sv.iter().cloned().fold(0.0_f64, f64::max);
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if smin > 0.05 * smax {
            return q;
        }
    }
}

/// The canonical omega-compatible reference structure j(Omega^{-1}).
pub fn reference_compatible(omega: &SkewForm, tol: &Tolerance) -> ComplexStructure {
    let b = omega.matrix().clone().try_inverse().expect("nondegenerate form");
    let gate = NoRealEigMatrix::new(b, tol).expect("skew inverse has purely imaginary spectrum");
    retraction_j(&gate, tol).expect("retraction of a skew operator")
}

/// Rejection sampler for omega-tame structures: conjugate the compatible
/// reference by random invertible matrices until the taming margin clears
/// `margin_floor`. Returns the structure, its margin, and the number of
/// attempts consumed.
pub fn sample_tame_structure(
    omega: &SkewForm,
    rng: &mut ChaCha12Rng,
    margin_floor: f64,
    budget: usize,
    tol: &Tolerance,
) -> Result<(ComplexStructure, f64, u64), SearchError> {
    let reference = reference_compatible(omega, tol);
    let mut attempts = 0u64;
    for _ in 0..budget {
        attempts += 1;
        let amp = rng.gen_range(0.2..1.0);
        let q = random_invertible(rng, omega.dim(), amp);
        let qi = match q.clone().try_inverse() {
            Some(qi) => qi,
            None => continue,
        };
        let j = &q * reference.matrix() * qi;
        let j = match ComplexStructure::new(j, tol) {
            Ok(j) => j,
            Err(_) => continue,
        };
        let margin = taming_margin(omega, &j)?;
        if margin >= margin_floor {
            return Ok((j, margin, attempts));
        }
    }
    Err(SearchError::RejectionBudgetExhausted { attempts, margin_floor })
}

/// Compatible structures j(Omega^{-1} G) for a random SPD metric G, with the
/// same margin floor contract as the tame sampler.
pub fn sample_compatible_structure(
    omega: &SkewForm,
    rng: &mut ChaCha12Rng,
    margin_floor: f64,
    budget: usize,
    tol: &Tolerance,
) -> Result<(ComplexStructure, f64, u64), SearchError> {
    let m = omega.dim();
    let oi = omega.matrix().clone().try_inverse().expect("nondegenerate form");
    let mut attempts = 0u64;
    for _ in 0..budget {
        attempts += 1;
        let l = RMat::from_fn(m, m, |i, j| {
            if i == j {
                (0.5 * rng.gen_range(-1.0..1.0_f64)).exp()
            } else if i > j {
                0.3 * rng.gen_range(-1.0..1.0)
            } else {
                0.0
            }
        });
        let g = &l * l.transpose();
        let b = &oi * g;
        let gate = match NoRealEigMatrix::new(b, tol) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let j = match retraction_j(&gate, tol) {
            Ok(j) => j,
            Err(_) => continue,
        };
        let margin = taming_margin(omega, &j)?;
        if margin >= margin_floor {
            return Ok((j, margin, attempts));
        }
    }
    Err(SearchError::RejectionBudgetExhausted { attempts, margin_floor })
}

/// Uniform (Dirichlet(1)) sample from the open simplex.
pub fn sample_simplex(rng: &mut ChaCha12Rng, k: usize) -> SimplexPoint {
    let g: Vec<f64> = (0..k)
        .map(|_| -rng.gen_range(f64::MIN_POSITIVE..1.0_f64).ln())
        .collect();
    let s: f64 = g.iter().sum();
    SimplexPoint::new(g.iter().map(|x| x / s).collect()).expect("normalized")
}

/// Softmax with an interior floor: every coordinate at least `floor`.
pub fn softmax_with_floor(logits: &[f64], floor: f64) -> SimplexPoint {
    let k = logits.len();
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|x| (x - max).exp()).collect();
    let s: f64 = exps.iter().sum();
    let coords: Vec<f64> = exps.iter().map(|e| floor + (1.0 - k as f64 * floor) * e / s).collect();
    SimplexPoint::new(coords).expect("floored softmax stays on the simplex")
}
