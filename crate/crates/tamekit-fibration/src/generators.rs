//! Built-in fibration generators: the trivial surface-bundle product (the
//! classical fiber-bundle case) and the projectivization chart
//! C^n - {0} -> CP^{n-1} sampled on an annulus. Both emit exact analytic
//! data and re-verify every sample invariant before returning.

use crate::radial::{fs_pullback_matrix, herm, radial_eta, real_basis_vector};
use crate::sample::{PointSample, SampledFibration};
use crate::FibrationError;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use std::collections::BTreeMap;
use tamekit_core::{ComplexStructure, SkewForm, Tolerance};

type RMat = DMatrix<f64>;

#[derive(Debug, Clone, Copy)]
pub struct ProductBundleParams {
    /// Grid resolution per angle coordinate (base1, base2, fiber1, fiber2).
    pub grid: [usize; 4],
}

/// Trivial torus x torus bundle: split J, eta the fiber area form, G the
/// base form pulled back. Every sample carries the same linear data; the
/// mesh exists to exercise per-sample machinery at scale.
pub fn generate_product_bundle(
    params: &ProductBundleParams,
    tol: &Tolerance,
) -> Result<SampledFibration, FibrationError> {
    if params.grid.iter().any(|&g| g == 0) {
        return Err(FibrationError::InvalidMesh("grid resolutions must be positive".into()));
    }
    let omega_y = SkewForm::standard(2);
    let mut df = RMat::zeros(2, 4);
    df[(0, 0)] = 1.0;
    df[(1, 1)] = 1.0;
    let j = ComplexStructure::standard(4);
    let mut eta = RMat::zeros(4, 4);
    eta[(2, 3)] = 1.0;
    eta[(3, 2)] = -1.0;
    let mut base_pullback = RMat::zeros(4, 4);
    base_pullback[(0, 1)] = 1.0;
    base_pullback[(1, 0)] = -1.0;
    let mut kernel = RMat::zeros(4, 2);
    kernel[(2, 0)] = 1.0;
    kernel[(3, 1)] = 1.0;

    let [g0, g1, g2, g3] = params.grid;
    let mut samples = Vec::with_capacity(g0 * g1 * g2 * g3);
    let tau = std::f64::consts::TAU;
    for i0 in 0..g0 {
        for i1 in 0..g1 {
            for i2 in 0..g2 {
                for i3 in 0..g3 {
                    let base = vec![
                        tau * i0 as f64 / g0 as f64,
                        tau * i1 as f64 / g1 as f64,
                        tau * i2 as f64 / g2 as f64,
                        tau * i3 as f64 / g3 as f64,
                    ];
                    samples.push(PointSample {
                        id: format!("p-{i0}-{i1}-{i2}-{i3}"),
                        base,
                        df: df.clone(),
                        j: j.clone(),
                        eta: eta.clone(),
                        base_pullback: base_pullback.clone(),
                        kernel_basis: kernel.clone(),
                    });
                }
            }
        }
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("generator".into(), "product".into());
    metadata.insert("grid".into(), format!("{g0}x{g1}x{g2}x{g3}"));
    let fib = SampledFibration { omega_y, metadata, samples };
    fib.validate(tol)?;
    Ok(fib)
}

#[derive(Debug, Clone, Copy)]
pub struct ProjectivizationParams {
    /// Complex dimension of the total chart (n >= 2).
    pub n: usize,
    pub sphere_points: usize,
    pub radial_points: usize,
    pub r_in: f64,
    pub r_out: f64,
}

impl Default for ProjectivizationParams {
    fn default() -> Self {
        ProjectivizationParams { n: 2, sphere_points: 32, radial_points: 8, r_in: 0.5, r_out: 2.0 }
    }
}

/// Deterministic point set on the unit sphere of C^n (seeded normal
/// directions; independent of user-facing seeds so a mesh is a pure
/// function of its parameters).
fn sphere_mesh(n: usize, count: usize) -> Vec<Vec<Complex64>> {
    let mut rng: ChaCha12Rng = rand::SeedableRng::seed_from_u64(0xF1B0_0001);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 0.2 {
            continue;
        }
        out.push(v.iter().map(|x| x / norm).collect());
    }
    out
}

/// Unitary basis of the Hermitian orthogonal complement of z, by
/// Gram-Schmidt over the standard complex units.
fn horizontal_basis(z: &[Complex64]) -> Vec<Vec<Complex64>> {
    let n = z.len();
    let r = herm(z, z).re.sqrt();
    let zhat: Vec<Complex64> = z.iter().map(|x| x / r).collect();
    let mut basis: Vec<Vec<Complex64>> = vec![zhat];
    for j in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[j] = Complex64::new(1.0, 0.0);
        for b in &basis {
            let c = herm(b, &v);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            basis.push(v);
        }
    }
    basis.remove(0);
    basis
}

/// Samples of the projectivization chart on the annulus r_in <= |z| <= r_out:
/// J standard, eta from the radial model, df the horizontal projection
/// scaled by 1/r in a per-point unitary frame, omega_Y the Fubini-Study
/// form in that frame ((1/pi) standard).
pub fn generate_projectivization(
    params: &ProjectivizationParams,
    tol: &Tolerance,
) -> Result<SampledFibration, FibrationError> {
    let n = params.n;
    if n < 2 {
        return Err(FibrationError::InvalidMesh(
            "projectivization chart needs n >= 2 (the base would be a point)".into(),
        ));
    }
    if params.sphere_points == 0 || params.radial_points == 0 {
        return Err(FibrationError::InvalidMesh("mesh resolutions must be positive".into()));
    }
    if !(params.r_in > tol.tol_degenerate.max(1e-9)) {
        return Err(FibrationError::InvalidMesh(format!(
            "r_in must be positive (the base-locus puncture is excluded), got {}",
            params.r_in
        )));
    }
    if !(params.r_out > params.r_in) {
        return Err(FibrationError::InvalidMesh(format!(
            "need r_in < r_out, got [{}, {}]",
            params.r_in, params.r_out
        )));
    }

    let m = 2 * n;
    let k = 2 * (n - 1);
    let omega_y = SkewForm::new(
        SkewForm::standard(k).matrix() / std::f64::consts::PI,
        tol,
    )?;
    let j = ComplexStructure::standard(m);

    let directions = sphere_mesh(n, params.sphere_points);
    let radii: Vec<f64> = (0..params.radial_points)
        .map(|i| {
            if params.radial_points == 1 {
                0.5 * (params.r_in + params.r_out)
            } else {
                params.r_in
                    + (params.r_out - params.r_in) * i as f64 / (params.radial_points - 1) as f64
            }
        })
        .collect();

    let mut samples = Vec::with_capacity(directions.len() * radii.len());
    for (si, u) in directions.iter().enumerate() {
        for (ri, &r) in radii.iter().enumerate() {
            let z: Vec<Complex64> = u.iter().map(|x| x * r).collect();
            let eta = radial_eta(&z, 1e-12)?;
            let horiz = horizontal_basis(&z);

            // df in the per-point frame: v -> (<u_a, v>/r)_a, realified.
            let mut df = RMat::zeros(k, m);
            for (a, ua) in horiz.iter().enumerate() {
                for b in 0..m {
                    let e = real_basis_vector(n, b);
                    let coeff = herm(ua, &e) / r;
                    df[(2 * a, b)] = coeff.re;
                    df[(2 * a + 1, b)] = coeff.im;
                }
            }
            let base_pullback = df.transpose() * omega_y.matrix() * &df;
            debug_assert!({
                let fs = fs_pullback_matrix(&z, 1e-12)?;
                tamekit_core::linalg::fro_norm(&(&fs - &base_pullback)) < 1e-10
            });

            // Kernel of df: the complex line through z, realified.
            let zhat: Vec<Complex64> = z.iter().map(|x| x / r).collect();
            let mut kernel = RMat::zeros(m, 2);
            for (row, &zc) in zhat.iter().enumerate() {
                kernel[(2 * row, 0)] = zc.re;
                kernel[(2 * row + 1, 0)] = zc.im;
                let izc = Complex64::new(0.0, 1.0) * zc;
                kernel[(2 * row, 1)] = izc.re;
                kernel[(2 * row + 1, 1)] = izc.im;
            }

            let mut base = Vec::with_capacity(m);
            for zc in &z {
                base.push(zc.re);
                base.push(zc.im);
            }
            samples.push(PointSample {
                id: format!("s{si}-r{ri}"),
                base,
                df,
                j: j.clone(),
                eta,
                base_pullback,
                kernel_basis: kernel,
            });
        }
    }

    let mut metadata = BTreeMap::new();
    metadata.insert("generator".into(), "projectivization".into());
    metadata.insert("n".into(), n.to_string());
    metadata.insert(
        "mesh".into(),
        format!("{}x{} on [{}, {}]", params.sphere_points, params.radial_points, params.r_in, params.r_out),
    );
    // eta equals the standard form on C^n rescaled by this constant (fixed
    // by the Fubini-Study normalization and the unit-pairing of beta).
    metadata.insert("eta_rescaling".into(), (1.0 / std::f64::consts::PI).to_string());
    let fib = SampledFibration { omega_y, metadata, samples };
    fib.validate(tol)?;
    Ok(fib)
}
