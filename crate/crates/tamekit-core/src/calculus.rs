//! Principal matrix powers on the eigenvalue-slit domain and the canonical
//! retraction onto complex structures.
//!
//! `A^r` is the matrix function induced by the principal branch of `z^r` on
//! matrices with no eigenvalues in `(-inf, 0]`. The implementation is a
//! complex Schur factorization followed by a block Parlett recurrence:
//! eigenvalues are grouped into clusters (relative gap below
//! `Tolerance::cluster_gap` shares a cluster), the Schur form is reordered so
//! clusters are contiguous, each diagonal cluster block is evaluated through
//! the binomial series of `(1+w)^r` about the cluster mean, and off-diagonal
//! blocks come from triangular Sylvester solves. Near-defective clusters are
//! exact up to the series tail because the nilpotent part terminates.

use crate::error::{CoreError, Result};
use crate::forms::ComplexStructure;
use crate::linalg::schur::{complex_schur, ComplexSchur};
use crate::linalg::{fro_norm_c, real_part_with_residual, to_complex, CMat, RMat};
use crate::tolerance::Tolerance;
use num_complex::Complex64;

/// Square matrix with no eigenvalues in the slit `(-inf, 0]`; the domain of
/// the principal power. Holds its Schur factorization and eigenvalues.
#[derive(Debug, Clone)]
pub struct SlitMatrix {
    a: CMat,
    schur: ComplexSchur,
    eigenvalues: Vec<Complex64>,
    real_input: bool,
}

impl SlitMatrix {
    pub fn new(a: CMat, tol: &Tolerance) -> Result<Self> {
        Self::build(a, false, tol)
    }

    pub fn from_real(a: &RMat, tol: &Tolerance) -> Result<Self> {
        Self::build(to_complex(a), true, tol)
    }

    fn build(a: CMat, real_input: bool, tol: &Tolerance) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(CoreError::DimensionMismatch {
                context: format!("slit matrix must be square, got {}x{}", a.nrows(), a.ncols()),
            });
        }
        let schur = complex_schur(&a)?;
        let eigenvalues = schur.eigenvalues();
        let scale = eigenvalues.iter().map(|e| e.norm()).fold(1.0_f64, f64::max);
        for &lambda in &eigenvalues {
            if lambda.im.abs() <= tol.tol_slit * scale && lambda.re <= tol.tol_slit * scale {
                return Err(CoreError::EigenvalueInSlit(lambda));
            }
        }
        Ok(SlitMatrix { a, schur, eigenvalues, real_input })
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.a
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn is_real_input(&self) -> bool {
        self.real_input
    }

    /// Principal power A^r.
    pub fn power(&self, r: f64, tol: &Tolerance) -> Result<CMat> {
        let m = self.dim();
        if m == 0 {
            return Ok(CMat::zeros(0, 0));
        }
        // Work on a reordered copy of the cached factorization.
        let mut schur = self.schur.clone();
        let key = cluster_keys(&self.eigenvalues, tol.cluster_gap);
        let mut key = key;
        loop {
            let mut swapped = false;
            for p in 0..m - 1 {
                if key[p] > key[p + 1] {
                    schur.swap_adjacent(p);
                    key.swap(p, p + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        // Cluster block boundaries [start, end).
        let mut blocks: Vec<(usize, usize)> = Vec::new();
        let mut start = 0;
        for i in 1..=m {
            if i == m || key[i] != key[i - 1] {
                blocks.push((start, i));
                start = i;
            }
        }

        let t = &schur.t;
        let mut f = CMat::zeros(m, m);
        for &(s, e) in &blocks {
            let block = t.view((s, s), (e - s, e - s)).into_owned();
            let fb = atomic_power(&block, r)?;
            f.view_mut((s, s), (e - s, e - s)).copy_from(&fb);
        }
        // Parlett recurrence over superdiagonal block distances.
        let nb = blocks.len();
        for sep in 1..nb {
            for bi in 0..nb - sep {
                let bj = bi + sep;
                let (is, ie) = blocks[bi];
                let (js, je) = blocks[bj];
                let tii = t.view((is, is), (ie - is, ie - is));
                let tjj = t.view((js, js), (je - js, je - js));
                let tij = t.view((is, js), (ie - is, je - js));
                let fii = f.view((is, is), (ie - is, ie - is)).into_owned();
                let fjj = f.view((js, js), (je - js, je - js)).into_owned();
                let mut y = &fii * tij.into_owned() - tij.into_owned() * &fjj;
                for bk in bi + 1..bj {
                    let (ks, ke) = blocks[bk];
                    let fik = f.view((is, ks), (ie - is, ke - ks)).into_owned();
                    let tkj = t.view((ks, js), (ke - ks, je - js)).into_owned();
                    let tik = t.view((is, ks), (ie - is, ke - ks)).into_owned();
                    let fkj = f.view((ks, js), (ke - ks, je - js)).into_owned();
                    y += &fik * &tkj - &tik * &fkj;
                }
                let x = sylvester_triangular(&tii.into_owned(), &tjj.into_owned(), &y)?;
                f.view_mut((is, js), (ie - is, je - js)).copy_from(&x);
            }
        }
        Ok(&schur.q * f * schur.q.adjoint())
    }

    /// Principal power of a real matrix, truncated to a real result after
    /// verifying the imaginary residual is below tolerance. Large imaginary
    /// parts are an error, never silently dropped.
    pub fn power_real(&self, r: f64, tol: &Tolerance) -> Result<RMat> {
        let f = self.power(r, tol)?;
        let (re, imag) = real_part_with_residual(&f);
        let gate = tol.tol_residual * fro_norm_c(&f).max(1.0);
        if imag > gate {
            return Err(CoreError::ImaginaryResidual { residual: imag, tol: gate });
        }
        Ok(re)
    }
}

/// Principal matrix power, free-function form.
pub fn principal_power(a: &SlitMatrix, r: f64, tol: &Tolerance) -> Result<CMat> {
    a.power(r, tol)
}

/// Transitive clustering of eigenvalues by relative gap; returns a key per
/// position such that equal keys share a cluster and keys are ordered by
/// first appearance along the diagonal.
fn cluster_keys(eigs: &[Complex64], gap: f64) -> Vec<usize> {
    let m = eigs.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..m {
        for j in i + 1..m {
            let thr = gap * (1.0 + eigs[i].norm().max(eigs[j].norm()));
            if (eigs[i] - eigs[j]).norm() <= thr {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut order: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut next = 0usize;
    let mut key = vec![0usize; m];
    for i in 0..m {
        let root = find(&mut parent, i);
        let k = *order.entry(root).or_insert_with(|| {
            let k = next;
            next += 1;
            k
        });
        key[i] = k;
    }
    key
}

/// z^r on the principal branch.
fn principal_scalar_power(z: Complex64, r: f64) -> Complex64 {
    z.powf(r)
}

/// Power of an upper-triangular block whose eigenvalues form one cluster:
/// sigma^r * sum_k C(r,k) ((T - sigma I)/sigma)^k with sigma the cluster
/// mean. The strictly-triangular part is nilpotent, so only the eigenvalue
/// deviations contribute to the tail.
fn atomic_power(t: &CMat, r: f64) -> Result<CMat> {
    let nb = t.nrows();
    let mut sigma = Complex64::new(0.0, 0.0);
    for i in 0..nb {
        sigma += t[(i, i)];
    }
    sigma /= nb as f64;

    // Distance from sigma to the slit must dominate the cluster radius for
    // the series to converge on the right branch.
    let dist = if sigma.re <= 0.0 { sigma.im.abs() } else { sigma.norm() };
    let radius = (0..nb).map(|i| (t[(i, i)] - sigma).norm()).fold(0.0_f64, f64::max);
    if dist <= 2.0 * radius || dist == 0.0 {
        return Err(CoreError::ClusterSeriesDiverged { cluster: nb, terms: 0 });
    }

    let mut msig = t.clone();
    for i in 0..nb {
        msig[(i, i)] -= sigma;
    }
    let minv = msig / sigma;
    if fro_norm_c(&minv) > 1e6 {
        // A transient this large would destroy all accuracy.
        return Err(CoreError::ClusterSeriesDiverged { cluster: nb, terms: 0 });
    }

    let max_terms = 250usize;
    let mut acc = CMat::identity(nb, nb);
    let mut mpow = CMat::identity(nb, nb);
    let mut coeff = Complex64::new(1.0, 0.0);
    let mut quiet = 0usize;
    let mut converged = false;
    for k in 1..=max_terms {
        mpow = &mpow * &minv;
        coeff *= Complex64::new((r - (k as f64) + 1.0) / k as f64, 0.0);
        let term = &mpow * coeff;
        acc += &term;
        let tnorm = fro_norm_c(&term);
        if k >= nb && tnorm <= f64::EPSILON * fro_norm_c(&acc).max(1.0) {
            quiet += 1;
            if quiet >= 2 {
                converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    if !converged {
        return Err(CoreError::ClusterSeriesDiverged { cluster: nb, terms: max_terms });
    }
    Ok(acc * principal_scalar_power(sigma, r))
}

/// Solve T1 X - X T2 = Y with T1, T2 upper triangular and spectra disjoint.
fn sylvester_triangular(t1: &CMat, t2: &CMat, y: &CMat) -> Result<CMat> {
    let p = t1.nrows();
    let q = t2.nrows();
    let mut x = CMat::zeros(p, q);
    for c in 0..q {
        for rr in (0..p).rev() {
            let mut s = y[(rr, c)];
            for k in rr + 1..p {
                s -= t1[(rr, k)] * x[(k, c)];
            }
            for k in 0..c {
                s += x[(rr, k)] * t2[(k, c)];
            }
            let d = t1[(rr, rr)] - t2[(c, c)];
            if d.norm() == 0.0 {
                return Err(CoreError::Internal(
                    "Sylvester solve hit coincident cluster eigenvalues".into(),
                ));
            }
            x[(rr, c)] = s / d;
        }
    }
    Ok(x)
}

/// Real matrix with no real eigenvalues; the domain of the retraction onto
/// complex structures.
#[derive(Debug, Clone)]
pub struct NoRealEigMatrix {
    b: RMat,
    eigenvalues: Vec<Complex64>,
    margin: f64,
}

impl NoRealEigMatrix {
    pub fn new(b: RMat, tol: &Tolerance) -> Result<Self> {
        let m = b.nrows();
        if m != b.ncols() {
            return Err(CoreError::DimensionMismatch {
                context: format!("matrix must be square, got {}x{}", m, b.ncols()),
            });
        }
        if m == 0 || m % 2 != 0 {
            return Err(CoreError::OddDimension(m));
        }
        let schur = complex_schur(&to_complex(&b))?;
        let eigenvalues = schur.eigenvalues();
        let scale = eigenvalues.iter().map(|e| e.norm()).fold(1.0_f64, f64::max);
        let margin = eigenvalues.iter().map(|e| e.im.abs()).fold(f64::INFINITY, f64::min);
        if margin <= tol.tol_real_eig * scale {
            return Err(CoreError::RealEigenvalue { margin, tol: tol.tol_real_eig * scale });
        }
        Ok(NoRealEigMatrix { b, eigenvalues, margin })
    }

    pub fn matrix(&self) -> &RMat {
        &self.b
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    /// Smallest |Im lambda| over the spectrum.
    pub fn margin(&self) -> f64 {
        self.margin
    }
}

/// Canonical retraction j(B) = B (-B^2)^{-1/2} onto the complex structures.
/// Fixes every complex structure and is natural for intertwiners.
pub fn retraction_j(b: &NoRealEigMatrix, tol: &Tolerance) -> Result<ComplexStructure> {
    let neg_b2 = -(b.matrix() * b.matrix());
    // -B^2 has no eigenvalues in (-inf, 0] when B has no real eigenvalues.
    let slit = SlitMatrix::from_real(&neg_b2, tol)?;
    let inv_sqrt = slit.power_real(-0.5, tol)?;
    let j = b.matrix() * inv_sqrt;
    ComplexStructure::new(j, tol)
}

/// min |Im lambda| over the eigenvalues of a square real matrix. Zero for a
/// matrix with a real eigenvalue; gates NoRealEigMatrix construction.
pub fn spectral_margin(b: &RMat) -> Result<f64> {
    if b.nrows() != b.ncols() {
        return Err(CoreError::DimensionMismatch {
            context: format!("matrix must be square, got {}x{}", b.nrows(), b.ncols()),
        });
    }
    let schur = complex_schur(&to_complex(b))?;
    Ok(schur
        .eigenvalues()
        .iter()
        .map(|e| e.im.abs())
        .fold(f64::INFINITY, f64::min))
}
