//! Complex Schur decomposition A = Q T Q* with unitary Q and upper
//! triangular T, plus the adjacent-swap reordering used to group eigenvalue
//! clusters.
//!
//! Householder reduction to Hessenberg form followed by an explicit
//! single-shift QR iteration with Wilkinson shifts and occasional
//! exceptional shifts. Dimensions in this crate stay tiny, so the explicit
//! Givens formulation is both simple and fast enough.

use super::{max_abs_c, CMat};
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct ComplexSchur {
    /// Unitary factor.
    pub q: CMat,
    /// Upper-triangular factor; eigenvalues on the diagonal.
    pub t: CMat,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SchurError {
    #[error("matrix must be square, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("QR iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// 2x2 unitary acting on a coordinate pair.
#[derive(Clone, Copy)]
struct Rot {
    g: [[Complex64; 2]; 2],
}

impl Rot {
    /// Unitary G with G [a; b]^T = [t; 0]^T, t = sqrt(|a|^2+|b|^2).
    fn annihilating(a: Complex64, b: Complex64) -> Rot {
        let t = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if t == 0.0 || b.norm() == 0.0 {
            return Rot { g: [[ONE, ZERO], [ZERO, ONE]] };
        }
        let ti = 1.0 / t;
        Rot {
            g: [
                [a.conj() * ti, b.conj() * ti],
                [-b * ti, a * ti],
            ],
        }
    }

    fn adjoint(&self) -> Rot {
        Rot {
            g: [
                [self.g[0][0].conj(), self.g[1][0].conj()],
                [self.g[0][1].conj(), self.g[1][1].conj()],
            ],
        }
    }

    /// rows (p, p+1) <- G * rows
    fn apply_left(&self, m: &mut CMat, p: usize) {
        let n = m.ncols();
        for j in 0..n {
            let x = m[(p, j)];
            let y = m[(p + 1, j)];
            m[(p, j)] = self.g[0][0] * x + self.g[0][1] * y;
            m[(p + 1, j)] = self.g[1][0] * x + self.g[1][1] * y;
        }
    }

    /// cols (p, p+1) <- cols * G
    fn apply_right(&self, m: &mut CMat, p: usize) {
        let n = m.nrows();
        for i in 0..n {
            let x = m[(i, p)];
            let y = m[(i, p + 1)];
            m[(i, p)] = x * self.g[0][0] + y * self.g[1][0];
            m[(i, p + 1)] = x * self.g[0][1] + y * self.g[1][1];
        }
    }
}

/// Reduce to upper Hessenberg form by Householder similarity; accumulates the
/// transformation into `q`.
fn hessenberg(h: &mut CMat, q: &mut CMat) {
    let n = h.nrows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        // Householder vector for column k, rows k+1..n.
        let len = n - k - 1;
        let mut v: Vec<Complex64> = (0..len).map(|i| h[(k + 1 + i, k)]).collect();
        let s = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if s == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        v[0] += phase * s;
        let vnorm2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;

        // H <- P H with P = I - tau v v^H acting on rows k+1..n.
        for j in 0..n {
            let mut dot = ZERO;
            for i in 0..len {
                dot += v[i].conj() * h[(k + 1 + i, j)];
            }
            dot *= tau;
            for i in 0..len {
                let upd = v[i] * dot;
                h[(k + 1 + i, j)] -= upd;
            }
        }
        // H <- H P on columns k+1..n.
        for i in 0..n {
            let mut dot = ZERO;
            for jj in 0..len {
                dot += h[(i, k + 1 + jj)] * v[jj];
            }
            dot *= tau;
            for jj in 0..len {
                let upd = dot * v[jj].conj();
                h[(i, k + 1 + jj)] -= upd;
            }
        }
        // Q <- Q P.
        for i in 0..n {
            let mut dot = ZERO;
            for jj in 0..len {
                dot += q[(i, k + 1 + jj)] * v[jj];
            }
            dot *= tau;
            for jj in 0..len {
                let upd = dot * v[jj].conj();
                q[(i, k + 1 + jj)] -= upd;
            }
        }
        // Entries below the subdiagonal are now zero by construction.
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
}

/// Wilkinson shift: eigenvalue of the trailing 2x2 closest to the corner.
fn wilkinson_shift(h: &CMat, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let mu1 = tr_half + disc;
    let mu2 = tr_half - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// Complex Schur decomposition.
pub fn complex_schur(a: &CMat) -> Result<ComplexSchur, SchurError> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(SchurError::NotSquare(n, a.ncols()));
    }
    let mut t = a.clone();
    let mut q = CMat::identity(n, n);
    if n <= 1 {
        return Ok(ComplexSchur { q, t });
    }
    hessenberg(&mut t, &mut q);

    let hnorm = max_abs_c(&t).max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    // `relax` widens the deflation threshold once a window stagnates; inputs
    // that are a noise ball around a scalar matrix (I + O(eps) from upstream
    // arithmetic) can never push their subdiagonals under 1 ulp, and zeroing
    // them at a few tens of ulps is still a roundoff-level backward error.
    let negligible = |t: &CMat, i: usize, relax: f64| -> bool {
        let s = t[(i - 1, i - 1)].norm() + t[(i, i)].norm();
        let s = if s == 0.0 { hnorm } else { s };
        t[(i, i - 1)].norm() <= relax * eps * s
    };

    let max_sweeps = 40 * n.max(4);
    let mut sweeps = 0usize;
    let mut hi = n - 1;
    let mut since_deflation = 0usize;
    while hi > 0 {
        let relax = if since_deflation > 20 { 32.0 } else { 1.0 };
        // Deflate converged trailing entries.
        if negligible(&t, hi, relax) {
            t[(hi, hi - 1)] = ZERO;
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        // Active window [lo, hi].
        let mut lo = hi;
        while lo > 0 && !negligible(&t, lo, relax) {
            lo -= 1;
        }
        if lo > 0 {
            t[(lo, lo - 1)] = ZERO;
        }

        sweeps += 1;
        since_deflation += 1;
        if sweeps > max_sweeps {
            return Err(SchurError::NoConvergence(sweeps));
        }
        let mu = if since_deflation % 12 == 0 {
            // Exceptional shift to break symmetry-induced stalls.
            t[(hi, hi)] + Complex64::new(0.75 * t[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(&t, hi)
        };

        for i in lo..=hi {
            t[(i, i)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let g = Rot::annihilating(t[(i, i)], t[(i + 1, i)]);
            g.apply_left(&mut t, i);
            t[(i + 1, i)] = ZERO;
            rots.push((i, g));
        }
        for &(i, ref g) in &rots {
            let gh = g.adjoint();
            gh.apply_right(&mut t, i);
            gh.apply_right(&mut q, i);
        }
        for i in lo..=hi {
            t[(i, i)] += mu;
        }
    }

    // Clean strictly-lower entries left over from rounding in the RQ phase.
    for i in 1..n {
        for j in 0..i {
            t[(i, j)] = ZERO;
        }
    }
    Ok(ComplexSchur { q, t })
}

impl ComplexSchur {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.t.nrows()).map(|i| self.t[(i, i)]).collect()
    }

    /// Swap the diagonal entries at positions p and p+1 by a unitary
    /// similarity, preserving the Schur form.
    pub fn swap_adjacent(&mut self, p: usize) {
        let l1 = self.t[(p, p)];
        let l2 = self.t[(p + 1, p + 1)];
        let c = self.t[(p, p + 1)];
        // Eigenvector of [[l1, c], [0, l2]] for l2 is [c, l2 - l1].
        let x0 = c;
        let x1 = l2 - l1;
        if x1.norm() == 0.0 {
            return; // equal eigenvalues; a swap changes nothing observable
        }
        let g = Rot::annihilating(x0, x1);
        g.apply_left(&mut self.t, p);
        let gh = g.adjoint();
        gh.apply_right(&mut self.t, p);
        gh.apply_right(&mut self.q, p);
        self.t[(p + 1, p)] = ZERO;
    }
}
