//! Extended-precision matrix kernel used to re-verify candidate records:
//! double-double matrices with multiplication, Gauss-Jordan inversion, a
//! Denman-Beavers iteration for the principal (inverse) square root, and a
//! cyclic Jacobi eigensolver for symmetric matrices.

use crate::dd::Dd;
use nalgebra::DMatrix;

#[derive(Debug, Clone)]
pub struct DdMatrix {
    pub n: usize,
    data: Vec<Dd>,
}

#[derive(Debug, thiserror::Error)]
pub enum XpError {
    #[error("matrix is singular at extended precision (pivot {0:.3e})")]
    Singular(f64),
    #[error("Denman-Beavers iteration did not converge in {0} steps")]
    NoConvergence(usize),
    #[error("Jacobi sweep limit reached")]
    JacobiStall,
}

impl DdMatrix {
    pub fn zeros(n: usize) -> Self {
        DdMatrix { n, data: vec![Dd::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Dd::ONE;
        }
        m
    }

    pub fn from_f64(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        assert_eq!(n, m.ncols());
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = Dd::from_f64(m[(i, j)]);
            }
        }
        out
    }

    pub fn hi(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self[(i, j)].hi)
    }

    pub fn mul(&self, o: &DdMatrix) -> DdMatrix {
        let n = self.n;
        let mut out = DdMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Dd::ZERO;
                for k in 0..n {
                    acc = acc.add(self[(i, k)].mul(o[(k, j)]));
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn add(&self, o: &DdMatrix) -> DdMatrix {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&o.data) {
            *a = a.add(*b);
        }
        out
    }

    pub fn sub(&self, o: &DdMatrix) -> DdMatrix {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&o.data) {
            *a = a.sub(*b);
        }
        out
    }

    pub fn scale(&self, s: f64) -> DdMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.scale(s);
        }
        out
    }

    pub fn transpose(&self) -> DdMatrix {
        let mut out = DdMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn sym_part(&self) -> DdMatrix {
        self.add(&self.transpose()).scale(0.5)
    }

    /// Frobenius norm estimate (hi parts; only used for relative gates).
    pub fn fro_hi(&self) -> f64 {
        self.data.iter().map(|d| d.hi * d.hi).sum::<f64>().sqrt()
    }

    /// Gauss-Jordan inversion with partial pivoting.
    pub fn inverse(&self) -> Result<DdMatrix, XpError> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = DdMatrix::identity(n);
        for col in 0..n {
            let mut piv = col;
            let mut best = a[(col, col)].hi.abs();
            for r in col + 1..n {
                let v = a[(r, col)].hi.abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return Err(XpError::Singular(best));
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(col * n + j, piv * n + j);
                    inv.data.swap(col * n + j, piv * n + j);
                }
            }
            let d = a[(col, col)];
            for j in 0..n {
                a[(col, j)] = a[(col, j)].div(d);
                inv[(col, j)] = inv[(col, j)].div(d);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f.hi == 0.0 && f.lo == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[(r, j)] = a[(r, j)].sub(f.mul(a[(col, j)]));
                    inv[(r, j)] = inv[(r, j)].sub(f.mul(inv[(col, j)]));
                }
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for DdMatrix {
    type Output = Dd;
    fn index(&self, (i, j): (usize, usize)) -> &Dd {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DdMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Dd {
        &mut self.data[i * self.n + j]
    }
}

/// Denman-Beavers iteration: X_k -> A^{1/2}, Y_k -> A^{-1/2}, quadratically,
/// for A with no eigenvalues in (-inf, 0].
pub fn denman_beavers(a: &DdMatrix) -> Result<(DdMatrix, DdMatrix), XpError> {
    let mut x = a.clone();
    let mut y = DdMatrix::identity(a.n);
    let scale = a.fro_hi().max(1.0);
    for _ in 0..100 {
        let xi = x.inverse()?;
        let yi = y.inverse()?;
        let xn = x.add(&yi).scale(0.5);
        let yn = y.add(&xi).scale(0.5);
        let delta = xn.sub(&x).fro_hi();
        x = xn;
        y = yn;
        if delta <= 1e-30 * scale {
            return Ok((x, y));
        }
    }
    Err(XpError::NoConvergence(100))
}

/// Smallest eigenvalue of a symmetric double-double matrix via cyclic Jacobi.
/// Rotations are computed and applied in double-double, so eigenvalues are
/// accurate far beyond working precision.
pub fn jacobi_lambda_min(m: &DdMatrix) -> Result<Dd, XpError> {
    let n = m.n;
    let mut a = m.clone();
    if n == 1 {
        return Ok(a[(0, 0)]);
    }
    let scale = a.fro_hi().max(f64::MIN_POSITIVE);
    for _sweep in 0..60 {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(a[(p, q)].hi.abs());
            }
        }
        if off <= 1e-30 * scale {
            let mut min = a[(0, 0)];
            for i in 1..n {
                if a[(i, i)].lt(min) {
                    min = a[(i, i)];
                }
            }
            return Ok(min);
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.hi.abs() <= 1e-32 * scale {
                    continue;
                }
                // Rotation parameters in double-double.
                let theta = a[(q, q)].sub(a[(p, p)]).div(apq.scale(2.0));
                let t = {
                    let denom = theta.abs().add(theta.mul(theta).add(Dd::ONE).sqrt());
                    let t = Dd::ONE.div(denom);
                    if theta.hi < 0.0 {
                        t.neg()
                    } else {
                        t
                    }
                };
                let c = Dd::ONE.div(t.mul(t).add(Dd::ONE).sqrt());
                let s = t.mul(c);
                // Apply the rotation to rows/columns p and q.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c.mul(akp).sub(s.mul(akq));
                    a[(k, q)] = s.mul(akp).add(c.mul(akq));
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c.mul(apk).sub(s.mul(aqk));
                    a[(q, k)] = s.mul(apk).add(c.mul(aqk));
                }
            }
        }
    }
    Err(XpError::JacobiStall)
}
