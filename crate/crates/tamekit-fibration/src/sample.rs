//! Sampled-fibration data model: per-point differential, local structure,
//! fiberwise 2-form eta, pulled-back base form, and kernel basis, with the
//! invariants the taming-assembly computations rely on.

use crate::FibrationError;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use tamekit_core::linalg::{fro_norm, lambda_min_sym};
use tamekit_core::matrix::MatrixJson;
use tamekit_core::{is_slice_tame, ComplexStructure, LinearSlice, SkewForm, Tolerance};

type RMat = DMatrix<f64>;

/// One sample point of a fibration.
#[derive(Debug, Clone)]
pub struct PointSample {
    pub id: String,
    /// Coordinates of the point in the model (metadata only).
    pub base: Vec<f64>,
    /// df at the point: k x m.
    pub df: RMat,
    pub j: ComplexStructure,
    /// Fiberwise closed 2-form at the point; may be degenerate.
    pub eta: RMat,
    /// f*omega_Y at the point.
    pub base_pullback: RMat,
    /// Orthonormal basis of ker df (m x kernel_dim).
    pub kernel_basis: RMat,
}

impl PointSample {
    pub fn kernel_dim(&self) -> usize {
        self.kernel_basis.ncols()
    }

    /// eta restricted to ker df, in the kernel basis.
    pub fn eta_on_kernel(&self) -> RMat {
        self.kernel_basis.transpose() * &self.eta * &self.kernel_basis
    }

    /// J restricted to ker df (well defined once the kernel is J-invariant).
    pub fn j_on_kernel(&self) -> RMat {
        self.kernel_basis.transpose() * self.j.matrix() * &self.kernel_basis
    }

    /// Taming margin of eta against J on the kernel block.
    pub fn kernel_taming_margin(&self) -> f64 {
        if self.kernel_dim() == 0 {
            return f64::INFINITY;
        }
        lambda_min_sym(&(self.eta_on_kernel() * self.j_on_kernel()))
    }

    /// Full invariant check against the shared base form.
    pub fn validate(&self, omega_y: &SkewForm, tol: &Tolerance) -> Result<(), FibrationError> {
        let m = self.j.dim();
        let k = omega_y.dim();
        let fail = |detail: String| FibrationError::SampleInvariant { id: self.id.clone(), detail };
        if self.df.nrows() != k || self.df.ncols() != m {
            return Err(fail(format!(
                "df is {}x{}, expected {}x{}",
                self.df.nrows(),
                self.df.ncols(),
                k,
                m
            )));
        }
        for (name, mat) in [("eta", &self.eta), ("base_pullback", &self.base_pullback)] {
            if mat.nrows() != m || mat.ncols() != m {
                return Err(fail(format!("{name} has shape {}x{}", mat.nrows(), mat.ncols())));
            }
            let resid = fro_norm(&(mat + mat.transpose()));
            if resid > tol.tol_skew * fro_norm(mat).max(1.0) {
                return Err(fail(format!("{name} is not skew (residual {resid:.3e})")));
            }
        }
        // Kernel basis: orthonormal columns annihilated by df.
        let kd = self.kernel_basis.ncols();
        if self.kernel_basis.nrows() != m {
            return Err(fail("kernel basis has wrong row count".into()));
        }
        if kd > 0 {
            let gram = self.kernel_basis.transpose() * &self.kernel_basis;
            if fro_norm(&(gram - RMat::identity(kd, kd))) > 1e-10 {
                return Err(fail("kernel basis is not orthonormal".into()));
            }
            let image = &self.df * &self.kernel_basis;
            if fro_norm(&image) > tol.tol_residual * fro_norm(&self.df).max(1.0) {
                return Err(fail("kernel basis is not annihilated by df".into()));
            }
        }
        // base_pullback really is the pullback of the shared base form.
        let pullback = self.df.transpose() * omega_y.matrix() * &self.df;
        let resid = fro_norm(&(&pullback - &self.base_pullback));
        if resid > tol.tol_residual * fro_norm(&pullback).max(1.0) {
            return Err(fail(format!(
                "base_pullback differs from df^T Omega_Y df by {resid:.3e}"
            )));
        }
        // J is (omega_Y, df)-tame in the slice sense.
        let slice = LinearSlice::new(self.df.clone(), omega_y.clone())?;
        if !is_slice_tame(&slice, &self.j, tol)? {
            return Err(fail("J is not (omega_Y, df)-tame".into()));
        }
        // eta tames J on the kernel.
        if kd > 0 && !(self.kernel_taming_margin() > tol.tol_psd) {
            return Err(fail(format!(
                "eta fails to tame J on ker df (margin {:.3e})",
                self.kernel_taming_margin()
            )));
        }
        Ok(())
    }
}

/// Finite set of point samples sharing a base form.
#[derive(Debug, Clone)]
pub struct SampledFibration {
    pub omega_y: SkewForm,
    pub metadata: BTreeMap<String, String>,
    pub samples: Vec<PointSample>,
}

impl SampledFibration {
    pub fn validate(&self, tol: &Tolerance) -> Result<(), FibrationError> {
        if self.samples.is_empty() {
            return Err(FibrationError::InvalidMesh("fibration has no samples".into()));
        }
        for s in &self.samples {
            s.validate(&self.omega_y, tol)?;
        }
        Ok(())
    }
}

/// Limit data at a candidate critical point: the kernel there plus oriented
/// 2-plane bases of nearby regular kernels.
#[derive(Debug, Clone)]
pub struct KernelCloud {
    /// Orthonormal basis of ker T_x at the candidate point (m x kd).
    pub kernel_basis: RMat,
    /// Each m x 2, a limit plane of regular kernels.
    pub planes: Vec<RMat>,
}

// ---------------------------------------------------------------------------
// JSON schema ("fib/1")

#[derive(Debug, Serialize, Deserialize)]
pub struct PointSampleJson {
    pub id: String,
    pub base: Vec<f64>,
    pub df: MatrixJson,
    #[serde(rename = "J")]
    pub j: MatrixJson,
    pub eta: MatrixJson,
    pub base_pullback: MatrixJson,
    pub kernel_basis: MatrixJson,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SampledFibrationJson {
    pub schema: String,
    pub omega_y: MatrixJson,
    pub metadata: BTreeMap<String, String>,
    pub samples: Vec<PointSampleJson>,
}

impl SampledFibration {
    pub fn to_json(&self) -> SampledFibrationJson {
        SampledFibrationJson {
            schema: "fib/1".into(),
            omega_y: MatrixJson::from_matrix(self.omega_y.matrix()),
            metadata: self.metadata.clone(),
            samples: self
                .samples
                .iter()
                .map(|s| PointSampleJson {
                    id: s.id.clone(),
                    base: s.base.clone(),
                    df: MatrixJson::from_matrix(&s.df),
                    j: MatrixJson::from_matrix(s.j.matrix()),
                    eta: MatrixJson::from_matrix(&s.eta),
                    base_pullback: MatrixJson::from_matrix(&s.base_pullback),
                    kernel_basis: MatrixJson::from_matrix(&s.kernel_basis),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &SampledFibrationJson, tol: &Tolerance) -> Result<Self, FibrationError> {
        if json.schema != "fib/1" {
            return Err(FibrationError::InvalidMesh(format!(
                "unsupported schema {:?}, expected \"fib/1\"",
                json.schema
            )));
        }
        let omega_y = SkewForm::new(
            json.omega_y.to_matrix().map_err(|e| FibrationError::InvalidMesh(e.to_string()))?,
            tol,
        )?;
        let mut samples = Vec::with_capacity(json.samples.len());
        for s in &json.samples {
            let to = |m: &MatrixJson| {
                m.to_matrix().map_err(|e| FibrationError::InvalidMesh(e.to_string()))
            };
            samples.push(PointSample {
                id: s.id.clone(),
                base: s.base.clone(),
                df: to(&s.df)?,
                j: ComplexStructure::new(to(&s.j)?, tol)?,
                eta: to(&s.eta)?,
                base_pullback: to(&s.base_pullback)?,
                kernel_basis: to(&s.kernel_basis)?,
            });
        }
        let fib = SampledFibration { omega_y, metadata: json.metadata.clone(), samples };
        fib.validate(tol)?;
        Ok(fib)
    }
}

/// The forms `sym((t eta + G) J)` family evaluated at one parameter.
pub fn taming_lambda_min(sample: &PointSample, t: f64) -> f64 {
    let form = &sample.eta * t + &sample.base_pullback;
    lambda_min_sym(&(form * sample.j.matrix()))
}
