//! One value object holding every numeric threshold, overridable per call.

use serde::{Deserialize, Serialize};

/// Default tolerances for the whole toolkit. All fields are nonnegative.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Tolerance {
    /// Skewness residual allowed in a form matrix, relative to max(1, ||Omega||).
    pub tol_skew: f64,
    /// ||J^2 + I|| allowed in a complex structure.
    pub tol_structure: f64,
    /// |det| below this means a form is degenerate.
    pub tol_degenerate: f64,
    /// Positivity threshold on eigenvalues of sym(Omega J).
    pub tol_psd: f64,
    /// Principal-angle threshold for null-space comparisons (radians).
    pub tol_nullspace: f64,
    /// Minimal |Im lambda| for a matrix to count as having no real eigenvalues.
    pub tol_real_eig: f64,
    /// Eigenvalues within this distance of (-inf, 0] reject a SlitMatrix.
    pub tol_slit: f64,
    /// Eigenvalues closer than this (relative) share a Parlett cluster.
    pub cluster_gap: f64,
    /// Residual gate for defining identities (naturality, pushforward, j^2+I).
    pub tol_residual: f64,
    /// ||J1 - J2|| bound asserted when the line certificate returns true.
    pub tol_certificate: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            tol_skew: 1e-9,
            tol_structure: 1e-8,
            tol_degenerate: 1e-12,
            tol_psd: 1e-10,
            tol_nullspace: 1e-8,
            tol_real_eig: 1e-10,
            tol_slit: 1e-12,
            cluster_gap: 1e-6,
            tol_residual: 1e-8,
            tol_certificate: 1e-6,
        }
    }
}

impl Tolerance {
    /// Validates nonnegativity of every field.
    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            ("tol_skew", self.tol_skew),
            ("tol_structure", self.tol_structure),
            ("tol_degenerate", self.tol_degenerate),
            ("tol_psd", self.tol_psd),
            ("tol_nullspace", self.tol_nullspace),
            ("tol_real_eig", self.tol_real_eig),
            ("tol_slit", self.tol_slit),
            ("cluster_gap", self.cluster_gap),
            ("tol_residual", self.tol_residual),
            ("tol_certificate", self.tol_certificate),
        ];
        for (name, v) in fields {
            if !(v >= 0.0) {
                return Err(format!("{name} must be nonnegative, got {v}"));
            }
        }
        Ok(())
    }

    pub fn with_tol_psd(mut self, v: f64) -> Self {
        self.tol_psd = v;
        self
    }

    pub fn with_tol_structure(mut self, v: f64) -> Self {
        self.tol_structure = v;
        self
    }

    pub fn with_tol_real_eig(mut self, v: f64) -> Self {
        self.tol_real_eig = v;
        self
    }
}
