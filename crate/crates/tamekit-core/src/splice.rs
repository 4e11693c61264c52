//! Partition-of-unity splicing of locally defined complex structures: at
//! each sample point the weighted average A = sum rho_alpha J_alpha is
//! retracted to j(A), which stays (omega_F, T)-compatible and pushes forward
//! to j(sum rho_alpha T_* J_alpha).

use crate::calculus::{retraction_j, spectral_margin, NoRealEigMatrix};
use crate::error::{CoreError, Result};
use crate::forms::{is_slice_compatible, pushforward_structure, ComplexStructure, LinearSlice};
use crate::linalg::{fro_norm, RMat};
use crate::tolerance::Tolerance;
use std::collections::BTreeMap;

/// One sample point of a patch set: partition weights, the local structures
/// defined there, and the shared slice data (T, omega_F).
#[derive(Debug, Clone)]
pub struct PatchPoint {
    pub id: String,
    /// Partition-of-unity weights, keyed by patch name.
    pub weights: BTreeMap<String, f64>,
    /// Local structures; every patch with positive weight must be present.
    pub structures: BTreeMap<String, ComplexStructure>,
    pub slice: LinearSlice,
    /// Caller-certified regular point: pushforward agreement is not checked.
    pub regular: bool,
}

#[derive(Debug, Clone)]
pub struct LocalPatchSet {
    pub points: Vec<PatchPoint>,
}

/// Spliced output at one point.
#[derive(Debug, Clone)]
pub struct SplicedPoint {
    pub id: String,
    pub structure: ComplexStructure,
    /// || T j(A) - j(sum rho T_*J) T ||_F, the naturality residual.
    pub pushforward_residual: f64,
}

impl LocalPatchSet {
    /// Checks the patch-set invariants: weights nonnegative and summing to 1,
    /// every positively weighted structure present, dimensionally consistent,
    /// and (omega_F, T)-compatible at its point.
    pub fn validate(&self, tol: &Tolerance) -> Result<()> {
        for p in &self.points {
            let mut sum = 0.0;
            for (name, &w) in &p.weights {
                if !(w >= 0.0) {
                    return Err(CoreError::InvalidWeights {
                        point: p.id.clone(),
                        detail: format!("weight {name} = {w} is negative or NaN"),
                    });
                }
                sum += w;
                if w > 0.0 && !p.structures.contains_key(name) {
                    return Err(CoreError::InvalidWeights {
                        point: p.id.clone(),
                        detail: format!("patch {name} has positive weight but no structure"),
                    });
                }
            }
            if (sum - 1.0).abs() > 1e-9 * (p.weights.len().max(1) as f64) {
                return Err(CoreError::InvalidWeights {
                    point: p.id.clone(),
                    detail: format!("weights sum to {sum}, not 1"),
                });
            }
            for (name, s) in &p.structures {
                if s.dim() != p.slice.domain_dim() {
                    return Err(CoreError::DimensionMismatch {
                        context: format!(
                            "point {}: structure {name} has dim {} but slice domain is {}",
                            p.id,
                            s.dim(),
                            p.slice.domain_dim()
                        ),
                    });
                }
                let w = p.weights.get(name).copied().unwrap_or(0.0);
                if w > 0.0 && !is_slice_compatible(&p.slice, s, tol)? {
                    return Err(CoreError::Precondition(format!(
                        "point {}: structure {name} is not (omega_F, T)-compatible",
                        p.id
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Splice a validated patch set. Output order matches input order; each
/// point is independent of the others.
pub fn splice_partition(patches: &LocalPatchSet, tol: &Tolerance) -> Result<Vec<SplicedPoint>> {
    patches.validate(tol)?;
    patches.points.iter().map(|p| splice_point(p, tol)).collect()
}

fn splice_point(p: &PatchPoint, tol: &Tolerance) -> Result<SplicedPoint> {
    let m = p.slice.domain_dim();
    let active: Vec<(&String, f64, &ComplexStructure)> = p
        .weights
        .iter()
        .filter(|(_, &w)| w > 0.0)
        .map(|(name, &w)| (name, w, &p.structures[name]))
        .collect();

    // Pushforwards, on the shared Im T basis: needed both for the
    // wrapped-point agreement check and for the naturality comparison.
    let mut pushes: Vec<(f64, RMat)> = Vec::with_capacity(active.len());
    let mut basis: Option<RMat> = None;
    for (name, w, s) in &active {
        let pf = pushforward_structure(&p.slice, s, tol).map_err(|e| {
            CoreError::Precondition(format!("point {}: patch {}: {}", p.id, name, e))
        })?;
        if basis.is_none() {
            basis = Some(pf.basis.clone());
        }
        // Express every pushforward on the first patch's basis.
        let b = basis.as_ref().unwrap();
        let small = b.transpose() * pf.ambient() * b;
        pushes.push((*w, small));
    }
    if !p.regular {
        for i in 1..pushes.len() {
            let resid = fro_norm(&(&pushes[i].1 - &pushes[0].1));
            if resid > tol.tol_residual {
                return Err(CoreError::PushforwardMismatch { point: p.id.clone(), residual: resid });
            }
        }
    }

    // A = sum rho_alpha J_alpha, retracted onto the complex structures.
    let mut a = RMat::zeros(m, m);
    for (_, w, s) in &active {
        a += s.matrix() * *w;
    }
    let gate = NoRealEigMatrix::new(a.clone(), tol).map_err(|_| CoreError::SpliceRealEigenvalue {
        point: p.id.clone(),
        margin: spectral_margin(&a).unwrap_or(0.0),
    })?;
    let j = retraction_j(&gate, tol)?;

    if !is_slice_compatible(&p.slice, &j, tol)? {
        return Err(CoreError::Internal(format!(
            "point {}: spliced structure failed (omega_F, T)-compatibility",
            p.id
        )));
    }

    // Naturality: T j(A) = j(sum rho T_*J) T.
    let b = basis.expect("at least one active patch");
    let r = b.ncols();
    let mut bsum = RMat::zeros(r, r);
    for (w, small) in &pushes {
        bsum += small * *w;
    }
    let bgate = NoRealEigMatrix::new(bsum, tol)?;
    let jb = retraction_j(&bgate, tol)?;
    let lhs = p.slice.map() * j.matrix();
    let rhs = (&b * jb.matrix() * b.transpose()) * p.slice.map();
    let pushforward_residual = fro_norm(&(lhs - rhs));
    if pushforward_residual > tol.tol_residual * fro_norm(p.slice.map()).max(1.0) {
        return Err(CoreError::Internal(format!(
            "point {}: splice naturality residual {pushforward_residual:.3e}",
            p.id
        )));
    }

    Ok(SplicedPoint { id: p.id.clone(), structure: j, pushforward_residual })
}
