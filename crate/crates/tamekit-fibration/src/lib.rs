//! Sampled fibrations and the taming-parameter assembly omega_t =
//! t eta + f*omega_Y: per-sample taming intervals, the global threshold,
//! wrapped-point checks, the radial base-locus model, and discrete
//! closedness checks.

pub mod closedness;
pub mod generators;
pub mod radial;
pub mod sample;
pub mod taming;
pub mod wrapped;

pub use closedness::discrete_closedness;
pub use generators::{
    generate_product_bundle, generate_projectivization, ProductBundleParams,
    ProjectivizationParams,
};
pub use radial::{radial_change_check, radial_eta};
pub use sample::{KernelCloud, PointSample, SampledFibration};
pub use taming::{
    assemble_omega_t, global_taming_threshold, kernel_convexity_check, taming_interval,
    AssembledForm,
};
pub use wrapped::wrapped_check;

#[derive(Debug, thiserror::Error)]
pub enum FibrationError {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("point too close to the base locus: |z| = {r:.3e} <= {tol:.1e}")]
    PointTooCloseToOrigin { r: f64, tol: f64 },

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("sample {id}: invariant violated: {detail}")]
    SampleInvariant { id: String, detail: String },

    #[error("plane {plane} is not contained in ker T (residual {residual:.3e})")]
    PlaneOutsideKernel { plane: usize, residual: f64 },

    #[error("sample {id}: no taming window found; eta fails to tame J on the kernel")]
    NoTamingWindow { id: String },

    #[error("t = {t} outside the admissible range (0, {limit})")]
    TOutOfRange { t: f64, limit: f64 },

    #[error("at sample {id}: {source}")]
    AtSample { id: String, source: Box<FibrationError> },

    #[error(transparent)]
    Core(#[from] tamekit_core::CoreError),
}
