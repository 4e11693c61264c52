use num_complex::Complex64;

/// Errors shared by the form predicates, the functional calculus, and the
/// interpolation machinery.
#[derive(Debug, thiserror::Error)]
pub enum CoreError {
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("degenerate form: |det| = {det:.6e} <= {tol:.1e}")]
    DegenerateForm { det: f64, tol: f64 },

    #[error("matrix is not skew-symmetric: residual {residual:.6e} > {tol:.1e}")]
    NotSkew { residual: f64, tol: f64 },

    #[error("not a complex structure: ||J^2 + I|| = {residual:.6e} > {tol:.1e}")]
    NotComplexStructure { residual: f64, tol: f64 },

    #[error("dimension must be even and positive, got {0}")]
    OddDimension(usize),

    #[error("eigenvalue {0} lies in the slit (-inf, 0]")]
    EigenvalueInSlit(Complex64),

    #[error("real eigenvalue within tolerance: spectral margin {margin:.6e} <= {tol:.1e}")]
    RealEigenvalue { margin: f64, tol: f64 },

    #[error("Schur factorization failed: {0}")]
    Schur(#[from] crate::linalg::schur::SchurError),

    #[error("power series on eigenvalue cluster did not converge (cluster size {cluster}, {terms} terms)")]
    ClusterSeriesDiverged { cluster: usize, terms: usize },

    #[error("imaginary residual {residual:.6e} exceeds {tol:.1e}; refusing to truncate to a real matrix")]
    ImaginaryResidual { residual: f64, tol: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("simplex point invalid: {0}")]
    InvalidSimplexPoint(String),

    #[error("patch weights invalid at point {point}: {detail}")]
    InvalidWeights { point: String, detail: String },

    #[error("splice failed at point {point}: averaged operator has a (near-)real eigenvalue (margin {margin:.6e}); the point behaves like an unwrapped critical point")]
    SpliceRealEigenvalue { point: String, margin: f64 },

    #[error("pushforward structures disagree at point {point}: residual {residual:.6e} (point not certified regular)")]
    PushforwardMismatch { point: String, residual: f64 },

    #[error("line certificate needs dim >= 4, got {0}")]
    CertificateDimension(usize),

    #[error("internal soundness violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
