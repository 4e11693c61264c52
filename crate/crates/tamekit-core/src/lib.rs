//! Linear-algebraic toolkit for taming and compatibility of almost-complex
//! structures: predicates on skew forms and complex structures, principal
//! matrix powers on the slit domain, the canonical retraction
//! j(B) = B (-B^2)^{-1/2}, simplex interpolation of complex structures, and
//! partition-of-unity splicing.

pub mod calculus;
pub mod error;
pub mod forms;
pub mod interp;
pub mod linalg;
pub mod matrix;
pub mod splice;
pub mod tolerance;

pub use calculus::{principal_power, retraction_j, spectral_margin, NoRealEigMatrix, SlitMatrix};
pub use error::{CoreError, Result};
pub use forms::{
    is_compatible, is_slice_compatible, is_slice_tame, is_tame, orientation_sign_form,
    orientation_sign_structure, pullback_form, pushforward_structure, ComplexStructure,
    LinearSlice, Pushforward, SkewForm,
};
pub use interp::{interpolate_simplex, shared_lines_certificate, taming_probe, SimplexPoint};
pub use linalg::pfaffian::{pfaffian, pfaffian_sign};
pub use splice::{splice_partition, LocalPatchSet, PatchPoint, SplicedPoint};
pub use tolerance::Tolerance;
