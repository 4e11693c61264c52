//! Exploration harness for the taming question on simplex interpolants:
//! seeded random and descent campaigns over omega-tame vertex structures,
//! with extended-precision re-verification of any negative probe before it
//! may be reported as a candidate.

pub mod campaign;
pub mod dd;
pub mod sample;
pub mod xp;

pub use campaign::{
    run_campaign, verify_candidate, CampaignReport, CandidateRecord, DescentParams,
    SearchCampaign, SearchMode, TrialRecord, Verdict, VertexKind, XpVerification,
};
pub use sample::{sample_compatible_structure, sample_tame_structure, trial_rng};

/// Errors from campaign configuration and sampling.
#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("rejection budget exhausted after {attempts} attempts (margin floor {margin_floor:.3e})")]
    RejectionBudgetExhausted { attempts: u64, margin_floor: f64 },

    #[error("invalid campaign config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Core(#[from] tamekit_core::CoreError),
}
