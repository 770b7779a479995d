//! Checks on solutions: sign changes, zero counts, convergence sweeps and identities.
pub mod contact;
pub mod fit;
pub mod identity;
pub mod sign_changes;
pub mod sweep;
pub mod winding;

pub use contact::{chain_contact, contact_order, ChainContact, ContactOrder};
pub use fit::{least_squares, Fit};
pub use identity::identity_check;
pub use sign_changes::{count_sign_changes, form_sign_changes, reduction_chain, ChainStep, SignChanges};
pub use sweep::{
    convergence_sweep, exterior_audits, predicted_kappa, AuditStatus, ConvergenceReport, ExteriorAudit, GridPoint,
    RateFit, SweepFailure, SweepRow, SweepSpec, TargetFlags,
};
pub use winding::{default_contour, exterior_zero_count, interior_zero_count, Circle};
