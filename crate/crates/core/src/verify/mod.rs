//! Numerical checks of the identities and inequalities behind the H^2
//! theory: time-derivative identities, bad-term cancellation, Gronwall
//! envelopes, fractional-calculus inequalities and small-data trapping.

pub mod cancellation;
pub mod cutoff_props;
pub mod families;
pub mod gronwall;
pub mod growth;
pub mod inequalities;
pub mod lemmas;
pub mod report;
pub mod timederiv;
pub mod trapping;

pub use report::{ProbeReport, ResidualStats, Verdict};
