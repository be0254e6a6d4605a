//! Deciding perturbation-tolerant structural controllability (PTSC).
//!
//! A structured pair (A̅, B̅) of {0,*} patterns together with a perturbation
//! pattern F̅ poses the question: can arbitrary complex values placed on the
//! F̅ entries ever destroy controllability of an (almost-all) realization?
//! If no perturbation can, the pair is PTSC w.r.t. F̅; if some perturbation
//! generically can, it is PSSC.
//!
//! The crate provides:
//! - [`pattern`]: the {0,*} pattern model and its algebra;
//! - [`bigraph`]: matchings, weighted matchings, SCCs, DM-decomposition;
//! - [`sctrl`]: structural controllability tests;
//! - [`ptsc1`]: the exact single-input decision procedure;
//! - [`gcrit`]: equivalent graph-theoretic criteria and a cactus-based
//!   sufficient test;
//! - [`mptsc`]: sufficient PSSC certificates for multi-input systems;
//! - [`oracle`]: exact-arithmetic cross-checks and numeric uncontrollability
//!   witnesses;
//! - [`scrp`]: controllability-radius feasibility reports and minimal
//!   vulnerable-edge-set search.

pub mod bigraph;
pub mod error;
pub mod gcrit;
pub mod mptsc;
pub mod oracle;
pub mod pattern;
pub mod ptsc1;
pub mod scrp;
pub mod sctrl;

pub use error::{PtscError, Result};
pub use pattern::{Pattern, PerturbStructure, SystemPattern};
pub use ptsc1::Verdict;
