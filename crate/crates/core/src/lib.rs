//! Exact solver toolkit for Boolean surjective valued CSPs.
//!
//! A valued CSP instance is a weighted sum of extended-rational-valued
//! constraints over {0,1}-variables; in the surjective variant the all-zero
//! and all-one assignments are disqualified. This crate provides
//!
//! - exact extended-rational values and the weighted-relation algebra
//!   ([`value`], [`relation`], [`instance`]),
//! - structural predicates and the tractability classifier ([`classify`]),
//! - a weighted global min-cut engine with budgeted cut enumeration
//!   ([`mincut`]),
//! - the generalised min-cut engine (cut function plus a superadditive
//!   oracle) with optimal and near-optimal solution enumeration ([`gmc`]),
//! - constructions approximating EDS relations and whole instances by
//!   generalised min-cut instances ([`edsapprox`]),
//! - end-to-end surjective solving, optimal-solution enumeration and the
//!   surjective fix-up for maximisation ([`solver`]),
//! - instance transformers and problem encoders ([`gadgets`]),
//! - exhaustive reference implementations used as test ground truth
//!   ([`oracle`]).
//!
//! Everything is exact: no floating point anywhere.

pub mod boolop;
pub mod classify;
pub mod edsapprox;
mod error;
pub mod gadgets;
pub mod gmc;
pub mod instance;
pub mod mincut;
pub mod oracle;
pub mod relation;
pub mod solver;
pub mod subset;
pub mod value;

pub use error::Error;
pub type Result<T> = std::result::Result<T, Error>;
