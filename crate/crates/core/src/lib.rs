//! Exact-arithmetic modelling of pure resolutions of twisted line-bundle sums
//! on projective n-space.
//!
//! The crate splits a resolution
//! `0 -> O(-d_{n+1})^{b_{n+1}} -> ... -> O(-d_1)^{b_1} -> O^{b_0} -> 0`
//! into short exact sequences, computes cohomology of the resulting syzygy
//! bundles (and their duals, twists and endomorphism bundles) by chasing the
//! induced long exact sequences with explicit Known / Interval / Unknown
//! determinacy tracking, and decides simplicity and exceptionality with
//! auditable reason chains. All arithmetic is exact; there is no floating
//! point anywhere.
//!
//! Entry points:
//! - [`resolution::PureResolution`] and [`resolution::hk_betti`] for the data
//!   model,
//! - [`catalog`] for the classical families (Koszul, compressed Gorenstein,
//!   Eagon-Northcott),
//! - [`engine::Engine`] for cohomology tables and homological dimension,
//! - [`criteria`] for the simplicity / exceptionality verdicts.

pub mod arith;
pub mod catalog;
pub mod chase;
pub mod criteria;
pub mod engine;
pub mod node;
pub mod resolution;

pub use chase::{chase_ses, ChaseError, CohomDim};
pub use node::{euler_char, BaseNode, NodeError, SheafNode};
pub use resolution::{
    hk_betti, BettiVector, DegreeSequence, PureResolution, ResolutionError, Side, SyzygyId,
};
