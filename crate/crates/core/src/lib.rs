//! a-points of the derivatives of the Riemann zeta function.
//!
//! The crate evaluates ζ^(k)(s) across the complex plane, locates the roots
//! of ζ^(k)(s) = a with argument-principle certificates, and compares the
//! located points with the counting, exponential-sum and density
//! asymptotics they are expected to follow.

pub mod acceptance;
pub mod asymptotics;
pub mod census;
pub mod coefficients;
pub mod evaluator;
pub mod quadrature;
pub mod regions;
pub mod report;
pub mod rootscan;
pub mod sweep;
pub mod tunables;
