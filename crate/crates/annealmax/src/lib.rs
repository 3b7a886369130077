//! Simulated-annealing maximization of nonnegative (possibly non-monotone)
//! submodular set functions, unconstrained and under a matroid independence
//! constraint, together with the exact machinery needed to check the runs:
//! a brute-force oracle, executable property checks for the analysis
//! inequalities, merge rounding of fractional solutions, and symmetry-gap
//! calculators for the hard instances.
//!
//! The crate is organized around a handful of small value types:
//! [`setfn::SetFunctionOracle`] evaluates `f(S)` on bitmask subsets of a
//! ground set of at most 30 elements, [`multilinear::Evaluator`] evaluates
//! the multilinear extension `F` and its derivatives in closed-form, exact,
//! or Monte-Carlo mode, and [`matroid::ConvexCombination`] carries the
//! explicit `x = (1/N) Σ 1_{I_ℓ}` representation used by the constrained
//! algorithm.
//!
//! The `annealmax` binary exposes the batch front end (`solve`, `verify`,
//! `gap`, `round`, `reproduce`, `bench`, `eval`); see the README.

pub mod anneal;
pub mod anneal_matroid;
pub mod cli;
pub mod error;
pub mod hardness;
pub mod io;
pub mod matroid;
pub mod multilinear;
pub mod oracle;
pub mod rounding;
pub mod setfn;

pub use error::{Error, Result};
