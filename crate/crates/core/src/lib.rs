//! Numerical toolkit for rough statistical convergence of double sequences
//! in probabilistic normed spaces.
//!
//! The crate is organised bottom-up:
//!
//! - [`pns`]: t-norms, probabilistic norms, probabilistic balls and their
//!   sampled axiom checkers.
//! - [`sequences`]: double sequences built from a small catalog and
//!   combinators, plus subsequence index maps.
//! - [`density`]: exhaustive prefix-rectangle counting and three-valued
//!   double natural density verdicts.
//! - [`analysis`]: membership tests for rough limits, rough statistical
//!   limits and rough statistical cluster points, 1D set scanners, and a
//!   theorem-check suite.
//!
//! Every limit statement is rendered as a semidecision: verdicts are
//! three-valued and indeterminacy is reported rather than hidden.

pub mod analysis;
pub mod density;
mod error;
pub mod pns;
pub mod sequences;

pub use analysis::{
    Context, Grid, Interval, Membership, RoughParams, Sampled, SetEstimate, SetKind, TheoremReport, TheoremVerdict, Verdict,
};
pub use density::{DensityConfig, DensityEstimate, DensityVerdict, FamilyVerdict, PrefixSchedule};
pub use error::{Error, Result};
pub use pns::{AxiomReport, BaseNorm, Ball, PNormKind, ProbabilisticNorm, TNorm, Vector};
pub use sequences::{DoubleSequence, IndexMap};
