//! Generalized Salem functions over probability-weighted digit expansions.
//!
//! A number in `[0,1]` is carried as a digit string and decoded through a
//! schedule of probability vectors; the cumulative weights of one vector act
//! as the sub-interval endpoints at each position. On top of that
//! representation this crate builds the shift-operator calculus (deleting
//! digits at arbitrary positions), index-sequence permutations, the
//! generalized Salem function `G` with two independent evaluators, its
//! closed-form Lebesgue integral with a quadrature cross-check, continuity
//! and monotonicity classification, and a sampler for the random variable
//! whose distribution function `G` is.
//!
//! The crate is `no_std` (with `alloc`); everything is pure and immutable
//! after construction, so all operations are safe to call concurrently.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod gensalem;
pub mod numrep;
pub mod permspec;
pub mod rvdist;
pub mod shiftops;

mod fx;
mod rng;

pub use gensalem::{ContinuityVerdict, DiscontinuityClass, GenSalemSpec, Monotonicity};
pub use numrep::{
    CoefficientVector, Cylinder, DigitString, ProbabilitySchedule, ProbabilityVector,
    Rationality, Tail,
};
pub use permspec::{DeviationClass, IndexSequence};
pub use rvdist::SampleReport;
pub use shiftops::DeletionPlan;

use core::fmt;

/// A real value together with a rigorous truncation-remainder bound.
///
/// The exact quantity the producing operation approximates lies in
/// `[value - bound, value + bound]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub bound: f64,
}

impl EvalResult {
    pub fn exact(value: f64) -> Self {
        EvalResult { value, bound: 0.0 }
    }
}

/// Errors reported by constructors and operations in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Radix must be at least 2.
    InvalidRadix(u32),
    /// A probability weight was not strictly positive (index, value).
    NonPositiveWeight(usize, f64),
    /// Probability weights do not sum to 1 within the validation tolerance.
    WeightSumMismatch(f64),
    /// A coefficient fell outside the open interval (-1, 1) (index, value).
    CoefficientOutOfRange(usize, f64),
    /// A digit was not in `0..q` (position, digit).
    DigitOutOfRange(usize, u32),
    /// A periodic tail pattern or schedule list was empty.
    EmptyPeriod,
    /// Schedule members or paired vectors disagree on the radix.
    RadixMismatch { expected: u32, found: u32 },
    /// A permutation table was not a permutation of `1..=len`.
    NotAPermutation,
    /// A deletion target appeared twice.
    DuplicateTarget(u32),
    /// The argument lies outside `[0, 1]`.
    OutOfDomain(f64),
    /// The supplied value disagrees with the decoded digit string.
    InconsistentValue { supplied: f64, decoded: f64 },
    /// The coefficient vector is not a probability vector, so the
    /// distributional interpretation is unavailable.
    NotDistributional,
    /// The requested diagnostic is only defined for the identity index
    /// sequence.
    UnsupportedPermutation,
    /// The (R, index-sequence) combination falls outside the classified
    /// parameter region.
    UnclassifiedMonotonicity,
    /// A sample or grid size was zero.
    EmptyInput,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidRadix(q) => write!(f, "radix must be >= 2, got {q}"),
            Error::NonPositiveWeight(j, v) => {
                write!(f, "weight p[{j}] = {v} must be strictly positive")
            }
            Error::WeightSumMismatch(s) => {
                write!(f, "weights must sum to 1 within 1e-12, got {s}")
            }
            Error::CoefficientOutOfRange(j, v) => {
                write!(f, "coefficient r[{j}] = {v} must lie in (-1, 1)")
            }
            Error::DigitOutOfRange(k, d) => {
                write!(f, "digit {d} at position {k} is outside the radix")
            }
            Error::EmptyPeriod => write!(f, "periodic pattern must be nonempty"),
            Error::RadixMismatch { expected, found } => {
                write!(f, "radix mismatch: expected {expected}, found {found}")
            }
            Error::NotAPermutation => write!(f, "table is not a permutation"),
            Error::DuplicateTarget(n) => write!(f, "duplicate deletion target {n}"),
            Error::OutOfDomain(x) => write!(f, "argument {x} outside [0, 1]"),
            Error::InconsistentValue { supplied, decoded } => write!(
                f,
                "supplied value {supplied} disagrees with decoded value {decoded}"
            ),
            Error::NotDistributional => {
                write!(f, "coefficients are not a probability vector")
            }
            Error::UnsupportedPermutation => {
                write!(f, "operation requires the identity index sequence")
            }
            Error::UnclassifiedMonotonicity => {
                write!(f, "parameter combination not covered by the classification")
            }
            Error::EmptyInput => write!(f, "input must be nonempty"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
