//! Exact model checking of continuous-time Markov chain distribution
//! trajectories against continuous linear logic (CLL) path formulas.
//!
//! The pipeline:
//!
//! 1. [`ctmc`] validates a rate matrix and initial distribution and turns
//!    each state's trajectory coordinate into an exact
//!    polynomial-exponential function (PEF) via a symbolic Jordan
//!    decomposition over algebraic numbers ([`algebra`]).
//! 2. [`logic`] parses and normalizes CLL path formulas.
//! 3. [`pef`] isolates the real roots of PEFs exactly, which yields the
//!    maximal time intervals on which each atomic proposition holds.
//! 4. [`checker`] propagates those intervals through the until-chain of
//!    the formula and produces a verdict with a witness or refutation.
//!
//! All arithmetic on the decision path is exact (arbitrary-precision
//! rationals and real/complex algebraic numbers); floating point is used
//! only for diagnostics and the simulation oracle.

pub mod algebra;
pub mod checker;
pub mod ctmc;
pub mod logic;
pub mod oracle;
pub mod pef;
pub mod rational;

mod croots;
mod factor;
mod mvpoly;
mod qpoly;

pub use qpoly::QPoly;
