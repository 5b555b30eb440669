//! Coefficient classes and smoothness inequalities for trigonometric series.
//!
//! The crate is organised bottom-up:
//!
//! * [`seqclass`] represents nonnegative coefficient sequences and measures
//!   their membership constants for the RBVS, CQMS, GBVS and NBVS classes.
//! * [`discrete_ineq`] evaluates both sides of the purely discrete inequalities
//!   (Hardy-type bounds, tail-variation bounds, block-mean bounds) exactly.
//! * [`trigseries`] evaluates cosine/sine polynomials and computes `L^p`
//!   norms, moduli of smoothness, best approximations and weighted
//!   smoothness integrals.
//! * [`theorems`] runs ladder sweeps that compare coefficient-side and
//!   function-side quantities and classify the ratio trends.
//! * [`cli`] and [`report`] drive everything from the command line and emit
//!   CSV/JSON reports.
//!
//! Parallel loops go through [`par`], which uses rayon when the `parallel`
//! feature is enabled (the default) and plain iterators otherwise.

pub mod cli;
pub mod config;
pub mod discrete_ineq;
mod error;
pub mod par;
pub mod report;
pub mod seqclass;
pub mod sum;
pub mod theorems;
pub mod trigseries;
pub mod verdict;

pub use error::{Error, Result};
pub use seqclass::{ClassReport, CoeffSeq, SeqFamily, Tail};
pub use trigseries::{Grid, Parity, TrigPoly};
