//! Rearrangement-invariant function spaces on `(0, 1)`.
//!
//! Norms, rearrangements, Hardy-type operators, fundamental functions and the
//! Orlicz optimality machinery for Sobolev embeddings on Maz'ya domains.

// Negated float comparisons reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod funcrep;
pub mod mazya;
pub mod operators;
pub mod optimality;
pub mod rearrange;
pub mod spaces;
pub mod trend;

pub use error::{Error, Result};

/// Library version, recorded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use funcrep::{default_grid, make_log_grid, Atom, Func, Grid, GridFn, PowLogFn, Star, StepFn};
pub use spaces::{FundamentalFn, SpaceSpec, YoungFn};
