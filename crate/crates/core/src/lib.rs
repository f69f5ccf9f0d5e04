//! Basic (q-analogue) Humbert functions Φ₁, Φ₂, Φ₃, the q-calculus they are
//! built from, and a residual audit of the identities they satisfy.

pub mod cli;
pub mod error;
pub mod humbert;
pub mod identities;
pub mod qcore;
pub mod qops;
pub mod series;

pub use error::{QError, QResult};
pub use humbert::{ClassicalParams, HumbertKind, HumbertParams};
pub use qcore::{EvalResult, QContext, QPower, SeriesConfig};
