//! Isotopy invariants of oriented links from enhanced generalized
//! Yang-Baxter operators.
//!
//! The numeric core is generic over the real scalar `T: Real` (`f32` or
//! `f64`); the aliases below fix `T = f64`, which is what the catalog
//! tolerances are calibrated for.

pub mod braid;
pub mod catalog;
pub mod enhance;
pub mod error;
pub mod invariant;
pub mod scalar;
pub mod tensorops;

pub use braid::{standard_catalog, standard_link, BraidWord, NamedLink};
pub use catalog::{GybOperator, GybType, OperatorId};
pub use enhance::{EgybOperator, EnhancementReport, ReportConfig, Verdict};
pub use error::{Error, Result};
pub use invariant::{InvariantResult, Limits, Normalization, RepContext};
pub use scalar::{Real, C};
pub use tensorops::{ComplexMatrix, TensorShape};

pub type Complex64 = num_complex::Complex<f64>;
pub type Matrix = ComplexMatrix<f64>;
pub type Operator = GybOperator<f64>;
pub type Enhancement = EgybOperator<f64>;
pub type Invariant = InvariantResult<f64>;
pub type Report = EnhancementReport<f64>;

pub type Matrix32 = ComplexMatrix<f32>;
pub type Operator32 = GybOperator<f32>;
pub type Enhancement32 = EgybOperator<f32>;
