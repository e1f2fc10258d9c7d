//! Numerical laboratory for Gauss maps of submanifolds of space forms.
// NaN-rejecting guards are written as negated comparisons on purpose.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cayley_dickson;
pub mod error;
pub mod jets;
pub mod laplace;
pub mod linalg;
pub mod manifold;
pub mod sampling;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};

/// Double-precision aliases; the library itself is generic over `f32`/`f64`.
pub type Jet = jets::Jet3<f64>;
pub type Octonion = cayley_dickson::CDNumber<f64>;
pub type Immersion = manifold::Immersion<f64>;
pub type NormalSection = manifold::NormalSection<f64>;
pub type PointFrame = manifold::PointFrame<f64>;
pub type CatalogEntry = catalog::CatalogEntry<f64>;
pub type KillingField = laplace::KillingField<f64>;
