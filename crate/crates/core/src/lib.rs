//! Exact verification workbench for the toroidal Hecke algebra, the quantum
//! toroidal algebra and the duality functor `M ↦ M ⊗_H V^{⊗l}`.
//!
//! Every coefficient is exact ([`scalar::Scalar`]); a relation passes only
//! when its residual is identically zero.

pub mod hecke;
pub mod params;
pub mod qtoroidal;
pub mod config;
pub mod duality;
pub mod report;
pub mod scalar;
pub mod series;
pub mod sparse;
pub mod suite;

pub use params::Params;
pub use scalar::Scalar;
