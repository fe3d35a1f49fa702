//! Linear algebra over F_ℓ and F_ℓ[G]-modules.

pub mod fp;
pub mod meataxe;
mod module;
pub mod poly;

pub use fp::{Matrix, RowReducer};
pub use meataxe::{composition_factors, is_simple, simple_isomorphic, simple_modules};
pub use module::{endomorphism_dim, hom_dim, FpModule};
pub(crate) use module::{echelon, hom_dim_raw};
