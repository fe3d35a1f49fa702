//! Finite group machinery for Γ-group presentations: cohomology over F_ℓ,
//! multiplicities of simple modules in presentation kernels, varieties and
//! heights, and the random relation model.

pub mod arith;
pub mod bitset;
pub mod cohom;
mod error;
pub mod flmod;
pub mod group;
pub mod io;
pub mod presentations;
pub mod randmodel;
pub mod selftest;
pub mod varieties;
mod limits;

pub use bitset::ElemSet;
pub use error::{Error, Result};
pub use group::{FiniteGroup, GammaGroup, GroupHom, SemidirectProduct};
pub use flmod::{FpModule, Matrix};
pub use limits::Limits;
