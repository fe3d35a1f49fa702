//! Finite groups, Γ-actions and homomorphisms.

pub mod catalog;
mod finite;
mod gamma;
mod hom;
pub mod iso;
pub mod lattice;

pub use finite::FiniteGroup;
pub(crate) use finite::lcm;
pub use gamma::{GammaGroup, SemidirectProduct};
pub use hom::{homomorphisms, GroupHom};
pub use iso::{fingerprint, gamma_fingerprint, is_gamma_isomorphic, is_isomorphic, Fingerprint};
pub use lattice::minimal_normal_subgroups;
