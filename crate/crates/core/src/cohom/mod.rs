//! Group cohomology over F_ℓ in degrees 0, 1 and 2.

pub mod fox;
mod semidirect;
mod table;

pub use fox::{h1_dim_presented, h1_from_presentation, h1_semidirect_trivial_on_v, Presentation};
pub use semidirect::{semidirect_cohomology, SemidirectCohomology};
pub use table::{cohomology, h0_dim, h0_report, h1_dim, h1_report, h2_dim, h2_report, CocycleReport};
