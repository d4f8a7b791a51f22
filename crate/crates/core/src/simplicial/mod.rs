//! Simplicial complexes, local systems and twisted cochains.

mod cochains;
mod complex;
mod group;
mod local_system;

pub use cochains::{
    identity_section, twisted_cochain_complex, unit_cochain, BilinearMap, CupProduct, Pairing,
    TwistedCochains,
};
pub use complex::{Simplex, SimplicialComplex};
pub use group::{monodromy, system_from_representation, EdgePathGroup, Letter};
pub use local_system::LocalSystem;
pub(crate) use local_system::graded_blocks;
