//! Join-specifications on finite posets: ideal completions, the closure
//! operators `Γ_U` and `Υ_U`, frame-generation tests, the lattices of
//! frame-generating specifications, and lifts of poset maps.

mod bits;
pub mod closure;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod frames;
pub mod ideals;
pub mod joinspec;
pub mod lattice;
pub mod morphisms;
pub mod oracle;
#[cfg(feature = "mutants")]
pub mod mutants;
pub mod poset;
pub mod random;
pub mod speclattices;
pub mod verify;

pub use closure::ClosureRepr;
pub use error::{Error, Result};
pub use ideals::IdealLattice;
pub use joinspec::JoinSpec;
pub use frames::{FrameGenReport, Method, Witness};
pub use lattice::{FiniteLattice, FiniteOrder, TableLattice};
pub use morphisms::{LatticeMap, PosetMap};
pub use poset::{ElemSet, Limits, Poset, PosetId};
