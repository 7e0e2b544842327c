//! Central elements: quantum minors and determinants, the series `ℓ_k(u)` at
//! the critical level, and the vacuum module.

pub mod minors;

pub use minors::{qdet, quantum_minor, quantum_minor_columns, QuantumMinorSpec};
pub mod ell;

pub use ell::{CentralSeries, EllBuilder, Route};
pub mod vacuum;

pub use vacuum::{check_vacuum_invariants, vacuum_act, VacuumVector};
pub mod suite;

pub use suite::CenterParams;
