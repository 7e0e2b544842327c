//! The RTT presentation of `DY_h(gl_n)` in modes and its PBW normal form.
//!
//! `L⁺(u) = I - h Σ_{r≥0} l^{(r)} u^{-r-1}`, `L⁻(u) = I + h Σ_{s≥1} l^{(-s)} u^{s-1}`.

pub mod checks;
pub mod config;
pub mod element;
pub mod engine;
pub mod generator;
pub mod rules;
pub mod table;

pub use config::{AlgebraConfig, Normalization};
pub use element::Element;
pub use engine::Algebra;
pub use generator::{Gen, Monomial};
pub use table::RelationTable;
