//! Gauss decomposition of the generator matrices and the Drinfeld currents.

pub mod currents;
pub mod decomp;
pub mod matrix;
pub mod suite;

pub use decomp::{build_l, gauss_elimination, gauss_qdet_ratios, gauss_quasidet, AlgMatrix, AlgSeries, GaussData, Sign};
pub use matrix::{quasideterminant, SeriesMatrix};
