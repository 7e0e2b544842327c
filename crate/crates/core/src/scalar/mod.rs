//! Exact scalar arithmetic: rationals, truncated `h`-polynomials, one- and
//! two-variable series, and exact rational functions.

mod biseries;
mod hpoly;
mod mpoly;
mod rational;
mod ratfunc;
mod ring;
mod series;

pub use biseries::{delta_series, expand_ratio_function, region_expand, BiRegionSeries, BiSeries, Region, Window};
pub use hpoly::HPoly;
pub use mpoly::{MPoly, MPolyRing};
pub use rational::Rational;
pub use ratfunc::{RatFunc, RatRing, UPoly, XPoly};
pub use ring::{HRing, QRing, Ring};
pub use series::{series_arith, Expansion, Laurent, Series, SeriesOp, SeriesRing, TruncatedSeries};
