//! Polygon-complex model of the fiber surface, its double, the monodromy,
//! and curve systems on the doubled surface.

pub mod chart;
pub mod complex;
pub mod curves;
pub mod spin;
