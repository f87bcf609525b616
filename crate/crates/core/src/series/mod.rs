//! Truncated q-series and the constructions that feed every other module.

pub mod eta;
pub mod qseries;
pub mod theta;

pub use eta::{eta_quotient, EtaSpec};
pub use qseries::{Offset, QSeries};
pub use theta::unary_theta;
