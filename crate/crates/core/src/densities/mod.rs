//! Local densities and the leading constants.

pub mod montecarlo;
pub mod padic;
pub mod real;
pub mod report;
