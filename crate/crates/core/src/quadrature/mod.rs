//! Validated Gauss-Legendre quadrature.
//!
//! [`gl_rule`] produces certified nodes and weights; [`petras_integrate`]
//! picks a degree per segment from magnitude bounds on Bernstein ellipses
//! and bisects when no degree below the cap suffices.

mod gauss;
mod petras;

pub use gauss::{gl_rule, QuadRule};
pub use petras::{ellipse_error_bound, petras_integrate, Integrand, Limits, QuadResult, Segment};
