//! Generalized Stieltjes constants `γₙ(v)` and the Hurwitz zeta function
//! `ζ(s, v)` with rigorous ball-arithmetic enclosures.
//!
//! The main entry points are [`stieltjes`] and [`hurwitz_zeta`].

pub mod asymptotics;
pub mod balls;
pub mod contour;
pub mod driver;
pub mod error;
pub mod integrand;
pub mod quadrature;

pub use balls::{ComplexBall, DecimalBall, Mag, RealBall, ScaledComplex};
pub use driver::{hurwitz_zeta, stieltjes, Options, StieltjesRequest, StieltjesResult, ZetaResult};
pub use error::Error;
