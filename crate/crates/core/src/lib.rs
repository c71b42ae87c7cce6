//! Debt-portfolio criticality toolkit.
//!
//! Normalizes raw debt books onto an integer duration grid, fits the
//! two-parameter occupation model to the observed aggregates, and derives
//! solvency diagnostics from it: asymptotic closed forms for the aggregate
//! debt and payoff, critical-debt estimates along independent entropy and
//! chemical-potential routes, fractional-dimension generalizations, and
//! two-block maturity-mix approximations.
//!
//! The numeric layer underneath (compensated summation, bracketing and
//! damped fixed-point solvers, adaptive quadrature, Γ and ζ) is exposed for
//! reuse, but the intended entry points are [`portfolio::normalize`],
//! [`parastat::fit_params`], and the `critical` / `fractional` / `maturity`
//! report functions.

pub mod asymptotics;
pub mod critical;
pub mod error;
pub mod fractional;
pub mod maturity;
pub mod parastat;
pub mod portfolio;
pub mod quad;
pub mod solve;
pub mod special;
pub mod sum;

pub use error::{Error, Result, Warned, Warning};
pub use solve::SolveConfig;
