//! Kernels of the linearized binomials x + a·x^(q^s) + b·x^(q^(n+s)) over
//! F_(q^2n), checked constructively at desk scale.
//!
//! * [`gf`]: finite field towers with reproducible representations.
//! * [`linpoly`]: q-polynomials as F_q-linear maps (kernels, adjoints,
//!   weight spectra, scatteredness).
//! * [`binomial`]: kernel witnesses built from an element ξ, their transport
//!   along norm classes, and the algebraic condition system behind them.
//! * [`curves`]: point counts on the auxiliary plane curves and the
//!   round trip from curve points to kernel witnesses.
//! * [`rmcode`]: the rank-metric codes {a·f(x) + b·x}.
//! * [`commands`]: the batch commands behind the `linkern` binary.

pub mod binomial;
pub mod commands;
pub mod curves;
pub mod gf;
pub mod linpoly;
pub mod par;
pub mod rmcode;

pub use gf::{Elem, Field, GfError, Tower};
pub use linpoly::{QPolynomial, WeightSpectrum};
