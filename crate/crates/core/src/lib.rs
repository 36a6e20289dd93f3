// Validation guards are written as `!(a < b)` on purpose: the negated form
// also rejects NaN, which `a >= b` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical toolkit for radial self-similar profiles of the semilinear heat
//! equation `u_t = Δu + u^p`.
//!
//! Self-similar ansätze reduce the PDE to second-order ODEs in the radial
//! variable `r` for a profile `w`:
//!
//! * **forward** (expanding similarity variables):
//!   `w'' + ((n−1)/r + r/2) w' + w/(p−1) + w^p = 0`,
//! * **backward** (shrinking similarity variables):
//!   `w'' + ((n−1)/r − r/2) w' − w/(p−1) + w^p = 0`,
//! * **steady** (no time dependence): `w'' + (n−1)/r w' + w^p = 0`.
//!
//! The library provides:
//!
//! * closed-form arithmetic for the critical exponents `p_F`, `p_sg`, `p_S`,
//!   `p_JL`, `p_JL*`, `p_L` and the derived constants `α`, `β`, `γ`, `L`, `κ`
//!   ([`exponents`]);
//! * the ODE right-hand sides in four coordinate frames, frame
//!   transformations, the explicit singular solution `U_*(r) = L r^{−α}`, and
//!   residual evaluation ([`ode`]);
//! * an adaptive Dormand–Prince integrator with series and indicial starts at
//!   the singular origin, zero-crossing / escape events, and energy and
//!   Pohozaev identity ledgers ([`integrate`]);
//! * shooting-method drivers: shot classification, boundary bisection, tail
//!   limits `ℓ(w)`, and a uniqueness probe around the singular solution
//!   ([`shooting`]);
//! * trajectory diagnostics: sign changes, intersection counts, monotonicity,
//!   growth bounds, origin limits ([`diagnostics`]);
//! * named verification suites aggregating all of the above into
//!   machine-readable pass/fail reports ([`verify`]);
//! * deterministic CSV/JSON serialization ([`io`]).
//!
//! All floating-point output uses shortest round-trip formatting and every
//! algorithm is deterministic, so identical inputs produce bit-identical
//! artifacts.

pub mod diagnostics;
pub mod error;
pub mod exponents;
pub mod integrate;
pub mod io;
pub mod numerics;
pub mod ode;
pub mod shooting;
pub mod verify;

pub use error::{Error, Result};
pub use exponents::{derived_constants, exponent_table, ExponentTable, Params};
pub use ode::{Frame, ProfileKind, ProfileState, Trajectory};
