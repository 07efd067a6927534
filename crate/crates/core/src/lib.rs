//! Numerical toolkit for the elliptic Askey-Wilson divided-difference
//! operator and the Taylor expansion it induces in well-poised bases.
//!
//! The crate is organised bottom-up:
//!
//! - [`qtheta`]: modified Jacobi theta functions, q- and q,p-shifted
//!   factorials and the fixed branch of `q^{1/2}`.
//! - [`hyperseries`]: basic `phi` series and terminating elliptic `E`/`V`
//!   series, plus the classical structural predicates.
//! - [`operator`]: the Askey-Wilson operator, its pole-parameter and elliptic
//!   generalisations, and their iterates acting on black-box functions.
//! - [`expansion`]: elliptic Taylor coefficients, the well-poised basis,
//!   membership checks and an independent collocation solver.
//! - [`identities`]: samplers and verifiers for the summation and
//!   transformation formulas that follow from the expansion.

// `!(x <= tol)` comparisons are deliberate: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cnum;
pub mod error;
pub mod expansion;
pub mod hyperseries;
pub mod identities;
pub mod operator;
pub mod qtheta;

pub use cnum::C64;
pub use error::{Error, Result};
pub use qtheta::EllipticParams;
