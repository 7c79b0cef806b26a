// SPDX-License-Identifier: MIT OR Apache-2.0

//! Modified Selberg integral of essentially bounded arithmetic functions.
//!
//! The integral
//!
//! ```text
//! J(N, h) = sum_{N < x <= 2N} | sum_{|n-x| <= h} (1 - |n-x|/h) f(n) - M_f(x, h) |^2
//! ```
//!
//! with `f = g * 1` and `M_f(x, h) = h * sum_{d <= x+h} g(d)/d` is computed two
//! independent ways: a prefix-sum sweep over the centers `x`, and a spectral
//! expansion over Farey fractions weighted by Ramanujan coefficients and the
//! Fejér kernel. The crate also carries the verification suites that check
//! every identity linking the two routes.
//!
//! Exact work runs over [`Rational`]; production sweeps run over `f64`. Both
//! go through the same generic code paths via [`Scalar`].

pub mod arith;
mod error;
pub mod farey;
pub mod integral;
pub mod par;
mod scalar;
pub mod short_sums;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use par::Execution;
pub use scalar::{pairwise_sum, Rational, Scalar};
