// SPDX-License-Identifier: Apache-2.0

//! Arithmetic of the congruent number curves `y^2 = x^3 - n^2 x` for
//! square-free `n` whose odd prime factors are all `±1 mod 8`.
//!
//! The crate decides when such an `n` is non-congruent with a 2-primary
//! Shafarevich-Tate group isomorphic to `(Z/2Z)^2`, using Monsky matrices for
//! the pure 2-Selmer rank, Rédei matrices for 4-ranks of narrow class groups,
//! and the closed form of the Cassels pairing. Every formula has an
//! independent brute-force counterpart in [`oracles`].

pub mod arith;
pub mod cassels;
pub mod criteria;
pub mod error;
pub mod f2linalg;
pub mod matrices;
pub mod oracles;
pub mod reps;
pub mod tame;
pub mod verify;

pub use arith::{Place, QuadExpr, SquareFreeN};
pub use criteria::{classify, Verdict, VerdictKind};
pub use error::{Error, Result};
pub use f2linalg::{F2Matrix, F2Vector};
