// SPDX-License-Identifier: Apache-2.0

//! Exact integer, modular and p-adic primitives.

mod factor;
pub mod modular;
mod quad;
mod sqrt;
mod symbols;

pub use factor::{factor_squarefree, factorize, is_prime, is_squarefree, squarefree_part, SquareFreeN};
pub use quad::{quad_jacobi, quad_root, QuadExpr};
pub use sqrt::sqrt_mod;
pub use symbols::{
    additive, additive_jacobi, coprime, hilbert, hilbert_additive, hilbert_approx, hilbert_rational, is_norm, jacobi,
    kronecker, legendre, relevant_places, Place,
};
