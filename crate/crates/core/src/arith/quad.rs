// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use super::factor::factorize;
use super::sqrt::sqrt_mod;
use super::symbols::legendre;
use crate::error::{Error, Result};

/// `x + y √r` with `r ∈ {2, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadExpr {
    pub x: i128,
    pub y: i128,
    pub r: i128,
}

impl QuadExpr {
    pub fn new(x: i128, y: i128, r: i128) -> Result<Self> {
        if r != 2 && r != -1 {
            return Err(Error::InvalidArgument(format!("radicand must be 2 or -1, got {r}")));
        }
        let q = QuadExpr { x, y, r };
        if q.norm() == 0 {
            return Err(Error::InvalidArgument("zero norm".into()));
        }
        Ok(q)
    }

    pub fn norm(&self) -> i128 {
        self.x * self.x - self.r * self.y * self.y
    }

    /// Legendre symbol of `x + y s` where `s` is a chosen root of `r` mod `p`.
    pub fn legendre_at_root(&self, p: u64, root: u128) -> i8 {
        legendre(self.x + self.y * root as i128, p)
    }
}

/// Checks the conditions making `((x + y√r)/p)` independent of the root.
pub fn quad_root(q: &QuadExpr, p: u64) -> Result<u128> {
    if p == 2 {
        return Err(Error::IllDefined { p });
    }
    if legendre(q.r, p) != 1 || legendre(q.norm(), p) != 1 {
        return Err(Error::IllDefined { p });
    }
    sqrt_mod(q.r, p, 1).map_err(|_| Error::IllDefined { p })
}

/// Jacobi symbol `((x + y√r)/m)` for odd `m > 0`: the product over `p | m` of
/// Legendre symbols of `x + y s_p` with `s_p^2 ≡ r (mod p)`.
pub fn quad_jacobi(q: &QuadExpr, m: u64) -> Result<i8> {
    if m == 0 || m.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "modulus must be odd and positive, got {m}"
        )));
    }
    let mut sign = 1i8;
    for (p, e) in factorize(m) {
        let s = quad_root(q, p)?;
        if e % 2 == 1 {
            sign *= q.legendre_at_root(p, s);
        }
    }
    Ok(sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_with_both_roots() {
        let two_minus = QuadExpr::new(2, -1, 2).unwrap();
        assert_eq!(two_minus.legendre_at_root(17, 6), 1);
        assert_eq!(two_minus.legendre_at_root(17, 11), 1);
        assert_eq!(quad_jacobi(&two_minus, 17), Ok(1));

        let one_plus = QuadExpr::new(1, 1, 2).unwrap();
        assert_eq!(one_plus.legendre_at_root(17, 6), -1);
        assert_eq!(one_plus.legendre_at_root(17, 11), -1);
        assert_eq!(quad_jacobi(&one_plus, 17), Ok(-1));

        let gauss = QuadExpr::new(1, 1, -1).unwrap();
        assert_eq!(gauss.legendre_at_root(17, 4), -1);
        assert_eq!(gauss.legendre_at_root(17, 13), -1);
        assert_eq!(quad_jacobi(&gauss, 17), Ok(-1));
    }

    #[test]
    fn ill_defined() {
        // 2 is not a square mod 3.
        let q = QuadExpr::new(1, 1, 2).unwrap();
        assert_eq!(quad_jacobi(&q, 3), Err(Error::IllDefined { p: 3 }));
        // norm of 1 + √2 is -1, a non-residue mod 7
        assert_eq!(quad_jacobi(&q, 7), Err(Error::IllDefined { p: 7 }));
        assert!(QuadExpr::new(1, 1, 3).is_err());
    }
}
