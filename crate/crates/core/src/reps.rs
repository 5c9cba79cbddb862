// SPDX-License-Identifier: Apache-2.0

//! Representations by the norm forms of `Z[√2]` and by `x^2 + 8y^2`.
//!
//! Searches run over a window that contains a representative of every orbit
//! under the unit `3 + 2√2`, so they are complete as well as bounded.

use serde::Serialize;

use crate::arith::is_norm;
use crate::arith::modular::{exact_sqrt, isqrt};
use crate::error::{Error, Result};

/// `n = 2 μ^2 - τ^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Rep2MuTau {
    pub mu: i128,
    pub tau: i128,
}

/// `n' = u^2 - 2 w^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RepU2W {
    pub u: i128,
    pub w: i128,
}

/// `n = a^2 + 8 b^2` with `a` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RepA8B {
    pub a: i128,
    pub b: i128,
}

/// `m = 2 μ^2 - λ^2` for `m < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RepNeg {
    pub mu: i128,
    pub lam: i128,
}

impl Rep2MuTau {
    pub fn value(&self) -> i128 {
        2 * self.mu * self.mu - self.tau * self.tau
    }

    /// Multiplication of `τ + μ√2` by the unit `3 + 2√2`.
    pub fn pell_step(&self) -> Self {
        Rep2MuTau {
            mu: 3 * self.mu + 2 * self.tau,
            tau: 4 * self.mu + 3 * self.tau,
        }
    }

    /// Flips the sign of odd `μ` so that `μ ≡ d (mod 4)`.
    pub fn normalized(&self, d: i128) -> Self {
        if self.mu % 2 != 0 && (self.mu - d).rem_euclid(4) != 0 {
            Rep2MuTau {
                mu: -self.mu,
                tau: self.tau,
            }
        } else {
            *self
        }
    }

    /// `u = 2μ - τ`, `w = τ - μ`, so that `u^2 - 2 w^2 = 2μ^2 - τ^2`.
    pub fn to_u_w(&self) -> RepU2W {
        RepU2W {
            u: 2 * self.mu - self.tau,
            w: self.tau - self.mu,
        }
    }
}

impl RepU2W {
    pub fn value(&self) -> i128 {
        self.u * self.u - 2 * self.w * self.w
    }

    /// Multiplication of `u + w√2` by `3 + 2√2`.
    pub fn pell_step(&self) -> Self {
        RepU2W {
            u: 3 * self.u + 4 * self.w,
            w: 2 * self.u + 3 * self.w,
        }
    }
}

/// Solution of `2μ^2 - τ^2 = n` (`n > 0`) with the least `μ > 0`, `τ >= 0`.
pub fn fundamental_2mu2_tau2(n: i128) -> Result<Rep2MuTau> {
    let none = || Error::NoRepresentation {
        value: n,
        form: "2μ² − τ²",
    };
    if n <= 0 || !is_norm(2, n) {
        return Err(none());
    }
    let lo = isqrt((n / 2) as u128) as i128;
    let hi = lo + isqrt(n as u128) as i128 + 2;
    (lo.max(1)..=hi)
        .find_map(|mu| exact_sqrt(2 * mu * mu - n).map(|tau| Rep2MuTau { mu, tau }))
        .ok_or_else(none)
}

/// `n = 2μ^2 - τ^2` with minimal `|μ|`, signed so that `μ ≡ d (mod 4)`.
pub fn rep_2mu2_tau2(n: i128, d: i128) -> Result<Rep2MuTau> {
    Ok(fundamental_2mu2_tau2(n)?.normalized(d))
}

/// `n = u^2 - 2w^2` with the least `w >= 0` and `u > 0`.
pub fn rep_u2_2w2(n: i128) -> Result<RepU2W> {
    let none = || Error::NoRepresentation {
        value: n,
        form: "u² − 2w²",
    };
    if n <= 0 || !is_norm(2, n) {
        return Err(none());
    }
    let hi = isqrt((n / 2) as u128) as i128 + 1;
    (0..=hi)
        .find_map(|w| exact_sqrt(n + 2 * w * w).map(|u| RepU2W { u, w }))
        .ok_or_else(none)
}

/// `n = a^2 + 8b^2` with the least `b >= 0`.
pub fn rep_a2_8b2(n: i128) -> Result<RepA8B> {
    let none = || Error::NoRepresentation {
        value: n,
        form: "a² + 8b²",
    };
    if n <= 0 {
        return Err(none());
    }
    let hi = isqrt((n / 8) as u128) as i128;
    (0..=hi)
        .find_map(|b| {
            exact_sqrt(n - 8 * b * b)
                .filter(|a| a % 2 == 1)
                .map(|a| RepA8B { a, b })
        })
        .ok_or_else(none)
}

/// Every representation `n = a^2 + 8b^2` with `a, b >= 0`.
pub fn all_a2_8b2(n: i128) -> Vec<RepA8B> {
    let hi = isqrt((n.max(0) / 8) as u128) as i128;
    (0..=hi)
        .filter_map(|b| exact_sqrt(n - 8 * b * b).map(|a| RepA8B { a, b }))
        .collect()
}

/// `m = 2μ^2 - λ^2` for `m < 0`, with the least `μ >= 1`.
pub fn rep_neg(m: i128) -> Result<RepNeg> {
    let none = || Error::NoRepresentation {
        value: m,
        form: "2μ² − λ²",
    };
    if m >= 0 || !is_norm(2, m) {
        return Err(none());
    }
    let hi = isqrt((-m / 2) as u128) as i128 + 1;
    (1..=hi)
        .find_map(|mu| exact_sqrt(2 * mu * mu - m).map(|lam| RepNeg { mu, lam }))
        .ok_or_else(none)
}

/// `μ` in `m = 2μ^2 - λ^2`, taken positive, for either sign of `m`.
pub fn positive_mu(m: i128) -> Result<i128> {
    if m > 0 {
        fundamental_2mu2_tau2(m).map(|r| r.mu)
    } else {
        rep_neg(m).map(|r| r.mu)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_mu_tau_examples() {
        assert_eq!(rep_2mu2_tau2(17, 17).unwrap(), Rep2MuTau { mu: -3, tau: 1 });
        assert_eq!(rep_2mu2_tau2(161, 23).unwrap(), Rep2MuTau { mu: -9, tau: 1 });
        // 2 is not a norm from Q(√3): (2, 3)_3 = -1.
        assert!(matches!(rep_2mu2_tau2(3, 3), Err(Error::NoRepresentation { .. })));
    }

    #[test]
    fn other_form_examples() {
        assert_eq!(rep_u2_2w2(17).unwrap(), RepU2W { u: 5, w: 2 });
        assert_eq!(rep_a2_8b2(17).unwrap(), RepA8B { a: 3, b: 1 });
        assert_eq!(rep_a2_8b2(41).unwrap(), RepA8B { a: 3, b: 2 });
        assert_eq!(rep_neg(-34).unwrap(), RepNeg { mu: 1, lam: 6 });
        assert!(rep_a2_8b2(5).is_err());
    }

    /// Brute force over a box much larger than the search window.
    fn least_mu_brute(n: i128) -> Option<i128> {
        (1..=4 * n).find(|&mu| (0..=4 * n).any(|tau| 2 * mu * mu - tau * tau == n))
    }

    #[test]
    fn window_is_complete() {
        for n in 1..400i128 {
            let brute = least_mu_brute(n);
            match fundamental_2mu2_tau2(n) {
                Ok(r) => {
                    assert_eq!(r.value(), n);
                    assert_eq!(Some(r.mu), brute, "n = {n}");
                }
                Err(_) => assert!(brute.is_none() || !is_norm(2, n), "n = {n} missed"),
            }
        }
    }

    #[test]
    fn orbit_preserves_value() {
        let mut r = rep_2mu2_tau2(161, 23).unwrap();
        let mut uw = rep_u2_2w2(161).unwrap();
        for _ in 0..4 {
            r = r.pell_step();
            uw = uw.pell_step();
            assert_eq!(r.value(), 161);
            assert_eq!(uw.value(), 161);
            assert_eq!(r.to_u_w().value(), 161);
        }
    }
}
