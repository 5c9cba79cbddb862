// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use super::factor::factorize;
use super::modular::{gcd, residue_valuation, valuation};
use crate::error::{Error, Result};

/// A place of `Q`: a finite prime or the real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "inf"),
        }
    }
}

/// Image of a sign under `{±1} -> F_2`.
#[inline]
pub fn additive(sign: i8) -> bool {
    debug_assert!(sign == 1 || sign == -1);
    sign == -1
}

/// Jacobi symbol without the coprimality check; 0 when `gcd(a, b) > 1`.
fn jacobi_raw(a: i128, b: i128) -> i8 {
    debug_assert!(b > 0 && b % 2 == 1);
    let mut a = a.rem_euclid(b);
    let mut n = b;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Jacobi symbol `(a/b)` for odd `b > 0` coprime to `a`.
pub fn jacobi(a: i128, b: i128) -> Result<i8> {
    if b <= 0 || b % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "Jacobi symbol needs odd b > 0, got {b}"
        )));
    }
    match jacobi_raw(a, b) {
        0 => Err(Error::NotCoprime { a, b }),
        s => Ok(s),
    }
}

pub fn additive_jacobi(a: i128, b: i128) -> Result<bool> {
    jacobi(a, b).map(additive)
}

/// Legendre symbol for an odd prime `p`; 0 when `p | a`.
pub fn legendre(a: i128, p: u64) -> i8 {
    jacobi_raw(a, p as i128)
}

/// Kronecker symbol `(a/n)` for arbitrary `n`.
pub fn kronecker(a: i128, n: i128) -> i8 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut t = 1i8;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            t = -t;
        }
    }
    while n % 2 == 0 {
        n /= 2;
        match a.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => t = -t,
            _ => return 0,
        }
    }
    t * jacobi_raw(a, n)
}

fn two_adic_eps(u: i128) -> u8 {
    (u.rem_euclid(4) == 3) as u8
}

fn two_adic_omega(u: i128) -> u8 {
    matches!(u.rem_euclid(8), 3 | 5) as u8
}

/// Hilbert symbol `(a, b)_v` of two nonzero integers.
///
/// Uses the closed forms in terms of valuations and unit classes; `a` and `b`
/// must be nonzero.
pub fn hilbert(a: i128, b: i128, v: Place) -> i8 {
    assert!(a != 0 && b != 0, "Hilbert symbol of zero");
    match v {
        Place::Infinite => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        Place::Finite(2) => {
            let (alpha, u) = valuation(a, 2);
            let (beta, w) = valuation(b, 2);
            let e = two_adic_eps(u) * two_adic_eps(w)
                + (alpha % 2) as u8 * two_adic_omega(w)
                + (beta % 2) as u8 * two_adic_omega(u);
            if e.is_multiple_of(2) {
                1
            } else {
                -1
            }
        }
        Place::Finite(p) => {
            let (alpha, u) = valuation(a, p);
            let (beta, w) = valuation(b, p);
            let mut s = 1i8;
            if alpha % 2 == 1 && beta % 2 == 1 && p % 4 == 3 {
                s = -s;
            }
            if beta % 2 == 1 {
                s *= legendre(u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre(w, p);
            }
            s
        }
    }
}

/// Additive Hilbert symbol `[a, b]_v`.
pub fn hilbert_additive(a: i128, b: i128, v: Place) -> bool {
    additive(hilbert(a, b, v))
}

/// Hilbert symbol of nonzero rationals; `x/y` and `x y` share a square class.
pub fn hilbert_rational(a: Ratio<i128>, b: Ratio<i128>, v: Place) -> i8 {
    hilbert(a.numer() * a.denom(), b.numer() * b.denom(), v)
}

/// Hilbert symbol `(x, b)_p` where `x` is only known modulo `p^prec`.
///
/// Fails with [`Error::PrecisionExhausted`] when the residue does not pin
/// down the square class of `x`.
pub fn hilbert_approx(x: u128, prec: u32, b: i128, p: u64) -> Result<i8> {
    let needed = if p == 2 { 3 } else { 1 };
    match residue_valuation(x, p, prec) {
        Some(v) if v + needed <= prec => Ok(hilbert(x as i128, b, Place::Finite(p))),
        _ => Err(Error::PrecisionExhausted { p }),
    }
}

/// The places where `(a, b)_v` can be nontrivial: 2, ∞ and the primes of `a b`.
pub fn relevant_places(values: &[i128]) -> Vec<Place> {
    let mut primes = vec![2u64];
    for &x in values {
        let x = u64::try_from(x.unsigned_abs()).expect("relevant_places input exceeds u64");
        primes.extend(factorize(x).into_iter().map(|(p, _)| p));
    }
    primes.sort_unstable();
    primes.dedup();
    let mut places: Vec<Place> = primes.into_iter().map(Place::Finite).collect();
    places.push(Place::Infinite);
    places
}

/// Whether `e` is a norm from `Q(√m)`, i.e. `(e, m)_v = +1` at every place.
pub fn is_norm(e: i128, m: i128) -> bool {
    relevant_places(&[e, m]).into_iter().all(|v| hilbert(e, m, v) == 1)
}

/// `gcd(a, b) == 1`.
pub fn coprime(a: i128, b: i128) -> bool {
    gcd(a, b) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::modular::pow_mod;

    fn euler(a: i128, p: u64) -> i8 {
        let r = pow_mod(a.rem_euclid(p as i128) as u128, ((p - 1) / 2) as u128, p as u128);
        if r == 1 {
            1
        } else if r == 0 {
            0
        } else {
            -1
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(1, 15), Ok(1));
        assert_eq!(jacobi(2, 17), Ok(1));
        assert_eq!(jacobi(3, 17), Ok(-1));
        assert_eq!(jacobi(3, 15), Err(Error::NotCoprime { a: 3, b: 15 }));
        assert!(jacobi(3, 16).is_err());
    }

    #[test]
    fn legendre_matches_euler() {
        for p in [3u64, 5, 7, 11, 13, 17, 23, 41, 97, 101] {
            for a in -50i128..50 {
                assert_eq!(legendre(a, p), euler(a, p), "({a}/{p})");
            }
        }
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert(-1, -1, Place::Infinite), -1);
        assert_eq!(hilbert(-1, -1, Place::Finite(2)), -1);
        assert_eq!(hilbert(2, 17, Place::Finite(17)), 1);
        assert_eq!(hilbert(2, 17, Place::Finite(17)), legendre(2, 17));
    }

    /// `(a, b)_p = 1` iff `z^2 = a x^2 + b y^2` has a primitive solution; for
    /// odd p and valuations at most one, solutions modulo p^3 decide it.
    fn hilbert_brute(a: i128, b: i128, p: u64) -> i8 {
        let p = p as i128;
        let m = p.pow(3);
        let found = (0..m).any(|x| {
            (0..m).any(|y| {
                (0..m).any(|z| {
                    (x % p != 0 || y % p != 0 || z % p != 0) && (a * x * x + b * y * y - z * z).rem_euclid(m) == 0
                })
            })
        });
        if found {
            1
        } else {
            -1
        }
    }

    #[test]
    fn hilbert_matches_brute_force_odd_primes() {
        for p in [3u64, 5] {
            for a in [-15i128, -7, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, 14, 15] {
                for b in [-7i128, -5, -3, -1, 1, 2, 3, 5, 7] {
                    assert_eq!(hilbert(a, b, Place::Finite(p)), hilbert_brute(a, b, p), "({a},{b})_{p}");
                }
            }
        }
    }

    #[test]
    fn norm_examples() {
        assert!(is_norm(-1, 17));
        assert!(!is_norm(-1, -34));
        assert!(is_norm(2, 17));
    }

    #[test]
    fn kronecker_values() {
        assert_eq!(kronecker(-68, 3), 1);
        assert_eq!(kronecker(-68, 5), -1);
        assert_eq!(kronecker(-68, 2), 0);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(17, 2), 1);
    }
}
