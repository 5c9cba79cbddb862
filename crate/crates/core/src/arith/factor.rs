// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use super::modular::{gcd, mul_mod, pow_mod};
use crate::error::{Error, Result};
use crate::f2linalg::F2Vector;

const TRIAL_LIMIT: u64 = 1_000_000;

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let m = n as u128;
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a as u128, d as u128, m);
        if x == 1 || x == m - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, m);
            if x == m - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let m = n as u128;
    let mut c = 1u128;
    loop {
        // Brent's cycle detection with batched gcds.
        let f = |x: u128| (mul_mod(x, x, m) + c) % m;
        let (mut x, mut y, mut g, mut q) = (2u128, 2u128, 1u128, 1u128);
        let mut ys = 0u128;
        let mut r = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(r - k).min(128) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), m);
                }
                g = gcd(q as i128, n as i128) as u128;
                k += 128;
            }
            r *= 2;
        }
        if g == m {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys) as i128, n as i128) as u128;
                if g > 1 {
                    break;
                }
            }
        }
        if g != m {
            return g as u64;
        }
        c += 1;
    }
}

fn split(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split(d, out);
    split(n / d, out);
}

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize(0)");
    let mut primes = Vec::new();
    while n.is_multiple_of(2) {
        primes.push(2);
        n /= 2;
    }
    let mut p = 3u64;
    while p <= TRIAL_LIMIT && p * p <= n {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
        p += 2;
    }
    if n > 1 {
        if p > TRIAL_LIMIT {
            split(n, &mut primes);
        } else {
            primes.push(n);
        }
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    n > 0 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Square-free kernel of a nonzero integer, keeping its sign.
pub fn squarefree_part(x: i128) -> i128 {
    assert!(x != 0);
    let abs = u64::try_from(x.unsigned_abs()).expect("squarefree_part input exceeds u64");
    let core: i128 = factorize(abs)
        .into_iter()
        .filter(|&(_, e)| e % 2 == 1)
        .map(|(p, _)| p as i128)
        .product();
    core * x.signum()
}

/// A positive square-free integer with its ordered odd prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SquareFreeN {
    pub n: u64,
    /// `n' = n / (2, n)`.
    pub odd_part: u64,
    pub primes: Vec<u64>,
    pub is_even: bool,
    /// Every odd prime factor is `±1 mod 8`.
    pub eligible: bool,
    /// Every odd prime factor is `1 mod 8`.
    pub strictly_eligible: bool,
}

impl SquareFreeN {
    pub fn new(n: i128) -> Result<Self> {
        if n < 1 {
            return Err(Error::ZeroOrNegative(n));
        }
        let n64 = u64::try_from(n).map_err(|_| Error::InvalidArgument(format!("{n} exceeds u64")))?;
        let factors = factorize(n64);
        if factors.iter().any(|&(_, e)| e > 1) {
            return Err(Error::NotSquareFree(n));
        }
        let is_even = n64 % 2 == 0;
        let primes: Vec<u64> = factors.into_iter().map(|(p, _)| p).filter(|&p| p != 2).collect();
        let eligible = primes.iter().all(|p| p % 8 == 1 || p % 8 == 7);
        let strictly_eligible = primes.iter().all(|p| p % 8 == 1);
        Ok(SquareFreeN {
            n: n64,
            odd_part: if is_even { n64 / 2 } else { n64 },
            primes,
            is_even,
            eligible,
            strictly_eligible,
        })
    }

    /// Number of odd prime factors.
    pub fn k(&self) -> usize {
        self.primes.len()
    }

    /// `ψ(δ) = ∏ p_j^{δ_j}`.
    pub fn psi(&self, v: &F2Vector) -> u64 {
        assert_eq!(v.len(), self.k());
        self.primes
            .iter()
            .enumerate()
            .filter(|&(j, _)| v.get(j))
            .map(|(_, &p)| p)
            .product()
    }

    /// Exponent vector of a divisor of `n'` (sign and powers of two ignored).
    pub fn psi_inv(&self, d: i128) -> F2Vector {
        let d = d.unsigned_abs();
        let mut v = F2Vector::zeros(self.k());
        for (j, &p) in self.primes.iter().enumerate() {
            if d.is_multiple_of(p as u128) {
                v.set(j, true);
            }
        }
        v
    }

    /// All positive divisors of `n'`, indexed by their exponent vectors.
    pub fn odd_divisors(&self) -> Vec<u64> {
        let k = self.k();
        (0u64..1 << k)
            .map(|mask| {
                self.primes
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| mask >> j & 1 == 1)
                    .map(|(_, &p)| p)
                    .product()
            })
            .collect()
    }
}

/// `factor_squarefree` under its familiar name.
pub fn factor_squarefree(n: i128) -> Result<SquareFreeN> {
    SquareFreeN::new(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let sieve: Vec<u64> = (0..2000)
            .filter(|&n| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        for n in 0..2000 {
            assert_eq!(is_prime(n), sieve.contains(&n), "{n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn factor_large_semiprime() {
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        assert_eq!(factorize(p * q), vec![(p, 1), (q, 1)]);
        assert_eq!(factorize(720), vec![(2, 4), (3, 2), (5, 1)]);
    }

    #[test]
    fn squarefree_examples() {
        let s = SquareFreeN::new(17).unwrap();
        assert_eq!(s.primes, vec![17]);
        assert!(!s.is_even && s.strictly_eligible);
        let s = SquareFreeN::new(34).unwrap();
        assert_eq!(s.primes, vec![17]);
        assert!(s.is_even);
        assert_eq!(s.odd_part, 17);
        assert_eq!(SquareFreeN::new(45), Err(Error::NotSquareFree(45)));
        assert_eq!(SquareFreeN::new(0), Err(Error::ZeroOrNegative(0)));
        assert_eq!(SquareFreeN::new(-5), Err(Error::ZeroOrNegative(-5)));
        let s = SquareFreeN::new(161).unwrap();
        assert!(s.eligible && !s.strictly_eligible);
    }

    #[test]
    fn psi_roundtrip() {
        let s = SquareFreeN::new(2 * 7 * 17 * 23).unwrap();
        for d in s.odd_divisors() {
            assert_eq!(s.psi(&s.psi_inv(d as i128)), d);
        }
    }

    #[test]
    fn squarefree_kernel() {
        assert_eq!(squarefree_part(17 * 17), 1);
        assert_eq!(squarefree_part(-12), -3);
        assert_eq!(squarefree_part(7 * 23 * 23), 7);
    }
}
