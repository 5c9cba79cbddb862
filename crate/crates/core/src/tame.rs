// SPDX-License-Identifier: Apache-2.0

//! 2-rank and 4-rank of the tame kernel `K_2 O_F` of `F = Q(√m)`.
//!
//! The 4-rank comes from counting the divisor sets `V_1`, `V_2`; they are
//! computed both by F_2 solves against `B_m = A_{m'} + D_{m/m'}` and by direct
//! Hilbert symbol checks on every divisor.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arith::{factorize, hilbert, is_norm, jacobi, Place};
use crate::error::{Error, Result};
use crate::f2linalg::F2Matrix;
use crate::matrices::{a_matrix, b_vector};
use crate::reps::positive_mu;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TameKernelReport {
    pub m: i64,
    pub r2: usize,
    pub r4: usize,
    pub v1: BTreeSet<i64>,
    pub v2: BTreeSet<i64>,
    pub mu_used: Option<i64>,
}

/// The pair `(V_1, V_2)` together with the `μ` used for `V_2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VSets {
    pub v1: BTreeSet<i64>,
    pub v2: BTreeSet<i64>,
    pub mu: Option<i64>,
}

struct Field {
    m: i64,
    /// Odd primes of `m`, increasing.
    primes: Vec<u64>,
    /// `m / m'`, one of `±1, ±2`.
    unit: i64,
}

impl Field {
    fn new(m: i64) -> Result<Self> {
        if m.abs() <= 2 {
            return Err(Error::OutOfRange(m as i128));
        }
        let factors = factorize(m.unsigned_abs());
        if factors.iter().any(|&(_, e)| e > 1) {
            return Err(Error::NotSquareFree(m as i128));
        }
        let primes: Vec<u64> = factors.into_iter().map(|(p, _)| p).filter(|&p| p != 2).collect();
        let odd: i64 = primes.iter().map(|&p| p as i64).product();
        Ok(Field {
            m,
            primes,
            unit: m / odd,
        })
    }

    fn odd_part(&self) -> i64 {
        self.m.abs() / self.unit.abs()
    }

    fn psi(&self, mask: u64) -> i64 {
        self.primes
            .iter()
            .enumerate()
            .filter(|&(j, _)| mask >> j & 1 == 1)
            .map(|(_, &p)| p as i64)
            .product()
    }

    fn divisors(&self) -> impl Iterator<Item = i64> + '_ {
        (0u64..1 << self.primes.len()).map(|mask| self.psi(mask))
    }

    fn b_matrix(&self) -> F2Matrix {
        let a = a_matrix(&self.primes);
        let d = F2Matrix::diag(&b_vector(self.unit as i128, &self.primes).expect("unit is coprime to m'"));
        &a + &d
    }

    fn mu(&self) -> Result<Option<i64>> {
        if is_norm(2, self.m as i128) {
            positive_mu(self.m as i128).map(|mu| Some(mu as i64))
        } else {
            Ok(None)
        }
    }

    /// `(d, -m)_p == (eps / p)` for every odd `p | m`.
    fn matches(&self, d: i64, eps: i64) -> bool {
        self.primes.iter().all(|&p| {
            hilbert(d as i128, -(self.m as i128), Place::Finite(p)) == jacobi(eps as i128, p as i128).expect("coprime")
        })
    }
}

/// `B_m = A_{m'} + D_{m/m'}`.
pub fn b_matrix(m: i64) -> Result<F2Matrix> {
    Ok(Field::new(m)?.b_matrix())
}

/// Browkin-Schinzel: `r_2 = k + log2 #({±1, ±2} ∩ N F)` for `m > 2` and
/// `k - 1 + log2 #({1, 2} ∩ N F)` for `m < -2`.
pub fn r2_tame(m: i64) -> Result<usize> {
    let f = Field::new(m)?;
    let k = f.primes.len();
    let candidates: &[i128] = if m > 0 { &[1, -1, 2, -2] } else { &[1, 2] };
    let count = candidates.iter().filter(|&&e| is_norm(e, m as i128)).count();
    let log = count.trailing_zeros() as usize;
    if !count.is_power_of_two() {
        return Err(Error::CountNotPowerOfTwo(count));
    }
    Ok(if m > 0 { k + log } else { k - 1 + log })
}

/// `V_1`, `V_2` from solves of `B d = b_ε`.
pub fn v_sets(m: i64) -> Result<VSets> {
    let f = Field::new(m)?;
    let b = f.b_matrix();
    let mu = f.mu()?;
    let solutions = |eps: i64, sign: i64, into: &mut BTreeSet<i64>| -> Result<()> {
        let target = b_vector(eps as i128, &f.primes)?;
        for d in b.solutions(&target)? {
            let mask = d
                .bits()
                .enumerate()
                .filter(|&(_, bit)| bit)
                .map(|(j, _)| 1u64 << j)
                .sum();
            into.insert(sign * f.psi(mask));
        }
        Ok(())
    };
    let mut v1 = BTreeSet::new();
    let mut v2 = BTreeSet::new();
    if m > 0 {
        for eps in [1, -1, 2, -2] {
            solutions(eps, 1, &mut v1)?;
        }
        if let Some(mu) = mu {
            solutions(mu, 1, &mut v2)?;
            solutions(-mu, 1, &mut v2)?;
        }
    } else {
        solutions(1, 1, &mut v1)?;
        solutions(2, 1, &mut v1)?;
        solutions(-1, -1, &mut v1)?;
        solutions(-2, -1, &mut v1)?;
        if let Some(mu) = mu {
            solutions(mu, 1, &mut v2)?;
            solutions(-mu, -1, &mut v2)?;
        }
    }
    Ok(VSets { v1, v2, mu })
}

/// `V_1`, `V_2` by checking the defining Hilbert symbol conditions on every
/// (signed, for `m < 0`) divisor of `m'`.
pub fn v_sets_direct(m: i64) -> Result<VSets> {
    let f = Field::new(m)?;
    let mu = f.mu()?;
    let (signs, eps1, eps2): (&[i64], &[i64], Vec<i64>) = if m > 0 {
        (&[1], &[1, -1, 2, -2], mu.map_or(vec![], |mu| vec![mu, -mu]))
    } else {
        (&[1, -1], &[1, 2], mu.map_or(vec![], |mu| vec![mu]))
    };
    let mut v1 = BTreeSet::new();
    let mut v2 = BTreeSet::new();
    for d in f.divisors() {
        for &s in signs {
            let d = s * d;
            if eps1.iter().any(|&e| f.matches(d, e)) {
                v1.insert(d);
            }
            if eps2.iter().any(|&e| f.matches(d, e)) {
                v2.insert(d);
            }
        }
    }
    debug_assert_eq!(f.odd_part() * f.unit.abs(), m.abs());
    Ok(VSets { v1, v2, mu })
}

/// `r_4(K_2 O_F)` from `2^{r_4 + 1} = #V_1 + #V_2` (`m > 2`) or
/// `2^{r_4 + 2} = #V_1 + #V_2` (`m < -2`).
pub fn r4_from_counts(m: i64, v: &VSets) -> Result<usize> {
    let total = v.v1.len() + v.v2.len();
    let shift = if m > 0 { 1 } else { 2 };
    if !total.is_power_of_two() || total < 1 << shift {
        return Err(Error::CountNotPowerOfTwo(total));
    }
    Ok(total.trailing_zeros() as usize - shift)
}

pub fn r4_tame(m: i64) -> Result<usize> {
    r4_from_counts(m, &v_sets(m)?)
}

pub fn tame_report(m: i64) -> Result<TameKernelReport> {
    let v = v_sets(m)?;
    Ok(TameKernelReport {
        m,
        r2: r2_tame(m)?,
        r4: r4_from_counts(m, &v)?,
        mu_used: v.mu,
        v1: v.v1,
        v2: v.v2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[i64]) -> BTreeSet<i64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn r2_examples() {
        assert_eq!(r2_tame(17), Ok(3));
        assert_eq!(r2_tame(-34), Ok(1));
        // (2, -17)_17 = (2/17) = 1 and (2, -17)_2 = 1, so 2 is a norm
        assert_eq!(r2_tame(-17), Ok(1));
        assert_eq!(r2_tame(2), Err(Error::OutOfRange(2)));
        assert_eq!(r2_tame(-1), Err(Error::OutOfRange(-1)));
    }

    #[test]
    fn v_set_examples() {
        let v = v_sets(17).unwrap();
        assert_eq!(v.v1, set(&[1, 17]));
        assert!(v.v2.is_empty());
        assert_eq!(v, v_sets_direct(17).unwrap());

        let v = v_sets(-34).unwrap();
        assert_eq!(v.v1, set(&[-17, -1, 1, 17]));
        assert_eq!(v.v2, set(&[-17, -1, 1, 17]));
        assert_eq!(v.mu, Some(1));
        assert_eq!(v, v_sets_direct(-34).unwrap());

        let v = v_sets(-161).unwrap();
        assert!((v.v1.len() + v.v2.len()).is_power_of_two());
    }

    #[test]
    fn r4_examples() {
        assert_eq!(r4_tame(17), Ok(0));
        assert_eq!(r4_tame(-34), Ok(1));
    }

    #[test]
    fn report_shape() {
        let r = tame_report(-34).unwrap();
        assert_eq!(1usize << (r.r4 + 2), r.v1.len() + r.v2.len());
        assert_eq!(r.r2, 1);
    }
}
