// SPDX-License-Identifier: Apache-2.0

//! The F_2 matrices attached to `n`: Monsky matrices for the pure 2-Selmer
//! group and Rédei matrices for 4-ranks of narrow class groups.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::arith::{additive_jacobi, factorize, hilbert_additive, squarefree_part, Place, SquareFreeN};
use crate::error::{Error, Result};
use crate::f2linalg::{F2Matrix, F2Vector};

/// `A_{n'}` for the ordered odd primes of `n'`:
/// `a_ij = [p_j, -n']_{p_i}`, i.e. `aleg(p_j / p_i)` off the diagonal and
/// `aleg((n'/p_i) / p_i)` on it.
pub fn a_matrix(primes: &[u64]) -> F2Matrix {
    let k = primes.len();
    let odd: u128 = primes.iter().map(|&p| p as u128).product();
    let mut a = F2Matrix::zeros(k, k);
    for (i, &pi) in primes.iter().enumerate() {
        for (j, &pj) in primes.iter().enumerate() {
            let top = if i == j { (odd / pi as u128) as i128 } else { pj as i128 };
            a.set(
                i,
                j,
                additive_jacobi(top, pi as i128).expect("distinct primes are coprime"),
            );
        }
    }
    a
}

fn nonempty(sf: &SquareFreeN) -> Result<()> {
    if sf.k() == 0 {
        Err(Error::EmptyFactorization(sf.n))
    } else {
        Ok(())
    }
}

pub fn build_a(sf: &SquareFreeN) -> Result<F2Matrix> {
    nonempty(sf)?;
    Ok(a_matrix(&sf.primes))
}

/// `b_ε = (aleg(ε/p_1), ..., aleg(ε/p_k))`.
pub fn b_vector(eps: i128, primes: &[u64]) -> Result<F2Vector> {
    let bits = primes
        .iter()
        .map(|&p| additive_jacobi(eps, p as i128))
        .collect::<Result<Vec<_>>>()?;
    Ok(F2Vector::from_bits(&bits))
}

pub fn build_b(eps: i128, sf: &SquareFreeN) -> Result<F2Vector> {
    b_vector(eps, &sf.primes)
}

/// `D_ε = diag(b_ε)`.
pub fn build_d(eps: i128, sf: &SquareFreeN) -> Result<F2Matrix> {
    Ok(F2Matrix::diag(&build_b(eps, sf)?))
}

/// The `2k × 2k` Monsky matrix: `[[A + D_2, D_2], [D_2, A + D_{-2}]]` for odd
/// `n` and `[[Aᵀ + D_2, D_{-1}], [D_2, A + D_2]]` for even `n`.
pub fn monsky_matrix(sf: &SquareFreeN) -> Result<F2Matrix> {
    let a = build_a(sf)?;
    let d2 = build_d(2, sf)?;
    Ok(if sf.is_even {
        let dm1 = build_d(-1, sf)?;
        F2Matrix::from_blocks(&[vec![&(&a.transpose() + &d2), &dm1], vec![&d2, &(&a + &d2)]])
    } else {
        let dm2 = build_d(-2, sf)?;
        F2Matrix::from_blocks(&[vec![&(&a + &d2), &d2], vec![&d2, &(&a + &dm2)]])
    })
}

/// Pure 2-Selmer rank `s_2(n) = 2k - rank(M_n)`.
pub fn s2(sf: &SquareFreeN) -> Result<usize> {
    let m = monsky_matrix(sf)?;
    Ok(2 * sf.k() - m.rank())
}

/// A class `(d1, d2, d3)` in `(Q^×/Q^×2)^3` with `d1 d2 d3` a square, each
/// entry stored as its square-free representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SelmerTriple {
    pub d1: i64,
    pub d2: i64,
    pub d3: i64,
}

impl SelmerTriple {
    /// Completes `(d1, d2)` by `d3 = d1 d2` modulo squares.
    pub fn from_d1_d2(d1: i64, d2: i64) -> Self {
        let d3 = squarefree_part(d1 as i128 * d2 as i128) as i64;
        SelmerTriple { d1, d2, d3 }
    }

    /// Completes `(d2, d3)` by `d1 = d2 d3` modulo squares.
    pub fn from_d2_d3(d2: i64, d3: i64) -> Self {
        let d1 = squarefree_part(d2 as i128 * d3 as i128) as i64;
        SelmerTriple { d1, d2, d3 }
    }

    pub fn identity() -> Self {
        SelmerTriple { d1: 1, d2: 1, d3: 1 }
    }

    /// Componentwise product modulo squares.
    pub fn mul(&self, other: &SelmerTriple) -> SelmerTriple {
        let sq = |a: i64, b: i64| squarefree_part(a as i128 * b as i128) as i64;
        SelmerTriple {
            d1: sq(self.d1, other.d1),
            d2: sq(self.d2, other.d2),
            d3: sq(self.d3, other.d3),
        }
    }
}

impl fmt::Display for SelmerTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.d1, self.d2, self.d3)
    }
}

/// Images of `O, (n,0), (-n,0), (0,0)` in `(Q^×/Q^×2)^3`.
pub fn torsion_images(n: u64) -> [SelmerTriple; 4] {
    let n = n as i64;
    let sq = |x: i64| squarefree_part(x as i128) as i64;
    [
        SelmerTriple::identity(),
        SelmerTriple {
            d1: 2,
            d2: sq(2 * n),
            d3: sq(n),
        },
        SelmerTriple {
            d1: sq(-2 * n),
            d2: 2,
            d3: sq(-n),
        },
        SelmerTriple {
            d1: sq(-n),
            d2: sq(n),
            d3: -1,
        },
    ]
}

/// Representative triple of a kernel vector `(x, y)` of `M_n`.
///
/// Odd `n`: `x = ψ⁻¹(d2)`, `y = ψ⁻¹(d1)` with `d1, d2 > 0`. Even `n`:
/// `x = ψ⁻¹(|d3|)`, `y = ψ⁻¹(d2)` with `d2 > 0` and `d3 ≡ 1 mod 4`.
pub fn triple_from_kernel_vector(sf: &SquareFreeN, v: &F2Vector) -> SelmerTriple {
    let k = sf.k();
    let x = sf.psi(&v.slice(0, k)) as i64;
    let y = sf.psi(&v.slice(k, 2 * k)) as i64;
    if sf.is_even {
        let d3 = if x % 4 == 1 { x } else { -x };
        SelmerTriple::from_d2_d3(y, d3)
    } else {
        SelmerTriple::from_d1_d2(y, x)
    }
}

/// Inverse of [`triple_from_kernel_vector`] on representative triples.
pub fn kernel_vector_of_triple(sf: &SquareFreeN, t: &SelmerTriple) -> F2Vector {
    if sf.is_even {
        sf.psi_inv(t.d3 as i128).concat(&sf.psi_inv(t.d2 as i128))
    } else {
        sf.psi_inv(t.d2 as i128).concat(&sf.psi_inv(t.d1 as i128))
    }
}

/// The pure 2-Selmer group as representative triples, read off `Ker M_n`.
pub fn selmer_elements(sf: &SquareFreeN) -> Result<BTreeSet<SelmerTriple>> {
    let m = monsky_matrix(sf)?;
    Ok(m.kernel().iter().map(|v| triple_from_kernel_vector(sf, v)).collect())
}

/// Prime discriminants of `Q(√m)` and their count `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscriminantFactorization {
    pub prime_discriminants: Vec<i64>,
    pub t: usize,
}

fn check_field_parameter(m: i64) -> Result<()> {
    if m == 0 || m == 1 {
        return Err(Error::InvalidArgument(format!("Q(√{m}) is not a quadratic field")));
    }
    if factorize(m.unsigned_abs()).iter().any(|&(_, e)| e > 1) {
        return Err(Error::NotSquareFree(m as i128));
    }
    Ok(())
}

/// Discriminant of `Q(√m)` for square-free `m`.
pub fn field_discriminant(m: i64) -> i64 {
    if m.rem_euclid(4) == 1 {
        m
    } else {
        4 * m
    }
}

pub fn prime_discriminants(m: i64) -> Result<DiscriminantFactorization> {
    check_field_parameter(m)?;
    let disc = field_discriminant(m);
    let mut odd_part = 1i64;
    let mut out = Vec::new();
    for (p, _) in factorize(m.unsigned_abs()) {
        if p == 2 {
            continue;
        }
        let p = p as i64;
        let star = if p % 4 == 1 { p } else { -p };
        odd_part *= star;
        out.push(star);
    }
    if disc % 2 == 0 {
        out.insert(0, disc / odd_part);
    }
    Ok(DiscriminantFactorization {
        t: out.len(),
        prime_discriminants: out,
    })
}

/// Primes dividing the discriminant of `Q(√m)`, increasing.
pub fn ramified_primes(m: i64) -> Vec<u64> {
    let mut primes: Vec<u64> = factorize(m.unsigned_abs()).into_iter().map(|(p, _)| p).collect();
    if field_discriminant(m) % 2 == 0 && !primes.contains(&2) {
        primes.insert(0, 2);
    }
    primes
}

/// `R_m = ([p_j, m]_{p_i})` over the primes `p_1 < ... < p_t` dividing the
/// discriminant.
pub fn redei_matrix(m: i64) -> Result<F2Matrix> {
    check_field_parameter(m)?;
    let primes = ramified_primes(m);
    let t = primes.len();
    let mut r = F2Matrix::zeros(t, t);
    for (i, &pi) in primes.iter().enumerate() {
        for (j, &pj) in primes.iter().enumerate() {
            r.set(i, j, hilbert_additive(pj as i128, m as i128, Place::Finite(pi)));
        }
    }
    Ok(r)
}

/// 2-rank of the narrow class group: `t - 1`.
pub fn h2(m: i64) -> Result<usize> {
    Ok(prime_discriminants(m)?.t - 1)
}

/// 4-rank of the narrow class group: `t - 1 - rank(R_m)`.
pub fn h4(m: i64) -> Result<usize> {
    let r = redei_matrix(m)?;
    Ok(r.rows() - 1 - r.rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sf(n: i128) -> SquareFreeN {
        SquareFreeN::new(n).unwrap()
    }

    fn m(rows: &[&[u8]]) -> F2Matrix {
        F2Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn a_examples() {
        assert_eq!(build_a(&sf(17)).unwrap(), F2Matrix::zeros(1, 1));
        assert_eq!(build_a(&sf(15)).unwrap(), m(&[&[1, 1], &[1, 1]]));
        assert_eq!(build_a(&sf(161)).unwrap(), m(&[&[0, 0], &[1, 1]]));
        assert_eq!(build_a(&sf(2)), Err(Error::EmptyFactorization(2)));
    }

    #[test]
    fn a_entries_are_hilbert_symbols() {
        for n in [15i128, 161, 7 * 17 * 41, 3 * 5 * 7 * 11 * 13] {
            let s = sf(n);
            let a = build_a(&s).unwrap();
            for (i, &pi) in s.primes.iter().enumerate() {
                for (j, &pj) in s.primes.iter().enumerate() {
                    let h = hilbert_additive(pj as i128, -(s.odd_part as i128), Place::Finite(pi));
                    assert_eq!(a.get(i, j), h);
                }
            }
        }
    }

    #[test]
    fn d_examples() {
        assert_eq!(build_d(-1, &sf(17)).unwrap(), F2Matrix::zeros(1, 1));
        assert_eq!(build_d(2, &sf(161)).unwrap(), F2Matrix::zeros(2, 2));
        assert_eq!(build_d(-1, &sf(161)).unwrap(), F2Matrix::identity(2));
        assert!(matches!(build_d(7, &sf(161)), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn monsky_examples() {
        assert_eq!(monsky_matrix(&sf(17)).unwrap(), F2Matrix::zeros(2, 2));
        assert_eq!(monsky_matrix(&sf(34)).unwrap(), F2Matrix::zeros(2, 2));
        let s15 = sf(15);
        let m15 = monsky_matrix(&s15).unwrap();
        let expected = &build_a(&s15).unwrap() + &build_d(2, &s15).unwrap();
        assert_eq!(m15.block(0, 2, 0, 2), expected);
    }

    #[test]
    fn s2_examples() {
        assert_eq!(s2(&sf(17)).unwrap(), 2);
        assert_eq!(s2(&sf(34)).unwrap(), 2);
        assert_eq!(s2(&sf(161)).unwrap(), 2);
        assert_eq!(monsky_matrix(&sf(161)).unwrap().rank(), 2);
    }

    #[test]
    fn selmer_examples() {
        let t = |a, b, c| SelmerTriple { d1: a, d2: b, d3: c };
        let got = selmer_elements(&sf(17)).unwrap();
        let want: BTreeSet<_> = [t(1, 1, 1), t(1, 17, 17), t(17, 1, 17), t(17, 17, 1)]
            .into_iter()
            .collect();
        assert_eq!(got, want);
        let got = selmer_elements(&sf(34)).unwrap();
        let want: BTreeSet<_> = [t(1, 1, 1), t(17, 1, 17), t(17, 17, 1), t(1, 17, 17)]
            .into_iter()
            .collect();
        assert_eq!(got, want);
        for n in [17i128, 34] {
            let tors = torsion_images(n as u64);
            let sel = selmer_elements(&sf(n)).unwrap();
            for x in &tors[1..] {
                assert!(!sel.contains(x), "{x} should not be a pure Selmer representative");
            }
        }
    }

    #[test]
    fn kernel_vector_roundtrip() {
        for n in [17i128, 34, 161, 322, 7 * 17 * 23, 2 * 7 * 41 * 47] {
            let s = sf(n);
            let mm = monsky_matrix(&s).unwrap();
            for v in mm.kernel() {
                let t = triple_from_kernel_vector(&s, &v);
                assert_eq!(kernel_vector_of_triple(&s, &t), v);
            }
        }
    }

    #[test]
    fn prime_discriminant_examples() {
        assert_eq!(prime_discriminants(-17).unwrap().prime_discriminants, vec![-4, 17]);
        assert_eq!(
            prime_discriminants(17).unwrap(),
            DiscriminantFactorization {
                prime_discriminants: vec![17],
                t: 1
            }
        );
        assert_eq!(prime_discriminants(-34).unwrap().prime_discriminants, vec![-8, 17]);
        for mm in [-34i64, -17, 17, 15, 6, -6, 3, -1, 2, -2, 161, -161] {
            let pd = prime_discriminants(mm).unwrap();
            assert_eq!(pd.prime_discriminants.iter().product::<i64>(), field_discriminant(mm));
        }
        assert!(prime_discriminants(12).is_err());
    }

    #[test]
    fn h4_examples() {
        assert_eq!(h4(-17).unwrap(), 1);
        assert_eq!(h4(17).unwrap(), 0);
        assert_eq!(h4(-161).unwrap(), 1);
        assert_eq!(h4(161).unwrap(), 0);
        assert_eq!(redei_matrix(-161).unwrap().rank(), 1);
        assert_eq!(redei_matrix(161).unwrap().rank(), 1);
        assert_eq!(h2(-17).unwrap(), 1);
    }
}
