// SPDX-License-Identifier: Apache-2.0

//! The pure 2-Selmer group of `E_n` by brute-force local solvability of the
//! torsors `D_Λ`, with no reference to the Monsky matrix.

use std::collections::BTreeSet;

use crate::arith::modular::valuation;
use crate::arith::{squarefree_part, Place, SquareFreeN};
use crate::cassels::{local_point_search, torsor};
use crate::error::{Error, Result};
use crate::matrices::{torsion_images, SelmerTriple};

pub const MAX_N: u64 = 500;

/// Largest precision tried before giving up.
const PRECISION_CAP: u32 = 64;

fn locally_solvable(lambda: SelmerTriple, n: u64, places: &[Place]) -> Result<bool> {
    let ts = torsor(lambda, n);
    for &v in places {
        let mut e = match v {
            Place::Finite(p) => 2 * valuation(4 * n as i128 * n as i128, p).0 + 4,
            Place::Infinite => 0,
        };
        loop {
            match local_point_search(&ts, v, e) {
                Ok(_) => break,
                Err(Error::NoPoint { .. }) => return Ok(false),
                Err(Error::PrecisionExhausted { p }) if e < PRECISION_CAP => {
                    let _ = p;
                    e *= 2;
                }
                Err(err) => return Err(err),
            }
        }
    }
    Ok(true)
}

/// Representative of a torsion coset in the form used by the kernel
/// enumeration: `d_1, d_2 > 0` odd for odd `n`; `d_2 > 0` odd and
/// `d_3 ≡ 1 mod 4` odd for even `n`.
fn is_canonical(t: &SelmerTriple, even: bool) -> bool {
    if even {
        t.d2 > 0 && t.d2 % 2 != 0 && t.d3.rem_euclid(4) == 1
    } else {
        t.d1 > 0 && t.d2 > 0 && t.d1 % 2 != 0 && t.d2 % 2 != 0
    }
}

/// Every class `(d_1, d_2, d_1 d_2)` with `d_i | 2n` whose torsor has points
/// at all places dividing `2n∞`, reduced modulo the image of `E_n[2]`.
///
/// Good primes are not checked: there `D_Λ` has good reduction and a smooth
/// genus one curve over `F_p` always has points.
pub fn selmer_oracle(sf: &SquareFreeN) -> Result<BTreeSet<SelmerTriple>> {
    if sf.n > MAX_N {
        return Err(Error::InvalidArgument(format!("selmer_oracle needs n <= {MAX_N}")));
    }
    let n = sf.n;
    let mut places = vec![Place::Finite(2)];
    places.extend(sf.primes.iter().map(|&p| Place::Finite(p)));
    places.push(Place::Infinite);

    let odd = sf.odd_divisors();
    let mut candidates = Vec::new();
    for &a in &odd {
        for s in [1i64, -1, 2, -2] {
            candidates.push(s * a as i64);
        }
    }
    let mut full = BTreeSet::new();
    for &d1 in &candidates {
        for &d2 in &candidates {
            let t = SelmerTriple::from_d1_d2(d1, d2);
            if locally_solvable(t, n, &places)? {
                full.insert(t);
            }
        }
    }
    let torsion = torsion_images(n);
    if !torsion.iter().all(|t| full.contains(t)) {
        return Err(Error::VerificationFailed(format!(
            "torsion image of E_{n} not locally solvable"
        )));
    }
    let mut pure = BTreeSet::new();
    for t in &full {
        let reps: Vec<SelmerTriple> = torsion
            .iter()
            .map(|s| t.mul(s))
            .filter(|r| is_canonical(r, sf.is_even))
            .collect();
        match reps.as_slice() {
            [r] => {
                pure.insert(*r);
            }
            _ => {
                return Err(Error::VerificationFailed(format!(
                    "coset of {t} has {} canonical representatives",
                    reps.len()
                )))
            }
        }
    }
    debug_assert!(pure
        .iter()
        .all(|t| squarefree_part(t.d1 as i128 * t.d2 as i128 * t.d3 as i128) == 1));
    Ok(pure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{s2, selmer_elements};

    #[test]
    fn matches_kernel_enumeration() {
        for n in [17i128, 34, 5, 6, 41, 161] {
            let sf = SquareFreeN::new(n).unwrap();
            let oracle = selmer_oracle(&sf).unwrap();
            assert_eq!(oracle, selmer_elements(&sf).unwrap(), "{n}");
            assert_eq!(oracle.len(), 1 << s2(&sf).unwrap());
        }
    }
}
