// SPDX-License-Identifier: Apache-2.0

//! Square roots modulo prime powers: Tonelli-Shanks followed by Hensel
//! lifting, with the usual special handling of 2.

use super::modular::{checked_pow, inv_mod, mul_mod, pow_mod, reduce};
use super::symbols::legendre;
use crate::error::{Error, Result};

fn tonelli_shanks(a: u128, p: u128) -> u128 {
    if p % 4 == 3 {
        return pow_mod(a, (p + 1) / 4, p);
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2u128;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

/// A square root of `a` modulo `p^e`.
///
/// For odd `p` the smaller of the two roots in `[0, p^e)` is returned. For
/// `p = 2` the root is only determined modulo `2^(e-1)` up to sign, and the
/// returned representative lies in `[1, 2^(e-1)]`.
pub fn sqrt_mod(a: i128, p: u64, e: u32) -> Result<u128> {
    if e == 0 {
        return Err(Error::InvalidArgument("precision exponent must be at least 1".into()));
    }
    let modulus = checked_pow(p, e).ok_or_else(|| Error::InvalidArgument(format!("{p}^{e} too large")))?;
    if p == 2 {
        if e < 3 {
            return Err(Error::InvalidArgument("2-adic square roots need e >= 3".into()));
        }
        if a % 2 == 0 {
            return Err(Error::InvalidArgument(format!("{a} is even")));
        }
        if a.rem_euclid(8) != 1 {
            return Err(Error::NoRoot { a, p, e });
        }
        let target = reduce(a, modulus);
        let mut s: u128 = 1;
        for k in 3..e {
            let m = 1u128 << (k + 1);
            if mul_mod(s, s, m) != target % m {
                s += 1 << (k - 1);
            }
        }
        let half = modulus / 2;
        let s = s % half;
        return Ok(s.min(half - s));
    }
    let pp = p as u128;
    if a.rem_euclid(p as i128) == 0 {
        return Err(Error::InvalidArgument(format!("{p} divides {a}")));
    }
    if legendre(a, p) != 1 {
        return Err(Error::NoRoot { a, p, e });
    }
    let mut s = tonelli_shanks(reduce(a, pp), pp);
    let mut m = pp;
    while m < modulus {
        m = (m * m).min(modulus);
        // Newton step: s <- s - (s^2 - a) / (2 s)
        let fx = (mul_mod(s, s, m) + m - reduce(a, m)) % m;
        let inv = inv_mod((2 * s) as i128, m).expect("2s is a unit");
        s = (s + m - mul_mod(fx, inv, m)) % m;
    }
    Ok(s.min(modulus - s))
}
