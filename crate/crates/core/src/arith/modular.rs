// SPDX-License-Identifier: Apache-2.0

//! Word-sized modular arithmetic. Moduli are kept below 2^64 so that products
//! of reduced residues fit in a `u128`.

pub const MAX_MODULUS: u128 = 1 << 63;

#[inline]
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(m <= u64::MAX as u128);
    (a % m) * (b % m) % m
}

pub fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed value into `[0, m)`.
#[inline]
pub fn reduce(a: i128, m: u128) -> u128 {
    a.rem_euclid(m as i128) as u128
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a as i128
}

/// Returns `(g, x, y)` with `a x + b y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i128, m: u128) -> Option<u128> {
    let (g, x, _) = ext_gcd(reduce(a, m) as i128, m as i128);
    (g == 1).then(|| reduce(x, m))
}

/// `⌊√n⌋` by Newton's method from a power of two above the root.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let bits = 128 - n.leading_zeros();
    let mut x = 1u128 << bits.div_ceil(2);
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Exact square root of a nonnegative perfect square.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n as u128);
    (r * r == n as u128).then_some(r as i128)
}

/// `p`-adic valuation and unit part of a nonzero integer.
pub fn valuation(mut x: i128, p: u64) -> (u32, i128) {
    assert!(x != 0, "valuation of zero");
    let p = p as i128;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    (v, x)
}

/// Valuation of a residue modulo `p^prec`; `None` when the residue is zero.
pub fn residue_valuation(x: u128, p: u64, prec: u32) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let (v, _) = valuation(x as i128, p);
    (v < prec).then_some(v)
}

/// `p^e`, or `None` if it would reach [`MAX_MODULUS`].
pub fn checked_pow(p: u64, e: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(p as u128)?;
        if acc >= MAX_MODULUS {
            return None;
        }
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_bezout() {
        for a in -30i128..30 {
            for b in -30i128..30 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert_eq!(g, gcd(a, b));
            }
        }
    }

    #[test]
    fn isqrt_boundaries() {
        for n in 0u128..2000 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        let big = (1u128 << 62) - 1;
        assert_eq!(isqrt(big * big), big);
        assert_eq!(isqrt(big * big - 1), big - 1);
        assert_eq!(isqrt(big * big + 2 * big), big);
        assert_eq!(isqrt(u128::MAX), u64::MAX as u128);
    }

    #[test]
    fn inverse() {
        assert_eq!(inv_mod(3, 17), Some(6));
        assert_eq!(inv_mod(-3, 17), Some(11));
        assert_eq!(inv_mod(4, 8), None);
    }
}
