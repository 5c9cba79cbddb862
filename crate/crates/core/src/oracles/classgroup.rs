// SPDX-License-Identifier: Apache-2.0

//! Form class groups of fundamental discriminants.
//!
//! Negative discriminants use reduced positive definite forms. Positive ones
//! use the cycles of reduced indefinite forms under `ρ`, one cycle per
//! proper (narrow) class.

use std::collections::HashMap;

use serde::Serialize;

use crate::arith::modular::{ext_gcd, gcd, isqrt};
use crate::arith::{factorize, is_squarefree, kronecker};
use crate::error::{Error, Result};
use crate::matrices::field_discriminant;

pub const MAX_DISC: i64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BQForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BQForm {
    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a as i128, self.b as i128), self.c as i128) == 1
    }

    pub fn inverse(&self) -> BQForm {
        BQForm {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
    }

    fn with_b(a: i64, b: i64, disc: i64) -> BQForm {
        let c = (b as i128 * b as i128 - disc as i128) / (4 * a as i128);
        BQForm { a, b, c: c as i64 }
    }
}

fn principal(disc: i64) -> BQForm {
    let b = disc.rem_euclid(2);
    BQForm::with_b(1, b, disc)
}

/// Gauss composition of two primitive forms of the same discriminant.
pub fn compose(f: &BQForm, g: &BQForm) -> BQForm {
    let disc = f.disc() as i128;
    let (a1, b1) = (f.a as i128, f.b as i128);
    let (a2, b2) = (g.a as i128, g.b as i128);
    let beta = (b1 + b2) / 2;
    let (g1, x1, y1) = ext_gcd(a1, a2);
    let (e, x2, w) = ext_gcd(g1, beta);
    let (u, v) = (x1 * x2, y1 * x2);
    let a = a1 * a2 / (e * e);
    let two_a = 2 * a.abs();
    let b = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + disc) / 2) / e;
    let b = b.rem_euclid(two_a);
    let c = (b * b - disc) / (4 * a);
    debug_assert_eq!(b * b - 4 * a * c, disc);
    BQForm {
        a: a as i64,
        b: b as i64,
        c: c as i64,
    }
}

/// Reduced representative of a positive definite form.
fn reduce_definite(f: BQForm) -> BQForm {
    let disc = f.disc();
    let (mut a, mut b) = (f.a, f.b);
    loop {
        // b into (-a, a]
        let mut r = b.rem_euclid(2 * a);
        if r > a {
            r -= 2 * a;
        }
        b = r;
        let c = (b * b - disc) / (4 * a);
        if a > c {
            a = c;
            b = -b;
            continue;
        }
        if (a == c || b == -a) && b < 0 {
            b = -b;
        }
        return BQForm::with_b(a, b, disc);
    }
}

fn is_reduced_indefinite(f: &BQForm, s: i64) -> bool {
    let a2 = 2 * f.a.abs();
    f.b > 0 && f.b <= s && a2 + f.b > s && a2 - f.b <= s
}

/// One step of `ρ`: `(a, b, c) ↦ (c, b', ·)` with `b' ≡ -b mod 2c` normalized.
fn rho(f: &BQForm, s: i64) -> BQForm {
    let disc = f.disc();
    let c = f.c;
    let m = 2 * c.abs();
    let b = if c.abs() <= s {
        // largest b' <= s with b' ≡ -b mod 2|c|
        s - (s + f.b).rem_euclid(m)
    } else {
        let mut r = (-f.b).rem_euclid(m);
        if r > c.abs() {
            r -= m;
        }
        r
    };
    BQForm::with_b(c, b, disc)
}

fn reduce_indefinite(mut f: BQForm, s: i64) -> BQForm {
    while !is_reduced_indefinite(&f, s) {
        f = rho(&f, s);
    }
    f
}

/// Whether `disc` is the discriminant of a quadratic field.
pub fn is_fundamental(disc: i64) -> bool {
    if disc == 0 || disc == 1 {
        return false;
    }
    match disc.rem_euclid(4) {
        1 => is_squarefree(disc.unsigned_abs()),
        0 => {
            let m = disc / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// A form class group with exhaustive composition.
struct Group {
    disc: i64,
    sqrt_floor: i64,
    forms: Vec<BQForm>,
    index: HashMap<BQForm, usize>,
}

impl Group {
    fn build(disc: i64) -> Group {
        let s = if disc > 0 { isqrt(disc as u128) as i64 } else { 0 };
        let mut forms = Vec::new();
        let mut index = HashMap::new();
        if disc < 0 {
            let bound = isqrt((-disc / 3) as u128) as i64;
            for a in 1..=bound {
                for b in -a + 1..=a {
                    if (b - disc).rem_euclid(2) != 0 || (b * b - disc) % (4 * a) != 0 {
                        continue;
                    }
                    let f = BQForm::with_b(a, b, disc);
                    if f.c < a || (b < 0 && f.c == a) || !f.is_primitive() {
                        continue;
                    }
                    index.insert(f, forms.len());
                    forms.push(f);
                }
            }
        } else {
            let mut reduced = Vec::new();
            for b in (1..=s).filter(|b| (b - disc).rem_euclid(2) == 0) {
                let n = (disc - b * b) / 4;
                for (a, _) in divisor_pairs(n) {
                    for a in [a, -a] {
                        let f = BQForm::with_b(a, b, disc);
                        if is_reduced_indefinite(&f, s) && f.is_primitive() {
                            reduced.push(f);
                        }
                    }
                }
            }
            reduced.sort();
            let mut cycle_of = HashMap::new();
            for &f in &reduced {
                if cycle_of.contains_key(&f) {
                    continue;
                }
                let id = forms.len();
                forms.push(f);
                let mut g = f;
                loop {
                    cycle_of.insert(g, id);
                    g = rho(&g, s);
                    if g == f {
                        break;
                    }
                }
            }
            index = cycle_of;
        }
        Group {
            disc,
            sqrt_floor: s,
            forms,
            index,
        }
    }

    fn order(&self) -> usize {
        self.forms.len()
    }

    fn class_of(&self, f: BQForm) -> usize {
        let r = if self.disc < 0 {
            reduce_definite(f)
        } else {
            reduce_indefinite(f, self.sqrt_floor)
        };
        *self
            .index
            .get(&r)
            .unwrap_or_else(|| panic!("{r:?} is not among the reduced forms of {}", self.disc))
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        self.class_of(compose(&self.forms[x], &self.forms[y]))
    }

    fn identity(&self) -> usize {
        self.class_of(principal(self.disc))
    }

    fn pow(&self, x: usize, mut e: u64) -> usize {
        let mut acc = self.identity();
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `#C[p^a]` for `a = 0, 1, ...` until it stabilizes.
    fn torsion_counts(&self, p: u64) -> Vec<usize> {
        let id = self.identity();
        let mut current: Vec<usize> = (0..self.order()).collect();
        let mut counts = vec![1];
        loop {
            current = current.iter().map(|&x| self.pow(x, p)).collect();
            let killed = current.iter().filter(|&&x| x == id).count();
            if killed == *counts.last().expect("nonempty") {
                return counts;
            }
            counts.push(killed);
        }
    }
}

fn divisor_pairs(n: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push((d, n / d));
            if d != n / d {
                out.push((n / d, d));
            }
        }
        d += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassGroupReport {
    pub disc: i64,
    /// Narrow class number for positive discriminants.
    pub order: usize,
    /// Prime-power orders of the cyclic factors, increasing.
    pub elementary_divisors: Vec<u64>,
    /// `r_2, r_4, r_8`.
    pub ranks: [usize; 3],
    /// The reduced form chosen for each class.
    pub forms: Vec<BQForm>,
}

impl ClassGroupReport {
    pub fn r2(&self) -> usize {
        self.ranks[0]
    }
    pub fn r4(&self) -> usize {
        self.ranks[1]
    }
    pub fn r8(&self) -> usize {
        self.ranks[2]
    }
}

/// Number of cyclic factors of order at least `p^a` for each `a >= 1`.
fn ranks_from_counts(counts: &[usize], p: u64) -> Vec<usize> {
    counts
        .windows(2)
        .map(|w| {
            let ratio = (w[1] / w[0]) as u64;
            let mut r = 0;
            let mut x = 1;
            while x < ratio {
                x *= p;
                r += 1;
            }
            r
        })
        .collect()
}

pub fn class_group(disc: i64) -> Result<ClassGroupReport> {
    build_report(disc, true)
}

/// Like [`class_group`] but only the 2-part of the structure is computed;
/// `elementary_divisors` then lists the 2-power factors alone.
pub fn class_group_two_part(disc: i64) -> Result<ClassGroupReport> {
    build_report(disc, false)
}

fn build_report(disc: i64, all_primes: bool) -> Result<ClassGroupReport> {
    if disc.abs() > MAX_DISC {
        return Err(Error::TooLarge(disc));
    }
    if !is_fundamental(disc) {
        return Err(Error::NotFundamental(disc));
    }
    let g = Group::build(disc);
    let h = g.order();
    let mut elementary = Vec::new();
    let mut ranks = [0usize; 3];
    for (p, _) in factorize(h as u64) {
        if p != 2 && !all_primes {
            continue;
        }
        let r = ranks_from_counts(&g.torsion_counts(p), p);
        // r[a-1] factors have order >= p^a
        for a in 0..r.len() {
            let exactly = r[a] - r.get(a + 1).copied().unwrap_or(0);
            elementary.extend(std::iter::repeat_n(p.pow(a as u32 + 1), exactly));
        }
        if p == 2 {
            for (a, rank) in ranks.iter_mut().enumerate() {
                *rank = r.get(a).copied().unwrap_or(0);
            }
        }
    }
    elementary.sort_unstable();
    Ok(ClassGroupReport {
        disc,
        order: h,
        elementary_divisors: elementary,
        ranks,
        forms: g.forms,
    })
}

/// `h = -(1/|D|) Σ_{a<|D|} (D/a) a` for fundamental `D < -4`.
pub fn analytic_class_number(disc: i64) -> Result<usize> {
    if disc >= -4 || !is_fundamental(disc) {
        return Err(Error::NotFundamental(disc));
    }
    let d = -disc;
    let sum: i128 = (1..d)
        .map(|a| kronecker(disc as i128, a as i128) as i128 * a as i128)
        .sum();
    Ok((-sum / d as i128) as usize)
}

pub fn h4_oracle(m: i64) -> Result<usize> {
    Ok(class_group_two_part(field_discriminant(m))?.r4())
}

pub fn h8_oracle(m: i64) -> Result<usize> {
    Ok(class_group_two_part(field_discriminant(m))?.r8())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let g = class_group(-68).unwrap();
        assert_eq!(g.order, 4);
        assert_eq!(g.elementary_divisors, vec![4]);
        assert_eq!(g.ranks, [1, 1, 0]);
        let mut forms = g.forms.clone();
        forms.sort();
        assert_eq!(
            forms,
            vec![
                BQForm { a: 1, b: 0, c: 17 },
                BQForm { a: 2, b: 2, c: 9 },
                BQForm { a: 3, b: -2, c: 6 },
                BQForm { a: 3, b: 2, c: 6 }
            ]
        );
        let g = class_group(17).unwrap();
        assert_eq!((g.order, g.ranks), (1, [0, 0, 0]));
        assert_eq!(class_group(-4).unwrap().order, 1);
        assert_eq!(class_group(-12), Err(Error::NotFundamental(-12)));
        assert_eq!(class_group(-4_000_004), Err(Error::TooLarge(-4_000_004)));
    }

    #[test]
    fn narrow_class_numbers() {
        // Q(√3): the fundamental unit has norm +1, so h+ = 2 h.
        assert_eq!(class_group(12).unwrap().order, 2);
        assert_eq!(class_group(5).unwrap().order, 1);
        // Q(√34): h = 2, h+ = 4 (cyclic).
        let g = class_group(136).unwrap();
        assert_eq!((g.order, g.elementary_divisors.clone()), (4, vec![4]));
        // Q(√-1155): four prime discriminants
        assert_eq!(class_group(-1155).unwrap().r2(), 3);
    }

    #[test]
    fn oracle_ranks() {
        assert_eq!(h4_oracle(-17), Ok(1));
        assert_eq!(h4_oracle(17), Ok(0));
        assert_eq!(h8_oracle(-17), Ok(0));
        assert_eq!(h8_oracle(-113), Ok(1));
    }

    #[test]
    fn form_count_matches_analytic_formula() {
        for disc in (-3000i64..-4).filter(|&d| is_fundamental(d)) {
            assert_eq!(
                class_group(disc).unwrap().order,
                analytic_class_number(disc).unwrap(),
                "{disc}"
            );
        }
    }

    #[test]
    fn composition_is_a_group_law() {
        for disc in [-1155i64, -56, 136, 229, 4 * 79, 8 * 105] {
            let g = Group::build(disc);
            let id = g.identity();
            for x in 0..g.order() {
                assert_eq!(g.mul(x, id), x);
                assert_eq!(g.mul(x, g.class_of(g.forms[x].inverse())), id);
                for y in 0..g.order() {
                    assert_eq!(g.mul(x, y), g.mul(y, x));
                }
            }
        }
    }
}
