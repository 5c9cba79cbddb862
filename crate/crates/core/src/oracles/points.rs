// SPDX-License-Identifier: Apache-2.0

//! Bounded search for rational points on `E_n : y^2 = x^3 - n^2 x`.

use num_rational::Ratio;
use serde::Serialize;

use crate::arith::modular::{exact_sqrt, gcd, isqrt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CongruentCurve {
    pub n: u64,
}

impl CongruentCurve {
    pub fn new(n: u64) -> Self {
        assert!(n > 0, "E_0 is singular");
        CongruentCurve { n }
    }

    /// `-16 (4 (-n^2)^3) = 64 n^6`.
    pub fn discriminant(&self) -> i128 {
        64 * (self.n as i128).pow(6)
    }

    pub fn contains(&self, x: Ratio<i128>, y: Ratio<i128>) -> bool {
        let n2 = Ratio::from_integer((self.n as i128).pow(2));
        y * y == x * x * x - n2 * x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RationalPoint {
    pub x: Ratio<i128>,
    pub y: Ratio<i128>,
}

/// A right triangle with rational sides `a^2 + b^2 = c^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Triangle {
    pub a: Ratio<i128>,
    pub b: Ratio<i128>,
    pub c: Ratio<i128>,
}

impl Triangle {
    pub fn area(&self) -> Ratio<i128> {
        self.a * self.b / 2
    }

    pub fn is_right(&self) -> bool {
        self.a * self.a + self.b * self.b == self.c * self.c
    }
}

fn abs(r: Ratio<i128>) -> Ratio<i128> {
    if r < Ratio::from_integer(0) {
        -r
    } else {
        r
    }
}

impl RationalPoint {
    /// Sides `|x^2 - n^2| / |y|`, `|2 n x| / |y|`, `(x^2 + n^2) / |y|`.
    pub fn triangle(&self, n: u64) -> Option<Triangle> {
        if self.y == Ratio::from_integer(0) {
            return None;
        }
        let n = Ratio::from_integer(n as i128);
        let y = abs(self.y);
        let x2 = self.x * self.x;
        Some(Triangle {
            a: abs(x2 - n * n) / y,
            b: abs(n * self.x * 2) / y,
            c: (x2 + n * n) / y,
        })
    }
}

/// All points with `x = u / v^2` in lowest terms, `|u| <= h`, `v <= √h`,
/// `y > 0`, other than the 2-torsion.
pub fn point_search(curve: &CongruentCurve, h: u64) -> Vec<RationalPoint> {
    let n = curve.n as i128;
    let h = h as i128;
    let vmax = isqrt(h as u128) as i128;
    let mut out = Vec::new();
    for v in 1..=vmax {
        let v2 = v * v;
        let nv2 = n * v2;
        for u in -h.min(nv2)..=h {
            // x^3 - n^2 x >= 0 needs -n <= x <= 0 or x >= n
            if (u > 0 && u < nv2) || u == 0 || u == -nv2 || u == nv2 || gcd(u, v) != 1 {
                continue;
            }
            let num = u * (u * u - nv2 * nv2);
            if let Some(r) = exact_sqrt(num) {
                let x = Ratio::new(u, v2);
                let y = Ratio::new(r, v2 * v);
                out.push(RationalPoint { x, y });
            }
        }
    }
    out.sort_by_key(|p| p.x);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let pts = point_search(&CongruentCurve::new(5), 100);
        assert!(pts.contains(&RationalPoint {
            x: Ratio::from_integer(-4),
            y: Ratio::from_integer(6)
        }));
        let pts = point_search(&CongruentCurve::new(6), 100);
        assert!(pts.contains(&RationalPoint {
            x: Ratio::from_integer(-3),
            y: Ratio::from_integer(9)
        }));
        assert!(point_search(&CongruentCurve::new(17), 10_000).is_empty());
    }

    #[test]
    fn points_give_triangles() {
        for n in [5u64, 6, 7, 14, 15] {
            let curve = CongruentCurve::new(n);
            let pts = point_search(&curve, 2000);
            assert!(!pts.is_empty(), "{n}");
            for p in pts {
                assert!(curve.contains(p.x, p.y));
                let t = p.triangle(n).unwrap();
                assert!(t.is_right());
                assert_eq!(t.area(), Ratio::from_integer(n as i128));
            }
        }
    }
}
