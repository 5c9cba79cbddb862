// SPDX-License-Identifier: Apache-2.0

//! Torsors `D_Λ`, tangent data, local points and the Cassels pairing on the
//! pure 2-Selmer group when `s_2(n) = 2`.

use std::collections::VecDeque;

use num_rational::Ratio;
use serde::Serialize;

use crate::arith::modular::{checked_pow, inv_mod, mul_mod, reduce, residue_valuation, valuation};
use crate::arith::{hilbert, hilbert_approx, jacobi, legendre, quad_jacobi, sqrt_mod, Place, QuadExpr, SquareFreeN};
use crate::criteria::distinguished_divisor;
use crate::error::{Error, Result};
use crate::matrices::{s2, SelmerTriple};
use crate::reps::{rep_2mu2_tau2, Rep2MuTau};

/// A diagonal quadratic form `c_0 t^2 + c_1 u_1^2 + c_2 u_2^2 + c_3 u_3^2`.
pub type Diagonal = [i128; 4];

/// The three quadrics cutting out `D_Λ` in `P^3`, each divided by its
/// content.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsorSystem {
    pub n: u64,
    pub lambda: SelmerTriple,
    pub forms: [Diagonal; 3],
}

fn content_free(f: Diagonal) -> Diagonal {
    let g = f.iter().fold(0i128, |g, &c| crate::arith::modular::gcd(g, c));
    f.map(|c| c / g)
}

/// `H_1 = -n t^2 + d_2 u_2^2 - d_3 u_3^2`, `H_2 = -n t^2 + d_3 u_3^2 - d_1 u_1^2`,
/// `H_3 = 2n t^2 + d_1 u_1^2 - d_2 u_2^2`.
pub fn torsor(lambda: SelmerTriple, n: u64) -> TorsorSystem {
    let (d1, d2, d3) = (lambda.d1 as i128, lambda.d2 as i128, lambda.d3 as i128);
    let n128 = n as i128;
    TorsorSystem {
        n,
        lambda,
        forms: [
            content_free([-n128, 0, d2, -d3]),
            content_free([-n128, -d1, 0, d3]),
            content_free([2 * n128, d1, -d2, 0]),
        ],
    }
}

pub fn eval_form(f: &Diagonal, x: &[i128; 4]) -> i128 {
    f.iter().zip(x).map(|(c, v)| c * v * v).sum()
}

fn eval_linear(l: &[i128; 4], x: &[i128; 4]) -> i128 {
    l.iter().zip(x).map(|(c, v)| c * v).sum()
}

/// A rational point `Q` on one quadric and the linear form of its tangent
/// plane there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentData {
    /// Index `i` of `H_i`, 1-based.
    pub form: usize,
    pub q: [i128; 4],
    pub l: [i128; 4],
}

impl TangentData {
    /// `H_i(Q) = 0` exactly and `L` is a nonzero multiple of `∇H_i(Q)`.
    pub fn is_tangent(&self, ts: &TorsorSystem) -> bool {
        let f = &ts.forms[self.form - 1];
        if eval_form(f, &self.q) != 0 || eval_linear(&self.l, &self.q) != 0 || self.l.iter().all(|&c| c == 0) {
            return false;
        }
        let grad: Vec<i128> = (0..4).map(|j| 2 * f[j] * self.q[j]).collect();
        (0..4).all(|i| (0..4).all(|j| grad[i] * self.l[j] == grad[j] * self.l[i]))
    }
}

/// The data entering `⟨Λ, Λ'⟩` for `Λ = (1, n', n')`, `Λ' = (d, 1, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairingSetup {
    pub torsor: TorsorSystem,
    pub tangents: [TangentData; 2],
    pub d: i64,
    /// `(μ, τ)` with `μ ≡ d mod 4`; odd `n` only.
    pub rep: Option<Rep2MuTau>,
}

impl PairingSetup {
    pub fn new(sf: &SquareFreeN) -> Result<Self> {
        let d = distinguished_divisor(sf)?;
        let np = sf.odd_part as i128;
        let lambda = SelmerTriple {
            d1: 1,
            d2: np as i64,
            d3: np as i64,
        };
        let ts = torsor(lambda, sf.n);
        let t1 = TangentData {
            form: 1,
            q: [0, 0, 1, 1],
            l: [0, 0, 1, -1],
        };
        let (t3, rep) = if sf.is_even {
            (
                TangentData {
                    form: 3,
                    q: [np - 1, 4 * np, 2 * np + 2, 0],
                    l: [2 * (np - 1), 2, -(np + 1), 0],
                },
                None,
            )
        } else {
            let rep = rep_2mu2_tau2(np, d as i128)?;
            let uw = rep.to_u_w();
            (
                TangentData {
                    form: 3,
                    q: [uw.w, np, uw.u, 0],
                    l: [2 * uw.w, 1, -uw.u, 0],
                },
                Some(rep),
            )
        };
        Ok(PairingSetup {
            torsor: ts,
            tangents: [t1, t3],
            d,
            rep,
        })
    }

    /// `Λ' = (d, 1, d)`.
    pub fn lambda_prime(&self) -> SelmerTriple {
        SelmerTriple {
            d1: self.d,
            d2: 1,
            d3: self.d,
        }
    }
}

/// The pairing symbol in closed form: `(-μ / d)` for odd `n` and
/// `((2 - √2) / |d|)` for even `n`.
pub fn closed_form_pairing(sf: &SquareFreeN, d: i64, mu: Option<i64>) -> Result<i8> {
    if sf.is_even {
        quad_jacobi(&QuadExpr::new(2, -1, 2)?, d.unsigned_abs())
    } else {
        let mu = mu.ok_or_else(|| Error::InvalidArgument("odd n needs μ".into()))?;
        jacobi(-(mu as i128), d as i128)
    }
}

/// Sign of `a + b√2`.
fn sign_plus_sqrt2(a: i128, b: i128) -> i128 {
    let (sa, sb) = (a.signum(), b.signum());
    if sa == sb || sb == 0 {
        sa
    } else if sa == 0 {
        sb
    } else {
        let cmp = (a * a).cmp(&(2 * b * b));
        match cmp {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }
}

const MAX_RETRIES: u32 = 4;

fn start_precision(n: u64, p: u64) -> u32 {
    let (v, _) = valuation(4 * (n as i128) * (n as i128), p);
    v + 3
}

/// `(L_1 L_3 (P_v), d)_v` at an explicit local point.
///
/// Only places dividing `2n∞` are evaluated. At primes of good reduction
/// the factor is `+1`, and such places are rejected here.
pub fn local_pairing(sf: &SquareFreeN, v: Place) -> Result<i8> {
    local_pairing_with(&PairingSetup::new(sf)?, sf, v)
}

pub fn local_pairing_with(setup: &PairingSetup, sf: &SquareFreeN, v: Place) -> Result<i8> {
    let d = setup.d as i128;
    let p = match v {
        Place::Infinite => return Ok(real_pairing(setup, sf)),
        Place::Finite(p) if p == 2 || sf.odd_part.is_multiple_of(p) => p,
        Place::Finite(p) => return Err(Error::PreconditionFailed(format!("{p} does not divide 2n"))),
    };
    let mut e = start_precision(sf.n, p);
    for _ in 0..=MAX_RETRIES {
        let x = explicit_l1l3(setup, sf, p, e)?;
        match hilbert_approx(x, e, d, p) {
            Err(Error::PrecisionExhausted { .. }) => e *= 2,
            other => return other,
        }
    }
    Err(Error::PrecisionExhausted { p })
}

/// `L_1 L_3` at the explicit point, modulo `p^e`.
fn explicit_l1l3(setup: &PairingSetup, sf: &SquareFreeN, p: u64, e: u32) -> Result<u128> {
    let m = checked_pow(p, e).ok_or(Error::PrecisionExhausted { p })?;
    let np = sf.odd_part as i128;
    let r = |x: i128| reduce(x, m);
    let x = match (sf.is_even, p) {
        // P = (0, √n, 1, -1): L_1 = 2, L_3 = √n - u.
        (false, 2) => {
            let u = setup.rep.expect("odd setup").to_u_w().u;
            let s = sqrt_mod(np, 2, e)?;
            mul_mod(2, r(s as i128 - u), m)
        }
        // P = (1, 0, √2, 1) with √2 ≡ -u/w: L_1 = √2 - 1, L_3 = 2w - u√2.
        (false, _) => {
            let uw = setup.rep.expect("odd setup").to_u_w();
            let mut s = sqrt_mod(2, p, e)?;
            let w_inv = inv_mod(uw.w, p as u128).ok_or(Error::NotCoprime { a: uw.w, b: p as i128 })?;
            if s % p as u128 != mul_mod(r(-uw.u), w_inv, p as u128) {
                s = m - s;
            }
            let l3 = r(2 * uw.w + mul_mod(r(-uw.u), s, m) as i128);
            mul_mod(r(s as i128 - 1), l3, m)
        }
        // P = (0, √n', 1, -1): L_1 L_3 = 2(2√n' - n' - 1).
        (true, 2) => {
            let s = sqrt_mod(np, 2, e)?;
            r(2 * (2 * s as i128 - np - 1))
        }
        // P = (1, 0, 2, √2): L_1 L_3 = -4(2 - √2).
        (true, _) => {
            let s = sqrt_mod(2, p, e)?;
            mul_mod(r(-4), r(2 - s as i128), m)
        }
    };
    Ok(x)
}

/// The real factor, from the sign of `L_1 L_3` at the real point of the
/// same shape (`√2 > 0`).
fn real_pairing(setup: &PairingSetup, sf: &SquareFreeN) -> i8 {
    let sign = if sf.is_even {
        -1
    } else {
        let uw = setup.rep.expect("odd setup").to_u_w();
        sign_plus_sqrt2(2 * uw.w, -uw.u)
    };
    assert!(sign != 0, "L_1 L_3 vanishes at the real point");
    hilbert(sign, setup.d as i128, Place::Infinite)
}

/// The places where the local factor is evaluated: 2, the odd primes of
/// `n`, and ∞.
pub fn pairing_places(sf: &SquareFreeN) -> Vec<Place> {
    let mut v = vec![Place::Finite(2)];
    v.extend(sf.primes.iter().map(|&p| Place::Finite(p)));
    v.push(Place::Infinite);
    v
}

/// `∏_v ⟨Λ, Λ'⟩_v` over [`pairing_places`].
pub fn local_pairing_product(sf: &SquareFreeN) -> Result<i8> {
    let setup = PairingSetup::new(sf)?;
    pairing_places(sf)
        .into_iter()
        .try_fold(1i8, |acc, v| Ok(acc * local_pairing_with(&setup, sf, v)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairingMatrix {
    /// Gram matrix in multiplicative notation.
    pub gram: [[i8; 2]; 2],
    pub nondegenerate: bool,
}

/// Gram matrix of the pairing on a basis of the pure 2-Selmer group.
pub fn pairing_matrix(sf: &SquareFreeN) -> Result<PairingMatrix> {
    let s = if sf.k() == 0 { 0 } else { s2(sf)? };
    if s != 2 {
        return Err(Error::NotRankTwo { n: sf.n, s2: s });
    }
    let setup = PairingSetup::new(sf)?;
    let mu = setup.rep.map(|r| r.mu as i64);
    let c = closed_form_pairing(sf, setup.d, mu)?;
    Ok(PairingMatrix {
        gram: [[1, c], [c, 1]],
        nondegenerate: c == -1,
    })
}

/// A point of `D_Λ` over `Q_v`.
///
/// At a finite place the coordinates are residues modulo `p^precision`,
/// scaled to be integral. At ∞ the exact squares of the coordinates are
/// recorded instead; the forms are linear in them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalPoint {
    pub place: Place,
    pub coords: [u128; 4],
    pub precision: u32,
    pub real_squares: Option<[Ratio<i128>; 4]>,
    /// Least valuation of the residuals `H_i(P)`.
    pub residual_valuation: u32,
    /// Least valuation of a 2×2 minor of the Jacobian of `(H_1, H_2)`.
    pub minor_valuation: Option<u32>,
    /// Least valuation of the coordinates.
    pub content_valuation: u32,
}

impl LocalPoint {
    /// After dividing out the content `p^c`, residuals vanish modulo
    /// `p^{2e+1}` where `e` is the minor valuation.
    pub fn hensel_certified(&self) -> bool {
        match (self.place, self.minor_valuation) {
            (Place::Infinite, _) => true,
            (_, Some(e)) => self.residual_valuation + 2 * self.content_valuation > 2 * e,
            _ => false,
        }
    }
}

/// `x` is a nonzero square in `Q_p`, given exactly.
fn is_padic_square(x: i128, p: u64) -> bool {
    if x == 0 {
        return true;
    }
    let (v, u) = valuation(x, p);
    v % 2 == 0
        && if p == 2 {
            u.rem_euclid(8) == 1
        } else {
            legendre(u, p) == 1
        }
}

/// `c0 + c2 x^2`.
#[derive(Clone, Copy)]
struct Binomial {
    c0: i128,
    c2: i128,
}

impl Binomial {
    fn exact(&self, x: i128) -> Option<i128> {
        self.c2.checked_mul(x.checked_mul(x)?)?.checked_add(self.c0)
    }

    fn residue(&self, x: i128, m: u128) -> u128 {
        let x = reduce(x, m);
        (reduce(self.c0, m) + mul_mod(reduce(self.c2, m), mul_mod(x, x, m), m)) % m
    }
}

enum ClassInfo {
    Square,
    NonSquare,
    Unknown,
}

/// Square class of `f(x0)` itself, using the exact value when it fits and
/// a residue modulo `p^mexp` otherwise.
fn point_class(f: &Binomial, x0: i128, p: u64, mexp: u32, m: u128) -> ClassInfo {
    if let Some(v) = f.exact(x0) {
        return if is_padic_square(v, p) {
            ClassInfo::Square
        } else {
            ClassInfo::NonSquare
        };
    }
    class_mod(f.residue(x0, m), p, mexp)
}

fn class_mod(r: u128, p: u64, prec: u32) -> ClassInfo {
    let c = if p == 2 { 3 } else { 1 };
    match residue_valuation(r, p, prec) {
        Some(v) if v + c <= prec => {
            if is_padic_square(r as i128, p) {
                ClassInfo::Square
            } else {
                ClassInfo::NonSquare
            }
        }
        _ => ClassInfo::Unknown,
    }
}

fn padic_sqrt(x: i128, p: u64, e: u32, m: u128) -> Result<u128> {
    if x == 0 {
        return Ok(0);
    }
    let (v, u) = valuation(x, p);
    let root = sqrt_mod(u, p, e.max(3))? % m;
    let scale = checked_pow(p, v / 2).map(|s| s % m).unwrap_or(0);
    Ok(mul_mod(root, scale, m))
}

fn largest_exponent(p: u64) -> u32 {
    let mut e = 1;
    while checked_pow(p, e + 1).is_some_and(|m| m < 1 << 62) {
        e += 1;
    }
    e
}

/// Searches `D_Λ(Q_v)` for a point.
///
/// At a prime `p` the pencil `(t : u_3)` is refined `p`-adically; a residue
/// class is discarded as soon as one of `d_1(d_3 u_3^2 - n t^2)`,
/// `d_2(n t^2 + d_3 u_3^2)` has a determined non-square class on it. The
/// search is exhaustive, so `NoPoint` is a proof of insolvability;
/// `PrecisionExhausted` is returned if depth `e` is reached first.
pub fn local_point_search(ts: &TorsorSystem, v: Place, e: u32) -> Result<LocalPoint> {
    local_point_search_with(ts, v, e, |_| true)
}

/// [`local_point_search`], returning the first point accepted by `accept`.
pub fn local_point_search_with(
    ts: &TorsorSystem,
    v: Place,
    e: u32,
    mut accept: impl FnMut(&LocalPoint) -> bool,
) -> Result<LocalPoint> {
    let p = match v {
        Place::Infinite => return real_point(ts),
        Place::Finite(p) => p,
    };
    let (d1, d2, d3) = (ts.lambda.d1 as i128, ts.lambda.d2 as i128, ts.lambda.d3 as i128);
    let n = ts.n as i128;
    let mexp = largest_exponent(p);
    let depth = e.min(mexp);
    let m = checked_pow(p, mexp).expect("bounded exponent");
    let pp = p as i128;
    // Chart A: (t, u3) = (x, 1). Chart B: (t, u3) = (1, p x).
    let charts = [
        (
            Binomial {
                c0: d1 * d3,
                c2: -d1 * n,
            },
            Binomial {
                c0: d2 * d3,
                c2: d2 * n,
            },
        ),
        (
            Binomial {
                c0: -d1 * n,
                c2: d1 * d3 * pp * pp,
            },
            Binomial {
                c0: d2 * n,
                c2: d2 * d3 * pp * pp,
            },
        ),
    ];
    let mut exhausted = false;
    for (chart, (f, g)) in charts.iter().enumerate() {
        // Breadth first, so small representatives are tried before deep ones.
        let mut queue = VecDeque::from([(0i128, 0u32, true)]);
        while let Some((x0, j, fresh)) = queue.pop_front() {
            if fresh {
                if let (ClassInfo::Square, ClassInfo::Square) =
                    (point_class(f, x0, p, mexp, m), point_class(g, x0, p, mexp, m))
                {
                    let (t, u3) = if chart == 0 { (x0, 1) } else { (1, pp * x0) };
                    if let (Some(fx), Some(gx)) = (f.exact(x0), g.exact(x0)) {
                        let point = build_point(ts, p, depth, [t, u3], fx, gx)?;
                        if accept(&point) {
                            return Ok(point);
                        }
                    }
                }
            }
            if j > 0 {
                let pj = checked_pow(p, j).expect("bounded exponent");
                let class_f = class_mod(f.residue(x0, m) % pj, p, j);
                let class_g = class_mod(g.residue(x0, m) % pj, p, j);
                match (class_f, class_g) {
                    (ClassInfo::NonSquare, _) | (_, ClassInfo::NonSquare) => continue,
                    // Every member gives a point; refining only moves along the class.
                    (ClassInfo::Square, ClassInfo::Square) => {
                        exhausted = true;
                        continue;
                    }
                    _ => {}
                }
            }
            if j == depth {
                exhausted = true;
                continue;
            }
            let step = checked_pow(p, j).expect("bounded exponent") as i128;
            for r in 0..p as i128 {
                queue.push_back((x0 + r * step, j + 1, r != 0));
            }
        }
    }
    if exhausted {
        Err(Error::PrecisionExhausted { p })
    } else {
        Err(Error::NoPoint { place: v.to_string() })
    }
}

fn build_point(ts: &TorsorSystem, p: u64, e: u32, tu3: [i128; 2], fx: i128, gx: i128) -> Result<LocalPoint> {
    let m = checked_pow(p, e).ok_or(Error::PrecisionExhausted { p })?;
    let (d1, d2) = (ts.lambda.d1 as i128, ts.lambda.d2 as i128);
    let scale = reduce(d1 * d2, m);
    let coords = [
        mul_mod(reduce(tu3[0], m), scale, m),
        mul_mod(padic_sqrt(fx, p, e, m)?, reduce(d2, m), m),
        mul_mod(padic_sqrt(gx, p, e, m)?, reduce(d1, m), m),
        mul_mod(reduce(tu3[1], m), scale, m),
    ];
    let residual_valuation = ts
        .forms
        .iter()
        .map(|f| residue_valuation(eval_mod(f, &coords, m), p, e).unwrap_or(e))
        .min()
        .expect("three forms");
    let mut minor_valuation = None;
    for i in 0..4 {
        for j in i + 1..4 {
            let (a, b) = (&ts.forms[0], &ts.forms[1]);
            let det = reduce(4 * (a[i] * b[j] - a[j] * b[i]), m);
            let minor = mul_mod(det, mul_mod(coords[i], coords[j], m), m);
            if let Some(v) = residue_valuation(minor, p, e) {
                minor_valuation = Some(minor_valuation.map_or(v, |w: u32| w.min(v)));
            }
        }
    }
    let content_valuation = coords
        .iter()
        .map(|&x| residue_valuation(x, p, e).unwrap_or(e))
        .min()
        .expect("four coordinates");
    Ok(LocalPoint {
        place: Place::Finite(p),
        coords,
        precision: e,
        real_squares: None,
        residual_valuation,
        minor_valuation,
        content_valuation,
    })
}

fn eval_mod(f: &Diagonal, x: &[u128; 4], m: u128) -> u128 {
    f.iter().zip(x).fold(0, |acc, (&c, &v)| {
        (acc + mul_mod(reduce(c, m), mul_mod(v, v, m), m)) % m
    })
}

/// Real solvability: with `s = t^2 / u_3^2` the conditions are linear in `s`,
/// so it is enough to test `s = 0`, `s = |d_3| / n` and `u_3 = 0`.
fn real_point(ts: &TorsorSystem) -> Result<LocalPoint> {
    let (d1, d2, d3) = (ts.lambda.d1 as i128, ts.lambda.d2 as i128, ts.lambda.d3 as i128);
    let n = ts.n as i128;
    let candidates = [
        (Ratio::from_integer(0), Ratio::from_integer(1)),
        (Ratio::new(d3.abs(), n), Ratio::from_integer(1)),
        (Ratio::from_integer(1), Ratio::from_integer(0)),
    ];
    for (t2, u32_) in candidates {
        let f = (Ratio::from_integer(d3) * u32_ - Ratio::from_integer(n) * t2) * d1;
        let g = (Ratio::from_integer(n) * t2 + Ratio::from_integer(d3) * u32_) * d2;
        let zero = Ratio::from_integer(0);
        if f >= zero && g >= zero && (f > zero || g > zero || t2 > zero) {
            let squares = [t2, f / (d1 * d1), g / (d2 * d2), u32_];
            let ok = ts
                .forms
                .iter()
                .all(|h| h.iter().zip(&squares).fold(zero, |acc, (&c, s)| acc + *s * c) == zero);
            if !ok {
                return Err(Error::VerificationFailed("real point misses a form".into()));
            }
            return Ok(LocalPoint {
                place: Place::Infinite,
                coords: [0; 4],
                precision: 0,
                real_squares: Some(squares),
                residual_valuation: 0,
                minor_valuation: None,
                content_valuation: 0,
            });
        }
    }
    Err(Error::NoPoint {
        place: Place::Infinite.to_string(),
    })
}

/// `∏_i (L_i(P), d'_i)_p` at a searched local point, with `L_2` absent
/// (`d'_2 = 1` for `Λ' = (d, 1, d)`).
pub fn local_factor_at(setup: &PairingSetup, pt: &LocalPoint) -> Result<i8> {
    let p = match pt.place {
        Place::Finite(p) => p,
        Place::Infinite => return Err(Error::InvalidArgument("finite places only".into())),
    };
    let m = checked_pow(p, pt.precision).ok_or(Error::PrecisionExhausted { p })?;
    let lin = |l: &[i128; 4]| {
        l.iter()
            .zip(&pt.coords)
            .fold(0u128, |acc, (&c, &x)| (acc + mul_mod(reduce(c, m), x, m)) % m)
    };
    let x = mul_mod(lin(&setup.tangents[0].l), lin(&setup.tangents[1].l), m);
    hilbert_approx(x, pt.precision, setup.d as i128, p)
}
