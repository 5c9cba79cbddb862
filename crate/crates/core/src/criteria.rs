// SPDX-License-Identifier: Apache-2.0

//! The distinguished divisor, the rank-two criteria for odd and even `n`,
//! the tame-kernel corollaries and the final classification.

use std::fmt;

use serde::Serialize;

use crate::arith::{hilbert, jacobi, quad_jacobi, relevant_places, QuadExpr, SquareFreeN};
use crate::cassels::closed_form_pairing;
use crate::error::{Error, Result};
use crate::f2linalg::F2Matrix;
use crate::matrices::{build_a, build_d, h4, s2};
use crate::oracles::classgroup::h8_oracle;
use crate::reps::{all_a2_8b2, fundamental_2mu2_tau2, rep_2mu2_tau2, rep_u2_2w2};
use crate::tame::r4_tame;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VerdictKind {
    NonCongruentSha22,
    CriterionFails,
    S2NotTwo,
    NotEligible,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VerdictKind::NonCongruentSha22 => "NonCongruentSha22",
            VerdictKind::CriterionFails => "CriterionFails",
            VerdictKind::S2NotTwo => "S2NotTwo",
            VerdictKind::NotEligible => "NotEligible",
        };
        f.write_str(s)
    }
}

/// One recorded intermediate: the field, its value and how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub field: String,
    pub value: String,
    pub provenance: String,
}

fn entry(field: &str, value: impl ToString, provenance: &str) -> TraceEntry {
    TraceEntry {
        field: field.into(),
        value: value.to_string(),
        provenance: provenance.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub n: u64,
    /// `None` when `n` is not square-free.
    pub s2: Option<usize>,
    pub h4_minus: Option<usize>,
    pub h4_plus: Option<usize>,
    pub d: Option<i64>,
    pub mu: Option<i64>,
    pub pairing_symbol: Option<i8>,
    pub verdict: VerdictKind,
    pub trace: Vec<TraceEntry>,
}

/// Outcome of a criterion together with everything it looked at.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub holds: bool,
    pub trace: Vec<TraceEntry>,
}

fn require_rank_two(sf: &SquareFreeN) -> Result<()> {
    let s = if sf.k() == 0 { 0 } else { s2(sf)? };
    if s != 2 {
        return Err(Error::NotRankTwo { n: sf.n, s2: s });
    }
    Ok(())
}

fn unique_kernel_element(m: &F2Matrix, sf: &SquareFreeN) -> Result<u64> {
    let basis = m.kernel_basis();
    if basis.len() != 1 {
        return Err(Error::NotRankTwo { n: sf.n, s2: 2 });
    }
    Ok(sf.psi(&basis[0]))
}

/// The unique `d ≠ 1` dividing `n` with `(d, n)_v = 1` everywhere: positive
/// for odd `n`, `≡ 1 mod 8` for even `n`.
pub fn distinguished_divisor(sf: &SquareFreeN) -> Result<i64> {
    require_rank_two(sf)?;
    let a = build_a(sf)?;
    let d = if sf.is_even {
        let d = unique_kernel_element(&a.transpose(), sf)? as i64;
        if d.rem_euclid(8) == 1 {
            d
        } else {
            -d
        }
    } else {
        unique_kernel_element(&(&a + &build_d(-1, sf)?), sf)? as i64
    };
    let n = sf.n as i128;
    let bad = relevant_places(&[d as i128, n])
        .into_iter()
        .find(|&v| hilbert(d as i128, n, v) != 1);
    if let Some(v) = bad {
        return Err(Error::VerificationFailed(format!(
            "(d, n)_{v} = -1 for d = {d}, n = {}",
            sf.n
        )));
    }
    if d.rem_euclid(8) != 1 && sf.is_even {
        return Err(Error::VerificationFailed(format!("d = {d} is not 1 mod 8")));
    }
    Ok(d)
}

fn check_odd(sf: &SquareFreeN) -> Result<()> {
    if sf.is_even || sf.n % 8 != 1 || !sf.eligible {
        return Err(Error::PreconditionFailed(format!(
            "{} is not an eligible n ≡ 1 mod 8",
            sf.n
        )));
    }
    Ok(())
}

fn check_even(sf: &SquareFreeN) -> Result<()> {
    if sf.n % 8 != 2 || !sf.eligible {
        return Err(Error::PreconditionFailed(format!(
            "{} is not an eligible n ≡ 2 mod 8",
            sf.n
        )));
    }
    Ok(())
}

/// `h_4(-n) = 1`, `h_4(n) = 0` and `(-μ/d) = -1`.
pub fn thm_main1_lhs(sf: &SquareFreeN) -> Result<Condition> {
    check_odd(sf)?;
    let n = sf.n as i64;
    let mut trace = Vec::new();
    if sf.k() == 0 {
        trace.push(entry("k", 0, "factorization"));
        return Ok(Condition { holds: false, trace });
    }
    let minus = h4(-n)?;
    trace.push(entry("h4_minus", minus, "redei-rank"));
    if minus != 1 {
        return Ok(Condition { holds: false, trace });
    }
    let plus = h4(n)?;
    trace.push(entry("h4_plus", plus, "redei-rank"));
    if plus != 0 {
        return Ok(Condition { holds: false, trace });
    }
    let d = distinguished_divisor(sf)?;
    trace.push(entry("d", d, "kernel(A+D_-1)"));
    let rep = rep_2mu2_tau2(n as i128, d as i128)?;
    trace.push(entry("mu", rep.mu, "least 2mu^2-tau^2, mu = d mod 4"));
    let symbol = jacobi(-rep.mu, d as i128)?;
    trace.push(entry("pairing_symbol", symbol, "jacobi(-mu, d)"));
    Ok(Condition {
        holds: symbol == -1,
        trace,
    })
}

/// `h_4(-n/2) = 1` and `((2 - √2) / |d|) = -1`.
pub fn thm_main2_lhs(sf: &SquareFreeN) -> Result<Condition> {
    check_even(sf)?;
    let mut trace = Vec::new();
    if sf.k() == 0 {
        trace.push(entry("k", 0, "factorization"));
        return Ok(Condition { holds: false, trace });
    }
    let minus = h4(-(sf.odd_part as i64))?;
    trace.push(entry("h4_minus", minus, "redei-rank"));
    if minus != 1 {
        return Ok(Condition { holds: false, trace });
    }
    let d = distinguished_divisor(sf)?;
    trace.push(entry("d", d, "kernel(A^T)"));
    let symbol = quad_jacobi(&QuadExpr::new(2, -1, 2)?, d.unsigned_abs())?;
    trace.push(entry("pairing_symbol", symbol, "quad_jacobi(2-sqrt2, |d|)"));
    Ok(Condition {
        holds: symbol == -1,
        trace,
    })
}

fn verdict_shell(n: u64, kind: VerdictKind, trace: Vec<TraceEntry>) -> Verdict {
    Verdict {
        n,
        s2: None,
        h4_minus: None,
        h4_plus: None,
        d: None,
        mu: None,
        pairing_symbol: None,
        verdict: kind,
        trace,
    }
}

/// Applies the rank-two criterion to `n`. Never claims congruence:
/// `CriterionFails` only says the sufficient condition does not hold.
pub fn classify(n: u64) -> Verdict {
    let sf = match SquareFreeN::new(n as i128) {
        Ok(sf) => sf,
        Err(e) => return verdict_shell(n, VerdictKind::NotEligible, vec![entry("input", e, "factorization")]),
    };
    match classify_squarefree(&sf) {
        Ok(v) => v,
        Err(e) => verdict_shell(n, VerdictKind::NotEligible, vec![entry("error", e, "internal")]),
    }
}

fn classify_squarefree(sf: &SquareFreeN) -> Result<Verdict> {
    let n = sf.n;
    let s = if sf.k() == 0 { 0 } else { s2(sf)? };
    let mut v = verdict_shell(n, VerdictKind::NotEligible, vec![entry("s2", s, "monsky-rank")]);
    v.s2 = Some(s);
    if !sf.eligible || !(n % 8 == 1 || n % 8 == 2) {
        v.trace.push(entry("eligible", false, "residues mod 8"));
        return Ok(v);
    }
    if s != 2 {
        v.verdict = VerdictKind::S2NotTwo;
        return Ok(v);
    }
    let cond = if sf.is_even {
        thm_main2_lhs(sf)?
    } else {
        thm_main1_lhs(sf)?
    };
    for t in &cond.trace {
        match t.field.as_str() {
            "h4_minus" => v.h4_minus = t.value.parse().ok(),
            "h4_plus" => v.h4_plus = t.value.parse().ok(),
            "d" => v.d = t.value.parse().ok(),
            "mu" => v.mu = t.value.parse().ok(),
            "pairing_symbol" => v.pairing_symbol = t.value.parse().ok(),
            _ => {}
        }
    }
    v.trace.extend(cond.trace);
    let d =
        v.d.ok_or_else(|| Error::VerificationFailed(format!("rank bridge broken at n = {n}")))?;
    let closed = closed_form_pairing(sf, d, v.mu)?;
    v.trace.push(entry("closed_form_pairing", closed, "cassels"));
    if Some(closed) != v.pairing_symbol {
        return Err(Error::VerificationFailed(format!("pairing mismatch at n = {n}")));
    }
    v.verdict = if cond.holds {
        VerdictKind::NonCongruentSha22
    } else {
        VerdictKind::CriterionFails
    };
    Ok(v)
}

/// Tame-kernel route for strictly eligible `n`: `r_4(K_2 O_F) = 0` with
/// `F = Q(√n)` for odd `n` and `F = Q(√-n)` for even `n`.
pub fn corollary_lhs(sf: &SquareFreeN) -> Result<bool> {
    if !sf.strictly_eligible || !(sf.n % 8 == 1 || sf.n % 8 == 2) {
        return Err(Error::PreconditionFailed(format!("{} is not strictly eligible", sf.n)));
    }
    let m = if sf.is_even { -(sf.n as i64) } else { sf.n as i64 };
    Ok(r4_tame(m)? == 0)
}

/// The eight conditions of the 8-rank proposition for odd `n` whose primes
/// are all `1 mod 8`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropositionReport {
    pub n: u64,
    pub conditions: [(&'static str, bool); 8],
}

impl PropositionReport {
    pub fn all_equal(&self) -> bool {
        self.conditions.iter().all(|&(_, b)| b == self.conditions[0].1)
    }
}

fn check_proposition_input(sf: &SquareFreeN) -> Result<()> {
    if sf.is_even || !sf.strictly_eligible || sf.k() == 0 {
        return Err(Error::PreconditionFailed(format!(
            "{} needs odd primes all 1 mod 8",
            sf.n
        )));
    }
    Ok(())
}

/// The literal hypothesis `h_4(-n) = 0`. It never holds under the other
/// hypotheses (`h_4(-n) = k - rank A >= 1`), so this always fails.
pub fn proposition_conditions(sf: &SquareFreeN) -> Result<PropositionReport> {
    check_proposition_input(sf)?;
    let r = h4(-(sf.n as i64))?;
    if r != 0 {
        return Err(Error::PreconditionFailed(format!("h4(-{}) = {r}", sf.n)));
    }
    evaluate_proposition(sf)
}

/// The working reading: hypothesis `h_4(-n) = 1` and condition (vii) as
/// `h_8(-n) = 1`.
pub fn proposition_conditions_rank_one(sf: &SquareFreeN) -> Result<PropositionReport> {
    check_proposition_input(sf)?;
    let r = h4(-(sf.n as i64))?;
    if r != 1 {
        return Err(Error::PreconditionFailed(format!("h4(-{}) = {r}", sf.n)));
    }
    evaluate_proposition(sf)
}

fn evaluate_proposition(sf: &SquareFreeN) -> Result<PropositionReport> {
    let n = sf.n as i128;
    let b = all_a2_8b2(n)
        .into_iter()
        .find(|r| r.a % 2 == 1)
        .ok_or(Error::NoRepresentation {
            value: n,
            form: "a² + 8b²",
        })?
        .b;
    let one_plus_sqrt2 = quad_jacobi(&QuadExpr::new(1, 1, 2)?, sf.n)?;
    let one_plus_i = quad_jacobi(&QuadExpr::new(1, 1, -1)?, sf.n)?;
    let sqrt2 = quad_jacobi(&QuadExpr::new(0, 1, 2)?, sf.n)?;
    let sign = if ((n - 1) / 8) % 2 == 0 { 1 } else { -1 };
    let mut uw = rep_u2_2w2(n)?;
    if uw.w % 4 != 0 {
        uw = uw.pell_step();
    }
    let mu = fundamental_2mu2_tau2(n)?.mu;
    let h8 = h8_oracle(-(sf.n as i64))?;
    Ok(PropositionReport {
        n: sf.n,
        conditions: [
            ("2 | b", b % 2 == 0),
            ("(1+sqrt2 / n) = 1", one_plus_sqrt2 == 1),
            ("(1+sqrt-1 / n) = 1", one_plus_i == 1),
            ("(sqrt2 / n) = (-1)^((n-1)/8)", sqrt2 == sign),
            ("|u| = 1 mod 4", uw.u.abs() % 4 == 1),
            ("|mu| = 1 mod 4", mu.abs() % 4 == 1),
            ("h8(-n) = 1", h8 == 1),
            ("(mu / n) = 1", jacobi(mu, n)? == 1),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sf(n: i128) -> SquareFreeN {
        SquareFreeN::new(n).unwrap()
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(distinguished_divisor(&sf(17)), Ok(17));
        assert_eq!(distinguished_divisor(&sf(161)), Ok(23));
        assert_eq!(distinguished_divisor(&sf(34)), Ok(17));
        assert!(matches!(distinguished_divisor(&sf(15)), Err(Error::NotRankTwo { .. })));
    }

    #[test]
    fn condition_examples() {
        assert!(thm_main1_lhs(&sf(17)).unwrap().holds);
        assert!(!thm_main1_lhs(&sf(161)).unwrap().holds);
        assert!(!thm_main2_lhs(&sf(34)).unwrap().holds);
        assert!(thm_main2_lhs(&sf(15)).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(17).verdict, VerdictKind::NonCongruentSha22);
        assert_eq!(classify(34).verdict, VerdictKind::CriterionFails);
        assert_eq!(classify(15).verdict, VerdictKind::NotEligible);
        assert_eq!(classify(18).verdict, VerdictKind::NotEligible);
        assert_eq!(classify(1).verdict, VerdictKind::S2NotTwo);
        assert_eq!(classify(2).s2, Some(0));
        let v = classify(17);
        assert_eq!(
            (v.d, v.mu, v.pairing_symbol, v.h4_minus, v.h4_plus),
            (Some(17), Some(-3), Some(-1), Some(1), Some(0))
        );
    }

    #[test]
    fn proposition_hypotheses() {
        assert!(matches!(
            proposition_conditions(&sf(17)),
            Err(Error::PreconditionFailed(_))
        ));
        let r = proposition_conditions_rank_one(&sf(17)).unwrap();
        assert!(r.all_equal());
        assert!(!r.conditions[0].1);
        // 73 = 1 + 8·9: b odd; 113 = 81 + 32: b even.
        assert!(proposition_conditions_rank_one(&sf(113))
            .unwrap()
            .conditions
            .iter()
            .all(|c| c.1));
    }
}
