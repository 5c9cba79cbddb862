// SPDX-License-Identifier: Apache-2.0

//! Range scans: rows are computed in blocks of 1024 on a worker pool and
//! written strictly in order.

use std::io::{self, Write};
use std::path::Path;

use noncongruent::criteria::{classify, corollary_lhs, VerdictKind};
use noncongruent::matrices::field_discriminant;
use noncongruent::oracles::classgroup::MAX_DISC;
use noncongruent::oracles::h4_oracle;
use noncongruent::SquareFreeN;
use rayon::prelude::*;
use serde::Serialize;

pub const BLOCK: u64 = 1024;
pub const MAX_N: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Any,
    Odd,
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    /// Every square-free `n`.
    All,
    /// `n ≡ 1, 2 mod 8` with odd primes `±1 mod 8`, including `k = 0`.
    Domain,
    /// As `Domain` with `k >= 1`.
    Eligible,
    /// Odd primes all `1 mod 8`, `k >= 1`.
    Strict,
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub parity: Parity,
    pub selection: Selection,
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub n: u64,
    pub k: usize,
    pub eligible: bool,
    pub strict: bool,
    pub s2: Option<usize>,
    pub h4_minus: Option<usize>,
    pub h4_plus: Option<usize>,
    pub d: Option<i64>,
    pub mu: Option<i64>,
    pub symbol: Option<i8>,
    pub verdict: VerdictKind,
    /// Rédei 4-ranks agree with the form class group; `None` when not
    /// computed or out of the oracle's range.
    pub h4_oracle_agrees: Option<bool>,
    /// Tame-kernel route agrees with the verdict (strictly eligible `n`).
    pub tame_agrees: Option<bool>,
}

pub const CSV_HEADER: &str = "n,k,eligible,strict,s2,h4_minus,h4_plus,d,mu,symbol,verdict,h4_oracle_agrees,tame_agrees";

fn cell<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(ToString::to_string).unwrap_or_default()
}

impl ScanRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.eligible,
            self.strict,
            cell(&self.s2),
            cell(&self.h4_minus),
            cell(&self.h4_plus),
            cell(&self.d),
            cell(&self.mu),
            cell(&self.symbol),
            self.verdict,
            cell(&self.h4_oracle_agrees),
            cell(&self.tame_agrees),
        )
    }
}

fn selected(sf: &SquareFreeN, opts: &ScanOptions) -> bool {
    let parity = match opts.parity {
        Parity::Any => true,
        Parity::Odd => !sf.is_even,
        Parity::Even => sf.is_even,
    };
    let domain = sf.eligible && matches!(sf.n % 8, 1 | 2);
    parity
        && match opts.selection {
            Selection::All => true,
            Selection::Domain => domain,
            Selection::Eligible => domain && sf.k() >= 1,
            Selection::Strict => domain && sf.k() >= 1 && sf.strictly_eligible,
        }
}

fn oracle_agrees(m: i64, redei: Option<usize>) -> Option<bool> {
    let redei = redei?;
    if field_discriminant(m).abs() > MAX_DISC {
        return None;
    }
    h4_oracle(m).ok().map(|o| o == redei)
}

pub fn row(n: u64, opts: &ScanOptions) -> Option<ScanRow> {
    let sf = SquareFreeN::new(n as i128).ok()?;
    if !selected(&sf, opts) {
        return None;
    }
    let v = classify(n);
    let eligible = sf.eligible && matches!(n % 8, 1 | 2) && sf.k() >= 1;
    let strict = eligible && sf.strictly_eligible;
    let (mut h4_oracle_agrees, mut tame_agrees) = (None, None);
    if opts.oracle && sf.k() >= 1 {
        let minus = if sf.is_even { -(sf.odd_part as i64) } else { -(n as i64) };
        let a = oracle_agrees(minus, v.h4_minus);
        let b = if sf.is_even {
            Some(true)
        } else {
            oracle_agrees(n as i64, v.h4_plus)
        };
        h4_oracle_agrees = match (a, b, v.h4_plus.is_some() || sf.is_even) {
            (Some(a), Some(b), _) => Some(a && b),
            (Some(a), None, false) => Some(a),
            _ => None,
        };
    }
    if strict {
        tame_agrees = corollary_lhs(&sf)
            .ok()
            .map(|t| t == (v.verdict == VerdictKind::NonCongruentSha22));
    }
    Some(ScanRow {
        n,
        k: sf.k(),
        eligible,
        strict,
        s2: v.s2,
        h4_minus: v.h4_minus,
        h4_plus: v.h4_plus,
        d: v.d,
        mu: v.mu,
        symbol: v.pairing_symbol,
        verdict: v.verdict,
        h4_oracle_agrees,
        tame_agrees,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Scans `[from, max]`, writing rows in increasing `n`. After every batch of
/// blocks the next unscanned `n` is written to `checkpoint`.
#[allow(clippy::too_many_arguments)]
pub fn scan(
    from: u64,
    max: u64,
    opts: ScanOptions,
    format: Format,
    jobs: usize,
    checkpoint: Option<&Path>,
    header: bool,
    out: &mut impl Write,
) -> io::Result<()> {
    if from > max {
        return Ok(());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(io::Error::other)?;
    if header && format == Format::Csv {
        writeln!(out, "{CSV_HEADER}")?;
    }
    let blocks: Vec<(u64, u64)> = (0..=(max - from) / BLOCK)
        .map(|i| (from + i * BLOCK, (from + i * BLOCK + BLOCK - 1).min(max)))
        .collect();
    for batch in blocks.chunks(jobs.max(1) * 4) {
        let rows: Vec<Vec<ScanRow>> = pool.install(|| {
            batch
                .par_iter()
                .map(|&(lo, hi)| (lo..=hi).filter_map(|n| row(n, &opts)).collect())
                .collect()
        });
        for r in rows.iter().flatten() {
            match format {
                Format::Csv => writeln!(out, "{}", r.csv())?,
                Format::Json => writeln!(out, "{}", serde_json::to_string(r).map_err(io::Error::other)?)?,
            }
        }
        out.flush()?;
        if let Some(path) = checkpoint {
            let next = batch.last().expect("nonempty batch").1 + 1;
            std::fs::write(path, format!("{next}\n"))?;
        }
    }
    Ok(())
}
