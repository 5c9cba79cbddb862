// SPDX-License-Identifier: Apache-2.0

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use noncongruent::criteria::{classify, VerdictKind};
use noncongruent::oracles::class_group;
use noncongruent::tame::tame_report;
use noncongruent::verify::{run, Suite};

mod scan;

use scan::{Format, Parity, ScanOptions, Selection};

const EXIT_ERROR: u8 = 3;
const EXIT_VERIFY_FAILED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "noncongruent",
    version,
    about = "Rank-zero criteria for congruent number curves with Sha[2^inf] = (Z/2)^2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one n. Exit 0: NonCongruentSha22, 1: CriterionFails, 2: S2NotTwo or NotEligible.
    Classify {
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Scan a range of n.
    Scan(ScanArgs),
    /// Run a verification suite. Exit 4 on any failure.
    Verify { suite: String, bound: u64 },
    /// 2-rank and 4-rank of K_2 of the ring of integers of Q(√m).
    Tame {
        #[arg(allow_hyphen_values = true)]
        m: i64,
    },
    /// Form class group of a fundamental discriminant.
    Classgroup {
        #[arg(allow_hyphen_values = true)]
        disc: i64,
    },
}

#[derive(Args)]
struct ScanArgs {
    min: u64,
    max: u64,
    #[arg(long, conflicts_with = "even")]
    odd: bool,
    #[arg(long)]
    even: bool,
    /// Require k >= 1 on top of the residue and prime conditions.
    #[arg(long, conflicts_with_all = ["strict", "all"])]
    eligible: bool,
    /// Odd primes all 1 mod 8.
    #[arg(long, conflicts_with = "all")]
    strict: bool,
    /// Every square-free n, eligible or not.
    #[arg(long)]
    all: bool,
    #[arg(long, conflicts_with = "json")]
    csv: bool,
    #[arg(long)]
    json: bool,
    /// Worker threads; NONCONGRUENT_JOBS takes precedence.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Resume point: a number, or a checkpoint file written by --checkpoint.
    #[arg(long)]
    from: Option<String>,
    /// File to record the next unscanned n after each batch.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Skip the class group cross-check.
    #[arg(long)]
    no_oracle: bool,
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_ERROR)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Classify { n, json } => cmd_classify(n, json),
        Command::Scan(args) => cmd_scan(args),
        Command::Verify { suite, bound } => cmd_verify(&suite, bound),
        Command::Tame { m } => done(tame_report(m).map_err(fail).and_then(|r| print_json(&r))),
        Command::Classgroup { disc } => done(class_group(disc).map_err(fail).and_then(|r| print_json(&r))),
    }
}

fn done(r: Result<(), ExitCode>) -> ExitCode {
    r.err().unwrap_or(ExitCode::SUCCESS)
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<(), ExitCode> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(fail(e)),
        _ => Ok(()),
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), ExitCode> {
    let s = serde_json::to_string_pretty(value).map_err(fail)?;
    emit(&(s + "\n"))
}

fn cmd_classify(n: u64, json: bool) -> ExitCode {
    if n == 0 {
        return fail("n must be at least 1");
    }
    let v = classify(n);
    let printed = if json {
        print_json(&v)
    } else {
        let mut text = format!("n = {}\nverdict = {}\n", v.n, v.verdict);
        for t in &v.trace {
            text += &format!("  {} = {}  [{}]\n", t.field, t.value, t.provenance);
        }
        emit(&text)
    };
    if let Err(code) = printed {
        return code;
    }
    ExitCode::from(match v.verdict {
        VerdictKind::NonCongruentSha22 => 0,
        VerdictKind::CriterionFails => 1,
        VerdictKind::S2NotTwo | VerdictKind::NotEligible => 2,
    })
}

fn jobs(flag: usize) -> Result<usize, String> {
    match std::env::var("NONCONGRUENT_JOBS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("NONCONGRUENT_JOBS={v} is not a number")),
        Err(_) => Ok(flag),
    }
}

fn resume_point(from: &str) -> Result<u64, String> {
    if let Ok(n) = from.parse() {
        return Ok(n);
    }
    let text = std::fs::read_to_string(from).map_err(|e| format!("{from}: {e}"))?;
    text.trim()
        .parse()
        .map_err(|_| format!("{from} does not hold a checkpoint"))
}

fn cmd_scan(a: ScanArgs) -> ExitCode {
    if a.min < 1 || a.max > scan::MAX_N {
        return fail(format!("need 1 <= min and max <= {}", scan::MAX_N));
    }
    let jobs = match jobs(a.jobs) {
        Ok(j) => j,
        Err(e) => return fail(e),
    };
    let start = match a.from.as_deref().map(resume_point).transpose() {
        Ok(Some(f)) => f.max(a.min),
        Ok(None) => a.min,
        Err(e) => return fail(e),
    };
    let opts = ScanOptions {
        parity: if a.odd {
            Parity::Odd
        } else if a.even {
            Parity::Even
        } else {
            Parity::Any
        },
        selection: if a.all {
            Selection::All
        } else if a.strict {
            Selection::Strict
        } else if a.eligible {
            Selection::Eligible
        } else {
            Selection::Domain
        },
        oracle: !a.no_oracle,
    };
    let format = if a.json { Format::Json } else { Format::Csv };
    // a resumed scan appends to earlier output, so it gets no second header
    let header = a.from.is_none();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = scan::scan(
        start,
        a.max,
        opts,
        format,
        jobs,
        a.checkpoint.as_deref(),
        header,
        &mut out,
    )
    .and_then(|_| out.flush());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn cmd_verify(suite: &str, bound: u64) -> ExitCode {
    let suite: Suite = match suite.parse() {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let report = run(suite, bound);
    if let Err(code) = print_json(&report) {
        return code;
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    }
}
