// SPDX-License-Identifier: Apache-2.0

//! Python bindings: `import noncongruent_py`.

use noncongruent::arith::SquareFreeN;
use noncongruent::cassels::local_pairing_product;
use noncongruent::matrices::{self, SelmerTriple};
use noncongruent::oracles::{self, CongruentCurve};
use noncongruent::tame::tame_report;
use noncongruent::verify::{self, Suite};
use noncongruent::{criteria, Error};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyTuple;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "None".into(), |v| v.to_string())
}

fn square_free(n: u64) -> PyResult<SquareFreeN> {
    SquareFreeN::new(n as i128).map_err(err)
}

/// Outcome of `classify`, with the trace of intermediate values.
#[pyclass(frozen, get_all, module = "noncongruent_py")]
pub struct Verdict {
    pub n: u64,
    pub s2: Option<usize>,
    pub h4_minus: Option<usize>,
    pub h4_plus: Option<usize>,
    pub d: Option<i64>,
    pub mu: Option<i64>,
    pub pairing_symbol: Option<i8>,
    /// `NonCongruentSha22`, `CriterionFails`, `S2NotTwo` or `NotEligible`.
    pub verdict: String,
    /// `(field, value, provenance)` triples.
    pub trace: Vec<(String, String, String)>,
}

#[pymethods]
impl Verdict {
    /// True only for `NonCongruentSha22`.
    fn is_non_congruent(&self) -> bool {
        self.verdict == "NonCongruentSha22"
    }

    fn __repr__(&self) -> String {
        format!(
            "Verdict(n={}, verdict={}, s2={}, d={}, symbol={})",
            self.n,
            self.verdict,
            opt(self.s2),
            opt(self.d),
            opt(self.pairing_symbol)
        )
    }
}

impl From<criteria::Verdict> for Verdict {
    fn from(v: criteria::Verdict) -> Self {
        Verdict {
            n: v.n,
            s2: v.s2,
            h4_minus: v.h4_minus,
            h4_plus: v.h4_plus,
            d: v.d,
            mu: v.mu,
            pairing_symbol: v.pairing_symbol,
            verdict: v.verdict.to_string(),
            trace: v
                .trace
                .into_iter()
                .map(|t| (t.field.to_string(), t.value, t.provenance.to_string()))
                .collect(),
        }
    }
}

#[pyclass(frozen, get_all, module = "noncongruent_py")]
pub struct TameReport {
    pub m: i64,
    pub r2: usize,
    pub r4: usize,
    pub v1: Vec<i64>,
    pub v2: Vec<i64>,
}

#[pymethods]
impl TameReport {
    fn __repr__(&self) -> String {
        format!("TameReport(m={}, r2={}, r4={})", self.m, self.r2, self.r4)
    }
}

#[pyclass(frozen, get_all, module = "noncongruent_py")]
pub struct ClassGroup {
    pub disc: i64,
    pub order: usize,
    pub elementary_divisors: Vec<u64>,
    pub r2: usize,
    pub r4: usize,
    pub r8: usize,
    /// `(a, b, c)` for one reduced form per class.
    pub forms: Vec<(i64, i64, i64)>,
}

#[pymethods]
impl ClassGroup {
    fn __repr__(&self) -> String {
        format!(
            "ClassGroup(disc={}, order={}, elementary_divisors={:?})",
            self.disc, self.order, self.elementary_divisors
        )
    }
}

fn triples(set: impl IntoIterator<Item = SelmerTriple>) -> Vec<(i64, i64, i64)> {
    set.into_iter().map(|t| (t.d1, t.d2, t.d3)).collect()
}

/// Classifies `n`; never raises for `n >= 1`.
#[pyfunction]
fn classify(n: u64) -> PyResult<Verdict> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be at least 1"));
    }
    Ok(criteria::classify(n).into())
}

/// Pure 2-Selmer rank of `y^2 = x^3 - n^2 x`.
#[pyfunction]
fn s2(n: u64) -> PyResult<usize> {
    matrices::s2(&square_free(n)?).map_err(err)
}

/// 4-rank of the narrow class group of `Q(√m)` from the Rédei matrix.
#[pyfunction]
fn h4(m: i64) -> PyResult<usize> {
    matrices::h4(m).map_err(err)
}

/// The same 4-rank from an explicit form class group.
#[pyfunction]
fn h4_oracle(m: i64) -> PyResult<usize> {
    oracles::h4_oracle(m).map_err(err)
}

#[pyfunction]
fn tame(m: i64) -> PyResult<TameReport> {
    let r = tame_report(m).map_err(err)?;
    Ok(TameReport {
        m: r.m,
        r2: r.r2,
        r4: r.r4,
        v1: r.v1.into_iter().collect(),
        v2: r.v2.into_iter().collect(),
    })
}

#[pyfunction]
fn class_group(disc: i64) -> PyResult<ClassGroup> {
    let r = oracles::class_group(disc).map_err(err)?;
    Ok(ClassGroup {
        disc: r.disc,
        order: r.order,
        elementary_divisors: r.elementary_divisors.clone(),
        r2: r.r2(),
        r4: r.r4(),
        r8: r.r8(),
        forms: r.forms.iter().map(|f| (f.a, f.b, f.c)).collect(),
    })
}

/// Pure 2-Selmer group from the Monsky matrix kernel, as `(d1, d2, d3)`.
#[pyfunction]
fn selmer_elements(n: u64) -> PyResult<Vec<(i64, i64, i64)>> {
    Ok(triples(matrices::selmer_elements(&square_free(n)?).map_err(err)?))
}

/// Pure 2-Selmer group by local solvability of each torsor.
#[pyfunction]
fn selmer_oracle(n: u64) -> PyResult<Vec<(i64, i64, i64)>> {
    Ok(triples(oracles::selmer_oracle(&square_free(n)?).map_err(err)?))
}

/// Product of the local Cassels pairings over the bad places.
#[pyfunction]
fn pairing_product(n: u64) -> PyResult<i8> {
    local_pairing_product(&square_free(n)?).map_err(err)
}

/// Points `(x, y)` of naive height at most `h`, as `fractions.Fraction`.
#[pyfunction]
fn point_search<'py>(py: Python<'py>, n: u64, h: u64) -> PyResult<Vec<Bound<'py, PyTuple>>> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be at least 1"));
    }
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    oracles::point_search(&CongruentCurve::new(n), h)
        .into_iter()
        .map(|p| {
            let x = fraction.call1((*p.x.numer(), *p.x.denom()))?;
            let y = fraction.call1((*p.y.numer(), *p.y.denom()))?;
            PyTuple::new(py, [x, y])
        })
        .collect()
}

/// Runs a named verification suite; returns the report as a dict.
#[pyfunction]
fn verify_suite<'py>(py: Python<'py>, suite: &str, bound: u64) -> PyResult<Bound<'py, PyAny>> {
    let suite: Suite = suite.parse().map_err(err)?;
    let report = verify::run(suite, bound);
    let text = serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.getattr("loads")?.call1((text,))
}

#[pymodule]
pub fn noncongruent_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Verdict>()?;
    m.add_class::<TameReport>()?;
    m.add_class::<ClassGroup>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(s2, m)?)?;
    m.add_function(wrap_pyfunction!(h4, m)?)?;
    m.add_function(wrap_pyfunction!(h4_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(tame, m)?)?;
    m.add_function(wrap_pyfunction!(class_group, m)?)?;
    m.add_function(wrap_pyfunction!(selmer_elements, m)?)?;
    m.add_function(wrap_pyfunction!(selmer_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(pairing_product, m)?)?;
    m.add_function(wrap_pyfunction!(point_search, m)?)?;
    m.add_function(wrap_pyfunction!(verify_suite, m)?)?;
    Ok(())
}
