//! Python bindings: truncated q-series, the builder registry, the identity
//! catalog, partition enumeration and the `S_n(i)` checks.

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use mocktheta::bivariate::builders::BuildParams;
use mocktheta::catalog::{self, Built};
use mocktheta::partitions;
use mocktheta::series;
use mocktheta::snsum::{self, Chain, Verdict};
use mocktheta::{Catalog, Monomial, Orders, PartitionMode};

create_exception!(pymocktheta, MockThetaError, PyValueError);

fn err(e: mocktheta::Error) -> PyErr {
    MockThetaError::new_err(e.to_string())
}

fn monomial(sign: i64, exponent: usize) -> PyResult<Monomial> {
    match sign {
        1 => Ok(Monomial::pos(exponent)),
        -1 => Ok(Monomial::neg(exponent)),
        _ => Err(PyValueError::new_err("sign must be 1 or -1")),
    }
}

fn mode(name: &str) -> PyResult<PartitionMode> {
    name.parse().map_err(err)
}

/// Power series in q truncated at a fixed order, with exact integer coefficients.
#[pyclass(name = "QSeries", module = "pymocktheta", eq, frozen, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyQSeries(mocktheta::QSeries);

#[pymethods]
impl PyQSeries {
    /// `QSeries(coeffs, order=None)`: coefficients of q^0, q^1, ...; zero-padded
    /// or cut to `order` when given.
    #[new]
    #[pyo3(signature = (coeffs, order=None))]
    fn new(coeffs: Vec<BigInt>, order: Option<usize>) -> PyResult<Self> {
        if coeffs.is_empty() && order.is_none() {
            return Err(PyValueError::new_err("need coefficients or an order"));
        }
        let order = order.unwrap_or(coeffs.len().saturating_sub(1));
        let base = if coeffs.is_empty() {
            mocktheta::QSeries::zero(order)
        } else {
            mocktheta::QSeries::from_coeffs(coeffs)
        };
        Ok(PyQSeries(base.with_order(order)))
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    fn coeffs(&self) -> Vec<BigInt> {
        self.0.coeffs().to_vec()
    }

    /// Nonzero `(exponent, coefficient)` pairs.
    fn terms(&self) -> Vec<(usize, BigInt)> {
        self.0.terms().map(|(e, c)| (e, c.clone())).collect()
    }

    fn __getitem__(&self, e: usize) -> PyResult<BigInt> {
        self.0
            .coeff(e)
            .cloned()
            .ok_or_else(|| pyo3::exceptions::PyIndexError::new_err("exponent beyond the order"))
    }

    fn __len__(&self) -> usize {
        self.0.order() + 1
    }

    fn valuation(&self) -> Option<usize> {
        self.0.valuation()
    }

    fn __add__(&self, other: &Self) -> Self {
        PyQSeries(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyQSeries(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &Self) -> Self {
        PyQSeries(&self.0 * &other.0)
    }

    fn __neg__(&self) -> Self {
        PyQSeries(-&self.0)
    }

    fn invert(&self) -> PyResult<Self> {
        self.0.invert().map(PyQSeries).map_err(err)
    }

    /// Multiply by `q^k`, keeping the order.
    fn shift(&self, k: usize) -> Self {
        PyQSeries(self.0.shift(k))
    }

    /// Substitute `q -> sign * q^k`.
    #[pyo3(signature = (k, sign=1))]
    fn substitute(&self, k: usize, sign: i64) -> PyResult<Self> {
        self.0
            .substitute(monomial(sign, k)?)
            .map(PyQSeries)
            .map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("QSeries({})", self.0)
    }
}

/// Power series in z and q truncated to a rectangle.
#[pyclass(name = "ZQSeries", module = "pymocktheta", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyZQSeries(mocktheta::ZQSeries);

#[pymethods]
impl PyZQSeries {
    #[getter]
    fn z_order(&self) -> usize {
        self.0.z_order()
    }

    #[getter]
    fn q_order(&self) -> usize {
        self.0.q_order()
    }

    /// Row `m`: the coefficient of `z^m` as a series in q.
    fn row(&self, m: usize) -> PyResult<PyQSeries> {
        self.0
            .row(m)
            .cloned()
            .map(PyQSeries)
            .ok_or_else(|| pyo3::exceptions::PyIndexError::new_err("row beyond z_order"))
    }

    fn coeff(&self, m: usize, e: usize) -> PyResult<BigInt> {
        self.0.coeff(m, e).cloned().map_err(err)
    }

    /// Substitute `z = sign * q^k`.
    #[pyo3(signature = (k=0, sign=1))]
    fn specialize(&self, k: usize, sign: i64) -> PyResult<PyQSeries> {
        self.0
            .specialize(monomial(sign, k)?)
            .map(PyQSeries)
            .map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// `(sign q^exponent; q^step)_n` to `order`; `n=None` gives the infinite product.
#[pyfunction]
#[pyo3(signature = (exponent, step, order, n=None, sign=1))]
fn poch(exponent: usize, step: usize, order: usize, n: Option<usize>, sign: i64) -> PyResult<PyQSeries> {
    let a = monomial(sign, exponent)?;
    match n {
        Some(n) => Ok(PyQSeries(series::poch_finite(a, step, n, order))),
        None => series::poch_infinite(a, step, order).map(PyQSeries).map_err(err),
    }
}

/// Gaussian binomial `[n, m]` in base `q^step`, as an exact polynomial.
#[pyfunction]
#[pyo3(signature = (n, m, step=1))]
fn qbinom(n: i64, m: i64, step: usize) -> PyQSeries {
    PyQSeries(series::qbinom(n, m, step))
}

/// Run a registered builder; returns `QSeries` or `ZQSeries`.
#[pyfunction]
#[pyo3(signature = (name, q_order, z_order=None))]
fn build(py: Python<'_>, name: &str, q_order: usize, z_order: Option<usize>) -> PyResult<Py<PyAny>> {
    let entry = catalog::builder(name).map_err(err)?;
    let params = BuildParams::new(z_order.unwrap_or(q_order), q_order);
    Ok(match py.detach(|| entry.build(&params)) {
        Built::Uni(s) => Py::new(py, PyQSeries(s))?.into_any(),
        Built::Bi(s) => Py::new(py, PyZQSeries(s))?.into_any(),
    })
}

#[pyfunction]
fn builder_names() -> Vec<&'static str> {
    catalog::builder_names().collect()
}

#[pyfunction]
fn identity_ids() -> Vec<&'static str> {
    Catalog::standard().ids().collect()
}

/// Result of verifying one identity.
#[pyclass(name = "VerifyReport", module = "pymocktheta", get_all, frozen)]
struct PyReport {
    identity: String,
    passed: bool,
    q_order: usize,
    z_order: Option<usize>,
    /// `(z_degree, q_exponent, lhs, rhs)` of the first disagreement
    first_mismatch: Option<(usize, usize, BigInt, BigInt)>,
    elapsed_ms: u64,
    json: String,
}

#[pymethods]
impl PyReport {
    fn __repr__(&self) -> String {
        self.json.clone()
    }
}

impl From<mocktheta::VerifyReport> for PyReport {
    fn from(r: mocktheta::VerifyReport) -> Self {
        let json = serde_json::to_string(&r).expect("reports serialize");
        PyReport {
            passed: r.passed(),
            first_mismatch: r
                .first_mismatch
                .map(|m| (m.z_degree, m.q_exponent, m.lhs, m.rhs)),
            identity: r.identity,
            q_order: r.q_order,
            z_order: r.z_order,
            elapsed_ms: r.elapsed_ms,
            json,
        }
    }
}

#[pyfunction]
#[pyo3(signature = (id, q_order=None, z_order=None, n_max=None))]
fn verify(
    py: Python<'_>,
    id: &str,
    q_order: Option<usize>,
    z_order: Option<usize>,
    n_max: Option<usize>,
) -> PyResult<PyReport> {
    let orders = Orders {
        q_order,
        z_order,
        n_max,
    };
    py.detach(|| Catalog::standard().verify(id, &orders))
        .map(PyReport::from)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (q_order=None, z_order=None, n_max=None))]
fn verify_all(
    py: Python<'_>,
    q_order: Option<usize>,
    z_order: Option<usize>,
    n_max: Option<usize>,
) -> PyResult<Vec<PyReport>> {
    let orders = Orders {
        q_order,
        z_order,
        n_max,
    };
    py.detach(|| Catalog::standard().verify_all(&orders))
        .map(|v| v.into_iter().map(PyReport::from).collect())
        .map_err(err)
}

#[pyfunction]
fn enumerate_omega(n: u64) -> Vec<Vec<u64>> {
    partitions::enumerate_omega(n)
        .into_iter()
        .map(|p| p.parts().to_vec())
        .collect()
}

#[pyfunction]
fn enumerate_nu(n: u64) -> Vec<Vec<u64>> {
    partitions::enumerate_nu(n)
        .into_iter()
        .map(|p| p.parts().to_vec())
        .collect()
}

/// Number of partitions of `n`; `mode` is "omega" or "nu".
#[pyfunction]
fn count(mode_name: &str, n: u64) -> PyResult<BigInt> {
    Ok(partitions::count(mode(mode_name)?, n))
}

/// Partitions of `n` with `m` parts besides one copy of the smallest.
#[pyfunction]
fn count_refined(mode_name: &str, n: u64, m: usize) -> PyResult<BigInt> {
    Ok(partitions::count_refined(mode(mode_name)?, n, m))
}

/// `S_n(i)` as an exact polynomial.
#[pyfunction]
fn s_poly(n: usize, i: usize) -> PyQSeries {
    PyQSeries(snsum::s_poly(n, i).poly)
}

fn outcome(v: Verdict) -> Option<(usize, BigInt, BigInt)> {
    v.mismatch()
        .map(|m| (m.q_exponent, m.lhs.clone(), m.rhs.clone()))
}

/// Each check returns `None` on success, else `(q_exponent, lhs, rhs)`.
#[pyfunction]
fn check_lemma2(n: usize, i: usize) -> PyResult<Option<(usize, BigInt, BigInt)>> {
    snsum::check_lemma2(n, i).map(outcome).map_err(err)
}

#[pyfunction]
fn check_lemma3(n: usize, i: usize) -> Option<(usize, BigInt, BigInt)> {
    outcome(snsum::check_lemma3(n, i))
}

#[pyfunction]
fn check_lemma4(n: usize) -> Option<(usize, BigInt, BigInt)> {
    outcome(snsum::check_lemma4(n))
}

#[pyfunction]
fn check_lemma5(n: usize) -> Option<(usize, BigInt, BigInt)> {
    outcome(snsum::check_lemma5(n))
}

#[pyfunction]
fn check_recurrence(n: usize) -> PyResult<Option<(usize, BigInt, BigInt)>> {
    snsum::check_recurrence(n).map(outcome).map_err(err)
}

/// `which` is one of geom, eq111, eq12, eq13, eq16, eq17, eq18.
#[pyfunction]
fn check_chain(n: usize, which: &str) -> PyResult<Option<(usize, BigInt, BigInt)>> {
    let chain: Chain = which.parse().map_err(err)?;
    Ok(outcome(snsum::check_chain(n, chain)))
}

/// `q^d p(1/q)` for a polynomial of degree at most `d`.
#[pyfunction]
fn reverse_poly(p: &PyQSeries, d: usize) -> PyResult<PyQSeries> {
    snsum::reverse_poly(&p.0, d).map(PyQSeries).map_err(err)
}

#[pymodule]
fn pymocktheta(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MockThetaError", m.py().get_type::<MockThetaError>())?;
    m.add_class::<PyQSeries>()?;
    m.add_class::<PyZQSeries>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(poch, m)?)?;
    m.add_function(wrap_pyfunction!(qbinom, m)?)?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(builder_names, m)?)?;
    m.add_function(wrap_pyfunction!(identity_ids, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_omega, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_nu, m)?)?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(count_refined, m)?)?;
    m.add_function(wrap_pyfunction!(s_poly, m)?)?;
    m.add_function(wrap_pyfunction!(check_lemma2, m)?)?;
    m.add_function(wrap_pyfunction!(check_lemma3, m)?)?;
    m.add_function(wrap_pyfunction!(check_lemma4, m)?)?;
    m.add_function(wrap_pyfunction!(check_lemma5, m)?)?;
    m.add_function(wrap_pyfunction!(check_recurrence, m)?)?;
    m.add_function(wrap_pyfunction!(check_chain, m)?)?;
    m.add_function(wrap_pyfunction!(reverse_poly, m)?)?;
    Ok(())
}
