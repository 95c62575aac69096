//! Python extension module exposing the COE moment engine.
//!
//! Rational functions cross the boundary as [`PyRatFunc`] objects; exact
//! values cross as `(numerator, denominator)` pairs of Python ints, ready for
//! `fractions.Fraction`.

use num::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use coe_moments::combinat::Partition;
use coe_moments::moments::{
    coe_moment, coe_moment_symbolic, coe_vanishes, diagonal_moment_symbolic,
    offdiagonal_moment_symbolic, IndexSeq,
};
use coe_moments::montecarlo::{verify_moment, RngSpec};
use coe_moments::qz::RatFunc;
use coe_moments::weingarten::{wg_orthogonal, wg_unitary};
use coe_moments::{Error, Limits};

fn to_py_err(err: Error) -> PyErr {
    let message = err.to_string();
    match err {
        Error::Domain(_) => PyValueError::new_err(message),
        Error::Pole(_) => PyZeroDivisionError::new_err(message),
        Error::Resource(_) | Error::Internal(_) => PyRuntimeError::new_err(message),
    }
}

fn index_seq(entries: Vec<usize>) -> PyResult<IndexSeq> {
    IndexSeq::new(entries).map_err(to_py_err)
}

fn partition(parts: Vec<usize>) -> PyResult<Partition> {
    if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(PyValueError::new_err(
            "partition parts must be positive and non-increasing",
        ));
    }
    Ok(Partition::new(parts))
}

fn rational_pair(value: &num::BigRational) -> (BigInt, BigInt) {
    (value.numer().clone(), value.denom().clone())
}

/// A rational function with exact integer coefficients.
#[pyclass(name = "RatFunc", frozen)]
struct PyRatFunc {
    inner: RatFunc,
}

#[pymethods]
impl PyRatFunc {
    fn __str__(&self) -> String {
        self.inner.display_factored()
    }

    fn __repr__(&self) -> String {
        format!("RatFunc({})", self.inner.display_factored())
    }

    /// Renders with a caller-chosen variable name.
    fn render(&self, var: &str) -> String {
        self.inner.render(var)
    }

    /// Exact value at an integer point, as a (numerator, denominator) pair.
    fn eval(&self, x: i64) -> PyResult<(BigInt, BigInt)> {
        self.inner
            .eval_at_int(x)
            .map(|v| rational_pair(&v))
            .map_err(to_py_err)
    }

    /// The same function with the variable replaced by variable + 1.
    fn shift_up(&self) -> PyRatFunc {
        PyRatFunc {
            inner: self.inner.shift_up(),
        }
    }

    /// The same function with the variable replaced by variable - 1.
    fn shift_down(&self) -> PyRatFunc {
        PyRatFunc {
            inner: self.inner.shift_down(),
        }
    }

    /// Integer numerator coefficients, constant term first.
    fn numerator_coeffs(&self) -> Vec<BigInt> {
        self.inner.integer_pair().0
    }

    /// Integer denominator coefficients, constant term first.
    fn denominator_coeffs(&self) -> Vec<BigInt> {
        self.inner.integer_pair().1
    }

    /// Laurent coefficients at infinity: the leading exponent and `order`
    /// coefficients as (numerator, denominator) pairs.
    fn series(&self, order: usize) -> (Option<i64>, Vec<(BigInt, BigInt)>) {
        let series = self.inner.series_at_infinity(order);
        (
            series.leading_exponent,
            series.coeffs.iter().map(rational_pair).collect(),
        )
    }
}

/// Moment of COE elements for index sequences `i` and `j`, as a rational
/// function of z to be evaluated at z = N + 1.
#[pyfunction]
fn moment(i: Vec<usize>, j: Vec<usize>) -> PyResult<PyRatFunc> {
    let i = index_seq(i)?;
    let j = index_seq(j)?;
    let result = coe_moment_symbolic(&i, &j, &Limits::default()).map_err(to_py_err)?;
    Ok(PyRatFunc {
        inner: result.symbolic,
    })
}

/// Exact moment value at matrix size `n`, as a (numerator, denominator) pair.
#[pyfunction]
fn moment_value(i: Vec<usize>, j: Vec<usize>, n: usize) -> PyResult<(BigInt, BigInt)> {
    let i = index_seq(i)?;
    let j = index_seq(j)?;
    let result = coe_moment(&i, &j, n, &Limits::default()).map_err(to_py_err)?;
    Ok(rational_pair(&result.value.expect("value requested")))
}

/// Coset types paired with how many matchings carry each one.
type TypeCounts = Vec<(Vec<usize>, BigInt)>;

/// Matching count and per-coset-type counts for a pair of index sequences.
#[pyfunction]
fn moment_counts(i: Vec<usize>, j: Vec<usize>) -> PyResult<(BigInt, TypeCounts)> {
    let i = index_seq(i)?;
    let j = index_seq(j)?;
    let result = coe_moment_symbolic(&i, &j, &Limits::default()).map_err(to_py_err)?;
    Ok((
        result.match_count,
        result
            .type_counts
            .iter()
            .map(|(mu, c)| (mu.parts().to_vec(), c.clone()))
            .collect(),
    ))
}

/// Whether the moment for `(i, j)` is identically zero.
#[pyfunction]
fn vanishes(i: Vec<usize>, j: Vec<usize>) -> PyResult<bool> {
    Ok(coe_vanishes(&index_seq(i)?, &index_seq(j)?))
}

/// Orthogonal Weingarten function of weight `n` for coset type `mu`, to be
/// evaluated at z = N for O(N) averages.
#[pyfunction]
fn weingarten_orthogonal(n: usize, mu: Vec<usize>) -> PyResult<PyRatFunc> {
    let mu = partition(mu)?;
    wg_orthogonal(n, &mu, &Limits::default())
        .map(|inner| PyRatFunc { inner })
        .map_err(to_py_err)
}

/// Unitary Weingarten function of degree `m` for cycle type `rho`, to be
/// evaluated at z = N for U(N) averages.
#[pyfunction]
fn weingarten_unitary(m: usize, rho: Vec<usize>) -> PyResult<PyRatFunc> {
    let rho = partition(rho)?;
    wg_unitary(m, &rho, &Limits::default())
        .map(|inner| PyRatFunc { inner })
        .map_err(to_py_err)
}

/// Closed form for E|v_cc|^(2n) as a rational function of N.
#[pyfunction]
fn diagonal_moment(n: usize) -> PyResult<PyRatFunc> {
    if n == 0 {
        return Err(PyValueError::new_err("moment weight n must be positive"));
    }
    Ok(PyRatFunc {
        inner: diagonal_moment_symbolic(n),
    })
}

/// Closed form for E|v_cd|^(2n), c != d, as a rational function of N.
#[pyfunction]
fn offdiagonal_moment(n: usize) -> PyResult<PyRatFunc> {
    if n == 0 {
        return Err(PyValueError::new_err("moment weight n must be positive"));
    }
    Ok(PyRatFunc {
        inner: offdiagonal_moment_symbolic(n),
    })
}

/// Monte Carlo check of the exact moment at size `n`; returns
/// (pass, z_re, z_im) for a 4-sigma threshold.
#[pyfunction]
#[pyo3(signature = (i, j, n, samples=20_000, seed=0))]
fn mc_verify(
    i: Vec<usize>,
    j: Vec<usize>,
    n: usize,
    samples: u64,
    seed: u64,
) -> PyResult<(bool, f64, f64)> {
    let i = index_seq(i)?;
    let j = index_seq(j)?;
    let verdict = verify_moment(
        &i,
        &j,
        n,
        samples,
        &RngSpec::new(seed, 0),
        4.0,
        &Limits::default(),
    )
    .map_err(to_py_err)?;
    Ok((verdict.pass, verdict.z_re, verdict.z_im))
}

#[pymodule]
fn coe_moments_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRatFunc>()?;
    m.add_function(wrap_pyfunction!(moment, m)?)?;
    m.add_function(wrap_pyfunction!(moment_value, m)?)?;
    m.add_function(wrap_pyfunction!(moment_counts, m)?)?;
    m.add_function(wrap_pyfunction!(vanishes, m)?)?;
    m.add_function(wrap_pyfunction!(weingarten_orthogonal, m)?)?;
    m.add_function(wrap_pyfunction!(weingarten_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(diagonal_moment, m)?)?;
    m.add_function(wrap_pyfunction!(offdiagonal_moment, m)?)?;
    m.add_function(wrap_pyfunction!(mc_verify, m)?)?;
    Ok(())
}
