use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use penner::asympt::{self, Regime};
use penner::coupling::{CouplingSequence, Thooft};
use penner::laguerre::{self, LaguerreSpec};
use penner::{electro, partition, spectral};

fn err(e: penner::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn thooft(t: Option<f64>, p: Option<u64>, q: Option<u64>) -> PyResult<Thooft> {
    match (t, p, q) {
        (None, Some(p), Some(q)) => Thooft::ratio(p, q).map_err(err),
        (Some(t), None, None) => Thooft::real(t).map_err(err),
        _ => Err(PyValueError::new_err("give either t or both p and q")),
    }
}

/// A coupling sequence n -> g_n.
#[pyclass(name = "Sequence", frozen, from_py_object)]
#[derive(Clone)]
struct PySequence {
    inner: CouplingSequence,
}

#[pymethods]
impl PySequence {
    #[staticmethod]
    #[pyo3(signature = (t=None, p=None, q=None))]
    fn thooft(t: Option<f64>, p: Option<u64>, q: Option<u64>) -> PyResult<Self> {
        let inner = CouplingSequence::thooft(thooft(t, p, q)?).map_err(err)?;
        Ok(PySequence { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (alpha, t=None, p=None, q=None))]
    fn shifted(alpha: f64, t: Option<f64>, p: Option<u64>, q: Option<u64>) -> PyResult<Self> {
        let inner = CouplingSequence::shifted(thooft(t, p, q)?, alpha).map_err(err)?;
        Ok(PySequence { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (r, t=None, p=None, q=None))]
    fn integer_part(r: f64, t: Option<f64>, p: Option<u64>, q: Option<u64>) -> PyResult<Self> {
        let inner = CouplingSequence::integer_part(thooft(t, p, q)?, r).map_err(err)?;
        Ok(PySequence { inner })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind()
    }

    #[getter]
    fn t(&self) -> f64 {
        self.inner.t().value()
    }

    fn g(&self, n: u64) -> PyResult<f64> {
        if n == 0 {
            return Err(PyValueError::new_err("n starts at 1"));
        }
        Ok(self.inner.g_of_n(n))
    }

    /// `|sin(π/g_n)|^{1/n}`.
    fn l_estimate(&self, n: u64) -> f64 {
        self.inner.finite_l_estimate(n).value
    }

    /// The limit l, or None when it does not exist.
    fn limit_l(&self) -> Option<f64> {
        self.inner.limit_l().l
    }

    fn __repr__(&self) -> String {
        format!("Sequence({})", serde_json::to_string(&self.inner).unwrap_or_default())
    }
}

#[pyclass(name = "ZeroSet", frozen)]
struct PyZeroSet {
    inner: laguerre::ZeroSet,
    g: f64,
}

#[pymethods]
impl PyZeroSet {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn zeros(&self) -> Vec<Complex64> {
        self.inner.zeros.clone()
    }

    #[getter]
    fn residuals(&self) -> Vec<f64> {
        self.inner.residuals.clone()
    }

    #[getter]
    fn sweeps(&self) -> usize {
        self.inner.sweeps
    }

    fn sum_reciprocal(&self) -> Complex64 {
        self.inner.sum_reciprocal()
    }

    fn saddle_residual(&self) -> PyResult<f64> {
        self.inner.saddle_residual(self.g).map_err(err)
    }

    #[pyo3(signature = (a, b, band=1e-2))]
    fn count_near_interval(&self, a: f64, b: f64, band: f64) -> usize {
        self.inner.count_near_interval(a, b, band)
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }
}

/// Zeros of the scaled Laguerre polynomial for `g_n` of the sequence.
#[pyfunction]
fn find_zeros(seq: &PySequence, n: usize) -> PyResult<PyZeroSet> {
    let g = seq.inner.coupling(n as u64);
    let inner = LaguerreSpec::for_coupling(n, &g)
        .and_then(|s| s.find_zeros())
        .map_err(err)?;
    Ok(PyZeroSet { inner, g: g.g() })
}

/// Zeros of `L_n^{(alpha)}(z/g)` for explicit parameters.
#[pyfunction]
fn laguerre_zeros(n: usize, alpha: f64, g: f64) -> PyResult<PyZeroSet> {
    let inner = LaguerreSpec::new(n, alpha, g)
        .and_then(|s| s.find_zeros())
        .map_err(err)?;
    Ok(PyZeroSet { inner, g })
}

#[pyclass(name = "SpectralCurve", frozen)]
struct PyCurve {
    inner: spectral::SpectralCurve,
}

#[pymethods]
impl PyCurve {
    #[new]
    fn new(t: f64, l: f64) -> PyResult<Self> {
        let inner = spectral::SpectralCurve::new(t, l).map_err(err)?;
        Ok(PyCurve { inner })
    }

    #[getter]
    fn t(&self) -> f64 {
        self.inner.t
    }

    #[getter]
    fn l(&self) -> f64 {
        self.inner.l
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.b
    }

    #[getter]
    fn oval(&self) -> Vec<Complex64> {
        self.inner.oval.clone()
    }

    fn phi(&self, z: Complex64) -> PyResult<f64> {
        self.inner.phi(z).map_err(err)
    }

    fn interval_charge(&self) -> PyResult<f64> {
        self.inner.interval_charge().map_err(err)
    }

    fn oval_charge(&self) -> PyResult<f64> {
        self.inner.oval_charge().map_err(err)
    }

    fn resolvent(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.resolvent(z).map_err(err)
    }

    fn sd_identity_residual(&self, z: Complex64) -> PyResult<f64> {
        self.inner.sd_identity_residual(z).map_err(err)
    }

    fn jump_mismatch(&self, x: f64, eps: f64) -> PyResult<f64> {
        self.inner.jump_mismatch(x, eps).map_err(err)
    }

    fn distance_to_support(&self, z: Complex64) -> f64 {
        self.inner.distance_to_support(z)
    }

    /// `(component, point, weight)` triples.
    #[pyo3(signature = (m=100))]
    fn samples(&self, m: usize) -> PyResult<Vec<(&'static str, Complex64, f64)>> {
        let s = self.inner.samples(m).map_err(err)?;
        Ok(s.into_iter().map(|d| (d.component.as_str(), d.point, d.weight)).collect())
    }
}

#[pyfunction]
fn endpoints(t: f64) -> PyResult<(f64, f64)> {
    spectral::endpoints(t).map_err(err)
}

#[pyfunction]
fn r_of_z(z: Complex64, t: f64) -> PyResult<Complex64> {
    spectral::r_of_z(z, t).map_err(err)
}

#[pyfunction]
fn density_interval(x: f64, t: f64) -> PyResult<f64> {
    spectral::density_interval(x, t).map_err(err)
}

/// Every electrostatic observable of a curve, as a dict.
#[pyfunction]
#[pyo3(signature = (curve, samples=10))]
fn electro_report<'py>(py: Python<'py>, curve: &PyCurve, samples: usize) -> PyResult<Bound<'py, PyDict>> {
    let r = electro::report(&curve.inner, samples).map_err(err)?;
    let d = PyDict::new(py);
    let v = serde_json::to_value(r).map_err(|e| PyValueError::new_err(e.to_string()))?;
    if let Some(map) = v.as_object() {
        for (k, x) in map {
            d.set_item(k, x.as_f64())?;
        }
    }
    Ok(d)
}

#[pyfunction]
fn total_energy(t: f64) -> PyResult<f64> {
    electro::total_energy(t, 1.0).map_err(err)
}

#[pyfunction]
fn planar_f(t: f64, l: f64) -> PyResult<f64> {
    asympt::planar_f(t, l).map_err(err)
}

/// `(product, barnes)` values of `ln|Z_n|`.
#[pyfunction]
fn log_z(n: u64, seq: &PySequence) -> PyResult<(f64, f64)> {
    let g = seq.inner.coupling(n);
    let p = partition::log_z_product(n, &g).map_err(err)?;
    let b = partition::log_z_barnes(n, &g).map_err(err)?;
    Ok((p.log_abs_z, b.log_abs_z))
}

#[pyfunction]
fn free_energy(n: u64, seq: &PySequence) -> PyResult<f64> {
    partition::free_energy_n(n, &seq.inner).map_err(err)
}

/// `χ_{j,s}` as a `fractions.Fraction`.
#[pyfunction]
fn euler_char<'py>(py: Python<'py>, j: usize, s: usize) -> PyResult<Bound<'py, PyAny>> {
    let x = asympt::euler_char(j, s).map_err(err)?;
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    fraction.call1((format!("{}/{}", x.numer(), x.denom()),))
}

/// `F_0..F_K` for the shifted family; pass p, q when t > 1.
#[pyfunction]
#[pyo3(signature = (alpha, k=4, t=None, p=None, q=None))]
fn expansion_coeffs(alpha: f64, k: usize, t: Option<f64>, p: Option<u64>, q: Option<u64>) -> PyResult<Vec<f64>> {
    let th = thooft(t, p, q)?;
    let regime = match th.as_ratio() {
        Some((p, q)) if p > q => Regime::AboveOne { p, q },
        _ => Regime::BelowOne,
    };
    Ok(asympt::expansion_coeffs(th.value(), alpha, k, regime).map_err(err)?.coeffs)
}

/// `(f, [F_2(τ), ..., F_J(τ)])`.
#[pyfunction]
#[pyo3(signature = (mu, tau, j_max=6, s_max=40))]
fn double_scaling(mu: f64, tau: f64, j_max: usize, s_max: usize) -> PyResult<(f64, Vec<f64>)> {
    let ds = asympt::double_scaling(mu, tau, j_max, s_max).map_err(err)?;
    Ok((ds.f, ds.genus.iter().map(|g| g.partial_sum).collect()))
}

#[pymodule]
fn penner_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySequence>()?;
    m.add_class::<PyZeroSet>()?;
    m.add_class::<PyCurve>()?;
    m.add_function(wrap_pyfunction!(find_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(laguerre_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(endpoints, m)?)?;
    m.add_function(wrap_pyfunction!(r_of_z, m)?)?;
    m.add_function(wrap_pyfunction!(density_interval, m)?)?;
    m.add_function(wrap_pyfunction!(electro_report, m)?)?;
    m.add_function(wrap_pyfunction!(total_energy, m)?)?;
    m.add_function(wrap_pyfunction!(planar_f, m)?)?;
    m.add_function(wrap_pyfunction!(log_z, m)?)?;
    m.add_function(wrap_pyfunction!(free_energy, m)?)?;
    m.add_function(wrap_pyfunction!(euler_char, m)?)?;
    m.add_function(wrap_pyfunction!(expansion_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(double_scaling, m)?)?;
    Ok(())
}
