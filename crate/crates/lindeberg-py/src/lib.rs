//! Python bindings: the main types and operations of the `lindeberg` crate.
//!
//! Build with `cargo build -p lindeberg-py --release`, then import the
//! produced cdylib as `lindeberg_py` (see python/smoke_test.py).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use lindeberg::bounds::{self, Optimizer1D};
use lindeberg::constants;
use lindeberg::dist;
use lindeberg::fractions::{self, FractionKind, FractionParams, WeightKind};
use lindeberg::specfun;

fn err(e: lindeberg::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn weight_kind(g: &str) -> PyResult<WeightKind> {
    match g {
        "gstar" | "g*" => Ok(WeightKind::Star),
        "gc" | "const" => Ok(WeightKind::Const),
        "g0" => Ok(WeightKind::G0),
        "g1" => Ok(WeightKind::G1),
        other => Err(PyValueError::new_err(format!("unknown weight {other:?}; expected gstar|gc|g0|g1"))),
    }
}

fn fraction_kind(kind: &str) -> PyResult<FractionKind> {
    match kind {
        "esseen" => Ok(FractionKind::Esseen),
        "rozovskii" => Ok(FractionKind::Rozovskii),
        other => Err(PyValueError::new_err(format!("unknown fraction type {other:?}; expected esseen|rozovskii"))),
    }
}

fn params(eps: f64, gamma: f64) -> PyResult<FractionParams> {
    FractionParams::new(eps, gamma).map_err(err)
}

/// A finite discrete distribution with positive probabilities summing to one.
#[pyclass(name = "Distribution", from_py_object)]
#[derive(Clone)]
struct PyDistribution {
    inner: dist::DiscreteDistribution,
}

#[pymethods]
impl PyDistribution {
    /// Zero-mean unit-variance two-point law with mass p at sqrt((1-p)/p).
    #[staticmethod]
    fn two_point(p: f64) -> PyResult<Self> {
        Ok(PyDistribution { inner: dist::DiscreteDistribution::two_point(p).map_err(err)? })
    }

    /// Mass p/2 at ±1 and 1-p at 0.
    #[staticmethod]
    fn symmetric_three_point(p: f64) -> PyResult<Self> {
        Ok(PyDistribution { inner: dist::DiscreteDistribution::symmetric_three_point(p).map_err(err)? })
    }

    /// Parse `{"atoms":[{"x": ..., "p": ...}, ...]}`.
    #[staticmethod]
    #[pyo3(signature = (text, allow_nonzero_mean = false))]
    fn from_json(text: &str, allow_nonzero_mean: bool) -> PyResult<Self> {
        let opts = dist::ParseOptions { allow_nonzero_mean };
        Ok(PyDistribution { inner: dist::DiscreteDistribution::from_json_with(text, opts).map_err(err)? })
    }

    fn atoms(&self) -> Vec<(f64, f64)> {
        self.inner.atoms().iter().map(|a| (a.x, a.p)).collect()
    }

    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    fn variance(&self) -> f64 {
        self.inner.variance()
    }

    /// sigma^2(z) = E X^2 1(|X| >= z).
    fn tail_second_moment(&self, z: f64) -> f64 {
        self.inner.tail_second_moment(z)
    }

    /// mu(z) = E X^3 1(|X| < z).
    fn trunc_third_moment(&self, z: f64) -> f64 {
        self.inner.trunc_third_moment(z)
    }

    fn trunc_abs_third_moment(&self, z: f64) -> f64 {
        self.inner.trunc_abs_third_moment(z)
    }

    fn __repr__(&self) -> String {
        format!("Distribution({:?})", self.inner.atoms())
    }
}

/// The exact law of the standardized n-fold i.i.d. sum.
#[pyclass(name = "SumLaw")]
struct PySumLaw {
    inner: dist::SumLaw,
}

#[pymethods]
impl PySumLaw {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn b_n(&self) -> f64 {
        self.inner.b_n()
    }

    fn atoms(&self) -> Vec<(f64, f64)> {
        self.inner.atoms().iter().map(|a| (a.x, a.p)).collect()
    }

    /// sup_x |P(S~_n < x) - Phi(x)|, exact.
    fn uniform_distance_to_normal(&self) -> f64 {
        self.inner.uniform_distance_to_normal()
    }

    /// P(S_n = 0) in the raw sum scale.
    fn prob_at_zero_sum(&self) -> f64 {
        self.inner.prob_at_zero_sum()
    }
}

/// Exact n-fold i.i.d. convolution, standardized.
#[pyfunction]
fn convolve_iid(d: &PyDistribution, n: usize) -> PyResult<PySumLaw> {
    Ok(PySumLaw { inner: dist::convolve_iid(&d.inner, n).map_err(err)? })
}

#[pyfunction]
fn std_normal_cdf(x: f64) -> f64 {
    specfun::std_normal_cdf(x)
}

#[pyfunction]
fn upper_gamma(r: f64, x: f64) -> PyResult<f64> {
    specfun::upper_gamma(r, x).map_err(err)
}

#[pyfunction]
fn lower_gamma(r: f64, x: f64) -> PyResult<f64> {
    specfun::lower_gamma(r, x).map_err(err)
}

#[pyfunction]
fn bessel_i0(z: f64) -> PyResult<f64> {
    specfun::bessel_i0(z).map_err(err)
}

#[pyfunction]
fn bessel_i0_scaled(z: f64) -> PyResult<f64> {
    specfun::bessel_i0_scaled(z).map_err(err)
}

#[pyfunction]
fn psi(x: f64) -> f64 {
    constants::psi(x)
}

#[pyfunction]
fn psi_tilde(p: f64) -> PyResult<f64> {
    constants::psi_tilde(p).map_err(err)
}

/// Uniform distance of the standardized two-point(p) law to the normal law.
#[pyfunction]
fn delta1(p: f64) -> PyResult<f64> {
    constants::delta1(p).map_err(err)
}

/// (t_gamma, t1_gamma, t2_gamma).
#[pyfunction]
fn t_thresholds(gamma: f64) -> PyResult<(f64, f64, f64)> {
    let t = constants::t_thresholds(gamma).map_err(err)?;
    Ok((t.t_gamma, t.t1_gamma, t.t2_gamma))
}

/// Every named constant as a dict.
#[pyfunction]
fn core_constants(py: Python<'_>) -> PyResult<Py<PyDict>> {
    let c = constants::core_constants();
    let d = PyDict::new(py);
    d.set_item("x0", c.x0)?;
    d.set_item("kappa", c.kappa)?;
    d.set_item("gamma_star", c.gamma_star)?;
    d.set_item("x_phi", c.x_phi)?;
    d.set_item("c_phi", c.c_phi)?;
    d.set_item("p_phi", c.p_phi)?;
    d.set_item("p0", c.p0)?;
    d.set_item("gamma0", bounds::gamma0())?;
    Ok(d.into())
}

/// L_n(z) for n i.i.d. copies of d.
#[pyfunction]
fn lindeberg_fraction(d: &PyDistribution, n: usize, z: f64) -> PyResult<f64> {
    fractions::lindeberg_fraction_iid(&d.inner, n, z).map_err(err)
}

fn attained_str(a: fractions::Attained) -> String {
    match a {
        fractions::Attained::At(z) => format!("at {z}"),
        fractions::Attained::FromLeft(z) => format!("left-limit {z}"),
        fractions::Attained::FromRight(z) => format!("right-limit {z}"),
    }
}

/// Esseen-type fraction for n i.i.d. copies; returns (value, attained_z).
#[pyfunction]
fn esseen_fraction(d: &PyDistribution, n: usize, g: &str, eps: f64, gamma: f64) -> PyResult<(f64, String)> {
    let v = fractions::esseen_fraction_iid(&d.inner, n, &weight_kind(g)?.into(), &params(eps, gamma)?)
        .map_err(err)?;
    Ok((v.value, attained_str(v.attained_z)))
}

/// Rozovskii-type fraction for n i.i.d. copies; returns (value, attained_z).
#[pyfunction]
fn rozovskii_fraction(d: &PyDistribution, n: usize, g: &str, eps: f64, gamma: f64) -> PyResult<(f64, String)> {
    let v = fractions::rozovskii_fraction_iid(&d.inner, n, &weight_kind(g)?.into(), &params(eps, gamma)?)
        .map_err(err)?;
    Ok((v.value, attained_str(v.attained_z)))
}

/// Closed form of a two-point fraction (kind: esseen|rozovskii, g: gstar|gc|g0|g1).
#[pyfunction]
fn two_point_fraction_closed_form(kind: &str, g: &str, p: f64, n: usize, eps: f64, gamma: f64) -> PyResult<f64> {
    fractions::two_point_fraction_closed_form(fraction_kind(kind)?, weight_kind(g)?, p, n, &params(eps, gamma)?)
        .map_err(err)
}

#[pyfunction]
fn aex_upper_esseen(eps: f64, gamma: f64) -> PyResult<f64> {
    Ok(bounds::aex_upper_esseen(&params(eps, gamma)?).map_err(err)?.value)
}

#[pyfunction]
fn aex_upper_rozovskii(eps: f64, gamma: f64) -> PyResult<f64> {
    Ok(bounds::aex_upper_rozovskii(&params(eps, gamma)?).map_err(err)?.value)
}

/// Asymptotically-best lower bound (value, extremal_p).
#[pyfunction]
fn abe_lower_esseen(gamma: f64) -> PyResult<(f64, f64)> {
    let b = bounds::abe_lower_esseen(gamma, &Optimizer1D::default()).map_err(err)?;
    Ok((b.value, b.witness_p.unwrap_or(f64::NAN)))
}

#[pyfunction]
fn abe_lower_rozovskii(eps: f64, gamma: f64) -> PyResult<f64> {
    Ok(bounds::abe_lower_rozovskii(&params(eps, gamma)?).map_err(err)?.value)
}

#[pyfunction]
fn gamma0() -> f64 {
    bounds::gamma0()
}

/// The lower bounds of the exact-constant family at (eps, gamma), as dicts.
#[pyfunction]
fn exact_constant_lower_bounds(py: Python<'_>, eps: f64, gamma: f64) -> PyResult<Vec<Py<PyDict>>> {
    let all = bounds::exact_constant_lower_bounds(&params(eps, gamma)?, &Optimizer1D::default()).map_err(err)?;
    all.into_iter()
        .map(|b| {
            let d = PyDict::new(py);
            d.set_item("target", format!("{:?}", b.target))?;
            d.set_item("value", b.value)?;
            d.set_item("witness_p", b.witness_p)?;
            Ok(d.into())
        })
        .collect()
}

/// Computed upper-bound table as (kind, eps, gamma, value) tuples.
#[pyfunction]
fn table3() -> PyResult<Vec<(String, f64, f64, f64)>> {
    Ok(bounds::compute_table3()
        .map_err(err)?
        .into_iter()
        .map(|r| {
            let kind = match r.kind {
                FractionKind::Esseen => "esseen".to_string(),
                FractionKind::Rozovskii => "rozovskii".to_string(),
            };
            (kind, r.epsilon, r.gamma.resolve(), r.value)
        })
        .collect())
}

/// Computed lower-bound table as (gamma, extremal_p, value) tuples.
#[pyfunction]
fn table4() -> PyResult<Vec<(f64, f64, f64)>> {
    Ok(bounds::compute_table4()
        .map_err(err)?
        .into_iter()
        .map(|c| (c.gamma, c.witness_p, c.value))
        .collect())
}

#[pymodule]
fn lindeberg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDistribution>()?;
    m.add_class::<PySumLaw>()?;
    m.add_function(wrap_pyfunction!(convolve_iid, m)?)?;
    m.add_function(wrap_pyfunction!(std_normal_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(upper_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(lower_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_i0, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_i0_scaled, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(psi_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(delta1, m)?)?;
    m.add_function(wrap_pyfunction!(t_thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(core_constants, m)?)?;
    m.add_function(wrap_pyfunction!(lindeberg_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(esseen_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(rozovskii_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(two_point_fraction_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(aex_upper_esseen, m)?)?;
    m.add_function(wrap_pyfunction!(aex_upper_rozovskii, m)?)?;
    m.add_function(wrap_pyfunction!(abe_lower_esseen, m)?)?;
    m.add_function(wrap_pyfunction!(abe_lower_rozovskii, m)?)?;
    m.add_function(wrap_pyfunction!(gamma0, m)?)?;
    m.add_function(wrap_pyfunction!(exact_constant_lower_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(table3, m)?)?;
    m.add_function(wrap_pyfunction!(table4, m)?)?;
    Ok(())
}
