//! Python bindings. Exact values come back as `fractions.Fraction`, inexact
//! ones as `float`; signatures as tuples of ints.

use pyo3::exceptions::{PyNotImplementedError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

use schurwalk::chains;
use schurwalk::kernels::{self, RowOptions};
use schurwalk::quantum::{self, Truncation};
use schurwalk::scalar::format_rational;
use schurwalk::suite::{self, Check, VerifyConfig};
use schurwalk::symfunc::{self, EvaluationPoint};
use schurwalk::{Error, Rational, Scalar};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Resource(_) => PyRuntimeError::new_err(e.to_string()),
        Error::Unsupported(_) => PyNotImplementedError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_rational(r),))
}

fn scalar<'py>(py: Python<'py>, s: &Scalar) -> PyResult<Bound<'py, PyAny>> {
    match s.as_rational() {
        Some(r) => fraction(py, r),
        None => Ok(s.to_f64().into_pyobject(py)?.into_any()),
    }
}

fn integer<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("builtins")?.getattr("int")?.call1((r.to_integer().to_string(),))
}

fn parts<'py>(py: Python<'py>, s: &schurwalk::Signature) -> PyResult<Bound<'py, PyTuple>> {
    PyTuple::new(py, s.parts())
}

fn json<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((v.to_string(),))
}

/// Accepts a `Signature`, a sequence of ints or text such as `"2,0,-1"`.
fn sig(obj: &Bound<'_, PyAny>) -> PyResult<schurwalk::Signature> {
    if let Ok(s) = obj.cast::<Signature>() {
        return Ok(s.get().0.clone());
    }
    if let Ok(text) = obj.extract::<String>() {
        return text.parse().map_err(to_py_err);
    }
    let v: Vec<i64> = obj.extract()?;
    schurwalk::Signature::new(v).map_err(to_py_err)
}

/// Accepts a `SpectralFunction` or its text form.
fn spectral(obj: &Bound<'_, PyAny>) -> PyResult<kernels::SpectralFunction> {
    if let Ok(f) = obj.cast::<SpectralFunction>() {
        return Ok(f.get().0.clone());
    }
    obj.extract::<String>()?.parse().map_err(to_py_err)
}

/// Accepts text such as `"1,1/2"` or a sequence of ints, strings or Fractions.
fn point(obj: &Bound<'_, PyAny>) -> PyResult<EvaluationPoint> {
    if let Ok(text) = obj.extract::<String>() {
        return text.parse().map_err(to_py_err);
    }
    let items: Vec<Bound<'_, PyAny>> = obj.extract()?;
    let coords = items
        .iter()
        .map(|x| x.str()?.to_cow().map(|c| c.into_owned()))
        .collect::<PyResult<Vec<_>>>()?;
    coords.join(",").parse().map_err(to_py_err)
}

#[pyclass(name = "Signature", module = "schurwalk", frozen, eq, hash, ord, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Signature(schurwalk::Signature);

#[pymethods]
impl Signature {
    #[new]
    fn py_new(parts: &Bound<'_, PyAny>) -> PyResult<Self> {
        sig(parts).map(Signature)
    }

    #[getter]
    fn parts<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyTuple>> {
        parts(py, &self.0)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn size(&self) -> i64 {
        self.0.size()
    }

    fn shift(&self, c: i64) -> Self {
        Signature(self.0.shift(c))
    }

    fn dimension<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        integer(py, &schurwalk::signature::dimension(&self.0))
    }

    fn __len__(&self) -> usize {
        self.0.rank()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Signature({:?})", self.0.parts())
    }
}

#[pyclass(name = "SpectralFunction", module = "schurwalk", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct SpectralFunction(kernels::SpectralFunction);

#[pymethods]
impl SpectralFunction {
    /// Parses forms like `beta-:1/2`, `gamma+:1`, `laurent{0:1/2,1:1/2}`, `prod(a,b)`.
    #[new]
    fn py_new(text: &str) -> PyResult<Self> {
        text.parse().map(SpectralFunction).map_err(to_py_err)
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.0.family()
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    fn times(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.0.times(&spectral(other)?).map(SpectralFunction).map_err(to_py_err)
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json(py, &self.0.to_json())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("SpectralFunction('{}')", self.0)
    }
}

#[pyclass(name = "TransitionKernel", module = "schurwalk", frozen)]
struct TransitionKernel(kernels::TransitionKernel);

#[pymethods]
impl TransitionKernel {
    /// `theta` defaults to the all-ones point of rank `n`.
    #[new]
    #[pyo3(signature = (f, theta=None, n=None))]
    fn py_new(f: &Bound<'_, PyAny>, theta: Option<&Bound<'_, PyAny>>, n: Option<usize>) -> PyResult<Self> {
        let f = spectral(f)?;
        let theta = match (theta, n) {
            (Some(t), _) => point(t)?,
            (None, Some(n)) => EvaluationPoint::ones(n),
            (None, None) => return Err(PyValueError::new_err("give theta or n")),
        };
        kernels::TransitionKernel::new(theta, &f).map(TransitionKernel).map_err(to_py_err)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    fn entry<'py>(&self, py: Python<'py>, lam: &Bound<'_, PyAny>, mu: &Bound<'_, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        scalar(py, &self.0.entry(&sig(lam)?, &sig(mu)?).map_err(to_py_err)?)
    }

    /// Nonzero entries of the row from `lam` as `{mu: value}`.
    #[pyo3(signature = (lam, eps=1e-9))]
    fn row<'py>(&self, py: Python<'py>, lam: &Bound<'_, PyAny>, eps: f64) -> PyResult<Bound<'py, PyDict>> {
        let row = self.0.row(&sig(lam)?, RowOptions::with_eps(eps)).map_err(to_py_err)?;
        let d = PyDict::new(py);
        for (mu, v) in &row.entries {
            d.set_item(parts(py, mu)?, scalar(py, v)?)?;
        }
        Ok(d)
    }
}

#[pyfunction]
#[pyo3(signature = (lam, theta=None))]
fn schur<'py>(py: Python<'py>, lam: &Bound<'_, PyAny>, theta: Option<&Bound<'_, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
    let lam = sig(lam)?;
    let theta = match theta {
        Some(t) => point(t)?,
        None => EvaluationPoint::ones(lam.rank()),
    };
    fraction(py, &symfunc::schur_eval(&lam, &theta).map_err(to_py_err)?)
}

#[pyfunction]
fn dimension<'py>(py: Python<'py>, lam: &Bound<'_, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    integer(py, &schurwalk::signature::dimension(&sig(lam)?))
}

#[pyfunction]
fn lr_coeff(lam: &Bound<'_, PyAny>, mu: &Bound<'_, PyAny>, tau: &Bound<'_, PyAny>) -> PyResult<u64> {
    symfunc::lr_coeff(&sig(lam)?, &sig(mu)?, &sig(tau)?).map_err(to_py_err)
}

#[pyfunction]
fn lr_product<'py>(py: Python<'py>, lam: &Bound<'_, PyAny>, mu: &Bound<'_, PyAny>) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (tau, c) in symfunc::lr_product(&sig(lam)?, &sig(mu)?).map_err(to_py_err)? {
        d.set_item(parts(py, &tau)?, c)?;
    }
    Ok(d)
}

/// Weight multiplicities of the irreducible module with highest weight `lam`.
#[pyfunction]
fn weights<'py>(py: Python<'py>, lam: &Bound<'_, PyAny>) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (w, m) in symfunc::weight_expansion(&sig(lam)?).map_err(to_py_err)?.terms {
        d.set_item(PyTuple::new(py, w.coords())?, m)?;
    }
    Ok(d)
}

/// Expansion of the class function attached to `f` in irreducible characters.
/// `max_size` fixes the truncation; otherwise it is chosen adaptively.
#[pyfunction]
#[pyo3(signature = (f, n, max_size=None))]
fn kappa<'py>(py: Python<'py>, f: &Bound<'_, PyAny>, n: usize, max_size: Option<u64>) -> PyResult<Bound<'py, PyDict>> {
    let trunc = max_size.map_or_else(Truncation::default, Truncation::Size);
    let k = quantum::kappa_of(&spectral(f)?, n, trunc).map_err(to_py_err)?;
    let d = PyDict::new(py);
    for (beta, c) in k.terms() {
        d.set_item(parts(py, beta)?, scalar(py, c)?)?;
    }
    Ok(d)
}

/// Trajectory of the chain started at `lam`, including the start state.
#[pyfunction]
#[pyo3(signature = (lam, f, steps, seed=0))]
fn simulate<'py>(
    py: Python<'py>,
    lam: &Bound<'_, PyAny>,
    f: &Bound<'_, PyAny>,
    steps: u64,
    seed: u64,
) -> PyResult<Vec<Bound<'py, PyTuple>>> {
    let (lam, f) = (sig(lam)?, spectral(f)?);
    let t = py.detach(|| chains::simulate(&lam, &f, steps, seed)).map_err(to_py_err)?;
    t.states.iter().map(|s| parts(py, s)).collect()
}

/// Runs a named check and returns its report as a dict.
#[pyfunction]
#[pyo3(signature = (check, *, n=None, f=None, f2=None, theta=None, window=None, eps=None,
                    lam=None, mu=None, seed=None, samples=None, delta=None))]
#[allow(clippy::too_many_arguments)]
fn verify<'py>(
    py: Python<'py>,
    check: &str,
    n: Option<usize>,
    f: Option<&Bound<'_, PyAny>>,
    f2: Option<&Bound<'_, PyAny>>,
    theta: Option<&Bound<'_, PyAny>>,
    window: Option<i64>,
    eps: Option<f64>,
    lam: Option<&Bound<'_, PyAny>>,
    mu: Option<&Bound<'_, PyAny>>,
    seed: Option<u64>,
    samples: Option<u64>,
    delta: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let check: Check = check.parse().map_err(to_py_err)?;
    let d = VerifyConfig::default();
    let lambda = lam.map(sig).transpose()?;
    let theta = theta.map(point).transpose()?;
    let cfg = VerifyConfig {
        n: n.or(lambda.as_ref().map(|l| l.rank())).or(theta.as_ref().map(|t| t.rank())).unwrap_or(d.n),
        f: f.map(spectral).transpose()?,
        f2: f2.map(spectral).transpose()?,
        theta,
        window: window.unwrap_or(d.window),
        eps: eps.unwrap_or(d.eps),
        lambda,
        mu: mu.map(sig).transpose()?,
        seed: seed.unwrap_or(d.seed),
        samples: samples.unwrap_or(d.samples),
        delta: delta.unwrap_or(d.delta),
    };
    let report = py.detach(|| suite::verify(check, &cfg)).map_err(to_py_err)?;
    json(py, &report.to_json())
}

#[pymodule(name = "schurwalk")]
pub fn schurwalk_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Signature>()?;
    m.add_class::<SpectralFunction>()?;
    m.add_class::<TransitionKernel>()?;
    m.add_function(wrap_pyfunction!(schur, m)?)?;
    m.add_function(wrap_pyfunction!(dimension, m)?)?;
    m.add_function(wrap_pyfunction!(lr_coeff, m)?)?;
    m.add_function(wrap_pyfunction!(lr_product, m)?)?;
    m.add_function(wrap_pyfunction!(weights, m)?)?;
    m.add_function(wrap_pyfunction!(kappa, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("CHECKS", Check::NAMES.to_vec())?;
    Ok(())
}
