//! Python bindings. Scalars cross the boundary as `fractions.Fraction` for
//! exact real values, `float` for floats, and text for complex values;
//! arguments may be any of those or a string in the scalar syntax.

use alphaperm::hunt::{hunt as run_hunt, AlphaSampling, HuntConfig, KindChoice, Target};
use alphaperm::inequality::{Checker, ComparisonResult, Sign};
use alphaperm::suite::{run_suite, AlphaSet, Suite, SuiteConfig};
use alphaperm::{BlockSplit, Caps, Error, GramKind, GramSpec, Kernels};
use pyo3::exceptions::{PyOSError, PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn err(e: Error) -> PyErr {
    match e {
        Error::Capacity { .. } => PyOverflowError::new_err(e.to_string()),
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn kernels_inner() -> alphaperm::Result<Kernels> {
    Ok(Kernels::new(Caps::from_env()?))
}

fn kernels() -> PyResult<Kernels> {
    kernels_inner().map_err(err)
}

fn scalar_arg(obj: &Bound<'_, PyAny>) -> PyResult<alphaperm::Scalar> {
    if let Ok(v) = obj.extract::<bool>() {
        return Ok(alphaperm::Scalar::int(v as i64));
    }
    if let Ok(v) = obj.extract::<f64>() {
        if obj.is_instance_of::<pyo3::types::PyFloat>() {
            return Ok(alphaperm::Scalar::Float(v));
        }
    }
    let text = obj.str()?.to_string();
    text.parse().map_err(err)
}

fn scalar_out(py: Python<'_>, s: &alphaperm::Scalar) -> PyResult<Py<PyAny>> {
    match s {
        alphaperm::Scalar::Rational(r) => {
            let fraction = py.import("fractions")?.getattr("Fraction")?;
            Ok(fraction.call1((r.to_string(),))?.unbind())
        }
        alphaperm::Scalar::Float(x) => Ok(x.into_pyobject(py)?.into_any().unbind()),
        other => Ok(other.to_string().into_pyobject(py)?.into_any().unbind()),
    }
}

/// A square matrix over exact rationals, Gaussian rationals, or floats.
#[pyclass(module = "alphaperm", frozen)]
struct Matrix {
    inner: alphaperm::Matrix,
}

#[pymethods]
impl Matrix {
    /// Builds a matrix from a list of rows of scalars.
    #[new]
    fn new(rows: &Bound<'_, PyList>) -> PyResult<Self> {
        let mut out = Vec::new();
        for row in rows.iter() {
            let row = row.cast::<PyList>()?;
            out.push(row.iter().map(|x| scalar_arg(&x)).collect::<PyResult<Vec<_>>>()?);
        }
        Ok(Matrix { inner: alphaperm::Matrix::from_rows(out).map_err(err)? })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Matrix { inner: alphaperm::parse_matrix(text).map_err(err)? })
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        Ok(Matrix { inner: alphaperm::read_matrix(path).map_err(err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (n, kind = "real", seed = 0, scale = 4, rank = None, unit_diagonal = false))]
    fn random_psd(n: usize, kind: &str, seed: u64, scale: u32, rank: Option<usize>, unit_diagonal: bool) -> PyResult<Self> {
        let kind: GramKind = kind.parse().map_err(err)?;
        let spec = GramSpec { rank, unit_diagonal, ..GramSpec::new(n, kind, scale) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(Matrix { inner: alphaperm::random_gram(&spec, &mut rng) })
    }

    fn to_text(&self) -> String {
        alphaperm::serialize_matrix(&self.inner)
    }

    fn write(&self, path: &str) -> PyResult<()> {
        alphaperm::write_matrix(path, &self.inner).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn field(&self) -> &'static str {
        self.inner.field().name()
    }

    fn rows(&self, py: Python<'_>) -> PyResult<Vec<Vec<Py<PyAny>>>> {
        (0..self.inner.n())
            .map(|i| self.inner.row(i).iter().map(|s| scalar_out(py, s)).collect())
            .collect()
    }

    fn content_hash(&self) -> String {
        alphaperm::matrix_hash(&self.inner)
    }

    fn is_hermitian(&self) -> bool {
        self.inner.is_hermitian()
    }

    fn is_psd(&self) -> PyResult<bool> {
        alphaperm::certify_psd(&self.inner).map_err(err)
    }

    fn transpose(&self) -> Self {
        Matrix { inner: self.inner.transpose() }
    }

    fn doubled(&self) -> PyResult<Self> {
        Ok(Matrix { inner: self.inner.doubled().map_err(err)? })
    }

    fn to_float(&self) -> Self {
        Matrix { inner: self.inner.to_float() }
    }

    fn __eq__(&self, other: &Matrix) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Matrix(n={}, field={})", self.inner.n(), self.inner.field().name())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

#[pyfunction]
#[pyo3(signature = (a, alpha, algo = "dp"))]
fn per_alpha(py: Python<'_>, a: &Matrix, alpha: &Bound<'_, PyAny>, algo: &str) -> PyResult<Py<PyAny>> {
    let k = kernels()?;
    let alpha = scalar_arg(alpha)?;
    let v = match algo {
        "dp" => k.per_alpha_dp(&a.inner, &alpha),
        "naive" => k.per_alpha_naive(&a.inner, &alpha),
        other => return Err(PyValueError::new_err(format!("unknown algorithm `{other}`"))),
    };
    scalar_out(py, &v.map_err(err)?)
}

#[pyfunction]
fn permanent(py: Python<'_>, a: &Matrix) -> PyResult<Py<PyAny>> {
    scalar_out(py, &kernels()?.permanent(&a.inner).map_err(err)?)
}

#[pyfunction]
fn determinant(py: Python<'_>, a: &Matrix) -> PyResult<Py<PyAny>> {
    scalar_out(py, &kernels()?.determinant(&a.inner).map_err(err)?)
}

#[pyfunction]
fn hafnian(py: Python<'_>, a: &Matrix) -> PyResult<Py<PyAny>> {
    scalar_out(py, &kernels()?.hafnian(&a.inner).map_err(err)?)
}

#[pyfunction]
fn alpha_determinant(py: Python<'_>, a: &Matrix, alpha: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
    scalar_out(py, &kernels()?.alpha_determinant(&a.inner, &scalar_arg(alpha)?).map_err(err)?)
}

#[pyfunction]
fn per_beta_k(py: Python<'_>, a: &Matrix, beta: &Bound<'_, PyAny>, k: usize) -> PyResult<Py<PyAny>> {
    scalar_out(py, &kernels()?.per_beta_k(&a.inner, &scalar_arg(beta)?, k).map_err(err)?)
}

fn comparison<'py>(py: Python<'py>, r: &ComparisonResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("name", r.name)?;
    d.set_item("lhs", scalar_out(py, &r.lhs)?)?;
    d.set_item("rhs", scalar_out(py, &r.rhs)?)?;
    d.set_item("slack", scalar_out(py, &r.slack)?)?;
    d.set_item("relation", r.relation.symbol())?;
    d.set_item("verdict", r.verdict.to_string())?;
    d.set_item("regime", r.regime.to_string())?;
    Ok(d)
}

/// Lieb, Fischer and the Lieb-type family for one block split.
#[pyfunction]
fn check_lieb_type<'py>(py: Python<'py>, a: &Matrix, split: usize, alpha: &Bound<'_, PyAny>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let c = Checker::new(kernels()?);
    let split = BlockSplit::new(split, a.inner.n()).map_err(err)?;
    let mut out = vec![
        c.check_lieb(&a.inner, split).map_err(err)?,
        c.check_fischer(&a.inner, split).map_err(err)?,
    ];
    out.extend(c.check_lieb_type(&a.inner, split, &scalar_arg(alpha)?).map_err(err)?);
    out.iter().map(|r| comparison(py, r)).collect()
}

#[pyfunction]
fn check_marcus<'py>(py: Python<'py>, a: &Matrix, alpha: &Bound<'_, PyAny>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let c = Checker::new(kernels()?);
    let out = c.check_marcus(&a.inner, &scalar_arg(alpha)?).map_err(err)?;
    out.iter().map(|r| comparison(py, r)).collect()
}

/// Every majorization step of `p(lambda)` for `sign` in {+1, -1}.
#[pyfunction]
#[pyo3(signature = (a, sign = 1))]
fn check_majorization<'py>(py: Python<'py>, a: &Matrix, sign: i64) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let sign: Sign = sign.to_string().parse().map_err(err)?;
    let c = Checker::new(kernels()?);
    let steps = c.check_all_majorization_steps(&a.inner, sign).map_err(err)?;
    steps
        .iter()
        .map(|(lambda, mu, r)| {
            let d = comparison(py, r)?;
            d.set_item("lambda", lambda.clone())?;
            d.set_item("mu", mu.clone())?;
            Ok(d)
        })
        .collect()
}

/// Runs a property suite; returns `(ok, report_text)`.
#[pyfunction]
#[pyo3(signature = (suite = "all", n_max = 5, trials = 50, seed = 0, alpha_set = "theorem2"))]
fn check(suite: &str, n_max: usize, trials: u64, seed: u64, alpha_set: &str) -> PyResult<(bool, String)> {
    let config = SuiteConfig {
        alpha_set: alpha_set.parse::<AlphaSet>().map_err(err)?,
        ..SuiteConfig::new(suite.parse::<Suite>().map_err(err)?, n_max, trials, seed)
    };
    let report = run_suite(&Checker::new(kernels()?), &config).map_err(err)?;
    Ok((!report.has_violation(), report.to_string()))
}

/// Randomized search; returns a summary dict and the findings as JSON lines.
#[pyfunction]
#[pyo3(signature = (targets, n, alpha_range = "1:2", trials = 1000, seed = 0, kind = "mixed", keep_smallest = 0))]
fn hunt<'py>(
    py: Python<'py>,
    targets: Vec<String>,
    n: usize,
    alpha_range: &str,
    trials: u64,
    seed: u64,
    kind: &str,
    keep_smallest: usize,
) -> PyResult<(Bound<'py, PyDict>, Vec<String>)> {
    let targets = targets.iter().map(|t| t.parse::<Target>()).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let config = HuntConfig {
        kind: kind.parse::<KindChoice>().map_err(err)?,
        keep_smallest,
        ..HuntConfig::new(targets, n, AlphaSampling::parse_range(alpha_range).map_err(err)?, trials, seed)
    };
    let (report, findings) = py.detach(|| -> alphaperm::Result<_> {
        let checker = Checker::new(kernels_inner()?);
        config.validate(&checker)?;
        run_hunt(&checker, &config)
    })
    .map_err(err)?;
    let summary = PyDict::new(py);
    summary.set_item("trials", report.trials)?;
    summary.set_item("violations", report.violations())?;
    summary.set_item("mismatches", report.mismatches())?;
    let per_target = PyDict::new(py);
    for s in &report.summaries {
        let d = PyDict::new(py);
        d.set_item("evaluated", s.evaluated)?;
        d.set_item("violated", s.counts.violated)?;
        d.set_item("violations", s.violations)?;
        d.set_item("min_slack", s.min.as_ref().map(|m| scalar_out(py, &m.slack)).transpose()?)?;
        per_target.set_item(s.target.name(), d)?;
    }
    summary.set_item("targets", per_target)?;
    Ok((summary, findings.iter().map(|f| f.to_json_line()).collect()))
}

#[pymodule]
#[pyo3(name = "alphaperm")]
fn alphaperm_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Matrix>()?;
    m.add_function(wrap_pyfunction!(per_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(permanent, m)?)?;
    m.add_function(wrap_pyfunction!(determinant, m)?)?;
    m.add_function(wrap_pyfunction!(hafnian, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_determinant, m)?)?;
    m.add_function(wrap_pyfunction!(per_beta_k, m)?)?;
    m.add_function(wrap_pyfunction!(check_lieb_type, m)?)?;
    m.add_function(wrap_pyfunction!(check_marcus, m)?)?;
    m.add_function(wrap_pyfunction!(check_majorization, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(hunt, m)?)?;
    Ok(())
}
