//! Python bindings for the `ecoop` solvers and experiment harness.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ecoop::harness::trial_rng;
use ecoop::{region, CoopError, Scheme, SolverSettings, Split};

fn to_py(err: CoopError) -> PyErr {
    match err {
        CoopError::Internal(_) | CoopError::Degenerate(_) => PyRuntimeError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn scheme(name: &str) -> PyResult<Scheme> {
    name.parse().map_err(to_py)
}

/// System parameters in linear units.
#[pyclass(name = "SystemConfig", frozen, from_py_object)]
#[derive(Clone)]
struct PySystemConfig(ecoop::SystemConfig);

#[pymethods]
impl PySystemConfig {
    #[new]
    #[pyo3(signature = (p_p, p_s0, eta, n0=1.0, nc=1.0, r_p=3.0, p_max=1000.0, antennas=4))]
    #[allow(clippy::too_many_arguments)]
    fn new(p_p: f64, p_s0: f64, eta: f64, n0: f64, nc: f64, r_p: f64, p_max: f64, antennas: usize) -> PyResult<Self> {
        ecoop::SystemConfig::new(p_p, p_s0, eta, n0, nc, r_p, p_max, antennas).map(Self).map_err(to_py)
    }

    #[getter]
    fn p_p(&self) -> f64 {
        self.0.p_p
    }
    #[getter]
    fn p_s0(&self) -> f64 {
        self.0.p_s0
    }
    #[getter]
    fn eta(&self) -> f64 {
        self.0.eta
    }
    #[getter]
    fn n0(&self) -> f64 {
        self.0.n0
    }
    #[getter]
    fn nc(&self) -> f64 {
        self.0.nc
    }
    #[getter]
    fn r_p(&self) -> f64 {
        self.0.r_p
    }
    #[getter]
    fn p_max(&self) -> f64 {
        self.0.p_max
    }
    #[getter]
    fn antennas(&self) -> usize {
        self.0.antennas
    }

    fn __repr__(&self) -> String {
        let c = &self.0;
        format!(
            "SystemConfig(p_p={}, p_s0={}, eta={}, n0={}, nc={}, r_p={}, p_max={}, antennas={})",
            c.p_p, c.p_s0, c.eta, c.n0, c.nc, c.r_p, c.p_max, c.antennas
        )
    }
}

/// One channel realisation.
#[pyclass(name = "ChannelSet", frozen, from_py_object)]
#[derive(Clone)]
struct PyChannelSet(ecoop::ChannelSet);

#[pymethods]
impl PyChannelSet {
    #[new]
    fn new(h_p: Complex64, g: Vec<Complex64>, h_s: Vec<Complex64>, h_sp: Vec<Complex64>) -> PyResult<Self> {
        ecoop::ChannelSet::new(h_p, g, h_s, h_sp).map(Self).map_err(to_py)
    }

    /// Draw under the fixed-magnitude, uniform-phase model.
    #[staticmethod]
    #[pyo3(signature = (antennas, seed, st_distance_m=1.0, pt_pu_distance_m=2.0, exponent=3.5))]
    fn random(antennas: usize, seed: u64, st_distance_m: f64, pt_pu_distance_m: f64, exponent: f64) -> PyResult<Self> {
        let mut rng = trial_rng(seed, 0);
        ecoop::ChannelSet::random(antennas, st_distance_m, pt_pu_distance_m, exponent, &mut rng)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn h_p(&self) -> Complex64 {
        self.0.h_p
    }
    #[getter]
    fn g(&self) -> Vec<Complex64> {
        self.0.g.clone()
    }
    #[getter]
    fn h_s(&self) -> Vec<Complex64> {
        self.0.h_s.clone()
    }
    #[getter]
    fn h_sp(&self) -> Vec<Complex64> {
        self.0.h_sp.clone()
    }
    #[getter]
    fn antennas(&self) -> usize {
        self.0.antennas()
    }
}

/// Optimised operating point of one scheme.
#[pyclass(name = "SchemeSolution", frozen, skip_from_py_object)]
struct PySchemeSolution(ecoop::SchemeSolution);

#[pymethods]
impl PySchemeSolution {
    #[getter]
    fn scheme(&self) -> String {
        self.0.scheme.to_string()
    }
    #[getter]
    fn feasible(&self) -> bool {
        self.0.feasible
    }
    #[getter]
    fn rate_pu(&self) -> f64 {
        self.0.rate_pu
    }
    #[getter]
    fn rate_su(&self) -> f64 {
        self.0.rate_su
    }
    #[getter]
    fn w_s(&self) -> Vec<Complex64> {
        self.0.w_s.clone()
    }
    #[getter]
    fn w_p(&self) -> Vec<Complex64> {
        self.0.w_p.clone()
    }

    /// Scheme-specific split parameters as a dict; empty for none.
    #[getter]
    fn split<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        match self.0.split {
            Split::None => {}
            Split::Ideal { beta, q_p, q_s, lambda } => {
                d.set_item("beta", beta)?;
                d.set_item("q_p", q_p)?;
                d.set_item("q_s", q_s)?;
                d.set_item("lambda", lambda)?;
            }
            Split::PowerSplit { rho } => d.set_item("rho", rho)?,
            Split::TimeSplit { alpha, p_p1, p_p2 } => {
                d.set_item("alpha", alpha)?;
                d.set_item("p_p1", p_p1)?;
                d.set_item("p_p2", p_p2)?;
            }
        }
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "SchemeSolution(scheme='{}', feasible={}, rate_pu={}, rate_su={})",
            self.0.scheme, self.0.feasible, self.0.rate_pu, self.0.rate_su
        )
    }
}

/// Names accepted wherever a scheme is expected.
#[pyfunction]
fn schemes() -> Vec<String> {
    Scheme::ALL.iter().map(|s| s.to_string()).collect()
}

/// System and channel of a named reference setting.
#[pyfunction]
fn preset(name: &str) -> PyResult<(PySystemConfig, PyChannelSet)> {
    let p = ecoop::PresetName::parse(name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown preset '{name}'")))?
        .load();
    Ok((PySystemConfig(p.system), PyChannelSet(p.channel)))
}

#[pyfunction]
fn solve(py: Python<'_>, scheme_name: &str, cfg: &PySystemConfig, ch: &PyChannelSet, r_p: f64) -> PyResult<PySchemeSolution> {
    let s = scheme(scheme_name)?;
    py.detach(|| region::solve(s, &cfg.0, &ch.0, r_p, &SolverSettings::default()))
        .map(PySchemeSolution)
        .map_err(to_py)
}

#[pyfunction]
fn max_pu_rate(scheme_name: &str, cfg: &PySystemConfig, ch: &PyChannelSet) -> PyResult<f64> {
    region::max_pu_rate(scheme(scheme_name)?, &cfg.0, &ch.0, &SolverSettings::default()).map_err(to_py)
}

/// `(r_p, r_s)` pairs on the boundary of the scheme's rate region.
#[pyfunction]
#[pyo3(signature = (scheme_name, cfg, ch, n_points=21))]
fn rate_region(
    py: Python<'_>,
    scheme_name: &str,
    cfg: &PySystemConfig,
    ch: &PyChannelSet,
    n_points: usize,
) -> PyResult<Vec<(f64, f64)>> {
    let s = scheme(scheme_name)?;
    py.detach(|| region::rate_region(s, &cfg.0, &ch.0, n_points, &SolverSettings::default()))
        .map(|c| c.points)
        .map_err(to_py)
}

/// Runs an experiment described in config-file syntax and returns its CSV.
#[pyfunction]
fn run_experiment(py: Python<'_>, config_text: &str) -> PyResult<String> {
    let cfg = ecoop::parse_config_str(config_text).map_err(to_py)?;
    py.detach(|| ecoop::run(&cfg)).map(|r| r.to_csv()).map_err(to_py)
}

#[pymodule]
fn pyecoop(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystemConfig>()?;
    m.add_class::<PyChannelSet>()?;
    m.add_class::<PySchemeSolution>()?;
    m.add_function(wrap_pyfunction!(schemes, m)?)?;
    m.add_function(wrap_pyfunction!(preset, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(max_pu_rate, m)?)?;
    m.add_function(wrap_pyfunction!(rate_region, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
