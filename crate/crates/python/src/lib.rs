//! Python bindings for `markov-lis`.

use std::collections::HashMap;

use markov_lis::laws::{self, LimitLaw};
use markov_lis::lis;
use markov_lis::montecarlo::{self, DriftRow, MomentRow};
use markov_lis::{ExperimentConfig, ExperimentKind, InitialDistribution, Word};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: markov_lis::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn word(letters: Vec<u8>, m: u8) -> PyResult<Word> {
    Word::new(letters, m).map_err(err)
}

/// Two-state chain with `a = P(2|1)` and `b = P(1|2)`.
#[pyclass(frozen, skip_from_py_object, name = "ChainParams")]
#[derive(Clone, Copy)]
struct PyChainParams {
    inner: markov_lis::ChainParams,
}

impl PyChainParams {
    fn init(&self, p1: Option<f64>) -> PyResult<InitialDistribution> {
        match p1 {
            Some(p) => InitialDistribution::new(p).map_err(err),
            None => Ok(InitialDistribution::stationary(&self.inner)),
        }
    }
}

#[pymethods]
impl PyChainParams {
    #[new]
    fn new(a: f64, b: f64) -> PyResult<Self> {
        Ok(Self {
            inner: markov_lis::ChainParams::new(a, b).map_err(err)?,
        })
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a()
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.b()
    }

    fn transition_matrix(&self) -> [[f64; 2]; 2] {
        self.inner.transition_matrix()
    }

    /// `pi1, pi2, lambda2, mu, sigma2, sigma_tilde2`.
    fn derived(&self) -> HashMap<&'static str, f64> {
        let d = self.inner.derive();
        HashMap::from([
            ("pi1", d.pi1),
            ("pi2", d.pi2),
            ("lambda2", d.lambda2),
            ("mu", d.mu),
            ("sigma2", d.sigma2),
            ("sigma_tilde2", d.sigma_tilde2),
        ])
    }

    /// Law of `X_n`; `p1 = P(X_0 = 1)`, stationary when omitted.
    #[pyo3(signature = (n, p1=None))]
    fn evolve(&self, n: u64, p1: Option<f64>) -> PyResult<[f64; 2]> {
        self.inner.evolve(&self.init(p1)?, n).map_err(err)
    }

    #[pyo3(signature = (k, p1=None))]
    fn mean_s(&self, k: u64, p1: Option<f64>) -> PyResult<f64> {
        self.inner.mean_s(&self.init(p1)?, k).map_err(err)
    }

    fn var_s(&self, k: u64) -> PyResult<f64> {
        self.inner.var_s(k).map_err(err)
    }

    fn cov_s(&self, k: u64, l: u64) -> PyResult<f64> {
        self.inner.cov_s(k, l).map_err(err)
    }

    fn cov_z(&self, k: u64, l: u64) -> PyResult<f64> {
        self.inner.cov_z(k, l).map_err(err)
    }

    /// `P(X_k = i, X_l = j)` as `[p11, p12, p21, p22]`.
    #[pyo3(signature = (k, l, p1=None))]
    fn pair_prob(&self, k: u64, l: u64, p1: Option<f64>) -> PyResult<[f64; 4]> {
        self.inner.pair_prob(&self.init(p1)?, k, l).map_err(err)
    }

    /// Letters `X_1..X_n` in `{1, 2}`.
    #[pyo3(signature = (n, seed, p1=None))]
    fn sample_word(&self, n: usize, seed: u64, p1: Option<f64>) -> PyResult<Vec<u8>> {
        Ok(self.inner.sample_word(&self.init(p1)?, n, seed).letters().to_vec())
    }

    /// Limit law of `(LI_n - centering_rate * n) / sqrt(n)`.
    fn limiting_law(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let asym = laws::limiting_law(&self.inner);
        let out = pyo3::types::PyDict::new(py);
        out.set_item("kind", asym.law.kind())?;
        out.set_item("centering_rate", asym.centering_rate)?;
        match asym.law {
            LimitLaw::BrownianFunctional { scale } => out.set_item("scale", scale)?,
            LimitLaw::CenteredNormal { variance } => out.set_item("variance", variance)?,
            LimitLaw::DegenerateAtZero => {}
        }
        Ok(out.into_any().unbind())
    }

    fn __repr__(&self) -> String {
        format!("ChainParams(a={}, b={})", self.inner.a(), self.inner.b())
    }
}

#[pyfunction]
#[pyo3(signature = (letters, m=2))]
fn lis_patience(letters: Vec<u8>, m: u8) -> PyResult<usize> {
    Ok(lis::lis_patience(&word(letters, m)?))
}

#[pyfunction]
#[pyo3(signature = (letters, m=2))]
fn lis_combinatorial(letters: Vec<u8>, m: u8) -> PyResult<usize> {
    Ok(lis::lis_combinatorial(&word(letters, m)?))
}

#[pyfunction]
#[pyo3(signature = (letters, m=2))]
fn lis_bruteforce(letters: Vec<u8>, m: u8) -> PyResult<usize> {
    lis::lis_bruteforce(&word(letters, m)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (letters, m=2))]
fn rsk_shape(letters: Vec<u8>, m: u8) -> PyResult<Vec<usize>> {
    Ok(lis::rsk_shape(&word(letters, m)?).rows)
}

#[pyfunction]
fn density_f(y: f64, a: f64) -> PyResult<f64> {
    laws::density_f(y, a).map_err(err)
}

#[pyfunction]
fn cdf_f(y: f64, a: f64) -> PyResult<f64> {
    laws::cdf_f(y, a).map_err(err)
}

#[pyfunction]
fn quantile_f(q: f64, a: f64) -> PyResult<f64> {
    laws::quantile_f(q, a).map_err(err)
}

#[pyfunction]
fn mc_tail_bound(c: f64, z: f64, eps: f64) -> PyResult<f64> {
    laws::mc_tail_bound(c, z, eps).map_err(err)
}

#[pyfunction]
fn sample_brownian_functional(steps: usize, seed: u64) -> PyResult<f64> {
    laws::sample_brownian_functional(steps, seed).map_err(err)
}

#[pyfunction]
fn sample_traceless_max_eig(seed: u64) -> f64 {
    laws::sample_traceless_max_eig(seed)
}

#[pyfunction]
fn sample_perturbed_max_eig(rho: f64, seed: u64) -> PyResult<f64> {
    let pert = laws::GuePerturbation::new(rho).map_err(err)?;
    Ok(laws::sample_perturbed_max_eig(&pert, seed))
}

/// Kolmogorov–Smirnov distance of `samples` to the limit law of `params`.
#[pyfunction]
fn ks_to_limit_law(samples: Vec<f64>, params: &PyChainParams) -> PyResult<f64> {
    let emp = markov_lis::EmpiricalDistribution::new(samples).map_err(err)?;
    let cdf = laws::limiting_law(&params.inner).law.cdf_fn();
    Ok(montecarlo::ks_statistic(&emp, cdf).map_err(err)?.statistic)
}

/// Standardized `LI_n` of `trials` stationary words, in trial order.
#[pyfunction]
fn li_experiment(py: Python<'_>, params: &PyChainParams, n: usize, trials: usize, seed: u64) -> PyResult<Vec<f64>> {
    let cfg = ExperimentConfig::new(params.inner, n, trials, seed, ExperimentKind::LiLaw).map_err(err)?;
    let out = py.detach(|| montecarlo::li_trials(&cfg)).map_err(err)?;
    Ok(out.into_iter().map(|t| t.scaled).collect())
}

/// `(R1, R2)` RSK row lengths per trial.
#[pyfunction]
fn shape_experiment(
    py: Python<'_>,
    params: &PyChainParams,
    n: usize,
    trials: usize,
    seed: u64,
) -> PyResult<Vec<(usize, usize)>> {
    let cfg = ExperimentConfig::new(params.inner, n, trials, seed, ExperimentKind::ShapeJoint).map_err(err)?;
    let out = py.detach(|| montecarlo::run_shape_experiment(&cfg)).map_err(err)?;
    Ok(out.trials.iter().map(|t| (t.r1, t.r2)).collect())
}

fn moment_dict(r: &MomentRow) -> HashMap<&'static str, f64> {
    HashMap::from([
        ("k", r.k as f64),
        ("mc_mean", r.mc_mean),
        ("exact_mean", r.exact_mean),
        ("mean_se", r.mean_se),
        ("mc_var", r.mc_var),
        ("exact_var", r.exact_var),
        ("var_se", r.var_se),
    ])
}

#[pyfunction]
fn moment_check(
    py: Python<'_>,
    params: &PyChainParams,
    k_list: Vec<usize>,
    trials: usize,
    seed: u64,
) -> PyResult<Vec<HashMap<&'static str, f64>>> {
    let n = k_list.iter().copied().max().unwrap_or(0);
    let cfg = ExperimentConfig::new(params.inner, n, trials, seed, ExperimentKind::MomentCheck).map_err(err)?;
    let rows = py.detach(|| montecarlo::run_moment_check(&cfg, &k_list)).map_err(err)?;
    Ok(rows.iter().map(moment_dict).collect())
}

fn drift_dict(r: &DriftRow) -> HashMap<&'static str, Option<f64>> {
    HashMap::from([
        ("n", Some(r.n as f64)),
        ("c_n", Some(r.c_n)),
        ("z", Some(r.z)),
        ("exceedance", Some(r.exceedance)),
        ("se", Some(r.se)),
        ("bound", r.bound),
    ])
}

#[pyfunction]
fn drift_experiment(
    py: Python<'_>,
    params: &PyChainParams,
    n_list: Vec<usize>,
    z: f64,
    trials: usize,
    seed: u64,
) -> PyResult<Vec<HashMap<&'static str, Option<f64>>>> {
    let rows = py
        .detach(|| montecarlo::run_drift_experiment(&params.inner, &n_list, z, trials, seed))
        .map_err(err)?;
    Ok(rows.iter().map(drift_dict).collect())
}

#[pymodule]
fn markov_lis_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChainParams>()?;
    m.add_function(wrap_pyfunction!(lis_patience, m)?)?;
    m.add_function(wrap_pyfunction!(lis_combinatorial, m)?)?;
    m.add_function(wrap_pyfunction!(lis_bruteforce, m)?)?;
    m.add_function(wrap_pyfunction!(rsk_shape, m)?)?;
    m.add_function(wrap_pyfunction!(density_f, m)?)?;
    m.add_function(wrap_pyfunction!(cdf_f, m)?)?;
    m.add_function(wrap_pyfunction!(quantile_f, m)?)?;
    m.add_function(wrap_pyfunction!(mc_tail_bound, m)?)?;
    m.add_function(wrap_pyfunction!(sample_brownian_functional, m)?)?;
    m.add_function(wrap_pyfunction!(sample_traceless_max_eig, m)?)?;
    m.add_function(wrap_pyfunction!(sample_perturbed_max_eig, m)?)?;
    m.add_function(wrap_pyfunction!(ks_to_limit_law, m)?)?;
    m.add_function(wrap_pyfunction!(li_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(shape_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(moment_check, m)?)?;
    m.add_function(wrap_pyfunction!(drift_experiment, m)?)?;
    Ok(())
}
