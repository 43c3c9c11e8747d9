//! Limiting laws of the centred and scaled `LI_n`.
//!
//! For a stationary binary chain, `(LI_n - c n) / sqrt(n)` converges to
//!
//! - `sqrt((1-a)/a) * (max_{t<=1} B(t) - B(1)/2)` when `a = b` in `(0, 1)`, with `c = 1/2`;
//! - `N(0, ab(2-a-b)/(a+b)^3)` when `a != b` (or `a = b = 0`), with `c = pi_max`;
//! - the point mass at 0 when `a = b = 1`.
//!
//! The Brownian functional has the law of half the norm of a standard
//! 3-dimensional Gaussian vector, i.e. half the largest eigenvalue of a
//! traceless 2x2 GUE matrix. Its density is [`density_f`].

use std::f64::consts::PI;

use libm::erfc;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::chain::ChainParams;
use crate::error::{Error, Result};
use crate::quad::{self, DEFAULT_TOL};
use crate::rng::stream_rng;

/// Limiting distribution of `(LI_n - centering) / sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitLaw {
    /// `scale * (max_{t<=1} B(t) - B(1)/2)`.
    BrownianFunctional {
        scale: f64,
    },
    CenteredNormal {
        variance: f64,
    },
    DegenerateAtZero,
}

impl LimitLaw {
    pub fn kind(&self) -> &'static str {
        match self {
            LimitLaw::BrownianFunctional { .. } => "brownian-functional",
            LimitLaw::CenteredNormal { .. } => "normal",
            LimitLaw::DegenerateAtZero => "degenerate",
        }
    }

    /// True when the law is a point mass at 0.
    pub fn is_degenerate(&self) -> bool {
        match *self {
            LimitLaw::DegenerateAtZero => true,
            LimitLaw::CenteredNormal { variance } => variance == 0.0,
            LimitLaw::BrownianFunctional { .. } => false,
        }
    }

    /// Cumulative distribution function, with quadrature tables built once.
    pub fn cdf_fn(&self) -> Box<dyn Fn(f64) -> f64 + Send + Sync> {
        match *self {
            LimitLaw::BrownianFunctional { scale } => {
                let table = FunctionalCdf::new(scale_to_a(scale), DEFAULT_TOL);
                Box::new(move |y| table.cdf(y))
            }
            LimitLaw::CenteredNormal { variance } if variance > 0.0 => {
                let sd = variance.sqrt();
                Box::new(move |y| normal_cdf(y / sd))
            }
            _ => Box::new(|y| if y < 0.0 { 0.0 } else { 1.0 }),
        }
    }

    /// Density; zero for the degenerate laws.
    pub fn density(&self, y: f64) -> f64 {
        match *self {
            LimitLaw::BrownianFunctional { scale } => density_unchecked(y, scale_to_a(scale)),
            LimitLaw::CenteredNormal { variance } if variance > 0.0 => {
                (-y * y / (2.0 * variance)).exp() / (2.0 * PI * variance).sqrt()
            }
            _ => 0.0,
        }
    }
}

/// `scale = sqrt((1-a)/a)` inverted.
fn scale_to_a(scale: f64) -> f64 {
    1.0 / (1.0 + scale * scale)
}

/// The limit law together with the centering used to reach it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptotics {
    pub law: LimitLaw,
    /// `LI_n` is centred at `centering_rate * n`: `1/2` when `a = b`, else `pi_max`.
    pub centering_rate: f64,
}

impl Asymptotics {
    pub fn centering(&self, n: usize) -> f64 {
        self.centering_rate * n as f64
    }

    pub fn scaling(&self, n: usize) -> f64 {
        (n as f64).sqrt()
    }

    /// `(li - centering) / sqrt(n)`.
    pub fn standardize(&self, li: usize, n: usize) -> f64 {
        (li as f64 - self.centering(n)) / self.scaling(n)
    }
}

pub fn limiting_law(params: &ChainParams) -> Asymptotics {
    let (a, b) = (params.a(), params.b());
    if params.is_alternating() {
        return Asymptotics {
            law: LimitLaw::DegenerateAtZero,
            centering_rate: 0.5,
        };
    }
    if a == b && a > 0.0 {
        return Asymptotics {
            law: LimitLaw::BrownianFunctional {
                scale: ((1.0 - a) / a).sqrt(),
            },
            centering_rate: 0.5,
        };
    }
    let d = params.derive();
    let variance = if params.is_absorbing() {
        0.0
    } else {
        a * b * (2.0 - a - b) / (a + b).powi(3)
    };
    Asymptotics {
        law: LimitLaw::CenteredNormal { variance },
        centering_rate: d.pi_max(),
    }
}

fn check_a(a: f64) -> Result<()> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::invalid(format!("density needs 0 < a < 1, got a = {a}")));
    }
    Ok(())
}

fn density_unchecked(y: f64, a: f64) -> f64 {
    if y < 0.0 {
        return 0.0;
    }
    let r = a / (1.0 - a);
    16.0 / (2.0 * PI).sqrt() * r.powf(1.5) * y * y * (-2.0 * r * y * y).exp()
}

/// Density of `sqrt((1-a)/a) * (max_{t<=1} B(t) - B(1)/2)`.
pub fn density_f(y: f64, a: f64) -> Result<f64> {
    check_a(a)?;
    Ok(density_unchecked(y, a))
}

/// CDF of the law with density [`density_f`], by adaptive quadrature.
pub fn cdf_f(y: f64, a: f64) -> Result<f64> {
    check_a(a)?;
    Ok(FunctionalCdf::new(a, DEFAULT_TOL).cdf(y))
}

/// Inverse of [`cdf_f`] by bisection.
pub fn quantile_f(q: f64, a: f64) -> Result<f64> {
    check_a(a)?;
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid(format!("quantile level {q} outside [0, 1]")));
    }
    Ok(FunctionalCdf::new(a, DEFAULT_TOL).quantile(q))
}

/// Precomputed panel integrals of [`density_f`] on a uniform grid, so that the
/// CDF is a prefix sum plus one partial panel.
#[derive(Debug, Clone)]
pub struct FunctionalCdf {
    a: f64,
    width: f64,
    tol: f64,
    /// `prefix[j] = int_0^{j * width} f`.
    prefix: Vec<f64>,
}

impl FunctionalCdf {
    /// Beyond `TAIL_UNITS` scale units the density is below `exp(-2 * TAIL_UNITS^2)`.
    const TAIL_UNITS: f64 = 6.5;
    const PANELS_PER_UNIT: f64 = 4.0;

    pub fn new(a: f64, tol: f64) -> Self {
        let scale = ((1.0 - a) / a).sqrt();
        let width = scale / Self::PANELS_PER_UNIT;
        let panels = (Self::TAIL_UNITS * Self::PANELS_PER_UNIT) as usize;
        let tol = tol / (2.0 * panels as f64);
        let mut prefix = Vec::with_capacity(panels + 1);
        let mut acc = 0.0;
        prefix.push(acc);
        for j in 0..panels {
            let lo = j as f64 * width;
            acc += quad::integrate(|y| density_unchecked(y, a), lo, lo + width, tol);
            prefix.push(acc);
        }
        Self { a, width, tol, prefix }
    }

    pub fn upper(&self) -> f64 {
        self.width * (self.prefix.len() - 1) as f64
    }

    pub fn cdf(&self, y: f64) -> f64 {
        if y.is_nan() {
            return f64::NAN;
        }
        if y <= 0.0 {
            return 0.0;
        }
        if y >= self.upper() {
            return self.prefix.last().copied().unwrap_or(1.0).min(1.0);
        }
        let j = (y / self.width).floor() as usize;
        let lo = j as f64 * self.width;
        let part = quad::integrate(|t| density_unchecked(t, self.a), lo, y, self.tol);
        (self.prefix[j] + part).clamp(0.0, 1.0)
    }

    pub fn quantile(&self, q: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, self.upper());
        if q <= 0.0 {
            return 0.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) < q {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi.max(1.0) {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

/// `max_{t<=1} W(t) - W(1)/2` for a Gaussian random walk with `steps`
/// increments of variance `1/steps`, maximum over grid points including `t = 0`.
pub fn brownian_functional<R: Rng + ?Sized>(steps: usize, rng: &mut R) -> f64 {
    let sd = (1.0 / steps as f64).sqrt();
    let mut w = 0.0f64;
    let mut top = 0.0f64;
    for _ in 0..steps {
        let g: f64 = rng.sample(StandardNormal);
        w += sd * g;
        top = top.max(w);
    }
    top - 0.5 * w
}

pub fn sample_brownian_functional(steps: usize, seed: u64) -> Result<f64> {
    if steps == 0 {
        return Err(Error::invalid("need at least one step"));
    }
    Ok(brownian_functional(steps, &mut stream_rng(seed, 0)))
}

/// Largest eigenvalue `sqrt(X^2 + Y^2 + Z^2)` of the traceless GUE matrix
/// `[[X, Y + iZ], [Y - iZ, -X]]` with unit-variance entries.
pub fn traceless_max_eig<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    let z: f64 = rng.sample(StandardNormal);
    (x * x + y * y + z * z).sqrt()
}

pub fn sample_traceless_max_eig(seed: u64) -> f64 {
    traceless_max_eig(&mut stream_rng(seed, 0))
}

/// Coefficients of `M = alpha G I + beta M_0`, chosen so the diagonal entries of
/// `M` have correlation `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuePerturbation {
    rho: f64,
    alpha: f64,
    beta_coef: f64,
}

impl GuePerturbation {
    pub fn new(rho: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&rho) {
            return Err(Error::invalid(format!("rho = {rho} outside [-1, 1]")));
        }
        Ok(Self {
            rho,
            alpha: ((1.0 + rho) / 2.0).sqrt(),
            beta_coef: ((1.0 - rho) / 2.0).sqrt(),
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta_coef(&self) -> f64 {
        self.beta_coef
    }

    /// Largest eigenvalue `alpha G + beta lambda_{1,0}`.
    pub fn max_eig<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let g: f64 = rng.sample(StandardNormal);
        let l0 = traceless_max_eig(rng);
        self.alpha * g + self.beta_coef * l0
    }
}

pub fn sample_perturbed_max_eig(pert: &GuePerturbation, seed: u64) -> f64 {
    pert.max_eig(&mut stream_rng(seed, 0))
}

/// Joint eigenvalue density of the 2x2 GUE.
pub fn gue2_density(x1: f64, x2: f64) -> f64 {
    let d = x1 - x2;
    d * d * (-(x1 * x1 + x2 * x2)).exp() / PI
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Upper bound on `P(max_{t<=1} (B(t) - c t) > z)`:
/// `2(1 - Phi(z / sqrt(eps))) + 2(1 - Phi(c eps + z))`.
///
/// `eps = 1` is accepted; the bound then reduces to the reflection bound at `t = 1`.
pub fn mc_tail_bound(c: f64, z: f64, eps: f64) -> Result<f64> {
    if !(c >= 0.0) || !(z > 0.0) || !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::invalid(format!(
            "tail bound needs c >= 0, z > 0, 0 < eps <= 1; got c = {c}, z = {z}, eps = {eps}"
        )));
    }
    let upper_tail = |x: f64| 0.5 * erfc(x / std::f64::consts::SQRT_2);
    Ok(2.0 * upper_tail(z / eps.sqrt()) + 2.0 * upper_tail(c * eps + z))
}

/// `max_{t<=1} (W(t) - c t)` over a grid of `steps` Gaussian increments.
pub fn drifted_max<R: Rng + ?Sized>(c: f64, steps: usize, rng: &mut R) -> f64 {
    let dt = 1.0 / steps as f64;
    let sd = dt.sqrt();
    let mut w = 0.0f64;
    let mut top = 0.0f64;
    for k in 1..=steps {
        let g: f64 = rng.sample(StandardNormal);
        w += sd * g;
        top = top.max(w - c * k as f64 * dt);
    }
    top
}
