//! The two-state Markov chain on the ordered alphabet `{1 < 2}`.
//!
//! `a = P(next = 2 | current = 1)` and `b = P(next = 1 | current = 2)`. The
//! closed forms below follow from the spectral decomposition of the transition
//! matrix, whose eigenvalues are `1` and `lambda2 = 1 - a - b`. All moment
//! formulas are for the difference walk `S_k = #1 - #2` over `X_1..X_k`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Probabilities below this (in magnitude) are rounding noise and clamp to 0 or 1.
const PROB_SLACK: f64 = 1e-15;

/// Transition probabilities of the binary chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    a: f64,
    b: f64,
}

impl ChainParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        for (name, p) in [("a", a), ("b", b)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!("{name} = {p} is not a probability")));
            }
        }
        Ok(Self { a, b })
    }

    /// `P(X_{n+1} = 2 | X_n = 1)`.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// `P(X_{n+1} = 1 | X_n = 2)`.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// `a + b = 0`: the chain never leaves its starting letter.
    pub fn is_absorbing(&self) -> bool {
        self.a + self.b == 0.0
    }

    /// `a = b = 1`: the chain alternates deterministically.
    pub fn is_alternating(&self) -> bool {
        self.a == 1.0 && self.b == 1.0
    }

    pub fn is_symmetric(&self) -> bool {
        self.a == self.b
    }

    /// Row-stochastic transition matrix, rows indexed by the current letter.
    pub fn transition_matrix(&self) -> [[f64; 2]; 2] {
        [[1.0 - self.a, self.a], [self.b, 1.0 - self.b]]
    }

    pub fn derive(&self) -> DerivedParams {
        let (a, b) = (self.a, self.b);
        let s = a + b;
        let lambda2 = 1.0 - s;
        if s == 0.0 {
            return DerivedParams {
                pi1: 1.0,
                pi2: 0.0,
                lambda2,
                mu: 1.0,
                sigma2: 0.0,
                sigma_tilde2: 0.0,
            };
        }
        let pi1 = b / s;
        let pi2 = a / s;
        let sigma2 = 4.0 * a * b / (s * s);
        let sigma_tilde2 = if self.is_alternating() || sigma2 == 0.0 {
            0.0
        } else {
            sigma2 * (1.0 + lambda2) / (1.0 - lambda2)
        };
        DerivedParams {
            pi1,
            pi2,
            lambda2,
            mu: pi1 - pi2,
            sigma2,
            sigma_tilde2,
        }
    }

    fn spectral(&self) -> Result<(DerivedParams, f64)> {
        if self.is_absorbing() {
            return Err(Error::NoSpectralDecomposition);
        }
        Ok((self.derive(), self.a + self.b))
    }

    /// Distribution of `X_n` given the law of `X_0`.
    pub fn evolve(&self, init: &InitialDistribution, n: u64) -> Result<[f64; 2]> {
        let (d, s) = self.spectral()?;
        let shift = pow(d.lambda2, n) * init.beta(self) / s;
        Ok([clamp_prob(d.pi1 + shift)?, clamp_prob(d.pi2 - shift)?])
    }

    /// `E S_k` from an arbitrary initial law.
    pub fn mean_s(&self, init: &InitialDistribution, k: u64) -> Result<f64> {
        check_index(k)?;
        let (d, s) = self.spectral()?;
        let l = d.lambda2;
        let transient = 2.0 * (init.beta(self) * l / s) * geometric(l, k);
        Ok(d.mu * k as f64 + transient)
    }

    /// `Cov(Z_k, Z_l)` for `k <= l`, stationary start.
    pub fn cov_z(&self, k: u64, l: u64) -> Result<f64> {
        check_pair(k, l, true)?;
        let (d, _) = self.spectral()?;
        Ok(d.sigma2 * pow(d.lambda2, l - k))
    }

    /// `Var S_k`, stationary start.
    pub fn var_s(&self, k: u64) -> Result<f64> {
        check_index(k)?;
        let (d, _) = self.spectral()?;
        let l = d.lambda2;
        let lin = d.sigma2 * (1.0 + l) / (1.0 - l) * k as f64;
        let corr = 2.0 * d.sigma2 * l * (pow(l, k) - 1.0) / ((1.0 - l) * (1.0 - l));
        Ok(lin + corr)
    }

    /// `Cov(S_k, S_l)` for `k <= l`, stationary start.
    pub fn cov_s(&self, k: u64, l: u64) -> Result<f64> {
        check_pair(k, l, true)?;
        let (d, _) = self.spectral()?;
        let lam = d.lambda2;
        let lin = (1.0 + lam) / (1.0 - lam) * k as f64;
        let corr = lam * (1.0 - pow(lam, k)) * (1.0 + pow(lam, l - k)) / ((1.0 - lam) * (1.0 - lam));
        Ok(d.sigma2 * (lin - corr))
    }

    /// Joint law of `(X_k, X_l)` for `k < l`, in the order
    /// `(1,1), (1,2), (2,1), (2,2)`.
    pub fn pair_prob(&self, init: &InitialDistribution, k: u64, l: u64) -> Result<[f64; 4]> {
        check_pair(k, l, false)?;
        let (d, s) = self.spectral()?;
        let lag = pow(d.lambda2, l - k);
        let marginal = self.evolve(init, k)?;
        // (l-k)-step transition probabilities
        let p11 = d.pi1 + lag * self.a / s;
        let p12 = d.pi2 - lag * self.a / s;
        let p21 = d.pi1 - lag * self.b / s;
        let p22 = d.pi2 + lag * self.b / s;
        Ok([
            clamp_prob(marginal[0] * p11)?,
            clamp_prob(marginal[0] * p12)?,
            clamp_prob(marginal[1] * p21)?,
            clamp_prob(marginal[1] * p22)?,
        ])
    }

    /// Samples `X_1..X_n`; `X_0` is drawn from `init` and discarded.
    pub fn sample_word(&self, init: &InitialDistribution, n: usize, seed: u64) -> Word {
        self.sample_word_with(init, n, &mut stream_rng(seed, 0))
    }

    pub fn sample_word_with<R: Rng + ?Sized>(&self, init: &InitialDistribution, n: usize, rng: &mut R) -> Word {
        let mut letters = Vec::with_capacity(n);
        let mut one = rng.random::<f64>() < init.p1;
        for _ in 0..n {
            let leave = if one { self.a } else { self.b };
            if rng.random::<f64>() < leave {
                one = !one;
            }
            letters.push(if one { 1 } else { 2 });
        }
        Word { letters, m: 2 }
    }
}

/// Constants derived from [`ChainParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub pi1: f64,
    pub pi2: f64,
    pub lambda2: f64,
    /// Stationary drift `E Z = pi1 - pi2`.
    pub mu: f64,
    /// Stationary `Var Z`.
    pub sigma2: f64,
    /// Asymptotic `Var S_k / k`.
    pub sigma_tilde2: f64,
}

impl DerivedParams {
    pub fn pi_max(&self) -> f64 {
        self.pi1.max(self.pi2)
    }

    pub fn pi_min(&self) -> f64 {
        self.pi1.min(self.pi2)
    }
}

/// Law of `X_0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialDistribution {
    pub p1: f64,
    pub p2: f64,
}

impl InitialDistribution {
    pub fn new(p1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p1) {
            return Err(Error::invalid(format!("p1 = {p1} is not a probability")));
        }
        Ok(Self { p1, p2: 1.0 - p1 })
    }

    pub fn stationary(params: &ChainParams) -> Self {
        let d = params.derive();
        Self { p1: d.pi1, p2: d.pi2 }
    }

    /// Point mass on letter 1 or 2.
    pub fn point(letter: u8) -> Result<Self> {
        match letter {
            1 => Ok(Self { p1: 1.0, p2: 0.0 }),
            2 => Ok(Self { p1: 0.0, p2: 1.0 }),
            _ => Err(Error::invalid(format!("letter {letter} is not in {{1, 2}}"))),
        }
    }

    /// `a p1 - b p2`; zero exactly for the stationary start.
    pub fn beta(&self, params: &ChainParams) -> f64 {
        params.a * self.p1 - params.b * self.p2
    }
}

/// Finite word over the ordered alphabet `{1, ..., m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    letters: Vec<u8>,
    m: u8,
}

impl Word {
    pub fn new(letters: Vec<u8>, m: u8) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid(format!("alphabet size {m} < 2")));
        }
        if let Some(bad) = letters.iter().find(|&&x| x == 0 || x > m) {
            return Err(Error::invalid(format!("letter {bad} outside 1..={m}")));
        }
        Ok(Self { letters, m })
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn alphabet_size(&self) -> u8 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().copied().collect(),
            m: self.m,
        }
    }
}

fn pow(x: f64, n: u64) -> f64 {
    match i32::try_from(n) {
        Ok(n) => x.powi(n),
        Err(_) => x.powf(n as f64),
    }
}

/// `(1 - l^k) / (1 - l)`, i.e. `1 + l + ... + l^(k-1)`.
fn geometric(l: f64, k: u64) -> f64 {
    (1.0 - pow(l, k)) / (1.0 - l)
}

fn check_index(k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("time index must be >= 1"));
    }
    Ok(())
}

fn check_pair(k: u64, l: u64, allow_equal: bool) -> Result<()> {
    check_index(k)?;
    if l < k || (!allow_equal && l == k) {
        return Err(Error::invalid(format!("need k < l (or k <= l), got k = {k}, l = {l}")));
    }
    Ok(())
}

pub(crate) fn clamp_prob(p: f64) -> Result<f64> {
    if !(-PROB_SLACK..=1.0 + PROB_SLACK).contains(&p) {
        return Err(Error::Internal(format!("probability {p:e} out of [0, 1]")));
    }
    Ok(p.clamp(0.0, 1.0))
}
