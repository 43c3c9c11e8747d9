//! Repeated-trial experiments and Kolmogorov–Smirnov machinery.
//!
//! Trial `t` of an experiment seeded with `seed` draws from
//! [`stream_rng(seed, t)`](crate::rng::stream_rng) and nothing else, so every
//! result is a pure function of the configuration regardless of how rayon
//! schedules the trials.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::chain::{ChainParams, InitialDistribution, Word};
use crate::error::{Error, Result};
use crate::laws::{limiting_law, mc_tail_bound};
use crate::lis::{lis_combinatorial, lis_patience, rsk_shape};
use crate::rng::stream_rng;

/// One in this many trials re-derives `LI_n` by patience sorting as a check.
const SPOT_CHECK_EVERY: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    LiLaw,
    ShapeJoint,
    MomentCheck,
    DriftVanish,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 4] = [
        ExperimentKind::LiLaw,
        ExperimentKind::ShapeJoint,
        ExperimentKind::MomentCheck,
        ExperimentKind::DriftVanish,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::LiLaw => "li-law",
            ExperimentKind::ShapeJoint => "shape-joint",
            ExperimentKind::MomentCheck => "moment-check",
            ExperimentKind::DriftVanish => "drift-vanish",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown experiment kind {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub params: ChainParams,
    /// Word length.
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub kind: ExperimentKind,
}

impl ExperimentConfig {
    pub fn new(params: ChainParams, n: usize, trials: usize, seed: u64, kind: ExperimentKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("word length must be >= 1"));
        }
        if trials == 0 {
            return Err(Error::invalid("need at least one trial"));
        }
        Ok(Self {
            params,
            n,
            trials,
            seed,
            kind,
        })
    }

    fn stationary_word(&self, trial: usize, n: usize) -> Word {
        let init = InitialDistribution::stationary(&self.params);
        self.params
            .sample_word_with(&init, n, &mut stream_rng(self.seed, trial as u64))
    }
}

/// Sorted sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    sorted: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::invalid("NaN in sample"));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Fraction of samples `<= x`.
    pub fn ecdf(&self, x: f64) -> f64 {
        if self.sorted.is_empty() {
            return f64::NAN;
        }
        self.sorted.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    /// Lower empirical quantile: smallest sample with ECDF `>= q`.
    pub fn quantile(&self, q: f64) -> Option<f64> {
        if self.sorted.is_empty() || !(0.0..=1.0).contains(&q) {
            return None;
        }
        let idx = ((q * self.len() as f64).ceil() as usize).clamp(1, self.len()) - 1;
        Some(self.sorted[idx])
    }

    pub fn mean(&self) -> f64 {
        self.sorted.iter().sum::<f64>() / self.len() as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        sample_moments(&self.sorted).1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub n: usize,
}

impl KsResult {
    pub fn passes(&self, threshold: f64) -> bool {
        self.statistic <= threshold
    }
}

/// One-sample Kolmogorov–Smirnov distance against a continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(emp: &EmpiricalDistribution, cdf: F) -> Result<KsResult> {
    if emp.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = emp.len() as f64;
    let statistic = emp
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let i = i as f64;
            ((i + 1.0) / n - f).abs().max((i / n - f).abs())
        })
        .fold(0.0, f64::max);
    Ok(KsResult {
        statistic,
        n: emp.len(),
    })
}

/// Two-sample Kolmogorov–Smirnov distance `sup |F_a - F_b|`, ties handled exactly.
pub fn ks_two_sample(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let (xs, ys) = (a.samples(), b.samples());
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

fn sample_moments(xs: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let (mut m2, mut m4) = (0.0, 0.0);
    for &x in xs {
        let d = (x - mean) * (x - mean);
        m2 += d;
        m4 += d * d;
    }
    let var = if xs.len() > 1 { m2 / (n - 1.0) } else { 0.0 };
    (mean, var, m4 / n)
}

/// `LI_n` of one trial and its standardized value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiTrial {
    pub li: usize,
    pub scaled: f64,
}

/// Per-trial `LI_n` in trial order.
pub fn li_trials(cfg: &ExperimentConfig) -> Result<Vec<LiTrial>> {
    let asym = limiting_law(&cfg.params);
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let word = cfg.stationary_word(t, cfg.n);
            let li = lis_combinatorial(&word);
            if t % SPOT_CHECK_EVERY == 0 {
                let check = lis_patience(&word);
                if check != li {
                    return Err(Error::Internal(format!(
                        "trial {t}: walk identity gives {li}, patience gives {check}"
                    )));
                }
            }
            Ok(LiTrial {
                li,
                scaled: asym.standardize(li, cfg.n),
            })
        })
        .collect()
}

/// Empirical law of `(LI_n - centering) / sqrt(n)` from the stationary start.
pub fn run_li_experiment(cfg: &ExperimentConfig) -> Result<EmpiricalDistribution> {
    EmpiricalDistribution::new(li_trials(cfg)?.into_iter().map(|t| t.scaled).collect())
}

/// RSK row lengths of one trial and their standardized values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeTrial {
    pub r1: usize,
    pub r2: usize,
    /// `(R1 - n pi_max) / sqrt(n)` (or `n/2` centering when `a = b`).
    pub scaled1: f64,
    /// `(R2 - n pi_min) / sqrt(n)`.
    pub scaled2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSamples {
    pub trials: Vec<ShapeTrial>,
}

impl ShapeSamples {
    pub fn first_marginal(&self) -> Result<EmpiricalDistribution> {
        EmpiricalDistribution::new(self.trials.iter().map(|t| t.scaled1).collect())
    }

    pub fn second_marginal(&self) -> Result<EmpiricalDistribution> {
        EmpiricalDistribution::new(self.trials.iter().map(|t| t.scaled2).collect())
    }

    /// Pearson correlation of the two standardized rows; NaN if either is constant.
    pub fn correlation(&self) -> f64 {
        let n = self.trials.len() as f64;
        let m1 = self.trials.iter().map(|t| t.scaled1).sum::<f64>() / n;
        let m2 = self.trials.iter().map(|t| t.scaled2).sum::<f64>() / n;
        let (mut c, mut v1, mut v2) = (0.0, 0.0, 0.0);
        for t in &self.trials {
            let (d1, d2) = (t.scaled1 - m1, t.scaled2 - m2);
            c += d1 * d2;
            v1 += d1 * d1;
            v2 += d2 * d2;
        }
        c / (v1 * v2).sqrt()
    }
}

/// Joint law of the two standardized RSK rows of binary words.
pub fn run_shape_experiment(cfg: &ExperimentConfig) -> Result<ShapeSamples> {
    let asym = limiting_law(&cfg.params);
    let n = cfg.n;
    let root = (n as f64).sqrt();
    let top = asym.centering(n);
    // top >= n/2, so n - top is exact and the two deviations are exact negatives
    let bottom = n as f64 - top;
    let trials = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let word = cfg.stationary_word(t, n);
            let shape = rsk_shape(&word);
            let (r1, r2) = (shape.row(0), shape.row(1));
            if r1 + r2 != n || shape.rows.len() > 2 {
                return Err(Error::Internal(format!(
                    "trial {t}: shape {:?} of a binary word",
                    shape.rows
                )));
            }
            Ok(ShapeTrial {
                r1,
                r2,
                scaled1: (r1 as f64 - top) / root,
                scaled2: (r2 as f64 - bottom) / root,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ShapeSamples { trials })
}

/// Monte Carlo moments of `S_k` against the stationary closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRow {
    pub k: usize,
    pub mc_mean: f64,
    pub exact_mean: f64,
    pub mean_se: f64,
    pub mc_var: f64,
    pub exact_var: f64,
    pub var_se: f64,
}

impl MomentRow {
    /// Both moments within `sigmas` standard errors.
    pub fn within(&self, sigmas: f64) -> bool {
        let slack = 1e-9;
        (self.mc_mean - self.exact_mean).abs() <= sigmas * self.mean_se + slack
            && (self.mc_var - self.exact_var).abs() <= sigmas * self.var_se + slack
    }
}

pub fn run_moment_check(cfg: &ExperimentConfig, k_list: &[usize]) -> Result<Vec<MomentRow>> {
    let horizon = k_list
        .iter()
        .copied()
        .max()
        .ok_or_else(|| Error::invalid("empty k list"))?;
    if k_list.contains(&0) || horizon > cfg.n {
        return Err(Error::invalid(format!("k values must lie in 1..={}", cfg.n)));
    }
    if cfg.trials < 2 {
        return Err(Error::invalid("moment check needs at least two trials"));
    }
    let init = InitialDistribution::stationary(&cfg.params);
    let exact: Vec<(f64, f64)> = k_list
        .iter()
        .map(|&k| Ok((cfg.params.mean_s(&init, k as u64)?, cfg.params.var_s(k as u64)?)))
        .collect::<Result<_>>()?;

    let per_trial: Vec<Vec<f64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let word = cfg.stationary_word(t, horizon);
            let mut walk = Vec::with_capacity(horizon + 1);
            let mut s = 0i64;
            walk.push(0);
            for &x in word.letters() {
                s += if x == 1 { 1 } else { -1 };
                walk.push(s);
            }
            k_list.iter().map(|&k| walk[k] as f64).collect()
        })
        .collect();

    let trials = cfg.trials as f64;
    Ok(k_list
        .iter()
        .enumerate()
        .map(|(col, &k)| {
            let xs: Vec<f64> = per_trial.iter().map(|row| row[col]).collect();
            let (mean, var, m4) = sample_moments(&xs);
            let (exact_mean, exact_var) = exact[col];
            MomentRow {
                k,
                mc_mean: mean,
                exact_mean,
                mean_se: (var / trials).sqrt(),
                mc_var: var,
                exact_var,
                // Var(s^2) = (mu_4 - (T-3)/(T-1) sigma^4) / T
                var_se: ((m4 - (trials - 3.0) / (trials - 1.0) * var * var).max(0.0) / trials).sqrt(),
            }
        })
        .collect())
}

/// Which vanishing functional applies, by the sign of `pi_1 - pi_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriftOrientation {
    /// `pi_max = pi_2`: `max_t (B_n(t) - c_n t)`.
    Forward,
    /// `pi_max = pi_1`: `max_t (B_n(t) - B_n(1) - c_n (1 - t))`.
    Backward,
}

impl DriftOrientation {
    pub fn for_params(params: &ChainParams) -> Self {
        let d = params.derive();
        if d.pi2 >= d.pi1 {
            DriftOrientation::Forward
        } else {
            DriftOrientation::Backward
        }
    }
}

/// `B_n(k/n) = (S_k - k mu) / (sigma_tilde sqrt(n))` for `k = 0..=n`; the
/// polygonal interpolation attains its extrema at these points.
pub fn standardized_walk(word: &Word, params: &ChainParams) -> Result<Vec<f64>> {
    let d = params.derive();
    if d.sigma_tilde2 == 0.0 {
        return Err(Error::invalid("degenerate chain: sigma_tilde = 0"));
    }
    let norm = (d.sigma_tilde2 * word.len() as f64).sqrt();
    let mut out = Vec::with_capacity(word.len() + 1);
    out.push(0.0);
    let mut s = 0i64;
    for (i, &x) in word.letters().iter().enumerate() {
        s += if x == 1 { 1 } else { -1 };
        out.push((s as f64 - (i + 1) as f64 * d.mu) / norm);
    }
    Ok(out)
}

/// `max_k (path[k] - c k/n)` over the grid `k = 0..=n`.
pub fn max_drifted(path: &[f64], c: f64) -> f64 {
    let n = (path.len() - 1) as f64;
    path.iter()
        .enumerate()
        .map(|(k, &b)| b - c * k as f64 / n)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// The drifted maximum that must vanish in probability for this chain.
pub fn drift_functional(path: &[f64], c: f64, orientation: DriftOrientation) -> f64 {
    match orientation {
        DriftOrientation::Forward => max_drifted(path, c),
        DriftOrientation::Backward => {
            let n = (path.len() - 1) as f64;
            let end = path[path.len() - 1];
            path.iter()
                .enumerate()
                .map(|(k, &b)| b - end - c * (1.0 - k as f64 / n))
                .fold(f64::NEG_INFINITY, f64::max)
        }
    }
}

/// `c_n = sqrt(n) |pi_1 - pi_2| / sigma_tilde`.
pub fn drift_rate(params: &ChainParams, n: usize) -> Result<f64> {
    let d = params.derive();
    if d.sigma_tilde2 == 0.0 {
        return Err(Error::invalid("degenerate chain: sigma_tilde = 0"));
    }
    Ok((n as f64).sqrt() * (d.pi1 - d.pi2).abs() / d.sigma_tilde2.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftRow {
    pub n: usize,
    pub c_n: f64,
    pub z: f64,
    pub exceedance: f64,
    pub se: f64,
    /// Tail bound at `eps = 1/sqrt(c_n)`; `None` when `c_n < 1`.
    pub bound: Option<f64>,
}

impl DriftRow {
    pub fn respects_bound(&self, sigmas: f64) -> bool {
        self.bound.is_none_or(|b| self.exceedance <= b + sigmas * self.se)
    }
}

/// Empirical `P(drift functional > z)` for each word length in `n_list`.
pub fn run_drift_experiment(
    params: &ChainParams,
    n_list: &[usize],
    z: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<DriftRow>> {
    if params.is_symmetric() {
        return Err(Error::invalid("drift experiment needs a != b"));
    }
    if !(z > 0.0) {
        return Err(Error::invalid(format!("threshold z = {z} must be positive")));
    }
    if trials == 0 || n_list.is_empty() || n_list.contains(&0) {
        return Err(Error::invalid("need trials >= 1 and word lengths >= 1"));
    }
    let orientation = DriftOrientation::for_params(params);
    let init = InitialDistribution::stationary(params);
    n_list
        .iter()
        .enumerate()
        .map(|(slot, &n)| {
            let c_n = drift_rate(params, n)?;
            let hits = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let stream = (slot as u64) << 40 | t as u64;
                    let word = params.sample_word_with(&init, n, &mut stream_rng(seed, stream));
                    let path = standardized_walk(&word, params)?;
                    Ok(drift_functional(&path, c_n, orientation) > z)
                })
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .filter(|&hit| hit)
                .count();
            let p = hits as f64 / trials as f64;
            let bound = if c_n >= 1.0 {
                Some(mc_tail_bound(c_n, z, 1.0 / c_n.sqrt())?)
            } else {
                None
            };
            Ok(DriftRow {
                n,
                c_n,
                z,
                exceedance: p,
                se: (p * (1.0 - p) / trials as f64).sqrt(),
                bound,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::normal_cdf;

    fn cfg(a: f64, b: f64, n: usize, trials: usize, seed: u64, kind: ExperimentKind) -> ExperimentConfig {
        ExperimentConfig::new(ChainParams::new(a, b).unwrap(), n, trials, seed, kind).unwrap()
    }

    #[test]
    fn kind_round_trip() {
        for k in ExperimentKind::ALL {
            assert_eq!(k.as_str().parse::<ExperimentKind>().unwrap(), k);
        }
        assert!("nope".parse::<ExperimentKind>().is_err());
    }

    #[test]
    fn config_validation() {
        let p = ChainParams::new(0.5, 0.5).unwrap();
        assert!(ExperimentConfig::new(p, 0, 1, 0, ExperimentKind::LiLaw).is_err());
        assert!(ExperimentConfig::new(p, 1, 0, 0, ExperimentKind::LiLaw).is_err());
    }

    #[test]
    fn ks_examples() {
        let one = EmpiricalDistribution::new(vec![0.0]).unwrap();
        let r = ks_statistic(&one, normal_cdf).unwrap();
        assert!((r.statistic - 0.5).abs() < 1e-15);

        // uniform quantiles (i - 1/2)/N
        let n = 1000;
        let xs: Vec<f64> = (1..=n).map(|i| (i as f64 - 0.5) / n as f64).collect();
        let emp = EmpiricalDistribution::new(xs).unwrap();
        let r = ks_statistic(&emp, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((r.statistic - 0.5 / n as f64).abs() < 1e-12);
        assert_eq!(r.n, n);

        let empty = EmpiricalDistribution::new(vec![]).unwrap();
        assert_eq!(ks_statistic(&empty, normal_cdf), Err(Error::EmptySample));
    }

    #[test]
    fn ks_two_sample_handles_ties() {
        let a = EmpiricalDistribution::new(vec![0.0, 0.0, 1.0, 2.0]).unwrap();
        let b = EmpiricalDistribution::new(vec![0.0, 1.0, 1.0, 2.0]).unwrap();
        assert!((ks_two_sample(&a, &b).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(ks_two_sample(&a, &a).unwrap(), 0.0);
        let c = EmpiricalDistribution::new(vec![5.0, 6.0]).unwrap();
        assert_eq!(ks_two_sample(&a, &c).unwrap(), 1.0);
    }

    #[test]
    fn empirical_distribution_basics() {
        let e = EmpiricalDistribution::new(vec![3.0, 1.0, 2.0, 2.0]).unwrap();
        assert_eq!(e.samples(), &[1.0, 2.0, 2.0, 3.0]);
        assert_eq!(e.ecdf(2.0), 0.75);
        assert_eq!(e.ecdf(0.5), 0.0);
        assert_eq!(e.quantile(0.5), Some(2.0));
        assert_eq!(e.quantile(1.0), Some(3.0));
        assert_eq!(e.mean(), 2.0);
        assert!((e.variance() - 2.0 / 3.0).abs() < 1e-15);
        assert!(EmpiricalDistribution::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn li_law_matches_enumeration_for_iid_words() {
        // a = b = 1/2: X_1..X_4 iid uniform; enumerate all 16 words
        let mut want = [0usize; 5];
        for bits in 0u32..16 {
            let letters: Vec<u8> = (0..4).map(|i| 1 + ((bits >> i) & 1) as u8).collect();
            want[lis_combinatorial(&Word::new(letters, 2).unwrap())] += 1;
        }
        let trials = 160_000;
        let got = li_trials(&cfg(0.5, 0.5, 4, trials, 9, ExperimentKind::LiLaw)).unwrap();
        let mut counts = [0usize; 5];
        for t in &got {
            counts[t.li] += 1;
        }
        for li in 0..5 {
            let p = want[li] as f64 / 16.0;
            let phat = counts[li] as f64 / trials as f64;
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            assert!((phat - p).abs() <= 5.0 * se + 1e-12, "LI = {li}: {phat} vs {p}");
        }
        let t = got[0];
        assert_eq!(t.scaled, (t.li as f64 - 2.0) / 2.0);
    }

    #[test]
    fn absorbing_chain_gives_full_length() {
        let got = li_trials(&cfg(0.0, 0.0, 50, 20, 1, ExperimentKind::LiLaw)).unwrap();
        assert!(got.iter().all(|t| t.li == 50 && t.scaled == 0.0));
    }

    #[test]
    fn li_experiment_is_deterministic() {
        let c = cfg(0.3, 0.6, 300, 10, 77, ExperimentKind::LiLaw);
        let first = run_li_experiment(&c).unwrap();
        let second = run_li_experiment(&c).unwrap();
        assert_eq!(first, second);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let third = pool.install(|| run_li_experiment(&c)).unwrap();
        assert_eq!(first, third);
    }

    #[test]
    fn shape_rows_cancel_exactly() {
        for &(a, b) in &[(0.3, 0.6), (0.5, 0.5), (0.8, 0.1), (0.7, 0.7)] {
            let s = run_shape_experiment(&cfg(a, b, 333, 200, 5, ExperimentKind::ShapeJoint)).unwrap();
            for t in &s.trials {
                assert_eq!(t.scaled1 + t.scaled2, 0.0);
                assert_eq!(t.r1 + t.r2, 333);
            }
            assert!((s.correlation() + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn moment_check_small() {
        let rows = run_moment_check(&cfg(0.5, 0.5, 20, 4000, 3, ExperimentKind::MomentCheck), &[1, 5, 20]).unwrap();
        for r in &rows {
            assert_eq!(r.exact_var, r.k as f64);
            assert_eq!(r.exact_mean, 0.0);
            assert!(r.within(5.0), "{r:?}");
        }
        let c = cfg(0.5, 0.5, 20, 10, 3, ExperimentKind::MomentCheck);
        assert!(run_moment_check(&c, &[21]).is_err());
        assert!(run_moment_check(&c, &[0]).is_err());
        assert!(run_moment_check(&c, &[]).is_err());
    }

    #[test]
    fn drift_rejects_symmetric_and_large_z_never_exceeds() {
        let sym = ChainParams::new(0.5, 0.5).unwrap();
        assert!(run_drift_experiment(&sym, &[100], 0.25, 10, 0).is_err());
        let p = ChainParams::new(0.3, 0.6).unwrap();
        let rows = run_drift_experiment(&p, &[100, 1000], 10.0, 500, 0).unwrap();
        assert!(rows.iter().all(|r| r.exceedance == 0.0));
    }

    #[test]
    fn drift_functional_forms() {
        // path 0, 1, -1, 2 with c = 3
        let path = [0.0, 1.0, -1.0, 2.0];
        assert_eq!(drift_functional(&path, 3.0, DriftOrientation::Forward), 0.0);
        assert!((drift_functional(&path, 0.0, DriftOrientation::Forward) - 2.0).abs() < 1e-15);
        // backward: b_k - b_n - c (1 - k/n): -5, -3, -5, 0
        assert_eq!(drift_functional(&path, 3.0, DriftOrientation::Backward), 0.0);
        let o = DriftOrientation::for_params(&ChainParams::new(0.3, 0.6).unwrap());
        assert_eq!(o, DriftOrientation::Backward);
        let o = DriftOrientation::for_params(&ChainParams::new(0.6, 0.3).unwrap());
        assert_eq!(o, DriftOrientation::Forward);
    }

    #[test]
    fn standardized_walk_endpoint() {
        let p = ChainParams::new(0.3, 0.6).unwrap();
        let w = Word::new(vec![1, 1, 2, 1], 2).unwrap();
        let path = standardized_walk(&w, &p).unwrap();
        let d = p.derive();
        let want = (2.0 - 4.0 * d.mu) / (d.sigma_tilde2 * 4.0).sqrt();
        assert!((path[4] - want).abs() < 1e-15);
        assert!(standardized_walk(&w, &ChainParams::new(1.0, 1.0).unwrap()).is_err());
    }
}
