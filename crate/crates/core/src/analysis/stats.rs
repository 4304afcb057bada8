use alloc::vec::Vec;

use crate::protocols::TrialOutcome;
use crate::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `n` at normal quantile `z`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InsufficientData("Wilson interval of zero trials"));
    }
    if successes > n {
        return Err(Error::Domain("more successes than trials"));
    }
    let n_f = n as f64;
    let p = successes as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let centre = (p + z2 / (2.0 * n_f)) / denom;
    let half = z * libm::sqrt(p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)) / denom;
    Ok(((centre - half).max(0.0), (centre + half).min(1.0)))
}

/// Completeness and soundness of a batch of protocol runs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialStats {
    pub n_trials: u64,
    pub n_decided: u64,
    pub n_correct: u64,
    /// `n_decided / n_trials`
    pub completeness: f64,
    /// `n_correct / n_decided`; absent when nothing was decided.
    pub soundness: Option<f64>,
    pub completeness_ci: (f64, f64),
    pub soundness_ci: Option<(f64, f64)>,
}

impl TrialStats {
    pub fn from_counts(n_trials: u64, n_decided: u64, n_correct: u64) -> Result<Self> {
        if n_trials == 0 {
            return Err(Error::InsufficientData("no trials"));
        }
        if n_decided > n_trials || n_correct > n_decided {
            return Err(Error::Domain("inconsistent trial counts"));
        }
        let (soundness, soundness_ci) = if n_decided == 0 {
            (None, None)
        } else {
            (
                Some(n_correct as f64 / n_decided as f64),
                Some(wilson_interval(n_correct, n_decided, Z95)?),
            )
        };
        Ok(Self {
            n_trials,
            n_decided,
            n_correct,
            completeness: n_decided as f64 / n_trials as f64,
            soundness,
            completeness_ci: wilson_interval(n_decided, n_trials, Z95)?,
            soundness_ci,
        })
    }

    /// Both lower 95% edges meet the targets.
    pub fn meets(&self, targets: &Targets) -> bool {
        self.completeness_ci.0 >= targets.completeness
            && self.soundness_ci.is_some_and(|(lo, _)| lo >= targets.soundness)
    }
}

/// Completeness `Pr[c_hat < 0]` and soundness `Pr[entangled | c_hat < 0]`.
pub fn completeness_soundness(outcomes: &[TrialOutcome]) -> Result<TrialStats> {
    let n = outcomes.len() as u64;
    let decided = outcomes.iter().filter(|o| o.outcome.entangled).count() as u64;
    let correct = outcomes
        .iter()
        .filter(|o| o.outcome.entangled && o.entangled)
        .count() as u64;
    TrialStats::from_counts(n, decided, correct)
}

/// Completeness and soundness targets, both read as lower bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Targets {
    pub completeness: f64,
    pub soundness: f64,
}

impl Targets {
    pub fn new(completeness: f64, soundness: f64) -> Result<Self> {
        let ok = |x: f64| x > 0.0 && x < 1.0;
        if !ok(completeness) || !ok(soundness) {
            return Err(Error::Domain("targets must lie in (0, 1)"));
        }
        Ok(Self {
            completeness,
            soundness,
        })
    }
}

impl Default for Targets {
    fn default() -> Self {
        Self {
            completeness: 0.25,
            soundness: 5.0 / 6.0,
        }
    }
}

/// Sample mean and variance with standard errors of both.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleMoments {
    pub n: u64,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub mean_se: f64,
    /// Standard error of the sample variance, from the fourth central moment.
    pub variance_se: f64,
}

impl SampleMoments {
    pub fn from_slice(xs: &[f64]) -> Result<Self> {
        if xs.len() < 2 {
            return Err(Error::InsufficientData("need at least two samples"));
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let (mut m2, mut m4) = (0.0, 0.0);
        for &x in xs {
            let d2 = (x - mean) * (x - mean);
            m2 += d2;
            m4 += d2 * d2;
        }
        let variance = m2 / (n - 1.0);
        let mu2 = m2 / n;
        let mu4 = m4 / n;
        Ok(Self {
            n: xs.len() as u64,
            mean,
            variance,
            mean_se: libm::sqrt(variance / n),
            variance_se: libm::sqrt(((mu4 - mu2 * mu2) / n).max(0.0)),
        })
    }
}

/// An observed statistic checked against its expected value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentCheck {
    pub observed: f64,
    pub expected: f64,
    pub se: f64,
}

impl MomentCheck {
    /// `|observed - expected| / se`
    pub fn z_score(&self) -> f64 {
        if self.se > 0.0 {
            (self.observed - self.expected).abs() / self.se
        } else if self.observed == self.expected {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn within(&self, sigmas: f64) -> bool {
        self.z_score() <= sigmas
    }
}

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData("empty sample"));
    }
    let mut a: Vec<f64> = a.to_vec();
    let mut b: Vec<f64> = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = na * nb / (na + nb);
    let sq = libm::sqrt(ne);
    let lambda = (sq + 0.12 + 0.11 / sq) * d;
    Ok((d, kolmogorov_q(lambda)))
}

/// `Q_KS(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2)`.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=200 {
        let jf = j as f64;
        let term = sign * libm::exp(-2.0 * jf * jf * lambda * lambda);
        sum += term;
        if term.abs() < 1e-16 * sum.abs() {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Ordinary least squares `y = a + b x`; returns `(b, se(b))`.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::InsufficientData("need at least three points"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return Err(Error::Domain("degenerate abscissae"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    Ok((slope, libm::sqrt(rss / (n - 2.0) / sxx)))
}
