use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand_distr::{Binomial, Distribution};

use super::stats::{completeness_soundness, ols_slope, Targets, TrialStats};
use crate::protocols::{run_edp_on_distribution, EdpConfig, ProtocolId, DEFAULT_N_U};
use crate::random::{Ensemble, RngStream};
use crate::runner::TrialRunner;
use crate::{Error, Result};

/// Default cap on the total budget explored by [`find_min_budget`].
pub const DEFAULT_BUDGET_CAP: u64 = 1_000_000;
/// Minimum number of trials per probe.
pub const MIN_TRIALS_PER_PROBE: u64 = 2000;
/// Stream-derivation domain of budget probes.
pub const PROBE_DOMAIN: u64 = 0x5052_4f42;

/// Something whose completeness and soundness can be measured at an integer
/// budget parameter.
pub trait ProbeEvaluator {
    /// Smallest admissible parameter.
    fn min_param(&self) -> u64;
    /// Total budget spent at `param`; non-decreasing in `param`.
    fn total_budget(&self, param: u64) -> u64;
    fn evaluate(&self, param: u64) -> Result<TrialStats>;
}

/// One evaluated probe.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Probe {
    pub param: u64,
    pub budget: u64,
    pub stats: TrialStats,
    pub passed: bool,
}

/// Outcome of a budget search at one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingPoint {
    pub d: usize,
    /// Smallest passing total budget, if one was found under the cap.
    pub budget: Option<u64>,
    /// Parameter (shots, `N_M` or pairs) at that budget.
    pub param: Option<u64>,
    /// Statistics at the reported budget, or at the last probe if unattained.
    pub stats: Option<TrialStats>,
    /// All probes in increasing parameter order.
    pub probes: Vec<Probe>,
}

impl ScalingPoint {
    #[inline]
    pub fn attained(&self) -> bool {
        self.budget.is_some()
    }
}

/// Search settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    pub targets: Targets,
    pub budget_cap: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            targets: Targets::default(),
            budget_cap: DEFAULT_BUDGET_CAP,
        }
    }
}

/// Parameters at or below this are swept exhaustively after bisection, since
/// the lattice of small-sample estimates makes completeness non-monotone there.
pub const SMALL_PARAM_SWEEP: u64 = 64;

/// Smallest budget whose completeness and soundness meet the targets at the
/// lower 95% Wilson edge: doubling from the minimum parameter, then bisection
/// between the last failing and first passing parameter, then an ascending
/// sweep below the result when it is at most [`SMALL_PARAM_SWEEP`].
pub fn find_min_budget<E: ProbeEvaluator>(
    d: usize,
    evaluator: &E,
    cfg: &SearchConfig,
) -> Result<ScalingPoint> {
    let min = evaluator.min_param();
    if evaluator.total_budget(min) > cfg.budget_cap {
        return Err(Error::InvalidConfig("budget cap below the smallest budget"));
    }
    let max_param = largest_param_within(evaluator, cfg.budget_cap);
    let mut cache: BTreeMap<u64, Probe> = BTreeMap::new();
    let mut probe = |p: u64| -> Result<bool> {
        if let Some(pr) = cache.get(&p) {
            return Ok(pr.passed);
        }
        let stats = evaluator.evaluate(p)?;
        let passed = stats.meets(&cfg.targets);
        cache.insert(
            p,
            Probe {
                param: p,
                budget: evaluator.total_budget(p),
                stats,
                passed,
            },
        );
        Ok(passed)
    };

    let mut lo: Option<u64> = None;
    let mut hi: Option<u64> = None;
    let mut p = min;
    loop {
        if probe(p)? {
            hi = Some(p);
            break;
        }
        lo = Some(p);
        if p >= max_param {
            break;
        }
        p = p.saturating_mul(2).min(max_param);
    }
    if let Some(mut h) = hi {
        let mut l = lo.unwrap_or(min);
        if lo.is_some() {
            while h - l > 1 {
                let mid = l + (h - l) / 2;
                if probe(mid)? {
                    h = mid;
                } else {
                    l = mid;
                }
            }
        }
        if h <= SMALL_PARAM_SWEEP {
            for q in min..h {
                if probe(q)? {
                    h = q;
                    break;
                }
            }
        }
        hi = Some(h);
    }
    let probes: Vec<Probe> = cache.into_values().collect();
    let chosen = hi.or(lo);
    let stats = chosen.and_then(|c| probes.iter().find(|pr| pr.param == c).map(|pr| pr.stats));
    Ok(ScalingPoint {
        d,
        budget: hi.map(|h| evaluator.total_budget(h)),
        param: hi,
        stats,
        probes,
    })
}

fn largest_param_within<E: ProbeEvaluator>(e: &E, cap: u64) -> u64 {
    let mut lo = e.min_param();
    let mut hi = lo.max(1);
    while e.total_budget(hi) <= cap {
        lo = hi;
        hi = hi.saturating_mul(2);
        if hi == u64::MAX {
            return lo;
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if e.total_budget(mid) <= cap {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Probe that runs a detection protocol on an ensemble.
///
/// The parameter is `T_shots` (WITNESS), `N_M` at fixed `N_U` (RAND_MEAS) or
/// `T_pairs` (SWAP_TEST).
pub struct ProtocolProbe<'a, R: TrialRunner> {
    pub ensemble: Ensemble,
    pub protocol: ProtocolId,
    pub n_u: u64,
    pub trials: u64,
    pub seed: u64,
    pub runner: &'a R,
}

impl<'a, R: TrialRunner> ProtocolProbe<'a, R> {
    pub fn new(ensemble: Ensemble, protocol: ProtocolId, trials: u64, seed: u64, runner: &'a R) -> Self {
        Self {
            ensemble,
            protocol,
            n_u: DEFAULT_N_U,
            trials: trials.max(MIN_TRIALS_PER_PROBE),
            seed,
            runner,
        }
    }

    pub fn config(&self, param: u64) -> Result<EdpConfig> {
        match self.protocol {
            ProtocolId::Witness => EdpConfig::witness(param, self.ensemble.d()),
            ProtocolId::RandMeas => EdpConfig::rand_meas(self.n_u, param),
            ProtocolId::SwapTest => EdpConfig::swap_test(param),
        }
    }
}

impl<R: TrialRunner> ProbeEvaluator for ProtocolProbe<'_, R> {
    fn min_param(&self) -> u64 {
        match self.protocol {
            ProtocolId::RandMeas => 2,
            _ => 1,
        }
    }

    fn total_budget(&self, param: u64) -> u64 {
        match self.protocol {
            ProtocolId::RandMeas => self.n_u.saturating_mul(param),
            _ => param,
        }
    }

    fn evaluate(&self, param: u64) -> Result<TrialStats> {
        let cfg = self.config(param)?;
        let domain = [
            PROBE_DOMAIN,
            self.protocol.tag(),
            self.ensemble.d() as u64,
            param,
        ];
        let outcomes = run_edp_on_distribution(
            &self.ensemble,
            &cfg,
            self.trials,
            self.seed,
            &domain,
            self.runner,
        )?;
        completeness_soundness(&outcomes)
    }
}

/// Synthetic protocol with a planted budget law, for testing the pipeline.
///
/// Completeness is `ceiling * (1 - exp(-param / (scale * d^exponent)))` and
/// soundness is fixed; counts are drawn binomially.
#[derive(Clone, Copy, Debug)]
pub struct PlantedLaw {
    pub d: usize,
    pub scale: f64,
    pub exponent: f64,
    pub ceiling: f64,
    pub soundness: f64,
    pub trials: u64,
    pub seed: u64,
}

impl ProbeEvaluator for PlantedLaw {
    fn min_param(&self) -> u64 {
        1
    }

    fn total_budget(&self, param: u64) -> u64 {
        param
    }

    fn evaluate(&self, param: u64) -> Result<TrialStats> {
        let mut rng = RngStream::derive(self.seed, &[self.d as u64, param]);
        let width = self.scale * libm::pow(self.d as f64, self.exponent);
        let c = self.ceiling * (1.0 - libm::exp(-(param as f64) / width));
        let decided = Binomial::new(self.trials, c.clamp(0.0, 1.0))
            .map_err(|_| Error::Domain("planted completeness"))?
            .sample(&mut rng);
        let correct = Binomial::new(decided, self.soundness.clamp(0.0, 1.0))
            .map_err(|_| Error::Domain("planted soundness"))?
            .sample(&mut rng);
        TrialStats::from_counts(self.trials, decided, correct)
    }
}

/// Least-squares slope of `ln(budget)` against `ln(d)` over attained points,
/// with its standard error.
pub fn fit_scaling_exponent(points: &[ScalingPoint]) -> Result<(f64, f64)> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter_map(|p| p.budget.map(|b| (libm::log(p.d as f64), libm::log(b as f64))))
        .unzip();
    if xs.len() < 3 {
        return Err(Error::InsufficientData("need at least three attained points"));
    }
    let span = xs.iter().cloned().fold(f64::MIN, f64::max) - xs.iter().cloned().fold(f64::MAX, f64::min);
    if span < libm::log(4.0) - 1e-12 {
        return Err(Error::Domain("points must span at least two octaves in d"));
    }
    ols_slope(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Passes exactly when `param >= threshold`.
    struct Step {
        threshold: u64,
        per_unit: u64,
        min: u64,
    }

    impl ProbeEvaluator for Step {
        fn min_param(&self) -> u64 {
            self.min
        }
        fn total_budget(&self, param: u64) -> u64 {
            param * self.per_unit
        }
        fn evaluate(&self, param: u64) -> Result<TrialStats> {
            if param >= self.threshold {
                TrialStats::from_counts(10_000, 5000, 5000)
            } else {
                TrialStats::from_counts(10_000, 100, 50)
            }
        }
    }

    /// Passes only at `param = 3` and at `param >= 54`.
    struct Sawtooth;

    impl ProbeEvaluator for Sawtooth {
        fn min_param(&self) -> u64 {
            1
        }
        fn total_budget(&self, param: u64) -> u64 {
            param
        }
        fn evaluate(&self, param: u64) -> Result<TrialStats> {
            if param == 3 || param >= 54 {
                TrialStats::from_counts(10_000, 5000, 5000)
            } else {
                TrialStats::from_counts(10_000, 100, 50)
            }
        }
    }

    #[test]
    fn sweep_catches_small_isolated_pass() {
        let pt = find_min_budget(16, &Sawtooth, &SearchConfig::default()).unwrap();
        assert_eq!(pt.param, Some(3));
        assert!(pt.probes.iter().any(|p| p.param == 54 && p.passed));
    }

    #[test]
    fn finds_exact_step() {
        for threshold in [1, 2, 3, 7, 8, 9, 100, 1023, 1025] {
            let e = Step {
                threshold,
                per_unit: 1,
                min: 1,
            };
            let pt = find_min_budget(16, &e, &SearchConfig::default()).unwrap();
            assert_eq!(pt.param, Some(threshold));
            assert_eq!(pt.budget, Some(threshold));
            assert!(pt.stats.unwrap().meets(&Targets::default()));
        }
    }

    #[test]
    fn respects_per_unit_budget_and_cap() {
        let e = Step {
            threshold: 13,
            per_unit: 20,
            min: 2,
        };
        let pt = find_min_budget(16, &e, &SearchConfig::default()).unwrap();
        assert_eq!((pt.param, pt.budget), (Some(13), Some(260)));

        let cfg = SearchConfig {
            budget_cap: 200,
            ..SearchConfig::default()
        };
        let pt = find_min_budget(16, &e, &cfg).unwrap();
        assert!(!pt.attained());
        assert!(pt.probes.iter().all(|p| p.budget <= 200));
        assert_eq!(pt.probes.last().unwrap().param, 10);
    }

    #[test]
    fn cap_below_minimum_is_an_error() {
        let e = Step {
            threshold: 1,
            per_unit: 20,
            min: 2,
        };
        let cfg = SearchConfig {
            budget_cap: 10,
            ..SearchConfig::default()
        };
        assert!(find_min_budget(4, &e, &cfg).is_err());
    }

    fn point(d: usize, budget: Option<u64>) -> ScalingPoint {
        ScalingPoint {
            d,
            budget,
            param: budget,
            stats: None,
            probes: vec![],
        }
    }

    #[test]
    fn fit_exact_power_laws() {
        let ds = [16usize, 64, 256, 1024];
        let linear: Vec<_> = ds.iter().map(|&d| point(d, Some(3 * d as u64))).collect();
        let (s, _) = fit_scaling_exponent(&linear).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        let quarter: Vec<_> = ds
            .iter()
            .map(|&d| point(d, Some(libm::round(1000.0 * libm::pow(d as f64, 0.25)) as u64)))
            .collect();
        let (s, _) = fit_scaling_exponent(&quarter).unwrap();
        assert!((s - 0.25).abs() < 1e-3);
        let flat: Vec<_> = ds.iter().map(|&d| point(d, Some(7))).collect();
        let (s, se) = fit_scaling_exponent(&flat).unwrap();
        assert!(s.abs() < 1e-12 && se < 1e-12);
    }

    #[test]
    fn fit_preconditions() {
        let two = [point(16, Some(1)), point(1024, Some(2))];
        assert!(fit_scaling_exponent(&two).is_err());
        let narrow = [point(16, Some(1)), point(20, Some(2)), point(32, Some(3))];
        assert!(fit_scaling_exponent(&narrow).is_err());
        let with_gap = [
            point(16, Some(1)),
            point(64, None),
            point(256, Some(2)),
            point(1024, Some(3)),
        ];
        assert!(fit_scaling_exponent(&with_gap).is_ok());
    }
}
