//! Finite-shot entanglement detection protocols.
//!
//! Each protocol turns a state into a statistic `c_hat` and decides
//! "entangled" exactly when `c_hat < 0`. Measurements are ideal and noiseless;
//! the only randomness is the Born sampling.

use alloc::vec;
use alloc::vec::Vec;

use rand_distr::{Binomial, Distribution};

use crate::criteria::{swap_witness_value, swap_witness_value_pure};
use crate::random::{sample_haar_unitary, Branch, Ensemble, LabeledState, QuantumState, RngStream};
use crate::runner::TrialRunner;
use crate::tensor::ComplexMatrix;
use crate::{Error, Result};

/// Default purity threshold of the purity-based protocols.
pub const DEFAULT_PURITY_THRESHOLD: f64 = 0.5;
/// Default number of random unitaries of the randomized-measurement protocol.
pub const DEFAULT_N_U: u64 = 20;

/// Protocol family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProtocolId {
    Witness,
    RandMeas,
    SwapTest,
}

impl ProtocolId {
    pub const ALL: [ProtocolId; 3] = [ProtocolId::RandMeas, ProtocolId::Witness, ProtocolId::SwapTest];

    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolId::Witness => "WITNESS",
            ProtocolId::RandMeas => "RAND_MEAS",
            ProtocolId::SwapTest => "SWAP_TEST",
        }
    }

    /// Case-insensitive parse; `-` and `_` are interchangeable.
    pub fn parse(s: &str) -> Option<Self> {
        let matches = |name: &str| {
            s.len() == name.len()
                && s.bytes().zip(name.bytes()).all(|(a, b)| {
                    let a = if a == b'-' { b'_' } else { a.to_ascii_uppercase() };
                    a == b
                })
        };
        Self::ALL.into_iter().find(|p| matches(p.as_str()))
    }

    /// Stable numeric tag used in RNG stream derivation.
    pub fn tag(self) -> u64 {
        match self {
            ProtocolId::Witness => 1,
            ProtocolId::RandMeas => 2,
            ProtocolId::SwapTest => 3,
        }
    }
}

/// Measurement budget of one protocol run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Budget {
    /// `T_shots` single-copy measurements of the witness.
    Witness { shots: u64 },
    /// `N_U` random unitaries with `N_M` shots each.
    RandMeas { n_u: u64, n_m: u64 },
    /// `T_pairs` two-copy SWAP tests.
    SwapTest { pairs: u64 },
}

impl Budget {
    pub fn protocol(&self) -> ProtocolId {
        match self {
            Budget::Witness { .. } => ProtocolId::Witness,
            Budget::RandMeas { .. } => ProtocolId::RandMeas,
            Budget::SwapTest { .. } => ProtocolId::SwapTest,
        }
    }

    /// Number of state copies consumed.
    pub fn copies(&self) -> u64 {
        match *self {
            Budget::Witness { shots } => shots,
            Budget::RandMeas { n_u, n_m } => n_u * n_m,
            Budget::SwapTest { pairs } => 2 * pairs,
        }
    }

    /// Total budget in protocol units: shots, `N_U * N_M`, or pairs.
    pub fn total(&self) -> u64 {
        match *self {
            Budget::Witness { shots } => shots,
            Budget::RandMeas { n_u, n_m } => n_u * n_m,
            Budget::SwapTest { pairs } => pairs,
        }
    }
}

/// Protocol configuration: budget, threshold and the mixed-input switch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdpConfig {
    budget: Budget,
    threshold: f64,
    mixed_extension: bool,
}

impl EdpConfig {
    /// Witness protocol with the default threshold `-1 / (2 sqrt d)`.
    pub fn witness(shots: u64, d: usize) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidConfig("dimension must be positive"));
        }
        Self::witness_with_threshold(shots, -0.5 / libm::sqrt(d as f64))
    }

    pub fn witness_with_threshold(shots: u64, tau: f64) -> Result<Self> {
        if shots < 1 {
            return Err(Error::InvalidConfig("T_shots must be at least 1"));
        }
        if tau.is_nan() || tau > 0.0 {
            return Err(Error::InvalidConfig("witness threshold must be <= 0"));
        }
        Ok(Self {
            budget: Budget::Witness { shots },
            threshold: tau,
            mixed_extension: false,
        })
    }

    /// Randomized-measurement protocol with purity threshold 1/2.
    pub fn rand_meas(n_u: u64, n_m: u64) -> Result<Self> {
        if n_u < 1 {
            return Err(Error::InvalidConfig("N_U must be at least 1"));
        }
        if n_m < 2 {
            return Err(Error::InvalidConfig("N_M must be at least 2"));
        }
        Ok(Self {
            budget: Budget::RandMeas { n_u, n_m },
            threshold: DEFAULT_PURITY_THRESHOLD,
            mixed_extension: false,
        })
    }

    /// SWAP-test protocol with purity threshold 1/2.
    pub fn swap_test(pairs: u64) -> Result<Self> {
        if pairs < 1 {
            return Err(Error::InvalidConfig("T_pairs must be at least 1"));
        }
        Ok(Self {
            budget: Budget::SwapTest { pairs },
            threshold: DEFAULT_PURITY_THRESHOLD,
            mixed_extension: false,
        })
    }

    pub fn with_threshold(self, threshold: f64) -> Result<Self> {
        if !threshold.is_finite() {
            return Err(Error::InvalidConfig("threshold must be finite"));
        }
        if self.protocol() == ProtocolId::Witness && threshold > 0.0 {
            return Err(Error::InvalidConfig("witness threshold must be <= 0"));
        }
        Ok(Self { threshold, ..self })
    }

    /// Accept mixed inputs. Purity-based protocols then compare against the
    /// exact global purity `Tr(rho^2)` instead of the fixed threshold.
    pub fn with_mixed_extension(self, enabled: bool) -> Self {
        Self {
            mixed_extension: enabled,
            ..self
        }
    }

    #[inline]
    pub fn protocol(&self) -> ProtocolId {
        self.budget.protocol()
    }

    #[inline]
    pub fn budget(&self) -> Budget {
        self.budget
    }

    #[inline]
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    #[inline]
    pub fn mixed_extension(&self) -> bool {
        self.mixed_extension
    }
}

/// Result of one protocol run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdpOutcome {
    pub c_hat: f64,
    pub entangled: bool,
    pub shots_used: u64,
}

impl EdpOutcome {
    fn new(c_hat: f64, shots_used: u64) -> Self {
        Self {
            c_hat,
            entangled: c_hat < 0.0,
            shots_used,
        }
    }
}

/// Raw measurement data of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShotRecord {
    /// `+1` / `-1` witness outcomes.
    Witness(Vec<i8>),
    /// Basis indices per random unitary.
    RandMeas { d_a: usize, outcomes: Vec<Vec<usize>> },
    /// SWAP-test accept bits.
    SwapTest(Vec<bool>),
}

fn check_input(state: &QuantumState, cfg: &EdpConfig) -> Result<()> {
    if !state.is_pure() && !cfg.mixed_extension {
        return Err(Error::MixedInputDisabled);
    }
    Ok(())
}

fn expect(cfg: &EdpConfig, protocol: ProtocolId) -> Result<()> {
    if cfg.protocol() != protocol {
        return Err(Error::InvalidConfig("configuration is for a different protocol"));
    }
    Ok(())
}

fn witness_value(state: &QuantumState) -> Result<f64> {
    Ok(match state {
        QuantumState::Pure(psi) => swap_witness_value_pure(psi)?.value,
        QuantumState::Mixed(rho) => swap_witness_value(rho)?.value,
    })
}

fn binomial(n: u64, p: f64, rng: &mut RngStream) -> u64 {
    let p = p.clamp(0.0, 1.0);
    Binomial::new(n, p).expect("p clamped to [0, 1]").sample(rng)
}

/// Threshold the purity estimate is compared against.
fn purity_threshold(state: &QuantumState, cfg: &EdpConfig) -> f64 {
    match state {
        QuantumState::Pure(_) => cfg.threshold,
        QuantumState::Mixed(rho) => rho.purity(),
    }
}

/// Witness protocol: `T_shots` two-outcome measurements of `S`.
///
/// `Pr[+1] = (1 + Tr(S rho)) / 2`; the statistic is the sample mean minus the
/// threshold.
pub fn simulate_witness_edp(
    state: &LabeledState,
    cfg: &EdpConfig,
    rng: &mut RngStream,
) -> Result<EdpOutcome> {
    witness_run(&state.state, cfg, rng)
}

fn witness_run(state: &QuantumState, cfg: &EdpConfig, rng: &mut RngStream) -> Result<EdpOutcome> {
    expect(cfg, ProtocolId::Witness)?;
    check_input(state, cfg)?;
    let Budget::Witness { shots } = cfg.budget else {
        unreachable!()
    };
    let w = witness_value(state)?;
    let plus = binomial(shots, 0.5 * (1.0 + w), rng);
    let mean = (2.0 * plus as f64 - shots as f64) / shots as f64;
    Ok(EdpOutcome::new(mean - cfg.threshold, shots))
}

/// Individual witness outcomes for `state`.
pub fn record_witness_shots(
    state: &QuantumState,
    shots: u64,
    rng: &mut RngStream,
) -> Result<ShotRecord> {
    let p = (0.5 * (1.0 + witness_value(state)?)).clamp(0.0, 1.0);
    Ok(ShotRecord::Witness(
        (0..shots).map(|_| if rng.uniform() < p { 1 } else { -1 }).collect(),
    ))
}

/// Randomized-measurement purity estimator.
///
/// `P = (1/N_U) sum_U (1/(N_M (N_M - 1))) sum_{i != j} X(b_i, b_j)` with
/// `X(b, b) = d_A` and `X(b, b') = -1`.
pub fn purity_estimator_from_shots(outcomes: &[Vec<usize>], d_a: usize) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::InsufficientData("no unitaries"));
    }
    let mut counts = vec![0u64; d_a];
    let mut total = 0.0;
    for shots in outcomes {
        if shots.len() < 2 {
            return Err(Error::InsufficientData("fewer than two shots under a unitary"));
        }
        counts.iter_mut().for_each(|c| *c = 0);
        for &b in shots {
            if b >= d_a {
                return Err(Error::Domain("outcome index outside the measured basis"));
            }
            counts[b] += 1;
        }
        total += estimate_from_counts(&counts, shots.len() as u64, d_a);
    }
    Ok(total / outcomes.len() as f64)
}

/// Per-unitary estimate from outcome counts.
fn estimate_from_counts(counts: &[u64], n: u64, d_a: usize) -> f64 {
    // sum_{i != j} X = (d_A + 1) sum_b n_b (n_b - 1) - N (N - 1)
    let coincidences: u64 = counts.iter().map(|&c| c * c.saturating_sub(1)).sum();
    let pairs = (n * (n - 1)) as f64;
    ((d_a as f64 + 1.0) * coincidences as f64 - pairs) / pairs
}

/// Randomized-measurement protocol: `N_U` Haar unitaries on subsystem A, each
/// followed by `N_M` computational-basis shots.
pub fn simulate_rand_meas_edp(
    state: &LabeledState,
    cfg: &EdpConfig,
    rng: &mut RngStream,
) -> Result<EdpOutcome> {
    rand_meas_run(&state.state, cfg, rng)
}

fn rand_meas_run(state: &QuantumState, cfg: &EdpConfig, rng: &mut RngStream) -> Result<EdpOutcome> {
    expect(cfg, ProtocolId::RandMeas)?;
    check_input(state, cfg)?;
    let Budget::RandMeas { n_u, n_m } = cfg.budget else {
        unreachable!()
    };
    let rho_a = state.reduced_first();
    let p_hat = rand_meas_estimate(&rho_a, n_u, n_m, rng)?;
    Ok(EdpOutcome::new(p_hat - purity_threshold(state, cfg), n_u * n_m))
}

/// Purity estimate of a fixed reduced state `rho_a` from simulated
/// randomized measurements.
pub fn rand_meas_estimate(
    rho_a: &ComplexMatrix,
    n_u: u64,
    n_m: u64,
    rng: &mut RngStream,
) -> Result<f64> {
    if n_u < 1 || n_m < 2 {
        return Err(Error::InsufficientData("need N_U >= 1 and N_M >= 2"));
    }
    let d_a = rho_a.rows();
    let mut cdf = vec![0.0; d_a];
    let mut counts = vec![0u64; d_a];
    let mut total = 0.0;
    for _ in 0..n_u {
        let u = sample_haar_unitary(d_a, rng);
        born_cdf(&u, rho_a, &mut cdf);
        counts.iter_mut().for_each(|c| *c = 0);
        for _ in 0..n_m {
            counts[sample_cdf(&cdf, rng.uniform())] += 1;
        }
        total += estimate_from_counts(&counts, n_m, d_a);
    }
    Ok(total / n_u as f64)
}

/// Measurement record of the randomized-measurement protocol.
pub fn record_rand_meas_shots(
    rho_a: &ComplexMatrix,
    n_u: u64,
    n_m: u64,
    rng: &mut RngStream,
) -> ShotRecord {
    let d_a = rho_a.rows();
    let mut cdf = vec![0.0; d_a];
    let outcomes = (0..n_u)
        .map(|_| {
            let u = sample_haar_unitary(d_a, rng);
            born_cdf(&u, rho_a, &mut cdf);
            (0..n_m).map(|_| sample_cdf(&cdf, rng.uniform())).collect()
        })
        .collect();
    ShotRecord::RandMeas { d_a, outcomes }
}

/// Cumulative Born distribution of `U rho U^dagger` in the computational basis.
fn born_cdf(u: &ComplexMatrix, rho: &ComplexMatrix, cdf: &mut [f64]) {
    let n = rho.rows();
    let ur = u.matmul(rho).expect("square operators of equal size");
    let mut acc = 0.0;
    for (b, slot) in cdf.iter_mut().enumerate().take(n) {
        // <b| U rho U^dagger |b> = sum_j (U rho)_{bj} conj(U_{bj})
        let p: f64 = ur
            .row(b)
            .iter()
            .zip(u.row(b))
            .map(|(x, y)| (x * y.conj()).re)
            .sum();
        acc += p.max(0.0);
        *slot = acc;
    }
    // Normalize away roundoff so the last bucket always closes at 1.
    for c in cdf.iter_mut() {
        *c /= acc;
    }
}

fn sample_cdf(cdf: &[f64], r: f64) -> usize {
    cdf.partition_point(|&c| c <= r).min(cdf.len() - 1)
}

/// SWAP-test protocol: `T_pairs` accept bits with
/// `Pr[accept] = (1 + Tr(rho_A^2)) / 2`; the purity estimate is
/// `2 * (accept fraction) - 1`.
pub fn simulate_swap_test_edp(
    state: &LabeledState,
    cfg: &EdpConfig,
    rng: &mut RngStream,
) -> Result<EdpOutcome> {
    swap_test_run(&state.state, cfg, rng)
}

fn swap_test_run(state: &QuantumState, cfg: &EdpConfig, rng: &mut RngStream) -> Result<EdpOutcome> {
    expect(cfg, ProtocolId::SwapTest)?;
    check_input(state, cfg)?;
    let Budget::SwapTest { pairs } = cfg.budget else {
        unreachable!()
    };
    let estimate = swap_test_estimate(state.reduced_purity(), pairs, rng);
    Ok(EdpOutcome::new(estimate - purity_threshold(state, cfg), 2 * pairs))
}

/// Purity estimate from `pairs` simulated SWAP tests on a state of purity `p`.
pub fn swap_test_estimate(purity: f64, pairs: u64, rng: &mut RngStream) -> f64 {
    let accepts = binomial(pairs, 0.5 * (1.0 + purity), rng);
    2.0 * accepts as f64 / pairs as f64 - 1.0
}

/// Accept bits of `pairs` SWAP tests on a state of purity `p`.
pub fn record_swap_test_shots(purity: f64, pairs: u64, rng: &mut RngStream) -> ShotRecord {
    let p = 0.5 * (1.0 + purity);
    ShotRecord::SwapTest((0..pairs).map(|_| rng.uniform() < p).collect())
}

/// Runs the protocol selected by `cfg`.
pub fn simulate_edp(state: &LabeledState, cfg: &EdpConfig, rng: &mut RngStream) -> Result<EdpOutcome> {
    match cfg.protocol() {
        ProtocolId::Witness => witness_run(&state.state, cfg, rng),
        ProtocolId::RandMeas => rand_meas_run(&state.state, cfg, rng),
        ProtocolId::SwapTest => swap_test_run(&state.state, cfg, rng),
    }
}

/// One protocol run together with the ground truth of its input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialOutcome {
    pub outcome: EdpOutcome,
    pub branch: Branch,
    pub entangled: bool,
}

/// Runs `n_trials` independent trials, each on a fresh state from `ensemble`.
///
/// Trial `i` draws everything from the stream derived from
/// `(seed, domain..., i)`, so results do not depend on execution order.
pub fn run_edp_on_distribution<R: TrialRunner>(
    ensemble: &Ensemble,
    cfg: &EdpConfig,
    n_trials: u64,
    seed: u64,
    domain: &[u64],
    runner: &R,
) -> Result<Vec<TrialOutcome>> {
    if n_trials < 1 {
        return Err(Error::InvalidConfig("need at least one trial"));
    }
    runner
        .run(n_trials, |i| {
            let mut tags = Vec::with_capacity(domain.len() + 1);
            tags.extend_from_slice(domain);
            tags.push(i);
            let mut rng = RngStream::derive(seed, &tags);
            let state = ensemble.sample(&mut rng);
            simulate_edp(&state, cfg, &mut rng).map(|outcome| TrialOutcome {
                outcome,
                branch: state.branch,
                entangled: state.entangled,
            })
        })
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{EnsembleParams, PiStar};
    use crate::runner::Sequential;
    use crate::tensor::{DensityMatrix, StateVector, SubsystemShape};
    use crate::C64;

    fn labeled(amps: &[f64], da: usize) -> LabeledState {
        let psi = StateVector::normalized(
            amps.iter().map(|&x| C64::new(x, 0.0)).collect(),
            SubsystemShape::bipartite(da, da),
        )
        .unwrap();
        LabeledState {
            state: QuantumState::Pure(psi),
            branch: Branch::GlobalHaar,
            params: EnsembleParams {
                d: da * da,
                k: 1,
                parts: 2,
            },
            entangled: true,
        }
    }

    #[test]
    fn config_validation() {
        assert!(EdpConfig::witness(0, 4).is_err());
        assert!(EdpConfig::witness_with_threshold(5, 0.1).is_err());
        assert!(EdpConfig::rand_meas(0, 4).is_err());
        assert!(EdpConfig::rand_meas(1, 1).is_err());
        assert!(EdpConfig::swap_test(0).is_err());
        let w = EdpConfig::witness(10, 16).unwrap();
        assert!((w.threshold() + 0.125).abs() < 1e-15);
        assert!(w.with_threshold(0.2).is_err());
        assert_eq!(EdpConfig::rand_meas(20, 8).unwrap().budget().total(), 160);
    }

    #[test]
    fn protocol_names_round_trip() {
        for p in ProtocolId::ALL {
            assert_eq!(ProtocolId::parse(p.as_str()), Some(p));
        }
        assert_eq!(ProtocolId::parse("rand-meas"), Some(ProtocolId::RandMeas));
        assert_eq!(ProtocolId::parse("swap"), None);
    }

    #[test]
    fn singlet_always_detected_by_witness() {
        let s = labeled(&[0.0, 1.0, -1.0, 0.0], 2);
        let cfg = EdpConfig::witness_with_threshold(7, -0.9).unwrap();
        let mut rng = RngStream::new(1, 1);
        for _ in 0..20 {
            let o = simulate_witness_edp(&s, &cfg, &mut rng).unwrap();
            assert!((o.c_hat - (-1.0 + 0.9)).abs() < 1e-12);
            assert!(o.entangled);
        }
    }

    #[test]
    fn symmetric_product_never_detected() {
        let s = labeled(&[1.0, 0.0, 0.0, 0.0], 2);
        let cfg = EdpConfig::witness_with_threshold(3, 0.0).unwrap();
        let mut rng = RngStream::new(2, 1);
        for _ in 0..20 {
            assert!(!simulate_witness_edp(&s, &cfg, &mut rng).unwrap().entangled);
        }
    }

    #[test]
    fn estimator_direct_values() {
        assert_eq!(purity_estimator_from_shots(&[vec![0, 0]], 2).unwrap(), 2.0);
        assert_eq!(purity_estimator_from_shots(&[vec![0, 1]], 2).unwrap(), -1.0);
        assert!(purity_estimator_from_shots(&[vec![0]], 2).is_err());
        assert!(purity_estimator_from_shots(&[vec![0, 2]], 2).is_err());
        assert!(purity_estimator_from_shots(&[], 2).is_err());
    }

    #[test]
    fn estimator_counting_form_matches_pair_sum() {
        let shots = vec![vec![0, 2, 2, 1, 2, 0, 3], vec![1, 1, 1], vec![3, 0]];
        let d_a = 4;
        let brute: f64 = shots
            .iter()
            .map(|s| {
                let n = s.len();
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            acc += if s[i] == s[j] { d_a as f64 } else { -1.0 };
                        }
                    }
                }
                acc / (n * (n - 1)) as f64
            })
            .sum::<f64>()
            / shots.len() as f64;
        let fast = purity_estimator_from_shots(&shots, d_a).unwrap();
        assert!((brute - fast).abs() < 1e-14);
    }

    #[test]
    fn degenerate_rand_meas_budget() {
        let s = labeled(&[1.0, 0.0, 0.0, 1.0], 2);
        let cfg = EdpConfig::rand_meas(1, 2).unwrap();
        let mut rng = RngStream::new(3, 0);
        for _ in 0..50 {
            let o = simulate_rand_meas_edp(&s, &cfg, &mut rng).unwrap();
            let a = (o.c_hat - (2.0 - 0.5)).abs() < 1e-12;
            let b = (o.c_hat - (-1.0 - 0.5)).abs() < 1e-12;
            assert!(a || b, "unexpected c_hat {}", o.c_hat);
            assert_eq!(o.entangled, o.c_hat < 0.0);
        }
    }

    #[test]
    fn record_and_fast_path_agree_in_shape() {
        let rho = ComplexMatrix::from_real_diagonal(&[0.5, 0.25, 0.25]);
        let mut rng = RngStream::new(4, 0);
        let ShotRecord::RandMeas { d_a, outcomes } = record_rand_meas_shots(&rho, 3, 5, &mut rng)
        else {
            panic!("wrong record kind")
        };
        assert_eq!(d_a, 3);
        assert_eq!(outcomes.len(), 3);
        assert!(outcomes.iter().all(|o| o.len() == 5 && o.iter().all(|&b| b < 3)));
    }

    #[test]
    fn product_swap_test_estimate_is_one() {
        let s = labeled(&[1.0, 0.0, 0.0, 0.0], 2);
        let cfg = EdpConfig::swap_test(9).unwrap();
        let mut rng = RngStream::new(5, 0);
        let o = simulate_swap_test_edp(&s, &cfg, &mut rng).unwrap();
        assert!((o.c_hat - 0.5).abs() < 1e-12);
        assert_eq!(o.shots_used, 18);
    }

    #[test]
    fn mixed_input_gated() {
        let rho = DensityMatrix::maximally_mixed(SubsystemShape::bipartite(2, 2));
        let s = LabeledState {
            state: QuantumState::Mixed(rho),
            branch: Branch::Product,
            params: EnsembleParams { d: 4, k: 4, parts: 2 },
            entangled: false,
        };
        let mut rng = RngStream::new(6, 0);
        let cfg = EdpConfig::swap_test(10).unwrap();
        assert!(matches!(
            simulate_swap_test_edp(&s, &cfg, &mut rng),
            Err(Error::MixedInputDisabled)
        ));
        let cfg = cfg.with_mixed_extension(true);
        let o = simulate_swap_test_edp(&s, &cfg, &mut rng).unwrap();
        assert_eq!(o.entangled, o.c_hat < 0.0);
    }

    #[test]
    fn wrong_protocol_rejected() {
        let s = labeled(&[1.0, 0.0, 0.0, 0.0], 2);
        let mut rng = RngStream::new(7, 0);
        let cfg = EdpConfig::swap_test(3).unwrap();
        assert!(simulate_witness_edp(&s, &cfg, &mut rng).is_err());
    }

    #[test]
    fn distribution_runs_are_reproducible() {
        let ens = Ensemble::Bipartite(PiStar::new(16, 1).unwrap());
        let cfg = EdpConfig::rand_meas(4, 4).unwrap();
        let a = run_edp_on_distribution(&ens, &cfg, 30, 99, &[1], &Sequential).unwrap();
        let b = run_edp_on_distribution(&ens, &cfg, 30, 99, &[1], &Sequential).unwrap();
        assert_eq!(a, b);
        let one = run_edp_on_distribution(&ens, &cfg, 1, 99, &[1], &Sequential).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0], a[0]);
        assert!(run_edp_on_distribution(&ens, &cfg, 0, 99, &[1], &Sequential).is_err());
    }
}
