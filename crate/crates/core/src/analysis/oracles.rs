use alloc::vec;
use alloc::vec::Vec;

use super::stats::{wilson_interval, MomentCheck, SampleMoments, Z95};
use crate::criteria::{detection_power_closed_form, swap_witness_value, swap_witness_value_pure};
use crate::protocols::rand_meas_estimate;
use crate::random::{exact_root, sample_haar_pure, sample_haar_pure_shaped, sample_haar_unitary, sample_pi, PiStar, QuantumState, RngStream};
use crate::tensor::{
    copy_permutation, kron, kron_vec, partial_trace_operator, unravel, ComplexMatrix,
    FactorPermutation, Permutation, SubsystemShape, DEFAULT_MAX_OPERATOR_DIM,
};
use crate::{Error, Result, C64};

/// Largest dimension at which the lemma checks also build the operator
/// densely as a second route.
pub const MATERIALIZE_MAX_DIM: usize = 1 << 10;

fn checked_power(d: usize, t: usize, max: usize) -> Result<usize> {
    let mut n: usize = 1;
    for _ in 0..t {
        n = n.checked_mul(d).filter(|&n| n <= max).ok_or(Error::DimensionCap {
            dim: d.saturating_pow(t as u32),
            max,
        })?;
    }
    Ok(n)
}

fn square_root(d: usize) -> Result<usize> {
    exact_root(d, 2).ok_or(Error::NotPerfectPower { value: d, power: 2 })
}

fn tensor_power(v: &[C64], t: usize) -> Vec<C64> {
    let mut out = vec![C64::new(1.0, 0.0)];
    for _ in 0..t {
        out = kron_vec(&out, v);
    }
    out
}

/// `sum_{sigma in S_T} W_sigma` on `T` copies of `C^d`.
fn symmetrizer(d: usize, t: usize, max: usize) -> Result<ComplexMatrix> {
    checked_power(d, t, max)?;
    let n = d.pow(t as u32);
    let mut acc = ComplexMatrix::zeros(n, n);
    for sigma in Permutation::all(t) {
        let map = copy_permutation(&sigma, d)?.basis_map();
        for (x, y) in map.into_iter().enumerate() {
            acc[(y, x)] += C64::new(1.0, 0.0);
        }
    }
    Ok(acc)
}

/// Monte Carlo check of the `T`-th Haar moment: the sample mean of
/// `psi^{⊗T} (psi^dagger)^{⊗T}` against `sum_sigma W_sigma / (d (d+1) ... (d+T-1))`.
/// Returns the largest entrywise deviation.
pub fn check_haar_moment_lemma(d: usize, t: usize, n_samples: u64, rng: &mut RngStream) -> Result<f64> {
    if d < 1 || t < 1 || n_samples < 1 {
        return Err(Error::Domain("need d, T and n_samples at least 1"));
    }
    let n = checked_power(d, t, DEFAULT_MAX_OPERATOR_DIM)?;
    let mut acc = vec![C64::new(0.0, 0.0); n * n];
    for _ in 0..n_samples {
        let v = tensor_power(sample_haar_pure(d, rng).amplitudes(), t);
        for (i, vi) in v.iter().enumerate() {
            let row = &mut acc[i * n..(i + 1) * n];
            for (a, vj) in row.iter_mut().zip(&v) {
                *a += vi * vj.conj();
            }
        }
    }
    let norm: f64 = (0..t).map(|j| (d + j) as f64).product();
    let expected = symmetrizer(d, t, DEFAULT_MAX_OPERATOR_DIM)?;
    let inv_n = 1.0 / n_samples as f64;
    let mut max_dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let dev = (acc[i * n + j] * inv_n - expected[(i, j)] / norm).norm();
            max_dev = max_dev.max(dev);
        }
    }
    Ok(max_dev)
}

/// Which product-state inequality is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LemmaVariant {
    /// `<Phi| V (sum W) ⊗ (sum W) V^dagger |Phi> >= 1`, local dimension `sqrt d`.
    Pure,
    /// `sum_sigma k^{c(sigma)} <Phi|W_sigma|Phi> >= k^T` on `(C^d)^{⊗T}`.
    MixedSingle { k: usize },
    /// Both parties traced over `sqrt k`: bound `k^T`.
    MixedDouble { k: usize },
}

impl LemmaVariant {
    pub fn name(&self) -> &'static str {
        match self {
            LemmaVariant::Pure => "PURE",
            LemmaVariant::MixedSingle { .. } => "MIXED_SINGLE",
            LemmaVariant::MixedDouble { .. } => "MIXED_DOUBLE",
        }
    }

    /// Stated lower bound at `T` copies.
    pub fn bound(&self, t: usize) -> f64 {
        match *self {
            LemmaVariant::Pure => 1.0,
            LemmaVariant::MixedSingle { k } | LemmaVariant::MixedDouble { k } => {
                libm::pow(k as f64, t as f64)
            }
        }
    }
}

/// Result of a product-state lemma check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductLemmaReport {
    pub variant: LemmaVariant,
    pub d: usize,
    pub copies: usize,
    pub n_states: u64,
    /// Smallest value observed.
    pub min: f64,
    pub bound: f64,
    /// Largest disagreement between the basis-permutation and the dense
    /// route, when the dense route was built.
    pub route_gap: Option<f64>,
}

impl ProductLemmaReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.min >= self.bound - tol
    }
}

/// Weighted permutation sums of one party, as basis maps with weights.
struct PartyTerms {
    maps: Vec<(FactorPermutation, f64)>,
}

/// `sum_{sigma_1, sigma_2} w(c_1) w(c_2) V (W_1 ⊗ W_2) V^dagger` as weighted
/// basis maps on copy-major `(C^{local} ⊗ C^{local})^{⊗T}`.
fn bipartite_terms(local: usize, t: usize, weight: f64) -> Result<PartyTerms> {
    let parties = [SubsystemShape::single(local), SubsystemShape::single(local)];
    let v = unravel(t, &parties)?;
    let v_inv = v.inverse();
    let perms = Permutation::all(t);
    let mut maps = Vec::with_capacity(perms.len() * perms.len());
    for s1 in &perms {
        for s2 in &perms {
            let image: Vec<usize> = s1
                .image()
                .iter()
                .copied()
                .chain(s2.image().iter().map(|&p| p + t))
                .collect();
            let w = FactorPermutation::new(vec![local; 2 * t], Permutation::new(image)?)?;
            let conj = v.after(&w.after(&v_inv)?)?;
            let c = (s1.cycle_count() + s2.cycle_count()) as i32;
            maps.push((conj, libm::pow(weight, c as f64)));
        }
    }
    Ok(PartyTerms { maps })
}

fn single_terms(d: usize, t: usize, k: usize) -> Result<PartyTerms> {
    let maps = Permutation::all(t)
        .into_iter()
        .map(|s| {
            let c = s.cycle_count() as f64;
            copy_permutation(&s, d).map(|m| (m, libm::pow(k as f64, c)))
        })
        .collect::<Result<_>>()?;
    Ok(PartyTerms { maps })
}

impl PartyTerms {
    fn tables(self) -> Vec<(Vec<usize>, f64)> {
        self.maps.into_iter().map(|(m, w)| (m.basis_map(), w)).collect()
    }
}

/// `<Phi| sum_i w_i P_i |Phi>` with `P_i |x> = |map_i(x)>`.
fn expectation_of_maps(tables: &[(Vec<usize>, f64)], phi: &[C64]) -> f64 {
    tables
        .iter()
        .map(|(map, w)| {
            let s: C64 = map.iter().enumerate().map(|(x, &y)| phi[y].conj() * phi[x]).sum();
            w * s.re
        })
        .sum()
}

/// `sum_sigma W_sigma` on `T` copies of `local ⊗ env`, with the `env` factors
/// traced out.
fn traced_symmetrizer(local: usize, env: usize, t: usize) -> Result<ComplexMatrix> {
    let full = symmetrizer(local * env, t, MATERIALIZE_MAX_DIM)?;
    if env == 1 {
        return Ok(full);
    }
    let dims: Vec<usize> = (0..t).flat_map(|_| [local, env]).collect();
    let keep: Vec<usize> = (0..t).map(|j| 2 * j).collect();
    Ok(partial_trace_operator(&full, &SubsystemShape::new(dims)?, &keep)?.0)
}

/// `V (A ⊗ A) V^dagger` for a party operator `A` on `(C^{local})^{⊗T}`.
fn conjugate_by_unravel(a: &ComplexMatrix, local: usize, t: usize) -> Result<ComplexMatrix> {
    let parties = [SubsystemShape::single(local), SubsystemShape::single(local)];
    let v = unravel(t, &parties)?.to_matrix(MATERIALIZE_MAX_DIM)?;
    v.matmul(&kron(a, a))?.matmul(&v.adjoint())
}

fn dense_operator(variant: LemmaVariant, d: usize, t: usize) -> Result<ComplexMatrix> {
    match variant {
        LemmaVariant::Pure => {
            let local = square_root(d)?;
            conjugate_by_unravel(&symmetrizer(local, t, MATERIALIZE_MAX_DIM)?, local, t)
        }
        LemmaVariant::MixedSingle { k } => traced_symmetrizer(d, k, t),
        LemmaVariant::MixedDouble { k } => {
            let local = square_root(d)?;
            let env = square_root(k)?;
            conjugate_by_unravel(&traced_symmetrizer(local, env, t)?, local, t)
        }
    }
}

fn dense_route_fits(variant: LemmaVariant, d: usize, t: usize) -> bool {
    let widest = match variant {
        LemmaVariant::Pure => d,
        LemmaVariant::MixedSingle { k } => d.saturating_mul(k),
        LemmaVariant::MixedDouble { k } => match (exact_root(d, 2), exact_root(k, 2)) {
            (Some(a), Some(b)) => d.max(a * b),
            _ => return false,
        },
    };
    checked_power(widest, t, MATERIALIZE_MAX_DIM).is_ok()
        && checked_power(d, t, MATERIALIZE_MAX_DIM).is_ok()
}

/// Evaluates the product-state lemma on `n_states` random product states
/// `|phi_1> ⊗ ... ⊗ |phi_T>` with `phi_t` Haar on `C^d`.
///
/// Values are computed from basis permutations; when the operator is small
/// enough it is also built densely and the two routes are compared.
pub fn check_product_state_lemma(
    d: usize,
    t: usize,
    n_states: u64,
    variant: LemmaVariant,
    rng: &mut RngStream,
) -> Result<ProductLemmaReport> {
    if t < 1 || n_states < 1 || d < 1 {
        return Err(Error::Domain("need d, T and n_states at least 1"));
    }
    checked_power(d, t, DEFAULT_MAX_OPERATOR_DIM)?;
    let terms = match variant {
        LemmaVariant::Pure => bipartite_terms(square_root(d)?, t, 1.0)?,
        LemmaVariant::MixedSingle { k } => {
            if k < 1 {
                return Err(Error::Domain("k must be at least 1"));
            }
            single_terms(d, t, k)?
        }
        LemmaVariant::MixedDouble { k } => {
            let env = square_root(k)?;
            bipartite_terms(square_root(d)?, t, env as f64)?
        }
    };
    let tables = terms.tables();
    let dense = if dense_route_fits(variant, d, t) {
        Some(dense_operator(variant, d, t)?)
    } else {
        None
    };
    let mut min = f64::INFINITY;
    let mut gap: f64 = 0.0;
    for _ in 0..n_states {
        let mut phi = vec![C64::new(1.0, 0.0)];
        for _ in 0..t {
            phi = kron_vec(&phi, sample_haar_pure(d, rng).amplitudes());
        }
        let value = expectation_of_maps(&tables, &phi);
        if let Some(op) = &dense {
            gap = gap.max((op.expectation(&phi)?.re - value).abs());
        }
        min = min.min(value);
    }
    Ok(ProductLemmaReport {
        variant,
        d,
        copies: t,
        n_states,
        min,
        bound: variant.bound(t),
        route_gap: dense.map(|_| gap),
    })
}

/// Monte Carlo checks of the randomized-measurement twirl identities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwirlReport {
    pub d_a: usize,
    /// Largest entrywise deviation of `E U^{⊗2} X U^{dagger ⊗2}` from `S`.
    pub swap_max_dev: f64,
    /// `E Tr(X^2 (U rho U^dagger)^{⊗2})` against `d_A + (d_A - 1) Tr(rho^2)`.
    pub second_moment: MomentCheck,
    /// Mean of the full estimator against `Tr(rho^2)`.
    pub estimator_mean: MomentCheck,
    pub purity: f64,
}

/// Runs the three twirl checks, (ii) and (iii) on a random reduced state.
pub fn check_twirl_identities(d_a: usize, n_samples: u64, rng: &mut RngStream) -> Result<TwirlReport> {
    if !(2..=16).contains(&d_a) {
        return Err(Error::Domain("d_A must lie in 2..=16"));
    }
    if n_samples < 2 {
        return Err(Error::InsufficientData("need at least two samples"));
    }
    let swap_max_dev = check_twirl_swap(d_a, n_samples, rng)?;
    let rho = sample_pi(d_a, d_a, rng).matrix().clone();
    let purity = rho.frobenius_norm_sqr();
    let second_moment = check_twirl_second_moment(&rho, n_samples, rng)?;
    let runs = (n_samples / 10).max(100);
    let estimator_mean = check_estimator_mean(&rho, 1, 4, runs, rng)?;
    Ok(TwirlReport {
        d_a,
        swap_max_dev,
        second_moment,
        estimator_mean,
        purity,
    })
}

/// Identity (i): largest entrywise deviation of the sample mean of
/// `(d_A + 1) sum_b (u_b ⊗ u_b)(u_b ⊗ u_b)^dagger - I` from `S`.
pub fn check_twirl_swap(d_a: usize, n_samples: u64, rng: &mut RngStream) -> Result<f64> {
    if n_samples < 1 {
        return Err(Error::InsufficientData("need at least one sample"));
    }
    let n = d_a * d_a;
    let mut acc = vec![C64::new(0.0, 0.0); n * n];
    let mut w = vec![C64::new(0.0, 0.0); n];
    for _ in 0..n_samples {
        let u = sample_haar_unitary(d_a, rng);
        for b in 0..d_a {
            for i in 0..d_a {
                for j in 0..d_a {
                    w[i * d_a + j] = u[(i, b)] * u[(j, b)];
                }
            }
            for (r, wr) in w.iter().enumerate() {
                let row = &mut acc[r * n..(r + 1) * n];
                for (a, wc) in row.iter_mut().zip(&w) {
                    *a += wr * wc.conj();
                }
            }
        }
    }
    let s = crate::tensor::swap_operator(d_a);
    let scale = (d_a as f64 + 1.0) / n_samples as f64;
    let mut max_dev: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            let id = if r == c { 1.0 } else { 0.0 };
            let mean = acc[r * n + c] * scale - id;
            max_dev = max_dev.max((mean - s[(r, c)]).norm());
        }
    }
    Ok(max_dev)
}

/// Identity (ii): `E_U Tr(X^2 (U rho U^dagger)^{⊗2}) = d_A + (d_A - 1) Tr(rho^2)`.
pub fn check_twirl_second_moment(rho: &ComplexMatrix, n_samples: u64, rng: &mut RngStream) -> Result<MomentCheck> {
    let d_a = rho.rows();
    let d = d_a as f64;
    let mut values = Vec::with_capacity(n_samples as usize);
    for _ in 0..n_samples {
        let u = sample_haar_unitary(d_a, rng);
        let p = born_probabilities(&u, rho)?;
        // X^2 is diagonal: d_A^2 on |bb>, 1 elsewhere.
        let collision: f64 = p.iter().map(|x| x * x).sum();
        values.push(1.0 + (d * d - 1.0) * collision);
    }
    let m = SampleMoments::from_slice(&values)?;
    Ok(MomentCheck {
        observed: m.mean,
        expected: d + (d - 1.0) * rho.frobenius_norm_sqr(),
        se: m.mean_se,
    })
}

fn born_probabilities(u: &ComplexMatrix, rho: &ComplexMatrix) -> Result<Vec<f64>> {
    let urho = u.matmul(rho)?;
    Ok((0..rho.rows())
        .map(|b| {
            urho.row(b)
                .iter()
                .zip(u.row(b))
                .map(|(x, y)| (x * y.conj()).re)
                .sum()
        })
        .collect())
}

/// Identity (iii): mean of the estimator over `runs` independent runs
/// against `Tr(rho^2)`.
pub fn check_estimator_mean(
    rho: &ComplexMatrix,
    n_u: u64,
    n_m: u64,
    runs: u64,
    rng: &mut RngStream,
) -> Result<MomentCheck> {
    let values = (0..runs)
        .map(|_| rand_meas_estimate(rho, n_u, n_m, rng))
        .collect::<Result<Vec<f64>>>()?;
    let m = SampleMoments::from_slice(&values)?;
    Ok(MomentCheck {
        observed: m.mean,
        expected: rho.frobenius_norm_sqr(),
        se: m.mean_se,
    })
}

/// Reduced states on which the estimator variance is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StateFamily {
    /// `|0><0|`: reduction of a product pure state.
    PureProduct,
    /// `I/d_A`: reduction of a maximally entangled state.
    MaximallyMixed,
}

impl StateFamily {
    pub const ALL: [StateFamily; 2] = [StateFamily::PureProduct, StateFamily::MaximallyMixed];

    pub fn as_str(self) -> &'static str {
        match self {
            StateFamily::PureProduct => "PURE_PRODUCT",
            StateFamily::MaximallyMixed => "MAXIMALLY_MIXED",
        }
    }

    pub fn reduced_state(self, d_a: usize) -> ComplexMatrix {
        match self {
            StateFamily::PureProduct => {
                ComplexMatrix::from_fn(d_a, d_a, |i, j| C64::new(if i == 0 && j == 0 { 1.0 } else { 0.0 }, 0.0))
            }
            StateFamily::MaximallyMixed => ComplexMatrix::from_real_diagonal(&vec![1.0 / d_a as f64; d_a]),
        }
    }

    /// `(Tr rho^2, Tr rho^3)`.
    pub fn moments(self, d_a: usize) -> (f64, f64) {
        match self {
            StateFamily::PureProduct => (1.0, 1.0),
            StateFamily::MaximallyMixed => {
                let d = d_a as f64;
                (1.0 / d, 1.0 / (d * d))
            }
        }
    }
}

/// Observed estimator variance at one grid point, scaled by `N_U`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarianceRow {
    pub d_a: usize,
    pub n_m: u64,
    pub family: StateFamily,
    pub purity: f64,
    pub tr_rho3: f64,
    /// `N_U * Var(P_hat)`.
    pub scaled_variance: f64,
    pub se: f64,
}

impl VarianceRow {
    /// Coefficients `(d_A / N_M^2, Tr(rho^3) / N_M)` of `C_1` and `C_2`.
    pub fn coefficients(&self) -> (f64, f64) {
        let n = self.n_m as f64;
        (self.d_a as f64 / (n * n), self.tr_rho3 / n)
    }
}

/// Constants with `C_1 a_i + C_2 b_i >= v_i` on every row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarianceFit {
    pub c1: f64,
    pub c2: f64,
    /// Smallest `c` with `C_1 = C_2 = c` feasible.
    pub minimax: f64,
}

impl VarianceFit {
    pub fn within(&self, limit: f64) -> bool {
        self.c1 <= limit && self.c2 <= limit
    }
}

/// Fits the variance-bound constants: `minimax = max_i v_i / (a_i + b_i)`,
/// then `C_1` is lowered as far as the rows allow at `C_2 = minimax`, and
/// `C_2` is lowered at that `C_1`.
pub fn fit_variance_constants(rows: &[VarianceRow]) -> Result<VarianceFit> {
    if rows.is_empty() {
        return Err(Error::InsufficientData("no variance rows"));
    }
    let coef: Vec<(f64, f64, f64)> = rows
        .iter()
        .map(|r| {
            let (a, b) = r.coefficients();
            (a, b, r.scaled_variance.max(0.0))
        })
        .collect();
    let minimax = coef.iter().map(|&(a, b, v)| v / (a + b)).fold(0.0, f64::max);
    let c1 = coef
        .iter()
        .map(|&(a, b, v)| (v - b * minimax) / a)
        .fold(0.0, f64::max);
    let c2 = coef
        .iter()
        .map(|&(a, b, v)| if b > 0.0 { (v - a * c1) / b } else { 0.0 })
        .fold(0.0, f64::max);
    Ok(VarianceFit { c1, c2, minimax })
}

/// Variance-bound grid with overall and per-family fits.
#[derive(Clone, Debug, PartialEq)]
pub struct VarianceBoundReport {
    pub n_u: u64,
    pub runs: u64,
    pub rows: Vec<VarianceRow>,
    pub fit: VarianceFit,
    pub family_fits: Vec<(StateFamily, VarianceFit)>,
}

/// Measures `N_U * Var(P_hat)` over `runs` runs at every `(family, d_A, N_M)`
/// and fits `Var <= (C_1 d_A / N_M^2 + C_2 Tr(rho^3) / N_M) / N_U`.
pub fn check_variance_bound(
    d_as: &[usize],
    n_ms: &[u64],
    n_u: u64,
    runs: u64,
    rng: &mut RngStream,
) -> Result<VarianceBoundReport> {
    if runs < 2 {
        return Err(Error::InsufficientData("need at least two runs per point"));
    }
    let mut rows = Vec::new();
    for family in StateFamily::ALL {
        for &d_a in d_as {
            let rho = family.reduced_state(d_a);
            let (purity, tr_rho3) = family.moments(d_a);
            for &n_m in n_ms {
                let values = (0..runs)
                    .map(|_| rand_meas_estimate(&rho, n_u, n_m, rng))
                    .collect::<Result<Vec<f64>>>()?;
                let m = SampleMoments::from_slice(&values)?;
                rows.push(VarianceRow {
                    d_a,
                    n_m,
                    family,
                    purity,
                    tr_rho3,
                    scaled_variance: n_u as f64 * m.variance,
                    se: n_u as f64 * m.variance_se,
                });
            }
        }
    }
    let fit = fit_variance_constants(&rows)?;
    let family_fits = StateFamily::ALL
        .iter()
        .map(|&f| {
            let sub: Vec<VarianceRow> = rows.iter().filter(|r| r.family == f).copied().collect();
            fit_variance_constants(&sub).map(|fit| (f, fit))
        })
        .collect::<Result<_>>()?;
    Ok(VarianceBoundReport {
        n_u,
        runs,
        rows,
        fit,
        family_fits,
    })
}

/// Exact `N_U * Var(P_hat)` for pure `rho_A` (unit `Tr rho^3`) or
/// `rho_A = I/d_A`.
pub fn exact_scaled_variance(family: StateFamily, d_a: usize, n_m: u64) -> f64 {
    let d = d_a as f64;
    let n = n_m as f64;
    let (p, p3) = family.moments(d_a);
    let e2 = d + (d - 1.0) * p;
    let e3 = (-1.0 + (d - 1.0) * p + 2.0 * (d + 1.0) * p3) / (d + 2.0);
    let e4 = match family {
        StateFamily::PureProduct => 1.0 + 4.0 * (d - 1.0) / ((d + 2.0) * (d + 3.0)),
        StateFamily::MaximallyMixed => p * p,
    };
    let pairs = n * (n - 1.0);
    2.0 * e2 / pairs + 4.0 * (n - 2.0) * e3 / pairs + (n - 2.0) * (n - 3.0) * e4 / pairs - p * p
}

/// Swap-witness moments over Haar pure states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwapMomentsReport {
    pub d: usize,
    /// Mean of `Tr(S psi)` against `1/sqrt d`.
    pub mean: MomentCheck,
    /// Variance against `2/(d+1) - 1/d`.
    pub variance: MomentCheck,
}

pub fn check_swap_moments(d: usize, n_samples: u64, rng: &mut RngStream) -> Result<SwapMomentsReport> {
    let local = square_root(d)?;
    let shape = SubsystemShape::bipartite(local, local);
    let values = (0..n_samples)
        .map(|_| swap_witness_value_pure(&sample_haar_pure_shaped(shape.clone(), rng)).map(|v| v.value))
        .collect::<Result<Vec<f64>>>()?;
    let m = SampleMoments::from_slice(&values)?;
    let df = d as f64;
    Ok(SwapMomentsReport {
        d,
        mean: MomentCheck {
            observed: m.mean,
            expected: 1.0 / libm::sqrt(df),
            se: m.mean_se,
        },
        variance: MomentCheck {
            observed: m.variance,
            expected: 2.0 / (df + 1.0) - 1.0 / df,
            se: m.variance_se,
        },
    })
}

/// Mean reduced purity of Haar pure states on `C^{sqrt d} ⊗ C^{sqrt d}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PagePurityReport {
    pub d: usize,
    /// Against the stated mean `(sqrt d + 1)/(d + 1)`.
    pub stated: MomentCheck,
    /// Against the second Haar moment `(d_A + d_B)/(d_A d_B + 1)`.
    pub haar_moment: MomentCheck,
}

pub fn check_page_purity(d: usize, n_samples: u64, rng: &mut RngStream) -> Result<PagePurityReport> {
    let local = square_root(d)?;
    let shape = SubsystemShape::bipartite(local, local);
    let values: Vec<f64> = (0..n_samples)
        .map(|_| sample_haar_pure_shaped(shape.clone(), rng).reduced_purity())
        .collect();
    let m = SampleMoments::from_slice(&values)?;
    let df = d as f64;
    let sq = libm::sqrt(df);
    let check = |expected| MomentCheck {
        observed: m.mean,
        expected,
        se: m.mean_se,
    };
    Ok(PagePurityReport {
        d,
        stated: check((sq + 1.0) / (df + 1.0)),
        haar_moment: check(2.0 * sq / (df + 1.0)),
    })
}

/// Empirical swap-witness detection rate over `pi*_{d,1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectionPoint {
    pub d: usize,
    pub d_a: usize,
    pub samples: u64,
    pub detected: u64,
    pub empirical: f64,
    pub ci: (f64, f64),
    pub closed_form: f64,
}

impl DetectionPoint {
    /// Standard error of the empirical rate under the closed-form value.
    pub fn binomial_se(&self) -> f64 {
        libm::sqrt(self.closed_form * (1.0 - self.closed_form) / self.samples as f64)
    }

    pub fn z_score(&self) -> f64 {
        (self.empirical - self.closed_form).abs() / self.binomial_se()
    }
}

/// Counts `Tr(S rho) < 0` over `samples` draws from `pi*_{d,1}`.
pub fn detection_rate(d: usize, samples: u64, rng: &mut RngStream) -> Result<DetectionPoint> {
    if samples == 0 {
        return Err(Error::InsufficientData("need at least one sample"));
    }
    let ens = PiStar::new(d, 1)?;
    let closed_form = detection_power_closed_form(d)?;
    let mut detected = 0u64;
    for _ in 0..samples {
        let value = match ens.sample(rng).state {
            QuantumState::Pure(psi) => swap_witness_value_pure(&psi)?.value,
            QuantumState::Mixed(rho) => swap_witness_value(&rho)?.value,
        };
        if value < 0.0 {
            detected += 1;
        }
    }
    Ok(DetectionPoint {
        d,
        d_a: ens.d_local(),
        samples,
        detected,
        empirical: detected as f64 / samples as f64,
        ci: wilson_interval(detected, samples, Z95)?,
        closed_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_moment_is_maximally_mixed() {
        let mut rng = RngStream::new(1, 0);
        let dev = check_haar_moment_lemma(4, 1, 20_000, &mut rng).unwrap();
        assert!(dev < 0.02, "{dev}");
    }

    #[test]
    fn haar_moment_cap() {
        let mut rng = RngStream::new(1, 0);
        assert!(matches!(
            check_haar_moment_lemma(2, 15, 1, &mut rng),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn lemma_single_copy_is_exact() {
        let mut rng = RngStream::new(2, 0);
        let r = check_product_state_lemma(4, 1, 50, LemmaVariant::Pure, &mut rng).unwrap();
        assert!((r.min - 1.0).abs() < 1e-12);
        let r = check_product_state_lemma(4, 1, 50, LemmaVariant::MixedSingle { k: 3 }, &mut rng).unwrap();
        assert!((r.min - 3.0).abs() < 1e-12);
        let r = check_product_state_lemma(4, 1, 50, LemmaVariant::MixedDouble { k: 4 }, &mut rng).unwrap();
        assert!((r.min - 4.0).abs() < 1e-12);
    }

    #[test]
    fn lemma_routes_agree() {
        let mut rng = RngStream::new(3, 0);
        for v in [
            LemmaVariant::Pure,
            LemmaVariant::MixedSingle { k: 2 },
            LemmaVariant::MixedDouble { k: 4 },
        ] {
            let r = check_product_state_lemma(4, 2, 100, v, &mut rng).unwrap();
            assert!(r.route_gap.unwrap() < 1e-10, "{v:?} {r:?}");
            assert!(r.holds(1e-8), "{v:?} {r:?}");
        }
    }

    #[test]
    fn lemma_rejects_non_squares() {
        let mut rng = RngStream::new(3, 0);
        assert!(check_product_state_lemma(6, 2, 1, LemmaVariant::Pure, &mut rng).is_err());
        assert!(check_product_state_lemma(4, 2, 1, LemmaVariant::MixedDouble { k: 2 }, &mut rng).is_err());
    }

    #[test]
    fn exact_variance_matches_closed_limits() {
        // N_M = 2 reduces to one pair: Var = E2 - P^2.
        for d_a in [2, 4, 8] {
            let d = d_a as f64;
            let v = exact_scaled_variance(StateFamily::PureProduct, d_a, 2);
            assert!((v - (2.0 * d - 1.0 - 1.0)).abs() < 1e-12);
            let v = exact_scaled_variance(StateFamily::MaximallyMixed, d_a, 2);
            assert!((v - (d + (d - 1.0) / d - 1.0 / (d * d))).abs() < 1e-12);
        }
        // Large N_M leaves the unitary variance for pure states and nothing for I/d.
        let v = exact_scaled_variance(StateFamily::PureProduct, 4, 1 << 30);
        assert!((v - 4.0 * 3.0 / (6.0 * 7.0)).abs() < 1e-6);
        assert!(exact_scaled_variance(StateFamily::MaximallyMixed, 4, 1 << 30).abs() < 1e-6);
    }

    #[test]
    fn fit_on_exact_rows() {
        let rows: Vec<VarianceRow> = [4usize, 8]
            .iter()
            .flat_map(|&d_a| {
                [2u64, 8].into_iter().map(move |n_m| {
                    let family = StateFamily::MaximallyMixed;
                    let (purity, tr_rho3) = family.moments(d_a);
                    VarianceRow {
                        d_a,
                        n_m,
                        family,
                        purity,
                        tr_rho3,
                        scaled_variance: exact_scaled_variance(family, d_a, n_m),
                        se: 0.0,
                    }
                })
            })
            .collect();
        let fit = fit_variance_constants(&rows).unwrap();
        for r in &rows {
            let (a, b) = r.coefficients();
            assert!(fit.c1 * a + fit.c2 * b >= r.scaled_variance - 1e-12);
            assert!(fit.minimax * (a + b) >= r.scaled_variance - 1e-12);
        }
        assert!(fit.c1 <= fit.minimax + 1e-12 && fit.c2 <= fit.minimax + 1e-12);
    }

    #[test]
    fn detection_rate_reports_closed_form() {
        let mut rng = RngStream::new(4, 0);
        let p = detection_rate(4, 2000, &mut rng).unwrap();
        assert_eq!(p.d_a, 2);
        assert!((p.closed_form - 0.0625).abs() < 1e-12);
        assert!(p.ci.0 <= p.empirical && p.empirical <= p.ci.1);
        assert!(detection_rate(4, 0, &mut rng).is_err());
    }
}
