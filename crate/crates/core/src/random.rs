//! Seeded Haar samplers and the benchmark ensembles built from them.
//!
//! Every sampler is a pure function of its parameters and an [`RngStream`].
//! Streams are ChaCha20 instances keyed by the run seed and separated by the
//! 64-bit stream id, so concurrent trials never share generator state.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::tensor::{ComplexMatrix, DensityMatrix, StateVector, SubsystemShape};
use crate::{Error, Result};

/// Identifier of the generator, recorded in output metadata.
pub const GENERATOR_ID: &str = "chacha20/rand_chacha-0.9;key=splitmix64(seed);stream=id";

/// Default constant `c` in the trusted labeling regime `k <= c * d^{3/2}`.
pub const DEFAULT_LABEL_BOUND: f64 = 1.0;

/// Reproducible random stream identified by `(seed, stream id)`.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut key = [0u8; 32];
        let mut state = seed;
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha20Rng::from_seed(key);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    /// Stream whose id is a hash of `tags`, for structured derivation such as
    /// `(domain, parameter, trial)`.
    pub fn derive(seed: u64, tags: &[u64]) -> Self {
        Self::new(seed, stream_id(tags))
    }

    #[inline]
    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Standard real Gaussian.
    #[inline]
    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Complex Gaussian with independent standard real and imaginary parts.
    #[inline]
    pub fn complex_normal(&mut self) -> C64 {
        let re = self.normal();
        let im = self.normal();
        C64::new(re, im)
    }

    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    #[inline]
    pub fn coin(&mut self) -> bool {
        self.rng.random_bool(0.5)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive 64-bit mix of a tag list.
pub fn stream_id(tags: &[u64]) -> u64 {
    let mut state = 0x243F_6A88_85A3_08D3u64 ^ tags.len() as u64;
    let mut acc = splitmix64(&mut state);
    for &t in tags {
        state ^= t;
        acc = acc.rotate_left(17) ^ splitmix64(&mut state);
    }
    acc
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of the
/// R diagonal absorbed into Q.
pub fn sample_haar_unitary(d: usize, rng: &mut RngStream) -> ComplexMatrix {
    let d = d.max(1);
    // Columns stored contiguously for the orthogonalization.
    let mut cols: Vec<Vec<C64>> = (0..d)
        .map(|_| (0..d).map(|_| rng.complex_normal()).collect())
        .collect();
    for j in 0..d {
        let (done, rest) = cols.split_at_mut(j);
        let v = &mut rest[0];
        // Two Gram-Schmidt passes keep orthogonality at roundoff level.
        for _ in 0..2 {
            for q in done.iter() {
                let proj: C64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        // Dividing by the real positive norm fixes R_jj > 0, the phase
        // convention that makes Q exactly Haar distributed.
        let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
        for vi in v.iter_mut() {
            *vi /= norm;
        }
    }
    ComplexMatrix::from_fn(d, d, |i, j| cols[j][i])
}

/// Haar-random pure state: a normalized standard complex Gaussian vector.
pub fn sample_haar_pure(d: usize, rng: &mut RngStream) -> StateVector {
    sample_haar_pure_shaped(SubsystemShape::single(d), rng)
}

/// Haar-random pure state carrying the given shape.
pub fn sample_haar_pure_shaped(shape: SubsystemShape, rng: &mut RngStream) -> StateVector {
    let dim = shape.total();
    loop {
        let amps: Vec<C64> = (0..dim).map(|_| rng.complex_normal()).collect();
        // The zero vector has probability zero; retry keeps the map total.
        if let Ok(s) = StateVector::normalized(amps, shape.clone()) {
            return s;
        }
    }
}

/// Draw from `pi_{d,k}`: reduction of a Haar pure state on `C^d ⊗ C^k`.
pub fn sample_pi(d: usize, k: usize, rng: &mut RngStream) -> DensityMatrix {
    sample_pi_shaped(SubsystemShape::single(d), k, rng)
}

fn sample_pi_shaped(shape: SubsystemShape, k: usize, rng: &mut RngStream) -> DensityMatrix {
    let d = shape.total();
    let k = k.max(1);
    let psi = sample_haar_pure_shaped(SubsystemShape::bipartite(d, k), rng);
    let rho = psi.reduced_first();
    DensityMatrix::from_parts(rho, shape)
}

/// Which half of the fair-coin mixture produced a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    GlobalHaar,
    Product,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::GlobalHaar => "GLOBAL_HAAR",
            Branch::Product => "PRODUCT",
        }
    }
}

/// A sampled state, pure or mixed.
#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn shape(&self) -> &SubsystemShape {
        match self {
            QuantumState::Pure(s) => s.shape(),
            QuantumState::Mixed(r) => r.shape(),
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, QuantumState::Pure(_))
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            QuantumState::Pure(s) => s.density(),
            QuantumState::Mixed(r) => r.clone(),
        }
    }

    /// Reduced state of the first party.
    pub fn reduced_first(&self) -> ComplexMatrix {
        match self {
            QuantumState::Pure(s) => s.reduced_first(),
            QuantumState::Mixed(r) => r
                .partial_trace(&[0])
                .expect("party 0 always exists")
                .matrix()
                .clone(),
        }
    }

    /// `Tr(rho_A^2)` for the first party.
    pub fn reduced_purity(&self) -> f64 {
        match self {
            QuantumState::Pure(s) => s.reduced_purity(),
            QuantumState::Mixed(_) => self.reduced_first().frobenius_norm_sqr(),
        }
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        match self {
            QuantumState::Pure(_) => 1.0,
            QuantumState::Mixed(r) => r.purity(),
        }
    }
}

/// Parameters of the ensemble a [`LabeledState`] was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EnsembleParams {
    /// Total dimension `d`.
    pub d: usize,
    /// Environment dimension `k` (1 for pure ensembles).
    pub k: usize,
    /// Number of parties `K`.
    pub parts: usize,
}

/// Sampled state with its construction branch and ground-truth label.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledState {
    pub state: QuantumState,
    pub branch: Branch,
    pub params: EnsembleParams,
    /// Ground truth used for soundness: `true` for the global branch.
    pub entangled: bool,
}

/// Exact integer `power`-th root of `value`, if any.
pub fn exact_root(value: usize, power: u32) -> Option<usize> {
    if power == 0 {
        return None;
    }
    if value <= 1 || power == 1 {
        return Some(value);
    }
    let guess = libm::round(libm::pow(value as f64, 1.0 / f64::from(power))) as usize;
    (guess.saturating_sub(1)..=guess + 1).find(|&r| r.checked_pow(power) == Some(value))
}

fn root_or_err(value: usize, power: u32) -> Result<usize> {
    exact_root(value, power).ok_or(Error::NotPerfectPower { value, power })
}

/// Validated parameters of the bipartite fair-coin ensemble `pi*_{d,k}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PiStar {
    d: usize,
    k: usize,
    d_local: usize,
    k_local: usize,
}

impl PiStar {
    /// Validates square `d`, `k` and the trusted labeling regime with the
    /// default bound.
    pub fn new(d: usize, k: usize) -> Result<Self> {
        Self::with_label_bound(d, k, DEFAULT_LABEL_BOUND)
    }

    /// As [`PiStar::new`] with labeling trusted for `k <= c * d^{3/2}`.
    pub fn with_label_bound(d: usize, k: usize, c: f64) -> Result<Self> {
        if d < 1 || k < 1 {
            return Err(Error::Domain("d and k must be positive"));
        }
        let d_local = root_or_err(d, 2)?;
        let k_local = root_or_err(k, 2)?;
        let bound = c * libm::pow(d as f64, 1.5);
        if k > 1 && k as f64 > bound {
            return Err(Error::LabelRefused { k, bound });
        }
        Ok(Self {
            d,
            k,
            d_local,
            k_local,
        })
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn d_local(&self) -> usize {
        self.d_local
    }

    pub fn sample(&self, rng: &mut RngStream) -> LabeledState {
        let shape = SubsystemShape::bipartite(self.d_local, self.d_local);
        let params = EnsembleParams {
            d: self.d,
            k: self.k,
            parts: 2,
        };
        let global = rng.coin();
        let state = match (global, self.k) {
            (true, 1) => QuantumState::Pure(sample_haar_pure_shaped(shape, rng)),
            (true, k) => QuantumState::Mixed(sample_pi_shaped(shape, k, rng)),
            (false, 1) => {
                let a = sample_haar_pure(self.d_local, rng);
                let b = sample_haar_pure(self.d_local, rng);
                QuantumState::Pure(a.tensor(&b))
            }
            (false, _) => {
                let a = sample_pi(self.d_local, self.k_local, rng);
                let b = sample_pi(self.d_local, self.k_local, rng);
                QuantumState::Mixed(a.tensor(&b))
            }
        };
        LabeledState {
            state,
            branch: if global { Branch::GlobalHaar } else { Branch::Product },
            params,
            entangled: global,
        }
    }
}

/// Draw from `pi*_{d,k}` with the default labeling bound.
pub fn sample_pi_star(d: usize, k: usize, rng: &mut RngStream) -> Result<LabeledState> {
    Ok(PiStar::new(d, k)?.sample(rng))
}

/// Validated parameters of the `K`-party fair-coin ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PiStarMultipartite {
    d: usize,
    parts: usize,
    d_local: usize,
}

impl PiStarMultipartite {
    pub fn new(d: usize, parts: usize) -> Result<Self> {
        if parts < 2 {
            return Err(Error::Domain("a multipartite ensemble needs K >= 2"));
        }
        let power = u32::try_from(parts).map_err(|_| Error::Domain("K too large"))?;
        let d_local = root_or_err(d, power)?;
        if d_local < 2 {
            return Err(Error::Domain("local dimension must be at least 2"));
        }
        Ok(Self { d, parts, d_local })
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn parts(&self) -> usize {
        self.parts
    }

    #[inline]
    pub fn d_local(&self) -> usize {
        self.d_local
    }

    pub fn sample(&self, rng: &mut RngStream) -> LabeledState {
        let shape = SubsystemShape::uniform(self.d_local, self.parts);
        let global = rng.coin();
        let psi = if global {
            sample_haar_pure_shaped(shape, rng)
        } else {
            let mut psi = sample_haar_pure(self.d_local, rng);
            for _ in 1..self.parts {
                psi = psi.tensor(&sample_haar_pure(self.d_local, rng));
            }
            psi
        };
        LabeledState {
            state: QuantumState::Pure(psi),
            branch: if global { Branch::GlobalHaar } else { Branch::Product },
            params: EnsembleParams {
                d: self.d,
                k: 1,
                parts: self.parts,
            },
            entangled: global,
        }
    }
}

/// Draw from the `K`-party ensemble: Haar pure in dimension `d`, or a product
/// of `K` Haar pure states in dimension `d^{1/K}`.
pub fn sample_pi_star_multipartite(
    d: usize,
    parts: usize,
    rng: &mut RngStream,
) -> Result<LabeledState> {
    Ok(PiStarMultipartite::new(d, parts)?.sample(rng))
}

/// Any ensemble a detection protocol can be benchmarked on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ensemble {
    Bipartite(PiStar),
    Multipartite(PiStarMultipartite),
}

impl Ensemble {
    pub fn sample(&self, rng: &mut RngStream) -> LabeledState {
        match self {
            Ensemble::Bipartite(p) => p.sample(rng),
            Ensemble::Multipartite(p) => p.sample(rng),
        }
    }

    pub fn d(&self) -> usize {
        match self {
            Ensemble::Bipartite(p) => p.d(),
            Ensemble::Multipartite(p) => p.d(),
        }
    }
}
