//! Statistics, bounds, budget search and Monte Carlo lemma checks.

mod bounds;
mod oracles;
mod search;
mod stats;

pub use bounds::{min_copies_lower_bound, tv_upper_bound, BoundReport, Variant};
pub use oracles::{
    check_estimator_mean, check_haar_moment_lemma, check_page_purity, check_product_state_lemma,
    check_swap_moments, check_twirl_identities, check_twirl_second_moment, check_twirl_swap,
    check_variance_bound, detection_rate, exact_scaled_variance, fit_variance_constants,
    DetectionPoint, LemmaVariant, PagePurityReport, ProductLemmaReport, StateFamily,
    SwapMomentsReport, TwirlReport, VarianceBoundReport, VarianceFit, VarianceRow,
    MATERIALIZE_MAX_DIM,
};
pub use search::{
    find_min_budget, fit_scaling_exponent, PlantedLaw, Probe, ProbeEvaluator, ProtocolProbe,
    ScalingPoint, SearchConfig, DEFAULT_BUDGET_CAP, MIN_TRIALS_PER_PROBE, PROBE_DOMAIN,
    SMALL_PARAM_SWEEP,
};
pub use stats::{
    completeness_soundness, ks_two_sample, ols_slope, wilson_interval, MomentCheck,
    SampleMoments, Targets, TrialStats, Z95,
};
