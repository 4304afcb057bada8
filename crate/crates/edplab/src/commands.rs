//! Experiments behind the subcommands, independent of argument parsing.

use anyhow::{bail, ensure, Context};
use edplab_core::analysis::{
    check_estimator_mean, check_haar_moment_lemma, check_page_purity, check_product_state_lemma,
    check_swap_moments, check_twirl_identities, check_variance_bound, detection_rate,
    find_min_budget, fit_scaling_exponent, min_copies_lower_bound, tv_upper_bound,
    wilson_interval, LemmaVariant, MomentCheck, ProtocolProbe, ScalingPoint, SearchConfig, Targets,
    Variant, Z95,
};
use edplab_core::criteria::detection_power_closed_form;
use edplab_core::protocols::ProtocolId;
use edplab_core::random::{exact_root, Ensemble, PiStar, RngStream};
use edplab_core::runner::TrialRunner;
use edplab_core::tensor::ComplexMatrix;

use crate::output::{Cell, Table};

/// Stream-derivation domains, one per command.
pub const FIG2_DOMAIN: u64 = 0x4649_4732;
pub const VERIFY_DOMAIN: u64 = 0x5645_5249;
/// Samples per independently seeded chunk of the detection-rate run.
pub const FIG2_CHUNK: u64 = 10_000;

fn check_square(d: usize) -> anyhow::Result<usize> {
    match exact_root(d, 2) {
        Some(r) if r >= 2 => Ok(r),
        _ => bail!("d = {d} must be a perfect square of an integer >= 2"),
    }
}

/// Parameters of the detection-rate experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct Fig2Params {
    pub dims: Vec<usize>,
    pub samples: u64,
    pub seed: u64,
}

impl Fig2Params {
    pub fn validate(&self) -> anyhow::Result<()> {
        ensure!(!self.dims.is_empty(), "need at least one d");
        ensure!(self.samples >= 1, "samples must be at least 1");
        for &d in &self.dims {
            check_square(d)?;
        }
        Ok(())
    }
}

/// Empirical `Pr[Tr(S rho) < 0]` over `pi*_{d,1}` next to the closed form.
pub fn fig2<R: TrialRunner>(p: &Fig2Params, runner: &R) -> anyhow::Result<Table> {
    p.validate()?;
    let mut table = Table::new(
        "fig2",
        &["d", "d_A", "samples", "detected", "empirical", "ci_lo", "ci_hi", "closed_form", "z_score"],
    );
    for &d in &p.dims {
        let chunks = p.samples.div_ceil(FIG2_CHUNK);
        let counts = runner.run(chunks, |i| {
            let n = FIG2_CHUNK.min(p.samples - i * FIG2_CHUNK);
            let mut rng = RngStream::derive(p.seed, &[FIG2_DOMAIN, d as u64, i]);
            detection_rate(d, n, &mut rng).map(|pt| pt.detected)
        });
        let detected: u64 = counts.into_iter().sum::<Result<u64, _>>()?;
        let empirical = detected as f64 / p.samples as f64;
        let (lo, hi) = wilson_interval(detected, p.samples, Z95)?;
        let closed = detection_power_closed_form(d)?;
        let se = (closed * (1.0 - closed) / p.samples as f64).sqrt();
        table.push(vec![
            d.into(),
            check_square(d)?.into(),
            p.samples.into(),
            detected.into(),
            empirical.into(),
            lo.into(),
            hi.into(),
            closed.into(),
            ((empirical - closed).abs() / se).into(),
        ]);
    }
    Ok(table)
}

/// Parameters of the budget-scaling experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingParams {
    pub protocols: Vec<ProtocolId>,
    pub dims: Vec<usize>,
    pub trials: u64,
    pub budget_cap: u64,
    pub targets: Targets,
    pub n_u: u64,
    pub seed: u64,
}

impl ScalingParams {
    pub fn validate(&self) -> anyhow::Result<()> {
        ensure!(!self.protocols.is_empty(), "need at least one protocol");
        ensure!(self.dims.len() >= 3, "need at least three values of d, got {}", self.dims.len());
        for &d in &self.dims {
            check_square(d)?;
        }
        let (lo, hi) = (self.dims.iter().min().unwrap(), self.dims.iter().max().unwrap());
        ensure!(hi / lo >= 4, "d values must span at least two octaves");
        ensure!(self.n_u >= 1, "N_U must be at least 1");
        Ok(())
    }
}

/// Fitted exponent of one protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingFit {
    pub protocol: ProtocolId,
    /// `(slope, stderr)` when at least three points were attained.
    pub fit: Option<(f64, f64)>,
    pub n_points: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingResult {
    pub points: Vec<(ProtocolId, ScalingPoint)>,
    pub fits: Vec<ScalingFit>,
}

impl ScalingResult {
    pub fn slope(&self, protocol: ProtocolId) -> Option<f64> {
        self.fits
            .iter()
            .find(|f| f.protocol == protocol)
            .and_then(|f| f.fit.map(|(s, _)| s))
    }
}

/// Minimal budgets per protocol and `d` on `pi*_{d,1}`, and log-log fits.
pub fn scaling<R: TrialRunner>(p: &ScalingParams, runner: &R) -> anyhow::Result<ScalingResult> {
    p.validate()?;
    let cfg = SearchConfig {
        targets: p.targets,
        budget_cap: p.budget_cap,
    };
    let mut points = Vec::new();
    let mut fits = Vec::new();
    for &protocol in &p.protocols {
        let mut own = Vec::new();
        for &d in &p.dims {
            let ensemble = Ensemble::Bipartite(PiStar::new(d, 1)?);
            let mut probe = ProtocolProbe::new(ensemble, protocol, p.trials, p.seed, runner);
            probe.n_u = p.n_u;
            let pt = find_min_budget(d, &probe, &cfg)
                .with_context(|| format!("{} at d = {d}", protocol.as_str()))?;
            own.push(pt);
        }
        let n_points = own.iter().filter(|pt| pt.attained()).count();
        fits.push(ScalingFit {
            protocol,
            fit: fit_scaling_exponent(&own).ok(),
            n_points,
        });
        points.extend(own.into_iter().map(|pt| (protocol, pt)));
    }
    Ok(ScalingResult { points, fits })
}

const SCALING_COLUMNS: &[&str] = &[
    "row",
    "protocol",
    "d",
    "budget",
    "param",
    "attained",
    "completeness",
    "completeness_ci_lo",
    "soundness",
    "soundness_ci_lo",
    "slope",
    "stderr",
    "n_fit",
    "message",
];

/// Summary table (points, fits, warnings) and the full probe log.
pub fn scaling_tables(r: &ScalingResult) -> (Table, Table) {
    let mut summary = Table::new("scaling", SCALING_COLUMNS);
    for (protocol, pt) in &r.points {
        let s = pt.stats;
        summary.push(vec![
            "point".into(),
            protocol.as_str().into(),
            pt.d.into(),
            pt.budget.into(),
            pt.param.into(),
            pt.attained().into(),
            s.map(|s| s.completeness).into(),
            s.map(|s| s.completeness_ci.0).into(),
            s.and_then(|s| s.soundness).into(),
            s.and_then(|s| s.soundness_ci.map(|c| c.0)).into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    for f in &r.fits {
        summary.push(vec![
            "fit".into(),
            f.protocol.as_str().into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            f.fit.map(|x| x.0).into(),
            f.fit.map(|x| x.1).into(),
            f.n_points.into(),
            Cell::Empty,
        ]);
    }
    for (protocol, pt) in r.points.iter().filter(|(_, pt)| !pt.attained()) {
        summary.push(warning_row(
            *protocol,
            Some(pt.d),
            "targets not met within the budget cap; excluded from fit",
        ));
    }
    for f in r.fits.iter().filter(|f| f.fit.is_none()) {
        summary.push(warning_row(
            f.protocol,
            None,
            "fewer than three attained points spanning two octaves; no fit",
        ));
    }

    let mut probes = Table::new(
        "scaling_probes",
        &[
            "protocol",
            "d",
            "param",
            "budget",
            "completeness",
            "completeness_ci_lo",
            "soundness",
            "soundness_ci_lo",
            "passed",
        ],
    );
    for (protocol, pt) in &r.points {
        for pr in &pt.probes {
            probes.push(vec![
                protocol.as_str().into(),
                pt.d.into(),
                pr.param.into(),
                pr.budget.into(),
                pr.stats.completeness.into(),
                pr.stats.completeness_ci.0.into(),
                pr.stats.soundness.into(),
                pr.stats.soundness_ci.map(|c| c.0).into(),
                pr.passed.into(),
            ]);
        }
    }
    (summary, probes)
}

fn warning_row(protocol: ProtocolId, d: Option<usize>, msg: &str) -> Vec<Cell> {
    let mut row = vec![Cell::Empty; SCALING_COLUMNS.len()];
    row[0] = "warning".into();
    row[1] = protocol.as_str().into();
    row[2] = d.into();
    row[13] = msg.into();
    row
}

/// Parameters of the closed-form bound grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundsParams {
    pub variant: Variant,
    pub dims: Vec<usize>,
    pub t_min: usize,
    pub t_max: usize,
}

pub fn bounds(p: &BoundsParams) -> anyhow::Result<Table> {
    ensure!(!p.dims.is_empty(), "need at least one d");
    ensure!(p.t_min >= 1 && p.t_min <= p.t_max, "need 1 <= t-min <= t-max");
    let mut table = Table::new(
        "bounds",
        &["variant", "d", "k", "K", "T", "tv", "le_cam", "min_copies"],
    );
    for &d in &p.dims {
        for t in p.t_min..=p.t_max {
            let r = tv_upper_bound(d, t, p.variant)?;
            table.push(vec![
                p.variant.name().into(),
                d.into(),
                r.k.into(),
                r.parts.into(),
                t.into(),
                r.tv.into(),
                r.le_cam.into(),
                min_copies_lower_bound(d, p.variant)?.into(),
            ]);
        }
    }
    Ok(table)
}

/// Oracle suites run by `verify`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    HaarMoment,
    ProductLemma,
    Twirl,
    SwapMoments,
    PagePurity,
    Estimator,
}

impl Suite {
    /// Suites selected by `all`.
    pub const DEFAULT: [Suite; 4] = [
        Suite::HaarMoment,
        Suite::ProductLemma,
        Suite::Twirl,
        Suite::SwapMoments,
    ];
    pub const EVERY: [Suite; 6] = [
        Suite::HaarMoment,
        Suite::ProductLemma,
        Suite::Twirl,
        Suite::SwapMoments,
        Suite::PagePurity,
        Suite::Estimator,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::HaarMoment => "haar-moment",
            Suite::ProductLemma => "product-lemma",
            Suite::Twirl => "twirl",
            Suite::SwapMoments => "swap-moments",
            Suite::PagePurity => "page-purity",
            Suite::Estimator => "estimator",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        Self::EVERY.into_iter().find(|x| x.as_str() == norm)
    }

    fn tag(self) -> u64 {
        Self::EVERY.iter().position(|&x| x == self).unwrap() as u64 + 1
    }
}

/// Parses a comma-separated suite list; `all` expands to the default suites.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>, String> {
    let mut out = Vec::new();
    for name in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        if name.eq_ignore_ascii_case("all") {
            out.extend(Suite::DEFAULT);
        } else {
            out.push(Suite::parse(name).ok_or_else(|| format!("unknown suite {name:?}"))?);
        }
    }
    if out.is_empty() {
        return Err("no suite selected".into());
    }
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyParams {
    pub suites: Vec<Suite>,
    pub d: Option<usize>,
    pub t: Option<usize>,
    pub samples: Option<u64>,
    pub seed: u64,
}

/// How a check row decides pass or fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// `score <= limit`
    AtMost,
    /// `score >= limit`
    AtLeast,
    /// Reported only.
    Info,
}

impl Rule {
    fn as_str(self) -> &'static str {
        match self {
            Rule::AtMost => "<=",
            Rule::AtLeast => ">=",
            Rule::Info => "info",
        }
    }
}

/// One verified statistic.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckRow {
    pub suite: Suite,
    pub case: String,
    pub statistic: &'static str,
    pub observed: f64,
    pub expected: f64,
    pub score: f64,
    pub rule: Rule,
    pub limit: f64,
}

impl CheckRow {
    pub fn pass(&self) -> Option<bool> {
        match self.rule {
            Rule::AtMost => Some(self.score <= self.limit),
            Rule::AtLeast => Some(self.score >= self.limit),
            Rule::Info => None,
        }
    }

    fn z(suite: Suite, case: &str, statistic: &'static str, m: &MomentCheck) -> Self {
        Self {
            suite,
            case: case.to_owned(),
            statistic,
            observed: m.observed,
            expected: m.expected,
            score: m.z_score(),
            rule: Rule::AtMost,
            limit: SIGMAS,
        }
    }
}

/// Acceptance gate for Monte Carlo moments, in standard errors.
pub const SIGMAS: f64 = 4.0;

/// Work item of the verify command.
#[derive(Clone, Copy, Debug)]
enum Case {
    Haar { d: usize, t: usize, n: u64 },
    Product { d: usize, t: usize, n: u64, variant: LemmaVariant },
    Twirl { d_a: usize, n: u64 },
    Swap { d: usize, n: u64 },
    Page { d: usize, n: u64 },
    Bell { runs: u64 },
    Variance { runs: u64 },
}

fn cases(p: &VerifyParams) -> Vec<(Suite, Case)> {
    let mut out = Vec::new();
    for &suite in &p.suites {
        match suite {
            Suite::HaarMoment => {
                let n = p.samples.unwrap_or(1_000_000);
                let list = match (p.d, p.t) {
                    (None, None) => vec![(2, 2), (3, 3)],
                    (d, t) => vec![(d.unwrap_or(2), t.unwrap_or(2))],
                };
                out.extend(list.into_iter().map(|(d, t)| (suite, Case::Haar { d, t, n })));
            }
            Suite::ProductLemma => {
                let n = p.samples.unwrap_or(1000);
                let list = match (p.d, p.t) {
                    (None, None) => vec![
                        (4, 2, LemmaVariant::Pure),
                        (4, 3, LemmaVariant::Pure),
                        (4, 2, LemmaVariant::MixedSingle { k: 2 }),
                        (4, 2, LemmaVariant::MixedDouble { k: 4 }),
                    ],
                    (d, t) => {
                        let (d, t) = (d.unwrap_or(4), t.unwrap_or(2));
                        vec![(d, t, LemmaVariant::Pure), (d, t, LemmaVariant::MixedSingle { k: 2 })]
                    }
                };
                out.extend(
                    list.into_iter()
                        .map(|(d, t, variant)| (suite, Case::Product { d, t, n, variant })),
                );
            }
            Suite::Twirl => {
                let n = p.samples.unwrap_or(100_000);
                let list = p.d.map_or(vec![2, 3], |d| vec![d]);
                out.extend(list.into_iter().map(|d_a| (suite, Case::Twirl { d_a, n })));
            }
            Suite::SwapMoments => {
                let n = p.samples.unwrap_or(100_000);
                let list = p.d.map_or(vec![4, 16, 64], |d| vec![d]);
                out.extend(list.into_iter().map(|d| (suite, Case::Swap { d, n })));
            }
            Suite::PagePurity => {
                let n = p.samples.unwrap_or(100_000);
                let list = p.d.map_or(vec![16, 64, 256], |d| vec![d]);
                out.extend(list.into_iter().map(|d| (suite, Case::Page { d, n })));
            }
            Suite::Estimator => {
                out.push((suite, Case::Bell { runs: p.samples.unwrap_or(1000) }));
                out.push((suite, Case::Variance { runs: p.samples.unwrap_or(10_000) }));
            }
        }
    }
    out
}

/// Largest entrywise deviation allowed for the Haar moment check.
pub fn haar_tolerance(t: usize, n: u64) -> f64 {
    5e-3 * (t.saturating_sub(1).max(1)) as f64 * (1e6 / n as f64).sqrt()
}

/// Largest entrywise deviation allowed for twirl identity (i).
pub fn twirl_tolerance(n: u64) -> f64 {
    0.05 * (1e5 / n as f64).sqrt().max(1.0)
}

/// Grid of the estimator variance check.
pub const VARIANCE_D_A: [usize; 4] = [2, 4, 8, 16];
pub const VARIANCE_N_M: [u64; 5] = [2, 4, 8, 16, 32];
pub const VARIANCE_N_U: u64 = 4;
pub const VARIANCE_LIMIT: f64 = 10.0;

fn run_case(suite: Suite, case: Case, rng: &mut RngStream) -> anyhow::Result<Vec<CheckRow>> {
    let row = |case: String, statistic, observed: f64, expected: f64, score, rule, limit| CheckRow {
        suite,
        case,
        statistic,
        observed,
        expected,
        score,
        rule,
        limit,
    };
    Ok(match case {
        Case::Haar { d, t, n } => {
            let dev = check_haar_moment_lemma(d, t, n, rng)?;
            vec![row(
                format!("d={d},T={t},n={n}"),
                "max_entry_deviation",
                dev,
                0.0,
                dev,
                Rule::AtMost,
                haar_tolerance(t, n),
            )]
        }
        Case::Product { d, t, n, variant } => {
            let r = check_product_state_lemma(d, t, n, variant, rng)?;
            let name = match variant {
                LemmaVariant::Pure => format!("PURE,d={d},T={t}"),
                LemmaVariant::MixedSingle { k } | LemmaVariant::MixedDouble { k } => {
                    format!("{},d={d},k={k},T={t}", variant.name())
                }
            };
            let mut rows = vec![row(
                name.clone(),
                "min_value",
                r.min,
                r.bound,
                r.min - r.bound,
                Rule::AtLeast,
                -1e-8,
            )];
            if let Some(gap) = r.route_gap {
                rows.push(row(name, "route_gap", gap, 0.0, gap, Rule::AtMost, 1e-9));
            }
            rows
        }
        Case::Twirl { d_a, n } => {
            let r = check_twirl_identities(d_a, n, rng)?;
            let case = format!("d_A={d_a},n={n}");
            vec![
                row(
                    case.clone(),
                    "swap_max_deviation",
                    r.swap_max_dev,
                    0.0,
                    r.swap_max_dev,
                    Rule::AtMost,
                    twirl_tolerance(n),
                ),
                CheckRow::z(suite, &case, "second_moment", &r.second_moment),
                CheckRow::z(suite, &case, "estimator_mean", &r.estimator_mean),
            ]
        }
        Case::Swap { d, n } => {
            let r = check_swap_moments(d, n, rng)?;
            let case = format!("d={d},n={n}");
            vec![
                CheckRow::z(suite, &case, "mean", &r.mean),
                CheckRow::z(suite, &case, "variance", &r.variance),
            ]
        }
        Case::Page { d, n } => {
            let r = check_page_purity(d, n, rng)?;
            let case = format!("d={d},n={n}");
            vec![
                CheckRow::z(suite, &case, "mean_vs_stated", &r.stated),
                CheckRow::z(suite, &case, "mean_vs_haar_moment", &r.haar_moment),
            ]
        }
        Case::Bell { runs } => {
            let rho = ComplexMatrix::from_real_diagonal(&[0.5, 0.5]);
            let m = check_estimator_mean(&rho, 200, 50, runs, rng)?;
            vec![CheckRow::z(suite, &format!("bell,N_U=200,N_M=50,runs={runs}"), "mean", &m)]
        }
        Case::Variance { runs } => {
            let r = check_variance_bound(&VARIANCE_D_A, &VARIANCE_N_M, VARIANCE_N_U, runs, rng)?;
            let case = format!("grid,N_U={VARIANCE_N_U},runs={runs}");
            let mut rows = vec![
                row(case.clone(), "c1", r.fit.c1, VARIANCE_LIMIT, r.fit.c1, Rule::AtMost, VARIANCE_LIMIT),
                row(case.clone(), "c2", r.fit.c2, VARIANCE_LIMIT, r.fit.c2, Rule::AtMost, VARIANCE_LIMIT),
                row(case.clone(), "minimax", r.fit.minimax, VARIANCE_LIMIT, r.fit.minimax, Rule::Info, VARIANCE_LIMIT),
            ];
            for (family, fit) in &r.family_fits {
                let c = format!("{case},family={}", family.as_str());
                rows.push(row(c.clone(), "c1", fit.c1, VARIANCE_LIMIT, fit.c1, Rule::Info, VARIANCE_LIMIT));
                rows.push(row(c, "c2", fit.c2, VARIANCE_LIMIT, fit.c2, Rule::Info, VARIANCE_LIMIT));
            }
            rows
        }
    })
}

/// Runs the selected suites; cases run concurrently on separate streams.
pub fn verify<R: TrialRunner>(p: &VerifyParams, runner: &R) -> anyhow::Result<Vec<CheckRow>> {
    ensure!(!p.suites.is_empty(), "no suite selected");
    let list = cases(p);
    let results = runner.run(list.len() as u64, |i| {
        let (suite, case) = list[i as usize];
        let mut rng = RngStream::derive(p.seed, &[VERIFY_DOMAIN, suite.tag(), i]);
        run_case(suite, case, &mut rng)
    });
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn verify_table(rows: &[CheckRow]) -> Table {
    let mut t = Table::new(
        "verify",
        &["suite", "case", "statistic", "observed", "expected", "score", "rule", "limit", "pass"],
    );
    for r in rows {
        t.push(vec![
            r.suite.as_str().into(),
            r.case.clone().into(),
            r.statistic.into(),
            r.observed.into(),
            r.expected.into(),
            r.score.into(),
            r.rule.as_str().into(),
            r.limit.into(),
            r.pass().into(),
        ]);
    }
    t
}

/// True when no decided row failed.
pub fn all_passed(rows: &[CheckRow]) -> bool {
    rows.iter().all(|r| r.pass() != Some(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use edplab_core::runner::Sequential;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EVERY {
            assert_eq!(Suite::parse(s.as_str()), Some(s));
        }
        assert_eq!(parse_suites("all").unwrap(), Suite::DEFAULT.to_vec());
        assert_eq!(parse_suites("twirl, SWAP_MOMENTS").unwrap(), vec![Suite::Twirl, Suite::SwapMoments]);
        assert!(parse_suites("bogus").is_err());
        assert!(parse_suites("").is_err());
    }

    #[test]
    fn fig2_rejects_bad_dimensions() {
        let p = Fig2Params {
            dims: vec![8],
            samples: 10,
            seed: 0,
        };
        assert!(fig2(&p, &Sequential).is_err());
        let p = Fig2Params {
            dims: vec![4],
            samples: 0,
            seed: 0,
        };
        assert!(fig2(&p, &Sequential).is_err());
    }

    #[test]
    fn fig2_chunks_sum_to_samples() {
        let p = Fig2Params {
            dims: vec![4],
            samples: 25_001,
            seed: 3,
        };
        let t = fig2(&p, &Sequential).unwrap();
        assert_eq!(t.rows[0][2], Cell::Int(25_001));
        assert_eq!(t.rows[0][7], Cell::Float(0.0625));
    }

    #[test]
    fn scaling_preconditions() {
        let p = ScalingParams {
            protocols: vec![ProtocolId::SwapTest],
            dims: vec![16, 64],
            trials: 2000,
            budget_cap: 1000,
            targets: Targets::default(),
            n_u: 20,
            seed: 0,
        };
        assert!(scaling(&p, &Sequential).is_err());
    }

    #[test]
    fn bounds_first_row_is_zero() {
        let p = BoundsParams {
            variant: Variant::PureBipartite,
            dims: vec![16],
            t_min: 1,
            t_max: 8,
        };
        let t = bounds(&p).unwrap();
        assert_eq!(t.rows.len(), 8);
        assert_eq!(t.rows[0][5], Cell::Float(0.0));
    }

    #[test]
    fn verify_swap_moments_small() {
        let p = VerifyParams {
            suites: vec![Suite::SwapMoments],
            d: Some(4),
            t: None,
            samples: Some(20_000),
            seed: 1,
        };
        let rows = verify(&p, &Sequential).unwrap();
        assert_eq!(rows.len(), 2);
        assert!((rows[0].expected - 0.5).abs() < 1e-15);
        assert!(all_passed(&rows), "{rows:?}");
    }
}
