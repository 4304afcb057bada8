//! Command-line interface.

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, CommandFactory, Parser, Subcommand};
use edplab_core::analysis::{Targets, Variant};
use edplab_core::protocols::{ProtocolId, DEFAULT_N_U};
use edplab_core::runner::TrialRunner;

use crate::commands::{
    self, all_passed, parse_suites, BoundsParams, Fig2Params, ScalingParams, Suite, VerifyParams,
};
use crate::config::expand_config;
use crate::output::{write_table, Format, Metadata, Table};
use crate::parallel::Parallel;

/// Exit code of a run whose checks did not all pass, or that hit a runtime error.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code of a usage error.
pub const EXIT_USAGE: i32 = 2;

/// Comma-separated list of values.
#[derive(Clone, Debug, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: std::fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let items = s
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<T>().map_err(|e| format!("{x:?}: {e}")))
            .collect::<Result<Vec<T>, String>>()?;
        if items.is_empty() {
            return Err("empty list".into());
        }
        Ok(List(items))
    }
}

impl<T: std::fmt::Display> std::fmt::Display for List<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

fn parse_protocol(s: &str) -> Result<ProtocolId, String> {
    ProtocolId::parse(s).ok_or_else(|| format!("unknown protocol {s:?}"))
}

fn parse_protocols(s: &str) -> Result<Vec<ProtocolId>, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(ProtocolId::ALL.to_vec());
    }
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(parse_protocol)
        .collect()
}

fn parse_targets(s: &str) -> Result<Targets, String> {
    let List(v) = s.parse::<List<f64>>()?;
    let [c, snd] = v[..] else {
        return Err("expected completeness,soundness".into());
    };
    Targets::new(c, snd).map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(
    name = "edplab",
    version,
    about = "Entanglement detection experiments on random states",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Master seed; every random stream derives from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// File of key=value lines supplying flags; command-line flags win.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Empirical detection rate of the swap criterion against its closed form.
    Fig2 {
        #[command(flatten)]
        common: Common,
        /// Total dimensions (perfect squares).
        #[arg(long, default_value = "4,16,64,256,1024")]
        d: List<usize>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Minimal budgets per protocol and dimension, with log-log exponent fits.
    Scaling {
        #[command(flatten)]
        common: Common,
        /// Comma-separated protocols, or `all`.
        #[arg(long, default_value = "all", value_parser = parse_protocols)]
        protocols: ::std::vec::Vec<ProtocolId>,
        #[arg(long, default_value = "16,64,256,1024")]
        d: List<usize>,
        /// Trials per probe (at least 2000).
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        #[arg(long, default_value_t = edplab_core::analysis::DEFAULT_BUDGET_CAP)]
        budget_cap: u64,
        /// Completeness and soundness targets.
        #[arg(long, default_value = "0.25,0.8333333333333334", value_parser = parse_targets)]
        targets: Targets,
        /// Unitaries per randomized-measurement run.
        #[arg(long, default_value_t = DEFAULT_N_U)]
        n_u: u64,
    },
    /// Closed-form total-variation and copy-number bounds.
    Bounds {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = VariantArg::PureBipartite)]
        variant: VariantArg,
        #[arg(long, default_value = "16,256,4096")]
        d: List<usize>,
        /// Environment dimension of the mixed variant.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Number of parties of the multipartite variant.
        #[arg(long, default_value_t = 3)]
        parts: usize,
        #[arg(long, default_value_t = 1)]
        t_min: usize,
        #[arg(long, default_value_t = 64)]
        t_max: usize,
    },
    /// Monte Carlo checks of the moment identities and lemmas.
    Verify {
        #[command(flatten)]
        common: Common,
        /// haar-moment, product-lemma, twirl, swap-moments, page-purity,
        /// estimator, or `all` (the first four).
        #[arg(long, default_value = "all", value_parser = parse_suites)]
        suite: ::std::vec::Vec<Suite>,
        #[arg(long)]
        d: Option<usize>,
        /// Number of copies for the moment and lemma suites.
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        samples: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum VariantArg {
    PureBipartite,
    Mixed,
    Multipartite,
}

/// A validated request, ready to run.
enum Plan {
    Fig2(Fig2Params),
    Scaling(ScalingParams),
    Bounds(BoundsParams),
    Verify(VerifyParams),
}

fn usage_error(msg: impl std::fmt::Display) -> clap::Error {
    Cli::command().error(clap::error::ErrorKind::ValueValidation, msg)
}

fn plan(cmd: &Command) -> Result<(Plan, Common, Metadata), clap::Error> {
    match cmd {
        Command::Fig2 { common, d, samples } => {
            let p = Fig2Params {
                dims: d.0.clone(),
                samples: *samples,
                seed: common.seed,
            };
            p.validate().map_err(usage_error)?;
            let mut m = Metadata::new("fig2", common.seed);
            m.param("d", d).param("samples", samples);
            Ok((Plan::Fig2(p), common.clone(), m))
        }
        Command::Scaling {
            common,
            protocols,
            d,
            trials,
            budget_cap,
            targets,
            n_u,
        } => {
            let mut protocols = protocols.clone();
            protocols.dedup();
            if *trials < edplab_core::analysis::MIN_TRIALS_PER_PROBE {
                return Err(usage_error(format!(
                    "--trials must be at least {}",
                    edplab_core::analysis::MIN_TRIALS_PER_PROBE
                )));
            }
            let p = ScalingParams {
                protocols,
                dims: d.0.clone(),
                trials: *trials,
                budget_cap: *budget_cap,
                targets: *targets,
                n_u: *n_u,
                seed: common.seed,
            };
            p.validate().map_err(usage_error)?;
            let names: Vec<&str> = p.protocols.iter().map(|x| x.as_str()).collect();
            let mut m = Metadata::new("scaling", common.seed);
            m.param("protocols", names.join(","))
                .param("d", d)
                .param("trials", trials)
                .param("budget_cap", budget_cap)
                .param("targets", format!("{},{}", targets.completeness, targets.soundness))
                .param("n_u", n_u)
                .note("targets are met when the 95% Wilson lower edge reaches them")
                .note("ensemble=pi*_{d,1}");
            Ok((Plan::Scaling(p), common.clone(), m))
        }
        Command::Bounds {
            common,
            variant,
            d,
            k,
            parts,
            t_min,
            t_max,
        } => {
            let v = match variant {
                VariantArg::PureBipartite => Variant::PureBipartite,
                VariantArg::Mixed => Variant::Mixed { k: *k },
                VariantArg::Multipartite => Variant::Multipartite { parts: *parts },
            };
            let p = BoundsParams {
                variant: v,
                dims: d.0.clone(),
                t_min: *t_min,
                t_max: *t_max,
            };
            // Surface domain errors before anything is written.
            commands::bounds(&p).map_err(usage_error)?;
            let mut m = Metadata::new("bounds", common.seed);
            m.param("variant", v.name())
                .param("d", d)
                .param("t_min", t_min)
                .param("t_max", t_max);
            match v {
                Variant::Mixed { k } => {
                    m.param("k", k);
                }
                Variant::Multipartite { parts } => {
                    m.param("parts", parts);
                }
                Variant::PureBipartite => {}
            }
            m.note("log=natural");
            Ok((Plan::Bounds(p), common.clone(), m))
        }
        Command::Verify {
            common,
            suite,
            d,
            t,
            samples,
        } => {
            if *samples == Some(0) {
                return Err(usage_error("--samples must be at least 1"));
            }
            let mut suites = suite.clone();
            suites.dedup();
            let p = VerifyParams {
                suites,
                d: *d,
                t: *t,
                samples: *samples,
                seed: common.seed,
            };
            let names: Vec<&str> = p.suites.iter().map(|s| s.as_str()).collect();
            let mut m = Metadata::new("verify", common.seed);
            m.param("suite", names.join(","));
            if let Some(d) = d {
                m.param("d", d);
            }
            if let Some(t) = t {
                m.param("t", t);
            }
            if let Some(n) = samples {
                m.param("samples", n);
            }
            Ok((Plan::Verify(p), common.clone(), m))
        }
    }
}

fn execute<R: TrialRunner>(plan: Plan, common: &Common, meta: &Metadata, runner: &R) -> anyhow::Result<bool> {
    let (tables, ok): (Vec<Table>, bool) = match plan {
        Plan::Fig2(p) => (vec![commands::fig2(&p, runner)?], true),
        Plan::Scaling(p) => {
            let r = commands::scaling(&p, runner)?;
            let (summary, probes) = commands::scaling_tables(&r);
            (vec![summary, probes], true)
        }
        Plan::Bounds(p) => (vec![commands::bounds(&p)?], true),
        Plan::Verify(p) => {
            let rows = commands::verify(&p, runner)?;
            let ok = all_passed(&rows);
            for r in rows.iter().filter(|r| r.pass() == Some(false)) {
                eprintln!(
                    "FAIL {} {} {}: score {} {} {}",
                    r.suite.as_str(),
                    r.case,
                    r.statistic,
                    r.score,
                    if matches!(r.rule, commands::Rule::AtLeast) { ">=" } else { "<=" },
                    r.limit
                );
            }
            (vec![commands::verify_table(&rows)], ok)
        }
    };
    for t in &tables {
        for path in write_table(&common.out, t, meta, common.format)? {
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(ok)
}

/// Parses `args` (including argv[0]), runs the command and returns the exit code.
pub fn run(args: Vec<OsString>) -> i32 {
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let (plan, common, meta) = match plan(&cli.command) {
        Ok(x) => x,
        Err(e) => {
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    let result = Parallel::from_env().and_then(|runner| execute(plan, &common, &meta, &runner));
    match result {
        Ok(true) => 0,
        Ok(false) => EXIT_FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_FAILURE
        }
    }
}
