//! Command-line front end: `integrate`, `verify <check>` and `corpus`.
//!
//! Exit codes: 0 every report passed, 1 the input could not be parsed, 2 a hypothesis did
//! not hold (the check is reported as skipped), 3 a numeric failure (quadrature did not
//! converge, or a check ran and missed its tolerance).

pub mod instance;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use crate::expr::{parse, Expr};
use crate::fracint::{frac_int_h, FracOrder, MonotoneMap, OperatorSpec, Side};
use crate::hhf::corpus::{oracle_cases, oracle_check, CorpusFilter, ORACLE_CASES, ORACLE_SEED};
use crate::hhf::{
    bound_t1, bound_t2, bound_t3, hh_chain, identity_l1, identity_l2, timed, ChainMode, CheckConfig, CheckKind,
    CheckReport, CheckStatus, HhfError, ProblemInstance,
};
use crate::quad::{integrate_adaptive_with, AdaptiveConfig, GradedRule};
use crate::special::gamma;
use crate::Interval;

pub use instance::InstanceFile;
pub use output::{Format, Meta, QuadratureSettings, ReportBundle, CSV_COLUMNS};

#[derive(Debug, Parser)]
#[command(
    name = "hhfrac",
    version,
    about = "Fractional integrals with respect to a monotone map, and midpoint-inequality checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one fractional integral and compare it with the adaptive oracle
    Integrate,
    /// Run one check on one instance
    Verify {
        /// identity-l1, identity-l2, bound-t1, bound-t2, bound-t3, hh-chain, hh-classical,
        /// hh-fejer, hh-fractional or quad-oracle
        check: Option<String>,
        /// For hh-chain: classical, fejer or fractional
        mode: Option<String>,
    },
    /// Run the built-in verification grid
    Corpus,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Instance file (flat TOML); flags override its values
    #[arg(long, global = true, value_name = "PATH")]
    pub instance: Option<PathBuf>,
    #[arg(long = "f", global = true, allow_hyphen_values = true, value_name = "EXPR")]
    pub f: Option<String>,
    #[arg(long = "g", global = true, allow_hyphen_values = true, value_name = "EXPR")]
    pub g: Option<String>,
    #[arg(long = "h", global = true, allow_hyphen_values = true, value_name = "EXPR")]
    pub h: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub q: Option<f64>,
    #[arg(long = "a", global = true, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long = "b", global = true, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub at: Option<f64>,
    /// left or right
    #[arg(long, global = true)]
    pub side: Option<String>,
    #[arg(long, global = true)]
    pub check: Option<String>,
    /// Chain flavour for hh-chain
    #[arg(long, global = true)]
    pub mode: Option<String>,
    /// Replace every check tolerance by this value
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Corpus: keep checks whose name starts with NAME
    #[arg(long, global = true, value_name = "NAME")]
    pub filter: Option<String>,
    /// Evaluation budget for the adaptive oracle
    #[arg(long, global = true, value_name = "N")]
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitCode {
    Pass = 0,
    Parse = 1,
    Hypothesis = 2,
    Numeric = 3,
}

impl ExitCode {
    /// Code for a finished run: the worst report decides.
    pub fn for_reports(reports: &[CheckReport]) -> Self {
        reports
            .iter()
            .map(|r| match r.status {
                CheckStatus::Pass => ExitCode::Pass,
                CheckStatus::Skipped => ExitCode::Hypothesis,
                CheckStatus::Fail | CheckStatus::Error => ExitCode::Numeric,
            })
            .max()
            .unwrap_or(ExitCode::Pass)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: ExitCode,
    pub message: String,
}

impl CliError {
    fn parse(message: impl Into<String>) -> Self {
        Self { code: ExitCode::Parse, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CommandKind {
    Integrate,
    Verify { check: String, mode: Option<String> },
    Corpus,
}

/// Everything a run needs, after merging the instance file with the flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub instance: InstanceFile,
    pub instance_path: Option<PathBuf>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub filter: Option<String>,
    pub checks: CheckConfig,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let o = cli.opts;
        let file = match &o.instance {
            Some(p) => InstanceFile::load(p).map_err(CliError::parse)?,
            None => InstanceFile::default(),
        };
        let flags = InstanceFile {
            id: None,
            f: o.f,
            g: o.g,
            h: o.h,
            alpha: o.alpha,
            q: o.q,
            a: o.a,
            b: o.b,
            at: o.at,
            side: o.side,
            check: o.check,
            mode: o.mode,
            tol: o.tol,
            budget: o.budget,
        };
        let mut instance = file.overridden_by(flags);
        if instance.id.is_none() {
            instance.id = o.instance.as_ref().and_then(|p| p.file_stem()).map(|s| s.to_string_lossy().into_owned());
        }
        if let Some(t) = instance.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::parse(format!("tolerance must be positive, got {t}")));
            }
        }
        if instance.budget == Some(0) {
            return Err(CliError::parse("budget must be positive"));
        }
        let command = match cli.command {
            Command::Integrate => CommandKind::Integrate,
            Command::Corpus => CommandKind::Corpus,
            Command::Verify { check, mode } => {
                let check = check
                    .or_else(|| instance.check.clone())
                    .ok_or_else(|| CliError::parse("verify needs a check name"))?;
                CommandKind::Verify { check, mode: mode.or_else(|| instance.mode.clone()) }
            }
        };
        let mut checks = CheckConfig::default().with_tol(instance.tol);
        if let Some(b) = instance.budget {
            checks.budget = b;
        }
        Ok(Self {
            command,
            instance,
            instance_path: o.instance,
            format: o.format,
            out: o.out,
            filter: o.filter,
            checks,
        })
    }

    fn id(&self) -> String {
        self.instance.id.clone().unwrap_or_else(|| "cli".to_owned())
    }

    fn expr(&self, name: &str, text: Option<&String>, default: Option<&str>) -> Result<Expr, CliError> {
        let text = match (text, default) {
            (Some(t), _) => t.as_str(),
            (None, Some(d)) => d,
            (None, None) => return Err(CliError::parse(format!("missing --{name}"))),
        };
        parse(text).map_err(|e| {
            let caret = format!("{}^", " ".repeat(e.offset()));
            CliError::parse(format!("cannot parse {name}: {e}\n  {text}\n  {caret}"))
        })
    }

    fn number(&self, name: &str, v: Option<f64>) -> Result<f64, CliError> {
        v.ok_or_else(|| CliError::parse(format!("missing --{name}")))
    }

    fn interval(&self) -> Result<Interval, CliError> {
        let (a, b) = (self.number("a", self.instance.a)?, self.number("b", self.instance.b)?);
        Interval::new(a, b).map_err(|e| CliError::parse(e.to_string()))
    }
}

fn bundle(cfg: &RunConfig, command: &str, reports: Vec<CheckReport>) -> ReportBundle {
    let rule = GradedRule::new(1.0);
    let passed = reports.iter().filter(|r| r.pass).count();
    let meta = Meta {
        tool: "hhfrac".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        seed: ORACLE_SEED,
        quadrature: QuadratureSettings {
            graded_points: rule.points,
            graded_ratio: rule.ratio,
            graded_near_layers: rule.near_layers,
            graded_far_layers: rule.far_layers,
            oracle_budget: cfg.checks.budget,
        },
        tolerances: cfg.checks,
        passed,
        total: reports.len(),
    };
    ReportBundle { meta, reports }
}

/// Evaluates the operator given by the instance and cross-checks it with the adaptive oracle.
pub fn run_integrate(cfg: &RunConfig) -> Result<ReportBundle, CliError> {
    let f = cfg.expr("f", cfg.instance.f.as_ref(), None)?;
    let h = cfg.expr("h", cfg.instance.h.as_ref(), Some("x"))?;
    let iv = cfg.interval()?;
    let alpha = cfg.number("alpha", cfg.instance.alpha)?;
    let side: Side = cfg.instance.side.as_deref().unwrap_or("left").parse().map_err(CliError::parse)?;
    let at = cfg.instance.at.unwrap_or(match side {
        Side::Left => iv.b(),
        Side::Right => iv.a(),
    });
    let id = cfg.id();
    let description = format!("f = {f}, h = {h}, [a, b] = {iv}, alpha = {alpha}, side = {side}, at = {at}");
    let report = timed(&id, CheckKind::Integrate, description, |r| {
        let order = FracOrder::new(alpha)?;
        let map = MonotoneMap::validate(h.clone(), iv)?;
        r.hypothesis.monotone_h = Some(true);
        let spec = OperatorSpec::standard(side, order, map.clone(), at)?;
        let value = frac_int_h(&spec, &f, at)?;
        let oracle = operator_oracle(&spec, &f, at, cfg.checks.budget)?;
        let residual = (value - oracle.0).abs();
        r.piece("oracle_error_estimate", oracle.1);
        r.piece("oracle_evaluations", oracle.2 as f64);
        r.piece("at", at);
        r.lhs = Some(value);
        r.rhs = Some(oracle.0);
        r.residual = Some(residual);
        r.tol = cfg.checks.tol_override.unwrap_or(1e-8 * (1.0 + value.abs()));
        r.set_pass(residual <= r.tol);
        Ok(())
    });
    Ok(bundle(cfg, "integrate", vec![report]))
}

/// `(value, error estimate, evaluations)` of the operator by adaptive quadrature in `t`.
fn operator_oracle(spec: &OperatorSpec, f: &Expr, at: f64, budget: u64) -> Result<(f64, f64, u64), HhfError> {
    if spec.upper <= spec.lower {
        return Ok((0.0, 0.0, 0));
    }
    let alpha = spec.order.value();
    let map = &spec.map;
    let hx = map.eval(at)?;
    let adaptive = AdaptiveConfig { abs_tol: 1e-13, rel_tol: 1e-12, budget };
    let r = integrate_adaptive_with(
        |t| {
            let d = (hx - map.eval(t)?).abs();
            if d == 0.0 {
                return Ok(0.0);
            }
            Ok(d.powf(alpha - 1.0) * map.derivative(t)? * f.eval(t)?)
        },
        spec.lower,
        spec.upper,
        &adaptive,
    )?;
    let g = gamma(alpha);
    Ok((r.value / g, r.error_estimate / g, r.evaluations))
}

fn resolve_check(check: &str, mode: Option<&str>) -> Result<CheckKind, CliError> {
    if check == "hh-chain" {
        return match mode.unwrap_or("classical") {
            "classical" => Ok(CheckKind::HhClassical),
            "fejer" => Ok(CheckKind::HhFejer),
            "fractional" => Ok(CheckKind::HhFractional),
            other => {
                Err(CliError::parse(format!("unknown chain mode `{other}` (expected classical, fejer or fractional)")))
            }
        };
    }
    match check.parse::<CheckKind>().map_err(CliError::parse)? {
        CheckKind::Integrate => Err(CliError::parse("use the integrate command for single operator values")),
        kind => Ok(kind),
    }
}

/// Runs one check on the configured instance.
pub fn run_verify(cfg: &RunConfig) -> Result<ReportBundle, CliError> {
    let CommandKind::Verify { check, mode } = &cfg.command else {
        return Err(CliError::parse("not a verify run"));
    };
    let kind = resolve_check(check, mode.as_deref())?;
    let id = cfg.id();
    let reports = match kind {
        CheckKind::QuadOracle => {
            oracle_cases(ORACLE_SEED, ORACLE_CASES).iter().map(|c| oracle_check(c, &cfg.checks)).collect()
        }
        CheckKind::HhClassical | CheckKind::HhFejer | CheckKind::HhFractional => {
            let f = cfg.expr("f", cfg.instance.f.as_ref(), None)?;
            let iv = cfg.interval()?;
            let mode = match kind {
                CheckKind::HhClassical => Ok(ChainMode::Classical),
                CheckKind::HhFejer => Ok(ChainMode::Fejer(cfg.expr("g", cfg.instance.g.as_ref(), Some("1"))?)),
                _ => FracOrder::new(cfg.number("alpha", cfg.instance.alpha)?).map(ChainMode::Fractional),
            };
            match mode {
                Ok(mode) => vec![hh_chain(&id, &f, &iv, &mode, &cfg.checks)],
                Err(e) => vec![CheckReport::from_error(&id, kind, format!("f = {f}, [a, b] = {iv}"), &e.into())],
            }
        }
        _ => {
            let f = cfg.expr("f", cfg.instance.f.as_ref(), None)?;
            let g = cfg.expr("g", cfg.instance.g.as_ref(), Some("1"))?;
            let h = cfg.expr("h", cfg.instance.h.as_ref(), Some("x"))?;
            let iv = cfg.interval()?;
            let alpha = cfg.number("alpha", cfg.instance.alpha)?;
            let q = cfg.instance.q.unwrap_or(1.0);
            match ProblemInstance::from_parts(id.clone(), f.clone(), g.clone(), h.clone(), iv, alpha, q) {
                Ok(inst) => vec![match kind {
                    CheckKind::IdentityL1 => identity_l1(&inst, &cfg.checks),
                    CheckKind::IdentityL2 => identity_l2(&inst, &cfg.checks),
                    CheckKind::BoundT1 => bound_t1(&inst, &cfg.checks),
                    CheckKind::BoundT2 => bound_t2(&inst, &cfg.checks),
                    _ => bound_t3(&inst, &cfg.checks),
                }],
                Err(e) => {
                    let description = format!("f = {f}, g = {g}, h = {h}, [a, b] = {iv}, alpha = {alpha}, q = {q}");
                    vec![CheckReport::from_error(&id, kind, description, &e)]
                }
            }
        }
    };
    Ok(bundle(cfg, &format!("verify {kind}"), reports))
}

/// Runs the built-in grid, restricted by `--filter`, `--alpha` and `--q`.
pub fn run_corpus(cfg: &RunConfig) -> Result<ReportBundle, CliError> {
    let filter = CorpusFilter { check: cfg.filter.clone(), alpha: cfg.instance.alpha, q: cfg.instance.q };
    let reports = crate::hhf::corpus::run_corpus(&filter, &cfg.checks).map_err(|e| CliError {
        code: if e.is_hypothesis() { ExitCode::Hypothesis } else { ExitCode::Numeric },
        message: e.to_string(),
    })?;
    Ok(bundle(cfg, "corpus", reports))
}

/// Parses `args`, runs the command and writes output; returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let target: &mut dyn Write = if shown { stdout } else { stderr };
            let _ = write!(target, "{}", e.render());
            return if shown { 0 } else { ExitCode::Parse as i32 };
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|cfg| {
        let bundle = match cfg.command {
            CommandKind::Integrate => run_integrate(&cfg)?,
            CommandKind::Verify { .. } => run_verify(&cfg)?,
            CommandKind::Corpus => run_corpus(&cfg)?,
        };
        Ok((cfg, bundle))
    });
    let (cfg, bundle) = match result {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            return e.code as i32;
        }
    };
    let rendered = match bundle.render(cfg.format) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot render report: {e}");
            return ExitCode::Numeric as i32;
        }
    };
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return ExitCode::Numeric as i32;
            }
        }
        None => {
            let _ = stdout.write_all(rendered.as_bytes());
        }
    }
    for r in bundle.reports.iter().filter(|r| !r.pass && bundle.reports.len() == 1) {
        if let Some(m) = &r.message {
            let _ = writeln!(stderr, "{}: {m}", r.check);
        }
    }
    let _ = writeln!(stderr, "{}", bundle.summary());
    ExitCode::for_reports(&bundle.reports) as i32
}
