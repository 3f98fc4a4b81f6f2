//! The `odeblowup` command line.
//!
//! Exit codes: 0 for success and for trivial or no-blowup verdicts, 1 for
//! unreadable or invalid input, 2 for a blowup verdict, 3 when the
//! criterion does not apply or no verdict could be reached, 4 when a solver
//! or spike search fails. Every failure prints one line starting with a
//! code such as `E_PARSE` to standard error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::analyzer::{classify_scalar, classify_system, AnalyzeError, Verdict};
use crate::arith::{ComplexBox, Dyadic, GaussianRational};
use crate::lif::{simulate_lif, spike_train, LifError, SpikeReport, SpikeStatus};
use crate::profiler::{fit_scaling, run_profile, write_csv, Problem};
use crate::signal::Signal;
use crate::solver::{deflation_chain, solve_cascade, solve_system, Backend, SolutionQuery, SolveError};
use crate::specfile::{load_spec, Model, SpecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BLOWUP: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "odeblowup", version, about = "Blowup criteria and certified enclosures for linear ODEs")]
pub struct Cli {
    /// Model file (`.ode`).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Also write machine-readable rows to this file.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Suppress the report on standard output.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide the blowup criterion.
    Analyze,
    /// Enclose the solution at time t.
    Solve {
        /// Exact dyadic time in [0, 1]: `3/8`, `3/2^3`, `0.375`.
        #[arg(long, value_parser = parse_time)]
        t: Dyadic,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        bits: u32,
    },
    /// Print the root-deflation chain of P_y.
    Reduce {
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..))]
        bits: u32,
    },
    /// System criterion together with the literal P_y evaluation.
    SystemAnalyze,
    /// Certified spike times of a LIF neuron.
    Lif {
        /// Replaces the threshold from the file.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        theta: Option<GaussianRational>,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
        bits: u32,
    },
    /// Work counters across a range of accuracies.
    Profile {
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        bits_from: u32,
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..))]
        bits_to: u32,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        step: u32,
        #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
        backend: BackendArg,
        #[arg(long, default_value = "1", value_parser = parse_time)]
        t: Dyadic,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Auto,
    ClosedForm,
    Quadrature,
}

impl BackendArg {
    fn backend(self) -> Option<Backend> {
        match self {
            BackendArg::Auto => None,
            BackendArg::ClosedForm => Some(Backend::ClosedForm),
            BackendArg::Quadrature => Some(Backend::Quadrature),
        }
    }
}

fn parse_rational(s: &str) -> Result<GaussianRational, String> {
    s.parse().map_err(|e: crate::arith::ParseGaussianError| e.to_string())
}

/// `p/2^k`, or any rational or decimal literal whose value is a dyadic.
pub fn parse_time(s: &str) -> Result<Dyadic, String> {
    let s = s.trim();
    if let Some((p, k)) = s.split_once("/2^") {
        let p: i64 = p.trim().parse().map_err(|_| format!("invalid numerator in `{s}`"))?;
        let k: i64 = k.trim().parse().map_err(|_| format!("invalid exponent in `{s}`"))?;
        return Ok(Dyadic::from_i64(p).shl(-k));
    }
    let q = parse_rational(s)?;
    if !q.is_real() {
        return Err(format!("`{s}` is not real"));
    }
    Dyadic::from_rational_exact(q.re()).ok_or_else(|| format!("`{s}` is not exactly representable as a dyadic"))
}

/// Exact decimal expansion of a dyadic.
fn exact_decimal(d: &Dyadic) -> String {
    let digits = u32::try_from(-d.exponent()).unwrap_or(0);
    let s = d.to_decimal(digits, false);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn format_box(b: &ComplexBox) -> String {
    let re = format!("[{}, {}]", exact_decimal(b.re().lo()), exact_decimal(b.re().hi()));
    if b.im().is_point() && b.im().lo().is_zero() {
        re
    } else {
        format!("{re} + i[{}, {}]", exact_decimal(b.im().lo()), exact_decimal(b.im().hi()))
    }
}

/// Failure carrying the exit code and the single-line report.
struct Failure {
    exit: i32,
    code: &'static str,
    message: String,
}

impl Failure {
    fn input(code: &'static str, message: impl ToString) -> Self {
        Failure {
            exit: EXIT_INPUT,
            code,
            message: message.to_string(),
        }
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::input(e.code(), e)
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        let code = match e {
            SolveError::QuadratureBudgetExceeded { .. } => "E_BUDGET",
            SolveError::InvalidQuery => "E_USAGE",
            SolveError::DerivativeOrderUnavailable { .. } | SolveError::MissingSmoothnessBound => "E_ORDER",
            SolveError::UnsupportedOrder { .. } => "E_UNSUPPORTED",
            _ => "E_SOLVE",
        };
        let exit = if code == "E_USAGE" { EXIT_INPUT } else { EXIT_SOLVER };
        Failure {
            exit,
            code,
            message: e.to_string(),
        }
    }
}

impl From<LifError> for Failure {
    fn from(e: LifError) -> Self {
        match e {
            LifError::Solve(s) => s.into(),
            LifError::Model(_) => Failure::input("E_VALIDATE", e),
            LifError::BudgetExceeded { .. } => Failure {
                exit: EXIT_SOLVER,
                code: "E_BUDGET",
                message: e.to_string(),
            },
        }
    }
}

impl From<AnalyzeError> for Failure {
    fn from(e: AnalyzeError) -> Self {
        let code = match e {
            AnalyzeError::UnsupportedOrder(_) => "E_UNSUPPORTED",
            _ => "E_ANALYZE",
        };
        Failure {
            exit: EXIT_UNDECIDED,
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::input("E_IO", e)
    }
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    quiet: bool,
    csv: Option<PathBuf>,
}

impl Ctx<'_> {
    fn say(&mut self, line: impl AsRef<str>) -> io::Result<()> {
        if !self.quiet {
            writeln!(self.out, "{}", line.as_ref())?;
        }
        Ok(())
    }

    fn csv_file(&self) -> Result<Option<File>, Failure> {
        self.csv.as_ref().map(File::create).transpose().map_err(Failure::from)
    }
}

/// Run with explicit arguments (including the program name) and streams;
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            let _ = writeln!(err, "E_USAGE {first}");
            let _ = write!(err, "{text}");
            return EXIT_INPUT;
        }
    };
    let mut ctx = Ctx {
        out,
        quiet: cli.quiet,
        csv: cli.csv.clone(),
    };
    match dispatch(&cli, &mut ctx) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{} {}", f.code, f.message);
            f.exit
        }
    }
}

fn dispatch(cli: &Cli, ctx: &mut Ctx<'_>) -> Result<i32, Failure> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| Failure::input("E_USAGE", "--input <path> is required"))?;
    let model = load_spec(path)?;
    match &cli.command {
        Command::Analyze => cmd_analyze(&model, ctx),
        Command::SystemAnalyze => cmd_system_analyze(&model, ctx),
        Command::Solve { t, bits } => cmd_solve(&model, t, *bits, ctx),
        Command::Reduce { bits } => cmd_reduce(&model, *bits, ctx),
        Command::Lif { theta, bits } => cmd_lif(&model, theta.as_ref(), *bits, ctx),
        Command::Profile {
            bits_from,
            bits_to,
            step,
            backend,
            t,
        } => {
            if bits_from > bits_to {
                return Err(Failure::input("E_USAGE", "--bits-from exceeds --bits-to"));
            }
            let bits: Vec<u32> = (*bits_from..=*bits_to).step_by(*step as usize).collect();
            cmd_profile(&model, t, &bits, backend.backend(), ctx)
        }
    }
}

fn wrong_kind(model: &Model, want: &str) -> Failure {
    Failure::input("E_VALIDATE", format!("this command needs a {want} model, the file holds [{}]", model.kind()))
}

fn report_verdict(v: &Verdict, ctx: &mut Ctx<'_>) -> Result<i32, Failure> {
    ctx.say(format!("verdict: {}", v.label()))?;
    match v {
        Verdict::TrivialNoBlowup { q } => ctx.say(format!("Q = {q}"))?,
        Verdict::Blowup {
            witness,
            needed,
            available,
            pu_at_minus_a0,
        } => {
            match witness.exact() {
                Some(z) => ctx.say(format!("witness: {z}"))?,
                None => ctx.say(format!("witness: {}", format_box(witness.enclosure())))?,
            }
            ctx.say(format!("witness enclosure: {}", format_box(witness.enclosure())))?;
            ctx.say(format!("multiplicity in P_y: {needed}, in P_u: {available}"))?;
            if let Some(p) = pu_at_minus_a0 {
                ctx.say(format!("P_u(-a_0) = {p}"))?;
            }
        }
        Verdict::SystemBlowup { criterion, literal_py } | Verdict::SystemNoBlowupCandidate { criterion, literal_py } => {
            ctx.say(format!("criterion K = sum_j C_j (-M)^j = {criterion}"))?;
            ctx.say(format!("literal P_y(-A_1^-1 A_0) = {literal_py}"))?;
            if criterion.is_zero() != literal_py.is_zero() {
                ctx.say("flag: literal-py-criterion-mismatch")?;
            }
        }
        Verdict::CriterionNotApplicable { reason } | Verdict::Inconclusive { reason } => {
            ctx.say(format!("reason: {reason}"))?;
        }
    }
    Ok(v.exit_code())
}

fn cmd_analyze(model: &Model, ctx: &mut Ctx<'_>) -> Result<i32, Failure> {
    match model {
        Model::Scalar { ode, .. } => report_verdict(&classify_scalar(ode), ctx),
        _ => cmd_system_analyze(model, ctx),
    }
}

fn cmd_system_analyze(model: &Model, ctx: &mut Ctx<'_>) -> Result<i32, Failure> {
    let sys = match model {
        Model::System { sys, .. } => sys.clone(),
        Model::Lif(cfg) => cfg.system(),
        Model::Scalar { .. } => return Err(wrong_kind(model, "[system] or [lif]")),
    };
    let v = classify_system(&sys)?;
    report_verdict(&v, ctx)
}

fn cmd_solve(model: &Model, t: &Dyadic, bits: u32, ctx: &mut Ctx<'_>) -> Result<i32, Failure> {
    let q = SolutionQuery::new(t.clone(), bits)?;
    let value = match model {
        Model::Scalar { ode, u } => solve_cascade(ode, u, &q)?.value,
        Model::System { sys, u } => solve_system(sys, u, &q)?.value,
        Model::Lif(cfg) => {
            let (v, i) = simulate_lif(cfg, t, bits)?;
            vec![v, i]
        }
    };
    for b in &value {
        ctx.say(format_box(b))?;
    }
    if let Some(mut f) = ctx.csv_file()? {
        writeln!(f, "component,re_lo,re_hi,im_lo,im_hi")?;
        for (k, b) in value.iter().enumerate() {
            writeln!(
                f,
                "{k},{},{},{},{}",
                exact_decimal(b.re().lo()),
                exact_decimal(b.re().hi()),
                exact_decimal(b.im().lo()),
                exact_decimal(b.im().hi())
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_reduce(model: &Model, bits: u32, ctx: &mut Ctx<'_>) -> Result<i32, Failure> {
    let Model::Scalar { ode, .. } = model else {
        return Err(wrong_kind(model, "[ode]"));
    };
    ctx.say(format!("P_y = {}", ode.char_polys().0))?;
    for (k, step) in deflation_chain(ode, bits)?.iter().enumerate() {
        let sigma = match &step.sigma_exact {
            Some(s) => s.to_string(),
            None => format_box(&step.sigma),
        };
        let reduced = match &step.reduced_exact {
            Some(p) => p.to_string(),
            None => {
                let cs: Vec<String> = step.reduced.coeffs.iter().map(format_box).collect();
                format!("coefficients (ascending) {}", cs.join(", "))
            }
        };
        ctx.say(format!("sigma_{} = {sigma}; reduced = {reduced}", k + 1))?;
    }
    Ok(EXIT_OK)
}

fn cmd_lif(model: &Model, theta: Option<&GaussianRational>, bits: u32, ctx: &mut Ctx<'_>) -> Result<i32, Failure> {
    let Model::Lif(cfg) = model else {
        return Err(wrong_kind(model, "[lif]"));
    };
    let cfg = match theta {
        Some(th) => cfg.with_theta(th.clone()).map_err(|e| Failure::input("E_VALIDATE", e))?,
        None => cfg.clone(),
    };
    let mut reports = spike_train(&cfg, bits)?;
    if reports.is_empty() {
        reports.push(SpikeReport {
            status: SpikeStatus::NoCrossing,
        });
    }
    let header = "t_lo,t_hi,status";
    ctx.say(header)?;
    for r in &reports {
        ctx.say(r.csv_row())?;
    }
    if let Some(mut f) = ctx.csv_file()? {
        writeln!(f, "{header}")?;
        for r in &reports {
            writeln!(f, "{}", r.csv_row())?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_profile(model: &Model, t: &Dyadic, bits: &[u32], backend: Option<Backend>, ctx: &mut Ctx<'_>) -> Result<i32, Failure> {
    let problem = match model {
        Model::Scalar { ode, u } => Problem::Scalar {
            ode: ode.clone(),
            u: u.clone(),
        },
        Model::System { sys, u } => Problem::System {
            sys: sys.clone(),
            u: u.clone(),
        },
        Model::Lif(cfg) => Problem::System {
            sys: cfg.system(),
            u: vec![Signal::zero(), cfg.input().clone()],
        },
    };
    let rows = run_profile(&problem, t, bits, backend);
    match ctx.csv_file()? {
        Some(f) => write_csv(&rows, f)?,
        None if !ctx.quiet => write_csv(&rows, &mut *ctx.out)?,
        None => {}
    }
    if ctx.csv.is_some() {
        match fit_scaling(&rows) {
            Ok(fit) => ctx.say(format!(
                "fit: {} (degree {:.3}, residual {:.4}; base {:.4}, residual {:.4})",
                fit.class, fit.degree, fit.poly_residual, fit.base, fit.exp_residual
            ))?,
            Err(e) => ctx.say(format!("fit skipped: {e}"))?,
        }
    }
    Ok(if rows.iter().all(|r| r.is_ok()) { EXIT_OK } else { EXIT_SOLVER })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_literals() {
        assert_eq!(parse_time("3/2^3").unwrap(), Dyadic::from_i64(3).shl(-3));
        assert_eq!(parse_time("0.375").unwrap(), Dyadic::from_i64(3).shl(-3));
        assert_eq!(parse_time("3/8").unwrap(), Dyadic::from_i64(3).shl(-3));
        assert_eq!(parse_time("1").unwrap(), Dyadic::one());
        assert!(parse_time("0.1").is_err());
        assert!(parse_time("1/3").is_err());
        assert!(parse_time("i").is_err());
    }

    #[test]
    fn exact_decimals() {
        assert_eq!(exact_decimal(&Dyadic::from_i64(3).shl(-3)), "0.375");
        assert_eq!(exact_decimal(&Dyadic::from_i64(-5)), "-5");
        assert_eq!(exact_decimal(&Dyadic::zero()), "0");
    }

    #[test]
    fn usage_errors() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["odeblowup", "solve", "--t", "1"], &mut out, &mut err), EXIT_INPUT);
        assert!(String::from_utf8(err).unwrap().starts_with("E_USAGE"));
        let mut err = Vec::new();
        assert_eq!(run(["odeblowup", "analyze"], &mut out, &mut err), EXIT_INPUT);
        assert!(String::from_utf8(err).unwrap().starts_with("E_USAGE"));
    }
}
