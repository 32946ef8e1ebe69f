//! Command-line driver for the verification suites.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qlc::calculus::{build_calculus, mor_space, v_word, vv_word};
use qlc::group::{GroupSpec, Series, Sign};
use qlc::levi_civita::{bcd_printed_lambda, combine, solve_levi_civita};
use qlc::metric::build_metric;
use qlc::report::{metric_parameter_sets, parse_suites, run, Assignment, MetricMode, ReportError, RunConfig};
use qlc::scalar::ScalarContext;

#[derive(Parser)]
#[command(name = "qlc", version, about = "Exact checks of Levi-Civita connections on quantum group calculi")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and write a report.
    Verify(VerifyArgs),
    /// Solve for the Levi-Civita connection and print λ.
    Lc(LcArgs),
    /// Print the dimensions of the intertwiner spaces.
    Mor(SpecArgs),
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long)]
    series: Series,
    #[arg(long = "N")]
    n: usize,
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    sign: Sign,
}

impl SpecArgs {
    fn spec(&self) -> Result<GroupSpec, ReportError> {
        GroupSpec::new(self.series, self.n, self.sign).map_err(|e| ReportError::Config(e.to_string()))
    }
}

#[derive(Args)]
struct MetricArgs {
    #[arg(long, value_parser = ["symbolic", "sample"], default_value = "symbolic")]
    metric: String,
    /// Shorthand for `--metric symbolic`.
    #[arg(long, conflicts_with = "metric")]
    symbolic: bool,
    /// Fix a metric parameter, e.g. `alpha=3/2`; repeatable.
    #[arg(long)]
    assign: Vec<Assignment>,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

impl MetricArgs {
    fn apply(&self, c: &mut RunConfig) -> Result<(), ReportError> {
        c.metric = if self.symbolic { MetricMode::Symbolic } else { self.metric.parse()? };
        c.assign = self.assign.clone();
        c.seed = self.seed;
        Ok(())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    metric: MetricArgs,
    /// Comma-separated suites: all, sigma, mor, metric, lc, classical, rosso, starb.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Record runtimes as 0 so that reports are byte-identical.
    #[arg(long)]
    no_timings: bool,
}

#[derive(Args)]
struct LcArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    metric: MetricArgs,
}

fn verify(a: &VerifyArgs) -> Result<u8, ReportError> {
    let mut c = RunConfig::new(a.spec.spec()?);
    a.metric.apply(&mut c)?;
    c.suites = parse_suites(&a.suite)?;
    c.timings = !a.no_timings;
    let report = run(&c)?;
    let text = match a.format {
        Format::Json => report.to_json()?,
        Format::Md => report.to_markdown()?,
    };
    match &a.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    let s = &report.summary;
    eprintln!("{}: {} checks, {} pass, {} fail, {} error, {} skipped", c.spec, s.total, s.pass, s.fail, s.error, s.skipped);
    Ok(report.exit_code() as u8)
}

fn lc(a: &LcArgs) -> Result<u8, ReportError> {
    let mut c = RunConfig::new(a.spec.spec()?);
    a.metric.apply(&mut c)?;
    c.samples = 1;
    let calc = build_calculus(c.spec).map_err(|e| ReportError::Internal(e.to_string()))?;
    let p = metric_parameter_sets(&c, &calc)?.remove(0);
    let pair = build_metric(&calc.group, &p).map_err(|e| ReportError::Internal(e.to_string()))?;
    let names = ScalarContext::standard();
    match solve_levi_civita(&calc, &pair) {
        Ok(sol) => {
            println!("{}: unique Levi-Civita connection ({} equations, gauge dimension {})", c.spec, sol.equations, sol.gauge_dim);
            let solved = sol.conn.lambda.clone().unwrap_or_default();
            // Among gauge-equivalent λ, prefer the closed-form one when it gives the same D.
            let lam = match bcd_printed_lambda(&calc.group, &p) {
                Ok(pl) if combine(&sol.basis, &pl) == sol.conn.d => {
                    println!("λ in the closed-form representative:");
                    pl
                }
                _ => solved,
            };
            for (k, l) in lam.iter().enumerate() {
                println!("lambda{} = {}", k + 1, names.render(l));
            }
            Ok(0)
        }
        Err(e) => {
            println!("{}: {e}", c.spec);
            Ok(1)
        }
    }
}

fn mor(a: &SpecArgs) -> Result<u8, ReportError> {
    let spec = a.spec()?;
    let calc = build_calculus(spec).map_err(|e| ReportError::Internal(e.to_string()))?;
    println!("{spec}");
    println!("dim Mor(v⊗v, 1) = {}", mor_space(&calc, &vv_word(), &[]).dim());
    println!("dim BC = dim Mor(v, v⊗v) = {}", mor_space(&calc, &v_word(), &vv_word()).dim());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Lc(a) => lc(a),
        Command::Mor(a) => mor(a),
    };
    match out {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
