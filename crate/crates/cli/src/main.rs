//! `exactq` - run and verify exact quantum query algorithms for symmetric
//! Boolean functions from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use exactq::verify::{
    report_emit, sweep, sweep_all_specs, trace, ReportFormat, SweepFamily, SweepMode,
    SweepOptions, SweepReport, DEFAULT_EXHAUSTIVE_CAP,
};
use exactq::{BitString, SymmetricFunction};

#[derive(Parser)]
#[command(
    name = "exactq",
    version,
    about = "Verify exact quantum query algorithms for symmetric Boolean functions",
    long_about = "Simulates the quantum query model at the state-vector level, runs the \
                  exact algorithms for Hamming-weight-mod-m, EXACT(0,l), EXACT(1,n-1) and \
                  non-evasive symmetric functions on every input (or a seeded sample), and \
                  certifies correctness, exactness, and optimal query counts. Exit code 0 \
                  iff every sweep passes."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify one algorithm family against brute-force evaluation
    Verify {
        #[command(subcommand)]
        family: VerifyFamily,
    },
    /// Run the whole verification battery for every family up to --max-n
    SweepAll {
        /// Largest input length to cover
        #[arg(long)]
        max_n: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the step-by-step trace of one input
    Trace {
        /// Family tag: mod | exact0l | exact1 | nonevasive
        #[arg(long)]
        family: String,
        /// Input bit string, e.g. 01101
        #[arg(long)]
        x: String,
        /// Modulus (mod family)
        #[arg(long)]
        m: Option<usize>,
        /// Target weight l (exact0l family)
        #[arg(long)]
        l: Option<usize>,
        /// Promise witness k (nonevasive family)
        #[arg(long)]
        k: Option<usize>,
        /// Function-spec file: `n=<int>` then `F=<n+1 comma-separated labels>`
        #[arg(long)]
        func: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyFamily {
    /// Hamming weight modulo m in exactly ceil(n(1-1/m)) queries
    Mod {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Whether |x| is 0 or l, in at most n-1 queries
    Exact0l {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Whether |x| is 1 or n-1, in at most n-2 queries
    Exact1 {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// A symmetric function from --func satisfying F(0)=F(k), F(n-k)=F(n)
    Nonevasive {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        func: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Input enumeration mode
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    /// Sample count for sampled mode
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Seed for sampled inputs and measurement sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on n for exhaustive enumeration
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    max_exhaustive: usize,
    /// Write the report(s) to this path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report file format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Run inputs serially instead of fanning out across threads
    #[arg(long)]
    serial: bool,
    /// Keep measured wall time in emitted reports (makes files differ
    /// between otherwise identical runs)
    #[arg(long)]
    timing: bool,
}

impl RunArgs {
    fn mode(&self) -> SweepMode {
        match self.mode {
            ModeArg::Exhaustive => SweepMode::Exhaustive,
            ModeArg::Sampled => SweepMode::Sampled { count: self.samples, seed: self.seed },
        }
    }

    fn options(&self) -> SweepOptions {
        SweepOptions { exhaustive_cap: self.max_exhaustive, parallel: !self.serial }
    }

    fn emit(&self, reports: &[SweepReport]) -> Result<()> {
        let Some(path) = &self.out else { return Ok(()) };
        let format = match self.format {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        };
        let stable: Vec<SweepReport>;
        let to_write = if self.timing {
            reports
        } else {
            stable = reports.iter().map(SweepReport::normalized).collect();
            &stable
        };
        report_emit(to_write, format, path)
            .with_context(|| format!("writing report to {}", path.display()))?;
        println!("wrote {} report(s) to {}", reports.len(), path.display());
        Ok(())
    }
}

fn print_summary(report: &SweepReport) {
    let status = if report.passed() { "PASS" } else { "FAIL" };
    println!(
        "[{status}] {} {}: {} inputs, {} failures, max queries {} (bound {}), \
         worst off-peak {:.2e}, fully simulated {:.1}%, {:.3}s",
        report.family,
        report.params,
        report.inputs_checked,
        report.failures_total,
        report.max_queries_observed,
        report.bound,
        report.exactness_worst,
        report.fully_simulated_fraction * 100.0,
        report.wall_time_s
    );
    for f in report.failures.iter().take(5) {
        println!("       failure: x={} expected {} got {}", f.input, f.expected, f.got);
    }
    if report.failures_total > 5 {
        println!("       … {} more failures", report.failures_total - 5);
    }
}

fn run_sweeps(specs: &[(usize, SweepFamily)], run: &RunArgs) -> Result<bool> {
    let mut reports = Vec::with_capacity(specs.len());
    for (n, family) in specs {
        let report = sweep(family, *n, run.mode(), &run.options())
            .with_context(|| format!("sweep {} {}", family.tag(), family.params_string(*n)))?;
        print_summary(&report);
        reports.push(report);
    }
    run.emit(&reports)?;
    Ok(reports.iter().all(SweepReport::passed))
}

fn build_trace_family(
    tag: &str,
    m: Option<usize>,
    l: Option<usize>,
    k: Option<usize>,
    func: Option<&PathBuf>,
) -> Result<SweepFamily> {
    Ok(match tag {
        "mod" => SweepFamily::Mod { m: m.context("--family mod needs --m")? },
        "exact0l" => SweepFamily::Exact0L { l: l.context("--family exact0l needs --l")? },
        "exact1" => SweepFamily::Exact1Top,
        "nonevasive" => {
            let path = func.context("--family nonevasive needs --func")?;
            let table = SymmetricFunction::from_spec_file(path)
                .with_context(|| format!("reading {}", path.display()))?;
            SweepFamily::Nonevasive { k: k.context("--family nonevasive needs --k")?, table }
        }
        other => bail!("unknown family {other:?} (expected mod, exact0l, exact1, or nonevasive)"),
    })
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { family } => {
            let (spec, run): ((usize, SweepFamily), RunArgs) = match family {
                VerifyFamily::Mod { n, m, run } => ((n, SweepFamily::Mod { m }), run),
                VerifyFamily::Exact0l { n, l, run } => ((n, SweepFamily::Exact0L { l }), run),
                VerifyFamily::Exact1 { n, run } => ((n, SweepFamily::Exact1Top), run),
                VerifyFamily::Nonevasive { n, k, func, run } => {
                    let table = SymmetricFunction::from_spec_file(&func)
                        .with_context(|| format!("reading {}", func.display()))?;
                    ((n, SweepFamily::Nonevasive { k, table }), run)
                }
            };
            run_sweeps(&[spec], &run)
        }
        Command::SweepAll { max_n, run } => {
            if max_n < 2 {
                bail!("--max-n must be at least 2");
            }
            run_sweeps(&sweep_all_specs(max_n), &run)
        }
        Command::Trace { family, x, m, l, k, func } => {
            let x: BitString = x.parse()?;
            let family = build_trace_family(&family, m, l, k, func.as_ref())?;
            print!("{}", trace(&family, &x)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
