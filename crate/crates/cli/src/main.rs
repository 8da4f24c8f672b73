use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use conical::{conicp, conicpr, conicr, NumericConfig};
use conical_cli::fixture::{self, check_line};
use conical_cli::format::g17;
use conical_cli::suite::{self, Method, Suite, Summary, Sweep, VerificationRecord};
use conical_cli::GRID200;

const EXIT_OVER_BUDGET: u8 = 1;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "conical",
    version,
    about = "Conical functions P and R: evaluation and accuracy sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate at one point; the exit code is the status code.
    Eval(EvalArgs),
    /// Run a verification sweep and fail if the over-threshold fraction exceeds the budget.
    Verify(SweepArgs),
    /// Write the CSV of every point over the threshold.
    Map(SweepArgs),
    /// Recompute a fixture file line by line.
    Fixture(FixtureArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Function {
    P,
    R,
    Both,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct EvalArgs {
    #[arg(long)]
    x: f64,
    #[arg(long)]
    m: i32,
    #[arg(long)]
    tau: f64,
    #[arg(long, value_enum, default_value = "both")]
    function: Function,
    /// Also print the derivatives.
    #[arg(long)]
    deriv: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Wronskian,
    Recurrence,
    NearOne,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    LargeX,
    Kummer,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SweepArgs {
    #[arg(long, value_enum, default_value = "wronskian")]
    suite: SuiteArg,
    /// Evaluation path of the recurrence suite.
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    #[arg(long)]
    xmin: Option<f64>,
    #[arg(long)]
    xmax: Option<f64>,
    #[arg(long)]
    taumin: Option<f64>,
    #[arg(long)]
    taumax: Option<f64>,
    #[arg(long)]
    mmin: Option<u32>,
    #[arg(long)]
    mmax: Option<u32>,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    threshold: Option<f64>,
    /// Largest tolerated fraction of points over the threshold.
    #[arg(long)]
    budget: Option<f64>,
    /// CSV destination; stdout for `map` when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grid file for the oracle suite instead of the built-in one.
    #[arg(long)]
    grid: Option<PathBuf>,
}

#[derive(Args)]
struct FixtureArgs {
    #[arg(required_unless_present = "path_flag")]
    path: Option<PathBuf>,
    #[arg(long = "path", conflicts_with = "path")]
    path_flag: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Eval(a) => eval(&a),
        Command::Verify(a) => sweep(&a, false),
        Command::Map(a) => sweep(&a, true),
        Command::Fixture(a) => run_fixture(a.path.or(a.path_flag).expect("clap enforces a path")),
    }
}

fn eval(a: &EvalArgs) -> ExitCode {
    let mut lines = Vec::new();
    let status = match a.function {
        Function::P => {
            let r = conicp(a.x, a.m, a.tau);
            lines.push(("P", r.value, r.est_rel_err));
            if a.deriv {
                let q = conicpr(a.x, a.m, a.tau);
                if a.x > 1.0 && q.status.is_ok() {
                    lines.push(("dP", q.pmd, f64::NAN));
                } else {
                    lines.push(("dP", p_deriv(a).unwrap_or(f64::NAN), f64::NAN));
                }
            }
            r.status
        }
        Function::R => {
            let r = conicr(a.x, a.m, a.tau);
            lines.push(("R", r.value, r.est_rel_err));
            if a.deriv {
                let q = conicpr(a.x, a.m, a.tau);
                lines.push(("dR", if q.status.is_ok() { q.rmd } else { f64::NAN }, f64::NAN));
            }
            r.status
        }
        Function::Both => {
            let q = conicpr(a.x, a.m, a.tau);
            lines.push(("P", q.pm, f64::NAN));
            if a.deriv {
                lines.push(("dP", q.pmd, f64::NAN));
            }
            lines.push(("R", q.rm, f64::NAN));
            if a.deriv {
                lines.push(("dR", q.rmd, f64::NAN));
            }
            q.status
        }
    };
    println!("x = {}  m = {}  tau = {}", g17(a.x), a.m, g17(a.tau));
    for (name, v, est) in lines {
        if est.is_nan() {
            println!("{name} = {}", g17(v));
        } else {
            println!("{name} = {}  (est. rel. err {est:.1e})", g17(v));
        }
    }
    println!("status = {} ({status})", status.code());
    ExitCode::from(status.code() as u8)
}

fn p_deriv(a: &EvalArgs) -> Option<f64> {
    if a.m < 0 {
        return None;
    }
    conical::conical_p::conicp_pair(a.x, a.m as u32, a.tau, &NumericConfig::default())
        .ok()?
        .pmd
        .to_f64()
}

fn to_suite(a: &SweepArgs) -> Suite {
    match a.suite {
        SuiteArg::Wronskian => Suite::Wronskian,
        SuiteArg::NearOne => Suite::NearOne,
        SuiteArg::Oracle => Suite::Oracle,
        SuiteArg::Recurrence => Suite::Recurrence(match a.method {
            MethodArg::Auto => Method::Auto,
            MethodArg::LargeX => Method::LargeX,
            MethodArg::Kummer => Method::Kummer,
        }),
    }
}

fn sweep(a: &SweepArgs, map_only: bool) -> ExitCode {
    let suite = to_suite(a);
    let cfg = NumericConfig::default();
    let mut sw = Sweep::new(suite, a.samples, a.seed);
    let d = &mut sw.domain;
    d.xmin = a.xmin.unwrap_or(d.xmin);
    d.xmax = a.xmax.unwrap_or(d.xmax);
    d.taumin = a.taumin.unwrap_or(d.taumin);
    d.taumax = a.taumax.unwrap_or(d.taumax);
    d.mmin = a.mmin.unwrap_or(d.mmin);
    d.mmax = a.mmax.unwrap_or(d.mmax);
    sw.threshold = a.threshold.unwrap_or(sw.threshold);
    let budget = a.budget.unwrap_or(suite.default_budget());

    if let Err(msg) = check_box(&sw) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }

    let records: Vec<VerificationRecord> = if suite == Suite::Oracle {
        let text = match &a.grid {
            Some(p) => match std::fs::read_to_string(p) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {}: {e}", p.display());
                    return ExitCode::from(EXIT_IO);
                }
            },
            None => GRID200.to_string(),
        };
        match fixture::parse(&text) {
            Ok(lines) => suite::run_oracle(&lines, &cfg),
            Err(e) => {
                eprintln!("error: grid: {e}");
                return ExitCode::from(EXIT_IO);
            }
        }
    } else {
        sw.run(&cfg)
    };

    let threshold = format!("{:e}", sw.threshold);
    let comment = if suite == Suite::Oracle {
        format!(
            "suite={} grid={} points={} threshold={}",
            suite.name(),
            a.grid.as_ref().map_or("builtin".into(), |p| p.display().to_string()),
            records.len(),
            threshold
        )
    } else {
        format!(
            "suite={} seed={} samples={} threshold={} box: {}",
            suite.name(),
            sw.seed,
            records.len(),
            threshold,
            sw.domain.describe()
        )
    };

    let csv_result = match (&a.out, map_only) {
        (Some(p), _) => {
            File::create(p).and_then(|f| suite::write_csv(BufWriter::new(f), &comment, &records, sw.threshold))
        }
        (None, true) => suite::write_csv(io::stdout().lock(), &comment, &records, sw.threshold),
        (None, false) => Ok(()),
    };
    if let Err(e) = csv_result {
        eprintln!("error: writing CSV: {e}");
        return ExitCode::from(EXIT_IO);
    }

    let s = Summary::of(&records, sw.threshold);
    let report = summary_text(suite, &s, sw.threshold, budget);
    if map_only {
        eprint!("{report}");
        return ExitCode::SUCCESS;
    }
    print!("{report}");
    let _ = io::stdout().flush();
    if s.frac_over() > budget {
        ExitCode::from(EXIT_OVER_BUDGET)
    } else {
        ExitCode::SUCCESS
    }
}

fn check_box(sw: &Sweep) -> Result<(), String> {
    let d = &sw.domain;
    if !(d.xmin < d.xmax && d.taumin <= d.taumax && d.mmin <= d.mmax) {
        return Err(format!("empty box: {}", d.describe()));
    }
    if !(d.xmin >= 1.0 && d.xmax.is_finite() && d.taumin >= 0.0 && d.taumax.is_finite()) {
        return Err(format!("box outside x > 1, tau >= 0: {}", d.describe()));
    }
    if matches!(sw.suite, Suite::Recurrence(_)) && d.mmin == 0 {
        return Err("the recurrence suite needs m >= 1".into());
    }
    if sw.threshold.is_nan() || sw.threshold <= 0.0 {
        return Err("threshold must be positive".into());
    }
    Ok(())
}

fn summary_text(suite: Suite, s: &Summary, threshold: f64, budget: f64) -> String {
    let worst = s
        .worst
        .map_or("-".into(), |(x, tau, m)| format!("x={} tau={} m={m}", g17(x), g17(tau)));
    format!(
        "suite: {}\npoints: {}\nmax error: {:.3e} at {worst}\nover {:.0e}: {} ({:.4}%, budget {:.4}%)\nat or below 1e-13: {:.2}%\nevaluation failures: {}\n",
        suite.name(),
        s.count,
        s.max_err,
        threshold,
        s.over,
        100.0 * s.frac_over(),
        100.0 * budget,
        100.0 * s.frac_fine(),
        s.failed
    )
}

fn run_fixture(path: PathBuf) -> ExitCode {
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_IO);
        }
    };
    let lines = match fixture::parse(&text) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_IO);
        }
    };
    let mut failed = 0;
    for line in &lines {
        let c = check_line(line);
        if !c.pass {
            failed += 1;
        }
        println!(
            "line {:>3}  x={} m={} tau={}  max rel {:.2e}  {}",
            line.line_no,
            g17(line.x),
            line.m,
            g17(line.tau),
            c.max_rel(),
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    println!("{} of {} lines pass", lines.len() - failed, lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
