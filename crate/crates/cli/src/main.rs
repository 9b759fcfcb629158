use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sipnt::bounds::optimize::{optimize, write_trace_csv, Objective, SearchBox, SearchConfig};
use sipnt::bounds::Variant;
use sipnt::checks::{run_suite, Suite, SuiteOptions};
use sipnt::report::{BoundReport, Envelope};
use sipnt::sieve::{census, write_census_csv};
use sipnt::zeros::{count_n, load_zeros_cached, CacheStatus, ZeroTable};
use sipnt::{Error, Execution};

const DEFAULT_ZEROS: &str = "data/zeros_100k.txt";

#[derive(Parser)]
#[command(
    name = "sipnt",
    version,
    about = "Explicit short-interval prime number theorem bounds under RH"
)]
struct Cli {
    /// Worker threads for the sieve, zero sums and optimizer starts.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the machine-readable report here (`-` for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write tabular output (optimizer trace, census rows, check details) here.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the right-hand side of a short-interval inequality.
    Bound(BoundArgs),
    /// Minimize Ψ₂, lim Ψ₂ or Ψ₃ over (m, κ₁, κ₂, κ₃).
    Optimize(OptimizeArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Inspect or cache a zero table.
    Zeros(ZerosArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum HPolicy {
    /// h = √x log x
    Sqrtxlogx,
    /// h = √x (log x)²
    Sqrtxlog2x,
    /// h = x^{3/4}
    X34,
}

impl HPolicy {
    fn apply(self, x: f64) -> f64 {
        match self {
            HPolicy::Sqrtxlogx => x.sqrt() * x.ln(),
            HPolicy::Sqrtxlog2x => x.sqrt() * x.ln().powi(2),
            HPolicy::X34 => x.powf(0.75),
        }
    }
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, value_parser = parse_real)]
    x: f64,
    #[arg(long, value_parser = parse_real, conflicts_with = "h_policy", required_unless_present = "h_policy")]
    h: Option<f64>,
    #[arg(long, value_enum)]
    h_policy: Option<HPolicy>,
    #[arg(long, value_parser = parse_variant, default_value = "psi")]
    variant: Variant,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveName {
    Psi2,
    Psi2Limit,
    Psi3,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long, value_enum, default_value = "psi2")]
    objective: ObjectiveName,
    #[arg(long, value_parser = parse_real, default_value = "4e18")]
    x: f64,
    #[arg(long, value_parser = parse_real, default_value = "0.25")]
    eps: f64,
    /// Range for m as `lo,hi`.
    #[arg(long, value_parser = parse_range, default_value = "1.5,4")]
    m: (f64, f64),
    #[arg(long, value_parser = parse_range, default_value = "1,3")]
    kappa1: (f64, f64),
    #[arg(long, value_parser = parse_range, default_value = "3,12")]
    kappa2: (f64, f64),
    #[arg(long, value_parser = parse_range, default_value = "2,8")]
    kappa3: (f64, f64),
    #[arg(long, default_value_t = 2000)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 16)]
    starts: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    /// Upper end of the prime-gap scan.
    #[arg(long, value_parser = parse_integer, default_value = "1e8")]
    limit: u64,
    /// Evaluation point; repeat for several.
    #[arg(long = "x", value_parser = parse_real)]
    xs: Vec<f64>,
    #[arg(long, env = "PNT_ZEROS_PATH")]
    zeros: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Zero height for the explicit formula.
    #[arg(long, value_parser = parse_real, default_value = "1e4")]
    height: f64,
}

#[derive(Args)]
struct ZerosArgs {
    #[arg(long, env = "PNT_ZEROS_PATH", global = true)]
    zeros: Option<PathBuf>,
    #[command(subcommand)]
    action: ZerosAction,
}

#[derive(Subcommand)]
enum ZerosAction {
    /// Count, height, N(T) samples and partial sums of 1/γ².
    Stats {
        /// Report N(T) at this height; repeat for several.
        #[arg(long = "N-at", value_parser = parse_real)]
        n_at: Vec<f64>,
    },
    /// Parse the table and build its binary cache.
    Ingest,
}

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|e| format!("{s:?} is not a number: {e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

/// Integers for the sieve, written as reals (`1e8`) but exact below 2⁵³.
fn parse_integer(s: &str) -> Result<u64, String> {
    let v = parse_real(s)?;
    if v < 0.0 || v.fract() != 0.0 || v > 9_007_199_254_740_992.0 {
        return Err(format!("{s:?} is not an integer in [0, 2^53]"));
    }
    Ok(v as u64)
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("{s:?} is not of the form lo,hi"))?;
    Ok((parse_real(a)?, parse_real(b)?))
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Variant::ALL.iter().map(|v| v.name()).collect();
        format!(
            "unknown variant {s:?}; expected one of {}",
            names.join(", ")
        )
    })
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(|v| v.name()).collect();
        format!("unknown suite {s:?}; expected one of {}", names.join(", "))
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_)
        | Error::Window(_)
        | Error::Constraint(_)
        | Error::InfeasibleBox(_)
        | Error::SieveRange(_) => 2,
        Error::QuadratureNonConvergence { .. } => 1,
        _ => 3,
    }
}

fn write_output(path: &Path, text: &str) -> sipnt::Result<()> {
    if path == Path::new("-") {
        io::stdout().write_all(text.as_bytes())?;
    } else {
        fs::write(path, text)?;
    }
    Ok(())
}

fn resolve_zeros(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| Some(PathBuf::from(DEFAULT_ZEROS)).filter(|p| p.exists()))
}

fn load_table(flag: Option<PathBuf>) -> sipnt::Result<(ZeroTable, CacheStatus)> {
    let path = resolve_zeros(flag).ok_or_else(|| {
        Error::MissingData("no zero table: pass --zeros or set PNT_ZEROS_PATH".into())
    })?;
    if !path.exists() {
        return Err(Error::MissingData(format!(
            "zero table {} does not exist",
            path.display()
        )));
    }
    load_zeros_cached(&path)
}

#[derive(Serialize)]
struct WindowCheck {
    constraint: &'static str,
    ok: bool,
}

#[derive(Serialize)]
struct BoundOutput {
    variant: Variant,
    x: f64,
    h: f64,
    window: Vec<WindowCheck>,
    value: f64,
    chd_value: Option<f64>,
}

fn cmd_bound(cli: &Cli, args: &BoundArgs) -> sipnt::Result<u8> {
    let x = args.x;
    let h = match (args.h, args.h_policy) {
        (Some(h), _) => h,
        (None, Some(p)) => p.apply(x),
        (None, None) => unreachable!("clap requires one of --h and --h-policy"),
    };
    let window = args.variant.window(x, h);
    for (name, ok) in &window {
        println!("{:<28} {}", name, if *ok { "ok" } else { "VIOLATED" });
    }
    let value = args.variant.evaluate(x, h)?;
    let chd_value = match args.variant {
        Variant::Psi | Variant::Theta => Variant::Chd.evaluate(x, h).ok(),
        _ => None,
    };
    println!(
        "{} bound at x = {x:e}, h = {h:e}: {value:.10e}",
        args.variant
    );
    if let Some(c) = chd_value {
        println!("chd reference: {c:.10e} (ratio {:.6})", value / c);
    }
    if let Some(path) = &cli.json {
        let out = BoundOutput {
            variant: args.variant,
            x,
            h,
            window: window
                .into_iter()
                .map(|(constraint, ok)| WindowCheck { constraint, ok })
                .collect(),
            value,
            chd_value,
        };
        write_output(path, &Envelope::new("bound", out).to_json()?)?;
    }
    Ok(0)
}

fn cmd_optimize(cli: &Cli, args: &OptimizeArgs, exec: Execution) -> sipnt::Result<u8> {
    let objective = match args.objective {
        ObjectiveName::Psi2 => Objective::Psi2 {
            x: args.x,
            eps: args.eps,
        },
        ObjectiveName::Psi2Limit => Objective::Psi2Limit,
        ObjectiveName::Psi3 => Objective::Psi3 { x: args.x },
    };
    let bounds = SearchBox {
        m: args.m,
        kappa1: args.kappa1,
        kappa2: args.kappa2,
        kappa3: args.kappa3,
    };
    let cfg = SearchConfig {
        bounds,
        budget: args.budget,
        seed: args.seed,
        starts: args.starts,
        exec,
    };
    let result = optimize(objective, &cfg)?;
    let b = result.best;
    println!("objective   {}", objective.name());
    println!("best value  {:.10}", result.best_value);
    println!("m           {:.6}", b.m);
    println!("kappa1      {:.6}", b.kappa1);
    println!("kappa2      {:.6}", b.kappa2);
    println!("kappa3      {:.6}", b.kappa3);
    println!("evaluations {}", result.evaluations);
    let search_box: BTreeMap<String, (f64, f64)> = [
        ("kappa1", args.kappa1),
        ("kappa2", args.kappa2),
        ("kappa3", args.kappa3),
        ("m", args.m),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    if let Some(path) = &cli.json {
        let report = BoundReport::for_optimum(&result, args.budget, args.seed, search_box);
        write_output(path, &report.to_json()?)?;
    }
    if let Some(path) = &cli.csv {
        write_trace_csv(&result.trace, fs::File::create(path)?)?;
    }
    Ok(0)
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs, exec: Execution) -> sipnt::Result<u8> {
    let table = if args.suite.needs_zeros() {
        Some(load_table(args.zeros.clone())?.0)
    } else {
        None
    };
    let opts = SuiteOptions {
        seed: args.seed,
        exec,
        gap_limit: args.limit,
        xs: (!args.xs.is_empty()).then(|| args.xs.clone()),
        height: args.height,
        ..SuiteOptions::default()
    };
    let report = run_suite(args.suite, table.as_ref(), &opts)?;
    for c in &report.checks {
        let status = match (c.passed, c.informational) {
            (true, _) => "PASS",
            (false, true) => "INFO",
            (false, false) => "FAIL",
        };
        let details: Vec<String> = c
            .details
            .iter()
            .map(|(k, v)| format!("{k}={v:.6e}"))
            .collect();
        println!("{status} {}  [{}]", c.name, details.join(", "));
    }
    println!(
        "suite {}: {}",
        report.suite,
        if report.passed { "pass" } else { "FAIL" }
    );
    if let Some(path) = &cli.json {
        write_output(path, &Envelope::new("verify", &report).to_json()?)?;
    }
    if let Some(path) = &cli.csv {
        if args.suite == Suite::Empirical {
            let xs = opts.xs.clone().unwrap_or_else(|| vec![1e8, 1e9, 1e10]);
            let rows = xs
                .iter()
                .map(|&x| census(x as u64, (x.sqrt() * x.ln()).ceil() as u64, exec))
                .collect::<sipnt::Result<Vec<_>>>()?;
            write_census_csv(&rows, fs::File::create(path)?)?;
        } else {
            let mut w = io::BufWriter::new(fs::File::create(path)?);
            writeln!(w, "check,passed,key,value")?;
            for c in &report.checks {
                for (k, v) in &c.details {
                    writeln!(
                        w,
                        "\"{}\",{},{k},{v:e}",
                        c.name.replace('"', "\"\""),
                        c.passed
                    )?;
                }
            }
            w.flush()?;
        }
    }
    Ok(if report.passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct ZeroStats {
    source: String,
    cache: CacheStatus,
    count: usize,
    max_height: f64,
    n_at: BTreeMap<String, usize>,
    sum_inverse_square: f64,
}

fn cmd_zeros(cli: &Cli, args: &ZerosArgs) -> sipnt::Result<u8> {
    let (table, cache) = load_table(args.zeros.clone())?;
    match &args.action {
        ZerosAction::Ingest => {
            println!(
                "{}: {} ordinates, max height {:.9}; cache {}",
                table.source(),
                table.len(),
                table.max_height(),
                match cache {
                    CacheStatus::Hit => "hit",
                    CacheStatus::Rebuilt => "rebuilt",
                }
            );
            if let Some(path) = &cli.json {
                let stats = stats(&table, cache, &[])?;
                write_output(path, &Envelope::new("zeros-ingest", stats).to_json()?)?;
            }
        }
        ZerosAction::Stats { n_at } => {
            let s = stats(&table, cache, n_at)?;
            println!("source      {}", s.source);
            println!("count       {}", s.count);
            println!("max height  {:.9}", s.max_height);
            for (t, n) in &s.n_at {
                println!("N({t}) = {n}");
            }
            println!("sum 1/gamma^2 (both signs) {:.12}", s.sum_inverse_square);
            if let Some(path) = &cli.json {
                write_output(path, &Envelope::new("zeros-stats", s).to_json()?)?;
            }
        }
    }
    Ok(0)
}

fn stats(table: &ZeroTable, cache: CacheStatus, n_at: &[f64]) -> sipnt::Result<ZeroStats> {
    let heights: Vec<f64> = if n_at.is_empty() {
        [100.0, 1e3, 1e4]
            .into_iter()
            .filter(|&t| t <= table.max_height())
            .collect()
    } else {
        n_at.to_vec()
    };
    let mut counts = BTreeMap::new();
    for t in heights {
        counts.insert(format!("{t}"), count_n(table, t)?);
    }
    Ok(ZeroStats {
        source: table.source().to_string(),
        cache,
        count: table.len(),
        max_height: table.max_height(),
        n_at: counts,
        sum_inverse_square: table.sum_symmetric(0.0, table.max_height(), |g| g.powi(-2))?,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let exec = Execution::default();
    let outcome = match &cli.command {
        Command::Bound(a) => cmd_bound(&cli, a),
        Command::Optimize(a) => cmd_optimize(&cli, a, exec),
        Command::Verify(a) => cmd_verify(&cli, a, exec),
        Command::Zeros(a) => cmd_zeros(&cli, a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
