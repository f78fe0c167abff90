//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 on a usage error (bad flag, unknown input,
//! malformed spec file, bad grid), 1 when an output file cannot be written.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rosbid_core::auction::check_myerson;
use rosbid_core::benchmarks::{solve_lp_discrete, solve_theta_star, LpParams};
use rosbid_core::distributions::{check_assumptions, CannedInput};
use rosbid_core::simulator::{fit_exponent, Benchmark, ExperimentSummary, TrialConfig};
use rosbid_core::{Algorithm, Construction, ConstructionParams, DiscreteJointSpec, FeedbackMode};

use crate::grid::parse_grid;
use crate::runner::Runner;
use crate::specfile::load_spec;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 42;
/// Horizon used to derive construction parameters when no `--T` is given.
pub const DEFAULT_PARAM_HORIZON: u64 = 100_000;

pub const CSV_HEADER: [&str; 12] = [
    "input",
    "algo",
    "T",
    "trials",
    "seed",
    "mean_value",
    "ci95",
    "regret",
    "benchmark",
    "mean_ccv_final",
    "violation_frac",
    "mean_tau_min",
];

#[derive(Parser, Debug)]
#[command(name = "rosbid", version, about = "Auto-bidding simulations under a strict return-on-spend constraint")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One summary row per (algo, T).
    Simulate(SimulateArgs),
    /// One row per T on a grid plus a fitted power-law footer row.
    Scaling(ScalingArgs),
    /// theta*, pi* and the optimal per-slot rate for a constant-value input.
    Opt(InfoArgs),
    /// Greedy LP solution on the exact input parameters.
    Lp(InfoArgs),
    /// Construction side conditions, Myerson residuals and assumption checks.
    Validate(InfoArgs),
}

#[derive(Args, Debug, Clone)]
struct InputArgs {
    /// Canned construction name or path to a spec file.
    #[arg(long)]
    input: String,
    /// Which input of a paired construction (thm1, thm2) to use.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    variant: u8,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    u: Option<f64>,
    #[arg(long)]
    w: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Dual step size for apd; defaults to 1/sqrt(T).
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    feedback: Option<String>,
    /// Band width for the concentration probe (constant-value inputs only).
    #[arg(long)]
    band_delta: Option<f64>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 means one per core. Never changes the output.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',', required = true)]
    algo: Vec<String>,
    /// Horizon, comma list or start:end:xFactor grid.
    #[arg(long = "T")]
    t: String,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FitTarget {
    Regret,
    Lost,
    Tau,
}

impl FitTarget {
    fn name(self) -> &'static str {
        match self {
            FitTarget::Regret => "regret",
            FitTarget::Lost => "lost",
            FitTarget::Tau => "tau",
        }
    }

    fn pick(self, s: &ExperimentSummary) -> f64 {
        match self {
            FitTarget::Regret => s.regret.unwrap_or(f64::NAN),
            FitTarget::Lost => s.mean_lost,
            FitTarget::Tau => s.mean_tau_min.unwrap_or(f64::NAN),
        }
    }
}

#[derive(Args, Debug)]
struct ScalingArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    algo: String,
    #[arg(long, default_value = "1024:1048576:x2")]
    t_grid: String,
    /// Quantity fitted against T in the footer row.
    #[arg(long, value_enum, default_value_t = FitTarget::Regret)]
    fit: FitTarget,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct InfoArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Horizon used to derive default construction parameters.
    #[arg(long = "T", default_value_t = DEFAULT_PARAM_HORIZON)]
    t: u64,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(msg.to_string())
}

/// A resolved input: either a canned construction or a file.
enum Source {
    Canned(Construction),
    File(DiscreteJointSpec),
}

impl InputArgs {
    fn source(&self) -> CliResult<Source> {
        if let Ok(c) = self.input.parse::<Construction>() {
            return Ok(Source::Canned(c));
        }
        let path = Path::new(&self.input);
        if path.is_file() {
            return load_spec(path).map(Source::File).map_err(|e| usage(format!("input '{}': {e}", self.input)));
        }
        let names: Vec<&str> = Construction::ALL.iter().map(|c| c.name()).collect();
        Err(usage(format!(
            "unknown input '{}' (not a file; canned inputs are {})",
            self.input,
            names.join(", ")
        )))
    }

    fn params(&self, horizon: u64) -> ConstructionParams {
        let mut p = ConstructionParams::for_horizon(horizon);
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut p.epsilon, self.epsilon);
        set(&mut p.delta, self.delta);
        set(&mut p.r, self.r);
        set(&mut p.a, self.a);
        set(&mut p.b, self.b);
        set(&mut p.u, self.u);
        set(&mut p.w, self.w);
        p
    }

    fn pick(&self, built: CannedInput) -> DiscreteJointSpec {
        match (built, self.variant) {
            (CannedInput::Pair(_, second), 2) => second,
            (built, _) => built.into_primary(),
        }
    }

    fn spec(&self, source: &Source, horizon: u64) -> CliResult<DiscreteJointSpec> {
        match source {
            Source::Canned(c) => c.build(&self.params(horizon)).map(|b| self.pick(b)).map_err(|e| usage(format!("{}: {e}", c))),
            Source::File(s) => Ok(s.clone()),
        }
    }
}

fn benchmark_for(source: &Source, spec: &DiscreteJointSpec) -> Benchmark {
    if let Source::Canned(c) = source {
        if let Some((rate, formula)) = c.analytic_opt_rate() {
            return Benchmark::Analytic { rate, formula };
        }
    }
    if spec.constant_value().is_some() {
        Benchmark::ThetaStar
    } else {
        Benchmark::Lp
    }
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

struct Row<'a> {
    input: &'a str,
    algo: &'a str,
    seed: u64,
    benchmark: String,
    summary: &'a ExperimentSummary,
}

impl Row<'_> {
    fn fields(&self) -> [String; 12] {
        let s = self.summary;
        [
            self.input.to_string(),
            self.algo.to_string(),
            s.horizon.to_string(),
            s.trials.to_string(),
            self.seed.to_string(),
            num(s.mean_value),
            num(s.ci95_value),
            opt_num(s.regret),
            self.benchmark.clone(),
            num(s.mean_ccv_final),
            num(s.violation_fraction),
            opt_num(s.mean_tau_min),
        ]
    }
}

fn open_out(out: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Io(format!("cannot create '{}': {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_csv(out: &Option<PathBuf>, rows: &[[String; 12]], stdout: &mut dyn Write) -> CliResult<()> {
    let io_err = |e: &dyn std::fmt::Display| CliError::Io(format!("write failed: {e}"));
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(CSV_HEADER).map_err(|e| io_err(&e))?;
        for r in rows {
            w.write_record(r).map_err(|e| io_err(&e))?;
        }
        w.flush().map_err(|e| io_err(&e))?;
    }
    match out {
        Some(_) => {
            let mut f = open_out(out)?;
            f.write_all(&buf).and_then(|_| f.flush()).map_err(|e| io_err(&e))
        }
        None => stdout.write_all(&buf).map_err(|e| io_err(&e)),
    }
}

fn parse_algo(s: &str) -> CliResult<Algorithm> {
    s.trim().parse::<Algorithm>().map_err(|_| {
        let names: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
        usage(format!("unknown algorithm '{s}' (expected one of {})", names.join(", ")))
    })
}

fn trial_config(spec: DiscreteJointSpec, algo: Algorithm, t: u64, run: &RunArgs) -> CliResult<TrialConfig> {
    let mut cfg = TrialConfig::new(spec, algo, t, run.seed).map_err(usage)?;
    if let Some(f) = &run.feedback {
        let mode: FeedbackMode = f.parse().map_err(|_| usage(format!("unknown feedback mode '{f}'")))?;
        cfg = cfg.with_feedback(mode).map_err(usage)?;
    }
    if let Some(a) = run.alpha {
        cfg = cfg.with_alpha(a).map_err(usage)?;
    }
    if let Some(d) = run.band_delta {
        cfg = cfg.with_band_delta(d);
    }
    Ok(cfg)
}

fn check_run(run: &RunArgs) -> CliResult<()> {
    if run.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    Ok(())
}

fn simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> CliResult<()> {
    check_run(&args.run)?;
    let source = args.input.source()?;
    let algos = args.algo.iter().map(|a| parse_algo(a)).collect::<CliResult<Vec<_>>>()?;
    let grid = parse_grid(&args.t).map_err(usage)?;
    let runner = Runner::new(args.run.workers);
    let mut rows = Vec::new();
    for &algo in &algos {
        for &t in &grid {
            let spec = args.input.spec(&source, t)?;
            let bench = benchmark_for(&source, &spec);
            let label = spec.label().to_string();
            let cfg = trial_config(spec, algo, t, &args.run)?;
            let s = runner.experiment(&cfg, args.run.trials, &bench).map_err(usage)?;
            let row = Row { input: &label, algo: algo.name(), seed: args.run.seed, benchmark: bench.label(), summary: &s };
            rows.push(row.fields());
        }
    }
    write_csv(&args.run.out, &rows, stdout)
}

fn scaling(args: &ScalingArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    check_run(&args.run)?;
    let source = args.input.source()?;
    let algo = parse_algo(&args.algo)?;
    let grid = parse_grid(&args.t_grid).map_err(usage)?;
    let runner = Runner::new(args.run.workers);
    let mut rows = Vec::new();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut label = String::new();
    for &t in &grid {
        let spec = args.input.spec(&source, t)?;
        let bench = benchmark_for(&source, &spec);
        label = spec.label().to_string();
        let cfg = trial_config(spec, algo, t, &args.run)?;
        let s = runner.experiment(&cfg, args.run.trials, &bench).map_err(usage)?;
        xs.push(t as f64);
        ys.push(args.fit.pick(&s));
        let row = Row { input: &label, algo: algo.name(), seed: args.run.seed, benchmark: bench.label(), summary: &s };
        rows.push(row.fields());
    }
    let (beta, r2) = match fit_exponent(&xs, &ys) {
        Ok(f) => {
            for &i in &f.excluded {
                let _ = writeln!(stderr, "warning: T={} excluded from the fit ({}={:?})", grid[i], args.fit.name(), ys[i]);
            }
            (num(f.beta), num(f.r2))
        }
        Err(e) => {
            let _ = writeln!(stderr, "warning: no fit: {e}");
            (String::new(), String::new())
        }
    };
    rows.push([
        label,
        algo.name().to_string(),
        "fit".to_string(),
        args.run.trials.to_string(),
        args.run.seed.to_string(),
        beta,
        r2,
        String::new(),
        format!("fit:{}", args.fit.name()),
        String::new(),
        String::new(),
        String::new(),
    ]);
    write_csv(&args.run.out, &rows, stdout)
}

fn opt(args: &InfoArgs, out: &mut dyn Write) -> CliResult<()> {
    let source = args.input.source()?;
    let spec = args.input.spec(&source, args.t)?;
    let s = solve_theta_star(&spec)
        .map_err(|e| usage(format!("input '{}': {e}; try the lp subcommand", args.input.input)))?;
    let w = |e: io::Error| CliError::Io(e.to_string());
    writeln!(out, "input={}", spec.label()).map_err(w)?;
    writeln!(out, "theta_star={:?} pi_star={:?} opt_rate={:.6}", s.theta_star, s.pi_star, s.opt_rate).map_err(w)?;
    writeln!(out, "value={:?}", s.value).map_err(w)?;
    writeln!(out, "rho_star={}", opt_num(s.rho_star)).map_err(w)?;
    writeln!(out, "kind={:?}", s.kind).map_err(w)?;
    writeln!(out, "residual={:?}", s.residual).map_err(w)?;
    Ok(())
}

fn lp(args: &InfoArgs, out: &mut dyn Write) -> CliResult<()> {
    let source = args.input.source()?;
    let spec = args.input.spec(&source, args.t)?;
    let params = LpParams::from_spec(&spec);
    let s = solve_lp_discrete(&params);
    let w = |e: io::Error| CliError::Io(e.to_string());
    writeln!(out, "input={}", spec.label()).map_err(w)?;
    writeln!(out, "class,value,prob,below_gain,above_cost,q").map_err(w)?;
    for (k, (c, q)) in params.classes().iter().zip(&s.q).enumerate() {
        writeln!(out, "{k},{:?},{:?},{:?},{:?},{:?}", c.value, c.prob, c.below_gain, c.above_cost, q).map_err(w)?;
    }
    writeln!(out, "value_rate={:?}", s.value_rate).map_err(w)?;
    writeln!(out, "budget={:?} spent={:?}", s.budget, s.spent).map_err(w)?;
    writeln!(out, "sigma_star={:?}", s.sigma_star).map_err(w)?;
    writeln!(out, "fractional={}", s.fractional_count()).map_err(w)?;
    Ok(())
}

fn validate(args: &InfoArgs, out: &mut dyn Write) -> CliResult<()> {
    let source = args.input.source()?;
    let w = |e: io::Error| CliError::Io(e.to_string());
    let specs: Vec<DiscreteJointSpec> = match &source {
        Source::Canned(c) => {
            let p = args.input.params(args.t);
            if matches!(c, Construction::Thm1 | Construction::Thm2) {
                writeln!(out, "[side conditions] {p:?}").map_err(w)?;
                write!(out, "{}", p.feasibility()).map_err(w)?;
            }
            match c.build(&p).map_err(|e| usage(format!("{c}: {e}")))? {
                CannedInput::Single(s) => vec![s],
                CannedInput::Pair(a, b) => vec![a, b],
            }
        }
        Source::File(s) => vec![s.clone()],
    };
    let grid: Vec<f64> = (0..=1000).map(|i| i as f64 / 1000.0).collect();
    for spec in &specs {
        writeln!(out, "[{}]", spec.label()).map_err(w)?;
        let mut worst = 0.0f64;
        for a in spec.atoms() {
            let mut g = grid.clone();
            g.push(a.theta.get());
            g.sort_by(f64::total_cmp);
            worst = worst.max(check_myerson(&a.theta, &g).map_err(usage)?);
        }
        writeln!(out, "myerson_max_residual={worst:?}").map_err(w)?;
        match solve_theta_star(spec) {
            Ok(s) => {
                let r = check_assumptions(spec, s.theta_star).map_err(usage)?;
                writeln!(out, "theta_star={:?} drift={}", r.theta_star, opt_num(r.delta_drift)).map_err(w)?;
                let yes_no = |b: Option<bool>| b.map_or("n/a", |b| if b { "holds" } else { "fails" });
                writeln!(out, "positive_drift: {}", yes_no(r.drift_positive)).map_err(w)?;
                for c in &r.conventions {
                    writeln!(
                        out,
                        "updown[{:?}]: {} (below={} above={})",
                        c.conditioning,
                        yes_no(c.updown_holds),
                        opt_num(c.mu_r_below),
                        opt_num(c.mu_r_above)
                    )
                    .map_err(w)?;
                }
            }
            Err(_) => writeln!(out, "assumption checks skipped: value is not constant").map_err(w)?,
        }
    }
    Ok(())
}

/// Runs the CLI on `args` (without the program name), writing reports to
/// `stdout` and diagnostics to `stderr`. Returns the exit code.
pub fn run_cli_with<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv = std::iter::once("rosbid".to_string()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let res = match &cli.command {
        Command::Simulate(a) => simulate(a, stdout),
        Command::Scaling(a) => scaling(a, stdout, stderr),
        Command::Opt(a) => opt(a, stdout),
        Command::Lp(a) => lp(a, stdout),
        Command::Validate(a) => validate(a, stdout),
    };
    match res {
        Ok(()) => 0,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            2
        }
        Err(CliError::Io(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            1
        }
    }
}

/// [`run_cli_with`] on the process streams.
pub fn run_cli<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let code = run_cli_with(args, &mut out, &mut err);
    let _ = out.flush();
    code
}
