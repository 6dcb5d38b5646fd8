use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use homcont::bench::{gevp, katsura, random_dense};
use homcont::parse::format_point;
use homcont::slp::compile_system;
use homcont::tracker::{collect_solutions, solve_with_start, track_homotopy, SolveReport};
use homcont::{
    inf_norm, make_homotopy, parse_complex, parse_points, parse_system, random_gamma, refine, solve_system,
    Complex64, PolynomialSystem, Predictor, TrackerSettings,
};

mod report;

use report::{JsonReport, JsonSolution};

/// Numerical failures (failed paths, unconverged refinement).
const EXIT_FAILURES: u8 = 1;
/// Bad input or usage.
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "homcont", version, about = "Solve polynomial systems by homotopy continuation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a square system from a total-degree start system.
    Solve {
        file: PathBuf,
        /// Seed for the random γ.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        opts: TrackOpts,
    },
    /// Track the given start solutions from a start system to a target system.
    Track {
        start: PathBuf,
        target: PathBuf,
        solutions: PathBuf,
        /// Multiplier on the target: a complex literal or `random`.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        gamma: String,
        /// Seed used when `--gamma random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        opts: TrackOpts,
    },
    /// Newton-refine approximate solutions of a system.
    Refine {
        file: PathBuf,
        solutions: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Generate and solve a benchmark system.
    ///
    /// Parameters: `katsura <n>`, `random <n> <d>`, `gevp <n>`.
    Bench {
        family: Family,
        params: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the generated system (and for gevp the start system and
        /// start solutions) into this directory instead of solving.
        #[arg(long, value_name = "DIR")]
        emit: Option<PathBuf>,
        #[command(flatten)]
        opts: TrackOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Katsura,
    Random,
    Gevp,
}

#[derive(Clone, Copy, ValueEnum)]
enum PredictorArg {
    Tangent,
    Rk4,
}

#[derive(Args)]
struct TrackOpts {
    #[arg(long, value_enum, default_value = "rk4")]
    predictor: PredictorArg,
    #[arg(long)]
    initial_step: Option<f64>,
    #[arg(long)]
    min_step: Option<f64>,
    #[arg(long)]
    max_step: Option<f64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    json: bool,
    /// Print the compiled target program to stderr.
    #[arg(long)]
    dump_slp: bool,
}

impl TrackOpts {
    fn settings(&self) -> Result<TrackerSettings> {
        let d = TrackerSettings::default();
        let s = TrackerSettings {
            predictor: match self.predictor {
                PredictorArg::Tangent => Predictor::Tangent,
                PredictorArg::Rk4 => Predictor::RungeKutta4,
            },
            initial_step: self.initial_step.unwrap_or(d.initial_step),
            min_step: self.min_step.unwrap_or(d.min_step),
            max_step: self.max_step.unwrap_or(d.max_step),
            threads: self.threads,
            ..d
        };
        s.validate()?;
        Ok(s)
    }

    fn dump(&self, target: &PolynomialSystem) {
        if self.dump_slp {
            eprint!("{}", compile_system(target).dump());
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_system(path: &Path) -> Result<PolynomialSystem> {
    let sys = parse_system(&read(path)?).with_context(|| format!("{}", path.display()))?;
    sys.check_solvable().with_context(|| format!("{}", path.display()))?;
    Ok(sys)
}

fn read_points(path: &Path, nvars: usize) -> Result<Vec<Vec<Complex64>>> {
    let points = parse_points(&read(path)?).with_context(|| format!("{}", path.display()))?;
    if let Some((k, p)) = points.iter().enumerate().find(|(_, p)| p.len() != nvars) {
        bail!("{}: point {} has {} coordinates, expected {nvars}", path.display(), k + 1, p.len());
    }
    Ok(points)
}

fn finish(report: &SolveReport, per_path: bool, started: Instant, json: bool) -> u8 {
    let wall = started.elapsed().as_secs_f64();
    let out = if per_path { JsonReport::per_path(report, wall) } else { JsonReport::distinct(report, wall) };
    if json {
        println!("{}", out.to_json());
    } else {
        print!("{}", out.human(per_path));
    }
    if report.all_regular() {
        0
    } else {
        EXIT_FAILURES
    }
}

fn solve(file: &Path, seed: u64, opts: &TrackOpts) -> Result<u8> {
    let target = read_system(file)?;
    let settings = opts.settings()?;
    opts.dump(&target);
    let started = Instant::now();
    let report = solve_system(&target, seed, &settings)?;
    Ok(finish(&report, false, started, opts.json))
}

fn track(
    start: &Path,
    target: &Path,
    solutions: &Path,
    gamma: &str,
    seed: u64,
    opts: &TrackOpts,
) -> Result<u8> {
    let start_sys = read_system(start)?;
    let target_sys = read_system(target)?;
    if start_sys.nvars() != target_sys.nvars() {
        bail!("start system has {} variables, target has {}", start_sys.nvars(), target_sys.nvars());
    }
    let points = read_points(solutions, start_sys.nvars())?;
    let gamma = if gamma.trim() == "random" {
        random_gamma(seed)
    } else {
        parse_complex(gamma).with_context(|| format!("bad --gamma `{gamma}`"))?
    };
    let settings = opts.settings()?;
    opts.dump(&target_sys);
    let started = Instant::now();
    let h = make_homotopy(start_sys, target_sys, gamma)?;
    let paths = track_homotopy(&h, &points, &settings)?;
    Ok(finish(&collect_solutions(gamma, paths), true, started, opts.json))
}

fn refine_points(file: &Path, solutions: &Path, tol: f64, json: bool) -> Result<u8> {
    if tol.is_nan() || tol <= 0.0 {
        bail!("--tol must be positive");
    }
    let sys = read_system(file)?;
    let points = read_points(solutions, sys.nvars())?;
    let started = Instant::now();
    let mut entries = Vec::with_capacity(points.len());
    let mut failures = 0;
    for p in &points {
        let r = refine(&sys, p, tol);
        let residual = sys.evaluate_dense(&r.point).map(|v| inf_norm(&v)).unwrap_or(f64::INFINITY);
        if !r.converged {
            failures += 1;
        }
        entries.push(JsonSolution::refined(&r.point, r.converged, residual, r.iterations));
    }
    let out = JsonReport {
        gamma: None,
        solutions: entries,
        failures,
        duplicates: 0,
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    if json {
        println!("{}", out.to_json());
    } else {
        print!("{}", out.human(true));
    }
    Ok(if failures == 0 { 0 } else { EXIT_FAILURES })
}

fn bench(family: Family, params: &[usize], seed: u64, emit: Option<&Path>, opts: &TrackOpts) -> Result<u8> {
    let (name, arity) = match family {
        Family::Katsura => ("katsura", 1),
        Family::Random => ("random", 2),
        Family::Gevp => ("gevp", 1),
    };
    if params.len() != arity || params.contains(&0) {
        bail!("{name} takes {arity} positive integer parameter(s), got {params:?}");
    }
    let gevp_instance = matches!(family, Family::Gevp).then(|| gevp(params[0], seed));
    let target = match family {
        Family::Katsura => katsura(params[0]),
        Family::Random => {
            let d = u32::try_from(params[1]).context("degree too large")?;
            random_dense(params[0], d, seed)
        }
        Family::Gevp => gevp_instance.as_ref().expect("built above").target.clone(),
    };
    if let Some(dir) = emit {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        let write = |file: &str, text: String| {
            let path = dir.join(file);
            fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))
        };
        write("target.txt", target.to_string())?;
        if let Some(g) = &gevp_instance {
            write("start.txt", g.start.to_string())?;
            let lines: String = g.start_solutions.iter().map(|p| format_point(p) + "\n").collect();
            write("start_solutions.txt", lines)?;
        }
        return Ok(0);
    }

    let settings = opts.settings()?;
    opts.dump(&target);
    let started = Instant::now();
    let report = match &gevp_instance {
        Some(g) => solve_with_start(&g.start, &g.target, &g.start_solutions, random_gamma(seed), &settings)?,
        None => solve_system(&target, seed, &settings)?,
    };
    if opts.json {
        return Ok(finish(&report, false, started, true));
    }
    let params: Vec<String> = params.iter().map(|p| p.to_string()).collect();
    println!(
        "{name} {}: {} solutions from {} paths ({} failed, {} duplicates) in {:.3} s",
        params.join(" "),
        report.solutions.len(),
        report.paths.len(),
        report.failures,
        report.duplicates,
        started.elapsed().as_secs_f64()
    );
    Ok(if report.all_regular() { 0 } else { EXIT_FAILURES })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve { file, seed, opts } => solve(&file, seed, &opts),
        Command::Track { start, target, solutions, gamma, seed, opts } => {
            track(&start, &target, &solutions, &gamma, seed, &opts)
        }
        Command::Refine { file, solutions, tol, json } => refine_points(&file, &solutions, tol, json),
        Command::Bench { family, params, seed, emit, opts } => {
            bench(family, &params, seed, emit.as_deref(), &opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
