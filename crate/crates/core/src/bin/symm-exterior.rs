use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use symm_exterior::harness::{
    default_radii, run_convergence, run_errgrid, run_farfield, selftest, write_csv, write_farfield_csv,
    ExperimentConfig, RunRecord,
};
use symm_exterior::solvers::solve;
use symm_exterior::{DiscreteOperator, Error};

#[derive(Parser)]
#[command(name = "symm-exterior", version, about = "Exterior Laplace Dirichlet solver (modified Symm equation)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single solve; needs exactly one method, n and delta.
    Solve(Common),
    /// Sweep over methods, noise levels and degrees.
    Convergence(Common),
    /// Field values along rays against the far-field limit.
    Farfield {
        #[command(flatten)]
        common: Common,
        /// Ray directions as `x,y` pairs separated by `;`.
        #[arg(long, default_value = "1,0")]
        directions: String,
        /// Comma-separated radii, ascending.
        #[arg(long)]
        radii: Option<String>,
    },
    /// Near-boundary field error against a degree-32 reference solve.
    Errgrid(Common),
    /// All four methods at n = 10, 20 without noise; reports DLS degradation.
    Selftest(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// key=value configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// circle(a), ellipse(a,b) or expblob.
    #[arg(long)]
    curve: Option<String>,
    /// LS, DLS, BG, GC (comma separated).
    #[arg(long)]
    method: Option<String>,
    /// Degrees: list or range `lo..hi[:step]`.
    #[arg(long)]
    n: Option<String>,
    /// Noise levels (comma separated).
    #[arg(long)]
    delta: Option<String>,
    /// exp-sin, sin, const or zero.
    #[arg(long)]
    density: Option<String>,
    /// 0 = automatic max(4n, 32); otherwise fixed reference degree.
    #[arg(long)]
    rhs_degree: Option<String>,
    /// classic or doubled.
    #[arg(long)]
    convention: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Output CSV path (stdout if absent).
    #[arg(long)]
    out: Option<String>,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_file(p)?,
            None => ExperimentConfig::default(),
        };
        let overrides = [
            ("curve", &self.curve),
            ("method", &self.method),
            ("n", &self.n),
            ("delta", &self.delta),
            ("density", &self.density),
            ("rhs_degree", &self.rhs_degree),
            ("convention", &self.convention),
            ("seed", &self.seed),
            ("out", &self.out),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn sink(cfg: &ExperimentConfig) -> Result<Box<dyn Write>, Error> {
    Ok(match &cfg.output {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_directions(s: &str) -> Result<Vec<[f64; 2]>, Error> {
    s.split(';')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|pair| {
            let xy: Vec<f64> = pair
                .split(',')
                .map(|c| c.trim().parse().map_err(|_| Error::Config(format!("invalid direction '{pair}'"))))
                .collect::<Result<_, _>>()?;
            match xy[..] {
                [x, y] => Ok([x, y]),
                _ => Err(Error::Config(format!("direction '{pair}' needs two components"))),
            }
        })
        .collect()
}

fn parse_radii(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| Error::Config(format!("invalid radius '{x}'"))))
        .collect()
}

fn run_solve(cfg: &ExperimentConfig) -> Result<(), Error> {
    let (method, n, delta) = match (&cfg.methods[..], &cfg.n_values[..], &cfg.deltas[..]) {
        ([m], [n], [d]) => (*m, *n, *d),
        _ => {
            return Err(Error::Config(
                "solve needs exactly one method, one n and one delta".into(),
            ))
        }
    };
    let parts = cfg.kernel_parts()?;
    let start = std::time::Instant::now();
    let op = DiscreteOperator::assemble(&parts, n)?;
    let problem = cfg.problem(&parts, n)?.with_noise(delta)?;
    let rep = solve(&problem, &op, method)?;
    let elapsed = start.elapsed().as_secs_f64();
    let rec = RunRecord::from_report(&cfg.curve.to_string(), delta, &rep, &parts, elapsed);
    write_csv(sink(cfg)?, &[rec])
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Solve(c) => run_solve(&c.config()?),
        Command::Convergence(c) => {
            let cfg = c.config()?;
            let rows = run_convergence(&cfg)?;
            write_csv(sink(&cfg)?, &rows)
        }
        Command::Farfield {
            common,
            directions,
            radii,
        } => {
            let cfg = common.config()?;
            let dirs = parse_directions(&directions)?;
            let radii = match radii {
                Some(r) => parse_radii(&r)?,
                None => default_radii(),
            };
            let rows = run_farfield(&cfg, &dirs, &radii)?;
            write_farfield_csv(sink(&cfg)?, &rows)
        }
        Command::Errgrid(c) => {
            let cfg = c.config()?;
            let rows = run_errgrid(&cfg)?;
            write_csv(sink(&cfg)?, &rows)
        }
        Command::Selftest(c) => {
            let cfg = c.config()?;
            let report = selftest(&cfg)?;
            eprint!("{}", report.summary());
            write_csv(sink(&cfg)?, &report.records)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::SolverFailure { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
