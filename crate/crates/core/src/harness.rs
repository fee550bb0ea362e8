//! Experiment harness: configuration, sweeps over `(method, δ, n)` and CSV
//! output.
//!
//! Configuration is a flat `key = value` text file; every key can be
//! overridden from the command line. Lists are comma separated, integer
//! lists also accept inclusive ranges `lo..hi` or `lo..hi:step`.
//!
//! ```text
//! # ellipse, noise study
//! curve = ellipse(1,2)
//! method = LS,BG,GC
//! n = 2..12:2
//! delta = 0,1e-3,1e-2,1e-1
//! density = exp-sin
//! rhs_degree = 0
//! convention = doubled
//! out = table.csv
//! ```

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::geometry::BoundaryCurve;
use crate::kernel::{Convention, KernelParts};
use crate::potential::{err_grid, err_grid_points, ExteriorField};
use crate::quadrature::DiscreteOperator;
use crate::solvers::{solve, DensityFn, MethodKind, Problem, SolveReport};

pub const CSV_HEADER: &str = "curve,method,n,delta,r,residual,condition,elapsed_s,u_inf,err_grid";
pub const FARFIELD_HEADER: &str = "curve,method,n,delta,dir_x,dir_y,radius,u,u_inf,abs_diff";

/// Degree of the reference solve behind the near-boundary error.
pub const ERRGRID_REFERENCE_DEGREE: usize = 32;

/// Minimum degree of the automatic reference forward map.
pub const MIN_AUTO_RHS_DEGREE: usize = 32;

/// Degrees used by the self-test.
pub const SELFTEST_DEGREES: [usize; 2] = [10, 20];

/// DLS is flagged as degraded when its error exceeds LS by this factor.
pub const DLS_DEGRADATION_FACTOR: f64 = 10.0;

/// Named exact densities for manufactured data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DensitySpec {
    /// `e^{sin t}`.
    #[default]
    ExpSin,
    /// `sin t`.
    Sin,
    /// `1`.
    Const,
    /// `0`.
    Zero,
}

impl DensitySpec {
    pub fn name(self) -> &'static str {
        match self {
            DensitySpec::ExpSin => "exp-sin",
            DensitySpec::Sin => "sin",
            DensitySpec::Const => "const",
            DensitySpec::Zero => "zero",
        }
    }

    pub fn function(self) -> DensityFn {
        match self {
            DensitySpec::ExpSin => Arc::new(|t: f64| t.sin().exp()),
            DensitySpec::Sin => Arc::new(|t: f64| t.sin()),
            DensitySpec::Const => Arc::new(|_| 1.0),
            DensitySpec::Zero => Arc::new(|_| 0.0),
        }
    }
}

impl fmt::Display for DensitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DensitySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exp-sin" | "expsin" => Ok(DensitySpec::ExpSin),
            "sin" => Ok(DensitySpec::Sin),
            "const" | "one" => Ok(DensitySpec::Const),
            "zero" => Ok(DensitySpec::Zero),
            "paper-unknown" => Err(Error::Config(
                "density 'paper-unknown' has no analytic form; choose exp-sin, sin, const or zero".into(),
            )),
            other => Err(Error::Config(format!(
                "unknown density '{other}' (expected exp-sin, sin, const or zero)"
            ))),
        }
    }
}

/// Curve name plus parameters, e.g. `ellipse(1,2)`, `ellipse:1,2` or `expblob`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub name: String,
    pub params: Vec<f64>,
}

impl CurveSpec {
    pub fn build(&self) -> Result<BoundaryCurve> {
        BoundaryCurve::make_builtin(&self.name, &self.params)
    }
}

impl Default for CurveSpec {
    fn default() -> Self {
        Self {
            name: "ellipse".into(),
            params: vec![1.0, 2.0],
        }
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.is_empty() {
            return f.write_str(&self.name);
        }
        let p: Vec<String> = self.params.iter().map(|x| x.to_string()).collect();
        write!(f, "{}({})", self.name, p.join(";"))
    }
}

impl FromStr for CurveSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = if let Some(open) = s.find('(') {
            let inner = s[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Config(format!("unbalanced parentheses in curve '{s}'")))?;
            (&s[..open], inner)
        } else if let Some((name, rest)) = s.split_once(':') {
            (name, rest)
        } else {
            (s, "")
        };
        let params = if rest.trim().is_empty() {
            Vec::new()
        } else {
            parse_list(rest, "curve parameter")?
        };
        let spec = Self {
            name: name.trim().to_ascii_lowercase(),
            params,
        };
        spec.build()?;
        Ok(spec)
    }
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split([',', ';'])
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| Error::Config(format!("invalid {what} '{x}'"))))
        .collect()
}

fn parse_degrees(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        if let Some((lo, rest)) = item.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((hi, step)) => (hi, step),
                None => (rest, "1"),
            };
            let parse = |x: &str| -> Result<usize> {
                x.trim().parse().map_err(|_| Error::Config(format!("invalid degree range '{item}'")))
            };
            let (lo, hi, step) = (parse(lo)?, parse(hi)?, parse(step)?);
            if step == 0 || lo > hi {
                return Err(Error::Config(format!("invalid degree range '{item}'")));
            }
            out.extend((lo..=hi).step_by(step));
        } else {
            out.push(item.parse().map_err(|_| Error::Config(format!("invalid degree '{item}'")))?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub curve: CurveSpec,
    pub methods: Vec<MethodKind>,
    pub n_values: Vec<usize>,
    pub deltas: Vec<f64>,
    pub density: DensitySpec,
    /// 0 = automatic `max(4n, 32)`; otherwise the whole reference pipeline
    /// runs at this fixed degree.
    pub rhs_degree: usize,
    pub convention: Convention,
    /// Reserved; the noise model is deterministic.
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            curve: CurveSpec::default(),
            methods: MethodKind::ALL.to_vec(),
            n_values: vec![2, 4, 6, 8, 10, 12],
            deltas: vec![0.0],
            density: DensitySpec::default(),
            rhs_degree: 0,
            convention: Convention::default(),
            seed: 0,
            output: None,
        }
    }
}

impl ExperimentConfig {
    /// Parses `key = value` lines on top of the defaults. `#` starts a comment.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value, got '{line}'", lineno + 1)))?;
            cfg.set(key, value)?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_kv_str(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "curve" => self.curve = value.parse()?,
            "method" | "methods" => self.methods = parse_list(value, "method")?,
            "n" | "n_values" => self.n_values = parse_degrees(value)?,
            "delta" | "deltas" => self.deltas = parse_list(value, "noise level")?,
            "density" => self.density = value.parse()?,
            "rhs_degree" => {
                self.rhs_degree = value
                    .parse()
                    .map_err(|_| Error::Config(format!("invalid rhs_degree '{value}'")))?
            }
            "convention" => self.convention = value.parse()?,
            "seed" => self.seed = value.parse().map_err(|_| Error::Config(format!("invalid seed '{value}'")))?,
            "out" | "output" => self.output = if value.is_empty() { None } else { Some(PathBuf::from(value)) },
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::Config("no method selected".into()));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n < 2) {
            return Err(Error::Config(format!("degrees must be >= 2, got {n}")));
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("n values must be strictly ascending".into()));
        }
        if let Some(d) = self.deltas.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
            return Err(Error::Config(format!("noise levels must be finite and >= 0, got {d}")));
        }
        Ok(())
    }

    pub fn kernel_parts(&self) -> Result<KernelParts> {
        KernelParts::new(self.curve.build()?, self.convention)
    }

    /// Manufactured noise-free problem for degree `n`.
    ///
    /// The named density is the doubled-convention solution, so both
    /// conventions see the same boundary data `g`; under the classic
    /// convention the exact density is `Ψ†/c = 2Ψ†`.
    pub fn problem(&self, parts: &KernelParts, n: usize) -> Result<Problem> {
        let (degree, fixed_degree) = match self.rhs_degree {
            0 => ((4 * n).max(MIN_AUTO_RHS_DEGREE), false),
            d => (d, true),
        };
        let base = self.density.function();
        let exact: DensityFn = match parts.convention() {
            Convention::Doubled => base,
            conv => {
                let inv = 1.0 / conv.scale();
                Arc::new(move |t| inv * base(t))
            }
        };
        Problem::manufactured(parts.clone(), exact, degree, fixed_degree, 0.0)
    }
}

/// One numeric CSV cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    Empty,
    Failed,
}

impl Cell {
    pub fn value(self) -> Option<f64> {
        match self {
            Cell::Value(x) => Some(x),
            _ => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Value(x) => write!(f, "{}", sci(*x)),
            Cell::Empty => Ok(()),
            Cell::Failed => f.write_str("failed"),
        }
    }
}

/// Scientific notation with 10 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.9e}")
}

fn opt(x: Option<f64>) -> Cell {
    x.map_or(Cell::Empty, Cell::Value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub curve: String,
    pub method: MethodKind,
    pub n: usize,
    pub delta: f64,
    pub r: Cell,
    pub residual: Cell,
    pub condition: Cell,
    pub elapsed_s: Cell,
    pub u_inf: Cell,
    pub err_grid: Cell,
}

impl RunRecord {
    fn failed(curve: &str, method: MethodKind, n: usize, delta: f64, condition: Option<f64>, elapsed: f64) -> Self {
        Self {
            curve: curve.to_string(),
            method,
            n,
            delta,
            r: Cell::Failed,
            residual: Cell::Failed,
            condition: condition.map_or(Cell::Failed, Cell::Value),
            elapsed_s: Cell::Value(elapsed),
            u_inf: Cell::Failed,
            err_grid: Cell::Empty,
        }
    }

    pub fn from_report(curve: &str, delta: f64, rep: &SolveReport, parts: &KernelParts, elapsed: f64) -> Self {
        Self {
            curve: curve.to_string(),
            method: rep.method,
            n: rep.n,
            delta,
            r: opt(rep.r),
            residual: Cell::Value(rep.residual),
            condition: Cell::Value(rep.condition),
            elapsed_s: Cell::Value(elapsed),
            u_inf: Cell::Value(2.0 * parts.convention().scale() * parts.mean_value(&rep.density)),
            err_grid: Cell::Empty,
        }
    }

    pub fn is_failed(&self) -> bool {
        self.r == Cell::Failed
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.curve,
            self.method,
            self.n,
            sci(self.delta),
            self.r,
            self.residual,
            self.condition,
            self.elapsed_s,
            self.u_inf,
            self.err_grid
        )
    }
}

/// Per-`n` data shared by all methods and noise levels.
struct Stage {
    op: DiscreteOperator,
    problem: Problem,
    setup_s: f64,
}

fn stage(cfg: &ExperimentConfig, parts: &KernelParts, n: usize) -> Result<Stage> {
    let start = Instant::now();
    let op = DiscreteOperator::assemble(parts, n)?;
    let problem = cfg.problem(parts, n)?;
    Ok(Stage {
        op,
        problem,
        setup_s: start.elapsed().as_secs_f64(),
    })
}

/// Runs one solve; solver failures become `Ok(Err(condition))`.
fn attempt(st: &Stage, method: MethodKind, delta: f64) -> Result<std::result::Result<SolveReport, f64>> {
    let problem = st.problem.with_noise(delta)?;
    match solve(&problem, &st.op, method) {
        Ok(rep) => Ok(Ok(rep)),
        Err(Error::SolverFailure { condition, .. }) => Ok(Err(condition)),
        Err(e) => Err(e),
    }
}

/// Runs every `(method, δ, n)` combination; rows are ordered by method, then
/// δ, then n. Solver failures are recorded as `failed` rows.
pub fn run_convergence(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let parts = cfg.kernel_parts()?;
    let label = cfg.curve.to_string();
    let stages = cfg
        .n_values
        .iter()
        .map(|&n| stage(cfg, &parts, n))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for &method in &cfg.methods {
        for &delta in &cfg.deltas {
            for st in &stages {
                let rec = match attempt(st, method, delta)? {
                    Ok(rep) => RunRecord::from_report(&label, delta, &rep, &parts, st.setup_s + rep.elapsed),
                    Err(cond) => RunRecord::failed(&label, method, st.op.degree(), delta, Some(cond), st.setup_s),
                };
                out.push(rec);
            }
        }
    }
    Ok(out)
}

/// Field value at `radius · direction` next to the far-field limit.
#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldRecord {
    pub curve: String,
    pub method: MethodKind,
    pub n: usize,
    pub delta: f64,
    pub direction: [f64; 2],
    pub radius: f64,
    pub u: Cell,
    pub u_inf: Cell,
    pub abs_diff: Cell,
}

impl FarFieldRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.curve,
            self.method,
            self.n,
            sci(self.delta),
            sci(self.direction[0]),
            sci(self.direction[1]),
            sci(self.radius),
            self.u,
            self.u_inf,
            self.abs_diff
        )
    }
}

pub fn default_radii() -> Vec<f64> {
    vec![1e2, 1e4, 1e6, 1e8, 1e10]
}

/// Samples the solved field along rays. Directions are normalized.
pub fn run_farfield(cfg: &ExperimentConfig, directions: &[[f64; 2]], radii: &[f64]) -> Result<Vec<FarFieldRecord>> {
    cfg.validate()?;
    if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("radii must be positive and strictly ascending".into()));
    }
    let mut dirs = Vec::with_capacity(directions.len());
    for d in directions {
        let norm = d[0].hypot(d[1]);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Config(format!("invalid direction ({}, {})", d[0], d[1])));
        }
        dirs.push([d[0] / norm, d[1] / norm]);
    }
    let parts = cfg.kernel_parts()?;
    let label = cfg.curve.to_string();
    let mut out = Vec::new();
    for &n in &cfg.n_values {
        let st = stage(cfg, &parts, n)?;
        for &method in &cfg.methods {
            for &delta in &cfg.deltas {
                let field = attempt(&st, method, delta)?.ok().map(|rep| ExteriorField::new(&parts, rep.density));
                for d in &dirs {
                    for &radius in radii {
                        let x = [radius * d[0], radius * d[1]];
                        let (u, u_inf, diff) = match &field {
                            Some(f) => {
                                let u = f.eval(x)?;
                                let u_inf = f.far_field();
                                (Cell::Value(u), Cell::Value(u_inf), Cell::Value((u - u_inf).abs()))
                            }
                            None => (Cell::Failed, Cell::Failed, Cell::Failed),
                        };
                        out.push(FarFieldRecord {
                            curve: label.clone(),
                            method,
                            n,
                            delta,
                            direction: *d,
                            radius,
                            u,
                            u_inf,
                            abs_diff: diff,
                        });
                    }
                }
            }
        }
    }
    // same ordering as the convergence table: method, δ, n, then ray
    out.sort_by_key(|r| {
        let m = cfg.methods.iter().position(|&x| x == r.method).unwrap_or(0);
        let d = cfg.deltas.iter().position(|&x| x == r.delta).unwrap_or(0);
        (m, d, r.n)
    });
    Ok(out)
}

/// Convergence rows with the near-boundary error against a Galerkin-
/// Collocation solve at degree 32 filled in.
pub fn run_errgrid(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let parts = cfg.kernel_parts()?;
    let reference = {
        let st = stage(cfg, &parts, ERRGRID_REFERENCE_DEGREE)?;
        let rep = solve(&st.problem, &st.op, MethodKind::Collocation)?;
        ExteriorField::new(&parts, rep.density)
    };
    if let Some(x) = err_grid_points().into_iter().find(|&x| !reference.is_exterior(x)) {
        return Err(Error::Domain(format!(
            "error grid point ({}, {}) is not exterior to {}",
            x[0], x[1], cfg.curve
        )));
    }
    let label = cfg.curve.to_string();
    let stages = cfg
        .n_values
        .iter()
        .map(|&n| stage(cfg, &parts, n))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for &method in &cfg.methods {
        for &delta in &cfg.deltas {
            for st in &stages {
                let rec = match attempt(st, method, delta)? {
                    Ok(rep) => {
                        let mut rec = RunRecord::from_report(&label, delta, &rep, &parts, st.setup_s + rep.elapsed);
                        let field = ExteriorField::new(&parts, rep.density);
                        rec.err_grid = Cell::Value(err_grid(&reference, &field)?);
                        rec
                    }
                    Err(cond) => RunRecord::failed(&label, method, st.op.degree(), delta, Some(cond), st.setup_s),
                };
                out.push(rec);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub records: Vec<RunRecord>,
    /// `(n, degraded)`: whether DLS failed or lost more than
    /// [`DLS_DEGRADATION_FACTOR`] in accuracy against LS.
    pub dls_degradation: Vec<(usize, bool)>,
}

impl SelftestReport {
    pub fn any_degraded(&self) -> bool {
        self.dls_degradation.iter().any(|&(_, d)| d)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for rec in &self.records {
            s.push_str(&format!(
                "{:<4} n={:<3} r={:<17} condition={}\n",
                rec.method.short_name(),
                rec.n,
                rec.r.to_string(),
                rec.condition
            ));
        }
        for &(n, degraded) in &self.dls_degradation {
            let verdict = if degraded { "observed" } else { "not observed" };
            s.push_str(&format!("DLS degradation relative to LS at n={n}: {verdict}\n"));
        }
        s
    }
}

/// All four methods at `n ∈ {10, 20}`, `δ = 0`, on the configured curve.
pub fn selftest(cfg: &ExperimentConfig) -> Result<SelftestReport> {
    let cfg = ExperimentConfig {
        methods: MethodKind::ALL.to_vec(),
        n_values: SELFTEST_DEGREES.to_vec(),
        deltas: vec![0.0],
        ..cfg.clone()
    };
    let records = run_convergence(&cfg)?;
    let dls_degradation = SELFTEST_DEGREES
        .iter()
        .map(|&n| {
            let find = |m| records.iter().find(|r| r.n == n && r.method == m);
            let ls = find(MethodKind::LeastSquares).and_then(|r| r.r.value());
            let dls = find(MethodKind::DualLeastSquares).and_then(|r| r.r.value());
            let degraded = match (ls, dls) {
                (_, None) => true,
                (Some(ls), Some(dls)) => dls > DLS_DEGRADATION_FACTOR * ls.max(f64::EPSILON),
                (None, Some(_)) => false,
            };
            (n, degraded)
        })
        .collect();
    Ok(SelftestReport {
        records,
        dls_degradation,
    })
}

pub fn write_csv(mut w: impl Write, records: &[RunRecord]) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{}", r.csv_row())?;
    }
    Ok(())
}

pub fn write_farfield_csv(mut w: impl Write, records: &[FarFieldRecord]) -> Result<()> {
    writeln!(w, "{FARFIELD_HEADER}")?;
    for r in records {
        writeln!(w, "{}", r.csv_row())?;
    }
    Ok(())
}
