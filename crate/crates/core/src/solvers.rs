//! Least squares, dual least squares, Bubnov-Galerkin and Galerkin-Collocation
//! solutions of `S_0 Ψ = g^δ` in `X_n`.
//!
//! The three projection methods work in L²-orthonormal coordinates of `X_n`,
//! where the discrete adjoint is the matrix transpose. Collocation works on
//! nodal values.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::kernel::KernelParts;
use crate::quadrature::{forward_map, DiscreteOperator};
use crate::trig::{interpolate, l2_distance, NodalValues, TrigPoly};

/// Relative pivot size below which a system is declared singular.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

/// Frequency of the deterministic perturbation added to the data.
pub const NOISE_FREQUENCY: usize = 6;

pub type DensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodKind {
    LeastSquares,
    DualLeastSquares,
    BubnovGalerkin,
    Collocation,
}

impl MethodKind {
    pub const ALL: [MethodKind; 4] = [
        MethodKind::LeastSquares,
        MethodKind::DualLeastSquares,
        MethodKind::BubnovGalerkin,
        MethodKind::Collocation,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            MethodKind::LeastSquares => "LS",
            MethodKind::DualLeastSquares => "DLS",
            MethodKind::BubnovGalerkin => "BG",
            MethodKind::Collocation => "GC",
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for MethodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "LS" => Ok(MethodKind::LeastSquares),
            "DLS" => Ok(MethodKind::DualLeastSquares),
            "BG" => Ok(MethodKind::BubnovGalerkin),
            "GC" => Ok(MethodKind::Collocation),
            other => Err(Error::Config(format!(
                "unknown method '{other}' (expected LS, DLS, BG or GC)"
            ))),
        }
    }
}

/// `g^δ = g + δ sin(6t)/√π`, so that `‖g^δ - g‖_{L²} = δ`.
pub fn make_noisy_rhs(g: &TrigPoly, delta: f64) -> Result<TrigPoly> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::Input(format!("noise level must be a finite non-negative number, got {delta}")));
    }
    let mut out = g.padded(g.degree().max(NOISE_FREQUENCY + 1));
    let b = out.sin_coeff(NOISE_FREQUENCY);
    out.set_sin_coeff(NOISE_FREQUENCY, b + delta / PI.sqrt());
    Ok(out)
}

/// `‖Ψ_n - Ψ†‖_{L²(0,2π)}` by the trapezoid on `8n` points.
pub fn error_metric(density: &TrigPoly, exact: &dyn Fn(f64) -> f64) -> f64 {
    error_metric_on(density, exact, 8 * density.degree())
}

pub fn error_metric_on(density: &TrigPoly, exact: &dyn Fn(f64) -> f64, points: usize) -> f64 {
    l2_distance(points, |t| density.eval(t), exact)
}

/// Data of one solve: the kernel, the (exact) boundary data and the noise
/// level applied on top of it.
#[derive(Clone)]
pub struct Problem {
    parts: KernelParts,
    exact: Option<DensityFn>,
    rhs: TrigPoly,
    noise: f64,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("curve", &self.parts.curve().label())
            .field("convention", &self.parts.convention())
            .field("has_exact", &self.exact.is_some())
            .field("rhs_degree", &self.rhs.degree())
            .field("noise", &self.noise)
            .finish()
    }
}

impl Problem {
    /// Boundary data given directly.
    pub fn new(parts: KernelParts, rhs: TrigPoly, noise: f64) -> Result<Self> {
        make_noisy_rhs(&rhs, noise)?;
        Ok(Self {
            parts,
            exact: None,
            rhs,
            noise,
        })
    }

    /// Boundary data manufactured from a known density by the reference
    /// forward map at `reference_degree`.
    pub fn manufactured(
        parts: KernelParts,
        exact: DensityFn,
        reference_degree: usize,
        fixed_degree: bool,
        noise: f64,
    ) -> Result<Self> {
        let f = exact.clone();
        let rhs = forward_map(&parts, move |t| f(t), reference_degree, fixed_degree)?;
        let mut p = Self::new(parts, rhs, noise)?;
        p.exact = Some(exact);
        Ok(p)
    }

    pub fn parts(&self) -> &KernelParts {
        &self.parts
    }

    pub fn exact(&self) -> Option<&DensityFn> {
        self.exact.as_ref()
    }

    /// Noise-free data `g`.
    pub fn rhs(&self) -> &TrigPoly {
        &self.rhs
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    pub fn noisy_rhs(&self) -> TrigPoly {
        make_noisy_rhs(&self.rhs, self.noise).expect("noise level validated at construction")
    }

    /// Same data with another noise level.
    pub fn with_noise(&self, noise: f64) -> Result<Self> {
        make_noisy_rhs(&self.rhs, noise)?;
        Ok(Self { noise, ..self.clone() })
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub method: MethodKind,
    pub n: usize,
    pub density: TrigPoly,
    /// `‖P_n S_0^(n) Ψ_n - g^δ‖_{L²}`
    pub residual: f64,
    /// 2-norm condition number of the linear system actually solved.
    pub condition: f64,
    /// Wall seconds spent forming and solving the system.
    pub elapsed: f64,
    /// `‖Ψ_n - Ψ†‖_{L²}` when the exact density is known.
    pub r: Option<f64>,
}

/// Solves one discretized problem with `method` on the operator `op`.
pub fn solve(problem: &Problem, op: &DiscreteOperator, method: MethodKind) -> Result<SolveReport> {
    let n = op.degree();
    if n < 2 {
        return Err(Error::Precondition(format!("solvers need n >= 2, got {n}")));
    }
    let start = Instant::now();
    let g = problem.noisy_rhs();
    let b = op.galerkin_matrix();
    let projected = DVector::from_vec(g.truncated(n).orthonormal_coords());

    let (density, condition) = match method {
        MethodKind::LeastSquares => {
            let gram = b.transpose() * b;
            let rhs = b.transpose() * &projected;
            let (c, cond) = dense_solve(&gram, &rhs, method)?;
            (TrigPoly::from_orthonormal_coords(n, c.as_slice()), cond)
        }
        MethodKind::DualLeastSquares => {
            let gram = b * b.transpose();
            let (z, cond) = dense_solve(&gram, &projected, method)?;
            let c = b.transpose() * z;
            (TrigPoly::from_orthonormal_coords(n, c.as_slice()), cond)
        }
        MethodKind::BubnovGalerkin => {
            let (c, cond) = dense_solve(b, &projected, method)?;
            (TrigPoly::from_orthonormal_coords(n, c.as_slice()), cond)
        }
        MethodKind::Collocation => {
            let data = DVector::from_vec(g.sample(n).into_values());
            let (v, cond) = dense_solve(op.matrix(), &data, method)?;
            let v = NodalValues::new(n, v.as_slice().to_vec()).expect("grid length");
            (interpolate(&v), cond)
        }
    };
    let elapsed = start.elapsed().as_secs_f64();

    let residual = op.apply_projected(&density).sub(&g).l2_norm();
    let r = problem.exact().map(|f| error_metric(&density, f.as_ref()));
    Ok(SolveReport {
        method,
        n,
        density,
        residual,
        condition,
        elapsed,
        r,
    })
}

/// LU solve with a relative pivot check; returns the solution and the
/// 2-norm condition number of `m`.
fn dense_solve(m: &DMatrix<f64>, rhs: &DVector<f64>, method: MethodKind) -> Result<(DVector<f64>, f64)> {
    let condition = condition_number(m);
    let lu = m.clone().lu();
    let u = lu.u();
    let pivots: Vec<f64> = u.diagonal().iter().map(|x| x.abs()).collect();
    let max = pivots.iter().cloned().fold(0.0, f64::max);
    let min = pivots.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || min < PIVOT_TOLERANCE * max {
        return Err(Error::SolverFailure {
            method: method.to_string(),
            condition,
        });
    }
    let x = lu.solve(rhs).ok_or_else(|| Error::SolverFailure {
        method: method.to_string(),
        condition,
    })?;
    Ok((x, condition))
}

/// `σ_max / σ_min`, infinite for a numerically rank-deficient matrix.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}
