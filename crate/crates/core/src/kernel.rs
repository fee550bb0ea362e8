//! The modified logarithmic kernel and its split
//!
//! ```text
//! G(t,s) = c · [ -(1/2π) ln(4 sin²((t-s)/2)) + k(t,s) ] + g3(t)
//! ```
//!
//! where `k` is the smooth remainder of `-(1/π) ln|γ(t) - γ(s)|` once the
//! pure log singularity is removed, and `g3` collects the curve-dependent
//! terms that do not depend on `s`. The scale `c` is fixed by the
//! [`Convention`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, BoundaryCurve, DEFAULT_GEOMETRY_NODES};
use crate::quadrature;
use crate::trig::{interpolate, NodalValues, TrigPoly};

/// Below this parameter gap the smooth kernel is evaluated from velocities
/// only, avoiding the cancellation in `γ(t) - γ(s)`.
pub const NEAR_DIAGONAL: f64 = 1e-6;

/// Degree at which the curve term `g3` is resolved (`2·128 = 256` nodes).
pub const DEFAULT_G3_DEGREE: usize = DEFAULT_GEOMETRY_NODES / 2;

/// Overall scaling of the modified single-layer operator.
///
/// `Classic` uses prefactor `-1/(2π)` and additive constant `1/|∂Ω|`;
/// `Doubled` uses `-1/π` and `2/|∂Ω|`. Densities solved under `Classic` are
/// twice the `Doubled` ones; the exterior fields coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    Classic,
    #[default]
    Doubled,
}

impl Convention {
    /// Factor relative to the doubled operator.
    pub fn scale(self) -> f64 {
        match self {
            Convention::Classic => 0.5,
            Convention::Doubled => 1.0,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Classic => "classic",
            Convention::Doubled => "doubled",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "classic" => Ok(Convention::Classic),
            "doubled" => Ok(Convention::Doubled),
            other => Err(Error::Config(format!(
                "unknown convention '{other}' (expected classic or doubled)"
            ))),
        }
    }
}

/// `ln(4 sin²((t-s)/2))`, the raw singular factor. Only quadrature weights
/// consume it; it is never integrated pointwise.
pub fn g1_log_kernel(t: f64, s: f64) -> Result<f64> {
    let half = 0.5 * wrap_angle(t - s);
    let sn = half.sin();
    if sn == 0.0 {
        return Err(Error::Domain(format!("log kernel is singular at t = s = {t}")));
    }
    Ok((4.0 * sn * sn).ln())
}

/// Smooth remainder `k(t,s) = -(1/2π) ln(|γ(t)-γ(s)|² / (4 sin²((t-s)/2)))`,
/// scaled by the convention, with `k(t,t) = -(1/π) ln|γ'(t)|`.
pub fn smooth_kernel_on(curve: &BoundaryCurve, convention: Convention, t: f64, s: f64) -> f64 {
    let d = wrap_angle(t - s);
    let ratio = if d.abs() <= NEAR_DIAGONAL {
        // γ(t) - γ(s) ≈ (t-s)(γ'(t) + γ'(s))/2 to second order, and the
        // (t-s)² cancels against 4 sin²((t-s)/2) up to the sinc factor.
        let [ax, ay] = curve.velocity(t);
        let [bx, by] = curve.velocity(s);
        let mean_sq = 0.25 * ((ax + bx).powi(2) + (ay + by).powi(2));
        let sinc = if d == 0.0 {
            1.0
        } else {
            (0.5 * d).sin() / (0.5 * d)
        };
        mean_sq / (sinc * sinc)
    } else {
        let [px, py] = curve.position(t);
        let [qx, qy] = curve.position(s);
        let sn = (0.5 * d).sin();
        ((px - qx).powi(2) + (py - qy).powi(2)) / (4.0 * sn * sn)
    };
    -convention.scale() / (2.0 * PI) * ratio.ln()
}

/// Curve term of the kernel at degree `n`:
///
/// `g3 = -(1/|∂Ω|) S_K |γ'| + 2c/|∂Ω|`
///
/// with `S_K` the convention-scaled single-layer operator discretized at
/// degree `n` and `c` the convention scale.
pub fn build_g3(curve: &BoundaryCurve, convention: Convention, n: usize) -> Result<TrigPoly> {
    let length = curve.boundary_length(DEFAULT_GEOMETRY_NODES)?;
    Ok(build_g3_with_length(curve, convention, n, length))
}

fn build_g3_with_length(curve: &BoundaryCurve, convention: Convention, n: usize, length: f64) -> TrigPoly {
    let speed = NodalValues::sample(n, |t| curve.speed(t));
    let values = quadrature::single_layer_nodal(curve, convention, &speed);
    let c = 2.0 * convention.scale() / length;
    let g3: Vec<f64> = values.into_iter().map(|v| c - v / length).collect();
    interpolate(&NodalValues::new(n, g3).expect("grid length"))
}

/// Precomputed geometry for one curve under one convention.
#[derive(Debug, Clone)]
pub struct KernelParts {
    curve: BoundaryCurve,
    convention: Convention,
    boundary_length: f64,
    g3: TrigPoly,
}

impl KernelParts {
    pub fn new(curve: BoundaryCurve, convention: Convention) -> Result<Self> {
        Self::with_g3_degree(curve, convention, DEFAULT_G3_DEGREE)
    }

    /// As [`KernelParts::new`] with an explicit resolution for `g3`.
    pub fn with_g3_degree(curve: BoundaryCurve, convention: Convention, g3_degree: usize) -> Result<Self> {
        curve.check_regular(DEFAULT_GEOMETRY_NODES)?;
        let boundary_length = curve.boundary_length(DEFAULT_GEOMETRY_NODES)?;
        if !(boundary_length > 0.0) {
            return Err(Error::Domain(format!("curve {curve} has non-positive length")));
        }
        let g3 = build_g3_with_length(&curve, convention, g3_degree, boundary_length);
        Ok(Self {
            curve,
            convention,
            boundary_length,
            g3,
        })
    }

    pub fn curve(&self) -> &BoundaryCurve {
        &self.curve
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// `|∂Ω|`
    pub fn boundary_length(&self) -> f64 {
        self.boundary_length
    }

    /// `g3` at the resolution fixed at construction.
    pub fn g3(&self) -> &TrigPoly {
        &self.g3
    }

    pub fn g3_at(&self, t: f64) -> f64 {
        self.g3.eval(t)
    }

    /// `|γ'(t_j)|` on the degree-`n` grid.
    pub fn speed_samples(&self, n: usize) -> NodalValues {
        NodalValues::sample(n, |t| self.curve.speed(t))
    }

    pub fn smooth_kernel(&self, t: f64, s: f64) -> f64 {
        smooth_kernel_on(&self.curve, self.convention, t, s)
    }

    /// Full kernel `G(t,s)` for `t ≠ s`.
    pub fn full_kernel(&self, t: f64, s: f64) -> Result<f64> {
        let log = g1_log_kernel(t, s)?;
        Ok(-self.convention.scale() / (2.0 * PI) * log + self.smooth_kernel(t, s) + self.g3_at(t))
    }

    /// Mean value `M = (1/|∂Ω|) ∫₀^{2π} Ψ(s) ds` of a speed-weighted density.
    pub fn mean_value(&self, density: &TrigPoly) -> f64 {
        density.mean_integral() / self.boundary_length
    }
}
