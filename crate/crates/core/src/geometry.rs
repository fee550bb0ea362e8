//! Analytic closed boundary curves `γ: [0, 2π) → R²`.
//!
//! Every curve carries a closed-form velocity; nothing in the production
//! path differentiates numerically.

use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::error::{Error, Result};

/// Node count used for geometry constants such as the boundary length.
pub const DEFAULT_GEOMETRY_NODES: usize = 256;

/// Smallest speed accepted at a sampled node.
pub const MIN_SPEED: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    /// `a (cos t, sin t)`
    Circle { radius: f64 },
    /// `(a cos t, b sin t)`
    Ellipse { a: f64, b: f64 },
    /// `(e^{-1 + cos t}, 2 e^{-1 + sin t})`
    ExpBlob,
}

/// A regular, 2π-periodic, analytic parameterization of a closed curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    shape: Shape,
    /// Parameter shift: the curve is evaluated at `t + phase`.
    phase: f64,
    label: String,
}

impl BoundaryCurve {
    pub fn circle(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Config(format!("circle radius must be positive, got {radius}")));
        }
        Ok(Self {
            shape: Shape::Circle { radius },
            phase: 0.0,
            label: format!("circle({radius})"),
        })
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(Error::Config(format!("ellipse semi-axes must be positive, got ({a}, {b})")));
        }
        Ok(Self {
            shape: Shape::Ellipse { a, b },
            phase: 0.0,
            label: format!("ellipse({a},{b})"),
        })
    }

    pub fn exp_blob() -> Self {
        Self {
            shape: Shape::ExpBlob,
            phase: 0.0,
            label: "expblob".to_string(),
        }
    }

    /// The disc of radius `e^{-1/2}`, on which the log kernel has a constant
    /// smooth remainder and `S_K 1 = 1`.
    pub fn unit_capacity_circle() -> Self {
        Self::circle((-0.5f64).exp()).expect("positive radius")
    }

    /// Builds one of the builtin curves by name.
    ///
    /// Recognized names: `circle(a)`, `ellipse(a, b)` and `expblob` (no
    /// parameters). Missing circle/ellipse parameters default to the unit
    /// capacity radius and the `(1, 2)` ellipse respectively.
    pub fn make_builtin(name: &str, params: &[f64]) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "circle" => match params {
                [] => Ok(Self::unit_capacity_circle()),
                [a] => Self::circle(*a),
                _ => Err(Error::Config(format!("circle takes one parameter, got {}", params.len()))),
            },
            "ellipse" => match params {
                [] => Self::ellipse(1.0, 2.0),
                [a, b] => Self::ellipse(*a, *b),
                _ => Err(Error::Config(format!("ellipse takes two parameters, got {}", params.len()))),
            },
            "expblob" => {
                if params.is_empty() {
                    Ok(Self::exp_blob())
                } else {
                    Err(Error::Config("expblob takes no parameters".into()))
                }
            }
            other => Err(Error::Config(format!(
                "unknown curve '{other}' (expected circle, ellipse or expblob)"
            ))),
        }
    }

    /// Same curve, parameterized by `t ↦ γ(t + shift)`.
    pub fn with_phase(&self, shift: f64) -> Self {
        Self {
            shape: self.shape,
            phase: self.phase + shift,
            label: format!("{}+{shift}", self.label),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn position(&self, t: f64) -> [f64; 2] {
        let t = t + self.phase;
        match self.shape {
            Shape::Circle { radius } => [radius * t.cos(), radius * t.sin()],
            Shape::Ellipse { a, b } => [a * t.cos(), b * t.sin()],
            Shape::ExpBlob => [(-1.0 + t.cos()).exp(), 2.0 * (-1.0 + t.sin()).exp()],
        }
    }

    pub fn velocity(&self, t: f64) -> [f64; 2] {
        let t = t + self.phase;
        match self.shape {
            Shape::Circle { radius } => [-radius * t.sin(), radius * t.cos()],
            Shape::Ellipse { a, b } => [-a * t.sin(), b * t.cos()],
            Shape::ExpBlob => [
                -t.sin() * (-1.0 + t.cos()).exp(),
                2.0 * t.cos() * (-1.0 + t.sin()).exp(),
            ],
        }
    }

    /// `|γ'(t)|`
    pub fn speed(&self, t: f64) -> f64 {
        let [vx, vy] = self.velocity(t);
        vx.hypot(vy)
    }

    /// Composite trapezoidal rule for `∫₀^{2π} |γ'(s)| ds` on `nodes` points.
    pub fn boundary_length(&self, nodes: usize) -> Result<f64> {
        if nodes < 4 || nodes % 2 != 0 {
            return Err(Error::Precondition(format!(
                "boundary length needs an even node count >= 4, got {nodes}"
            )));
        }
        let h = TAU / nodes as f64;
        Ok(h * (0..nodes).map(|i| self.speed(i as f64 * h)).sum::<f64>())
    }

    /// Checks `|γ'| >= MIN_SPEED` at `nodes` equispaced parameters.
    pub fn check_regular(&self, nodes: usize) -> Result<()> {
        let h = TAU / nodes as f64;
        for i in 0..nodes {
            let t = i as f64 * h;
            let s = self.speed(t);
            if !(s >= MIN_SPEED) {
                return Err(Error::Domain(format!(
                    "curve {} is not regular at t = {t}: |γ'| = {s:e}",
                    self.label
                )));
            }
        }
        Ok(())
    }

    /// Closed polygon through `nodes` equispaced points of the curve.
    pub fn polygon(&self, nodes: usize) -> Vec<[f64; 2]> {
        let h = TAU / nodes as f64;
        (0..nodes).map(|i| self.position(i as f64 * h)).collect()
    }
}

impl fmt::Display for BoundaryCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Wraps an angle difference into `(-π, π]`.
pub fn wrap_angle(d: f64) -> f64 {
    let mut r = d.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}
