//! Exterior harmonic field generated by a solved density.
//!
//! With `M = (1/|∂Ω|) ∫ Ψ ds` and `c` the convention scale,
//!
//! ```text
//! u(x) = -(c/π) ∫₀^{2π} (Ψ(s) - M |γ'(s)|) ln|x - γ(s)| ds + 2c M
//! ```
//!
//! The moment `Ψ - M|γ'|` integrates to zero, so `u(x) → 2cM` at infinity.
//! Plain trapezoid quadrature is used; it is accurate at distance `>= 0.1`
//! from the boundary for the builtin curves.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::DEFAULT_GEOMETRY_NODES;
use crate::kernel::KernelParts;
use crate::trig::TrigPoly;

/// Sample points of the near-boundary error grid: `(0.1 + i, 1.1 + j)`,
/// `1 <= i, j <= 20`.
pub fn err_grid_points() -> Vec<[f64; 2]> {
    let mut pts = Vec::with_capacity(400);
    for i in 1..=20 {
        for j in 1..=20 {
            pts.push([0.1 + i as f64, 1.1 + j as f64]);
        }
    }
    pts
}

/// Winding number of a closed polygon around `x`.
fn winding_number(polygon: &[[f64; 2]], x: [f64; 2]) -> i32 {
    let mut wn = 0;
    let n = polygon.len();
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        let cross = (b[0] - a[0]) * (x[1] - a[1]) - (x[0] - a[0]) * (b[1] - a[1]);
        if a[1] <= x[1] {
            if b[1] > x[1] && cross > 0.0 {
                wn += 1;
            }
        } else if b[1] <= x[1] && cross < 0.0 {
            wn -= 1;
        }
    }
    wn
}

#[derive(Debug, Clone)]
pub struct ExteriorField {
    parts: KernelParts,
    density: TrigPoly,
    /// `(γ(s_i), Ψ(s_i) - M|γ'(s_i)|)` on the quadrature nodes.
    samples: Vec<([f64; 2], f64)>,
    mean: f64,
    polygon: Vec<[f64; 2]>,
}

impl ExteriorField {
    /// Field with `max(4n, 256)` quadrature nodes.
    pub fn new(parts: &KernelParts, density: TrigPoly) -> Self {
        let nodes = (4 * density.degree()).max(DEFAULT_GEOMETRY_NODES);
        Self::with_nodes(parts, density, nodes).expect("default node count is valid")
    }

    pub fn with_nodes(parts: &KernelParts, density: TrigPoly, nodes: usize) -> Result<Self> {
        if nodes < 4 * density.degree() {
            return Err(Error::Precondition(format!(
                "field quadrature needs >= {} nodes for a degree {} density, got {nodes}",
                4 * density.degree(),
                density.degree()
            )));
        }
        let curve = parts.curve();
        let h = TAU / nodes as f64;
        let mut raw = Vec::with_capacity(nodes);
        let (mut psi_sum, mut len_sum) = (0.0, 0.0);
        for i in 0..nodes {
            let s = i as f64 * h;
            let psi = density.eval(s);
            let speed = curve.speed(s);
            psi_sum += psi;
            len_sum += speed;
            raw.push((curve.position(s), psi, speed));
        }
        // Trapezoid is exact for ∫Ψ here; using the same node sums for |∂Ω|
        // keeps the discrete moment at zero.
        let mean = psi_sum / len_sum;
        let samples = raw.into_iter().map(|(p, psi, speed)| (p, psi - mean * speed)).collect();
        Ok(Self {
            parts: parts.clone(),
            density,
            samples,
            mean,
            polygon: curve.polygon(DEFAULT_GEOMETRY_NODES),
        })
    }

    pub fn density(&self) -> &TrigPoly {
        &self.density
    }

    pub fn parts(&self) -> &KernelParts {
        &self.parts
    }

    /// `M` of the density.
    pub fn mean_value(&self) -> f64 {
        self.mean
    }

    pub fn is_exterior(&self, x: [f64; 2]) -> bool {
        winding_number(&self.polygon, x) == 0
    }

    /// `u(x)` for `x` outside the curve.
    pub fn eval(&self, x: [f64; 2]) -> Result<f64> {
        if !x.iter().all(|c| c.is_finite()) {
            return Err(Error::Domain(format!("non-finite evaluation point {x:?}")));
        }
        if !self.is_exterior(x) {
            return Err(Error::Domain(format!(
                "point ({}, {}) is not exterior to {}",
                x[0],
                x[1],
                self.parts.curve()
            )));
        }
        let h = TAU / self.samples.len() as f64;
        let mut acc = 0.0;
        for (p, w) in &self.samples {
            let d = (x[0] - p[0]).hypot(x[1] - p[1]);
            if d == 0.0 {
                return Err(Error::Domain(format!("point ({}, {}) lies on the boundary", x[0], x[1])));
            }
            acc += w * d.ln();
        }
        Ok(-self.prefactor() * h * acc + self.far_field())
    }

    /// `u_∞ = 2cM`.
    pub fn far_field(&self) -> f64 {
        2.0 * self.parts.convention().scale() * self.mean
    }

    fn prefactor(&self) -> f64 {
        self.parts.convention().scale() / PI
    }
}

/// `max |u_n(x) - u†(x)|` over the 20×20 grid of [`err_grid_points`].
pub fn err_grid(reference: &ExteriorField, approx: &ExteriorField) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in err_grid_points() {
        let a = reference.eval(x)?;
        let b = approx.eval(x)?;
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoundaryCurve;
    use crate::kernel::Convention;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn circle_parts() -> KernelParts {
        KernelParts::new(BoundaryCurve::unit_capacity_circle(), Convention::Doubled).unwrap()
    }

    #[test]
    fn zero_density_gives_zero_field() {
        let f = ExteriorField::new(&circle_parts(), TrigPoly::zero(8));
        for x in [[2.0, 0.0], [0.0, -5.0], [1e6, 1e6]] {
            assert_eq!(f.eval(x).unwrap(), 0.0);
        }
        assert_eq!(f.far_field(), 0.0);
    }

    #[test]
    fn constant_density_on_capacity_circle() {
        let f = ExteriorField::new(&circle_parts(), TrigPoly::constant(4, 1.0));
        let expect = 2.0 * 0.5f64.exp();
        assert!((f.far_field() - expect).abs() < 1e-13);
        for x in [[1.0, 0.0], [0.0, 3.0], [-2.0, -2.0], [1e6, 0.0]] {
            assert!((f.eval(x).unwrap() - expect).abs() <= 1e-10);
        }
    }

    #[test]
    fn zero_mean_density_has_zero_far_field() {
        let f = ExteriorField::new(&circle_parts(), TrigPoly::sin_mode(8, 6));
        assert!(f.far_field().abs() < 1e-15);
    }

    #[test]
    fn interior_and_boundary_points_are_rejected() {
        let parts = KernelParts::new(BoundaryCurve::ellipse(1.0, 2.0).unwrap(), Convention::Doubled).unwrap();
        let f = ExteriorField::new(&parts, TrigPoly::constant(4, 1.0));
        assert!(matches!(f.eval([0.0, 0.0]), Err(Error::Domain(_))));
        assert!(matches!(f.eval([0.5, 1.0]), Err(Error::Domain(_))));
        assert!(matches!(f.eval([1.0, 0.0]), Err(Error::Domain(_))));
        assert!(f.eval([1.5, 0.0]).is_ok());
    }

    #[test]
    fn err_grid_is_exterior_for_examples() {
        for curve in [BoundaryCurve::ellipse(1.0, 2.0).unwrap(), BoundaryCurve::exp_blob()] {
            let parts = KernelParts::new(curve, Convention::Doubled).unwrap();
            let f = ExteriorField::new(&parts, TrigPoly::constant(4, 1.0));
            assert!(err_grid_points().into_iter().all(|x| f.is_exterior(x)));
            assert_eq!(err_grid(&f, &f).unwrap(), 0.0);
        }
    }

    #[test]
    fn field_is_harmonic() {
        let parts = KernelParts::new(BoundaryCurve::ellipse(1.0, 2.0).unwrap(), Convention::Doubled).unwrap();
        let density = TrigPoly::from_coefficients(vec![1.0, 0.3, -0.2, 0.1], vec![0.5, 0.05]).unwrap();
        let f = ExteriorField::new(&parts, density);
        let mut rng = StdRng::seed_from_u64(8);
        let h = 1e-3;
        for _ in 0..8 {
            let r = rng.gen_range(2.5..6.0);
            let th = rng.gen_range(0.0..TAU);
            let x = [r * th.cos(), r * th.sin()];
            let u = |dx: f64, dy: f64| f.eval([x[0] + dx, x[1] + dy]).unwrap();
            let lap = (u(h, 0.0) + u(-h, 0.0) + u(0.0, h) + u(0.0, -h) - 4.0 * u(0.0, 0.0)) / (h * h);
            assert!(lap.abs() <= 1e-4, "laplacian {lap}");
        }
    }

    #[test]
    fn far_field_matches_mean_value() {
        let parts = KernelParts::new(BoundaryCurve::exp_blob(), Convention::Classic).unwrap();
        let density = TrigPoly::from_coefficients(vec![2.0, 0.3, 0.0], vec![0.1]).unwrap();
        let f = ExteriorField::new(&parts, density.clone());
        let expect = TAU * density.cos_coeff(0) / parts.boundary_length();
        assert!((f.far_field() - expect).abs() <= 1e-13);
        assert!((f.mean_value() - parts.mean_value(&density)).abs() <= 1e-13);
    }

    #[test]
    fn too_few_nodes_is_a_precondition_error() {
        let r = ExteriorField::with_nodes(&circle_parts(), TrigPoly::zero(16), 32);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
