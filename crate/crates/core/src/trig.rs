//! Real trigonometric polynomials of the `2n`-dimensional space
//!
//! ```text
//! X_n = { Σ_{j=0}^{n} a_j cos jt + Σ_{j=1}^{n-1} b_j sin jt }
//! ```
//!
//! together with the equispaced grid `t_k = kπ/n`, `k = 0..2n-1`, on which
//! interpolation into `X_n` is unique. Transforms are direct `O(n²)` sums;
//! the problem sizes here never exceed a few hundred nodes.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// `t_k = kπ/n` for `k = 0..2n-1`.
pub fn nodes(n: usize) -> Vec<f64> {
    assert!(n >= 1, "grid degree must be positive");
    let h = PI / n as f64;
    (0..2 * n).map(|k| k as f64 * h).collect()
}

/// Trigonometric Lagrange basis function `L_j` of degree `n`, evaluated at `t`.
///
/// `L_j(t) = (1/2n) (1 + 2 Σ_{k=1}^{n-1} cos k(t - t_j) + cos n(t - t_j))`
pub fn lagrange_basis(n: usize, j: usize, t: f64) -> f64 {
    assert!(j < 2 * n, "node index {j} out of range for degree {n}");
    let d = t - j as f64 * PI / n as f64;
    let mid: f64 = (1..n).map(|k| (k as f64 * d).cos()).sum();
    (1.0 + 2.0 * mid + (n as f64 * d).cos()) / (2 * n) as f64
}

/// Samples of a function on the degree-`n` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalValues {
    n: usize,
    values: Vec<f64>,
}

impl NodalValues {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("grid degree must be positive".into()));
        }
        if values.len() != 2 * n {
            return Err(Error::Precondition(format!(
                "degree {n} grid needs {} values, got {}",
                2 * n,
                values.len()
            )));
        }
        Ok(Self { n, values })
    }

    pub fn sample(n: usize, f: impl Fn(f64) -> f64) -> Self {
        Self {
            n,
            values: nodes(n).into_iter().map(f).collect(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            values: vec![0.0; 2 * n],
        }
    }

    /// The nodal indicator of node `j`, i.e. the samples of `L_j`.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = Self::zeros(n);
        v.values[j] = 1.0;
        v
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Trapezoidal value of `∫₀^{2π}` of the interpolant.
    pub fn integral(&self) -> f64 {
        PI / self.n as f64 * self.values.iter().sum::<f64>()
    }
}

/// `p(t) = Σ_{j=0}^{n} a_j cos jt + Σ_{j=1}^{n-1} b_j sin jt`
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    n: usize,
    /// `a_0..=a_n`
    cos: Vec<f64>,
    /// `b_0..b_{n-1}`, with `b_0` fixed at zero.
    sin: Vec<f64>,
}

impl TrigPoly {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "degree must be positive");
        Self {
            n,
            cos: vec![0.0; n + 1],
            sin: vec![0.0; n],
        }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        let mut p = Self::zero(n);
        p.cos[0] = c;
        p
    }

    /// Builds from cosine coefficients `a_0..=a_n` and sine coefficients
    /// `b_1..=b_{n-1}`.
    pub fn from_coefficients(cos: Vec<f64>, sin_from_one: Vec<f64>) -> Result<Self> {
        if cos.len() < 2 {
            return Err(Error::Precondition("need at least a_0 and a_1".into()));
        }
        let n = cos.len() - 1;
        if sin_from_one.len() != n - 1 {
            return Err(Error::Precondition(format!(
                "degree {n} needs {} sine coefficients, got {}",
                n - 1,
                sin_from_one.len()
            )));
        }
        let mut sin = Vec::with_capacity(n);
        sin.push(0.0);
        sin.extend(sin_from_one);
        Ok(Self { n, cos, sin })
    }

    /// `cos(jt)` in `X_n`, `0 <= j <= n`.
    pub fn cos_mode(n: usize, j: usize) -> Self {
        assert!(j <= n);
        let mut p = Self::zero(n);
        p.cos[j] = 1.0;
        p
    }

    /// `sin(jt)` in `X_n`, `1 <= j <= n-1`.
    pub fn sin_mode(n: usize, j: usize) -> Self {
        assert!(j >= 1 && j < n);
        let mut p = Self::zero(n);
        p.sin[j] = 1.0;
        p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// `a_j`; zero beyond the degree.
    pub fn cos_coeff(&self, j: usize) -> f64 {
        self.cos.get(j).copied().unwrap_or(0.0)
    }

    /// `b_j`; zero for `j = 0` and for `j >= n`.
    pub fn sin_coeff(&self, j: usize) -> f64 {
        self.sin.get(j).copied().unwrap_or(0.0)
    }

    pub fn set_cos_coeff(&mut self, j: usize, value: f64) {
        self.cos[j] = value;
    }

    pub fn set_sin_coeff(&mut self, j: usize, value: f64) {
        assert!(j >= 1, "b_0 is not a coefficient");
        self.sin[j] = value;
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = self.cos[0];
        for j in 1..=self.n {
            let (s, c) = (j as f64 * t).sin_cos();
            acc += self.cos[j] * c;
            if j < self.n {
                acc += self.sin[j] * s;
            }
        }
        acc
    }

    /// Values at the grid of degree `m`.
    pub fn sample(&self, m: usize) -> NodalValues {
        NodalValues::sample(m, |t| self.eval(t))
    }

    /// Values at this polynomial's own grid.
    pub fn to_nodal(&self) -> NodalValues {
        self.sample(self.n)
    }

    /// Zero-pads to degree `m >= n`. The top cosine of the old degree stays a
    /// plain cosine coefficient.
    pub fn padded(&self, m: usize) -> Self {
        assert!(m >= self.n, "cannot pad degree {} down to {m}", self.n);
        let mut p = Self::zero(m);
        p.cos[..=self.n].copy_from_slice(&self.cos);
        p.sin[..self.n].copy_from_slice(&self.sin);
        p
    }

    /// Orthogonal L² projection onto `X_m` by coefficient truncation.
    pub fn truncated(&self, m: usize) -> Self {
        let mut p = Self::zero(m);
        for j in 0..=m.min(self.n) {
            p.cos[j] = self.cos[j];
        }
        for j in 1..m.min(self.n) {
            p.sin[j] = self.sin[j];
        }
        p
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n: self.n,
            cos: self.cos.iter().map(|x| c * x).collect(),
            sin: self.sin.iter().map(|x| c * x).collect(),
        }
    }

    /// `self + c·other`, at the larger of the two degrees.
    pub fn add_scaled(&self, c: f64, other: &TrigPoly) -> Self {
        let m = self.n.max(other.n);
        let mut p = self.padded(m);
        for j in 0..=other.n {
            p.cos[j] += c * other.cos[j];
        }
        for j in 1..other.n {
            p.sin[j] += c * other.sin[j];
        }
        p
    }

    pub fn sub(&self, other: &TrigPoly) -> Self {
        self.add_scaled(-1.0, other)
    }

    /// Exact `∫₀^{2π} p q dt` from the coefficients.
    pub fn inner_product(&self, other: &TrigPoly) -> f64 {
        let m = self.n.max(other.n);
        let mut acc = TAU * self.cos_coeff(0) * other.cos_coeff(0);
        for j in 1..=m {
            acc += PI * (self.cos_coeff(j) * other.cos_coeff(j) + self.sin_coeff(j) * other.sin_coeff(j));
        }
        acc
    }

    pub fn l2_norm(&self) -> f64 {
        self.inner_product(self).sqrt()
    }

    /// `∫₀^{2π} p dt = 2π a_0`.
    pub fn mean_integral(&self) -> f64 {
        TAU * self.cos[0]
    }

    /// `‖p‖_{H^r} = (Σ_j (1+j²)^r |c_j|²)^{1/2}` over the complex coefficients
    /// of `p = Σ c_j e^{ijt}`. At `r = 0` this is `‖p‖_{L²} / √(2π)`.
    pub fn sobolev_norm(&self, r: f64) -> f64 {
        let mut acc = self.cos[0] * self.cos[0];
        for j in 1..=self.n {
            let w = (1.0 + (j * j) as f64).powf(r);
            // |c_j|² + |c_{-j}|² = (a_j² + b_j²) / 2
            acc += w * 0.5 * (self.cos[j].powi(2) + self.sin_coeff(j).powi(2));
        }
        acc.sqrt()
    }

    /// Coordinates in the L²-orthonormal basis
    /// `{1/√(2π), cos jt/√π (1..=n), sin jt/√π (1..n)}`, ordered
    /// `a_0..=a_n` then `b_1..b_{n-1}`.
    pub fn orthonormal_coords(&self) -> Vec<f64> {
        let sp = PI.sqrt();
        let mut out = Vec::with_capacity(2 * self.n);
        out.push(TAU.sqrt() * self.cos[0]);
        out.extend(self.cos[1..].iter().map(|a| sp * a));
        out.extend(self.sin[1..].iter().map(|b| sp * b));
        out
    }

    /// Inverse of [`TrigPoly::orthonormal_coords`].
    pub fn from_orthonormal_coords(n: usize, coords: &[f64]) -> Self {
        assert_eq!(coords.len(), 2 * n);
        let sp = PI.sqrt();
        let mut p = Self::zero(n);
        p.cos[0] = coords[0] / TAU.sqrt();
        for j in 1..=n {
            p.cos[j] = coords[j] / sp;
        }
        for j in 1..n {
            p.sin[j] = coords[n + j] / sp;
        }
        p
    }

    /// Largest coefficient difference after padding both to a common degree.
    pub fn coefficient_distance(&self, other: &TrigPoly) -> f64 {
        let m = self.n.max(other.n);
        let mut d: f64 = 0.0;
        for j in 0..=m {
            d = d.max((self.cos_coeff(j) - other.cos_coeff(j)).abs());
            d = d.max((self.sin_coeff(j) - other.sin_coeff(j)).abs());
        }
        d
    }
}

/// Trigonometric interpolation `Π_n`: the unique element of `X_n` matching
/// the `2n` nodal values.
pub fn interpolate(v: &NodalValues) -> TrigPoly {
    let n = v.n;
    let m = (2 * n) as f64;
    let t = nodes(n);
    let mut p = TrigPoly::zero(n);
    p.cos[0] = v.values.iter().sum::<f64>() / m;
    for k in 1..n {
        let (mut a, mut b) = (0.0, 0.0);
        for (x, tj) in v.values.iter().zip(&t) {
            let (s, c) = (k as f64 * tj).sin_cos();
            a += x * c;
            b += x * s;
        }
        p.cos[k] = a / n as f64;
        p.sin[k] = b / n as f64;
    }
    p.cos[n] = v
        .values
        .iter()
        .enumerate()
        .map(|(j, x)| if j % 2 == 0 { *x } else { -*x })
        .sum::<f64>()
        / m;
    p
}

/// Orthogonal projection `P_n` onto `X_n` from `samples` of a function on a
/// fine equispaced grid over `[0, 2π)` (at least `4n` points).
pub fn project(samples: &[f64], n: usize) -> Result<TrigPoly> {
    let m = samples.len();
    if n == 0 {
        return Err(Error::Precondition("projection degree must be positive".into()));
    }
    if m < 4 * n {
        return Err(Error::Precondition(format!(
            "projection to degree {n} needs at least {} grid points, got {m}",
            4 * n
        )));
    }
    let h = TAU / m as f64;
    let mut p = TrigPoly::zero(n);
    p.cos[0] = samples.iter().sum::<f64>() / m as f64;
    for k in 1..=n {
        let (mut a, mut b) = (0.0, 0.0);
        for (i, x) in samples.iter().enumerate() {
            let (s, c) = (k as f64 * i as f64 * h).sin_cos();
            a += x * c;
            b += x * s;
        }
        p.cos[k] = 2.0 * a / m as f64;
        if k < n {
            p.sin[k] = 2.0 * b / m as f64;
        }
    }
    Ok(p)
}

/// Samples `f` on `m` equispaced points of `[0, 2π)`.
pub fn fine_samples(m: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let h = TAU / m as f64;
    (0..m).map(|i| f(i as f64 * h)).collect()
}

/// Trapezoidal `L²(0, 2π)` distance between two functions on `m` points.
pub fn l2_distance(m: usize, f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64) -> f64 {
    let h = TAU / m as f64;
    let s: f64 = (0..m)
        .map(|i| {
            let t = i as f64 * h;
            (f(t) - g(t)).powi(2)
        })
        .sum();
    (h * s).sqrt()
}
