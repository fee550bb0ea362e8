//! Discretization of the modified single-layer operator on the nodal basis.
//!
//! The log part is integrated exactly against the trigonometric interpolant
//! (weights `R_j`); the smooth remainder uses the composite trapezoid on the
//! same `2n` nodes. Together:
//!
//! ```text
//! (S_K^(n) Ψ)(t) = Σ_j Ψ(t_j) [ c R_j(t) + (π/n) k(t, t_j) ]
//! (S_0^(n) Ψ)(t) = (S_K^(n) Ψ)(t) + g3(t) ∫₀^{2π} Ψ
//! ```

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::BoundaryCurve;
use crate::kernel::{build_g3, smooth_kernel_on, Convention, KernelParts};
use crate::trig::{fine_samples, interpolate, nodes, project, NodalValues, TrigPoly};

/// Minimum number of fine-grid points used to project operator images onto
/// `X_n` for the Galerkin matrix.
pub const MIN_PROJECTION_POINTS: usize = 256;

/// Weight of node `j` for `-(1/2π) ∫ L_j(s) ln(4 sin²((t-s)/2)) ds`:
///
/// `R_j(t) = (1/n) { (1/2n) cos n(t-t_j) + Σ_{m=1}^{n-1} (1/m) cos m(t-t_j) }`
pub fn kress_weight(n: usize, j: usize, t: f64) -> f64 {
    assert!(j < 2 * n, "node index {j} out of range for degree {n}");
    let d = t - j as f64 * PI / n as f64;
    let mut acc = (n as f64 * d).cos() / (2 * n) as f64;
    for m in 1..n {
        acc += (m as f64 * d).cos() / m as f64;
    }
    acc / n as f64
}

/// `S_K^(n)` at every node of the grid of `v`.
pub(crate) fn single_layer_nodal(curve: &BoundaryCurve, convention: Convention, v: &NodalValues) -> Vec<f64> {
    let n = v.degree();
    let t = nodes(n);
    let scale = convention.scale();
    let h = PI / n as f64;
    // R_j(t_k) depends only on k - j
    let circulant: Vec<f64> = (0..2 * n).map(|m| kress_weight(n, 0, t[m])).collect();
    (0..2 * n)
        .map(|k| {
            v.values()
                .iter()
                .enumerate()
                .map(|(j, x)| {
                    let r = circulant[(k + 2 * n - j) % (2 * n)];
                    x * (scale * r + h * smooth_kernel_on(curve, convention, t[k], t[j]))
                })
                .sum()
        })
        .collect()
}

/// `(S_K^(n) Ψ)(t)` at an arbitrary angle from the nodal values of `Ψ`.
pub fn apply_sk(parts: &KernelParts, v: &NodalValues, t: f64) -> f64 {
    let n = v.degree();
    let scale = parts.convention().scale();
    let h = PI / n as f64;
    nodes(n)
        .into_iter()
        .zip(v.values())
        .enumerate()
        .map(|(j, (tj, x))| x * (scale * kress_weight(n, j, t) + h * parts.smooth_kernel(t, tj)))
        .sum()
}

/// `S_TK^(n) Ψ`: the log part, already in `X_n`, plus the interpolated smooth
/// part. Equivalently `Π_n` of the nodal values of `S_K^(n) Ψ`.
pub fn apply_stk(parts: &KernelParts, v: &NodalValues) -> TrigPoly {
    let values = single_layer_nodal(parts.curve(), parts.convention(), v);
    interpolate(&NodalValues::new(v.degree(), values).expect("grid length"))
}

/// `S_0^(n) Ψ = S_TK^(n) Ψ + Π_n(g3) ∫Π_n Ψ`, an element of `X_n`.
pub fn apply_s0(parts: &KernelParts, v: &NodalValues) -> TrigPoly {
    let n = v.degree();
    let g3 = interpolate(&NodalValues::sample(n, |t| parts.g3_at(t)));
    apply_stk(parts, v).add_scaled(v.integral(), &g3)
}

/// Right-hand side `g = S_0 Ψ†` manufactured from a known density.
///
/// With `fixed_degree = false` the single-layer part is discretized at
/// `degree` and the curve term uses the fully resolved `g3` of `parts`.
/// With `fixed_degree = true` every ingredient, `g3` included, is built
/// at `degree`, as in the fixed-degree reference pipeline.
pub fn forward_map(
    parts: &KernelParts,
    density: impl Fn(f64) -> f64,
    degree: usize,
    fixed_degree: bool,
) -> Result<TrigPoly> {
    if degree == 0 {
        return Err(Error::Precondition("forward map degree must be positive".into()));
    }
    let v = NodalValues::sample(degree, density);
    if fixed_degree {
        let g3 = build_g3(parts.curve(), parts.convention(), degree)?;
        Ok(apply_stk(parts, &v).add_scaled(v.integral(), &g3))
    } else {
        Ok(apply_stk(parts, &v).add_scaled(v.integral(), parts.g3()))
    }
}

/// Dense matrices of `S_0^(n)` on `X_n`.
///
/// `matrix` acts on nodal values: column `j` holds the values of
/// `S_0^(n) L_j` at the nodes (`A_kj = (S_0 L_j)(t_k)`), which is what
/// collocation solves. `galerkin` acts on coordinates in the L²-orthonormal
/// basis of `X_n` (see [`TrigPoly::orthonormal_coords`]) and holds the exact
/// L² projection `P_n S_0^(n)`, which the Petrov-Galerkin methods use.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    n: usize,
    parts: KernelParts,
    matrix: DMatrix<f64>,
    galerkin: DMatrix<f64>,
}

impl DiscreteOperator {
    pub fn assemble(parts: &KernelParts, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("operator degree must be positive".into()));
        }
        let dim = 2 * n;
        let t = nodes(n);
        let scale = parts.convention().scale();
        let h = PI / n as f64;
        let curve = parts.curve();
        let convention = parts.convention();

        let circulant: Vec<f64> = (0..dim).map(|m| kress_weight(n, 0, t[m])).collect();
        let g3_nodes: Vec<f64> = t.iter().map(|&tk| parts.g3_at(tk)).collect();
        let matrix = DMatrix::from_fn(dim, dim, |k, j| {
            scale * circulant[(k + dim - j) % dim] + h * smooth_kernel_on(curve, convention, t[k], t[j]) + h * g3_nodes[k]
        });

        // Smooth part sampled on a fine grid: fine[(m, j)] = (π/n) k(τ_m, t_j).
        let m_fine = MIN_PROJECTION_POINTS.max(8 * n);
        let tau = fine_samples(m_fine, |x| x);
        let fine = DMatrix::from_fn(m_fine, dim, |m, j| h * smooth_kernel_on(curve, convention, tau[m], t[j]));
        let g3_proj = parts.g3().truncated(n);

        let mut galerkin = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            let mut unit = vec![0.0; dim];
            unit[i] = 1.0;
            let psi = TrigPoly::from_orthonormal_coords(n, &unit);
            let v = psi.to_nodal();
            let nodal = nalgebra::DVector::from_column_slice(v.values());
            let smooth_samples = &fine * &nodal;
            let smooth = project(smooth_samples.as_slice(), n)?;
            let image = log_part(&psi, scale)
                .add_scaled(1.0, &smooth)
                .add_scaled(psi.mean_integral(), &g3_proj);
            let coords = image.orthonormal_coords();
            for (r, c) in coords.into_iter().enumerate() {
                galerkin[(r, i)] = c;
            }
        }

        Ok(Self {
            n,
            parts: parts.clone(),
            matrix,
            galerkin,
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &KernelParts {
        &self.parts
    }

    pub fn convention(&self) -> Convention {
        self.parts.convention()
    }

    /// Nodal (collocation) matrix.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Orthonormal-coefficient (Galerkin) matrix.
    pub fn galerkin_matrix(&self) -> &DMatrix<f64> {
        &self.galerkin
    }

    /// `P_n S_0^(n) ψ` for `ψ ∈ X_n`.
    pub fn apply_projected(&self, psi: &TrigPoly) -> TrigPoly {
        assert_eq!(psi.degree(), self.n, "density degree must match the operator");
        let c = nalgebra::DVector::from_vec(psi.orthonormal_coords());
        let out = &self.galerkin * c;
        TrigPoly::from_orthonormal_coords(self.n, out.as_slice())
    }

    /// Nodal values of `S_0^(n) ψ`.
    pub fn apply_nodal(&self, v: &NodalValues) -> NodalValues {
        assert_eq!(v.degree(), self.n, "grid degree must match the operator");
        let x = nalgebra::DVector::from_column_slice(v.values());
        let y = &self.matrix * x;
        NodalValues::new(self.n, y.as_slice().to_vec()).expect("grid length")
    }
}

/// Exact image of `ψ ∈ X_n` under the convention-scaled log part:
/// `cos mt ↦ cos mt / m`, `sin mt ↦ sin mt / m`, constants ↦ 0.
fn log_part(psi: &TrigPoly, scale: f64) -> TrigPoly {
    let n = psi.degree();
    let mut out = TrigPoly::zero(n);
    for m in 1..=n {
        out.set_cos_coeff(m, scale * psi.cos_coeff(m) / m as f64);
        if m < n {
            out.set_sin_coeff(m, scale * psi.sin_coeff(m) / m as f64);
        }
    }
    out
}
