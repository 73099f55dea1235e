//! The measure change for shifted Rosenblatt paths.
//!
//! A deterministic shift θ determines φ through the companion-kernel inverse,
//!
//! ```text
//! φ = c_mid^{-1} Γ(H/2)^{-1} u^{H/2} I^{-H/2}_{0+}(y^{-H/2} θ),
//! θ = c_mid Γ(H/2) u^{H/2} I^{H/2}_{0+}(y^{-H/2} φ),
//! ```
//!
//! the exponential density log Z_t = -Σ φ_j dB_j - ½ Σ φ_j² Δ (Ito
//! left-endpoint cells), and the shifted process
//!
//! ```text
//! R~_t = R_t + 2 d_H ∫_0^t θ dB^{(H+1)/2} + d_H ∫_0^t θ² du,
//! ```
//!
//! which is built two independent ways: the formula above with the
//! Wiener-integral table (direct), and the double integral on shifted
//! increments dB + φΔ (tilde). Their pathwise agreement certifies the
//! discrete product formula; under reweighting by Z_T the tilde construction
//! is exactly a plain Rosenblatt path in law, which is what the Monte Carlo
//! harness exploits.

use crate::frac::{weighted_frac_forward, weighted_frac_inverse};
use crate::func::SampledFunction;
use crate::grid::TimeGrid;
use crate::hurst::HurstParam;
use crate::kernels::{adjoint_op, volterra_matrix, FbmKernel, SecondChaosTables};
use crate::rng::WienerIncrements;
use crate::simulate::PathBundle;
use crate::special::beta;
use crate::{math, Error, Result};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// φ from θ (inverse companion pipeline). The result is start-flagged
/// singular when θ(0) ≠ 0 (behaviour u^{-H/2}).
pub fn phi_from_theta(theta: &SampledFunction, h: &HurstParam) -> Result<SampledFunction> {
    let out = weighted_frac_inverse(theta, 0.5 * h.h())?;
    Ok(out.scale(1.0 / (h.c_mid() * h.gamma_h_half())))
}

/// θ from φ (forward companion pipeline).
pub fn theta_from_phi(phi: &SampledFunction, h: &HurstParam) -> Result<SampledFunction> {
    let out = weighted_frac_forward(phi, 0.5 * h.h())?;
    Ok(out.scale(h.c_mid() * h.gamma_h_half()))
}

/// A deterministic shift: θ, its derived φ, the Ito cell values of φ, and
/// the running ∫θ² (analytic where the shift family allows it).
#[derive(Debug, Clone)]
pub struct ShiftSpec {
    grid: TimeGrid,
    hurst: HurstParam,
    description: String,
    theta: SampledFunction,
    phi: SampledFunction,
    /// left-endpoint (Ito) value of φ per cell; singular first cells carry
    /// their analytic average
    phi_cells: Vec<f64>,
    /// ∫_0^{t_i} θ² du at every node
    theta_sq_int: Vec<f64>,
}

impl ShiftSpec {
    /// The degenerate shift θ ≡ 0 (identity measure change).
    pub fn zero(h: &HurstParam, grid: &TimeGrid) -> Self {
        let n = grid.steps();
        Self {
            grid: grid.clone(),
            hurst: *h,
            description: String::from("zero"),
            theta: SampledFunction::zeros(grid.clone()),
            phi: SampledFunction::zeros(grid.clone()),
            phi_cells: vec![0.0; n],
            theta_sq_int: vec![0.0; n + 1],
        }
    }

    /// Power shift φ(u) = u^α (α > -1/2), with the closed-form family
    /// forms θ(u) = c_mid B(H/2, 1+α-H/2) u^{α+H/2} and
    /// ∫θ² = C² t^{2α+H+1}/(2α+H+1).
    pub fn power(h: &HurstParam, grid: &TimeGrid, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= -0.5 {
            return Err(Error::Precondition(format!(
                "power shift needs α > -1/2 for a square-integrable φ, got {alpha}"
            )));
        }
        let half_h = 0.5 * h.h();
        let coeff = h.c_mid() * beta(half_h, 1.0 + alpha - half_h);
        let theta = SampledFunction::power(grid.clone(), coeff, alpha + half_h)?;
        let phi = SampledFunction::power(grid.clone(), 1.0, alpha)?;
        let phi_cells = (1..=grid.steps()).map(|j| phi.left_endpoint(j)).collect();
        let p = 2.0 * alpha + h.h() + 1.0;
        let theta_sq_int = (0..=grid.steps())
            .map(|i| coeff * coeff * math::powf(grid.node(i), p) / p)
            .collect();
        Ok(Self {
            grid: grid.clone(),
            hurst: *h,
            description: format!("power(alpha={alpha})"),
            theta,
            phi,
            phi_cells,
            theta_sq_int,
        })
    }

    /// Indicator shift θ = 1_A - 1_{A^c} for A a finite union of intervals;
    /// θ² ≡ 1, so ∫θ² = t exactly. φ comes through the pipeline and is
    /// singular at the origin.
    pub fn indicator(h: &HurstParam, grid: &TimeGrid, intervals: &[(f64, f64)]) -> Result<Self> {
        for &(a, b) in intervals {
            if !(a >= 0.0 && b > a && b <= grid.horizon()) {
                return Err(Error::Precondition(format!(
                    "indicator interval ({a}, {b}) outside [0, {}]",
                    grid.horizon()
                )));
            }
        }
        let inside = |u: f64| intervals.iter().any(|&(a, b)| u >= a && u < b);
        let theta = SampledFunction::from_fn(grid.clone(), |u| if inside(u) { 1.0 } else { -1.0 })?;
        Self::from_theta_impl(
            h,
            grid,
            theta,
            format!("indicator({intervals:?})"),
            Some((0..=grid.steps()).map(|i| grid.node(i)).collect()),
        )
    }

    /// Tabulated shift from node samples of θ.
    pub fn from_theta(h: &HurstParam, grid: &TimeGrid, theta: SampledFunction) -> Result<Self> {
        Self::from_theta_impl(h, grid, theta, String::from("tabulated"), None)
    }

    fn from_theta_impl(
        h: &HurstParam,
        grid: &TimeGrid,
        theta: SampledFunction,
        description: String,
        exact_sq_int: Option<Vec<f64>>,
    ) -> Result<Self> {
        if theta.grid() != grid {
            return Err(Error::GridMismatch);
        }
        let phi = phi_from_theta(&theta, h)?;
        let phi_cells: Vec<f64> = (1..=grid.steps()).map(|j| phi.left_endpoint(j)).collect();
        let sq = phi_cells.iter().map(|p| p * p).sum::<f64>() * grid.delta();
        if !sq.is_finite() {
            return Err(Error::Precondition(String::from(
                "shift rejected: ∫φ² is not finite at this resolution",
            )));
        }
        let theta_sq_int = match exact_sq_int {
            // indicator: θ² ≡ 1 so ∫θ² = t, to machine precision
            Some(exact) => exact,
            None => {
                let delta = grid.delta();
                let vals = theta.values();
                let mut acc = 0.0;
                let mut out = vec![0.0; grid.num_nodes()];
                for j in 1..=grid.steps() {
                    let cell = if j == 1 && theta.start_power().is_some() {
                        // avg of (c t^p)² over the first cell
                        let p = theta.start_power().unwrap();
                        vals[1] * vals[1] / (2.0 * p + 1.0)
                    } else {
                        0.5 * (vals[j - 1] * vals[j - 1] + vals[j] * vals[j])
                    };
                    acc += cell * delta;
                    out[j] = acc;
                }
                out
            }
        };
        Ok(Self {
            grid: grid.clone(),
            hurst: *h,
            description,
            theta,
            phi,
            phi_cells,
            theta_sq_int,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn hurst(&self) -> &HurstParam {
        &self.hurst
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn theta(&self) -> &SampledFunction {
        &self.theta
    }

    pub fn phi(&self) -> &SampledFunction {
        &self.phi
    }

    /// Ito cell values of φ, shared by the density and the tilde shift.
    pub fn phi_cells(&self) -> &[f64] {
        &self.phi_cells
    }

    /// ∫_0^{t_i} θ² du.
    pub fn theta_sq_integral(&self, node: usize) -> f64 {
        self.theta_sq_int[node]
    }

    /// ½ ∫ φ², the Novikov exponent for this deterministic shift; the
    /// density is a martingale whenever this is finite.
    pub fn novikov_exponent(&self) -> f64 {
        0.5 * self.phi_cells.iter().map(|p| p * p).sum::<f64>() * self.grid.delta()
    }

    /// Relative L² roundtrip defect of theta_from_phi(phi_from_theta(θ)).
    /// Large values signal a θ outside the admissible class at this
    /// resolution.
    pub fn roundtrip_defect(&self) -> Result<f64> {
        let back = theta_from_phi(&self.phi, &self.hurst)?;
        let diff = back.axpy(1.0, &self.theta, -1.0)?;
        let denom = self.theta.l2_norm();
        if denom == 0.0 {
            return Ok(0.0);
        }
        Ok(diff.l2_norm() / denom)
    }
}

/// Cell weights of the running Wiener integrals ∫_0^{t_i} θ dB^{(H+1)/2} at
/// selected nodes, via the adjoint operator on the subgrid [0, t_i]:
/// row_i[j] = avg_{cell_j}(∂₁K*_{t_i} θ).
#[derive(Debug, Clone)]
pub struct FbmIntegralTable {
    node_indices: Vec<usize>,
    rows: Vec<Vec<f64>>,
}

impl FbmIntegralTable {
    /// Build rows of ∫₀^{t_i} f dB^{mid} for an arbitrary integrand.
    pub fn build(f: &SampledFunction, h: &HurstParam, node_indices: &[usize]) -> Result<Self> {
        let kernel = FbmKernel::companion(h);
        let mut rows = Vec::with_capacity(node_indices.len());
        for &i in node_indices {
            rows.push(Self::row(f, &kernel, i)?);
        }
        Ok(Self {
            node_indices: node_indices.to_vec(),
            rows,
        })
    }

    /// Rows of ∫θ dB^{mid} for a shift, at the given nodes.
    pub fn for_shift(spec: &ShiftSpec, node_indices: &[usize]) -> Result<Self> {
        Self::build(spec.theta(), spec.hurst(), node_indices)
    }

    /// All nodes 1..=n (full path profile).
    pub fn build_full(spec: &ShiftSpec) -> Result<Self> {
        let all: Vec<usize> = (1..=spec.grid().steps()).collect();
        Self::for_shift(spec, &all)
    }

    fn row(f: &SampledFunction, kernel: &FbmKernel, i: usize) -> Result<Vec<f64>> {
        if i < 2 {
            // no usable subgrid below two cells; fall back to the constant
            // first cell against the cell-averaged Volterra weight
            let sub = TimeGrid::new(f.grid().node(2), 2)?;
            let m = volterra_matrix(kernel, &sub);
            return Ok(vec![f.cell_average(1) * m.entry(1, 1)]);
        }
        let f_sub = f.restrict(i)?;
        let image = adjoint_op(&f_sub, kernel)?;
        Ok(image.cell_averages())
    }

    pub fn node_indices(&self) -> &[usize] {
        &self.node_indices
    }

    pub fn row_weights(&self, slot: usize) -> &[f64] {
        &self.rows[slot]
    }

    /// ∫_0^{t_i} θ dB^{mid} for slot k (the k-th requested node), applied to
    /// arbitrary increments (plain or shifted).
    pub fn integral(&self, slot: usize, increments: &[f64]) -> f64 {
        self.rows[slot]
            .iter()
            .zip(increments)
            .map(|(a, db)| a * db)
            .sum()
    }
}

/// Exponential density along one path: log Z at every node.
#[derive(Debug, Clone)]
pub struct GirsanovDensity {
    log_z: Vec<f64>,
}

impl GirsanovDensity {
    pub fn log_z(&self) -> &[f64] {
        &self.log_z
    }

    pub fn log_z_terminal(&self) -> f64 {
        *self.log_z.last().unwrap()
    }

    /// Z_T, exponentiated on demand.
    pub fn z_terminal(&self) -> f64 {
        math::exp(self.log_z_terminal())
    }
}

/// log Z_{t_i} = -Σ_{j<=i} φ_j dB_j - ½ Σ_{j<=i} φ_j² Δ with the Ito cell
/// values of φ. E[Z_T] = 1 holds exactly for any deterministic φ.
pub fn log_density(spec: &ShiftSpec, w: &WienerIncrements) -> Result<GirsanovDensity> {
    if spec.grid() != w.grid() {
        return Err(Error::GridMismatch);
    }
    let delta = spec.grid().delta();
    let mut log_z = Vec::with_capacity(w.increments().len() + 1);
    log_z.push(0.0);
    let mut acc = 0.0;
    for (phi_j, db) in spec.phi_cells().iter().zip(w.increments()) {
        acc += -phi_j * db - 0.5 * phi_j * phi_j * delta;
        log_z.push(acc);
    }
    Ok(GirsanovDensity { log_z })
}

/// Direct construction of the shifted path at the table's nodes:
/// R~ = R + 2 d_H ∫θ dB^{mid} + d_H ∫θ². Nodes not covered by the table
/// stay zero; pass a full table for a complete path.
pub fn shifted_rosenblatt_direct(
    bundle: &PathBundle,
    spec: &ShiftSpec,
    table: &FbmIntegralTable,
) -> Result<Vec<f64>> {
    let n = spec.grid().steps();
    if bundle.rosenblatt.len() != n + 1 {
        return Err(Error::GridMismatch);
    }
    let d_h = spec.hurst().d_h();
    let db = bundle.wiener.increments();
    let mut out = vec![0.0; n + 1];
    for (slot, &i) in table.node_indices().iter().enumerate() {
        out[i] = bundle.rosenblatt[i]
            + 2.0 * d_h * table.integral(slot, db)
            + d_h * spec.theta_sq_integral(i);
    }
    Ok(out)
}

/// Independent construction through shifted increments: the double integral
/// evaluated on dB̃ = dB + φΔ.
pub fn shifted_rosenblatt_via_tilde(
    w: &WienerIncrements,
    spec: &ShiftSpec,
    tables: &SecondChaosTables,
) -> Result<Vec<f64>> {
    if spec.grid() != w.grid() || tables.grid() != w.grid() {
        return Err(Error::GridMismatch);
    }
    let shifted = w.shifted(spec.phi_cells());
    Ok(tables.rosenblatt_path(&shifted))
}

/// Residual of rewriting R in the shifted coordinates,
/// R_t - [R~_t - 2 d_H ∫θ dB̃^{mid} + d_H ∫θ²], maximised over the table's
/// nodes. Exactly zero for θ ≡ 0; decreasing in n otherwise.
pub fn inverse_shift_identity(
    bundle: &PathBundle,
    spec: &ShiftSpec,
    table: &FbmIntegralTable,
) -> Result<f64> {
    let shifted_path = bundle
        .shifted_direct
        .as_ref()
        .ok_or_else(|| Error::Precondition(String::from("bundle has no shifted path")))?;
    let d_h = spec.hurst().d_h();
    let db_tilde = bundle.wiener.shifted(spec.phi_cells());
    let mut worst: f64 = 0.0;
    for (slot, &i) in table.node_indices().iter().enumerate() {
        let reconstructed = shifted_path[i] - 2.0 * d_h * table.integral(slot, &db_tilde)
            + d_h * spec.theta_sq_integral(i);
        worst = worst.max(math::abs(bundle.rosenblatt[i] - reconstructed));
    }
    Ok(worst)
}

/// Sign choice for the drift-removal root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootSign {
    Plus,
    Minus,
}

/// Outcome of removing the deterministic drift from
/// X = ∫a + ∫b dB^{mid} + R.
#[derive(Debug, Clone)]
pub struct DriftRemoval {
    /// θ_s = (2 d_H)^{-1} (b_s ± √D_s)
    pub theta: SampledFunction,
    /// residual FBM integrand ∓√D (zero iff fully reduced)
    pub residual_integrand: SampledFunction,
    /// true when D ≡ 0, i.e. X reduces to the shifted Rosenblatt path alone
    pub fully_reduced: bool,
}

/// Solve D_s = b_s² - 4 d_H a_s; reducible only when D >= 0 everywhere.
pub fn drift_removal(
    a: &SampledFunction,
    b: &SampledFunction,
    h: &HurstParam,
    sign: RootSign,
) -> Result<DriftRemoval> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let d_h = h.d_h();
    let n = a.grid().steps();
    let mut theta = vec![0.0; n + 1];
    let mut residual = vec![0.0; n + 1];
    let mut max_d: f64 = 0.0;
    for i in 0..=n {
        let (av, bv) = (a.node_unchecked(i), b.node_unchecked(i));
        let mut disc = bv * bv - 4.0 * d_h * av;
        // rounding guard: an exactly-critical model must not be rejected
        let scale = (bv * bv).max(4.0 * d_h * math::abs(av)).max(1e-300);
        if disc < -1e-12 * scale {
            return Err(Error::NotReducible {
                node: i,
                discriminant: disc,
            });
        }
        disc = disc.max(0.0);
        max_d = max_d.max(disc);
        let root = math::sqrt(disc);
        let signed = match sign {
            RootSign::Plus => root,
            RootSign::Minus => -root,
        };
        theta[i] = (bv + signed) / (2.0 * d_h);
        residual[i] = -signed;
    }
    let fully_reduced = max_d < 1e-12;
    Ok(DriftRemoval {
        theta: SampledFunction::with_edges(a.grid().clone(), theta, None, None),
        residual_integrand: SampledFunction::with_edges(a.grid().clone(), residual, None, None),
        fully_reduced,
    })
}
