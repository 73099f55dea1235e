//! Deterministic kernels and operators of the FBM/Rosenblatt construction.
//!
//! For a Hurst index h in (1/2, 1) write w = h - 1/2. The Volterra kernel is
//!
//! ```text
//! K(t,s) = c s^{-w} ∫_s^t u^w (u-s)^{w-1} du,       ∂₁K(u,s) = c (u/s)^w (u-s)^{w-1},
//! ```
//!
//! and the Rosenblatt kernel of index H (built from the companion index
//! H/2 + 1/2) is
//!
//! ```text
//! K_ros_t(y1,y2) = d_H ∫_{y1∨y2}^t ∂₁K(u,y1) ∂₁K(u,y2) du.
//! ```
//!
//! Everything that touches paths is discretized by exact cell projection:
//! the inner ∂₁K cell integrals g_j(u) = ∫_{cell_j ∩ [0,u]} ∂₁K(u,y) dy have
//! the closed form c u^w [B_z(1-w, w)] in incomplete betas (this consumes the
//! y^{-w} weight singularity analytically), and the remaining u-integrals use
//! per-cell Gauss-Legendre after the power substitution that linearizes the
//! (u - t_cell)^w edge behaviour. Cell-averaged matrices out of this
//! machinery keep the discrete Ito isometries tight, which the acceptance
//! checks rely on.

use crate::frac::{frac_derivative, frac_integral, weighted_frac_inverse, FracOrder};
use crate::func::SampledFunction;
use crate::grid::TimeGrid;
use crate::hurst::HurstParam;
use crate::quad::{power_singular_left, power_singular_right, GaussLegendre};
use crate::special::{beta, inc_beta};
use crate::{math, Error, Result};
use alloc::vec;
use alloc::vec::Vec;

/// FBM covariance R_H(s,t) = ½(s^{2H} + t^{2H} - |t-s|^{2H}).
pub fn fbm_covariance(s: f64, t: f64, h_index: f64) -> f64 {
    let two_h = 2.0 * h_index;
    0.5 * (math::powf(s, two_h) + math::powf(t, two_h) - math::powf(math::abs(t - s), two_h))
}

/// A Volterra kernel, identified by its Hurst index and normalizing constant.
#[derive(Debug, Clone, Copy)]
pub struct FbmKernel {
    h: f64,
    c: f64,
}

impl FbmKernel {
    /// Kernel of the primary index H.
    pub fn primary(h: &HurstParam) -> Self {
        Self {
            h: h.h(),
            c: h.c_h(),
        }
    }

    /// Kernel of the companion index H/2 + 1/2 sharing the Wiener path.
    pub fn companion(h: &HurstParam) -> Self {
        Self {
            h: h.h_mid(),
            c: h.c_mid(),
        }
    }

    pub fn hurst_index(&self) -> f64 {
        self.h
    }

    pub fn constant(&self) -> f64 {
        self.c
    }

    /// w = h - 1/2, the exponent driving every singularity here.
    pub fn w(&self) -> f64 {
        self.h - 0.5
    }

    /// ∂₁K(u, s) = c (u/s)^w (u-s)^{w-1} for 0 < s < u.
    pub fn deriv(&self, u: f64, s: f64) -> Result<f64> {
        if !(s > 0.0 && s < u) {
            return Err(Error::Precondition(alloc::format!(
                "kernel derivative needs 0 < s < u, got s={s}, u={u}"
            )));
        }
        let w = self.w();
        Ok(self.c * math::powf(u / s, w) * math::powf(u - s, w - 1.0))
    }

    /// Exact ∫_{max(a,0)}^{min(b,u)} ∂₁K(u,y) dy via incomplete betas.
    pub fn cell_integral(&self, u: f64, a: f64, b: f64) -> f64 {
        let w = self.w();
        let hi = if b < u { b } else { u };
        let lo = if a > 0.0 { a } else { 0.0 };
        if hi <= lo {
            return 0.0;
        }
        let z_lo = lo / u;
        let z_hi = hi / u;
        self.c * math::powf(u, w) * (inc_beta(1.0 - w, w, z_hi) - inc_beta(1.0 - w, w, z_lo))
    }

    /// Pointwise K(t, s) by singular quadrature; 0 for s >= t.
    pub fn point(&self, gl: &GaussLegendre, t: f64, s: f64) -> f64 {
        if s >= t || s <= 0.0 {
            return 0.0;
        }
        let w = self.w();
        let inner = power_singular_left(gl, s, t, w - 1.0, s.min(t - s), |u| math::powf(u, w));
        self.c * math::powf(s, -w) * inner
    }
}

/// Per-cell quadrature in u with the substitution u = t_{m-1} + Δ ξ^{1/w},
/// which maps (u - t_{m-1})^w to ξ. Nodes and weights are shared by all
/// cells of a uniform grid.
#[derive(Debug, Clone)]
struct CellQuad {
    /// offsets into the cell, Δ ξ_q^{1/w}
    offsets: Vec<f64>,
    /// du-weights, w_q Δ (1/w) ξ_q^{1/w - 1}
    du: Vec<f64>,
}

impl CellQuad {
    fn new(delta: f64, w: f64, degree: usize) -> Self {
        let gl = GaussLegendre::new(degree);
        let inv_w = 1.0 / w;
        let mut offsets = Vec::with_capacity(degree);
        let mut du = Vec::with_capacity(degree);
        for (&xi, &wt) in gl.nodes.iter().zip(&gl.weights) {
            offsets.push(delta * math::powf(xi, inv_w));
            du.push(wt * delta * inv_w * math::powf(xi, inv_w - 1.0));
        }
        Self { offsets, du }
    }

    fn len(&self) -> usize {
        self.offsets.len()
    }
}

/// Lower-triangular matrix of cell-averaged Volterra kernel weights,
/// entry(i, j) = Δ^{-1} ∫_{cell_j} K(t_i, s) ds for cell j <= node i.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    grid: TimeGrid,
    h_index: f64,
    /// rows[i-1] holds cells 1..=i for node i
    rows: Vec<Vec<f64>>,
}

impl KernelMatrix {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn hurst_index(&self) -> f64 {
        self.h_index
    }

    /// Cell-averaged weight; exactly 0 outside the support triangle.
    pub fn entry(&self, node_i: usize, cell_j: usize) -> f64 {
        if node_i == 0 || cell_j == 0 || cell_j > node_i || node_i > self.grid.steps() {
            return 0.0;
        }
        self.rows[node_i - 1][cell_j - 1]
    }

    /// B_{t_i} = Σ_{j<=i} entry(i,j) dB_j for every node (node 0 included).
    pub fn apply_to_increments(&self, increments: &[f64]) -> Vec<f64> {
        let n = self.grid.steps();
        debug_assert_eq!(increments.len(), n);
        let mut path = vec![0.0; n + 1];
        for i in 1..=n {
            let row = &self.rows[i - 1];
            let mut acc = 0.0;
            for (j, w) in row.iter().enumerate() {
                acc += w * increments[j];
            }
            path[i] = acc;
        }
        path
    }

    /// Σ_j entry(i,j)² Δ, the discrete Ito-isometry integral for node i.
    pub fn row_sq_integral(&self, node_i: usize) -> f64 {
        let delta = self.grid.delta();
        self.rows[node_i - 1].iter().map(|w| w * w * delta).sum()
    }
}

/// Build the cell-averaged Volterra matrix by accumulating the exact inner
/// cell integrals over per-cell quadrature nodes.
pub fn volterra_matrix(kernel: &FbmKernel, grid: &TimeGrid) -> KernelMatrix {
    let n = grid.steps();
    let delta = grid.delta();
    let cq = CellQuad::new(delta, kernel.w(), 8);
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut current: Vec<f64> = Vec::new();
    for i in 1..=n {
        current.push(0.0);
        let u0 = grid.node(i - 1);
        for q in 0..cq.len() {
            let u = u0 + cq.offsets[q];
            let wq = cq.du[q] / delta;
            for (j, slot) in current.iter_mut().enumerate() {
                let a = grid.node(j);
                let b = grid.node(j + 1);
                *slot += wq * kernel.cell_integral(u, a, b);
            }
        }
        rows.push(current.clone());
    }
    KernelMatrix {
        grid: grid.clone(),
        h_index: kernel.hurst_index(),
        rows,
    }
}

/// Pointwise Rosenblatt kernel K_ros_t(y1, y2); 0 when y1 ∨ y2 >= t.
///
/// Singular at y1 = y2 and at zero arguments; both are rejected, the path
/// machinery works with cell averages instead.
pub fn rosenblatt_kernel(h: &HurstParam, t: f64, y1: f64, y2: f64) -> Result<f64> {
    if y1 <= 0.0 || y2 <= 0.0 {
        return Err(Error::Precondition(alloc::format!(
            "rosenblatt kernel arguments must be positive, got ({y1}, {y2})"
        )));
    }
    if y1 == y2 {
        return Err(Error::Precondition(alloc::format!(
            "rosenblatt kernel diverges on the diagonal (y1 = y2 = {y1})"
        )));
    }
    let (lo, hi) = if y1 < y2 { (y1, y2) } else { (y2, y1) };
    if hi >= t {
        return Ok(0.0);
    }
    let k = FbmKernel::companion(h);
    let w = k.w(); // = H/2
    let gl = GaussLegendre::new(12);
    let scale = (hi - lo).min(hi);
    let inner = power_singular_left(&gl, hi, t, w - 1.0, scale, |u| {
        math::powf(u, 2.0 * w) * math::powf(u - lo, w - 1.0)
    });
    Ok(h.d_h() * k.c * k.c * math::powf(lo * hi, -w) * inner)
}

/// Numerical check of the beta identity
/// (uv)^α / B(1-2α, α) ∫_0^{u∧v} y^{-2α}(u-y)^{α-1}(v-y)^{α-1} dy = |u-v|^{2α-1}.
/// Returns (quadrature lhs, closed-form rhs).
pub fn beta_identity_check(alpha: f64, u: f64, v: f64) -> Result<(f64, f64)> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha >= 0.5 || u == v || u <= 0.0 || v <= 0.0 {
        return Err(Error::Precondition(alloc::format!(
            "beta identity needs α in (0,1/2) and 0 < u ≠ v, got α={alpha}, u={u}, v={v}"
        )));
    }
    let gl = GaussLegendre::new(16);
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    let mid = 0.5 * lo;
    // y^{-2α} singular at 0, (lo - y)^{α-1} singular at lo; split in the middle
    let left = power_singular_left(&gl, 0.0, mid, -2.0 * alpha, mid, |y| {
        math::powf(lo - y, alpha - 1.0) * math::powf(hi - y, alpha - 1.0)
    });
    let right = power_singular_right(&gl, mid, lo, alpha - 1.0, mid, |y| {
        math::powf(y, -2.0 * alpha) * math::powf(hi - y, alpha - 1.0)
    });
    let lhs = math::powf(u * v, alpha) / beta(1.0 - 2.0 * alpha, alpha) * (left + right);
    let rhs = math::powf(math::abs(u - v), 2.0 * alpha - 1.0);
    Ok((lhs, rhs))
}

/// Packed symmetric matrix of cell-averaged Rosenblatt kernel values at one
/// grid node t_i, diagonal included, plus the deterministic trace
/// compensator. Evaluating it on Wiener increments gives the discrete double
/// Wiener-Ito integral
///
/// ```text
/// R_{t_i} = Σ_{j≠k} M_{jk} dB_j dB_k + Σ_j M_jj (dB_j² - Δ)
///         = dBᵀ M dB - Δ tr M.
/// ```
#[derive(Debug, Clone)]
pub struct KernelSlice {
    node_index: usize,
    delta: f64,
    /// lower-triangular packed, row k holds entries (k, 0..=k)
    packed: Vec<f64>,
    trace: f64,
}

impl KernelSlice {
    pub fn node_index(&self) -> usize {
        self.node_index
    }

    fn idx(k: usize, j: usize) -> usize {
        debug_assert!(j <= k);
        k * (k + 1) / 2 + j
    }

    /// Cell-averaged kernel value over cell pair (j, k), 1-based cells.
    pub fn entry(&self, cell_j: usize, cell_k: usize) -> f64 {
        let (j, k) = if cell_j <= cell_k {
            (cell_j, cell_k)
        } else {
            (cell_k, cell_j)
        };
        if k > self.node_index || j == 0 {
            return 0.0;
        }
        self.packed[Self::idx(k - 1, j - 1)]
    }

    /// Discrete double Wiener-Ito integral of this slice on the increments.
    pub fn evaluate(&self, increments: &[f64]) -> f64 {
        let m = self.node_index;
        debug_assert!(increments.len() >= m);
        let mut acc = 0.0;
        for k in 0..m {
            let row = &self.packed[k * (k + 1) / 2..(k + 1) * (k + 2) / 2];
            let mut inner = 0.0;
            for (j, mjk) in row.iter().enumerate().take(k) {
                inner += mjk * increments[j];
            }
            acc += increments[k] * (2.0 * inner + row[k] * increments[k]);
        }
        acc - self.delta * self.trace
    }

    /// Variance carried by the centred diagonal terms alone,
    /// 2 Δ² Σ_j M_jj². Vanishes like Δ^{2H-1} as the grid refines.
    pub fn diagonal_channel_variance(&self) -> f64 {
        let m = self.node_index;
        let acc: f64 = (0..m)
            .map(|k| {
                let v = self.packed[Self::idx(k, k)];
                v * v
            })
            .sum();
        2.0 * self.delta * self.delta * acc
    }

    /// Var of the slice on iid N(0, Δ) increments: 2 Δ² Σ_{j,k} M_{jk}².
    /// This is also the quadrature value of 2‖K_ros_t‖².
    pub fn variance(&self) -> f64 {
        let m = self.node_index;
        let mut acc = 0.0;
        for k in 0..m {
            for j in 0..=k {
                let v = self.packed[Self::idx(k, j)];
                acc += if j == k { v * v } else { 2.0 * v * v };
            }
        }
        2.0 * self.delta * self.delta * acc
    }
}

/// Quadrature tables of the second-chaos machinery for one (H, grid) pair:
/// per-cell u-nodes and the exact inner integrals g_j(u) of the companion
/// kernel. Rosenblatt paths, checkpoint slices and FBM-integral tables all
/// read these.
#[derive(Debug, Clone)]
pub struct SecondChaosTables {
    grid: TimeGrid,
    d_h: f64,
    nq: usize,
    /// mapped u-nodes, cell-major: u_{mq}
    u_nodes: Vec<f64>,
    /// du-weights per q (shared by all cells)
    du: Vec<f64>,
    /// g[nq*m(m-1)/2 + q*m + j] = g_{j+1}(u_{mq}) for j < m, m = 1..=n
    g: Vec<f64>,
    /// trace compensator per node: comp[i] = d_H Δ^{-2} Σ_{m<=i,q} du_q Δ Σ_j g²
    trace_comp: Vec<f64>,
}

impl SecondChaosTables {
    pub fn build(h: &HurstParam, grid: &TimeGrid) -> Self {
        let kernel = FbmKernel::companion(h);
        let n = grid.steps();
        let delta = grid.delta();
        let nq = 8;
        let cq = CellQuad::new(delta, kernel.w(), nq);
        let mut u_nodes = Vec::with_capacity(n * nq);
        let mut g = Vec::with_capacity(nq * n * (n + 1) / 2);
        let mut trace_comp = vec![0.0; n + 1];
        let d_h = h.d_h();
        for m in 1..=n {
            let u0 = grid.node(m - 1);
            let mut cell_trace = 0.0;
            for q in 0..nq {
                let u = u0 + cq.offsets[q];
                u_nodes.push(u);
                let mut sq = 0.0;
                for j in 0..m {
                    let val = kernel.cell_integral(u, grid.node(j), grid.node(j + 1));
                    g.push(val);
                    sq += val * val;
                }
                cell_trace += cq.du[q] * sq;
            }
            trace_comp[m] = trace_comp[m - 1] + d_h / delta * cell_trace;
        }
        Self {
            grid: grid.clone(),
            d_h,
            nq,
            u_nodes,
            du: cq.du,
            g,
            trace_comp,
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// Deterministic Wick compensator d_H Δ^{-1} Σ_{m<=i,q} du_q Σ_j g_j².
    /// The zero-increment path equals minus this (vanishing as Δ^{2H-1}).
    pub fn trace_compensator(&self, node: usize) -> f64 {
        self.trace_comp[node]
    }

    fn g_block(&self, m: usize, q: usize) -> &[f64] {
        let base = self.nq * (m * (m - 1) / 2) + q * m;
        &self.g[base..base + m]
    }

    fn u_node(&self, m: usize, q: usize) -> f64 {
        self.u_nodes[(m - 1) * self.nq + q]
    }

    /// Rosenblatt path at every node from one path of Wiener increments:
    /// R_{t_i} = d_H Δ^{-2} Σ_{m<=i,q} du_q (Σ_j g_j(u_{mq}) dB_j)² - comp_i.
    pub fn rosenblatt_path(&self, increments: &[f64]) -> Vec<f64> {
        let n = self.grid.steps();
        debug_assert_eq!(increments.len(), n);
        let delta = self.grid.delta();
        let scale = self.d_h / (delta * delta);
        let mut path = vec![0.0; n + 1];
        let mut acc = 0.0;
        for m in 1..=n {
            let mut cell = 0.0;
            for q in 0..self.nq {
                let block = self.g_block(m, q);
                let mut s = 0.0;
                for (gj, db) in block.iter().zip(increments) {
                    s += gj * db;
                }
                cell += self.du[q] * s * s;
            }
            acc += scale * cell;
            path[m] = acc - self.trace_comp[m];
        }
        path
    }

    /// Cell-averaged kernel slices at the requested nodes (strictly
    /// ascending), built in one sweep of rank-one updates.
    pub fn slices(&self, node_indices: &[usize]) -> Vec<KernelSlice> {
        let n = self.grid.steps();
        let delta = self.grid.delta();
        let scale = self.d_h / (delta * delta);
        let mut out = Vec::with_capacity(node_indices.len());
        let mut packed = vec![0.0; n * (n + 1) / 2];
        let mut want = node_indices.iter().copied().peekable();
        for m in 1..=n {
            for q in 0..self.nq {
                let block = self.g_block(m, q);
                let wq = self.du[q] * scale;
                for k in 0..m {
                    let gk = block[k] * wq;
                    if gk == 0.0 {
                        continue;
                    }
                    let row = &mut packed[k * (k + 1) / 2..k * (k + 1) / 2 + k + 1];
                    for (slot, gj) in row.iter_mut().zip(block) {
                        *slot += gk * gj;
                    }
                }
            }
            while want.peek() == Some(&m) {
                want.next();
                let len = m * (m + 1) / 2;
                let snapshot = packed[..len].to_vec();
                let trace = (0..m).map(|k| snapshot[KernelSlice::idx(k, k)]).sum();
                out.push(KernelSlice {
                    node_index: m,
                    delta,
                    packed: snapshot,
                    trace,
                });
            }
        }
        out
    }

    /// Cell-averaged weights of the running Wiener integral of `f` against
    /// the companion FBM: rows[i-1][j-1] covers u in [t_{j-1}, t_i], so that
    /// ∫_0^{t_i} f dB^{mid} = Σ_j rows[i-1][j-1] dB_j.
    pub fn fbm_integral_rows(&self, f: impl Fn(f64) -> f64) -> Vec<Vec<f64>> {
        let n = self.grid.steps();
        let delta = self.grid.delta();
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut current: Vec<f64> = Vec::new();
        for m in 1..=n {
            current.push(0.0);
            for q in 0..self.nq {
                let u = self.u_node(m, q);
                let fw = f(u) * self.du[q] / delta;
                let block = self.g_block(m, q);
                for (slot, gj) in current.iter_mut().zip(block) {
                    *slot += fw * gj;
                }
            }
            rows.push(current.clone());
        }
        rows
    }
}

/// Adjoint operator of the Wiener-integral isometry:
/// (∂₁K* f)(s) = c Γ(w) s^{-w} I^{w}_{T-}(u^{w} f)(s), w = h - 1/2.
pub fn adjoint_op(f: &SampledFunction, kernel: &FbmKernel) -> Result<SampledFunction> {
    let w = kernel.w();
    let weighted = f.mul_power(w);
    let integ = frac_integral(&weighted, FracOrder::right(w))?;
    Ok(integ
        .mul_power(-w)
        .scale(kernel.c * crate::special::gamma(w)))
}

/// Right inverse of [`adjoint_op`]:
/// ((∂₁K*)^{-1} ψ)(s) = c^{-1} Γ(w)^{-1} s^{-w} I^{-w}_{T-}(u^{w} ψ)(s).
pub fn adjoint_op_inverse(psi: &SampledFunction, kernel: &FbmKernel) -> Result<SampledFunction> {
    let w = kernel.w();
    let weighted = psi.mul_power(w);
    let deriv = frac_derivative(&weighted, FracOrder::right(w))?;
    Ok(deriv
        .mul_power(-w)
        .scale(1.0 / (kernel.c * crate::special::gamma(w))))
}

/// Inverse of the path operator (K f)(t) = ∫_0^t K(t,s) f(s) ds:
/// K^{-1} f = c^{-1} Γ(w)^{-1} x^{w} I^{-w}_{0+}(y^{-w} f')(x).
pub fn kh_inverse(f: &SampledFunction, kernel: &FbmKernel) -> Result<SampledFunction> {
    let f0 = f.value_at_node(0).unwrap_or(f64::NAN);
    if !(f0 == 0.0) {
        return Err(Error::Precondition(alloc::format!(
            "kh_inverse requires f(0) = 0, got {f0}"
        )));
    }
    let w = kernel.w();
    let fp = grid_derivative(f);
    let out = weighted_frac_inverse(&fp, w)?;
    Ok(out.scale(1.0 / (kernel.c * crate::special::gamma(w))))
}

/// Second-order derivative of the node samples (central in the interior,
/// one-sided at the ends).
pub fn grid_derivative(f: &SampledFunction) -> SampledFunction {
    let grid = f.grid().clone();
    let n = grid.steps();
    let delta = grid.delta();
    let v = f.values();
    let mut out = vec![0.0; n + 1];
    out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * delta);
    out[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * delta);
    for i in 1..n {
        out[i] = (v[i + 1] - v[i - 1]) / (2.0 * delta);
    }
    SampledFunction::with_edges(grid, out, None, None)
}
