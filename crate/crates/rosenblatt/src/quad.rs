//! Gauss-Legendre rules and a composite integrator for power-type endpoint
//! singularities.
//!
//! `power_singular_left` computes ∫_a^b f(u) (u-a)^γ du with γ in (-1, 0]
//! by the substitution v = (u-a)^{γ+1}: the singular factor is absorbed
//! exactly and the transformed integrand is evaluated with Gauss-Legendre on
//! geometrically growing panels so that integrands whose variation is
//! concentrated near the singular end (kernels like u^{H-1/2}(u-s)^{H-3/2}
//! with b >> a) stay resolved.

use crate::math;
use alloc::vec::Vec;

/// Gauss-Legendre nodes and weights on [0, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the Legendre recurrence; degree up to a few hundred.
    pub fn new(degree: usize) -> Self {
        assert!(degree >= 1);
        let n = degree;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let nf = n as f64;
        for i in 0..n {
            // Chebyshev-like initial guess on [-1, 1]
            let mut x = math::cos(core::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_deriv(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if math::abs(dx) < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes.push(0.5 * (1.0 - x)); // maps [-1,1] descending to [0,1] ascending
            weights.push(0.5 * w);
        }
        Self { nodes, weights }
    }

    /// ∫_a^b f(u) du.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let len = b - a;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(a + len * x))
            .sum::<f64>()
            * len
    }
}

fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// ∫_a^b f(u) (u - a)^γ du for γ > -1, f smooth away from `a`.
///
/// `scale` sets where geometric panels stop refining towards `a`; pass the
/// distance over which f varies (for kernel integrands, the lower node's
/// distance to zero or the grid spacing).
pub fn power_singular_left(
    gl: &GaussLegendre,
    a: f64,
    b: f64,
    gamma: f64,
    scale: f64,
    mut f: impl FnMut(f64) -> f64,
) -> f64 {
    debug_assert!(gamma > -1.0);
    if b <= a {
        return 0.0;
    }
    let len = b - a;
    let q = gamma + 1.0;
    let vmax = math::powf(len, q);
    // geometric panels in v from the singular end, refined down to the scale
    // over which f varies near u = a
    let mut edges: Vec<f64> = Vec::new();
    let vscale = math::powf(scale.min(len).max(len * 1e-14), q);
    let mut v = vmax;
    edges.push(v);
    while v > vscale * 0.25 {
        v /= 4.0;
        edges.push(v);
    }
    edges.push(0.0);
    edges.reverse();
    let mut acc = 0.0;
    for pair in edges.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        acc += gl.integrate(lo, hi, |v| f(a + math::powf(v, 1.0 / q)));
    }
    acc / q
}

/// Mirror image: ∫_a^b f(u) (b - u)^γ du.
pub fn power_singular_right(
    gl: &GaussLegendre,
    a: f64,
    b: f64,
    gamma: f64,
    scale: f64,
    mut f: impl FnMut(f64) -> f64,
) -> f64 {
    power_singular_left(gl, a, b, gamma, scale, |u| f(a + b - u))
}
