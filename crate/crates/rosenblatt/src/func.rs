//! Functions sampled on grid nodes, with optional power behaviour at the ends.
//!
//! Between interior nodes a `SampledFunction` is read as piecewise linear.
//! Fractional operators and weighted kernels produce (and consume) data that
//! behaves like `c·t^p` near t = 0 or like `c·(T-t)^p` near t = T with
//! non-integer p; storing that exponent lets every quadrature in the crate
//! treat the first/last cell analytically instead of evaluating a node that
//! is singular or unknown. A flagged edge node's stored value is not used.

use crate::grid::TimeGrid;
use crate::{math, Error, Result};
use alloc::vec;
use alloc::vec::Vec;

/// Power behaviour on an edge cell: f(t) = anchor * (t/t_anchor)^exponent,
/// anchored at the first (resp. last) interior node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgePower {
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: TimeGrid,
    values: Vec<f64>,
    /// Behaviour on (0, t_1] when node 0 is singular/unset.
    start_power: Option<EdgePower>,
    /// Behaviour on [t_{n-1}, T) when node n is singular/unset.
    end_power: Option<EdgePower>,
}

impl SampledFunction {
    /// Wrap node values; all entries must be finite.
    pub fn from_values(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.num_nodes() {
            return Err(Error::Precondition(alloc::format!(
                "expected {} node values, got {}",
                grid.num_nodes(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                index: i,
                context: "sampled function",
            });
        }
        Ok(Self {
            grid,
            values,
            start_power: None,
            end_power: None,
        })
    }

    /// Sample a closure at the nodes.
    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..grid.num_nodes()).map(|i| f(grid.node(i))).collect();
        Self::from_values(grid, values)
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        let n = grid.num_nodes();
        Self {
            grid,
            values: vec![0.0; n],
            start_power: None,
            end_power: None,
        }
    }

    pub fn constant(grid: TimeGrid, c: f64) -> Self {
        let n = grid.num_nodes();
        Self {
            grid,
            values: vec![c; n],
            start_power: None,
            end_power: None,
        }
    }

    /// The monomial c·t^p. For non-integer p the first cell is flagged so the
    /// quadratures use the exact power there (p > -1 required; node 0 is set
    /// to 0 for p > 0 and left unset otherwise).
    pub fn power(grid: TimeGrid, coeff: f64, exponent: f64) -> Result<Self> {
        if exponent <= -1.0 {
            return Err(Error::Precondition(alloc::format!(
                "power exponent {exponent} must be > -1"
            )));
        }
        let n = grid.num_nodes();
        let mut values = vec![0.0; n];
        for (i, v) in values.iter_mut().enumerate().skip(1) {
            *v = coeff * math::powf(grid.node(i), exponent);
        }
        let mut out = Self {
            grid,
            values,
            start_power: None,
            end_power: None,
        };
        if exponent != 0.0 {
            if exponent < 0.0 {
                out.values[0] = f64::NAN;
            }
            out.start_power = Some(EdgePower { exponent });
        } else {
            out.values[0] = coeff;
        }
        Ok(out)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn start_power(&self) -> Option<f64> {
        self.start_power.map(|e| e.exponent)
    }

    pub fn end_power(&self) -> Option<f64> {
        self.end_power.map(|e| e.exponent)
    }

    pub(crate) fn with_edges(
        grid: TimeGrid,
        values: Vec<f64>,
        start_power: Option<f64>,
        end_power: Option<f64>,
    ) -> Self {
        debug_assert_eq!(values.len(), grid.num_nodes());
        Self {
            grid,
            values,
            start_power: start_power.map(|exponent| EdgePower { exponent }),
            end_power: end_power.map(|exponent| EdgePower { exponent }),
        }
    }

    pub(crate) fn set_start_power(&mut self, exponent: Option<f64>) {
        self.start_power = exponent.map(|exponent| EdgePower { exponent });
    }

    /// Value at node i; `None` when the node is singular (flagged with a
    /// negative edge exponent). A positive edge exponent keeps the node
    /// readable (the limit is 0) while still marking the cell for the
    /// power-model quadratures.
    pub fn value_at_node(&self, i: usize) -> Option<f64> {
        let n = self.grid.steps();
        if i == 0 {
            if let Some(EdgePower { exponent }) = self.start_power {
                if exponent <= 0.0 {
                    return None;
                }
            }
        }
        if i == n {
            if let Some(EdgePower { exponent }) = self.end_power {
                if exponent <= 0.0 {
                    return None;
                }
            }
        }
        Some(self.values[i])
    }

    /// Interior nodes are always usable; edges fall back to the power model
    /// evaluated at the node (infinite for negative exponents).
    pub(crate) fn node_unchecked(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Multiply by t^q pointwise, composing edge exponents. When the
    /// exponents cancel the result is unflagged and node 0 is extended by
    /// continuity from node 1.
    pub fn mul_power(&self, q: f64) -> Self {
        let n = self.grid.steps();
        let mut values: Vec<f64> = (0..=n)
            .map(|i| {
                if i == 0 {
                    0.0 // fixed below
                } else {
                    self.values[i] * math::powf(self.grid.node(i), q)
                }
            })
            .collect();
        let start_p = self.start_power.map(|e| e.exponent).unwrap_or(0.0) + q;
        let start_power = if q == 0.0 {
            self.start_power.map(|e| e.exponent)
        } else if math::abs(start_p) < 1e-12 {
            None
        } else {
            Some(start_p)
        };
        match start_power {
            None if q == 0.0 => values[0] = self.values[0],
            None => values[0] = values[1],
            Some(p) if p > 0.0 => values[0] = 0.0,
            Some(_) => values[0] = f64::NAN,
        }
        let end_power = self.end_power.map(|e| e.exponent);
        Self::with_edges(self.grid.clone(), values, start_power, end_power)
    }

    /// Pointwise scale.
    pub fn scale(&self, c: f64) -> Self {
        let values = self.values.iter().map(|v| v * c).collect();
        Self {
            grid: self.grid.clone(),
            values,
            start_power: self.start_power,
            end_power: self.end_power,
        }
    }

    /// Restriction to the subgrid [0, t_k] (same spacing, k steps). Keeps
    /// the start behaviour; the old interior node t_k becomes a regular end.
    pub fn restrict(&self, steps: usize) -> crate::Result<Self> {
        let sub = TimeGrid::new(self.grid.node(steps), steps)?;
        let values = self.values[..=steps].to_vec();
        Ok(Self {
            grid: sub,
            values,
            start_power: self.start_power,
            end_power: None,
        })
    }

    /// Reverse the time axis: g(t) = f(T - t). Swaps the edge behaviours.
    pub(crate) fn reversed(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self {
            grid: self.grid.clone(),
            values,
            start_power: self.end_power,
            end_power: self.start_power,
        }
    }

    /// Power-model coefficient for the first cell: f(t) ≈ c·t^p on (0, t_1],
    /// anchored at node 1. Callers branch on the flag before using this.
    fn start_cell_model(&self) -> (f64, f64) {
        match self.start_power {
            Some(EdgePower { exponent }) => {
                let t1 = self.grid.node(1);
                (self.values[1] / math::powf(t1, exponent), exponent)
            }
            None => (self.values[0], 0.0),
        }
    }

    /// Average of f over cell j (1-based). Edge cells use the power model.
    pub fn cell_average(&self, j: usize) -> f64 {
        let n = self.grid.steps();
        debug_assert!(j >= 1 && j <= n);
        if j == 1 {
            if let Some(EdgePower { exponent: p }) = self.start_power {
                // avg of c t^p over (0, Δ] with c anchored at node 1: f_1/(p+1)
                return self.values[1] / (p + 1.0);
            }
        }
        if j == n {
            if let Some(EdgePower { exponent: p }) = self.end_power {
                return self.values[n - 1] / (p + 1.0);
            }
        }
        0.5 * (self.values[j - 1] + self.values[j])
    }

    pub fn cell_averages(&self) -> Vec<f64> {
        (1..=self.grid.steps())
            .map(|j| self.cell_average(j))
            .collect()
    }

    /// Left-endpoint value of cell j for Ito sums; the first cell of a
    /// start-flagged function uses its analytic cell average instead.
    pub fn left_endpoint(&self, j: usize) -> f64 {
        debug_assert!(j >= 1 && j <= self.grid.steps());
        if j == 1 && self.start_power.is_some() {
            return self.cell_average(1);
        }
        self.values[j - 1]
    }

    /// ∫_0^T f(t) dt with the edge cells integrated via their power model.
    pub fn integral(&self) -> f64 {
        let delta = self.grid.delta();
        (1..=self.grid.steps())
            .map(|j| self.cell_average(j) * delta)
            .sum()
    }

    /// ∫_0^T f(t)² dt (edge power cells handled analytically; requires the
    /// edge exponent > -1/2 for square integrability).
    pub fn l2_norm_sq(&self) -> f64 {
        let n = self.grid.steps();
        let delta = self.grid.delta();
        let mut acc = 0.0;
        for j in 1..=n {
            if j == 1 {
                if let Some(EdgePower { exponent: p }) = self.start_power {
                    debug_assert!(p > -0.5, "edge exponent not square integrable");
                    let (c, _) = self.start_cell_model();
                    acc += c * c * math::powf(delta, 2.0 * p + 1.0) / (2.0 * p + 1.0);
                    continue;
                }
            }
            if j == n {
                if let Some(EdgePower { exponent: p }) = self.end_power {
                    debug_assert!(p > -0.5, "edge exponent not square integrable");
                    let c = self.values[n - 1] / math::powf(delta, p);
                    acc += c * c * math::powf(delta, 2.0 * p + 1.0) / (2.0 * p + 1.0);
                    continue;
                }
            }
            let (a, b) = (self.values[j - 1], self.values[j]);
            acc += delta * (a * a + a * b + b * b) / 3.0;
        }
        acc
    }

    pub fn l2_norm(&self) -> f64 {
        math::sqrt(self.l2_norm_sq())
    }

    /// Pointwise linear combination a·self + b·other (edge flags must match).
    pub fn axpy(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Self {
            grid: self.grid.clone(),
            values,
            start_power: self.start_power.or(other.start_power),
            end_power: self.end_power.or(other.end_power),
        })
    }

    /// Max |f - g| over nodes that are valid in both functions.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.values.len() {
            if let (Some(a), Some(b)) = (self.value_at_node(i), other.value_at_node(i)) {
                m = m.max(math::abs(a - b));
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> TimeGrid {
        TimeGrid::new(1.0, n).unwrap()
    }

    #[test]
    fn from_values_validates() {
        let g = grid(4);
        assert!(SampledFunction::from_values(g.clone(), vec![0.0; 3]).is_err());
        assert!(SampledFunction::from_values(g.clone(), vec![f64::NAN; 5]).is_err());
        assert!(SampledFunction::from_values(g, vec![1.0; 5]).is_ok());
    }

    #[test]
    fn power_constructor_flags_edge() {
        let f = SampledFunction::power(grid(4), 2.0, -0.3).unwrap();
        assert!(f.value_at_node(0).is_none());
        assert!((f.value_at_node(1).unwrap() - 2.0 * 0.25f64.powf(-0.3)).abs() < 1e-14);
        assert!(SampledFunction::power(grid(4), 1.0, -1.0).is_err());
    }

    #[test]
    fn integral_of_power_is_exact() {
        // f = t^{-0.4}: integral over [0,1] is 1/0.6
        let f = SampledFunction::power(grid(1000), 1.0, -0.4).unwrap();
        assert!((f.integral() - 1.0 / 0.6).abs() < 2e-3);
        // l2: integral of t^{-0.8} = 1/0.2
        assert!((f.l2_norm_sq() - 5.0).abs() < 5e-3 * 5.0);
    }

    #[test]
    fn cell_average_edge_uses_power_model() {
        let g = grid(4);
        let f = SampledFunction::power(g.clone(), 1.0, -0.25).unwrap();
        // avg over (0, 0.25] of t^-0.25 = 0.25^-0.25 / 0.75
        let expect = 0.25f64.powf(-0.25) / 0.75;
        assert!((f.cell_average(1) - expect).abs() < 1e-13);
        assert_eq!(f.left_endpoint(1), f.cell_average(1));
        // interior cell is trapezoid
        let expect2 = 0.5 * (0.25f64.powf(-0.25) + 0.5f64.powf(-0.25));
        assert!((f.cell_average(2) - expect2).abs() < 1e-13);
    }

    #[test]
    fn mul_power_composes_exponents() {
        let f = SampledFunction::power(grid(8), 1.0, -0.3).unwrap();
        let h = f.mul_power(0.3);
        // exponents cancel: unflagged, node 0 extended by continuity
        assert_eq!(h.start_power(), None);
        for i in 0..=8 {
            assert!((h.value_at_node(i).unwrap() - 1.0).abs() < 1e-12);
        }
        let g = f.mul_power(0.1);
        assert!((g.start_power().unwrap() + 0.2).abs() < 1e-14);
        assert!(g.value_at_node(0).is_none());
    }

    #[test]
    fn reversal_swaps_edges() {
        let mut f = SampledFunction::constant(grid(4), 1.0);
        f.set_start_power(Some(-0.2));
        let r = f.reversed();
        assert_eq!(r.end_power(), Some(-0.2));
        assert_eq!(r.start_power(), None);
    }
}
