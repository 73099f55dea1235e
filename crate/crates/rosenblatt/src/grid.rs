//! Uniform partition of [0, T] that fixes every discretization in the crate.

use crate::{Error, Result};
use alloc::format;
use alloc::vec::Vec;

/// Uniform grid t_i = i T / n, i = 0..=n.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    steps: usize,
}

impl TimeGrid {
    /// New grid with horizon `T > 0` and `n >= 2` steps.
    pub fn new(horizon: f64, steps: usize) -> Result<Self> {
        if !horizon.is_finite() || horizon <= 0.0 {
            return Err(Error::InvalidGrid(format!("horizon {horizon} must be > 0")));
        }
        if steps < 2 {
            return Err(Error::InvalidGrid(format!("steps {steps} must be >= 2")));
        }
        Ok(Self { horizon, steps })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Number of steps n; the grid has n + 1 nodes.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn num_nodes(&self) -> usize {
        self.steps + 1
    }

    /// Spacing Δ = T / n.
    pub fn delta(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    /// Node t_i.
    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i <= self.steps);
        self.horizon * i as f64 / self.steps as f64
    }

    /// Midpoint of cell j (cells are 1-based: cell j spans [t_{j-1}, t_j]).
    pub fn midpoint(&self, j: usize) -> f64 {
        debug_assert!(j >= 1 && j <= self.steps);
        self.horizon * (j as f64 - 0.5) / self.steps as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.steps).map(|i| self.node(i)).collect()
    }

    /// Index of the node closest to `t` (must land within rounding of a node).
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let raw = t / self.delta();
        let idx = crate::math::floor(raw + 0.5) as isize;
        if idx < 0 || idx as usize > self.steps || (raw - idx as f64).abs() > 1e-9 {
            return Err(Error::InvalidGrid(format!("{t} is not a grid node")));
        }
        Ok(idx as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_grids() {
        assert!(TimeGrid::new(0.0, 8).is_err());
        assert!(TimeGrid::new(-1.0, 8).is_err());
        assert!(TimeGrid::new(f64::NAN, 8).is_err());
        assert!(TimeGrid::new(1.0, 1).is_err());
        assert!(TimeGrid::new(1.0, 0).is_err());
    }

    #[test]
    fn nodes_are_uniform_and_increasing() {
        let g = TimeGrid::new(2.0, 8).unwrap();
        assert_eq!(g.num_nodes(), 9);
        assert_eq!(g.delta(), 0.25);
        let nodes = g.nodes();
        for w in nodes.windows(2) {
            assert!((w[1] - w[0] - 0.25).abs() < 1e-15);
        }
        assert_eq!(g.node(0), 0.0);
        assert_eq!(g.node(8), 2.0);
    }

    #[test]
    fn index_lookup() {
        let g = TimeGrid::new(1.0, 4).unwrap();
        assert_eq!(g.index_of(0.75).unwrap(), 3);
        assert!(g.index_of(0.7).is_err());
    }
}
