//! Counter-based Gaussian increment streams.
//!
//! Every draw is a pure function of (seed, path_index, counter): streams for
//! different path indices never overlap, any path can be regenerated in
//! isolation, and replication-level parallelism needs no shared state. The
//! word mixing is a chained splitmix64 finalizer; normals come from
//! Box-Muller on counter pairs.

use crate::grid::TimeGrid;
use crate::math;
use alloc::vec::Vec;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const PATH_MULT: u64 = 0xd134_2543_de82_ef95;
const CTR_MULT: u64 = 0x2545_f491_4f6c_dd1d;

#[inline]
fn splitmix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Key identifying one path's stream.
#[inline]
fn stream_key(seed: u64, path_index: u64) -> u64 {
    splitmix(splitmix(seed ^ GOLDEN) ^ path_index.wrapping_mul(PATH_MULT))
}

#[inline]
fn word(key: u64, counter: u64) -> u64 {
    splitmix(key ^ counter.wrapping_mul(CTR_MULT))
}

/// Uniform in (0, 1], 53-bit resolution.
#[inline]
fn uniform(key: u64, counter: u64) -> f64 {
    ((word(key, counter) >> 11) as f64 + 1.0) * (1.0 / 9_007_199_254_740_992.0)
}

#[inline]
fn normal_at(key: u64, k: u64) -> f64 {
    let u1 = uniform(key, 2 * k);
    let u2 = uniform(key, 2 * k + 1);
    math::sqrt(-2.0 * math::ln(u1)) * math::cos(2.0 * core::f64::consts::PI * u2)
}

/// Standard normal draw k of the stream (counters 2k, 2k+1).
#[inline]
pub fn standard_normal(seed: u64, path_index: u64, k: u64) -> f64 {
    normal_at(stream_key(seed, path_index), k)
}

/// One path of Wiener increments dB_j ~ N(0, Δ) on a grid, reproducible
/// from (seed, path_index) alone.
#[derive(Debug, Clone)]
pub struct WienerIncrements {
    grid: TimeGrid,
    increments: Vec<f64>,
    seed: u64,
    path_index: u64,
}

impl WienerIncrements {
    pub fn generate(grid: &TimeGrid, seed: u64, path_index: u64) -> Self {
        let key = stream_key(seed, path_index);
        let sd = math::sqrt(grid.delta());
        let increments = (0..grid.steps() as u64)
            .map(|k| normal_at(key, k) * sd)
            .collect();
        Self {
            grid: grid.clone(),
            increments,
            seed,
            path_index,
        }
    }

    /// Increments with a deterministic per-cell drift added, dB_j + φ_j Δ.
    pub fn shifted(&self, cell_drift: &[f64]) -> Vec<f64> {
        let delta = self.grid.delta();
        self.increments
            .iter()
            .zip(cell_drift)
            .map(|(db, phi)| db + phi * delta)
            .collect()
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn path_index(&self) -> u64 {
        self.path_index
    }

    /// The Wiener path itself, B_{t_i} = Σ_{j<=i} dB_j.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut path = Vec::with_capacity(self.increments.len() + 1);
        path.push(0.0);
        let mut acc = 0.0;
        for db in &self.increments {
            acc += db;
            path.push(acc);
        }
        path
    }
}
