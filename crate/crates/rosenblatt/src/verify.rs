//! Monte Carlo importance-sampling check of the measure-change claim.
//!
//! Under dP~ = Z_T dP the shifted path R~ should be distributed as a plain
//! Rosenblatt path. The harness estimates a family of functionals of R~ at
//! checkpoint times by self-normalized importance sampling over one ensemble
//! and compares them against unweighted estimates of the same functionals of
//! R over a second ensemble on a disjoint stream. Test functions: first
//! moments, the pairwise covariance matrix, and bounded exponential probes
//! exp(-λx). Every comparison passes iff |difference| <= k_eff · combined SE
//! with a Bonferroni-widened k_eff.
//!
//! A sensitivity mode replaces the oracle with the unweighted moments of R~
//! itself (the law under P, not P~); any nontrivial shift must fail there,
//! which pins down that the harness can tell the two measures apart.

use crate::girsanov::{log_density, FbmIntegralTable, ShiftSpec};
use crate::grid::TimeGrid;
use crate::hurst::HurstParam;
use crate::kernels::{KernelSlice, SecondChaosTables};
use crate::rng::WienerIncrements;
use crate::special::{normal_quantile, normal_tail};
use crate::{math, Error, Result};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// Shift families the harness understands.
#[derive(Debug, Clone, PartialEq)]
pub enum ShiftConfig {
    Zero,
    Power {
        alpha: f64,
    },
    Indicator {
        intervals: Vec<(f64, f64)>,
    },
    /// θ sampled at the grid nodes
    Table {
        values: Vec<f64>,
    },
}

impl ShiftConfig {
    pub fn build(&self, h: &HurstParam, grid: &TimeGrid) -> Result<ShiftSpec> {
        match self {
            ShiftConfig::Zero => Ok(ShiftSpec::zero(h, grid)),
            ShiftConfig::Power { alpha } => ShiftSpec::power(h, grid, *alpha),
            ShiftConfig::Indicator { intervals } => ShiftSpec::indicator(h, grid, intervals),
            ShiftConfig::Table { values } => {
                let f = crate::func::SampledFunction::from_values(grid.clone(), values.clone())?;
                ShiftSpec::from_theta(h, grid, f)
            }
        }
    }
}

/// Which distribution the oracle ensemble draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// plain Rosenblatt paths — the measure-change claim
    PlainRosenblatt,
    /// unweighted shifted paths (the law under P) — must fail for a
    /// nontrivial shift if the harness has any power
    WrongUnweightedShifted,
}

/// Monte Carlo configuration.
#[derive(Debug, Clone)]
pub struct McConfig {
    pub hurst: f64,
    pub horizon: f64,
    pub steps: usize,
    pub paths: usize,
    pub seed: u64,
    pub shift: ShiftConfig,
    /// checkpoint times; defaults to {T/4, T/2, 3T/4, T}
    pub checkpoints: Vec<f64>,
    /// base tolerance multiplier before Bonferroni widening
    pub tolerance_k: f64,
    /// decay rates of the exponential probes
    pub exp_lambdas: Vec<f64>,
}

impl McConfig {
    pub fn new(hurst: f64, horizon: f64, steps: usize, paths: usize, seed: u64) -> Self {
        // quarter-horizon checkpoints snapped to grid nodes, so any step
        // count works out of the box
        let node = |frac: f64| {
            let i = ((steps as f64 * frac).round() as usize).clamp(1, steps);
            horizon * i as f64 / steps as f64
        };
        let mut checkpoints = vec![node(0.25), node(0.5), node(0.75), node(1.0)];
        checkpoints.dedup();
        Self {
            hurst,
            horizon,
            steps,
            paths,
            seed,
            shift: ShiftConfig::Zero,
            checkpoints,
            tolerance_k: 3.0,
            exp_lambdas: vec![0.5, 1.0],
        }
    }

    fn validate(&self) -> Result<()> {
        if self.paths < 100 {
            return Err(Error::Precondition(format!(
                "need at least 100 paths, got {}",
                self.paths
            )));
        }
        if !self.tolerance_k.is_finite() || self.tolerance_k <= 0.0 {
            return Err(Error::Precondition(format!(
                "tolerance multiplier must be positive, got {}",
                self.tolerance_k
            )));
        }
        Ok(())
    }
}

/// Verdict of one statistic row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// weight degeneracy: comparison not meaningful
    Suppressed,
}

/// One line of the report: a weighted estimate against its oracle.
#[derive(Debug, Clone)]
pub struct StatRow {
    pub name: String,
    pub estimate: f64,
    pub se: f64,
    pub oracle: f64,
    pub oracle_se: f64,
    pub verdict: Verdict,
}

impl StatRow {
    /// |difference| in combined standard errors.
    pub fn sigma_distance(&self) -> f64 {
        let combined = math::sqrt(self.se * self.se + self.oracle_se * self.oracle_se);
        math::abs(self.estimate - self.oracle) / combined.max(1e-300)
    }
}

/// The harness output. Verdicts are derivable from the stored numbers.
#[derive(Debug, Clone)]
pub struct McReport {
    pub config_label: String,
    pub mean_z: f64,
    pub mean_z_se: f64,
    pub ess: f64,
    pub paths: usize,
    pub k_effective: f64,
    pub rows: Vec<StatRow>,
    pub weight_degeneracy: bool,
}

impl McReport {
    pub fn overall_pass(&self) -> bool {
        !self.weight_degeneracy && self.rows.iter().all(|r| r.verdict == Verdict::Pass)
    }

    pub fn failed_rows(&self) -> impl Iterator<Item = &StatRow> {
        self.rows.iter().filter(|r| r.verdict == Verdict::Fail)
    }
}

/// Effective sample size (Σw)²/Σw² of positive weights.
pub fn effective_sample_size(weights: &[f64]) -> Result<f64> {
    if weights.is_empty() {
        return Err(Error::Precondition(String::from("empty weight vector")));
    }
    let sum: f64 = weights.iter().sum();
    let sum_sq: f64 = weights.iter().map(|w| w * w).sum();
    Ok(sum * sum / sum_sq.max(1e-300))
}

/// Self-normalized weighted estimate of E[f(x)] with its delta-method SE:
/// est = Σ w f / Σ w, SE² = Σ w²(f - est)² / (Σ w)².
pub fn weighted_moment(
    values: &[f64],
    weights: &[f64],
    f: impl Fn(f64) -> f64,
) -> Result<(f64, f64)> {
    if values.len() != weights.len() || values.is_empty() {
        return Err(Error::Precondition(String::from(
            "values and weights must be equally sized and non-empty",
        )));
    }
    let wsum: f64 = weights.iter().sum();
    if wsum.is_nan() || wsum <= 0.0 {
        return Err(Error::Precondition(String::from("total weight is zero")));
    }
    let est = values
        .iter()
        .zip(weights)
        .map(|(x, w)| w * f(*x))
        .sum::<f64>()
        / wsum;
    let var = values
        .iter()
        .zip(weights)
        .map(|(x, w)| {
            let d = f(*x) - est;
            w * w * d * d
        })
        .sum::<f64>()
        / (wsum * wsum);
    Ok((est, math::sqrt(var)))
}

/// Entry-wise comparison of two estimated matrices: pass iff
/// |weighted - oracle| <= k * combined SE for every entry (boundary
/// inclusive). Entries are (estimate, se) pairs in matching order.
pub fn covariance_compare(
    weighted: &[(f64, f64)],
    oracle: &[(f64, f64)],
    k: f64,
) -> Result<Vec<bool>> {
    if weighted.len() != oracle.len() {
        return Err(Error::Precondition(String::from(
            "covariance matrices have different sizes",
        )));
    }
    Ok(weighted
        .iter()
        .zip(oracle)
        .map(|((e, se), (o, ose))| {
            let combined = math::sqrt(se * se + ose * ose);
            math::abs(e - o) <= k * combined
        })
        .collect())
}

/// Bonferroni-style widening: per-comparison quantile so that the
/// familywise two-sided level of `k` is kept across `m` comparisons.
pub fn widened_k(k: f64, m: usize) -> f64 {
    if m <= 1 {
        return k;
    }
    let per_tail = normal_tail(k) / m as f64;
    normal_quantile(1.0 - per_tail)
}

struct Ensemble {
    /// per path: values at each checkpoint, row-major [path][checkpoint]
    values: Vec<Vec<f64>>,
    /// per path importance weight (all ones for oracle ensembles)
    weights: Vec<f64>,
}

/// Weighted mean/covariance summaries of one checkpointed ensemble.
struct Summary {
    means: Vec<(f64, f64)>,
    /// upper triangle (a <= b) of the centered covariance matrix
    covs: Vec<(f64, f64)>,
    exps: Vec<(f64, f64)>,
}

fn summarize(ens: &Ensemble, lambdas: &[f64], ncp: usize) -> Result<Summary> {
    let col = |c: usize| -> Vec<f64> { ens.values.iter().map(|row| row[c]).collect() };
    let mut means = Vec::with_capacity(ncp);
    let mut cols = Vec::with_capacity(ncp);
    for c in 0..ncp {
        let v = col(c);
        means.push(weighted_moment(&v, &ens.weights, |x| x)?);
        cols.push(v);
    }
    let wsum: f64 = ens.weights.iter().sum();
    let mut covs = Vec::new();
    for a in 0..ncp {
        for b in a..ncp {
            let (ma, mb) = (means[a].0, means[b].0);
            let mut est = 0.0;
            for ((xa, xb), w) in cols[a].iter().zip(&cols[b]).zip(&ens.weights) {
                est += w * (xa - ma) * (xb - mb);
            }
            est /= wsum;
            let mut var = 0.0;
            for ((xa, xb), w) in cols[a].iter().zip(&cols[b]).zip(&ens.weights) {
                let d = (xa - ma) * (xb - mb) - est;
                var += w * w * d * d;
            }
            var /= wsum * wsum;
            covs.push((est, math::sqrt(var)));
        }
    }
    let mut exps = Vec::new();
    for &lam in lambdas {
        for c in 0..ncp {
            exps.push(weighted_moment(&cols[c], &ens.weights, |x| {
                math::exp(-lam * x)
            })?);
        }
    }
    Ok(Summary { means, covs, exps })
}

/// Run the harness against the plain-Rosenblatt oracle.
pub fn run_mc(cfg: &McConfig) -> Result<McReport> {
    run_with_oracle(cfg, OracleMode::PlainRosenblatt)
}

/// Run the harness against the deliberately wrong oracle (no reweighting of
/// the comparison target); used to demonstrate the test's discrimination.
pub fn run_sensitivity(cfg: &McConfig) -> Result<McReport> {
    run_with_oracle(cfg, OracleMode::WrongUnweightedShifted)
}

pub fn run_with_oracle(cfg: &McConfig, mode: OracleMode) -> Result<McReport> {
    cfg.validate()?;
    let grid = TimeGrid::new(cfg.horizon, cfg.steps)?;
    let hurst = HurstParam::new(cfg.hurst)?;
    let spec = cfg.shift.build(&hurst, &grid)?;
    let cp_indices: Vec<usize> = cfg
        .checkpoints
        .iter()
        .map(|&t| grid.index_of(t))
        .collect::<Result<_>>()?;
    let ncp = cp_indices.len();
    let tables = SecondChaosTables::build(&hurst, &grid);
    let slices: Vec<KernelSlice> = tables.slices(&cp_indices);
    let fbm_table = FbmIntegralTable::for_shift(&spec, &cp_indices)?;
    let d_h = hurst.d_h();
    let n_paths = cfg.paths as u64;

    // test ensemble: shifted paths with importance weights
    let mut test = Ensemble {
        values: Vec::with_capacity(cfg.paths),
        weights: Vec::with_capacity(cfg.paths),
    };
    for p in 0..n_paths {
        let w = WienerIncrements::generate(&grid, cfg.seed, p);
        let db = w.increments();
        let mut row = Vec::with_capacity(ncp);
        for (slot, slice) in slices.iter().enumerate() {
            let r = slice.evaluate(db);
            let shifted = r
                + 2.0 * d_h * fbm_table.integral(slot, db)
                + d_h * spec.theta_sq_integral(slice.node_index());
            row.push(shifted);
        }
        test.values.push(row);
        test.weights.push(log_density(&spec, &w)?.z_terminal());
    }

    // oracle ensemble on a disjoint stream (path indices offset by N)
    let mut oracle = Ensemble {
        values: Vec::with_capacity(cfg.paths),
        weights: vec![1.0; cfg.paths],
    };
    for p in 0..n_paths {
        let w = WienerIncrements::generate(&grid, cfg.seed, n_paths + p);
        let db = w.increments();
        let mut row = Vec::with_capacity(ncp);
        for (slot, slice) in slices.iter().enumerate() {
            let value = match mode {
                OracleMode::PlainRosenblatt => slice.evaluate(db),
                OracleMode::WrongUnweightedShifted => {
                    slice.evaluate(db)
                        + 2.0 * d_h * fbm_table.integral(slot, db)
                        + d_h * spec.theta_sq_integral(slice.node_index())
                }
            };
            row.push(value);
        }
        oracle.values.push(row);
    }

    // diagnostics on the raw weights
    let nf = cfg.paths as f64;
    let mean_z = test.weights.iter().sum::<f64>() / nf;
    let z_var = test
        .weights
        .iter()
        .map(|z| (z - mean_z) * (z - mean_z))
        .sum::<f64>()
        / (nf - 1.0);
    let mean_z_se = math::sqrt(z_var / nf);
    let ess = effective_sample_size(&test.weights)?;
    let degenerate = ess < 0.01 * nf;

    let ws = summarize(&test, &cfg.exp_lambdas, ncp)?;
    let os = summarize(&oracle, &cfg.exp_lambdas, ncp)?;

    // row count for the Bonferroni widening: means + covariances + probes
    // + the martingale check
    let m = ncp + ncp * (ncp + 1) / 2 + cfg.exp_lambdas.len() * ncp + 1;
    let k_eff = widened_k(cfg.tolerance_k, m);

    let verdict = |est: f64, se: f64, ora: f64, ose: f64| -> Verdict {
        if degenerate {
            return Verdict::Suppressed;
        }
        let combined = math::sqrt(se * se + ose * ose);
        if math::abs(est - ora) <= k_eff * combined {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    };

    let mut rows = Vec::new();
    rows.push(StatRow {
        name: String::from("mean_Z"),
        estimate: mean_z,
        se: mean_z_se,
        oracle: 1.0,
        oracle_se: 0.0,
        verdict: verdict(mean_z, mean_z_se, 1.0, 0.0),
    });
    let cp_time = |c: usize| grid.node(cp_indices[c]);
    for c in 0..ncp {
        let (e, se) = ws.means[c];
        let (o, ose) = os.means[c];
        rows.push(StatRow {
            name: format!("mean[t={}]", cp_time(c)),
            estimate: e,
            se,
            oracle: o,
            oracle_se: ose,
            verdict: verdict(e, se, o, ose),
        });
    }
    let mut slot = 0;
    for a in 0..ncp {
        for b in a..ncp {
            let (e, se) = ws.covs[slot];
            let (o, ose) = os.covs[slot];
            rows.push(StatRow {
                name: format!("cov[t={},t={}]", cp_time(a), cp_time(b)),
                estimate: e,
                se,
                oracle: o,
                oracle_se: ose,
                verdict: verdict(e, se, o, ose),
            });
            slot += 1;
        }
    }
    let mut slot = 0;
    for &lam in &cfg.exp_lambdas {
        for c in 0..ncp {
            let (e, se) = ws.exps[slot];
            let (o, ose) = os.exps[slot];
            rows.push(StatRow {
                name: format!("exp[-{}x, t={}]", lam, cp_time(c)),
                estimate: e,
                se,
                oracle: o,
                oracle_se: ose,
                verdict: verdict(e, se, o, ose),
            });
            slot += 1;
        }
    }

    Ok(McReport {
        config_label: format!(
            "H={} T={} n={} N={} seed={} shift={} oracle={:?}",
            cfg.hurst,
            cfg.horizon,
            cfg.steps,
            cfg.paths,
            cfg.seed,
            spec.description(),
            mode
        ),
        mean_z,
        mean_z_se,
        ess,
        paths: cfg.paths,
        k_effective: k_eff,
        rows,
        weight_degeneracy: degenerate,
    })
}
