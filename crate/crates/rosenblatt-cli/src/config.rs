//! Flag parsing, the optional KEY=VALUE config file, and shift-spec syntax.
//!
//! Flags override config-file entries. Shift syntax:
//!   power:ALPHA           φ(u) = u^ALPHA
//!   indicator:a,b;c,d     θ = 1_A - 1_{A^c} with A = [a,b) ∪ [c,d) ∪ ...
//!   table:PATH            CSV of θ node values (one per line, n+1 lines)
//!   zero                  θ ≡ 0

use clap::{Args, Parser, Subcommand};
use rosenblatt::verify::ShiftConfig;
use std::collections::HashMap;
use std::error::Error;
use std::path::{Path, PathBuf};

pub type AnyError = Box<dyn Error>;

#[derive(Parser, Debug)]
#[command(
    name = "rosenblatt",
    version,
    about = "Fractional calculus, Rosenblatt path simulation and measure-change verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate paths (Wiener, companion FBM, Rosenblatt) and write CSV
    Simulate(SimulateArgs),
    /// Run the importance-sampling verification of the measure change
    Verify(VerifyArgs),
    /// Numerical invariant suite (closed forms, isometries, roundtrips)
    Selftest(SelftestArgs),
    /// Worked shift examples: power, indicator, drift-removal
    Examples(ExamplesArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Hurst index in (1/2, 1)
    #[arg(long = "H")]
    pub hurst: Option<f64>,
    /// time horizon T > 0
    #[arg(long = "T")]
    pub horizon: Option<f64>,
    /// number of grid steps (>= 2)
    #[arg(long = "n")]
    pub steps: Option<usize>,
    /// number of Monte Carlo paths
    #[arg(long = "N")]
    pub paths: Option<usize>,
    /// base seed of the counter RNG
    #[arg(long)]
    pub seed: Option<u64>,
    /// shift spec: power:ALPHA | indicator:a,b;c,d | table:PATH | zero
    #[arg(long)]
    pub shift: Option<String>,
    /// output directory for CSV files
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// tolerance multiplier k for the verdicts
    #[arg(long = "k")]
    pub tolerance: Option<f64>,
    /// KEY=VALUE config file; flags override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// also dump the Volterra kernel matrix as CSV (row,col,value)
    #[arg(long)]
    pub dump_kernel: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// grid size of the self-test suite
    #[arg(long = "n", default_value_t = 512)]
    pub steps: usize,
    /// diagnostic hook: scale c_H to demonstrate isometry sensitivity
    #[arg(long, default_value_t = 1.0)]
    pub perturb_ch: f64,
}

#[derive(Args, Debug)]
pub struct ExamplesArgs {
    /// which example: power | indicator | drift-removal
    pub which: String,
    #[command(flatten)]
    pub common: CommonArgs,
    /// power-shift exponent α (power example)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// first interval set (indicator example)
    #[arg(long, default_value = "0,0.5")]
    pub set_a: String,
    /// second interval set (indicator example)
    #[arg(long, default_value = "0.25,0.75")]
    pub set_b: String,
    /// drift scale s in a = s b^2/(4 d_H): s = 1 is critical (D = 0),
    /// s < 1 reducible with residual, s > 1 not reducible
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub drift_scale: f64,
}

/// Resolved numeric configuration (flags > config file > defaults).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub hurst: f64,
    pub horizon: f64,
    pub steps: usize,
    pub paths: usize,
    pub seed: u64,
    pub shift: ShiftConfig,
    pub out: PathBuf,
    pub tolerance: f64,
}

impl RunConfig {
    pub fn resolve(common: &CommonArgs) -> Result<Self, AnyError> {
        let file = match &common.config {
            Some(path) => parse_config_file(path)?,
            None => HashMap::new(),
        };
        let get = |flag: Option<String>, key: &str| -> Option<String> {
            flag.or_else(|| file.get(key).cloned())
        };
        let hurst = get(common.hurst.map(|v| v.to_string()), "H")
            .map(|s| s.parse::<f64>())
            .transpose()?
            .unwrap_or(0.7);
        let horizon = get(common.horizon.map(|v| v.to_string()), "T")
            .map(|s| s.parse::<f64>())
            .transpose()?
            .unwrap_or(1.0);
        let steps = get(common.steps.map(|v| v.to_string()), "n")
            .map(|s| s.parse::<usize>())
            .transpose()?
            .unwrap_or(256);
        let paths = get(common.paths.map(|v| v.to_string()), "N")
            .map(|s| s.parse::<usize>())
            .transpose()?
            .unwrap_or(10_000);
        let seed = get(common.seed.map(|v| v.to_string()), "seed")
            .map(|s| s.parse::<u64>())
            .transpose()?
            .unwrap_or(1);
        let shift_text = get(common.shift.clone(), "shift").unwrap_or_else(|| "zero".into());
        let shift = parse_shift(&shift_text)?;
        let out = get(common.out.as_ref().map(|p| p.display().to_string()), "out")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."));
        let tolerance = get(common.tolerance.map(|v| v.to_string()), "k")
            .map(|s| s.parse::<f64>())
            .transpose()?
            .unwrap_or(3.0);
        Ok(Self {
            hurst,
            horizon,
            steps,
            paths,
            seed,
            shift,
            out,
            tolerance,
        })
    }
}

fn parse_config_file(path: &Path) -> Result<HashMap<String, String>, AnyError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {} is not KEY=VALUE: {line}", lineno + 1))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

pub fn parse_shift(text: &str) -> Result<ShiftConfig, AnyError> {
    if text == "zero" {
        return Ok(ShiftConfig::Zero);
    }
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| format!("malformed shift spec {text:?} (expected kind:args)"))?;
    match kind {
        "power" => {
            let alpha: f64 = rest
                .parse()
                .map_err(|_| format!("power shift needs a numeric exponent, got {rest:?}"))?;
            Ok(ShiftConfig::Power { alpha })
        }
        "indicator" => Ok(ShiftConfig::Indicator {
            intervals: parse_intervals(rest)?,
        }),
        "table" => {
            let text = std::fs::read_to_string(rest)
                .map_err(|e| format!("cannot read shift table {rest:?}: {e}"))?;
            let values: Result<Vec<f64>, _> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(str::parse::<f64>)
                .collect();
            Ok(ShiftConfig::Table {
                values: values.map_err(|e| format!("bad table value: {e}"))?,
            })
        }
        other => Err(format!("unknown shift kind {other:?}").into()),
    }
}

pub fn parse_intervals(text: &str) -> Result<Vec<(f64, f64)>, AnyError> {
    let mut out = Vec::new();
    for part in text.split(';') {
        let (a, b) = part
            .split_once(',')
            .ok_or_else(|| format!("interval {part:?} is not a,b"))?;
        out.push((a.trim().parse()?, b.trim().parse()?));
    }
    if out.is_empty() {
        return Err("empty interval list".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_syntax() {
        assert_eq!(parse_shift("zero").unwrap(), ShiftConfig::Zero);
        assert_eq!(
            parse_shift("power:-0.25").unwrap(),
            ShiftConfig::Power { alpha: -0.25 }
        );
        assert_eq!(
            parse_shift("indicator:0,0.5;0.7,0.9").unwrap(),
            ShiftConfig::Indicator { intervals: vec![(0.0, 0.5), (0.7, 0.9)] }
        );
        assert!(parse_shift("power").is_err());
        assert!(parse_shift("power:x").is_err());
        assert!(parse_shift("indicator:1").is_err());
        assert!(parse_shift("mystery:1").is_err());
        assert!(parse_shift("table:/no/such/file").is_err());
    }
}
