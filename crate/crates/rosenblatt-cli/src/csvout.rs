//! CSV writers. Numbers carry 17 significant digits so downstream diffs are
//! exact across runs.

use rosenblatt::verify::{McReport, Verdict};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_paths(
    path: &Path,
    rows: impl Iterator<Item = (u64, f64, f64, f64, f64)>,
) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "path_index,t,B,B_fbm,R")?;
    for (idx, t, b, fbm, r) in rows {
        writeln!(out, "{idx},{},{},{},{}", fmt(t), fmt(b), fmt(fbm), fmt(r))?;
    }
    Ok(())
}

pub fn write_kernel_matrix(path: &Path, matrix: &rosenblatt::KernelMatrix) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "row,col,value")?;
    let n = matrix.grid().steps();
    for i in 1..=n {
        for j in 1..=i {
            writeln!(out, "{i},{j},{}", fmt(matrix.entry(i, j)))?;
        }
    }
    Ok(())
}

pub fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Suppressed => "suppressed",
    }
}

pub fn write_report(path: &Path, report: &McReport) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "name,estimate,se,oracle,oracle_se,verdict")?;
    writeln!(
        out,
        "ess,{},0,{},0,{}",
        fmt(report.ess),
        fmt(report.paths as f64),
        if report.weight_degeneracy {
            "degenerate"
        } else {
            "ok"
        }
    )?;
    for row in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.name,
            fmt(row.estimate),
            fmt(row.se),
            fmt(row.oracle),
            fmt(row.oracle_se),
            verdict_label(row.verdict)
        )?;
    }
    Ok(())
}

pub fn print_report_summary(report: &McReport) {
    println!("run: {}", report.config_label);
    println!(
        "mean Z_T = {:.6} +- {:.6}   ESS = {:.0} of {}   k_eff = {:.3}",
        report.mean_z, report.mean_z_se, report.ess, report.paths, report.k_effective
    );
    if report.weight_degeneracy {
        println!("WEIGHT DEGENERACY: verdicts suppressed");
        return;
    }
    let mut passed = 0usize;
    for row in &report.rows {
        if row.verdict == Verdict::Pass {
            passed += 1;
        } else {
            println!(
                "  FAIL {}: {:.6} vs oracle {:.6} ({:.2} combined SE)",
                row.name,
                row.estimate,
                row.oracle,
                row.sigma_distance()
            );
        }
    }
    println!(
        "verdicts: {passed}/{} pass -> {}",
        report.rows.len(),
        if report.overall_pass() {
            "PASS"
        } else {
            "FAIL"
        }
    );
}
