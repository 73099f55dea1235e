use crate::config::{AnyError, RunConfig, VerifyArgs};
use crate::csvout;
use rosenblatt::verify::{run_mc, McConfig};
use std::process::ExitCode;

pub fn run(args: VerifyArgs) -> Result<ExitCode, AnyError> {
    let cfg = RunConfig::resolve(&args.common)?;
    let mut mc = McConfig::new(cfg.hurst, cfg.horizon, cfg.steps, cfg.paths, cfg.seed);
    mc.shift = cfg.shift.clone();
    mc.tolerance_k = cfg.tolerance;
    let report = run_mc(&mc)?;

    std::fs::create_dir_all(&cfg.out)?;
    let report_file = cfg.out.join("report.csv");
    csvout::write_report(&report_file, &report)?;
    csvout::print_report_summary(&report);
    println!("wrote {}", report_file.display());

    if report.weight_degeneracy {
        eprintln!(
            "weight degeneracy: ESS {:.1} below 1% of N = {}; verdicts suppressed",
            report.ess, report.paths
        );
        return Ok(ExitCode::from(2));
    }
    Ok(if report.overall_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
