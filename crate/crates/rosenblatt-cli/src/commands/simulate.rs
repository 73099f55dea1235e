use crate::config::{AnyError, RunConfig, SimulateArgs};
use crate::csvout;
use rosenblatt::simulate::PathContext;
use rosenblatt::{HurstParam, TimeGrid};
use std::process::ExitCode;

pub fn run(args: SimulateArgs) -> Result<ExitCode, AnyError> {
    let cfg = RunConfig::resolve(&args.common)?;
    if cfg.paths == 0 {
        return Err("N must be at least 1".into());
    }
    let hurst = HurstParam::new(cfg.hurst)?;
    let grid = TimeGrid::new(cfg.horizon, cfg.steps)?;
    let ctx = PathContext::new(hurst, grid.clone());
    std::fs::create_dir_all(&cfg.out)?;

    let path_file = cfg.out.join("paths.csv");
    let n = grid.steps();
    let mut rows = Vec::with_capacity(cfg.paths * (n + 1));
    for p in 0..cfg.paths as u64 {
        let bundle = ctx.bundle(cfg.seed, p);
        let wiener = bundle.wiener.cumulative();
        for (i, w) in wiener.iter().enumerate() {
            rows.push((p, grid.node(i), *w, bundle.fbm_mid[i], bundle.rosenblatt[i]));
        }
    }
    csvout::write_paths(&path_file, rows.into_iter())?;
    println!(
        "wrote {} ({} paths x {} nodes; B, companion FBM index {}, Rosenblatt index {})",
        path_file.display(),
        cfg.paths,
        n + 1,
        ctx.hurst().h_mid(),
        ctx.hurst().h()
    );

    if args.dump_kernel {
        let dump = cfg.out.join("kernel.csv");
        csvout::write_kernel_matrix(&dump, ctx.fbm_mid_matrix())?;
        println!("wrote {} (cell-averaged Volterra weights)", dump.display());
    }
    Ok(ExitCode::SUCCESS)
}
