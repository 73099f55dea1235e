//! Acceptance suite: one test per release criterion, each printing a
//! single pass/fail line (visible with `cargo test -- --nocapture`).
//!
//! Every tolerance is pinned here, not configured elsewhere. Monte Carlo
//! criteria use fixed seeds, so the suite is deterministic.

use rosenblatt::frac::{frac_derivative, frac_integral, FracOrder};
use rosenblatt::girsanov::{
    drift_removal, log_density, shifted_rosenblatt_direct, shifted_rosenblatt_via_tilde,
    FbmIntegralTable, RootSign, ShiftSpec,
};
use rosenblatt::kernels::{
    beta_identity_check, fbm_covariance, volterra_matrix, FbmKernel, SecondChaosTables,
};
use rosenblatt::rng::WienerIncrements;
use rosenblatt::simulate::{relative_l2_error, PathContext, WienerRecovery};
use rosenblatt::special::gamma;
use rosenblatt::verify::{run_mc, run_sensitivity, McConfig, ShiftConfig};
use rosenblatt::{HurstParam, SampledFunction, TimeGrid};
use std::time::Instant;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "[acceptance] {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

#[test]
fn criterion_01_fractional_closed_forms_and_identities() {
    let start = Instant::now();
    let n = 512;
    let grid = TimeGrid::new(1.0, n).unwrap();

    // I^{1/2} 1 at x = 1 equals 1/Γ(1.5) within 0.5% relative
    let one = SampledFunction::constant(grid.clone(), 1.0);
    let half = frac_integral(&one, FracOrder::left(0.5)).unwrap();
    let got = half.value_at_node(n).unwrap();
    let expect = 1.0 / gamma(1.5);
    let rel = ((got - expect) / expect).abs();

    // semigroup and inversion identities, sup error below 1%
    let phi = SampledFunction::from_fn(grid.clone(), |t| 1.0 + t * t - 0.5 * t).unwrap();
    let scale = 1.75; // sup |phi|
    let mut sup = 0.0f64;
    let (a, b) = (0.3, 0.45);
    let two_step = frac_integral(
        &frac_integral(&phi, FracOrder::left(a)).unwrap(),
        FracOrder::left(b),
    )
    .unwrap();
    let one_step = frac_integral(&phi, FracOrder::left(a + b)).unwrap();
    sup = sup.max(two_step.max_abs_diff(&one_step) / scale);
    for &alpha in &[0.25, 0.5, 0.75] {
        let back = frac_derivative(
            &frac_integral(&phi, FracOrder::left(alpha)).unwrap(),
            FracOrder::left(alpha),
        )
        .unwrap();
        for i in 1..=n {
            let d = (back.value_at_node(i).unwrap() - phi.value_at_node(i).unwrap()).abs();
            sup = sup.max(d / scale);
        }
        // other direction needs f(0) = 0
        let f0 = SampledFunction::from_fn(grid.clone(), |t| t * (1.0 - t)).unwrap();
        let rec = frac_integral(
            &frac_derivative(&f0, FracOrder::left(alpha)).unwrap(),
            FracOrder::left(alpha),
        )
        .unwrap();
        for i in 1..=n {
            let d = (rec.value_at_node(i).unwrap() - f0.value_at_node(i).unwrap()).abs();
            sup = sup.max(d / 0.25);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        "criterion 1 (fractional closed forms, semigroup, inversion)",
        rel < 5e-3 && sup < 1e-2 && secs < 10.0,
        &format!("closed-form rel {rel:.2e}, identity sup {sup:.2e}, {secs:.2} s"),
    );
}

#[test]
fn criterion_02_beta_identity() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &alpha in &[0.15, 0.25, 0.35] {
        for &(u, v) in &[(0.3, 0.7), (0.5, 0.9)] {
            let (lhs, rhs) = beta_identity_check(alpha, u, v).unwrap();
            worst = worst.max(((lhs - rhs) / rhs).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        "criterion 2 (beta identity)",
        worst < 1e-2 && secs < 10.0,
        &format!("worst rel {worst:.2e}, {secs:.2} s"),
    );
}

#[test]
fn criterion_03_fbm_isometry() {
    let start = Instant::now();
    let n = 256;
    let paths = 10_000usize;
    let h = HurstParam::new(0.75).unwrap();
    let grid = TimeGrid::new(1.0, n).unwrap();
    let matrix = volterra_matrix(&FbmKernel::primary(&h), &grid);
    let cps = [64usize, 128, 192, 256];

    let mut samples = vec![vec![0.0f64; cps.len()]; paths];
    for (p, row) in samples.iter_mut().enumerate() {
        let w = WienerIncrements::generate(&grid, 20_260_303, p as u64);
        let path = matrix.apply_to_increments(w.increments());
        for (c, &i) in cps.iter().enumerate() {
            row[c] = path[i];
        }
    }
    let nf = paths as f64;
    let mean: Vec<f64> = (0..cps.len())
        .map(|c| samples.iter().map(|r| r[c]).sum::<f64>() / nf)
        .collect();
    let mut worst_sigma = 0.0f64;
    let mut worst_pair = (0usize, 0usize);
    for a in 0..cps.len() {
        for b in a..cps.len() {
            let mut est = 0.0;
            let mut var = 0.0;
            for r in &samples {
                est += (r[a] - mean[a]) * (r[b] - mean[b]);
            }
            est /= nf;
            for r in &samples {
                let d = (r[a] - mean[a]) * (r[b] - mean[b]) - est;
                var += d * d;
            }
            let se = (var / nf).sqrt() / nf.sqrt();
            let target = fbm_covariance(grid.node(cps[a]), grid.node(cps[b]), h.h());
            let sigma = (est - target).abs() / se;
            if sigma > worst_sigma {
                worst_sigma = sigma;
                worst_pair = (a, b);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        "criterion 3 (FBM covariance isometry)",
        worst_sigma < 4.0 && secs < 120.0,
        &format!(
            "worst |dev| {worst_sigma:.2} SE at pair {worst_pair:?}, {secs:.1} s, N={paths}, n={n}"
        ),
    );
}

#[test]
fn criterion_04_rosenblatt_variance_fixture() {
    let start = Instant::now();
    let h = HurstParam::new(0.75).unwrap();

    // fine-quadrature fixture at n = 1024: 2‖K_ros_1‖² of the projected kernel
    let fine = TimeGrid::new(1.0, 1024).unwrap();
    let tables = SecondChaosTables::build(&h, &fine);
    let slice = &tables.slices(&[1024])[0];
    let fixture = slice.variance();
    println!("[acceptance] criterion 4 fixture: 2||K_ros||^2 at n=1024 is {fixture:.6}");

    // the quadrature oracle confirms the t^{2H} expectation up to the
    // documented slow edge deficit (measured ~0.91 at this resolution)
    let sane = fixture > 0.85 && fixture < 1.02;

    // empirical variance over 10^4 paths of the same discrete law
    let paths = 10_000usize;
    let mut m2 = 0.0;
    let mut m4 = 0.0;
    for p in 0..paths {
        let w = WienerIncrements::generate(&fine, 777_003, p as u64);
        let r = slice.evaluate(w.increments());
        m2 += r * r;
        m4 += r * r * r * r;
    }
    let nf = paths as f64;
    m2 /= nf;
    m4 /= nf;
    let se = ((m4 - m2 * m2) / nf).sqrt();
    let sigma = (m2 - fixture).abs() / se;
    let secs = start.elapsed().as_secs_f64();
    report(
        "criterion 4 (Rosenblatt variance vs quadrature fixture)",
        sane && sigma < 4.0,
        &format!("fixture {fixture:.4}, empirical {m2:.4}, |dev| {sigma:.2} SE, {secs:.1} s"),
    );
}

#[test]
fn criterion_05_wiener_recovery() {
    let start = Instant::now();
    let h = HurstParam::new(0.75).unwrap();
    let kernel = FbmKernel::primary(&h);
    let seeds: [u64; 4] = [11, 12, 13, 14];
    let mut errs = Vec::new();
    for &n in &[256usize, 1024] {
        let grid = TimeGrid::new(1.0, n).unwrap();
        let matrix = volterra_matrix(&kernel, &grid);
        let recovery = WienerRecovery::build(&kernel, &grid).unwrap();
        let mut avg = 0.0;
        for &s in &seeds {
            let w = WienerIncrements::generate(&grid, s, 0);
            let fbm = matrix.apply_to_increments(w.increments());
            let back = recovery.recover(&fbm).unwrap();
            avg += relative_l2_error(&back, &w.cumulative());
        }
        errs.push(avg / seeds.len() as f64);
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        "criterion 5 (Wiener recovery from FBM)",
        errs[1] < 0.05 && errs[1] < errs[0],
        &format!(
            "rel L2 error {:.4} at n=1024 vs {:.4} at n=256, {secs:.1} s",
            errs[1], errs[0]
        ),
    );
}

#[test]
fn criterion_06_two_construction_consistency() {
    let start = Instant::now();
    let h = HurstParam::new(0.7).unwrap();
    let seeds: Vec<u64> = (0..100).collect();
    let mut mean_gap = Vec::new();
    let mut worst_gap = Vec::new();
    for &n in &[128usize, 512] {
        let grid = TimeGrid::new(1.0, n).unwrap();
        let ctx = PathContext::new(h, grid.clone());
        let spec = ShiftSpec::power(&h, &grid, 0.0).unwrap();
        let table = FbmIntegralTable::build_full(&spec).unwrap();
        let mut acc = 0.0;
        let mut worst = 0.0f64;
        for &s in &seeds {
            let bundle = ctx.bundle(31_337, s);
            let direct = shifted_rosenblatt_direct(&bundle, &spec, &table).unwrap();
            let tilde = shifted_rosenblatt_via_tilde(&bundle.wiener, &spec, ctx.tables()).unwrap();
            let sup = direct
                .iter()
                .zip(&tilde)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            let scale = direct.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let rel = sup / scale.max(1e-12);
            acc += rel;
            worst = worst.max(rel);
        }
        mean_gap.push(acc / seeds.len() as f64);
        worst_gap.push(worst);
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        "criterion 6 (two-construction consistency)",
        worst_gap[1] < 0.05 && mean_gap[1] < 2.0 * mean_gap[0],
        &format!(
            "mean rel sup gap {:.2e} (n=512) vs {:.2e} (n=128), worst {:.2e}, {secs:.1} s",
            mean_gap[1], mean_gap[0], worst_gap[1]
        ),
    );
}

#[test]
fn criterion_07_martingale_property() {
    let start = Instant::now();
    let h = HurstParam::new(0.7).unwrap();
    let grid = TimeGrid::new(1.0, 256).unwrap();
    let paths = 10_000usize;
    let shifts = [
        ShiftSpec::zero(&h, &grid),
        ShiftSpec::power(&h, &grid, 0.0).unwrap(),
        ShiftSpec::indicator(&h, &grid, &[(0.0, 0.5)]).unwrap(),
    ];
    let mut detail = String::new();
    let mut ok = true;
    for (k, spec) in shifts.iter().enumerate() {
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for p in 0..paths {
            let w = WienerIncrements::generate(&grid, 555_000 + k as u64, p as u64);
            let z = log_density(spec, &w).unwrap().z_terminal();
            sum += z;
            sum_sq += z * z;
        }
        let nf = paths as f64;
        let mean = sum / nf;
        let se = (((sum_sq / nf - mean * mean).max(0.0)) / nf).sqrt();
        if k == 0 {
            ok &= mean == 1.0; // θ ≡ 0: exactly one
            detail.push_str(&format!("{}: mean 1 exactly; ", spec.description()));
        } else {
            ok &= (mean - 1.0).abs() < 3.0 * se;
            detail.push_str(&format!("{}: {mean:.4} ± {se:.4}; ", spec.description()));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        "criterion 7 (martingale property of the density)",
        ok,
        &format!("{detail}{secs:.1} s"),
    );
}

#[test]
fn criterion_08_measure_change_verification() {
    let start = Instant::now();
    let mut cfg = McConfig::new(0.7, 1.0, 256, 20_000, 42);
    cfg.shift = ShiftConfig::Power { alpha: 0.0 };
    cfg.tolerance_k = 3.0;
    let rep = run_mc(&cfg).unwrap();
    let max_sigma = rep
        .rows
        .iter()
        .map(|r| r.sigma_distance())
        .fold(0.0f64, f64::max);
    let pass_main = rep.overall_pass();
    let wrong = run_sensitivity(&cfg).unwrap();
    let pass_sensitivity = !wrong.overall_pass();
    let secs = start.elapsed().as_secs_f64();
    for r in rep.failed_rows() {
        println!(
            "[acceptance]   failed row {}: {} vs {} ({:.2} SE)",
            r.name,
            r.estimate,
            r.oracle,
            r.sigma_distance()
        );
    }
    report(
        "criterion 8 (importance-sampling measure change)",
        pass_main && pass_sensitivity && secs < 900.0,
        &format!(
            "all {} rows within k_eff={:.2} (max {:.2} SE), ESS {:.0}/{}, sensitivity fails as required, {secs:.1} s",
            rep.rows.len(),
            rep.k_effective,
            max_sigma,
            rep.ess,
            rep.paths
        ),
    );
}

#[test]
fn criterion_09_indicator_example() {
    let start = Instant::now();
    let h = HurstParam::new(0.7).unwrap();
    let grid = TimeGrid::new(1.0, 256).unwrap();
    let d_h = h.d_h();
    let a1 = ShiftSpec::indicator(&h, &grid, &[(0.0, 0.5)]).unwrap();
    let a2 = ShiftSpec::indicator(&h, &grid, &[(0.25, 0.75)]).unwrap();

    // deterministic drifts equal d_H t to machine precision
    let mut drift_exact = true;
    for i in 0..=256usize {
        let t = grid.node(i);
        drift_exact &= d_h * a1.theta_sq_integral(i) == d_h * t;
        drift_exact &= d_h * a2.theta_sq_integral(i) == d_h * t;
    }

    // stochastic shift paths differ in L² by a nonzero amount
    let t1 = FbmIntegralTable::build_full(&a1).unwrap();
    let t2 = FbmIntegralTable::build_full(&a2).unwrap();
    let w = WienerIncrements::generate(&grid, 910, 0);
    let db = w.increments();
    let delta = grid.delta();
    let mut l2_diff = 0.0;
    for slot in 0..256usize {
        let g1 = 2.0 * d_h * t1.integral(slot, db);
        let g2 = 2.0 * d_h * t2.integral(slot, db);
        l2_diff += (g1 - g2) * (g1 - g2) * delta;
    }
    l2_diff = l2_diff.sqrt();
    let secs = start.elapsed().as_secs_f64();
    report(
        "criterion 9 (indicator shifts: same drift, different Gaussian parts)",
        drift_exact && l2_diff > 1e-3,
        &format!("drift d_H*t exact, stochastic L2 difference {l2_diff:.3}, {secs:.1} s"),
    );
}

#[test]
fn criterion_10_drift_removal() {
    let start = Instant::now();
    let h = HurstParam::new(0.7).unwrap();
    let n = 256;
    let grid = TimeGrid::new(1.0, n).unwrap();
    let d_h = h.d_h();

    // model with D ≡ 0: b(t) = 2 sqrt(d_H) (1 + t)/2-free scale, a = b²/(4 d_H)
    let bfun = |t: f64| 2.0 * d_h.sqrt() * (0.6 + 0.4 * t);
    let b = SampledFunction::from_fn(grid.clone(), bfun).unwrap();
    let a = SampledFunction::from_fn(grid.clone(), |t| bfun(t) * bfun(t) / (4.0 * d_h)).unwrap();
    let removal = drift_removal(&a, &b, &h, RootSign::Plus).unwrap();
    let reduced = removal.fully_reduced;

    // X = ∫a + ∫b dB^mid + R must coincide with the shifted path R~ for
    // θ = b/(2 d_H): residual below discretization tolerance
    let spec = ShiftSpec::from_theta(&h, &grid, removal.theta.clone()).unwrap();
    let nodes: Vec<usize> = (1..=n).collect();
    let table_b = FbmIntegralTable::build(&b, &h, &nodes).unwrap();
    let table_theta = FbmIntegralTable::for_shift(&spec, &nodes).unwrap();
    let ctx = PathContext::new(h, grid.clone());
    let bundle = ctx.bundle(2026, 7);
    let db = bundle.wiener.increments();
    // analytic ∫a: a = (0.6 + 0.4 t)² so A(t) = (0.6+0.4t)³/(1.2) - 0.6³/1.2
    let a_int = |t: f64| ((0.6 + 0.4 * t).powi(3) - 0.6f64.powi(3)) / 1.2;
    let mut worst = 0.0f64;
    for (slot, &i) in nodes.iter().enumerate() {
        let t = grid.node(i);
        let x = a_int(t) + table_b.integral(slot, db) + bundle.rosenblatt[i];
        let shifted = bundle.rosenblatt[i]
            + 2.0 * d_h * table_theta.integral(slot, db)
            + d_h * spec.theta_sq_integral(i);
        worst = worst.max((x - shifted).abs());
    }

    // and a D < 0 model is rejected structurally
    let bad = drift_removal(
        &SampledFunction::constant(grid.clone(), 1.0),
        &SampledFunction::zeros(grid),
        &h,
        RootSign::Plus,
    );
    let structured = matches!(bad, Err(rosenblatt::Error::NotReducible { .. }));
    let secs = start.elapsed().as_secs_f64();
    report(
        "criterion 10 (drift removal)",
        reduced && worst < 5e-3 && structured,
        &format!("D=0 residual sup {worst:.2e}, D<0 rejected structurally, {secs:.1} s"),
    );
}
