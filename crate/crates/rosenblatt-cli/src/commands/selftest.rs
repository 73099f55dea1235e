//! Numerical invariant suite: closed forms of the fractional operators, the
//! beta identity, kernel isometries and the operator roundtrips. Prints one
//! line per check; any failure makes the exit status nonzero.
//!
//! `--perturb-ch` scales c_H before the kernel checks run. The isometry
//! checks are quadratic in c_H, so even a 1% perturbation fails them --
//! which is exactly what the hook is for.

use crate::config::{AnyError, SelftestArgs};
use rosenblatt::frac::{
    frac_derivative, frac_integral, integration_by_parts_check, weighted_frac_forward,
    weighted_frac_inverse, FracOrder,
};
use rosenblatt::kernels::{
    adjoint_op, adjoint_op_inverse, beta_identity_check, kh_inverse, rosenblatt_kernel,
    volterra_matrix, FbmKernel,
};
use rosenblatt::special::gamma;
use rosenblatt::{HurstParam, SampledFunction, TimeGrid};
use std::process::ExitCode;

struct Suite {
    failures: usize,
}

impl Suite {
    fn check(&mut self, name: &str, pass: bool, detail: String) {
        println!("{} {name} ({detail})", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failures += 1;
        }
    }
}

pub fn run(args: SelftestArgs) -> Result<ExitCode, AnyError> {
    let n = args.steps;
    let grid = TimeGrid::new(1.0, n)?;
    let h = HurstParam::new(0.75)?.with_perturbed_c_h(args.perturb_ch);
    let mut suite = Suite { failures: 0 };
    if args.perturb_ch != 1.0 {
        println!("note: c_H perturbed by factor {}", args.perturb_ch);
    }

    // fractional closed form
    let one = SampledFunction::constant(grid.clone(), 1.0);
    let half = frac_integral(&one, FracOrder::left(0.5))?;
    let got = half.value_at_node(n).unwrap();
    let expect = 1.0 / gamma(1.5);
    suite.check(
        "frac closed form I^{1/2}1(1) = 1/Gamma(1.5)",
        ((got - expect) / expect).abs() < 5e-3,
        format!("rel {:.2e}", ((got - expect) / expect).abs()),
    );

    // inversion identity
    let phi = SampledFunction::from_fn(grid.clone(), |t| 1.0 + t * t - 0.5 * t)?;
    let back = frac_derivative(
        &frac_integral(&phi, FracOrder::left(0.5))?,
        FracOrder::left(0.5),
    )?;
    let mut sup = 0.0f64;
    for i in 1..=n {
        sup = sup.max((back.value_at_node(i).unwrap() - phi.value_at_node(i).unwrap()).abs());
    }
    suite.check(
        "frac inversion D^a I^a = id",
        sup < 1e-2,
        format!("sup {sup:.2e}"),
    );

    // semigroup
    let two = frac_integral(
        &frac_integral(&phi, FracOrder::left(0.3))?,
        FracOrder::left(0.45),
    )?;
    let oneshot = frac_integral(&phi, FracOrder::left(0.75))?;
    let sg = two.max_abs_diff(&oneshot);
    suite.check(
        "frac semigroup I^a I^b = I^{a+b}",
        sg < 1e-2,
        format!("sup {sg:.2e}"),
    );

    // integration by parts
    let f = SampledFunction::from_fn(grid.clone(), |t| t)?;
    let g = SampledFunction::from_fn(grid.clone(), |t| 1.0 - t)?;
    let (lhs, rhs) = integration_by_parts_check(&f, &g, 0.3)?;
    suite.check(
        "fractional integration by parts",
        ((lhs - rhs) / lhs.abs().max(1e-12)).abs() < 1e-2,
        format!("{lhs:.6} vs {rhs:.6}"),
    );

    // weighted operator roundtrip
    let fwd = weighted_frac_forward(&phi, 0.35)?;
    let inv = weighted_frac_inverse(&fwd, 0.35)?;
    let mut wsup = 0.0f64;
    for i in 1..=n {
        wsup = wsup.max((inv.value_at_node(i).unwrap() - phi.value_at_node(i).unwrap()).abs());
    }
    suite.check(
        "weighted operator roundtrip",
        wsup < 2e-2,
        format!("sup {wsup:.2e}"),
    );

    // beta identity
    let (bl, br) = beta_identity_check(0.25, 0.3, 0.7)?;
    suite.check(
        "beta identity",
        ((bl - br) / br).abs() < 1e-2,
        format!("rel {:.2e}", ((bl - br) / br).abs()),
    );

    // hurst constants consistency
    suite.check(
        "constant consistency e_H = c_mid^2 d_H",
        (h.e_h() / (h.c_mid() * h.c_mid()) - h.d_h()).abs() < 1e-12,
        format!("e_H {:.6}", h.e_h()),
    );

    // Volterra isometry (sensitive to c_H)
    let kernel = FbmKernel::primary(&h);
    let matrix = volterra_matrix(&kernel, &grid);
    let iso = matrix.row_sq_integral(n);
    suite.check(
        "Volterra isometry sum K(T,s)^2 ds = T^{2H}",
        (iso - 1.0).abs() < 2.5e-2,
        format!("{iso:.4} vs 1"),
    );

    // adjoint isometry (sensitive to c_H)
    let img = adjoint_op(&one, &kernel)?;
    let a_iso = img.l2_norm_sq();
    suite.check(
        "adjoint isometry |K* 1|^2 = T^{2H}",
        (a_iso - 1.0).abs() < 2.5e-2,
        format!("{a_iso:.4} vs 1"),
    );

    // adjoint roundtrip
    let back = adjoint_op_inverse(&img, &kernel)?;
    let mut rsup = 0.0f64;
    for i in 1..n {
        rsup = rsup.max((back.value_at_node(i).unwrap() - 1.0).abs());
    }
    suite.check(
        "adjoint inverse roundtrip",
        rsup < 5e-2,
        format!("sup {rsup:.2e}"),
    );

    // K^{-1} roundtrip through the kernel matrix
    let delta = grid.delta();
    let mut vals = vec![0.0; n + 1];
    for (i, slot) in vals.iter_mut().enumerate().skip(1) {
        let mut acc = 0.0;
        for j in 1..=i {
            acc += matrix.entry(i, j) * (1.0 + 0.5 * grid.midpoint(j)) * delta;
        }
        *slot = acc;
    }
    let kf = SampledFunction::from_values(grid.clone(), vals)?;
    let rec = kh_inverse(&kf, &kernel)?;
    let mut ksup = 0.0f64;
    for i in (n / 8)..=(7 * n / 8) {
        let expect = 1.0 + 0.5 * grid.node(i);
        ksup = ksup.max((rec.value_at_node(i).unwrap() - expect).abs() / expect);
    }
    suite.check(
        "kernel-inverse roundtrip",
        ksup < 3e-2,
        format!("sup rel {ksup:.2e}"),
    );

    // Rosenblatt kernel symmetry
    let k1 = rosenblatt_kernel(&h, 1.0, 0.2, 0.5)?;
    let k2 = rosenblatt_kernel(&h, 1.0, 0.5, 0.2)?;
    suite.check(
        "Rosenblatt kernel symmetry",
        k1 == k2 && k1 > 0.0,
        format!("K(0.2,0.5) = {k1:.6}"),
    );

    println!("selftest: {} checks, {} failed", 12, suite.failures);
    Ok(if suite.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
