//! Property tests over randomized inputs: operator identities of the
//! fractional calculus, covariance structure and estimator contracts.

use proptest::prelude::*;
use rosenblatt::frac::{frac_derivative, frac_integral, FracOrder};
use rosenblatt::kernels::fbm_covariance;
use rosenblatt::verify::{effective_sample_size, weighted_moment};
use rosenblatt::{SampledFunction, TimeGrid};

fn quadratic(grid: &TimeGrid, c0: f64, c1: f64, c2: f64) -> SampledFunction {
    SampledFunction::from_fn(grid.clone(), |t| c0 + c1 * t + c2 * t * t).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// I^α then D^α is the identity on smooth inputs, uniformly on the grid.
    #[test]
    fn inversion_identity_randomized(
        alpha in 0.1f64..0.9,
        c0 in -2.0f64..2.0,
        c1 in -2.0f64..2.0,
        c2 in -2.0f64..2.0,
    ) {
        let n = 256;
        let grid = TimeGrid::new(1.0, n).unwrap();
        let f = quadratic(&grid, c0, c1, c2);
        let back = frac_derivative(
            &frac_integral(&f, FracOrder::left(alpha)).unwrap(),
            FracOrder::left(alpha),
        ).unwrap();
        let scale = 1.0 + c0.abs() + c1.abs() + c2.abs();
        for i in 1..=n {
            let d = (back.value_at_node(i).unwrap() - f.value_at_node(i).unwrap()).abs();
            prop_assert!(d < 0.02 * scale, "i={i}, diff {d}");
        }
    }

    /// Semigroup property I^a I^b = I^{a+b} for random orders and inputs.
    #[test]
    fn semigroup_randomized(
        a in 0.15f64..0.8,
        b in 0.15f64..0.8,
        c1 in -2.0f64..2.0,
        c2 in -2.0f64..2.0,
    ) {
        let n = 256;
        let grid = TimeGrid::new(1.0, n).unwrap();
        let f = quadratic(&grid, 1.0, c1, c2);
        let two = frac_integral(
            &frac_integral(&f, FracOrder::left(a)).unwrap(),
            FracOrder::left(b),
        ).unwrap();
        let one = frac_integral(&f, FracOrder::left(a + b)).unwrap();
        let scale = 1.0 + c1.abs() + c2.abs();
        prop_assert!(two.max_abs_diff(&one) < 0.01 * scale);
    }

    /// FBM covariance: symmetric, diagonal t^{2H}, and 2x2 minors are PSD.
    #[test]
    fn covariance_structure(
        h in 0.51f64..0.99,
        s in 0.01f64..2.0,
        t in 0.01f64..2.0,
    ) {
        let rss = fbm_covariance(s, s, h);
        let rtt = fbm_covariance(t, t, h);
        let rst = fbm_covariance(s, t, h);
        prop_assert_eq!(rst, fbm_covariance(t, s, h));
        prop_assert!((rss - s.powf(2.0 * h)).abs() < 1e-12 * rss.max(1.0));
        prop_assert!(rss * rtt - rst * rst >= -1e-12);
    }

    /// ESS is in (0, N] and equals N exactly for constant weights; the
    /// self-normalized moment of a constant function is exact with zero SE.
    #[test]
    fn estimator_contracts(ws in prop::collection::vec(0.01f64..10.0, 1..60)) {
        let n = ws.len() as f64;
        let ess = effective_sample_size(&ws).unwrap();
        prop_assert!(ess > 0.0 && ess <= n + 1e-9);
        let flat = vec![1.0; ws.len()];
        prop_assert!((effective_sample_size(&flat).unwrap() - n).abs() < 1e-9);
        let xs: Vec<f64> = (0..ws.len()).map(|i| i as f64).collect();
        let (est, se) = weighted_moment(&xs, &ws, |_| 4.25).unwrap();
        prop_assert!((est - 4.25).abs() < 1e-12);
        prop_assert!(se.abs() < 1e-12);
    }
}
