//! Validated Hurst index with the kernel normalizing constants.

use crate::special::{beta, gamma};
use crate::{math, Error, Result};

/// Hurst index H in (1/2, 1) together with the constants used by the
/// Volterra and Rosenblatt kernels:
///
/// * `c_h`   = (H(2H-1) / B(2-2H, H-1/2))^{1/2},
/// * `d_h`   = (H+1)^{-1} (H / (2(2H-1)))^{-1/2},
/// * `c_mid` = c_{(H+1)/2}  (the FBM of index H/2 + 1/2 shares the Wiener path),
/// * `e_h`   = c_mid² d_h.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurstParam {
    h: f64,
    c_h: f64,
    d_h: f64,
    e_h: f64,
    c_mid: f64,
}

fn c_of(h: f64) -> f64 {
    math::sqrt(h * (2.0 * h - 1.0) / beta(2.0 - 2.0 * h, h - 0.5))
}

impl HurstParam {
    pub fn new(h: f64) -> Result<Self> {
        if !(h > 0.5 && h < 1.0) {
            return Err(Error::InvalidHurst(h));
        }
        let c_h = c_of(h);
        let d_h = 1.0 / (h + 1.0) * math::sqrt(2.0 * (2.0 * h - 1.0) / h);
        let c_mid = c_of(0.5 * h + 0.5);
        let e_h = c_mid * c_mid * d_h;
        Ok(Self {
            h,
            c_h,
            d_h,
            e_h,
            c_mid,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Hurst index of the companion FBM, H/2 + 1/2.
    pub fn h_mid(&self) -> f64 {
        0.5 * self.h + 0.5
    }

    pub fn c_h(&self) -> f64 {
        self.c_h
    }

    pub fn d_h(&self) -> f64 {
        self.d_h
    }

    pub fn e_h(&self) -> f64 {
        self.e_h
    }

    /// c_{H/2 + 1/2}.
    pub fn c_mid(&self) -> f64 {
        self.c_mid
    }

    /// Γ(H - 1/2), the factor pairing c_H in the operator formulas.
    pub fn gamma_h_minus_half(&self) -> f64 {
        gamma(self.h - 0.5)
    }

    /// Γ(H/2), same role for the companion index.
    pub fn gamma_h_half(&self) -> f64 {
        gamma(0.5 * self.h)
    }

    /// Diagnostic hook: scales c_H (and e_H with it) by `factor`. Used by the
    /// self-test command to demonstrate that the isometry checks are
    /// sensitive to the normalization; never use for production runs.
    pub fn with_perturbed_c_h(mut self, factor: f64) -> Self {
        self.c_h *= factor;
        self
    }

    /// Same hook for the companion constant c_{H/2+1/2}.
    pub fn with_perturbed_c_mid(mut self, factor: f64) -> Self {
        self.c_mid *= factor;
        self.e_h = self.c_mid * self.c_mid * self.d_h;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_constants_h075() {
        let h = HurstParam::new(0.75).unwrap();
        // gamma-oracle values
        assert!((h.d_h() - 0.659_828_879_073_858).abs() < 1e-12);
        assert!((h.c_h() - 0.267_411_158_757_997_6).abs() < 1e-12);
        assert!((h.c_mid() - 0.330_965_797_990_404_1).abs() < 1e-12);
        assert!((h.e_h() - 0.072_276_572_924_505_14).abs() < 1e-12);
    }

    #[test]
    fn reference_constants_h07() {
        let h = HurstParam::new(0.7).unwrap();
        assert!((h.c_h() - 0.218_361_826_176_782_5).abs() < 1e-12);
        assert!((h.d_h() - 0.628_849_980_970_410_3).abs() < 1e-12);
        assert!((h.e_h() - 0.068_024_764_095_287_47).abs() < 1e-12);
    }

    #[test]
    fn definitional_consistency() {
        for &hv in &[0.55, 0.6, 0.7, 0.75, 0.9, 0.95] {
            let h = HurstParam::new(hv).unwrap();
            assert!((h.e_h() / (h.c_mid() * h.c_mid()) - h.d_h()).abs() < 1e-14);
            assert!(h.c_h() > 0.0 && h.d_h() > 0.0 && h.e_h() > 0.0);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        for &hv in &[0.5, 1.0, 0.3, 1.2, f64::NAN] {
            assert!(HurstParam::new(hv).is_err(), "{hv}");
        }
    }
}
