//! Shared numerical kernels: gamma ratios, adaptive Gauss-Kronrod quadrature
//! with complex-valued integrands, and compensated summation.

use std::iter::Sum;
use std::ops::{Add, AddAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Returns `Γ(m+1)/Γ(m+3/2)`.
///
/// Evaluated through log-gamma with the exponents subtracted before
/// exponentiation, so moderate `m` never overflows. Relative error stays below
/// `1e-14` for `1 ≤ m ≤ 50`.
pub fn gamma_ratio(m: f64) -> Result<f64> {
    if !m.is_finite() || m < 1.0 {
        return Err(Error::Domain(format!(
            "gamma_ratio requires m >= 1, got {m}"
        )));
    }
    Ok((libm::lgamma(m + 1.0) - libm::lgamma(m + 1.5)).exp())
}

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections applied to any subinterval.
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_depth: 40,
        }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self> {
        let cfg = Self {
            abs_tol,
            rel_tol,
            max_depth,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol >= 0.0) || self.max_depth < 1 {
            return Err(Error::Domain(format!(
                "invalid quadrature config: abs_tol={}, rel_tol={}, max_depth={}",
                self.abs_tol, self.rel_tol, self.max_depth
            )));
        }
        Ok(())
    }
}

/// A quadrature result together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

impl Add for Estimate {
    type Output = Estimate;

    fn add(self, rhs: Estimate) -> Estimate {
        Estimate {
            value: self.value + rhs.value,
            error: self.error + rhs.error,
        }
    }
}

// Kronrod 15-point abscissae (positive half, descending) and weights; the
// odd-indexed abscissae are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    depth: u32,
}

fn gauss_kronrod_15<F>(f: &F, a: f64, b: f64, depth: u32) -> Segment
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = fc.norm() * WGK[7];
    let mut fv1 = [Complex64::new(0.0, 0.0); 7];
    let mut fv2 = [Complex64::new(0.0, 0.0); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += (f1 + f2) * WGK[j];
        res_abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut res_asc = (fc - mean).norm() * WGK[7];
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    let scale = half.abs();
    let value = kronrod * half;
    res_abs *= scale;
    res_asc *= scale;

    let mut error = ((kronrod - gauss) * half).norm();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Segment {
        a,
        b,
        value,
        error,
        depth,
    }
}

const MAX_SEGMENTS: usize = 200_000;

/// Adaptive 7/15-point Gauss-Kronrod quadrature of `f` over `[a, b]`.
///
/// The subinterval with the largest error estimate is bisected until the total
/// estimated error drops below `max(abs_tol, rel_tol·|result|)`.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    cfg.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "integrate requires finite a < b, got [{a}, {b}]"
        )));
    }
    let mut segments = vec![gauss_kronrod_15(&f, a, b, 0)];
    loop {
        let value: Complex64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.norm());
        if error <= tol {
            return Ok(Estimate { value, error });
        }
        let (worst, seg) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, s)| (i, *s))
            .expect("at least one segment");
        if seg.depth >= cfg.max_depth || segments.len() >= MAX_SEGMENTS {
            return Err(Error::QuadratureNonConvergence {
                value: value.re,
                error,
                tolerance: tol,
            });
        }
        let mid = 0.5 * (seg.a + seg.b);
        segments[worst] = gauss_kronrod_15(&f, seg.a, mid, seg.depth + 1);
        segments.push(gauss_kronrod_15(&f, mid, seg.b, seg.depth + 1));
    }
}

/// Real-valued convenience wrapper around [`integrate`]; returns `(value, error)`.
pub fn integrate_real<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let est = integrate(|t| Complex64::new(f(t), 0.0), a, b, cfg)?;
    Ok((est.value.re, est.error))
}

/// Kahan-Babuška-Neumaier running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }
}

impl AddAssign for NeumaierSum {
    fn add_assign(&mut self, rhs: NeumaierSum) {
        *self += rhs.sum;
        *self += rhs.compensation;
    }
}

impl Sum<f64> for NeumaierSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc += x;
        }
        acc
    }
}

/// Compensated sum of `xs`; the error is `O(ε·Σ|x|)` independent of length.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    xs.into_iter().sum::<NeumaierSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn gamma_ratio_half_integer_closed_forms() {
        assert_relative_eq!(
            gamma_ratio(1.0).unwrap(),
            4.0 / (3.0 * PI.sqrt()),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            gamma_ratio(2.0).unwrap(),
            16.0 / (15.0 * PI.sqrt()),
            max_relative = 1e-14
        );
        assert_relative_eq!(gamma_ratio(1.0).unwrap(), 0.752_252_778_0, epsilon = 1e-10);
        assert_relative_eq!(gamma_ratio(2.0).unwrap(), 0.601_802_222_4, epsilon = 1e-10);
    }

    #[test]
    fn gamma_ratio_at_optimised_exponent() {
        // 30-digit reference: 0.565374065134819201526504988016
        let v = gamma_ratio(2.36856).unwrap();
        assert!(v > 0.5 && v < 0.65);
        assert_relative_eq!(v, 0.565_374_065_134_819_2, max_relative = 1e-14);
    }

    #[test]
    fn gamma_ratio_recurrence() {
        for m in [1.1, 1.5, 2.0, 3.0, 5.0] {
            let lhs = gamma_ratio(m + 1.0).unwrap();
            let rhs = gamma_ratio(m).unwrap() * (m + 1.0) / (m + 1.5);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
        }
    }

    #[test]
    fn gamma_ratio_rejects_small_m() {
        assert!(gamma_ratio(0.5).is_err());
        assert!(gamma_ratio(f64::NAN).is_err());
    }

    #[test]
    fn integrate_constant_and_parabola() {
        let cfg = QuadratureConfig::default();
        let c = integrate(|_| Complex64::new(1.0, 0.0), 0.0, 2.0, &cfg).unwrap();
        assert!((c.value.re - 2.0).abs() < 1e-14 && c.value.im == 0.0);
        let (p, err) = integrate_real(|t| t * (2.0 - t), 0.0, 2.0, &cfg).unwrap();
        assert!((p - 4.0 / 3.0).abs() < 1e-13);
        assert!(err <= 1e-12);
    }

    #[test]
    fn integrate_oscillatory_power() {
        let gamma = 14.134725;
        let cfg = QuadratureConfig::default();
        let s = Complex64::new(1.0, gamma);
        let est = integrate(
            |t| (Complex64::new(0.0, gamma) * t.ln()).exp(),
            1.0,
            2.0,
            &cfg,
        )
        .unwrap();
        let exact = ((s * 2f64.ln()).exp() - 1.0) / s;
        assert!(
            (est.value - exact).norm() < 1e-12,
            "{:?} vs {:?}",
            est.value,
            exact
        );
    }

    #[test]
    fn integrate_reports_non_convergence() {
        let cfg = QuadratureConfig::new(1e-15, 0.0, 2).unwrap();
        let r = integrate(|t| Complex64::new((200.0 * t).sin(), 0.0), 0.0, 10.0, &cfg);
        assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
    }

    #[test]
    fn integrate_rejects_bad_input() {
        let cfg = QuadratureConfig::default();
        assert!(integrate(|_| Complex64::new(1.0, 0.0), 1.0, 1.0, &cfg).is_err());
        assert!(QuadratureConfig::new(0.0, 0.0, 3).is_err());
        assert!(QuadratureConfig::new(1e-3, -1.0, 3).is_err());
        assert!(QuadratureConfig::new(1e-3, 0.0, 0).is_err());
    }

    #[test]
    fn compensated_sum_cases() {
        assert_eq!(compensated_sum(Vec::<f64>::new()), 0.0);
        assert_eq!(compensated_sum([1.0, 1e-16, -1.0]), 1e-16);
        let s = compensated_sum(std::iter::repeat_n(0.1, 1_000_000));
        assert!((s - 1e5).abs() < 1e-9);
    }

    fn poly_eval(c: &[f64], t: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, &ci| acc * t + ci)
    }

    fn poly_antiderivative(c: &[f64], t: f64) -> f64 {
        c.iter()
            .enumerate()
            .map(|(k, &ci)| ci * t.powi(k as i32 + 1) / (k as f64 + 1.0))
            .sum()
    }

    proptest! {
        #[test]
        fn polynomials_match_antiderivative(c in prop::collection::vec(-3.0f64..3.0, 1..=13),
                                            a in -2.0f64..0.0, w in 0.1f64..3.0) {
            let cfg = QuadratureConfig::default();
            let b = a + w;
            let (v, _) = integrate_real(|t| poly_eval(&c, t), a, b, &cfg).unwrap();
            let exact = poly_antiderivative(&c, b) - poly_antiderivative(&c, a);
            prop_assert!((v - exact).abs() <= 1e-12 * (1.0 + exact.abs()) * 10.0);
        }

        #[test]
        fn integration_is_linear(c1 in prop::collection::vec(-2.0f64..2.0, 1..8),
                                 c2 in prop::collection::vec(-2.0f64..2.0, 1..8),
                                 al in -3.0f64..3.0, be in -3.0f64..3.0) {
            let cfg = QuadratureConfig::default();
            let f = |t: f64| poly_eval(&c1, t);
            let g = |t: f64| poly_eval(&c2, t);
            let (fi, fe) = integrate_real(f, 0.0, 2.0, &cfg).unwrap();
            let (gi, ge) = integrate_real(g, 0.0, 2.0, &cfg).unwrap();
            let (hi, he) = integrate_real(|t| al * f(t) + be * g(t), 0.0, 2.0, &cfg).unwrap();
            let tol = he + al.abs() * fe + be.abs() * ge + 1e-13 * (1.0 + hi.abs());
            prop_assert!((hi - (al * fi + be * gi)).abs() <= tol);
        }
    }
}
