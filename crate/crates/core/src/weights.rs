//! Smooth sandwich weights and their Mellin transforms.
//!
//! The bump `ŵ(t) = t^m (2-t)^m` on `[0, 2]` is stitched onto a plateau to
//! give a majorant `w₊` and a minorant `w₋` of the indicator of `(1, 1 + h/x]`.
//! All quantities here are in units of `x` unless a method says otherwise.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::{gamma_ratio, integrate, Estimate, QuadratureConfig};
use crate::{Error, Result};

/// Exponent of the bump `ŵ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightShape {
    m: f64,
    gamma_ratio: f64,
}

impl WeightShape {
    /// `m > 1` keeps `ŵ` twice differentiable with vanishing first derivative
    /// at the endpoints.
    pub fn new(m: f64) -> Result<Self> {
        if !m.is_finite() || m <= 1.0 {
            return Err(Error::Domain(format!(
                "weight exponent must satisfy m > 1, got {m}"
            )));
        }
        Ok(Self {
            m,
            gamma_ratio: gamma_ratio(m)?,
        })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// `Γ(m+1)/Γ(m+3/2)`.
    pub fn gamma_ratio(&self) -> f64 {
        self.gamma_ratio
    }

    /// `∫₀² ŵ(u) du = Γ(m+1)√π/Γ(m+3/2)`.
    pub fn mass(&self) -> f64 {
        self.gamma_ratio * PI.sqrt()
    }

    /// `max{2 - mass, mass}`, the seam constant in `|x W(1) - h| ≤ c·δ`.
    pub fn seam_constant(&self) -> f64 {
        let g = self.mass();
        (2.0 - g).max(g)
    }

    /// `4 ŵ'(1 - 1/√(2m-1))`, i.e. `∫₀² |ŵ''|`.
    pub fn second_derivative_mass(&self) -> f64 {
        let m = self.m;
        let r = 1.0 / (2.0 * m - 1.0).sqrt();
        8.0 * m * r * ((1.0 - r) * (1.0 + r)).powf(m - 1.0)
    }

    fn check_unit(&self, t: f64) -> Result<()> {
        if !(0.0..=2.0).contains(&t) {
            return Err(Error::Domain(format!(
                "ŵ is defined on [0, 2], got t = {t}"
            )));
        }
        Ok(())
    }

    // Rounding at the seams can push t a few ulps outside [0, 2].
    #[inline]
    fn bump(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 2.0);
        (t * (2.0 - t)).powf(self.m)
    }

    pub fn w_hat(&self, t: f64) -> Result<f64> {
        self.check_unit(t)?;
        Ok(self.bump(t))
    }

    /// `ŵ'(t) = 2m(1-t)(t(2-t))^{m-1}`.
    pub fn w_hat_d1(&self, t: f64) -> Result<f64> {
        self.check_unit(t)?;
        let m = self.m;
        Ok(2.0 * m * (1.0 - t) * (t * (2.0 - t)).powf(m - 1.0))
    }

    /// `ŵ''(t) = 2m(t(2-t))^{m-2}((2m-1)(1-t)² - 1)`.
    ///
    /// Diverges at the endpoints when `m < 2`.
    pub fn w_hat_d2(&self, t: f64) -> Result<f64> {
        self.check_unit(t)?;
        let m = self.m;
        let u = t * (2.0 - t);
        let d = 1.0 - t;
        Ok(2.0 * m * u.powf(m - 2.0) * ((2.0 * m - 1.0) * d * d - 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

/// Window geometry `(x, h, δ, ±)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowParams {
    x: f64,
    h: f64,
    delta: f64,
    sign: Sign,
}

impl WindowParams {
    pub fn new(x: f64, h: f64, delta: f64, sign: Sign) -> Result<Self> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("x must be positive, got {x}")));
        }
        if !(delta > 0.0) || !(delta <= h / 2.0) {
            return Err(Error::Domain(format!(
                "window requires 0 < delta <= h/2, got delta = {delta}, h = {h}"
            )));
        }
        if !(delta / x < 1.0) {
            return Err(Error::Domain(format!(
                "window requires delta/x < 1, got {}",
                delta / x
            )));
        }
        Ok(Self { x, h, delta, sign })
    }

    pub fn with_sign(&self, sign: Sign) -> Self {
        Self { sign, ..*self }
    }

    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn sign(&self) -> Sign {
        self.sign
    }
    pub fn h0(&self) -> f64 {
        self.h / self.x
    }
    pub fn delta0(&self) -> f64 {
        self.delta / self.x
    }

    /// `α - 1`: `0` for `+`, `δ₀` for `-`.
    fn alpha_offset(&self) -> f64 {
        match self.sign {
            Sign::Plus => 0.0,
            Sign::Minus => self.delta0(),
        }
    }

    /// `β - 1`: `h₀` for `+`, `h₀ - δ₀` for `-`.
    fn beta_offset(&self) -> f64 {
        match self.sign {
            Sign::Plus => self.h0(),
            Sign::Minus => (self.h - self.delta) / self.x,
        }
    }

    pub fn alpha(&self) -> f64 {
        1.0 + self.alpha_offset()
    }

    pub fn beta(&self) -> f64 {
        1.0 + self.beta_offset()
    }

    /// Plateau `[xα, xβ]` in absolute units.
    pub fn plateau_abs(&self) -> (f64, f64) {
        match self.sign {
            Sign::Plus => (self.x, self.x + self.h),
            Sign::Minus => (self.x + self.delta, self.x + self.h - self.delta),
        }
    }

    /// Open support `(x(α-δ₀), x(β+δ₀))` in absolute units.
    pub fn support_abs(&self) -> (f64, f64) {
        let (a, b) = self.plateau_abs();
        (a - self.delta, b + self.delta)
    }

    /// `w±(n/x)` evaluated directly in absolute coordinates, which avoids
    /// the cancellation in `(n/x - α + δ₀)/δ₀` for large `x`.
    pub fn weight_at(&self, shape: &WeightShape, n: f64) -> f64 {
        let (a, b) = self.plateau_abs();
        if n <= a - self.delta || n >= b + self.delta {
            0.0
        } else if n < a {
            shape.bump((n - (a - self.delta)) / self.delta)
        } else if n <= b {
            1.0
        } else {
            shape.bump((n - (b - self.delta)) / self.delta)
        }
    }
}

/// `w±(t)`, piecewise: zero, rising bump, plateau, falling bump, zero.
pub fn w_pm(params: &WindowParams, shape: &WeightShape, t: f64) -> f64 {
    let d0 = params.delta0();
    let alpha = params.alpha();
    let beta = params.beta();
    if alpha - d0 < t && t < alpha {
        shape.bump((t - alpha + d0) / d0)
    } else if alpha <= t && t <= beta {
        1.0
    } else if beta < t && t < beta + d0 {
        shape.bump((t - beta + d0) / d0)
    } else {
        0.0
    }
}

/// `W±(s) = ∫ y^{s-1} w±(y) dy` by quadrature, split at the seams `α` and `β`.
pub fn mellin_w(
    params: &WindowParams,
    shape: &WeightShape,
    s: Complex64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if !(s.re > 0.0) {
        return Err(Error::Domain(format!(
            "mellin_w requires Re(s) > 0, got {s}"
        )));
    }
    let d0 = params.delta0();
    let a_off = params.alpha_offset();
    let b_off = params.beta_offset();
    let sm1 = s - 1.0;
    // t^{s-1} with t = 1 + offset
    let power = |offset: f64| (sm1 * offset.ln_1p()).exp();

    let rising = integrate(
        |u| power(a_off - d0 + d0 * u) * shape.bump(u),
        0.0,
        1.0,
        cfg,
    )?;
    let falling = integrate(
        |u| power(b_off - d0 + d0 * u) * shape.bump(u),
        1.0,
        2.0,
        cfg,
    )?;
    let mut total = Estimate {
        value: (rising.value + falling.value) * d0,
        error: (rising.error + falling.error) * d0,
    };
    if b_off > a_off {
        total = total + integrate(power, a_off, b_off, cfg)?;
    }
    Ok(total)
}

/// Exact `W±(1)`: `h₀ + mass·δ₀` for `+`, `h₀ - (2 - mass)·δ₀` for `-`.
pub fn closed_w1(params: &WindowParams, shape: &WeightShape) -> f64 {
    let g = shape.mass();
    match params.sign {
        Sign::Plus => params.h0() + g * params.delta0(),
        Sign::Minus => params.h0() - (2.0 - g) * params.delta0(),
    }
}

fn check_delta0(delta0: f64) -> Result<()> {
    if !(0.0..1.0).contains(&delta0) {
        return Err(Error::Domain(format!(
            "requires 0 <= delta0 < 1, got {delta0}"
        )));
    }
    Ok(())
}

/// `Φⱼ(m)` in `|W±(ϱ)| ≤ δ₀^{1-j} Φⱼ(m) / |ϱ|^j` on the critical line.
pub fn phi_bound(shape: &WeightShape, h0: f64, delta0: f64, j: u32) -> Result<f64> {
    check_delta0(delta0)?;
    match j {
        0 => {
            if delta0 == 0.0 {
                return Err(Error::Domain(
                    "Φ₀ needs delta0 > 0 (it contains h/δ)".into(),
                ));
            }
            Ok(h0 / delta0 + 2.0 * shape.gamma_ratio() * (PI / (1.0 - delta0)).sqrt())
        }
        1 => Ok(2.0 * (1.0 + h0 + delta0).sqrt()),
        2 => Ok((1.0 + h0 + delta0).powf(1.5) * shape.second_derivative_mass()),
        _ => Err(Error::Domain(format!(
            "Φⱼ is defined for j in {{0, 1, 2}}, got {j}"
        ))),
    }
}

/// `Φ₀` with `Γ(m+1)/Γ(m+3/2)` replaced by its upper bound `1/√m`, the form
/// that enters the assembled constant `Ψ₂`.
pub fn phi0_sqrt_m_variant(shape: &WeightShape, h0: f64, delta0: f64) -> Result<f64> {
    check_delta0(delta0)?;
    if delta0 == 0.0 {
        return Err(Error::Domain(
            "Φ₀ needs delta0 > 0 (it contains h/δ)".into(),
        ));
    }
    Ok(h0 / delta0 + 2.0 * (PI / (shape.m() * (1.0 - delta0))).sqrt())
}

/// Smallest of the three bounds `δ₀^{1-j}Φⱼ/|ϱ|^j` at `ϱ = s`.
pub fn lemma_bound(shape: &WeightShape, h0: f64, delta0: f64, s: Complex64) -> Result<f64> {
    let r = s.norm();
    let mut best = f64::INFINITY;
    for j in 0..=2 {
        let b = delta0.powi(1 - j as i32) * phi_bound(shape, h0, delta0, j)? / r.powi(j as i32);
        best = best.min(b);
    }
    Ok(best)
}

/// `(1-δ₀)^{-2ℓ}/ℓ`, the bound on `|W₊(-2ℓ)|`.
pub fn trivial_zero_bound(delta0: f64, ell: u32) -> Result<f64> {
    check_delta0(delta0)?;
    if ell == 0 {
        return Err(Error::Domain("ℓ must be a positive integer".into()));
    }
    Ok((1.0 - delta0).powi(-2 * ell as i32) / ell as f64)
}

/// `1/(x-δ)²`, the bound on the trivial-zero contribution `Σₖ x^{-2k}|W±(-2k)|`.
pub fn trivial_tail(x: f64, delta: f64) -> Result<f64> {
    if !(x - delta > 1.0) {
        return Err(Error::Domain(format!(
            "trivial_tail requires x - delta > 1, got {}",
            x - delta
        )));
    }
    Ok((x - delta).powi(-2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_real;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn shape(m: f64) -> WeightShape {
        WeightShape::new(m).unwrap()
    }

    #[test]
    fn shape_requires_m_above_one() {
        assert!(WeightShape::new(1.0).is_err());
        assert!(WeightShape::new(0.3).is_err());
        assert!(WeightShape::new(1.0 + 1e-9).is_ok());
    }

    #[test]
    fn bump_values_and_domain() {
        for m in [1.5, 2.0, 2.36856, 7.0] {
            let s = shape(m);
            assert_eq!(s.w_hat(1.0).unwrap(), 1.0);
            assert_eq!(s.w_hat(0.0).unwrap(), 0.0);
            assert_eq!(s.w_hat(2.0).unwrap(), 0.0);
        }
        assert!(shape(2.0).w_hat(-0.1).is_err());
        assert!(shape(2.0).w_hat_d1(2.5).is_err());
    }

    #[test]
    fn first_derivative_at_inflection_point() {
        let m = 2.0;
        let r = 1.0 / (2.0 * m - 1.0_f64).sqrt();
        let expected = (8.0 * m / (2.0 * m - 1.0_f64).sqrt())
            * (1.0 - r).powf(m - 1.0)
            * (1.0 + r).powf(m - 1.0)
            / 4.0;
        assert_relative_eq!(
            shape(m).w_hat_d1(1.0 - r).unwrap(),
            expected,
            max_relative = 1e-14
        );
        // and ŵ'' vanishes there
        assert!(shape(m).w_hat_d2(1.0 - r).unwrap().abs() < 1e-12);
    }

    #[test]
    fn derivatives_match_central_differences() {
        for m in [1.5, 2.36856, 4.0] {
            let s = shape(m);
            for &t in &[0.2, 0.5, 0.9, 1.3, 1.77] {
                let e = 1e-5;
                let fd1 = (s.w_hat(t + e).unwrap() - s.w_hat(t - e).unwrap()) / (2.0 * e);
                let fd2 = (s.w_hat_d1(t + e).unwrap() - s.w_hat_d1(t - e).unwrap()) / (2.0 * e);
                assert!((fd1 - s.w_hat_d1(t).unwrap()).abs() < 1e-8);
                assert!((fd2 - s.w_hat_d2(t).unwrap()).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn bump_mass_matches_gamma_ratio() {
        let cfg = QuadratureConfig::default();
        for m in [1.5, 2.0, 2.36856, 4.0] {
            let s = shape(m);
            let (v, _) = integrate_real(|u| s.w_hat(u).unwrap(), 0.0, 2.0, &cfg).unwrap();
            assert!((v - s.mass()).abs() < 1e-10, "m={m}: {v} vs {}", s.mass());
        }
    }

    #[test]
    fn second_derivative_mass_matches_quadrature() {
        let cfg = QuadratureConfig::default();
        for m in [2.36856, 3.0, 5.5] {
            let s = shape(m);
            let c = 1.0 - 1.0 / (2.0 * m - 1.0_f64).sqrt();
            let abs_d2 = |u: f64| s.w_hat_d2(u).unwrap().abs();
            let (a, _) = integrate_real(abs_d2, 0.0, c, &cfg).unwrap();
            let (b, _) = integrate_real(abs_d2, c, 1.0, &cfg).unwrap();
            assert_relative_eq!(
                2.0 * (a + b),
                s.second_derivative_mass(),
                max_relative = 1e-9
            );
        }
    }

    fn window(x: f64, h: f64, delta: f64, sign: Sign) -> WindowParams {
        WindowParams::new(x, h, delta, sign).unwrap()
    }

    #[test]
    fn window_invariants() {
        assert!(WindowParams::new(1e6, 100.0, 60.0, Sign::Plus).is_err());
        assert!(WindowParams::new(1e6, 100.0, 0.0, Sign::Plus).is_err());
        assert!(WindowParams::new(10.0, 40.0, 15.0, Sign::Plus).is_err());
        let p = window(1e6, 1e4, 2e3, Sign::Plus);
        assert_eq!(p.alpha(), 1.0);
        assert_relative_eq!(p.beta(), 1.01);
        let q = p.with_sign(Sign::Minus);
        assert_relative_eq!(q.alpha(), 1.002);
        assert_relative_eq!(q.beta(), 1.008);
    }

    #[test]
    fn weight_plateau_boundaries_and_seams() {
        let s = shape(2.36856);
        for sign in [Sign::Plus, Sign::Minus] {
            let p = window(1e6, 1e4, 2e3, sign);
            let d0 = p.delta0();
            assert_eq!(w_pm(&p, &s, 0.5 * (p.alpha() + p.beta())), 1.0);
            assert_eq!(w_pm(&p, &s, p.alpha() - d0), 0.0);
            assert_eq!(w_pm(&p, &s, p.beta() + d0), 0.0);
            let e = 1e-6 * d0;
            assert!((w_pm(&p, &s, p.alpha() - e) - w_pm(&p, &s, p.alpha() + e)).abs() < 1e-4);
            assert!((w_pm(&p, &s, p.beta() - e) - w_pm(&p, &s, p.beta() + e)).abs() < 1e-4);
        }
    }

    #[test]
    fn degenerate_minus_plateau() {
        let s = shape(2.0);
        let p = window(1e6, 1e3, 500.0, Sign::Minus);
        assert_eq!(p.alpha(), p.beta());
        assert_eq!(w_pm(&p, &s, p.alpha()), 1.0);
        let cfg = QuadratureConfig::default();
        let w1 = mellin_w(&p, &s, Complex64::new(1.0, 0.0), &cfg).unwrap();
        assert!((w1.value.re - closed_w1(&p, &s)).abs() < 1e-12);
    }

    #[test]
    fn weights_stay_in_unit_interval_and_support() {
        let s = shape(2.36856);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for sign in [Sign::Plus, Sign::Minus] {
            let p = window(1e5, 3641.0, 842.0, sign);
            let (lo, hi) = (p.alpha() - p.delta0(), p.beta() + p.delta0());
            for _ in 0..10_000 {
                let t = rng.gen_range(lo..hi);
                let w = w_pm(&p, &s, t);
                assert!((0.0..=1.0).contains(&w));
                if sign == Sign::Minus && w == 1.0 {
                    assert!(1.0 + p.delta0() <= t && t <= 1.0 + p.h0() - p.delta0());
                }
                if sign == Sign::Plus && w > 0.0 {
                    assert!(1.0 - p.delta0() < t && t < 1.0 + p.h0() + p.delta0());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn absolute_and_relative_evaluation_agree(frac in 0.0f64..1.0, x in 1e4f64..1e9,
                                                  k in 0.05f64..0.5, minus in any::<bool>()) {
            let h = x.sqrt() * x.ln();
            let p = window(x, h, k * h, if minus { Sign::Minus } else { Sign::Plus });
            let s = shape(2.36856);
            let (lo, hi) = p.support_abs();
            let n = lo + frac * (hi - lo);
            prop_assert!((p.weight_at(&s, n) - w_pm(&p, &s, n / x)).abs() < 1e-6);
        }
    }

    #[test]
    fn mellin_at_one_matches_closed_form() {
        let cfg = QuadratureConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let d0 = 10f64.powf(rng.gen_range(-6.0..-2.0));
            let h0 = rng.gen_range(2.0 * d0..0.1);
            let m = rng.gen_range(1.2..5.0);
            let s = shape(m);
            for sign in [Sign::Plus, Sign::Minus] {
                let p = window(1.0, h0, d0, sign);
                let w = mellin_w(&p, &s, Complex64::new(1.0, 0.0), &cfg).unwrap();
                assert!((w.value.re - closed_w1(&p, &s)).abs() < 1e-10);
                assert!(w.value.im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn mellin_at_two_tends_to_plateau_integral() {
        let cfg = QuadratureConfig::default();
        let s = shape(2.36856);
        let h0 = 0.05;
        let p = window(1.0, h0, 1e-6, Sign::Plus);
        let w = mellin_w(&p, &s, Complex64::new(2.0, 0.0), &cfg).unwrap();
        let plateau = ((1.0 + h0).powi(2) - 1.0) / 2.0;
        assert!((w.value.re - plateau).abs() < 5e-6);
    }

    #[test]
    fn mellin_on_critical_line_respects_phi0() {
        let cfg = QuadratureConfig::default();
        let s = shape(2.36856);
        let x: f64 = 1e5;
        let h = (x.sqrt() * x.ln()).ceil();
        let p = window(x, h, h / 4.32346, Sign::Plus);
        let rho = Complex64::new(0.5, 14.134725);
        let w = mellin_w(&p, &s, rho, &cfg).unwrap();
        let b0 = phi_bound(&s, p.h0(), p.delta0(), 0).unwrap() * p.delta0();
        assert!(w.value.norm() <= b0 + w.error);
        assert!(mellin_w(&p, &s, Complex64::new(-0.5, 1.0), &cfg).is_err());
    }

    #[test]
    fn closed_w1_forms() {
        let s = shape(2.36856);
        let p = window(1.0, 0.01, 0.001, Sign::Plus);
        assert_relative_eq!(closed_w1(&p, &s), 0.01 + s.mass() * 0.001);
        // m → 1 limit of the mass is 4/3
        let near_one = shape(1.0 + 1e-12);
        assert!((near_one.mass() - 4.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn closed_w1_seam_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = 10f64.powf(rng.gen_range(3.0..12.0));
            let h = rng.gen_range(1.0..0.5 * x);
            let delta = rng.gen_range(1e-3 * h..0.5 * h);
            let s = shape(rng.gen_range(1.1..6.0));
            let c = s.seam_constant();
            for sign in [Sign::Plus, Sign::Minus] {
                let p = window(x, h, delta, sign);
                let lhs = (x * closed_w1(&p, &s) - h).abs();
                assert!(lhs <= c * delta * (1.0 + 1e-12), "{lhs} > {}", c * delta);
            }
        }
    }

    #[test]
    fn phi_bound_cases() {
        let s2 = shape(2.0);
        assert_eq!(phi_bound(&s2, 0.0, 0.0, 1).unwrap(), 2.0);
        assert_relative_eq!(
            phi_bound(&s2, 0.0, 0.0, 2).unwrap(),
            32.0 / (3.0 * 3f64.sqrt()),
            max_relative = 1e-14
        );
        let s = shape(2.36856);
        let d0 = 1e-9;
        let v = phi_bound(&s, 4.32346 * d0, d0, 0).unwrap();
        assert!((v - (4.32346 + 2.0 * s.gamma_ratio() * PI.sqrt())).abs() < 1e-6);
        assert!(phi_bound(&s, 0.0, 0.0, 0).is_err());
        assert!(phi_bound(&s, 0.0, 1.0, 1).is_err());
        assert!(phi_bound(&s, 0.0, 0.1, 3).is_err());
        // the 1/√m variant dominates since Γ(m+1)/Γ(m+3/2) <= 1/√m
        let a = phi_bound(&s, 0.01, 0.001, 0).unwrap();
        let b = phi0_sqrt_m_variant(&s, 0.01, 0.001).unwrap();
        assert!(b >= a);
    }

    #[test]
    fn trivial_zero_bounds() {
        assert_eq!(trivial_zero_bound(0.0, 1).unwrap(), 1.0);
        assert_eq!(trivial_zero_bound(0.5, 2).unwrap(), 8.0);
        assert!((trivial_zero_bound(1e-3, 5).unwrap() - 0.202_011_044).abs() < 1e-8);
        assert!(trivial_zero_bound(0.1, 0).is_err());
    }

    #[test]
    fn trivial_tail_values() {
        assert_eq!(trivial_tail(2.0, 0.0).unwrap(), 0.25);
        assert_relative_eq!(trivial_tail(1e6, 1e3).unwrap(), 999_000f64.powi(-2));
        assert!((trivial_tail(1e6, 1e3).unwrap() - 1.002e-12).abs() < 1e-15);
        assert!(trivial_tail(2.0, 1.0).is_err());
        let mut prev = 0.0;
        for k in 0..=100 {
            let v = trivial_tail(1e6, k as f64 * 1e3).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }
}
