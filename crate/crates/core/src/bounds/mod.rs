//! The assembled error constants `Ψ₁`, `Ψ₂`, `lim Ψ₂`, `Ψ₃` and the
//! theorem-level bounds for ψ, θ and π in short intervals.
//!
//! Every displayed line of a `Ψ` expression is its own function so that each
//! can be checked and reported separately.

pub mod optimize;

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::weights::WeightShape;
use crate::zeros::{e_pair, BPT};
use crate::{Error, Result};

/// Smallest `x` at which the theorem constants are claimed.
pub const THEOREM_X0: f64 = 4e18;

/// The free parameters `(x₀, ε, m, κ₁, κ₂, κ₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub x0: f64,
    pub eps: f64,
    pub m: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
}

impl BoundParams {
    /// The tuple behind the constant 1.831.
    pub const NARROW: BoundParams = BoundParams {
        x0: THEOREM_X0,
        eps: 0.25,
        m: 2.36856,
        kappa1: 1.29329,
        kappa2: 6.48028,
        kappa3: 4.32346,
    };

    /// The tuple behind the limit 1.82567… and the broad constant 3.036.
    pub const BROAD: BoundParams = BoundParams {
        x0: THEOREM_X0,
        eps: 0.25,
        m: 2.36856,
        kappa1: 1.40046,
        kappa2: 6.54584,
        kappa3: 4.54913,
    };

    pub fn shape(&self) -> Result<WeightShape> {
        WeightShape::new(self.m)
    }

    pub fn psi2(&self) -> Result<Psi2Terms> {
        psi2(
            self.x0,
            self.m,
            self.eps,
            self.kappa1,
            self.kappa2,
            self.kappa3,
        )
    }

    pub fn psi2_limit(&self) -> Result<LimitTerms> {
        psi2_limit(self.m, self.kappa1, self.kappa2, self.kappa3)
    }

    pub fn psi3(&self) -> Result<Psi3Terms> {
        psi3(self.x0, self.m, self.kappa1, self.kappa2, self.kappa3)
    }
}

fn constraint(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Constraint(what.to_string()))
    }
}

fn check_kappas(m: f64, kappa1: f64, kappa2: f64) -> Result<()> {
    constraint(m > 1.0, "m > 1")?;
    constraint(kappa1 >= 1.0, "1 <= kappa1")?;
    constraint(kappa1 <= kappa2, "kappa1 <= kappa2")?;
    constraint(kappa1 <= 3.0, "kappa1 <= 3")
}

fn check_kappa3(x: f64, kappa3: f64) -> Result<()> {
    constraint(kappa3 >= 2.0, "2 <= kappa3")?;
    constraint(x > 1.0 && kappa3 < x.ln(), "kappa3 < log x")
}

fn check_eps(eps: f64) -> Result<()> {
    constraint(eps > 0.0 && eps < 0.4, "0 < eps < 0.4")
}

/// `max{2 − Γ(m+1)√π/Γ(m+3/2), Γ(m+1)√π/Γ(m+3/2)}`.
pub fn seam_max(shape: &WeightShape) -> f64 {
    let g = shape.mass();
    (2.0 - g).max(g)
}

/// `8m/√(2m−1) · (1 − 1/√(2m−1))^{m−1} (1 + 1/√(2m−1))^{m−1}`.
pub fn phi2_core(shape: &WeightShape) -> f64 {
    shape.second_derivative_mass()
}

/// `√(1+a) − 1` without cancellation.
fn sqrt1p_m1(a: f64) -> f64 {
    a / ((1.0 + a).sqrt() + 1.0)
}

/// The four summands of `Ψ₁(x, δ, m, ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Psi1Terms {
    pub seam: f64,
    pub kappa1_block: f64,
    pub e_pair_block: f64,
    pub phi2_block: f64,
}

impl Psi1Terms {
    pub fn total(&self) -> f64 {
        self.seam + self.kappa1_block + self.e_pair_block + self.phi2_block
    }
}

#[allow(clippy::too_many_arguments)]
pub fn psi1(
    x: f64,
    delta: f64,
    h: f64,
    m: f64,
    eps: f64,
    kappa1: f64,
    kappa2: f64,
) -> Result<Psi1Terms> {
    check_kappas(m, kappa1, kappa2)?;
    check_eps(eps)?;
    constraint(delta > 0.0 && delta <= h / 2.0, "0 < delta <= h/2")?;
    constraint(kappa1 * x / h >= 1.0, "kappa1 x / h >= 1")?;
    constraint(x > 1.0 && h >= x.sqrt() * x.ln(), "h >= sqrt(x) log x")?;
    constraint(h <= x.powf(1.0 - eps), "h <= x^(1-eps)")?;
    let shape = WeightShape::new(m)?;
    let log_x = x.ln();
    let g = shape.gamma_ratio();
    let d0 = delta / x;
    let seam = (delta * seam_max(&shape) + (x - delta).powi(-2)) / (x.sqrt() * log_x);
    let kappa1_block = kappa1 / PI
        * (0.5 + kappa1.ln() / log_x)
        * (1.0 + 2.0 * delta / h * g * (PI / (1.0 - d0)).sqrt());
    let e = e_pair(&BPT, kappa1 * x / h, kappa2 * x / delta)?;
    let e_pair_block = (1.0 + 1.5 * h / x).sqrt() * ((kappa2 / kappa1).ln() / PI + 4.0 * e / log_x);
    let phi2_block = (1.0 + 1.5 * h / x).powf(1.5) * phi2_core(&shape) / (kappa2 * PI);
    Ok(Psi1Terms {
        seam,
        kappa1_block,
        e_pair_block,
        phi2_block,
    })
}

/// The seven summands of `Ψ₂(x, m, ε)`: three on the first displayed line,
/// then one per line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Psi2Terms {
    pub seam: f64,
    pub trivial: f64,
    pub log_kappa3: f64,
    pub kappa1_block: f64,
    pub e_pair_block: f64,
    pub phi2_block: f64,
    pub widening: f64,
}

impl Psi2Terms {
    pub fn total(&self) -> f64 {
        self.seam
            + self.trivial
            + self.log_kappa3
            + self.kappa1_block
            + self.e_pair_block
            + self.phi2_block
            + self.widening
    }
}

/// `x^{−5/2}/(1 − log x/(κ₃√x))²`.
fn trivial_line(x: f64, kappa3: f64) -> f64 {
    x.powf(-2.5) / (1.0 - x.ln() / (kappa3 * x.sqrt())).powi(2)
}

/// `(κ₁/π)(1/2 + log κ₁/log x)(1 + (2/κ₃)·factor)`.
fn kappa1_line(x: f64, kappa1: f64, kappa3: f64, factor: f64) -> f64 {
    kappa1 / PI * (0.5 + kappa1.ln() / x.ln()) * (1.0 + 2.0 / kappa3 * factor)
}

/// `scale·(log(κ₂/κ₁)/π + 4E(κ₁√x/log x, κ₂κ₃√x/log x)/log x)`.
fn e_pair_line(x: f64, kappa1: f64, kappa2: f64, kappa3: f64, scale: f64) -> Result<f64> {
    let t = x.sqrt() / x.ln();
    let e = e_pair(&BPT, kappa1 * t, kappa2 * kappa3 * t)?;
    Ok(scale * ((kappa2 / kappa1).ln() / PI + 4.0 * e / x.ln()))
}

pub fn psi2(x: f64, m: f64, eps: f64, kappa1: f64, kappa2: f64, kappa3: f64) -> Result<Psi2Terms> {
    check_kappas(m, kappa1, kappa2)?;
    check_kappa3(x, kappa3)?;
    check_eps(eps)?;
    let shape = WeightShape::new(m)?;
    let u = x.ln() / (kappa3 * x.sqrt());
    constraint(u < 1.0, "log x < kappa3 sqrt(x)")?;
    let a = 1.5 * x.powf(-eps);
    Ok(Psi2Terms {
        seam: seam_max(&shape) / kappa3,
        trivial: trivial_line(x, kappa3),
        log_kappa3: kappa3.ln() / PI,
        kappa1_block: kappa1_line(
            x,
            kappa1,
            kappa3,
            shape.gamma_ratio() * (PI / (1.0 - u)).sqrt(),
        ),
        e_pair_block: e_pair_line(x, kappa1, kappa2, kappa3, (1.0 + a).sqrt())?,
        phi2_block: (1.0 + a).powf(1.5) * phi2_core(&shape) / (kappa2 * PI),
        widening: sqrt1p_m1(a) / PI * (kappa3 * x.powf(0.5 - eps) / x.ln()).ln(),
    })
}

/// The five summands of `lim_{x→∞} Ψ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitTerms {
    pub seam: f64,
    pub kappa1_block: f64,
    pub log_kappa3: f64,
    pub log_kappa_ratio: f64,
    pub phi2_block: f64,
}

impl LimitTerms {
    pub fn total(&self) -> f64 {
        self.seam + self.kappa1_block + self.log_kappa3 + self.log_kappa_ratio + self.phi2_block
    }
}

pub fn psi2_limit(m: f64, kappa1: f64, kappa2: f64, kappa3: f64) -> Result<LimitTerms> {
    check_kappas(m, kappa1, kappa2)?;
    constraint(kappa3 >= 2.0, "2 <= kappa3")?;
    let shape = WeightShape::new(m)?;
    Ok(LimitTerms {
        seam: seam_max(&shape) / kappa3,
        kappa1_block: kappa1 / (2.0 * PI) * (1.0 + 2.0 / kappa3 * shape.mass()),
        log_kappa3: kappa3.ln() / PI,
        log_kappa_ratio: (kappa2 / kappa1).ln() / PI,
        phi2_block: phi2_core(&shape) / (kappa2 * PI),
    })
}

/// The seven summands of `Ψ₃(x, m)`, laid out as in [`Psi2Terms`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Psi3Terms {
    pub seam: f64,
    pub trivial: f64,
    pub log_kappa3: f64,
    pub kappa1_block: f64,
    pub e_pair_block: f64,
    pub phi2_block: f64,
    pub widening: f64,
}

impl Psi3Terms {
    pub fn total(&self) -> f64 {
        self.seam
            + self.trivial
            + self.log_kappa3
            + self.kappa1_block
            + self.e_pair_block
            + self.phi2_block
            + self.widening
    }
}

pub fn psi3(x: f64, m: f64, kappa1: f64, kappa2: f64, kappa3: f64) -> Result<Psi3Terms> {
    check_kappas(m, kappa1, kappa2)?;
    check_kappa3(x, kappa3)?;
    constraint(x >= THEOREM_X0, "x >= 4e18")?;
    let shape = WeightShape::new(m)?;
    let u = x.ln() / (kappa3 * x.sqrt());
    let q = x.powf(-0.25);
    Ok(Psi3Terms {
        seam: seam_max(&shape) / kappa3,
        trivial: trivial_line(x, kappa3),
        log_kappa3: SQRT_2 / PI * kappa3.ln(),
        kappa1_block: kappa1_line(x, kappa1, kappa3, shape.gamma_ratio() * (2.0 * PI).sqrt()),
        e_pair_block: e_pair_line(x, kappa1, kappa2, kappa3, 2.5f64.sqrt())?,
        phi2_block: 2.5f64.powf(1.5) * phi2_core(&shape) / (kappa2 * PI),
        widening: ((1.0 + q + u).sqrt() - (1.0 + q).sqrt()) / PI
            * (kappa3 * x.sqrt() / x.ln()).ln(),
    })
}

/// Which short-interval inequality to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Psi,
    Theta,
    Pi,
    PsiBroad,
    ThetaBroad,
    PiBroad,
    Chd,
}

pub const PSI_CONSTANT: f64 = 1.831;
pub const PI_CONSTANT: f64 = 3.855;
pub const BROAD_CONSTANT: f64 = 3.036;
pub const BROAD_PI_CONSTANT: f64 = 6.072;
pub const CHD_CONSTANT: f64 = 2.167;

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::Psi,
        Variant::Theta,
        Variant::Pi,
        Variant::PsiBroad,
        Variant::ThetaBroad,
        Variant::PiBroad,
        Variant::Chd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Psi => "psi",
            Variant::Theta => "theta",
            Variant::Pi => "pi",
            Variant::PsiBroad => "psi-broad",
            Variant::ThetaBroad => "theta-broad",
            Variant::PiBroad => "pi-broad",
            Variant::Chd => "chd",
        }
    }

    /// Additive constant `c` in `(a·log(h/(√x log x)) + c)·scale`.
    pub fn constant(self) -> f64 {
        match self {
            Variant::Psi | Variant::Theta => PSI_CONSTANT,
            Variant::Pi => PI_CONSTANT,
            Variant::PsiBroad | Variant::ThetaBroad => BROAD_CONSTANT,
            Variant::PiBroad => BROAD_PI_CONSTANT,
            Variant::Chd => CHD_CONSTANT,
        }
    }

    /// Coefficient `a` of `log(h/(√x log x))`.
    pub fn log_coefficient(self) -> f64 {
        match self {
            Variant::PsiBroad | Variant::ThetaBroad | Variant::PiBroad => SQRT_2 / PI,
            _ => 1.0 / PI,
        }
    }

    pub fn counts_primes(self) -> bool {
        matches!(self, Variant::Pi | Variant::PiBroad)
    }

    /// The window conditions on `(x, h)`, each with a readable name.
    pub fn window(self, x: f64, h: f64) -> Vec<(&'static str, bool)> {
        let l = x.ln();
        let lower_name = if self.counts_primes() {
            "h >= sqrt(x) (log x)^2"
        } else {
            "h >= sqrt(x) log x"
        };
        let lower = if self.counts_primes() {
            h >= x.sqrt() * l * l
        } else {
            h >= x.sqrt() * l
        };
        let mut out = match self {
            Variant::Chd => vec![("log x >= 40", l >= 40.0)],
            _ => vec![("x >= 4e18", x >= THEOREM_X0)],
        };
        out.push((lower_name, lower));
        match self {
            Variant::Psi | Variant::Theta | Variant::Pi | Variant::Chd => {
                out.push(("h <= x^(3/4)", h <= x.powf(0.75)))
            }
            _ => out.push(("h < x", h < x)),
        }
        out
    }

    pub fn check_window(self, x: f64, h: f64) -> Result<()> {
        if !(x > 1.0 && x.is_finite() && h > 0.0 && h.is_finite()) {
            return Err(Error::Window(format!(
                "need finite x > 1 and h > 0, got x = {x}, h = {h}"
            )));
        }
        match self.window(x, h).into_iter().find(|(_, ok)| !ok) {
            Some((name, _)) => Err(Error::Window(format!(
                "{name} fails for {} at x = {x:e}, h = {h:e}",
                self.name()
            ))),
            None => Ok(()),
        }
    }

    /// The right-hand side without any window check.
    pub fn evaluate_unchecked(self, x: f64, h: f64) -> f64 {
        let l = x.ln();
        let coefficient = self.log_coefficient() * (h / (x.sqrt() * l)).ln() + self.constant();
        if self.counts_primes() {
            coefficient * h / (l * l)
        } else {
            coefficient * x.sqrt() * l
        }
    }

    pub fn evaluate(self, x: f64, h: f64) -> Result<f64> {
        self.check_window(x, h)?;
        Ok(self.evaluate_unchecked(x, h))
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown variant {s:?}")))
    }
}

/// `|ψ(x+h) − ψ(x) − h| < (π⁻¹ log(h/(√x log x)) + 1.831) √x log x`.
pub fn psi_interval_bound(x: f64, h: f64) -> Result<f64> {
    Variant::Psi.evaluate(x, h)
}

pub fn theta_interval_bound(x: f64, h: f64) -> Result<f64> {
    Variant::Theta.evaluate(x, h)
}

/// `|π(x+h) − π(x) − h/log x| < (π⁻¹ log(h/(√x log x)) + 3.855) h/(log x)²`.
pub fn pi_interval_bound(x: f64, h: f64) -> Result<f64> {
    Variant::Pi.evaluate(x, h)
}

pub fn broad_psi_bound(x: f64, h: f64) -> Result<f64> {
    Variant::PsiBroad.evaluate(x, h)
}

pub fn broad_theta_bound(x: f64, h: f64) -> Result<f64> {
    Variant::ThetaBroad.evaluate(x, h)
}

pub fn broad_pi_bound(x: f64, h: f64) -> Result<f64> {
    Variant::PiBroad.evaluate(x, h)
}

/// The earlier Brun–Titchmarsh based bound with constant 2.167, for comparison.
pub fn chd_reference_bound(x: f64, h: f64) -> Result<f64> {
    Variant::Chd.evaluate(x, h)
}

pub const GAP_ALPHA1: f64 = 1.0 + 1.93378e-8;
pub const GAP_ALPHA2: f64 = 1.04320;

/// `(0.999√x + x^{1/3}, α₁√x + α₂x^{1/3})`, the bracket for `ψ(x) − θ(x)`
/// valid for `log x ≥ 40`; evaluated here without the range check.
pub fn theta_psi_bracket(x: f64) -> (f64, f64) {
    let (s, c) = (x.sqrt(), x.cbrt());
    (0.999 * s + c, GAP_ALPHA1 * s + GAP_ALPHA2 * c)
}

pub fn theta_psi_gap(x: f64) -> Result<(f64, f64)> {
    if !(x.ln() >= 40.0) {
        return Err(Error::Domain(format!(
            "the ψ − θ bracket needs log x >= 40, got log x = {}",
            x.ln()
        )));
    }
    Ok(theta_psi_bracket(x))
}

/// The multiplier `c` in `θ(t) ≤ c·t` used when passing from θ to π.
pub fn rosser_theta_multiplier() -> f64 {
    1.01168
}

/// `c(2 + h/x) + psi_constant`, the constant obtained for π from a θ bound.
pub fn pi_transfer_constant(h_over_x: f64, theta_constant: f64) -> f64 {
    rosser_theta_multiplier() * (2.0 + h_over_x) + theta_constant
}

/// The constant obtained for θ from a ψ constant at `x`, using the bracket
/// for `ψ − θ` over the window `h ≤ x^{3/4}`: `c + (a + b x^{−1/6})/log x`.
pub fn theta_transfer_constant(x: f64, psi_constant: f64) -> f64 {
    let q = x.powf(-0.25);
    let a = GAP_ALPHA1 * (1.0 + q).sqrt() - 0.999;
    let b = GAP_ALPHA2 * (1.0 + q).cbrt() - 1.0;
    psi_constant + (a + b * x.powf(-1.0 / 6.0)) / x.ln()
}
