//! Verification suites: each runs a family of numeric checks and reports
//! pass/fail with the measured quantities.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{theta_psi_bracket, Variant};
use crate::numerics::QuadratureConfig;
use crate::sieve::{
    census, explicit_formula_rhs, prime_power_excess, verify_gap_claim, weighted_lambda_sum,
};
use crate::weights::{closed_w1, lemma_bound, mellin_w, Sign, WeightShape, WindowParams};
use crate::zeros::{
    bpt_sum_estimate, count_n, log_spaced, n_crude_upper, q_deviation, r_bound, skewes_tail_bound,
    ZeroTable, BPT,
};
use crate::{Error, Execution, Result};

const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    LemmaW,
    Zeros,
    Bpt,
    ExplicitFormula,
    Sandwich,
    Gaps,
    Empirical,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::LemmaW,
        Suite::Zeros,
        Suite::Bpt,
        Suite::ExplicitFormula,
        Suite::Sandwich,
        Suite::Gaps,
        Suite::Empirical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LemmaW => "lemma-w",
            Suite::Zeros => "zeros",
            Suite::Bpt => "bpt",
            Suite::ExplicitFormula => "explicit-formula",
            Suite::Sandwich => "sandwich",
            Suite::Gaps => "gaps",
            Suite::Empirical => "empirical",
        }
    }

    pub fn needs_zeros(self) -> bool {
        matches!(
            self,
            Suite::LemmaW | Suite::Zeros | Suite::Bpt | Suite::ExplicitFormula
        )
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite {s:?}")))
    }
}

/// One named check. Informational checks are reported but never fail a suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub informational: bool,
    pub details: BTreeMap<String, f64>,
}

impl CheckResult {
    fn new(name: impl Into<String>, passed: bool) -> Self {
        CheckResult {
            name: name.into(),
            passed,
            informational: false,
            details: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    fn informational(mut self) -> Self {
        self.informational = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    fn new(suite: Suite, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().all(|c| c.passed || c.informational);
        SuiteReport {
            suite,
            passed,
            checks,
        }
    }
}

/// Knobs shared by the suites; each suite reads only what it needs.
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    pub exec: Execution,
    pub quadrature: QuadratureConfig,
    /// Upper end of the gap scan.
    pub gap_limit: u64,
    /// Evaluation points; `None` uses each suite's default list.
    pub xs: Option<Vec<f64>>,
    /// Zero height for the explicit formula; capped at the table's maximum.
    pub height: f64,
    /// `κ₃` in `δ = h/κ₃` for the explicit formula.
    pub kappa3: f64,
    pub m: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            exec: Execution::default(),
            quadrature: QuadratureConfig::default(),
            gap_limit: 100_000_000,
            xs: None,
            height: 1e4,
            kappa3: 4.32346,
            m: 2.36856,
        }
    }
}

impl SuiteOptions {
    fn xs_or(&self, default: &[f64]) -> Vec<f64> {
        self.xs.clone().unwrap_or_else(|| default.to_vec())
    }
}

pub fn run_suite(
    suite: Suite,
    table: Option<&ZeroTable>,
    opts: &SuiteOptions,
) -> Result<SuiteReport> {
    let table = || {
        table.ok_or_else(|| {
            Error::MissingData(format!(
                "suite {suite} needs a zero table (set PNT_ZEROS_PATH or --zeros)"
            ))
        })
    };
    let checks = match suite {
        Suite::LemmaW => lemma_w(table()?, 50, 5, opts)?,
        Suite::Zeros => zero_lemmas(table()?)?,
        Suite::Bpt => bpt(table()?, 10, opts)?,
        Suite::ExplicitFormula => explicit_formula(table()?, &opts.xs_or(&[1e4, 1e5, 1e6]), opts)?,
        Suite::Sandwich => sandwich(20, opts)?,
        Suite::Gaps => vec![gaps(opts.gap_limit, opts.exec)?],
        Suite::Empirical => empirical(&opts.xs_or(&[1e8, 1e9, 1e10]), opts.exec)?,
    };
    Ok(SuiteReport::new(suite, checks))
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + (hi.ln() - lo.ln()) * rng.gen::<f64>()).exp()
}

/// `|W±(1/2+iγ)| ≤ min_j δ₀^{1−j}Φⱼ/|ϱ|^j` at the first `n_zeros` ordinates for
/// `n_params` random windows, both signs; plus `W±(1)` against its closed form.
pub fn lemma_w(
    table: &ZeroTable,
    n_zeros: usize,
    n_params: usize,
    opts: &SuiteOptions,
) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let gammas = &table.ordinates()[..n_zeros.min(table.len())];
    let x = 1e6;
    let mut draws = Vec::new();
    for _ in 0..n_params {
        let d0 = log_uniform(&mut rng, 1e-6, 1e-2);
        let h0 = log_uniform(&mut rng, 2.0 * d0, 0.1);
        let m = rng.gen_range(1.5..4.0);
        draws.push((m, h0, d0));
    }
    let mut checked = 0usize;
    let mut violations = 0usize;
    let mut worst = 0.0f64;
    let mut w1_err = 0.0f64;
    for &(m, h0, d0) in &draws {
        let shape = WeightShape::new(m)?;
        for sign in [Sign::Plus, Sign::Minus] {
            let p = WindowParams::new(x, h0 * x, d0 * x, sign)?;
            let w1 = mellin_w(&p, &shape, Complex64::new(1.0, 0.0), &opts.quadrature)?;
            w1_err = w1_err.max((w1.value.re - closed_w1(&p, &shape)).abs());
            let results = opts.exec.map(gammas, |&g| -> Result<(f64, f64)> {
                let s = Complex64::new(0.5, g);
                let w = mellin_w(&p, &shape, s, &opts.quadrature)?;
                Ok((
                    w.value.norm() - w.error,
                    lemma_bound(&shape, p.h0(), p.delta0(), s)?,
                ))
            });
            for r in results {
                let (lhs, bound) = r?;
                checked += 1;
                worst = worst.max(lhs / bound);
                if lhs > bound {
                    violations += 1;
                }
            }
        }
    }
    Ok(vec![
        CheckResult::new(
            "|W(1/2+i gamma)| <= min_j delta0^(1-j) Phi_j / |rho|^j",
            violations == 0,
        )
        .with("evaluations", checked as f64)
        .with("violations", violations as f64)
        .with("max_ratio", worst),
        CheckResult::new("W(1) quadrature matches closed form", w1_err <= 1e-10)
            .with("max_abs_error", w1_err),
    ])
}

pub fn zero_lemmas(table: &ZeroTable) -> Result<Vec<CheckResult>> {
    let max = table.max_height();
    let mut q_fail = 0;
    let mut q_worst = 0.0f64;
    for t in log_spaced(TWO_PI, max, 200) {
        let ratio = q_deviation(table, t)?.abs() / r_bound(t)?;
        q_worst = q_worst.max(ratio);
        if ratio > 1.0 {
            q_fail += 1;
        }
    }
    let mut n_fail = 0;
    let mut prev = 0;
    let mut monotone = true;
    for t in log_spaced(1.0, max, 200) {
        let n = count_n(table, t)?;
        if n as f64 > n_crude_upper(t)? {
            n_fail += 1;
        }
        monotone &= n >= prev;
        prev = n;
    }
    let mut skewes = CheckResult::new("2 sum_{gamma >= T} gamma^-2 < log T / (pi T)", true);
    for t in [TWO_PI, 1e2, 1e3, 1e4] {
        let partial = table.sum_symmetric(t, max, |g| g.powi(-2))?;
        let bound = skewes_tail_bound(t)?;
        skewes.passed &= partial < bound;
        skewes = skewes.with(&format!("ratio_at_{t:.0}"), partial / bound);
    }
    Ok(vec![
        CheckResult::new("|Q(T)| <= R(T)", q_fail == 0)
            .with("points", 200.0)
            .with("violations", q_fail as f64)
            .with("max_ratio", q_worst),
        CheckResult::new("N(T) <= T log T / 2pi", n_fail == 0)
            .with("points", 200.0)
            .with("violations", n_fail as f64),
        CheckResult::new("N(T) nondecreasing", monotone),
        skewes,
        CheckResult::new("N(100) = 29", count_n(table, 100.0)? == 29)
            .with("n_100", count_n(table, 100.0)? as f64),
    ])
}

/// Direct sums `Σ_{U≤γ≤V} 1/γ` against the weighted zero-sum estimate for
/// `(2π, 10³)` and `n_pairs` random pairs.
pub fn bpt(table: &ZeroTable, n_pairs: usize, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xb97);
    let max = table.max_height();
    let mut pairs = vec![(TWO_PI, 1e3_f64.min(max))];
    for _ in 0..n_pairs {
        let u = log_uniform(&mut rng, TWO_PI, max / 2.0);
        let v = log_uniform(&mut rng, u, max);
        pairs.push((u, v));
    }
    let mut out = Vec::new();
    for (u, v) in pairs {
        let direct = table.sum_positive(u, v, |g| 1.0 / g)?;
        let est = bpt_sum_estimate(
            &BPT,
            |t| 1.0 / t,
            |t| -1.0 / (t * t),
            u,
            v,
            &opts.quadrature,
        )?;
        out.push(
            CheckResult::new(
                format!("sum 1/gamma on [{u:.3}, {v:.3}] within envelope"),
                est.contains(direct),
            )
            .with("direct", direct)
            .with("main", est.main)
            .with("envelope", est.envelope),
        );
    }
    Ok(out)
}

/// `h = ⌈√x log x⌉`, `δ = h/κ₃`.
pub fn standard_window(x: f64, kappa3: f64, sign: Sign) -> Result<WindowParams> {
    let h = (x.sqrt() * x.ln()).ceil();
    WindowParams::new(x, h, h / kappa3, sign)
}

pub fn explicit_formula(
    table: &ZeroTable,
    xs: &[f64],
    opts: &SuiteOptions,
) -> Result<Vec<CheckResult>> {
    let shape = WeightShape::new(opts.m)?;
    let height = opts.height.min(table.max_height());
    let mut out = Vec::new();
    for &x in xs {
        for sign in [Sign::Plus, Sign::Minus] {
            let p = standard_window(x, opts.kappa3, sign)?;
            let lhs = weighted_lambda_sum(&p, &shape, opts.exec)?;
            let rhs = explicit_formula_rhs(&p, &shape, table, height, &opts.quadrature, opts.exec)?;
            let diff = (lhs - rhs.value).abs();
            let main = (lhs - x * closed_w1(&p, &shape)).abs();
            let sign_name = match sign {
                Sign::Plus => "+",
                Sign::Minus => "-",
            };
            out.push(
                CheckResult::new(
                    format!("explicit formula w{sign_name} at x = {x:e}"),
                    diff <= rhs.envelope,
                )
                .with("lambda_sum", lhs)
                .with("formula", rhs.value)
                .with("difference", diff)
                .with("envelope", rhs.envelope)
                .with("zeros", rhs.zeros_used as f64)
                .with("height", height),
            );
            out.push(
                CheckResult::new(
                    format!("x W{sign_name}(1) within 20 sqrt(x) log x at x = {x:e}"),
                    main < 20.0 * x.sqrt() * x.ln(),
                )
                .with("deviation", main)
                .with("allowance", 20.0 * x.sqrt() * x.ln()),
            );
        }
    }
    Ok(out)
}

/// `Σ w₋(n/x)Λ(n) < ψ(x+h) − ψ(x) < Σ w₊(n/x)Λ(n)` for random windows with
/// `x ∈ [10⁴, 10⁸]`.
pub fn sandwich(n: usize, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5a4d);
    let shape = WeightShape::new(opts.m)?;
    let mut configs: Vec<(u64, u64, f64)> = Vec::new();
    if let Some(xs) = &opts.xs {
        for &x in xs {
            let h = (x.sqrt() * x.ln()).ceil();
            configs.push((x as u64, h as u64, h / 4.0));
        }
    }
    for _ in 0..n {
        let x = log_uniform(&mut rng, 1e4, 1e8).round();
        let h = ((x.sqrt() * x.ln()) * rng.gen_range(1.0..4.0)).ceil();
        let delta = h * rng.gen_range(0.1..0.5);
        configs.push((x as u64, h as u64, delta));
    }
    let mut out = Vec::new();
    for (x, h, delta) in configs {
        let c = census(x, h, opts.exec)?;
        let lower = weighted_lambda_sum(
            &WindowParams::new(x as f64, h as f64, delta, Sign::Minus)?,
            &shape,
            opts.exec,
        )?;
        let upper = weighted_lambda_sum(
            &WindowParams::new(x as f64, h as f64, delta, Sign::Plus)?,
            &shape,
            opts.exec,
        )?;
        out.push(
            CheckResult::new(
                format!("sandwich at x = {x}, h = {h}"),
                lower < c.psi_inc && c.psi_inc < upper,
            )
            .with("delta", delta)
            .with("lower", lower)
            .with("psi_increment", c.psi_inc)
            .with("upper", upper),
        );
    }
    Ok(out)
}

pub fn gaps(limit: u64, exec: Execution) -> Result<CheckResult> {
    let r = verify_gap_claim(limit, exec)?;
    Ok(CheckResult::new(
        format!("p_(n+1) - p_n < (log p_n)^2 for 11 <= p_n <= {limit}"),
        r.holds,
    )
    .with("limit", limit as f64)
    .with("max_ratio", r.max_ratio)
    .with("at_prime", r.at_prime as f64)
    .with("gap", r.gap as f64)
    .with("max_gap", r.max_gap as f64)
    .with("primes", r.primes_scanned as f64))
}

/// `|ψ(x+h) − ψ(x) − h|` against the short-interval bound at desk scale, where
/// the theorem does not apply; the slack factor is bound/deviation.
pub fn psi_plausibility(x: f64, exec: Execution) -> Result<CheckResult> {
    let h = (x.sqrt() * x.ln()).ceil();
    let c = census(x as u64, h as u64, exec)?;
    let dev = (c.psi_inc - h).abs();
    let bound = Variant::Psi.evaluate_unchecked(x, h);
    Ok(CheckResult::new(
        format!("|psi(x+h) - psi(x) - h| <= bound at x = {x:e}"),
        dev <= bound,
    )
    .with("h", h)
    .with("deviation", dev)
    .with("bound", bound)
    .with("slack", bound / dev))
}

pub fn empirical(xs: &[f64], exec: Execution) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for &x in xs {
        out.push(psi_plausibility(x, exec)?);
        let h = (x.sqrt() * x.ln()).ceil();
        let c = census(x as u64, h as u64, exec)?;
        let dev = (c.theta_inc - h).abs();
        let bound = Variant::Theta.evaluate_unchecked(x, h);
        out.push(
            CheckResult::new(
                format!("|theta(x+h) - theta(x) - h| <= bound at x = {x:e}"),
                dev <= bound,
            )
            .with("deviation", dev)
            .with("bound", bound)
            .with("slack", bound / dev),
        );
        let l = x.ln();
        let hp = (x.sqrt() * l * l).ceil();
        let cp = census(x as u64, hp as u64, exec)?;
        let dev = (cp.pi_inc as f64 - hp / l).abs();
        let bound = Variant::Pi.evaluate_unchecked(x, hp);
        out.push(
            CheckResult::new(
                format!("|pi(x+h) - pi(x) - h/log x| <= bound at x = {x:e}"),
                dev <= bound,
            )
            .with("h", hp)
            .with("deviation", dev)
            .with("bound", bound)
            .with("slack", bound / dev),
        );
    }
    let x = 1e9;
    let gap = prime_power_excess(0, x as u64);
    let (lo, hi) = theta_psi_bracket(x);
    out.push(
        CheckResult::new(
            "psi(1e9) - theta(1e9) inside the large-x bracket",
            lo < gap && gap < hi,
        )
        .with("psi_minus_theta", gap)
        .with("lower", lo)
        .with("upper", hi)
        .informational(),
    );
    Ok(out)
}
