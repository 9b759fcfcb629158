//! Segmented wheel sieve and the exact prime sums built on it: π/θ/ψ
//! increments, Λ-weighted smooth sums, the truncated explicit formula and
//! prime-gap scans.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::{NeumaierSum, QuadratureConfig};
use crate::weights::{closed_w1, mellin_w, phi_bound, trivial_tail, WeightShape, WindowParams};
use crate::zeros::{skewes_tail_bound, ZeroTable};
use crate::{Error, Execution, Result};

/// Largest integer the sieve will touch.
pub const SIEVE_CEILING: u64 = 1_000_000_000_000;

const WHEEL: [u64; 8] = [1, 7, 11, 13, 17, 19, 23, 29];
const SEGMENT_BLOCKS: u64 = 34_952;
const SEGMENT_SPAN: u64 = 30 * SEGMENT_BLOCKS;

const fn wheel_index() -> [u8; 30] {
    let mut idx = [u8::MAX; 30];
    let mut i = 0;
    while i < 8 {
        idx[WHEEL[i] as usize] = i as u8;
        i += 1;
    }
    idx
}
const WHEEL_INDEX: [u8; 30] = wheel_index();

/// Plain Eratosthenes up to `limit`, used for base primes.
fn small_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            (i * i..=n).step_by(i).for_each(|j| composite[j] = true);
        }
        i += 1;
    }
    (2..=n)
        .filter(|&k| !composite[k])
        .map(|k| k as u64)
        .collect()
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn check_range(lo: u64, hi: u64) -> Result<()> {
    if lo < 2 {
        return Err(Error::SieveRange(format!(
            "lower end must be at least 2, got {lo}"
        )));
    }
    if hi > SIEVE_CEILING {
        return Err(Error::SieveRange(format!(
            "upper end {hi} exceeds the sieve ceiling {SIEVE_CEILING}"
        )));
    }
    if lo > hi {
        return Err(Error::SieveRange(format!("empty range [{lo}, {hi}]")));
    }
    Ok(())
}

/// Primes of `[lo, hi]` within the segment `[base, base + SEGMENT_SPAN)`,
/// where `base` is a multiple of 30.
fn sieve_segment(base: u64, lo: u64, hi: u64, base_primes: &[u64]) -> Vec<u64> {
    let span_end = (base + SEGMENT_SPAN).min(hi + 1);
    let blocks = (span_end - base).div_ceil(30) as usize;
    let mut bits = vec![0xffu8; blocks];
    for &p in base_primes.iter().filter(|&&p| p >= 7) {
        if p * p >= span_end {
            break;
        }
        let q_min = p.max(base.div_ceil(p));
        for &w in &WHEEL {
            // smallest q ≥ q_min with q ≡ w (mod 30)
            let q = q_min + (w + 30 - q_min % 30) % 30;
            let mut n = p * q;
            let step = 30 * p;
            while n < span_end {
                let off = n - base;
                bits[(off / 30) as usize] &= !(1 << WHEEL_INDEX[(off % 30) as usize]);
                n += step;
            }
        }
    }
    let mut out = Vec::new();
    for &p in &[2u64, 3, 5] {
        if p >= lo.max(base) && p <= hi && p < span_end {
            out.push(p);
        }
    }
    for (b, &byte) in bits.iter().enumerate() {
        if byte == 0 {
            continue;
        }
        for (i, &w) in WHEEL.iter().enumerate() {
            if byte & (1 << i) != 0 {
                let n = base + 30 * b as u64 + w;
                if n > 1 && n >= lo && n <= hi {
                    out.push(n);
                }
            }
        }
    }
    out
}

/// Runs `f` on the ascending primes of each segment of `[lo, hi]` and returns
/// the results in segment order.
fn fold_segments<R, F>(lo: u64, hi: u64, exec: Execution, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&[u64]) -> R + Sync + Send,
{
    check_range(lo, hi)?;
    let base_primes = small_primes(isqrt(hi));
    let first = lo / 30 * 30;
    let count = ((hi - first) / SEGMENT_SPAN + 1) as usize;
    Ok(exec.map_range(0..count, |i| {
        let base = first + i as u64 * SEGMENT_SPAN;
        f(&sieve_segment(base, lo, hi, &base_primes))
    }))
}

/// Exactly the primes of `[lo, hi]`, ascending.
pub fn segmented_primes(lo: u64, hi: u64, exec: Execution) -> Result<Vec<u64>> {
    if lo <= hi && hi < 2 {
        return Ok(Vec::new());
    }
    Ok(fold_segments(lo.max(2), hi, exec, |ps| ps.to_vec())?.concat())
}

/// `Σ log p` over prime powers `p^k ∈ (lo, hi]` with `k ≥ 2`, by direct
/// enumeration of the powers of primes up to `√hi`.
pub fn prime_power_excess(lo: u64, hi: u64) -> f64 {
    let mut acc = NeumaierSum::new();
    for p in small_primes(isqrt(hi)) {
        let lp = (p as f64).ln();
        let mut q = p * p;
        while q <= hi {
            if q > lo {
                acc += lp;
            }
            match q.checked_mul(p) {
                Some(next) => q = next,
                None => break,
            }
        }
    }
    acc.value()
}

/// Prime-power increments of π, θ and ψ over `(x, x+h]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalCensus {
    pub x: u64,
    pub h: u64,
    pub pi_inc: u64,
    pub theta_inc: f64,
    pub psi_inc: f64,
}

impl IntervalCensus {
    /// The prime-power (`k ≥ 2`) part of the ψ increment.
    pub fn power_part(&self) -> f64 {
        self.psi_inc - self.theta_inc
    }
}

pub fn census(x: u64, h: u64, exec: Execution) -> Result<IntervalCensus> {
    if x < 2 || h < 1 {
        return Err(Error::SieveRange(format!(
            "census needs x >= 2 and h >= 1, got x = {x}, h = {h}"
        )));
    }
    let hi = x
        .checked_add(h)
        .ok_or_else(|| Error::SieveRange("x + h overflows".into()))?;
    let parts = fold_segments(x + 1, hi, exec, |ps| {
        let theta: NeumaierSum = ps.iter().map(|&p| (p as f64).ln()).sum();
        (ps.len() as u64, theta)
    })?;
    let mut pi_inc = 0;
    let mut theta = NeumaierSum::new();
    for (n, t) in parts {
        pi_inc += n;
        theta += t;
    }
    let theta_inc = theta.value();
    let mut psi = theta;
    psi += prime_power_excess(x, hi);
    Ok(IntervalCensus {
        x,
        h,
        pi_inc,
        theta_inc,
        psi_inc: psi.value(),
    })
}

/// Writes census rows as CSV with header `x,h,pi_inc,theta_inc,psi_inc`.
pub fn write_census_csv<W: Write>(rows: &[IntervalCensus], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Integer range strictly inside the open real interval `(a, b)`.
fn interior(a: f64, b: f64) -> (u64, u64) {
    let lo = (a.floor() + 1.0).max(2.0) as u64;
    let hi = (b.ceil() - 1.0).max(0.0) as u64;
    (lo, hi)
}

/// `Σₙ w±(n/x) Λ(n)` over the support of `w±`.
pub fn weighted_lambda_sum(
    params: &WindowParams,
    shape: &WeightShape,
    exec: Execution,
) -> Result<f64> {
    let (a, b) = params.support_abs();
    if b > SIEVE_CEILING as f64 {
        return Err(Error::SieveRange(format!(
            "window end {b} exceeds the sieve ceiling"
        )));
    }
    let (lo, hi) = interior(a, b);
    if lo > hi {
        return Ok(0.0);
    }
    let parts = fold_segments(lo, hi, exec, |ps| {
        ps.iter()
            .map(|&p| params.weight_at(shape, p as f64) * (p as f64).ln())
            .sum::<NeumaierSum>()
    })?;
    let mut acc: NeumaierSum = NeumaierSum::new();
    for part in parts {
        acc += part;
    }
    for p in small_primes(isqrt(hi)) {
        let lp = (p as f64).ln();
        let mut q = p * p;
        while q <= hi {
            if q >= lo {
                acc += params.weight_at(shape, q as f64) * lp;
            }
            match q.checked_mul(p) {
                Some(next) => q = next,
                None => break,
            }
        }
    }
    Ok(acc.value())
}

/// Truncated explicit formula for `Σₙ w±(n/x) Λ(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExplicitFormula {
    /// `x W±(1) − Σ_{|γ| ≤ H} x^ϱ W±(ϱ)`.
    pub value: f64,
    /// Bound on the discarded zeros, the trivial zeros and quadrature error.
    pub envelope: f64,
    pub zeros_used: usize,
    pub height: f64,
}

pub fn explicit_formula_rhs(
    params: &WindowParams,
    shape: &WeightShape,
    table: &ZeroTable,
    height: f64,
    cfg: &QuadratureConfig,
    exec: Execution,
) -> Result<ExplicitFormula> {
    if height > table.max_height() {
        return Err(Error::OutOfRange {
            requested: height,
            max_height: table.max_height(),
        });
    }
    if height < 1.0 {
        return Err(Error::Domain(format!(
            "zero height must be at least 1, got {height}"
        )));
    }
    let x = params.x();
    let sqrt_x = x.sqrt();
    let log_x = x.ln();
    let gammas = table.range(0.0, height);
    let terms = exec.map(gammas, |&g| -> Result<(f64, f64)> {
        let w = mellin_w(params, shape, Complex64::new(0.5, g), cfg)?;
        let phase = Complex64::from_polar(sqrt_x, g * log_x);
        Ok(((phase * w.value).re, sqrt_x * w.error))
    });
    let mut sum = NeumaierSum::new();
    let mut quad = NeumaierSum::new();
    for t in terms {
        let (v, e): (f64, f64) = t?;
        sum += v;
        quad += e;
    }
    let value = x * closed_w1(params, shape) - 2.0 * sum.value();
    let phi2 = phi_bound(shape, params.h0(), params.delta0(), 2)?;
    let tail = sqrt_x * phi2 / params.delta0() * skewes_tail_bound(height)?;
    let envelope = tail + 2.0 * quad.value() + trivial_tail(x, params.delta())?;
    Ok(ExplicitFormula {
        value,
        envelope,
        zeros_used: gammas.len(),
        height,
    })
}

/// Outcome of a scan of consecutive prime gaps against `(log pₙ)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapReport {
    pub start: u64,
    pub limit: u64,
    pub primes_scanned: u64,
    /// Largest `(pₙ₊₁ − pₙ)/(log pₙ)²`.
    pub max_ratio: f64,
    pub at_prime: u64,
    pub gap: u64,
    /// Largest absolute gap seen.
    pub max_gap: u64,
    pub holds: bool,
}

#[derive(Clone, Copy)]
struct GapSummary {
    first: u64,
    last: u64,
    count: u64,
    best: (f64, u64, u64),
    max_gap: u64,
}

fn ratio(p: u64, q: u64) -> f64 {
    let l = (p as f64).ln();
    (q - p) as f64 / (l * l)
}

fn summarize(ps: &[u64]) -> Option<GapSummary> {
    let (&first, &last) = (ps.first()?, ps.last()?);
    let mut best = (f64::NEG_INFINITY, 0, 0);
    let mut max_gap = 0;
    for w in ps.windows(2) {
        let r = ratio(w[0], w[1]);
        if r > best.0 {
            best = (r, w[0], w[1] - w[0]);
        }
        max_gap = max_gap.max(w[1] - w[0]);
    }
    Some(GapSummary {
        first,
        last,
        count: ps.len() as u64,
        best,
        max_gap,
    })
}

fn next_prime_after(p: u64) -> Result<u64> {
    let mut lo = p + 1;
    loop {
        let hi = lo + 4096;
        if let Some(&q) = segmented_primes(lo, hi, Execution::Sequential)?.first() {
            return Ok(q);
        }
        lo = hi + 1;
    }
}

/// Scans every prime `pₙ ∈ [start, limit]` together with its successor.
pub fn gap_scan(start: u64, limit: u64, exec: Execution) -> Result<GapReport> {
    let summaries = fold_segments(start, limit, exec, summarize)?;
    let mut acc: Option<GapSummary> = None;
    for s in summaries.into_iter().flatten() {
        acc = Some(match acc {
            None => s,
            Some(a) => {
                let r = ratio(a.last, s.first);
                let mut best = if a.best.0 >= s.best.0 { a.best } else { s.best };
                if r > best.0 {
                    best = (r, a.last, s.first - a.last);
                }
                GapSummary {
                    first: a.first,
                    last: s.last,
                    count: a.count + s.count,
                    best,
                    max_gap: a.max_gap.max(s.max_gap).max(s.first - a.last),
                }
            }
        });
    }
    let Some(mut a) = acc else {
        return Err(Error::SieveRange(format!(
            "no primes in [{start}, {limit}]"
        )));
    };
    let next = next_prime_after(a.last)?;
    let r = ratio(a.last, next);
    if r > a.best.0 {
        a.best = (r, a.last, next - a.last);
    }
    a.max_gap = a.max_gap.max(next - a.last);
    Ok(GapReport {
        start,
        limit,
        primes_scanned: a.count,
        max_ratio: a.best.0,
        at_prime: a.best.1,
        gap: a.best.2,
        max_gap: a.max_gap,
        holds: a.best.0 < 1.0,
    })
}

/// `pₙ₊₁ − pₙ < (log pₙ)²` for all primes `11 ≤ pₙ ≤ limit`.
pub fn verify_gap_claim(limit: u64, exec: Execution) -> Result<GapReport> {
    gap_scan(11, limit, exec)
}
