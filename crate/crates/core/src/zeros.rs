//! Tables of nontrivial zeta-zero ordinates and the zero-counting estimates
//! built on them.

use std::f64::consts::{E, PI};
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::numerics::{compensated_sum, integrate_real, QuadratureConfig};
use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// Ascending positive ordinates `γ` of zeros `1/2 + iγ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
    source: String,
}

impl ZeroTable {
    /// Validates ordering, positivity and the location of the first zero.
    pub fn new(ordinates: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        let first = *ordinates.first().ok_or(Error::EmptyTable)?;
        if !(first > 14.13 && first < 14.14) {
            return Err(Error::Parse {
                line: 1,
                message: format!("first ordinate {first} is not the first zeta zero (≈14.1347)"),
            });
        }
        for (i, w) in ordinates.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::Ordering {
                    line: i + 2,
                    value: w[1],
                });
            }
        }
        Ok(Self {
            ordinates,
            source: source.into(),
        })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Largest tabulated ordinate; sums beyond it are undefined.
    pub fn max_height(&self) -> f64 {
        *self.ordinates.last().expect("tables are never empty")
    }

    fn check_height(&self, t: f64) -> Result<()> {
        if t > self.max_height() {
            return Err(Error::OutOfRange {
                requested: t,
                max_height: self.max_height(),
            });
        }
        Ok(())
    }

    /// Ordinates with `lo <= γ <= hi`.
    pub fn range(&self, lo: f64, hi: f64) -> &[f64] {
        let start = self.ordinates.partition_point(|&g| g < lo);
        let end = self.ordinates.partition_point(|&g| g <= hi);
        &self.ordinates[start..end.max(start)]
    }

    /// `Σ_{lo ≤ γ ≤ hi} f(γ)` over positive ordinates only.
    pub fn sum_positive<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: F) -> Result<f64> {
        self.check_height(hi)?;
        Ok(compensated_sum(self.range(lo, hi).iter().map(|&g| f(g))))
    }

    /// `Σ_{lo ≤ |γ| ≤ hi} f(|γ|)`: zeros come in conjugate pairs, so this is
    /// twice the sum over positive ordinates. Every two-sided zero sum goes
    /// through here.
    pub fn sum_symmetric<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: F) -> Result<f64> {
        Ok(2.0 * self.sum_positive(lo, hi, f)?)
    }
}

fn parse_lines<R: BufRead>(reader: R) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut prev = 0.0_f64;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let value: f64 = text.parse().map_err(|e| Error::Parse {
            line: i + 1,
            message: format!("cannot parse {text:?} as an ordinate: {e}"),
        })?;
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("ordinate {value} is not positive"),
            });
        }
        if !(value > prev) {
            return Err(Error::Ordering { line: i + 1, value });
        }
        prev = value;
        out.push(value);
    }
    Ok(out)
}

/// Parses a zero table from text: one ordinate per line, ascending, `#`
/// comments ignored.
pub fn parse_zeros(text: &str, source: &str) -> Result<ZeroTable> {
    ZeroTable::new(parse_lines(text.as_bytes())?, source)
}

pub fn load_zeros(path: impl AsRef<Path>) -> Result<ZeroTable> {
    let path = path.as_ref();
    let file = fs::File::open(path)?;
    ZeroTable::new(
        parse_lines(BufReader::new(file))?,
        path.display().to_string(),
    )
}

const CACHE_MAGIC: &[u8; 8] = b"SIPNTZ01";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheStatus {
    Hit,
    Rebuilt,
}

/// `<source>.bin` next to the text table.
pub fn cache_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".bin");
    PathBuf::from(name)
}

/// Binary cache layout: 8-byte magic, little-endian `u64` count, then `count`
/// little-endian `f64` ordinates.
pub fn write_cache(table: &ZeroTable, path: &Path) -> Result<()> {
    let mut buf = Vec::with_capacity(16 + 8 * table.len());
    buf.extend_from_slice(CACHE_MAGIC);
    buf.extend_from_slice(&(table.len() as u64).to_le_bytes());
    for g in table.ordinates() {
        buf.extend_from_slice(&g.to_le_bytes());
    }
    fs::write(path, buf)?;
    Ok(())
}

pub fn read_cache(path: &Path, source: &str) -> Result<ZeroTable> {
    let bytes = fs::read(path)?;
    let bad = |message: &str| Error::Parse {
        line: 0,
        message: format!("{}: {message}", path.display()),
    };
    if bytes.len() < 16 || &bytes[..8] != CACHE_MAGIC {
        return Err(bad("not a zero-table cache"));
    }
    let count = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
    if bytes.len() != 16 + 8 * count {
        return Err(bad("truncated cache"));
    }
    let ordinates = bytes[16..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    ZeroTable::new(ordinates, source)
}

/// Loads a table through its binary cache, rebuilding the cache when it is
/// missing, unreadable, or older than the text file.
pub fn load_zeros_cached(path: impl AsRef<Path>) -> Result<(ZeroTable, CacheStatus)> {
    let path = path.as_ref();
    let cache = cache_path(path);
    let source_mtime = fs::metadata(path)?.modified()?;
    let fresh = fs::metadata(&cache)
        .and_then(|m| m.modified())
        .map(|t| t >= source_mtime)
        .unwrap_or(false);
    if fresh {
        if let Ok(table) = read_cache(&cache, &path.display().to_string()) {
            return Ok((table, CacheStatus::Hit));
        }
    }
    let table = load_zeros(path)?;
    write_cache(&table, &cache)?;
    Ok((table, CacheStatus::Rebuilt))
}

/// `N(T) = #{γ : 0 < γ ≤ T}`.
pub fn count_n(table: &ZeroTable, t: f64) -> Result<usize> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("N(T) needs T > 0, got {t}")));
    }
    table.check_height(t)?;
    Ok(table.ordinates.partition_point(|&g| g <= t))
}

/// `(T/2π) log(T/2πe) + 7/8`, the smooth part of `N(T)`.
pub fn n_main_term(t: f64) -> f64 {
    t / TWO_PI * (t / (TWO_PI * E)).ln() + 0.875
}

/// `Q(T) = N(T) - (T/2π) log(T/2πe) - 7/8`.
pub fn q_deviation(table: &ZeroTable, t: f64) -> Result<f64> {
    if t < TWO_PI {
        return Err(Error::Domain(format!("Q(T) is used for T >= 2π, got {t}")));
    }
    Ok(count_n(table, t)? as f64 - n_main_term(t))
}

/// `R(T) = min{0.28 log T, 0.1038 log T + 0.2573 log log T + 9.3675}`.
pub fn r_bound(t: f64) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::Domain(format!("R(T) needs T > 1, got {t}")));
    }
    let l = t.ln();
    Ok((0.28 * l).min(0.1038 * l + 0.2573 * l.ln() + 9.3675))
}

/// `T log T / 2π`, a crude upper bound for `N(T)`.
pub fn n_crude_upper(t: f64) -> Result<f64> {
    if t < 1.0 {
        return Err(Error::Domain(format!(
            "crude N(T) bound needs T >= 1, got {t}"
        )));
    }
    Ok(t * t.ln() / TWO_PI)
}

/// `log T / (πT)`, bounding `Σ_{|γ| ≥ T} γ^{-2}`.
pub fn skewes_tail_bound(t: f64) -> Result<f64> {
    if t < 1.0 {
        return Err(Error::Domain(format!("tail bound needs T >= 1, got {t}")));
    }
    Ok(t.ln() / (PI * t))
}

/// Constants of the weighted zero-sum lemma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BptConstants {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
}

pub const BPT: BptConstants = BptConstants {
    a0: 2.067,
    a1: 0.059,
    a2: 1.0 / 150.0,
};

impl Default for BptConstants {
    fn default() -> Self {
        BPT
    }
}

/// Upper bound on the lemma's error term:
/// `2(A₀ + A₁ log U)|φ'(U)| + (A₁ + A₂)φ(U)/U`.
pub fn e_lemma_term(cts: &BptConstants, u: f64, phi_u: f64, dphi_u: f64) -> Result<f64> {
    if u < TWO_PI {
        return Err(Error::Domain(format!("lemma needs U >= 2π, got {u}")));
    }
    if phi_u < 0.0 {
        return Err(Error::Domain(format!(
            "φ must be nonnegative, got φ(U) = {phi_u}"
        )));
    }
    Ok(2.0 * (cts.a0 + cts.a1 * u.ln()) * dphi_u.abs() + (cts.a1 + cts.a2) * phi_u / u)
}

/// Main term and error envelope for `Σ_{U ≤ γ ≤ V} φ(γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BptEstimate {
    /// `(1/2π)∫_U^V φ(t) log(t/2π) dt`.
    pub main: f64,
    /// `φ(V)R(V) + φ(U)R(U) + |𝓔(U)|` bound, plus the quadrature error.
    pub envelope: f64,
}

impl BptEstimate {
    pub fn contains(&self, value: f64) -> bool {
        (value - self.main).abs() <= self.envelope
    }
}

/// Weighted zero-sum estimate for a decreasing, positive, continuously
/// differentiable `φ` on `[U, V]`.
pub fn bpt_sum_estimate<F, D>(
    cts: &BptConstants,
    phi: F,
    dphi: D,
    u: f64,
    v: f64,
    cfg: &QuadratureConfig,
) -> Result<BptEstimate>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if !(TWO_PI <= u && u <= v) {
        return Err(Error::Domain(format!(
            "lemma needs 2π <= U <= V, got U = {u}, V = {v}"
        )));
    }
    let (main, quad_err) = if v > u {
        let (m, e) = integrate_real(|t| phi(t) * (t / TWO_PI).ln(), u, v, cfg)?;
        (m / TWO_PI, e / TWO_PI)
    } else {
        (0.0, 0.0)
    };
    let envelope = phi(v) * r_bound(v)?
        + phi(u) * r_bound(u)?
        + e_lemma_term(cts, u, phi(u), dphi(u))?
        + quad_err;
    Ok(BptEstimate { main, envelope })
}

/// `E(T₁,T₂) = 2(R(T₂)/T₂ + R(T₁)/T₁ + (A₁ + A₂ + 2(A₀ + A₁ log T₁))/T₁²)`.
pub fn e_pair(cts: &BptConstants, t1: f64, t2: f64) -> Result<f64> {
    if !(t1 > 1.0 && t2 > 1.0) {
        return Err(Error::Domain(format!(
            "E(T1, T2) needs T1, T2 > 1, got {t1}, {t2}"
        )));
    }
    Ok(2.0
        * (r_bound(t2)? / t2
            + r_bound(t1)? / t1
            + (cts.a1 + cts.a2 + 2.0 * (cts.a0 + cts.a1 * t1.ln())) / (t1 * t1)))
}

/// Samples `n` log-spaced points spanning `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == n {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}
