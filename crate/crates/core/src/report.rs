//! Machine-readable run records.
//!
//! Key order is fixed by struct field order and `BTreeMap`, so equal inputs
//! serialize to equal bytes.

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::bounds::optimize::OptimizeResult;
use crate::bounds::{
    rosser_theta_multiplier, BoundParams, LimitTerms, Psi2Terms, Psi3Terms, BROAD_CONSTANT,
    BROAD_PI_CONSTANT, CHD_CONSTANT, GAP_ALPHA1, GAP_ALPHA2, PI_CONSTANT, PSI_CONSTANT,
};
use crate::zeros::BPT;
use crate::Result;

pub const SCHEMA: u32 = 1;

/// Seconds since the epoch, or `SOURCE_DATE_EPOCH` when set.
pub fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or_else(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        })
}

pub fn revision() -> &'static str {
    env!("SIPNT_REVISION")
}

/// Named constants that enter the bounds.
pub fn constants() -> BTreeMap<String, f64> {
    [
        ("A0", BPT.a0),
        ("A1", BPT.a1),
        ("A2", BPT.a2),
        ("alpha1", GAP_ALPHA1),
        ("alpha2", GAP_ALPHA2),
        ("rosser_multiplier", rosser_theta_multiplier()),
        ("psi_constant", PSI_CONSTANT),
        ("pi_constant", PI_CONSTANT),
        ("broad_constant", BROAD_CONSTANT),
        ("broad_pi_constant", BROAD_PI_CONSTANT),
        ("chd_constant", CHD_CONSTANT),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Terms {
    pub psi2: Option<Psi2Terms>,
    pub psi2_limit: Option<LimitTerms>,
    pub psi3: Option<Psi3Terms>,
}

/// `Ψ₂`, `lim Ψ₂` and `Ψ₃` at one parameter tuple; an expression whose
/// constraints the tuple violates is recorded as `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub schema: u32,
    pub kind: String,
    pub params: BoundParams,
    pub psi2_value: Option<f64>,
    pub psi2_limit_value: Option<f64>,
    pub psi3_value: Option<f64>,
    pub terms: Terms,
    pub constants: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerSummary>,
    pub timestamp: u64,
    pub revision: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerSummary {
    pub objective: String,
    pub best_value: f64,
    pub evaluations: usize,
    pub budget: usize,
    pub seed: u64,
    pub search_box: BTreeMap<String, (f64, f64)>,
}

impl BoundReport {
    pub fn for_params(params: BoundParams) -> Self {
        let psi2 = params.psi2().ok();
        let limit = params.psi2_limit().ok();
        let psi3 = params.psi3().ok();
        BoundReport {
            schema: SCHEMA,
            kind: "bound-params".into(),
            params,
            psi2_value: psi2.map(|t| t.total()),
            psi2_limit_value: limit.map(|t| t.total()),
            psi3_value: psi3.map(|t| t.total()),
            terms: Terms {
                psi2,
                psi2_limit: limit,
                psi3,
            },
            constants: constants(),
            optimizer: None,
            timestamp: timestamp(),
            revision: revision().to_string(),
        }
    }

    pub fn for_optimum(
        result: &OptimizeResult,
        budget: usize,
        seed: u64,
        search_box: BTreeMap<String, (f64, f64)>,
    ) -> Self {
        let mut report = BoundReport::for_params(result.best);
        report.kind = "optimize".into();
        report.optimizer = Some(OptimizerSummary {
            objective: result.objective.name().into(),
            best_value: result.best_value,
            evaluations: result.evaluations,
            budget,
            seed,
            search_box,
        });
        report
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

/// Wraps any serializable payload with the schema, time and revision fields.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema: u32,
    pub kind: String,
    #[serde(flatten)]
    pub payload: T,
    pub timestamp: u64,
    pub revision: String,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(kind: &str, payload: T) -> Self {
        Envelope {
            schema: SCHEMA,
            kind: kind.into(),
            payload,
            timestamp: timestamp(),
            revision: revision().to_string(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}
