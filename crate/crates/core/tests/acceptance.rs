//! Acceptance criteria, one line each: `AC<n> PASS|FAIL <runtime> <detail>`.
//! Runs as a plain binary so every criterion reports even when one fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use sipnt::bounds::optimize::{optimize, Objective, SearchConfig};
use sipnt::bounds::{psi2, psi2_limit, psi3, THEOREM_X0};
use sipnt::checks::{self, SuiteOptions};
use sipnt::sieve::verify_gap_claim;
use sipnt::zeros::{load_zeros_cached, ZeroTable};
use sipnt::Execution;

const M: f64 = 2.36856;

const PSI2_CEILING: f64 = 1.83012;
const PSI2_FLOOR: f64 = 1.80;
const LIMIT_TARGET: f64 = 1.82567;
const LIMIT_TOL: f64 = 5e-5;
const PSI3_CEILING: f64 = 3.03504;
const OPTIMIZER_CEILING: f64 = 1.8302;
const OPTIMIZER_BUDGET: usize = 2000;
const OPTIMIZER_SEED: u64 = 20240229;
const LEMMA_ZEROS: usize = 50;
const LEMMA_PARAMS: usize = 5;
const BPT_PAIRS: usize = 10;
const SANDWICH_CONFIGS: usize = 20;
const EXPLICIT_XS: [f64; 2] = [1e5, 1e6];
const EXPLICIT_HEIGHT: f64 = 1e4;
const KAPPA3: f64 = 4.32346;
const GAP_LIMIT: u64 = 100_000_000;
const EMPIRICAL_XS: [f64; 3] = [1e8, 1e9, 1e10];
const EXPECTED_SLACK: f64 = 1e3;

fn zeros_path() -> PathBuf {
    std::env::var_os("PNT_ZEROS_PATH")
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/zeros_100k.txt")
        })
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn run(id: usize, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed < limit;
    let passed = out.passed && in_time;
    println!(
        "AC{id} {} {:>9.3}s (limit {}s) {}{}",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs(),
        out.detail,
        if in_time { "" } else { " [over time limit]" }
    );
    passed
}

fn suite_outcome(checks: sipnt::Result<Vec<checks::CheckResult>>) -> Outcome {
    match checks {
        Ok(cs) => {
            let failed: Vec<&str> = cs
                .iter()
                .filter(|c| !c.passed && !c.informational)
                .map(|c| c.name.as_str())
                .collect();
            Outcome {
                passed: failed.is_empty(),
                detail: if failed.is_empty() {
                    format!("{} checks passed", cs.len())
                } else {
                    format!("failed: {}", failed.join("; "))
                },
            }
        }
        Err(e) => Outcome {
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn main() -> ExitCode {
    let opts = SuiteOptions {
        kappa3: KAPPA3,
        m: M,
        height: EXPLICIT_HEIGHT,
        gap_limit: GAP_LIMIT,
        ..SuiteOptions::default()
    };
    let table: Option<ZeroTable> = load_zeros_cached(zeros_path()).ok().map(|(t, _)| t);
    let need_table = |f: &dyn Fn(&ZeroTable) -> Outcome| match &table {
        Some(t) => f(t),
        None => Outcome {
            passed: false,
            detail: format!("zero table missing at {}", zeros_path().display()),
        },
    };
    let secs = Duration::from_secs;
    let mut results = Vec::new();

    results.push(run(1, secs(1), || {
        let v = psi2(THEOREM_X0, M, 0.25, 1.29329, 6.48028, 4.32346).map(|t| t.total());
        match v {
            Ok(v) => Outcome {
                passed: (PSI2_FLOOR..=PSI2_CEILING).contains(&v),
                detail: format!("Psi2 = {v:.7} in [{PSI2_FLOOR}, {PSI2_CEILING}]"),
            },
            Err(e) => Outcome {
                passed: false,
                detail: format!("error: {e}"),
            },
        }
    }));

    results.push(run(2, secs(1), || {
        match psi2_limit(M, 1.40046, 6.54584, 4.54913) {
            Ok(t) => {
                let v = t.total();
                Outcome {
                    passed: (v - LIMIT_TARGET).abs() <= LIMIT_TOL,
                    detail: format!("lim Psi2 = {v:.7}, target {LIMIT_TARGET} +- {LIMIT_TOL}"),
                }
            }
            Err(e) => Outcome {
                passed: false,
                detail: format!("error: {e}"),
            },
        }
    }));

    results.push(run(3, secs(1), || {
        match psi3(THEOREM_X0, M, 1.40046, 6.54584, 4.54913) {
            Ok(t) => {
                let v = t.total();
                Outcome {
                    passed: v < PSI3_CEILING,
                    detail: format!("Psi3 = {v:.7}, required < {PSI3_CEILING}"),
                }
            }
            Err(e) => Outcome {
                passed: false,
                detail: format!("error: {e}"),
            },
        }
    }));

    results.push(run(4, secs(60), || {
        let cfg = SearchConfig {
            budget: OPTIMIZER_BUDGET,
            seed: OPTIMIZER_SEED,
            ..SearchConfig::default()
        };
        match optimize(Objective::Psi2 { x: THEOREM_X0, eps: 0.25 }, &cfg) {
            Ok(r) => Outcome {
                passed: r.best_value <= OPTIMIZER_CEILING,
                detail: format!(
                    "best Psi2 = {:.7} (<= {OPTIMIZER_CEILING}) at m = {:.5}, k1 = {:.5}, k2 = {:.5}, k3 = {:.5}, {} evals",
                    r.best_value, r.best.m, r.best.kappa1, r.best.kappa2, r.best.kappa3, r.evaluations
                ),
            },
            Err(e) => Outcome { passed: false, detail: format!("error: {e}") },
        }
    }));

    results.push(run(5, secs(30), || {
        need_table(&|t| suite_outcome(checks::lemma_w(t, LEMMA_ZEROS, LEMMA_PARAMS, &opts)))
    }));

    results.push(run(6, secs(10), || {
        need_table(&|t| {
            let mut all = match checks::zero_lemmas(t) {
                Ok(c) => c,
                Err(e) => {
                    return Outcome {
                        passed: false,
                        detail: format!("error: {e}"),
                    }
                }
            };
            match checks::bpt(t, BPT_PAIRS, &opts) {
                Ok(c) => all.extend(c),
                Err(e) => {
                    return Outcome {
                        passed: false,
                        detail: format!("error: {e}"),
                    }
                }
            }
            let mut out = suite_outcome(Ok(all));
            out.detail = format!("{} zeros, {}", t.len(), out.detail);
            out
        })
    }));

    results.push(run(7, secs(300), || {
        need_table(&|t| suite_outcome(checks::explicit_formula(t, &EXPLICIT_XS, &opts)))
    }));

    results.push(run(8, secs(120), || {
        suite_outcome(checks::sandwich(SANDWICH_CONFIGS, &opts))
    }));

    results.push(run(9, secs(120), || {
        match verify_gap_claim(GAP_LIMIT, Execution::default()) {
            Ok(r) => Outcome {
                passed: r.holds && r.max_ratio < 1.0,
                detail: format!(
                    "max (p_n+1 - p_n)/(log p_n)^2 = {:.5} at p = {} (gap {}), {} primes",
                    r.max_ratio, r.at_prime, r.gap, r.primes_scanned
                ),
            },
            Err(e) => Outcome {
                passed: false,
                detail: format!("error: {e}"),
            },
        }
    }));

    results.push(run(10, secs(300), || {
        let mut parts = Vec::new();
        let mut passed = true;
        for x in EMPIRICAL_XS {
            match checks::psi_plausibility(x, Execution::default()) {
                Ok(c) => {
                    let slack = c.details["slack"];
                    passed &= c.passed;
                    let note = if slack > EXPECTED_SLACK {
                        ""
                    } else {
                        " (below expected)"
                    };
                    parts.push(format!(
                        "x = {x:e}: deviation {:.1} <= bound {:.1}, slack {slack:.3e}{note}",
                        c.details["deviation"], c.details["bound"]
                    ));
                }
                Err(e) => {
                    passed = false;
                    parts.push(format!("x = {x:e}: error {e}"));
                }
            }
        }
        Outcome {
            passed,
            detail: format!(
                "{}; expected slack > {EXPECTED_SLACK:e} is informational",
                parts.join(", ")
            ),
        }
    }));

    let failed = results.iter().filter(|ok| !**ok).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
