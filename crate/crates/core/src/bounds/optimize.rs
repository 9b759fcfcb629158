//! Multistart Nelder–Mead over `(m, κ₁, κ₂, κ₃)` inside a feasibility box.

use std::cmp::Ordering;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{psi2, psi2_limit, psi3, BoundParams, THEOREM_X0};
use crate::{Error, Execution, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Objective {
    Psi2 { x: f64, eps: f64 },
    Psi2Limit,
    Psi3 { x: f64 },
}

impl Objective {
    pub fn name(&self) -> &'static str {
        match self {
            Objective::Psi2 { .. } => "psi2",
            Objective::Psi2Limit => "psi2-limit",
            Objective::Psi3 { .. } => "psi3",
        }
    }

    /// Largest admissible `κ₃` (exclusive), infinite for the limit.
    fn kappa3_ceiling(&self) -> f64 {
        match self {
            Objective::Psi2 { x, .. } | Objective::Psi3 { x } => x.ln(),
            Objective::Psi2Limit => f64::INFINITY,
        }
    }

    pub fn evaluate(&self, p: [f64; 4]) -> Result<f64> {
        let [m, k1, k2, k3] = p;
        Ok(match *self {
            Objective::Psi2 { x, eps } => psi2(x, m, eps, k1, k2, k3)?.total(),
            Objective::Psi2Limit => psi2_limit(m, k1, k2, k3)?.total(),
            Objective::Psi3 { x } => psi3(x, m, k1, k2, k3)?.total(),
        })
    }

    /// Full parameter record for a point; `x₀` and `ε` default to the
    /// theorem values when the objective does not fix them.
    pub fn params(&self, p: [f64; 4]) -> BoundParams {
        let (x0, eps) = match *self {
            Objective::Psi2 { x, eps } => (x, eps),
            Objective::Psi3 { x } => (x, 0.25),
            Objective::Psi2Limit => (THEOREM_X0, 0.25),
        };
        BoundParams {
            x0,
            eps,
            m: p[0],
            kappa1: p[1],
            kappa2: p[2],
            kappa3: p[3],
        }
    }
}

/// Closed box `[lo, hi]` for each of `(m, κ₁, κ₂, κ₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub m: (f64, f64),
    pub kappa1: (f64, f64),
    pub kappa2: (f64, f64),
    pub kappa3: (f64, f64),
}

impl Default for SearchBox {
    fn default() -> Self {
        SearchBox {
            m: (1.5, 4.0),
            kappa1: (1.0, 3.0),
            kappa2: (3.0, 12.0),
            kappa3: (2.0, 8.0),
        }
    }
}

impl SearchBox {
    pub fn point(p: [f64; 4]) -> Self {
        SearchBox {
            m: (p[0], p[0]),
            kappa1: (p[1], p[1]),
            kappa2: (p[2], p[2]),
            kappa3: (p[3], p[3]),
        }
    }

    fn ranges(&self) -> [(f64, f64); 4] {
        [self.m, self.kappa1, self.kappa2, self.kappa3]
    }

    /// Intersects the box with the parameter constraints.
    fn clip(&self, objective: &Objective) -> Result<[(f64, f64); 4]> {
        let [m, k1, k2, k3] = self.ranges();
        for (name, (lo, hi)) in [("m", m), ("kappa1", k1), ("kappa2", k2), ("kappa3", k3)] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::InfeasibleBox(format!(
                    "{name} range [{lo}, {hi}] is empty or not finite"
                )));
            }
        }
        if m.1 <= 1.0 {
            return Err(Error::InfeasibleBox("m must exceed 1".into()));
        }
        let k1 = (k1.0.max(1.0), k1.1.min(3.0));
        if k1.0 > k1.1 {
            return Err(Error::InfeasibleBox("kappa1 range misses [1, 3]".into()));
        }
        if k2.1 < k1.0 {
            return Err(Error::InfeasibleBox("kappa2 cannot reach kappa1".into()));
        }
        let ceiling = objective.kappa3_ceiling();
        let k3 = (k3.0.max(2.0), k3.1);
        if k3.0 > k3.1 || k3.0 >= ceiling {
            return Err(Error::InfeasibleBox(format!(
                "kappa3 range misses [2, {ceiling})"
            )));
        }
        let k3 = (
            k3.0,
            if k3.1 >= ceiling {
                ceiling * (1.0 - 1e-12)
            } else {
                k3.1
            },
        );
        let m = (if m.0 <= 1.0 { 1.0 + 1e-9 } else { m.0 }, m.1);
        Ok([m, k1, k2, k3])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub bounds: SearchBox,
    pub budget: usize,
    pub seed: u64,
    pub starts: usize,
    pub exec: Execution,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            bounds: SearchBox::default(),
            budget: 2000,
            seed: 0,
            starts: 16,
            exec: Execution::default(),
        }
    }
}

/// One objective evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub start: usize,
    pub step: usize,
    pub m: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub value: f64,
}

impl Evaluation {
    fn point(&self) -> [f64; 4] {
        [self.m, self.kappa1, self.kappa2, self.kappa3]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeResult {
    pub objective: Objective,
    pub best: BoundParams,
    pub best_value: f64,
    pub evaluations: usize,
    #[serde(skip)]
    pub trace: Vec<Evaluation>,
}

/// Lowest value first, then smaller κ₂, then smaller m.
fn better(a: &Evaluation, b: &Evaluation) -> bool {
    let key = |e: &Evaluation| (e.value, e.kappa2, e.m);
    let (ka, kb) = (key(a), key(b));
    match ka.0.total_cmp(&kb.0) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => (ka.1, ka.2) < (kb.1, kb.2),
    }
}

/// Evaluation bookkeeping for one start.
struct Run<'a> {
    objective: &'a Objective,
    bounds: [(f64, f64); 4],
    start: usize,
    budget: usize,
    trace: Vec<Evaluation>,
}

impl Run<'_> {
    fn exhausted(&self) -> bool {
        self.trace.len() >= self.budget
    }

    /// Maps a proposal into the box by reflecting across the walls, then
    /// clamping.
    fn project(&self, mut p: [f64; 4]) -> [f64; 4] {
        for (v, &(lo, hi)) in p.iter_mut().zip(&self.bounds) {
            if *v < lo {
                *v = lo + (lo - *v);
            } else if *v > hi {
                *v = hi - (*v - hi);
            }
            *v = v.clamp(lo, hi);
        }
        p
    }

    /// Objective value, or `+∞` for proposals that violate `κ₁ ≤ κ₂`; those
    /// are rejected without evaluation.
    fn eval(&mut self, p: [f64; 4]) -> f64 {
        if p[1] > p[2] {
            return f64::INFINITY;
        }
        let value = self.objective.evaluate(p).unwrap_or(f64::INFINITY);
        self.trace.push(Evaluation {
            start: self.start,
            step: self.trace.len(),
            m: p[0],
            kappa1: p[1],
            kappa2: p[2],
            kappa3: p[3],
            value,
        });
        value
    }

    fn nelder_mead(&mut self, x0: [f64; 4], scale: f64) {
        const N: usize = 4;
        let mut simplex: Vec<([f64; 4], f64)> = Vec::with_capacity(N + 1);
        let f0 = self.eval(x0);
        simplex.push((x0, f0));
        for i in 0..N {
            if self.exhausted() {
                return;
            }
            let (lo, hi) = self.bounds[i];
            let mut p = x0;
            let step = scale * (hi - lo);
            p[i] = if p[i] + step <= hi {
                p[i] + step
            } else {
                p[i] - step
            };
            let p = self.project(p);
            let f = self.eval(p);
            simplex.push((p, f));
        }
        let mut stalls = 0;
        while !self.exhausted() && stalls < 4 * N {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[N].1 - simplex[0].1;
            if spread.is_finite() && spread.abs() < 1e-15 {
                break;
            }
            let mut centroid = [0.0; 4];
            for (p, _) in &simplex[..N] {
                for k in 0..N {
                    centroid[k] += p[k] / N as f64;
                }
            }
            let along = |t: f64, w: &[f64; 4]| {
                let mut q = [0.0; 4];
                for k in 0..N {
                    q[k] = centroid[k] + t * (w[k] - centroid[k]);
                }
                q
            };
            let worst = simplex[N];
            let xr = self.project(along(-1.0, &worst.0));
            let fr = self.eval(xr);
            let best_before = simplex[0].1;
            if fr < simplex[0].1 {
                let xe = self.project(along(-2.0, &worst.0));
                let fe = if self.exhausted() {
                    f64::INFINITY
                } else {
                    self.eval(xe)
                };
                simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[N - 1].1 {
                simplex[N] = (xr, fr);
            } else {
                let (xc, fc) = if fr < worst.1 {
                    let xc = self.project(along(-0.5, &worst.0));
                    (
                        xc,
                        if self.exhausted() {
                            f64::INFINITY
                        } else {
                            self.eval(xc)
                        },
                    )
                } else {
                    let xc = self.project(along(0.5, &worst.0));
                    (
                        xc,
                        if self.exhausted() {
                            f64::INFINITY
                        } else {
                            self.eval(xc)
                        },
                    )
                };
                if fc < worst.1.min(fr) {
                    simplex[N] = (xc, fc);
                } else {
                    let best = simplex[0].0;
                    for vertex in simplex.iter_mut().skip(1) {
                        if self.exhausted() {
                            break;
                        }
                        let mut q = [0.0; 4];
                        for k in 0..N {
                            q[k] = best[k] + 0.5 * (vertex.0[k] - best[k]);
                        }
                        *vertex = (q, self.eval(q));
                    }
                }
            }
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            stalls = if simplex[0].1 < best_before {
                0
            } else {
                stalls + 1
            };
        }
    }

    /// Nelder–Mead restarted from the best point with shrinking simplices
    /// until the budget runs out.
    fn descend(&mut self, x0: [f64; 4]) {
        let mut scale = 0.1;
        let mut from = x0;
        while !self.exhausted() {
            let before = self.trace.len();
            self.nelder_mead(from, scale);
            if self.trace.len() == before {
                break;
            }
            if let Some(b) = best_of(&self.trace) {
                from = b.point();
            }
            scale = (scale * 0.5).max(1e-6);
        }
    }
}

fn best_of(trace: &[Evaluation]) -> Option<Evaluation> {
    trace.iter().filter(|e| e.value.is_finite()).fold(
        None,
        |acc: Option<Evaluation>, e| match acc {
            Some(a) if !better(e, &a) => Some(a),
            _ => Some(*e),
        },
    )
}

/// Latin-hypercube starts: each coordinate hits every one of `n` strata once.
fn latin_hypercube(bounds: &[(f64, f64); 4], n: usize, rng: &mut ChaCha8Rng) -> Vec<[f64; 4]> {
    let mut points = vec![[0.0; 4]; n];
    for (k, &(lo, hi)) in bounds.iter().enumerate() {
        let mut strata: Vec<usize> = (0..n).collect();
        strata.shuffle(rng);
        for (p, s) in points.iter_mut().zip(strata) {
            let u: f64 = rng.gen();
            p[k] = lo + (hi - lo) * (s as f64 + u) / n as f64;
        }
    }
    // a start with κ₁ > κ₂ would be rejected outright; swap into order
    for p in &mut points {
        if p[1] > p[2] {
            let k2 = p[1].clamp(bounds[2].0, bounds[2].1);
            let k1 = p[2].clamp(bounds[1].0, bounds[1].1);
            p[1] = k1.min(k2);
            p[2] = k2.max(k1);
        }
    }
    points
}

pub fn optimize(objective: Objective, cfg: &SearchConfig) -> Result<OptimizeResult> {
    let bounds = cfg.bounds.clip(&objective)?;
    if cfg.budget == 0 || cfg.starts == 0 {
        return Err(Error::InfeasibleBox(
            "budget and start count must be positive".into(),
        ));
    }
    let degenerate = bounds.iter().all(|(lo, hi)| lo == hi);
    let starts = if degenerate {
        1
    } else {
        cfg.starts.min(cfg.budget)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let points = if degenerate {
        vec![[bounds[0].0, bounds[1].0, bounds[2].0, bounds[3].0]]
    } else {
        latin_hypercube(&bounds, starts, &mut rng)
    };
    // first pass: an even share for every start; second pass: the rest goes
    // to polishing the winner
    let explore = if degenerate {
        1
    } else {
        (cfg.budget * 3 / 5 / starts).max(1)
    };
    let indexed: Vec<(usize, [f64; 4])> = points.into_iter().enumerate().collect();
    let runs = cfg.exec.map(&indexed, |&(start, p)| {
        let mut run = Run {
            objective: &objective,
            bounds,
            start,
            budget: explore,
            trace: Vec::new(),
        };
        if degenerate {
            run.eval(p);
        } else {
            run.descend(p);
        }
        run.trace
    });
    let mut trace: Vec<Evaluation> = runs.into_iter().flatten().collect();
    let used = trace.len();
    if !degenerate && used < cfg.budget {
        if let Some(b) = best_of(&trace) {
            let mut run = Run {
                objective: &objective,
                bounds,
                start: starts,
                budget: cfg.budget - used,
                trace: Vec::new(),
            };
            run.descend(b.point());
            trace.extend(run.trace);
        }
    }
    let best = best_of(&trace)
        .ok_or_else(|| Error::InfeasibleBox("no feasible point could be evaluated".into()))?;
    Ok(OptimizeResult {
        objective,
        best: objective.params(best.point()),
        best_value: best.value,
        evaluations: trace.len(),
        trace,
    })
}

/// Writes the trace as CSV with header `start,step,m,kappa1,kappa2,kappa3,value`.
pub fn write_trace_csv<W: Write>(trace: &[Evaluation], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for e in trace {
        w.serialize(e)?;
    }
    w.flush()?;
    Ok(())
}
