use crate::bounds::optimize::{optimize, Objective, SearchConfig};
use crate::bounds::{Variant, THEOREM_X0};
use crate::numerics::QuadratureConfig;
use crate::sieve::{census, segmented_primes, weighted_lambda_sum};
use crate::weights::{closed_w1, lemma_bound, mellin_w, w_pm, Sign, WeightShape, WindowParams};
use crate::Execution;
use num_complex::Complex64;
use proptest::prelude::*;

fn simple_primes(lo: u64, hi: u64) -> Vec<u64> {
    let n = hi as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            if i as u64 >= lo {
                out.push(i as u64);
            }
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn window_from(x: f64, h0: f64, frac: f64, sign: Sign) -> WindowParams {
    let h = h0 * x;
    WindowParams::new(x, h, frac * h / 2.0, sign).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn segmented_sieve_matches_plain_sieve(lo in 0u64..200_000, len in 1u64..50_000) {
        let hi = lo + len;
        prop_assert_eq!(segmented_primes(lo, hi, Execution::Sequential).unwrap(), simple_primes(lo, hi));
    }

    #[test]
    fn census_orders_prime_counts(x in 10_000u64..5_000_000, h in 100u64..100_000) {
        let c = census(x, h, Execution::default()).unwrap();
        prop_assert_eq!(c.pi_inc as usize, simple_primes(x + 1, x + h).len());
        prop_assert!(c.theta_inc <= c.psi_inc);
        prop_assert!(c.theta_inc <= c.pi_inc as f64 * ((x + h) as f64).ln() + 1e-6);
    }

    #[test]
    fn weights_lie_in_unit_interval(h0 in 1e-3f64..0.2, frac in 0.05f64..1.0, t in 0.9f64..1.3, plus in any::<bool>()) {
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let p = window_from(1e6, h0, frac, sign);
        let shape = WeightShape::new(2.36856).unwrap();
        let w = w_pm(&p, &shape, t);
        prop_assert!((0.0..=1.0).contains(&w));
        let (d0, h0) = (p.delta0(), p.h0());
        match sign {
            Sign::Minus if w == 1.0 => prop_assert!(1.0 + d0 <= t + 1e-15 && t <= 1.0 + h0 - d0 + 1e-15),
            Sign::Plus if w > 0.0 => prop_assert!(1.0 - d0 < t && t < 1.0 + h0 + d0),
            _ => {}
        }
    }

    #[test]
    fn minus_weight_never_exceeds_plus_weight(h0 in 1e-3f64..0.2, frac in 0.05f64..1.0, t in 0.9f64..1.3) {
        let shape = WeightShape::new(3.0).unwrap();
        let plus = window_from(1e6, h0, frac, Sign::Plus);
        let minus = plus.with_sign(Sign::Minus);
        prop_assert!(w_pm(&minus, &shape, t) <= w_pm(&plus, &shape, t));
    }

    #[test]
    fn mellin_at_one_is_closed_form(log_d0 in -6.0f64..-2.0, ratio in 2.0f64..20.0, m in 1.5f64..4.0, plus in any::<bool>()) {
        let d0 = 10f64.powf(log_d0);
        let h0 = (ratio * d0).min(0.1);
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let p = WindowParams::new(1.0, h0, d0, sign).unwrap();
        let shape = WeightShape::new(m).unwrap();
        let w = mellin_w(&p, &shape, Complex64::new(1.0, 0.0), &QuadratureConfig::default()).unwrap();
        prop_assert!((w.value.re - closed_w1(&p, &shape)).abs() < 1e-10);
        prop_assert!(w.value.im.abs() < 1e-12);
    }

    #[test]
    fn mellin_on_critical_line_obeys_lemma_bound(gamma in 14.0f64..2000.0, log_d0 in -4.0f64..-2.0, kappa in 2.0f64..8.0) {
        let d0 = 10f64.powf(log_d0);
        let shape = WeightShape::new(2.36856).unwrap();
        let p = WindowParams::new(1.0, kappa * d0, d0, Sign::Plus).unwrap();
        let s = Complex64::new(0.5, gamma);
        let w = mellin_w(&p, &shape, s, &QuadratureConfig::default()).unwrap();
        prop_assert!(w.value.norm() <= lemma_bound(&shape, p.h0(), d0, s).unwrap() + w.error);
    }

    #[test]
    fn smoothed_sums_bracket_the_interval(x in 20_000u64..2_000_000, kappa3 in 2.5f64..6.0) {
        let h = ((x as f64).sqrt() * (x as f64).ln()).ceil();
        let shape = WeightShape::new(2.36856).unwrap();
        let plus = WindowParams::new(x as f64, h, h / kappa3, Sign::Plus).unwrap();
        let lower = weighted_lambda_sum(&plus.with_sign(Sign::Minus), &shape, Execution::default()).unwrap();
        let upper = weighted_lambda_sum(&plus, &shape, Execution::default()).unwrap();
        let psi = census(x, h as u64, Execution::default()).unwrap().psi_inc;
        prop_assert!(lower < psi && psi < upper, "{lower} {psi} {upper}");
    }

    #[test]
    fn psi_bound_grows_with_interval_length(log_x in 43.0f64..80.0, a in 1.0f64..1e3, b in 1.0f64..1e3) {
        let x = log_x.exp();
        let base = x.sqrt() * x.ln();
        let (lo, hi) = (a.min(b), a.max(b));
        let v_lo = Variant::Psi.evaluate(x, base * lo).unwrap();
        let v_hi = Variant::Psi.evaluate(x, base * hi).unwrap();
        prop_assert!(v_lo <= v_hi);
        prop_assert!(v_lo >= Variant::Psi.constant() * base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn optimizer_respects_budget_and_reports_the_minimum(seed in any::<u64>(), budget in 50usize..400) {
        let cfg = SearchConfig { budget, seed, ..SearchConfig::default() };
        let r = optimize(Objective::Psi2 { x: THEOREM_X0, eps: 0.25 }, &cfg).unwrap();
        prop_assert!(r.evaluations <= budget);
        prop_assert_eq!(r.trace.len(), r.evaluations);
        let min = r.trace.iter().map(|e| e.value).fold(f64::INFINITY, f64::min);
        prop_assert_eq!(min, r.best_value);
        prop_assert!(r.best_value > 1.8);
    }
}
