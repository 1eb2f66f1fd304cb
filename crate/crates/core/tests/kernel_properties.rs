use num_rational::BigRational;
use proptest::prelude::*;

use capsim::analysis::{detect_hump_series, incidence_from_choices};
use capsim::kernel::{ln_truncated_moment, ComplexityWindow};
use capsim::oracle::{exact_expectation, RationalProb};
use capsim::{
    avg_complexity, closed_forms, marginal_gains, truncated_moment, variety, window_stats, ModelParams,
    MomentOrder, PolicyChoice, State, WindowRadius,
};

fn params(rho: f64, r: WindowRadius) -> ModelParams {
    ModelParams::new(rho, r, 1, 0).unwrap()
}

fn radius() -> impl Strategy<Value = WindowRadius> {
    prop_oneof![Just(WindowRadius::Unbounded), (1u32..40).prop_map(WindowRadius::Bounded)]
}

#[test]
fn closed_form_agreement_and_growth_rates() {
    for rho in [0.25, 0.5, 0.75, 1.0] {
        let p = params(rho, WindowRadius::Unbounded);
        let mut prev = window_stats(State { n: 0, l: 0 }, &p).unwrap();
        for n in 1..=200u32 {
            let s = window_stats(State { n, l: n }, &p).unwrap();
            let cf = closed_forms(n, rho).unwrap();
            assert!((s.variety - cf.variety).abs() / cf.variety <= 1e-12);
            assert!((s.avg_complexity - cf.avg_complexity).abs() <= 1e-9);
            assert!((s.variety / prev.variety - (1.0 + rho)).abs() <= 1e-9);
            assert!((s.avg_complexity - prev.avg_complexity - rho / (1.0 + rho)).abs() <= 1e-9);
            prev = s;
        }
    }
}

/// With `l` fixed, complexity rises with `n` but never reaches `l`.
#[test]
fn coordination_limit_is_a_ceiling() {
    for rho in [0.25, 0.5, 0.75] {
        let p = params(rho, WindowRadius::Unbounded);
        for l in 1..=20u32 {
            let mut prev_c = f64::NEG_INFINITY;
            let mut prev_v = 0.0;
            for n in l..=2000u32 {
                let s = window_stats(State { n, l }, &p).unwrap();
                assert!(s.avg_complexity > prev_c, "rho={rho} l={l} n={n}");
                assert!(s.avg_complexity < f64::from(l));
                assert!(s.variety >= prev_v);
                prev_c = s.avg_complexity;
                prev_v = s.variety;
            }
        }
    }
}

#[test]
fn variety_grows_with_l_without_window() {
    for rho in [0.25, 0.5, 0.75] {
        let p = params(rho, WindowRadius::Unbounded);
        for n in [1u32, 7, 40, 300, 2000] {
            let mut prev = 0.0;
            for l in 0..=n.min(60) {
                let v = variety(State { n, l }, &p).unwrap();
                assert!(v >= prev);
                prev = v;
            }
        }
    }
}

#[test]
fn large_n_complexity_still_matches_closed_form() {
    for rho in [0.25, 0.5, 0.75, 1.0] {
        let p = params(rho, WindowRadius::Unbounded);
        for n in [1_000u32, 5_000, 10_000] {
            let s = window_stats(State { n, l: n }, &p).unwrap();
            assert!((s.avg_complexity - rho * f64::from(n) / (1.0 + rho)).abs() <= 1e-9);
            let expected = f64::from(n) * (1.0 + rho).ln();
            assert!((s.ln_variety - expected).abs() / expected <= 1e-13);
        }
    }
}

proptest! {
    #[test]
    fn complexity_stays_inside_window(n in 0u32..600, frac in 0.0f64..=1.0, rho in 0.01f64..=1.0, r in radius()) {
        let l = (f64::from(n) * frac).floor() as u32;
        let p = params(rho, r);
        let state = State { n, l };
        let w = ComplexityWindow::new(state, r);
        let c = avg_complexity(state, &p).unwrap();
        prop_assert!(f64::from(w.s_min) <= c && c <= f64::from(w.s_max));
        let ln_v = window_stats(state, &p).unwrap().ln_variety;
        prop_assert!(ln_v.is_finite());
    }

    #[test]
    fn variety_non_decreasing_in_n(n in 1u32..400, frac in 0.0f64..=1.0, rho in 0.05f64..=1.0, r in radius()) {
        let l = (f64::from(n) * frac).floor() as u32;
        let p = params(rho, r);
        let a = variety(State { n, l }, &p).unwrap();
        let b = variety(State { n: n + 1, l }, &p).unwrap();
        prop_assert!(b >= a * (1.0 - 1e-14));
    }

    #[test]
    fn kernel_matches_exact_rationals(n in 0u32..=30, frac in 0.0f64..=1.0, num in 1u32..=16, r in radius()) {
        let l = (f64::from(n) * frac).floor() as u32;
        let rho = RationalProb::new(num, 16u32).unwrap();
        let p = params(rho.to_f64(), r);
        let s = window_stats(State { n, l }, &p).unwrap();
        let e = exact_expectation(n, l, r, &rho).unwrap();
        let rel = |a: f64, b: f64| if a == b { 0.0 } else { (a - b).abs() / b.abs() };
        prop_assert!(rel(s.variety, e.variety_f64()) <= 1e-10);
        prop_assert!(rel(s.avg_complexity, e.avg_complexity_f64()) <= 1e-10);
    }

    #[test]
    fn moments_are_consistent(n in 0u32..300, a in 0.0f64..=1.0, b in 0.0f64..=1.0, rho in 0.05f64..=1.0) {
        let lo = (f64::from(n) * a.min(b)).floor() as u32;
        let hi = (f64::from(n) * a.max(b)).floor() as u32;
        let m0 = truncated_moment(n, lo, hi, rho, MomentOrder::Count).unwrap();
        let m1 = truncated_moment(n, lo, hi, rho, MomentOrder::Length).unwrap();
        prop_assert!(m1 >= f64::from(lo) * m0 * (1.0 - 1e-13));
        prop_assert!(m1 <= f64::from(hi) * m0 * (1.0 + 1e-13));
        let ln0 = ln_truncated_moment(n, lo, hi, rho, MomentOrder::Count).unwrap();
        prop_assert!((ln0.exp() - m0).abs() <= 1e-12 * m0);
    }

    #[test]
    fn gains_are_differences_of_complexities(n in 1u32..200, frac in 0.0f64..=1.0, rho in 0.05f64..=1.0, r in radius()) {
        let l = (f64::from(n) * frac).floor() as u32;
        let p = params(rho, r);
        let g = marginal_gains(State { n, l }, &p).unwrap();
        let here = avg_complexity(State { n, l }, &p).unwrap();
        prop_assert_eq!(g.gain_vertical, avg_complexity(State { n: n + 1, l }, &p).unwrap() - here);
        if l < n {
            prop_assert_eq!(g.gain_horizontal, Some(avg_complexity(State { n, l: l + 1 }, &p).unwrap() - here));
        } else {
            prop_assert_eq!(g.gain_horizontal, None);
        }
    }

    #[test]
    fn hump_report_ignores_low_tail(series in prop::collection::vec(0.0f64..100.0, 3..40), extra in prop::collection::vec(0.0f64..1.0, 0..10)) {
        let before = detect_hump_series(&series).unwrap();
        prop_assume!(before.found);
        let mut longer = series.clone();
        longer.extend(extra.iter().map(|x| x * before.variety_final * 0.999));
        let after = detect_hump_series(&longer).unwrap();
        prop_assert!(after.found);
        prop_assert_eq!(after.t_peak, before.t_peak);
        prop_assert_eq!(after.variety_peak, before.variety_peak);
    }

    #[test]
    fn full_window_incidence_equals_cumulative_share(bits in prop::collection::vec(any::<bool>(), 1..200)) {
        let choices: Vec<PolicyChoice> = bits
            .iter()
            .map(|&b| if b { PolicyChoice::Vertical } else { PolicyChoice::Horizontal })
            .collect();
        let s = incidence_from_choices(&choices, choices.len()).unwrap();
        let last = *s.cumulative_vertical.last().unwrap();
        prop_assert_eq!(*s.vertical_fraction.last().unwrap(), f64::from(last) / choices.len() as f64);
        prop_assert!(s.cumulative_vertical.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(s.vertical_fraction.iter().all(|f| (0.0..=1.0).contains(f)));
    }
}

#[test]
fn exact_route_agrees_with_closed_form_ratio() {
    // Full window: average complexity is rho n / (1 + rho), with no rounding at all.
    let rho = RationalProb::new(3, 4).unwrap();
    for n in 0..=40u32 {
        let e = exact_expectation(n, n, WindowRadius::Unbounded, &rho).unwrap();
        let want = rho.as_ratio() * BigRational::from_integer(n.into())
            / (BigRational::from_integer(1.into()) + rho.as_ratio());
        assert_eq!(e.avg_complexity, want);
    }
}
