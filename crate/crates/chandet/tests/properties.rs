//! Cross-module properties: branch monotonicity, fast-path versus
//! general-path agreement, witness feasibility, and the trade-off dominance
//! relations between detectors.

use std::f64::consts::LN_2;

use chandet::channel::{capacity, d_b, f_wb, h_b, BinaryChannelPair, InputDistribution};
use chandet::exponents::bsc::{
    exponent_lowrate_rc_bsc, exponent_te_rc_bsc, lowrate_formula_bsc, s_bsc,
};
use chandet::exponents::te::{critical_rate, exponent_te_rc};
use chandet::exponents::{Branch, ExponentQuery, TypeGrid, Witness};
use chandet::verify::{figure1_alphas, te_curve_bsc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn example_pair() -> BinaryChannelPair {
    BinaryChannelPair::new(0.1, 0.4).unwrap()
}

/// The rejection-favoring-transmitted-type branch alone, on the binary fast
/// path: min of D_B over the crossing set with the clique constraint.
fn branch_a_bsc(pair: &BinaryChannelPair, rate: f64, alpha: f64) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..=4000 {
        let qt = i as f64 / 4000.0;
        if f_wb(pair.w, qt) + alpha > f_wb(pair.v, qt) + 1e-9 {
            continue;
        }
        if s_bsc(f_wb(pair.v, qt), alpha, pair.w) < rate - 1e-9 {
            continue;
        }
        best = best.min(d_b(qt, pair.w));
    }
    best
}

#[test]
fn branch_a_nondecreasing_in_rate() {
    let pair = example_pair();
    for alpha in [0.0, 0.1] {
        let mut prev = 0.0;
        for i in 0..10 {
            let rate = i as f64 * 0.04;
            let e_a = branch_a_bsc(&pair, rate, alpha);
            assert!(e_a >= prev - 1e-9, "E_A dropped at R={rate}, alpha={alpha}");
            prev = e_a;
        }
    }
}

#[test]
fn fast_path_matches_general_grid_oracle() {
    let pair = example_pair();
    let px = InputDistribution::uniform(2);
    let grid = TypeGrid::new(&px, 2, 400).unwrap();
    let mut cases: Vec<(f64, f64)> = [-0.1, 0.0, 0.1].iter().map(|&a| (0.0, a)).collect();
    cases.push((0.5 * capacity(&px, &pair.w_channel()).unwrap(), 0.0));
    for (rate, alpha) in cases {
        let fast = exponent_te_rc_bsc(&pair, rate, alpha, 1e-3).unwrap().value;
        let q = ExponentQuery::new(
            rate,
            alpha,
            px.clone(),
            pair.w_channel(),
            pair.v_channel(),
        )
        .unwrap();
        let general = exponent_te_rc(&q, &grid).unwrap().value;
        assert!(
            (fast - general).abs() <= 2e-3,
            "R={rate} alpha={alpha}: fast {fast} vs general {general}"
        );
    }
}

#[test]
fn all_exponents_nonnegative_with_feasible_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..40 {
        let pair = BinaryChannelPair::new(
            rng.gen_range(0.05..0.45),
            rng.gen_range(0.05..0.45),
        )
        .unwrap();
        let rate = rng.gen_range(0.0..0.25);
        let alpha = rng.gen_range(-0.2..0.2);
        let res = exponent_te_rc_bsc(&pair, rate, alpha, 1e-3).unwrap();
        assert!(res.value >= -1e-12);
        if !res.value.is_finite() {
            continue;
        }
        // re-check the reported witnesses against their constraint sets
        match (res.branch, &res.witness) {
            (Branch::A, Witness::Crossovers { q_tilde, q_bar: None }) => {
                assert!(f_wb(pair.w, *q_tilde) + alpha <= f_wb(pair.v, *q_tilde) + 1e-6);
                assert!(s_bsc(f_wb(pair.v, *q_tilde), alpha, pair.w) >= rate - 1e-6);
                assert!((d_b(*q_tilde, pair.w) - res.value).abs() < 1e-9);
            }
            (Branch::B, Witness::Crossovers { q_tilde, q_bar: Some(q_bar) }) => {
                assert!(f_wb(pair.w, *q_bar) + alpha <= f_wb(pair.v, *q_bar) + 1e-6);
                let relax = (rate - (LN_2 - h_b(*q_bar))).max(0.0);
                assert!(
                    f_wb(pair.v, *q_bar) + relax >= alpha + f_wb(pair.w, *q_tilde) - 1e-6
                );
                assert!(
                    s_bsc(f_wb(pair.v, *q_bar) + relax, alpha, pair.w) >= rate - 1e-6
                );
                let objective =
                    d_b(*q_tilde, pair.w) + (LN_2 - h_b(*q_bar) - rate).max(0.0);
                assert!((objective - res.value).abs() < 1e-9);
            }
            other => panic!("unexpected branch/witness combination {other:?}"),
        }
    }
}

#[test]
fn lowrate_trade_off_never_beats_optimal_lagrangian() {
    // at matched alpha the two detectors need not be ordered exponent by
    // exponent, but the optimal rule maximizes min(E_FA, E_MD + alpha)
    let mut rng = ChaCha8Rng::seed_from_u64(555);
    let mut checked = 0;
    while checked < 25 {
        let pair = BinaryChannelPair::new(
            rng.gen_range(0.05..0.25),
            rng.gen_range(0.3..0.45),
        )
        .unwrap();
        let rate = rng.gen_range(0.0..0.3);
        let alpha = rng.gen_range(-0.2..0.2);
        let te_fa = exponent_te_rc_bsc(&pair, rate, alpha, 1e-3).unwrap().value;
        let te_md =
            exponent_te_rc_bsc(&pair.swapped(), rate, -alpha, 1e-3).unwrap().value;
        let lr_fa = lowrate_formula_bsc(&pair, rate, alpha, 1e-3).unwrap().value;
        let lr_md =
            lowrate_formula_bsc(&pair.swapped(), rate, -alpha, 1e-3).unwrap().value;
        if !(te_fa.is_finite() && te_md.is_finite()) {
            continue;
        }
        let optimal = te_fa.min(te_md + alpha);
        let simplified = lr_fa.min(lr_md + alpha);
        assert!(
            simplified <= optimal + 4e-3,
            "w={} v={} R={rate} alpha={alpha}: {simplified} > {optimal}",
            pair.w,
            pair.v
        );
        checked += 1;
    }
}

#[test]
fn lowrate_equals_te_below_witness_critical_rate() {
    let pair = example_pair();
    let px = InputDistribution::uniform(2);
    let grid = TypeGrid::new(&px, 2, 40).unwrap();
    let crit =
        critical_rate(&px, &pair.w_channel(), &pair.v_channel(), 0.0, &grid).unwrap();
    assert!(crit.r_cr.is_finite() && crit.r_cr >= 0.0);
    for frac in [0.25, 0.5, 0.75] {
        let rate = frac * crit.r_cr;
        for alpha in [0.0, 0.05] {
            let te = exponent_te_rc_bsc(&pair, rate, alpha, 1e-3).unwrap().value;
            let lr = exponent_lowrate_rc_bsc(&pair, rate, alpha, 1e-3).unwrap().value;
            assert!(
                (te - lr).abs() <= 2e-3,
                "R={rate} alpha={alpha}: te {te} vs lowrate {lr}"
            );
        }
    }
}

#[test]
fn zero_rate_lowrate_identical_to_te() {
    // at zero rate the two detectors solve the same minimization
    let pair = example_pair();
    for &alpha in &figure1_alphas() {
        if alpha < 0.0 {
            continue;
        }
        let te = exponent_te_rc_bsc(&pair, 0.0, alpha, 1e-3).unwrap().value;
        let lr = exponent_lowrate_rc_bsc(&pair, 0.0, alpha, 1e-3).unwrap().value;
        assert!((te - lr).abs() <= 1e-9, "alpha {alpha}: {te} vs {lr}");
    }
}

#[test]
fn tradeoff_curve_is_monotone() {
    let pair = example_pair();
    let curve = te_curve_bsc(&pair, 0.0, &figure1_alphas(), 1e-3).unwrap();
    let finite: Vec<_> = curve
        .iter()
        .filter(|p| p.e_fa.is_finite() && p.e_md.is_finite())
        .collect();
    assert!(finite.len() >= 9);
    for pair in finite.windows(2) {
        assert!(pair[1].e_fa >= pair[0].e_fa - 1e-9, "FA exponent not increasing in alpha");
        assert!(pair[1].e_md <= pair[0].e_md + 1e-9, "MD exponent not decreasing in alpha");
    }
}

#[test]
fn md_form_matches_fact_one() {
    // the misdetection exponent evaluated at (-alpha, swapped channels)
    // equals value - alpha on the active region
    let pair = example_pair();
    for alpha in [0.0, 0.05, 0.1, 0.15] {
        let fa = exponent_te_rc_bsc(&pair, 0.0, alpha, 1e-3).unwrap().value;
        let md = exponent_te_rc_bsc(&pair.swapped(), 0.0, -alpha, 1e-3).unwrap().value;
        assert!((fa - alpha - md).abs() <= 4e-3, "alpha {alpha}: fa {fa} md {md}");
    }
}
