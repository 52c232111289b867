//! Gallager/Forney-style achievable exponents.
//!
//! Two-parameter bounds that trade tightness for alphabet-independent
//! computation: everything reduces to scalar functions of (s, rho) and a
//! grid-plus-refinement maximization.

use crate::channel::{Dmc, InputDistribution};
use crate::{Error, Result};

use super::{Branch, ExponentQuery, ExponentResult, Witness};

/// E0'(s, rho) = -log sum_y (sum_x Px(x) W^{(1-s)/rho}(y|x) V^{s/rho}(y|x))^rho.
pub fn e0_prime(s: f64, rho: f64, px: &InputDistribution, w: &Dmc, v: &Dmc) -> f64 {
    debug_assert!(rho > 0.0);
    let mut total = 0.0;
    for y in 0..w.output_size() {
        let mut inner = 0.0;
        for x in 0..w.input_size() {
            inner += px.prob(x) * w.prob(y, x).powf((1.0 - s) / rho) * v.prob(y, x).powf(s / rho);
        }
        total += inner.powf(rho);
    }
    -total.ln()
}

/// E0''(s, rho) = -log sum_y (sum_x Px W^{(1-s)/rho})^rho (sum_x Px V^{s/rho})^rho.
pub fn e0_doubleprime(s: f64, rho: f64, px: &InputDistribution, w: &Dmc, v: &Dmc) -> f64 {
    debug_assert!(rho > 0.0);
    let mut total = 0.0;
    for y in 0..w.output_size() {
        let mut iw = 0.0;
        let mut iv = 0.0;
        for x in 0..w.input_size() {
            iw += px.prob(x) * w.prob(y, x).powf((1.0 - s) / rho);
            iv += px.prob(x) * v.prob(y, x).powf(s / rho);
        }
        total += iw.powf(rho) * iv.powf(rho);
    }
    -total.ln()
}

/// E_x'(s) = -log sum_x Px(x) sum_y W^{1-s}(y|x) V^s(y|x).
pub fn ex_prime(s: f64, px: &InputDistribution, w: &Dmc, v: &Dmc) -> f64 {
    let mut total = 0.0;
    for x in 0..w.input_size() {
        let mut inner = 0.0;
        for y in 0..w.output_size() {
            inner += w.prob(y, x).powf(1.0 - s) * v.prob(y, x).powf(s);
        }
        total += px.prob(x) * inner;
    }
    -total.ln()
}

/// E_x''(s) = -log sum_y (sum_x Px W^{1-s}(y|x)) (sum_x Px V^s(y|x)).
pub fn ex_doubleprime(s: f64, px: &InputDistribution, w: &Dmc, v: &Dmc) -> f64 {
    let mut total = 0.0;
    for y in 0..w.output_size() {
        let mut iw = 0.0;
        let mut iv = 0.0;
        for x in 0..w.input_size() {
            iw += px.prob(x) * w.prob(y, x).powf(1.0 - s);
            iv += px.prob(x) * v.prob(y, x).powf(s);
        }
        total += iw * iv;
    }
    -total.ln()
}

/// Maximizes `f` over the unit square by a grid with local 10x refinement.
/// Ties keep the lexicographically first point.
fn grid_max_unit_square<F: Fn(f64, f64) -> f64>(
    f: &F,
    steps: usize,
    rounds: usize,
) -> ((f64, f64), f64) {
    let mut best = f64::NEG_INFINITY;
    let mut at = (0.0, 0.0);
    let mut window = ((0.0f64, 1.0f64), (0.0f64, 1.0f64));
    let mut n = steps.max(2);
    for round in 0..=rounds {
        let ((alo, ahi), (blo, bhi)) = window;
        for i in 0..=n {
            let a = alo + (ahi - alo) * i as f64 / n as f64;
            for j in 0..=n {
                let b = blo + (bhi - blo) * j as f64 / n as f64;
                let v = f(a, b);
                if v > best {
                    best = v;
                    at = (a, b);
                }
            }
        }
        if round == rounds {
            break;
        }
        let da = (window.0 .1 - window.0 .0) / n as f64;
        let db = (window.1 .1 - window.1 .0) / n as f64;
        window = (
            ((at.0 - da).max(0.0), (at.0 + da).min(1.0)),
            ((at.1 - db).max(0.0), (at.1 + db).min(1.0)),
        );
        n = 20;
    }
    (at, best)
}

/// Gallager/Forney detection random coding exponent:
/// max over s in \[0,1\], rho in \[max(s,1-s), 1\] of
/// min { alpha s + E0' - (rho-1)R, alpha s + E0'' - (2 rho - 1)R }.
pub fn exponent_gf_rc(
    query: &ExponentQuery,
    s_steps: usize,
    rho_steps: usize,
) -> Result<ExponentResult> {
    if query.rate < 0.0 {
        return Err(Error::InvalidParameter(format!("negative rate {}", query.rate)));
    }
    let objective = |s: f64, t: f64| {
        let rho_lo = s.max(1.0 - s);
        let rho = rho_lo + t * (1.0 - rho_lo);
        let a = query.alpha * s + e0_prime(s, rho, &query.px, &query.w, &query.v)
            - (rho - 1.0) * query.rate;
        let b = query.alpha * s + e0_doubleprime(s, rho, &query.px, &query.w, &query.v)
            - (2.0 * rho - 1.0) * query.rate;
        a.min(b)
    };
    let steps = s_steps.max(rho_steps).max(2);
    let ((s, t), value) = grid_max_unit_square(&objective, steps, 3);
    let rho = s.max(1.0 - s) + t * (1.0 - s.max(1.0 - s));
    Ok(ExponentResult { value, branch: Branch::None, witness: Witness::Gallager { s, rho } })
}

/// Gallager/Forney detection expurgated exponent:
/// sup over s in \[0,1\], rho >= 1 of
/// min { s alpha + E_x'(s), s alpha + E_x''(s) - rho R }.
pub fn exponent_gf_ex(
    query: &ExponentQuery,
    s_steps: usize,
    rho_max: f64,
) -> Result<ExponentResult> {
    if query.rate < 0.0 {
        return Err(Error::InvalidParameter(format!("negative rate {}", query.rate)));
    }
    if rho_max < 1.0 {
        return Err(Error::InvalidParameter(format!("rho_max {rho_max} below 1")));
    }
    let objective = |s: f64, t: f64| {
        let rho = 1.0 + t * (rho_max - 1.0);
        let a = s * query.alpha + ex_prime(s, &query.px, &query.w, &query.v);
        let b = s * query.alpha + ex_doubleprime(s, &query.px, &query.w, &query.v)
            - rho * query.rate;
        a.min(b)
    };
    let ((s, t), value) = grid_max_unit_square(&objective, s_steps.max(2), 3);
    let rho = 1.0 + t * (rho_max - 1.0);
    Ok(ExponentResult { value, branch: Branch::None, witness: Witness::Gallager { s, rho } })
}
