//! Exact type-enumeration exponents for general discrete memoryless channels.
//!
//! The random coding exponent is a two-branch minimum. The A branch prices
//! the transmitted codeword drifting into the rejection-favoring set; the B
//! branch prices a competing codeword type pulling the alternative
//! likelihood above everything else, with populated types contributing their
//! multiplicity. Both branches need the clique function `s` (and its
//! indicator variant `t` for the low-rate detector): the cheapest mutual
//! information at which some competing type could break the quiet condition.
//!
//! `s` and `t` are computed through their duals: a line search over the
//! multiplier with an exact convex inner minimization over the
//! transportation polytope (closed 1-D parametrization for binary alphabets,
//! iterative proportional fitting beyond). The primal grid evaluations are
//! kept as independent oracles.

use crate::channel::{Dmc, InputDistribution};
use crate::composite::ChannelSet;
use crate::joint::{conditional_divergence, f_channel, JointType};
use crate::logdomain::{plnq, pos, xlnx};
use crate::optimize::{golden_min, scan_golden_max};
use crate::{Error, Result, FEAS_TOL};

use super::bsc;
use super::{Branch, ExponentQuery, ExponentResult, TypeGrid, Witness};

/// Default multiplier range for the `t` dual.
pub const T_LAMBDA_MAX: f64 = 50.0;

// ---------------------------------------------------------------------------
// inner convex minimization over the transportation polytope
// ---------------------------------------------------------------------------

/// min over Q with marginals (px, qy) and supp(Q) inside supp(W) of
/// I(Q) - lambda*f_W(Q). Returns (value, f_W at the minimizer), or None when
/// the constrained polytope is empty.
fn inner_min(lambda: f64, px: &[f64], qy: &[f64], w: &Dmc) -> Option<(f64, f64)> {
    if px.len() == 2 && qy.len() == 2 {
        inner_min_2x2(lambda, px, qy, w)
    } else {
        inner_min_ipf(lambda, px, qy, w)
    }
}

/// Binary case: the polytope is the segment t = Q(0,0) in [lo, hi]; zero
/// cells of W pin t. The objective is convex in t, so golden section is
/// exact.
fn inner_min_2x2(lambda: f64, px: &[f64], qy: &[f64], w: &Dmc) -> Option<(f64, f64)> {
    let (px0, qy0) = (px[0], qy[0]);
    let mut lo = (px0 + qy0 - 1.0).max(0.0);
    let mut hi = px0.min(qy0);
    if hi < lo - 1e-12 {
        return None;
    }
    // support pins: Q cell forced to zero when W(y|x) = 0
    let pins = [
        (w.prob(0, 0) == 0.0, 0.0),
        (w.prob(1, 0) == 0.0, px0),
        (w.prob(0, 1) == 0.0, qy0),
        (w.prob(1, 1) == 0.0, px0 + qy0 - 1.0),
    ];
    for (active, t) in pins {
        if active {
            if t < lo - 1e-12 || t > hi + 1e-12 {
                return None;
            }
            lo = lo.max(t);
            hi = hi.min(t);
            if hi < lo - 1e-12 {
                return None;
            }
        }
    }
    let cells = |t: f64| {
        [
            t.max(0.0),
            (px0 - t).max(0.0),
            (qy0 - t).max(0.0),
            (1.0 - px0 - qy0 + t).max(0.0),
        ]
    };
    let base = xlnx(px0) + xlnx(1.0 - px0) + xlnx(qy0) + xlnx(1.0 - qy0);
    let logw = [w.log_prob(0, 0), w.log_prob(1, 0), w.log_prob(0, 1), w.log_prob(1, 1)];
    let f_w = |t: f64| {
        let q = cells(t);
        let mut f = 0.0;
        for i in 0..4 {
            f += plnq(q[i], logw[i].exp());
        }
        f
    };
    let phi = |t: f64| {
        let q = cells(t);
        let info = q.iter().map(|&c| xlnx(c)).sum::<f64>() - base;
        let mut f = 0.0;
        for i in 0..4 {
            if q[i] > 0.0 {
                f += q[i] * logw[i];
            }
        }
        info.max(0.0) - lambda * f
    };
    if hi - lo < 1e-14 {
        let t = 0.5 * (lo + hi);
        return Some((phi(t), f_w(t)));
    }
    let (mut t_star, mut v_star) = golden_min(phi, lo, hi, 1e-11 * (hi - lo) + 1e-15);
    for t in [lo, hi] {
        let v = phi(t);
        if v < v_star {
            v_star = v;
            t_star = t;
        }
    }
    Some((v_star, f_w(t_star)))
}

/// General alphabets: iterative proportional fitting on the tilted kernel
/// px(x) qy(y) W(y|x)^lambda. Rows are normalized by their tilted maximum
/// before fitting (row scalings are absorbed by the fit), which keeps large
/// tilts out of the underflow range.
fn inner_min_ipf(lambda: f64, px: &[f64], qy: &[f64], w: &Dmc) -> Option<(f64, f64)> {
    let nx = px.len();
    let ny = qy.len();
    let mut kern = vec![0.0; nx * ny];
    for x in 0..nx {
        let row_max = (0..ny)
            .filter(|&y| qy[y] > 0.0)
            .map(|y| w.log_prob(y, x))
            .fold(f64::NEG_INFINITY, f64::max);
        if row_max == f64::NEG_INFINITY {
            continue;
        }
        for y in 0..ny {
            let lw = w.log_prob(y, x);
            if px[x] > 0.0 && qy[y] > 0.0 && lw > f64::NEG_INFINITY {
                kern[x * ny + y] = px[x] * qy[y] * (lambda * (lw - row_max)).exp();
            }
        }
    }
    for x in 0..nx {
        if px[x] > 0.0 && (0..ny).all(|y| kern[x * ny + y] == 0.0) {
            return None;
        }
    }
    for y in 0..ny {
        if qy[y] > 0.0 && (0..nx).all(|x| kern[x * ny + y] == 0.0) {
            return None;
        }
    }
    let mut q = kern;
    let mut residual = f64::INFINITY;
    for _ in 0..10_000 {
        for x in 0..nx {
            let s: f64 = q[x * ny..(x + 1) * ny].iter().sum();
            if s > 0.0 {
                let scale = px[x] / s;
                q[x * ny..(x + 1) * ny].iter_mut().for_each(|c| *c *= scale);
            }
        }
        residual = 0.0;
        for y in 0..ny {
            let s: f64 = (0..nx).map(|x| q[x * ny + y]).sum();
            residual = residual.max((s - qy[y]).abs());
        }
        if residual < 1e-13 {
            break;
        }
        for y in 0..ny {
            let s: f64 = (0..nx).map(|x| q[x * ny + y]).sum();
            if s > 0.0 {
                let scale = qy[y] / s;
                for x in 0..nx {
                    q[x * ny + y] *= scale;
                }
            }
        }
    }
    // An unreachable marginal (zero-pattern infeasibility) leaves a residual
    // on the order of the marginals themselves; strongly tilted but feasible
    // kernels merely converge slowly, and their near-projection is accurate
    // enough for the grid-level tolerances downstream.
    if residual > 1e-3 {
        return None;
    }
    let mut info = 0.0;
    let mut f = 0.0;
    for x in 0..nx {
        for y in 0..ny {
            let c = q[x * ny + y];
            if c > 0.0 {
                info += c * (c / (px[x] * qy[y])).ln();
                f += c * w.log_prob(y, x);
            }
        }
    }
    Some((info.max(0.0) - lambda * f, f))
}

// ---------------------------------------------------------------------------
// the clique functions s and t
// ---------------------------------------------------------------------------

/// Spread of the finite log transition probabilities of a channel.
fn log_prob_spread(w: &Dmc) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for x in 0..w.input_size() {
        for y in 0..w.output_size() {
            let lw = w.log_prob(y, x);
            if lw > f64::NEG_INFINITY {
                lo = lo.min(lw);
                hi = hi.max(lw);
            }
        }
    }
    (hi - lo).max(0.0)
}

/// Dual evaluation of
/// `s(qy, gamma) = min { I(Q) + [-alpha - f_W(Q) + gamma]_+ : Q_X = px, Q_Y = qy }`
/// as `max_{0<=lambda<=1}` of the inner convex minimum.
pub fn s_bold(qy: &[f64], gamma: f64, alpha: f64, w: &Dmc, px: &InputDistribution) -> f64 {
    let Some((at_zero, _)) = inner_min(0.0, px.probs(), qy, w) else {
        return f64::INFINITY;
    };
    if gamma == f64::NEG_INFINITY {
        return at_zero.max(0.0);
    }
    let g = |lambda: f64| {
        let (v, _) = inner_min(lambda, px.probs(), qy, w).expect("feasibility is lambda-free");
        lambda * (gamma - alpha) + v
    };
    let (_, best) = scan_golden_max(g, 0.0, 1.0, 17, 1e-6);
    best.max(at_zero).max(0.0)
}

/// Dual evaluation of
/// `t(qy, gamma) = min { I(Q) : Q_X = px, Q_Y = qy, -alpha - f_W(Q) + gamma <= 0 }`
/// as `max_{lambda>=0}` of the inner minimum, truncated at
/// [`T_LAMBDA_MAX`]. Returns +inf when no Q meets the constraint.
pub fn t_bold(qy: &[f64], gamma: f64, alpha: f64, w: &Dmc, px: &InputDistribution) -> f64 {
    let Some((at_zero, _)) = inner_min(0.0, px.probs(), qy, w) else {
        return f64::INFINITY;
    };
    if gamma == f64::NEG_INFINITY {
        return at_zero.max(0.0);
    }
    // Infeasible iff even the f_W-maximizing plan violates the constraint;
    // the probe tilt is capped so the tilted kernel stays representable.
    let spread = log_prob_spread(w);
    let probe = (T_LAMBDA_MAX * 4.0).min(600.0 / (spread + 1e-9));
    if let Some((_, f_at_max)) = inner_min(probe, px.probs(), qy, w) {
        if f_at_max < gamma - alpha - 1e-9 {
            return f64::INFINITY;
        }
    }
    let g = |lambda: f64| {
        let (v, _) = inner_min(lambda, px.probs(), qy, w).expect("feasibility is lambda-free");
        lambda * (gamma - alpha) + v
    };
    let (_, best) = scan_golden_max(g, 0.0, T_LAMBDA_MAX, 33, 1e-6);
    best.max(at_zero).max(0.0)
}

/// Primal grid oracle for [`s_bold`] on binary alphabets: the polytope
/// segment is scanned at resolution 1/k, plus the bracket's kink point.
pub fn s_bold_primal(
    qy: &[f64],
    gamma: f64,
    alpha: f64,
    w: &Dmc,
    px: &InputDistribution,
    k: usize,
) -> Result<f64> {
    primal_scan(qy, gamma, alpha, w, px, k, |info, f| info + pos(-alpha - f + gamma))
}

/// Primal grid oracle for [`t_bold`] on binary alphabets. The constraint
/// boundary is linear in the segment parameter, so the boundary point is
/// included exactly.
pub fn t_bold_primal(
    qy: &[f64],
    gamma: f64,
    alpha: f64,
    w: &Dmc,
    px: &InputDistribution,
    k: usize,
) -> Result<f64> {
    primal_scan(qy, gamma, alpha, w, px, k, |info, f| {
        if -alpha - f + gamma <= 1e-12 {
            info
        } else {
            f64::INFINITY
        }
    })
}

fn primal_scan<F: Fn(f64, f64) -> f64>(
    qy: &[f64],
    gamma: f64,
    alpha: f64,
    w: &Dmc,
    px: &InputDistribution,
    k: usize,
    objective: F,
) -> Result<f64> {
    if px.len() != 2 || qy.len() != 2 {
        return Err(Error::InvalidParameter(
            "primal grid oracle is implemented for binary alphabets".into(),
        ));
    }
    let (px0, qy0) = (px.prob(0), qy[0]);
    let mut lo = (px0 + qy0 - 1.0).max(0.0);
    let mut hi = px0.min(qy0);
    let pins = [
        (w.prob(0, 0) == 0.0, 0.0),
        (w.prob(1, 0) == 0.0, px0),
        (w.prob(0, 1) == 0.0, qy0),
        (w.prob(1, 1) == 0.0, px0 + qy0 - 1.0),
    ];
    for (active, t) in pins {
        if active {
            if t < lo - 1e-12 || t > hi + 1e-12 {
                return Ok(f64::INFINITY);
            }
            lo = lo.max(t);
            hi = hi.min(t);
        }
    }
    if hi < lo - 1e-12 {
        return Ok(f64::INFINITY);
    }
    let base = xlnx(px0) + xlnx(1.0 - px0) + xlnx(qy0) + xlnx(1.0 - qy0);
    let logw = [w.log_prob(0, 0), w.log_prob(1, 0), w.log_prob(0, 1), w.log_prob(1, 1)];
    let eval_f = |t: f64| -> Option<f64> {
        let q = [t, px0 - t, qy0 - t, 1.0 - px0 - qy0 + t].map(|c| c.max(0.0));
        let mut f = 0.0;
        for (c, lw) in q.iter().zip(logw) {
            if *c > 1e-13 && lw == f64::NEG_INFINITY {
                return None;
            }
            if *c > 0.0 {
                f += c * lw;
            }
        }
        Some(f)
    };
    let mut candidates: Vec<f64> = (0..=k).map(|i| lo + (hi - lo) * i as f64 / k as f64).collect();
    // where the constraint -alpha - f_W + gamma crosses zero; f_W is linear
    // on the segment
    if gamma.is_finite() && hi > lo {
        if let (Some(f_lo), Some(f_hi)) = (eval_f(lo), eval_f(hi)) {
            if (f_hi - f_lo).abs() > 1e-15 {
                let t_star = lo + (gamma - alpha - f_lo) * (hi - lo) / (f_hi - f_lo);
                if t_star > lo && t_star < hi {
                    candidates.push(t_star);
                }
            }
        }
    }
    let mut best = f64::INFINITY;
    for t in candidates {
        let Some(f) = eval_f(t) else { continue };
        let q = [t, px0 - t, qy0 - t, 1.0 - px0 - qy0 + t].map(|c| c.max(0.0));
        let info = (q.iter().map(|&c| xlnx(c)).sum::<f64>() - base).max(0.0);
        let val = objective(info, f);
        if val < best {
            best = val;
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// likelihood sides: a specific channel or a channel set
// ---------------------------------------------------------------------------

/// Which normalized log-likelihood enters the constraint sets: a single
/// channel's f_W, or the set-maximized f of a composite hypothesis.
#[derive(Clone, Copy)]
pub(crate) enum Side<'a> {
    Channel(&'a Dmc),
    Set(&'a ChannelSet),
}

impl<'a> Side<'a> {
    fn f(&self, q: &JointType) -> Result<f64> {
        match self {
            Side::Channel(w) => Ok(f_channel(w, q)?.value()),
            Side::Set(s) => Ok(s.f_set(q)?.value()),
        }
    }
}

/// s evaluated against a side: dual for single channels (f linear, minimax
/// applies), primal over the grid bucket for sets (f convex, so only the
/// primal is sound).
fn s_side(
    grid: &TypeGrid,
    marginal: &[f64],
    gamma: f64,
    alpha: f64,
    side: Side<'_>,
    f_values: &[f64],
    px: &InputDistribution,
) -> f64 {
    match side {
        Side::Channel(w) => s_bold(marginal, gamma, alpha, w, px),
        Side::Set(_) => {
            let mut best = f64::INFINITY;
            for &i in grid.bucket(marginal) {
                let f = f_values[i];
                if f == f64::NEG_INFINITY {
                    continue;
                }
                let v = grid.mutual_info(i) + pos(-alpha - f + gamma);
                if v < best {
                    best = v;
                }
            }
            best
        }
    }
}

fn t_side(
    grid: &TypeGrid,
    marginal: &[f64],
    gamma: f64,
    alpha: f64,
    side: Side<'_>,
    f_values: &[f64],
    px: &InputDistribution,
) -> f64 {
    match side {
        Side::Channel(w) => t_bold(marginal, gamma, alpha, w, px),
        Side::Set(_) => {
            let mut best = f64::INFINITY;
            for &i in grid.bucket(marginal) {
                let f = f_values[i];
                if f == f64::NEG_INFINITY || -alpha - f + gamma > 1e-12 {
                    continue;
                }
                let v = grid.mutual_info(i);
                if v < best {
                    best = v;
                }
            }
            best
        }
    }
}

// ---------------------------------------------------------------------------
// random coding exponents over the type grid
// ---------------------------------------------------------------------------

struct GridEval {
    f_w: Vec<f64>,
    f_v: Vec<f64>,
    div_w: Vec<f64>,
}

fn evaluate_grid(
    grid: &TypeGrid,
    w_side: Side<'_>,
    v_side: Side<'_>,
    w_specific: &Dmc,
    px: &InputDistribution,
) -> Result<GridEval> {
    let mut f_w = Vec::with_capacity(grid.len());
    let mut f_v = Vec::with_capacity(grid.len());
    let mut div_w = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let q = grid.joint(i);
        f_w.push(w_side.f(q)?);
        f_v.push(v_side.f(q)?);
        div_w.push(conditional_divergence(&q.conditional_y_given_x(), w_specific, px)?);
    }
    Ok(GridEval { f_w, f_v, div_w })
}

/// Shared implementation of the type-enumeration and low-rate random coding
/// exponents (they differ in the clique function and the multiplicity
/// relaxations).
fn rc_exponent_over_grid(
    rate: f64,
    alpha: f64,
    px: &InputDistribution,
    grid: &TypeGrid,
    w_side: Side<'_>,
    v_side: Side<'_>,
    w_specific: &Dmc,
    low_rate: bool,
) -> Result<ExponentResult> {
    let ev = evaluate_grid(grid, w_side, v_side, w_specific, px)?;
    let clique = |marginal: &[f64], gamma: f64| -> f64 {
        if low_rate {
            t_side(grid, marginal, gamma, alpha, w_side, &ev.f_w, px)
        } else {
            s_side(grid, marginal, gamma, alpha, w_side, &ev.f_w, px)
        }
    };

    // A branch
    let mut best_a = f64::INFINITY;
    let mut wit_a: Option<usize> = None;
    for i in 0..grid.len() {
        if ev.f_v[i] == f64::NEG_INFINITY {
            continue;
        }
        if ev.f_w[i] > -alpha + ev.f_v[i] + FEAS_TOL {
            continue;
        }
        if ev.div_w[i] < best_a
            && clique(grid.y_marginal(i), ev.f_v[i]) >= rate - FEAS_TOL
        {
            best_a = ev.div_w[i];
            wit_a = Some(i);
        }
    }

    // B branch; only candidates below the A branch can change the minimum
    let mut best_b = best_a;
    let mut wit_b: Option<(usize, usize)> = None;
    for j in 0..grid.len() {
        if ev.f_v[j] == f64::NEG_INFINITY {
            continue;
        }
        if ev.f_w[j] > -alpha + ev.f_v[j] + FEAS_TOL {
            continue;
        }
        let relax = if low_rate { 0.0 } else { pos(rate - grid.mutual_info(j)) };
        let base = pos(grid.mutual_info(j) - rate);
        if base >= best_b {
            continue;
        }
        let gamma = ev.f_v[j] + relax;
        let bound = ev.f_v[j] - alpha + relax;
        let mut quiet: Option<bool> = None;
        for &i in grid.bucket(grid.y_marginal(j)) {
            if ev.f_w[i] > bound + FEAS_TOL {
                continue;
            }
            let cand = ev.div_w[i] + base;
            if cand < best_b {
                let ok = *quiet
                    .get_or_insert_with(|| clique(grid.y_marginal(j), gamma) >= rate - FEAS_TOL);
                if ok {
                    best_b = cand;
                    wit_b = Some((i, j));
                }
            }
        }
    }

    let (value, branch, witness) = if best_a <= best_b {
        (
            best_a,
            if best_a.is_finite() { Branch::A } else { Branch::None },
            Witness::Joints {
                q_tilde: wit_a.map(|i| grid.joint(i).clone()),
                q_bar: None,
            },
        )
    } else {
        (
            best_b,
            Branch::B,
            Witness::Joints {
                q_tilde: wit_b.map(|(i, _)| grid.joint(i).clone()),
                q_bar: wit_b.map(|(_, j)| grid.joint(j).clone()),
            },
        )
    };
    Ok(ExponentResult { value, branch, witness })
}

/// Type-enumeration detection random coding exponent (general DMC grid
/// path). The misdetection exponent of the same detector is this value minus
/// alpha, and equals the same function at (-alpha, V, W).
pub fn exponent_te_rc(query: &ExponentQuery, grid: &TypeGrid) -> Result<ExponentResult> {
    rc_exponent_over_grid(
        query.rate,
        query.alpha,
        &query.px,
        grid,
        Side::Channel(&query.w),
        Side::Channel(&query.v),
        &query.w,
        false,
    )
}

/// Low-rate (GLRT) detection random coding exponent, general grid path.
/// The stated achievability holds for alpha >= 0; negative alpha is rejected
/// here, while trade-off sweeps evaluate the underlying formula directly.
pub fn exponent_lowrate_rc(query: &ExponentQuery, grid: &TypeGrid) -> Result<ExponentResult> {
    if query.alpha < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "low-rate exponent stated for alpha >= 0, got {}",
            query.alpha
        )));
    }
    lowrate_formula(query, grid)
}

/// The low-rate exponent formula without the alpha >= 0 domain restriction;
/// used for misdetection values and trade-off curves.
pub fn lowrate_formula(query: &ExponentQuery, grid: &TypeGrid) -> Result<ExponentResult> {
    rc_exponent_over_grid(
        query.rate,
        query.alpha,
        &query.px,
        grid,
        Side::Channel(&query.w),
        Side::Channel(&query.v),
        &query.w,
        true,
    )
}

// ---------------------------------------------------------------------------
// universal exponent over channel sets
// ---------------------------------------------------------------------------

fn contains_channel(set: &ChannelSet, ch: &Dmc) -> bool {
    match set {
        ChannelSet::Finite(members) => members.iter().any(|m| {
            m.input_size() == ch.input_size()
                && m.output_size() == ch.output_size()
                && m.rows().iter().zip(ch.rows()).all(|(a, b)| {
                    a.iter().zip(b).all(|(p, q)| (p - q).abs() <= 1e-9)
                })
        }),
        ChannelSet::BscInterval { lo, hi, .. } => {
            ch.as_bsc().is_some_and(|q| q >= lo - 1e-12 && q <= hi + 1e-12)
        }
    }
}

fn all_bsc(set: &ChannelSet) -> bool {
    match set {
        ChannelSet::Finite(members) => members.iter().all(|m| m.as_bsc().is_some()),
        ChannelSet::BscInterval { .. } => true,
    }
}

/// Universal random coding exponent: the type-enumeration exponent with the
/// per-channel log-likelihoods replaced by the set-maximized ones, while the
/// divergence term keeps the specific (true) channel.
#[allow(clippy::too_many_arguments)]
pub fn exponent_universal_rc(
    rate: f64,
    alpha: f64,
    px: &InputDistribution,
    w_set: &ChannelSet,
    v_set: &ChannelSet,
    specific_w: &Dmc,
    specific_v: &Dmc,
    grid: &TypeGrid,
) -> Result<ExponentResult> {
    if !contains_channel(w_set, specific_w) {
        return Err(Error::InvalidParameter("specific W is not a member of its set".into()));
    }
    if !contains_channel(v_set, specific_v) {
        return Err(Error::InvalidParameter("specific V is not a member of its set".into()));
    }
    if rate < 0.0 {
        return Err(Error::InvalidParameter(format!("negative rate {rate}")));
    }
    // singleton sets collapse to the pairwise exponent exactly
    if let (Some(w), Some(v)) = (w_set.as_singleton(), v_set.as_singleton()) {
        let query = ExponentQuery::new(rate, alpha, px.clone(), w, v)?;
        return exponent_te_rc(&query, grid);
    }
    let uniform_binary = px.len() == 2 && (px.prob(0) - 0.5).abs() < 1e-12;
    if uniform_binary && all_bsc(w_set) && all_bsc(v_set) {
        if let Some(qw) = specific_w.as_bsc() {
            return bsc::exponent_universal_rc_bsc(rate, alpha, w_set, v_set, qw, 1e-3);
        }
    }
    rc_exponent_over_grid(
        rate,
        alpha,
        px,
        grid,
        Side::Set(w_set),
        Side::Set(v_set),
        specific_w,
        false,
    )
}

// ---------------------------------------------------------------------------
// high-rate (output statistics) exponent
// ---------------------------------------------------------------------------

/// High-rate detection random coding exponent.
#[derive(Clone, Copy, Debug)]
pub struct HighRateResult {
    pub value: f64,
    pub mu: f64,
    /// Set when alpha fell outside [-D(V~||W~), D(W~||V~)] and the nearest
    /// endpoint was used instead.
    pub clamped: bool,
}

fn discrete_kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(&a, &b)| crate::logdomain::plnpq(a, b)).sum()
}

/// Exponent of the output-statistics detector: the divergence from the
/// tilted distribution Q_mu to W~, with mu chosen so that
/// D(Q_mu||W~) - D(Q_mu||V~) = -alpha.
pub fn exponent_highrate_rc(
    px: &InputDistribution,
    w: &Dmc,
    v: &Dmc,
    alpha: f64,
) -> Result<HighRateResult> {
    let wt = w.output_marginal(px)?;
    let vt = v.output_marginal(px)?;
    if wt.iter().zip(&vt).all(|(a, b)| (a - b).abs() < 1e-12) {
        return Ok(HighRateResult { value: 0.0, mu: 1.0, clamped: false });
    }
    let tilted = |mu: f64| -> Vec<f64> {
        let mut q: Vec<f64> = wt
            .iter()
            .zip(&vt)
            .map(|(&a, &b)| {
                if (a == 0.0 && mu > 0.0) || (b == 0.0 && mu < 1.0) {
                    0.0
                } else {
                    a.powf(mu) * b.powf(1.0 - mu)
                }
            })
            .collect();
        let s: f64 = q.iter().sum();
        q.iter_mut().for_each(|c| *c /= s);
        q
    };
    let balance = |mu: f64| -> f64 {
        let q = tilted(mu);
        discrete_kl(&q, &wt) - discrete_kl(&q, &vt)
    };
    let hi_end = balance(1.0); // -D(W~||V~)
    let lo_end = balance(0.0); // +D(V~||W~)
    if -alpha <= hi_end {
        return Ok(HighRateResult { value: 0.0, mu: 1.0, clamped: -alpha < hi_end - 1e-10 });
    }
    if -alpha >= lo_end {
        let q = tilted(0.0);
        return Ok(HighRateResult {
            value: discrete_kl(&q, &wt),
            mu: 0.0,
            clamped: -alpha > lo_end + 1e-10,
        });
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut mu = 0.5;
    for _ in 0..200 {
        mu = 0.5 * (lo + hi);
        let b = balance(mu);
        if (b + alpha).abs() <= 1e-10 {
            break;
        }
        // balance decreases in mu
        if b > -alpha {
            lo = mu;
        } else {
            hi = mu;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let q = tilted(mu);
    Ok(HighRateResult { value: discrete_kl(&q, &wt), mu, clamped: false })
}

// ---------------------------------------------------------------------------
// expurgated exponent
// ---------------------------------------------------------------------------

/// Chernoff distance matrix d_s(x, x~) = -log sum_y W^{1-s}(y|x) V^s(y|x~).
pub fn chernoff_distance_matrix(w: &Dmc, v: &Dmc, s: f64) -> Vec<Vec<f64>> {
    let nx = w.input_size();
    let ny = w.output_size();
    (0..nx)
        .map(|x| {
            (0..nx)
                .map(|xt| {
                    let mut sum = 0.0;
                    for y in 0..ny {
                        sum += w.prob(y, x).powf(1.0 - s) * v.prob(y, xt).powf(s);
                    }
                    if sum > 0.0 {
                        -sum.ln()
                    } else {
                        f64::INFINITY
                    }
                })
                .collect()
        })
        .collect()
}

/// Inner minimization of the expurgated bound at a fixed `s`:
/// min over pairings with both marginals px and I <= R of
/// E[d_s] + I - R. Returns (value, representative pairing weight).
pub(crate) fn te_ex_inner_grid(
    dmat: &[Vec<f64>],
    px: &InputDistribution,
    rate: f64,
    k: usize,
) -> (f64, f64) {
    // binary grid over the conditional P(X~|X); marginal matched to within
    // half a grid step
    let px0 = px.prob(0);
    let px1 = px.prob(1);
    let tol = 0.5 / k as f64;
    let mut best = f64::INFINITY;
    let mut best_q = f64::NAN;
    for i in 0..=k {
        let a = i as f64 / k as f64; // P(X~=1 | X=0)
        for j in 0..=k {
            let b = j as f64 / k as f64; // P(X~=0 | X=1)
            let p = [px0 * (1.0 - a), px0 * a, px1 * b, px1 * (1.0 - b)];
            let marg1 = p[1] + p[3];
            if (marg1 - px1).abs() > tol {
                continue;
            }
            let info = {
                let hx = xlnx(px0) + xlnx(px1);
                let hxt = xlnx(marg1) + xlnx(1.0 - marg1);
                (p.iter().map(|&c| xlnx(c)).sum::<f64>() - hx - hxt).max(0.0)
            };
            if info > rate + FEAS_TOL {
                continue;
            }
            let e_d = p[0] * dmat[0][0] + p[1] * dmat[0][1] + p[2] * dmat[1][0]
                + p[3] * dmat[1][1];
            let val = e_d + info - rate;
            if val < best {
                best = val;
                best_q = p[0] + p[3]; // probability the pair agrees
            }
        }
    }
    (best, best_q)
}

/// Inner minimization via the symmetric closed form (uniform binary input,
/// symmetric distance matrix): the agreement weight is a sigmoid in
/// (d_disagree - d_agree)/mu with mu >= 1 bisected to meet I = R.
pub(crate) fn te_ex_inner_symmetric(d_agree: f64, d_disagree: f64, rate: f64) -> (f64, f64, f64) {
    let ln2 = std::f64::consts::LN_2;
    let q_of_mu = |mu: f64| {
        let z = (d_disagree - d_agree) / mu;
        1.0 / (1.0 + (-z).exp())
    };
    let value = |q: f64| {
        (1.0 - q) * d_disagree + q * d_agree + ln2 - crate::channel::h_b(q) - rate
    };
    if rate <= 1e-14 {
        // only the independent pairing is admissible
        return (value(0.5), 0.5, f64::INFINITY);
    }
    let target = ln2 - rate;
    let q1 = q_of_mu(1.0);
    if crate::channel::h_b(q1) >= target - 1e-14 {
        return (value(q1), q1, 1.0);
    }
    let (mut lo, mut hi) = (1.0, 1e9);
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if crate::channel::h_b(q_of_mu(mid)) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * hi {
            break;
        }
    }
    let mu = 0.5 * (lo + hi);
    let q = q_of_mu(mu);
    (value(q), q, mu)
}

/// Inner minimization for larger input alphabets: iterative proportional
/// fitting on the kernel px(x) px(x~) exp(-d/mu) with mu >= 1 bisected so
/// the pairing information meets the rate constraint.
fn te_ex_inner_ipf(dmat: &[Vec<f64>], px: &InputDistribution, rate: f64) -> (f64, f64) {
    let nx = px.len();
    let solve = |mu: f64| -> (Vec<f64>, f64, f64) {
        let mut p = vec![0.0; nx * nx];
        for x in 0..nx {
            for xt in 0..nx {
                if px.prob(x) > 0.0 && px.prob(xt) > 0.0 && dmat[x][xt].is_finite() {
                    p[x * nx + xt] = px.prob(x) * px.prob(xt) * (-dmat[x][xt] / mu).exp();
                }
            }
        }
        for _ in 0..3000 {
            for x in 0..nx {
                let s: f64 = p[x * nx..(x + 1) * nx].iter().sum();
                if s > 0.0 {
                    let sc = px.prob(x) / s;
                    p[x * nx..(x + 1) * nx].iter_mut().for_each(|c| *c *= sc);
                }
            }
            let mut res: f64 = 0.0;
            for xt in 0..nx {
                let s: f64 = (0..nx).map(|x| p[x * nx + xt]).sum();
                res = res.max((s - px.prob(xt)).abs());
            }
            if res < 1e-13 {
                break;
            }
            for xt in 0..nx {
                let s: f64 = (0..nx).map(|x| p[x * nx + xt]).sum();
                if s > 0.0 {
                    let sc = px.prob(xt) / s;
                    for x in 0..nx {
                        p[x * nx + xt] *= sc;
                    }
                }
            }
        }
        let mut info = 0.0;
        let mut e_d = 0.0;
        for x in 0..nx {
            for xt in 0..nx {
                let c = p[x * nx + xt];
                if c > 0.0 {
                    info += c * (c / (px.prob(x) * px.prob(xt))).ln();
                    e_d += c * dmat[x][xt];
                }
            }
        }
        (p, info.max(0.0), e_d)
    };
    let (_, i1, d1) = solve(1.0);
    if i1 <= rate + FEAS_TOL {
        let agree: f64 = (0..nx).map(|x| solve(1.0).0[x * nx + x]).sum();
        return (d1 + i1 - rate, agree);
    }
    let (mut lo, mut hi) = (1.0, 1e7);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (_, i, _) = solve(mid);
        if i > rate {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 * hi {
            break;
        }
    }
    let (p, i, d) = solve(0.5 * (lo + hi));
    let agree: f64 = (0..nx).map(|x| p[x * nx + x]).sum();
    (d + i - rate, agree)
}

/// Type-enumeration detection expurgated exponent:
/// max over s in \[0,1\] of the inner pairing minimization.
pub fn exponent_te_ex(query: &ExponentQuery, s_steps: usize) -> Result<ExponentResult> {
    let inner = |s: f64| -> (f64, f64) {
        let dmat = chernoff_distance_matrix(&query.w, &query.v, s);
        let symmetric = query.px.len() == 2
            && (query.px.prob(0) - 0.5).abs() < 1e-12
            && (dmat[0][0] - dmat[1][1]).abs() < 1e-12
            && (dmat[0][1] - dmat[1][0]).abs() < 1e-12;
        if symmetric {
            let (v, q, _) = te_ex_inner_symmetric(dmat[0][0], dmat[0][1], query.rate);
            (v, q)
        } else if query.px.len() == 2 {
            te_ex_inner_grid(&dmat, &query.px, query.rate, 400)
        } else {
            te_ex_inner_ipf(&dmat, &query.px, query.rate)
        }
    };
    let objective = |s: f64| query.alpha * s + inner(s).0;
    let (s_star, value) = scan_golden_max(objective, 0.0, 1.0, s_steps.max(5), 1e-7);
    let (_, q_star) = inner(s_star);
    Ok(ExponentResult {
        value,
        branch: Branch::None,
        witness: Witness::Expurgated { s: s_star, q: q_star },
    })
}

// ---------------------------------------------------------------------------
// critical rate
// ---------------------------------------------------------------------------

/// Critical-rate components: below `r_cr` the low-rate detector's exponent
/// analysis coincides with the optimal detector's.
#[derive(Clone, Copy, Debug)]
pub struct CriticalRate {
    pub r_cr_a: f64,
    pub r_cr_b: f64,
    pub r_cr: f64,
}

/// Critical rate from the zero-rate witnesses: the A witness minimizes the
/// divergence over the rejection-favoring set alone; the B pair minimizes
/// divergence plus pairing information at zero rate.
pub fn critical_rate(
    px: &InputDistribution,
    w: &Dmc,
    v: &Dmc,
    alpha: f64,
    grid: &TypeGrid,
) -> Result<CriticalRate> {
    if let (Some(qw), Some(qv)) = (w.as_bsc(), v.as_bsc()) {
        if px.len() == 2 && (px.prob(0) - 0.5).abs() < 1e-12 {
            let pair = crate::channel::BinaryChannelPair::new(qw, qv)?;
            return Ok(bsc::critical_rate_bsc(&pair, alpha, 1e-3));
        }
    }
    let ev = evaluate_grid(grid, Side::Channel(w), Side::Channel(v), w, px)?;
    // A: argmin of D over J1 alone
    let mut best_a = f64::INFINITY;
    let mut wit_a = None;
    for i in 0..grid.len() {
        if ev.f_v[i] == f64::NEG_INFINITY {
            continue;
        }
        if ev.f_w[i] > -alpha + ev.f_v[i] + FEAS_TOL {
            continue;
        }
        if ev.div_w[i] < best_a {
            best_a = ev.div_w[i];
            wit_a = Some(i);
        }
    }
    let r_cr_a = match wit_a {
        Some(i) => s_bold(grid.y_marginal(i), ev.f_v[i], alpha, w, px),
        None => f64::INFINITY,
    };
    // B: argmin of D + I(Q_bar) over K1..K3 at R = 0
    let mut best_b = f64::INFINITY;
    let mut wit_b = None;
    for j in 0..grid.len() {
        if ev.f_v[j] == f64::NEG_INFINITY {
            continue;
        }
        if ev.f_w[j] > -alpha + ev.f_v[j] + FEAS_TOL {
            continue;
        }
        let bound = ev.f_v[j] - alpha;
        for &i in grid.bucket(grid.y_marginal(j)) {
            if ev.f_w[i] > bound + FEAS_TOL {
                continue;
            }
            let cand = ev.div_w[i] + grid.mutual_info(j);
            if cand < best_b {
                best_b = cand;
                wit_b = Some(j);
            }
        }
    }
    let r_cr_b = match wit_b {
        Some(j) => grid
            .mutual_info(j)
            .min(s_bold(grid.y_marginal(j), ev.f_v[j], alpha, w, px)),
        None => f64::INFINITY,
    };
    Ok(CriticalRate { r_cr_a, r_cr_b, r_cr: r_cr_a.min(r_cr_b) })
}
