//! Closed-form fast paths for pairs of binary symmetric channels under a
//! uniform input distribution.
//!
//! By symmetry the optimizing joint types are themselves symmetric, so every
//! minimization collapses to one or two crossover probabilities. The inner
//! multiplier line of the clique function has the closed form
//! `q*(lambda) = w^lambda / (w^lambda + (1-w)^lambda)`.

use std::f64::consts::LN_2;

use crate::channel::{d_b, f_wb, h_b, rho, BinaryChannelPair};
use crate::composite::ChannelSet;
use crate::logdomain::pos;
use crate::optimize::scan_golden_max;
use crate::{Error, Result, FEAS_TOL};

use super::te::{chernoff_distance_matrix, te_ex_inner_symmetric, CriticalRate, T_LAMBDA_MAX};
use super::{Branch, ExponentResult, Witness};

/// Default crossover grid step for the fast paths.
pub const DEFAULT_Q_STEP: f64 = 1e-3;
const REFINE_ROUNDS: usize = 3;

/// Binary clique function `s`: dual line search with the closed-form tilted
/// crossover, at uniform output marginal.
pub fn s_bsc(gamma: f64, alpha: f64, w: f64) -> f64 {
    if gamma == f64::NEG_INFINITY {
        return 0.0;
    }
    let rw = rho(w);
    let g = |lambda: f64| {
        let q = 1.0 / (1.0 + (lambda * rw).exp());
        LN_2 - h_b(q) + lambda * (-alpha + gamma - f_wb(w, q))
    };
    let (_, best) = scan_golden_max(g, 0.0, 1.0, 17, 1e-6);
    best.max(0.0)
}

/// Primal 1-D grid oracle for [`s_bsc`].
pub fn s_bsc_primal(gamma: f64, alpha: f64, w: f64, k: usize) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..=k {
        let q = i as f64 / k as f64;
        let v = LN_2 - h_b(q) + pos(-alpha - f_wb(w, q) + gamma);
        if v < best {
            best = v;
        }
    }
    best
}

/// Binary clique function `t`: minimum information subject to the likelihood
/// constraint; +inf when no crossover satisfies it.
pub fn t_bsc(gamma: f64, alpha: f64, w: f64) -> f64 {
    if gamma == f64::NEG_INFINITY {
        return 0.0;
    }
    match t_bsc_interval(gamma, alpha, w) {
        None => f64::INFINITY,
        Some((lo, hi)) => LN_2 - h_b(0.5f64.clamp(lo, hi)),
    }
}

/// Feasible crossover interval of the `t` constraint f_{w,B}(q) >= gamma - alpha.
fn t_bsc_interval(gamma: f64, alpha: f64, w: f64) -> Option<(f64, f64)> {
    let rw = rho(w);
    let c = gamma - alpha;
    if rw.abs() < 1e-15 {
        return if (1.0 - w).ln() >= c - 1e-12 { Some((0.0, 1.0)) } else { None };
    }
    let bound = ((1.0 - w).ln() - c) / rw;
    if rw > 0.0 {
        if bound < -1e-12 {
            None
        } else {
            Some((0.0, bound.min(1.0)))
        }
    } else if bound > 1.0 + 1e-12 {
        None
    } else {
        Some((bound.max(0.0), 1.0))
    }
}

/// Dual form of [`t_bsc`] (multiplier truncated at [`T_LAMBDA_MAX`]); kept
/// as the line-search counterpart to the closed-form primal.
pub fn t_bsc_dual(gamma: f64, alpha: f64, w: f64) -> f64 {
    if gamma == f64::NEG_INFINITY {
        return 0.0;
    }
    if t_bsc_interval(gamma, alpha, w).is_none() {
        return f64::INFINITY;
    }
    let rw = rho(w);
    let g = |lambda: f64| {
        let q = 1.0 / (1.0 + (lambda * rw).exp());
        LN_2 - h_b(q) + lambda * (-alpha + gamma - f_wb(w, q))
    };
    let (_, best) = scan_golden_max(g, 0.0, T_LAMBDA_MAX, 33, 1e-6);
    best.max(0.0)
}

struct BinaryRcProblem {
    w: f64,
    v: f64,
    rate: f64,
    alpha: f64,
    low_rate: bool,
}

impl BinaryRcProblem {
    fn clique(&self, gamma: f64) -> f64 {
        if self.low_rate {
            t_bsc(gamma, self.alpha, self.w)
        } else {
            s_bsc(gamma, self.alpha, self.w)
        }
    }

    fn j1(&self, q_tilde: f64) -> bool {
        f_wb(self.w, q_tilde) + self.alpha <= f_wb(self.v, q_tilde) + FEAS_TOL
    }

    /// A-branch pass over a crossover window.
    fn e_a_pass(&self, lo: f64, hi: f64, step: f64, best: &mut f64, wit: &mut f64) {
        let n = (((hi - lo) / step).round() as usize).max(1);
        for i in 0..=n {
            let qt = (lo + step * i as f64).min(hi);
            if !self.j1(qt) {
                continue;
            }
            let d = d_b(qt, self.w);
            if d < *best
                && self.clique(f_wb(self.v, qt)) >= self.rate - FEAS_TOL
            {
                *best = d;
                *wit = qt;
            }
        }
    }

    /// B-branch pass over a (q_tilde, q_bar) window.
    #[allow(clippy::too_many_arguments)]
    fn e_b_pass(
        &self,
        t_window: (f64, f64),
        b_window: (f64, f64),
        step: f64,
        best: &mut f64,
        wit: &mut (f64, f64),
    ) {
        let nt = ((((t_window.1 - t_window.0) / step).round() as usize).max(1), t_window);
        let nb = ((((b_window.1 - b_window.0) / step).round() as usize).max(1), b_window);
        for j in 0..=nb.0 {
            let qb = (nb.1 .0 + step * j as f64).min(nb.1 .1);
            // K2: the competing type itself prefers the alternative
            if f_wb(self.w, qb) + self.alpha > f_wb(self.v, qb) + FEAS_TOL {
                continue;
            }
            let info_b = LN_2 - h_b(qb);
            let relax = if self.low_rate { 0.0 } else { pos(self.rate - info_b) };
            let base = pos(info_b - self.rate);
            if base >= *best {
                continue;
            }
            let gamma = f_wb(self.v, qb) + relax;
            // K3 bound on f_{w,B}(q_tilde)
            let bound = f_wb(self.v, qb) - self.alpha + relax;
            let mut quiet: Option<bool> = None;
            for i in 0..=nt.0 {
                let qt = (nt.1 .0 + step * i as f64).min(nt.1 .1);
                if f_wb(self.w, qt) > bound + FEAS_TOL {
                    continue;
                }
                let cand = d_b(qt, self.w) + base;
                if cand < *best {
                    let ok = *quiet
                        .get_or_insert_with(|| self.clique(gamma) >= self.rate - FEAS_TOL);
                    if !ok {
                        break;
                    }
                    *best = cand;
                    *wit = (qt, qb);
                }
            }
        }
    }

    fn solve(&self, step: f64) -> ExponentResult {
        let mut best_a = f64::INFINITY;
        let mut wit_a = f64::NAN;
        let mut s = step;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for round in 0..=REFINE_ROUNDS {
            self.e_a_pass(lo, hi, s, &mut best_a, &mut wit_a);
            if round == REFINE_ROUNDS || !best_a.is_finite() {
                break;
            }
            lo = (wit_a - s).max(0.0);
            hi = (wit_a + s).min(1.0);
            s /= 10.0;
        }

        let mut best_b = f64::INFINITY;
        let mut wit_b = (f64::NAN, f64::NAN);
        let mut s = step;
        let (mut tw, mut bw) = ((0.0f64, 1.0f64), (0.0f64, 1.0f64));
        for round in 0..=REFINE_ROUNDS {
            self.e_b_pass(tw, bw, s, &mut best_b, &mut wit_b);
            if round == REFINE_ROUNDS || !best_b.is_finite() {
                break;
            }
            tw = ((wit_b.0 - s).max(0.0), (wit_b.0 + s).min(1.0));
            bw = ((wit_b.1 - s).max(0.0), (wit_b.1 + s).min(1.0));
            s /= 10.0;
        }

        if best_a <= best_b {
            ExponentResult {
                value: best_a,
                branch: if best_a.is_finite() { Branch::A } else { Branch::None },
                witness: Witness::Crossovers { q_tilde: wit_a, q_bar: None },
            }
        } else {
            ExponentResult {
                value: best_b,
                branch: Branch::B,
                witness: Witness::Crossovers { q_tilde: wit_b.0, q_bar: Some(wit_b.1) },
            }
        }
    }
}

/// Type-enumeration random coding exponent, binary fast path.
pub fn exponent_te_rc_bsc(
    pair: &BinaryChannelPair,
    rate: f64,
    alpha: f64,
    q_step: f64,
) -> Result<ExponentResult> {
    if rate < 0.0 {
        return Err(Error::InvalidParameter(format!("negative rate {rate}")));
    }
    Ok(BinaryRcProblem { w: pair.w, v: pair.v, rate, alpha, low_rate: false }.solve(q_step))
}

/// Low-rate detector exponent, binary fast path. The achievability theorem
/// is stated for alpha >= 0.
pub fn exponent_lowrate_rc_bsc(
    pair: &BinaryChannelPair,
    rate: f64,
    alpha: f64,
    q_step: f64,
) -> Result<ExponentResult> {
    if alpha < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "low-rate exponent stated for alpha >= 0, got {alpha}"
        )));
    }
    lowrate_formula_bsc(pair, rate, alpha, q_step)
}

/// Low-rate exponent formula without the sign restriction (misdetection and
/// trade-off evaluations need alpha < 0).
pub fn lowrate_formula_bsc(
    pair: &BinaryChannelPair,
    rate: f64,
    alpha: f64,
    q_step: f64,
) -> Result<ExponentResult> {
    if rate < 0.0 {
        return Err(Error::InvalidParameter(format!("negative rate {rate}")));
    }
    Ok(BinaryRcProblem { w: pair.w, v: pair.v, rate, alpha, low_rate: true }.solve(q_step))
}

/// Expurgated exponent, binary fast path with the closed-form pairing
/// weight.
pub fn exponent_te_ex_bsc(pair: &BinaryChannelPair, rate: f64, alpha: f64) -> Result<ExponentResult> {
    if rate < 0.0 {
        return Err(Error::InvalidParameter(format!("negative rate {rate}")));
    }
    let w = pair.w_channel();
    let v = pair.v_channel();
    let inner = |s: f64| {
        let dmat = chernoff_distance_matrix(&w, &v, s);
        te_ex_inner_symmetric(dmat[0][0], dmat[0][1], rate)
    };
    let (s_star, value) = scan_golden_max(|s| alpha * s + inner(s).0, 0.0, 1.0, 33, 1e-7);
    let (_, q_star, _) = inner(s_star);
    Ok(ExponentResult {
        value,
        branch: Branch::None,
        witness: Witness::Expurgated { s: s_star, q: q_star },
    })
}

/// Critical rate from the zero-rate witnesses, binary fast path.
pub fn critical_rate_bsc(pair: &BinaryChannelPair, alpha: f64, q_step: f64) -> CriticalRate {
    let problem = BinaryRcProblem { w: pair.w, v: pair.v, rate: 0.0, alpha, low_rate: false };
    // A witness: minimize the divergence over J1 alone
    let mut best_a = f64::INFINITY;
    let mut q_a = f64::NAN;
    let mut s = q_step;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for round in 0..=REFINE_ROUNDS {
        let n = (((hi - lo) / s).round() as usize).max(1);
        for i in 0..=n {
            let qt = (lo + s * i as f64).min(hi);
            if problem.j1(qt) {
                let d = d_b(qt, pair.w);
                if d < best_a {
                    best_a = d;
                    q_a = qt;
                }
            }
        }
        if round == REFINE_ROUNDS || !best_a.is_finite() {
            break;
        }
        lo = (q_a - s).max(0.0);
        hi = (q_a + s).min(1.0);
        s /= 10.0;
    }
    let r_cr_a = if q_a.is_nan() {
        f64::INFINITY
    } else {
        s_bsc(f_wb(pair.v, q_a), alpha, pair.w)
    };

    // B witnesses: minimize D + I(q_bar) at zero rate over K2 and K3
    let mut best_b = f64::INFINITY;
    let mut q_b = f64::NAN;
    let mut s = q_step;
    let (mut tw, mut bw) = ((0.0f64, 1.0f64), (0.0f64, 1.0f64));
    let mut wit_t = f64::NAN;
    for round in 0..=REFINE_ROUNDS {
        let nt = (((tw.1 - tw.0) / s).round() as usize).max(1);
        let nb = (((bw.1 - bw.0) / s).round() as usize).max(1);
        for j in 0..=nb {
            let qb = (bw.0 + s * j as f64).min(bw.1);
            if f_wb(pair.w, qb) + alpha > f_wb(pair.v, qb) + FEAS_TOL {
                continue;
            }
            let info_b = LN_2 - h_b(qb);
            if info_b >= best_b {
                continue;
            }
            let bound = f_wb(pair.v, qb) - alpha;
            for i in 0..=nt {
                let qt = (tw.0 + s * i as f64).min(tw.1);
                if f_wb(pair.w, qt) > bound + FEAS_TOL {
                    continue;
                }
                let cand = d_b(qt, pair.w) + info_b;
                if cand < best_b {
                    best_b = cand;
                    q_b = qb;
                    wit_t = qt;
                }
            }
        }
        if round == REFINE_ROUNDS || !best_b.is_finite() {
            break;
        }
        tw = ((wit_t - s).max(0.0), (wit_t + s).min(1.0));
        bw = ((q_b - s).max(0.0), (q_b + s).min(1.0));
        s /= 10.0;
    }
    let r_cr_b = if q_b.is_nan() {
        f64::INFINITY
    } else {
        (LN_2 - h_b(q_b)).min(s_bsc(f_wb(pair.v, q_b), alpha, pair.w))
    };

    CriticalRate { r_cr_a, r_cr_b, r_cr: r_cr_a.min(r_cr_b) }
}

/// Universal random coding exponent for BSC-shaped channel sets under
/// uniform input: the symmetric reduction applies with the set-maximized
/// binary log-likelihoods, and the clique function is evaluated by a primal
/// crossover scan (the set-maximized likelihood is convex, so the multiplier
/// dual does not apply).
pub fn exponent_universal_rc_bsc(
    rate: f64,
    alpha: f64,
    w_set: &ChannelSet,
    v_set: &ChannelSet,
    specific_w: f64,
    q_step: f64,
) -> Result<ExponentResult> {
    let fw = |q: f64| w_set.f_set_crossover(q).expect("BSC-shaped set");
    let fv = |q: f64| v_set.f_set_crossover(q).expect("BSC-shaped set");
    let clique = |gamma: f64| -> f64 {
        let k = 1000;
        let mut best = f64::INFINITY;
        let mut wit = 0.0;
        let mut lo = 0.0;
        let mut hi = 1.0;
        let mut step = 1.0 / k as f64;
        for round in 0..=2 {
            let n = (((hi - lo) / step).round() as usize).max(1);
            for i in 0..=n {
                let q = (lo + step * i as f64).min(hi);
                let v = LN_2 - h_b(q) + pos(-alpha - fw(q) + gamma);
                if v < best {
                    best = v;
                    wit = q;
                }
            }
            if round == 2 {
                break;
            }
            lo = (wit - step).max(0.0);
            hi = (wit + step).min(1.0);
            step /= 10.0;
        }
        best
    };

    // A branch
    let mut best_a = f64::INFINITY;
    let mut wit_a = f64::NAN;
    let mut s = q_step;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for round in 0..=REFINE_ROUNDS {
        let n = (((hi - lo) / s).round() as usize).max(1);
        for i in 0..=n {
            let qt = (lo + s * i as f64).min(hi);
            if fw(qt) + alpha > fv(qt) + FEAS_TOL {
                continue;
            }
            let d = d_b(qt, specific_w);
            if d < best_a && clique(fv(qt)) >= rate - FEAS_TOL {
                best_a = d;
                wit_a = qt;
            }
        }
        if round == REFINE_ROUNDS || !best_a.is_finite() {
            break;
        }
        lo = (wit_a - s).max(0.0);
        hi = (wit_a + s).min(1.0);
        s /= 10.0;
    }

    // B branch
    let mut best_b = f64::INFINITY;
    let mut wit_b = (f64::NAN, f64::NAN);
    let mut s = q_step;
    let (mut tw, mut bw) = ((0.0f64, 1.0f64), (0.0f64, 1.0f64));
    for round in 0..=REFINE_ROUNDS {
        let nt = (((tw.1 - tw.0) / s).round() as usize).max(1);
        let nb = (((bw.1 - bw.0) / s).round() as usize).max(1);
        for j in 0..=nb {
            let qb = (bw.0 + s * j as f64).min(bw.1);
            if fw(qb) + alpha > fv(qb) + FEAS_TOL {
                continue;
            }
            let info_b = LN_2 - h_b(qb);
            let relax = pos(rate - info_b);
            let base = pos(info_b - rate);
            if base >= best_b {
                continue;
            }
            let gamma = fv(qb) + relax;
            let bound = fv(qb) - alpha + relax;
            let mut quiet: Option<bool> = None;
            for i in 0..=nt {
                let qt = (tw.0 + s * i as f64).min(tw.1);
                if fw(qt) > bound + FEAS_TOL {
                    continue;
                }
                let cand = d_b(qt, specific_w) + base;
                if cand < best_b {
                    let ok =
                        *quiet.get_or_insert_with(|| clique(gamma) >= rate - FEAS_TOL);
                    if !ok {
                        break;
                    }
                    best_b = cand;
                    wit_b = (qt, qb);
                }
            }
        }
        if round == REFINE_ROUNDS || !best_b.is_finite() {
            break;
        }
        tw = ((wit_b.0 - s).max(0.0), (wit_b.0 + s).min(1.0));
        bw = ((wit_b.1 - s).max(0.0), (wit_b.1 + s).min(1.0));
        s /= 10.0;
    }

    let result = if best_a <= best_b {
        ExponentResult {
            value: best_a,
            branch: if best_a.is_finite() { Branch::A } else { Branch::None },
            witness: Witness::Crossovers { q_tilde: wit_a, q_bar: None },
        }
    } else {
        ExponentResult {
            value: best_b,
            branch: Branch::B,
            witness: Witness::Crossovers { q_tilde: wit_b.0, q_bar: Some(wit_b.1) },
        }
    };
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fig_pair() -> BinaryChannelPair {
        BinaryChannelPair::new(0.1, 0.4).unwrap()
    }

    #[test]
    fn s_bsc_dual_vs_primal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let w = rng.gen_range(0.05..0.95);
            let alpha = rng.gen_range(-0.3..0.3);
            let gamma = rng.gen_range(-1.5..-0.05);
            let d = s_bsc(gamma, alpha, w);
            let p = s_bsc_primal(gamma, alpha, w, 4000);
            assert!((d - p).abs() < 5e-4, "w={w} a={alpha} g={gamma}: {d} vs {p}");
        }
    }

    #[test]
    fn t_bsc_closed_form_vs_dual() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let w = rng.gen_range(0.05..0.95);
            let alpha = rng.gen_range(-0.3..0.3);
            let gamma = rng.gen_range(-1.5..-0.05);
            let closed = t_bsc(gamma, alpha, w);
            let dual = t_bsc_dual(gamma, alpha, w);
            if closed.is_infinite() {
                assert!(dual.is_infinite());
            } else {
                // the truncated multiplier can undershoot slightly near the
                // feasibility boundary
                assert!(dual <= closed + 1e-6);
                assert!(closed - dual < 2e-2, "{closed} vs {dual}");
            }
        }
    }

    #[test]
    fn te_rc_reference_point() {
        // R = 0, alpha = 0 for the (0.1, 0.4) pair: the A branch attains
        // D_B at the likelihood crossover 0.2262946
        let r = exponent_te_rc_bsc(&fig_pair(), 0.0, 0.0, 1e-3).unwrap();
        assert!((r.value - 0.0678235).abs() < 2e-4, "{}", r.value);
        assert_eq!(r.branch, Branch::A);
        if let Witness::Crossovers { q_tilde, .. } = r.witness {
            assert!((q_tilde - 0.2262946).abs() < 2e-3);
        } else {
            panic!("unexpected witness kind");
        }
    }

    #[test]
    fn te_rc_trivial_zeros() {
        let equal = BinaryChannelPair::new(0.3, 0.3).unwrap();
        let r = exponent_te_rc_bsc(&equal, 0.0, 0.0, 1e-3).unwrap();
        assert!(r.value.abs() < 1e-9);
        let r = exponent_te_rc_bsc(&fig_pair(), 0.2, -50.0, 1e-3).unwrap();
        assert!(r.value.abs() < 1e-9);
        let r = exponent_lowrate_rc_bsc(&equal, 0.05, 0.0, 1e-3).unwrap();
        assert!(r.value.abs() < 1e-9);
    }

    #[test]
    fn lowrate_equals_te_at_zero_rate() {
        for alpha in [0.0, 0.1, 0.3] {
            let a = exponent_te_rc_bsc(&fig_pair(), 0.0, alpha, 1e-3).unwrap();
            let b = exponent_lowrate_rc_bsc(&fig_pair(), 0.0, alpha, 1e-3).unwrap();
            assert!((a.value - b.value).abs() < 1e-9, "alpha {alpha}");
        }
    }

    #[test]
    fn lowrate_rejects_negative_alpha_but_formula_works() {
        assert!(exponent_lowrate_rc_bsc(&fig_pair(), 0.1, -0.1, 1e-3).is_err());
        let r = lowrate_formula_bsc(&fig_pair(), 0.1, -0.1, 1e-3).unwrap();
        assert!(r.value.is_finite());
    }

    #[test]
    fn te_ex_beats_te_rc_at_zero_rate() {
        let rc = exponent_te_rc_bsc(&fig_pair(), 0.0, 0.0, 1e-3).unwrap();
        let ex = exponent_te_ex_bsc(&fig_pair(), 0.0, 0.0).unwrap();
        assert!(ex.value > rc.value + 0.02, "ex {} rc {}", ex.value, rc.value);
        // frozen from the closed form at s = 1/2 with q = 1/2:
        // (d_s(0,1) + d_s(0,0))/2 = 0.117926, and the s-optimum is at least it
        assert!(ex.value >= 0.117926 - 1e-6);
    }

    #[test]
    fn te_ex_equal_channels_closed_form() {
        // with W = V at zero rate the pairing is forced independent and the
        // value is the self-distance term: max_s (d_s(0,1) + d_s(0,0))/2,
        // attained at s = 1/2 by symmetry, where d(0,0) = 0
        let equal = BinaryChannelPair::new(0.25, 0.25).unwrap();
        let ex = exponent_te_ex_bsc(&equal, 0.0, 0.0).unwrap();
        let expect = -(2.0 * (0.25f64 * 0.75).sqrt()).ln() / 2.0;
        assert!((ex.value - expect).abs() < 1e-9, "{} vs {expect}", ex.value);
        if let Witness::Expurgated { s, q } = ex.witness {
            assert!((s - 0.5).abs() < 1e-4);
            assert!((q - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn critical_rate_components_finite_for_fig_pair() {
        let c = critical_rate_bsc(&fig_pair(), 0.0, 1e-3);
        assert!(c.r_cr_a.is_finite() && c.r_cr_b.is_finite());
        assert!(c.r_cr <= c.r_cr_a && c.r_cr <= c.r_cr_b);
        // the A component sits at the zero-rate witness: s at the
        // crossover boundary, about 0.1584 nats
        assert!((c.r_cr_a - 0.1584).abs() < 2e-3, "{}", c.r_cr_a);
    }

    #[test]
    fn universal_pair_dominated_by_pairwise_curve() {
        // the channel-unaware detector trades false alarms against
        // misdetections differently at the same alpha, so the comparison is
        // between trade-off points: the pair-aware curve must dominate the
        // universal point (no smaller FA exponent at the universal point's
        // MD exponent)
        let w_set = ChannelSet::bsc_interval(0.05, 0.15, 64).unwrap();
        let v_set = ChannelSet::bsc_interval(0.35, 0.45, 64).unwrap();
        let uni_fa = exponent_universal_rc_bsc(0.0, 0.0, &w_set, &v_set, 0.1, 1e-3).unwrap();
        let uni_md = exponent_universal_rc_bsc(0.0, 0.0, &v_set, &w_set, 0.4, 1e-3).unwrap();
        assert!(uni_fa.value > 0.0 && uni_md.value > 0.0);
        // walk the pairwise curve to the matched MD exponent
        let pair = fig_pair();
        let mut best_fa_at_matched_md = f64::NEG_INFINITY;
        for i in 0..=60 {
            let alpha = -0.15 + 0.005 * i as f64;
            let fa = exponent_te_rc_bsc(&pair, 0.0, alpha, 1e-3).unwrap().value;
            let md = exponent_te_rc_bsc(&pair.swapped(), 0.0, -alpha, 1e-3).unwrap().value;
            if md >= uni_md.value - 2e-3 && fa > best_fa_at_matched_md {
                best_fa_at_matched_md = fa;
            }
        }
        assert!(
            best_fa_at_matched_md >= uni_fa.value - 2e-3,
            "pairwise curve {} below universal point {} at matched MD",
            best_fa_at_matched_md,
            uni_fa.value
        );
    }

    #[test]
    fn universal_nested_sets_monotone() {
        let w_set = ChannelSet::bsc_interval(0.08, 0.12, 64).unwrap();
        let mut prev = f64::INFINITY;
        for (vlo, vhi) in [(0.38, 0.42), (0.33, 0.45), (0.28, 0.48)] {
            let v_set = ChannelSet::bsc_interval(vlo, vhi, 64).unwrap();
            let r = exponent_universal_rc_bsc(0.0, 0.0, &w_set, &v_set, 0.1, 2e-3).unwrap();
            assert!(r.value <= prev + 1e-6, "enlarging V raised the exponent");
            prev = r.value;
        }
    }
}
