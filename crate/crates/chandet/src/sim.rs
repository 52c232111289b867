//! Exact and Monte Carlo evaluation of detection/decoding error probabilities.
//!
//! Exact evaluation enumerates the whole output space (capped); Monte Carlo
//! uses counter-based per-trial random streams so parallel and serial runs
//! tally identically.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{Dmc, InputDistribution};
use crate::detectors::{Codebook, Decision, DetectorRule};
use crate::{Error, Result};

/// Default cap on exact-enumeration outcomes (|Y|^n).
pub const DEFAULT_ENUM_CAP: u64 = 1 << 24;

/// Random code ensemble description.
#[derive(Clone, Debug)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub px: InputDistribution,
    pub n: usize,
    /// Rate in nats per symbol; the codebook has ceil(e^{nR}) codewords.
    pub rate: f64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnsembleKind {
    Iid,
    FixedComposition,
}

impl EnsembleSpec {
    /// M = ceil(e^{nR}), snapping values within 1e-9 of an integer so that
    /// rates like (log 2)/2 at n = 8 give exactly 16 codewords.
    pub fn num_codewords(&self) -> Result<usize> {
        let nr = self.n as f64 * self.rate;
        if nr > 40.0 {
            return Err(Error::InvalidParameter(format!(
                "rate {} at n {} needs more than e^40 codewords",
                self.rate, self.n
            )));
        }
        let x = nr.exp();
        let r = x.round();
        let m = if (x - r).abs() <= 1e-9 * r.max(1.0) { r } else { x.ceil() };
        Ok((m as usize).max(1))
    }

    /// Integer composition nearest to n*Px (largest remainders, ties toward
    /// the earlier coordinate). Errors when a supported symbol gets no slots.
    pub fn composition(&self) -> Result<Vec<usize>> {
        let n = self.n;
        let k = self.px.len();
        let ideal: Vec<f64> = (0..k).map(|x| n as f64 * self.px.prob(x)).collect();
        let mut comp: Vec<usize> = ideal.iter().map(|&t| t.floor() as usize).collect();
        let assigned: usize = comp.iter().sum();
        let mut order: Vec<usize> = (0..k).collect();
        // stable sort keeps earlier coordinates first on equal remainders
        order.sort_by(|&a, &b| {
            let ra = ideal[a] - ideal[a].floor();
            let rb = ideal[b] - ideal[b].floor();
            rb.partial_cmp(&ra).unwrap()
        });
        for &x in order.iter().take(n - assigned) {
            comp[x] += 1;
        }
        for x in 0..k {
            if self.px.prob(x) > 0.0 && comp[x] == 0 {
                return Err(Error::CompositionInfeasible(format!(
                    "n = {n} gives no slots to symbol {x} with Px = {}",
                    self.px.prob(x)
                )));
            }
        }
        Ok(comp)
    }
}

/// Draws a codebook from the ensemble using the supplied random stream.
pub fn draw_codebook<R: Rng>(spec: &EnsembleSpec, rng: &mut R) -> Result<Codebook> {
    let m = spec.num_codewords()?;
    let k = spec.px.len();
    let codewords = match spec.kind {
        EnsembleKind::Iid => (0..m)
            .map(|_| (0..spec.n).map(|_| sample_index(rng, spec.px.probs())).collect())
            .collect(),
        EnsembleKind::FixedComposition => {
            let comp = spec.composition()?;
            let mut base = Vec::with_capacity(spec.n);
            for (x, &c) in comp.iter().enumerate() {
                base.extend(std::iter::repeat(x).take(c));
            }
            (0..m)
                .map(|_| {
                    let mut cw = base.clone();
                    // Fisher-Yates: uniform over arrangements of the multiset
                    for i in (1..cw.len()).rev() {
                        let j = rng.gen_range(0..=i);
                        cw.swap(i, j);
                    }
                    cw
                })
                .collect()
        }
    };
    Codebook::new(codewords, k)
}

/// The codebook drawn from the spec's dedicated stream 0; this is the code
/// that non-fresh Monte Carlo runs reuse across trials.
pub fn draw_shared_codebook(spec: &EnsembleSpec) -> Result<Codebook> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(0);
    draw_codebook(spec, &mut rng)
}

fn sample_index<R: Rng>(rng: &mut R, probs: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// False-alarm, misdetection, inclusive- and exclusive-error probabilities.
#[derive(Clone, Copy, Debug)]
pub struct ErrorProbabilities {
    pub p_fa: f64,
    pub p_md: f64,
    pub p_ie: f64,
    pub p_ee: f64,
}

/// A Monte Carlo estimate with its binomial standard error.
#[derive(Clone, Copy, Debug)]
pub struct ProbabilityEstimate {
    pub mean: f64,
    pub trials: u64,
    pub stderr: f64,
}

impl ProbabilityEstimate {
    fn from_count(count: u64, trials: u64) -> Self {
        let mean = count as f64 / trials as f64;
        ProbabilityEstimate {
            mean,
            trials,
            stderr: (mean * (1.0 - mean) / trials as f64).sqrt(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MonteCarloEstimates {
    pub fa: ProbabilityEstimate,
    pub md: ProbabilityEstimate,
    pub ie: ProbabilityEstimate,
}

/// Exact error probabilities by full enumeration of the output space.
pub fn exact_error_probabilities(
    cb: &Codebook,
    rule: &DetectorRule,
    w: &Dmc,
    v: &Dmc,
) -> Result<ErrorProbabilities> {
    exact_error_probabilities_capped(cb, rule, w, v, DEFAULT_ENUM_CAP)
}

pub fn exact_error_probabilities_capped(
    cb: &Codebook,
    rule: &DetectorRule,
    w: &Dmc,
    v: &Dmc,
    cap: u64,
) -> Result<ErrorProbabilities> {
    let per = exact_probabilities_multi(cb, rule, &[w.clone()], &[v.clone()], cap)?;
    Ok(ErrorProbabilities {
        p_fa: per.fa[0],
        p_md: per.md[0],
        p_ie: per.ie[0],
        p_ee: (per.ie[0] - per.fa[0]).max(0.0),
    })
}

pub(crate) struct PerChannelProbabilities {
    pub fa: Vec<f64>,
    pub md: Vec<f64>,
    pub ie: Vec<f64>,
}

/// One enumeration pass evaluating several candidate true channels against
/// the fixed partition induced by `rule`.
///
/// The output space splits into fixed index ranges processed in parallel and
/// reduced in range order, so results do not depend on the thread count. The
/// inclusive error is accumulated as FA mass plus wrong-decode mass, so
/// `ie >= fa` holds exactly in floating point.
pub(crate) fn exact_probabilities_multi(
    cb: &Codebook,
    rule: &DetectorRule,
    w_channels: &[Dmc],
    v_channels: &[Dmc],
    cap: u64,
) -> Result<PerChannelProbabilities> {
    let n = cb.blocklength();
    let ny = w_channels
        .first()
        .map(|c| c.output_size())
        .or_else(|| v_channels.first().map(|c| c.output_size()))
        .ok_or(Error::EmptyChannelSet)?;
    for c in w_channels.iter().chain(v_channels) {
        if c.output_size() != ny || c.input_size() < cb.input_size() {
            return Err(Error::DimensionMismatch("channel shapes in enumeration".into()));
        }
    }
    let outcomes = (ny as u128).pow(n as u32);
    if outcomes > cap as u128 {
        return Err(Error::EnumerationCapExceeded { needed: outcomes, cap });
    }
    let total = outcomes as u64;
    const RANGE: u64 = 1 << 12;
    let starts: Vec<u64> = (0..total).step_by(RANGE as usize).collect();
    let partials: Vec<(Vec<f64>, Vec<f64>, Vec<f64>)> = starts
        .par_iter()
        .map(|&start| enumerate_range(cb, rule, w_channels, v_channels, ny, start, (start + RANGE).min(total)))
        .collect::<Result<_>>()?;
    let mut fa = vec![0.0; w_channels.len()];
    let mut ee = vec![0.0; w_channels.len()];
    let mut md = vec![0.0; v_channels.len()];
    for (pfa, pee, pmd) in partials {
        for (a, b) in fa.iter_mut().zip(&pfa) {
            *a += b;
        }
        for (a, b) in ee.iter_mut().zip(&pee) {
            *a += b;
        }
        for (a, b) in md.iter_mut().zip(&pmd) {
            *a += b;
        }
    }
    let ie = fa.iter().zip(&ee).map(|(a, b)| a + b).collect();
    Ok(PerChannelProbabilities { fa, md, ie })
}

fn enumerate_range(
    cb: &Codebook,
    rule: &DetectorRule,
    w_channels: &[Dmc],
    v_channels: &[Dmc],
    ny: usize,
    start: u64,
    end: u64,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let n = cb.blocklength();
    let minv = 1.0 / cb.size() as f64;
    // base-ny digits, least significant first
    let mut y = vec![0usize; n];
    let mut rem = start;
    for slot in y.iter_mut() {
        *slot = (rem % ny as u64) as usize;
        rem /= ny as u64;
    }
    let mut fa = vec![0.0; w_channels.len()];
    let mut ee = vec![0.0; w_channels.len()];
    let mut md = vec![0.0; v_channels.len()];
    for _ in start..end {
        match rule.decide(cb, &y)? {
            Decision::Reject => {
                for (i, wch) in w_channels.iter().enumerate() {
                    let mut s = 0.0;
                    for cw in cb.codewords() {
                        s += likelihood(wch, cw, &y);
                    }
                    fa[i] += minv * s;
                }
            }
            Decision::Decode(d) => {
                for (i, wch) in w_channels.iter().enumerate() {
                    let mut s = 0.0;
                    for (mm, cw) in cb.codewords().iter().enumerate() {
                        if mm != d {
                            s += likelihood(wch, cw, &y);
                        }
                    }
                    ee[i] += minv * s;
                }
                for (i, vch) in v_channels.iter().enumerate() {
                    let mut s = 0.0;
                    for cw in cb.codewords() {
                        s += likelihood(vch, cw, &y);
                    }
                    md[i] += minv * s;
                }
            }
        }
        let mut i = 0;
        while i < n {
            y[i] += 1;
            if y[i] < ny {
                break;
            }
            y[i] = 0;
            i += 1;
        }
    }
    Ok((fa, ee, md))
}

fn likelihood(ch: &Dmc, x_seq: &[usize], y_seq: &[usize]) -> f64 {
    x_seq.iter().zip(y_seq).map(|(&x, &y)| ch.prob(y, x)).product()
}

/// The detection Lagrangian `P_FA + e^{-n alpha} P_MD` of the rule's
/// partition, evaluated exactly.
pub fn lagrangian(
    cb: &Codebook,
    rule: &DetectorRule,
    w: &Dmc,
    v: &Dmc,
    alpha: f64,
) -> Result<f64> {
    let p = exact_error_probabilities(cb, rule, w, v)?;
    Ok(p.p_fa + (-(cb.blocklength() as f64) * alpha).exp() * p.p_md)
}

/// Monte Carlo estimation of FA, MD and IE probabilities.
///
/// Each trial gets its own ChaCha stream keyed by the trial index, so results
/// are bit-identical regardless of thread count. With
/// `fresh_code_per_trial`, every trial draws a new codebook (the ensemble
/// average); otherwise a single codebook is drawn from stream 0 and reused.
pub fn monte_carlo_estimate(
    spec: &EnsembleSpec,
    rule: &DetectorRule,
    w: &Dmc,
    v: &Dmc,
    trials: u64,
    fresh_code_per_trial: bool,
) -> Result<MonteCarloEstimates> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial".into()));
    }
    let shared = if fresh_code_per_trial { None } else { Some(draw_shared_codebook(spec)?) };
    let counts = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(u64, u64, u64)> {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(t + 1);
            let cb = match &shared {
                Some(cb) => cb.clone(),
                None => draw_codebook(spec, &mut rng)?,
            };
            let m = rng.gen_range(0..cb.size());
            let xw = cb.codeword(m);
            let yw: Vec<usize> =
                xw.iter().map(|&x| sample_index(&mut rng, &w.rows()[x])).collect();
            let dw = rule.decide(&cb, &yw)?;
            let fa = dw.is_reject() as u64;
            let ie = (dw != Decision::Decode(m)) as u64;
            let yv: Vec<usize> =
                xw.iter().map(|&x| sample_index(&mut rng, &v.rows()[x])).collect();
            let dv = rule.decide(&cb, &yv)?;
            let md = !dv.is_reject() as u64;
            Ok((fa, md, ie))
        })
        .try_reduce(|| (0, 0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2)))?;
    Ok(MonteCarloEstimates {
        fa: ProbabilityEstimate::from_count(counts.0, trials),
        md: ProbabilityEstimate::from_count(counts.1, trials),
        ie: ProbabilityEstimate::from_count(counts.2, trials),
    })
}

/// Least-squares slope of -log(p) against n.
#[derive(Clone, Copy, Debug)]
pub struct ExponentFit {
    pub slope: f64,
    pub used: usize,
    pub dropped: usize,
}

/// Fits an empirical exponent to (blocklength, probability) points. Points
/// with p <= 0 carry no log and are dropped; at least two must survive.
pub fn empirical_exponent(points: &[(usize, f64)]) -> Result<ExponentFit> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, p)| p > 0.0 && p <= 1.0)
        .map(|&(n, p)| (n as f64, -p.ln()))
        .collect();
    let dropped = points.len() - usable.len();
    if usable.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} usable points after dropping {dropped}",
            usable.len()
        )));
    }
    let n_mean = usable.iter().map(|p| p.0).sum::<f64>() / usable.len() as f64;
    let y_mean = usable.iter().map(|p| p.1).sum::<f64>() / usable.len() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (n, y) in &usable {
        num += (n - n_mean) * (y - y_mean);
        den += (n - n_mean) * (n - n_mean);
    }
    if den == 0.0 {
        return Err(Error::InsufficientData("all points share one blocklength".into()));
    }
    Ok(ExponentFit { slope: num / den, used: usable.len(), dropped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composite::ChannelSet;

    fn spec_fc(n: usize, rate: f64, seed: u64) -> EnsembleSpec {
        EnsembleSpec {
            kind: EnsembleKind::FixedComposition,
            px: InputDistribution::uniform(2),
            n,
            rate,
            seed,
        }
    }

    fn small_rule(alpha: f64) -> (Codebook, DetectorRule, Dmc, Dmc) {
        let w = Dmc::bsc(0.1).unwrap();
        let v = Dmc::bsc(0.4).unwrap();
        let cb = Codebook::new(vec![vec![0, 0], vec![1, 1]], 2).unwrap();
        (cb, DetectorRule::Asymptotic { w: w.clone(), v: v.clone(), alpha }, w, v)
    }

    #[test]
    fn codebook_count_rounding() {
        assert_eq!(spec_fc(4, 0.0, 0).num_codewords().unwrap(), 1);
        // ceil(e^{8 * 0.5 ln 2}) = 16, not 17 from rounding noise
        assert_eq!(spec_fc(8, 0.5 * std::f64::consts::LN_2, 0).num_codewords().unwrap(), 16);
        assert_eq!(spec_fc(3, 0.4, 0).num_codewords().unwrap(), 4); // e^{1.2} = 3.32
    }

    #[test]
    fn fixed_composition_balanced() {
        let spec = spec_fc(4, 0.3, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cb = draw_codebook(&spec, &mut rng).unwrap();
        for cw in cb.codewords() {
            assert_eq!(cw.iter().filter(|&&x| x == 0).count(), 2);
        }
    }

    #[test]
    fn iid_draw_matches_input_distribution() {
        let spec = EnsembleSpec {
            kind: EnsembleKind::Iid,
            px: InputDistribution::new(vec![0.2, 0.8]).unwrap(),
            n: 4000,
            rate: 0.0,
            seed: 11,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cb = draw_codebook(&spec, &mut rng).unwrap();
        assert_eq!(cb.size(), 1);
        let ones = cb.codeword(0).iter().filter(|&&x| x == 1).count() as f64;
        let freq = ones / 4000.0;
        // three sigma of a Bernoulli(0.8) mean over 4000 draws
        assert!((freq - 0.8).abs() < 3.0 * (0.8f64 * 0.2 / 4000.0).sqrt(), "{freq}");
    }

    #[test]
    fn composition_infeasible_when_support_starved() {
        let spec = EnsembleSpec {
            kind: EnsembleKind::FixedComposition,
            px: InputDistribution::new(vec![0.25; 4]).unwrap(),
            n: 2,
            rate: 0.0,
            seed: 0,
        };
        assert!(matches!(spec.composition(), Err(Error::CompositionInfeasible(_))));
    }

    #[test]
    fn exact_hand_enumeration_n2() {
        let (cb, rule, w, v) = small_rule(0.0);
        let p = exact_error_probabilities(&cb, &rule, &w, &v).unwrap();
        // rejection region {01, 10}: P_FA = 0.18, P_MD = 0.52, P_IE = 0.19
        assert!((p.p_fa - 0.18).abs() < 1e-12);
        assert!((p.p_md - 0.52).abs() < 1e-12);
        assert!((p.p_ie - 0.19).abs() < 1e-12);
        assert!((p.p_ee - 0.01).abs() < 1e-12);
    }

    #[test]
    fn exact_extreme_alphas() {
        let (cb, _, w, v) = small_rule(0.0);
        let always = DetectorRule::Asymptotic { w: w.clone(), v: v.clone(), alpha: -50.0 };
        let p = exact_error_probabilities(&cb, &always, &w, &v).unwrap();
        assert_eq!((p.p_fa, p.p_md, p.p_ie), (1.0, 0.0, 1.0));
        let never = DetectorRule::Asymptotic { w: w.clone(), v: v.clone(), alpha: 50.0 };
        let p = exact_error_probabilities(&cb, &never, &w, &v).unwrap();
        assert_eq!(p.p_fa, 0.0);
        assert_eq!(p.p_md, 1.0);
        // IE reduces to the ordinary ML error probability; ties at y = 01
        // and y = 10 resolve to message 1, so message 2 also errs there:
        // (1/2)(0.01) + (1/2)(0.01 + 0.09 + 0.09) = 0.10
        assert!((p.p_ie - 0.10).abs() < 1e-12);
    }

    #[test]
    fn enumeration_cap_enforced() {
        let (cb, rule, w, v) = small_rule(0.0);
        let err = exact_error_probabilities_capped(&cb, &rule, &w, &v, 2).unwrap_err();
        assert!(matches!(err, Error::EnumerationCapExceeded { .. }));
    }

    #[test]
    fn lagrangian_extremes() {
        let (cb, _, w, v) = small_rule(0.0);
        let always = DetectorRule::Asymptotic { w: w.clone(), v: v.clone(), alpha: -50.0 };
        assert!((lagrangian(&cb, &always, &w, &v, 0.3).unwrap() - 1.0).abs() < 1e-12);
        let never = DetectorRule::Asymptotic { w: w.clone(), v: v.clone(), alpha: 50.0 };
        let expect = (-2.0 * 0.3f64).exp();
        assert!((lagrangian(&cb, &never, &w, &v, 0.3).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn error_probability_invariants_all_rules() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..25 {
            let n = rng.gen_range(2..=4);
            let m = rng.gen_range(1..=3);
            let cws: Vec<Vec<usize>> =
                (0..m).map(|_| (0..n).map(|_| rng.gen_range(0..2)).collect()).collect();
            let cb = Codebook::new(cws, 2).unwrap();
            let qw = rng.gen_range(0.05..0.45);
            let qv = rng.gen_range(0.05..0.45);
            let w = Dmc::bsc(qw).unwrap();
            let v = Dmc::bsc(qv).unwrap();
            let alpha = rng.gen_range(-0.4..0.4);
            let px = InputDistribution::uniform(2);
            let rules = vec![
                DetectorRule::optimal_rates(w.clone(), v.clone(), alpha, 0.0, n),
                DetectorRule::Asymptotic { w: w.clone(), v: v.clone(), alpha },
                DetectorRule::TypeEnum { w: w.clone(), v: v.clone(), alpha, beta: 0.0 },
                DetectorRule::LowRate { w: w.clone(), v: v.clone(), alpha },
                DetectorRule::HighRate { px: px.clone(), w: w.clone(), v: v.clone(), alpha },
                DetectorRule::Universal {
                    w_set: ChannelSet::finite(vec![w.clone()]).unwrap(),
                    v_set: ChannelSet::finite(vec![v.clone()]).unwrap(),
                    alpha,
                },
            ];
            for rule in rules {
                let p = exact_error_probabilities(&cb, &rule, &w, &v).unwrap();
                assert!(p.p_fa >= 0.0 && p.p_fa <= 1.0 + 1e-12);
                assert!(p.p_md >= 0.0 && p.p_md <= 1.0 + 1e-12);
                assert!(p.p_ie >= p.p_fa - 1e-15, "{}", rule.name());
                assert!(p.p_ee >= 0.0);
                assert!((p.p_ie - p.p_fa - p.p_ee).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn monte_carlo_matches_exact_within_4_sigma() {
        let spec = spec_fc(6, 0.2, 99);
        let w = Dmc::bsc(0.1).unwrap();
        let v = Dmc::bsc(0.4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        rng.set_stream(0);
        let cb = draw_codebook(&spec, &mut rng).unwrap();
        let rule = DetectorRule::Asymptotic { w: w.clone(), v: v.clone(), alpha: 0.0 };
        let exact = exact_error_probabilities(&cb, &rule, &w, &v).unwrap();
        let mc = monte_carlo_estimate(&spec, &rule, &w, &v, 40_000, false).unwrap();
        for (est, truth) in
            [(mc.fa, exact.p_fa), (mc.md, exact.p_md), (mc.ie, exact.p_ie)]
        {
            let dev = (est.mean - truth).abs();
            assert!(dev <= 4.0 * est.stderr.max(1e-4), "dev {dev} stderr {}", est.stderr);
        }
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let spec = spec_fc(8, 0.25, 1234);
        let w = Dmc::bsc(0.1).unwrap();
        let v = Dmc::bsc(0.4).unwrap();
        let rule = DetectorRule::Asymptotic { w: w.clone(), v: v.clone(), alpha: 0.05 };
        let a = monte_carlo_estimate(&spec, &rule, &w, &v, 5_000, true).unwrap();
        let b = monte_carlo_estimate(&spec, &rule, &w, &v, 5_000, true).unwrap();
        assert_eq!(a.fa.mean.to_bits(), b.fa.mean.to_bits());
        assert_eq!(a.md.mean.to_bits(), b.md.mean.to_bits());
        assert_eq!(a.ie.mean.to_bits(), b.ie.mean.to_bits());
    }

    #[test]
    fn monte_carlo_trivial_cases() {
        // W = V with alpha = 0: ties reject, so FA frequency is 1
        let w = Dmc::bsc(0.2).unwrap();
        let spec = spec_fc(4, 0.2, 5);
        let rule = DetectorRule::Asymptotic { w: w.clone(), v: w.clone(), alpha: 0.0 };
        let mc = monte_carlo_estimate(&spec, &rule, &w, &w, 2_000, true).unwrap();
        assert_eq!(mc.fa.mean, 1.0);
        // noiseless identity channels with distinct codewords: IE = 0
        let idc = Dmc::identity(2);
        let spec2 = EnsembleSpec {
            kind: EnsembleKind::FixedComposition,
            px: InputDistribution::uniform(2),
            n: 4,
            rate: 0.0,
            seed: 3,
        };
        let v2 = Dmc::bsc(0.5).unwrap();
        let rule2 = DetectorRule::Asymptotic { w: idc.clone(), v: v2.clone(), alpha: 1.0 };
        let mc2 = monte_carlo_estimate(&spec2, &rule2, &idc, &v2, 2_000, true).unwrap();
        assert_eq!(mc2.ie.mean, 0.0);
    }

    #[test]
    fn stderr_formula() {
        let e = ProbabilityEstimate::from_count(250, 1000);
        assert!((e.mean - 0.25).abs() < 1e-15);
        assert!((e.stderr - (0.25 * 0.75 / 1000.0f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn empirical_exponent_synthetic() {
        let pts: Vec<(usize, f64)> = (4..=16).map(|n| (n, (-0.5 * n as f64).exp())).collect();
        let fit = empirical_exponent(&pts).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-12);
        assert_eq!(fit.dropped, 0);

        let flat: Vec<(usize, f64)> = (4..=10).map(|n| (n, 0.3)).collect();
        assert!(empirical_exponent(&flat).unwrap().slope.abs() < 1e-12);

        let with_zero = vec![(4, 0.0), (6, 0.1), (8, 0.05)];
        let fit = empirical_exponent(&with_zero).unwrap();
        assert_eq!(fit.dropped, 1);
        assert_eq!(fit.used, 2);
        assert!(empirical_exponent(&[(4, 0.0), (6, 0.5)]).is_err());
    }

    #[test]
    fn empirical_exponent_from_simulation_grows_with_alpha() {
        let w = Dmc::bsc(0.1).unwrap();
        let v = Dmc::bsc(0.4).unwrap();
        let mut slopes = Vec::new();
        for alpha in [-0.05, 0.1] {
            let mut pts = Vec::new();
            for n in (4..=16).step_by(4) {
                let spec = spec_fc(n, 0.1, 42);
                let rule = DetectorRule::Asymptotic { w: w.clone(), v: v.clone(), alpha };
                let mc = monte_carlo_estimate(&spec, &rule, &w, &v, 20_000, true).unwrap();
                pts.push((n, mc.fa.mean));
            }
            slopes.push(empirical_exponent(&pts).unwrap().slope);
        }
        assert!(slopes[0] > 0.0);
        assert!(slopes[1] > slopes[0]);
    }
}
