//! Composite-hypothesis detection over channel sets.
//!
//! A channel set stands for a composite hypothesis "the channel is some
//! member of this set". The generalized log-likelihood of a set at a joint
//! type is the per-type maximum over members; for intervals of binary
//! symmetric channels the maximizer has a closed form (clip the empirical
//! crossover to the interval), and a finite discretization serves as the
//! verification oracle.

use crate::channel::Dmc;
use crate::detectors::{Codebook, DetectorRule};
use crate::joint::{f_channel, JointType};
use crate::logdomain::LogValue;
use crate::sim::{exact_probabilities_multi, ErrorProbabilities, DEFAULT_ENUM_CAP};
use crate::{Error, Result};

pub use crate::exponents::te::exponent_universal_rc;

/// A finite set of channels, or an interval of BSC crossover probabilities.
#[derive(Clone, Debug)]
pub enum ChannelSet {
    Finite(Vec<Dmc>),
    BscInterval { lo: f64, hi: f64, grid: usize },
}

/// Default discretization count for interval sets when a finite grid is
/// needed and the caller did not choose one.
pub const DEFAULT_INTERVAL_GRID: usize = 64;

impl ChannelSet {
    pub fn finite(members: Vec<Dmc>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyChannelSet);
        }
        let (nx, ny) = (members[0].input_size(), members[0].output_size());
        for m in &members {
            if m.input_size() != nx || m.output_size() != ny {
                return Err(Error::DimensionMismatch("channel set members differ in shape".into()));
            }
        }
        Ok(ChannelSet::Finite(members))
    }

    pub fn bsc_interval(lo: f64, hi: f64, grid: usize) -> Result<Self> {
        if !(lo > 0.0 && lo <= hi && hi < 1.0) {
            return Err(Error::InvalidParameter(format!("BSC interval [{lo}, {hi}]")));
        }
        if grid == 0 {
            return Err(Error::InvalidParameter("interval grid count must be positive".into()));
        }
        Ok(ChannelSet::BscInterval { lo, hi, grid })
    }

    pub fn input_size(&self) -> Result<usize> {
        match self {
            ChannelSet::Finite(m) => Ok(m[0].input_size()),
            ChannelSet::BscInterval { .. } => Ok(2),
        }
    }

    pub fn output_size(&self) -> Result<usize> {
        match self {
            ChannelSet::Finite(m) => Ok(m[0].output_size()),
            ChannelSet::BscInterval { .. } => Ok(2),
        }
    }

    /// The single member of a singleton set, if this is one.
    pub fn as_singleton(&self) -> Option<Dmc> {
        match self {
            ChannelSet::Finite(m) if m.len() == 1 => Some(m[0].clone()),
            ChannelSet::BscInterval { lo, hi, .. } if lo == hi => Dmc::bsc(*lo).ok(),
            _ => None,
        }
    }

    /// Finite member list; intervals expand to their stored grid count.
    pub fn members(&self) -> Result<Vec<Dmc>> {
        match self {
            ChannelSet::Finite(m) => Ok(m.clone()),
            ChannelSet::BscInterval { grid, .. } => {
                let ChannelSet::Finite(m) = self.discretize(*grid)? else { unreachable!() };
                Ok(m)
            }
        }
    }

    /// Evenly spaced finite subset (intervals) or a clone (finite sets).
    pub fn discretize(&self, count: usize) -> Result<ChannelSet> {
        match self {
            ChannelSet::Finite(m) => Ok(ChannelSet::Finite(m.clone())),
            ChannelSet::BscInterval { lo, hi, .. } => {
                let count = count.max(1);
                let members = (0..count)
                    .map(|i| {
                        let t = if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
                        Dmc::bsc(lo + t * (hi - lo))
                    })
                    .collect::<Result<Vec<_>>>()?;
                ChannelSet::finite(members)
            }
        }
    }

    /// Generalized normalized log-likelihood: max over members of f_W(Q).
    pub fn f_set(&self, q: &JointType) -> Result<LogValue> {
        match self {
            ChannelSet::Finite(members) => {
                let mut best = f64::NEG_INFINITY;
                for w in members {
                    let v = f_channel(w, q)?.value();
                    if v > best {
                        best = v;
                    }
                }
                Ok(if best == f64::NEG_INFINITY { LogValue::NEG_INF } else { LogValue::new(best) })
            }
            ChannelSet::BscInterval { lo, hi, .. } => {
                if q.input_size() != 2 || q.output_size() != 2 {
                    return Err(Error::DimensionMismatch("BSC interval needs a 2x2 type".into()));
                }
                let d = q.prob(0, 1) + q.prob(1, 0);
                Ok(LogValue::new(bsc_interval_f(*lo, *hi, d)))
            }
        }
    }

    /// max over members of log W(y_seq | x_seq); closed form for intervals.
    pub fn max_sequence_log_lik(&self, x_seq: &[usize], y_seq: &[usize]) -> Result<f64> {
        if x_seq.len() != y_seq.len() {
            return Err(Error::LengthMismatch(x_seq.len(), y_seq.len()));
        }
        match self {
            ChannelSet::Finite(members) => {
                let mut best = f64::NEG_INFINITY;
                for w in members {
                    let v = crate::joint::sequence_log_likelihood(w, x_seq, y_seq)?.value();
                    if v > best {
                        best = v;
                    }
                }
                Ok(best)
            }
            ChannelSet::BscInterval { lo, hi, .. } => {
                let n = x_seq.len() as f64;
                let d = x_seq.iter().zip(y_seq).filter(|(&x, &y)| x != y).count() as f64;
                Ok(n * bsc_interval_f(*lo, *hi, d / n))
            }
        }
    }

    /// Scalar form of [`ChannelSet::f_set`] for symmetric 2x2 types with
    /// average crossover `q`; only meaningful for BSC-shaped sets.
    pub(crate) fn f_set_crossover(&self, q: f64) -> Result<f64> {
        match self {
            ChannelSet::BscInterval { lo, hi, .. } => Ok(bsc_interval_f(*lo, *hi, q)),
            ChannelSet::Finite(_) => {
                let joint = JointType::symmetric_binary(q);
                Ok(self.f_set(&joint)?.value())
            }
        }
    }
}

/// max over c in [lo, hi] of (1-d) log(1-c) + d log c; the unconstrained
/// maximizer is c = d, so the max clips d to the interval.
fn bsc_interval_f(lo: f64, hi: f64, d: f64) -> f64 {
    let c = d.clamp(lo, hi);
    (1.0 - d) * (1.0 - c).ln() + d * c.ln()
}

/// Worst-case error probabilities over finite channel sets: the partition is
/// induced by `rule` once, then FA maximizes over the W-set, MD over the
/// V-set, IE over the W-set.
pub fn worst_case_probabilities(
    cb: &Codebook,
    rule: &DetectorRule,
    w_set: &ChannelSet,
    v_set: &ChannelSet,
) -> Result<ErrorProbabilities> {
    worst_case_probabilities_capped(cb, rule, w_set, v_set, DEFAULT_ENUM_CAP)
}

pub fn worst_case_probabilities_capped(
    cb: &Codebook,
    rule: &DetectorRule,
    w_set: &ChannelSet,
    v_set: &ChannelSet,
    cap: u64,
) -> Result<ErrorProbabilities> {
    let w_members = match w_set {
        ChannelSet::Finite(m) => m.clone(),
        ChannelSet::BscInterval { .. } => {
            return Err(Error::InvalidParameter(
                "worst-case evaluation needs finite sets; discretize intervals first".into(),
            ))
        }
    };
    let v_members = match v_set {
        ChannelSet::Finite(m) => m.clone(),
        ChannelSet::BscInterval { .. } => {
            return Err(Error::InvalidParameter(
                "worst-case evaluation needs finite sets; discretize intervals first".into(),
            ))
        }
    };
    let per = exact_probabilities_multi(cb, rule, &w_members, &v_members, cap)?;
    let p_fa = per.fa.iter().copied().fold(0.0, f64::max);
    let p_md = per.md.iter().copied().fold(0.0, f64::max);
    let p_ie = per.ie.iter().copied().fold(0.0, f64::max);
    Ok(ErrorProbabilities { p_fa, p_md, p_ie, p_ee: (p_ie - p_fa).max(0.0) })
}

/// Mass of the rule's rejection region under the per-codeword set-maximized
/// channel: `sum_{y in R0} (1/M) sum_m max_{W in set} W(y|x_m)`.
///
/// Sandwiches the worst-case FA probability between itself and `|set|` times
/// it for finite sets.
pub fn rejection_set_mass(
    cb: &Codebook,
    rule: &DetectorRule,
    w_set: &ChannelSet,
    cap: u64,
) -> Result<f64> {
    let n = cb.blocklength();
    let ny = w_set.output_size()?;
    let outcomes = (ny as u128).pow(n as u32);
    if outcomes > cap as u128 {
        return Err(Error::EnumerationCapExceeded { needed: outcomes, cap });
    }
    let m = cb.size() as f64;
    let mut y = vec![0usize; n];
    let mut mass = 0.0;
    loop {
        if rule.decide(cb, &y)?.is_reject() {
            let mut g = 0.0;
            for cw in cb.codewords() {
                g += w_set.max_sequence_log_lik(cw, &y)?.exp();
            }
            mass += g / m;
        }
        // odometer over Y^n
        let mut i = 0;
        loop {
            if i == n {
                return Ok(mass);
            }
            y[i] += 1;
            if y[i] < ny {
                break;
            }
            y[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::f_wb;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn f_set_singleton_equals_f_channel() {
        let w = Dmc::bsc(0.17).unwrap();
        let s = ChannelSet::finite(vec![w.clone()]).unwrap();
        let q = JointType::symmetric_binary(0.3);
        assert_eq!(s.f_set(&q).unwrap().value(), f_channel(&w, &q).unwrap().value());
    }

    #[test]
    fn f_set_interval_interior_maximizer() {
        let s = ChannelSet::bsc_interval(0.05, 0.45, 64).unwrap();
        let q = JointType::symmetric_binary(0.2);
        let got = s.f_set(&q).unwrap().value();
        assert!((got - f_wb(0.2, 0.2)).abs() < 1e-14);
    }

    #[test]
    fn f_set_interval_endpoint_vs_grid() {
        let s = ChannelSet::bsc_interval(0.05, 0.45, 64).unwrap();
        let q = JointType::symmetric_binary(0.01);
        let got = s.f_set(&q).unwrap().value();
        assert!((got - f_wb(0.05, 0.01)).abs() < 1e-14);
        // endpoint lies on the grid, so the discretized max agrees exactly
        let grid = s.discretize(64).unwrap();
        assert!((grid.f_set(&q).unwrap().value() - got).abs() < 1e-12);
        // interior maximizer: grid is close but below
        let q2 = JointType::symmetric_binary(0.2);
        let exact = s.f_set(&q2).unwrap().value();
        let approx = grid.f_set(&q2).unwrap().value();
        assert!(approx <= exact + 1e-15);
        assert!(exact - approx < 1e-3);
    }

    #[test]
    fn f_set_midpoint_convexity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sets = [
            ChannelSet::bsc_interval(0.05, 0.45, 64).unwrap(),
            ChannelSet::finite(vec![
                Dmc::bsc(0.07).unwrap(),
                Dmc::bsc(0.2).unwrap(),
                Dmc::new(vec![vec![0.8, 0.2], vec![0.35, 0.65]]).unwrap(),
            ])
            .unwrap(),
        ];
        for set in &sets {
            for _ in 0..200 {
                let mut a: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() + 1e-3).collect();
                let sa: f64 = a.iter().sum();
                a.iter_mut().for_each(|p| *p /= sa);
                let mut b: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() + 1e-3).collect();
                let sb: f64 = b.iter().sum();
                b.iter_mut().for_each(|p| *p /= sb);
                let qa = JointType::from_flat_unchecked(a.clone(), 2, 2);
                let qb = JointType::from_flat_unchecked(b.clone(), 2, 2);
                let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
                let qm = JointType::from_flat_unchecked(mid, 2, 2);
                let fa = set.f_set(&qa).unwrap().value();
                let fb = set.f_set(&qb).unwrap().value();
                let fm = set.f_set(&qm).unwrap().value();
                assert!(fm <= 0.5 * fa + 0.5 * fb + 1e-12);
            }
        }
    }

    #[test]
    fn worst_case_singleton_matches_exact() {
        let w = Dmc::bsc(0.1).unwrap();
        let v = Dmc::bsc(0.4).unwrap();
        let cb = Codebook::new(vec![vec![0, 0], vec![1, 1]], 2).unwrap();
        let rule = DetectorRule::Asymptotic { w: w.clone(), v: v.clone(), alpha: 0.0 };
        let ws = ChannelSet::finite(vec![w.clone()]).unwrap();
        let vs = ChannelSet::finite(vec![v.clone()]).unwrap();
        let wc = worst_case_probabilities(&cb, &rule, &ws, &vs).unwrap();
        let ex = crate::sim::exact_error_probabilities(&cb, &rule, &w, &v).unwrap();
        assert_eq!(wc.p_fa, ex.p_fa);
        assert_eq!(wc.p_md, ex.p_md);
        assert_eq!(wc.p_ie, ex.p_ie);
    }

    #[test]
    fn worst_case_duplicates_and_three_channel_oracle() {
        let w = Dmc::bsc(0.1).unwrap();
        let v1 = Dmc::bsc(0.4).unwrap();
        let cb = Codebook::new(vec![vec![0, 1, 0], vec![1, 0, 1]], 2).unwrap();
        let rule = DetectorRule::Asymptotic { w: w.clone(), v: v1.clone(), alpha: 0.05 };
        // duplicates: max over {V1, V1} is the common value
        let ws = ChannelSet::finite(vec![w.clone()]).unwrap();
        let vs = ChannelSet::finite(vec![v1.clone(), v1.clone()]).unwrap();
        let wc = worst_case_probabilities(&cb, &rule, &ws, &vs).unwrap();
        let ex = crate::sim::exact_error_probabilities(&cb, &rule, &w, &v1).unwrap();
        assert!((wc.p_md - ex.p_md).abs() < 1e-15);

        // three channels: equals the max of three independent evaluations
        let wmem =
            vec![Dmc::bsc(0.08).unwrap(), Dmc::bsc(0.1).unwrap(), Dmc::bsc(0.14).unwrap()];
        let vmem =
            vec![Dmc::bsc(0.35).unwrap(), Dmc::bsc(0.4).unwrap(), Dmc::bsc(0.45).unwrap()];
        let ws = ChannelSet::finite(wmem.clone()).unwrap();
        let vs = ChannelSet::finite(vmem.clone()).unwrap();
        let wc = worst_case_probabilities(&cb, &rule, &ws, &vs).unwrap();
        let mut fa: f64 = 0.0;
        let mut md: f64 = 0.0;
        let mut ie: f64 = 0.0;
        for wm in &wmem {
            let e = crate::sim::exact_error_probabilities(&cb, &rule, wm, &v1).unwrap();
            fa = fa.max(e.p_fa);
            ie = ie.max(e.p_ie);
        }
        for vm in &vmem {
            let e = crate::sim::exact_error_probabilities(&cb, &rule, &w, vm).unwrap();
            md = md.max(e.p_md);
        }
        assert!((wc.p_fa - fa).abs() < 1e-14);
        assert!((wc.p_md - md).abs() < 1e-14);
        assert!((wc.p_ie - ie).abs() < 1e-14);
    }

    #[test]
    fn lemma5_sandwich_small_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for n in [2usize, 4, 6] {
            let cws: Vec<Vec<usize>> =
                (0..2).map(|_| (0..n).map(|_| rng.gen_range(0..2)).collect()).collect();
            let cb = Codebook::new(cws, 2).unwrap();
            let wmem =
                vec![Dmc::bsc(0.08).unwrap(), Dmc::bsc(0.12).unwrap(), Dmc::bsc(0.16).unwrap()];
            let ws = ChannelSet::finite(wmem).unwrap();
            let vs = ChannelSet::finite(vec![Dmc::bsc(0.4).unwrap()]).unwrap();
            let rule = DetectorRule::Universal {
                w_set: ws.clone(),
                v_set: vs.clone(),
                alpha: 0.0,
            };
            let wc = worst_case_probabilities(&cb, &rule, &ws, &vs).unwrap();
            let g = rejection_set_mass(&cb, &rule, &ws, 1 << 24).unwrap();
            assert!(wc.p_fa <= g + 1e-12, "n={n}: {} vs {}", wc.p_fa, g);
            assert!(g <= 3.0 * wc.p_fa + 1e-12, "n={n}: {} vs {}", g, wc.p_fa);
        }
    }
}
