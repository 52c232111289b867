//! Decision rules mapping a received sequence to a message index or rejection.
//!
//! Six rules are provided. The finite-blocklength optimal rule compares
//! `a*sum_m W(y|x_m) + max_m W(y|x_m)` against `b*sum_m V(y|x_m)`; its
//! asymptotic form drops the max term and is an ordinary Neyman-Pearson test
//! between the two mixture likelihoods. The type-enumerator rule evaluates
//! the same statistics through joint-type counts, and the low-rate (GLRT),
//! high-rate (output statistics) and universal (channel-set) rules are the
//! simplified variants. Everything is evaluated in the log domain.

use std::collections::HashMap;

use crate::channel::{Dmc, InputDistribution};
use crate::composite::ChannelSet;
use crate::joint::JointType;
use crate::logdomain::{logaddexp, logsumexp};
use crate::{Error, Result};

/// An ordered list of codewords over the input alphabet.
#[derive(Clone, Debug)]
pub struct Codebook {
    n: usize,
    input_size: usize,
    codewords: Vec<Vec<usize>>,
}

impl Codebook {
    pub fn new(codewords: Vec<Vec<usize>>, input_size: usize) -> Result<Self> {
        if codewords.is_empty() {
            return Err(Error::InvalidParameter("codebook needs at least one codeword".into()));
        }
        let n = codewords[0].len();
        if n == 0 {
            return Err(Error::InvalidParameter("zero blocklength".into()));
        }
        for cw in &codewords {
            if cw.len() != n {
                return Err(Error::LengthMismatch(cw.len(), n));
            }
            if cw.iter().any(|&x| x >= input_size) {
                return Err(Error::DimensionMismatch("codeword symbol outside alphabet".into()));
            }
        }
        Ok(Codebook { n, input_size, codewords })
    }

    pub fn blocklength(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.codewords.len()
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn codeword(&self, m: usize) -> &[usize] {
        &self.codewords[m]
    }

    pub fn codewords(&self) -> &[Vec<usize>] {
        &self.codewords
    }
}

/// Outcome of a detector/decoder: rejection or a 0-based message index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Reject,
    Decode(usize),
}

impl Decision {
    pub fn is_reject(self) -> bool {
        matches!(self, Decision::Reject)
    }
}

/// Per-codeword sequence log-likelihoods under `w`.
fn codeword_log_liks(cb: &Codebook, y: &[usize], w: &Dmc) -> Result<Vec<f64>> {
    if y.len() != cb.blocklength() {
        return Err(Error::LengthMismatch(y.len(), cb.blocklength()));
    }
    if cb.input_size() > w.input_size() || y.iter().any(|&s| s >= w.output_size()) {
        return Err(Error::DimensionMismatch("codebook or output outside channel alphabet".into()));
    }
    Ok(cb
        .codewords()
        .iter()
        .map(|cw| cw.iter().zip(y).map(|(&x, &yy)| w.log_prob(yy, x)).sum())
        .collect())
}

/// Index of the maximum, lowest index on ties.
fn argmax_lowest(vals: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in vals.iter().enumerate().skip(1) {
        if v > vals[best] {
            best = i;
        }
    }
    best
}

fn ml_decode(lw: &[f64]) -> Decision {
    Decision::Decode(argmax_lowest(lw))
}

/// Finite-blocklength optimal rule with raw positive coefficients `a`, `b`.
///
/// Rejects iff `a*sum W + max W <= b*sum V`; otherwise ML-decodes under `w`.
pub fn decide_optimal(
    cb: &Codebook,
    y: &[usize],
    w: &Dmc,
    v: &Dmc,
    a: f64,
    b: f64,
) -> Result<Decision> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::InvalidParameter(format!("coefficients a={a}, b={b} must be positive")));
    }
    decide_optimal_log(cb, y, w, v, a.ln(), b.ln())
}

/// Log-domain form of [`decide_optimal`]: `log_a = n*alpha`, `log_b = n*beta`
/// for exponentially scaled coefficients. This path never overflows.
pub fn decide_optimal_log(
    cb: &Codebook,
    y: &[usize],
    w: &Dmc,
    v: &Dmc,
    log_a: f64,
    log_b: f64,
) -> Result<Decision> {
    let lw = codeword_log_liks(cb, y, w)?;
    let lv = codeword_log_liks(cb, y, v)?;
    let max_w = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let left = logaddexp(log_a + logsumexp(&lw), max_w);
    let right = log_b + logsumexp(&lv);
    if left <= right {
        Ok(Decision::Reject)
    } else {
        Ok(ml_decode(&lw))
    }
}

/// Asymptotic Neyman-Pearson rule: rejects iff
/// `e^{n*alpha} * sum W <= sum V` (ties reject); otherwise ML under `w`.
pub fn decide_asymptotic(
    cb: &Codebook,
    y: &[usize],
    w: &Dmc,
    v: &Dmc,
    alpha: f64,
) -> Result<Decision> {
    let lw = codeword_log_liks(cb, y, w)?;
    let lv = codeword_log_liks(cb, y, v)?;
    let n = cb.blocklength() as f64;
    if n * alpha + logsumexp(&lw) <= logsumexp(&lv) {
        Ok(Decision::Reject)
    } else {
        Ok(ml_decode(&lw))
    }
}

/// Counts of codewords sharing each joint type with a given output sequence.
///
/// Keys are integer count tables (`n * Q`), so the table is exact.
#[derive(Clone, Debug)]
pub struct TypeEnumeratorTable {
    counts: HashMap<Vec<u32>, u32>,
    n: usize,
    nx: usize,
    ny: usize,
}

impl TypeEnumeratorTable {
    pub fn build(cb: &Codebook, y: &[usize], ny: usize) -> Result<Self> {
        if y.len() != cb.blocklength() {
            return Err(Error::LengthMismatch(y.len(), cb.blocklength()));
        }
        let nx = cb.input_size();
        let mut counts: HashMap<Vec<u32>, u32> = HashMap::new();
        for cw in cb.codewords() {
            let mut key = vec![0u32; nx * ny];
            for (&x, &yy) in cw.iter().zip(y) {
                key[x * ny + yy] += 1;
            }
            *counts.entry(key).or_insert(0) += 1;
        }
        Ok(TypeEnumeratorTable { counts, n: cb.blocklength(), nx, ny })
    }

    pub fn total(&self) -> u32 {
        self.counts.values().sum()
    }

    pub fn num_types(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (JointType, u32)> + '_ {
        self.counts.iter().map(move |(key, &cnt)| {
            let probs = key.iter().map(|&c| c as f64 / self.n as f64).collect();
            (JointType::from_flat_unchecked(probs, self.nx, self.ny), cnt)
        })
    }

    /// max over occupied types of `log N(Q|y) + n*f_W(Q)`, i.e. the log of
    /// `max_Q N(Q|y) e^{n f_W(Q)}`.
    pub fn log_statistic(&self, w: &Dmc) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for (key, &cnt) in &self.counts {
            let mut ll = (cnt as f64).ln();
            'cells: for x in 0..self.nx {
                for y in 0..self.ny {
                    let c = key[x * self.ny + y];
                    if c > 0 {
                        let lp = w.log_prob(y, x);
                        if lp == f64::NEG_INFINITY {
                            ll = f64::NEG_INFINITY;
                            break 'cells;
                        }
                        ll += c as f64 * lp;
                    }
                }
            }
            if ll > best {
                best = ll;
            }
        }
        best
    }
}

/// Type-enumerator rule: rejects iff
/// `e^{n alpha} max_Q N(Q|y) e^{n f_W(Q)} <= e^{n beta} max_Q N(Q|y) e^{n f_V(Q)}`.
pub fn decide_type_enum(
    cb: &Codebook,
    y: &[usize],
    w: &Dmc,
    v: &Dmc,
    alpha: f64,
    beta: f64,
) -> Result<Decision> {
    let table = TypeEnumeratorTable::build(cb, y, w.output_size())?;
    let n = cb.blocklength() as f64;
    let left = n * alpha + table.log_statistic(w);
    let right = n * beta + table.log_statistic(v);
    if left <= right {
        Ok(Decision::Reject)
    } else {
        Ok(ml_decode(&codeword_log_liks(cb, y, w)?))
    }
}

/// Low-rate GLRT: rejects iff `e^{n alpha} max_m W(y|x_m) < max_m V(y|x_m)`
/// (strict; ties decode), otherwise ML under `w`.
pub fn decide_lowrate(
    cb: &Codebook,
    y: &[usize],
    w: &Dmc,
    v: &Dmc,
    alpha: f64,
) -> Result<Decision> {
    let lw = codeword_log_liks(cb, y, w)?;
    let lv = codeword_log_liks(cb, y, v)?;
    let n = cb.blocklength() as f64;
    let max_w = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_v = lv.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if n * alpha + max_w < max_v {
        Ok(Decision::Reject)
    } else {
        Ok(ml_decode(&lw))
    }
}

/// High-rate rule based on the memoryless output statistics
/// `W~ = (Px x W)_Y`, `V~ = (Px x V)_Y`: rejects iff
/// `e^{n alpha} W~(y) < V~(y)` (strict), otherwise ML under `w`.
pub fn decide_highrate(
    cb: &Codebook,
    y: &[usize],
    px: &InputDistribution,
    w: &Dmc,
    v: &Dmc,
    alpha: f64,
) -> Result<Decision> {
    let w_out = w.output_marginal(px)?;
    let v_out = v.output_marginal(px)?;
    if y.len() != cb.blocklength() {
        return Err(Error::LengthMismatch(y.len(), cb.blocklength()));
    }
    let mut lw_out = 0.0;
    let mut lv_out = 0.0;
    for &yy in y {
        if yy >= w_out.len() {
            return Err(Error::DimensionMismatch("output symbol outside alphabet".into()));
        }
        lw_out += if w_out[yy] > 0.0 { w_out[yy].ln() } else { f64::NEG_INFINITY };
        lv_out += if v_out[yy] > 0.0 { v_out[yy].ln() } else { f64::NEG_INFINITY };
    }
    let n = cb.blocklength() as f64;
    if n * alpha + lw_out < lv_out {
        Ok(Decision::Reject)
    } else {
        Ok(ml_decode(&codeword_log_liks(cb, y, w)?))
    }
}

/// Universal rule for channel sets: rejects iff
/// `e^{n alpha} sum_m max_{W in WS} W(y|x_m) <= sum_m max_{V in VS} V(y|x_m)`;
/// otherwise decodes by maximum mutual information, lowest index on ties.
pub fn decide_universal(
    cb: &Codebook,
    y: &[usize],
    w_set: &ChannelSet,
    v_set: &ChannelSet,
    alpha: f64,
) -> Result<Decision> {
    if y.len() != cb.blocklength() {
        return Err(Error::LengthMismatch(y.len(), cb.blocklength()));
    }
    let max_w: Vec<f64> = cb
        .codewords()
        .iter()
        .map(|cw| w_set.max_sequence_log_lik(cw, y))
        .collect::<Result<_>>()?;
    let max_v: Vec<f64> = cb
        .codewords()
        .iter()
        .map(|cw| v_set.max_sequence_log_lik(cw, y))
        .collect::<Result<_>>()?;
    let n = cb.blocklength() as f64;
    if n * alpha + logsumexp(&max_w) <= logsumexp(&max_v) {
        return Ok(Decision::Reject);
    }
    let ny = w_set.output_size()?;
    let mmi: Vec<f64> = cb
        .codewords()
        .iter()
        .map(|cw| {
            JointType::empirical(cw, y, cb.input_size().max(2), ny.max(2))
                .map(|q| q.mutual_information())
        })
        .collect::<Result<_>>()?;
    Ok(Decision::Decode(argmax_lowest(&mmi)))
}

/// A decision rule bundled with everything it needs to classify an output
/// sequence. Rules that test specific channels carry them, so a rule's
/// partition of the output space is fixed independently of whichever channel
/// actually generated the data (needed for worst-case evaluation).
#[derive(Clone, Debug)]
pub enum DetectorRule {
    Optimal { w: Dmc, v: Dmc, log_a: f64, log_b: f64 },
    Asymptotic { w: Dmc, v: Dmc, alpha: f64 },
    TypeEnum { w: Dmc, v: Dmc, alpha: f64, beta: f64 },
    LowRate { w: Dmc, v: Dmc, alpha: f64 },
    HighRate { px: InputDistribution, w: Dmc, v: Dmc, alpha: f64 },
    Universal { w_set: ChannelSet, v_set: ChannelSet, alpha: f64 },
}

impl DetectorRule {
    /// Optimal rule from raw positive coefficients.
    pub fn optimal(w: Dmc, v: Dmc, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !(b > 0.0) {
            return Err(Error::InvalidParameter(format!("a={a}, b={b} must be positive")));
        }
        Ok(DetectorRule::Optimal { w, v, log_a: a.ln(), log_b: b.ln() })
    }

    /// Optimal rule with `a = e^{n alpha}`, `b = e^{n beta}`; the only safe
    /// parametrization at large blocklengths.
    pub fn optimal_rates(w: Dmc, v: Dmc, alpha: f64, beta: f64, n: usize) -> Self {
        let nf = n as f64;
        DetectorRule::Optimal { w, v, log_a: nf * alpha, log_b: nf * beta }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DetectorRule::Optimal { .. } => "optimal",
            DetectorRule::Asymptotic { .. } => "asymptotic",
            DetectorRule::TypeEnum { .. } => "type_enum",
            DetectorRule::LowRate { .. } => "lowrate",
            DetectorRule::HighRate { .. } => "highrate",
            DetectorRule::Universal { .. } => "universal",
        }
    }

    pub fn decide(&self, cb: &Codebook, y: &[usize]) -> Result<Decision> {
        match self {
            DetectorRule::Optimal { w, v, log_a, log_b } => {
                decide_optimal_log(cb, y, w, v, *log_a, *log_b)
            }
            DetectorRule::Asymptotic { w, v, alpha } => decide_asymptotic(cb, y, w, v, *alpha),
            DetectorRule::TypeEnum { w, v, alpha, beta } => {
                decide_type_enum(cb, y, w, v, *alpha, *beta)
            }
            DetectorRule::LowRate { w, v, alpha } => decide_lowrate(cb, y, w, v, *alpha),
            DetectorRule::HighRate { px, w, v, alpha } => {
                decide_highrate(cb, y, px, w, v, *alpha)
            }
            DetectorRule::Universal { w_set, v_set, alpha } => {
                decide_universal(cb, y, w_set, v_set, *alpha)
            }
        }
    }
}
