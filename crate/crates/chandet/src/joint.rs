//! Joint types over input x output pairs and the information measures on them.

use crate::channel::{Dmc, InputDistribution};
use crate::logdomain::{plnpq, LogValue};
use crate::{Error, Result, PROB_TOL};

/// A joint distribution Q over X x Y, stored as a flattened row-major table.
///
/// Marginals and conditionals are computed views; tables at desk scale are a
/// handful of cells so nothing is cached.
#[derive(Clone, Debug, PartialEq)]
pub struct JointType {
    probs: Vec<f64>,
    nx: usize,
    ny: usize,
}

impl JointType {
    pub fn new(table: Vec<Vec<f64>>) -> Result<Self> {
        let nx = table.len();
        if nx == 0 {
            return Err(Error::InvalidDistribution("joint type with no rows".into()));
        }
        let ny = table[0].len();
        let mut probs = Vec::with_capacity(nx * ny);
        let mut sum = 0.0;
        for row in &table {
            if row.len() != ny {
                return Err(Error::DimensionMismatch("ragged joint type table".into()));
            }
            for &p in row {
                if !(0.0..=1.0 + PROB_TOL).contains(&p) || p.is_nan() {
                    return Err(Error::InvalidDistribution(format!("joint entry {p}")));
                }
                probs.push(p);
                sum += p;
            }
        }
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDistribution(format!("joint type sums to {sum}")));
        }
        Ok(JointType { probs, nx, ny })
    }

    pub(crate) fn from_flat_unchecked(probs: Vec<f64>, nx: usize, ny: usize) -> Self {
        JointType { probs, nx, ny }
    }

    /// Empirical joint type of a pair of equal-length sequences.
    pub fn empirical(x_seq: &[usize], y_seq: &[usize], nx: usize, ny: usize) -> Result<Self> {
        if x_seq.len() != y_seq.len() {
            return Err(Error::LengthMismatch(x_seq.len(), y_seq.len()));
        }
        if x_seq.is_empty() {
            return Err(Error::InvalidParameter("empirical type of empty sequences".into()));
        }
        let n = x_seq.len() as f64;
        let mut probs = vec![0.0; nx * ny];
        for (&x, &y) in x_seq.iter().zip(y_seq) {
            if x >= nx || y >= ny {
                return Err(Error::DimensionMismatch(format!(
                    "symbol ({x},{y}) outside {nx}x{ny} alphabet"
                )));
            }
            probs[x * ny + y] += 1.0 / n;
        }
        Ok(JointType { probs, nx, ny })
    }

    pub fn input_size(&self) -> usize {
        self.nx
    }

    pub fn output_size(&self) -> usize {
        self.ny
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.probs[x * self.ny + y]
    }

    pub fn x_marginal(&self) -> Vec<f64> {
        (0..self.nx).map(|x| (0..self.ny).map(|y| self.prob(x, y)).sum()).collect()
    }

    pub fn y_marginal(&self) -> Vec<f64> {
        (0..self.ny).map(|y| (0..self.nx).map(|x| self.prob(x, y)).sum()).collect()
    }

    /// Conditional Q_{Y|X}; rows with zero marginal come back as all zeros.
    pub fn conditional_y_given_x(&self) -> Vec<Vec<f64>> {
        let qx = self.x_marginal();
        (0..self.nx)
            .map(|x| {
                (0..self.ny)
                    .map(|y| if qx[x] > 0.0 { self.prob(x, y) / qx[x] } else { 0.0 })
                    .collect()
            })
            .collect()
    }

    /// Mutual information I(Q) in nats; nonnegative by construction.
    pub fn mutual_information(&self) -> f64 {
        let qx = self.x_marginal();
        let qy = self.y_marginal();
        let mut i = 0.0;
        for x in 0..self.nx {
            for y in 0..self.ny {
                let q = self.prob(x, y);
                if q > 0.0 {
                    i += q * (q / (qx[x] * qy[y])).ln();
                }
            }
        }
        i.max(0.0)
    }

    /// Average crossover probability of a 2x2 type:
    /// (Q_{Y|X}(1|0) + Q_{Y|X}(0|1)) / 2.
    pub fn avg_crossover(&self) -> Option<f64> {
        if self.nx != 2 || self.ny != 2 {
            return None;
        }
        let c = self.conditional_y_given_x();
        Some(0.5 * (c[0][1] + c[1][0]))
    }

    /// Symmetric 2x2 type: uniform input through a BSC with crossover `q`.
    pub fn symmetric_binary(q: f64) -> Self {
        JointType {
            probs: vec![(1.0 - q) / 2.0, q / 2.0, q / 2.0, (1.0 - q) / 2.0],
            nx: 2,
            ny: 2,
        }
    }
}

/// Normalized log-likelihood of a channel at a joint type:
/// sum_{x,y} Q(x,y) log W(y|x), with -inf when Q puts mass on a zero of W.
pub fn f_channel(w: &Dmc, q: &JointType) -> Result<LogValue> {
    if w.input_size() != q.input_size() || w.output_size() != q.output_size() {
        return Err(Error::DimensionMismatch(format!(
            "channel {}x{} vs joint type {}x{}",
            w.input_size(),
            w.output_size(),
            q.input_size(),
            q.output_size()
        )));
    }
    let mut acc = 0.0;
    for x in 0..q.input_size() {
        for y in 0..q.output_size() {
            let p = q.prob(x, y);
            if p > 0.0 {
                let lw = w.log_prob(y, x);
                if lw == f64::NEG_INFINITY {
                    return Ok(LogValue::NEG_INF);
                }
                acc += p * lw;
            }
        }
    }
    Ok(LogValue::new(acc))
}

/// log W(y_seq | x_seq) = sum_i log W(y_i|x_i).
pub fn sequence_log_likelihood(w: &Dmc, x_seq: &[usize], y_seq: &[usize]) -> Result<LogValue> {
    if x_seq.len() != y_seq.len() {
        return Err(Error::LengthMismatch(x_seq.len(), y_seq.len()));
    }
    if x_seq.is_empty() {
        return Err(Error::InvalidParameter("zero-length sequences".into()));
    }
    let mut acc = 0.0;
    for (&x, &y) in x_seq.iter().zip(y_seq) {
        if x >= w.input_size() || y >= w.output_size() {
            return Err(Error::DimensionMismatch(format!(
                "symbol ({x},{y}) outside channel alphabet"
            )));
        }
        let lw = w.log_prob(y, x);
        if lw == f64::NEG_INFINITY {
            return Ok(LogValue::NEG_INF);
        }
        acc += lw;
    }
    Ok(LogValue::new(acc))
}

/// Conditional divergence D(Q_{Y|X} || W | Px) in nats; +inf on support violation.
pub fn conditional_divergence(qyx: &[Vec<f64>], w: &Dmc, px: &InputDistribution) -> Result<f64> {
    if qyx.len() != w.input_size() || px.len() != w.input_size() {
        return Err(Error::DimensionMismatch("conditional divergence shapes".into()));
    }
    let mut acc = 0.0;
    for x in 0..w.input_size() {
        if px.prob(x) == 0.0 {
            continue;
        }
        if qyx[x].len() != w.output_size() {
            return Err(Error::DimensionMismatch("conditional row width".into()));
        }
        let mut row = 0.0;
        for y in 0..w.output_size() {
            row += plnpq(qyx[x][y], w.prob(y, x));
        }
        acc += px.prob(x) * row;
        if acc == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
    }
    Ok(acc.max(0.0))
}

/// D(Q || Qx x Qy) evaluated directly; used as the oracle for I(Q).
pub fn divergence_from_product(q: &JointType) -> f64 {
    let qx = q.x_marginal();
    let qy = q.y_marginal();
    let mut d = 0.0;
    for x in 0..q.input_size() {
        for y in 0..q.output_size() {
            d += plnpq(q.prob(x, y), qx[x] * qy[y]);
        }
    }
    d
}
