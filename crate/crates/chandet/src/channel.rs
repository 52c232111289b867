//! Channels, input distributions, and binary-symmetric specializations.

use crate::logdomain::{plnpq, xlnx};
use crate::{Error, Result, PROB_TOL};

/// A discrete memoryless channel: one probability row over outputs per input.
///
/// Rows are validated at construction and never again; `log_row` material is
/// precomputed since sequence likelihoods live in the log domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Dmc {
    rows: Vec<Vec<f64>>,
    log_rows: Vec<Vec<f64>>,
}

impl Dmc {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidDistribution("channel with no inputs".into()));
        }
        let ny = rows[0].len();
        if ny == 0 {
            return Err(Error::InvalidDistribution("channel with no outputs".into()));
        }
        for (x, row) in rows.iter().enumerate() {
            if row.len() != ny {
                return Err(Error::DimensionMismatch(format!(
                    "row {x} has {} outputs, expected {ny}",
                    row.len()
                )));
            }
            validate_prob_row(row, &format!("channel row {x}"))?;
        }
        let log_rows = rows
            .iter()
            .map(|r| r.iter().map(|&p| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY }).collect())
            .collect();
        Ok(Dmc { rows, log_rows })
    }

    /// Binary symmetric channel with crossover probability `q`.
    pub fn bsc(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidParameter(format!("BSC crossover {q} outside [0,1]")));
        }
        Dmc::new(vec![vec![1.0 - q, q], vec![q, 1.0 - q]])
    }

    /// Identity (noiseless) channel on an alphabet of the given size.
    pub fn identity(size: usize) -> Self {
        let rows = (0..size)
            .map(|x| (0..size).map(|y| if x == y { 1.0 } else { 0.0 }).collect())
            .collect();
        Dmc::new(rows).expect("identity rows are stochastic")
    }

    pub fn input_size(&self) -> usize {
        self.rows.len()
    }

    pub fn output_size(&self) -> usize {
        self.rows[0].len()
    }

    pub fn prob(&self, y: usize, x: usize) -> f64 {
        self.rows[x][y]
    }

    pub fn log_prob(&self, y: usize, x: usize) -> f64 {
        self.log_rows[x][y]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// The crossover probability if this is a 2x2 binary symmetric channel.
    pub fn as_bsc(&self) -> Option<f64> {
        if self.input_size() != 2 || self.output_size() != 2 {
            return None;
        }
        let q = self.rows[0][1];
        if (self.rows[1][0] - q).abs() < 1e-12 && (self.rows[0][0] - (1.0 - q)).abs() < 1e-12 {
            Some(q)
        } else {
            None
        }
    }

    /// Output distribution induced by an input distribution.
    pub fn output_marginal(&self, px: &InputDistribution) -> Result<Vec<f64>> {
        if px.len() != self.input_size() {
            return Err(Error::DimensionMismatch(format!(
                "input distribution over {} symbols, channel has {} inputs",
                px.len(),
                self.input_size()
            )));
        }
        let mut out = vec![0.0; self.output_size()];
        for (x, row) in self.rows.iter().enumerate() {
            for (y, &p) in row.iter().enumerate() {
                out[y] += px.prob(x) * p;
            }
        }
        Ok(out)
    }
}

/// A probability distribution over the channel input alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct InputDistribution {
    probs: Vec<f64>,
}

impl InputDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        validate_prob_row(&probs, "input distribution")?;
        Ok(InputDistribution { probs })
    }

    pub fn uniform(size: usize) -> Self {
        InputDistribution { probs: vec![1.0 / size as f64; size] }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, x: usize) -> f64 {
        self.probs[x]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

fn validate_prob_row(row: &[f64], what: &str) -> Result<()> {
    if row.is_empty() {
        return Err(Error::InvalidDistribution(format!("{what} is empty")));
    }
    let mut sum = 0.0;
    for &p in row {
        if !(0.0..=1.0 + PROB_TOL).contains(&p) || p.is_nan() {
            return Err(Error::InvalidDistribution(format!("{what}: entry {p} outside [0,1]")));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > PROB_TOL {
        return Err(Error::InvalidDistribution(format!("{what}: sums to {sum}")));
    }
    Ok(())
}

/// A pair of binary symmetric channels with the derived log-ratio constants.
#[derive(Clone, Copy, Debug)]
pub struct BinaryChannelPair {
    pub w: f64,
    pub v: f64,
}

impl BinaryChannelPair {
    pub fn new(w: f64, v: f64) -> Result<Self> {
        for (name, q) in [("w", w), ("v", v)] {
            if !(q > 0.0 && q < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "BSC crossover {name}={q} must lie strictly inside (0,1)"
                )));
            }
        }
        Ok(BinaryChannelPair { w, v })
    }

    /// log((1-w)/w)
    pub fn rho_w(&self) -> f64 {
        rho(self.w)
    }

    /// log((1-v)/v)
    pub fn rho_v(&self) -> f64 {
        rho(self.v)
    }

    /// log((1-v)/(1-w))
    pub fn gamma_wv(&self) -> f64 {
        gamma(self.w, self.v)
    }

    pub fn w_channel(&self) -> Dmc {
        Dmc::bsc(self.w).expect("validated crossover")
    }

    pub fn v_channel(&self) -> Dmc {
        Dmc::bsc(self.v).expect("validated crossover")
    }

    /// Pair with the roles of `w` and `v` exchanged.
    pub fn swapped(&self) -> Self {
        BinaryChannelPair { w: self.v, v: self.w }
    }
}

/// Binary entropy in nats, with h_B(0) = h_B(1) = 0.
pub fn h_b(q: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&q));
    -xlnx(q) - xlnx(1.0 - q)
}

/// Binary divergence D_B(q1 || q2) in nats; +inf on support violation.
pub fn d_b(q1: f64, q2: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&q1) && (0.0..=1.0).contains(&q2));
    plnpq(q1, q2) + plnpq(1.0 - q1, 1.0 - q2)
}

/// Binary normalized log-likelihood: log(1-w) - q*rho(w).
pub fn f_wb(w: f64, q: f64) -> f64 {
    debug_assert!(w > 0.0 && w < 1.0);
    (1.0 - w).ln() - q * rho(w)
}

/// log((1-w)/w)
pub fn rho(w: f64) -> f64 {
    ((1.0 - w) / w).ln()
}

/// log((1-v)/(1-w))
pub fn gamma(w: f64, v: f64) -> f64 {
    ((1.0 - v) / (1.0 - w)).ln()
}

/// Mutual information I(Px x W) in nats.
pub fn capacity(px: &InputDistribution, w: &Dmc) -> Result<f64> {
    let out = w.output_marginal(px)?;
    let mut i = 0.0;
    for x in 0..w.input_size() {
        for y in 0..w.output_size() {
            let q = px.prob(x) * w.prob(y, x);
            if q > 0.0 {
                i += q * (w.prob(y, x) / out[y]).ln();
            }
        }
    }
    Ok(i.max(0.0))
}
