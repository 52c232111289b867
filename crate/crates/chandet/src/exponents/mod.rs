//! Achievable error exponents for joint detection/decoding.
//!
//! `te` holds the exact type-enumeration exponents (random coding,
//! expurgated, low-rate and high-rate detectors, critical rate, universal),
//! `bsc` the closed-form fast paths for pairs of binary symmetric channels
//! under uniform input, and `gf` the Gallager/Forney-style bounds.

pub mod bsc;
pub mod gf;
pub mod te;

use std::collections::HashMap;

use crate::channel::{Dmc, InputDistribution};
use crate::joint::JointType;
use crate::{Error, Result};

/// Inputs of an exponent evaluation.
#[derive(Clone, Debug)]
pub struct ExponentQuery {
    /// Rate in nats per symbol, >= 0.
    pub rate: f64,
    /// Detection threshold slope in nats per symbol, any sign.
    pub alpha: f64,
    pub px: InputDistribution,
    pub w: Dmc,
    pub v: Dmc,
}

impl ExponentQuery {
    pub fn new(rate: f64, alpha: f64, px: InputDistribution, w: Dmc, v: Dmc) -> Result<Self> {
        if rate < 0.0 {
            return Err(Error::InvalidParameter(format!("negative rate {rate}")));
        }
        if w.input_size() != px.len() || v.input_size() != px.len() {
            return Err(Error::DimensionMismatch("channels vs input distribution".into()));
        }
        if w.output_size() != v.output_size() {
            return Err(Error::DimensionMismatch("W and V output alphabets".into()));
        }
        Ok(ExponentQuery { rate, alpha, px, w, v })
    }

    /// The matching misdetection query: negated alpha, channels swapped.
    pub fn md_form(&self) -> ExponentQuery {
        ExponentQuery {
            rate: self.rate,
            alpha: -self.alpha,
            px: self.px.clone(),
            w: self.v.clone(),
            v: self.w.clone(),
        }
    }
}

/// Which branch of a two-branch minimum produced the value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    A,
    B,
    None,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::A => "A",
            Branch::B => "B",
            Branch::None => "",
        }
    }
}

/// Optimizing witnesses reported alongside an exponent value.
#[derive(Clone, Debug)]
pub enum Witness {
    /// Symmetric binary witnesses: crossover of the transmitted-codeword
    /// type and, for the B branch, of the competing type.
    Crossovers { q_tilde: f64, q_bar: Option<f64> },
    /// General joint-type witnesses.
    Joints { q_tilde: Option<JointType>, q_bar: Option<JointType> },
    /// Expurgated-bound witnesses: Chernoff parameter and pairing weight.
    Expurgated { s: f64, q: f64 },
    /// Gallager-style parameters.
    Gallager { s: f64, rho: f64 },
    /// Tilted-family parameter of the output-statistics exponent.
    Tilted { mu: f64 },
    None,
}

impl Witness {
    /// Scalar summaries for tabular output: the average crossover of each
    /// type witness where one exists.
    pub fn q_tilde_summary(&self) -> Option<f64> {
        match self {
            Witness::Crossovers { q_tilde, .. } => Some(*q_tilde),
            Witness::Joints { q_tilde, .. } => q_tilde.as_ref().and_then(|q| q.avg_crossover()),
            _ => None,
        }
    }

    pub fn q_bar_summary(&self) -> Option<f64> {
        match self {
            Witness::Crossovers { q_bar, .. } => *q_bar,
            Witness::Joints { q_bar, .. } => q_bar.as_ref().and_then(|q| q.avg_crossover()),
            _ => None,
        }
    }
}

/// An exponent value (possibly +inf) with the branch and witnesses that
/// attained it.
#[derive(Clone, Debug)]
pub struct ExponentResult {
    pub value: f64,
    pub branch: Branch,
    pub witness: Witness,
}

impl ExponentResult {
    pub fn infeasible() -> Self {
        ExponentResult { value: f64::INFINITY, branch: Branch::None, witness: Witness::None }
    }
}

/// Enumeration of conditional types Q_{Y|X} at resolution 1/k with the input
/// marginal pinned to Px, bucketed by (rounded) output marginal.
///
/// The point count is ((k+1 choose |Y|-1) ... )^|X|; it grows quickly with
/// the alphabet sizes, so construction refuses grids beyond a few million
/// points. Binary-pair work should use the closed-form `bsc` paths instead.
pub struct TypeGrid {
    k: usize,
    px: InputDistribution,
    joints: Vec<JointType>,
    mutual_infos: Vec<f64>,
    y_marginals: Vec<Vec<f64>>,
    buckets: HashMap<Vec<u32>, Vec<usize>>,
}

const MAX_GRID_POINTS: usize = 1 << 22;

impl TypeGrid {
    pub fn new(px: &InputDistribution, ny: usize, k: usize) -> Result<Self> {
        if k == 0 || ny == 0 {
            return Err(Error::InvalidParameter("grid needs k >= 1 and outputs >= 1".into()));
        }
        let nx = px.len();
        let rows = simplex_grid(ny, k);
        let total = rows.len().checked_pow(nx as u32).unwrap_or(usize::MAX);
        if total > MAX_GRID_POINTS {
            return Err(Error::InvalidParameter(format!(
                "type grid would have {total} points; lower the resolution k={k} \
                 for this {nx}x{ny} alphabet"
            )));
        }
        let mut joints = Vec::with_capacity(total);
        let mut idx = vec![0usize; nx];
        loop {
            let mut flat = Vec::with_capacity(nx * ny);
            for (x, &ri) in idx.iter().enumerate() {
                for y in 0..ny {
                    flat.push(px.prob(x) * rows[ri][y]);
                }
            }
            joints.push(JointType::from_flat_unchecked(flat, nx, ny));
            let mut d = 0;
            loop {
                if d == nx {
                    break;
                }
                idx[d] += 1;
                if idx[d] < rows.len() {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
            if d == nx {
                break;
            }
        }
        let mutual_infos = joints.iter().map(|q| q.mutual_information()).collect();
        let y_marginals: Vec<Vec<f64>> = joints.iter().map(|q| q.y_marginal()).collect();
        let mut buckets: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
        for (i, m) in y_marginals.iter().enumerate() {
            buckets.entry(Self::bucket_key_of(m, k)).or_default().push(i);
        }
        Ok(TypeGrid { k, px: px.clone(), joints, mutual_infos, y_marginals, buckets })
    }

    fn bucket_key_of(marginal: &[f64], k: usize) -> Vec<u32> {
        marginal.iter().map(|&m| (m * 2.0 * k as f64).round() as u32).collect()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn px(&self) -> &InputDistribution {
        &self.px
    }

    pub fn len(&self) -> usize {
        self.joints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.joints.is_empty()
    }

    pub fn joint(&self, i: usize) -> &JointType {
        &self.joints[i]
    }

    pub fn mutual_info(&self, i: usize) -> f64 {
        self.mutual_infos[i]
    }

    pub fn y_marginal(&self, i: usize) -> &[f64] {
        &self.y_marginals[i]
    }

    /// Indices of grid points whose output marginal rounds to the same
    /// bucket as `marginal` (within 1/(2k) per coordinate).
    pub fn bucket(&self, marginal: &[f64]) -> &[usize] {
        self.buckets
            .get(&Self::bucket_key_of(marginal, self.k))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }
}

/// All probability rows over `ny` outcomes with denominators k.
fn simplex_grid(ny: usize, k: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; ny];
    fill_simplex(&mut out, &mut cur, 0, ny, k);
    out
}

fn fill_simplex(out: &mut Vec<Vec<f64>>, cur: &mut Vec<usize>, pos: usize, ny: usize, left: usize) {
    if pos == ny - 1 {
        cur[pos] = left;
        out.push(cur.iter().map(|&c| c as f64 / (cur.iter().sum::<usize>() as f64)).collect());
        return;
    }
    for c in 0..=left {
        cur[pos] = c;
        fill_simplex(out, cur, pos + 1, ny, left - c);
    }
}
