//! Log-domain arithmetic with an explicit `-inf` sentinel.
//!
//! Sequence likelihoods decay like `e^{-cn}` and underflow long before the
//! blocklengths of interest, so every probability that involves a whole
//! sequence is carried in nats. `f64::NEG_INFINITY` represents probability
//! zero; addition is absorbing and `exp(-inf) = 0`, which is exactly the
//! IEEE behaviour, so [`LogValue`] is a thin newtype that keeps NaN out.

use std::ops::Add;

/// A value in nats, or negative infinity standing for log(0).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogValue(f64);

impl LogValue {
    pub const NEG_INF: LogValue = LogValue(f64::NEG_INFINITY);

    /// Wraps a finite value or negative infinity. Panics on NaN or +inf.
    pub fn new(v: f64) -> Self {
        assert!(!v.is_nan() && v != f64::INFINITY, "invalid log value {v}");
        LogValue(v)
    }

    pub fn from_prob(p: f64) -> Self {
        debug_assert!((0.0..=1.0 + 1e-9).contains(&p));
        if p <= 0.0 {
            Self::NEG_INF
        } else {
            LogValue(p.ln())
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_neg_inf(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn exp(self) -> f64 {
        self.0.exp()
    }
}

impl Add for LogValue {
    type Output = LogValue;
    fn add(self, rhs: LogValue) -> LogValue {
        // -inf + -inf is fine; -inf + finite is absorbing.
        LogValue(self.0 + rhs.0)
    }
}

impl From<LogValue> for f64 {
    fn from(v: LogValue) -> f64 {
        v.0
    }
}

/// log(exp(a) + exp(b)), stable for large magnitudes.
pub fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a > b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

/// log-sum-exp over a slice; NEG_INFINITY for an empty or all-zero input.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

/// x*ln(x) with the 0*log(0) = 0 convention.
pub fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// p*ln(q) with 0*log(0) = 0; -inf when p > 0 and q = 0.
pub fn plnq(p: f64, q: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else if q <= 0.0 {
        f64::NEG_INFINITY
    } else {
        p * q.ln()
    }
}

/// p*ln(p/q) with the usual conventions; +inf when p > 0 and q = 0.
pub fn plnpq(p: f64, q: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else if q <= 0.0 {
        f64::INFINITY
    } else {
        p * (p / q).ln()
    }
}

/// max(x, 0), written to mirror the positive-part bracket in exponent formulas.
pub fn pos(x: f64) -> f64 {
    x.max(0.0)
}
