//! JSON configuration schema shared by the library and the CLI.
//!
//! Channels arrive either as explicit stochastic matrices
//! `{"W": [[..],[..]], "V": [[..],[..]], "Px": [..]}` or through the BSC
//! shorthand `{"bsc": {"w": 0.1, "v": 0.4}}`, which expands to 2x2 matrices
//! with a uniform input distribution. Channel sets are
//! `{"finite": [channel, ..]}` or `{"bsc_interval": {"lo":, "hi":, "grid":}}`.

use serde::Deserialize;

use crate::channel::{BinaryChannelPair, Dmc, InputDistribution};
use crate::composite::ChannelSet;
use crate::detectors::DetectorRule;
use crate::{Error, Result};

#[derive(Clone, Debug, Default, Deserialize)]
pub struct ConfigFile {
    #[serde(rename = "W")]
    pub w: Option<Vec<Vec<f64>>>,
    #[serde(rename = "V")]
    pub v: Option<Vec<Vec<f64>>>,
    #[serde(rename = "Px")]
    pub px: Option<Vec<f64>>,
    pub bsc: Option<BscShorthand>,
    pub w_set: Option<ChannelSetSpec>,
    pub v_set: Option<ChannelSetSpec>,
    pub rate: Option<RateSpec>,
    pub alpha: Option<AlphaSpec>,
    pub methods: Option<Vec<String>>,
    pub detector: Option<DetectorSpec>,
    pub ensemble: Option<EnsembleConfig>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub resolution: Option<usize>,
    pub output: Option<String>,
    pub format: Option<String>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
pub struct BscShorthand {
    pub w: f64,
    pub v: f64,
}

/// A rate either in nats or as a fraction of the W-channel mutual
/// information, written `"xC:0.5"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RateSpec {
    Nats(f64),
    Tagged(String),
}

impl RateSpec {
    pub fn parse_flag(text: &str) -> Result<RateSpec> {
        if let Ok(v) = text.parse::<f64>() {
            Ok(RateSpec::Nats(v))
        } else {
            Ok(RateSpec::Tagged(text.to_string()))
        }
    }

    /// Resolve to nats given the capacity of the W channel.
    pub fn resolve(&self, c_w: f64) -> Result<f64> {
        match self {
            RateSpec::Nats(r) => {
                if *r < 0.0 {
                    Err(Error::Config(format!("negative rate {r}")))
                } else {
                    Ok(*r)
                }
            }
            RateSpec::Tagged(s) => {
                let frac = s
                    .strip_prefix("xC:")
                    .ok_or_else(|| Error::Config(format!("rate '{s}' is neither nats nor xC:f")))?
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("rate fraction in '{s}': {e}")))?;
                if frac < 0.0 {
                    return Err(Error::Config(format!("negative rate fraction in '{s}'")));
                }
                Ok(frac * c_w)
            }
        }
    }
}

/// A detection threshold grid: a single value, an explicit list, or
/// `{"start":, "stop":, "step":}` (inclusive of the stop within half a step).
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Single(f64),
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl AlphaSpec {
    pub fn parse_flag(text: &str) -> Result<AlphaSpec> {
        if let Ok(v) = text.parse::<f64>() {
            return Ok(AlphaSpec::Single(v));
        }
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() == 3 {
            let nums: Result<Vec<f64>> = parts
                .iter()
                .map(|p| {
                    p.parse::<f64>()
                        .map_err(|e| Error::Config(format!("alpha grid '{text}': {e}")))
                })
                .collect();
            let nums = nums?;
            return Ok(AlphaSpec::Range { start: nums[0], stop: nums[1], step: nums[2] });
        }
        Err(Error::Config(format!("alpha '{text}' is neither a number nor start:stop:step")))
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            AlphaSpec::Single(a) => Ok(vec![*a]),
            AlphaSpec::List(v) => {
                if v.is_empty() {
                    Err(Error::Config("empty alpha list".into()))
                } else {
                    Ok(v.clone())
                }
            }
            AlphaSpec::Range { start, stop, step } => {
                if *step <= 0.0 || stop < start {
                    return Err(Error::Config(format!(
                        "alpha range {start}:{stop}:{step} is not increasing"
                    )));
                }
                let mut out = Vec::new();
                let mut a = *start;
                while a <= stop + 0.5 * step {
                    out.push(a);
                    a += step;
                }
                Ok(out)
            }
        }
    }
}

/// A single channel inside a set: a matrix or a BSC crossover.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ChannelSpec {
    Matrix(Vec<Vec<f64>>),
    Bsc { bsc: f64 },
}

impl ChannelSpec {
    pub fn resolve(&self) -> Result<Dmc> {
        match self {
            ChannelSpec::Matrix(rows) => Dmc::new(rows.clone()),
            ChannelSpec::Bsc { bsc } => Dmc::bsc(*bsc),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ChannelSetSpec {
    Finite { finite: Vec<ChannelSpec> },
    Interval { bsc_interval: IntervalSpec },
}

#[derive(Clone, Copy, Debug, Deserialize)]
pub struct IntervalSpec {
    pub lo: f64,
    pub hi: f64,
    #[serde(default = "default_interval_grid")]
    pub grid: usize,
}

fn default_interval_grid() -> usize {
    crate::composite::DEFAULT_INTERVAL_GRID
}

impl ChannelSetSpec {
    pub fn resolve(&self) -> Result<ChannelSet> {
        match self {
            ChannelSetSpec::Finite { finite } => {
                let members = finite.iter().map(|c| c.resolve()).collect::<Result<Vec<_>>>()?;
                ChannelSet::finite(members)
            }
            ChannelSetSpec::Interval { bsc_interval } => {
                ChannelSet::bsc_interval(bsc_interval.lo, bsc_interval.hi, bsc_interval.grid)
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct DetectorSpec {
    pub rule: String,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
}

impl DetectorSpec {
    pub fn build(
        &self,
        w: &Dmc,
        v: &Dmc,
        px: &InputDistribution,
        n: usize,
        w_set: Option<&ChannelSet>,
        v_set: Option<&ChannelSet>,
    ) -> Result<DetectorRule> {
        let alpha = self.alpha.unwrap_or(0.0);
        match self.rule.as_str() {
            "optimal" => match (self.a, self.b) {
                (Some(a), Some(b)) => DetectorRule::optimal(w.clone(), v.clone(), a, b),
                _ => Ok(DetectorRule::optimal_rates(
                    w.clone(),
                    v.clone(),
                    alpha,
                    self.beta.unwrap_or(0.0),
                    n,
                )),
            },
            "asymptotic" => Ok(DetectorRule::Asymptotic { w: w.clone(), v: v.clone(), alpha }),
            "type_enum" => Ok(DetectorRule::TypeEnum {
                w: w.clone(),
                v: v.clone(),
                alpha,
                beta: self.beta.unwrap_or(0.0),
            }),
            "lowrate" => Ok(DetectorRule::LowRate { w: w.clone(), v: v.clone(), alpha }),
            "highrate" => Ok(DetectorRule::HighRate {
                px: px.clone(),
                w: w.clone(),
                v: v.clone(),
                alpha,
            }),
            "universal" => {
                let (ws, vs) = match (w_set, v_set) {
                    (Some(a), Some(b)) => (a.clone(), b.clone()),
                    _ => (
                        ChannelSet::finite(vec![w.clone()])?,
                        ChannelSet::finite(vec![v.clone()])?,
                    ),
                };
                Ok(DetectorRule::Universal { w_set: ws, v_set: vs, alpha })
            }
            other => Err(Error::Config(format!("unknown detector rule '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
pub struct EnsembleConfig {
    pub kind: Option<String>,
    pub n: Option<usize>,
    pub ns: Option<Vec<usize>>,
    pub fresh_code: Option<bool>,
    pub mode: Option<String>,
}

/// Channels resolved from a config: the pair, the input distribution, and
/// the BSC shorthand when both channels are symmetric.
#[derive(Clone, Debug)]
pub struct ResolvedChannels {
    pub w: Dmc,
    pub v: Dmc,
    pub px: InputDistribution,
    pub pair: Option<BinaryChannelPair>,
}

pub fn parse_config(text: &str) -> Result<ConfigFile> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config JSON: {e}")))
}

pub fn resolve_channels(cfg: &ConfigFile) -> Result<ResolvedChannels> {
    let (w, v) = if let Some(b) = &cfg.bsc {
        (Dmc::bsc(b.w)?, Dmc::bsc(b.v)?)
    } else {
        let w = cfg
            .w
            .as_ref()
            .ok_or_else(|| Error::Config("missing channel spec: provide W/V or bsc".into()))?;
        let v = cfg
            .v
            .as_ref()
            .ok_or_else(|| Error::Config("missing channel spec: provide W/V or bsc".into()))?;
        (Dmc::new(w.clone())?, Dmc::new(v.clone())?)
    };
    if w.input_size() != v.input_size() || w.output_size() != v.output_size() {
        return Err(Error::Config("W and V must share alphabets".into()));
    }
    let px = match &cfg.px {
        Some(p) => InputDistribution::new(p.clone())?,
        None => InputDistribution::uniform(w.input_size()),
    };
    if px.len() != w.input_size() {
        return Err(Error::Config("Px length does not match the channel inputs".into()));
    }
    let pair = match (w.as_bsc(), v.as_bsc()) {
        (Some(a), Some(b)) if a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0 => {
            BinaryChannelPair::new(a, b).ok()
        }
        _ => None,
    };
    Ok(ResolvedChannels { w, v, px, pair })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bsc_shorthand_expands() {
        let cfg = parse_config(r#"{"bsc": {"w": 0.1, "v": 0.4}}"#).unwrap();
        let ch = resolve_channels(&cfg).unwrap();
        assert_eq!(ch.w.prob(1, 0), 0.1);
        assert_eq!(ch.v.prob(0, 1), 0.4);
        assert_eq!(ch.px.prob(0), 0.5);
        assert!(ch.pair.is_some());
    }

    #[test]
    fn explicit_matrices_and_px() {
        let cfg = parse_config(
            r#"{"W": [[0.9, 0.1], [0.2, 0.8]], "V": [[0.5, 0.5], [0.5, 0.5]],
                "Px": [0.3, 0.7]}"#,
        )
        .unwrap();
        let ch = resolve_channels(&cfg).unwrap();
        assert_eq!(ch.w.prob(0, 1), 0.2);
        assert!((ch.px.prob(1) - 0.7).abs() < 1e-15);
        assert!(ch.pair.is_none());
    }

    #[test]
    fn rejects_missing_and_invalid() {
        let cfg = parse_config(r#"{"Px": [0.5, 0.5]}"#).unwrap();
        assert!(matches!(resolve_channels(&cfg), Err(Error::Config(_))));
        let cfg = parse_config(
            r#"{"W": [[0.9, 0.2], [0.2, 0.8]], "V": [[0.5, 0.5], [0.5, 0.5]]}"#,
        )
        .unwrap();
        assert!(resolve_channels(&cfg).is_err());
    }

    #[test]
    fn rate_and_alpha_specs() {
        assert_eq!(RateSpec::parse_flag("0.25").unwrap().resolve(1.0).unwrap(), 0.25);
        let r = RateSpec::parse_flag("xC:0.5").unwrap().resolve(0.368).unwrap();
        assert!((r - 0.184).abs() < 1e-12);
        assert!(RateSpec::Tagged("half".into()).resolve(1.0).is_err());

        let a = AlphaSpec::parse_flag("-0.2:0.2:0.1").unwrap().values().unwrap();
        assert_eq!(a.len(), 5);
        assert!((a[4] - 0.2).abs() < 1e-12);
        assert_eq!(AlphaSpec::Single(0.3).values().unwrap(), vec![0.3]);
    }

    #[test]
    fn channel_set_specs() {
        let cfg = parse_config(
            r#"{"bsc": {"w": 0.1, "v": 0.4},
                "w_set": {"bsc_interval": {"lo": 0.05, "hi": 0.15}},
                "v_set": {"finite": [{"bsc": 0.4}, [[0.55, 0.45], [0.45, 0.55]]]}}"#,
        )
        .unwrap();
        let ws = cfg.w_set.unwrap().resolve().unwrap();
        match ws {
            ChannelSet::BscInterval { lo, hi, grid } => {
                assert_eq!((lo, hi), (0.05, 0.15));
                assert_eq!(grid, crate::composite::DEFAULT_INTERVAL_GRID);
            }
            _ => panic!("expected interval"),
        }
        let vs = cfg.v_set.unwrap().resolve().unwrap();
        match vs {
            ChannelSet::Finite(m) => assert_eq!(m.len(), 2),
            _ => panic!("expected finite"),
        }
    }
}
