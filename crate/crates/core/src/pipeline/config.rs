use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::hypergraph::DEFAULT_EDGE_CAP;
use crate::rational::{format_rational, int, parse_rational, ratio, ser_rational, Rational};

/// Constants of the enlargement driver. The hierarchy
/// `0 < ε <= γ <= δ <= η < 1` is checked by [`PipelineConfig::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineConfig {
    #[serde(serialize_with = "ser_rational")]
    pub eps: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub gamma: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub delta: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub eta: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub beta: Rational,
    /// Blow-up factor per level.
    pub r: usize,
    /// Most increments the driver attempts.
    pub l_max: usize,
    /// Largest blown edge count that is materialised.
    pub materialise_cap: usize,
    pub seed: u64,
}

/// On-disk form: every field optional, rationals as `"p/q"` strings.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfigFile {
    pub eps: Option<String>,
    pub gamma: Option<String>,
    pub delta: Option<String>,
    pub eta: Option<String>,
    pub beta: Option<String>,
    pub r: Option<usize>,
    pub l_max: Option<usize>,
    pub materialise_cap: Option<usize>,
    pub seed: Option<u64>,
}

impl PipelineConfig {
    /// Defaults for uniformity `k`: `ε = 1/100`, `γ = 1/50`, `δ = 1/25`,
    /// `η = 1/10`, `β = 1/(2·k!)`, `r = k!`.
    pub fn defaults(k: usize) -> Self {
        let kf = factorial(k);
        PipelineConfig {
            eps: ratio(1, 100),
            gamma: ratio(1, 50),
            delta: ratio(1, 25),
            eta: ratio(1, 10),
            beta: Rational::one() / int(2 * kf as u128),
            r: kf as usize,
            l_max: 8,
            materialise_cap: DEFAULT_EDGE_CAP,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let zero = Rational::zero();
        let one = Rational::one();
        let chain = [&self.eps, &self.gamma, &self.delta, &self.eta];
        if self.eps <= zero || self.eta >= one || chain.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < eps <= gamma <= delta <= eta < 1, got {}",
                chain.iter().map(|v| format_rational(v)).collect::<Vec<_>>().join(", ")
            )));
        }
        if self.beta <= zero || self.beta > one {
            return Err(Error::InvalidParameter("beta must lie in (0, 1]".into()));
        }
        if self.r < 1 {
            return Err(Error::InvalidParameter("r must be at least 1".into()));
        }
        Ok(())
    }

    pub fn from_file(file: &PipelineConfigFile, k: usize) -> Result<Self> {
        let mut cfg = Self::defaults(k);
        let set = |slot: &mut Rational, text: &Option<String>| -> Result<()> {
            if let Some(t) = text {
                *slot = parse_rational(t)?;
            }
            Ok(())
        };
        set(&mut cfg.eps, &file.eps)?;
        set(&mut cfg.gamma, &file.gamma)?;
        set(&mut cfg.delta, &file.delta)?;
        set(&mut cfg.eta, &file.eta)?;
        set(&mut cfg.beta, &file.beta)?;
        cfg.r = file.r.unwrap_or(cfg.r);
        cfg.l_max = file.l_max.unwrap_or(cfg.l_max);
        cfg.materialise_cap = file.materialise_cap.unwrap_or(cfg.materialise_cap);
        cfg.seed = file.seed.unwrap_or(cfg.seed);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn parse(text: &str, k: usize) -> Result<Self> {
        let file: PipelineConfigFile =
            serde_json::from_str(text).map_err(|e| Error::MalformedJson(e.to_string()))?;
        Self::from_file(&file, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_k() {
        let cfg = PipelineConfig::defaults(3);
        assert_eq!(cfg.r, 6);
        assert_eq!(cfg.beta, ratio(1, 12));
        cfg.validate().unwrap();
    }

    #[test]
    fn parses_partial_files() {
        let cfg = PipelineConfig::parse(r#"{"eta": "1/5", "seed": 9}"#, 4).unwrap();
        assert_eq!(cfg.eta, ratio(1, 5));
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.r, 24);
        assert_eq!(PipelineConfig::parse(r#"{"eta": "1/1000"}"#, 3).unwrap_err().code(), "invalid-parameter");
        assert_eq!(PipelineConfig::parse(r#"{"zeta": "1"}"#, 3).unwrap_err().code(), "malformed-json");
    }
}
