//! Run configuration: presets and custom metric/vector-field setups.
//!
//! The sign of `g₃₃` is never a symbol. It is the run parameter ε ∈ {+1, -1},
//! chosen explicitly per run, and the two branches are never mixed: upper
//! signs of the reference tables pair with ε = +1, lower signs with ε = -1.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::expr::{rat, Expr, Rational};
use crate::metric::{Metric, MetricError};
use crate::parse::{parse_expr, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Sol3A,
    Sol3B,
    Sol3Lc,
    Custom,
}

impl Preset {
    pub fn parse(name: &str) -> Option<Preset> {
        match name {
            "sol3-a" => Some(Preset::Sol3A),
            "sol3-b" => Some(Preset::Sol3B),
            "sol3-lc" => Some(Preset::Sol3Lc),
            "custom" => Some(Preset::Custom),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Sol3A => "sol3-a",
            Preset::Sol3B => "sol3-b",
            Preset::Sol3Lc => "sol3-lc",
            Preset::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    #[serde(rename = "text")]
    Text,
    #[serde(rename = "json")]
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum NumericCheck {
    Off,
    On { samples: u32, seed: u64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub preset: Preset,
    /// ε = g₃₃ ∈ {+1, -1}.
    pub epsilon: i8,
    pub dimension: usize,
    pub metric_diagonal: Vec<String>,
    pub p_vector: Vec<String>,
    pub declared_symbols: Vec<String>,
    pub output_format: OutputFormat,
    pub numeric_check: NumericCheck,
    /// Extra constant α candidates for the quasi-Einstein rank scan, as
    /// `numerator/denominator` pairs.
    #[serde(default)]
    pub quasi_einstein_alphas: Vec<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("epsilon must be +1 or -1, got {0}")]
    BadEpsilon(i8),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("metric diagonal has {got} entries, dimension is {want}")]
    BadDiagonalLength { want: usize, got: usize },
    #[error("vector field has {got} entries, dimension is {want}")]
    BadVectorLength { want: usize, got: usize },
    #[error("in `{field}`: {source}")]
    Parse {
        field: String,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("config file: {0}")]
    File(String),
}

impl RunConfig {
    pub fn preset(preset: Preset, epsilon: i8) -> Result<RunConfig, ConfigError> {
        if epsilon != 1 && epsilon != -1 {
            return Err(ConfigError::BadEpsilon(epsilon));
        }
        let eps_str = if epsilon == 1 { "1" } else { "-1" };
        let sol_diag = vec![
            "exp(2*x3)".to_string(),
            "exp(-2*x3)".to_string(),
            eps_str.to_string(),
        ];
        let (p_vector, declared_symbols): (Vec<String>, Vec<String>) = match preset {
            Preset::Sol3A => (
                vec!["0".into(), "0".into(), "a".into()],
                vec!["a".into()],
            ),
            Preset::Sol3B => (
                vec!["b".into(), "0".into(), "0".into()],
                vec!["b".into()],
            ),
            Preset::Sol3Lc => (vec!["0".into(), "0".into(), "0".into()], vec![]),
            Preset::Custom => {
                return Err(ConfigError::UnknownPreset(
                    "custom requires a config file".into(),
                ))
            }
        };
        Ok(RunConfig {
            preset,
            epsilon,
            dimension: 3,
            metric_diagonal: sol_diag,
            p_vector,
            declared_symbols,
            output_format: OutputFormat::Text,
            numeric_check: NumericCheck::Off,
            quasi_einstein_alphas: vec![(2, 1)],
        })
    }

    /// Load a custom configuration from a TOML document. Field names match
    /// the serialized form of [`RunConfig`].
    pub fn from_toml(text: &str) -> Result<RunConfig, ConfigError> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| ConfigError::File(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.epsilon != 1 && self.epsilon != -1 {
            return Err(ConfigError::BadEpsilon(self.epsilon));
        }
        if self.metric_diagonal.len() != self.dimension {
            return Err(ConfigError::BadDiagonalLength {
                want: self.dimension,
                got: self.metric_diagonal.len(),
            });
        }
        if self.p_vector.len() != self.dimension {
            return Err(ConfigError::BadVectorLength {
                want: self.dimension,
                got: self.p_vector.len(),
            });
        }
        Ok(())
    }

    pub fn symbol_set(&self) -> BTreeSet<String> {
        self.declared_symbols.iter().cloned().collect()
    }

    fn parse_field(&self, field: &str, text: &str) -> Result<Expr, ConfigError> {
        parse_expr(text, &self.symbol_set()).map_err(|source| ConfigError::Parse {
            field: format!("{field} `{text}`"),
            source,
        })
    }

    pub fn build_metric(&self) -> Result<Metric, ConfigError> {
        let entries: Vec<Expr> = self
            .metric_diagonal
            .iter()
            .map(|s| self.parse_field("metric_diagonal", s))
            .collect::<Result<_, _>>()?;
        let metric = Metric::diagonal(entries)?;
        if let Some(bad) = metric.first_non_unit_entry() {
            return Err(MetricError::NonUnitEntry(bad).into());
        }
        Ok(metric)
    }

    pub fn build_p_vector(&self) -> Result<Vec<Expr>, ConfigError> {
        self.p_vector
            .iter()
            .map(|s| self.parse_field("p_vector", s))
            .collect()
    }

    pub fn alphas(&self) -> Vec<Rational> {
        self.quasi_einstein_alphas
            .iter()
            .map(|(n, d)| rat(*n, *d))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_fully_determine_metric_and_field() {
        let cfg = RunConfig::preset(Preset::Sol3A, 1).unwrap();
        let m = cfg.build_metric().unwrap();
        assert_eq!(m.diag(0), &Expr::exp_weight(2));
        assert_eq!(m.diag(2), &Expr::one());
        let p = cfg.build_p_vector().unwrap();
        assert_eq!(p[2], Expr::func("a", 0));

        let cfg = RunConfig::preset(Preset::Sol3B, -1).unwrap();
        let m = cfg.build_metric().unwrap();
        assert_eq!(m.diag(2), &Expr::from_int(-1));
        let p = cfg.build_p_vector().unwrap();
        assert_eq!(p[0], Expr::func("b", 0));
    }

    #[test]
    fn bad_epsilon_rejected() {
        assert!(matches!(
            RunConfig::preset(Preset::Sol3A, 0),
            Err(ConfigError::BadEpsilon(0))
        ));
    }

    #[test]
    fn toml_roundtrip() {
        let cfg = RunConfig::preset(Preset::Sol3B, 1).unwrap();
        let text = toml::to_string(&cfg).unwrap();
        let parsed = RunConfig::from_toml(&text).unwrap();
        assert_eq!(parsed.p_vector, cfg.p_vector);
        assert_eq!(parsed.epsilon, 1);
    }

    #[test]
    fn custom_toml_with_undeclared_symbol_fails() {
        let text = r#"
preset = "custom"
epsilon = 1
dimension = 3
metric_diagonal = ["1", "1", "1"]
p_vector = ["c", "0", "0"]
declared_symbols = []
output_format = "text"
numeric_check = { mode = "off" }
"#;
        let cfg = RunConfig::from_toml(text).unwrap();
        assert!(matches!(
            cfg.build_p_vector(),
            Err(ConfigError::Parse { .. })
        ));
    }
}
