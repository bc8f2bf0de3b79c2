//! End-to-end pipeline orchestration and report serialization.
//!
//! A run is deterministic: the same configuration produces byte-identical
//! reports, including JSON key order. All collections are ordered and no
//! hashing-based container appears anywhere near the output path.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::classify::{
    classify_all_pairs, codazzi_and_cyclic, compatibility, einstein_level, quasi_einstein,
    recurrent_2forms, roter_decomposition, ProductGrid, Relation, FAMILY,
};
use crate::config::{ConfigError, NumericCheck, RunConfig};
use crate::connection::{covariant_derivative, ssnm};
use crate::curvature::CurvatureSet;
use crate::frac::FracExpr;
use crate::golden::GoldenSummary;
use crate::metric::Metric;
use crate::numeric::NumericSummary;
use crate::tensor::Tensor;

/// Everything computed for one configuration, kept around so golden
/// verification and the numeric cross-check reuse the same tensors.
pub struct Pipeline {
    pub config: RunConfig,
    pub metric: Metric,
    pub curvature: CurvatureSet,
    pub grad_ric: Tensor,
    /// First covariant derivatives of R, C, K, W, P, keyed by tensor name.
    pub grads: BTreeMap<String, Tensor>,
    pub grid: ProductGrid,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

macro_rules! internal {
    ($e:expr) => {
        $e.map_err(|err| RunError::Internal(err.to_string()))?
    };
}

impl Pipeline {
    pub fn new(config: RunConfig) -> Result<Self, RunError> {
        config.validate()?;
        let metric = config.build_metric()?;
        let p = config.build_p_vector()?;
        let conn = internal!(ssnm(&metric, &p));
        let curvature = internal!(CurvatureSet::compute(conn, &metric));
        let grad_ric = internal!(covariant_derivative(
            &curvature.connection,
            &curvature.ric
        ));
        let mut grads = BTreeMap::new();
        for (name, t) in curvature.family() {
            grads.insert(
                name.to_string(),
                internal!(covariant_derivative(&curvature.connection, t)),
            );
        }
        let grid = internal!(ProductGrid::compute(&curvature, &metric));
        Ok(Pipeline {
            config,
            metric,
            curvature,
            grad_ric,
            grads,
            grid,
        })
    }

    pub fn family_tensor(&self, name: &str) -> Option<&Tensor> {
        self.curvature
            .family()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| t)
    }

    pub fn grad(&self, name: &str) -> Option<&Tensor> {
        self.grads.get(name)
    }

    /// Assemble the classification report. `golden` and `numeric` sections
    /// are filled by the verify / check entry points.
    pub fn report(
        &self,
        golden: Option<GoldenSummary>,
        numeric: Option<NumericSummary>,
    ) -> ClassificationReport {
        let relations = classify_all_pairs(&self.grid)
            .into_iter()
            .map(|r| RelationJson {
                product: format!("{}.{}", r.e, r.f),
                zero: r.zero,
                vs_q_g: RelationVerdict::from(&r.vs_q_g),
                vs_q_ric: RelationVerdict::from(&r.vs_q_ric),
            })
            .collect();

        let einstein = einstein_level(&self.curvature.ric, &self.metric);
        let quasi = quasi_einstein(&self.curvature.ric, &self.metric, &self.config.alphas());
        let roter = roter_decomposition(&self.curvature.r, &self.curvature.ric, &self.metric);
        let (codazzi, cyclic_parallel) = codazzi_and_cyclic(&self.grad_ric);

        let compat = FAMILY
            .iter()
            .map(|name| CompatibilityJson {
                tensor: name.to_string(),
                ricci_compatible: compatibility(
                    self.family_tensor(name).unwrap(),
                    &self.curvature.ric,
                    &self.metric,
                ),
            })
            .collect();

        let recurrence = FAMILY
            .iter()
            .map(|name| {
                let entry = recurrent_2forms(
                    self.family_tensor(name).unwrap(),
                    self.grad(name).unwrap(),
                );
                RecurrenceJson {
                    tensor: name.to_string(),
                    recurrent: entry.recurrent,
                    sigma: entry
                        .sigma
                        .map(|s| s.iter().map(frac_string).collect()),
                }
            })
            .collect();

        ClassificationReport {
            config: self.config.clone(),
            components: self.component_listing(),
            relations,
            einstein_level: EinsteinJson {
                level: einstein.level,
                lambda: einstein.coefficients.iter().map(frac_string).collect(),
            },
            quasi_einstein: QuasiEinsteinJson {
                candidates: quasi
                    .candidates
                    .iter()
                    .map(|(a, r)| AlphaRankJson {
                        alpha: a.to_string(),
                        rank: *r,
                    })
                    .collect(),
                minimal_rank: quasi.minimal_rank,
                ricci_simple: quasi.ricci_simple,
                eta_scale: quasi
                    .eta_factorization
                    .as_ref()
                    .map(|(alpha, _)| frac_string(alpha)),
                eta: quasi
                    .eta_factorization
                    .as_ref()
                    .map(|(_, eta)| eta.iter().map(frac_string).collect()),
            },
            roter: RoterJson {
                decomposed: roter.decomposed,
                reduced: roter.reduced,
                mu_ric2_ric2: frac_string(&roter.mu[0]),
                mu_ric_ric2: frac_string(&roter.mu[1]),
                mu_g_ric2: frac_string(&roter.mu[2]),
                mu_ric_ric: frac_string(&roter.mu[3]),
                mu_g_ric: frac_string(&roter.mu[4]),
                mu_g_g: frac_string(&roter.mu[5]),
            },
            ricci_derivative_flags: RicciFlagsJson {
                codazzi,
                cyclic_parallel,
            },
            compatibility: compat,
            recurrence,
            golden_diffs: golden,
            numeric_check: numeric,
        }
    }

    /// Non-zero components of the connection, curvature tensors and their
    /// first covariant derivatives, printed in canonical DSL form.
    fn component_listing(&self) -> BTreeMap<String, Vec<ComponentJson>> {
        let mut out = BTreeMap::new();
        let gamma_list: Vec<ComponentJson> = self
            .curvature
            .connection
            .nonzero()
            .into_iter()
            .map(|(a, i, j, e)| ComponentJson {
                indices: format!("{}{}{}", a + 1, i + 1, j + 1),
                value: e.to_string(),
            })
            .collect();
        out.insert("Gamma".to_string(), gamma_list);
        out.insert(
            "kappa".to_string(),
            vec![ComponentJson {
                indices: String::new(),
                value: self.curvature.kappa.to_string(),
            }],
        );
        out.insert("Ric".to_string(), tensor_components(&self.curvature.ric));
        for (name, t) in self.curvature.family() {
            out.insert(name.to_string(), tensor_components(t));
        }
        out.insert("DRic".to_string(), tensor_components(&self.grad_ric));
        for (name, t) in &self.grads {
            out.insert(format!("D{name}"), tensor_components(t));
        }
        out
    }
}

fn tensor_components(t: &Tensor) -> Vec<ComponentJson> {
    t.nonzero()
        .map(|(idx, e)| ComponentJson {
            indices: idx.iter().map(|i| (i + 1).to_string()).collect(),
            value: e.to_string(),
        })
        .collect()
}

fn frac_string(f: &FracExpr) -> String {
    f.to_string()
}

/// Top-level run entry point.
pub fn run(config: RunConfig) -> Result<ClassificationReport, RunError> {
    let numeric = match config.numeric_check {
        NumericCheck::Off => None,
        NumericCheck::On { samples, seed } => Some((samples, seed)),
    };
    let pipeline = Pipeline::new(config)?;
    let numeric = match numeric {
        None => None,
        Some((samples, seed)) => Some(
            crate::numeric::crosscheck(&pipeline, samples, seed)
                .map_err(|e| RunError::Internal(e.to_string()))?,
        ),
    };
    Ok(pipeline.report(None, numeric))
}

// ---------------------------------------------------------------------------
// Serializable report shape
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub config: RunConfig,
    pub components: BTreeMap<String, Vec<ComponentJson>>,
    pub relations: Vec<RelationJson>,
    pub einstein_level: EinsteinJson,
    pub quasi_einstein: QuasiEinsteinJson,
    pub roter: RoterJson,
    pub ricci_derivative_flags: RicciFlagsJson,
    pub compatibility: Vec<CompatibilityJson>,
    pub recurrence: Vec<RecurrenceJson>,
    pub golden_diffs: Option<GoldenSummary>,
    pub numeric_check: Option<NumericSummary>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ComponentJson {
    pub indices: String,
    pub value: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct RelationVerdict {
    pub kind: String,
    pub coefficient: Option<String>,
    pub constant: Option<bool>,
}

impl From<&Relation> for RelationVerdict {
    fn from(r: &Relation) -> Self {
        match r {
            Relation::Zero => RelationVerdict {
                kind: "zero".into(),
                coefficient: None,
                constant: None,
            },
            Relation::Proportional {
                coefficient,
                constant,
            } => RelationVerdict {
                kind: "proportional".into(),
                coefficient: Some(coefficient.to_string()),
                constant: Some(*constant),
            },
            Relation::Independent => RelationVerdict {
                kind: "independent".into(),
                coefficient: None,
                constant: None,
            },
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RelationJson {
    pub product: String,
    pub zero: bool,
    pub vs_q_g: RelationVerdict,
    pub vs_q_ric: RelationVerdict,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EinsteinJson {
    pub level: Option<u32>,
    /// Coefficients of the monic identity, highest power of Ric first, the
    /// metric term last.
    pub lambda: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AlphaRankJson {
    pub alpha: String,
    pub rank: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct QuasiEinsteinJson {
    pub candidates: Vec<AlphaRankJson>,
    pub minimal_rank: Option<usize>,
    pub ricci_simple: bool,
    pub eta_scale: Option<String>,
    pub eta: Option<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RoterJson {
    pub decomposed: bool,
    pub reduced: bool,
    pub mu_ric2_ric2: String,
    pub mu_ric_ric2: String,
    pub mu_g_ric2: String,
    pub mu_ric_ric: String,
    pub mu_g_ric: String,
    pub mu_g_g: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RicciFlagsJson {
    pub codazzi: bool,
    pub cyclic_parallel: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CompatibilityJson {
    pub tensor: String,
    pub ricci_compatible: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RecurrenceJson {
    pub tensor: String,
    pub recurrent: bool,
    pub sigma: Option<Vec<String>>,
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        use std::fmt::Write;
        writeln!(
            s,
            "run: preset={} epsilon={:+}",
            self.config.preset.name(),
            self.config.epsilon
        )
        .unwrap();
        writeln!(s, "\n[components]").unwrap();
        for (name, comps) in &self.components {
            for c in comps {
                if c.indices.is_empty() {
                    writeln!(s, "{name} = {}", c.value).unwrap();
                } else {
                    writeln!(s, "{name}[{}] = {}", c.indices, c.value).unwrap();
                }
            }
        }
        writeln!(s, "\n[relations]").unwrap();
        for r in &self.relations {
            let describe = |v: &RelationVerdict, z: &str| match v.kind.as_str() {
                "proportional" => format!(
                    "= ({}) Q({z},·){}",
                    v.coefficient.as_deref().unwrap_or("?"),
                    if v.constant == Some(true) { "" } else { " [function coefficient]" }
                ),
                other => other.to_string(),
            };
            if r.zero {
                writeln!(s, "{} = 0", r.product).unwrap();
            } else {
                writeln!(
                    s,
                    "{}: vs Q(g,·): {} | vs Q(Ric,·): {}",
                    r.product,
                    describe(&r.vs_q_g, "g"),
                    describe(&r.vs_q_ric, "Ric")
                )
                .unwrap();
            }
        }
        writeln!(s, "\n[einstein_level]").unwrap();
        match self.einstein_level.level {
            Some(l) => writeln!(
                s,
                "level {l} with lambda = [{}]",
                self.einstein_level.lambda.join(", ")
            )
            .unwrap(),
            None => writeln!(s, "no monic identity up to level 4").unwrap(),
        }
        writeln!(s, "\n[quasi_einstein]").unwrap();
        writeln!(s, "ricci_simple = {}", self.quasi_einstein.ricci_simple).unwrap();
        for c in &self.quasi_einstein.candidates {
            writeln!(s, "rank(Ric - {}·g) = {}", c.alpha, c.rank).unwrap();
        }
        if let (Some(scale), Some(eta)) = (&self.quasi_einstein.eta_scale, &self.quasi_einstein.eta)
        {
            writeln!(s, "Ric = {} · (eta⊗eta), eta = [{}]", scale, eta.join(", ")).unwrap();
        }
        writeln!(s, "\n[roter]").unwrap();
        if self.roter.decomposed {
            writeln!(
                s,
                "decomposed (reduced = {}): R = {}·(Ric2∧Ric2) + {}·(Ric∧Ric2) + {}·(g∧Ric2) + {}·(Ric∧Ric) + {}·(g∧Ric) + {}·(g∧g)",
                self.roter.reduced,
                self.roter.mu_ric2_ric2,
                self.roter.mu_ric_ric2,
                self.roter.mu_g_ric2,
                self.roter.mu_ric_ric,
                self.roter.mu_g_ric,
                self.roter.mu_g_g,
            )
            .unwrap();
        } else {
            writeln!(s, "no decomposition").unwrap();
        }
        writeln!(s, "\n[ricci_derivative_flags]").unwrap();
        writeln!(
            s,
            "codazzi = {}, cyclic_parallel = {}",
            self.ricci_derivative_flags.codazzi, self.ricci_derivative_flags.cyclic_parallel
        )
        .unwrap();
        writeln!(s, "\n[compatibility]").unwrap();
        for c in &self.compatibility {
            writeln!(s, "Ric is {}-compatible: {}", c.tensor, c.ricci_compatible).unwrap();
        }
        writeln!(s, "\n[recurrence]").unwrap();
        for r in &self.recurrence {
            match &r.sigma {
                Some(sigma) if r.recurrent => {
                    writeln!(s, "{}: recurrent, sigma = [{}]", r.tensor, sigma.join(", "))
                        .unwrap()
                }
                _ => writeln!(s, "{}: not recurrent", r.tensor).unwrap(),
            }
        }
        if let Some(g) = &self.golden_diffs {
            writeln!(s, "\n[golden]").unwrap();
            writeln!(
                s,
                "entries = {}, matched = {}, suspect = {}",
                g.total, g.matched, g.suspect_entries
            )
            .unwrap();
            for d in &g.diffs {
                writeln!(
                    s,
                    "DIFF line {} {}[{}]: table has `{}`, computed `{}`",
                    d.line, d.tensor, d.indices, d.expected, d.computed
                )
                .unwrap();
            }
            for d in &g.suspect_diffs {
                writeln!(
                    s,
                    "suspect line {} {}[{}]: table has `{}`, computed `{}`",
                    d.line, d.tensor, d.indices, d.expected, d.computed
                )
                .unwrap();
            }
        }
        if let Some(n) = &self.numeric_check {
            writeln!(s, "\n[numeric_check]").unwrap();
            writeln!(
                s,
                "samples = {}, seed = {}, max relative error = {:.3e} (worst: {})",
                n.samples, n.seed, n.max_rel_error, n.worst
            )
            .unwrap();
        }
        s
    }

    pub fn render(&self) -> String {
        match self.config.output_format {
            crate::config::OutputFormat::Json => self.to_json(),
            crate::config::OutputFormat::Text => self.to_text(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Preset;

    #[test]
    fn identical_configs_give_identical_bytes() {
        let cfg = RunConfig::preset(Preset::Sol3A, 1).unwrap();
        let r1 = run(cfg.clone()).unwrap().to_json();
        let r2 = run(cfg).unwrap().to_json();
        assert_eq!(r1, r2);
    }

    #[test]
    fn json_parse_json_roundtrip_is_byte_identical() {
        // exercise the golden and numeric branches too
        let cfg = RunConfig::preset(Preset::Sol3A, -1).unwrap();
        let pipeline = Pipeline::new(cfg).unwrap();
        let numeric = crate::numeric::crosscheck(&pipeline, 2, 7).unwrap();
        let golden = crate::golden::GoldenSummary {
            total: 1,
            matched: 0,
            suspect_entries: 0,
            diffs: vec![crate::golden::GoldenDiff {
                line: 3,
                tensor: "R".into(),
                indices: "1212".into(),
                expected: "2".into(),
                computed: "-1".into(),
                suspect: false,
            }],
            suspect_diffs: vec![],
        };
        let json = pipeline.report(Some(golden), Some(numeric)).to_json();
        let parsed: ClassificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.to_json(), json);
    }

    #[test]
    fn json_has_schema_keys() {
        let cfg = RunConfig::preset(Preset::Sol3Lc, -1).unwrap();
        let report = run(cfg).unwrap();
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        for key in [
            "config",
            "components",
            "relations",
            "einstein_level",
            "quasi_einstein",
            "roter",
            "ricci_derivative_flags",
            "compatibility",
            "recurrence",
            "golden_diffs",
            "numeric_check",
        ] {
            assert!(value.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(value["relations"].as_array().unwrap().len(), 25);
    }
}
