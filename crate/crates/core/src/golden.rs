//! Reference component tables ("golden files") and their verification.
//!
//! File format, one entry per line, `#` starts a comment:
//!
//! ```text
//! tensorName indices expressionDSL [suspect]
//! ```
//!
//! `indices` are 1-based digits (`1212`), or `-` for scalars. A trailing
//! `suspect` keyword marks an entry whose printed source value disagrees with
//! the computed one; such entries stay in the file for provenance, are
//! reported separately, and do not fail verification. Expressions are
//! compared as canonical forms, not as strings, so factored and expanded
//! spellings of the same value match.

use serde::{Deserialize, Serialize};

use crate::expr::Expr;
use crate::parse::{parse_expr, ParseError};
use crate::report::Pipeline;

#[derive(Debug, Clone)]
pub struct GoldenEntry {
    pub tensor: String,
    pub indices: Vec<usize>,
    pub expr_text: String,
    pub suspect: bool,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GoldenError {
    #[error("line {line}: expected `tensor indices expression`")]
    Malformed { line: usize },
    #[error("line {line}: bad index digit in `{text}`")]
    BadIndices { line: usize, text: String },
    #[error("line {line}: unknown tensor name `{name}`")]
    UnknownTensor { line: usize, name: String },
    #[error("line {line}: tensor `{name}` takes {want} indices, got {got}")]
    WrongIndexCount {
        line: usize,
        name: String,
        want: usize,
        got: usize,
    },
    #[error("line {line}: index out of range for dimension {dim}")]
    IndexRange { line: usize, dim: usize },
    #[error("line {line}: {source}")]
    Expr {
        line: usize,
        #[source]
        source: ParseError,
    },
}

pub fn parse_golden(text: &str) -> Result<Vec<GoldenEntry>, GoldenError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        let (Some(tensor), Some(idx_text)) = (parts.next(), parts.next()) else {
            return Err(GoldenError::Malformed { line });
        };
        let mut rest: Vec<&str> = parts.collect();
        let suspect = rest.last() == Some(&"suspect");
        if suspect {
            rest.pop();
        }
        if rest.is_empty() {
            return Err(GoldenError::Malformed { line });
        }
        let indices = if idx_text == "-" {
            Vec::new()
        } else {
            idx_text
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .filter(|&d| d >= 1)
                        .map(|d| (d - 1) as usize)
                        .ok_or(GoldenError::BadIndices {
                            line,
                            text: idx_text.to_string(),
                        })
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        out.push(GoldenEntry {
            tensor: tensor.to_string(),
            indices,
            expr_text: rest.join(" "),
            suspect,
            line,
        });
    }
    Ok(out)
}

/// One verified-vs-printed discrepancy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenDiff {
    pub line: usize,
    pub tensor: String,
    pub indices: String,
    pub expected: String,
    pub computed: String,
    pub suspect: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct GoldenSummary {
    pub total: usize,
    pub matched: usize,
    pub suspect_entries: usize,
    /// Diffs on entries *not* annotated suspect; any such diff is a failure.
    pub diffs: Vec<GoldenDiff>,
    /// Diffs on annotated entries, reported for auditability only.
    pub suspect_diffs: Vec<GoldenDiff>,
}

impl GoldenSummary {
    pub fn clean(&self) -> bool {
        self.diffs.is_empty()
    }
}

/// Compare every golden entry against the computed canonical expression.
pub fn verify(pipeline: &Pipeline, entries: &[GoldenEntry]) -> Result<GoldenSummary, GoldenError> {
    let symbols = pipeline.config.symbol_set();
    let mut summary = GoldenSummary {
        total: entries.len(),
        ..Default::default()
    };
    for entry in entries {
        let expected = parse_expr(&entry.expr_text, &symbols).map_err(|source| {
            GoldenError::Expr {
                line: entry.line,
                source,
            }
        })?;
        let computed = lookup(pipeline, entry)?;
        if entry.suspect {
            summary.suspect_entries += 1;
        }
        if computed == expected {
            summary.matched += 1;
        } else {
            let diff = GoldenDiff {
                line: entry.line,
                tensor: entry.tensor.clone(),
                indices: entry
                    .indices
                    .iter()
                    .map(|i| (i + 1).to_string())
                    .collect(),
                expected: expected.to_string(),
                computed: computed.to_string(),
                suspect: entry.suspect,
            };
            if entry.suspect {
                summary.suspect_diffs.push(diff);
            } else {
                summary.diffs.push(diff);
            }
        }
    }
    Ok(summary)
}

type ComponentFn<'a> = Box<dyn Fn(&[usize]) -> Expr + 'a>;

fn lookup(pipeline: &Pipeline, entry: &GoldenEntry) -> Result<Expr, GoldenError> {
    let line = entry.line;
    let name = entry.tensor.as_str();
    let dim = pipeline.metric.dim();
    if entry.indices.iter().any(|&i| i >= dim) {
        return Err(GoldenError::IndexRange { line, dim });
    }
    let want_and_value: (usize, ComponentFn) = match name {
        "Gamma" => (
            3,
            Box::new(|idx: &[usize]| pipeline.curvature.connection.gamma(idx[0], idx[1], idx[2]).clone()),
        ),
        "kappa" => (0, Box::new(|_: &[usize]| pipeline.curvature.kappa.clone())),
        "Ric" => (2, Box::new(|idx: &[usize]| pipeline.curvature.ric.at(idx).clone())),
        "R" | "C" | "K" | "W" | "P" => {
            let t = pipeline.family_tensor(name).unwrap();
            (4, Box::new(move |idx: &[usize]| t.at(idx).clone()))
        }
        "DRic" => (
            3,
            Box::new(|idx: &[usize]| pipeline.grad_ric.at(idx).clone()),
        ),
        "DR" | "DC" | "DK" | "DW" | "DP" => {
            let t = pipeline.grad(&name[1..]).unwrap();
            (5, Box::new(move |idx: &[usize]| t.at(idx).clone()))
        }
        _ => {
            if let Some((e, f)) = parse_dot_name(name) {
                let t = pipeline.grid.dot(e, f);
                (6, Box::new(move |idx: &[usize]| t.at(idx).clone()))
            } else if let Some((z, f)) = parse_q_name(name) {
                let t = pipeline.grid.q(z, f);
                (6, Box::new(move |idx: &[usize]| t.at(idx).clone()))
            } else {
                return Err(GoldenError::UnknownTensor {
                    line,
                    name: name.to_string(),
                });
            }
        }
    };
    let (want, value) = want_and_value;
    if entry.indices.len() != want {
        return Err(GoldenError::WrongIndexCount {
            line,
            name: name.to_string(),
            want,
            got: entry.indices.len(),
        });
    }
    Ok(value(&entry.indices))
}

fn parse_dot_name(name: &str) -> Option<(&str, &str)> {
    let (e, f) = name.split_once('.')?;
    if crate::classify::FAMILY.contains(&e) && crate::classify::FAMILY.contains(&f) {
        Some((e, f))
    } else {
        None
    }
}

fn parse_q_name(name: &str) -> Option<(&str, &str)> {
    let inner = name.strip_prefix("Q(")?.strip_suffix(')')?;
    let (z, f) = inner.split_once(',')?;
    if (z == "g" || z == "Ric") && crate::classify::FAMILY.contains(&f) {
        Some((z, f))
    } else {
        None
    }
}
