//! The combinatorial stratified-model data type, its validation rules and
//! JSON file format.
//!
//! A model lists boundary divisors with their `(N_i, v_i)` data (in global
//! mode `v` stores the gauge-form order `mu_i`) and per-subset stratum
//! payloads as coefficient-ring expressions. Payloads are user-supplied data;
//! the toric module is the only in-repo producer. A subset that is absent is
//! an empty stratum (payload 0), except that naive/dlt models must list the
//! empty subset and global models must not.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::ring::{parse_motive_expr, MotiveExpr};
use crate::toric::{Fan, FanData};
use crate::util::{parse_rational64, rational64_to_string};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ModelKind {
    Naive,
    Dlt,
    GlobalNaive,
    GlobalDlt,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Naive => "naive",
            ModelKind::Dlt => "dlt",
            ModelKind::GlobalNaive => "global_naive",
            ModelKind::GlobalDlt => "global_dlt",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(ModelKind::Naive),
            "dlt" => Ok(ModelKind::Dlt),
            "global_naive" => Ok(ModelKind::GlobalNaive),
            "global_dlt" => Ok(ModelKind::GlobalDlt),
            other => Err(Error::Schema(format!(
                "unknown kind {other:?}; expected naive|dlt|global_naive|global_dlt"
            ))),
        }
    }

    pub fn is_global(&self) -> bool {
        matches!(self, ModelKind::GlobalNaive | ModelKind::GlobalDlt)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One boundary divisor with its exponent data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DivisorDatum {
    pub id: String,
    pub n: Rational64,
    pub v: Rational64,
}

/// One stratum: the subset of divisors it lies on and its class payload.
#[derive(Clone, PartialEq, Debug)]
pub struct StratumDatum {
    pub subset: BTreeSet<String>,
    pub payload: MotiveExpr,
}

/// Full combinatorial model, immutable after load.
#[derive(Clone, PartialEq, Debug)]
pub struct StratifiedModel {
    pub kind: ModelKind,
    /// Ambient dimension; ignored in global mode.
    pub dimension: u32,
    pub r: u32,
    pub divisors: Vec<DivisorDatum>,
    pub strata: Vec<StratumDatum>,
    /// Provenance metadata written by the toric generator; not validated
    /// against the combinatorial data.
    pub fan: Option<Fan>,
}

impl StratifiedModel {
    pub fn divisor(&self, id: &str) -> Option<&DivisorDatum> {
        self.divisors.iter().find(|d| d.id == id)
    }

    /// Payload for a subset; absent subsets are empty strata.
    pub fn payload_for(&self, subset: &BTreeSet<String>) -> MotiveExpr {
        self.strata
            .iter()
            .find(|s| &s.subset == subset)
            .map(|s| s.payload.clone())
            .unwrap_or_else(|| MotiveExpr::zero(self.r))
    }

    /// Check every type invariant; returns all violations, never aborts.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.r == 0 {
            out.push(Violation {
                field: "r".into(),
                rule: "extension index must be positive".into(),
            });
        }
        let mut ids = BTreeSet::new();
        for (i, d) in self.divisors.iter().enumerate() {
            let field = format!("divisors[{i}] ({})", d.id);
            if d.n.is_zero() && d.v.is_zero() {
                out.push(Violation { field: field.clone(), rule: "forbidden (0,0) pair".into() });
            }
            if d.n.is_negative() || d.v.is_negative() {
                out.push(Violation {
                    field: field.clone(),
                    rule: "N and v must be nonnegative".into(),
                });
            }
            if !ids.insert(d.id.clone()) {
                out.push(Violation { field, rule: "duplicate divisor id".into() });
            }
        }
        let mut seen_subsets = BTreeSet::new();
        let mut has_empty = false;
        for (i, s) in self.strata.iter().enumerate() {
            let field = format!("strata[{i}] {{{}}}", subset_label(&s.subset));
            for id in &s.subset {
                if !ids.contains(id) {
                    out.push(Violation {
                        field: field.clone(),
                        rule: format!("references unknown divisor id {id:?}"),
                    });
                }
            }
            if !seen_subsets.insert(s.subset.clone()) {
                out.push(Violation { field: field.clone(), rule: "duplicate subset".into() });
            }
            if s.subset.is_empty() {
                has_empty = true;
            }
            if self.r > 0 && s.payload.r() != self.r {
                out.push(Violation {
                    field,
                    rule: format!(
                        "payload extension index {} differs from model r = {}",
                        s.payload.r(),
                        self.r
                    ),
                });
            }
        }
        if self.kind.is_global() {
            if has_empty {
                out.push(Violation {
                    field: "strata".into(),
                    rule: "global models sum over nonempty subsets only; remove the empty subset"
                        .into(),
                });
            }
            for (i, d) in self.divisors.iter().enumerate() {
                if !(d.n.is_integer() && d.n.numer() > &0) {
                    out.push(Violation {
                        field: format!("divisors[{i}] ({})", d.id),
                        rule: format!("global N must be a positive integer, got {}", d.n),
                    });
                }
            }
        } else if !has_empty {
            out.push(Violation {
                field: "strata".into(),
                rule: "naive/dlt models require the empty-subset stratum".into(),
            });
        }
        out
    }

    /// Validate and wrap violations in an error.
    pub fn ensure_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(violations))
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let file = FileModel {
            kind: self.kind.as_str().to_string(),
            dimension: self.dimension,
            r: self.r,
            divisors: self
                .divisors
                .iter()
                .map(|d| FileDivisor {
                    id: d.id.clone(),
                    n: rational64_to_string(d.n),
                    v: rational64_to_string(d.v),
                })
                .collect(),
            strata: self
                .strata
                .iter()
                .map(|s| FileStratum {
                    subset: s.subset.iter().cloned().collect(),
                    class: s.payload.to_string(),
                })
                .collect(),
            fan: self.fan.as_ref().map(Fan::to_data),
        };
        serde_json::to_value(file).expect("model serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("model serializes")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json_string() + "\n")?;
        Ok(())
    }
}

fn subset_label(subset: &BTreeSet<String>) -> String {
    subset.iter().cloned().collect::<Vec<_>>().join(",")
}

#[derive(Serialize, Deserialize)]
struct FileModel {
    kind: String,
    #[serde(default)]
    dimension: u32,
    r: u32,
    divisors: Vec<FileDivisor>,
    strata: Vec<FileStratum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fan: Option<FanData>,
}

#[derive(Serialize, Deserialize)]
struct FileDivisor {
    id: String,
    #[serde(rename = "N")]
    n: String,
    v: String,
}

#[derive(Serialize, Deserialize)]
struct FileStratum {
    #[serde(rename = "J")]
    subset: Vec<String>,
    class: String,
}

/// Parse a model from JSON text, collecting parse errors with locations, then
/// validate. The result is ready for the engines.
pub fn model_from_json(text: &str) -> Result<StratifiedModel> {
    let file: FileModel =
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("JSON: {e}")))?;
    let kind = ModelKind::parse(&file.kind)?;
    if file.r == 0 {
        return Err(Error::Schema("r must be a positive integer".into()));
    }
    let mut problems: Vec<String> = Vec::new();
    let mut divisors = Vec::new();
    for (i, d) in file.divisors.iter().enumerate() {
        let n = parse_rational64(&d.n)
            .map_err(|e| problems.push(format!("divisors[{i}].N: {e}")))
            .ok();
        let v = parse_rational64(&d.v)
            .map_err(|e| problems.push(format!("divisors[{i}].v: {e}")))
            .ok();
        if let (Some(n), Some(v)) = (n, v) {
            divisors.push(DivisorDatum { id: d.id.clone(), n, v });
        }
    }
    let mut strata = Vec::new();
    for (i, s) in file.strata.iter().enumerate() {
        let mut subset = BTreeSet::new();
        for id in &s.subset {
            if !subset.insert(id.clone()) {
                problems.push(format!("strata[{i}].J: duplicate id {id:?} inside one subset"));
            }
        }
        match parse_motive_expr(&s.class, file.r) {
            Ok(payload) => strata.push(StratumDatum { subset, payload }),
            Err(e) => problems.push(format!("strata[{i}].class: {e}")),
        }
    }
    let fan = match &file.fan {
        Some(data) => Some(
            Fan::from_data(data).map_err(|e| Error::Schema(format!("fan: {e}")))?,
        ),
        None => None,
    };
    if !problems.is_empty() {
        return Err(Error::Schema(problems.join("; ")));
    }
    let model = StratifiedModel {
        kind,
        dimension: file.dimension,
        r: file.r,
        divisors,
        strata,
        fan,
    };
    model.ensure_valid()?;
    Ok(model)
}

/// Load and validate a model file.
pub fn load_model(path: &Path) -> Result<StratifiedModel> {
    let text = std::fs::read_to_string(path)?;
    model_from_json(&text)
}
