//! Claim corpus files and batch checking.
//!
//! ```json
//! {"schema": "coverforge/1",
//!  "certificates": {"c1": {"side": "sierpinski", "entries": [...]}},
//!  "claims": [{"id": "...", "k": 18107, "b": 2, "z": 0,
//!              "tclass": {"t0": 25, "w": 56}, "side": "sierpinski",
//!              "certificate": "c1"}]}
//! ```
//!
//! A bare array of claims is also accepted. A claim's certificate is either a
//! name from `certificates` or an inline certificate object.

use super::{check_family, check_repdigit_family, FamilyClaim, FamilyVerdict, TClass};
use crate::arith::{Nat, ResidueClass};
use crate::certificates::{CoverCertificate, Side};
use crate::error::{Error, Result};
use crate::json::{self, field_error};
use crate::repforms::RepForm;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::path::Path;

const BUNDLED: &str = include_str!("../../corpus/claims.json");

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClaim {
    id: String,
    #[serde(with = "crate::json::nat")]
    k: Nat,
    #[serde(with = "crate::json::nat")]
    b: Nat,
    #[serde(default)]
    z: u32,
    tclass: TClass,
    side: Side,
    certificate: CoverCertificate,
    #[serde(default)]
    expected_class: Option<ResidueClass>,
    #[serde(default)]
    base_class: Option<ResidueClass>,
}

impl TryFrom<RawClaim> for FamilyClaim {
    type Error = Error;

    fn try_from(raw: RawClaim) -> Result<Self> {
        if let Some(class) = &raw.base_class {
            if !class.contains(&raw.b) {
                return Err(Error::Invalid(format!(
                    "claim `{}`: base {} is not in {class}",
                    raw.id, raw.b
                )));
            }
        }
        Ok(FamilyClaim {
            form: RepForm::new(raw.k, raw.b, raw.z)?,
            id: raw.id,
            tclass: raw.tclass,
            side: raw.side,
            certificate: raw.certificate,
            expected_class: raw.expected_class,
            base_class: raw.base_class,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClaimCorpus {
    pub schema: &'static str,
    pub claims: Vec<FamilyClaim>,
}

impl ClaimCorpus {
    pub fn new(claims: Vec<FamilyClaim>) -> Self {
        ClaimCorpus {
            schema: json::SCHEMA,
            claims,
        }
    }

    pub fn from_json(source_name: &str, text: &str) -> Result<Self> {
        let doc: Value = json::from_str(source_name, text)?;
        let (named, claims) = match doc {
            Value::Array(claims) => (Map::new(), claims),
            Value::Object(mut obj) => {
                let schema = obj
                    .remove("schema")
                    .map(|v| {
                        v.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| field_error(source_name, "`schema` must be a string"))
                    })
                    .transpose()?;
                json::check_schema(&schema)?;
                let named = match obj.remove("certificates") {
                    None => Map::new(),
                    Some(Value::Object(m)) => m,
                    Some(_) => {
                        return Err(field_error(source_name, "`certificates` must be an object"))
                    }
                };
                let claims = match obj.remove("claims") {
                    Some(Value::Array(c)) => c,
                    _ => return Err(field_error(source_name, "`claims` must be an array")),
                };
                if let Some(key) = obj.keys().next() {
                    return Err(field_error(source_name, &format!("unknown field `{key}`")));
                }
                (named, claims)
            }
            _ => {
                return Err(field_error(
                    source_name,
                    "expected an array of claims or a corpus object",
                ))
            }
        };
        let mut out = Vec::with_capacity(claims.len());
        for (i, mut claim) in claims.into_iter().enumerate() {
            let label = claim
                .get("id")
                .and_then(Value::as_str)
                .map(|s| format!("claim `{s}`"))
                .unwrap_or_else(|| format!("claim #{i}"));
            if let Some(slot) = claim.get_mut("certificate") {
                if let Value::String(name) = slot {
                    let cert = named.get(name.as_str()).ok_or_else(|| {
                        Error::UnresolvedCertificate(format!("{label} refers to `{name}`"))
                    })?;
                    *slot = cert.clone();
                }
            }
            let raw: RawClaim = serde_json::from_value(claim)
                .map_err(|e| field_error(source_name, &format!("{label}: {e}")))?;
            out.push(FamilyClaim::try_from(raw)?);
        }
        Ok(ClaimCorpus::new(out))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&path.display().to_string(), &text)
    }

    pub fn len(&self) -> usize {
        self.claims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.claims.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&FamilyClaim> {
        self.claims.iter().find(|c| c.id == id)
    }
}

/// Every theorem and table row, shipped with the crate.
pub fn bundled_corpus() -> ClaimCorpus {
    ClaimCorpus::from_json("bundled corpus", BUNDLED).expect("bundled corpus parses")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimStatus {
    Proved,
    Failed,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimOutcome {
    pub id: String,
    pub status: ClaimStatus,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<FamilyVerdict>,
}

fn check_one(claim: &FamilyClaim) -> ClaimOutcome {
    let result = match &claim.base_class {
        None => check_family(claim),
        Some(bases) => check_repdigit_family(
            claim.form.k(),
            bases,
            &claim.tclass,
            claim.side,
            &claim.certificate,
        )
        .map(|v| match (&claim.expected_class, v.verdict.proof()) {
            (Some(expected), Some(proof)) if *expected != proof.class => {
                FamilyVerdict::Counterexample {
                    entry: None,
                    reason: super::Failure::ClassMismatch {
                        expected: expected.clone(),
                        found: proof.class.clone(),
                    },
                }
            }
            _ => v.verdict,
        }),
    };
    let (status, detail, verdict) = match result {
        Ok(v) if v.is_proved() => (ClaimStatus::Proved, v.to_string(), Some(v)),
        Ok(v) => (ClaimStatus::Failed, v.to_string(), Some(v)),
        Err(Error::CannotGeneralize {
            reason,
            representative,
        }) => (ClaimStatus::Failed, reason, Some(*representative)),
        Err(e) => (ClaimStatus::Error, e.to_string(), None),
    };
    ClaimOutcome {
        id: claim.id.clone(),
        status,
        detail,
        verdict,
    }
}

/// Checks every claim on a pool of `parallelism` threads; results are
/// ordered by claim id.
pub fn check_corpus(corpus: &ClaimCorpus, parallelism: usize) -> Result<Vec<ClaimOutcome>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
    let mut outcomes: Vec<ClaimOutcome> =
        pool.install(|| corpus.claims.par_iter().map(check_one).collect());
    outcomes.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(outcomes)
}
