use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{CandidateWarning, Evidence, Origin};
use crate::frontend::SourceLocation;

pub const RULE_COVER: &str = "swap.cover";
pub const RULE_STATISTICAL: &str = "swap.statistical";

/// A reported swapped-argument pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Warning {
    pub rule_id: &'static str,
    pub origin: Origin,
    pub location: SourceLocation,
    pub callee: String,
    pub caller_name: Option<String>,
    pub pos_i: usize,
    pub pos_j: usize,
    pub arg_i: String,
    pub arg_j: String,
    pub message: String,
    /// Location-independent identity for triage across runs.
    pub fingerprint: String,
    pub evidence: Evidence,
}

impl Warning {
    pub fn from_candidate(cand: &CandidateWarning) -> Self {
        let call = &cand.call;
        let text = |p: usize| {
            call.arg_source_texts
                .get(p - 1)
                .cloned()
                .unwrap_or_default()
        };
        let (arg_i, arg_j) = (text(cand.pos_i), text(cand.pos_j));
        let rule_id = match cand.origin {
            Origin::CoverChecker => RULE_COVER,
            Origin::StatisticalChecker => RULE_STATISTICAL,
        };
        let message = describe(cand, &arg_i, &arg_j);
        let fingerprint = fingerprint(&call.callee, &arg_i, &arg_j, cand.pos_i, cand.pos_j, rule_id);
        Warning {
            rule_id,
            origin: cand.origin,
            location: call.location.clone(),
            callee: call.callee.clone(),
            caller_name: call.caller_name.clone(),
            pos_i: cand.pos_i,
            pos_j: cand.pos_j,
            arg_i,
            arg_j,
            message,
            fingerprint,
            evidence: cand.evidence.clone(),
        }
    }

    /// Sort key: file, line, column, then positions.
    pub fn sort_key(&self) -> (&str, u32, u32, usize, usize) {
        (
            &self.location.file_path,
            self.location.line,
            self.location.column,
            self.pos_i,
            self.pos_j,
        )
    }
}

fn describe(cand: &CandidateWarning, arg_i: &str, arg_j: &str) -> String {
    let (i, j) = (cand.pos_i, cand.pos_j);
    let f = &cand.call.callee;
    let head = format!("arguments {i} (`{arg_i}`) and {j} (`{arg_j}`) of `{f}` may be swapped");
    match &cand.evidence {
        Evidence::Cover { .. } => {
            let param = |p: usize| {
                cand.decl
                    .as_ref()
                    .and_then(|d| d.param_name(p))
                    .unwrap_or("?")
                    .to_owned()
            };
            format!(
                "{head}: `{arg_i}` matches parameter `{}` and `{arg_j}` matches parameter `{}`",
                param(j),
                param(i)
            )
        }
        Evidence::Statistical { a_i, a_j, .. } => format!(
            "{head}: across the corpus `{a_i}` usually appears at position {j} and `{a_j}` at position {i}"
        ),
    }
}

/// sha256 over callee, the two argument texts (whitespace-normalized),
/// positions and rule id. File and line are deliberately excluded.
pub fn fingerprint(callee: &str, arg_i: &str, arg_j: &str, pos_i: usize, pos_j: usize, rule_id: &str) -> String {
    let norm = |s: &str| s.split_whitespace().collect::<Vec<_>>().join(" ");
    let mut h = Sha256::new();
    for part in [
        callee.to_owned(),
        norm(arg_i),
        norm(arg_j),
        pos_i.to_string(),
        pos_j.to_string(),
        rule_id.to_owned(),
    ] {
        h.update(part.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}
