//! SARIF 2.1.0 output. Only the subset described in `docs/sarif.md` is
//! produced: one run, a fixed rule table, and one result per warning.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::checker::{Warning, RULE_COVER, RULE_STATISTICAL};

pub const SARIF_VERSION: &str = "2.1.0";
pub const SARIF_SCHEMA: &str = "https://json.schemastore.org/sarif-2.1.0.json";

/// Fingerprint key under `partialFingerprints`.
pub const FINGERPRINT_KEY: &str = "swapcheckArgs/v1";

/// Tool identity plus whatever settings should be echoed into the report.
#[derive(Debug, Clone, PartialEq)]
pub struct ToolMeta {
    pub name: String,
    pub version: String,
    /// Effective configuration; written under `tool.driver.properties`.
    pub properties: Map<String, Value>,
}

impl Default for ToolMeta {
    fn default() -> Self {
        ToolMeta {
            name: env!("CARGO_PKG_NAME").to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            properties: Map::new(),
        }
    }
}

#[derive(Serialize)]
struct Log<'a> {
    #[serde(rename = "$schema")]
    schema: &'static str,
    version: &'static str,
    runs: [Run<'a>; 1],
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Run<'a> {
    tool: Tool<'a>,
    results: Vec<SarifResult<'a>>,
}

#[derive(Serialize)]
struct Tool<'a> {
    driver: Driver<'a>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Driver<'a> {
    name: &'a str,
    version: &'a str,
    semantic_version: &'a str,
    rules: Vec<Rule>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    properties: &'a Map<String, Value>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Rule {
    id: &'static str,
    name: &'static str,
    short_description: Text,
    full_description: Text,
    default_configuration: RuleConfig,
}

#[derive(Serialize)]
struct RuleConfig {
    level: &'static str,
}

#[derive(Serialize)]
struct Text {
    text: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SarifResult<'a> {
    rule_id: &'static str,
    rule_index: usize,
    level: &'static str,
    message: Text,
    locations: [Location<'a>; 1],
    partial_fingerprints: Map<String, Value>,
    properties: ResultProperties<'a>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Location<'a> {
    physical_location: PhysicalLocation,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    logical_locations: Vec<LogicalLocation<'a>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PhysicalLocation {
    artifact_location: ArtifactLocation,
    region: Region,
}

#[derive(Serialize)]
struct ArtifactLocation {
    uri: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Region {
    start_line: u32,
    start_column: u32,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct LogicalLocation<'a> {
    name: &'a str,
    kind: &'static str,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ResultProperties<'a> {
    callee: &'a str,
    position_i: usize,
    position_j: usize,
    argument_i: &'a str,
    argument_j: &'a str,
    origin: &'static str,
    evidence: &'a crate::checker::Evidence,
}

fn rules() -> Vec<Rule> {
    vec![
        Rule {
            id: RULE_COVER,
            name: "SwappedArgumentsByName",
            short_description: Text {
                text: "Arguments match the names of each other's parameters".into(),
            },
            full_description: Text {
                text: "Two arguments are poorly covered by the parameters at their own positions and well \
                       covered by the parameters at each other's positions."
                    .into(),
            },
            default_configuration: RuleConfig { level: "warning" },
        },
        Rule {
            id: RULE_STATISTICAL,
            name: "SwappedArgumentsByUsage",
            short_description: Text {
                text: "Arguments usually appear at each other's positions in the corpus".into(),
            },
            full_description: Text {
                text: "Across the corpus, the morpheme of each argument occurs far more often at the other \
                       argument's position than at its own."
                    .into(),
            },
            default_configuration: RuleConfig { level: "warning" },
        },
    ]
}

/// Percent-encodes characters that may not appear in a relative URI reference.
fn path_to_uri(path: &str) -> String {
    let mut out = String::with_capacity(path.len());
    for b in path.bytes() {
        match b {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'.' | b'_' | b'~' | b'/' | b'+' | b'@' | b'=' | b',' => {
                out.push(b as char)
            }
            _ => out.push_str(&format!("%{b:02X}")),
        }
    }
    out
}

/// Renders warnings as a SARIF log. Output depends only on the arguments.
pub fn emit_sarif(warnings: &[Warning], meta: &ToolMeta) -> String {
    let results = warnings
        .iter()
        .map(|w| {
            let rule_index = if w.rule_id == RULE_COVER { 0 } else { 1 };
            let mut fp = Map::new();
            fp.insert(FINGERPRINT_KEY.into(), Value::String(w.fingerprint.clone()));
            SarifResult {
                rule_id: w.rule_id,
                rule_index,
                level: "warning",
                message: Text { text: w.message.clone() },
                locations: [Location {
                    physical_location: PhysicalLocation {
                        artifact_location: ArtifactLocation {
                            uri: path_to_uri(&w.location.file_path),
                        },
                        region: Region {
                            start_line: w.location.line.max(1),
                            start_column: w.location.column.max(1),
                        },
                    },
                    logical_locations: w
                        .caller_name
                        .as_deref()
                        .map(|name| LogicalLocation { name, kind: "function" })
                        .into_iter()
                        .collect(),
                }],
                partial_fingerprints: fp,
                properties: ResultProperties {
                    callee: &w.callee,
                    position_i: w.pos_i,
                    position_j: w.pos_j,
                    argument_i: &w.arg_i,
                    argument_j: &w.arg_j,
                    origin: match w.origin {
                        crate::checker::Origin::CoverChecker => "cover",
                        crate::checker::Origin::StatisticalChecker => "statistical",
                    },
                    evidence: &w.evidence,
                },
            }
        })
        .collect();
    let log = Log {
        schema: SARIF_SCHEMA,
        version: SARIF_VERSION,
        runs: [Run {
            tool: Tool {
                driver: Driver {
                    name: &meta.name,
                    version: &meta.version,
                    semantic_version: &meta.version,
                    rules: rules(),
                    properties: &meta.properties,
                },
            },
            results,
        }],
    };
    let mut text = serde_json::to_string_pretty(&log).expect("SARIF structs serialize");
    text.push('\n');
    text
}
