//! Line-delimited JSON record files.
//!
//! Each line is one object with a `"kind"` of `"project"`, `"call"` or
//! `"decl"`. Call and declaration lines name their project in `"project"`;
//! a project that is referenced before (or without) its own line is created
//! implicitly. The layout is described by `schema/records.schema.json`.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use super::{CallSiteRecord, DeclarationRecord, ProjectRecord};
use crate::error::{Error, Result};

/// Project used for call and declaration lines without a `"project"` field.
pub const DEFAULT_PROJECT: &str = "default";

const CALL_FIELDS: &[&str] = &[
    "callee",
    "args",
    "location",
    "caller_name",
    "enclosing_conditions",
    "preceding_lines",
    "arg_source_texts",
    "from_macro_expansion",
    "arg_types",
];
const DECL_FIELDS: &[&str] = &["function_name", "param_names", "param_types", "location"];

pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<ProjectRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_records(BufReader::new(file), &path.display().to_string())
}

/// Parses record lines from any reader; `origin` is used in error messages.
pub fn parse_records(reader: impl BufRead, origin: &str) -> Result<Vec<ProjectRecord>> {
    let mut projects: Vec<ProjectRecord> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut explicit: HashMap<String, usize> = HashMap::new();

    for (n, line) in reader.lines().enumerate() {
        let line_no = n + 1;
        let bad = |message: String| Error::Record {
            path: origin.into(),
            line: line_no,
            message,
        };
        let line = line.map_err(|e| bad(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
        let Value::Object(mut obj) = value else {
            return Err(bad("expected a JSON object".into()));
        };
        let kind = match obj.remove("kind") {
            Some(Value::String(k)) => k,
            _ => return Err(bad("missing string field `kind`".into())),
        };
        let mut slot = |id: String, projects: &mut Vec<ProjectRecord>| -> usize {
            *index.entry(id.clone()).or_insert_with(|| {
                projects.push(ProjectRecord::new(id));
                projects.len() - 1
            })
        };
        match kind.as_str() {
            "project" => {
                let id = match obj.remove("project_id") {
                    Some(Value::String(id)) => id,
                    _ => return Err(bad("missing string field `project_id`".into())),
                };
                warn_unknown(&obj, &[], origin, line_no);
                if explicit.insert(id.clone(), line_no).is_some() {
                    return Err(Error::DuplicateProject(id));
                }
                slot(id, &mut projects);
            }
            "call" => {
                let id = project_of(&mut obj).map_err(bad)?;
                warn_unknown(&obj, CALL_FIELDS, origin, line_no);
                let call: CallSiteRecord = from_object(obj).map_err(bad)?;
                call.check_invariants().map_err(bad)?;
                let i = slot(id, &mut projects);
                projects[i].call_sites.push(call);
            }
            "decl" => {
                let id = project_of(&mut obj).map_err(bad)?;
                warn_unknown(&obj, DECL_FIELDS, origin, line_no);
                let decl: DeclarationRecord = from_object(obj).map_err(bad)?;
                decl.check_invariants().map_err(bad)?;
                let i = slot(id, &mut projects);
                projects[i].declarations.push(decl);
            }
            other => return Err(bad(format!("unknown record kind `{other}`"))),
        }
    }
    Ok(projects)
}

fn project_of(obj: &mut Map<String, Value>) -> std::result::Result<String, String> {
    match obj.remove("project") {
        None | Some(Value::Null) => Ok(DEFAULT_PROJECT.to_owned()),
        Some(Value::String(id)) => Ok(id),
        Some(_) => Err("field `project` must be a string".into()),
    }
}

fn from_object<T: DeserializeOwned>(obj: Map<String, Value>) -> std::result::Result<T, String> {
    serde_json::from_value(Value::Object(obj)).map_err(|e| e.to_string())
}

fn warn_unknown(obj: &Map<String, Value>, known: &[&str], origin: &str, line: usize) {
    for key in obj.keys().filter(|k| !known.contains(&k.as_str())) {
        log::warn!("{origin}:{line}: ignoring unknown field `{key}`");
    }
}

pub fn write_records(path: impl AsRef<Path>, projects: &[ProjectRecord]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    render_records(&mut out, projects).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

/// Writes one project line followed by its calls and then its declarations.
pub fn render_records(out: &mut impl Write, projects: &[ProjectRecord]) -> std::io::Result<()> {
    for p in projects {
        let mut head = Map::new();
        head.insert("kind".into(), "project".into());
        head.insert("project_id".into(), p.project_id.clone().into());
        writeln!(out, "{}", Value::Object(head))?;
        for c in &p.call_sites {
            writeln!(out, "{}", tagged("call", &p.project_id, c))?;
        }
        for d in &p.declarations {
            writeln!(out, "{}", tagged("decl", &p.project_id, d))?;
        }
    }
    Ok(())
}

fn tagged(kind: &str, project: &str, record: &impl serde::Serialize) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), kind.into());
    obj.insert("project".into(), project.into());
    if let Ok(Value::Object(fields)) = serde_json::to_value(record) {
        obj.extend(fields);
    }
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Vec<ProjectRecord>> {
        parse_records(text.as_bytes(), "mem")
    }

    const CALL: &str = r#"{"kind":"call","callee":"kill","args":[{"kind":"MacroIdentifier","token_text":"SIGKILL"},{"kind":"Identifier","token_text":"cpid"}],"location":{"file_path":"a.c","line":3,"column":5},"arg_source_texts":["SIGKILL","cpid"]}"#;

    #[test]
    fn single_call_line() {
        let p = parse(CALL).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].project_id, DEFAULT_PROJECT);
        assert_eq!(p[0].call_sites[0].callee, "kill");
    }

    #[test]
    fn duplicate_project() {
        let text = "{\"kind\":\"project\",\"project_id\":\"x\"}\n{\"kind\":\"project\",\"project_id\":\"x\"}\n";
        let err = parse(text).unwrap_err();
        assert!(err.to_string().contains("duplicate project id"), "{err}");
    }

    #[test]
    fn malformed_line_names_line_number() {
        let text = format!("{CALL}\n\n{{\"kind\":\"call\",\"callee\":\n");
        match parse(&text).unwrap_err() {
            Error::Record { line, .. } => assert_eq!(line, 3),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn unknown_fields_are_ignored() {
        let text = CALL.replacen("{\"kind\"", "{\"extra\":1,\"kind\"", 1);
        assert_eq!(parse(&text).unwrap()[0].call_sites.len(), 1);
    }

    #[test]
    fn round_trip() {
        let p = parse(CALL).unwrap();
        let mut a = Vec::new();
        render_records(&mut a, &p).unwrap();
        let q = parse_records(a.as_slice(), "mem").unwrap();
        assert_eq!(p, q);
        let mut b = Vec::new();
        render_records(&mut b, &q).unwrap();
        assert_eq!(a, b);
    }
}
