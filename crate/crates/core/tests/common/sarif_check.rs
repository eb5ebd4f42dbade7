//! Validation against the SARIF 2.1.0 JSON schema published by OASIS,
//! vendored as `fixtures/sarif-schema-2.1.0.json`.

use serde_json::Value;

pub fn validate(doc: &Value) -> Result<(), Vec<String>> {
    let path = super::fixtures().join("sarif-schema-2.1.0.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).map_err(|e| vec![e.to_string()])?;
    let errors: Vec<String> = validator
        .iter_errors(doc)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}
