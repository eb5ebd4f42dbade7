use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{extract_name, is_literal_name, stage1_tokens};
use crate::error::{Error, Result};
use crate::frontend::ProjectRecord;

/// Tokens seen fewer times than this do not guide sub-splitting.
pub const MIN_PARTICIPATING_COUNT: u64 = 5;

const MAGIC: &str = "swapcheck-freq";
const VERSION: &str = "1";

/// Occurrence counts of stage-1 name tokens over a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: BTreeMap<String, u64>,
}

impl FrequencyTable {
    pub fn count(&self, token: &str) -> u64 {
        self.counts.get(token).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn add(&mut self, token: &str, n: u64) {
        if n > 0 {
            *self.counts.entry(token.to_owned()).or_insert(0) += n;
        }
    }

    pub fn add_name(&mut self, name: &str) {
        for tok in stage1_tokens(name) {
            self.add(&tok, 1);
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{MAGIC}\t{VERSION}\n");
        for (tok, n) in &self.counts {
            let _ = writeln!(out, "{tok}\t{n}");
        }
        out
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let corrupt = |offset: usize, message: String| Error::Corrupt {
            path: path.to_owned(),
            offset,
            message,
        };
        let mut lines = text.split_inclusive('\n');
        let header = lines.next().unwrap_or("").trim_end();
        let mut fields = header.split('\t');
        if fields.next() != Some(MAGIC) {
            return Err(corrupt(0, format!("missing `{MAGIC}` header")));
        }
        let version = fields.next().unwrap_or("");
        if version != VERSION {
            return Err(Error::VersionMismatch {
                path: path.to_owned(),
                found: version.to_owned(),
                expected: VERSION.to_owned(),
            });
        }
        let mut offset = header.len() + 1;
        let mut table = FrequencyTable::default();
        for line in lines {
            let body = line.trim_end_matches(['\n', '\r']);
            if !body.is_empty() {
                let (tok, n) = body
                    .split_once('\t')
                    .ok_or_else(|| corrupt(offset, "expected `token<TAB>count`".into()))?;
                let n: u64 = n
                    .parse()
                    .map_err(|_| corrupt(offset, format!("bad count `{n}`")))?;
                if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_lowercase()) || n == 0 {
                    return Err(corrupt(offset, format!("bad entry `{body}`")));
                }
                table.add(tok, n);
            }
            offset += line.len();
        }
        Ok(table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

impl FromIterator<(String, u64)> for FrequencyTable {
    fn from_iter<I: IntoIterator<Item = (String, u64)>>(iter: I) -> Self {
        let mut t = FrequencyTable::default();
        for (tok, n) in iter {
            t.add(&tok, n);
        }
        t
    }
}

/// Counts stage-1 tokens of every extracted argument name and parameter name.
pub fn build_frequency_table(projects: &[ProjectRecord]) -> FrequencyTable {
    let mut table = FrequencyTable::default();
    for p in projects {
        for call in &p.call_sites {
            for arg in &call.args {
                if let Some(name) = extract_name(arg).filter(|n| !is_literal_name(n)) {
                    table.add_name(&name);
                }
            }
        }
        for decl in &p.declarations {
            for name in decl.param_names.iter().flatten().flatten() {
                table.add_name(name);
            }
        }
    }
    table
}
