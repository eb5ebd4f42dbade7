//! Corpus statistics: in how many projects does morpheme `m` appear at
//! argument position `i` of calls to `f`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frontend::ProjectRecord;
use crate::naming::{arg_morphemes, MorphemeSet, Splitter};

/// Argument positions above this are not recorded.
pub const MAX_POSITION: usize = 32;

const MAGIC: &str = "swapcheck-statsdb";
pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusMeta {
    pub project_count: u64,
    pub build_timestamp: String,
    pub tool_version: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StatsDb {
    /// function → (position, morpheme) → weight
    weights: BTreeMap<String, BTreeMap<(usize, String), u64>>,
    pub meta: CorpusMeta,
}

impl StatsDb {
    pub fn weight(&self, f: &str, m: &str, i: usize) -> u64 {
        self.weights
            .get(f)
            .and_then(|w| w.get(&(i, m.to_owned())))
            .copied()
            .unwrap_or(0)
    }

    pub fn has_function(&self, f: &str) -> bool {
        self.weights.contains_key(f)
    }

    /// `w(f,m,i) > threshold * max(w(f,m,j), 1)`: the ratio test with a
    /// zero denominator treated as one.
    pub fn psi_exceeds(&self, f: &str, m: &str, i: usize, j: usize, threshold: f64) -> bool {
        psi_exceeds_weights(self.weight(f, m, i), self.weight(f, m, j), threshold)
    }

    /// The morpheme whose weight grows most from position `i` to position
    /// `j`; ties go to the lexicographically smallest. Nothing if no gap is
    /// positive.
    pub fn argmax_position_gap(&self, f: &str, j: usize, i: usize) -> Option<&str> {
        let w = self.weights.get(f)?;
        let mut gaps: BTreeMap<&str, i128> = BTreeMap::new();
        for ((pos, m), n) in w {
            if *pos == j {
                *gaps.entry(m).or_insert(0) += *n as i128;
            } else if *pos == i {
                *gaps.entry(m).or_insert(0) -= *n as i128;
            }
        }
        let mut best: Option<(&str, i128)> = None;
        for (m, gap) in gaps {
            if best.is_none_or(|(_, g)| gap > g) {
                best = Some((m, gap));
            }
        }
        best.filter(|(_, g)| *g > 0).map(|(m, _)| m)
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Number of stored `(f, i, m)` keys.
    pub fn len(&self) -> usize {
        self.weights.values().map(BTreeMap::len).sum()
    }

    /// All entries in file order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, usize, &str, u64)> {
        self.weights.iter().flat_map(|(f, w)| {
            w.iter()
                .map(move |((i, m), n)| (f.as_str(), *i, m.as_str(), *n))
        })
    }

    /// Inserts or overwrites one weight; a zero weight removes the key.
    pub fn set_weight(&mut self, f: &str, m: &str, i: usize, weight: u64) {
        let w = self.weights.entry(f.to_owned()).or_default();
        if weight == 0 {
            w.remove(&(i, m.to_owned()));
            if w.is_empty() {
                self.weights.remove(f);
            }
        } else {
            w.insert((i, m.to_owned()), weight);
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{MAGIC}\t{FORMAT_VERSION}\tprojects={}\tbuilt={}\ttool={}\n",
            self.meta.project_count,
            clean(&self.meta.build_timestamp),
            clean(&self.meta.tool_version)
        );
        for (f, i, m, n) in self.entries() {
            let _ = writeln!(out, "{f}\t{i}\t{m}\t{n}");
        }
        out
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let corrupt = |offset: usize, message: String| Error::Corrupt {
            path: path.to_owned(),
            offset,
            message,
        };
        let Some(header_end) = text.find('\n') else {
            return Err(corrupt(text.len(), "missing header line".into()));
        };
        let mut fields = text[..header_end].trim_end_matches('\r').split('\t');
        if fields.next() != Some(MAGIC) {
            return Err(corrupt(0, format!("missing `{MAGIC}` header")));
        }
        let version = fields.next().unwrap_or("");
        if version != FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                path: path.to_owned(),
                found: version.to_owned(),
                expected: FORMAT_VERSION.to_owned(),
            });
        }
        let mut db = StatsDb::default();
        let mut have_projects = false;
        for field in fields {
            let (key, value) = field.split_once('=').unwrap_or((field, ""));
            match key {
                "projects" => {
                    db.meta.project_count = value
                        .parse()
                        .map_err(|_| corrupt(0, format!("bad project count `{value}`")))?;
                    have_projects = true;
                }
                "built" => db.meta.build_timestamp = value.to_owned(),
                "tool" => db.meta.tool_version = value.to_owned(),
                _ => log::warn!("{}: ignoring header field `{field}`", path.display()),
            }
        }
        if !have_projects {
            return Err(corrupt(0, "header lacks `projects=`".into()));
        }

        let mut offset = header_end + 1;
        let mut prev: Option<(String, usize, String)> = None;
        for line in text[offset..].split_inclusive('\n') {
            let body = line.trim_end_matches(['\n', '\r']);
            if !line.ends_with('\n') && !body.is_empty() {
                return Err(corrupt(offset, "truncated final line".into()));
            }
            if !body.is_empty() {
                let parts: Vec<&str> = body.split('\t').collect();
                if parts.len() != 4 {
                    return Err(corrupt(offset, format!("expected 4 fields, found {}", parts.len())));
                }
                let (f, m) = (parts[0], parts[2]);
                let i: usize = parts[1]
                    .parse()
                    .map_err(|_| corrupt(offset, format!("bad position `{}`", parts[1])))?;
                let n: u64 = parts[3]
                    .parse()
                    .map_err(|_| corrupt(offset, format!("bad weight `{}`", parts[3])))?;
                if f.is_empty() || i == 0 || m.is_empty() || !m.bytes().all(|b| b.is_ascii_lowercase()) {
                    return Err(corrupt(offset, format!("bad key `{body}`")));
                }
                if n == 0 || n > db.meta.project_count {
                    return Err(corrupt(offset, format!("weight {n} outside 1..={}", db.meta.project_count)));
                }
                let key = (f.to_owned(), i, m.to_owned());
                if prev.as_ref().is_some_and(|p| *p >= key) {
                    return Err(corrupt(offset, "entries out of order".into()));
                }
                db.set_weight(f, m, i, n);
                prev = Some(key);
            }
            offset += line.len();
        }
        Ok(db)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}

fn clean(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

pub fn psi_exceeds_weights(w_i: u64, w_j: u64, threshold: f64) -> bool {
    w_i as f64 > threshold * w_j.max(1) as f64
}

pub fn save_db(db: &StatsDb, path: impl AsRef<Path>) -> Result<()> {
    db.save(path)
}

pub fn load_db(path: impl AsRef<Path>) -> Result<StatsDb> {
    StatsDb::load(path)
}

/// Per-position morpheme sets of one call, with morphemes present at every
/// position removed when there are at least two positions.
pub fn call_position_morphemes(args: &[MorphemeSet]) -> Vec<MorphemeSet> {
    if args.len() < 2 {
        return args.to_vec();
    }
    let common: Vec<String> = args[0]
        .iter()
        .filter(|m| args[1..].iter().all(|a| a.contains(m)))
        .map(str::to_owned)
        .collect();
    args.iter()
        .map(|a| {
            let mut a = a.clone();
            for m in &common {
                a.remove(m);
            }
            a
        })
        .collect()
}

fn project_keys(p: &ProjectRecord, splitter: &Splitter<'_>) -> BTreeSet<(String, usize, String)> {
    let mut keys = BTreeSet::new();
    for call in p.call_sites.iter().filter(|c| !c.from_macro_expansion) {
        let sets: Vec<MorphemeSet> = call
            .args
            .iter()
            .take(MAX_POSITION)
            .map(|a| arg_morphemes(a, splitter))
            .collect();
        let sets = if call.args.len() > MAX_POSITION {
            // Elimination still considers every position.
            let all: Vec<MorphemeSet> = call.args.iter().map(|a| arg_morphemes(a, splitter)).collect();
            call_position_morphemes(&all).into_iter().take(MAX_POSITION).collect()
        } else {
            call_position_morphemes(&sets)
        };
        for (n, set) in sets.iter().enumerate() {
            for m in set.iter() {
                keys.insert((call.callee.clone(), n + 1, m.to_owned()));
            }
        }
    }
    keys
}

/// Counts, for every `(f, i, m)`, the projects in which it occurs.
pub fn build_db(projects: &[ProjectRecord], splitter: &Splitter<'_>) -> StatsDb {
    let per_project: Vec<BTreeSet<(String, usize, String)>> =
        projects.par_iter().map(|p| project_keys(p, splitter)).collect();
    let mut db = StatsDb::default();
    for keys in per_project {
        for (f, i, m) in keys {
            *db.weights.entry(f).or_default().entry((i, m)).or_insert(0) += 1;
        }
    }
    db.meta.project_count = projects.len() as u64;
    db.meta.tool_version = format!("swapcheck {}", env!("CARGO_PKG_VERSION"));
    db
}

/// Morpheme-set size histogram with buckets 1, 2 and 3-or-more.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SizeHistogram {
    pub one: u64,
    pub two: u64,
    pub three_plus: u64,
}

impl SizeHistogram {
    pub fn add(&mut self, size: usize) {
        match size {
            0 => {}
            1 => self.one += 1,
            2 => self.two += 1,
            _ => self.three_plus += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.one + self.two + self.three_plus
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MorphologyReport {
    pub arguments: SizeHistogram,
    pub parameters: SizeHistogram,
}

/// Sizes of argument and parameter morpheme sets across a corpus. Arguments
/// without an extractable name are not counted.
pub fn morphology_report(projects: &[ProjectRecord], splitter: &Splitter<'_>) -> MorphologyReport {
    let mut report = MorphologyReport::default();
    for p in projects {
        for call in p.call_sites.iter().filter(|c| !c.from_macro_expansion) {
            for arg in &call.args {
                report.arguments.add(arg_morphemes(arg, splitter).len());
            }
        }
        for decl in &p.declarations {
            for name in decl.param_names.iter().flatten().flatten() {
                report.parameters.add(splitter.split(name).len());
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naming::{FrequencyTable, StopList};

    #[test]
    fn psi_examples() {
        assert!(psi_exceeds_weights(6, 1, 5.0));
        assert!(!psi_exceeds_weights(5, 1, 5.0));
        assert!(psi_exceeds_weights(3, 0, 1.0));
    }

    #[test]
    fn argmax_gap() {
        let mut db = StatsDb::default();
        db.meta.project_count = 10;
        db.set_weight("f", "sig", 2, 9);
        db.set_weight("f", "sig", 1, 1);
        db.set_weight("f", "pid", 2, 2);
        db.set_weight("f", "pid", 1, 8);
        assert_eq!(db.argmax_position_gap("f", 2, 1), Some("sig"));
        assert_eq!(db.argmax_position_gap("f", 1, 2), Some("pid"));
        assert_eq!(db.argmax_position_gap("g", 1, 2), None);
        db.set_weight("f", "ack", 1, 1);
        db.set_weight("f", "ack", 2, 1);
        db.set_weight("h", "x", 1, 3);
        db.set_weight("h", "x", 2, 3);
        assert_eq!(db.argmax_position_gap("h", 1, 2), None);
        // Ties: smallest morpheme.
        db.set_weight("t", "zz", 1, 4);
        db.set_weight("t", "bb", 1, 4);
        assert_eq!(db.argmax_position_gap("t", 1, 2), Some("bb"));
    }

    #[test]
    fn common_morphemes_of_all_positions() {
        let sets: Vec<MorphemeSet> = vec![
            ["ab", "left"].into_iter().collect(),
            ["ab", "right"].into_iter().collect(),
        ];
        let out = call_position_morphemes(&sets);
        assert_eq!(out[0], ["left"].into_iter().collect());
        assert_eq!(out[1], ["right"].into_iter().collect());
        let single: Vec<MorphemeSet> = vec![["pid"].into_iter().collect()];
        assert_eq!(call_position_morphemes(&single), single);
    }

    #[test]
    fn file_round_trip_and_errors() {
        let mut db = StatsDb {
            meta: CorpusMeta {
                project_count: 3,
                build_timestamp: "2024-01-01T00:00:00Z".into(),
                tool_version: "swapcheck 0.1.0".into(),
            },
            ..StatsDb::default()
        };
        db.set_weight("kill", "pid", 1, 3);
        db.set_weight("kill", "sig", 2, 2);
        let p = Path::new("x.db");
        let text = db.to_text();
        assert_eq!(StatsDb::parse(&text, p).unwrap(), db);
        assert_eq!(StatsDb::parse(&StatsDb::default().to_text(), p).unwrap(), StatsDb::default());

        let truncated = &text[..text.len() - 3];
        match StatsDb::parse(truncated, p).unwrap_err() {
            Error::Corrupt { offset, .. } => assert_eq!(offset, text.rfind("kill").unwrap()),
            e => panic!("{e}"),
        }
        let newer = text.replacen("statsdb\t1", "statsdb\t7", 1);
        let msg = StatsDb::parse(&newer, p).unwrap_err().to_string();
        assert!(msg.contains("has 7") && msg.contains("reads 1"), "{msg}");
        let heavy = text.replace("pid\t3", "pid\t4");
        assert!(matches!(StatsDb::parse(&heavy, p), Err(Error::Corrupt { .. })));
    }

    #[test]
    fn morphology_kill() {
        let src = "void f(void) { kill(SIGKILL, cpid); }";
        let (calls, _) = crate::frontend::scan_file(src, "k.c");
        let mut p = ProjectRecord::new("p");
        p.call_sites = calls;
        let freq: FrequencyTable = [("sig", 5), ("kill", 5), ("pid", 5)]
            .into_iter()
            .map(|(t, n)| (t.to_owned(), n))
            .collect();
        let stop = StopList::default();
        let sp = Splitter::new(&freq, &stop);
        let r = morphology_report(&[p], &sp);
        // {sig, kill} and {pid}: the lone "c" is a stop-morpheme.
        assert_eq!(r.arguments, SizeHistogram { one: 1, two: 1, three_plus: 0 });
        assert_eq!(morphology_report(&[], &sp), MorphologyReport::default());
    }
}
