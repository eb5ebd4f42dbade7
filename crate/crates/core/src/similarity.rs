//! Abbreviation-aware morpheme similarity.
//!
//! Two morphemes are compared by deleting characters until both read the
//! same. Deleting a vowel costs less than deleting a consonant, deletions near
//! the end cost less than deletions near the start, and a trailing `s` is
//! free. The total is normalized by the longer length.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};

/// Unordered pairs of morphemes treated as fully similar.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymTable {
    pairs: BTreeSet<(String, String)>,
}

impl SynonymTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `a ~ b`. Pairing a token with itself is a no-op.
    pub fn insert(&mut self, a: &str, b: &str) {
        let (a, b) = (a.to_ascii_lowercase(), b.to_ascii_lowercase());
        if a != b {
            self.pairs.insert(ordered(a, b));
        }
    }

    pub fn contains(&self, a: &str, b: &str) -> bool {
        if a == b {
            return false;
        }
        self.pairs.contains(&ordered(a.to_owned(), b.to_owned()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.pairs.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    /// One `token,token` pair per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut table = SynonymTable::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Record {
                path: path.to_owned(),
                line: n + 1,
                message: format!("expected `token,token`, found `{line}`"),
            };
            let (a, b) = line.split_once(',').ok_or_else(bad)?;
            let (a, b) = (a.trim(), b.trim());
            let word = |s: &str| !s.is_empty() && s.bytes().all(|c| c.is_ascii_alphabetic());
            if !word(a) || !word(b) {
                return Err(bad());
            }
            table.insert(a, b);
        }
        Ok(table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}

impl<'a> FromIterator<(&'a str, &'a str)> for SynonymTable {
    fn from_iter<I: IntoIterator<Item = (&'a str, &'a str)>>(iter: I) -> Self {
        let mut t = SynonymTable::new();
        for (a, b) in iter {
            t.insert(a, b);
        }
        t
    }
}

fn ordered(a: String, b: String) -> (String, String) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Deletion cost of `s[i]`, scaled by `4 * s.len()` so that it is an integer.
fn deletion_cost(s: &[u8], i: usize) -> u64 {
    let n = s.len();
    let base: u64 = match s[i] {
        b's' if i + 1 == n => 0,
        b'a' | b'e' | b'i' | b'o' | b'u' => 1,
        _ => 4,
    };
    base * (n - i) as u64
}

/// Minimum total deletion penalty over all longest common subsequences of
/// `a` and `b`, in units of `1 / (4 * |a| * |b|)`.
fn min_lcs_penalty(a: &[u8], b: &[u8]) -> u64 {
    let (na, nb) = (a.len() as u64, b.len() as u64);
    let da: Vec<u64> = (0..a.len()).map(|i| deletion_cost(a, i) * nb).collect();
    let db: Vec<u64> = (0..b.len()).map(|j| deletion_cost(b, j) * na).collect();

    // best[i][j] = (lcs length, penalty) for a[..i], b[..j]: longer first, then cheaper.
    let w = b.len() + 1;
    let mut best = vec![(0u32, 0u64); (a.len() + 1) * w];
    for j in 1..=b.len() {
        best[j] = (0, best[j - 1].1 + db[j - 1]);
    }
    for i in 1..=a.len() {
        best[i * w] = (0, best[(i - 1) * w].1 + da[i - 1]);
        for j in 1..=b.len() {
            let up = best[(i - 1) * w + j];
            let left = best[i * w + j - 1];
            let mut cand = better((up.0, up.1 + da[i - 1]), (left.0, left.1 + db[j - 1]));
            if a[i - 1] == b[j - 1] {
                let diag = best[(i - 1) * w + j - 1];
                cand = better(cand, (diag.0 + 1, diag.1));
            }
            best[i * w + j] = cand;
        }
    }
    best[a.len() * w + b.len()].1
}

fn better(x: (u32, u64), y: (u32, u64)) -> (u32, u64) {
    if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
        y
    } else {
        x
    }
}

/// Similarity of two morphemes in `[0, 1]`.
pub fn sim(m1: &str, m2: &str, synonyms: Option<&SynonymTable>) -> f64 {
    if m1 == m2 {
        return 1.0;
    }
    if synonyms.is_some_and(|s| s.contains(m1, m2)) {
        return 1.0;
    }
    // Canonical order keeps the result exactly symmetric.
    let (a, b) = if m1 <= m2 { (m1, m2) } else { (m2, m1) };
    let (a, b) = (a.as_bytes(), b.as_bytes());
    if a.is_empty() || b.is_empty() || a[0] != b[0] {
        return 0.0;
    }
    let penalty = min_lcs_penalty(a, b);
    let scale = 4 * a.len() as u64 * b.len() as u64 * a.len().max(b.len()) as u64;
    (1.0 - penalty as f64 / scale as f64).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(sim("pid", "pid", None), 1.0);
        assert_eq!(sim("pid", "sig", None), 0.0);
        let table: SynonymTable = [("size", "count")].into_iter().collect();
        assert_eq!(sim("size", "count", Some(&table)), 1.0);
        assert_eq!(sim("count", "size", Some(&table)), 1.0);
        assert_eq!(sim("size", "count", None), 0.0);
    }

    #[test]
    fn msg_message_by_hand() {
        // Deleted from "message" (n = 7): e@1, s@3, a@4, e@6.
        let total = 0.25 * 6.0 / 7.0 + 1.0 * 4.0 / 7.0 + 0.25 * 3.0 / 7.0 + 0.25 * 1.0 / 7.0;
        let expected = 1.0 - total / 7.0;
        let got = sim("msg", "message", None);
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
        assert!((got - 0.867).abs() < 1e-3);
    }

    #[test]
    fn plural_is_free() {
        assert_eq!(sim("node", "nodes", None), 1.0);
        assert!(sim("node", "noder", None) < 1.0);
    }

    #[test]
    fn fully_disjoint_tail_clamps_at_zero() {
        let s = sim("bxxxxxxxxx", "bqqqqqqqqq", None);
        assert!((0.0..1.0).contains(&s));
    }

    #[test]
    fn synonym_file() {
        let t = SynonymTable::parse("# pairs\nsize,count\n\n len , length\n", Path::new("s")).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.contains("length", "len"));
        let err = SynonymTable::parse("size count\n", Path::new("s")).unwrap_err();
        assert!(err.to_string().contains(":1:"), "{err}");
    }
}
