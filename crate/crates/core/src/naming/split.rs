use std::collections::{BTreeSet, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use super::{FrequencyTable, MorphemeSet, MIN_PARTICIPATING_COUNT};
use crate::error::{Error, Result};

const WORDS: &str = include_str!("../../data/words.txt");

/// Tokens shorter than this are never sub-split.
const MIN_SUBSPLIT_LEN: usize = 4;
const MAX_BACKTRACKS: u32 = 3;

const DEFAULT_STOP: &[&str] = &[
    "get", "set", "is", "my", "the", "a", "an", "i", "j", "k", "n", "m", "t", "p", "s",
];

/// The bundled lowercase wordlist.
pub fn wordlist() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        WORDS
            .lines()
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .collect()
    })
}

pub fn is_known_word(token: &str) -> bool {
    wordlist().contains(token)
}

/// Morphemes dropped from every set. Single letters are always dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopList {
    words: BTreeSet<String>,
}

impl Default for StopList {
    fn default() -> Self {
        StopList {
            words: DEFAULT_STOP.iter().map(|s| (*s).to_owned()).collect(),
        }
    }
}

impl StopList {
    pub fn from_words<S: AsRef<str>>(words: impl IntoIterator<Item = S>) -> Self {
        StopList {
            words: words
                .into_iter()
                .map(|w| w.as_ref().trim().to_ascii_lowercase())
                .filter(|w| !w.is_empty())
                .collect(),
        }
    }

    /// One word per line; `#` starts a comment.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_words(
            text.lines().map(|l| l.split('#').next().unwrap_or("")),
        ))
    }

    pub fn is_stop(&self, token: &str) -> bool {
        token.len() == 1 || self.words.contains(token)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

/// Case, underscore and digit splitting. Everything that is not an ASCII
/// letter is a boundary; an uppercase run followed by lowercase letters gives
/// its last capital to the next token ("XMLFile" → xml, file).
pub fn stage1_tokens(name: &str) -> Vec<String> {
    let mut out = Vec::new();
    for run in name.split(|c: char| !c.is_ascii_alphabetic()) {
        let b = run.as_bytes();
        let mut start = 0;
        for i in 1..b.len() {
            let (p, c) = (b[i - 1], b[i]);
            let camel = p.is_ascii_lowercase() && c.is_ascii_uppercase();
            let acronym_end = p.is_ascii_uppercase()
                && c.is_ascii_uppercase()
                && b.get(i + 1).is_some_and(u8::is_ascii_lowercase);
            if camel || acronym_end {
                out.push(run[start..i].to_ascii_lowercase());
                start = i;
            }
        }
        if start < b.len() {
            out.push(run[start..].to_ascii_lowercase());
        }
    }
    out
}

/// Splits names into morphemes using a frequency table and a stop list.
#[derive(Debug, Clone, Copy)]
pub struct Splitter<'a> {
    freq: &'a FrequencyTable,
    stop: &'a StopList,
}

impl<'a> Splitter<'a> {
    pub fn new(freq: &'a FrequencyTable, stop: &'a StopList) -> Self {
        Splitter { freq, stop }
    }

    pub fn split(&self, name: &str) -> MorphemeSet {
        let kept: MorphemeSet = self
            .segment(name)
            .into_iter()
            .filter(|t| !self.stop.is_stop(t))
            .collect();
        if kept.is_empty() {
            stage1_tokens(name).into_iter().collect()
        } else {
            kept
        }
    }

    /// All segments of `name` in order, before stop-morpheme removal.
    pub fn segment(&self, name: &str) -> Vec<String> {
        let mut out = Vec::new();
        for tok in stage1_tokens(name) {
            if tok.len() >= MIN_SUBSPLIT_LEN && !self.known(&tok) {
                let mut budget = MAX_BACKTRACKS;
                if let Some(parts) = self.subsplit(&tok, &mut budget) {
                    out.extend(parts.into_iter().map(str::to_owned));
                    continue;
                }
            }
            out.push(tok);
        }
        out
    }

    fn in_table(&self, tok: &str) -> bool {
        self.freq.count(tok) >= MIN_PARTICIPATING_COUNT
    }

    fn known(&self, tok: &str) -> bool {
        self.in_table(tok) || is_known_word(tok)
    }

    /// Greedy longest-known-prefix segmentation of the whole of `s`.
    fn subsplit<'s>(&self, s: &'s str, budget: &mut u32) -> Option<Vec<&'s str>> {
        if s.is_empty() {
            return Some(Vec::new());
        }
        let mut cuts: Vec<usize> = (2..=s.len()).rev().filter(|&l| self.known(&s[..l])).collect();
        if s.len() > 1 && self.in_table(&s[1..]) {
            cuts.push(1);
        }
        for (n, cut) in cuts.iter().enumerate() {
            if let Some(mut rest) = self.subsplit(&s[*cut..], budget) {
                rest.insert(0, &s[..*cut]);
                return Some(rest);
            }
            if n + 1 < cuts.len() {
                if *budget == 0 {
                    return None;
                }
                *budget -= 1;
            }
        }
        None
    }
}

/// Splits with the default stop list.
pub fn split(name: &str, freq: &FrequencyTable) -> MorphemeSet {
    let stop = StopList::default();
    Splitter::new(freq, &stop).split(name)
}
