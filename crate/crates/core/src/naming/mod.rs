//! From argument expressions to names, and from names to morpheme sets.

mod freq;
mod split;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::frontend::{ArgExpr, ArgKind};

pub use freq::{build_frequency_table, FrequencyTable, MIN_PARTICIPATING_COUNT};
pub use split::{is_known_word, split, stage1_tokens, wordlist, Splitter, StopList};

/// A set of lowercase morphemes, kept sorted for deterministic output.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MorphemeSet(BTreeSet<String>);

impl MorphemeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, m: &str) -> bool {
        self.0.contains(m)
    }

    pub fn insert(&mut self, m: impl Into<String>) -> bool {
        self.0.insert(m.into())
    }

    pub fn remove(&mut self, m: &str) -> bool {
        self.0.remove(m)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.0.iter().map(String::as_str)
    }

    pub fn difference(&self, other: &MorphemeSet) -> MorphemeSet {
        MorphemeSet(self.0.difference(&other.0).cloned().collect())
    }

    pub fn union(&self, other: &MorphemeSet) -> MorphemeSet {
        MorphemeSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn without(&self, m: &str) -> MorphemeSet {
        let mut out = self.clone();
        out.remove(m);
        out
    }
}

impl<S: Into<String>> FromIterator<S> for MorphemeSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        MorphemeSet(iter.into_iter().map(Into::into).collect())
    }
}

impl<'a> IntoIterator for &'a MorphemeSet {
    type Item = &'a String;
    type IntoIter = std::collections::btree_set::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for MorphemeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, m) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            f.write_str(m)?;
        }
        f.write_str("}")
    }
}

/// The name an argument expression contributes.
pub fn extract_name(expr: &ArgExpr) -> Option<String> {
    let mut e = expr;
    loop {
        match e.kind {
            ArgKind::Identifier | ArgKind::NonStringLiteral | ArgKind::MacroIdentifier => {
                return Some(e.token_text.clone())
            }
            ArgKind::This => return Some("this".to_owned()),
            ArgKind::Sizeof => return Some("sizeof".to_owned()),
            ArgKind::Paren
            | ArgKind::PrefixIncDec
            | ArgKind::PostfixIncDec
            | ArgKind::UnaryOp(_)
            | ArgKind::Cast => e = e.children.first()?,
            ArgKind::Member(_) => e = e.children.get(1)?,
            ArgKind::Index | ArgKind::Call => e = e.children.first()?,
            ArgKind::StringLiteral | ArgKind::Other => return None,
        }
    }
}

/// True for names that came from numeric or character literals; these carry
/// no morphemes.
pub fn is_literal_name(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_digit() || c == '.' || c == '\'')
}

/// Morphemes of an argument: its extracted name, split.
pub fn arg_morphemes(expr: &ArgExpr, splitter: &Splitter<'_>) -> MorphemeSet {
    match extract_name(expr) {
        Some(name) if !is_literal_name(&name) => splitter.split(&name),
        _ => MorphemeSet::new(),
    }
}

/// Returns `(a \ b, b \ a)`.
pub fn eliminate_common(a: &MorphemeSet, b: &MorphemeSet) -> (MorphemeSet, MorphemeSet) {
    (a.difference(b), b.difference(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{Accessor, UnaryOp};

    fn set(items: &[&str]) -> MorphemeSet {
        items.iter().copied().collect()
    }

    #[test]
    fn extract_name_cases() {
        let id = ArgExpr::ident("xinput_error_base");
        let addr = ArgExpr::node(ArgKind::UnaryOp(UnaryOp::AddressOf), vec![id]);
        assert_eq!(extract_name(&addr).as_deref(), Some("xinput_error_base"));

        let mut cast = ArgExpr::node(ArgKind::Cast, vec![ArgExpr::ident("minContigKmerLength")]);
        cast.token_text = "Coordinate".into();
        assert_eq!(extract_name(&cast).as_deref(), Some("minContigKmerLength"));

        let sz = ArgExpr::node(ArgKind::Sizeof, vec![ArgExpr::ident("buf")]);
        assert_eq!(extract_name(&sz).as_deref(), Some("sizeof"));

        let s = ArgExpr::leaf(ArgKind::StringLiteral, "\"XInputExtension\"");
        assert_eq!(extract_name(&s), None);

        let member = ArgExpr::node(
            ArgKind::Member(Accessor::Arrow),
            vec![ArgExpr::ident("pt"), ArgExpr::ident("read_buf")],
        );
        assert_eq!(extract_name(&member).as_deref(), Some("read_buf"));

        let index = ArgExpr::node(ArgKind::Index, vec![ArgExpr::ident("argv"), ArgExpr::ident("i")]);
        assert_eq!(extract_name(&index).as_deref(), Some("argv"));

        let call = ArgExpr::node(ArgKind::Call, vec![ArgExpr::ident("take"), ArgExpr::ident("x")]);
        assert_eq!(extract_name(&call).as_deref(), Some("take"));

        assert_eq!(extract_name(&ArgExpr::leaf(ArgKind::This, "this")).as_deref(), Some("this"));
        assert_eq!(extract_name(&ArgExpr::leaf(ArgKind::NonStringLiteral, "42")).as_deref(), Some("42"));
        assert_eq!(extract_name(&ArgExpr::leaf(ArgKind::Other, "a + b")), None);
    }

    #[test]
    fn eliminate_common_examples() {
        assert_eq!(
            eliminate_common(&set(&["remote", "ack"]), &set(&["remote", "seq"])),
            (set(&["ack"]), set(&["seq"]))
        );
        assert_eq!(eliminate_common(&set(&["x"]), &set(&["x"])), (set(&[]), set(&[])));
        assert_eq!(
            eliminate_common(&set(&["a", "b"]), &set(&["c"])),
            (set(&["a", "b"]), set(&["c"]))
        );
    }

    #[test]
    fn literal_names_have_no_morphemes() {
        let freq = FrequencyTable::default();
        let stop = StopList::default();
        let sp = Splitter::new(&freq, &stop);
        for lit in ["0x1F", "1.5e3", "'c'", "42UL"] {
            let e = ArgExpr::leaf(ArgKind::NonStringLiteral, lit);
            assert!(arg_morphemes(&e, &sp).is_empty(), "{lit}");
        }
    }
}
