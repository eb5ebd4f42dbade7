//! Extraction of call sites and declarations from C-like source text.
//!
//! The scanner is tolerant: it never fails, and regions it cannot make sense
//! of simply produce no records. Pre-extracted records can be ingested through
//! the line-delimited record format in [`records`].

mod expr;
mod lexer;
pub mod records;
mod scanner;

use serde::{Deserialize, Serialize};

pub use records::{read_records, write_records};
pub use scanner::{apply_swap, scan_file, scan_sources, ScanOutput};

/// At most this many enclosing branch conditions are retained per call site.
pub const MAX_ENCLOSING_CONDITIONS: usize = 5;
/// At most this many source lines above a call are retained.
pub const MAX_PRECEDING_LINES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SourceLocation {
    pub file_path: String,
    /// 1-based.
    pub line: u32,
    /// 1-based, in bytes.
    pub column: u32,
}

impl SourceLocation {
    pub fn new(file_path: impl Into<String>, line: u32, column: u32) -> Self {
        debug_assert!(line >= 1 && column >= 1);
        SourceLocation {
            file_path: file_path.into(),
            line: line.max(1),
            column: column.max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnaryOp {
    #[serde(rename = "&")]
    AddressOf,
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "*")]
    Deref,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Accessor {
    #[serde(rename = ".")]
    Dot,
    #[serde(rename = "->")]
    Arrow,
    #[serde(rename = "::")]
    Scope,
}

/// Syntactic category of an argument expression node.
///
/// Child layout per kind: `Paren`, `PrefixIncDec`, `PostfixIncDec`,
/// `UnaryOp`, `Cast` and `Sizeof` hold one operand; `Member` and `Index`
/// hold `[base, member]` / `[base, index]`; `Call` holds the callee followed
/// by its arguments. Leaf kinds hold none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArgKind {
    Identifier,
    NonStringLiteral,
    StringLiteral,
    This,
    Paren,
    PrefixIncDec,
    PostfixIncDec,
    UnaryOp(UnaryOp),
    Sizeof,
    Cast,
    Member(Accessor),
    Index,
    Call,
    MacroIdentifier,
    Other,
}

impl ArgKind {
    pub fn is_leaf(self) -> bool {
        matches!(
            self,
            ArgKind::Identifier
                | ArgKind::NonStringLiteral
                | ArgKind::StringLiteral
                | ArgKind::This
                | ArgKind::MacroIdentifier
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArgExpr {
    pub kind: ArgKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ArgExpr>,
    /// Leaf payload; for casts the target type, for `Other` the expression text.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub token_text: String,
}

impl ArgExpr {
    pub fn leaf(kind: ArgKind, text: impl Into<String>) -> Self {
        ArgExpr {
            kind,
            children: Vec::new(),
            token_text: text.into(),
        }
    }

    pub fn node(kind: ArgKind, children: Vec<ArgExpr>) -> Self {
        ArgExpr {
            kind,
            children,
            token_text: String::new(),
        }
    }

    pub fn ident(name: &str) -> Self {
        Self::leaf(ArgKind::Identifier, name)
    }

    /// Checks the per-kind child counts documented on [`ArgKind`].
    pub fn is_well_formed(&self) -> bool {
        let arity_ok = match self.kind {
            k if k.is_leaf() => self.children.is_empty(),
            ArgKind::Paren
            | ArgKind::PrefixIncDec
            | ArgKind::PostfixIncDec
            | ArgKind::UnaryOp(_)
            | ArgKind::Cast => self.children.len() == 1,
            ArgKind::Sizeof => self.children.len() <= 1,
            ArgKind::Member(_) | ArgKind::Index => self.children.len() == 2,
            ArgKind::Call => !self.children.is_empty(),
            _ => true,
        };
        arity_ok && self.children.iter().all(ArgExpr::is_well_formed)
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(ArgExpr::depth).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallSiteRecord {
    pub callee: String,
    pub args: Vec<ArgExpr>,
    pub location: SourceLocation,
    #[serde(default)]
    pub caller_name: Option<String>,
    /// Innermost last.
    #[serde(default)]
    pub enclosing_conditions: Vec<String>,
    /// In file order, comments included.
    #[serde(default)]
    pub preceding_lines: Vec<String>,
    pub arg_source_texts: Vec<String>,
    #[serde(default)]
    pub from_macro_expansion: bool,
    /// Best-effort static type of each argument; empty when unknown.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub arg_types: Vec<Option<String>>,
}

impl CallSiteRecord {
    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// Inferred type of the argument at 1-based `position`, if known.
    pub fn arg_type(&self, position: usize) -> Option<&str> {
        self.arg_types
            .get(position.checked_sub(1)?)
            .and_then(|t| t.as_deref())
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        if self.args.len() != self.arg_source_texts.len() {
            return Err(format!(
                "call to `{}` has {} args but {} source texts",
                self.callee,
                self.args.len(),
                self.arg_source_texts.len()
            ));
        }
        if !self.arg_types.is_empty() && self.arg_types.len() != self.args.len() {
            return Err(format!("call to `{}` has mismatched arg_types", self.callee));
        }
        if self.enclosing_conditions.len() > MAX_ENCLOSING_CONDITIONS {
            return Err(format!("call to `{}` keeps too many conditions", self.callee));
        }
        if self.preceding_lines.len() > MAX_PRECEDING_LINES {
            return Err(format!("call to `{}` keeps too many preceding lines", self.callee));
        }
        if self.location.line == 0 || self.location.column == 0 {
            return Err(format!("call to `{}` has a zero line or column", self.callee));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclarationRecord {
    pub function_name: String,
    /// `None` when the parameter list is unknown; inner `None` for an unnamed parameter.
    #[serde(default)]
    pub param_names: Option<Vec<Option<String>>>,
    #[serde(default)]
    pub param_types: Option<Vec<String>>,
    pub location: SourceLocation,
}

impl DeclarationRecord {
    pub fn arity(&self) -> Option<usize> {
        self.param_names
            .as_ref()
            .map(Vec::len)
            .or_else(|| self.param_types.as_ref().map(Vec::len))
    }

    pub fn param_name(&self, position: usize) -> Option<&str> {
        self.param_names
            .as_ref()?
            .get(position.checked_sub(1)?)?
            .as_deref()
    }

    pub fn param_type(&self, position: usize) -> Option<&str> {
        self.param_types
            .as_ref()?
            .get(position.checked_sub(1)?)
            .map(String::as_str)
    }

    pub fn has_any_param_name(&self) -> bool {
        self.param_names
            .as_ref()
            .is_some_and(|names| names.iter().any(Option::is_some))
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        if let (Some(names), Some(types)) = (&self.param_names, &self.param_types) {
            if names.len() != types.len() {
                return Err(format!(
                    "declaration of `{}` has {} names but {} types",
                    self.function_name,
                    names.len(),
                    types.len()
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectRecord {
    pub project_id: String,
    pub call_sites: Vec<CallSiteRecord>,
    pub declarations: Vec<DeclarationRecord>,
}

impl ProjectRecord {
    pub fn new(project_id: impl Into<String>) -> Self {
        ProjectRecord {
            project_id: project_id.into(),
            ..Default::default()
        }
    }
}

/// Picks the declaration for a call: exact name, arity equal to the call's
/// argument count preferred, otherwise the first seen.
pub fn match_declaration<'a>(
    call: &CallSiteRecord,
    declarations: &'a [DeclarationRecord],
) -> Option<&'a DeclarationRecord> {
    let mut first = None;
    for decl in declarations.iter().filter(|d| d.function_name == call.callee) {
        if decl.arity() == Some(call.arity()) {
            return Some(decl);
        }
        first.get_or_insert(decl);
    }
    first
}
