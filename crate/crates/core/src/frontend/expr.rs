//! Small expression grammar for call arguments.
//!
//! Only the node shapes that name extraction distinguishes are built; anything
//! else (binary operators, ternaries, lambdas, ...) collapses into `Other`.

use super::lexer::{TokKind, Token};
use super::{Accessor, ArgExpr, ArgKind, UnaryOp};

const MAX_DEPTH: usize = 64;

pub(crate) const TYPE_KEYWORDS: &[&str] = &[
    "void", "char", "short", "int", "long", "float", "double", "signed", "unsigned", "bool",
    "_Bool", "const", "volatile", "struct", "union", "enum", "restrict", "__restrict",
    "register", "static", "extern", "inline", "auto", "typename", "class", "wchar_t",
    "char16_t", "char32_t", "__inline", "__extension__",
];

const CXX_CASTS: &[&str] = &["static_cast", "dynamic_cast", "reinterpret_cast", "const_cast"];

pub(crate) fn is_type_keyword(s: &str) -> bool {
    TYPE_KEYWORDS.contains(&s)
}

/// Uppercase letters, digits and underscores only, with at least one letter.
pub(crate) fn looks_like_macro(name: &str) -> bool {
    name.bytes().any(|b| b.is_ascii_uppercase())
        && name
            .bytes()
            .all(|b| b.is_ascii_uppercase() || b.is_ascii_digit() || b == b'_')
}

/// Renders tokens with single spaces where the source had whitespace or comments.
pub(crate) fn normalized_text(src: &str, toks: &[Token]) -> String {
    let mut out = String::new();
    for (k, t) in toks.iter().enumerate() {
        if k > 0 && t.spaced {
            out.push(' ');
        }
        out.push_str(t.text(src));
    }
    out
}

/// Type text with `*`/`&` glued to what precedes them, e.g. `const char*`.
pub(crate) fn normalized_type(src: &str, toks: &[Token]) -> String {
    let mut out = String::new();
    for t in toks {
        let text = t.text(src);
        let glue = matches!(text, "*" | "&" | "&&" | "[" | "]" | "::" | "<" | ">" | ",")
            || out.ends_with("::")
            || out.ends_with('<')
            || out.ends_with('[');
        if !out.is_empty() && !glue {
            out.push(' ');
        }
        out.push_str(text);
    }
    out
}

/// Splits a parenthesized list's interior on top-level commas.
pub(crate) fn split_top_level(toks: &[Token], src: &str) -> Vec<(usize, usize)> {
    let mut parts = Vec::new();
    if toks.is_empty() {
        return parts;
    }
    let mut depth = 0i32;
    let mut start = 0;
    for (k, t) in toks.iter().enumerate() {
        if t.kind != TokKind::Punct {
            continue;
        }
        match t.text(src) {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => depth -= 1,
            "," if depth == 0 => {
                parts.push((start, k));
                start = k + 1;
            }
            _ => {}
        }
    }
    parts.push((start, toks.len()));
    parts
}

/// Index of the token closing the bracket opened at `open`, if balanced.
pub(crate) fn matching_close(toks: &[Token], src: &str, open: usize) -> Option<usize> {
    let (o, c) = match toks.get(open)?.text(src) {
        "(" => ("(", ")"),
        "[" => ("[", "]"),
        "{" => ("{", "}"),
        _ => return None,
    };
    let mut depth = 0usize;
    for (k, t) in toks.iter().enumerate().skip(open) {
        if t.kind != TokKind::Punct {
            continue;
        }
        let s = t.text(src);
        if s == o {
            depth += 1;
        } else if s == c {
            depth -= 1;
            if depth == 0 {
                return Some(k);
            }
        }
    }
    None
}

pub(crate) fn parse_argument(src: &str, toks: &[Token]) -> ArgExpr {
    parse_with_depth(src, toks, 0)
}

fn parse_with_depth(src: &str, toks: &[Token], depth: usize) -> ArgExpr {
    if toks.is_empty() {
        return ArgExpr::leaf(ArgKind::Other, "");
    }
    let mut p = Parser { src, toks, pos: 0, depth };
    match p.unary() {
        Some(e) if p.pos == toks.len() => e,
        _ => ArgExpr::leaf(ArgKind::Other, normalized_text(src, toks)),
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: &'a [Token],
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).map(|t| t.text(self.src))
    }

    fn peek_tok(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn nested(&self, toks: &[Token]) -> ArgExpr {
        parse_with_depth(self.src, toks, self.depth + 1)
    }

    fn unary(&mut self) -> Option<ArgExpr> {
        if self.depth > MAX_DEPTH {
            return None;
        }
        let tok = *self.peek_tok()?;
        let text = tok.text(self.src);
        if tok.kind == TokKind::Punct {
            let op = match text {
                "&" => Some(UnaryOp::AddressOf),
                "+" => Some(UnaryOp::Plus),
                "-" => Some(UnaryOp::Minus),
                "*" => Some(UnaryOp::Deref),
                _ => None,
            };
            if let Some(op) = op {
                self.pos += 1;
                let operand = self.deeper(|p| p.unary())?;
                return Some(ArgExpr::node(ArgKind::UnaryOp(op), vec![operand]));
            }
            if text == "++" || text == "--" {
                self.pos += 1;
                let operand = self.deeper(|p| p.unary())?;
                return Some(ArgExpr::node(ArgKind::PrefixIncDec, vec![operand]));
            }
            if text == "(" {
                let close = self.pos + matching_close(&self.toks[self.pos..], self.src, 0)?;
                let inner = &self.toks[self.pos + 1..close];
                if self.is_cast(inner, close) {
                    self.pos = close + 1;
                    let operand = self.deeper(|p| p.unary())?;
                    let mut cast = ArgExpr::node(ArgKind::Cast, vec![operand]);
                    cast.token_text = normalized_type(self.src, inner);
                    return Some(cast);
                }
                self.pos = close + 1;
                let inner = self.nested(inner);
                let paren = ArgExpr::node(ArgKind::Paren, vec![inner]);
                return self.postfix(paren);
            }
            return None;
        }
        if tok.kind == TokKind::Ident && text == "sizeof" {
            self.pos += 1;
            if self.peek() == Some("(") {
                let close = self.pos + matching_close(&self.toks[self.pos..], self.src, 0)?;
                let inner = &self.toks[self.pos + 1..close];
                self.pos = close + 1;
                let operand = self.nested(inner);
                return Some(ArgExpr::node(ArgKind::Sizeof, vec![operand]));
            }
            let operand = self.deeper(|p| p.unary())?;
            return Some(ArgExpr::node(ArgKind::Sizeof, vec![operand]));
        }
        if tok.kind == TokKind::Ident && CXX_CASTS.contains(&text) {
            return self.cxx_cast();
        }
        let primary = self.primary()?;
        self.postfix(primary)
    }

    fn deeper<T>(&mut self, f: impl FnOnce(&mut Self) -> Option<T>) -> Option<T> {
        self.depth += 1;
        let r = f(self);
        self.depth -= 1;
        r
    }

    fn cxx_cast(&mut self) -> Option<ArgExpr> {
        // name < type > ( expr )
        self.pos += 1;
        if self.peek() != Some("<") {
            return None;
        }
        let ty_start = self.pos + 1;
        let mut angle = 0i32;
        let mut k = self.pos;
        loop {
            match self.toks.get(k)?.text(self.src) {
                "<" => angle += 1,
                ">" => {
                    angle -= 1;
                    if angle == 0 {
                        break;
                    }
                }
                ">>" => {
                    angle -= 2;
                    if angle <= 0 {
                        break;
                    }
                }
                _ => {}
            }
            k += 1;
        }
        let ty = normalized_type(self.src, &self.toks[ty_start..k]);
        self.pos = k + 1;
        if self.peek() != Some("(") {
            return None;
        }
        let close = self.pos + matching_close(&self.toks[self.pos..], self.src, 0)?;
        let operand = self.nested(&self.toks[self.pos + 1..close]);
        self.pos = close + 1;
        let mut cast = ArgExpr::node(ArgKind::Cast, vec![operand]);
        cast.token_text = ty;
        self.postfix(cast)
    }

    fn is_cast(&self, inner: &[Token], close: usize) -> bool {
        if inner.is_empty() {
            return false;
        }
        let mut words = 0;
        let mut typeish = false;
        for t in inner {
            let s = t.text(self.src);
            match t.kind {
                TokKind::Ident => {
                    words += 1;
                    if is_type_keyword(s) || s.ends_with("_t") {
                        typeish = true;
                    }
                }
                TokKind::Punct if matches!(s, "*" | "&" | "::" | "<" | ">") => typeish = true,
                _ => return false,
            }
        }
        if words == 0 {
            return false;
        }
        if inner.len() > 1 && !typeish {
            // `(a b)` is not an expression either way; treat as a type.
            typeish = inner.iter().all(|t| t.kind == TokKind::Ident);
        }
        let Some(next) = self.toks.get(close + 1) else {
            return false;
        };
        let ns = next.text(self.src);
        let starts_primary = matches!(next.kind, TokKind::Ident | TokKind::Number | TokKind::Str | TokKind::Char);
        if starts_primary {
            return true;
        }
        let starts_operand = matches!(ns, "(" | "&" | "*" | "-" | "+" | "!" | "~" | "++" | "--");
        starts_operand && typeish
    }

    fn primary(&mut self) -> Option<ArgExpr> {
        let tok = *self.peek_tok()?;
        let text = tok.text(self.src);
        self.pos += 1;
        let e = match tok.kind {
            TokKind::Ident => match text {
                "this" => ArgExpr::leaf(ArgKind::This, "this"),
                "true" | "false" | "nullptr" => ArgExpr::leaf(ArgKind::NonStringLiteral, text),
                // Adjacent string pieces: PRIu64 "b".
                _ if self.peek_tok().is_some_and(|t| t.kind == TokKind::Str) => {
                    self.pos -= 1;
                    return self.string_run();
                }
                _ if looks_like_macro(text) => ArgExpr::leaf(ArgKind::MacroIdentifier, text),
                _ => ArgExpr::leaf(ArgKind::Identifier, text),
            },
            TokKind::Number | TokKind::Char => ArgExpr::leaf(ArgKind::NonStringLiteral, text),
            TokKind::Str => {
                self.pos -= 1;
                return self.string_run();
            }
            TokKind::Punct if text == "::" => {
                let next = *self.peek_tok()?;
                if next.kind != TokKind::Ident {
                    return None;
                }
                self.pos += 1;
                ArgExpr::leaf(ArgKind::Identifier, next.text(self.src))
            }
            _ => return None,
        };
        Some(e)
    }

    fn string_run(&mut self) -> Option<ArgExpr> {
        let start = self.pos;
        while let Some(t) = self.peek_tok() {
            let s = t.text(self.src);
            let pasted = t.kind == TokKind::Ident
                && !matches!(s, "this" | "true" | "false" | "nullptr")
                && self.toks.get(self.pos + 1).is_some_and(|n| n.kind == TokKind::Str);
            if t.kind == TokKind::Str || pasted {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = normalized_text(self.src, &self.toks[start..self.pos]);
        Some(ArgExpr::leaf(ArgKind::StringLiteral, text))
    }

    fn postfix(&mut self, mut base: ArgExpr) -> Option<ArgExpr> {
        loop {
            let Some(tok) = self.peek_tok() else {
                return Some(base);
            };
            if tok.kind != TokKind::Punct {
                return Some(base);
            }
            match tok.text(self.src) {
                "(" => {
                    let close = self.pos + matching_close(&self.toks[self.pos..], self.src, 0)?;
                    let inner = &self.toks[self.pos + 1..close];
                    let mut children = vec![base];
                    for (a, b) in split_top_level(inner, self.src) {
                        children.push(self.nested(&inner[a..b]));
                    }
                    self.pos = close + 1;
                    base = ArgExpr::node(ArgKind::Call, children);
                }
                "[" => {
                    let close = self.pos + matching_close(&self.toks[self.pos..], self.src, 0)?;
                    let index = self.nested(&self.toks[self.pos + 1..close]);
                    self.pos = close + 1;
                    base = ArgExpr::node(ArgKind::Index, vec![base, index]);
                }
                acc @ ("." | "->" | "::") => {
                    let accessor = match acc {
                        "." => Accessor::Dot,
                        "->" => Accessor::Arrow,
                        _ => Accessor::Scope,
                    };
                    let member = *self.toks.get(self.pos + 1)?;
                    if member.kind != TokKind::Ident {
                        return None;
                    }
                    self.pos += 2;
                    let name = member.text(self.src);
                    let leaf = if looks_like_macro(name) && accessor == Accessor::Scope {
                        ArgExpr::leaf(ArgKind::MacroIdentifier, name)
                    } else {
                        ArgExpr::ident(name)
                    };
                    base = ArgExpr::node(ArgKind::Member(accessor), vec![base, leaf]);
                }
                "++" | "--" => {
                    self.pos += 1;
                    base = ArgExpr::node(ArgKind::PostfixIncDec, vec![base]);
                }
                _ => return Some(base),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::lexer::tokenize;
    use super::*;

    fn parse(src: &str) -> ArgExpr {
        let toks = tokenize(src);
        parse_argument(src, &toks)
    }

    #[test]
    fn unary_address_of() {
        let e = parse("&xinput_error_base");
        assert_eq!(e.kind, ArgKind::UnaryOp(UnaryOp::AddressOf));
        assert_eq!(e.children[0], ArgExpr::ident("xinput_error_base"));
    }

    #[test]
    fn c_cast_with_named_type() {
        let e = parse("(Coordinate)minContigKmerLength");
        assert_eq!(e.kind, ArgKind::Cast);
        assert_eq!(e.token_text, "Coordinate");
        assert_eq!(e.children[0], ArgExpr::ident("minContigKmerLength"));
    }

    #[test]
    fn pointer_cast_and_paren() {
        let e = parse("(const char *) -x");
        assert_eq!(e.kind, ArgKind::Cast);
        assert_eq!(e.token_text, "const char*");
        let e = parse("(a) - b");
        assert_eq!(e.kind, ArgKind::Other);
        let e = parse("(a)");
        assert_eq!(e.kind, ArgKind::Paren);
    }

    #[test]
    fn member_index_call_chains() {
        let e = parse("pt->read_buf");
        assert_eq!(e.kind, ArgKind::Member(Accessor::Arrow));
        let e = parse("bufs[i].len");
        assert_eq!(e.kind, ArgKind::Member(Accessor::Dot));
        assert_eq!(e.children[0].kind, ArgKind::Index);
        let e = parse("take_pointer(pt->read_buf, cur)");
        assert_eq!(e.kind, ArgKind::Call);
        assert_eq!(e.children.len(), 3);
        assert!(e.is_well_formed());
    }

    #[test]
    fn literals_and_macros() {
        assert_eq!(parse("\"XInputExtension\"").kind, ArgKind::StringLiteral);
        assert_eq!(parse("\"a\" PRIu64 \"b\"").kind, ArgKind::StringLiteral);
        assert_eq!(parse("42").kind, ArgKind::NonStringLiteral);
        assert_eq!(parse("'c'").kind, ArgKind::NonStringLiteral);
        assert_eq!(parse("SIGKILL").kind, ArgKind::MacroIdentifier);
        assert_eq!(parse("this").kind, ArgKind::This);
    }

    #[test]
    fn sizeof_and_incdec() {
        assert_eq!(parse("sizeof(buf)").kind, ArgKind::Sizeof);
        assert_eq!(parse("sizeof buf").kind, ArgKind::Sizeof);
        assert_eq!(parse("i++").kind, ArgKind::PostfixIncDec);
        assert_eq!(parse("--i").kind, ArgKind::PrefixIncDec);
    }

    #[test]
    fn binary_and_ternary_are_other() {
        assert_eq!(parse("a + b").kind, ArgKind::Other);
        assert_eq!(parse("c ? a : b").kind, ArgKind::Other);
        assert_eq!(parse("!done").kind, ArgKind::Other);
    }

    #[test]
    fn cxx_cast() {
        let e = parse("static_cast<int>(width)");
        assert_eq!(e.kind, ArgKind::Cast);
        assert_eq!(e.token_text, "int");
    }

    #[test]
    fn top_level_split_ignores_nested_commas() {
        let src = "a, f(b, c), d[1,2], \"x,y\"";
        let toks = tokenize(src);
        assert_eq!(split_top_level(&toks, src).len(), 4);
    }

    #[test]
    fn deep_nesting_is_bounded() {
        let src = format!("{}x{}", "(".repeat(500), ")".repeat(500));
        let e = parse(&src);
        assert!(e.depth() <= MAX_DEPTH + 3);
    }
}
