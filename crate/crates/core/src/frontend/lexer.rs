//! A forgiving tokenizer for C-like source.
//!
//! Comments are dropped, preprocessor directives are collapsed into a single
//! `Directive` token, and any byte it does not recognize becomes a one-byte
//! punctuation token.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TokKind {
    Ident,
    Number,
    Str,
    Char,
    Punct,
    Directive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Token {
    pub kind: TokKind,
    pub start: usize,
    pub end: usize,
    /// 1-based.
    pub line: u32,
    /// 1-based byte column.
    pub col: u32,
    /// Whitespace or a comment separated this token from the previous one.
    pub spaced: bool,
}

impl Token {
    pub fn text<'s>(&self, src: &'s str) -> &'s str {
        &src[self.start..self.end]
    }
}

const PUNCT3: &[&str] = &["<<=", ">>=", "...", "->*"];
const PUNCT2: &[&str] = &[
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "+=", "-=", "*=", "/=",
    "%=", "&=", "|=", "^=", "::", "##",
];

pub(crate) fn tokenize(src: &str) -> Vec<Token> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    let mut line = 1u32;
    let mut line_start = 0usize;
    let mut spaced = false;
    // A `#` is a directive only when it is the first token on its line.
    let mut at_line_start = true;

    while i < bytes.len() {
        let b = bytes[i];
        if b == b'\n' {
            line += 1;
            i += 1;
            line_start = i;
            spaced = true;
            at_line_start = true;
            continue;
        }
        if b.is_ascii_whitespace() {
            i += 1;
            spaced = true;
            continue;
        }
        if b == b'/' && bytes.get(i + 1) == Some(&b'/') {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            spaced = true;
            continue;
        }
        if b == b'/' && bytes.get(i + 1) == Some(&b'*') {
            i += 2;
            while i < bytes.len() && !(bytes[i] == b'*' && bytes.get(i + 1) == Some(&b'/')) {
                if bytes[i] == b'\n' {
                    line += 1;
                    line_start = i + 1;
                }
                i += 1;
            }
            i = (i + 2).min(bytes.len());
            spaced = true;
            continue;
        }

        let start = i;
        let tok_line = line;
        let col = (start - line_start + 1) as u32;
        let kind;
        if b == b'#' && at_line_start {
            // Runs to the end of the logical line, honoring backslash continuations.
            while i < bytes.len() {
                if bytes[i] == b'\\' && bytes.get(i + 1) == Some(&b'\n') {
                    i += 2;
                    line += 1;
                    line_start = i;
                    continue;
                }
                if bytes[i] == b'\\' && bytes.get(i + 1) == Some(&b'\r') {
                    i += 1;
                    continue;
                }
                if bytes[i] == b'\n' {
                    break;
                }
                if bytes[i] == b'/' && bytes.get(i + 1) == Some(&b'*') {
                    i += 2;
                    while i < bytes.len() && !(bytes[i] == b'*' && bytes.get(i + 1) == Some(&b'/')) {
                        if bytes[i] == b'\n' {
                            line += 1;
                            line_start = i + 1;
                        }
                        i += 1;
                    }
                    i = (i + 2).min(bytes.len());
                    continue;
                }
                i += 1;
            }
            kind = TokKind::Directive;
        } else if b == b'_' || b.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i] == b'_' || bytes[i].is_ascii_alphanumeric()) {
                i += 1;
            }
            // String literal prefixes: L"..", u8"..", R"(..)" is not handled specially.
            if i < bytes.len() && (bytes[i] == b'"' || bytes[i] == b'\'') {
                let prefix = &src[start..i];
                if matches!(prefix, "L" | "u" | "U" | "u8") {
                    let quote = bytes[i];
                    i = skip_quoted(bytes, i, quote);
                    kind = if quote == b'"' { TokKind::Str } else { TokKind::Char };
                    toks.push(Token {
                        kind,
                        start,
                        end: i,
                        line: tok_line,
                        col,
                        spaced,
                    });
                    spaced = false;
                    at_line_start = false;
                    continue;
                }
            }
            kind = TokKind::Ident;
        } else if b.is_ascii_digit() || (b == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let hex = src[start..].starts_with("0x") || src[start..].starts_with("0X");
            while i < bytes.len() {
                let c = bytes[i];
                let exp_sign = (c == b'+' || c == b'-')
                    && match bytes[i - 1] {
                        b'e' | b'E' => !hex,
                        b'p' | b'P' => hex,
                        _ => false,
                    };
                if c.is_ascii_alphanumeric() || c == b'.' || c == b'_' || c == b'\'' || exp_sign {
                    i += 1;
                } else {
                    break;
                }
            }
            kind = TokKind::Number;
        } else if b == b'"' || b == b'\'' {
            i = skip_quoted(bytes, i, b);
            // Backslash-newline continuations inside the literal.
            for (k, &c) in bytes[start..i].iter().enumerate() {
                if c == b'\n' {
                    line += 1;
                    line_start = start + k + 1;
                }
            }
            kind = if b == b'"' { TokKind::Str } else { TokKind::Char };
        } else {
            let rest = &src[i..];
            let len = if PUNCT3.iter().any(|p| rest.starts_with(p)) {
                3
            } else if PUNCT2.iter().any(|p| rest.starts_with(p)) {
                2
            } else {
                // Keep multi-byte UTF-8 sequences whole.
                let mut n = 1;
                while !src.is_char_boundary(i + n) {
                    n += 1;
                }
                n
            };
            i += len;
            kind = TokKind::Punct;
        }
        toks.push(Token {
            kind,
            start,
            end: i,
            line: tok_line,
            col,
            spaced,
        });
        spaced = false;
        at_line_start = false;
    }
    toks
}

fn skip_quoted(bytes: &[u8], mut i: usize, quote: u8) -> usize {
    i += 1;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => i += 2,
            b'\n' => {
                // Unterminated literal: stop at the end of the line.
                return i;
            }
            c if c == quote => return i + 1,
            _ => i += 1,
        }
    }
    i.min(bytes.len())
}
