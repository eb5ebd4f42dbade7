use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use super::expr::{
    is_type_keyword, matching_close, normalized_text, normalized_type, parse_argument,
    split_top_level,
};
use super::lexer::{tokenize, TokKind, Token};
use super::{
    ArgExpr, ArgKind, CallSiteRecord, DeclarationRecord, SourceLocation, UnaryOp,
    MAX_ENCLOSING_CONDITIONS, MAX_PRECEDING_LINES,
};

/// Identifiers followed by `(` that never name a callee.
const NON_CALLEES: &[&str] = &[
    "if", "while", "for", "switch", "return", "sizeof", "catch", "alignof", "_Alignof",
    "decltype", "typeof", "__typeof__", "__attribute__", "__declspec", "defined",
    "_Static_assert", "static_assert", "new", "delete", "case", "do", "else", "goto",
    "asm", "__asm__", "__asm", "throw", "static_cast", "dynamic_cast", "reinterpret_cast",
    "const_cast", "_Generic", "noexcept", "alignas", "operator", "template",
];

/// Keywords that end a backwards type run without making it a declaration.
const CONTROL_KEYWORDS: &[&str] = &[
    "return", "else", "case", "goto", "do", "throw", "new", "delete", "sizeof", "co_return",
    "co_await", "co_yield",
];

const QUALIFIERS_ONLY: &[&str] = &[
    "const", "volatile", "struct", "union", "enum", "class", "typename", "restrict",
    "__restrict", "register",
];

/// Calls and declarations found in a set of sources.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanOutput {
    pub calls: Vec<CallSiteRecord>,
    pub declarations: Vec<DeclarationRecord>,
}

/// Scans one file. Never fails; unparseable regions yield no records.
pub fn scan_file(source_text: &str, file_path: &str) -> (Vec<CallSiteRecord>, Vec<DeclarationRecord>) {
    let scan = FileScan::run(source_text, file_path);
    (scan.calls, scan.declarations)
}

/// Scans many files (in parallel when `jobs != 1`) and merges the results in
/// `(file_path, line, column)` order.
///
/// Project-wide knowledge is applied after merging: calls through
/// function-like macros defined anywhere in the set are flagged as macro
/// expansions, and all-caps arguments naming a declared function are treated
/// as plain identifiers.
pub fn scan_sources(files: &[(String, String)], jobs: usize) -> ScanOutput {
    let scan_one = |(path, text): &(String, String)| FileScan::run(text, path);
    let scans: Vec<FileScan> = if jobs == 1 {
        files.iter().map(scan_one).collect()
    } else {
        files.par_iter().map(scan_one).collect()
    };

    let mut fn_macros = HashSet::new();
    let mut out = ScanOutput::default();
    for scan in scans {
        fn_macros.extend(scan.function_macros);
        out.calls.extend(scan.calls);
        out.declarations.extend(scan.declarations);
    }
    let declared: HashSet<&str> = out
        .declarations
        .iter()
        .map(|d| d.function_name.as_str())
        .collect();
    let declared: HashSet<String> = declared.into_iter().map(str::to_owned).collect();
    for call in &mut out.calls {
        if fn_macros.contains(&call.callee) && !declared.contains(&call.callee) {
            call.from_macro_expansion = true;
        }
        for arg in &mut call.args {
            demote_declared_macros(arg, &declared);
        }
    }
    out.calls.sort_by(|a, b| a.location.cmp(&b.location));
    out.declarations.sort_by(|a, b| a.location.cmp(&b.location));
    out
}

fn demote_declared_macros(expr: &mut ArgExpr, declared: &HashSet<String>) {
    if expr.kind == ArgKind::MacroIdentifier && declared.contains(&expr.token_text) {
        expr.kind = ArgKind::Identifier;
    }
    for child in &mut expr.children {
        demote_declared_macros(child, declared);
    }
}

/// Rewrites `source` so that arguments `pos_i` and `pos_j` (1-based) of the
/// call whose callee starts at `line`/`column` trade places.
pub fn apply_swap(source: &str, line: u32, column: u32, pos_i: usize, pos_j: usize) -> Option<String> {
    if pos_i == pos_j || pos_i == 0 || pos_j == 0 {
        return None;
    }
    let toks = tokenize(source);
    let k = toks
        .iter()
        .position(|t| t.line == line && t.col == column && t.kind == TokKind::Ident)?;
    if toks.get(k + 1)?.text(source) != "(" {
        return None;
    }
    let close = k + 1 + matching_close(&toks[k + 1..], source, 0)?;
    let inner = &toks[k + 2..close];
    let parts = split_top_level(inner, source);
    let span = |p: usize| -> Option<(usize, usize)> {
        let (a, b) = *parts.get(p - 1)?;
        if a == b {
            return None;
        }
        Some((inner[a].start, inner[b - 1].end))
    };
    let (first, second) = {
        let (x, y) = (span(pos_i)?, span(pos_j)?);
        if x.0 < y.0 { (x, y) } else { (y, x) }
    };
    let mut out = String::with_capacity(source.len());
    out.push_str(&source[..first.0]);
    out.push_str(&source[second.0..second.1]);
    out.push_str(&source[first.1..second.0]);
    out.push_str(&source[first.0..first.1]);
    out.push_str(&source[second.1..]);
    Some(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scope {
    /// Braced body; popped by the `}` that returns to `depth - 1`.
    Block { depth: usize },
    /// Single-statement body; popped at the `;` ending it.
    Stmt { depth: usize, parens: usize, since: usize },
    /// Ternary branches; popped when the enclosing expression ends.
    Ternary { depth: usize, parens: usize },
}

#[derive(Debug, Clone)]
struct Condition {
    text: String,
    scope: Scope,
    is_if: bool,
}

#[derive(Debug)]
struct Pending {
    at: usize,
    text: String,
    is_if: bool,
}

#[derive(Default)]
struct FileScan {
    calls: Vec<CallSiteRecord>,
    declarations: Vec<DeclarationRecord>,
    function_macros: HashSet<String>,
}

impl FileScan {
    fn run(src: &str, path: &str) -> Self {
        let toks = tokenize(src);
        let lines: Vec<&str> = src.split('\n').map(|l| l.trim_end_matches('\r')).collect();
        let var_types = collect_var_types(src, &toks);
        let mut scan = FileScan::default();

        let mut brace_depth = 0usize;
        let mut paren_depth = 0usize;
        let mut brace_opens: Vec<usize> = Vec::new();
        let mut conditions: Vec<Condition> = Vec::new();
        let mut pending: Vec<Pending> = Vec::new();
        let mut last_if: Option<(String, usize)> = None;
        // (function name, body depth) of enclosing definitions.
        let mut callers: Vec<(String, usize)> = Vec::new();
        let mut pending_body: Option<(String, usize)> = None;
        let mut param_types: HashMap<String, String> = HashMap::new();

        let mut k = 0;
        while k < toks.len() {
            let tok = toks[k];
            let text = tok.text(src);

            // Activate conditions whose body starts here.
            let mut n = 0;
            while n < pending.len() {
                if pending[n].at == k {
                    let p = pending.remove(n);
                    let scope = if text == "{" {
                        Scope::Block { depth: brace_depth + 1 }
                    } else {
                        Scope::Stmt {
                            depth: brace_depth,
                            parens: paren_depth,
                            since: k,
                        }
                    };
                    conditions.push(Condition {
                        text: p.text,
                        scope,
                        is_if: p.is_if,
                    });
                } else {
                    n += 1;
                }
            }

            match tok.kind {
                TokKind::Directive => {
                    if let Some(name) = function_macro_name(text) {
                        scan.function_macros.insert(name);
                    }
                }
                TokKind::Punct => match text {
                    "{" => {
                        brace_depth += 1;
                        brace_opens.push(k);
                        if let Some((name, depth)) = pending_body.take() {
                            if depth + 1 == brace_depth {
                                callers.push((name, brace_depth));
                            }
                        }
                    }
                    "}" => {
                        let open = brace_opens.pop().unwrap_or(0);
                        while let Some(c) = conditions.last() {
                            let pop = match c.scope {
                                Scope::Block { depth } => depth >= brace_depth,
                                Scope::Stmt { depth, .. } | Scope::Ternary { depth, .. } => {
                                    depth >= brace_depth
                                }
                            };
                            if !pop {
                                break;
                            }
                            let c = conditions.pop().unwrap();
                            if c.is_if {
                                last_if = Some((c.text, brace_depth.saturating_sub(1)));
                            }
                        }
                        if callers.last().is_some_and(|(_, d)| *d == brace_depth) {
                            callers.pop();
                            if callers.is_empty() {
                                param_types.clear();
                            }
                        }
                        brace_depth = brace_depth.saturating_sub(1);
                        paren_depth = 0;
                        // A braced statement ends any single-statement body that began before it.
                        while let Some(c) = conditions.last() {
                            match c.scope {
                                Scope::Stmt { depth, since, .. } if depth == brace_depth && since <= open => {
                                    let c = conditions.pop().unwrap();
                                    if c.is_if {
                                        last_if = Some((c.text, brace_depth));
                                    }
                                }
                                _ => break,
                            }
                        }
                    }
                    "(" | "[" => paren_depth += 1,
                    ")" | "]" => {
                        paren_depth = paren_depth.saturating_sub(1);
                        pop_ternaries(&mut conditions, |d, p| d == brace_depth && p > paren_depth);
                    }
                    "," => pop_ternaries(&mut conditions, |d, p| d == brace_depth && p == paren_depth),
                    ";" => {
                        pop_ternaries(&mut conditions, |d, _| d == brace_depth);
                        while let Some(c) = conditions.last() {
                            match c.scope {
                                Scope::Stmt { depth, parens, .. } if depth == brace_depth && parens >= paren_depth => {
                                    let c = conditions.pop().unwrap();
                                    if c.is_if {
                                        last_if = Some((c.text, brace_depth));
                                    }
                                }
                                _ => break,
                            }
                        }
                    }
                    "?" => {
                        let text = ternary_condition(src, &toks, k);
                        if !text.is_empty() {
                            conditions.push(Condition {
                                text,
                                scope: Scope::Ternary {
                                    depth: brace_depth,
                                    parens: paren_depth,
                                },
                                is_if: false,
                            });
                        }
                    }
                    _ => {}
                },
                TokKind::Ident => {
                    let next_is_paren = toks.get(k + 1).is_some_and(|t| t.text(src) == "(");
                    if matches!(text, "if" | "while" | "for" | "switch") && next_is_paren {
                        if let Some(close) = matching_close(&toks[k + 1..], src, 0) {
                            let close = k + 1 + close;
                            let cond = normalized_text(src, &toks[k + 2..close]);
                            pending.push(Pending {
                                at: close + 1,
                                text: cond,
                                is_if: text == "if",
                            });
                        }
                    } else if text == "else" {
                        let next = toks.get(k + 1).map(|t| t.text(src));
                        if let Some((cond, depth)) = last_if.take() {
                            if depth == brace_depth && next != Some("if") && k + 1 < toks.len() {
                                pending.push(Pending {
                                    at: k + 1,
                                    text: cond,
                                    is_if: false,
                                });
                            }
                        }
                    } else if next_is_paren && !NON_CALLEES.contains(&text) && pending_body.is_none() {
                        let caller = callers.last().map(|(name, _)| name.clone());
                        match classify(src, &toks, k, caller.is_some()) {
                            Site::Call => {
                                let ctx = CallContext {
                                    src,
                                    path,
                                    lines: &lines,
                                    caller,
                                    conditions: &conditions,
                                    var_types: &var_types,
                                    param_types: &param_types,
                                };
                                if let Some(call) = build_call(&toks, k, &ctx) {
                                    scan.calls.push(call);
                                }
                            }
                            Site::Declaration => {
                                if let Some((decl, body)) = build_declaration(src, path, &toks, k) {
                                    if body && callers.is_empty() {
                                        param_types.clear();
                                        if let (Some(names), Some(types)) = (&decl.param_names, &decl.param_types) {
                                            for (n, t) in names.iter().zip(types) {
                                                if let Some(n) = n {
                                                    param_types.insert(n.clone(), t.clone());
                                                }
                                            }
                                        }
                                        pending_body = Some((decl.function_name.clone(), brace_depth));
                                    }
                                    scan.declarations.push(decl);
                                }
                            }
                            Site::Skip => {}
                        }
                    }
                }
                _ => {}
            }
            k += 1;
        }
        scan
    }
}

fn pop_ternaries(conditions: &mut Vec<Condition>, pred: impl Fn(usize, usize) -> bool) {
    while let Some(Condition {
        scope: Scope::Ternary { depth, parens },
        ..
    }) = conditions.last()
    {
        if pred(*depth, *parens) {
            conditions.pop();
        } else {
            break;
        }
    }
}

/// `#define NAME(` with no space before the parenthesis.
fn function_macro_name(directive: &str) -> Option<String> {
    let rest = directive.strip_prefix('#')?.trim_start();
    let rest = rest.strip_prefix("define")?;
    if !rest.starts_with([' ', '\t']) {
        return None;
    }
    let rest = rest.trim_start();
    let end = rest
        .find(|c: char| !(c == '_' || c.is_ascii_alphanumeric()))
        .unwrap_or(rest.len());
    if end == 0 || !rest[end..].starts_with('(') {
        return None;
    }
    Some(rest[..end].to_owned())
}

/// Text of the ternary condition ending just before the `?` at `q`.
fn ternary_condition(src: &str, toks: &[Token], q: usize) -> String {
    let mut k = q;
    let mut depth = 0i32;
    while k > 0 {
        let t = toks[k - 1];
        let s = t.text(src);
        if t.kind == TokKind::Punct {
            match s {
                ")" | "]" => depth += 1,
                "(" | "[" => {
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                }
                ";" | "{" | "}" | "," | "?" | ":" | "=" | "+=" | "-=" | "*=" | "/=" | "|=" | "&="
                    if depth == 0 =>
                {
                    break
                }
                _ => {}
            }
        } else if (t.kind == TokKind::Ident && s == "return" && depth == 0) || t.kind == TokKind::Directive {
            break;
        }
        k -= 1;
    }
    normalized_text(src, &toks[k..q])
}

enum Site {
    Call,
    Declaration,
    Skip,
}

fn is_typeish(t: &Token, src: &str) -> bool {
    match t.kind {
        TokKind::Ident => !CONTROL_KEYWORDS.contains(&t.text(src)),
        TokKind::Punct => matches!(t.text(src), "*" | "&" | "&&" | "::" | "<" | ">" | "~"),
        _ => false,
    }
}

fn is_boundary(t: Option<&Token>, src: &str) -> bool {
    match t {
        None => true,
        Some(t) => {
            t.kind == TokKind::Directive
                || (t.kind == TokKind::Punct && matches!(t.text(src), ";" | "{" | "}" | ":"))
        }
    }
}

/// Decides whether `name(` at `k` is a call or a declarator.
fn classify(src: &str, toks: &[Token], k: usize, in_function: bool) -> Site {
    if k > 0 {
        let prev = toks[k - 1].text(src);
        if prev == "." || prev == "->" || prev == ".*" || prev == "->*" {
            // Receiver calls are not resolved.
            return Site::Skip;
        }
    }
    // Walk back over qualification `a::b::name`.
    let mut j = k;
    while j >= 2 && toks[j - 1].text(src) == "::" && toks[j - 2].kind == TokKind::Ident {
        j -= 2;
    }
    let mut run_start = j;
    while run_start > 0 && is_typeish(&toks[run_start - 1], src) {
        run_start -= 1;
    }
    let run = &toks[run_start..j];
    let has_type_word = run.iter().any(|t| t.kind == TokKind::Ident);
    let boundary = is_boundary(run_start.checked_sub(1).map(|i| &toks[i]), src);
    if has_type_word && boundary {
        return Site::Declaration;
    }
    if !run.is_empty() && has_type_word {
        // e.g. `a * f(x)` inside an expression.
        return Site::Call;
    }
    if !in_function && run.is_empty() && boundary {
        // File scope: `Foo::Foo(int a) {` or a macro-introduced prototype.
        if let Some(close) = matching_close(&toks[k + 1..], src, 0) {
            let after = after_declarator(src, toks, k + 1 + close + 1);
            if matches!(after, Some("{") | Some(":")) {
                return Site::Declaration;
            }
        }
        return Site::Skip;
    }
    Site::Call
}

/// First token after a declarator's parameter list, skipping trailing
/// qualifiers and attributes.
fn after_declarator<'s>(src: &'s str, toks: &[Token], mut k: usize) -> Option<&'s str> {
    while let Some(t) = toks.get(k) {
        let s = t.text(src);
        match s {
            "const" | "noexcept" | "override" | "final" | "volatile" | "throw" | "&" | "&&" => k += 1,
            "__attribute__" | "__THROW" | "__nonnull" | "__wur" | "__attribute_pure__" => {
                k += 1;
                if toks.get(k).is_some_and(|t| t.text(src) == "(") {
                    k += matching_close(&toks[k..], src, 0)? + 1;
                }
            }
            "(" => k += matching_close(&toks[k..], src, 0)? + 1,
            _ => return Some(s),
        }
    }
    None
}

struct CallContext<'a> {
    src: &'a str,
    path: &'a str,
    lines: &'a [&'a str],
    caller: Option<String>,
    conditions: &'a [Condition],
    var_types: &'a HashMap<String, String>,
    param_types: &'a HashMap<String, String>,
}

fn build_call(toks: &[Token], k: usize, ctx: &CallContext<'_>) -> Option<CallSiteRecord> {
    let src = ctx.src;
    let name = toks[k];
    let close = k + 1 + matching_close(&toks[k + 1..], src, 0)?;
    let inner = &toks[k + 2..close];
    let mut args = Vec::new();
    let mut texts = Vec::new();
    for (a, b) in split_top_level(inner, src) {
        let part = &inner[a..b];
        args.push(parse_argument(src, part));
        texts.push(normalized_text(src, part));
    }
    let arg_types = args
        .iter()
        .map(|a| infer_type(a, ctx.var_types, ctx.param_types))
        .collect::<Vec<_>>();
    let arg_types = if arg_types.iter().all(Option::is_none) {
        Vec::new()
    } else {
        arg_types
    };

    let line = name.line as usize;
    let first = line.saturating_sub(1 + MAX_PRECEDING_LINES);
    let preceding_lines = ctx.lines[first..(line - 1).min(ctx.lines.len())]
        .iter()
        .map(|l| (*l).to_owned())
        .collect();
    let n = ctx.conditions.len();
    let enclosing_conditions = ctx.conditions[n.saturating_sub(MAX_ENCLOSING_CONDITIONS)..]
        .iter()
        .map(|c| c.text.clone())
        .collect();

    Some(CallSiteRecord {
        callee: name.text(src).to_owned(),
        args,
        location: SourceLocation::new(ctx.path, name.line, name.col),
        caller_name: ctx.caller.clone(),
        enclosing_conditions,
        preceding_lines,
        arg_source_texts: texts,
        from_macro_expansion: false,
        arg_types,
    })
}

/// Returns the declaration and whether a function body follows it.
fn build_declaration(src: &str, path: &str, toks: &[Token], k: usize) -> Option<(DeclarationRecord, bool)> {
    let name = toks[k];
    let close = k + 1 + matching_close(&toks[k + 1..], src, 0)?;
    let after = after_declarator(src, toks, close + 1);
    let body = match after {
        Some(";") | Some(",") | Some("=") | None => false,
        Some("{") | Some(":") => true,
        // K&R parameter declarations, macro soup, direct-initialization.
        _ => return None,
    };
    let (names, types) = parse_params(src, &toks[k + 2..close])?;
    Some((
        DeclarationRecord {
            function_name: name.text(src).to_owned(),
            param_names: Some(names),
            param_types: Some(types),
            location: SourceLocation::new(path, name.line, name.col),
        },
        body,
    ))
}

#[allow(clippy::type_complexity)]
fn parse_params(src: &str, inner: &[Token]) -> Option<(Vec<Option<String>>, Vec<String>)> {
    let mut names = Vec::new();
    let mut types = Vec::new();
    let parts = split_top_level(inner, src);
    if parts.len() == 1 {
        let (a, b) = parts[0];
        let part = &inner[a..b];
        if part.is_empty() || (part.len() == 1 && part[0].text(src) == "void") {
            return Some((names, types));
        }
    }
    for (a, b) in parts {
        let mut part = &inner[a..b];
        if part.is_empty() {
            return None;
        }
        if part.len() == 1 && part[0].text(src) == "..." {
            break;
        }
        // Default argument.
        if let Some(eq) = part.iter().position(|t| t.text(src) == "=") {
            part = &part[..eq];
        }
        let in_brackets = |i: usize| part[..i].iter().any(|t| t.text(src) == "[");
        let literal = part.iter().enumerate().any(|(i, t)| match t.kind {
            TokKind::Ident | TokKind::Punct => false,
            TokKind::Number => !in_brackets(i),
            _ => true,
        });
        if literal {
            // Literals in a parameter list: this is a call after all.
            return None;
        }
        let (name, ty) = param_name_and_type(src, part);
        names.push(name);
        types.push(ty);
    }
    Some((names, types))
}

fn param_name_and_type(src: &str, part: &[Token]) -> (Option<String>, String) {
    // Function pointer: ret (*name)(args)
    if let Some(open) = part.iter().position(|t| t.text(src) == "(") {
        let name = part[open + 1..]
            .iter()
            .take_while(|t| t.text(src) != ")")
            .filter(|t| t.kind == TokKind::Ident)
            .last()
            .map(|t| t.text(src).to_owned());
        let ty_toks: Vec<Token> = part
            .iter()
            .filter(|t| Some(t.text(src)) != name.as_deref())
            .copied()
            .collect();
        return (name, normalized_type(src, &ty_toks));
    }
    // Trailing array brackets.
    let mut end = part.len();
    let mut array = false;
    if part.last().is_some_and(|t| t.text(src) == "]") {
        if let Some(open) = part.iter().rposition(|t| t.text(src) == "[") {
            end = open;
            array = true;
        }
    }
    let core = &part[..end];
    let Some(last) = core.last() else {
        return (None, normalized_type(src, part));
    };
    let prefix = &core[..core.len() - 1];
    let last_text = last.text(src);
    let named = last.kind == TokKind::Ident
        && !is_type_keyword(last_text)
        && !prefix.is_empty()
        && prefix.iter().any(|t| {
            let s = t.text(src);
            t.kind != TokKind::Ident || !QUALIFIERS_ONLY.contains(&s)
        })
        && prefix.last().is_some_and(|t| t.text(src) != "::");
    if named {
        let mut ty = normalized_type(src, prefix);
        if array {
            ty.push_str("[]");
        }
        (Some(last_text.to_owned()), ty)
    } else {
        (None, normalized_type(src, part))
    }
}

/// Declared types of plain variables in a file: `T name;`, `T *name = ...`,
/// and parameters. Scope-insensitive; the first declaration wins.
fn collect_var_types(src: &str, toks: &[Token]) -> HashMap<String, String> {
    let mut map = HashMap::new();
    for k in 0..toks.len() {
        let t = toks[k];
        if t.kind != TokKind::Ident || is_type_keyword(t.text(src)) {
            continue;
        }
        let next = toks.get(k + 1).map(|t| t.text(src));
        if !matches!(next, Some(";" | "=" | "," | "[" | ")")) {
            continue;
        }
        let mut start = k;
        while start > 0 && is_typeish(&toks[start - 1], src) {
            start -= 1;
        }
        let run = &toks[start..k];
        if !run.iter().any(|t| t.kind == TokKind::Ident) {
            continue;
        }
        if run
            .iter()
            .all(|t| t.kind != TokKind::Ident || QUALIFIERS_ONLY.contains(&t.text(src)))
        {
            continue;
        }
        let before = start.checked_sub(1).map(|i| toks[i].text(src));
        let ok = matches!(before, None | Some(";" | "{" | "}" | "(" | ","));
        if !ok {
            continue;
        }
        // `f(a, b)` has no type run, but `(x)` casts do: `(int) y` is excluded by `next`.
        if before == Some("(") || before == Some(",") {
            // Only parameter-like runs: type words followed by the name.
            if run.len() == 1 && next == Some(")") && toks.get(k + 2).is_some_and(|t| t.kind == TokKind::Ident) {
                continue;
            }
        }
        map.entry(t.text(src).to_owned())
            .or_insert_with(|| normalized_type(src, run));
    }
    map
}

fn infer_type(
    arg: &ArgExpr,
    vars: &HashMap<String, String>,
    params: &HashMap<String, String>,
) -> Option<String> {
    match arg.kind {
        ArgKind::Identifier => params
            .get(&arg.token_text)
            .or_else(|| vars.get(&arg.token_text))
            .cloned(),
        ArgKind::Cast => Some(arg.token_text.clone()),
        ArgKind::StringLiteral => Some("const char*".to_owned()),
        ArgKind::NonStringLiteral => literal_type(&arg.token_text),
        ArgKind::Paren => infer_type(&arg.children[0], vars, params),
        ArgKind::UnaryOp(UnaryOp::AddressOf) => {
            let inner = &arg.children[0];
            if inner.kind == ArgKind::Identifier {
                infer_type(inner, vars, params).map(|t| format!("{t}*"))
            } else {
                None
            }
        }
        _ => None,
    }
}

fn literal_type(text: &str) -> Option<String> {
    if text.starts_with('\'') {
        return Some("char".to_owned());
    }
    if text == "true" || text == "false" {
        return Some("bool".to_owned());
    }
    let first = text.bytes().next()?;
    if !(first.is_ascii_digit() || first == b'.') {
        return None;
    }
    let lower = text.to_ascii_lowercase();
    let hex = lower.starts_with("0x");
    let float = if hex {
        lower.contains('p')
    } else {
        lower.contains('.') || lower.contains('e')
    };
    if float {
        return Some(if lower.ends_with('f') && !hex { "float" } else { "double" }.to_owned());
    }
    let suffix: String = lower
        .chars()
        .rev()
        .take_while(|c| *c == 'u' || *c == 'l')
        .collect();
    let ty = match (suffix.contains('u'), suffix.matches('l').count()) {
        (false, 0) => "int",
        (true, 0) => "unsigned int",
        (false, 1) => "long",
        (true, 1) => "unsigned long",
        (false, _) => "long long",
        (true, _) => "unsigned long long",
    };
    Some(ty.to_owned())
}
