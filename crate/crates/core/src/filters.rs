//! Heuristics that separate intentional argument swaps from mistakes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::checker::CandidateWarning;
use crate::error::Error;
use crate::frontend::{ArgKind, CallSiteRecord, UnaryOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Filter {
    WhitelistWords,
    SwapDistance,
    GeometricNegation,
    TypeCheck,
    NearbyDeclaration,
    NearbyCorrectCall,
    SwapNotRare,
}

impl Filter {
    /// Evaluation order.
    pub const ALL: [Filter; 7] = [
        Filter::WhitelistWords,
        Filter::SwapDistance,
        Filter::GeometricNegation,
        Filter::TypeCheck,
        Filter::NearbyDeclaration,
        Filter::NearbyCorrectCall,
        Filter::SwapNotRare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Filter::WhitelistWords => "whitelist-words",
            Filter::SwapDistance => "swap-distance",
            Filter::GeometricNegation => "geometric-negation",
            Filter::TypeCheck => "type-check",
            Filter::NearbyDeclaration => "nearby-declaration",
            Filter::NearbyCorrectCall => "nearby-correct-call",
            Filter::SwapNotRare => "swap-not-rare",
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Filter::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Filter::ALL.iter().map(|f| f.name()).collect();
                Error::Config(format!("unknown filter `{s}` (expected one of {})", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterConfig {
    pub whitelist_words: Vec<String>,
    pub max_swap_distance: usize,
    pub not_rare_count: usize,
    pub disabled: BTreeSet<Filter>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            whitelist_words: ["swap", "exchange", "rotate", "flip"]
                .into_iter()
                .map(str::to_owned)
                .collect(),
            max_swap_distance: 2,
            not_rare_count: 3,
            disabled: BTreeSet::new(),
        }
    }
}

impl FilterConfig {
    pub fn is_enabled(&self, f: Filter) -> bool {
        !self.disabled.contains(&f)
    }

    /// Config with every filter turned off.
    pub fn none() -> Self {
        FilterConfig {
            disabled: Filter::ALL.into_iter().collect(),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.max_swap_distance < 1 {
            return Err(Error::Config("max swap distance must be at least 1".into()));
        }
        if self.not_rare_count < 2 {
            return Err(Error::Config("not-rare count must be at least 2".into()));
        }
        Ok(())
    }
}

/// A call in a caller context together with the position pairs either
/// checker flagged on it.
#[derive(Debug, Clone)]
pub struct ContextCall<'a> {
    pub call: &'a CallSiteRecord,
    pub flagged: BTreeSet<(usize, usize)>,
}

/// All calls made by one function, keyed by (file, caller name).
#[derive(Debug, Clone, Default)]
pub struct CallerContext<'a> {
    pub file_path: String,
    pub caller_name: Option<String>,
    pub calls: Vec<ContextCall<'a>>,
}

impl<'a> CallerContext<'a> {
    /// Groups calls by `(file, caller)`; each call comes with its flagged pairs.
    pub fn group(
        calls: impl IntoIterator<Item = (&'a CallSiteRecord, BTreeSet<(usize, usize)>)>,
    ) -> BTreeMap<(String, Option<String>), CallerContext<'a>> {
        let mut out: BTreeMap<(String, Option<String>), CallerContext<'a>> = BTreeMap::new();
        for (call, flagged) in calls {
            let key = (call.location.file_path.clone(), call.caller_name.clone());
            let ctx = out.entry(key).or_insert_with(|| CallerContext {
                file_path: call.location.file_path.clone(),
                caller_name: call.caller_name.clone(),
                calls: Vec::new(),
            });
            ctx.calls.push(ContextCall { call, flagged });
        }
        out
    }
}

pub fn whitelist_words(cand: &CandidateWarning, _ctx: &CallerContext<'_>, cfg: &FilterConfig) -> bool {
    let call = &cand.call;
    let places = std::iter::once(call.callee.as_str())
        .chain(call.caller_name.as_deref())
        .chain(call.enclosing_conditions.iter().map(String::as_str))
        .chain(call.preceding_lines.iter().map(String::as_str));
    let words: Vec<String> = cfg
        .whitelist_words
        .iter()
        .map(|w| w.to_lowercase())
        .filter(|w| !w.is_empty())
        .collect();
    places
        .map(str::to_lowercase)
        .any(|hay| words.iter().any(|w| hay.contains(w.as_str())))
}

pub fn swap_distance(cand: &CandidateWarning, _ctx: &CallerContext<'_>, cfg: &FilterConfig) -> bool {
    cand.pos_j.abs_diff(cand.pos_i) > cfg.max_swap_distance
}

pub fn geometric_negation(cand: &CandidateWarning, _ctx: &CallerContext<'_>, _cfg: &FilterConfig) -> bool {
    let negated = |p: usize| {
        cand.call
            .args
            .get(p - 1)
            .is_some_and(|a| a.kind == ArgKind::UnaryOp(UnaryOp::Minus))
    };
    negated(cand.pos_i) != negated(cand.pos_j)
}

pub fn type_check(cand: &CandidateWarning, _ctx: &CallerContext<'_>, _cfg: &FilterConfig) -> bool {
    let Some(decl) = &cand.decl else {
        return false;
    };
    let squash = |s: &str| s.split_whitespace().collect::<String>();
    let (i, j) = (cand.pos_i, cand.pos_j);
    let (Some(pi), Some(pj)) = (decl.param_type(i), decl.param_type(j)) else {
        return false;
    };
    let (Some(ai), Some(aj)) = (cand.call.arg_type(i), cand.call.arg_type(j)) else {
        return false;
    };
    let (pi, pj, ai, aj) = (squash(pi), squash(pj), squash(ai), squash(aj));
    pi != pj && ai == pi && aj == pj && ai != pj && aj != pi
}

pub fn nearby_declaration(cand: &CandidateWarning, _ctx: &CallerContext<'_>, _cfg: &FilterConfig) -> bool {
    cand.decl
        .as_ref()
        .is_some_and(|d| d.location.file_path == cand.call.location.file_path)
}

pub fn nearby_correct_call(cand: &CandidateWarning, ctx: &CallerContext<'_>, _cfg: &FilterConfig) -> bool {
    let pair = (cand.pos_i, cand.pos_j);
    ctx.calls.iter().any(|other| {
        other.call.location != cand.call.location
            && other.call.callee == cand.call.callee
            && other.call.arity() >= cand.pos_j
            && !other.call.from_macro_expansion
            && !other.flagged.contains(&pair)
    })
}

pub fn swap_not_rare(cand: &CandidateWarning, ctx: &CallerContext<'_>, cfg: &FilterConfig) -> bool {
    let pair = (cand.pos_i, cand.pos_j);
    let flagged = ctx
        .calls
        .iter()
        .filter(|c| c.call.callee == cand.call.callee && c.flagged.contains(&pair))
        .count();
    flagged >= cfg.not_rare_count
}

/// Runs the enabled filters in order; the first that fires suppresses.
pub fn apply_filters(
    cand: &CandidateWarning,
    ctx: &CallerContext<'_>,
    cfg: &FilterConfig,
) -> (bool, Option<Filter>) {
    for f in Filter::ALL {
        if !cfg.is_enabled(f) {
            continue;
        }
        let fired = match f {
            Filter::WhitelistWords => whitelist_words(cand, ctx, cfg),
            Filter::SwapDistance => swap_distance(cand, ctx, cfg),
            Filter::GeometricNegation => geometric_negation(cand, ctx, cfg),
            Filter::TypeCheck => type_check(cand, ctx, cfg),
            Filter::NearbyDeclaration => nearby_declaration(cand, ctx, cfg),
            Filter::NearbyCorrectCall => nearby_correct_call(cand, ctx, cfg),
            Filter::SwapNotRare => swap_not_rare(cand, ctx, cfg),
        };
        if fired {
            return (false, Some(f));
        }
    }
    (true, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{Evidence, Origin};
    use crate::frontend::{scan_file, DeclarationRecord};
    use crate::naming::MorphemeSet;

    fn cand(call: &CallSiteRecord, decl: Option<DeclarationRecord>, i: usize, j: usize) -> CandidateWarning {
        let e = MorphemeSet::new();
        CandidateWarning {
            call: call.clone(),
            decl,
            pos_i: i,
            pos_j: j,
            origin: Origin::CoverChecker,
            evidence: Evidence::Cover {
                a_i: e.clone(),
                a_j: e.clone(),
                p_i: e.clone(),
                p_j: e,
                c_ii: 0.0,
                c_jj: 0.0,
                c_ij: 1.0,
                c_ji: 1.0,
            },
        }
    }

    fn calls(src: &str) -> (Vec<CallSiteRecord>, Vec<DeclarationRecord>) {
        scan_file(src, "f.c")
    }

    fn solo(call: &CallSiteRecord) -> CallerContext<'_> {
        CallerContext {
            file_path: call.location.file_path.clone(),
            caller_name: call.caller_name.clone(),
            calls: vec![ContextCall {
                call,
                flagged: BTreeSet::new(),
            }],
        }
    }

    #[test]
    fn whitelist() {
        let cfg = FilterConfig::default();
        let (c, _) = calls("void f(void) { if (background->rotate_image) { g(height, width); } }");
        assert!(whitelist_words(&cand(&c[0], None, 1, 2), &solo(&c[0]), &cfg));
        let (c, _) = calls("void f(void) { swap_buffers(a, b); }");
        assert!(whitelist_words(&cand(&c[0], None, 1, 2), &solo(&c[0]), &cfg));
        let (c, _) = calls("void f(void) { g(a, b); }");
        assert!(!whitelist_words(&cand(&c[0], None, 1, 2), &solo(&c[0]), &cfg));
        let (c, _) = calls("void f(void) { if (ROTATE) g(a, b); }");
        assert!(whitelist_words(&cand(&c[0], None, 1, 2), &solo(&c[0]), &cfg));
    }

    #[test]
    fn distance_and_negation() {
        let cfg = FilterConfig::default();
        let (c, _) = calls("void f(void) { g(x, -y, -z, w); }");
        let ctx = solo(&c[0]);
        assert!(swap_distance(&cand(&c[0], None, 1, 4), &ctx, &cfg));
        assert!(!swap_distance(&cand(&c[0], None, 1, 2), &ctx, &cfg));
        assert!(geometric_negation(&cand(&c[0], None, 1, 2), &ctx, &cfg));
        assert!(!geometric_negation(&cand(&c[0], None, 2, 3), &ctx, &cfg));
        assert!(!geometric_negation(&cand(&c[0], None, 1, 4), &ctx, &cfg));
    }

    #[test]
    fn types() {
        let cfg = FilterConfig::default();
        let src = "void h(int x, char *s);\nvoid f(void) { int n = 1; char *str; int m; h(n, str); h(n, m); }";
        let (c, d) = calls(src);
        let decl = Some(d[0].clone());
        assert!(type_check(&cand(&c[0], decl.clone(), 1, 2), &solo(&c[0]), &cfg));
        assert!(!type_check(&cand(&c[1], decl, 1, 2), &solo(&c[1]), &cfg));
        let (c, d) = calls("void h(int x, int y);\nvoid f(void) { int a; int b; h(a, b); }");
        assert!(!type_check(&cand(&c[0], Some(d[0].clone()), 1, 2), &solo(&c[0]), &cfg));
    }

    #[test]
    fn nearby_decl() {
        let cfg = FilterConfig::default();
        let (c, d) = calls("void h(int x, int y);\nvoid f(void) { h(a, b); }");
        assert!(nearby_declaration(&cand(&c[0], Some(d[0].clone()), 1, 2), &solo(&c[0]), &cfg));
        let mut other = d[0].clone();
        other.location.file_path = "h.h".into();
        assert!(!nearby_declaration(&cand(&c[0], Some(other), 1, 2), &solo(&c[0]), &cfg));
        assert!(!nearby_declaration(&cand(&c[0], None, 1, 2), &solo(&c[0]), &cfg));
    }

    fn ctx_with<'a>(calls: &'a [CallSiteRecord], flagged: &[bool]) -> CallerContext<'a> {
        let items = calls.iter().zip(flagged).map(|(c, f)| {
            let set = if *f { [(1, 2)].into_iter().collect() } else { BTreeSet::new() };
            (c, set)
        });
        CallerContext::group(items).into_values().next().unwrap()
    }

    #[test]
    fn correct_call_and_not_rare() {
        let cfg = FilterConfig::default();
        let (c, _) = calls("void f(void) { g(a, b); g(b, a); g(b, a); }");
        let ctx = ctx_with(&c, &[false, true, true]);
        assert!(nearby_correct_call(&cand(&c[1], None, 1, 2), &ctx, &cfg));
        let ctx = ctx_with(&c[1..2], &[true]);
        assert!(!nearby_correct_call(&cand(&c[1], None, 1, 2), &ctx, &cfg));
        let ctx = ctx_with(&c, &[true, true, false]);
        assert!(!nearby_correct_call(&cand(&c[0], None, 1, 2), &ctx_with(&c[..2], &[true, true]), &cfg));
        assert!(!swap_not_rare(&cand(&c[0], None, 1, 2), &ctx, &cfg));
        let ctx = ctx_with(&c, &[true, true, true]);
        assert!(swap_not_rare(&cand(&c[0], None, 1, 2), &ctx, &cfg));
    }

    #[test]
    fn not_rare_is_per_caller() {
        let cfg = FilterConfig::default();
        let (c, _) = calls("void f(void) { g(b, a); }\nvoid k(void) { g(b, a); }\nvoid m(void) { g(b, a); }");
        let flagged = c.iter().map(|x| (x, [(1, 2)].into_iter().collect::<BTreeSet<_>>()));
        let groups = CallerContext::group(flagged);
        assert_eq!(groups.len(), 3);
        for ctx in groups.values() {
            assert!(!swap_not_rare(&cand(ctx.calls[0].call, None, 1, 2), ctx, &cfg));
        }
    }

    #[test]
    fn order_and_disable() {
        let (c, _) = calls("void flip(void) { g(x, b, c, -y); }");
        let ctx = solo(&c[0]);
        let k = cand(&c[0], None, 1, 4);
        assert_eq!(apply_filters(&k, &ctx, &FilterConfig::default()), (false, Some(Filter::WhitelistWords)));
        let mut cfg = FilterConfig::default();
        cfg.disabled.insert(Filter::WhitelistWords);
        assert_eq!(apply_filters(&k, &ctx, &cfg), (false, Some(Filter::SwapDistance)));
        assert_eq!(apply_filters(&k, &ctx, &FilterConfig::none()), (true, None));
        assert_eq!("type-check".parse::<Filter>().unwrap(), Filter::TypeCheck);
        assert!("bogus".parse::<Filter>().is_err());
    }
}
