use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use super::{check_call, CallOutcome, CheckContext, Origin, Warning};
use crate::filters::{apply_filters, CallerContext, ContextCall, Filter, FilterConfig};
use crate::frontend::{match_declaration, CallSiteRecord, DeclarationRecord};

/// A candidate removed by a false-positive filter.
#[derive(Debug, Clone, PartialEq)]
pub struct Suppressed {
    pub warning: Warning,
    pub filter: Filter,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CheckReport {
    pub warnings: Vec<Warning>,
    pub suppressed: Vec<Suppressed>,
    /// Cover candidates dropped by statistical vetting.
    pub vetted: Vec<Warning>,
    /// Cover candidates before vetting and filtering.
    pub cover_candidates: usize,
    /// Statistical candidates before filtering.
    pub statistical_candidates: usize,
    pub calls_checked: usize,
}

fn with_filter_distance<'a>(ctx: &CheckContext<'a>, filters: &FilterConfig) -> CheckContext<'a> {
    let mut ctx = *ctx;
    ctx.max_distance = filters
        .is_enabled(Filter::SwapDistance)
        .then_some(filters.max_swap_distance);
    ctx
}

/// Checks one call in isolation (its caller context holds only itself).
pub fn run_pipeline(
    call: &CallSiteRecord,
    decl: Option<&DeclarationRecord>,
    ctx: &CheckContext<'_>,
    filters: &FilterConfig,
) -> Vec<Warning> {
    let ctx = with_filter_distance(ctx, filters);
    let outcome = check_call(call, decl, &ctx);
    let caller = CallerContext {
        file_path: call.location.file_path.clone(),
        caller_name: call.caller_name.clone(),
        calls: vec![ContextCall {
            call,
            flagged: outcome.flagged_pairs().collect(),
        }],
    };
    let mut out: Vec<Warning> = outcome
        .survivors()
        .filter(|c| apply_filters(c, &caller, filters).0)
        .map(Warning::from_candidate)
        .collect();
    finish(&mut out);
    out
}

/// Checks every call of a program. Parallel when `parallel` is set; the
/// result does not depend on it.
pub fn check_program(
    calls: &[CallSiteRecord],
    decls: &[DeclarationRecord],
    ctx: &CheckContext<'_>,
    filters: &FilterConfig,
    parallel: bool,
) -> CheckReport {
    let ctx = with_filter_distance(ctx, filters);
    let mut by_name: HashMap<&str, Vec<DeclarationRecord>> = HashMap::new();
    for d in decls {
        by_name.entry(d.function_name.as_str()).or_default().push(d.clone());
    }
    let analyze = |call: &CallSiteRecord| -> CallOutcome {
        let decl = by_name
            .get(call.callee.as_str())
            .and_then(|ds| match_declaration(call, ds));
        check_call(call, decl, &ctx)
    };
    let outcomes: Vec<CallOutcome> = if parallel {
        calls.par_iter().map(analyze).collect()
    } else {
        calls.iter().map(analyze).collect()
    };

    let flagged: Vec<BTreeSet<(usize, usize)>> =
        outcomes.iter().map(|o| o.flagged_pairs().collect()).collect();
    let groups = CallerContext::group(calls.iter().zip(flagged));

    let mut report = CheckReport {
        calls_checked: calls.len(),
        ..CheckReport::default()
    };
    for (call, outcome) in calls.iter().zip(&outcomes) {
        report.cover_candidates += outcome.cover.len();
        report.statistical_candidates += outcome.statistical.len();
        report
            .vetted
            .extend(outcome.vetted_out.iter().map(Warning::from_candidate));
        let key = (call.location.file_path.clone(), call.caller_name.clone());
        let caller = &groups[&key];
        for cand in outcome.survivors() {
            let warning = Warning::from_candidate(cand);
            match apply_filters(cand, caller, filters) {
                (true, _) => report.warnings.push(warning),
                (false, filter) => report.suppressed.push(Suppressed {
                    warning,
                    filter: filter.expect("suppression names its filter"),
                }),
            }
        }
    }
    finish(&mut report.warnings);
    report
        .suppressed
        .sort_by(|a, b| a.warning.sort_key().cmp(&b.warning.sort_key()));
    report.vetted.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    report
}

/// One warning per (location, i, j), preferring the cover checker; sorted.
fn finish(warnings: &mut Vec<Warning>) {
    let mut best: BTreeMap<(String, u32, u32, usize, usize), Warning> = BTreeMap::new();
    for w in warnings.drain(..) {
        let key = (
            w.location.file_path.clone(),
            w.location.line,
            w.location.column,
            w.pos_i,
            w.pos_j,
        );
        match best.get(&key) {
            Some(prev) if prev.origin == Origin::CoverChecker || w.origin != Origin::CoverChecker => {}
            _ => {
                best.insert(key, w);
            }
        }
    }
    warnings.extend(best.into_values());
}
