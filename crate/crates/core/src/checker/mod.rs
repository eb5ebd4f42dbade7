//! Detection stages: the cover checker, statistical vetting of its
//! candidates, and the statistical checker for calls the cover checker has
//! nothing to say about.

mod pipeline;
mod warning;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frontend::{CallSiteRecord, DeclarationRecord};
use crate::naming::{arg_morphemes, eliminate_common, MorphemeSet, Splitter};
use crate::similarity::{sim, SynonymTable};
use crate::statsdb::StatsDb;

pub use pipeline::{check_program, run_pipeline, CheckReport, Suppressed};
pub use warning::{fingerprint, Warning, RULE_COVER, RULE_STATISTICAL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    /// Cover of the current arrangement must fall below this.
    pub alpha1: f64,
    /// Cover of the swapped arrangement must exceed this.
    pub alpha2: f64,
    /// Vetting threshold.
    pub beta: f64,
    /// Statistical checker threshold.
    pub gamma: f64,
    /// "Sufficiently similar" in the statistical checker.
    pub sim_threshold: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            alpha1: 0.5,
            alpha2: 0.75,
            beta: 1.0,
            gamma: 5.0,
            sim_threshold: 0.75,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        let ok = 0.0 <= self.alpha1
            && self.alpha1 <= self.alpha2
            && self.alpha2 <= 1.0
            && self.beta >= 0.0
            && self.gamma >= 0.0
            && (0.0..=1.0).contains(&self.sim_threshold);
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "thresholds need 0 <= alpha1 <= alpha2 <= 1, beta >= 0, gamma >= 0, 0 <= sim-threshold <= 1; got {self:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Origin {
    CoverChecker,
    StatisticalChecker,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Evidence {
    Cover {
        /// Morpheme sets after common-morpheme elimination.
        a_i: MorphemeSet,
        a_j: MorphemeSet,
        p_i: MorphemeSet,
        p_j: MorphemeSet,
        c_ii: f64,
        c_jj: f64,
        c_ij: f64,
        c_ji: f64,
    },
    Statistical {
        a_i: String,
        a_j: String,
        /// w(f, a_i, i), w(f, a_i, j)
        w_ai: (u64, u64),
        /// w(f, a_j, i), w(f, a_j, j)
        w_aj: (u64, u64),
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateWarning {
    pub call: CallSiteRecord,
    pub decl: Option<DeclarationRecord>,
    pub pos_i: usize,
    pub pos_j: usize,
    pub origin: Origin,
    pub evidence: Evidence,
}

/// Everything the checkers need besides the call itself.
#[derive(Debug, Clone, Copy)]
pub struct CheckContext<'a> {
    pub thresholds: Thresholds,
    pub splitter: Splitter<'a>,
    pub synonyms: Option<&'a SynonymTable>,
    pub db: Option<&'a StatsDb>,
    /// Largest `j - i` considered; `None` for no limit.
    pub max_distance: Option<usize>,
    pub cover_enabled: bool,
    pub statistical_enabled: bool,
}

impl<'a> CheckContext<'a> {
    pub fn new(splitter: Splitter<'a>) -> Self {
        CheckContext {
            thresholds: Thresholds::default(),
            splitter,
            synonyms: None,
            db: None,
            max_distance: Some(2),
            cover_enabled: true,
            statistical_enabled: true,
        }
    }
}

/// `min over p in P of max over a in A of sim(a, p)`. Both sets must be non-empty.
pub fn cover(a: &MorphemeSet, p: &MorphemeSet, synonyms: Option<&SynonymTable>) -> f64 {
    debug_assert!(!a.is_empty() && !p.is_empty());
    p.iter()
        .map(|pm| a.iter().map(|am| sim(am, pm, synonyms)).fold(0.0, f64::max))
        .fold(1.0, f64::min)
}

/// Position pairs `(i, j)`, `i < j`, 1-based.
pub fn position_pairs(arity: usize, max_distance: Option<usize>) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=arity {
        for j in i + 1..=arity {
            if max_distance.is_none_or(|d| j - i <= d) {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn cover_check(
    call: &CallSiteRecord,
    decl: &DeclarationRecord,
    ctx: &CheckContext<'_>,
) -> Vec<CandidateWarning> {
    let mut out = Vec::new();
    if !decl.has_any_param_name() {
        return out;
    }
    let th = &ctx.thresholds;
    let args: Vec<MorphemeSet> = call.args.iter().map(|a| arg_morphemes(a, &ctx.splitter)).collect();
    for (i, j) in position_pairs(call.arity(), ctx.max_distance) {
        let (Some(pi), Some(pj)) = (decl.param_name(i), decl.param_name(j)) else {
            continue;
        };
        let (a_i, a_j) = eliminate_common(&args[i - 1], &args[j - 1]);
        let (p_i, p_j) = eliminate_common(&ctx.splitter.split(pi), &ctx.splitter.split(pj));
        if a_i.is_empty() || a_j.is_empty() || p_i.is_empty() || p_j.is_empty() {
            continue;
        }
        let syn = ctx.synonyms;
        let c_ii = cover(&a_i, &p_i, syn);
        let c_jj = cover(&a_j, &p_j, syn);
        let c_ij = cover(&a_i, &p_j, syn);
        let c_ji = cover(&a_j, &p_i, syn);
        if c_ii < th.alpha1 && c_jj < th.alpha1 && c_ij > th.alpha2 && c_ji > th.alpha2 {
            out.push(CandidateWarning {
                call: call.clone(),
                decl: Some(decl.clone()),
                pos_i: i,
                pos_j: j,
                origin: Origin::CoverChecker,
                evidence: Evidence::Cover {
                    a_i,
                    a_j,
                    p_i,
                    p_j,
                    c_ii,
                    c_jj,
                    c_ij,
                    c_ji,
                },
            });
        }
    }
    out
}

/// Statistical vetting of a cover candidate: `false` when the current
/// arrangement is common in the corpus.
pub fn vet(cand: &CandidateWarning, db: &StatsDb, th: &Thresholds) -> bool {
    let f = &cand.call.callee;
    if !db.has_function(f) {
        return true;
    }
    let Evidence::Cover { a_i, a_j, .. } = &cand.evidence else {
        return true;
    };
    let (i, j) = (cand.pos_i, cand.pos_j);
    let common_here = a_i.iter().any(|m| db.psi_exceeds(f, m, i, j, th.beta))
        || a_j.iter().any(|m| db.psi_exceeds(f, m, j, i, th.beta));
    !common_here
}

/// Morphemes of the callee's own name; arguments that merely repeat them
/// carry no positional signal.
fn callee_morphemes(call: &CallSiteRecord, splitter: &Splitter<'_>) -> MorphemeSet {
    splitter.split(&call.callee)
}

pub fn statistical_check(
    call: &CallSiteRecord,
    db: &StatsDb,
    ctx: &CheckContext<'_>,
) -> Vec<CandidateWarning> {
    let mut out = Vec::new();
    let f = &call.callee;
    if !db.has_function(f) {
        return out;
    }
    let th = &ctx.thresholds;
    let callee = callee_morphemes(call, &ctx.splitter);
    let args: Vec<MorphemeSet> = call
        .args
        .iter()
        .map(|a| arg_morphemes(a, &ctx.splitter).difference(&callee))
        .collect();
    for (i, j) in position_pairs(call.arity(), ctx.max_distance) {
        let (a_set_i, a_set_j) = eliminate_common(&args[i - 1], &args[j - 1]);
        if a_set_i.is_empty() || a_set_j.is_empty() {
            continue;
        }
        let found = a_set_i
            .iter()
            .filter(|a| db.psi_exceeds(f, a, j, i, th.gamma))
            .flat_map(|a| {
                a_set_j
                    .iter()
                    .filter(|b| db.psi_exceeds(f, b, i, j, th.gamma))
                    .map(move |b| (a, b))
            })
            .find(|(a, b)| {
                if a_set_i.without(a) != a_set_j.without(b) {
                    return false;
                }
                let near = |m: &str, target: Option<&str>| {
                    target.is_some_and(|t| sim(m, t, ctx.synonyms) >= th.sim_threshold)
                };
                near(a, db.argmax_position_gap(f, j, i)) && near(b, db.argmax_position_gap(f, i, j))
            });
        if let Some((a, b)) = found {
            out.push(CandidateWarning {
                call: call.clone(),
                decl: None,
                pos_i: i,
                pos_j: j,
                origin: Origin::StatisticalChecker,
                evidence: Evidence::Statistical {
                    a_i: a.to_owned(),
                    a_j: b.to_owned(),
                    w_ai: (db.weight(f, a, i), db.weight(f, a, j)),
                    w_aj: (db.weight(f, b, i), db.weight(f, b, j)),
                },
            });
        }
    }
    out
}

/// Outcome of the detection stages for one call.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CallOutcome {
    /// Stage 1 output, before vetting.
    pub cover: Vec<CandidateWarning>,
    /// Stage 1 candidates removed by vetting.
    pub vetted_out: Vec<CandidateWarning>,
    /// Stage 3 output.
    pub statistical: Vec<CandidateWarning>,
}

impl CallOutcome {
    /// Candidates that go on to filtering.
    pub fn survivors(&self) -> impl Iterator<Item = &CandidateWarning> {
        self.cover
            .iter()
            .filter(|c| !self.vetted_out.contains(c))
            .chain(&self.statistical)
    }

    /// Position pairs either checker flagged, regardless of vetting.
    pub fn flagged_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cover
            .iter()
            .chain(&self.statistical)
            .map(|c| (c.pos_i, c.pos_j))
    }
}

/// Runs stages 1-3 on one call.
pub fn check_call(
    call: &CallSiteRecord,
    decl: Option<&DeclarationRecord>,
    ctx: &CheckContext<'_>,
) -> CallOutcome {
    let mut out = CallOutcome::default();
    if call.from_macro_expansion || call.arity() < 2 {
        return out;
    }
    if ctx.cover_enabled {
        if let Some(decl) = decl {
            out.cover = cover_check(call, decl, ctx);
        }
    }
    if let Some(db) = ctx.db {
        for c in &out.cover {
            if !vet(c, db, &ctx.thresholds) {
                out.vetted_out.push(c.clone());
            }
        }
        if out.cover.is_empty() && ctx.statistical_enabled {
            out.statistical = statistical_check(call, db, ctx);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::scan_file;
    use crate::naming::{FrequencyTable, StopList};

    fn set(items: &[&str]) -> MorphemeSet {
        items.iter().copied().collect()
    }

    fn freq() -> FrequencyTable {
        ["sig", "kill", "pid", "xinput"]
            .into_iter()
            .map(|t| (t.to_owned(), 9))
            .collect()
    }

    fn one_call(src: &str) -> (CallSiteRecord, Option<DeclarationRecord>) {
        let (calls, decls) = scan_file(src, "t.c");
        let call = calls.into_iter().last().unwrap();
        (call, decls.into_iter().next())
    }

    #[test]
    fn cover_examples() {
        let a3 = set(&["min", "contig", "kmer", "length"]);
        assert_eq!(cover(&a3, &set(&["min", "length"]), None), 1.0);
        assert_eq!(cover(&a3, &set(&["export"]), None), 0.0);
        assert_eq!(cover(&set(&["x"]), &set(&["x"]), None), 1.0);
    }

    #[test]
    fn pairs_respect_distance() {
        assert_eq!(position_pairs(1, None), vec![]);
        assert_eq!(position_pairs(3, Some(1)), vec![(1, 2), (2, 3)]);
        assert_eq!(position_pairs(4, None).len(), 6);
    }

    #[test]
    fn listing1_cover() {
        let src = "int kill(pid_t pid, int sig);\nvoid f(void) { if (child < 0) { kill(SIGKILL, cpid); } }";
        let (call, decl) = one_call(src);
        let freq = freq();
        let stop = StopList::default();
        let ctx = CheckContext::new(Splitter::new(&freq, &stop));
        let c = cover_check(&call, decl.as_ref().unwrap(), &ctx);
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].pos_i, c[0].pos_j), (1, 2));
    }

    #[test]
    fn nameless_declaration_is_skipped() {
        let src = "int kill(pid_t, int);\nvoid f(void) { kill(SIGKILL, cpid); }";
        let (call, decl) = one_call(src);
        let freq = freq();
        let stop = StopList::default();
        let ctx = CheckContext::new(Splitter::new(&freq, &stop));
        assert!(cover_check(&call, decl.as_ref().unwrap(), &ctx).is_empty());
    }

    fn xquery_db(event4: u64) -> StatsDb {
        let mut db = StatsDb::default();
        db.meta.project_count = 20;
        db.set_weight("XQueryExtension", "event", 4, event4);
        db.set_weight("XQueryExtension", "event", 5, 1);
        db.set_weight("XQueryExtension", "error", 5, 12);
        db.set_weight("XQueryExtension", "error", 4, 1);
        db
    }

    #[test]
    fn listing2_statistical() {
        let src = "void f(void) { XQueryExtension(dpy, \"XInputExtension\", &xinput_major_opcode, &xinput_error_base, &xinput_event_base); }";
        let (call, _) = one_call(src);
        let freq = freq();
        let stop = StopList::default();
        let ctx = CheckContext::new(Splitter::new(&freq, &stop));
        let c = statistical_check(&call, &xquery_db(12), &ctx);
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].pos_i, c[0].pos_j), (4, 5));
        assert!(statistical_check(&call, &xquery_db(3), &ctx).is_empty());
    }

    #[test]
    fn exactly_one_morpheme_rule() {
        let mut db = StatsDb::default();
        db.meta.project_count = 50;
        for (m, good, bad) in [("alpha", 1, 2), ("beta", 2, 1)] {
            db.set_weight("f", m, good, 40);
            db.set_weight("f", m, bad, 1);
        }
        let freq = FrequencyTable::default();
        let stop = StopList::default();
        let ctx = CheckContext::new(Splitter::new(&freq, &stop));
        let (call, _) = one_call("void g(void) { f(beta, alpha); }");
        assert_eq!(statistical_check(&call, &db, &ctx).len(), 1);
        let (call, _) = one_call("void g(void) { f(beta_left, alpha_right); }");
        assert!(statistical_check(&call, &db, &ctx).is_empty());
    }

    #[test]
    fn vetting() {
        let src = "int kill(pid_t pid, int sig);\nvoid f(void) { kill(SIGKILL, cpid); }";
        let (call, decl) = one_call(src);
        let freq = freq();
        let stop = StopList::default();
        let ctx = CheckContext::new(Splitter::new(&freq, &stop));
        let cand = cover_check(&call, decl.as_ref().unwrap(), &ctx).remove(0);
        let th = Thresholds::default();
        assert!(vet(&cand, &StatsDb::default(), &th));
        let mut db = StatsDb::default();
        db.meta.project_count = 5;
        db.set_weight("kill", "other", 1, 1);
        assert!(vet(&cand, &db, &th));
        db.set_weight("kill", "pid", 2, 3);
        db.set_weight("kill", "pid", 1, 1);
        assert!(!vet(&cand, &db, &th));
    }

    #[test]
    fn thresholds_validate() {
        assert!(Thresholds::default().validate().is_ok());
        let bad = Thresholds {
            alpha1: 0.9,
            ..Thresholds::default()
        };
        assert!(bad.validate().is_err());
    }
}
