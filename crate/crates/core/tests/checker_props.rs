use proptest::prelude::*;
use swapcheck::checker::{
    check_call, check_program, cover, CandidateWarning, CheckContext, Evidence, Origin, Thresholds,
};
use swapcheck::filters::{apply_filters, swap_distance, whitelist_words, CallerContext, ContextCall, Filter, FilterConfig};
use swapcheck::frontend::{scan_file, ArgExpr, CallSiteRecord, DeclarationRecord, SourceLocation};
use swapcheck::naming::{FrequencyTable, MorphemeSet, Splitter, StopList};
use swapcheck::similarity::sim;
use swapcheck::statsdb::{psi_exceeds_weights, StatsDb};

const NAMES: &[&str] = &[
    "pid", "sig", "cpid", "SIGKILL", "src", "dst", "srcLen", "dstLen", "width", "height", "msg", "message",
    "count", "size", "num_rate", "denom_rate", "num", "denom", "buf", "len", "x", "y",
];

fn name() -> impl Strategy<Value = String> {
    prop::sample::select(NAMES).prop_map(str::to_owned)
}

fn table() -> FrequencyTable {
    ["pid", "sig", "kill", "src", "dst", "len", "num", "denom", "rate", "buf"]
        .into_iter()
        .map(|t| (t.to_owned(), 10))
        .collect()
}

fn call_and_decl() -> impl Strategy<Value = (CallSiteRecord, DeclarationRecord)> {
    (2usize..6)
        .prop_flat_map(|n| (prop::collection::vec(name(), n), prop::collection::vec(name(), n)))
        .prop_map(|(args, params)| {
            let call = CallSiteRecord {
                callee: "f".into(),
                args: args.iter().map(|a| ArgExpr::ident(a)).collect(),
                location: SourceLocation::new("a.c", 10, 5),
                caller_name: Some("g".into()),
                enclosing_conditions: vec![],
                preceding_lines: vec![],
                arg_source_texts: args.clone(),
                from_macro_expansion: false,
                arg_types: vec![],
            };
            let decl = DeclarationRecord {
                function_name: "f".into(),
                param_names: Some(params.into_iter().map(Some).collect()),
                param_types: None,
                location: SourceLocation::new("f.h", 1, 1),
            };
            (call, decl)
        })
}

fn random_db() -> impl Strategy<Value = StatsDb> {
    prop::collection::vec((name(), 1usize..6, 0u64..20), 0..30).prop_map(|entries| {
        let freq = table();
        let stop = StopList::default();
        let s = Splitter::new(&freq, &stop);
        let mut db = StatsDb::default();
        for (n, i, w) in entries {
            for m in s.split(&n).iter() {
                db.set_weight("f", m, i, w);
            }
        }
        db
    })
}

fn morphemes() -> impl Strategy<Value = MorphemeSet> {
    prop::collection::btree_set("[a-d][a-e]{0,3}", 1..=6).prop_map(|s| s.into_iter().collect())
}

fn candidate(call: &CallSiteRecord, i: usize, j: usize) -> CandidateWarning {
    CandidateWarning {
        call: call.clone(),
        decl: None,
        pos_i: i,
        pos_j: j,
        origin: Origin::CoverChecker,
        evidence: Evidence::Statistical {
            a_i: String::new(),
            a_j: String::new(),
            w_ai: (0, 0),
            w_aj: (0, 0),
        },
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn cover_matches_brute_force(a in morphemes(), p in morphemes()) {
        let mut best_min = f64::INFINITY;
        for pm in p.iter() {
            let mut best = f64::NEG_INFINITY;
            for am in a.iter() {
                best = best.max(sim(am, pm, None));
            }
            best_min = best_min.min(best);
        }
        prop_assert_eq!(cover(&a, &p, None), best_min);
    }

    #[test]
    fn psi_monotone(wi in 0u64..50, wj in 0u64..50, t in 0.0f64..8.0, d in 1u64..5, dt in 0.01f64..2.0) {
        if psi_exceeds_weights(wi, wj, t) {
            prop_assert!(psi_exceeds_weights(wi + d, wj, t));
        }
        if psi_exceeds_weights(wi, wj + d, t) {
            prop_assert!(psi_exceeds_weights(wi, wj, t));
        }
        if psi_exceeds_weights(wi, wj, t + dt) {
            prop_assert!(psi_exceeds_weights(wi, wj, t));
        }
    }

    #[test]
    fn candidates_stay_in_range((call, decl) in call_and_decl(), db in random_db()) {
        let freq = table();
        let stop = StopList::default();
        let mut ctx = CheckContext::new(Splitter::new(&freq, &stop));
        ctx.db = Some(&db);
        ctx.max_distance = None;
        let out = check_call(&call, Some(&decl), &ctx);
        for c in out.cover.iter().chain(&out.statistical) {
            prop_assert!(c.pos_i < c.pos_j && c.pos_j <= call.arity());
        }
        // The statistical checker only runs when the cover checker is silent.
        prop_assert!(out.cover.is_empty() || out.statistical.is_empty());
    }

    #[test]
    fn gamma_and_alpha2_monotone((call, decl) in call_and_decl(), db in random_db(), g in 0.5f64..6.0, a2 in 0.5f64..1.0) {
        let freq = table();
        let stop = StopList::default();
        let base = CheckContext { db: Some(&db), max_distance: None, ..CheckContext::new(Splitter::new(&freq, &stop)) };
        let mut hi = base;
        hi.cover_enabled = false;
        let mut lo = hi;
        lo.thresholds.gamma = g;
        hi.thresholds.gamma = g + 1.0;
        let n_lo = check_call(&call, None, &lo).statistical.len();
        let n_hi = check_call(&call, None, &hi).statistical.len();
        prop_assert!(n_hi <= n_lo);

        let mut strict = base;
        strict.thresholds.alpha2 = a2;
        let mut loose = base;
        loose.thresholds.alpha2 = (a2 - 0.2).max(strict.thresholds.alpha1);
        let n_strict = check_call(&call, Some(&decl), &strict).cover.len();
        let n_loose = check_call(&call, Some(&decl), &loose).cover.len();
        prop_assert!(n_loose >= n_strict);
    }

    #[test]
    fn no_filters_means_identity(
        (call, i, j) in call_and_decl().prop_flat_map(|(call, _)| {
            let n = call.arity();
            (Just(call), 1..n).prop_flat_map(move |(call, i)| (Just(call), Just(i), i + 1..=n))
        })
    ) {
        let cand = candidate(&call, i, j);
        let ctx = CallerContext {
            file_path: "a.c".into(),
            caller_name: Some("g".into()),
            calls: vec![ContextCall { call: &call, flagged: [(i, j)].into_iter().collect() }],
        };
        prop_assert_eq!(apply_filters(&cand, &ctx, &FilterConfig::none()), (true, None));
        if j - i == 1 {
            prop_assert!(!swap_distance(&cand, &ctx, &FilterConfig::default()));
        }
    }

    #[test]
    fn whitelist_ignores_case(cond in "[a-zA-Z_ >&|()]{0,30}", line in "[a-zA-Z_ /*]{0,30}", upper in any::<bool>()) {
        let call = CallSiteRecord {
            callee: "f".into(),
            args: vec![ArgExpr::ident("a"), ArgExpr::ident("b")],
            location: SourceLocation::new("a.c", 9, 1),
            caller_name: Some("g".into()),
            enclosing_conditions: vec![cond.clone()],
            preceding_lines: vec![line.clone()],
            arg_source_texts: vec!["a".into(), "b".into()],
            from_macro_expansion: false,
            arg_types: vec![],
        };
        let flip = |s: &str| if upper { s.to_uppercase() } else { s.to_lowercase() };
        let mut changed = call.clone();
        changed.enclosing_conditions = vec![flip(&cond)];
        changed.preceding_lines = vec![flip(&line)];
        changed.callee = flip(&call.callee);
        let ctx = CallerContext::default();
        let cfg = FilterConfig::default();
        prop_assert_eq!(
            whitelist_words(&candidate(&call, 1, 2), &ctx, &cfg),
            whitelist_words(&candidate(&changed, 1, 2), &ctx, &cfg)
        );
    }

    #[test]
    fn fingerprints_survive_blank_lines(blank in 0usize..20) {
        let head = "int kill(pid_t pid, int sig);\n";
        let body = "void reap(pid_t cpid) {\n    kill(SIGKILL, cpid);\n}\n";
        let freq = table();
        let stop = StopList::default();
        let ctx = CheckContext::new(Splitter::new(&freq, &stop));
        let mut filters = FilterConfig::default();
        filters.disabled.insert(Filter::NearbyDeclaration);
        let run = |src: &str| {
            let (calls, decls) = scan_file(src, "k.c");
            check_program(&calls, &decls, &ctx, &filters, false).warnings
        };
        let before = run(&format!("{head}{body}"));
        let after = run(&format!("{head}{}{body}", "\n".repeat(blank)));
        prop_assert_eq!(before.len(), 1);
        prop_assert_eq!(after.len(), 1);
        prop_assert_eq!(&before[0].fingerprint, &after[0].fingerprint);
        prop_assert_eq!(after[0].location.line, before[0].location.line + blank as u32);
    }
}

#[test]
fn default_thresholds() {
    let th = Thresholds::default();
    assert_eq!((th.alpha1, th.alpha2, th.beta, th.gamma, th.sim_threshold), (0.5, 0.75, 1.0, 5.0, 0.75));
    assert!(th.validate().is_ok());
    let bad = Thresholds { alpha1: 0.9, alpha2: 0.5, ..th };
    assert!(bad.validate().is_err());
}
