use proptest::prelude::*;
use swapcheck::frontend::{ArgExpr, ArgKind, UnaryOp};
use swapcheck::naming::{eliminate_common, extract_name, FrequencyTable, MorphemeSet, Splitter, StopList};

fn table() -> FrequencyTable {
    [
        ("buf", 40),
        ("len", 35),
        ("pid", 20),
        ("sig", 12),
        ("kill", 9),
        ("src", 30),
        ("dst", 30),
        ("ptr", 18),
        ("xinput", 6),
        ("rare", 2),
    ]
    .into_iter()
    .map(|(t, c)| (t.to_owned(), c))
    .collect()
}

fn identifier() -> impl Strategy<Value = String> {
    "[A-Za-z_][A-Za-z0-9_]{0,24}"
}

fn morpheme_set() -> impl Strategy<Value = MorphemeSet> {
    prop::collection::btree_set("[a-f]{1,3}", 0..6).prop_map(|s| s.into_iter().collect())
}

fn expr() -> impl Strategy<Value = ArgExpr> {
    let leaf = prop_oneof![
        identifier().prop_map(|n| ArgExpr::ident(&n)),
        "[0-9]{1,4}".prop_map(|n| ArgExpr::leaf(ArgKind::NonStringLiteral, n)),
        Just(ArgExpr::leaf(ArgKind::StringLiteral, "\"x\"")),
        Just(ArgExpr::leaf(ArgKind::This, "this")),
    ];
    leaf.prop_recursive(6, 40, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| ArgExpr::node(ArgKind::Paren, vec![e])),
            inner.clone().prop_map(|e| ArgExpr::node(ArgKind::UnaryOp(UnaryOp::Minus), vec![e])),
            inner.clone().prop_map(|e| ArgExpr::node(ArgKind::Cast, vec![e])),
            (inner.clone(), identifier()).prop_map(|(b, m)| {
                ArgExpr::node(ArgKind::Member(swapcheck::frontend::Accessor::Arrow), vec![b, ArgExpr::ident(&m)])
            }),
            prop::collection::vec(inner, 1..4).prop_map(|v| ArgExpr::node(ArgKind::Call, v)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn split_tokens_are_lowercase_letters(name in identifier()) {
        let freq = table();
        let stop = StopList::default();
        let s = Splitter::new(&freq, &stop);
        for m in s.split(&name).iter() {
            prop_assert!(!m.is_empty());
            prop_assert!(m.chars().all(|c| c.is_ascii_lowercase()), "{m} from {name}");
        }
    }

    #[test]
    fn split_is_idempotent(name in identifier()) {
        let freq = table();
        let stop = StopList::default();
        let s = Splitter::new(&freq, &stop);
        for m in s.split(&name).iter() {
            let again = s.split(m);
            prop_assert_eq!(again.iter().collect::<Vec<_>>(), vec![m], "{} from {}", m, name);
        }
    }

    #[test]
    fn eliminate_common_removes_shared(a in morpheme_set(), b in morpheme_set()) {
        let (x, y) = eliminate_common(&a, &b);
        for m in a.iter().filter(|m| b.contains(m)) {
            prop_assert!(!x.contains(m) && !y.contains(m));
        }
        for m in x.iter() {
            prop_assert!(a.contains(m) && !b.contains(m));
        }
        for m in y.iter() {
            prop_assert!(b.contains(m) && !a.contains(m));
        }
        prop_assert_eq!(eliminate_common(&b, &a), (y, x));
    }

    #[test]
    fn extract_name_is_total(e in expr()) {
        let first = extract_name(&e);
        prop_assert_eq!(first.clone(), extract_name(&e));
        if let Some(name) = first {
            prop_assert!(!name.is_empty());
        }
    }
}

#[test]
fn paper_examples() {
    let freq = table();
    let stop = StopList::default();
    let s = Splitter::new(&freq, &stop);
    let set = |v: &[&str]| v.iter().copied().collect::<MorphemeSet>();
    assert_eq!(s.split("SIGKILL"), set(&["sig", "kill"]));
    assert_eq!(s.split("cpid"), set(&["pid"]));
    assert_eq!(s.segment("cpid"), ["c", "pid"]);
    assert_eq!(s.split("xinput_error_base"), set(&["xinput", "error", "base"]));
    assert_eq!(s.split("remoteAck"), set(&["remote", "ack"]));
}
