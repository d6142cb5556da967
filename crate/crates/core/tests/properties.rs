use std::io;

use proptest::prelude::*;

use cnl_core::cli::{batch, Dialog, LineStatus};
use cnl_core::features::{FeatureStructure, FeatureValue};
use cnl_core::kb::KnowledgeBase;
use cnl_core::lexicon::{Category, LexEntry};
use cnl_core::logic::{parse_statement, unify, Bindings, Clause, Constant, Literal, Statement, Term};
use cnl_core::logic::resolve as walk_all;
use cnl_core::session::{Outcome, Session};

fn term(depth: u32) -> BoxedStrategy<Term> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["X1", "X2", "X3"]).prop_map(Term::var),
        (1u32..6).prop_map(Term::id),
        prop::sample::select(vec!["simplemat", "john"]).prop_map(Term::atom),
        (-50i64..5000).prop_map(Term::Num),
    ];
    if depth == 0 {
        leaf.boxed()
    } else {
        prop_oneof![
            3 => leaf,
            1 => (1u32..9, prop::collection::vec(term(depth - 1), 0..3)).prop_map(|(k, a)| Term::Skolem(k, a)),
        ]
        .boxed()
    }
}

fn literal() -> impl Strategy<Value = Literal> {
    (
        prop::sample::select(vec!["customer", "have", "card", "money_dispenser", "named"]),
        prop::collection::vec(term(2), 0..3),
        any::<bool>(),
    )
        .prop_map(|(p, args, neg)| if neg { Literal::naf(p, args) } else { Literal::new(p, args) })
}

fn clause() -> impl Strategy<Value = Clause> {
    (literal(), prop::collection::vec(literal(), 0..3)).prop_map(|(mut h, body)| {
        h.negated = false;
        Clause::new(h, body)
    })
}

fn fs() -> impl Strategy<Value = FeatureStructure> {
    let value = prop_oneof![
        prop::sample::select(vec!["m", "f", "n"]).prop_map(FeatureValue::atom),
        prop::sample::subsequence(vec!["m", "f", "n"], 1..=3).prop_map(|s| FeatureValue::set(s).unwrap()),
        Just(FeatureValue::Unbound),
    ];
    prop::collection::btree_map(prop::sample::select(vec!["gender", "number", "case"]), value, 0..3)
        .prop_map(|m| m.into_iter().fold(FeatureStructure::new(), |f, (k, v)| f.with(k, v)))
}

const SENTENCES: [&str; 12] = [
    "SimpleMat is a simple money dispenser.",
    "It has a user interface.",
    "Every customer has a card.",
    "Every customer has a personal code.",
    "John is a known customer.",
    "Mary is a customer.",
    "John owns a valid card.",
    "SimpleMat does not accept the card.",
    "Every clerk who knows a code is valid.",
    "SimpleMat prints a receipt.",
    "Mary enters a card.",
    "If a customer enters a card then SimpleMat checks the card.",
];

fn discourse() -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(SENTENCES.to_vec()), 1..7)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn clauses_render_and_parse_back(c in clause()) {
        let text = c.to_string();
        prop_assert_eq!(parse_statement(&text).unwrap(), Statement::Clause(c), "{}", text);
    }

    #[test]
    fn clause_is_a_variant_of_its_renaming(c in clause()) {
        let renamed = Clause {
            head: c.head.rename(&mut |v| format!("{v}_r")),
            body: c.body.iter().map(|l| l.rename(&mut |v| format!("{v}_r"))).collect(),
        };
        prop_assert!(c.is_variant_of(&renamed));
        prop_assert!(renamed.is_variant_of(&c));
        prop_assert_eq!(c.canonical(), renamed.canonical());
    }

    #[test]
    fn unifiers_unify(x in term(2), y in term(2)) {
        let mut b = Bindings::new();
        if unify(&x, &y, &mut b) {
            prop_assert_eq!(walk_all(&x, &b), walk_all(&y, &b));
        }
    }

    #[test]
    fn unifier_is_subsumed_by_both(a in fs(), b in fs()) {
        if let Some(c) = a.unify(&b) {
            prop_assert!(c.subsumed_by(&a), "{} {}", c, a);
            prop_assert!(c.subsumed_by(&b), "{} {}", c, b);
        }
        prop_assert_eq!(a.unify(&FeatureStructure::new()), Some(a.clone()));
    }

    #[test]
    fn lexicon_entries_round_trip(
        cat in prop::sample::select(vec![Category::Noun, Category::Adjective, Category::Verb, Category::ProperNoun]),
        word in "[a-z]{3,8}( [a-z]{3,8})?",
    ) {
        let e = LexEntry::new(cat, &word);
        prop_assert_eq!(LexEntry::from_line(&e.to_line()).unwrap(), e);
    }

    #[test]
    fn kb_text_round_trips(texts in discourse()) {
        let mut s = Session::default();
        for t in &texts {
            let _ = s.process_one(t);
        }
        let text = s.kb.to_text();
        let back = KnowledgeBase::from_text(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back.clauses(), s.kb.clauses());
    }

    #[test]
    fn one_feedback_line_per_accepted_assertion(texts in discourse()) {
        let mut s = Session::default();
        for t in &texts {
            if let Ok(o @ Outcome::Asserted(_)) = s.process_one(t) {
                prop_assert_eq!(o.message().lines().count(), 1);
            }
        }
    }

    #[test]
    fn interactive_and_batch_agree(texts in discourse()) {
        let input = texts.join("\n");
        let mut interactive = Dialog::new(Session::default());
        interactive.interactive = true;
        for line in input.lines() {
            let (status, out) = interactive.handle(line, &mut io::sink(), &mut |_| None);
            if status == LineStatus::Ok {
                prop_assert_eq!(out.len(), 1);
            }
        }
        let mut batched = Dialog::new(Session::default());
        let (reports, _) = batch(&mut batched, &input, &mut io::sink());
        prop_assert_eq!(reports.len(), texts.len());
        prop_assert_eq!(interactive.session.kb.to_text(), batched.session.kb.to_text());
    }

    #[test]
    fn facts_are_ground(texts in discourse()) {
        let mut s = Session::default();
        for t in &texts {
            let _ = s.process_one(t);
        }
        for c in s.kb.clauses() {
            prop_assert!(c.is_range_restricted(), "{}", c);
            if c.is_fact() {
                prop_assert!(c.head.is_ground(), "{}", c);
            }
        }
        for f in s.kb.facts() {
            for a in &f.args {
                if let Term::Const(Constant::Id(n)) = a {
                    prop_assert!((1..=s.kb.counters.constants).contains(n), "{}", f);
                }
            }
        }
    }
}
