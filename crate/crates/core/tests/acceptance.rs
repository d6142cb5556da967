//! End-to-end checks of the whole pipeline on the teller-machine example,
//! plus property suites. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use cnl_core::discourse::{DiscourseError, ResolutionKind};
use cnl_core::drs::{Arg, Condition, Drs, RefId};
use cnl_core::executor::ScriptedIo;
use cnl_core::features::{FeatureStructure, FeatureValue};
use cnl_core::inference::{solve, Answer};
use cnl_core::lexicon::Lexicon;
use cnl_core::logic::{parse_statement, Clause, Constant, Literal, Statement, Term};
use cnl_core::paraphrase::{builtin_schemata, paraphrase_kb};
use cnl_core::parser::parse_text;
use cnl_core::session::{Assertion, Outcome, Session, SessionError};

type Check = Result<(), String>;
type Named = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

macro_rules! ensure_eq {
    ($left:expr, $right:expr) => {{
        let (l, r) = (&$left, &$right);
        if l != r {
            return Err(format!("{}:\n  got      {:?}\n  expected {:?}", stringify!($left), l, r));
        }
    }};
}

const ATM: &str = include_str!("../data/atm.txt");
const PREFIX: [&str; 2] = ["SimpleMat is a simple money dispenser.", "It has a user interface."];

fn assert_one(s: &mut Session, text: &str) -> Result<Assertion, String> {
    match s.process_one(text) {
        Ok(Outcome::Asserted(a)) => Ok(a),
        other => Err(format!("\"{text}\" was not accepted: {other:?}")),
    }
}

fn reply(s: &mut Session, text: &str) -> Result<String, String> {
    s.process_one(text).map(|o| o.message()).map_err(|e| format!("\"{text}\": {e}"))
}

fn rendered(clauses: &[Clause]) -> Vec<String> {
    clauses.iter().map(|c| c.to_string()).collect()
}

fn golden_translation() -> Check {
    let mut s = Session::default();
    let a = assert_one(&mut s, PREFIX[0])?;
    let mut facts = rendered(&a.translation.clauses);
    facts.sort();
    ensure_eq!(facts, ["money_dispenser(1).", "named(1,simplemat).", "simple(1)."]);
    ensure!(a.translation.clauses.iter().all(Clause::is_fact), "non-fact clause");
    ensure_eq!(a.translation.fresh_constants, [1]);
    ensure_eq!(s.kb.list(Some("is")).len(), 0);
    ensure_eq!(s.kb.len(), 3);
    Ok(())
}

fn golden_skolemization() -> Check {
    let mut s = Session::default();
    let a = assert_one(&mut s, "Every customer has a card.")?;
    ensure_eq!(
        rendered(&a.translation.clauses),
        ["card([2,X1]) :- customer(X1).", "have(X1,[2,X1]) :- customer(X1)."]
    );
    ensure_eq!(a.translation.fresh_skolems, [2]);
    ensure!(a.translation.denials.is_empty(), "unexpected denials");
    // the index follows the counter, and both clauses of one rule share it
    let mut s = Session::default();
    assert_one(&mut s, PREFIX[0])?;
    let b = assert_one(&mut s, "Every customer has a card.")?;
    let indices: BTreeSet<u32> = b
        .translation
        .clauses
        .iter()
        .flat_map(|c| c.symbols().1)
        .collect();
    ensure_eq!(indices.len(), 1);
    ensure_eq!(b.translation.fresh_skolems, indices.into_iter().collect::<Vec<_>>());
    Ok(())
}

fn golden_initial_drs() -> Check {
    let lex = Lexicon::atm();
    let parsed = parse_text("Every customer has a card.", &lex).map_err(|e| e.to_string())?;
    ensure_eq!(
        parsed[0].drs.to_term(),
        "drs([], [ifthen(drs([X1], [gender(X1,[m,f]), number(X1,sg), customer(X1)]), \
         drs([X2,X1], [gender(X2,n), number(X2,sg), card(X2), have(X1,X2)]))])"
    );
    ensure_eq!(
        parsed[0].drs.simplify().to_term(),
        "drs([], [ifthen(drs([X1], [customer(X1)]), drs([X2,X1], [card(X2), have(X1,X2)]))])"
    );
    Ok(())
}

fn golden_queries() -> Check {
    let mut s = Session::default();
    for p in PREFIX {
        assert_one(&mut s, p)?;
    }
    let yes_no = s.process_one("Is SimpleMat a money dispenser?").map_err(|e| e.to_string())?;
    let Outcome::Answered(q) = &yes_no else {
        return Err(format!("{yes_no:?}"));
    };
    ensure_eq!(q.goals.join(", "), "named(1,simplemat), money_dispenser(1)");
    ensure_eq!(q.response, "yes");
    ensure_eq!(reply(&mut s, "Does SimpleMat have a simple user interface?")?, "no");
    ensure_eq!(reply(&mut s, "Who is a money dispenser?")?, "[SimpleMat] is a money dispenser.");
    Ok(())
}

fn golden_paraphrases() -> Check {
    let mut s = Session::default();
    assert_one(&mut s, PREFIX[0])?;
    ensure_eq!(assert_one(&mut s, PREFIX[1])?.feedback, "[SimpleMat] has a user interface.");
    ensure_eq!(
        assert_one(&mut s, "Every customer has a card.")?.feedback,
        "Every customer has [an individual] card."
    );
    let kb: Vec<Clause> = ["named(1,john).", "known(2).", "customer(2).", "is(1,2)."]
        .iter()
        .map(|c| match parse_statement(c) {
            Ok(Statement::Clause(c)) => Ok(c),
            other => Err(format!("{c}: {other:?}")),
        })
        .collect::<Result<_, _>>()?;
    let p = paraphrase_kb(&kb, &builtin_schemata(), &Lexicon::atm());
    ensure_eq!(p.sentences, ["John is a known customer."]);
    ensure!(p.remainder.is_empty(), "uncovered: {:?}", p.remainder);
    Ok(())
}

fn anaphora() -> Check {
    let mut s = Session::default();
    assert_one(&mut s, PREFIX[0])?;
    let a = assert_one(&mut s, PREFIX[1])?;
    let it = &a.resolution.entries[0];
    ensure_eq!(it.kind, ResolutionKind::Pronoun);
    ensure_eq!(it.antecedent, Some(RefId(1)));
    ensure_eq!(it.antecedent_description.as_deref(), Some("SimpleMat"));

    let mut s = Session::default();
    let a = assert_one(
        &mut s,
        "If the trap-door-algorithm calculates a number then the number equals the check code.",
    )?;
    let kinds: Vec<(&str, ResolutionKind)> = a
        .resolution
        .entries
        .iter()
        .map(|e| (e.anaphor_description.as_str(), e.kind))
        .collect();
    ensure!(
        kinds.contains(&("trap-door-algorithm", ResolutionKind::DefiniteUnique)),
        "{kinds:?}"
    );
    ensure!(kinds.contains(&("number", ResolutionKind::DefiniteAnaphoric)), "{kinds:?}");
    let Some(Condition::IfThen(ante, cons)) = a.drs.conditions.first() else {
        return Err(format!("not a conditional: {}", a.drs));
    };
    let tda = ante
        .referents
        .iter()
        .find(|r| r.origin.description == "trap-door-algorithm")
        .ok_or("no referent for the trap-door-algorithm in the antecedent")?;
    ensure!(tda.unique, "trap-door-algorithm is not a unique reference");
    let number = a
        .resolution
        .entries
        .iter()
        .find(|e| e.kind == ResolutionKind::DefiniteAnaphoric)
        .and_then(|e| Some((e.anaphor, e.antecedent?)))
        .ok_or("the number has no antecedent")?;
    ensure!(
        cons.conditions.contains(&Condition::Equality(number.0, number.1)),
        "no equality {} = {} in {}",
        number.0,
        number.1,
        cons
    );
    ensure!(ante.declares(number.1), "the number's antecedent is not in the if-part");

    let mut s = Session::default();
    match s.process_one("It has a card.") {
        Err(SessionError::Discourse(DiscourseError::UnresolvedPronoun { .. })) => {}
        other => return Err(format!("expected an unresolved pronoun, got {other:?}")),
    }
    ensure!(s.kb.is_empty(), "knowledge base changed");
    Ok(())
}

fn execution_ordering() -> Check {
    let mut s = Session::default();
    assert_one(&mut s, PREFIX[0])?;
    assert_one(&mut s, "Every customer has a card.")?;
    s.define_scenario(
        "atm",
        vec!["The customer enters the card.".into(), "SimpleMat checks the card.".into()],
    );
    s.register_prompt("enter", 2, "Enter your card").map_err(|e| e.to_string())?;
    let mut io = ScriptedIo::new(["7", "inserted", "yes"]);
    let trace = s.run_scenario("atm", &mut io, false).map_err(|e| e.to_string())?;
    let step = |pred: &str| trace.steps.iter().position(|st| st.goal.starts_with(&format!("{pred}(")));
    let (Some(enter), Some(check)) = (step("enter"), step("check")) else {
        return Err(format!("missing steps:\n{trace}"));
    };
    ensure!(enter < check, "enter at {enter}, check at {check}");
    ensure_eq!(io.transcript.iter().filter(|l| l.contains("Enter your card")).count(), 1);
    Ok(())
}

// ---- property suites ----

fn run_cases<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Check
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn feature_value(depth: u32) -> BoxedStrategy<FeatureValue> {
    let atoms = prop::sample::select(vec!["m", "f", "n", "sg", "pl"]);
    let leaf = prop_oneof![
        atoms.clone().prop_map(FeatureValue::atom),
        prop::sample::subsequence(vec!["m", "f", "n"], 1..=3).prop_map(|s| FeatureValue::set(s).unwrap()),
        Just(FeatureValue::Unbound),
    ];
    if depth == 0 {
        leaf.boxed()
    } else {
        prop_oneof![3 => leaf, 1 => feature_structure(depth - 1).prop_map(FeatureValue::Struct)].boxed()
    }
}

fn feature_structure(depth: u32) -> BoxedStrategy<FeatureStructure> {
    prop::collection::btree_map(
        prop::sample::select(vec!["gender", "number", "person", "case", "agr"]),
        feature_value(depth),
        0..4,
    )
    .prop_map(|m| m.into_iter().fold(FeatureStructure::new(), |fs, (k, v)| fs.with(k, v)))
    .boxed()
}

fn unification_laws() -> Check {
    let fs = || feature_structure(2);
    run_cases(1000, (fs(), fs(), fs()), |(a, b, c)| {
        prop_assert_eq!(a.unify(&b), b.unify(&a));
        prop_assert_eq!(a.unify(&a), Some(a.clone()));
        let left = a.unify(&b).and_then(|ab| ab.unify(&c));
        let right = b.unify(&c).and_then(|bc| a.unify(&bc));
        prop_assert_eq!(left.is_some(), right.is_some());
        prop_assert_eq!(left, right);
        Ok(())
    })
}

fn article(word: &str) -> &'static str {
    if word.starts_with(['a', 'e', 'i', 'o']) {
        "an"
    } else {
        "a"
    }
}

const NOUNS: [&str; 9] = ["card", "code", "account", "amount", "receipt", "bank", "user interface", "money dispenser", "limit"];
const PEOPLE: [&str; 2] = ["customer", "clerk"];
const ADJS: [&str; 5] = ["simple", "personal", "known", "valid", "correct"];
const VERBS: [&str; 8] = ["enters", "checks", "accepts", "rejects", "prints", "owns", "knows", "serves"];
const NAMES: [&str; 3] = ["SimpleMat", "John", "Mary"];

fn np(det: &str, adj: Option<&str>, noun: &str) -> String {
    let phrase = adj.map_or(noun.to_string(), |a| format!("{a} {noun}"));
    let det = if det == "a" { article(&phrase) } else { det };
    format!("{det} {phrase}")
}

/// Sentences of the controlled language over the teller-machine vocabulary.
fn sentence() -> impl Strategy<Value = String> {
    let noun = prop::sample::select(NOUNS.to_vec());
    let person = prop::sample::select(PEOPLE.to_vec());
    let adj = prop::option::of(prop::sample::select(ADJS.to_vec()));
    let verb = prop::sample::select(VERBS.to_vec());
    let name = prop::sample::select(NAMES.to_vec());
    prop_oneof![
        (name.clone(), adj.clone(), noun.clone())
            .prop_map(|(n, a, x)| format!("{n} is {}.", np("a", a, x))),
        (name.clone(), verb.clone(), adj.clone(), noun.clone())
            .prop_map(|(n, v, a, x)| format!("{n} {v} {}.", np("a", a, x))),
        (name.clone(), verb.clone(), noun.clone()).prop_map(|(n, v, x)| {
            let base = v.strip_suffix('s').unwrap();
            format!("{n} does not {base} {}.", np("a", None, x))
        }),
        (person.clone(), verb.clone(), adj.clone(), noun.clone())
            .prop_map(|(p, v, a, x)| format!("Every {p} {v} {}.", np("a", a, x))),
        (person.clone(), verb.clone(), noun.clone(), prop::sample::select(ADJS.to_vec()))
            .prop_map(|(p, v, x, a)| format!("Every {p} who {v} {} is {a}.", np("a", None, x))),
        (person.clone(), verb.clone(), noun.clone(), verb.clone(), adj.clone(), noun.clone()).prop_map(
            |(p, v, x, w, a, y)| format!("If {} {v} {} then the {p} {w} {}.", np("a", None, p), np("a", None, x), np("a", a, y))
        ),
        (person.clone(), verb.clone(), noun.clone(), verb.clone(), noun.clone()).prop_map(|(p, v, x, w, y)| format!(
            "If {} {v} {} then it {w} {}.",
            np("a", None, p),
            np("a", None, x),
            np("the", None, y)
        )),
    ]
}

fn translate_alone(text: &str) -> Result<Assertion, TestCaseError> {
    let mut s = Session::default();
    match s.process_one(text) {
        Ok(Outcome::Asserted(a)) | Ok(Outcome::Rejected(a)) => Ok(a),
        other => Err(TestCaseError::fail(format!("\"{text}\": {other:?}"))),
    }
}

fn translation_determinism() -> Check {
    run_cases(200, sentence(), |text| {
        let a = translate_alone(&text)?;
        let b = translate_alone(&text)?;
        prop_assert_eq!(&a.translation, &b.translation, "{}", text);
        prop_assert!(
            !a.translation.clauses.is_empty() || !a.translation.denials.is_empty(),
            "nothing from \"{}\"",
            text
        );
        for c in &a.translation.clauses {
            prop_assert!(c.is_range_restricted(), "\"{}\" gave {}", text, c);
        }
        Ok(())
    })
}

fn simplify_idempotence() -> Check {
    run_cases(200, prop::collection::vec(sentence(), 1..4), |texts| {
        let mut s = Session::default();
        for t in &texts {
            let _ = s.process_one(t);
        }
        let once = s.context().simplify();
        prop_assert_eq!(once.simplify(), once.clone(), "{:?}", texts);
        Ok(())
    })
}

fn reassertion_is_redundant() -> Check {
    let mut s = Session::default();
    for r in s.process(ATM) {
        match r {
            Ok(Outcome::Asserted(_)) => {}
            other => return Err(format!("corpus: {other:?}")),
        }
    }
    let before = s.kb.clone();
    let text = before.to_text();
    for r in s.process(ATM) {
        match r {
            Ok(Outcome::Asserted(a)) => ensure!(a.report.added.is_empty(), "\"{}\" added {:?}", a.text, a.report.added),
            other => return Err(format!("second pass: {other:?}")),
        }
    }
    ensure_eq!(s.kb.clauses(), before.clauses());
    ensure_eq!(s.kb.denials().count(), before.denials().count());
    let after = s.kb.to_text();
    let body = |t: &str| t.lines().filter(|l| !l.starts_with('%')).map(str::to_string).collect::<Vec<_>>();
    ensure_eq!(body(&after), body(&text));
    Ok(())
}

fn ground(pred: &str, c: u32) -> Literal {
    Literal::new(pred, vec![Term::Const(Constant::Id(c))])
}

fn program() -> impl Strategy<Value = Vec<Clause>> {
    let pred = || prop::sample::select(vec!["p", "q", "r", "s"]);
    let fact = (pred(), 1u32..4).prop_map(|(p, c)| Clause::fact(ground(p, c)));
    let x = || vec![Term::var("X")];
    let rule = (pred(), pred(), prop::option::of((pred(), any::<bool>()))).prop_map(move |(h, b, extra)| {
        let mut body = vec![Literal::new(b, x())];
        if let Some((e, negated)) = extra {
            body.push(if negated { Literal::naf(e, x()) } else { Literal::new(e, x()) });
        }
        Clause::new(Literal::new(h, x()), body)
    });
    (prop::collection::vec(fact, 0..6), prop::collection::vec(rule, 0..5)).prop_map(|(mut f, r)| {
        f.extend(r);
        f
    })
}

fn naf_consistency() -> Check {
    let goal = (prop::sample::select(vec!["p", "q", "r", "s"]), 1u32..4);
    run_cases(300, (program(), goal, 1usize..7), |(kb, (p, c), depth)| {
        let positive = solve(&[ground(p, c)], &kb, depth).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let negative =
            solve(&[Literal::naf(p, vec![Term::Const(Constant::Id(c))])], &kb, depth).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let expected = match positive {
            Answer::Yes(_) => Answer::No,
            Answer::No => Answer::Yes(vec![Default::default()]),
            Answer::DepthExceeded => Answer::DepthExceeded,
        };
        prop_assert_eq!(negative, expected);
        Ok(())
    })
}

fn lit(pred: &str, args: &[Term]) -> Literal {
    Literal::new(pred, args.to_vec())
}

/// Truth of each atomic query in the model the discourse describes: the atom
/// is true iff some embedding of the discourse referents into the knowledge
/// base's individuals verifies every condition and maps one onto it.
fn model_check(texts: &[&str]) -> Check {
    let mut s = Session::default();
    for t in texts {
        assert_one(&mut s, t)?;
    }
    let k: Drs = s.context().simplify();
    ensure!(
        k.conditions.iter().all(|c| matches!(c, Condition::Atomic { .. })),
        "not a ground discourse: {k}"
    );
    let facts: BTreeSet<Literal> = s.kb.facts().cloned().collect();
    let universe: Vec<u32> = facts
        .iter()
        .flat_map(|l| l.args.iter())
        .filter_map(|t| match t {
            Term::Const(Constant::Id(n)) => Some(*n),
            _ => None,
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let refs: Vec<RefId> = k.referents.iter().map(|r| r.id).collect();
    let image = |f: &BTreeMap<RefId, u32>| -> Vec<Literal> {
        k.conditions
            .iter()
            .filter_map(|c| match c {
                Condition::Atomic { pred, args } => Some(lit(
                    pred,
                    &args
                        .iter()
                        .map(|a| match a {
                            Arg::Ref(r) => Term::Const(Constant::Id(f[r])),
                            Arg::Atom(x) => Term::Const(Constant::Atom(x.clone())),
                            Arg::Num(n) => Term::Num(*n),
                        })
                        .collect::<Vec<_>>(),
                )),
                _ => None,
            })
            .collect()
    };
    // all embeddings, by counting in base |universe|
    let mut verified: Vec<Vec<Literal>> = Vec::new();
    let total = universe.len().pow(refs.len() as u32);
    for mut code in 0..total {
        let mut f = BTreeMap::new();
        for r in &refs {
            f.insert(*r, universe[code % universe.len()]);
            code /= universe.len();
        }
        let img = image(&f);
        if img.iter().all(|l| facts.contains(l)) {
            verified.push(img);
        }
    }
    ensure!(!verified.is_empty(), "no embedding verifies {k}");

    let mut terms: Vec<Term> = universe.iter().map(|n| Term::Const(Constant::Id(*n))).collect();
    terms.extend(
        facts
            .iter()
            .flat_map(|l| l.args.iter())
            .filter(|t| !matches!(t, Term::Const(Constant::Id(_))))
            .cloned()
            .collect::<BTreeSet<_>>(),
    );
    let signature: BTreeSet<(String, usize)> = facts.iter().map(|l| (l.pred.clone(), l.arity())).collect();
    let mut queries = 0;
    for (pred, arity) in signature {
        let tuples: Vec<Vec<Term>> = match arity {
            1 => terms.iter().map(|t| vec![t.clone()]).collect(),
            2 => terms
                .iter()
                .flat_map(|a| terms.iter().map(move |b| vec![a.clone(), b.clone()]))
                .collect(),
            _ => continue,
        };
        for args in tuples {
            let q = lit(&pred, &args);
            let oracle = verified.iter().any(|img| img.contains(&q));
            let engine = solve(std::slice::from_ref(&q), s.kb.clauses(), s.depth).map_err(|e| e.to_string())?;
            ensure!(
                oracle == engine.is_yes() && engine != Answer::DepthExceeded,
                "{q}: model says {oracle}, engine says {engine:?}"
            );
            queries += 1;
        }
    }
    ensure!(queries > 0, "no queries");
    Ok(())
}

fn truth_oracle() -> Check {
    let discourses: [&[&str]; 4] = [
        &PREFIX,
        &["John is a known customer.", "Mary is a customer.", "John owns a card.", "Mary enters the card."],
        &["SimpleMat serves a customer.", "The customer owns a valid card.", "SimpleMat checks it."],
        &["SimpleMat is a simple money dispenser.", "It prints a receipt.", "John knows the receipt."],
    ];
    for d in discourses {
        model_check(d).map_err(|e| format!("{d:?}: {e}"))?;
    }
    Ok(())
}

fn property_suites() -> Check {
    let suites: [Named; 6] = [
        ("unification laws", unification_laws),
        ("translation determinism", translation_determinism),
        ("simplify idempotence", simplify_idempotence),
        ("assimilation redundancy", reassertion_is_redundant),
        ("naf consistency", naf_consistency),
        ("truth oracle", truth_oracle),
    ];
    let mut failed = Vec::new();
    for (name, suite) in suites {
        let start = Instant::now();
        let result = suite();
        let verdict = if result.is_ok() { "pass" } else { "FAIL" };
        println!("    {name}: {verdict} ({:.2}s)", start.elapsed().as_secs_f64());
        if let Err(e) = result {
            failed.push(format!("{name}: {e}"));
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(failed.join("\n"))
    }
}

fn main() {
    let criteria: [Named; 8] = [
        ("golden translation", golden_translation),
        ("golden skolemization", golden_skolemization),
        ("golden initial DRS", golden_initial_drs),
        ("golden queries", golden_queries),
        ("golden paraphrases", golden_paraphrases),
        ("anaphora", anaphora),
        ("execution ordering", execution_ordering),
        ("property suites", property_suites),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {} {name}: PASS ({secs:.2}s)", i + 1),
            Err(e) => {
                failures += 1;
                println!("criterion {} {name}: FAIL\n{e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
