use cnl_core::inference::Answer;
use cnl_core::lexicon::Lexicon;
use cnl_core::logic::Clause;
use cnl_core::session::{Outcome, Session};

const ATM: &str = include_str!("../data/atm.txt");

fn accepted(s: &mut Session, text: &str) -> Vec<String> {
    match s.process_one(text) {
        Ok(Outcome::Asserted(a)) => a.translation.clauses.iter().map(Clause::to_string).collect(),
        other => panic!("{text}: {other:?}"),
    }
}

fn answer(s: &mut Session, text: &str) -> String {
    s.process_one(text).unwrap().message()
}

// Worked by hand: the trap-door-algorithm and the number are universally
// quantified in the if-part; the check code has no antecedent and becomes
// the first constant; the number's equation merges it into X2.
#[test]
fn conditional_with_unique_definite_in_consequent() {
    let mut s = Session::default();
    let body = "trap_door_algorithm(X1), number(X2), calculate(X1,X2).";
    assert_eq!(
        accepted(&mut s, "If the trap-door-algorithm calculates a number then the number equals the check code."),
        [format!("check_code(1) :- {body}"), format!("equal(X2,1) :- {body}")]
    );
    assert!(s.kb.clauses().iter().all(|c| c.symbols().1.is_empty()), "no Skolem terms expected");
}

#[test]
fn corpus_knowledge_base() {
    let mut s = Session::default();
    let clauses: Vec<String> = ATM.lines().flat_map(|l| accepted(&mut s, l)).collect();
    assert_eq!(&clauses[..5], [
        "named(1,simplemat).",
        "money_dispenser(1).",
        "simple(1).",
        "user_interface(2).",
        "have(1,2).",
    ]);
    assert_eq!(&clauses[5..7], ["card([2,X1]) :- customer(X1).", "have(X1,[2,X1]) :- customer(X1)."]);
    assert_eq!(clauses.len(), 12);
    // a pronoun and a definite in an if-part come back as their referents
    assert_eq!(s.paraphrase(), [
        "SimpleMat is a simple money dispenser.",
        "SimpleMat has a user interface.",
        "Every customer has a card.",
        "If a trap-door-algorithm calculates a number then the number equals the check code.",
        "Every customer has a personal code.",
    ]);

    assert_eq!(answer(&mut s, "What does SimpleMat have?"), "SimpleMat has [the user interface].");
    assert_eq!(answer(&mut s, "Is the user interface simple?"), "no");
    assert_eq!(answer(&mut s, "Does SimpleMat have a user interface?"), "yes");
}

#[test]
fn customers_get_cards() {
    let mut s = Session::default();
    accepted(&mut s, "Every customer has a card.");
    accepted(&mut s, "John is a customer.");
    assert_eq!(answer(&mut s, "Does John have a card?"), "yes");
    assert_eq!(answer(&mut s, "Who has a card?"), "[John] has a card.");
    let Ok(Outcome::Answered(q)) = s.process_one("Is John a card?") else { panic!() };
    assert_eq!(q.answer, Answer::No);
}

#[test]
fn negation_guards_consistency() {
    let mut s = Session::default();
    accepted(&mut s, "SimpleMat is a money dispenser.");
    s.process_one("SimpleMat does not accept the card.").unwrap();
    assert_eq!(s.kb.denials().count(), 1);
    let o = s.process_one("SimpleMat accepts the card.").unwrap();
    assert!(o.is_rejection(), "{o:?}");
    assert_eq!(answer(&mut s, "Does SimpleMat accept the card?"), "no");
}

#[test]
fn negated_antecedent() {
    let mut s = Session::default();
    accepted(&mut s, "If a customer does not have a card then SimpleMat rejects the customer.");
    accepted(&mut s, "John is a customer.");
    assert_eq!(answer(&mut s, "Does SimpleMat reject John?"), "yes");
    accepted(&mut s, "Mary is a customer.");
    accepted(&mut s, "Mary has a card.");
    assert_eq!(answer(&mut s, "Does SimpleMat reject Mary?"), "no");
}

#[test]
fn comparisons() {
    let mut s = Session::default();
    accepted(&mut s, "The amount is bigger than 500.");
    accepted(&mut s, "The limit is smaller than 300.");
    assert_eq!(answer(&mut s, "Is the amount bigger than 500?"), "yes");
}

#[test]
fn custom_lexicon() {
    let lex = Lexicon::parse("noun|robot|robot|robot|gender=n\nproper-noun|Rex|rex|rex|gender=n\nadjective|red|red|red\n")
        .unwrap();
    let mut s = Session::new(lex);
    accepted(&mut s, "Rex is a red robot.");
    assert_eq!(answer(&mut s, "Is Rex red?"), "yes");
    assert!(s.process_one("Rex is a customer.").is_err());
}
