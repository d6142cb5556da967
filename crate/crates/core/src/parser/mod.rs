//! Controlled-English parsing: tokens, syntax trees and DRS increments.

mod build;
pub mod grammar;
pub mod tokenize;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::drs::{Arg, Drs, Number, RefId};
use crate::lexicon::{is_closed_class, Lexicon, VerbKind};

pub use grammar::{Clause, Conj, Det, Mood, Np, NpKind, Sentence, Vp};
pub use tokenize::{tokenize, Token, TokenKind};

/// A noun phrase the discourse handler has to resolve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anaphor {
    pub referent: RefId,
    pub kind: AnaphorKind,
    pub description: String,
    pub token: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnaphorKind {
    Pronoun { gender: BTreeSet<String>, number: Number },
    Definite { pred: String },
    Name { name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhVar {
    pub referent: RefId,
    pub word: String,
    pub gender: BTreeSet<String>,
    pub token: usize,
}

/// A verb condition with what the executor needs to order it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventHint {
    pub pred: String,
    pub args: Vec<Arg>,
    pub kind: VerbKind,
    pub progressive: bool,
    pub negated: bool,
    /// Position in an and-then sequence within the sentence.
    pub slot: usize,
    pub top_level: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aspect {
    Simple,
    Progressive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NpInfo {
    pub referent: RefId,
    pub start: usize,
    pub end: usize,
    pub det: Option<Det>,
    pub pronoun: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseResult {
    pub tree: Sentence,
    pub tokens: Vec<Token>,
    pub sentence: usize,
    /// New referents and conditions, anaphors unresolved.
    pub drs: Drs,
    pub anaphors: Vec<Anaphor>,
    pub wh: Vec<WhVar>,
    pub events: Vec<EventHint>,
    pub nps: Vec<NpInfo>,
    pub next_ref: u32,
}

impl ParseResult {
    pub fn mood(&self) -> Mood {
        self.tree.mood
    }

    /// Kind and aspect of the first verb, if there is one.
    pub fn eventuality_hint(&self) -> Option<(VerbKind, Aspect)> {
        self.events.first().map(|e| {
            let aspect = if e.progressive { Aspect::Progressive } else { Aspect::Simple };
            (e.kind, aspect)
        })
    }

    pub fn text(&self) -> String {
        render_tokens(&self.tokens, |_| None)
    }

    /// The sentence with its noun phrases bracketed, to tell readings apart.
    pub fn bracketed(&self) -> String {
        self.render(|_| None, true)
    }

    /// Tokens as written, `subst` replacing single tokens, noun phrases
    /// optionally bracketed.
    pub fn render(&self, subst: impl Fn(usize) -> Option<String>, brackets: bool) -> String {
        let mut spans = Vec::new();
        if brackets {
            self.tree.clause.spans(&mut spans);
        }
        let starts = |i: usize| spans.iter().filter(|s| s.0 == i && s.1 > s.0 + 1).count();
        let ends = |i: usize| spans.iter().filter(|s| s.1 == i + 1 && s.1 > s.0 + 1).count();
        let words: Vec<String> = self
            .tokens
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let w = subst(i).unwrap_or_else(|| t.raw.clone());
                format!("{}{}{}", "[".repeat(starts(i)), w, "]".repeat(ends(i)))
            })
            .collect();
        join_words(&words)
    }
}

/// Text from tokens, with `subst` replacing individual tokens.
pub fn render_tokens(tokens: &[Token], subst: impl Fn(usize) -> Option<String>) -> String {
    let words: Vec<String> = tokens
        .iter()
        .enumerate()
        .map(|(i, t)| subst(i).unwrap_or_else(|| t.raw.clone()))
        .collect();
    join_words(&words)
}

fn join_words(words: &[String]) -> String {
    let mut out = String::new();
    for w in words {
        let punct = matches!(w.as_str(), "." | "?" | ",") || w.starts_with(['.', '?', ','])
            || w.trim_start_matches(']').starts_with(['.', '?', ',']);
        if !out.is_empty() && !punct {
            out.push(' ');
        }
        out.push_str(w);
    }
    out
}

/// All complete readings of an ambiguous sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbiguitySet {
    pub sentence: usize,
    pub readings: Vec<ParseResult>,
}

impl fmt::Display for AmbiguitySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.readings.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  {}. {}", i + 1, r.bracketed())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    EmptyInput,
    #[error("sentence {}: unexpected character '{ch}'", sentence + 1)]
    UnexpectedChar { sentence: usize, offset: usize, ch: char },
    #[error("sentence {}: missing '.' or '?' after token {}", sentence + 1, token + 1)]
    Unterminated { sentence: usize, token: usize },
    #[error("sentence {}, token {}: unexpected '{found}', expected {}", sentence + 1, token + 1, expected.join(" or "))]
    Syntax {
        sentence: usize,
        token: usize,
        found: String,
        expected: Vec<String>,
    },
    #[error("sentence {}, token {}: unknown word '{word}'", sentence + 1, token + 1)]
    UnknownWord { sentence: usize, token: usize, word: String },
    #[error("sentence {} has {} readings:\n{}", .0.sentence + 1, .0.readings.len(), .0)]
    Ambiguous(AmbiguitySet),
}

/// First word not covered by the lexicon or the grammar's own words.
pub fn unknown_word(tokens: &[Token], lexicon: &Lexicon) -> Option<(usize, String)> {
    let mut i = 0;
    while i < tokens.len() {
        if tokens[i].kind != TokenKind::Word {
            i += 1;
            continue;
        }
        let words: Vec<String> = tokens[i..]
            .iter()
            .take_while(|t| t.kind == TokenKind::Word)
            .map(|t| t.lower())
            .collect();
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        match lexicon.longest_match(&refs) {
            Some((n, _)) => i += n,
            None if is_closed_class(&words[0]) => i += 1,
            None => return Some((i, tokens[i].raw.clone())),
        }
    }
    None
}

/// Parses one sentence. Referents are numbered from `first_ref`; `sentence`
/// is recorded in their origin.
pub fn parse_sentence(
    tokens: &[Token],
    lexicon: &Lexicon,
    first_ref: u32,
    sentence: usize,
) -> Result<ParseResult, ParseError> {
    if tokens.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    if let Some((token, word)) = unknown_word(tokens, lexicon) {
        return Err(ParseError::UnknownWord { sentence, token, word });
    }
    let g = grammar::Grammar::new(tokens, lexicon);
    let trees = g.sentences();
    if trees.is_empty() {
        let f = g.failure();
        return Err(ParseError::Syntax {
            sentence,
            token: f.token,
            found: tokens.get(f.token).map(|t| t.raw.clone()).unwrap_or_default(),
            expected: f.expected.iter().map(|s| s.to_string()).collect(),
        });
    }
    let mut readings: Vec<ParseResult> = Vec::new();
    for tree in trees {
        let mut b = build::Builder::new(first_ref, sentence);
        let drs = b.build(&tree.clause);
        let next_ref = b.next_ref();
        let reading = ParseResult {
            tree,
            tokens: tokens.to_vec(),
            sentence,
            drs,
            anaphors: b.anaphors,
            wh: b.wh,
            events: b.events,
            nps: b.nps,
            next_ref,
        };
        // distinct trees with the same meaning are one reading
        let same = readings
            .iter()
            .any(|r| r.drs == reading.drs && r.mood() == reading.mood());
        if !same {
            readings.push(reading);
        }
    }
    if readings.len() == 1 {
        Ok(readings.pop().unwrap())
    } else {
        Err(ParseError::Ambiguous(AmbiguitySet { sentence, readings }))
    }
}

/// Tokenizes and parses every sentence of `text`, numbering referents
/// consecutively.
pub fn parse_text(text: &str, lexicon: &Lexicon) -> Result<Vec<ParseResult>, ParseError> {
    let mut next = 1;
    let mut out = Vec::new();
    for (i, toks) in tokenize(text)?.iter().enumerate() {
        let r = parse_sentence(toks, lexicon, next, i)?;
        next = r.next_ref;
        out.push(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drs::Condition;

    fn parse(text: &str) -> Result<ParseResult, ParseError> {
        let lex = Lexicon::atm();
        let toks = tokenize(text)?.remove(0);
        parse_sentence(&toks, &lex, 1, 0)
    }

    #[test]
    fn k1_increment() {
        let r = parse("SimpleMat is a simple money dispenser.").unwrap();
        assert_eq!(r.mood(), Mood::Declarative);
        assert_eq!(
            r.drs.to_term(),
            "drs([X1,X2], [gender(X1,[m,f,n]), number(X1,sg), named(X1,simplemat), \
             gender(X2,n), number(X2,sg), money_dispenser(X2), simple(X2), is(X1,X2)])"
        );
    }

    #[test]
    fn every_becomes_implication() {
        let r = parse("Every customer has a card.").unwrap();
        assert_eq!(
            r.drs.to_term(),
            "drs([], [ifthen(drs([X1], [gender(X1,[m,f]), number(X1,sg), customer(X1)]), \
             drs([X2,X1], [gender(X2,n), number(X2,sg), card(X2), have(X1,X2)]))])"
        );
        let r = parse("Every customer have a card.");
        assert!(matches!(r, Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn wh_query_has_one_variable() {
        let r = parse("Who is a money dispenser?").unwrap();
        assert_eq!(r.mood(), Mood::WhQuery);
        assert_eq!(r.wh.len(), 1);
        assert_eq!(r.wh[0].word, "who");
    }

    #[test]
    fn misplaced_determiner() {
        match parse("Customer the enters.") {
            Err(ParseError::Syntax { token, found, .. }) => {
                assert_eq!(token, 0);
                assert_eq!(found, "Customer");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_word_position() {
        assert_eq!(
            parse("SimpleMat frobnicates a card."),
            Err(ParseError::UnknownWord {
                sentence: 0,
                token: 1,
                word: "frobnicates".into()
            })
        );
    }

    #[test]
    fn ambiguity_is_reported_with_readings() {
        let Err(ParseError::Ambiguous(set)) = parse("SimpleMat serves a customer who has a card and a code.") else {
            panic!("expected ambiguity");
        };
        let shown: Vec<String> = set.readings.iter().map(|r| r.bracketed()).collect();
        assert!(shown.contains(&"SimpleMat serves [a customer who has [[a card] and [a code]]].".to_string()));
        assert!(shown.contains(&"SimpleMat serves [[a customer who has [a card]] and [a code]].".to_string()));
    }

    #[test]
    fn and_then_orders_slots() {
        let r = parse("The customer enters the card and then SimpleMat checks the card.").unwrap();
        let slots: Vec<(String, usize)> = r.events.iter().map(|e| (e.pred.clone(), e.slot)).collect();
        assert_eq!(slots, [("enter".into(), 0), ("check".into(), 1)]);
        let r = parse("SimpleMat is checking the card.").unwrap();
        assert_eq!(r.eventuality_hint(), Some((VerbKind::State, Aspect::Progressive)));
    }

    #[test]
    fn negation_and_comparatives() {
        let r = parse("SimpleMat is not a bank.").unwrap();
        assert!(matches!(r.drs.conditions.last(), Some(Condition::Negation(_))));
        let r = parse("The amount is bigger than 500.").unwrap();
        assert!(r.drs.to_term().contains("bigger_than(X1,500)"));
    }

    #[test]
    fn names_inside_conditionals_go_to_the_top() {
        let r = parse("If a customer enters a card then SimpleMat checks the card.").unwrap();
        assert_eq!(r.drs.referents.len(), 1);
        assert!(r.drs.referents[0].origin.proper);
    }

    #[test]
    fn parse_text_numbers_across_sentences() {
        let lex = Lexicon::atm();
        let rs = parse_text("SimpleMat is a simple money dispenser. It has a user interface.", &lex).unwrap();
        assert_eq!(rs[1].drs.referents.iter().map(|r| r.id.0).collect::<Vec<_>>(), [3, 4]);
    }
}
