//! Syntax trees and the recursive-descent recogniser that builds them.
//!
//! Every production returns all the ways it can succeed from a given token
//! position (a list of successes), so backtracking is implicit and complete
//! readings of a sentence can be counted. Lists are parsed iteratively.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use crate::features::{FeatureStructure, FeatureValue};
use crate::lexicon::{Category, LexEntry, Lexicon};

use super::tokenize::{Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mood {
    Declarative,
    YesNoQuery,
    WhQuery,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Det {
    Indefinite,
    Definite,
    Every,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Conj {
    And,
    /// `and then`: the right item follows the left in time.
    AndThen,
    Or,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Np {
    pub kind: NpKind,
    /// Token range, end exclusive.
    pub start: usize,
    pub end: usize,
    pub agr: FeatureStructure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NpKind {
    Proper(LexEntry),
    Pronoun(LexEntry),
    Common {
        det: Det,
        adjs: Vec<LexEntry>,
        noun: LexEntry,
        rel: Option<Box<Rel>>,
    },
    Number(i64),
    /// Question word, optionally restricted (`which card`).
    Wh {
        word: LexEntry,
        adjs: Vec<LexEntry>,
        noun: Option<LexEntry>,
    },
    /// Extraction site of a relative clause or object question.
    Gap,
    List { conj: Conj, items: Vec<Np> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rel {
    pub pronoun: LexEntry,
    /// Contains exactly one gap.
    pub clause: Clause,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Vp {
    Verb {
        verb: LexEntry,
        negated: bool,
        progressive: bool,
        object: Option<Np>,
        pp: Option<(LexEntry, Np)>,
    },
    CopulaNp { negated: bool, np: Np },
    CopulaAdj { negated: bool, adjs: Vec<LexEntry> },
    CopulaCmp { negated: bool, cmp: LexEntry, np: Np },
    List { conjs: Vec<Conj>, items: Vec<Vp> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Clause {
    Simple { subject: Np, vp: Vp },
    List { conjs: Vec<Conj>, items: Vec<Clause> },
    Cond { antecedent: Box<Clause>, consequent: Box<Clause> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub mood: Mood,
    pub clause: Clause,
}

impl Np {
    /// Token ranges of this phrase and the phrases inside it, outermost first.
    pub fn spans(&self, out: &mut Vec<(usize, usize)>) {
        match &self.kind {
            NpKind::Gap => return,
            _ => out.push((self.start, self.end)),
        }
        match &self.kind {
            NpKind::Common { rel: Some(rel), .. } => rel.clause.spans(out),
            NpKind::List { items, .. } => items.iter().for_each(|np| np.spans(out)),
            _ => {}
        }
    }
}

impl Vp {
    fn spans(&self, out: &mut Vec<(usize, usize)>) {
        match self {
            Vp::Verb { object, pp, .. } => {
                if let Some(o) = object {
                    o.spans(out);
                }
                if let Some((_, np)) = pp {
                    np.spans(out);
                }
            }
            Vp::CopulaNp { np, .. } | Vp::CopulaCmp { np, .. } => np.spans(out),
            Vp::CopulaAdj { .. } => {}
            Vp::List { items, .. } => items.iter().for_each(|v| v.spans(out)),
        }
    }
}

impl Clause {
    pub fn spans(&self, out: &mut Vec<(usize, usize)>) {
        match self {
            Clause::Simple { subject, vp } => {
                subject.spans(out);
                vp.spans(out);
            }
            Clause::List { items, .. } => items.iter().for_each(|c| c.spans(out)),
            Clause::Cond {
                antecedent,
                consequent,
            } => {
                antecedent.spans(out);
                consequent.spans(out);
            }
        }
    }
}

/// Where the parse of a sentence got furthest before failing.
#[derive(Debug, Clone, Default)]
pub struct Failure {
    pub token: usize,
    pub expected: BTreeSet<&'static str>,
}

type Res<T> = Vec<(T, usize)>;

fn agr(number: &str) -> FeatureStructure {
    FeatureStructure::new()
        .with("person", FeatureValue::atom("third"))
        .with("number", FeatureValue::atom(number))
}

fn number_of(fs: &FeatureStructure) -> FeatureValue {
    fs.get(&["number"])
}

/// Longest lexicon match at a token: its length and entries.
type Match = Option<(usize, Vec<LexEntry>)>;

pub struct Grammar<'a> {
    toks: &'a [Token],
    lex: &'a Lexicon,
    cache: RefCell<HashMap<usize, Match>>,
    failure: RefCell<Failure>,
}

impl<'a> Grammar<'a> {
    pub fn new(toks: &'a [Token], lex: &'a Lexicon) -> Self {
        Grammar {
            toks,
            lex,
            cache: RefCell::new(HashMap::new()),
            failure: RefCell::new(Failure::default()),
        }
    }

    pub fn failure(&self) -> Failure {
        self.failure.borrow().clone()
    }

    /// Complete readings of the sentence, terminator included.
    pub fn sentences(&self) -> Vec<Sentence> {
        let Some(last) = self.toks.len().checked_sub(1) else {
            return Vec::new();
        };
        let term = self.toks[last].text.as_str();
        let complete = |res: Res<Clause>, mood: Mood| -> Vec<Sentence> {
            res.into_iter()
                .filter(|&(_, end)| {
                    if end != last {
                        self.fail(end, "end of sentence");
                    }
                    end == last
                })
                .map(|(clause, _)| Sentence { mood, clause })
                .collect()
        };
        match term {
            "." => complete(self.top(0), Mood::Declarative),
            "?" => {
                let mut out = complete(self.yes_no(0), Mood::YesNoQuery);
                out.extend(complete(self.wh_question(0), Mood::WhQuery));
                out
            }
            _ => Vec::new(),
        }
    }

    fn fail(&self, at: usize, what: &'static str) {
        let mut f = self.failure.borrow_mut();
        if at > f.token {
            f.token = at;
            f.expected.clear();
        }
        if at == f.token {
            f.expected.insert(what);
        }
    }

    fn word(&self, i: usize, w: &str) -> bool {
        self.toks
            .get(i)
            .is_some_and(|t| t.kind != TokenKind::Number && t.is(w))
    }

    fn expect(&self, i: usize, w: &'static str) -> bool {
        let ok = self.word(i, w);
        if !ok {
            self.fail(i, w);
        }
        ok
    }

    fn lex_at(&self, i: usize) -> Option<(usize, Vec<LexEntry>)> {
        if let Some(hit) = self.cache.borrow().get(&i) {
            return hit.clone();
        }
        let words: Vec<String> = self.toks[i.min(self.toks.len())..]
            .iter()
            .take_while(|t| t.kind == TokenKind::Word)
            .map(|t| t.lower())
            .collect();
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        let hit = self.lex.longest_match(&refs);
        self.cache.borrow_mut().insert(i, hit.clone());
        hit
    }

    fn cat_at(&self, i: usize, cat: Category) -> Vec<(LexEntry, usize)> {
        let found: Vec<(LexEntry, usize)> = match self.lex_at(i) {
            Some((n, entries)) => entries
                .into_iter()
                .filter(|e| e.category == cat)
                .map(|e| (e, i + n))
                .collect(),
            None => Vec::new(),
        };
        if found.is_empty() {
            self.fail(i, cat.name());
        }
        found
    }

    fn conj(&self, i: usize) -> Option<(Conj, usize)> {
        if self.word(i, "and") {
            if self.word(i + 1, "then") {
                Some((Conj::AndThen, i + 2))
            } else {
                Some((Conj::And, i + 1))
            }
        } else if self.word(i, "or") {
            Some((Conj::Or, i + 1))
        } else {
            self.fail(i, "and/or");
            None
        }
    }

    /// Iterates `item` separated by conjunctions. An or-list may not mix in
    /// `and`, which would need bracketing to read.
    fn list<T: Clone>(&self, first: Res<T>, item: &dyn Fn(usize) -> Res<T>) -> Res<(Vec<T>, Vec<Conj>)> {
        let mut done: Res<(Vec<T>, Vec<Conj>)> = Vec::new();
        let mut frontier: Res<(Vec<T>, Vec<Conj>)> =
            first.into_iter().map(|(t, j)| ((vec![t], vec![]), j)).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for ((items, conjs), j) in frontier {
                if let Some((c, k)) = self.conj(j) {
                    let mixes = conjs
                        .first()
                        .is_some_and(|&f: &Conj| (f == Conj::Or) != (c == Conj::Or));
                    if !mixes {
                        for (t, end) in item(k) {
                            let mut items = items.clone();
                            let mut conjs = conjs.clone();
                            items.push(t);
                            conjs.push(c);
                            next.push(((items, conjs), end));
                        }
                    }
                }
                done.push(((items, conjs), j));
            }
            frontier = next;
        }
        done
    }

    // sentences

    fn top(&self, i: usize) -> Res<Clause> {
        if !self.word(i, "if") {
            self.fail(i, "if");
            return self.sentence_list(i);
        }
        let mut out = Vec::new();
        for (ante, j) in self.sentence_list(i + 1) {
            let j = if self.word(j, ",") { j + 1 } else { j };
            if !self.expect(j, "then") {
                continue;
            }
            for (cons, k) in self.sentence_list(j + 1) {
                out.push((
                    Clause::Cond {
                        antecedent: Box::new(ante.clone()),
                        consequent: Box::new(cons),
                    },
                    k,
                ));
            }
        }
        out
    }

    fn sentence_list(&self, i: usize) -> Res<Clause> {
        self.list(self.simple(i), &|k| self.simple(k))
            .into_iter()
            .map(|((mut items, conjs), j)| {
                let clause = if items.len() == 1 {
                    items.pop().unwrap()
                } else {
                    Clause::List { conjs, items }
                };
                (clause, j)
            })
            .collect()
    }

    fn simple(&self, i: usize) -> Res<Clause> {
        let mut out = Vec::new();
        for (subject, j) in self.np_list(i, "nom", false) {
            for (vp, k) in self.vp(j, &subject.agr, false) {
                out.push((
                    Clause::Simple {
                        subject: subject.clone(),
                        vp,
                    },
                    k,
                ));
            }
        }
        out
    }

    // questions

    fn yes_no(&self, i: usize) -> Res<Clause> {
        let mut out = Vec::new();
        for (cop, number) in [("is", "sg"), ("are", "pl")] {
            if !self.expect(i, cop) {
                continue;
            }
            for (subject, j) in self.np_list(i + 1, "nom", false) {
                if number_of(&subject.agr) != FeatureValue::atom(number) {
                    continue;
                }
                let (negated, j) = if self.word(j, "not") { (true, j + 1) } else { (false, j) };
                for (vp, k) in self.copula_complement(j, negated) {
                    out.push((
                        Clause::Simple {
                            subject: subject.clone(),
                            vp,
                        },
                        k,
                    ));
                }
            }
        }
        for (aux, number) in [("does", "sg"), ("do", "pl")] {
            if !self.expect(i, aux) {
                continue;
            }
            for (subject, j) in self.np_list(i + 1, "nom", false) {
                if number_of(&subject.agr) != FeatureValue::atom(number) {
                    continue;
                }
                let (negated, j) = if self.word(j, "not") { (true, j + 1) } else { (false, j) };
                for (vp, k) in self.verb_phrase(j, "inf", None, negated, false) {
                    out.push((
                        Clause::Simple {
                            subject: subject.clone(),
                            vp,
                        },
                        k,
                    ));
                }
            }
        }
        out
    }

    fn wh_word(&self, i: usize) -> Res<Np> {
        let mut out = Vec::new();
        for (word, j) in self.cat_at(i, Category::QueryWord) {
            let sg = agr("sg");
            match word.lemma.as_str() {
                "who" | "what" => out.push((
                    Np {
                        kind: NpKind::Wh {
                            word,
                            adjs: vec![],
                            noun: None,
                        },
                        start: i,
                        end: j,
                        agr: sg,
                    },
                    j,
                )),
                "which" => {
                    for ((adjs, noun), k) in self.nominal(j) {
                        if number_of(&noun.features) != FeatureValue::atom("sg") {
                            continue;
                        }
                        out.push((
                            Np {
                                kind: NpKind::Wh {
                                    word: word.clone(),
                                    adjs,
                                    noun: Some(noun),
                                },
                                start: i,
                                end: k,
                                agr: sg.clone(),
                            },
                            k,
                        ));
                    }
                }
                _ => {}
            }
        }
        out
    }

    fn wh_question(&self, i: usize) -> Res<Clause> {
        let mut out = Vec::new();
        for (wh, j) in self.wh_word(i) {
            // subject question
            for (vp, k) in self.vp(j, &wh.agr, false) {
                out.push((
                    Clause::Simple {
                        subject: wh.clone(),
                        vp,
                    },
                    k,
                ));
            }
            // object question with do-support
            for (aux, number) in [("does", "sg"), ("do", "pl")] {
                if !self.expect(j, aux) {
                    continue;
                }
                for (subject, k) in self.np_list(j + 1, "nom", false) {
                    if number_of(&subject.agr) != FeatureValue::atom(number) {
                        continue;
                    }
                    for (vp, l) in self.verb_phrase(k, "inf", None, false, true) {
                        out.push((
                            Clause::Simple {
                                subject: subject.clone(),
                                vp: fill_gap_vp(vp, &wh),
                            },
                            l,
                        ));
                    }
                }
            }
        }
        out
    }

    // noun phrases

    fn nominal(&self, i: usize) -> Res<(Vec<LexEntry>, LexEntry)> {
        let mut out = Vec::new();
        let mut frontier: Res<Vec<LexEntry>> = vec![(Vec::new(), i)];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (adjs, j) in frontier {
                for (noun, k) in self.cat_at(j, Category::Noun) {
                    out.push(((adjs.clone(), noun), k));
                }
                for (adj, k) in self.cat_at(j, Category::Adjective) {
                    let mut more = adjs.clone();
                    more.push(adj);
                    next.push((more, k));
                }
            }
            frontier = next;
        }
        out
    }

    fn np_list(&self, i: usize, case: &str, numbers: bool) -> Res<Np> {
        self.list(self.np(i, case, numbers), &|k| self.np(k, case, numbers))
            .into_iter()
            .filter(|((_, conjs), _)| !conjs.contains(&Conj::AndThen))
            .map(|((mut items, conjs), j)| {
                if items.len() == 1 {
                    return (items.pop().unwrap(), j);
                }
                let conj = if conjs[0] == Conj::Or { Conj::Or } else { Conj::And };
                let number = if conj == Conj::And {
                    "pl"
                } else {
                    // or-lists agree with their last member
                    match number_of(&items.last().unwrap().agr) {
                        FeatureValue::Atom(n) if n == "pl" => "pl",
                        _ => "sg",
                    }
                };
                let np = Np {
                    start: items[0].start,
                    end: items.last().unwrap().end,
                    kind: NpKind::List { conj, items },
                    agr: agr(number),
                };
                (np, j)
            })
            .filter(|(np, _)| match &np.kind {
                NpKind::List { items, .. } => !items.iter().any(|x| matches!(x.kind, NpKind::Number(_))),
                _ => true,
            })
            .collect()
    }

    fn np(&self, i: usize, case: &str, numbers: bool) -> Res<Np> {
        let mut out = Vec::new();
        if let Some(t) = self.toks.get(i) {
            if t.kind == TokenKind::Number {
                if numbers {
                    if let Ok(n) = t.text.parse() {
                        out.push((
                            Np {
                                kind: NpKind::Number(n),
                                start: i,
                                end: i + 1,
                                agr: agr("sg"),
                            },
                            i + 1,
                        ));
                    }
                } else {
                    self.fail(i, "noun phrase");
                }
                return out;
            }
        }
        for (e, j) in self.cat_at(i, Category::ProperNoun) {
            let number = number_of(&e.features);
            let number = if number == FeatureValue::atom("pl") { "pl" } else { "sg" };
            out.push((
                Np {
                    kind: NpKind::Proper(e),
                    start: i,
                    end: j,
                    agr: agr(number),
                },
                j,
            ));
        }
        for (e, j) in self.cat_at(i, Category::Pronoun) {
            if e.features.get(&["case"]).unify(&FeatureValue::atom(case)).is_none() {
                self.fail(i, "pronoun in this case");
                continue;
            }
            let number = if number_of(&e.features) == FeatureValue::atom("pl") { "pl" } else { "sg" };
            out.push((
                Np {
                    kind: NpKind::Pronoun(e),
                    start: i,
                    end: j,
                    agr: agr(number),
                },
                j,
            ));
        }
        for (d, j) in self.cat_at(i, Category::Determiner) {
            let det = match d.pred.as_str() {
                "definite" => Det::Definite,
                "every" => Det::Every,
                _ => Det::Indefinite,
            };
            for ((adjs, noun), k) in self.nominal(j) {
                let number = match number_of(&noun.features) {
                    FeatureValue::Atom(n) if n == "pl" => "pl",
                    _ => "sg",
                };
                if number == "pl" && det != Det::Definite {
                    self.fail(j, "singular noun");
                    continue;
                }
                let head = Np {
                    kind: NpKind::Common {
                        det,
                        adjs,
                        noun,
                        rel: None,
                    },
                    start: i,
                    end: k,
                    agr: agr(number),
                };
                for (rel, l) in self.relative(k, &head) {
                    let mut np = head.clone();
                    np.end = l;
                    if let NpKind::Common { rel: slot, .. } = &mut np.kind {
                        *slot = Some(Box::new(rel));
                    }
                    out.push((np, l));
                }
                out.push((head, k));
            }
        }
        out
    }

    fn relative(&self, i: usize, head: &Np) -> Res<Rel> {
        let NpKind::Common { noun, .. } = &head.kind else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for (pronoun, j) in self.cat_at(i, Category::QueryWord) {
            if !matches!(pronoun.lemma.as_str(), "who" | "which" | "that") {
                continue;
            }
            let fits = pronoun
                .features
                .get(&["gender"])
                .unify(&noun.features.get(&["gender"]))
                .is_some();
            if !fits {
                self.fail(i, "relative pronoun agreeing with its noun");
                continue;
            }
            let gap = Np {
                kind: NpKind::Gap,
                start: j,
                end: j,
                agr: head.agr.clone(),
            };
            for (vp, k) in self.vp(j, &head.agr, false) {
                out.push((
                    Rel {
                        pronoun: pronoun.clone(),
                        clause: Clause::Simple {
                            subject: gap.clone(),
                            vp,
                        },
                    },
                    k,
                ));
            }
            for (subject, k) in self.np(j, "nom", false) {
                for (vp, l) in self.vp(k, &subject.agr, true) {
                    out.push((
                        Rel {
                            pronoun: pronoun.clone(),
                            clause: Clause::Simple {
                                subject: subject.clone(),
                                vp,
                            },
                        },
                        l,
                    ));
                }
            }
        }
        out
    }

    // verb phrases

    /// A verb phrase agreeing with `subj`. With `gap`, the object position is
    /// extracted and coordination is not allowed.
    fn vp(&self, i: usize, subj: &FeatureStructure, gap: bool) -> Res<Vp> {
        let first = self.vp1(i, subj, gap);
        if gap {
            return first;
        }
        self.list(first, &|k| self.vp1(k, subj, false))
            .into_iter()
            .map(|((mut items, conjs), j)| {
                let vp = if items.len() == 1 {
                    items.pop().unwrap()
                } else {
                    Vp::List { conjs, items }
                };
                (vp, j)
            })
            .collect()
    }

    fn vp1(&self, i: usize, subj: &FeatureStructure, gap: bool) -> Res<Vp> {
        let number = number_of(subj);
        let sg = number == FeatureValue::atom("sg");
        let mut out = Vec::new();
        // does not V
        let aux = if sg { "does" } else { "do" };
        if self.expect(i, aux) && self.expect(i + 1, "not") {
            out.extend(self.verb_phrase(i + 2, "inf", None, true, gap));
        }
        // has not NP
        let have = if sg { "has" } else { "have" };
        if !gap && self.word(i, have) && self.expect(i + 1, "not") {
            if let Some(verb) = self.lex.lookup("have").into_iter().find(|e| {
                e.category == Category::Verb && e.features.get(&["vform"]) == FeatureValue::atom("inf")
            }) {
                for (object, k) in self.np_list(i + 2, "acc", true) {
                    out.push((
                        Vp::Verb {
                            verb: verb.clone(),
                            negated: true,
                            progressive: false,
                            object: Some(object),
                            pp: None,
                        },
                        k,
                    ));
                }
            }
        }
        // finite verb
        out.extend(self.verb_phrase(i, "fin", Some(subj), false, gap));
        // copula
        let cop = if sg { "is" } else { "are" };
        if self.expect(i, cop) {
            let (negated, j) = if self.word(i + 1, "not") { (true, i + 2) } else { (false, i + 1) };
            if gap {
                for (vp, k) in self.verb_phrase(j, "ing", None, negated, true) {
                    out.push((progressive(vp), k));
                }
            } else {
                out.extend(self.copula_complement(j, negated));
            }
        }
        out
    }

    fn verb_phrase(
        &self,
        i: usize,
        vform: &str,
        subj: Option<&FeatureStructure>,
        negated: bool,
        gap: bool,
    ) -> Res<Vp> {
        let mut out = Vec::new();
        for (verb, j) in self.cat_at(i, Category::Verb) {
            if verb.features.get(&["vform"]) != FeatureValue::atom(vform) {
                continue;
            }
            if let Some(subj) = subj {
                let agreed = match verb.features.get(&["agr"]) {
                    FeatureValue::Struct(a) => a.unify(subj).is_some(),
                    _ => true,
                };
                if !agreed {
                    self.fail(i, "verb agreeing with its subject");
                    continue;
                }
            }
            for ((object, pp), k) in self.complements(j, &verb, gap) {
                out.push((
                    Vp::Verb {
                        verb: verb.clone(),
                        negated,
                        progressive: false,
                        object,
                        pp,
                    },
                    k,
                ));
            }
        }
        out
    }

    #[allow(clippy::type_complexity)]
    fn complements(&self, i: usize, verb: &LexEntry, gap: bool) -> Res<(Option<Np>, Option<(LexEntry, Np)>)> {
        let objects: Res<Option<Np>> = if verb.is_intransitive() {
            if gap {
                return Vec::new();
            }
            vec![(None, i)]
        } else if gap {
            vec![(
                Some(Np {
                    kind: NpKind::Gap,
                    start: i,
                    end: i,
                    agr: FeatureStructure::new(),
                }),
                i,
            )]
        } else {
            self.np_list(i, "acc", true)
                .into_iter()
                .map(|(np, j)| (Some(np), j))
                .collect()
        };
        let mut out = Vec::new();
        for (object, j) in objects {
            for (prep, k) in self.cat_at(j, Category::Preposition) {
                for (np, l) in self.np_list(k, "acc", true) {
                    out.push(((object.clone(), Some((prep.clone(), np))), l));
                }
            }
            out.push(((object, None), j));
        }
        out
    }

    fn copula_complement(&self, i: usize, negated: bool) -> Res<Vp> {
        let mut out = Vec::new();
        // predicate nominal
        for (np, j) in self.np(i, "acc", false) {
            let ok = match &np.kind {
                NpKind::Common { det, .. } => *det != Det::Every,
                NpKind::Proper(_) => true,
                _ => false,
            };
            if ok {
                out.push((Vp::CopulaNp { negated, np }, j));
            }
        }
        // adjectives
        let first: Res<LexEntry> = self.cat_at(i, Category::Adjective);
        for ((adjs, conjs), j) in self.list(first, &|k| self.cat_at(k, Category::Adjective)) {
            if conjs.iter().all(|&c| c == Conj::And) {
                out.push((Vp::CopulaAdj { negated, adjs }, j));
            }
        }
        // comparatives
        for (cmp, j) in self.cat_at(i, Category::Comparative) {
            for (np, k) in self.np(j, "acc", true) {
                out.push((
                    Vp::CopulaCmp {
                        negated,
                        cmp: cmp.clone(),
                        np,
                    },
                    k,
                ));
            }
        }
        // progressive
        for (vp, j) in self.verb_phrase(i, "ing", None, negated, false) {
            out.push((progressive(vp), j));
        }
        out
    }
}

fn progressive(vp: Vp) -> Vp {
    match vp {
        Vp::Verb {
            verb,
            negated,
            object,
            pp,
            ..
        } => Vp::Verb {
            verb,
            negated,
            progressive: true,
            object,
            pp,
        },
        other => other,
    }
}

fn fill_gap_np(np: Np, filler: &Np) -> Np {
    match np.kind {
        NpKind::Gap => filler.clone(),
        _ => np,
    }
}

fn fill_gap_vp(vp: Vp, filler: &Np) -> Vp {
    match vp {
        Vp::Verb {
            verb,
            negated,
            progressive,
            object,
            pp,
        } => Vp::Verb {
            verb,
            negated,
            progressive,
            object: object.map(|o| fill_gap_np(o, filler)),
            pp,
        },
        other => other,
    }
}
