//! One specification dialog: the lexicon, the knowledge base built so far,
//! and the discourse it came from.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use thiserror::Error;

use crate::discourse::{resolve, DiscourseError, ResolutionKind, ResolutionReport};
use crate::drs::{Arg, Condition, Drs, Number, RefId, Referent};
use crate::executor::{
    build_timeline, prompt_read, EventSpec, ExecError, ExecIo, ExecutionTrace, Executor, ScenarioSentence, Timeline,
};
use crate::inference::{Answer, SolveError, Solver, DEFAULT_DEPTH};
use crate::kb::{AssimilationReport, KbError, KnowledgeBase, Status};
use crate::lexicon::{Category, LexEntry, Lexicon, LexiconError};
use crate::logic::{Clause, Constant, Term};
use crate::paraphrase::{answer_sentence, builtin_schemata, feedback_sentence, paraphrase_kb, Describer, ParaphraseSchema};
use crate::parser::{parse_sentence, tokenize, AmbiguitySet, Mood, ParseError, ParseResult, Token};
use crate::translator::{literal, translate_assertion, translate_query, TranslateError, Translation};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Discourse(#[from] DiscourseError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Kb(#[from] KbError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error("sentence {}: nothing is known about \"{name}\"", sentence + 1)]
    UnknownName { name: String, sentence: usize },
    #[error("there is no ambiguous sentence to choose a reading for")]
    NothingToChoose,
    #[error("no reading {0}")]
    NoSuchReading(usize),
    #[error("no scenario named \"{0}\"")]
    NoSuchScenario(String),
    #[error("scenario sentences must be statements: \"{0}\"")]
    ScenarioQuestion(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assertion {
    pub text: String,
    /// The input with anaphora and Skolemized phrases marked.
    pub feedback: String,
    /// Increment with anaphora resolved, before and after simplification.
    pub drs: Drs,
    pub simplified: Drs,
    pub resolution: ResolutionReport,
    pub translation: Translation,
    pub report: AssimilationReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryOutcome {
    pub text: String,
    pub drs: Drs,
    pub goals: Vec<String>,
    pub answer: Answer,
    /// "yes", "no", or the answer sentence.
    pub response: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Asserted(Assertion),
    /// The sentence contradicts the knowledge base and was not added.
    Rejected(Assertion),
    Answered(QueryOutcome),
    /// Pick a reading with [`Session::choose`].
    Ambiguous(AmbiguitySet),
}

impl Outcome {
    /// The line shown to the user.
    pub fn message(&self) -> String {
        match self {
            Outcome::Asserted(a) => a.feedback.clone(),
            Outcome::Rejected(a) => match &a.report.status {
                Status::Rejected(c) => match &c.stored_source {
                    Some(src) => format!("rejected: {} contradicts {} (from \"{src}\")", c.new, c.stored),
                    None => format!("rejected: {} contradicts {}", c.new, c.stored),
                },
                Status::Accepted => "rejected".into(),
            },
            Outcome::Answered(q) => q.response.clone(),
            Outcome::Ambiguous(set) => format!("ambiguous, choose a reading:\n{set}"),
        }
    }

    pub fn is_rejection(&self) -> bool {
        matches!(self, Outcome::Rejected(_) | Outcome::Ambiguous(_))
    }
}

pub struct Session {
    pub lexicon: Lexicon,
    pub schemata: Vec<ParaphraseSchema>,
    pub kb: KnowledgeBase,
    pub depth: usize,
    pub executor: Executor,
    /// Everything said so far, unsimplified, for anaphora.
    context: Drs,
    next_ref: u32,
    sentence: usize,
    /// Constants standing for discourse referents.
    known: BTreeMap<RefId, Term>,
    pending: Option<AmbiguitySet>,
    scenarios: BTreeMap<String, Vec<String>>,
}

impl Default for Session {
    fn default() -> Self {
        Session::new(Lexicon::atm())
    }
}

impl Session {
    pub fn new(lexicon: Lexicon) -> Self {
        Session {
            lexicon,
            schemata: builtin_schemata(),
            kb: KnowledgeBase::new(),
            depth: DEFAULT_DEPTH,
            executor: Executor::default(),
            context: Drs::new(),
            next_ref: 1,
            sentence: 0,
            known: BTreeMap::new(),
            pending: None,
            scenarios: BTreeMap::new(),
        }
    }

    pub fn context(&self) -> &Drs {
        &self.context
    }

    pub fn pending(&self) -> Option<&AmbiguitySet> {
        self.pending.as_ref()
    }

    /// Every sentence of `text`, statements asserted and questions answered.
    pub fn process(&mut self, text: &str) -> Vec<Result<Outcome, SessionError>> {
        let sentences = match tokenize(text) {
            Ok(s) => s,
            Err(e) => return vec![Err(e.into())],
        };
        sentences.iter().map(|toks| self.process_tokens(toks)).collect()
    }

    /// `text` as one sentence; further sentences are ignored.
    pub fn process_one(&mut self, text: &str) -> Result<Outcome, SessionError> {
        let sentences = tokenize(text)?;
        self.process_tokens(&sentences[0])
    }

    fn process_tokens(&mut self, toks: &[Token]) -> Result<Outcome, SessionError> {
        match parse_sentence(toks, &self.lexicon, self.next_ref, self.sentence) {
            Ok(p) => self.reading(p, false),
            Err(ParseError::Ambiguous(set)) => {
                self.pending = Some(set.clone());
                Ok(Outcome::Ambiguous(set))
            }
            Err(e) => Err(e.into()),
        }
    }

    /// Continues an ambiguous sentence with reading `n`, counted from 1.
    pub fn choose(&mut self, n: usize) -> Result<Outcome, SessionError> {
        let set = self.pending.as_ref().ok_or(SessionError::NothingToChoose)?;
        let reading = set
            .readings
            .get(n.wrapping_sub(1))
            .cloned()
            .ok_or(SessionError::NoSuchReading(n))?;
        self.pending = None;
        self.reading(reading, true)
    }

    fn reading(&mut self, p: ParseResult, chosen: bool) -> Result<Outcome, SessionError> {
        self.pending = None;
        match p.mood() {
            Mood::Declarative => self.assert_reading(p, chosen),
            _ => self.query_reading(p).map(Outcome::Answered),
        }
    }

    fn assert_reading(&mut self, p: ParseResult, chosen: bool) -> Result<Outcome, SessionError> {
        let resolved = resolve(&self.context, &p)?;
        let (simplified, subst) = resolved.increment.simplify_with_substitution();
        let t = translate_assertion(&simplified, &self.known, self.kb.counters)?;
        let text = p.text();
        let report = self.kb.assimilate(&t, &text, p.sentence);
        let skolemized: BTreeSet<RefId> = p
            .nps
            .iter()
            .map(|n| n.referent)
            .filter(|r| t.skolemized.contains(subst.get(r).unwrap_or(r)))
            .collect();
        let feedback = feedback_sentence(&p, &resolved.report, &skolemized, chosen);
        let assertion = Assertion {
            text,
            feedback,
            drs: resolved.increment.clone(),
            simplified,
            resolution: resolved.report,
            translation: t.clone(),
            report,
        };
        if !assertion.report.accepted() {
            return Ok(Outcome::Rejected(assertion));
        }
        self.context = resolved.context;
        self.next_ref = p.next_ref;
        self.sentence += 1;
        self.known = t.bindings.clone();
        for (from, to) in &subst {
            if let Some(c) = self.known.get(to).cloned() {
                self.known.insert(*from, c);
            }
        }
        let renaming = &assertion.report.renaming;
        if !renaming.is_empty() {
            for v in self.known.values_mut() {
                if let Term::Const(Constant::Id(n)) = v {
                    if let Some(m) = renaming.get(n) {
                        *n = *m;
                    }
                }
            }
        }
        Ok(Outcome::Asserted(assertion))
    }

    fn query_reading(&mut self, p: ParseResult) -> Result<QueryOutcome, SessionError> {
        let resolved = resolve(&self.context, &p)?;
        if let Some(r) = resolved.report.entries.iter().find(|r| r.kind == ResolutionKind::NewName) {
            return Err(SessionError::UnknownName {
                name: r.anaphor_description.clone(),
                sentence: p.sentence,
            });
        }
        let (simplified, subst) = resolved.increment.simplify_with_substitution();
        let wh: Vec<(RefId, String)> = p
            .wh
            .iter()
            .map(|w| (*subst.get(&w.referent).unwrap_or(&w.referent), w.word.clone()))
            .collect();
        let q = translate_query(&simplified, &self.known, &wh)?;
        let mut solver = Solver::new(vec![self.kb.clauses(), &q.aux], self.depth);
        let answer = solver.solve(&q.goals)?;
        let goals = q.goals.iter().map(|g| g.to_string()).collect();
        let response = match (&answer, p.mood(), q.wh.first()) {
            (Answer::DepthExceeded, _, _) => format!("unknown: the search depth of {} was exceeded", self.depth),
            (Answer::No, _, _) => "no".to_string(),
            (Answer::Yes(_), Mood::WhQuery, Some((var, _, _))) => {
                let Answer::Yes(bs) = &answer else { unreachable!() };
                let gender = &p.wh[0].gender;
                let mut values: Vec<Term> = Vec::new();
                for b in bs {
                    if let Some(t) = b.get(var) {
                        if !values.contains(t) && self.gender_fits(t, gender) {
                            values.push(t.clone());
                        }
                    }
                }
                if values.is_empty() {
                    "no".to_string()
                } else {
                    let d = Describer {
                        clauses: self.kb.clauses(),
                        lexicon: &self.lexicon,
                    };
                    answer_sentence(&p, &values, &d)
                }
            }
            (Answer::Yes(_), _, _) => "yes".to_string(),
        };
        Ok(QueryOutcome {
            text: p.text(),
            drs: p.drs.clone(),
            goals,
            answer,
            response,
        })
    }

    /// Whether the name of `t`, if it has one, allows `gender`. Nouns are
    /// not consulted: "who" may ask for a named machine.
    fn gender_fits(&self, t: &Term, gender: &BTreeSet<String>) -> bool {
        self.kb.facts().all(|f| match f.args.as_slice() {
            [x, Term::Const(Constant::Atom(name))] if x == t && f.pred == "named" => self
                .lexicon
                .grapheme(name, Some(Category::ProperNoun))
                .and_then(LexEntry::gender)
                .is_none_or(|g| !g.is_disjoint(gender)),
            _ => true,
        })
    }

    pub fn add_lexicon_entry(&mut self, line: &str) -> Result<LexEntry, SessionError> {
        let entry = LexEntry::from_line(line).map_err(|message| LexiconError::Format { line: 1, message })?;
        self.lexicon.add_entry(entry.clone())?;
        Ok(entry)
    }

    pub fn paraphrase(&self) -> Vec<String> {
        let p = paraphrase_kb(self.kb.clauses(), &self.schemata, &self.lexicon);
        let mut out = p.sentences;
        out.extend(p.remainder.iter().map(|c| c.to_string()));
        out.extend(self.kb.denials().map(|d| d.to_string()));
        out
    }

    pub fn save_kb(&self, path: &Path) -> Result<(), SessionError> {
        Ok(self.kb.save(path)?)
    }

    /// Replaces the knowledge base and rebuilds a discourse from it, so that
    /// names and definite descriptions can refer to what it mentions.
    pub fn load_kb(&mut self, path: &Path) -> Result<(), SessionError> {
        let kb = KnowledgeBase::load(path)?;
        self.set_kb(kb);
        Ok(())
    }

    pub fn set_kb(&mut self, kb: KnowledgeBase) {
        let mut context = Drs::new();
        let mut known = BTreeMap::new();
        let mut next = 1;
        let constants: BTreeSet<u32> = kb.clauses().iter().filter(|c| c.is_fact()).flat_map(|c| c.symbols().0).collect();
        for c in constants {
            let id = RefId(next);
            next += 1;
            let term = Term::id(c);
            let facts: Vec<&Clause> = kb
                .clauses()
                .iter()
                .filter(|cl| cl.is_fact() && cl.head.args.first() == Some(&term))
                .collect();
            let name = facts.iter().find_map(|f| match (f.head.pred.as_str(), f.head.args.get(1)) {
                ("named", Some(Term::Const(Constant::Atom(n)))) => Some(n.clone()),
                _ => None,
            });
            let mut gender: BTreeSet<String> = ["m", "f", "n"].iter().map(|s| s.to_string()).collect();
            let desc = match &name {
                Some(n) => {
                    if let Some(g) = self.lexicon.grapheme(n, Some(Category::ProperNoun)).and_then(LexEntry::gender) {
                        gender = g;
                    }
                    crate::paraphrase::grapheme(&self.lexicon, n, Some(Category::ProperNoun))
                }
                None => facts
                    .iter()
                    .find(|f| f.head.args.len() == 1 && self.lexicon.grapheme(&f.head.pred, Some(Category::Noun)).is_some())
                    .map(|f| crate::paraphrase::grapheme(&self.lexicon, &f.head.pred, Some(Category::Noun)))
                    .unwrap_or_else(|| format!("individual {c}")),
            };
            let mut r = Referent::new(id, 0, desc);
            r.origin.proper = name.is_some();
            context.referents.push(r);
            let mut conds = Vec::new();
            for f in &facts {
                match f.head.args.as_slice() {
                    [_] => {
                        if let Some(g) = self.lexicon.grapheme(&f.head.pred, Some(Category::Noun)).and_then(LexEntry::gender) {
                            gender = gender.intersection(&g).cloned().collect();
                        }
                        conds.push(Condition::atomic(f.head.pred.clone(), vec![Arg::Ref(id)]));
                    }
                    [_, Term::Const(Constant::Atom(n))] if f.head.pred == "named" => {
                        conds.push(Condition::atomic("named", vec![Arg::Ref(id), Arg::Atom(n.clone())]));
                    }
                    _ => {}
                }
            }
            context.conditions.push(Condition::Gender(id, gender));
            context.conditions.push(Condition::Number(id, Number::Sg));
            context.conditions.extend(conds);
            known.insert(id, term);
        }
        self.sentence = kb.sources.iter().map(|s| s.sentence + 1).max().unwrap_or(0);
        self.kb = kb;
        self.context = context;
        self.known = known;
        self.next_ref = next;
        self.pending = None;
    }

    pub fn register_prompt(&mut self, pred: &str, arity: usize, prompt: &str) -> Result<(), SessionError> {
        Ok(self.executor.register_interface(pred, arity, prompt_read(prompt))?)
    }

    pub fn define_scenario(&mut self, name: &str, sentences: Vec<String>) {
        self.scenarios.insert(name.to_string(), sentences);
    }

    pub fn scenario_names(&self) -> Vec<&str> {
        self.scenarios.keys().map(String::as_str).collect()
    }

    /// The scenario's sentences translated against the current discourse,
    /// with referents it introduces shared as variables.
    pub fn scenario(&self, name: &str) -> Result<Vec<ScenarioSentence>, SessionError> {
        let texts = self
            .scenarios
            .get(name)
            .ok_or_else(|| SessionError::NoSuchScenario(name.to_string()))?;
        let mut context = self.context.clone();
        let mut next = self.next_ref;
        let mut scope = self.known.clone();
        let mut out = Vec::new();
        let mut n = self.sentence;
        for text in texts {
            for toks in tokenize(text)? {
                let p = match parse_sentence(&toks, &self.lexicon, next, n) {
                    Ok(p) => p,
                    Err(ParseError::Ambiguous(set)) => set.readings[0].clone(),
                    Err(e) => return Err(e.into()),
                };
                if p.mood() != Mood::Declarative {
                    return Err(SessionError::ScenarioQuestion(p.text()));
                }
                let resolved = resolve(&context, &p)?;
                let (simplified, subst) = resolved.increment.simplify_with_substitution();
                let q = translate_query(&simplified, &scope, &[])?;
                scope = q.scope.clone();
                for (from, to) in &subst {
                    if let Some(t) = scope.get(to).cloned() {
                        scope.insert(*from, t);
                    }
                }
                let mut events = Vec::new();
                for e in p.events.iter().filter(|e| e.top_level) {
                    let args: Vec<Arg> = e
                        .args
                        .iter()
                        .map(|a| match a {
                            Arg::Ref(r) => Arg::Ref(*subst.get(r).unwrap_or(r)),
                            other => other.clone(),
                        })
                        .collect();
                    let mut core = literal(&e.pred, &args, &scope)?;
                    core.negated = e.negated;
                    events.push(EventSpec {
                        core,
                        kind: e.kind,
                        progressive: e.progressive,
                        slot: e.slot,
                    });
                }
                out.push(ScenarioSentence {
                    sentence: n,
                    text: p.text(),
                    events,
                    goals: q.goals,
                    aux: q.aux,
                });
                context = resolved.context;
                next = p.next_ref;
                n += 1;
            }
        }
        Ok(out)
    }

    pub fn timeline(&self, name: &str) -> Result<(Timeline, Vec<crate::executor::Eventuality>), SessionError> {
        Ok(build_timeline(&self.scenario(name)?))
    }

    /// Runs a scenario. With `keep`, facts the user supplied are added to
    /// the knowledge base afterwards.
    pub fn run_scenario(&mut self, name: &str, io: &mut dyn ExecIo, keep: bool) -> Result<ExecutionTrace, SessionError> {
        let sentences = self.scenario(name)?;
        let (timeline, evs) = build_timeline(&sentences);
        let aux: Vec<Clause> = sentences.iter().flat_map(|s| s.aux.iter().cloned()).collect();
        self.executor.depth = self.depth;
        let trace = self.executor.run(self.kb.clauses(), &aux, &timeline, &evs, io)?;
        if keep && !trace.session_facts.is_empty() {
            let t = Translation {
                clauses: trace.session_facts.clone(),
                counters: self.kb.counters,
                ..Translation::default()
            };
            self.kb.assimilate(&t, &format!("facts from running {name}"), self.sentence);
        }
        Ok(trace)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::executor::ScriptedIo;

    fn ok(s: &mut Session, text: &str) -> Outcome {
        s.process_one(text).unwrap()
    }

    #[test]
    fn atm_dialog() {
        let mut s = Session::default();
        assert_eq!(ok(&mut s, "SimpleMat is a simple money dispenser.").message(), "SimpleMat is a simple money dispenser.");
        assert_eq!(ok(&mut s, "It has a user interface.").message(), "[SimpleMat] has a user interface.");
        assert_eq!(ok(&mut s, "Is SimpleMat a money dispenser?").message(), "yes");
        assert_eq!(ok(&mut s, "Does SimpleMat have a simple user interface?").message(), "no");
        assert_eq!(ok(&mut s, "Who is a money dispenser?").message(), "[SimpleMat] is a money dispenser.");
        assert_eq!(ok(&mut s, "Every customer has a card.").message(), "Every customer has [an individual] card.");
        assert_eq!(ok(&mut s, "What does SimpleMat have?").message(), "SimpleMat has [the user interface].");
    }

    #[test]
    fn named_answers_and_gender() {
        let mut s = Session::default();
        ok(&mut s, "John is a customer.");
        ok(&mut s, "Mary is a customer.");
        assert_eq!(ok(&mut s, "Who is a customer?").message(), "[John, Mary] is a customer.");
        ok(&mut s, "SimpleMat is a money dispenser.");
        assert_eq!(ok(&mut s, "What is a money dispenser?").message(), "[SimpleMat] is a money dispenser.");
    }

    #[test]
    fn rejection_keeps_state() {
        let mut s = Session::default();
        ok(&mut s, "SimpleMat is not a bank.");
        let before = s.kb.clone();
        let o = ok(&mut s, "SimpleMat is a bank.");
        assert!(o.is_rejection(), "{o:?}");
        assert!(o.message().starts_with("rejected: bank(1) contradicts :- bank(1)."));
        assert_eq!(s.kb, before);
    }

    #[test]
    fn unknown_name_in_question() {
        let mut s = Session::default();
        assert!(matches!(
            s.process_one("Is John a customer?"),
            Err(SessionError::UnknownName { .. })
        ));
    }

    #[test]
    fn ambiguity_then_choice() {
        let mut s = Session::default();
        ok(&mut s, "SimpleMat is a money dispenser.");
        let o = ok(&mut s, "SimpleMat serves a customer who has a card and a code.");
        let Outcome::Ambiguous(set) = &o else { panic!("{o:?}") };
        assert_eq!(set.readings.len(), 2);
        let chosen = s.choose(1).unwrap();
        assert_eq!(chosen.message(), "SimpleMat serves [a customer who has [[a card] and [a code]]].");
        assert!(matches!(s.choose(1), Err(SessionError::NothingToChoose)));
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("atm.kb");
        let mut s = Session::default();
        ok(&mut s, "SimpleMat is a simple money dispenser.");
        ok(&mut s, "It has a user interface.");
        s.save_kb(&path).unwrap();
        let mut t = Session::default();
        t.load_kb(&path).unwrap();
        assert_eq!(t.kb, s.kb);
        assert_eq!(ok(&mut t, "Is SimpleMat a money dispenser?").message(), "yes");
        assert_eq!(ok(&mut t, "It is simple.").message(), "[the user interface] is simple.");
        assert_eq!(t.kb.list(Some("simple")).len(), 2);
        assert_eq!(ok(&mut t, "Is the user interface simple?").message(), "yes");
    }

    #[test]
    fn scenario_run() {
        let mut s = Session::default();
        for l in ["SimpleMat is a simple money dispenser.", "Every customer has a card."] {
            ok(&mut s, l);
        }
        s.define_scenario(
            "atm",
            vec!["The customer enters the card.".into(), "SimpleMat checks the card.".into()],
        );
        s.register_prompt("enter", 2, "Enter your card").unwrap();
        let (t, _) = s.timeline("atm").unwrap();
        assert!(t.precedes("T1", "T2"));
        let mut io = ScriptedIo::new(["7", "ok", "yes"]);
        let trace = s.run_scenario("atm", &mut io, false).unwrap();
        assert!(trace.position("E1").unwrap() < trace.position("E2").unwrap());
        assert_eq!(io.transcript.iter().filter(|l| *l == "Enter your card").count(), 1);
        let kb_before = s.kb.len();
        let mut io = ScriptedIo::new(["7", "ok", "yes"]);
        s.run_scenario("atm", &mut io, true).unwrap();
        assert_eq!(s.kb.len(), kb_before + 2);
    }
}
