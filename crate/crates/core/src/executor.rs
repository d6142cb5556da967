//! Running a scenario against the specification.
//!
//! A scenario is a short narrative ("The customer enters the card. SimpleMat
//! checks the card."). Its verbs become eventualities placed on a timeline:
//! events follow one another in text order, progressive states overlap the
//! event before them, and plain states are unordered. Running walks the
//! events in order, proving each one against the knowledge base, through a
//! registered interface, or by asking the user.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::inference::{Answer, SolveError, Solver};
use crate::lexicon::VerbKind;
use crate::logic::{resolve, Bindings, Clause, Literal, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EventualityKind {
    Event,
    State,
}

/// A verb of a scenario sentence, already translated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventSpec {
    pub core: Literal,
    pub kind: VerbKind,
    pub progressive: bool,
    /// Position within an and-then sequence.
    pub slot: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScenarioSentence {
    pub sentence: usize,
    pub text: String,
    pub events: Vec<EventSpec>,
    /// Every goal of the sentence, event cores included.
    pub goals: Vec<Literal>,
    /// Helper clauses the goals need.
    pub aux: Vec<Clause>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eventuality {
    pub id: String,
    pub kind: EventualityKind,
    pub core: Literal,
    pub time: String,
    /// Goals of the sentence other than its verbs, proven first.
    pub preconditions: Vec<Literal>,
    pub sentence: usize,
    pub slot: usize,
}

impl fmt::Display for Eventuality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut args = vec![self.id.clone()];
        args.extend(self.core.args.iter().map(|a| a.to_string()));
        let neg = if self.core.negated { "\\+ " } else { "" };
        write!(f, "{neg}{}({})", self.core.pred, args.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum TimeFact {
    /// The event culminates at the time.
    Cul(String, String),
    /// The time lies before the speech time N.
    At(String),
    Precedes(String, String),
    Overlaps(String, String),
}

impl fmt::Display for TimeFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeFact::Cul(e, t) => write!(f, "cul({e},{t})"),
            TimeFact::At(t) => write!(f, "at({t},N)"),
            TimeFact::Precedes(a, b) => write!(f, "precedes({a},{b})"),
            TimeFact::Overlaps(a, b) => write!(f, "overlaps({a},{b})"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Timeline {
    pub facts: Vec<TimeFact>,
}

impl Timeline {
    pub fn precedes(&self, a: &str, b: &str) -> bool {
        self.facts
            .iter()
            .any(|f| matches!(f, TimeFact::Precedes(x, y) if x == a && y == b))
    }

    pub fn overlaps(&self, a: &str, b: &str) -> bool {
        self.facts.iter().any(|f| match f {
            TimeFact::Overlaps(x, y) => (x == a && y == b) || (x == b && y == a),
            _ => false,
        })
    }

    /// Precedence and overlap facts only.
    pub fn ordering(&self) -> impl Iterator<Item = &TimeFact> {
        self.facts
            .iter()
            .filter(|f| matches!(f, TimeFact::Precedes(..) | TimeFact::Overlaps(..)))
    }
}

impl fmt::Display for Timeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let facts: Vec<String> = self.facts.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", facts.join(", "))
    }
}

/// Places the verbs of a scenario on a timeline.
pub fn build_timeline(sentences: &[ScenarioSentence]) -> (Timeline, Vec<Eventuality>) {
    let mut timeline = Timeline::default();
    let mut evs: Vec<Eventuality> = Vec::new();
    let (mut n_events, mut n_states) = (0, 0);
    let mut last_event_time: Option<String> = None;
    for s in sentences {
        let mut specs: Vec<&EventSpec> = s.events.iter().collect();
        specs.sort_by_key(|e| e.slot);
        let cores: Vec<&Literal> = specs.iter().map(|e| &e.core).collect();
        let mut pre: Vec<Literal> = s.goals.iter().filter(|g| !cores.contains(g)).cloned().collect();
        let mut items: Vec<(EventualityKind, Literal, usize, bool)> = specs
            .iter()
            .map(|e| {
                let kind = if e.kind == VerbKind::Event && !e.progressive && !e.core.negated {
                    EventualityKind::Event
                } else {
                    EventualityKind::State
                };
                (kind, e.core.clone(), e.slot, e.progressive)
            })
            .collect();
        if items.is_empty() {
            // a copula sentence describes a state
            match pre.pop() {
                Some(core) => items.push((EventualityKind::State, core, 0, false)),
                None => continue,
            }
        }
        for (i, (kind, core, slot, progressive)) in items.into_iter().enumerate() {
            let ordinal = evs.len() + 1;
            let time = format!("T{ordinal}");
            let id = match kind {
                EventualityKind::Event => {
                    n_events += 1;
                    format!("E{n_events}")
                }
                EventualityKind::State => {
                    n_states += 1;
                    format!("S{n_states}")
                }
            };
            match kind {
                EventualityKind::Event => {
                    timeline.facts.push(TimeFact::Cul(id.clone(), time.clone()));
                    timeline.facts.push(TimeFact::At(time.clone()));
                    if let Some(prev) = &last_event_time {
                        timeline.facts.push(TimeFact::Precedes(prev.clone(), time.clone()));
                    }
                    last_event_time = Some(time.clone());
                }
                EventualityKind::State => {
                    if progressive {
                        if let Some(prev) = &last_event_time {
                            timeline.facts.push(TimeFact::Overlaps(prev.clone(), time.clone()));
                        }
                    }
                }
            }
            evs.push(Eventuality {
                id,
                kind,
                core,
                time,
                preconditions: if i == 0 { std::mem::take(&mut pre) } else { Vec::new() },
                sentence: s.sentence,
                slot,
            });
        }
    }
    (timeline, evs)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("execution stuck at {event}: cannot establish {goal}")]
    ExecutionStuck { event: String, goal: String },
    #[error("the timeline orders {0} before itself")]
    CyclicTimeline(String),
    #[error("an interface for {pred}/{arity} is already registered")]
    DuplicateInterface { pred: String, arity: usize },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Where execution talks to the user.
pub trait ExecIo {
    fn say(&mut self, text: &str);
    /// Shows `prompt` and reads one reply; `None` at end of input.
    fn ask(&mut self, prompt: &str) -> Option<String>;
}

/// Replies from a list, one per question, with everything said kept.
#[derive(Debug, Clone, Default)]
pub struct ScriptedIo {
    pub replies: VecDeque<String>,
    pub transcript: Vec<String>,
}

impl ScriptedIo {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(replies: I) -> Self {
        ScriptedIo {
            replies: replies.into_iter().map(Into::into).collect(),
            transcript: Vec::new(),
        }
    }

    /// One reply per line.
    pub fn from_text(text: &str) -> Self {
        Self::new(text.lines().map(str::trim))
    }
}

impl ExecIo for ScriptedIo {
    fn say(&mut self, text: &str) {
        self.transcript.push(text.to_string());
    }

    fn ask(&mut self, prompt: &str) -> Option<String> {
        self.transcript.push(prompt.to_string());
        let reply = self.replies.pop_front();
        if let Some(r) = &reply {
            self.transcript.push(format!("> {r}"));
        }
        reply
    }
}

/// Standard input and output.
pub struct ConsoleIo;

impl ExecIo for ConsoleIo {
    fn say(&mut self, text: &str) {
        println!("{text}");
    }

    fn ask(&mut self, prompt: &str) -> Option<String> {
        print!("{prompt} ");
        std::io::stdout().flush().ok();
        let mut line = String::new();
        match std::io::stdin().lock().read_line(&mut line) {
            Ok(0) | Err(_) => None,
            Ok(_) => Some(line.trim().to_string()),
        }
    }
}

/// Values for the arguments a handler fills in, `None` where it leaves one.
pub type Handler = Box<dyn Fn(&[Term], &mut dyn ExecIo) -> Option<Vec<Option<Term>>> + Send + Sync>;

/// A reply typed by the user: digits name an individual, anything else is
/// an atom.
pub fn reply_term(reply: &str) -> Term {
    match reply.parse::<u32>() {
        Ok(n) => Term::id(n),
        Err(_) => Term::atom(reply),
    }
}

/// Shows `prompt`, reads a reply and binds it to the last argument if that
/// is still open.
pub fn prompt_read(prompt: impl Into<String>) -> Handler {
    let prompt = prompt.into();
    Box::new(move |args, io| {
        let reply = io.ask(&prompt)?;
        let mut out = vec![None; args.len()];
        let open = args.last().is_some_and(|a| !a.is_ground());
        if open && !reply.is_empty() {
            *out.last_mut().expect("non-empty") = Some(reply_term(&reply));
        }
        Some(out)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Via {
    KnowledgeBase,
    Interface,
    User,
}

impl fmt::Display for Via {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Via::KnowledgeBase => "kb",
            Via::Interface => "interface",
            Via::User => "user",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub eventuality: String,
    pub kind: EventualityKind,
    /// The goal as established, with bindings applied.
    pub goal: String,
    pub via: Via,
    pub io: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExecutionTrace {
    pub steps: Vec<TraceStep>,
    /// Facts the user supplied.
    pub session_facts: Vec<Clause>,
    pub bindings: BTreeMap<String, Term>,
}

impl ExecutionTrace {
    /// Position of the first step for an eventuality.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.steps.iter().position(|s| s.eventuality == id)
    }
}

impl fmt::Display for ExecutionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            write!(f, "{}. {} {} [{}]", i + 1, s.eventuality, s.goal, s.via)?;
            for line in &s.io {
                write!(f, "\n   {line}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The goal with its variables named X, Y, Z, X4, ... for the user.
fn for_display(goal: &Literal) -> String {
    let names = ["X", "Y", "Z"];
    let vars = goal.vars();
    goal.rename(&mut |v| {
        let i = vars.iter().position(|x| x == v).expect("collected");
        names.get(i).map_or_else(|| format!("X{}", i + 1), |n| n.to_string())
    })
    .to_string()
}

pub struct Executor {
    interfaces: BTreeMap<(String, usize), Handler>,
    pub depth: usize,
}

impl Default for Executor {
    fn default() -> Self {
        Executor::new(crate::inference::DEFAULT_DEPTH)
    }
}

struct Run<'a> {
    kb: &'a [Clause],
    aux: &'a [Clause],
    facts: Vec<Clause>,
    bindings: Bindings,
    steps: Vec<TraceStep>,
}

impl Executor {
    pub fn new(depth: usize) -> Self {
        Executor {
            interfaces: BTreeMap::new(),
            depth,
        }
    }

    pub fn register_interface(&mut self, pred: &str, arity: usize, handler: Handler) -> Result<(), ExecError> {
        let key = (pred.to_string(), arity);
        if self.interfaces.contains_key(&key) {
            return Err(ExecError::DuplicateInterface {
                pred: pred.into(),
                arity,
            });
        }
        self.interfaces.insert(key, handler);
        Ok(())
    }

    pub fn has_interface(&self, pred: &str, arity: usize) -> bool {
        self.interfaces.contains_key(&(pred.to_string(), arity))
    }

    /// Events in an order compatible with the timeline, text order otherwise.
    fn schedule(timeline: &Timeline, evs: &[Eventuality]) -> Result<Vec<usize>, ExecError> {
        let events: Vec<usize> = (0..evs.len()).filter(|&i| evs[i].kind == EventualityKind::Event).collect();
        let mut remaining = events.clone();
        let mut order = Vec::new();
        while !remaining.is_empty() {
            let next = remaining.iter().position(|&i| {
                !remaining
                    .iter()
                    .any(|&j| j != i && timeline.precedes(&evs[j].time, &evs[i].time))
            });
            match next {
                Some(p) => order.push(remaining.remove(p)),
                None => return Err(ExecError::CyclicTimeline(evs[remaining[0]].id.clone())),
            }
        }
        Ok(order)
    }

    pub fn run(
        &self,
        kb: &[Clause],
        aux: &[Clause],
        timeline: &Timeline,
        evs: &[Eventuality],
        io: &mut dyn ExecIo,
    ) -> Result<ExecutionTrace, ExecError> {
        let order = Self::schedule(timeline, evs)?;
        let mut run = Run {
            kb,
            aux,
            facts: Vec::new(),
            bindings: Bindings::new(),
            steps: Vec::new(),
        };
        let overlapping = |e: &Eventuality| {
            evs.iter()
                .enumerate()
                .filter(|(_, s)| s.kind == EventualityKind::State && timeline.overlaps(&e.time, &s.time))
                .map(|(i, _)| i)
                .collect::<Vec<_>>()
        };
        let anchored: Vec<usize> = order.iter().flat_map(|&i| overlapping(&evs[i])).collect();
        for (i, s) in evs.iter().enumerate() {
            if s.kind == EventualityKind::State && !anchored.contains(&i) {
                self.step(&mut run, s, io)?;
            }
        }
        for &i in &order {
            self.step(&mut run, &evs[i], io)?;
            for j in overlapping(&evs[i]) {
                self.step(&mut run, &evs[j], io)?;
            }
        }
        let bindings = run
            .bindings
            .keys()
            .map(|k| (k.clone(), resolve(&Term::var(k.clone()), &run.bindings)))
            .collect();
        Ok(ExecutionTrace {
            steps: run.steps,
            session_facts: run.facts,
            bindings,
        })
    }

    fn step(&self, run: &mut Run, e: &Eventuality, io: &mut dyn ExecIo) -> Result<(), ExecError> {
        for p in &e.preconditions {
            self.establish(run, e, p, false, io)?;
        }
        self.establish(run, e, &e.core, true, io)
    }

    fn solve_one(&self, run: &Run, goal: &Literal) -> Result<Option<Bindings>, ExecError> {
        let layers: Vec<&[Clause]> = vec![run.kb, run.aux, &run.facts];
        let mut solver = Solver::new(layers, self.depth);
        Ok(match solver.solve_limited(std::slice::from_ref(goal), 1)? {
            Answer::Yes(mut bs) => Some(bs.remove(0)),
            _ => None,
        })
    }

    fn establish(&self, run: &mut Run, e: &Eventuality, goal: &Literal, core: bool, io: &mut dyn ExecIo) -> Result<(), ExecError> {
        let goal = goal.resolve(&run.bindings);
        let mut said = Vec::new();
        let record = |run: &mut Run, goal: &Literal, via: Via, said: Vec<String>| {
            if core || via != Via::KnowledgeBase {
                run.steps.push(TraceStep {
                    eventuality: e.id.clone(),
                    kind: e.kind,
                    goal: goal.resolve(&run.bindings).to_string(),
                    via,
                    io: said,
                });
            }
        };

        if let Some(handler) = self.interfaces.get(&(goal.pred.clone(), goal.arity())).filter(|_| !goal.negated) {
            let mut tap = Tap { inner: io, said: &mut said };
            if let Some(out) = handler(&goal.args, &mut tap) {
                for (arg, value) in goal.args.iter().zip(out) {
                    if let (Term::Var(v), Some(val)) = (arg, value) {
                        run.bindings.insert(v.clone(), val);
                    }
                }
                record(run, &goal, Via::Interface, said);
                return Ok(());
            }
        }

        if let Some(b) = self.solve_one(run, &goal)? {
            for (k, v) in b {
                if let Term::Var(_) = &v {
                    continue;
                }
                run.bindings.insert(k, v);
            }
            record(run, &goal, Via::KnowledgeBase, said);
            return Ok(());
        }

        // nothing known: ask
        let stuck = || ExecError::ExecutionStuck {
            event: e.to_string(),
            goal: goal.to_string(),
        };
        if goal.negated {
            return Err(stuck());
        }
        let mut current = goal.clone();
        while !current.is_ground() {
            let prompt = format!("Is {} true? enter a value", for_display(&current));
            said.push(prompt.clone());
            let reply = io.ask(&prompt).filter(|r| !r.is_empty() && !r.eq_ignore_ascii_case("no"));
            let Some(reply) = reply else { return Err(stuck()) };
            said.push(format!("> {reply}"));
            let var = current.vars().remove(0);
            run.bindings.insert(var, reply_term(&reply));
            current = current.resolve(&run.bindings);
        }
        if current == goal {
            let prompt = format!("Is {current} true? (yes/no)");
            said.push(prompt.clone());
            let reply = io.ask(&prompt).unwrap_or_default();
            said.push(format!("> {reply}"));
            if !matches!(reply.to_lowercase().as_str(), "yes" | "y") {
                return Err(stuck());
            }
        }
        run.facts.push(Clause::fact(current.clone()));
        record(run, &current, Via::User, said);
        Ok(())
    }
}

/// Passes questions through while keeping a copy of the exchange.
struct Tap<'a, 'b> {
    inner: &'a mut dyn ExecIo,
    said: &'b mut Vec<String>,
}

impl ExecIo for Tap<'_, '_> {
    fn say(&mut self, text: &str) {
        self.said.push(text.to_string());
        self.inner.say(text);
    }

    fn ask(&mut self, prompt: &str) -> Option<String> {
        self.said.push(prompt.to_string());
        let r = self.inner.ask(prompt);
        if let Some(r) = &r {
            self.said.push(format!("> {r}"));
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_literal, parse_statement, Statement};

    fn lit(s: &str) -> Literal {
        parse_literal(s).unwrap()
    }

    fn sentence(n: usize, events: &[(&str, VerbKind, bool)], goals: &[&str]) -> ScenarioSentence {
        ScenarioSentence {
            sentence: n,
            text: String::new(),
            events: events
                .iter()
                .map(|(c, k, p)| EventSpec {
                    core: lit(c),
                    kind: *k,
                    progressive: *p,
                    slot: 0,
                })
                .collect(),
            goals: goals.iter().map(|g| lit(g)).collect(),
            aux: vec![],
        }
    }

    fn atm_scenario() -> Vec<ScenarioSentence> {
        vec![
            sentence(0, &[("enter(C,K)", VerbKind::Event, false)], &["customer(C)", "card(K)", "enter(C,K)"]),
            sentence(1, &[("check(1,K)", VerbKind::Event, false)], &["named(1,simplemat)", "card(K)", "check(1,K)"]),
        ]
    }

    fn kb() -> Vec<Clause> {
        ["named(1,simplemat).", "card([2,X1]) :- customer(X1).", "have(X1,[2,X1]) :- customer(X1)."]
            .iter()
            .map(|s| match parse_statement(s).unwrap() {
                Statement::Clause(c) => c,
                _ => panic!(),
            })
            .collect()
    }

    #[test]
    fn events_in_text_order() {
        let (t, evs) = build_timeline(&atm_scenario());
        assert_eq!(
            t.to_string(),
            "cul(E1,T1), at(T1,N), cul(E2,T2), at(T2,N), precedes(T1,T2)"
        );
        assert_eq!(evs[0].to_string(), "enter(E1,C,K)");
        assert_eq!(evs[1].preconditions, vec![lit("named(1,simplemat)"), lit("card(K)")]);
    }

    #[test]
    fn progressive_overlaps_and_states_float() {
        let (t, evs) = build_timeline(&[
            sentence(0, &[("enter(C,K)", VerbKind::Event, false)], &["enter(C,K)"]),
            sentence(1, &[("check(1,K)", VerbKind::Event, true)], &["check(1,K)"]),
        ]);
        assert_eq!(evs[1].id, "S1");
        assert!(t.overlaps("T2", "T1"));
        let (t, evs) = build_timeline(&[sentence(0, &[("have(C,D)", VerbKind::State, false)], &["have(C,D)"])]);
        assert_eq!(evs[0].kind, EventualityKind::State);
        assert_eq!(t.ordering().count(), 0);
        assert_eq!(build_timeline(&[]), (Timeline::default(), vec![]));
    }

    #[test]
    fn runs_with_interface_and_questions() {
        let (t, evs) = build_timeline(&atm_scenario());
        let mut ex = Executor::default();
        ex.register_interface("enter", 2, prompt_read("Enter your card")).unwrap();
        let mut io = ScriptedIo::new(["7", "inserted", "yes"]);
        let trace = ex.run(&kb(), &[], &t, &evs, &mut io).unwrap();
        assert!(trace.position("E1").unwrap() < trace.position("E2").unwrap());
        assert_eq!(io.transcript.iter().filter(|l| *l == "Enter your card").count(), 1);
        assert_eq!(io.transcript[0], "Is customer(X) true? enter a value");
        assert_eq!(trace.bindings["K"], Term::Skolem(2, vec![Term::id(7)]));
        assert_eq!(trace.session_facts.len(), 2);
        let steps: Vec<String> = trace.steps.iter().map(|s| format!("{} {} {}", s.eventuality, s.goal, s.via)).collect();
        assert_eq!(
            steps,
            ["E1 customer(7) user", "E1 enter(7,[2,7]) interface", "E2 check(1,[2,7]) user"]
        );
    }

    #[test]
    fn known_customer_needs_no_prompt() {
        let mut kb = kb();
        kb.push(Clause::fact(lit("customer(7)")));
        let evs = vec![Eventuality {
            id: "S1".into(),
            kind: EventualityKind::State,
            core: lit("card(K)"),
            time: "T1".into(),
            preconditions: vec![],
            sentence: 0,
            slot: 0,
        }];
        let mut io = ScriptedIo::default();
        let trace = Executor::default().run(&kb, &[], &Timeline::default(), &evs, &mut io).unwrap();
        assert_eq!(trace.bindings["K"].to_string(), "[2,7]");
        assert!(io.transcript.is_empty());
    }

    #[test]
    fn errors() {
        let mut ex = Executor::default();
        ex.register_interface("enter", 2, prompt_read("x")).unwrap();
        assert!(matches!(
            ex.register_interface("enter", 2, prompt_read("y")),
            Err(ExecError::DuplicateInterface { .. })
        ));
        let (t, evs) = build_timeline(&atm_scenario());
        let mut io = ScriptedIo::new(["no"]);
        assert!(matches!(
            Executor::default().run(&kb(), &[], &t, &evs, &mut io),
            Err(ExecError::ExecutionStuck { .. })
        ));
        let mut cyclic = t.clone();
        cyclic.facts.push(TimeFact::Precedes("T2".into(), "T1".into()));
        assert!(matches!(
            Executor::default().run(&kb(), &[], &cyclic, &evs, &mut ScriptedIo::default()),
            Err(ExecError::CyclicTimeline(_))
        ));
        let empty = Executor::default().run(&kb(), &[], &Timeline::default(), &[], &mut ScriptedIo::default());
        assert_eq!(empty.unwrap(), ExecutionTrace::default());
    }

    #[test]
    fn replay_is_deterministic() {
        let (t, evs) = build_timeline(&atm_scenario());
        let mut ex = Executor::default();
        ex.register_interface("enter", 2, prompt_read("Enter your card")).unwrap();
        let a = ex.run(&kb(), &[], &t, &evs, &mut ScriptedIo::new(["7", "ok", "yes"])).unwrap();
        let b = ex.run(&kb(), &[], &t, &evs, &mut ScriptedIo::new(["7", "ok", "yes"])).unwrap();
        assert_eq!(a, b);
    }
}
