//! The clause store.
//!
//! Sentences are added whole: a clause that merely restates stored knowledge
//! is skipped, and a sentence whose facts contradict a stored denial (or the
//! reverse) is rejected without changing anything.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::logic::{parse_statement, Bindings, Clause, Constant, Denial, Literal, Statement, Term};
use crate::translator::{Counters, Translation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Source {
    pub sentence: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Clause(Clause),
    Denial(Denial),
}

impl Item {
    fn is_variant_of(&self, other: &Item) -> bool {
        match (self, other) {
            (Item::Clause(a), Item::Clause(b)) => a.is_variant_of(b),
            (Item::Denial(a), Item::Denial(b)) => a.is_variant_of(b),
            _ => false,
        }
    }

    fn map_symbols(&self, consts: &impl Fn(u32) -> u32, skolems: &impl Fn(u32) -> u32) -> Item {
        match self {
            Item::Clause(c) => Item::Clause(c.map_symbols(consts, skolems)),
            Item::Denial(d) => Item::Denial(d.map_symbols(consts, skolems)),
        }
    }

    fn symbols(&self) -> (BTreeSet<u32>, BTreeSet<u32>) {
        match self {
            Item::Clause(c) => c.symbols(),
            Item::Denial(d) => d.symbols(),
        }
    }

    fn mentions(&self, pred: &str) -> bool {
        match self {
            Item::Clause(c) => c.head.pred == pred,
            Item::Denial(d) => d.body.iter().any(|l| l.pred == pred),
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Clause(c) => c.fmt(f),
            Item::Denial(d) => d.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub item: Item,
    /// Index into [`KnowledgeBase::sources`].
    pub source: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    /// The new fact or denial.
    pub new: String,
    /// What it contradicts, and where that came from.
    pub stored: String,
    pub stored_source: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Accepted,
    Rejected(Conflict),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssimilationReport {
    pub status: Status,
    pub added: Vec<String>,
    /// Skipped clauses with the stored clause that already says it.
    pub redundant: Vec<(String, String)>,
    /// New constants identified with existing ones by the redundancy check.
    pub renaming: BTreeMap<u32, u32>,
}

impl AssimilationReport {
    pub fn accepted(&self) -> bool {
        self.status == Status::Accepted
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("knowledge base file, line {line}: {message}")]
pub struct KbFormatError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum KbError {
    #[error(transparent)]
    Format(#[from] KbFormatError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    pub entries: Vec<Entry>,
    pub sources: Vec<Source>,
    pub counters: Counters,
    /// Stored clauses in order, kept in step with `entries` for the solver.
    clauses: Vec<Clause>,
}

/// Matches `pattern` against `fact`, both of which may hold variables only
/// in `pattern`.
fn match_literal(pattern: &Literal, fact: &Literal, b: &Bindings) -> Option<Bindings> {
    let mut b = b.clone();
    crate::logic::unify_literals(&pattern.positive(), fact, &mut b).then_some(b)
}

/// A way of making every literal of `body` true in `facts`.
fn satisfied(body: &[Literal], facts: &[&Literal], b: &Bindings) -> Option<Bindings> {
    let Some((first, rest)) = body.split_first() else {
        return Some(b.clone());
    };
    if first.negated {
        let blocked = facts.iter().any(|f| match_literal(first, f, b).is_some());
        return if blocked { None } else { satisfied(rest, facts, b) };
    }
    facts
        .iter()
        .filter_map(|f| match_literal(first, f, b))
        .find_map(|b2| satisfied(rest, facts, &b2))
}

/// Extends `sigma` so that `new` maps onto `old`; symbols outside the
/// fresh sets must agree exactly.
fn match_symbols(
    new: &Item,
    old: &Item,
    fresh: &(BTreeSet<u32>, BTreeSet<u32>),
    sigma: &(BTreeMap<u32, u32>, BTreeMap<u32, u32>),
) -> Option<(BTreeMap<u32, u32>, BTreeMap<u32, u32>)> {
    fn terms(a: &Term, b: &Term, fresh: &(BTreeSet<u32>, BTreeSet<u32>), s: &mut (BTreeMap<u32, u32>, BTreeMap<u32, u32>)) -> bool {
        match (a, b) {
            (Term::Const(Constant::Id(x)), Term::Const(Constant::Id(y))) if fresh.0.contains(x) => {
                *s.0.entry(*x).or_insert(*y) == *y
            }
            (Term::Skolem(x, xs), Term::Skolem(y, ys)) => {
                let head = if fresh.1.contains(x) { *s.1.entry(*x).or_insert(*y) == *y } else { x == y };
                head && xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| terms(a, b, fresh, s))
            }
            _ => a == b,
        }
    }
    fn lits(a: &[Literal], b: &[Literal], fresh: &(BTreeSet<u32>, BTreeSet<u32>), s: &mut (BTreeMap<u32, u32>, BTreeMap<u32, u32>)) -> bool {
        a.len() == b.len()
            && a.iter().zip(b).all(|(x, y)| {
                x.pred == y.pred
                    && x.negated == y.negated
                    && x.args.len() == y.args.len()
                    && x.args.iter().zip(&y.args).all(|(p, q)| terms(p, q, fresh, s))
            })
    }
    let mut s = sigma.clone();
    let ok = match (new, old) {
        (Item::Clause(a), Item::Clause(b)) => {
            lits(std::slice::from_ref(&a.head), std::slice::from_ref(&b.head), fresh, &mut s)
                && lits(&a.body, &b.body, fresh, &mut s)
        }
        (Item::Denial(a), Item::Denial(b)) => lits(&a.body, &b.body, fresh, &mut s),
        _ => false,
    };
    ok.then_some(s)
}

type Sigma = (BTreeMap<u32, u32>, BTreeMap<u32, u32>);

fn find_sigma(items: &[&Item], stored: &[&Item], fresh: &(BTreeSet<u32>, BTreeSet<u32>), sigma: Sigma) -> Option<Sigma> {
    let Some((first, rest)) = items.split_first() else {
        return Some(sigma);
    };
    stored
        .iter()
        .filter_map(|old| match_symbols(first, old, fresh, &sigma))
        .find_map(|s| find_sigma(rest, stored, fresh, s))
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn denials(&self) -> impl Iterator<Item = &Denial> {
        self.entries.iter().filter_map(|e| match &e.item {
            Item::Denial(d) => Some(d),
            _ => None,
        })
    }

    pub fn facts(&self) -> impl Iterator<Item = &Literal> {
        self.clauses.iter().filter(|c| c.is_fact()).map(|c| &c.head)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source_of(&self, entry: &Entry) -> &Source {
        &self.sources[entry.source]
    }

    fn push(&mut self, item: Item, source: usize) {
        if let Item::Clause(c) = &item {
            self.clauses.push(c.clone());
        }
        self.entries.push(Entry { item, source });
    }

    /// Adds the output of one translated sentence.
    pub fn assimilate(&mut self, t: &Translation, text: &str, sentence: usize) -> AssimilationReport {
        let mut report = AssimilationReport {
            status: Status::Accepted,
            added: Vec::new(),
            redundant: Vec::new(),
            renaming: BTreeMap::new(),
        };
        let mut items: Vec<Item> = t.clauses.iter().cloned().map(Item::Clause).collect();
        items.extend(t.denials.iter().cloned().map(Item::Denial));

        // Fresh individuals may just be ones already described.
        let fresh = (
            t.fresh_constants.iter().copied().collect::<BTreeSet<_>>(),
            t.fresh_skolems.iter().copied().collect::<BTreeSet<_>>(),
        );
        let (with_fresh, _): (Vec<&Item>, Vec<&Item>) = items.iter().partition(|i| {
            let (c, k) = i.symbols();
            !c.is_disjoint(&fresh.0) || !k.is_disjoint(&fresh.1)
        });
        if !with_fresh.is_empty() {
            let stored: Vec<&Item> = self.entries.iter().map(|e| &e.item).collect();
            if let Some((cs, ks)) = find_sigma(&with_fresh, &stored, &fresh, Default::default()) {
                items = items
                    .iter()
                    .map(|i| {
                        i.map_symbols(&|c| cs.get(&c).copied().unwrap_or(c), &|k| ks.get(&k).copied().unwrap_or(k))
                    })
                    .collect();
                report.renaming = cs;
            }
        }

        let mut kept: Vec<Item> = Vec::new();
        for item in items {
            let existing = self
                .entries
                .iter()
                .map(|e| &e.item)
                .chain(kept.iter())
                .find(|old| item.is_variant_of(old));
            match existing {
                Some(old) => report.redundant.push((item.to_string(), old.to_string())),
                None => kept.push(item),
            }
        }

        if let Some(conflict) = self.conflict(&kept) {
            report.status = Status::Rejected(conflict);
            report.redundant.clear();
            return report;
        }

        self.counters.constants = self.counters.constants.max(t.counters.constants);
        self.counters.skolems = self.counters.skolems.max(t.counters.skolems);
        if kept.is_empty() {
            return report;
        }
        let source = self.sources.len();
        self.sources.push(Source {
            sentence,
            text: text.to_string(),
        });
        for item in kept {
            report.added.push(item.to_string());
            self.push(item, source);
        }
        report
    }

    /// A denial, stored or new, whose whole body holds in the facts once
    /// `new` is added.
    fn conflict(&self, new: &[Item]) -> Option<Conflict> {
        let new_facts: Vec<&Literal> = new
            .iter()
            .filter_map(|i| match i {
                Item::Clause(c) if c.is_fact() => Some(&c.head),
                _ => None,
            })
            .collect();
        let facts: Vec<&Literal> = self.facts().chain(new_facts.iter().copied()).collect();
        let stored = self.entries.iter().map(|e| (&e.item, Some(e)));
        let fresh = new.iter().map(|i| (i, None));
        for (item, entry) in stored.chain(fresh) {
            let Item::Denial(d) = item else { continue };
            // a stored denial already held before, so only new facts can break it
            if entry.is_some() && new_facts.is_empty() {
                continue;
            }
            if let Some(b) = satisfied(&d.body, &facts, &Bindings::new()) {
                let witness: Vec<String> = d
                    .body
                    .iter()
                    .filter(|l| !l.negated)
                    .map(|l| l.resolve(&b).to_string())
                    .collect();
                return Some(match entry {
                    Some(e) => Conflict {
                        new: witness.join(", "),
                        stored: d.to_string(),
                        stored_source: Some(self.source_of(e).text.clone()),
                    },
                    None => {
                        let source = self
                            .entries
                            .iter()
                            .find(|e| matches!(&e.item, Item::Clause(c) if c.is_fact() && witness.contains(&c.head.to_string())));
                        Conflict {
                            new: d.to_string(),
                            stored: witness.join(", "),
                            stored_source: source.map(|e| self.source_of(e).text.clone()),
                        }
                    }
                });
            }
        }
        None
    }

    /// Rendered entries with their source sentence, optionally only those
    /// about one predicate.
    pub fn list(&self, pred: Option<&str>) -> Vec<(String, &Source)> {
        self.entries
            .iter()
            .filter(|e| pred.is_none_or(|p| e.item.mentions(p)))
            .map(|e| (e.item.to_string(), self.source_of(e)))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "% counters: const={} skolem={}\n",
            self.counters.constants, self.counters.skolems
        );
        let mut current = None;
        for e in &self.entries {
            if current != Some(e.source) {
                let s = &self.sources[e.source];
                out.push_str(&format!("% source {}: {}\n", s.sentence, s.text));
                current = Some(e.source);
            }
            out.push_str(&e.item.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, KbFormatError> {
        let err = |line: usize, message: String| KbFormatError { line, message };
        let mut kb = KnowledgeBase::new();
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let header = lines.next().filter(|(_, l)| !l.is_empty());
        let Some((n, header)) = header else {
            return Err(err(1, "missing counters header".into()));
        };
        let counters = header
            .strip_prefix("% counters:")
            .and_then(|rest| {
                let mut c = Counters::default();
                for part in rest.split_whitespace() {
                    let (k, v) = part.split_once('=')?;
                    let v: u32 = v.parse().ok()?;
                    match k {
                        "const" => c.constants = v,
                        "skolem" => c.skolems = v,
                        _ => return None,
                    }
                }
                Some(c)
            })
            .ok_or_else(|| err(n, format!("bad counters header \"{header}\"")))?;
        kb.counters = counters;
        let mut source = None;
        for (n, line) in lines {
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("% source") {
                let (idx, text) = rest
                    .split_once(':')
                    .ok_or_else(|| err(n, "bad source line".into()))?;
                let sentence = idx
                    .trim()
                    .parse()
                    .map_err(|_| err(n, format!("bad sentence number \"{}\"", idx.trim())))?;
                kb.sources.push(Source {
                    sentence,
                    text: text.trim().to_string(),
                });
                source = Some(kb.sources.len() - 1);
                continue;
            }
            if line.starts_with('%') {
                continue;
            }
            let src = source.ok_or_else(|| err(n, "clause before any source line".into()))?;
            let item = match parse_statement(line) {
                Ok(Statement::Clause(c)) => Item::Clause(c),
                Ok(Statement::Denial(d)) => Item::Denial(d),
                Err(e) => return Err(err(n, e.to_string())),
            };
            kb.push(item, src);
        }
        Ok(kb)
    }

    pub fn save(&self, path: &Path) -> Result<(), KbError> {
        fs::write(path, self.to_text()).map_err(|source| KbError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, KbError> {
        let text = fs::read_to_string(path).map_err(|source| KbError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Self::from_text(&text)?)
    }
}
