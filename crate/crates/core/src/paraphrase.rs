//! Sentences from clauses, and the bracketed echoes shown after each input.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::discourse::{ResolutionKind, ResolutionReport};
use crate::drs::RefId;
use crate::lexicon::{third_singular, Category, Lexicon};
use crate::logic::{Clause, Constant, Literal, Term};
use crate::parser::{Det, ParseResult};

const BUILTIN: &str = include_str!("../data/schemata.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
enum PatTerm {
    Var(String),
    /// A relation name of the given word class, used as an argument.
    Slot(String),
    Skolem(String, Vec<PatTerm>),
    Const(Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum PatPred {
    Name(String),
    Slot(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct PatLiteral {
    pred: PatPred,
    args: Vec<PatTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct PatClause {
    head: PatLiteral,
    body: Vec<PatLiteral>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParaphraseSchema {
    pattern: Vec<PatClause>,
    template: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("schema file, line {line}: {message}")]
pub struct SchemaError {
    pub line: usize,
    pub message: String,
}

/// The word class a slot name stands for: `<noun2>` is a noun.
fn slot_category(slot: &str) -> Option<Category> {
    let base = slot.trim_end_matches(|c: char| c.is_ascii_digit());
    base.parse().ok().filter(|c: &Category| c.is_open())
}

fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = s[start..].trim();
    if !last.is_empty() {
        out.push(last);
    }
    out
}

fn parse_term(s: &str) -> Result<PatTerm, String> {
    if let Some(inner) = s.strip_prefix('<').and_then(|r| r.strip_suffix('>')) {
        slot_category(inner).ok_or_else(|| format!("unknown slot <{inner}>"))?;
        return Ok(PatTerm::Slot(inner.to_string()));
    }
    if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let parts = split_args(inner);
        let (k, rest) = parts.split_first().ok_or("empty Skolem pattern")?;
        let args = rest.iter().map(|a| parse_term(a)).collect::<Result<_, _>>()?;
        return Ok(PatTerm::Skolem(k.to_string(), args));
    }
    if s.starts_with(|c: char| c.is_ascii_uppercase()) {
        return Ok(PatTerm::Var(s.to_string()));
    }
    if let Ok(n) = s.parse::<u32>() {
        return Ok(PatTerm::Const(Term::id(n)));
    }
    Ok(PatTerm::Const(Term::atom(s)))
}

fn parse_pat_literal(s: &str) -> Result<PatLiteral, String> {
    let s = s.trim();
    let (name, args) = match s.find('(') {
        Some(i) if s.ends_with(')') => (&s[..i], split_args(&s[i + 1..s.len() - 1])),
        Some(_) => return Err(format!("unbalanced \"{s}\"")),
        None => (s, Vec::new()),
    };
    let pred = match name.strip_prefix('<').and_then(|r| r.strip_suffix('>')) {
        Some(slot) => {
            slot_category(slot).ok_or_else(|| format!("unknown slot <{slot}>"))?;
            PatPred::Slot(slot.to_string())
        }
        None => PatPred::Name(name.to_string()),
    };
    let args = args.iter().map(|a| parse_term(a)).collect::<Result<_, _>>()?;
    Ok(PatLiteral { pred, args })
}

fn parse_pat_clause(s: &str) -> Result<PatClause, String> {
    let (head, body) = match s.split_once(":-") {
        Some((h, b)) => (h, split_args(b)),
        None => (s, Vec::new()),
    };
    Ok(PatClause {
        head: parse_pat_literal(head)?,
        body: body.iter().map(|l| parse_pat_literal(l)).collect::<Result<_, _>>()?,
    })
}

impl ParaphraseSchema {
    fn slots_and_vars(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        fn term(t: &PatTerm, slots: &mut BTreeSet<String>, vars: &mut BTreeSet<String>) {
            match t {
                PatTerm::Var(v) => {
                    vars.insert(v.clone());
                }
                PatTerm::Slot(s) => {
                    slots.insert(s.clone());
                }
                PatTerm::Skolem(k, args) => {
                    vars.insert(k.clone());
                    args.iter().for_each(|a| term(a, slots, vars));
                }
                PatTerm::Const(_) => {}
            }
        }
        let (mut slots, mut vars) = (BTreeSet::new(), BTreeSet::new());
        for c in &self.pattern {
            for l in std::iter::once(&c.head).chain(&c.body) {
                if let PatPred::Slot(s) = &l.pred {
                    slots.insert(s.clone());
                }
                l.args.iter().for_each(|a| term(a, &mut slots, &mut vars));
            }
        }
        (slots, vars)
    }

    /// Slots (`<noun>g`) and variables (`{X}`) the template refers to.
    fn template_refs(&self) -> (Vec<String>, Vec<String>) {
        let (mut slots, mut vars) = (Vec::new(), Vec::new());
        let t = &self.template;
        let mut i = 0;
        while i < t.len() {
            let rest = &t[i..];
            let (open, close) = match rest.chars().next() {
                Some('<') => ('<', '>'),
                Some('{') => ('{', '}'),
                Some(c) => {
                    i += c.len_utf8();
                    continue;
                }
                None => break,
            };
            match rest.find(close) {
                Some(end) => {
                    let name = rest[1..end].to_string();
                    if open == '<' {
                        slots.push(name);
                    } else {
                        vars.push(name);
                    }
                    i += end + 1;
                }
                None => i += 1,
            }
        }
        (slots, vars)
    }
}

/// Reads schema blocks. Every slot and variable used by a template must
/// appear in its pattern.
pub fn parse_schemata(text: &str) -> Result<Vec<ParaphraseSchema>, SchemaError> {
    let mut out = Vec::new();
    let mut pattern = Vec::new();
    let mut arrow = false;
    let mut start = 0;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |message: String| SchemaError { line: n + 1, message };
        if line.starts_with('%') {
            continue;
        }
        if line.is_empty() {
            if !pattern.is_empty() && !arrow {
                return Err(SchemaError {
                    line: start,
                    message: "pattern without `=>`".into(),
                });
            }
            continue;
        }
        if pattern.is_empty() {
            start = n + 1;
        }
        if line == "=>" {
            if pattern.is_empty() {
                return Err(err("`=>` without a pattern".into()));
            }
            arrow = true;
        } else if arrow {
            let schema = ParaphraseSchema {
                pattern: std::mem::take(&mut pattern),
                template: line.to_string(),
            };
            let (slots, vars) = schema.slots_and_vars();
            let (used_slots, used_vars) = schema.template_refs();
            if let Some(s) = used_slots.iter().find(|s| !slots.contains(*s)) {
                return Err(err(format!("<{s}> is not in the pattern")));
            }
            if let Some(v) = used_vars.iter().find(|v| !vars.contains(*v)) {
                return Err(err(format!("{{{v}}} is not in the pattern")));
            }
            out.push(schema);
            arrow = false;
        } else {
            pattern.push(parse_pat_clause(line).map_err(err)?);
        }
    }
    if !pattern.is_empty() {
        return Err(SchemaError {
            line: start,
            message: "unfinished schema".into(),
        });
    }
    Ok(out)
}

pub fn builtin_schemata() -> Vec<ParaphraseSchema> {
    parse_schemata(BUILTIN).expect("bundled schemata parse")
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Val {
    Term(Term),
    Index(u32),
    Pred(String),
}

type Env = BTreeMap<String, Val>;

fn bind(env: &mut Env, key: &str, v: Val) -> bool {
    match env.get(key) {
        Some(old) => *old == v,
        None => {
            env.insert(key.to_string(), v);
            true
        }
    }
}

struct Matcher<'a> {
    lexicon: &'a Lexicon,
}

impl Matcher<'_> {
    fn pred_fits(&self, pred: &str, slot: &str) -> bool {
        let cat = slot_category(slot).expect("checked when parsed");
        self.lexicon.grapheme(pred, Some(cat)).is_some()
    }

    fn term(&self, p: &PatTerm, t: &Term, env: &mut Env) -> bool {
        match (p, t) {
            (PatTerm::Var(v), _) => bind(env, v, Val::Term(t.clone())),
            (PatTerm::Slot(s), Term::Const(Constant::Atom(a))) => {
                self.pred_fits(a, s) && bind(env, s, Val::Pred(a.clone()))
            }
            (PatTerm::Skolem(k, ps), Term::Skolem(i, ts)) => {
                ps.len() == ts.len()
                    && bind(env, k, Val::Index(*i))
                    && ps.iter().zip(ts).all(|(p, t)| self.term(p, t, env))
            }
            (PatTerm::Const(c), _) => c == t,
            _ => false,
        }
    }

    fn literal(&self, p: &PatLiteral, l: &Literal, env: &mut Env) -> bool {
        if l.negated || p.args.len() != l.args.len() {
            return false;
        }
        let pred_ok = match &p.pred {
            PatPred::Name(n) => *n == l.pred,
            PatPred::Slot(s) => self.pred_fits(&l.pred, s) && bind(env, s, Val::Pred(l.pred.clone())),
        };
        pred_ok && p.args.iter().zip(&l.args).all(|(p, t)| self.term(p, t, env))
    }

    fn clause(&self, p: &PatClause, c: &Clause, env: &Env) -> Option<Env> {
        if p.body.len() != c.body.len() {
            return None;
        }
        let mut env = env.clone();
        let ok = self.literal(&p.head, &c.head, &mut env)
            && p.body.iter().zip(&c.body).all(|(p, l)| self.literal(p, l, &mut env));
        ok.then_some(env)
    }

    /// Distinct free clauses matching each pattern clause in turn.
    fn all(&self, pats: &[PatClause], clauses: &[Clause], free: &[bool], env: Env, used: &mut Vec<usize>) -> Option<Env> {
        let Some((first, rest)) = pats.split_first() else {
            return Some(env);
        };
        for (i, c) in clauses.iter().enumerate() {
            if !free[i] || used.contains(&i) {
                continue;
            }
            if let Some(env2) = self.clause(first, c, &env) {
                used.push(i);
                if let Some(done) = self.all(rest, clauses, free, env2, used) {
                    return Some(done);
                }
                used.pop();
            }
        }
        None
    }
}

/// Vowel letters that are read with a consonant first.
const CONSONANT_SOUND: [&str; 6] = ["use", "uni", "eu", "one", "ubi", "uti"];

fn article_for(word: &str) -> &'static str {
    let lower = word.to_lowercase();
    if CONSONANT_SOUND.iter().any(|p| lower.starts_with(p)) {
        return "a";
    }
    if lower.starts_with(|c: char| "aeiou".contains(c)) {
        "an"
    } else {
        "a"
    }
}

/// Replaces each `a/an` with the article the following word takes.
fn fix_articles(text: &str) -> String {
    let words: Vec<&str> = text.split(' ').collect();
    words
        .iter()
        .enumerate()
        .map(|(i, w)| match *w {
            "a/an" => article_for(words.get(i + 1).copied().unwrap_or("")).to_string(),
            "A/an" | "A/An" => {
                let a = article_for(words.get(i + 1).copied().unwrap_or(""));
                let mut c = a.chars();
                c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
            }
            other => other.to_string(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Written form of a relation name, or the name itself.
pub fn grapheme(lexicon: &Lexicon, pred: &str, category: Option<Category>) -> String {
    match lexicon.grapheme(pred, category) {
        Some(e) => match e.category {
            Category::Verb => e.lemma.clone(),
            _ => e.surface.clone(),
        },
        None => pred.replace('_', " "),
    }
}

/// Describes individuals from what the clauses say about them.
pub struct Describer<'a> {
    pub clauses: &'a [Clause],
    pub lexicon: &'a Lexicon,
}

impl Describer<'_> {
    fn unary(&self, pred: &str, category: Category) -> bool {
        self.lexicon.grapheme(pred, Some(category)).is_some()
    }

    pub fn describe(&self, t: &Term) -> String {
        match t {
            Term::Num(n) => n.to_string(),
            Term::Const(Constant::Atom(a)) => grapheme(self.lexicon, a, None),
            Term::Var(v) => v.clone(),
            Term::Const(Constant::Id(_)) => {
                let facts: Vec<&Literal> = self
                    .clauses
                    .iter()
                    .filter(|c| c.is_fact() && c.head.args.first() == Some(t))
                    .map(|c| &c.head)
                    .collect();
                if let Some(name) = facts.iter().find(|l| l.pred == "named" && l.args.len() == 2) {
                    if let Term::Const(Constant::Atom(a)) = &name.args[1] {
                        return grapheme(self.lexicon, a, Some(Category::ProperNoun));
                    }
                }
                let unary: Vec<&str> = facts.iter().filter(|l| l.args.len() == 1).map(|l| l.pred.as_str()).collect();
                let adjs: Vec<String> = unary
                    .iter()
                    .filter(|p| self.unary(p, Category::Adjective))
                    .map(|p| grapheme(self.lexicon, p, Some(Category::Adjective)))
                    .collect();
                match unary.iter().find(|p| self.unary(p, Category::Noun)) {
                    Some(n) => {
                        let mut words = vec!["the".to_string()];
                        words.extend(adjs);
                        words.push(grapheme(self.lexicon, n, Some(Category::Noun)));
                        words.join(" ")
                    }
                    None => format!("individual {t}"),
                }
            }
            Term::Skolem(k, _) => {
                let noun = self.clauses.iter().find_map(|c| match c.head.args.as_slice() {
                    [Term::Skolem(j, _)] if j == k && self.unary(&c.head.pred, Category::Noun) => Some(&c.head.pred),
                    _ => None,
                });
                match noun {
                    Some(n) => format!("an individual {}", grapheme(self.lexicon, n, Some(Category::Noun))),
                    None => "an individual".to_string(),
                }
            }
        }
    }
}

fn fill(schema: &ParaphraseSchema, env: &Env, d: &Describer) -> String {
    let mut out = String::new();
    let t = &schema.template;
    let mut rest = t.as_str();
    while let Some(i) = rest.find(['<', '{']) {
        out.push_str(&rest[..i]);
        let close = if rest[i..].starts_with('<') { '>' } else { '}' };
        let Some(end) = rest[i..].find(close).map(|e| e + i) else {
            out.push_str(&rest[i..]);
            rest = "";
            break;
        };
        let name = &rest[i + 1..end];
        let mut after = &rest[end + 1..];
        if close == '}' {
            if let Some(Val::Term(term)) = env.get(name) {
                out.push_str(&d.describe(term));
            }
        } else if let Some(Val::Pred(p)) = env.get(name) {
            let cat = slot_category(name);
            let g = grapheme(d.lexicon, p, cat);
            if let Some(a) = after.strip_prefix('s') {
                out.push_str(&third_singular(&g));
                after = a;
            } else {
                out.push_str(&g);
                after = after.strip_prefix('g').unwrap_or(after);
            }
        }
        rest = after;
    }
    out.push_str(rest);
    fix_articles(&out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KbParaphrase {
    pub sentences: Vec<String>,
    /// Clauses no schema covered.
    pub remainder: Vec<Clause>,
}

impl fmt::Display for KbParaphrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sentences {
            writeln!(f, "{s}")?;
        }
        for c in &self.remainder {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Covers the clauses with schemata, earliest schema first, and orders the
/// sentences by their first clause.
pub fn paraphrase_kb(clauses: &[Clause], schemata: &[ParaphraseSchema], lexicon: &Lexicon) -> KbParaphrase {
    let m = Matcher { lexicon };
    let d = Describer { clauses, lexicon };
    let mut free = vec![true; clauses.len()];
    let mut found: Vec<(usize, String)> = Vec::new();
    for schema in schemata {
        loop {
            let mut used = Vec::new();
            let Some(env) = m.all(&schema.pattern, clauses, &free, Env::new(), &mut used) else {
                break;
            };
            for &i in &used {
                free[i] = false;
            }
            let first = *used.iter().min().expect("patterns are non-empty");
            found.push((first, fill(schema, &env, &d)));
        }
    }
    found.sort_by_key(|(i, _)| *i);
    KbParaphrase {
        sentences: found.into_iter().map(|(_, s)| s).collect(),
        remainder: clauses
            .iter()
            .zip(&free)
            .filter(|(_, f)| **f)
            .map(|(c, _)| c.clone())
            .collect(),
    }
}

/// The input sentence with resolved pronouns replaced by their antecedent
/// and the article of each Skolemized noun phrase by `[an individual]`.
/// `chosen` brackets the noun phrases as well, to show which reading of an
/// ambiguous sentence was taken.
pub fn feedback_sentence(parse: &ParseResult, report: &ResolutionReport, skolemized: &BTreeSet<RefId>, chosen: bool) -> String {
    let mut subst: BTreeMap<usize, String> = BTreeMap::new();
    for np in &parse.nps {
        if np.pronoun {
            if let Some(r) = report.for_token(np.start).filter(|r| r.kind == ResolutionKind::Pronoun) {
                let text = match (&r.antecedent_description, r.antecedent_proper) {
                    (Some(d), true) => d.clone(),
                    (Some(d), false) => format!("the {d}"),
                    (None, _) => continue,
                };
                subst.insert(np.start, format!("[{text}]"));
            }
        } else if np.det == Some(Det::Indefinite) && skolemized.contains(&np.referent) {
            subst.insert(np.start, "[an individual]".into());
        }
    }
    parse.render(|i| subst.get(&i).cloned(), chosen)
}

/// The answer to a wh-question: the question with its wh-phrase replaced by
/// the bracketed answers, as a statement.
pub fn answer_sentence(parse: &ParseResult, answers: &[Term], describer: &Describer) -> String {
    let list = format!(
        "[{}]",
        answers.iter().map(|t| describer.describe(t)).collect::<Vec<_>>().join(", ")
    );
    let Some(wh) = parse.wh.first() else {
        return list;
    };
    let span = parse
        .nps
        .iter()
        .find(|n| n.referent == wh.referent)
        .map_or((wh.token, wh.token + 1), |n| (n.start, n.end));
    let toks = &parse.tokens;
    let last = toks.len() - 1;
    let aux = toks.get(span.1).filter(|t| t.is("does") || t.is("do"));
    let mut words: Vec<String> = Vec::new();
    if let (0, Some(aux)) = (span.0, aux) {
        // object question: "What does X enter?" becomes "X enters [..]."
        let subject = parse.nps.iter().filter(|n| n.start == span.1 + 1).map(|n| n.end).max();
        let verb_at = subject.unwrap_or(span.1 + 2);
        words.extend(toks[span.1 + 1..verb_at].iter().map(|t| t.raw.clone()));
        if let Some(v) = toks.get(verb_at).filter(|_| verb_at < last) {
            words.push(if aux.is("does") { third_singular(&v.raw) } else { v.raw.clone() });
        }
        words.push(list);
        words.extend(toks[(verb_at + 1).min(last)..last].iter().map(|t| t.raw.clone()));
    } else {
        words.extend(toks[..span.0].iter().map(|t| t.raw.clone()));
        words.push(list);
        words.extend(toks[span.1..last].iter().map(|t| t.raw.clone()));
    }
    let mut s = words.join(" ").replace(" ,", ",");
    if let Some(first) = s.chars().next().filter(|c| c.is_lowercase()) {
        s.replace_range(..first.len_utf8(), &first.to_uppercase().to_string());
    }
    s.push('.');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_statement, Statement};

    fn clauses(src: &[&str]) -> Vec<Clause> {
        src.iter()
            .map(|s| match parse_statement(s).unwrap() {
                Statement::Clause(c) => c,
                Statement::Denial(_) => panic!(),
            })
            .collect()
    }

    #[test]
    fn known_customer() {
        let lex = Lexicon::atm();
        let kb = clauses(&["named(1,john).", "known(2).", "customer(2).", "is(1,2)."]);
        let p = paraphrase_kb(&kb, &builtin_schemata(), &lex);
        assert_eq!(p.sentences, ["John is a known customer."]);
        assert!(p.remainder.is_empty());
    }

    #[test]
    fn corpus_paraphrase() {
        let lex = Lexicon::atm();
        let kb = clauses(&[
            "named(1,simplemat).",
            "money_dispenser(1).",
            "simple(1).",
            "user_interface(2).",
            "have(1,2).",
            "card([2,X1]) :- customer(X1).",
            "have(X1,[2,X1]) :- customer(X1).",
            "check_code(3) :- trap_door_algorithm(X1), number(X2), calculate(X1,X2).",
            "equal(X2,3) :- trap_door_algorithm(X1), number(X2), calculate(X1,X2).",
            "personal([4,X1]) :- customer(X1).",
            "code([4,X1]) :- customer(X1).",
            "have(X1,[4,X1]) :- customer(X1).",
        ]);
        let p = paraphrase_kb(&kb, &builtin_schemata(), &lex);
        assert_eq!(
            p.sentences,
            [
                "SimpleMat is a simple money dispenser.",
                "SimpleMat has a user interface.",
                "Every customer has a card.",
                "If a trap-door-algorithm calculates a number then the number equals the check code.",
                "Every customer has a personal code.",
            ]
        );
        assert!(p.remainder.is_empty(), "{:?}", p.remainder);
    }

    #[test]
    fn leftovers_and_empty() {
        let lex = Lexicon::atm();
        assert_eq!(paraphrase_kb(&[], &builtin_schemata(), &lex), KbParaphrase::default());
        let kb = clauses(&["frobnicate(1,2,3)."]);
        let p = paraphrase_kb(&kb, &builtin_schemata(), &lex);
        assert!(p.sentences.is_empty());
        assert_eq!(p.to_string(), "frobnicate(1,2,3).\n");
    }

    #[test]
    fn articles() {
        assert_eq!(fix_articles("a/an apple and a/an card"), "an apple and a card");
        assert_eq!(fix_articles("A/an idea, a/an user"), "An idea, a user");
    }

    #[test]
    fn schema_file_errors() {
        assert!(parse_schemata("<noun>(X)\n=>\n{Y} is here.\n").is_err());
        assert!(parse_schemata("<thing>(X)\n=>\nx.\n").is_err());
        assert!(parse_schemata("<noun>(X)\n").is_err());
        assert_eq!(parse_schemata("% only a comment\n").unwrap(), vec![]);
    }

    #[test]
    fn describing() {
        let lex = Lexicon::atm();
        let kb = clauses(&["named(1,simplemat).", "valid(5).", "card(5).", "card([2,X1]) :- customer(X1)."]);
        let d = Describer { clauses: &kb, lexicon: &lex };
        assert_eq!(d.describe(&Term::id(1)), "SimpleMat");
        assert_eq!(d.describe(&Term::id(5)), "the valid card");
        assert_eq!(d.describe(&Term::Skolem(2, vec![Term::id(7)])), "an individual card");
        assert_eq!(d.describe(&Term::Num(500)), "500");
    }
}
