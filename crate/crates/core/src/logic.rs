//! Terms, literals and clauses of the generated knowledge base, with their
//! textual syntax and unification.
//!
//! Rendering is Prolog-like: `card([2,X1]) :- customer(X1).` Skolem terms
//! print as `[index,args...]`, numbers from the text as `#n` (plain integers
//! are discourse individuals), negation as failure as `\+ p(X)`, and stored
//! negative facts as denials `:- p(1).`

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    /// A discourse individual.
    Id(u32),
    Atom(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(Constant),
    Num(i64),
    Skolem(u32, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn id(n: u32) -> Term {
        Term::Const(Constant::Id(n))
    }

    pub fn atom(a: impl Into<String>) -> Term {
        Term::Const(Constant::Atom(a.into()))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Skolem(_, args) => args.iter().all(Term::is_ground),
            _ => true,
        }
    }

    pub fn vars_into(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Skolem(_, args) => args.iter().for_each(|a| a.vars_into(out)),
            _ => {}
        }
    }

    pub fn rename(&self, f: &mut impl FnMut(&str) -> String) -> Term {
        match self {
            Term::Var(v) => Term::Var(f(v)),
            Term::Skolem(k, args) => Term::Skolem(*k, args.iter().map(|a| a.rename(f)).collect()),
            other => other.clone(),
        }
    }

    fn map_symbols(&self, consts: &impl Fn(u32) -> u32, skolems: &impl Fn(u32) -> u32) -> Term {
        match self {
            Term::Const(Constant::Id(n)) => Term::id(consts(*n)),
            Term::Skolem(k, args) => Term::Skolem(
                skolems(*k),
                args.iter().map(|a| a.map_symbols(consts, skolems)).collect(),
            ),
            other => other.clone(),
        }
    }

    fn symbols_into(&self, consts: &mut BTreeSet<u32>, skolems: &mut BTreeSet<u32>) {
        match self {
            Term::Const(Constant::Id(n)) => {
                consts.insert(*n);
            }
            Term::Skolem(k, args) => {
                skolems.insert(*k);
                args.iter().for_each(|a| a.symbols_into(consts, skolems));
            }
            _ => {}
        }
    }
}

fn is_plain_atom(a: &str) -> bool {
    let mut chars = a.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(Constant::Id(n)) => write!(f, "{n}"),
            Term::Const(Constant::Atom(a)) if is_plain_atom(a) => write!(f, "{a}"),
            Term::Const(Constant::Atom(a)) => write!(f, "'{}'", a.replace('\'', "''")),
            Term::Num(n) => write!(f, "#{n}"),
            Term::Skolem(k, args) => {
                write!(f, "[{k}")?;
                for a in args {
                    write!(f, ",{a}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub pred: String,
    pub args: Vec<Term>,
    /// Negation as failure.
    pub negated: bool,
}

impl Literal {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Literal {
            pred: pred.into(),
            args,
            negated: false,
        }
    }

    pub fn naf(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Literal {
            negated: true,
            ..Literal::new(pred, args)
        }
    }

    pub fn positive(&self) -> Literal {
        Literal {
            negated: false,
            ..self.clone()
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.args.iter().for_each(|a| a.vars_into(&mut out));
        out
    }

    pub fn rename(&self, f: &mut impl FnMut(&str) -> String) -> Literal {
        Literal {
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| a.rename(f)).collect(),
            negated: self.negated,
        }
    }

    pub fn resolve(&self, b: &Bindings) -> Literal {
        Literal {
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| resolve(a, b)).collect(),
            negated: self.negated,
        }
    }

    pub fn map_symbols(&self, consts: &impl Fn(u32) -> u32, skolems: &impl Fn(u32) -> u32) -> Literal {
        Literal {
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| a.map_symbols(consts, skolems)).collect(),
            negated: self.negated,
        }
    }

    pub fn symbols_into(&self, consts: &mut BTreeSet<u32>, skolems: &mut BTreeSet<u32>) {
        self.args.iter().for_each(|a| a.symbols_into(consts, skolems));
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "\\+ ")?;
        }
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            let args: Vec<String> = self.args.iter().map(|a| a.to_string()).collect();
            write!(f, "({})", args.join(","))?;
        }
        Ok(())
    }
}

/// A rule with several heads sharing one body: `a, b ::- c, d.`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiHeadClause {
    pub heads: Vec<Literal>,
    pub body: Vec<Literal>,
}

impl MultiHeadClause {
    /// Variables renamed as in [`Clause::new`].
    pub fn new(heads: Vec<Literal>, body: Vec<Literal>) -> Self {
        let mut order = Vec::new();
        for l in body.iter().chain(&heads) {
            for v in l.vars() {
                if !order.contains(&v) {
                    order.push(v);
                }
            }
        }
        let mut rename = |v: &str| {
            let i = order.iter().position(|x| x == v).expect("collected above");
            format!("X{}", i + 1)
        };
        MultiHeadClause {
            heads: heads.iter().map(|l| l.rename(&mut rename)).collect(),
            body: body.iter().map(|l| l.rename(&mut rename)).collect(),
        }
    }

    /// One clause per head, each with the full body.
    pub fn distribute(&self) -> Vec<Clause> {
        self.heads
            .iter()
            .map(|h| Clause::new(h.clone(), self.body.clone()))
            .collect()
    }
}

impl fmt::Display for MultiHeadClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let heads: Vec<String> = self.heads.iter().map(|l| l.to_string()).collect();
        let body: Vec<String> = self.body.iter().map(|l| l.to_string()).collect();
        if body.is_empty() {
            write!(f, "{}.", heads.join(", "))
        } else {
            write!(f, "{} ::- {}.", heads.join(", "), body.join(", "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    pub head: Literal,
    pub body: Vec<Literal>,
}

impl Clause {
    /// Builds a clause with variables renamed `X1, X2, ...` in order of first
    /// occurrence, body before head.
    pub fn new(head: Literal, body: Vec<Literal>) -> Self {
        Clause { head, body }.canonical()
    }

    pub fn fact(head: Literal) -> Self {
        Clause { head, body: Vec::new() }
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        for l in self.body.iter().chain(std::iter::once(&self.head)) {
            l.args.iter().for_each(|a| a.vars_into(&mut out));
        }
        out
    }

    pub fn canonical(&self) -> Clause {
        let order = self.vars();
        let mut rename = |v: &str| {
            let i = order.iter().position(|x| x == v).expect("collected above");
            format!("X{}", i + 1)
        };
        Clause {
            head: self.head.rename(&mut rename),
            body: self.body.iter().map(|l| l.rename(&mut rename)).collect(),
        }
    }

    /// Equal up to consistent renaming of variables.
    pub fn is_variant_of(&self, other: &Clause) -> bool {
        self.canonical() == other.canonical()
    }

    /// Every head variable occurs in a positive body literal.
    pub fn is_range_restricted(&self) -> bool {
        let mut body_vars = Vec::new();
        for l in self.body.iter().filter(|l| !l.negated) {
            l.args.iter().for_each(|a| a.vars_into(&mut body_vars));
        }
        self.head.vars().iter().all(|v| body_vars.contains(v))
    }

    pub fn map_symbols(&self, consts: &impl Fn(u32) -> u32, skolems: &impl Fn(u32) -> u32) -> Clause {
        Clause {
            head: self.head.map_symbols(consts, skolems),
            body: self.body.iter().map(|l| l.map_symbols(consts, skolems)).collect(),
        }
    }

    pub fn symbols(&self) -> (BTreeSet<u32>, BTreeSet<u32>) {
        let (mut c, mut s) = (BTreeSet::new(), BTreeSet::new());
        for l in std::iter::once(&self.head).chain(&self.body) {
            l.symbols_into(&mut c, &mut s);
        }
        (c, s)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.body.is_empty() {
            write!(f, "{}.", self.head)
        } else {
            let body: Vec<String> = self.body.iter().map(|l| l.to_string()).collect();
            write!(f, "{} :- {}.", self.head, body.join(", "))
        }
    }
}

/// A stored negative fact: the conjunction must never hold.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Denial {
    pub body: Vec<Literal>,
}

impl Denial {
    pub fn new(body: Vec<Literal>) -> Self {
        // reuse clause canonicalisation with a dummy head
        let c = Clause::new(Literal::new("", vec![]), body);
        Denial { body: c.body }
    }

    pub fn is_variant_of(&self, other: &Denial) -> bool {
        self == other
    }

    pub fn symbols(&self) -> (BTreeSet<u32>, BTreeSet<u32>) {
        let (mut c, mut s) = (BTreeSet::new(), BTreeSet::new());
        self.body.iter().for_each(|l| l.symbols_into(&mut c, &mut s));
        (c, s)
    }

    pub fn map_symbols(&self, consts: &impl Fn(u32) -> u32, skolems: &impl Fn(u32) -> u32) -> Denial {
        Denial {
            body: self.body.iter().map(|l| l.map_symbols(consts, skolems)).collect(),
        }
    }
}

impl fmt::Display for Denial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.body.iter().map(|l| l.to_string()).collect();
        write!(f, ":- {}.", body.join(", "))
    }
}

pub type Bindings = HashMap<String, Term>;

/// Follows variable bindings at the top of `t`.
pub fn walk<'a>(mut t: &'a Term, b: &'a Bindings) -> &'a Term {
    while let Term::Var(v) = t {
        match b.get(v) {
            Some(next) => t = next,
            None => break,
        }
    }
    t
}

/// Applies bindings all the way down.
pub fn resolve(t: &Term, b: &Bindings) -> Term {
    match walk(t, b) {
        Term::Skolem(k, args) => Term::Skolem(*k, args.iter().map(|a| resolve(a, b)).collect()),
        other => other.clone(),
    }
}

fn occurs(v: &str, t: &Term, b: &Bindings) -> bool {
    match walk(t, b) {
        Term::Var(w) => w == v,
        Term::Skolem(_, args) => args.iter().any(|a| occurs(v, a, b)),
        _ => false,
    }
}

/// Unifies two terms, extending `b`. On failure `b` may hold partial
/// bindings; callers work on a copy.
pub fn unify(x: &Term, y: &Term, b: &mut Bindings) -> bool {
    let (x, y) = (walk(x, b).clone(), walk(y, b).clone());
    match (&x, &y) {
        (Term::Var(v), Term::Var(w)) if v == w => true,
        (Term::Var(v), t) | (t, Term::Var(v)) => {
            if occurs(v, t, b) {
                return false;
            }
            b.insert(v.clone(), t.clone());
            true
        }
        (Term::Skolem(k1, a1), Term::Skolem(k2, a2)) => {
            k1 == k2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(p, q)| unify(p, q, b))
        }
        (p, q) => p == q,
    }
}

pub fn unify_literals(a: &Literal, b: &Literal, bindings: &mut Bindings) -> bool {
    a.pred == b.pred
        && a.args.len() == b.args.len()
        && a.args.iter().zip(&b.args).all(|(x, y)| unify(x, y, bindings))
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at column {column}: {message}")]
pub struct SyntaxError {
    pub column: usize,
    pub message: String,
}

/// One parsed knowledge-base statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Clause(Clause),
    Denial(Denial),
}

pub fn parse_statement(src: &str) -> Result<Statement, SyntaxError> {
    let mut p = TermParser { src, pos: 0 };
    let stmt = if p.eat(":-") {
        Statement::Denial(Denial { body: p.literal_list()? })
    } else {
        let head = p.literal()?;
        if p.eat(":-") {
            Statement::Clause(Clause {
                head,
                body: p.literal_list()?,
            })
        } else {
            Statement::Clause(Clause::fact(head))
        }
    };
    if !p.eat(".") {
        return Err(p.error("expected '.'"));
    }
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(stmt)
}

pub fn parse_literal(src: &str) -> Result<Literal, SyntaxError> {
    let mut p = TermParser { src, pos: 0 };
    let l = p.literal()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(l)
}

struct TermParser<'a> {
    src: &'a str,
    pos: usize,
}

impl TermParser<'_> {
    fn error(&self, message: &str) -> SyntaxError {
        SyntaxError {
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if len == 0 {
            return None;
        }
        let s = rest[..len].to_string();
        self.pos += len;
        Some(s)
    }

    fn integer(&mut self) -> Result<i64, SyntaxError> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-')))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        let n = rest[..len].parse().map_err(|_| self.error("expected an integer"))?;
        self.pos += len;
        Ok(n)
    }

    fn literal_list(&mut self) -> Result<Vec<Literal>, SyntaxError> {
        let mut out = vec![self.literal()?];
        while self.eat(",") {
            out.push(self.literal()?);
        }
        Ok(out)
    }

    fn literal(&mut self) -> Result<Literal, SyntaxError> {
        let negated = self.eat("\\+");
        let pred = self.ident().ok_or_else(|| self.error("expected a predicate"))?;
        let mut args = Vec::new();
        if self.eat("(") {
            args.push(self.term()?);
            while self.eat(",") {
                args.push(self.term()?);
            }
            if !self.eat(")") {
                return Err(self.error("expected ')'"));
            }
        }
        Ok(Literal { pred, args, negated })
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        self.skip_ws();
        if self.eat("#") {
            return Ok(Term::Num(self.integer()?));
        }
        if self.eat("[") {
            let k = self.integer()?;
            let k = u32::try_from(k).map_err(|_| self.error("bad skolem index"))?;
            let mut args = Vec::new();
            while self.eat(",") {
                args.push(self.term()?);
            }
            if !self.eat("]") {
                return Err(self.error("expected ']'"));
            }
            return Ok(Term::Skolem(k, args));
        }
        if self.eat("'") {
            let mut out = String::new();
            loop {
                let Some(c) = self.rest().chars().next() else {
                    return Err(self.error("unterminated quoted atom"));
                };
                self.pos += c.len_utf8();
                if c == '\'' {
                    if self.rest().starts_with('\'') {
                        self.pos += 1;
                        out.push('\'');
                        continue;
                    }
                    break;
                }
                out.push(c);
            }
            return Ok(Term::atom(out));
        }
        if self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            let n = self.integer()?;
            return u32::try_from(n)
                .map(Term::id)
                .map_err(|_| self.error("individual out of range"));
        }
        let name = self.ident().ok_or_else(|| self.error("expected a term"))?;
        if name.starts_with(|c: char| c.is_ascii_uppercase() || c == '_') {
            Ok(Term::Var(name))
        } else {
            Ok(Term::atom(name))
        }
    }
}
