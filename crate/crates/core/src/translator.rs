//! Simplified DRSs to Horn clauses.
//!
//! Top-level referents become integer constants and their conditions facts.
//! An implication becomes one rule per consequent condition: antecedent
//! referents are variables, referents new in the consequent are Skolem terms
//! over the antecedent variables. A negated condition at the top level, or in
//! a consequent, becomes a denial.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::drs::{Arg, Condition, Drs, RefId};
use crate::logic::{Clause, Denial, Literal, MultiHeadClause, Term};

/// Last constant and last Skolem index handed out.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub constants: u32,
    pub skolems: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("cannot translate {0}")]
    UnsupportedDrs(String),
    #[error("unknown name \"{0}\"")]
    UnknownName(String),
    #[error("referent {0} is not bound")]
    UnboundReferent(RefId),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Translation {
    pub clauses: Vec<Clause>,
    pub denials: Vec<Denial>,
    /// Rules before distribution, for display.
    pub rules: Vec<MultiHeadClause>,
    /// Constants for referents, new ones included.
    pub bindings: BTreeMap<RefId, Term>,
    pub fresh_constants: Vec<u32>,
    pub fresh_skolems: Vec<u32>,
    /// Consequent referents that became Skolem terms.
    pub skolemized: BTreeSet<RefId>,
    pub counters: Counters,
}

type Scope = BTreeMap<RefId, Term>;

fn var(r: RefId) -> Term {
    Term::var(format!("V{}", r.0))
}

/// The literal for an atomic condition, referents looked up in `scope`.
pub fn literal(pred: &str, args: &[Arg], scope: &BTreeMap<RefId, Term>) -> Result<Literal, TranslateError> {
    let args = args
        .iter()
        .map(|a| match a {
            Arg::Ref(r) => scope.get(r).cloned().ok_or(TranslateError::UnboundReferent(*r)),
            Arg::Atom(s) => Ok(Term::atom(s.clone())),
            Arg::Num(n) => Ok(Term::Num(*n)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Literal::new(pred, args))
}

/// Variables of `scope` that `d` mentions, in referent order.
fn free_vars(d: &Drs, scope: &Scope) -> Vec<Term> {
    fn walk(d: &Drs, out: &mut BTreeSet<RefId>) {
        for c in &d.conditions {
            match c {
                Condition::Atomic { args, .. } => out.extend(args.iter().filter_map(Arg::as_ref)),
                Condition::Negation(k) => walk(k, out),
                Condition::IfThen(a, b) | Condition::Disjunction(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Condition::Equality(a, b) => out.extend([*a, *b]),
                Condition::Gender(r, _) | Condition::Number(r, _) => {
                    out.insert(*r);
                }
            }
        }
    }
    let mut refs = BTreeSet::new();
    walk(d, &mut refs);
    refs.iter()
        .filter_map(|r| scope.get(r))
        .filter(|t| matches!(t, Term::Var(_)))
        .cloned()
        .collect()
}

/// Shared machinery for bodies that may contain negation and disjunction.
struct Bodies {
    prefix: &'static str,
    /// Last helper index used.
    counter: u32,
    aux: Vec<Clause>,
}

impl Bodies {
    fn new(prefix: &'static str, counter: u32) -> Self {
        Bodies { prefix, counter, aux: Vec::new() }
    }

    fn fresh_pred(&mut self, what: &str) -> String {
        self.counter += 1;
        format!("{}{}_{}", self.prefix, what, self.counter)
    }

    /// Alternative conjunctions equivalent to the conditions of `d`, whose
    /// own referents are added to `scope` as variables.
    fn alternatives(&mut self, d: &Drs, scope: &mut Scope) -> Result<Vec<Vec<Literal>>, TranslateError> {
        for r in &d.referents {
            scope.entry(r.id).or_insert_with(|| var(r.id));
        }
        let mut alts: Vec<Vec<Literal>> = vec![Vec::new()];
        for c in &d.conditions {
            let options: Vec<Vec<Literal>> = match c {
                Condition::Atomic { pred, args } => vec![vec![literal(pred, args, scope)?]],
                Condition::Negation(k) => vec![vec![self.negation(k, scope)?]],
                Condition::Disjunction(l, r) => {
                    let mut opts = self.alternatives(l, &mut scope.clone())?;
                    opts.extend(self.alternatives(r, &mut scope.clone())?);
                    // referents of the disjuncts stay local to them
                    for k in [l, r] {
                        for x in &k.referents {
                            scope.entry(x.id).or_insert_with(|| var(x.id));
                        }
                    }
                    opts
                }
                Condition::IfThen(a, b) => vec![vec![self.universal(a, b, scope)?]],
                Condition::Equality(..) | Condition::Gender(..) | Condition::Number(..) => continue,
            };
            alts = alts
                .iter()
                .flat_map(|prefix| {
                    options.iter().map(move |opt| {
                        let mut v = prefix.clone();
                        v.extend(opt.iter().cloned());
                        v
                    })
                })
                .collect();
        }
        Ok(alts)
    }

    /// `\+ p(..)` for one literal, otherwise a helper predicate.
    fn negation(&mut self, k: &Drs, scope: &Scope) -> Result<Literal, TranslateError> {
        let mut inner = scope.clone();
        let alts = self.alternatives(k, &mut inner)?;
        if let [only] = alts.as_slice() {
            if let [lit] = only.as_slice() {
                if !lit.negated {
                    return Ok(Literal { negated: true, ..lit.clone() });
                }
            }
        }
        let args = free_vars(k, scope);
        let pred = self.fresh_pred("not");
        let head = Literal::new(pred.clone(), args.clone());
        for body in alts {
            self.aux.push(Clause::new(head.clone(), body));
        }
        Ok(Literal::naf(pred, args))
    }

    /// Every way of satisfying `a` extends to `b`: `\+ (a, \+ b)`.
    fn universal(&mut self, a: &Drs, b: &Drs, scope: &Scope) -> Result<Literal, TranslateError> {
        let mut inner = scope.clone();
        let ante = self.alternatives(a, &mut inner)?;
        let mut cons_scope = inner.clone();
        let cons = self.alternatives(b, &mut cons_scope)?;
        let mut both = a.clone();
        both.conditions.extend(b.conditions.iter().cloned());
        let cons_args = free_vars(&both, &inner);
        let cons_pred = self.fresh_pred("then");
        for body in cons {
            self.aux.push(Clause::new(Literal::new(cons_pred.clone(), cons_args.clone()), body));
        }
        let args = free_vars(&both, scope);
        let viol_pred = self.fresh_pred("unless");
        for mut body in ante {
            body.push(Literal::naf(cons_pred.clone(), cons_args.clone()));
            self.aux.push(Clause::new(Literal::new(viol_pred.clone(), args.clone()), body));
        }
        Ok(Literal::naf(viol_pred, args))
    }
}

/// Translates the simplified increment of an assertion. `known` maps
/// referents of earlier sentences to their constants.
pub fn translate_assertion(k: &Drs, known: &BTreeMap<RefId, Term>, counters: Counters) -> Result<Translation, TranslateError> {
    let mut t = Translation {
        counters,
        bindings: known.clone(),
        ..Translation::default()
    };
    for r in &k.referents {
        if !t.bindings.contains_key(&r.id) {
            t.counters.constants += 1;
            t.fresh_constants.push(t.counters.constants);
            t.bindings.insert(r.id, Term::id(t.counters.constants));
        }
    }
    for c in &k.conditions {
        match c {
            Condition::Atomic { pred, args } => {
                t.clauses.push(Clause::fact(literal(pred, args, &t.bindings)?));
            }
            Condition::IfThen(a, b) => rule_group(a, b, &mut t)?,
            Condition::Negation(n) => {
                let scope = t.bindings.clone();
                for body in denial_bodies(n, &scope, &mut t)? {
                    t.denials.push(Denial::new(body));
                }
            }
            Condition::Disjunction(..) => {
                return Err(TranslateError::UnsupportedDrs("a disjunction outside a conditional".into()))
            }
            Condition::Equality(..) | Condition::Gender(..) | Condition::Number(..) => {}
        }
    }
    Ok(t)
}

fn denial_bodies(n: &Drs, scope: &Scope, t: &mut Translation) -> Result<Vec<Vec<Literal>>, TranslateError> {
    let mut bodies = Bodies::new("", t.counters.skolems);
    let alts = bodies.alternatives(n, &mut scope.clone())?;
    t.fresh_skolems.extend(t.counters.skolems + 1..=bodies.counter);
    t.counters.skolems = bodies.counter;
    t.clauses.extend(bodies.aux);
    Ok(alts)
}

fn rule_group(a: &Drs, b: &Drs, t: &mut Translation) -> Result<(), TranslateError> {
    // one index per referent of the rule, in referent order
    let mut rule_refs: Vec<RefId> = a.referents.iter().chain(&b.referents).map(|r| r.id).collect();
    rule_refs.sort();
    let base = t.counters.skolems;
    let reserved = base + rule_refs.len() as u32;
    let index_of = |r: RefId| base + 1 + rule_refs.iter().position(|&x| x == r).unwrap() as u32;

    let mut scope = t.bindings.clone();
    let mut bodies = Bodies::new("", reserved);
    let alternatives = bodies.alternatives(a, &mut scope)?;
    let universals: Vec<Term> = a.referents.iter().map(|r| var(r.id)).collect();

    let mut used_skolems = BTreeSet::new();
    for r in &b.referents {
        if scope.contains_key(&r.id) {
            continue;
        }
        if r.unique {
            t.counters.constants += 1;
            t.fresh_constants.push(t.counters.constants);
            let c = Term::id(t.counters.constants);
            t.bindings.insert(r.id, c.clone());
            scope.insert(r.id, c);
        } else {
            let k = index_of(r.id);
            used_skolems.insert(k);
            t.skolemized.insert(r.id);
            scope.insert(r.id, Term::Skolem(k, universals.clone()));
        }
    }

    let mut heads = Vec::new();
    let mut negations = Vec::new();
    for c in &b.conditions {
        match c {
            Condition::Atomic { pred, args } => heads.push(literal(pred, args, &scope)?),
            Condition::Negation(n) => negations.push(n),
            Condition::IfThen(..) => {
                return Err(TranslateError::UnsupportedDrs("a conditional inside a conditional".into()))
            }
            Condition::Disjunction(..) => {
                return Err(TranslateError::UnsupportedDrs("a disjunction in a consequent".into()))
            }
            Condition::Equality(..) | Condition::Gender(..) | Condition::Number(..) => {}
        }
    }
    for body in &alternatives {
        // conditions repeated from the antecedent say nothing new
        let heads: Vec<Literal> = heads.iter().filter(|h| !body.contains(h)).cloned().collect();
        if !heads.is_empty() {
            let m = MultiHeadClause::new(heads, body.clone());
            t.clauses.extend(m.distribute());
            t.rules.push(m);
        }
        for n in &negations {
            let mut inner = scope.clone();
            for extra in bodies.alternatives(n, &mut inner)? {
                let mut full = body.clone();
                full.extend(extra);
                t.denials.push(Denial::new(full));
            }
        }
    }
    t.clauses.extend(bodies.aux);
    t.fresh_skolems.extend(used_skolems);
    t.fresh_skolems.extend(reserved + 1..=bodies.counter);
    t.counters.skolems = bodies.counter;
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryTranslation {
    pub goals: Vec<Literal>,
    /// Question variables with referent and question word.
    pub wh: Vec<(String, RefId, String)>,
    /// Helper clauses the goals depend on.
    pub aux: Vec<Clause>,
    pub scope: BTreeMap<RefId, Term>,
}

/// Translates the simplified increment of a question. Referents not bound
/// by `known` are variables.
pub fn translate_query(k: &Drs, known: &BTreeMap<RefId, Term>, wh: &[(RefId, String)]) -> Result<QueryTranslation, TranslateError> {
    let mut scope: Scope = known.clone();
    for r in &k.referents {
        scope
            .entry(r.id)
            .or_insert_with(|| Term::var(format!("Q{}", r.id.0)));
    }
    let mut bodies = Bodies::new("query_", 0);
    let mut alts = bodies.alternatives(k, &mut scope)?;
    let all_vars: Vec<Term> = k
        .referents
        .iter()
        .filter_map(|r| scope.get(&r.id))
        .filter(|t| matches!(t, Term::Var(_)))
        .cloned()
        .collect();
    let goals = if alts.len() == 1 {
        alts.pop().unwrap()
    } else {
        let pred = bodies.fresh_pred("or");
        for body in alts {
            bodies.aux.push(Clause::new(Literal::new(pred.clone(), all_vars.clone()), body));
        }
        vec![Literal::new(pred, all_vars)]
    };
    let wh = wh
        .iter()
        .map(|(r, word)| match scope.get(r) {
            Some(Term::Var(v)) => Ok((v.clone(), *r, word.clone())),
            _ => Err(TranslateError::UnboundReferent(*r)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QueryTranslation {
        goals,
        wh,
        aux: bodies.aux,
        scope,
    })
}
