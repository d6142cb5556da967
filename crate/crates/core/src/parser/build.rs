//! Turns a syntax tree into the sentence's DRS increment.
//!
//! Noun phrases are built in continuation style: each NP introduces its
//! referent (or, for `every`, an implication) and then hands the referent to
//! the rest of the clause, which is built inside whatever sub-DRS the NP
//! opened.

use std::collections::BTreeSet;

use crate::drs::{Arg, Condition, Drs, Number, Referent, RefId};
use crate::features::FeatureValue;
use crate::lexicon::{LexEntry, VerbKind};

use super::grammar::{Clause, Conj, Det, Np, NpKind, Rel, Vp};
use super::{Anaphor, AnaphorKind, EventHint, NpInfo, WhVar};

pub(super) struct Builder {
    next: u32,
    sentence: usize,
    depth: usize,
    negations: usize,
    slot: usize,
    gap: Option<Arg>,
    /// Proper names met inside sub-DRSs; they belong to the top level.
    hoisted: Drs,
    pub anaphors: Vec<Anaphor>,
    pub wh: Vec<WhVar>,
    pub events: Vec<EventHint>,
    pub nps: Vec<NpInfo>,
}

type Scope<'s> = &'s dyn Fn(&mut Builder, Arg, &mut Drs);

fn gender_of(e: &LexEntry) -> BTreeSet<String> {
    e.gender()
        .unwrap_or_else(|| ["m", "f", "n"].iter().map(|s| s.to_string()).collect())
}

fn number_of(e: &LexEntry) -> Number {
    if e.features.get(&["number"]) == FeatureValue::atom("pl") {
        Number::Pl
    } else {
        Number::Sg
    }
}

fn describe(adjs: &[LexEntry], noun: &LexEntry) -> String {
    adjs.iter()
        .chain(std::iter::once(noun))
        .map(|e| e.surface.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

impl Builder {
    pub fn new(first_ref: u32, sentence: usize) -> Self {
        Builder {
            next: first_ref,
            sentence,
            depth: 0,
            negations: 0,
            slot: 0,
            gap: None,
            hoisted: Drs::new(),
            anaphors: Vec::new(),
            wh: Vec::new(),
            events: Vec::new(),
            nps: Vec::new(),
        }
    }

    pub fn next_ref(&self) -> u32 {
        self.next
    }

    pub fn build(&mut self, clause: &Clause) -> Drs {
        let mut root = Drs::new();
        self.clause(clause, &mut root);
        let hoisted = std::mem::take(&mut self.hoisted);
        root.referents.splice(0..0, hoisted.referents);
        root.conditions.splice(0..0, hoisted.conditions);
        root
    }

    fn fresh(&mut self) -> RefId {
        let id = RefId(self.next);
        self.next += 1;
        id
    }

    fn nested(&mut self, f: impl FnOnce(&mut Self, &mut Drs)) -> Drs {
        let mut sub = Drs::new();
        self.depth += 1;
        f(self, &mut sub);
        self.depth -= 1;
        sub
    }

    fn negated(&mut self, negated: bool, out: &mut Drs, f: impl FnOnce(&mut Self, &mut Drs)) {
        if !negated {
            return f(self, out);
        }
        self.negations += 1;
        let sub = self.nested(f);
        self.negations -= 1;
        out.conditions.push(Condition::Negation(sub));
    }

    fn clause(&mut self, clause: &Clause, out: &mut Drs) {
        match clause {
            Clause::Simple { subject, vp } => {
                self.np(subject, out, &|b, x, out| b.vp(vp, x, out));
            }
            Clause::List { conjs, items } => {
                self.list(conjs, items, out, &|b, item, out| b.clause(item, out));
            }
            Clause::Cond {
                antecedent,
                consequent,
            } => {
                let ante = self.nested(|b, d| b.clause(antecedent, d));
                let cons = self.nested(|b, d| b.clause(consequent, d));
                out.conditions.push(Condition::IfThen(ante, cons));
            }
        }
    }

    /// Conjoined items in one DRS, or nested binary disjunctions.
    fn list<T>(&mut self, conjs: &[Conj], items: &[T], out: &mut Drs, each: &dyn Fn(&mut Self, &T, &mut Drs)) {
        if conjs.first() == Some(&Conj::Or) {
            self.disjunction(items, out, each);
            return;
        }
        for (i, item) in items.iter().enumerate() {
            if i > 0 && conjs[i - 1] == Conj::AndThen {
                self.slot += 1;
            }
            each(self, item, out);
        }
    }

    fn disjunction<T>(&mut self, items: &[T], out: &mut Drs, each: &dyn Fn(&mut Self, &T, &mut Drs)) {
        match items {
            [] => {}
            [only] => each(self, only, out),
            [first, rest @ ..] => {
                let left = self.nested(|b, d| each(b, first, d));
                let right = self.nested(|b, d| b.disjunction(rest, d, each));
                out.conditions.push(Condition::Disjunction(left, right));
            }
        }
    }

    fn introduce(&mut self, id: RefId, referent: Referent, gender: BTreeSet<String>, number: Number, out: &mut Drs) {
        out.referents.push(referent);
        out.conditions.push(Condition::Gender(id, gender));
        out.conditions.push(Condition::Number(id, number));
    }

    fn np(&mut self, np: &Np, out: &mut Drs, scope: Scope) {
        match &np.kind {
            NpKind::Proper(e) => {
                let id = self.fresh();
                let mut r = Referent::new(id, self.sentence, e.surface.clone());
                r.origin.proper = true;
                let named = Condition::atomic("named", vec![Arg::Ref(id), Arg::Atom(e.pred.clone())]);
                if self.depth == 0 {
                    self.introduce(id, r, gender_of(e), number_of(e), out);
                    out.conditions.push(named);
                } else {
                    let mut top = std::mem::take(&mut self.hoisted);
                    self.introduce(id, r, gender_of(e), number_of(e), &mut top);
                    top.conditions.push(named);
                    self.hoisted = top;
                }
                self.anaphors.push(Anaphor {
                    referent: id,
                    kind: AnaphorKind::Name { name: e.pred.clone() },
                    description: e.surface.clone(),
                    token: np.start,
                });
                self.record(id, np, None, false);
                scope(self, Arg::Ref(id), out);
            }
            NpKind::Pronoun(e) => {
                let id = self.fresh();
                let r = Referent::new(id, self.sentence, e.surface.clone());
                let gender = gender_of(e);
                let number = number_of(e);
                self.introduce(id, r, gender.clone(), number, out);
                self.anaphors.push(Anaphor {
                    referent: id,
                    kind: AnaphorKind::Pronoun { gender, number },
                    description: e.surface.clone(),
                    token: np.start,
                });
                self.record(id, np, None, true);
                scope(self, Arg::Ref(id), out);
            }
            NpKind::Common {
                det,
                adjs,
                noun,
                rel,
            } => {
                let id = self.fresh();
                let desc = describe(adjs, noun);
                self.record(id, np, Some(*det), false);
                let restrict = |b: &mut Self, d: &mut Drs| {
                    let r = Referent::new(id, b.sentence, desc.clone());
                    b.introduce(id, r, gender_of(noun), number_of(noun), d);
                    d.conditions.push(Condition::atomic(noun.pred.clone(), vec![Arg::Ref(id)]));
                    for a in adjs {
                        d.conditions.push(Condition::atomic(a.pred.clone(), vec![Arg::Ref(id)]));
                    }
                    if let Some(rel) = rel {
                        b.relative(rel, id, d);
                    }
                };
                if *det == Det::Every {
                    let ante = self.nested(|b, d| restrict(b, d));
                    let cons = self.nested(|b, d| scope(b, Arg::Ref(id), d));
                    out.conditions.push(Condition::IfThen(ante, cons));
                } else {
                    if *det == Det::Definite {
                        self.anaphors.push(Anaphor {
                            referent: id,
                            kind: AnaphorKind::Definite {
                                pred: noun.pred.clone(),
                            },
                            description: desc.clone(),
                            token: np.start,
                        });
                    }
                    restrict(self, out);
                    scope(self, Arg::Ref(id), out);
                }
            }
            NpKind::Number(n) => scope(self, Arg::Num(*n), out),
            NpKind::Wh { word, adjs, noun } => {
                let id = self.fresh();
                let gender = match noun {
                    Some(n) => gender_of(n),
                    None => gender_of(word),
                };
                let desc = match noun {
                    Some(n) => describe(adjs, n),
                    None => word.surface.clone(),
                };
                let r = Referent::new(id, self.sentence, desc);
                self.introduce(id, r, gender.clone(), Number::Sg, out);
                if let Some(n) = noun {
                    out.conditions.push(Condition::atomic(n.pred.clone(), vec![Arg::Ref(id)]));
                    for a in adjs {
                        out.conditions.push(Condition::atomic(a.pred.clone(), vec![Arg::Ref(id)]));
                    }
                }
                self.wh.push(WhVar {
                    referent: id,
                    word: word.lemma.clone(),
                    gender,
                    token: np.start,
                });
                self.record(id, np, None, false);
                scope(self, Arg::Ref(id), out);
            }
            NpKind::Gap => {
                let arg = self.gap.clone().expect("gap outside a relative clause");
                scope(self, arg, out);
            }
            NpKind::List { conj, items } => {
                let conjs = vec![*conj; items.len().saturating_sub(1)];
                self.list(&conjs, items, out, &|b, item, out| b.np(item, out, scope));
            }
        }
    }

    fn record(&mut self, id: RefId, np: &Np, det: Option<Det>, pronoun: bool) {
        self.nps.push(NpInfo {
            referent: id,
            start: np.start,
            end: np.end,
            det,
            pronoun,
        });
    }

    fn relative(&mut self, rel: &Rel, head: RefId, out: &mut Drs) {
        let saved = self.gap.replace(Arg::Ref(head));
        self.clause(&rel.clause, out);
        self.gap = saved;
    }

    fn vp(&mut self, vp: &Vp, x: Arg, out: &mut Drs) {
        match vp {
            Vp::Verb {
                verb,
                negated,
                progressive,
                object,
                pp,
            } => {
                let prog = *progressive;
                self.negated(*negated, out, |b, out| {
                    let finish = |b: &mut Self, mut args: Vec<Arg>, out: &mut Drs| match pp {
                        Some((prep, pnp)) => b.np(pnp, out, &|b, z, out| {
                            let mut args = args.clone();
                            args.push(z);
                            let pred = format!("{}_{}", verb.pred, prep.pred);
                            b.emit_verb(verb, pred, args, prog, out);
                        }),
                        None => {
                            let pred = verb.pred.clone();
                            b.emit_verb(verb, pred, std::mem::take(&mut args), prog, out);
                        }
                    };
                    match object {
                        Some(o) => b.np(o, out, &|b, y, out| finish(b, vec![x.clone(), y], out)),
                        None => finish(b, vec![x.clone()], out),
                    }
                });
            }
            Vp::CopulaNp { negated, np } => {
                self.negated(*negated, out, |b, out| {
                    b.np(np, out, &|_, y, out| {
                        out.conditions.push(Condition::atomic("is", vec![x.clone(), y]));
                    })
                });
            }
            Vp::CopulaAdj { negated, adjs } => {
                self.negated(*negated, out, |_, out| {
                    for a in adjs {
                        out.conditions.push(Condition::atomic(a.pred.clone(), vec![x.clone()]));
                    }
                });
            }
            Vp::CopulaCmp { negated, cmp, np } => {
                self.negated(*negated, out, |b, out| {
                    b.np(np, out, &|_, y, out| {
                        out.conditions.push(Condition::atomic(cmp.pred.clone(), vec![x.clone(), y]));
                    })
                });
            }
            Vp::List { conjs, items } => {
                self.list(conjs, items, out, &|b, item, out| b.vp(item, x.clone(), out));
            }
        }
    }

    fn emit_verb(&mut self, verb: &LexEntry, pred: String, args: Vec<Arg>, progressive: bool, out: &mut Drs) {
        let kind = match (verb.verb_kind, progressive) {
            (_, true) => VerbKind::State,
            (Some(k), false) => k,
            (None, false) => VerbKind::Event,
        };
        self.events.push(EventHint {
            pred: pred.clone(),
            args: args.clone(),
            kind,
            progressive,
            negated: self.negations > 0,
            slot: self.slot,
            top_level: self.depth == 0,
        });
        out.conditions.push(Condition::atomic(pred, args));
    }
}
