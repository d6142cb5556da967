//! Discourse representation structures.
//!
//! A [`Drs`] pairs a referent list with a condition list. Complex conditions
//! (implication, negation, disjunction) nest sub-DRSs; a [`DrsPath`] names one
//! of them from the root.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::lexicon::render_gender;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RefId(pub u32);

impl fmt::Display for RefId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Origin {
    pub sentence: usize,
    /// Noun phrase text without its determiner (`simple money dispenser`), or
    /// the name for proper nouns.
    pub description: String,
    pub proper: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Referent {
    pub id: RefId,
    pub origin: Origin,
    /// Definite description with no antecedent.
    pub unique: bool,
}

impl Referent {
    pub fn new(id: RefId, sentence: usize, description: impl Into<String>) -> Self {
        Referent {
            id,
            origin: Origin {
                sentence,
                description: description.into(),
                proper: false,
            },
            unique: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arg {
    Ref(RefId),
    Atom(String),
    Num(i64),
}

impl Arg {
    pub fn as_ref(&self) -> Option<RefId> {
        match self {
            Arg::Ref(r) => Some(*r),
            _ => None,
        }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Ref(r) => write!(f, "{r}"),
            Arg::Atom(a) => write!(f, "{a}"),
            Arg::Num(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Number {
    Sg,
    Pl,
}

impl Number {
    pub fn name(self) -> &'static str {
        match self {
            Number::Sg => "sg",
            Number::Pl => "pl",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Condition {
    Atomic { pred: String, args: Vec<Arg> },
    Equality(RefId, RefId),
    Negation(Drs),
    IfThen(Drs, Drs),
    Disjunction(Drs, Drs),
    Gender(RefId, BTreeSet<String>),
    Number(RefId, Number),
}

impl Condition {
    pub fn atomic(pred: impl Into<String>, args: Vec<Arg>) -> Self {
        Condition::Atomic {
            pred: pred.into(),
            args,
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(
            self,
            Condition::Negation(_) | Condition::IfThen(..) | Condition::Disjunction(..)
        )
    }

    /// Copula identity `is(X, Y)` between two referents.
    pub fn as_identity(&self) -> Option<(RefId, RefId)> {
        match self {
            Condition::Atomic { pred, args } if pred == "is" && args.len() == 2 => {
                Some((args[0].as_ref()?, args[1].as_ref()?))
            }
            Condition::Equality(a, b) => Some((*a, *b)),
            _ => None,
        }
    }

    fn children(&self) -> Vec<(Branch, &Drs)> {
        match self {
            Condition::Negation(k) => vec![(Branch::Negated, k)],
            Condition::IfThen(a, c) => vec![(Branch::Antecedent, a), (Branch::Consequent, c)],
            Condition::Disjunction(l, r) => vec![(Branch::Left, l), (Branch::Right, r)],
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Antecedent,
    Consequent,
    Negated,
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PathStep {
    pub condition: usize,
    pub branch: Branch,
}

pub type DrsPath = Vec<PathStep>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DrsError {
    #[error("referent {0} is already declared")]
    DuplicateReferent(RefId),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Drs {
    pub referents: Vec<Referent>,
    pub conditions: Vec<Condition>,
}

impl Drs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.referents.is_empty() && self.conditions.is_empty()
    }

    pub fn declares(&self, id: RefId) -> bool {
        self.referents.iter().any(|r| r.id == id)
    }

    /// Every referent declared anywhere in the structure, in tree order.
    pub fn all_referents(&self) -> Vec<&Referent> {
        let mut out: Vec<&Referent> = self.referents.iter().collect();
        for c in &self.conditions {
            for (_, sub) in c.children() {
                out.extend(sub.all_referents());
            }
        }
        out
    }

    pub fn referent(&self, id: RefId) -> Option<&Referent> {
        self.all_referents().into_iter().find(|r| r.id == id)
    }

    pub fn referent_mut(&mut self, id: RefId) -> Option<&mut Referent> {
        if let Some(pos) = self.referents.iter().position(|r| r.id == id) {
            return self.referents.get_mut(pos);
        }
        for c in &mut self.conditions {
            let found = match c {
                Condition::Negation(k) => k.referent_mut(id),
                Condition::IfThen(a, b) | Condition::Disjunction(a, b) => {
                    match a.referent_mut(id) {
                        Some(r) => Some(r),
                        None => b.referent_mut(id),
                    }
                }
                _ => None,
            };
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Path of the sub-DRS that declares `id`.
    pub fn declaring_path(&self, id: RefId) -> Option<DrsPath> {
        if self.declares(id) {
            return Some(Vec::new());
        }
        for (i, c) in self.conditions.iter().enumerate() {
            for (branch, sub) in c.children() {
                if let Some(mut rest) = sub.declaring_path(id) {
                    rest.insert(0, PathStep { condition: i, branch });
                    return Some(rest);
                }
            }
        }
        None
    }

    pub fn sub(&self, path: &[PathStep]) -> Option<&Drs> {
        let Some((step, rest)) = path.split_first() else {
            return Some(self);
        };
        let child = self
            .conditions
            .get(step.condition)?
            .children()
            .into_iter()
            .find(|(b, _)| *b == step.branch)?
            .1;
        child.sub(rest)
    }

    pub fn sub_mut(&mut self, path: &[PathStep]) -> Option<&mut Drs> {
        let Some((step, rest)) = path.split_first() else {
            return Some(self);
        };
        let child = match (self.conditions.get_mut(step.condition)?, step.branch) {
            (Condition::Negation(k), Branch::Negated) => k,
            (Condition::IfThen(a, _), Branch::Antecedent) => a,
            (Condition::IfThen(_, c), Branch::Consequent) => c,
            (Condition::Disjunction(l, _), Branch::Left) => l,
            (Condition::Disjunction(_, r), Branch::Right) => r,
            _ => return None,
        };
        child.sub_mut(rest)
    }

    /// The DRS levels visible from `path`, innermost first. An implication's
    /// consequent also sees its antecedent.
    pub fn accessible_levels(&self, path: &[PathStep]) -> Vec<&Drs> {
        let mut levels = vec![self];
        let mut cur = self;
        for step in path {
            let Some(cond) = cur.conditions.get(step.condition) else {
                break;
            };
            if let (Condition::IfThen(a, _), Branch::Consequent) = (cond, step.branch) {
                levels.push(a);
            }
            match cond.children().into_iter().find(|(b, _)| *b == step.branch) {
                Some((_, next)) => {
                    levels.push(next);
                    cur = next;
                }
                None => break,
            }
        }
        levels.reverse();
        levels
    }

    /// Referents an anaphor at `path` may refer to: the current level first,
    /// then each superordinate level, most recent first within a level.
    pub fn accessible_referents(&self, path: &[PathStep]) -> Vec<RefId> {
        self.accessible_levels(path)
            .into_iter()
            .flat_map(|level| level.referents.iter().rev().map(|r| r.id))
            .collect()
    }

    /// Appends `increment`, whose referents must all be new.
    pub fn merge(&self, increment: &Drs) -> Result<Drs, DrsError> {
        let existing: BTreeSet<RefId> = self.all_referents().iter().map(|r| r.id).collect();
        for r in increment.all_referents() {
            if existing.contains(&r.id) {
                return Err(DrsError::DuplicateReferent(r.id));
            }
        }
        let mut out = self.clone();
        out.referents.extend(increment.referents.iter().cloned());
        out.conditions.extend(increment.conditions.iter().cloned());
        Ok(out)
    }

    /// Drops agreement conditions and applies identities, keeping the earlier
    /// referent of each identified pair.
    pub fn simplify(&self) -> Drs {
        self.simplify_with_substitution().0
    }

    /// As [`Drs::simplify`], also returning where each eliminated referent went.
    pub fn simplify_with_substitution(&self) -> (Drs, BTreeMap<RefId, RefId>) {
        let mut parent: BTreeMap<RefId, RefId> = BTreeMap::new();
        fn find(parent: &BTreeMap<RefId, RefId>, mut x: RefId) -> RefId {
            while let Some(&p) = parent.get(&x) {
                if p == x {
                    break;
                }
                x = p;
            }
            x
        }
        // referents declared further out survive; among equals, the older one
        let rank = |r: RefId| (self.declaring_path(r).map_or(0, |p| p.len()), r);
        let mut pairs = Vec::new();
        self.collect_identities(&mut pairs);
        for (a, b) in pairs {
            let (ra, rb) = (find(&parent, a), find(&parent, b));
            if ra != rb {
                let (keep, drop) = if rank(ra) < rank(rb) { (ra, rb) } else { (rb, ra) };
                parent.insert(drop, keep);
            }
        }
        let subst: BTreeMap<RefId, RefId> = parent
            .keys()
            .map(|&k| (k, find(&parent, k)))
            .filter(|(k, v)| k != v)
            .collect();
        (self.apply_simplification(&subst), subst)
    }

    fn collect_identities(&self, out: &mut Vec<(RefId, RefId)>) {
        for c in &self.conditions {
            if let Some(pair) = c.as_identity() {
                out.push(pair);
            }
            for (_, sub) in c.children() {
                sub.collect_identities(out);
            }
        }
    }

    fn apply_simplification(&self, subst: &BTreeMap<RefId, RefId>) -> Drs {
        let map = |r: RefId| *subst.get(&r).unwrap_or(&r);
        let mut referents: Vec<Referent> = Vec::new();
        for r in &self.referents {
            if !subst.contains_key(&r.id) && !referents.iter().any(|x| x.id == r.id) {
                referents.push(r.clone());
            }
        }
        let mut conditions: Vec<Condition> = Vec::new();
        for c in &self.conditions {
            let new = match c {
                Condition::Gender(..) | Condition::Number(..) | Condition::Equality(..) => continue,
                c if c.as_identity().is_some() => continue,
                Condition::Atomic { pred, args } => Condition::Atomic {
                    pred: pred.clone(),
                    args: args
                        .iter()
                        .map(|a| match a {
                            Arg::Ref(r) => Arg::Ref(map(*r)),
                            other => other.clone(),
                        })
                        .collect(),
                },
                Condition::Negation(k) => Condition::Negation(k.apply_simplification(subst)),
                Condition::IfThen(a, b) => {
                    Condition::IfThen(a.apply_simplification(subst), b.apply_simplification(subst))
                }
                Condition::Disjunction(a, b) => Condition::Disjunction(
                    a.apply_simplification(subst),
                    b.apply_simplification(subst),
                ),
            };
            if !conditions.contains(&new) {
                conditions.push(new);
            }
        }
        Drs {
            referents,
            conditions,
        }
    }

    /// Names of atomic conditions anywhere in the structure.
    pub fn atomic_preds(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for c in &self.conditions {
            if let Condition::Atomic { pred, .. } = c {
                out.insert(pred.clone());
            }
            for (_, sub) in c.children() {
                out.extend(sub.atomic_preds());
            }
        }
        out
    }

    /// Term notation: `drs([X1], [customer(X1)])`. An implication's consequent
    /// lists the antecedent referents after its own, since it extends them.
    pub fn to_term(&self) -> String {
        self.term_with(&[])
    }

    fn term_with(&self, inherited: &[RefId]) -> String {
        let mut ids: Vec<String> = self.referents.iter().map(|r| r.id.to_string()).collect();
        ids.extend(inherited.iter().map(|r| r.to_string()));
        let conds: Vec<String> = self.conditions.iter().map(condition_term).collect();
        format!("drs([{}], [{}])", ids.join(","), conds.join(", "))
    }

    /// Indented box rendering for display.
    pub fn to_boxes(&self) -> String {
        let mut out = String::new();
        self.write_box(&mut out, 0);
        out
    }

    fn write_box(&self, out: &mut String, indent: usize) {
        let pad = "  ".repeat(indent);
        let ids: Vec<String> = self.referents.iter().map(|r| r.id.to_string()).collect();
        let width = 4 + ids.join(" ").len().max(
            self.conditions
                .iter()
                .filter(|c| !c.is_complex())
                .map(|c| condition_term(c).len())
                .max()
                .unwrap_or(0),
        );
        let rule = format!("{pad}+{}+\n", "-".repeat(width));
        out.push_str(&rule);
        out.push_str(&format!("{pad}| {}\n", ids.join(" ")));
        out.push_str(&format!("{pad}|{}\n", "-".repeat(width)));
        for c in &self.conditions {
            match c {
                Condition::Negation(k) => {
                    out.push_str(&format!("{pad}| NOT\n"));
                    k.write_box(out, indent + 1);
                }
                Condition::IfThen(a, b) => {
                    a.write_box(out, indent + 1);
                    out.push_str(&format!("{pad}|   ==>\n"));
                    b.write_box(out, indent + 1);
                }
                Condition::Disjunction(a, b) => {
                    a.write_box(out, indent + 1);
                    out.push_str(&format!("{pad}|   OR\n"));
                    b.write_box(out, indent + 1);
                }
                simple => out.push_str(&format!("{pad}| {}\n", condition_term(simple))),
            }
        }
        out.push_str(&rule);
    }
}

fn condition_term(c: &Condition) -> String {
    match c {
        Condition::Atomic { pred, args } => {
            if args.is_empty() {
                pred.clone()
            } else {
                let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                format!("{pred}({})", args.join(","))
            }
        }
        Condition::Equality(a, b) => format!("{a} = {b}"),
        Condition::Gender(r, g) => format!("gender({r},{})", render_gender(g)),
        Condition::Number(r, n) => format!("number({r},{})", n.name()),
        Condition::Negation(k) => format!("neg({})", k.to_term()),
        Condition::IfThen(a, b) => {
            let inherited: Vec<RefId> = a.referents.iter().map(|r| r.id).collect();
            format!("ifthen({}, {})", a.to_term(), b.term_with(&inherited))
        }
        Condition::Disjunction(a, b) => format!("or({}, {})", a.to_term(), b.to_term()),
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&condition_term(self))
    }
}

impl fmt::Display for Drs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_term())
    }
}
