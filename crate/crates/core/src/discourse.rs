//! Anaphora resolution: pronouns, definite descriptions and proper names are
//! linked to accessible antecedents by equality conditions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::drs::{Arg, Condition, Drs, DrsError, Number, RefId};
use crate::parser::{AnaphorKind, ParseResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResolutionKind {
    Pronoun,
    DefiniteAnaphoric,
    DefiniteUnique,
    /// A name used before.
    Name,
    /// First mention of a name.
    NewName,
}

impl ResolutionKind {
    pub fn name(self) -> &'static str {
        match self {
            ResolutionKind::Pronoun => "pronoun",
            ResolutionKind::DefiniteAnaphoric => "definite-anaphoric",
            ResolutionKind::DefiniteUnique => "definite-unique",
            ResolutionKind::Name => "name",
            ResolutionKind::NewName => "new-name",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub anaphor: RefId,
    pub anaphor_description: String,
    pub antecedent: Option<RefId>,
    pub antecedent_description: Option<String>,
    /// The antecedent is, or is identified with, a named individual.
    pub antecedent_proper: bool,
    pub kind: ResolutionKind,
    pub token: usize,
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.antecedent, &self.antecedent_description) {
            (Some(a), Some(d)) => write!(
                f,
                "{} \"{}\" -> {} \"{}\" ({})",
                self.anaphor,
                self.anaphor_description,
                a,
                d,
                self.kind.name()
            ),
            _ => write!(f, "{} \"{}\" ({})", self.anaphor, self.anaphor_description, self.kind.name()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResolutionReport {
    pub entries: Vec<Resolution>,
}

impl ResolutionReport {
    pub fn for_token(&self, token: usize) -> Option<&Resolution> {
        self.entries.iter().find(|r| r.token == token)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscourseError {
    #[error("sentence {}, token {}: no antecedent for \"{anaphor}\"", sentence + 1, token + 1)]
    UnresolvedPronoun {
        anaphor: String,
        sentence: usize,
        token: usize,
    },
    #[error(transparent)]
    Drs(#[from] DrsError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolved {
    /// Context with the resolved increment appended.
    pub context: Drs,
    /// The increment alone, with its equality conditions.
    pub increment: Drs,
    pub report: ResolutionReport,
}

/// Facts about referents gathered from a whole discourse.
struct Index {
    parent: BTreeMap<RefId, RefId>,
    genders: BTreeMap<RefId, BTreeSet<String>>,
    numbers: BTreeMap<RefId, Number>,
    unary: BTreeMap<RefId, BTreeSet<String>>,
    names: BTreeMap<RefId, String>,
}

impl Index {
    fn build(drs: &[&Drs]) -> Self {
        let mut ix = Index {
            parent: BTreeMap::new(),
            genders: BTreeMap::new(),
            numbers: BTreeMap::new(),
            unary: BTreeMap::new(),
            names: BTreeMap::new(),
        };
        for d in drs {
            ix.scan(d);
        }
        ix
    }

    fn scan(&mut self, d: &Drs) {
        for c in &d.conditions {
            if let Some((a, b)) = c.as_identity() {
                let (ra, rb) = (self.find(a), self.find(b));
                if ra != rb {
                    self.parent.insert(ra.max(rb), ra.min(rb));
                }
            }
            match c {
                Condition::Gender(r, g) => {
                    self.genders.insert(*r, g.clone());
                }
                Condition::Number(r, n) => {
                    self.numbers.insert(*r, *n);
                }
                Condition::Atomic { pred, args } => match args.as_slice() {
                    [Arg::Ref(r)] => {
                        self.unary.entry(*r).or_default().insert(pred.clone());
                    }
                    [Arg::Ref(r), Arg::Atom(name)] if pred == "named" => {
                        self.names.insert(*r, name.clone());
                    }
                    _ => {}
                },
                Condition::Negation(k) => self.scan(k),
                Condition::IfThen(a, b) | Condition::Disjunction(a, b) => {
                    self.scan(a);
                    self.scan(b);
                }
                Condition::Equality(..) => {}
            }
        }
    }

    fn find(&self, mut r: RefId) -> RefId {
        while let Some(&p) = self.parent.get(&r) {
            r = p;
        }
        r
    }

    fn class(&self, r: RefId, universe: &[RefId]) -> Vec<RefId> {
        let root = self.find(r);
        universe.iter().copied().filter(|&x| self.find(x) == root).collect()
    }

    fn class_gender(&self, class: &[RefId]) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = ["m", "f", "n"].iter().map(|s| s.to_string()).collect();
        for r in class {
            if let Some(g) = self.genders.get(r) {
                out = out.intersection(g).cloned().collect();
            }
        }
        out
    }

    fn class_number(&self, class: &[RefId]) -> Option<Number> {
        class.iter().find_map(|r| self.numbers.get(r).copied())
    }
}

/// `a` and `b` fill two places of one relation: a plain pronoun cannot
/// corefer with its own co-argument.
fn co_arguments(d: &Drs, a: RefId, b: RefId) -> bool {
    d.conditions.iter().any(|c| match c {
        Condition::Atomic { pred, args } if pred != "is" && pred != "named" => {
            args.contains(&Arg::Ref(a)) && args.contains(&Arg::Ref(b))
        }
        Condition::Negation(k) => co_arguments(k, a, b),
        Condition::IfThen(x, y) | Condition::Disjunction(x, y) => co_arguments(x, a, b) || co_arguments(y, a, b),
        _ => false,
    })
}

/// Resolves the anaphors of `parse` against `context`, adding an equality
/// (anaphor on the left) for each resolved one.
pub fn resolve(context: &Drs, parse: &ParseResult) -> Result<Resolved, DiscourseError> {
    let mut increment = parse.drs.clone();
    context.merge(&increment)?;
    let context_ids: Vec<RefId> = context.all_referents().iter().map(|r| r.id).collect();
    let mut report = ResolutionReport::default();

    for anaphor in &parse.anaphors {
        let a = anaphor.referent;
        let Some(path) = increment.declaring_path(a) else {
            continue;
        };
        let ix = Index::build(&[context, &increment]);
        let mut universe = context_ids.clone();
        universe.extend(increment.all_referents().iter().map(|r| r.id));
        // closest first; the context's top level is superordinate to everything new
        let mut candidates: Vec<RefId> = increment.accessible_referents(&path);
        candidates.extend(context.referents.iter().rev().map(|r| r.id));
        candidates.retain(|&c| c < a);
        let accessible: BTreeSet<RefId> = candidates.iter().copied().collect();

        let found = match &anaphor.kind {
            AnaphorKind::Pronoun { gender, number } => candidates
                .iter()
                .copied()
                .filter(|&c| !co_arguments(&increment, a, c))
                .find(|&c| {
                    let class = ix.class(c, &universe);
                    let g = ix.class_gender(&class);
                    !g.is_disjoint(gender) && ix.class_number(&class).is_none_or(|n| n == *number)
                })
                .map(|c| (c, ResolutionKind::Pronoun)),
            AnaphorKind::Definite { pred } => candidates
                .iter()
                .copied()
                .find(|&c| {
                    ix.class(c, &universe)
                        .iter()
                        .any(|m| *m != a && ix.unary.get(m).is_some_and(|p| p.contains(pred)))
                })
                .map(|c| (c, ResolutionKind::DefiniteAnaphoric)),
            AnaphorKind::Name { name } => {
                let mut named: Vec<RefId> = context
                    .referents
                    .iter()
                    .chain(&increment.referents)
                    .map(|r| r.id)
                    .filter(|&r| r < a && ix.names.get(&r) == Some(name))
                    .collect();
                named.sort();
                named.first().map(|&c| (c, ResolutionKind::Name))
            }
        };

        let Some((candidate, kind)) = found else {
            let kind = match anaphor.kind {
                AnaphorKind::Pronoun { .. } => {
                    return Err(DiscourseError::UnresolvedPronoun {
                        anaphor: anaphor.description.clone(),
                        sentence: parse.sentence,
                        token: anaphor.token,
                    })
                }
                AnaphorKind::Definite { .. } => {
                    if let Some(r) = increment.referent_mut(a) {
                        r.unique = true;
                    }
                    ResolutionKind::DefiniteUnique
                }
                AnaphorKind::Name { .. } => ResolutionKind::NewName,
            };
            report.entries.push(Resolution {
                anaphor: a,
                anaphor_description: anaphor.description.clone(),
                antecedent: None,
                antecedent_description: None,
                antecedent_proper: false,
                kind,
                token: anaphor.token,
            });
            continue;
        };

        // equate with the class member declared furthest out
        let depth = |r: RefId| {
            increment
                .declaring_path(r)
                .map_or(0, |p| p.len())
        };
        let class = ix.class(candidate, &universe);
        let target = class
            .iter()
            .copied()
            .filter(|r| accessible.contains(r))
            .min_by_key(|&r| (depth(r), r))
            .unwrap_or(candidate);
        let lookup = |r: RefId| {
            context
                .referent(r)
                .or_else(|| increment.referent(r))
                .map(|x| x.origin.clone())
        };
        let proper = class.iter().find_map(|&r| lookup(r).filter(|o| o.proper));
        let description = proper
            .clone()
            .or_else(|| lookup(candidate))
            .map(|o| o.description);
        if let Some(level) = increment.sub_mut(&path) {
            level.conditions.push(Condition::Equality(a, target));
        }
        report.entries.push(Resolution {
            anaphor: a,
            anaphor_description: anaphor.description.clone(),
            antecedent: Some(target),
            antecedent_description: description,
            antecedent_proper: proper.is_some(),
            kind,
            token: anaphor.token,
        });
    }

    let merged = context.merge(&increment)?;
    Ok(Resolved {
        context: merged,
        increment,
        report,
    })
}
