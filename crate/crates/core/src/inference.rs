//! Depth-bounded SLD resolution with negation as failure.
//!
//! Goals are taken leftmost first and clauses in store order. Every goal
//! carries the depth left to it; a goal reached with none left fails and
//! marks the search incomplete, so a "no" is only reported when the whole
//! tree was explored.

use std::collections::HashSet;

use thiserror::Error;

use crate::logic::{resolve, unify_literals, Bindings, Clause, Literal, Term};

pub const DEFAULT_DEPTH: usize = 64;
/// Wh-questions collect at most this many answers.
pub const MAX_SOLUTIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    /// One substitution per distinct solution, restricted to the query's
    /// variables.
    Yes(Vec<Bindings>),
    No,
    DepthExceeded,
}

impl Answer {
    pub fn is_yes(&self) -> bool {
        matches!(self, Answer::Yes(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("{pred}: arguments are not sufficiently instantiated")]
    Instantiation { pred: String },
    #[error("{pred}: expected a number, got {term}")]
    Type { pred: String, term: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    BiggerThan,
    SmallerThan,
    Equal,
}

impl Comparison {
    pub fn from_pred(pred: &str) -> Option<Self> {
        match pred {
            "bigger_than" => Some(Comparison::BiggerThan),
            "smaller_than" => Some(Comparison::SmallerThan),
            "equal" => Some(Comparison::Equal),
            _ => None,
        }
    }

    pub fn pred(self) -> &'static str {
        match self {
            Comparison::BiggerThan => "bigger_than",
            Comparison::SmallerThan => "smaller_than",
            Comparison::Equal => "equal",
        }
    }
}

/// The comparison on bound arguments alone.
pub fn builtin_compare(op: Comparison, a: &Term, b: &Term) -> Result<bool, SolveError> {
    if !a.is_ground() || !b.is_ground() {
        return Err(SolveError::Instantiation { pred: op.pred().into() });
    }
    let num = |t: &Term| match t {
        Term::Num(n) => Ok(*n),
        other => Err(SolveError::Type {
            pred: op.pred().into(),
            term: other.to_string(),
        }),
    };
    Ok(match op {
        Comparison::Equal => a == b,
        Comparison::BiggerThan => num(a)? > num(b)?,
        Comparison::SmallerThan => num(a)? < num(b)?,
    })
}

/// Searches a stack of clause lists, consulted in order.
pub struct Solver<'a> {
    layers: Vec<&'a [Clause]>,
    depth: usize,
    renames: usize,
    exceeded: bool,
}

type Goals = Vec<(Literal, usize)>;

impl<'a> Solver<'a> {
    pub fn new(layers: Vec<&'a [Clause]>, depth: usize) -> Self {
        Solver {
            layers,
            depth,
            renames: 0,
            exceeded: false,
        }
    }

    fn clauses_for<'s>(&'s self, goal: &'s Literal) -> impl Iterator<Item = &'a Clause> + 's {
        self.layers
            .iter()
            .flat_map(|l| l.iter())
            .filter(move |c| c.head.pred == goal.pred && c.head.args.len() == goal.args.len())
    }

    fn rename_apart(&mut self, c: &Clause) -> Clause {
        self.renames += 1;
        let n = self.renames;
        let mut f = |v: &str| format!("{v}_{n}");
        Clause {
            head: c.head.rename(&mut f),
            body: c.body.iter().map(|l| l.rename(&mut f)).collect(),
        }
    }

    pub fn solve(&mut self, goals: &[Literal]) -> Result<Answer, SolveError> {
        self.solve_limited(goals, MAX_SOLUTIONS)
    }

    pub fn solve_limited(&mut self, goals: &[Literal], limit: usize) -> Result<Answer, SolveError> {
        self.exceeded = false;
        let vars: Vec<String> = {
            let mut v = Vec::new();
            for g in goals {
                for x in g.vars() {
                    if !v.contains(&x) {
                        v.push(x);
                    }
                }
            }
            v
        };
        let mut raw = Vec::new();
        let start: Goals = goals.iter().map(|g| (g.clone(), self.depth)).collect();
        self.prove(start, Bindings::new(), &mut raw, limit)?;
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for b in raw {
            let projected: Bindings = vars.iter().map(|v| (v.clone(), resolve(&Term::var(v.clone()), &b))).collect();
            let mut key: Vec<(String, Term)> = projected.clone().into_iter().collect();
            key.sort();
            if seen.insert(key) {
                out.push(projected);
            }
        }
        Ok(if !out.is_empty() {
            Answer::Yes(out)
        } else if self.exceeded {
            Answer::DepthExceeded
        } else {
            Answer::No
        })
    }

    fn prove(&mut self, goals: Goals, b: Bindings, out: &mut Vec<Bindings>, limit: usize) -> Result<(), SolveError> {
        if out.len() >= limit {
            return Ok(());
        }
        let Some(((goal, depth), rest)) = goals.split_first() else {
            out.push(b);
            return Ok(());
        };
        let goal = goal.resolve(&b);
        let continue_with = |s: &mut Self, b: Bindings, out: &mut Vec<Bindings>| s.prove(rest.to_vec(), b, out, limit);

        if *depth == 0 {
            self.exceeded = true;
            return Ok(());
        }

        if goal.negated {
            let was = self.exceeded;
            let mut sub = Vec::new();
            self.prove(vec![(goal.positive(), *depth)], b.clone(), &mut sub, 1)?;
            if !sub.is_empty() {
                self.exceeded = was;
                return Ok(());
            }
            // an incomplete search says nothing about absence
            if self.exceeded {
                return Ok(());
            }
            return continue_with(self, b, out);
        }

        if let (Some(op), [x, y]) = (Comparison::from_pred(&goal.pred), goal.args.as_slice()) {
            let has_clauses = self.clauses_for(&goal).next().is_some();
            match op {
                Comparison::BiggerThan | Comparison::SmallerThan => {
                    if matches!((x, y), (Term::Num(_), Term::Num(_))) {
                        if builtin_compare(op, x, y)? {
                            continue_with(self, b, out)?;
                        }
                        return Ok(());
                    }
                    if !has_clauses {
                        builtin_compare(op, x, y)?;
                        return Ok(());
                    }
                }
                Comparison::Equal => {
                    if x.is_ground() && y.is_ground() {
                        if x == y {
                            return continue_with(self, b, out);
                        }
                    } else if !has_clauses {
                        return Err(SolveError::Instantiation { pred: goal.pred.clone() });
                    }
                }
            }
        }

        let candidates: Vec<&Clause> = self.clauses_for(&goal).collect();
        for c in candidates {
            if out.len() >= limit {
                break;
            }
            let c = self.rename_apart(c);
            let mut b2 = b.clone();
            if !unify_literals(&goal, &c.head, &mut b2) {
                continue;
            }
            let mut next: Goals = c.body.iter().map(|l| (l.clone(), depth - 1)).collect();
            next.extend(rest.iter().cloned());
            self.prove(next, b2, out, limit)?;
        }
        Ok(())
    }
}

/// Solves `goals` over one clause list.
pub fn solve(goals: &[Literal], clauses: &[Clause], depth: usize) -> Result<Answer, SolveError> {
    Solver::new(vec![clauses], depth).solve(goals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_literal, parse_statement, Statement};

    fn program(src: &[&str]) -> Vec<Clause> {
        src.iter()
            .map(|s| match parse_statement(s).unwrap() {
                Statement::Clause(c) => c,
                Statement::Denial(_) => panic!(),
            })
            .collect()
    }

    fn goals(src: &[&str]) -> Vec<Literal> {
        src.iter().map(|s| parse_literal(s).unwrap()).collect()
    }

    fn atm() -> Vec<Clause> {
        program(&[
            "named(1,simplemat).",
            "money_dispenser(1).",
            "simple(1).",
            "user_interface(2).",
            "have(1,2).",
            "card([2,X1]) :- customer(X1).",
            "have(X1,[2,X1]) :- customer(X1).",
            "customer(7).",
        ])
    }

    fn values(a: &Answer, var: &str) -> Vec<String> {
        match a {
            Answer::Yes(bs) => bs.iter().map(|b| b[var].to_string()).collect(),
            _ => vec![],
        }
    }

    #[test]
    fn yes_no_and_wh() {
        let kb = atm();
        let a = solve(&goals(&["named(C,simplemat)", "money_dispenser(C)"]), &kb, DEFAULT_DEPTH).unwrap();
        assert_eq!(values(&a, "C"), ["1"]);
        let a = solve(&goals(&["named(C,simplemat)", "user_interface(U)", "simple(U)", "have(C,U)"]), &kb, 64).unwrap();
        assert_eq!(a, Answer::No);
        let a = solve(&goals(&["money_dispenser(W)"]), &kb, 64).unwrap();
        assert_eq!(values(&a, "W"), ["1"]);
    }

    #[test]
    fn skolem_through_one_step() {
        let a = solve(&goals(&["card(X)"]), &atm(), 64).unwrap();
        assert_eq!(values(&a, "X"), ["[2,7]"]);
        let a = solve(&goals(&["have(7,[2,7])"]), &atm(), 64).unwrap();
        assert!(a.is_yes());
        // opaque: a skolem only matches itself
        assert_eq!(solve(&goals(&["have(7,[3,7])"]), &atm(), 64).unwrap(), Answer::No);
    }

    #[test]
    fn duplicates_are_collapsed() {
        let kb = program(&["p(1).", "p(1).", "q(X1) :- p(X1).", "q(1)."]);
        assert_eq!(values(&solve(&goals(&["q(X)"]), &kb, 64).unwrap(), "X"), ["1"]);
    }

    #[test]
    fn negation_as_failure() {
        let kb = program(&["customer(1).", "customer(2).", "card(5).", "have(1,5)."]);
        let a = solve(&goals(&["customer(X)", "\\+ have(X,5)"]), &kb, 64).unwrap();
        assert_eq!(values(&a, "X"), ["2"]);
    }

    #[test]
    fn depth_bound() {
        let kb = program(&["p(X1) :- p(X1)."]);
        assert_eq!(solve(&goals(&["p(1)"]), &kb, 10).unwrap(), Answer::DepthExceeded);
        // negation over an unfinished search is not a yes
        assert_eq!(solve(&goals(&["\\+ p(1)"]), &kb, 10).unwrap(), Answer::DepthExceeded);
        let kb = program(&["p(1).", "p(X1) :- p(X1)."]);
        assert!(solve(&goals(&["p(1)"]), &kb, 10).unwrap().is_yes());
    }

    #[test]
    fn comparisons() {
        assert_eq!(builtin_compare(Comparison::BiggerThan, &Term::Num(5), &Term::Num(3)), Ok(true));
        let sk = Term::Skolem(2, vec![Term::id(7)]);
        assert_eq!(builtin_compare(Comparison::Equal, &sk, &sk.clone()), Ok(true));
        assert!(matches!(
            builtin_compare(Comparison::BiggerThan, &Term::var("X"), &Term::Num(3)),
            Err(SolveError::Instantiation { .. })
        ));
        assert!(matches!(
            builtin_compare(Comparison::SmallerThan, &Term::id(1), &Term::Num(3)),
            Err(SolveError::Type { .. })
        ));
    }

    #[test]
    fn comparisons_in_goals() {
        let kb = program(&["amount(1,#700).", "limit(#500).", "equal(X1,3) :- number(X1).", "number(4)."]);
        let a = solve(&goals(&["amount(1,A)", "limit(L)", "bigger_than(A,L)"]), &kb, 64).unwrap();
        assert!(a.is_yes());
        let a = solve(&goals(&["amount(1,A)", "smaller_than(A,#500)"]), &kb, 64).unwrap();
        assert_eq!(a, Answer::No);
        assert!(matches!(
            solve(&goals(&["bigger_than(X,#3)"]), &kb, 64),
            Err(SolveError::Instantiation { .. })
        ));
        // equal: identity, or what the clauses say
        assert!(solve(&goals(&["equal(4,4)"]), &kb, 64).unwrap().is_yes());
        assert!(solve(&goals(&["equal(4,3)"]), &kb, 64).unwrap().is_yes());
        assert_eq!(solve(&goals(&["equal(5,3)"]), &kb, 64).unwrap(), Answer::No);
        assert_eq!(values(&solve(&goals(&["equal(N,3)"]), &kb, 64).unwrap(), "N"), ["4"]);
    }
}
