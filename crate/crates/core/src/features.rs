//! Linearised feature structures and their unification.
//!
//! A structure maps feature names to values. Values are atoms, disjunctive
//! atom sets (`gender:{m,f}`), nested structures, or unbound. Unification is a
//! plain recursive merge: there is no structure sharing, so two structures
//! unify iff every feature they both bind unifies.
//!
//! The textual form follows the `name:value .. name:value` notation, with
//! nested structures in parentheses:
//!
//! ```
//! use cnl_core::features::FeatureStructure;
//!
//! let a: FeatureStructure = "case:nom .. agr:(person:third .. number:sg)".parse().unwrap();
//! let b: FeatureStructure = "agr:(number:sg)".parse().unwrap();
//! assert_eq!(a.unify(&b).unwrap(), a);
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureValue {
    Atom(String),
    /// Disjunctive value; never empty.
    AtomSet(BTreeSet<String>),
    Struct(FeatureStructure),
    Unbound,
}

impl FeatureValue {
    pub fn atom(s: impl Into<String>) -> Self {
        FeatureValue::Atom(s.into())
    }

    /// Builds a set value. A set with a single member stays a set so that the
    /// written form is preserved; it unifies exactly like the bare atom.
    pub fn set<I, S>(items: I) -> Option<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = items.into_iter().map(Into::into).collect();
        if set.is_empty() {
            None
        } else {
            Some(FeatureValue::AtomSet(set))
        }
    }

    pub fn is_unbound(&self) -> bool {
        matches!(self, FeatureValue::Unbound)
    }

    /// The atoms this value admits, if it is atomic.
    pub fn atoms(&self) -> Option<BTreeSet<String>> {
        match self {
            FeatureValue::Atom(a) => Some(std::iter::once(a.clone()).collect()),
            FeatureValue::AtomSet(s) => Some(s.clone()),
            _ => None,
        }
    }

    pub fn unify(&self, other: &FeatureValue) -> Option<FeatureValue> {
        use FeatureValue::*;
        match (self, other) {
            (Unbound, v) | (v, Unbound) => Some(v.clone()),
            (Atom(a), Atom(b)) => (a == b).then(|| Atom(a.clone())),
            (Atom(a), AtomSet(s)) | (AtomSet(s), Atom(a)) => s.contains(a).then(|| Atom(a.clone())),
            (AtomSet(a), AtomSet(b)) => {
                let meet: BTreeSet<String> = a.intersection(b).cloned().collect();
                (!meet.is_empty()).then_some(AtomSet(meet))
            }
            (Struct(a), Struct(b)) => a.unify(b).map(Struct),
            _ => None,
        }
    }

    /// `self` is at least as specific as `other`.
    pub fn subsumed_by(&self, other: &FeatureValue) -> bool {
        use FeatureValue::*;
        match (self, other) {
            (_, Unbound) => true,
            (Unbound, _) => false,
            (Struct(a), Struct(b)) => a.subsumed_by(b),
            (Struct(_), _) | (_, Struct(_)) => false,
            (a, b) => match (a.atoms(), b.atoms()) {
                (Some(x), Some(y)) => x.is_subset(&y),
                _ => false,
            },
        }
    }
}

impl fmt::Display for FeatureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureValue::Atom(a) => write!(f, "{a}"),
            FeatureValue::AtomSet(s) => {
                let items: Vec<&str> = s.iter().map(String::as_str).collect();
                write!(f, "{{{}}}", items.join(","))
            }
            FeatureValue::Struct(fs) => write!(f, "({fs})"),
            FeatureValue::Unbound => write!(f, "_"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureStructure {
    features: BTreeMap<String, FeatureValue>,
}

impl FeatureStructure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: impl Into<String>, value: FeatureValue) -> Self {
        self.features.insert(name.into(), value);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &FeatureValue)> {
        self.features.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn unify(&self, other: &FeatureStructure) -> Option<FeatureStructure> {
        let mut out = self.features.clone();
        for (name, value) in &other.features {
            let merged = match out.get(name) {
                Some(existing) => existing.unify(value)?,
                None => value.clone(),
            };
            out.insert(name.clone(), merged);
        }
        Some(FeatureStructure { features: out })
    }

    pub fn subsumed_by(&self, general: &FeatureStructure) -> bool {
        general.features.iter().all(|(name, value)| {
            self.features
                .get(name)
                .unwrap_or(&FeatureValue::Unbound)
                .subsumed_by(value)
        })
    }

    /// Value at `path`; absent features read as unbound.
    pub fn get(&self, path: &[&str]) -> FeatureValue {
        let Some((first, rest)) = path.split_first() else {
            return FeatureValue::Struct(self.clone());
        };
        match self.features.get(*first) {
            None => FeatureValue::Unbound,
            Some(v) if rest.is_empty() => v.clone(),
            Some(FeatureValue::Struct(inner)) => inner.get(rest),
            Some(_) => FeatureValue::Unbound,
        }
    }

    /// Unifies `value` into the structure at `path`. Returns `None` on a clash.
    pub fn put(&self, path: &[&str], value: FeatureValue) -> Option<FeatureStructure> {
        let Some((first, rest)) = path.split_first() else {
            return match value {
                FeatureValue::Struct(fs) => self.unify(&fs),
                FeatureValue::Unbound => Some(self.clone()),
                _ => None,
            };
        };
        let mut wrapped = value;
        for name in rest.iter().rev() {
            wrapped = FeatureValue::Struct(FeatureStructure::new().with(*name, wrapped));
        }
        self.unify(&FeatureStructure::new().with(*first, wrapped))
    }
}

impl fmt::Display for FeatureStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, value) in &self.features {
            if !first {
                write!(f, " .. ")?;
            }
            first = false;
            write!(f, "{name}:{value}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad feature structure at byte {offset}: {message}")]
pub struct FeatureSyntaxError {
    pub offset: usize,
    pub message: String,
}

impl FromStr for FeatureStructure {
    type Err = FeatureSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = LinearParser { src: s, pos: 0 };
        let fs = p.structure()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(fs)
    }
}

struct LinearParser<'a> {
    src: &'a str,
    pos: usize,
}

impl LinearParser<'_> {
    fn error(&self, message: &str) -> FeatureSyntaxError {
        FeatureSyntaxError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> Result<String, FeatureSyntaxError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_alphanumeric() || c == '_' || c == '-'))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected a name"));
        }
        self.pos += len;
        Ok(rest[..len].to_string())
    }

    fn structure(&mut self) -> Result<FeatureStructure, FeatureSyntaxError> {
        let mut fs = FeatureStructure::new();
        self.skip_ws();
        if self.pos == self.src.len() || self.src[self.pos..].starts_with(')') {
            return Ok(fs);
        }
        loop {
            let name = self.name()?;
            if !self.eat(":") {
                return Err(self.error("expected ':'"));
            }
            let value = self.value()?;
            if fs.features.insert(name, value).is_some() {
                return Err(self.error("feature bound twice"));
            }
            if !self.eat("..") {
                return Ok(fs);
            }
        }
    }

    fn value(&mut self) -> Result<FeatureValue, FeatureSyntaxError> {
        if self.eat("(") {
            let inner = self.structure()?;
            if !self.eat(")") {
                return Err(self.error("expected ')'"));
            }
            return Ok(FeatureValue::Struct(inner));
        }
        if self.eat("{") {
            let mut items = Vec::new();
            loop {
                items.push(self.name()?);
                if !self.eat(",") {
                    break;
                }
            }
            if !self.eat("}") {
                return Err(self.error("expected '}'"));
            }
            return Ok(FeatureValue::set(items).expect("nonempty by construction"));
        }
        if self.eat("_") {
            return Ok(FeatureValue::Unbound);
        }
        Ok(FeatureValue::Atom(self.name()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(s: &str) -> FeatureStructure {
        s.parse().unwrap()
    }

    #[test]
    fn unifies_nested_agreement() {
        let a = fs("case:nom .. agr:(person:third .. number:sg)");
        let b = fs("agr:(number:sg)");
        let u = a.unify(&b).unwrap();
        assert_eq!(u.to_string(), "agr:(number:sg .. person:third) .. case:nom");
        assert_eq!(u, a);
    }

    #[test]
    fn gender_sets_intersect() {
        let u = fs("gender:{m,f}").unify(&fs("gender:{f,n}")).unwrap();
        assert_eq!(u.to_string(), "gender:{f}");
    }

    #[test]
    fn atom_clash_fails() {
        assert!(fs("number:sg").unify(&fs("number:pl")).is_none());
        assert!(fs("gender:{m,f}").unify(&fs("gender:n")).is_none());
        assert!(fs("agr:sg").unify(&fs("agr:(number:sg)")).is_none());
    }

    #[test]
    fn atom_against_set_is_membership() {
        assert_eq!(
            fs("gender:{m,f,n}").unify(&fs("gender:n")).unwrap(),
            fs("gender:n")
        );
    }

    #[test]
    fn get_and_put() {
        let empty = FeatureStructure::new();
        let put = empty.put(&["agr", "number"], FeatureValue::atom("sg")).unwrap();
        assert_eq!(put.get(&["agr", "number"]), FeatureValue::atom("sg"));
        assert_eq!(empty.get(&["gender"]), FeatureValue::Unbound);
        assert!(fs("agr:(number:sg)")
            .put(&["agr", "number"], FeatureValue::atom("pl"))
            .is_none());
    }

    #[test]
    fn parse_rejects_duplicates_and_garbage() {
        assert!("a:b .. a:c".parse::<FeatureStructure>().is_err());
        assert!("a:(b:c".parse::<FeatureStructure>().is_err());
        assert!("a b".parse::<FeatureStructure>().is_err());
    }
}
