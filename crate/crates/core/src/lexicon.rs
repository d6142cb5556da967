//! Application vocabulary: compiled-in function words plus open-class entries
//! loaded from a line-based file.
//!
//! File format, one entry per line, `#` starts a comment:
//!
//! ```text
//! category|surface|lemma|pred|key=value|key=value...
//! noun|money dispenser|money dispenser|money_dispenser|gender=n|number=sg
//! verb|enter|enter|enter|verb_kind=event
//! ```
//!
//! `gender` takes a comma-separated subset of `m,f,n`. `verb_kind` is one of
//! `event`, `state`, `copula`. Any other key is stored as a feature
//! (`subcat=iv` marks an intransitive verb).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::features::{FeatureStructure, FeatureValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Noun,
    ProperNoun,
    Verb,
    Adjective,
    Determiner,
    Preposition,
    Pronoun,
    Conjunction,
    Comparative,
    QueryWord,
}

impl Category {
    pub fn name(self) -> &'static str {
        match self {
            Category::Noun => "noun",
            Category::ProperNoun => "proper-noun",
            Category::Verb => "verb",
            Category::Adjective => "adjective",
            Category::Determiner => "determiner",
            Category::Preposition => "preposition",
            Category::Pronoun => "pronoun",
            Category::Conjunction => "conjunction",
            Category::Comparative => "comparative",
            Category::QueryWord => "query-word",
        }
    }

    pub fn is_open(self) -> bool {
        matches!(
            self,
            Category::Noun | Category::ProperNoun | Category::Verb | Category::Adjective
        )
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "noun" => Category::Noun,
            "proper-noun" | "proper noun" | "name" => Category::ProperNoun,
            "verb" => Category::Verb,
            "adjective" | "adj" => Category::Adjective,
            "determiner" => Category::Determiner,
            "preposition" | "prep" => Category::Preposition,
            "pronoun" => Category::Pronoun,
            "conjunction" => Category::Conjunction,
            "comparative" => Category::Comparative,
            "query-word" => Category::QueryWord,
            other => return Err(format!("unknown category `{other}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VerbKind {
    Event,
    State,
    Copula,
}

impl VerbKind {
    pub fn name(self) -> &'static str {
        match self {
            VerbKind::Event => "event",
            VerbKind::State => "state",
            VerbKind::Copula => "copula",
        }
    }
}

impl FromStr for VerbKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "event" => Ok(VerbKind::Event),
            "state" => Ok(VerbKind::State),
            "copula" => Ok(VerbKind::Copula),
            other => Err(format!("unknown verb kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LexEntry {
    pub surface: String,
    pub category: Category,
    pub features: FeatureStructure,
    pub lemma: String,
    pub pred: String,
    pub verb_kind: Option<VerbKind>,
}

/// Maps a written form to a relation name: lowercase, spaces and hyphens
/// become underscores.
pub fn pred_name(grapheme: &str) -> String {
    grapheme
        .trim()
        .to_lowercase()
        .chars()
        .map(|c| if c == ' ' || c == '-' { '_' } else { c })
        .collect()
}

impl LexEntry {
    pub fn new(category: Category, surface: &str) -> Self {
        let features = match category {
            Category::Noun => FeatureStructure::new()
                .with("gender", FeatureValue::set(["n"]).unwrap())
                .with("number", FeatureValue::atom("sg")),
            Category::ProperNoun => FeatureStructure::new()
                .with("gender", FeatureValue::set(["m", "f", "n"]).unwrap())
                .with("number", FeatureValue::atom("sg")),
            _ => FeatureStructure::new(),
        };
        LexEntry {
            surface: surface.to_string(),
            category,
            features,
            lemma: surface.to_lowercase(),
            pred: pred_name(surface),
            verb_kind: (category == Category::Verb).then_some(VerbKind::Event),
        }
    }

    pub fn with_gender<I: IntoIterator<Item = &'static str>>(mut self, genders: I) -> Self {
        if let Some(v) = FeatureValue::set(genders) {
            self.features = self.features.with("gender", v);
        }
        self
    }

    pub fn with_verb_kind(mut self, kind: VerbKind) -> Self {
        self.verb_kind = Some(kind);
        self
    }

    pub fn with_feature(mut self, name: &str, value: FeatureValue) -> Self {
        self.features = self.features.with(name, value);
        self
    }

    pub fn gender(&self) -> Option<BTreeSet<String>> {
        self.features.get(&["gender"]).atoms()
    }

    pub fn is_intransitive(&self) -> bool {
        self.features.get(&["subcat"]) == FeatureValue::atom("iv")
    }

    fn validate(&self) -> Result<(), String> {
        if self.surface.trim().is_empty() {
            return Err("empty surface".into());
        }
        if self.category.is_open() && self.pred.trim().is_empty() {
            return Err("open-class entry needs a pred".into());
        }
        match self.features.get(&["gender"]) {
            FeatureValue::Unbound => {}
            v => match v.atoms() {
                Some(set) if !set.is_empty() && set.iter().all(|g| ["m", "f", "n"].contains(&g.as_str())) => {}
                _ => return Err("gender must be a nonempty subset of m,f,n".into()),
            },
        }
        if self.verb_kind.is_some() && self.category != Category::Verb {
            return Err("verb_kind only applies to verbs".into());
        }
        Ok(())
    }

    /// File-format line for this entry.
    pub fn to_line(&self) -> String {
        let mut parts = vec![
            self.category.name().to_string(),
            self.surface.clone(),
            self.lemma.clone(),
            self.pred.clone(),
        ];
        for (name, value) in self.features.iter() {
            let rendered = match value {
                FeatureValue::Atom(a) => a.clone(),
                FeatureValue::AtomSet(s) => order_genders(s).join(","),
                other => other.to_string(),
            };
            parts.push(format!("{name}={rendered}"));
        }
        if let Some(kind) = self.verb_kind {
            parts.push(format!("verb_kind={}", kind.name()));
        }
        parts.join("|")
    }

    pub fn from_line(line: &str) -> Result<Self, String> {
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() < 4 {
            return Err("expected `category|surface|lemma|pred[|key=value...]`".into());
        }
        let category: Category = fields[0].parse()?;
        let mut entry = LexEntry::new(category, fields[1]);
        entry.features = FeatureStructure::new();
        entry.verb_kind = None;
        entry.lemma = fields[2].to_string();
        entry.pred = fields[3].to_string();
        if entry.lemma.is_empty() {
            entry.lemma = entry.surface.to_lowercase();
        }
        for field in &fields[4..] {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, found `{field}`"))?;
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(format!("empty value for `{key}`"));
            }
            match key {
                "verb_kind" => entry.verb_kind = Some(value.parse()?),
                "gender" => {
                    let v = FeatureValue::set(value.split(',').map(|g| g.trim().to_string()))
                        .ok_or("empty gender")?;
                    entry.features = entry.features.with("gender", v);
                }
                _ if value.contains(',') => {
                    let v = FeatureValue::set(value.split(',').map(|g| g.trim().to_string()))
                        .ok_or("empty value set")?;
                    entry.features = entry.features.with(key, v);
                }
                _ => entry.features = entry.features.with(key, FeatureValue::atom(value)),
            }
        }
        if category == Category::Verb && entry.verb_kind.is_none() {
            entry.verb_kind = Some(VerbKind::Event);
        }
        entry.validate()?;
        Ok(entry)
    }
}

fn order_genders(set: &BTreeSet<String>) -> Vec<String> {
    let rank = |g: &str| match g {
        "m" => 0,
        "f" => 1,
        "n" => 2,
        _ => 3,
    };
    let mut v: Vec<String> = set.iter().cloned().collect();
    v.sort_by_key(|g| (rank(g), g.clone()));
    v
}

/// Renders a gender set in m,f,n order: a single gender bare, several as a
/// bracketed list.
pub fn render_gender(set: &BTreeSet<String>) -> String {
    let ordered = order_genders(set);
    if ordered.len() == 1 {
        ordered[0].clone()
    } else {
        format!("[{}]", ordered.join(","))
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("entry `{surface}` ({category}) already present with different features")]
    DuplicateEntry { surface: String, category: Category },
    #[error("invalid entry `{surface}`: {reason}")]
    InvalidEntry { surface: String, reason: String },
    #[error("lexicon line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("lexicon i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Open-class entries plus the built-in function words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: Vec<LexEntry>,
    index: BTreeMap<String, Vec<usize>>,
    max_words: usize,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// The lexicon shipped with the crate (the automated teller machine domain).
    pub fn atm() -> Self {
        Self::parse(include_str!("../data/atm.lex")).expect("bundled lexicon is valid")
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Length in words of the longest surface form, built-ins included.
    pub fn max_words(&self) -> usize {
        self.max_words.max(2)
    }

    pub fn add_entry(&mut self, entry: LexEntry) -> Result<(), LexiconError> {
        entry.validate().map_err(|reason| LexiconError::InvalidEntry {
            surface: entry.surface.clone(),
            reason,
        })?;
        let key = entry.surface.to_lowercase();
        if let Some(ids) = self.index.get(&key) {
            for &i in ids {
                let old = &self.entries[i];
                if old.category == entry.category {
                    if *old == entry {
                        return Ok(());
                    }
                    return Err(LexiconError::DuplicateEntry {
                        surface: entry.surface,
                        category: entry.category,
                    });
                }
            }
        }
        self.max_words = self.max_words.max(key.split_whitespace().count());
        self.index.entry(key).or_default().push(self.entries.len());
        self.entries.push(entry);
        Ok(())
    }

    /// Entries spelled exactly `surface` (case-insensitive), without inflection.
    pub fn exact(&self, surface: &str) -> Vec<LexEntry> {
        let key = normalize(surface);
        let mut out: Vec<LexEntry> = builtin_entries()
            .iter()
            .filter(|e| e.surface == key)
            .cloned()
            .collect();
        if let Some(ids) = self.index.get(&key) {
            out.extend(ids.iter().map(|&i| self.entries[i].clone()));
        }
        out
    }

    /// All readings of a written form, inflected forms included. Verbs come
    /// back with `vform` (`fin`, `inf`, `ing`) and, for finite forms, `agr`
    /// features; nouns with `number`.
    pub fn lookup(&self, word: &str) -> Vec<LexEntry> {
        let key = normalize(word);
        let mut out = Vec::new();
        for e in self.exact(&key) {
            match e.category {
                Category::Verb => {
                    out.push(verb_form(&e, "inf", None));
                    out.push(verb_form(&e, "fin", Some("pl")));
                }
                _ => out.push(e),
            }
        }
        let (init, last) = match key.rsplit_once(' ') {
            Some((init, last)) => (format!("{init} "), last.to_string()),
            None => (String::new(), key.clone()),
        };
        for stem in third_singular_stems(&last) {
            for e in self.exact(&format!("{init}{stem}")) {
                if e.category == Category::Verb {
                    out.push(verb_form(&e, "fin", Some("sg")));
                }
            }
            for e in self.exact(&format!("{init}{stem}")) {
                if e.category == Category::Noun {
                    let mut plural = e.clone();
                    plural.features = plural.features.with("number", FeatureValue::atom("pl"));
                    out.push(plural);
                }
            }
        }
        for stem in ing_stems(&last) {
            for e in self.exact(&format!("{init}{stem}")) {
                if e.category == Category::Verb {
                    out.push(verb_form(&e, "ing", None));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Longest run of `words` (from the front) that has any reading.
    pub fn longest_match(&self, words: &[&str]) -> Option<(usize, Vec<LexEntry>)> {
        let max = self.max_words().min(words.len());
        (1..=max).rev().find_map(|n| {
            let found = self.lookup(&words[..n].join(" "));
            (!found.is_empty()).then_some((n, found))
        })
    }

    /// Grapheme (written form) for a relation name.
    pub fn grapheme(&self, pred: &str, category: Option<Category>) -> Option<&LexEntry> {
        self.entries
            .iter()
            .chain(builtin_entries().iter())
            .find(|e| e.pred == pred && category.is_none_or(|c| c == e.category))
    }

    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lex = Lexicon::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let entry = LexEntry::from_line(line).map_err(|message| LexiconError::Format {
                line: n + 1,
                message,
            })?;
            lex.add_entry(entry).map_err(|e| LexiconError::Format {
                line: n + 1,
                message: e.to_string(),
            })?;
        }
        Ok(lex)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# category|surface|lemma|pred|features\n");
        for e in &self.entries {
            out.push_str(&e.to_line());
            out.push('\n');
        }
        out
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), LexiconError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn normalize(s: &str) -> String {
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

fn verb_form(e: &LexEntry, vform: &str, number: Option<&str>) -> LexEntry {
    let mut out = e.clone();
    out.features = out.features.with("vform", FeatureValue::atom(vform));
    if let Some(number) = number {
        let agr = FeatureStructure::new()
            .with("person", FeatureValue::atom("third"))
            .with("number", FeatureValue::atom(number));
        out.features = out.features.with("agr", FeatureValue::Struct(agr));
    }
    out
}

/// Candidate stems for a form ending in the third-singular / plural `-s`.
fn third_singular_stems(word: &str) -> Vec<String> {
    let mut stems = Vec::new();
    match word {
        "has" => stems.push("have".to_string()),
        "does" => stems.push("do".to_string()),
        _ => {}
    }
    if let Some(s) = word.strip_suffix("ies") {
        stems.push(format!("{s}y"));
    }
    if let Some(s) = word.strip_suffix("es") {
        stems.push(s.to_string());
    }
    if let Some(s) = word.strip_suffix('s') {
        if !s.is_empty() && !s.ends_with('s') {
            stems.push(s.to_string());
        }
    }
    stems
}

fn ing_stems(word: &str) -> Vec<String> {
    let Some(s) = word.strip_suffix("ing") else {
        return Vec::new();
    };
    if s.is_empty() {
        return Vec::new();
    }
    let mut stems = vec![s.to_string(), format!("{s}e")];
    let b = s.as_bytes();
    if b.len() >= 2 && b[b.len() - 1] == b[b.len() - 2] {
        stems.push(s[..s.len() - 1].to_string());
    }
    stems
}

/// Third person singular present of a verb lemma.
pub fn third_singular(lemma: &str) -> String {
    let (init, last) = match lemma.rsplit_once(' ') {
        Some((init, last)) => (format!("{init} "), last),
        None => (String::new(), lemma),
    };
    let inflected = match last {
        "have" => "has".to_string(),
        "do" => "does".to_string(),
        "be" => "is".to_string(),
        w if w.ends_with('y') && !w.ends_with("ay") && !w.ends_with("ey") && !w.ends_with("oy") => {
            format!("{}ies", &w[..w.len() - 1])
        }
        w if w.ends_with('s') || w.ends_with("sh") || w.ends_with("ch") || w.ends_with('x') || w.ends_with('o') => {
            format!("{w}es")
        }
        w => format!("{w}s"),
    };
    format!("{init}{inflected}")
}

fn builtin_entries() -> &'static [LexEntry] {
    use std::sync::OnceLock;
    static BUILTINS: OnceLock<Vec<LexEntry>> = OnceLock::new();
    BUILTINS.get_or_init(|| {
        let closed = |cat: Category, surface: &str, pred: &str| LexEntry {
            surface: surface.to_string(),
            category: cat,
            features: FeatureStructure::new(),
            lemma: surface.to_string(),
            pred: pred.to_string(),
            verb_kind: None,
        };
        let pronoun = |surface: &str, genders: &[&str], case: &[&str]| {
            let mut e = closed(Category::Pronoun, surface, "");
            e.features = FeatureStructure::new()
                .with("gender", FeatureValue::set(genders.iter().copied()).unwrap())
                .with("number", FeatureValue::atom("sg"))
                .with("case", FeatureValue::set(case.iter().copied()).unwrap());
            e
        };
        let query = |surface: &str, genders: &[&str]| {
            let mut e = closed(Category::QueryWord, surface, "");
            e.features = FeatureStructure::new()
                .with("gender", FeatureValue::set(genders.iter().copied()).unwrap());
            e
        };
        let mut all = vec![
            closed(Category::Determiner, "a", "indefinite"),
            closed(Category::Determiner, "an", "indefinite"),
            closed(Category::Determiner, "the", "definite"),
            closed(Category::Determiner, "every", "every"),
            pronoun("it", &["n"], &["nom", "acc"]),
            pronoun("he", &["m"], &["nom"]),
            pronoun("she", &["f"], &["nom"]),
            pronoun("him", &["m"], &["acc"]),
            pronoun("her", &["f"], &["acc"]),
            query("who", &["m", "f"]),
            query("what", &["n"]),
            query("which", &["n"]),
            query("that", &["m", "f", "n"]),
            closed(Category::Conjunction, "if", "if"),
            closed(Category::Conjunction, "then", "then"),
            closed(Category::Conjunction, "and", "and"),
            closed(Category::Conjunction, "or", "or"),
            closed(Category::Conjunction, "not", "not"),
            closed(Category::Comparative, "bigger than", "bigger_than"),
            closed(Category::Comparative, "smaller than", "smaller_than"),
            closed(Category::Comparative, "equal to", "equal"),
            closed(Category::Preposition, "to", "to"),
            closed(Category::Preposition, "from", "from"),
            closed(Category::Preposition, "with", "with"),
            closed(Category::Preposition, "into", "into"),
        ];
        let verb = |surface: &str, pred: &str, kind: VerbKind| LexEntry {
            surface: surface.to_string(),
            category: Category::Verb,
            features: FeatureStructure::new(),
            lemma: surface.to_string(),
            pred: pred.to_string(),
            verb_kind: Some(kind),
        };
        all.push(verb("have", "have", VerbKind::State));
        all.push(verb("equal", "equal", VerbKind::State));
        all
    })
}

/// Words the grammar treats specially and which are always known.
pub fn is_closed_class(word: &str) -> bool {
    let w = word.to_lowercase();
    matches!(w.as_str(), "is" | "are" | "does" | "do" | "has" | "have" | "not")
        || builtin_entries().iter().any(|e| e.surface == w)
}
