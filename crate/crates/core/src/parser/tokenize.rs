use std::fmt;

use super::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Number,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    /// Normalised text: lowercase, except for words that look like names.
    pub text: String,
    /// As written.
    pub raw: String,
    pub kind: TokenKind,
    pub sentence: usize,
    pub index: usize,
}

impl Token {
    pub fn is(&self, word: &str) -> bool {
        self.text.eq_ignore_ascii_case(word)
    }

    pub fn lower(&self) -> String {
        self.text.to_lowercase()
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

/// Keeps the case of words capitalised mid-sentence or with an inner capital
/// (`SimpleMat`), folds everything else.
fn fold(raw: &str, sentence_initial: bool) -> String {
    let mut chars = raw.chars();
    let first_upper = chars.next().is_some_and(char::is_uppercase);
    let inner_upper = chars.any(char::is_uppercase);
    if inner_upper || (first_upper && !sentence_initial) {
        raw.to_string()
    } else {
        raw.to_lowercase()
    }
}

/// Splits text into sentences ending in `.` or `?`. A trailing fragment with
/// no terminator is an error, as is text with no sentences at all.
pub fn tokenize(text: &str) -> Result<Vec<Vec<Token>>, ParseError> {
    let mut sentences = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let push = |current: &mut Vec<Token>, sentences: &Vec<Vec<Token>>, raw: String, kind| {
        let index = current.len();
        let text = match kind {
            TokenKind::Word => fold(&raw, index == 0),
            _ => raw.clone(),
        };
        current.push(Token {
            text,
            raw,
            kind,
            sentence: sentences.len(),
            index,
        });
    };
    while i < chars.len() {
        let (_, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_alphanumeric() {
            let start = i;
            while i < chars.len() {
                let ch = chars[i].1;
                let joins = (ch == '-' || ch == '\'')
                    && chars.get(i + 1).is_some_and(|(_, n)| n.is_alphanumeric());
                if ch.is_alphanumeric() || ch == '_' || joins {
                    i += 1;
                } else {
                    break;
                }
            }
            let raw: String = chars[start..i].iter().map(|(_, c)| c).collect();
            let kind = if raw.chars().all(|c| c.is_ascii_digit()) {
                TokenKind::Number
            } else {
                TokenKind::Word
            };
            push(&mut current, &sentences, raw, kind);
        } else if c == ',' {
            push(&mut current, &sentences, ",".into(), TokenKind::Punct);
            i += 1;
        } else if c == '.' || c == '?' {
            push(&mut current, &sentences, c.to_string(), TokenKind::Punct);
            if current.len() == 1 {
                return Err(ParseError::Syntax {
                    sentence: sentences.len(),
                    token: 0,
                    found: c.to_string(),
                    expected: vec!["sentence".into()],
                });
            }
            sentences.push(std::mem::take(&mut current));
            i += 1;
        } else {
            return Err(ParseError::UnexpectedChar {
                sentence: sentences.len(),
                offset: chars[i].0,
                ch: c,
            });
        }
    }
    if let Some(last) = current.last() {
        return Err(ParseError::Unterminated {
            sentence: sentences.len(),
            token: last.index,
        });
    }
    if sentences.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    Ok(sentences)
}
