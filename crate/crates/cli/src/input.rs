//! Input documents: JSON, or plain text with one string per line.

use std::collections::BTreeMap;
use std::fmt;

use hammology::{DiscreteString, GeneralizedString, Letter, Mode, Rational, StringSet};
use serde::{Deserialize, Serialize};

/// A string set together with the kind of strings it was written with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDocument {
    pub mode: Mode,
    pub set: StringSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub origin: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "{}:{l}:{c}: {}", self.origin, self.message),
            (Some(l), None) => write!(f, "{}:{l}: {}", self.origin, self.message),
            _ => write!(f, "{}: {}", self.origin, self.message),
        }
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    alphabet: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<Mode>,
    strings: Vec<RawString>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum RawString {
    Digits(String),
    Symbols(Vec<Letter>),
    Distributions(Vec<BTreeMap<String, String>>),
}

impl InputDocument {
    /// Parses JSON when the first non-blank character is `{`, plain text otherwise.
    pub fn parse(text: &str, origin: &str) -> Result<Self, InputError> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text, origin)
        } else {
            Self::parse_text(text, origin)
        }
    }

    fn parse_json(text: &str, origin: &str) -> Result<Self, InputError> {
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| InputError {
            origin: origin.to_string(),
            line: Some(e.line()),
            column: Some(e.column()),
            message: e.to_string(),
        })?;
        let fail = |message: String| InputError {
            origin: origin.to_string(),
            line: None,
            column: None,
            message,
        };
        let n = raw.alphabet;
        let mut elements = Vec::with_capacity(raw.strings.len());
        for (i, s) in raw.strings.iter().enumerate() {
            let parsed = match s {
                RawString::Digits(d) if n > 9 => Err(format!("digit strings need an alphabet of at most 9 letters, got {n}; use a list of symbols")),
                RawString::Digits(d) => DiscreteString::from_digits(n, d).map(|d| hammology::metrics::embed(&d)).map_err(|e| e.to_string()),
                RawString::Symbols(v) => DiscreteString::new(n, v.clone()).map(|d| hammology::metrics::embed(&d)).map_err(|e| e.to_string()),
                RawString::Distributions(positions) => distributions(n, positions),
            };
            elements.push(parsed.map_err(|m| fail(format!("strings[{i}]: {m}")))?);
        }
        if elements.is_empty() {
            return Err(fail("no strings".into()));
        }
        let length = elements[0].len();
        if let Some(l) = raw.length.filter(|&l| l != length) {
            return Err(fail(format!("declared length {l} but strings[0] has length {length}")));
        }
        let set = StringSet::new(n, length, elements).map_err(|e| fail(e.to_string()))?;
        let mode = match raw.mode {
            Some(Mode::Discrete) if !set.is_discrete() => {
                return Err(fail("mode is discrete but some string is generalized".into()));
            }
            Some(m) => m,
            None if set.is_discrete() => Mode::Discrete,
            None => Mode::Generalized,
        };
        Ok(Self { mode, set })
    }

    fn parse_text(text: &str, origin: &str) -> Result<Self, InputError> {
        let at = |line: usize, column: usize, message: String| InputError {
            origin: origin.to_string(),
            line: Some(line),
            column: Some(column),
            message,
        };
        let mut alphabet: Option<(usize, usize)> = None;
        let mut rows: Vec<(usize, usize, Vec<Letter>)> = Vec::new();
        for (k, raw_line) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw_line.split('#').next().unwrap_or("");
            let trimmed = content.trim();
            if trimmed.is_empty() {
                continue;
            }
            let column = content.len() - content.trim_start().len() + 1;
            if let Some(rest) = trimmed.strip_prefix("alphabet") {
                if !rows.is_empty() || alphabet.is_some() {
                    return Err(at(line, column, "the alphabet directive must come once, before the strings".into()));
                }
                let value = rest.trim().trim_start_matches([':', '=']).trim();
                let n = value
                    .parse::<usize>()
                    .map_err(|_| at(line, column, format!("invalid alphabet size `{value}`")))?;
                alphabet = Some((n, line));
                continue;
            }
            rows.push((line, column, symbols(trimmed).map_err(|(offset, m)| at(line, column + offset, m))?));
        }
        if rows.is_empty() {
            return Err(InputError {
                origin: origin.to_string(),
                line: None,
                column: None,
                message: "no strings".into(),
            });
        }
        let largest = rows.iter().flat_map(|r| r.2.iter()).copied().max().unwrap_or(1) as usize;
        let n = match alphabet {
            Some((n, line)) if n < largest => {
                return Err(at(line, 1, format!("alphabet {n} is smaller than the symbol {largest} used below")));
            }
            Some((n, _)) => n,
            None => largest,
        };
        let length = rows[0].2.len();
        let mut strings = Vec::with_capacity(rows.len());
        for (line, column, row) in &rows {
            if row.len() != length {
                return Err(at(*line, *column, format!("length {} differs from the first string's {length}", row.len())));
            }
            strings.push(DiscreteString::new(n, row.clone()).map_err(|e| at(*line, *column, e.to_string()))?);
        }
        let set = StringSet::from_discrete(n, length, &strings).map_err(|e| InputError {
            origin: origin.to_string(),
            line: None,
            column: None,
            message: e.to_string(),
        })?;
        Ok(Self {
            mode: Mode::Discrete,
            set,
        })
    }

    /// Canonical JSON form; parsing it gives back an equal document.
    pub fn to_value(&self) -> serde_json::Value {
        let n = self.set.alphabet();
        let strings = self
            .set
            .elements()
            .iter()
            .map(|s| match s.to_discrete() {
                Some(d) if n <= 9 => RawString::Digits(d.symbols().iter().map(|c| char::from(b'0' + *c as u8)).collect()),
                Some(d) => RawString::Symbols(d.symbols().to_vec()),
                None => RawString::Distributions(
                    (0..s.len())
                        .map(|i| s.support(i).map(|c| (c.to_string(), s.weight(i, c).to_string())).collect())
                        .collect(),
                ),
            })
            .collect();
        let raw = RawDocument {
            alphabet: n,
            length: Some(self.set.length()),
            mode: Some(self.mode),
            strings,
        };
        serde_json::to_value(&raw).expect("documents serialize")
    }
}

fn distributions(n: usize, positions: &[BTreeMap<String, String>]) -> Result<GeneralizedString, String> {
    let mut weights = Vec::with_capacity(positions.len());
    for (p, map) in positions.iter().enumerate() {
        let mut dist = vec![Rational::zero(); n];
        for (key, text) in map {
            let letter: Letter = key.parse().map_err(|_| format!("position {p}: invalid letter `{key}`"))?;
            if letter == 0 || letter as usize > n {
                return Err(format!("position {p}: letter {letter} is outside 1..={n}"));
            }
            dist[letter as usize - 1] = text.parse::<Rational>().map_err(|e| format!("position {p}: {e}"))?;
        }
        weights.push(dist);
    }
    GeneralizedString::new(n, weights).map_err(|e| e.to_string())
}

/// Symbols of a digit string or a bracketed list; errors carry a 0-based offset.
fn symbols(text: &str) -> Result<Vec<Letter>, (usize, String)> {
    if let Some(inner) = text.strip_prefix('[') {
        let inner = inner.strip_suffix(']').ok_or((text.len() - 1, "missing closing `]`".to_string()))?;
        let mut out = Vec::new();
        let mut offset = 1;
        for part in inner.split(',') {
            let lead = part.len() - part.trim_start().len();
            let token = part.trim();
            out.push(
                token
                    .parse::<Letter>()
                    .map_err(|_| (offset + lead, format!("invalid symbol `{token}`")))?,
            );
            offset += part.len() + 1;
        }
        return Ok(out);
    }
    text.char_indices()
        .map(|(i, c)| match c.to_digit(10) {
            Some(d) if d > 0 => Ok(d as Letter),
            _ => Err((i, format!("unexpected character `{c}`; expected a digit 1-9"))),
        })
        .collect()
}
