//! Strings over `{1..n}`, their generalized (distribution-valued) form, and
//! the Hamming, generalized Hamming and Hausdorff distances.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Letters are `1..=n`.
pub type Letter = u16;

/// Which metric space a computation lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `(S(n,l), d_H)`: centers are ordinary strings, radii are integers.
    Discrete,
    /// `(S'(n,l), d_GH)`: centers are generalized strings, radii are rationals.
    #[default]
    Generalized,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Discrete => f.write_str("discrete"),
            Mode::Generalized => f.write_str("generalized"),
        }
    }
}

/// An ordinary string of length `l` over `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscreteString {
    alphabet: usize,
    symbols: Vec<Letter>,
}

impl DiscreteString {
    pub fn new(alphabet: usize, symbols: Vec<Letter>) -> Result<Self> {
        for (position, &s) in symbols.iter().enumerate() {
            if s == 0 || s as usize > alphabet {
                return Err(Error::InvalidSymbol {
                    symbol: s as usize,
                    position,
                    alphabet,
                });
            }
        }
        Ok(Self { alphabet, symbols })
    }

    /// Parses a contiguous digit string such as `"12244131"` (alphabets up to 9).
    pub fn from_digits(alphabet: usize, digits: &str) -> Result<Self> {
        let mut symbols = Vec::with_capacity(digits.len());
        for (position, ch) in digits.chars().enumerate() {
            let v = ch.to_digit(10).ok_or(Error::InvalidSymbol {
                symbol: 0,
                position,
                alphabet,
            })?;
            symbols.push(v as Letter);
        }
        Self::new(alphabet, symbols)
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Letter] {
        &self.symbols
    }

    pub fn symbol(&self, position: usize) -> Letter {
        self.symbols[position]
    }
}

/// Digits when the alphabet fits in one digit, bracketed integer list otherwise.
impl fmt::Display for DiscreteString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet <= 9 {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

/// A string whose every position is a probability distribution over `{1..n}`.
///
/// `weights[i][j]` is the weight of letter `j + 1` at position `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneralizedString {
    alphabet: usize,
    weights: Vec<Vec<Rational>>,
}

impl GeneralizedString {
    pub fn new(alphabet: usize, weights: Vec<Vec<Rational>>) -> Result<Self> {
        for (position, dist) in weights.iter().enumerate() {
            if dist.len() != alphabet {
                return Err(Error::InvalidDistribution {
                    position,
                    reason: format!("expected {alphabet} weights, got {}", dist.len()),
                });
            }
            if let Some(w) = dist.iter().find(|w| w.is_negative() || **w > Rational::one()) {
                return Err(Error::InvalidDistribution {
                    position,
                    reason: format!("weight {w} outside [0,1]"),
                });
            }
            let total: Rational = dist.iter().sum();
            if total != Rational::one() {
                return Err(Error::InvalidDistribution {
                    position,
                    reason: format!("weights sum to {total}"),
                });
            }
        }
        Ok(Self { alphabet, weights })
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Distribution at `position` (0-based), indexed by `letter - 1`.
    pub fn distribution(&self, position: usize) -> &[Rational] {
        &self.weights[position]
    }

    pub fn weight(&self, position: usize, letter: Letter) -> &Rational {
        &self.weights[position][letter as usize - 1]
    }

    /// The letter carrying all the weight at `position`, if any.
    pub fn point_mass(&self, position: usize) -> Option<Letter> {
        let dist = &self.weights[position];
        let one = Rational::one();
        dist.iter()
            .position(|w| *w == one)
            .map(|j| (j + 1) as Letter)
    }

    /// Letters with nonzero weight at `position`.
    pub fn support(&self, position: usize) -> impl Iterator<Item = Letter> + '_ {
        self.weights[position]
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(j, _)| (j + 1) as Letter)
    }

    pub fn to_discrete(&self) -> Option<DiscreteString> {
        let symbols = (0..self.len())
            .map(|i| self.point_mass(i))
            .collect::<Option<Vec<_>>>()?;
        Some(DiscreteString {
            alphabet: self.alphabet,
            symbols,
        })
    }

    /// Appends one position holding `dist`.
    pub fn extended(&self, dist: Vec<Rational>) -> Result<Self> {
        let mut weights = self.weights.clone();
        weights.push(dist);
        Self::new(self.alphabet, weights)
    }

    /// The first `len` positions.
    pub fn truncated(&self, len: usize) -> Self {
        Self {
            alphabet: self.alphabet,
            weights: self.weights[..len].to_vec(),
        }
    }

    pub(crate) fn from_weights_unchecked(alphabet: usize, weights: Vec<Vec<Rational>>) -> Self {
        Self { alphabet, weights }
    }
}

impl fmt::Display for GeneralizedString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(d) = self.to_discrete() {
            return write!(f, "{d}");
        }
        let parts: Vec<String> = self
            .weights
            .iter()
            .map(|dist| {
                let inner: Vec<String> = dist
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| !w.is_zero())
                    .map(|(j, w)| format!("{}:{}", j + 1, w))
                    .collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(""))
    }
}

/// Point-mass embedding of an ordinary string.
pub fn embed(s: &DiscreteString) -> GeneralizedString {
    let weights = s
        .symbols
        .iter()
        .map(|&a| {
            let mut dist = vec![Rational::zero(); s.alphabet];
            dist[a as usize - 1] = Rational::one();
            dist
        })
        .collect();
    GeneralizedString {
        alphabet: s.alphabet,
        weights,
    }
}

fn check_shape(la: usize, na: usize, lb: usize, nb: usize) -> Result<()> {
    if la != lb {
        return Err(Error::LengthMismatch {
            left: la,
            right: lb,
        });
    }
    if na != nb {
        return Err(Error::AlphabetMismatch {
            left: na,
            right: nb,
        });
    }
    Ok(())
}

/// Number of positions at which `s` and `t` differ.
pub fn hamming(s: &DiscreteString, t: &DiscreteString) -> Result<usize> {
    check_shape(s.len(), s.alphabet, t.len(), t.alphabet)?;
    Ok(s.symbols
        .iter()
        .zip(&t.symbols)
        .filter(|(a, b)| a != b)
        .count())
}

/// Per-position contribution `1 - sum_j min(s[i](j), t[i](j))`.
pub(crate) fn position_gap(s: &[Rational], t: &[Rational]) -> Rational {
    let overlap: Rational = s.iter().zip(t).map(|(a, b)| a.min_of(b).clone()).sum();
    Rational::one() - overlap
}

/// Generalized Hamming distance `sum_i (1 - sum_j min(s[i](j), t[i](j)))`.
pub fn gh_distance(s: &GeneralizedString, t: &GeneralizedString) -> Result<Rational> {
    check_shape(s.len(), s.alphabet, t.len(), t.alphabet)?;
    Ok(gh_distance_unchecked(s, t))
}

pub(crate) fn gh_distance_unchecked(s: &GeneralizedString, t: &GeneralizedString) -> Rational {
    s.weights
        .iter()
        .zip(&t.weights)
        .filter(|(a, b)| a != b)
        .map(|(a, b)| position_gap(a, b))
        .sum()
}

/// A finite set of distinct strings sharing an ambient `S'(n, l)`.
///
/// Vertex ids are positions in [`StringSet::elements`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StringSet {
    alphabet: usize,
    length: usize,
    elements: Vec<GeneralizedString>,
}

impl StringSet {
    pub fn new(alphabet: usize, length: usize, elements: Vec<GeneralizedString>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptySet);
        }
        for e in &elements {
            check_shape(length, alphabet, e.len(), e.alphabet)?;
        }
        for second in 1..elements.len() {
            if let Some(first) = elements[..second].iter().position(|e| *e == elements[second]) {
                return Err(Error::DuplicateString { first, second });
            }
        }
        Ok(Self {
            alphabet,
            length,
            elements,
        })
    }

    pub fn from_discrete(alphabet: usize, length: usize, strings: &[DiscreteString]) -> Result<Self> {
        Self::new(alphabet, length, strings.iter().map(embed).collect())
    }

    /// Convenience constructor from digit strings; the length is taken from the first string.
    pub fn from_digit_strings(alphabet: usize, strings: &[&str]) -> Result<Self> {
        let parsed = strings
            .iter()
            .map(|s| DiscreteString::from_digits(alphabet, s))
            .collect::<Result<Vec<_>>>()?;
        let length = parsed.first().map(|s| s.len()).ok_or(Error::EmptySet)?;
        Self::from_discrete(alphabet, length, &parsed)
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GeneralizedString] {
        &self.elements
    }

    pub fn get(&self, id: usize) -> &GeneralizedString {
        &self.elements[id]
    }

    /// All elements as ordinary strings, or the first offending index.
    pub fn to_discrete(&self) -> Result<Vec<DiscreteString>> {
        self.elements
            .iter()
            .enumerate()
            .map(|(index, e)| e.to_discrete().ok_or(Error::NotDiscrete { index }))
            .collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.elements.iter().all(|e| e.to_discrete().is_some())
    }

    pub fn contains(&self, s: &GeneralizedString) -> bool {
        self.elements.contains(s)
    }

    pub fn position_of(&self, s: &GeneralizedString) -> Option<usize> {
        self.elements.iter().position(|e| e == s)
    }

    /// The subset with the given ids, in that order.
    pub fn subset(&self, ids: &[usize]) -> Result<Self> {
        Self::new(
            self.alphabet,
            self.length,
            ids.iter().map(|&i| self.elements[i].clone()).collect(),
        )
    }

    /// Distance between two members under the metric of `mode`.
    pub fn distance(&self, a: usize, b: usize, mode: Mode) -> Result<Rational> {
        distance(&self.elements[a], &self.elements[b], mode)
    }

    pub fn ensure_same_ambient(&self, other: &StringSet) -> Result<()> {
        check_shape(self.length, self.alphabet, other.length, other.alphabet)
    }
}

/// `d_H` in discrete mode (both strings must be ordinary), `d_GH` otherwise.
pub fn distance(s: &GeneralizedString, t: &GeneralizedString, mode: Mode) -> Result<Rational> {
    match mode {
        Mode::Generalized => gh_distance(s, t),
        Mode::Discrete => {
            let a = s.to_discrete().ok_or(Error::NotDiscrete { index: 0 })?;
            let b = t.to_discrete().ok_or(Error::NotDiscrete { index: 1 })?;
            Ok(Rational::from(hamming(&a, &b)?))
        }
    }
}

/// Hausdorff distance between two sets under the metric of `mode`.
pub fn hausdorff(a: &StringSet, b: &StringSet, mode: Mode) -> Result<Rational> {
    a.ensure_same_ambient(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let directed = |x: &StringSet, y: &StringSet| -> Result<Rational> {
        let mut sup = Rational::zero();
        for s in x.elements() {
            let mut inf: Option<Rational> = None;
            for t in y.elements() {
                let d = distance(s, t, mode)?;
                if inf.as_ref().is_none_or(|v| d < *v) {
                    inf = Some(d);
                }
            }
            let inf = inf.expect("nonempty set");
            if inf > sup {
                sup = inf;
            }
        }
        Ok(sup)
    };
    let ab = directed(a, b)?;
    let ba = directed(b, a)?;
    Ok(ab.max_of(&ba).clone())
}
