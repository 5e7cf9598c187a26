//! The Čech filtration adjoined to a string set.

use crate::error::{Error, Result};
use crate::metrics::{Mode, StringSet};
use crate::miniball;
use crate::rational::Rational;
use crate::simplex::{all_simplices, Simplex};

/// Default limit on the number of strings a full filtration is built for.
pub const DEFAULT_MAX_SET_SIZE: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub simplex: Simplex,
    pub radius: Rational,
}

/// Simplices sorted by `(radius, dimension, vertices)`.
///
/// Usually this is the full complex on a string set, but any face-closed,
/// face-monotone family is accepted (see [`Filtration::from_entries`]).
#[derive(Debug, Clone)]
pub struct Filtration {
    set: StringSet,
    mode: Mode,
    entries: Vec<Entry>,
    levels: Vec<Rational>,
    /// `index[mask]` is the entry position of the simplex with that mask, or `u32::MAX`.
    index: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl Filtration {
    /// Builds the full filtration, refusing sets with more than [`DEFAULT_MAX_SET_SIZE`] strings.
    pub fn build(set: &StringSet, mode: Mode) -> Result<Self> {
        Self::build_with_cap(set, mode, DEFAULT_MAX_SET_SIZE)
    }

    pub fn build_with_cap(set: &StringSet, mode: Mode, cap: usize) -> Result<Self> {
        let m = set.len();
        if m > cap {
            return Err(Error::CapExceeded {
                what: "filtration set size",
                size: m,
                cap,
            });
        }
        if m > 20 {
            return Err(Error::CapExceeded {
                what: "filtration set size",
                size: m,
                cap: 20,
            });
        }
        if mode == Mode::Discrete {
            // surface the offending string before any radius work
            if let Some(index) = (0..m).find(|&i| set.get(i).to_discrete().is_none()) {
                return Err(Error::NotDiscrete { index });
            }
        }
        let entries = all_simplices(m)
            .map(|simplex| {
                let radius = miniball::radius(set, simplex, mode)?.radius;
                Ok(Entry { simplex, radius })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(set.clone(), mode, entries)
    }

    /// Assembles a filtration from precomputed radii.
    ///
    /// Fails if some face of an entry is missing or has a larger radius.
    pub fn from_entries(set: StringSet, mode: Mode, mut entries: Vec<Entry>) -> Result<Self> {
        let m = set.len();
        entries.sort_by(|a, b| {
            a.radius
                .cmp(&b.radius)
                .then(a.simplex.len().cmp(&b.simplex.len()))
                .then(a.simplex.cmp(&b.simplex))
        });
        let mut index = vec![ABSENT; 1usize << m];
        for (i, e) in entries.iter().enumerate() {
            if e.simplex.max_vertex() >= m {
                return Err(Error::InvalidSimplex(format!("{} is outside the set", e.simplex)));
            }
            let slot = &mut index[e.simplex.mask() as usize];
            if *slot != ABSENT {
                return Err(Error::InvalidSimplex(format!("{} listed twice", e.simplex)));
            }
            *slot = i as u32;
        }
        for e in &entries {
            for face in e.simplex.facets() {
                match index[face.mask() as usize] {
                    ABSENT => {
                        return Err(Error::InvalidSimplex(format!(
                            "face {face} of {} is missing",
                            e.simplex
                        )))
                    }
                    k if entries[k as usize].radius > e.radius => {
                        return Err(Error::Invariant(format!(
                            "face {face} has a larger radius than {}",
                            e.simplex
                        )))
                    }
                    _ => {}
                }
            }
        }
        let mut levels: Vec<Rational> = entries.iter().map(|e| e.radius.clone()).collect();
        levels.dedup();
        Ok(Self {
            set,
            mode,
            entries,
            levels,
            index,
        })
    }

    pub fn set(&self) -> &StringSet {
        &self.set
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct radii in increasing order.
    pub fn levels(&self) -> &[Rational] {
        &self.levels
    }

    /// Position of `r` in [`Self::levels`].
    pub fn level_index(&self, r: &Rational) -> Option<usize> {
        self.levels.binary_search(r).ok()
    }

    /// Entry position of `simplex`, if present.
    pub fn index_of(&self, simplex: Simplex) -> Option<usize> {
        match self.index.get(simplex.mask() as usize) {
            Some(&i) if i != ABSENT => Some(i as usize),
            _ => None,
        }
    }

    pub fn radius_of(&self, simplex: Simplex) -> Option<&Rational> {
        self.index_of(simplex).map(|i| &self.entries[i].radius)
    }

    /// True when every nonempty subset of the set is present.
    pub fn is_full(&self) -> bool {
        self.entries.len() + 1 == 1usize << self.set.len()
    }

    /// The sublevel complex at `r`.
    pub fn sublevel(&self, r: &Rational) -> LevelComplex<'_> {
        let len = self.entries.partition_point(|e| e.radius <= *r);
        LevelComplex {
            filtration: self,
            level: r.clone(),
            len,
        }
    }

    /// Number of entries with radius at most `r`.
    pub fn prefix_len(&self, r: &Rational) -> usize {
        self.entries.partition_point(|e| e.radius <= *r)
    }

    /// Scans for `τ ⊆ σ ⇒ r(τ) ≤ r(σ)` over all stored pairs.
    pub fn is_face_monotone(&self) -> bool {
        self.entries.iter().all(|e| {
            e.simplex
                .facets()
                .all(|f| self.radius_of(f).is_some_and(|r| *r <= e.radius))
        })
    }
}

/// The simplices of a filtration with radius at most a given level.
#[derive(Debug, Clone)]
pub struct LevelComplex<'a> {
    filtration: &'a Filtration,
    level: Rational,
    len: usize,
}

impl<'a> LevelComplex<'a> {
    pub fn level(&self) -> &Rational {
        &self.level
    }

    pub fn entries(&self) -> &'a [Entry] {
        &self.filtration.entries[..self.len]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, simplex: Simplex) -> bool {
        self.filtration.index_of(simplex).is_some_and(|i| i < self.len)
    }

    /// Simplex counts per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = Vec::new();
        for e in self.entries() {
            let d = e.simplex.dim();
            if f.len() <= d {
                f.resize(d + 1, 0);
            }
            f[d] += 1;
        }
        f
    }

    /// Alternating sum of the simplex counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// True if every face of every member is a member.
    pub fn is_closed(&self) -> bool {
        self.entries()
            .iter()
            .all(|e| e.simplex.facets().all(|f| self.contains(f)))
    }
}
