//! Barcodes with representative cycles, by column reduction over Z2.
//!
//! The reduction keeps `R = D·V`: columns of `R` that reduce to zero mark
//! positive simplices and the matching `V` columns are cycles born there;
//! a nonzero `R` column is the boundary that kills the class born at its
//! lowest entry.

use std::fmt;

use serde::Serialize;

use crate::filtration::Filtration;
use crate::rational::Rational;
use crate::simplex::Simplex;
use crate::z2::{BitVector, Span};

/// A Z2 chain of `dim`-simplices, listed in filtration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub dim: usize,
    pub simplices: Vec<Simplex>,
}

impl Chain {
    /// The boundary, as a set of faces with odd multiplicity.
    pub fn boundary(&self) -> Vec<Simplex> {
        let mut counts: std::collections::BTreeMap<Simplex, bool> = Default::default();
        for s in &self.simplices {
            for f in s.facets() {
                *counts.entry(f).or_default() ^= true;
            }
        }
        counts.into_iter().filter(|(_, odd)| *odd).map(|(f, _)| f).collect()
    }

    pub fn is_cycle(&self) -> bool {
        self.boundary().is_empty()
    }
}

/// A birth-death interval; `death == None` means the class never dies.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub birth: Rational,
    pub death: Option<Rational>,
}

impl Interval {
    pub fn new(birth: Rational, death: Option<Rational>) -> Self {
        Self { birth, death }
    }

    pub fn finite(birth: Rational, death: Rational) -> Self {
        Self {
            birth,
            death: Some(death),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.death.is_some()
    }

    pub fn length(&self) -> Option<Rational> {
        self.death.as_ref().map(|d| d - &self.birth)
    }

    pub fn is_zero_length(&self) -> bool {
        self.death.as_ref() == Some(&self.birth)
    }
}

/// Orders by birth, then death, with infinite deaths last.
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.birth.cmp(&other.birth).then_with(|| match (&self.death, &other.death) {
            (Some(a), Some(b)) => a.cmp(b),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        })
    }
}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.death {
            Some(d) => write!(f, "[{}, {})", self.birth, d),
            None => write!(f, "[{}, inf)", self.birth),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bar {
    pub dim: usize,
    pub interval: Interval,
    /// Entry index of the positive simplex.
    pub birth_entry: usize,
    /// Entry index of the negative simplex, for finite bars.
    pub death_entry: Option<usize>,
    pub birth_simplex: Simplex,
    pub death_simplex: Option<Simplex>,
    /// A cycle born at `birth` that becomes a boundary exactly at `death`.
    pub representative: Chain,
}

impl Bar {
    pub fn birth(&self) -> &Rational {
        &self.interval.birth
    }

    pub fn death(&self) -> Option<&Rational> {
        self.interval.death.as_ref()
    }

    pub fn is_zero_length(&self) -> bool {
        self.interval.is_zero_length()
    }
}

/// Bars grouped by dimension.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BarcodeSet {
    dims: Vec<Vec<Bar>>,
}

impl BarcodeSet {
    /// Every stored bar of dimension `k`, including zero-length ones.
    pub fn all(&self, k: usize) -> &[Bar] {
        self.dims.get(k).map_or(&[], |v| v.as_slice())
    }

    /// Bars of dimension `k` with nonzero length.
    pub fn bars(&self, k: usize) -> Vec<&Bar> {
        self.all(k).iter().filter(|b| !b.is_zero_length()).collect()
    }

    /// Nonzero-length intervals of dimension `k`.
    pub fn intervals(&self, k: usize) -> Vec<Interval> {
        self.bars(k).into_iter().map(|b| b.interval.clone()).collect()
    }

    /// Largest dimension with a nonzero-length bar.
    pub fn max_dim(&self) -> Option<usize> {
        (0..self.dims.len()).rev().find(|&k| !self.bars(k).is_empty())
    }

    pub fn num_dims(&self) -> usize {
        self.dims.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SimplexClass {
    Positive,
    Negative,
}

/// Result of reducing the boundary matrix of a filtration.
#[derive(Debug, Clone)]
pub struct Persistence {
    barcodes: BarcodeSet,
    classes: Vec<SimplexClass>,
    radii: Vec<Rational>,
    dims: Vec<usize>,
    r: Vec<BitVector>,
    v: Vec<BitVector>,
    /// `owner[i]`: the column whose lowest one is `i`.
    owner: Vec<Option<usize>>,
}

/// Reduces the filtration's boundary matrix.
pub fn compute_persistence(f: &Filtration) -> Persistence {
    let n = f.len();
    let entries = f.entries();
    let mut r: Vec<BitVector> = Vec::with_capacity(n);
    let mut v: Vec<BitVector> = Vec::with_capacity(n);
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (j, e) in entries.iter().enumerate() {
        let mut col = BitVector::from_indices(
            n,
            e.simplex.facets().map(|face| f.index_of(face).expect("filtrations are face-closed")),
        );
        let mut vj = BitVector::from_indices(n, [j]);
        while let Some(low) = col.low() {
            match owner[low] {
                Some(k) => {
                    col.xor_assign(&r[k]);
                    vj.xor_assign(&v[k]);
                }
                None => break,
            }
        }
        if let Some(low) = col.low() {
            owner[low] = Some(j);
        }
        r.push(col);
        v.push(vj);
    }

    let simplex_chain = |dim: usize, col: &BitVector| Chain {
        dim,
        simplices: col.ones().map(|i| entries[i].simplex).collect(),
    };
    let mut classes = Vec::with_capacity(n);
    let mut dims_bars: Vec<Vec<Bar>> = vec![Vec::new(); entries.iter().map(|e| e.simplex.len()).max().unwrap_or(0)];
    for (i, e) in entries.iter().enumerate() {
        if !r[i].is_zero() {
            classes.push(SimplexClass::Negative);
            continue;
        }
        classes.push(SimplexClass::Positive);
        let dim = e.simplex.dim();
        let bar = match owner[i] {
            Some(j) => Bar {
                dim,
                interval: Interval::finite(e.radius.clone(), entries[j].radius.clone()),
                birth_entry: i,
                death_entry: Some(j),
                birth_simplex: e.simplex,
                death_simplex: Some(entries[j].simplex),
                representative: simplex_chain(dim, &r[j]),
            },
            None => Bar {
                dim,
                interval: Interval::new(e.radius.clone(), None),
                birth_entry: i,
                death_entry: None,
                birth_simplex: e.simplex,
                death_simplex: None,
                representative: simplex_chain(dim, &v[i]),
            },
        };
        dims_bars[dim].push(bar);
    }
    for bars in &mut dims_bars {
        bars.sort_by(|a, b| a.interval.cmp(&b.interval).then(a.birth_entry.cmp(&b.birth_entry)));
    }
    while dims_bars.last().is_some_and(|b| b.is_empty()) {
        dims_bars.pop();
    }
    Persistence {
        barcodes: BarcodeSet { dims: dims_bars },
        classes,
        radii: entries.iter().map(|e| e.radius.clone()).collect(),
        dims: entries.iter().map(|e| e.simplex.dim()).collect(),
        r,
        v,
        owner,
    }
}

impl Persistence {
    pub fn barcodes(&self) -> &BarcodeSet {
        &self.barcodes
    }

    /// Positive/negative label per filtration entry.
    pub fn classes(&self) -> &[SimplexClass] {
        &self.classes
    }

    /// True when every nonzero-length event sits alone on its level.
    ///
    /// Events are births and deaths of nonzero-length bars. The simultaneous
    /// birth of all vertices at level 0 is not counted: distinct vertices
    /// always share radius 0, so no filtration would qualify otherwise.
    pub fn is_morse(&self) -> bool {
        self.crowded_levels().is_empty()
    }

    /// Levels carrying more than one event, in increasing order.
    pub fn crowded_levels(&self) -> Vec<Rational> {
        let mut events: Vec<&Rational> = Vec::new();
        for k in 0..self.barcodes.num_dims() {
            for bar in self.barcodes.bars(k) {
                if !(k == 0 && bar.birth().is_zero()) {
                    events.push(bar.birth());
                }
                if let Some(d) = bar.death() {
                    events.push(d);
                }
            }
        }
        events.sort();
        let mut out: Vec<Rational> = events.windows(2).filter(|w| w[0] == w[1]).map(|w| w[0].clone()).collect();
        out.dedup();
        out
    }

    /// Betti numbers of the sublevel complex at `r`.
    pub fn betti_at(&self, r: &Rational) -> Vec<usize> {
        (0..self.barcodes.num_dims())
            .map(|k| {
                self.barcodes
                    .all(k)
                    .iter()
                    .filter(|b| b.birth() <= r && b.death().is_none_or(|d| d > r))
                    .count()
            })
            .collect()
    }

    /// Compares the Euler characteristic of the complex at `r` with the
    /// alternating sum of Betti numbers from the bars alive at `r`.
    pub fn euler_check(&self, f: &Filtration, r: &Rational) -> bool {
        let chi = f.sublevel(r).euler_characteristic();
        let from_bars: i64 = self
            .betti_at(r)
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        chi == from_bars
    }

    /// Checks `R = D·V`, `V` unit upper triangular and distinct lowest ones in `R`.
    pub fn check_reduction(&self, f: &Filtration) -> bool {
        let n = f.len();
        let boundary: Vec<BitVector> = f
            .entries()
            .iter()
            .map(|e| BitVector::from_indices(n, e.simplex.facets().map(|x| f.index_of(x).unwrap())))
            .collect();
        let mut lows = std::collections::HashSet::new();
        for j in 0..n {
            if self.v[j].low() != Some(j) || !self.v[j].get(j) {
                return false;
            }
            let mut dv = BitVector::zeros(n);
            for i in self.v[j].ones() {
                dv.xor_assign(&boundary[i]);
            }
            if dv != self.r[j] {
                return false;
            }
            if let Some(low) = self.r[j].low() {
                if !lows.insert(low) {
                    return false;
                }
            }
        }
        true
    }

    /// Number of entries (columns) of the reduced matrix.
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Spans of `k`-cycles and `k`-boundaries of the first `prefix` entries.
    pub fn cycles_and_boundaries(&self, k: usize, prefix: usize) -> (Span, Span) {
        let mut cycles = Span::new();
        let mut boundaries = Span::new();
        for j in 0..self.r.len() {
            if self.dims[j] == k && j < prefix && self.r[j].is_zero() {
                cycles.insert(&self.v[j]);
            }
            if self.dims[j] == k + 1 {
                if let Some(low) = self.r[j].low() {
                    if j < prefix {
                        boundaries.insert(&self.r[j]);
                    }
                    if low < prefix {
                        cycles.insert(&self.r[j]);
                    }
                }
            }
        }
        (cycles, boundaries)
    }

    /// Radius at which the cycle `z` becomes a boundary, if ever.
    ///
    /// `R` columns have distinct lowest ones, so the expression of `z` in them
    /// is unique and the latest column used decides the level.
    pub fn boundary_level(&self, z: &BitVector) -> Option<Rational> {
        let mut z = z.clone();
        let mut latest: Option<usize> = None;
        while let Some(low) = z.low() {
            let j = self.owner[low]?;
            z.xor_assign(&self.r[j]);
            latest = Some(latest.map_or(j, |l| l.max(j)));
        }
        latest.map(|j| self.radii[j].clone())
    }
}
