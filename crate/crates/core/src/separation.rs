//! Separation of simplex radii.
//!
//! Each step appends one coordinate to every string: all strings put their
//! whole weight on letter 1 there except one moved vertex `z`, which keeps
//! `1 - 1/j` on letter 1 and `1/j` on letter 2. Simplices whose minimal
//! generators contain `z` grow by a little; everything else keeps its radius.
//! Repeating this until no two non-equivalent simplices share a radius makes
//! the filtration Morse.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::filtration::{Entry, Filtration, DEFAULT_MAX_SET_SIZE};
use crate::metrics::{GeneralizedString, Mode, StringSet};
use crate::miniball::{generator_mask, min_radius, nearest_center_distance};
use crate::persistence::{compute_persistence, Interval};
use crate::rational::Rational;
use crate::simplex::{all_simplices, Simplex};

/// One application of the single-pair construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationStep {
    pub moved_vertex: usize,
    /// The perturbation is `1/j` with `j = 2^j_exponent`.
    pub j_exponent: u32,
    /// The pair with equal radius that the step pulls apart; `z` is a
    /// generator of the second one only.
    pub target_pair: (Simplex, Simplex),
    /// Index of the appended coordinate.
    pub appended_position: usize,
    /// The smallest of the bounds `1/j` had to stay strictly below.
    pub bound: Rational,
}

impl SeparationStep {
    pub fn perturbation(&self) -> Rational {
        Rational::pow2(self.j_exponent).recip()
    }
}

/// Radii, centers and minimal generators of every simplex, indexed by mask.
#[derive(Debug, Clone)]
pub struct RadiusTable {
    set: StringSet,
    radius: Vec<Rational>,
    center: Vec<Option<GeneralizedString>>,
    generators: Vec<u32>,
}

impl RadiusTable {
    pub fn compute(set: &StringSet) -> Result<Self> {
        let m = set.len();
        if m > 20 {
            return Err(Error::CapExceeded {
                what: "separation set size",
                size: m,
                cap: 20,
            });
        }
        let size = 1usize << m;
        let mut table = Self {
            set: set.clone(),
            radius: vec![Rational::zero(); size],
            center: vec![None; size],
            generators: vec![0; size],
        };
        for s in all_simplices(m) {
            table.recompute(s)?;
        }
        Ok(table)
    }

    /// Recomputes one simplex; its proper faces must already be current.
    fn recompute(&mut self, s: Simplex) -> Result<()> {
        let ids = s.vertex_list();
        let vertices: Vec<&GeneralizedString> = ids.iter().map(|&v| self.set.get(v)).collect();
        let (radius, center) = min_radius(&vertices)?;
        let mask = s.mask();
        let radius_table = &self.radius;
        let (local, _) = generator_mask(&vertices, &radius, &center, |k| {
            let face = mask & !(1 << ids[k]);
            (face != 0).then(|| radius_table[face as usize].clone())
        })?;
        let global = (0..ids.len())
            .filter(|k| local >> k & 1 == 1)
            .fold(0u32, |g, k| g | 1 << ids[k]);
        let i = mask as usize;
        self.radius[i] = radius;
        self.center[i] = Some(center);
        self.generators[i] = global;
        Ok(())
    }

    pub fn set(&self) -> &StringSet {
        &self.set
    }

    pub fn radius(&self, s: Simplex) -> &Rational {
        &self.radius[s.mask() as usize]
    }

    pub fn generators(&self, s: Simplex) -> Simplex {
        Simplex::from_mask(self.generators[s.mask() as usize])
    }

    pub fn simplices(&self) -> impl Iterator<Item = Simplex> {
        all_simplices(self.set.len())
    }

    pub fn filtration(&self) -> Result<Filtration> {
        let entries = self
            .simplices()
            .map(|simplex| Entry {
                simplex,
                radius: self.radius(simplex).clone(),
            })
            .collect();
        Filtration::from_entries(self.set.clone(), Mode::Generalized, entries)
    }

    /// Filtration of the vertices `ids`, relabeled `0..ids.len()`, with radii
    /// taken from this table.
    pub fn sub_filtration(&self, ids: &[usize]) -> Result<Filtration> {
        let set = self.set.subset(ids)?;
        let entries = all_simplices(ids.len())
            .map(|simplex| Entry {
                simplex,
                radius: self.radius(simplex.map(|v| ids[v])).clone(),
            })
            .collect();
        Filtration::from_entries(set, Mode::Generalized, entries)
    }

    /// Smallest nonzero difference between two radii in the table.
    pub fn min_radius_gap(&self) -> Option<Rational> {
        let mut distinct: Vec<&Rational> = self.radius[1..].iter().collect();
        distinct.sort();
        distinct.dedup();
        distinct.windows(2).map(|w| w[1] - w[0]).min()
    }

    /// The lowest-radius pair of positive-radius simplices with equal radii
    /// and different generators, among those accepted by `allowed`.
    fn first_conflict(&self, allowed: impl Fn(Simplex) -> bool) -> Option<(Simplex, Simplex)> {
        let mut by_radius: BTreeMap<&Rational, Vec<Simplex>> = BTreeMap::new();
        for s in self.simplices() {
            let r = self.radius(s);
            if r.is_positive() && allowed(s) {
                by_radius.entry(r).or_default().push(s);
            }
        }
        for group in by_radius.values_mut() {
            group.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
            for (i, &a) in group.iter().enumerate() {
                let ga = self.generators(a);
                if let Some(&b) = group[i + 1..].iter().find(|&&b| self.generators(b) != ga) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Pairs of positive-radius simplices with equal radii but different generators.
    pub fn conflicts(&self) -> Vec<(Simplex, Simplex)> {
        let mut out = Vec::new();
        let all: Vec<Simplex> = self.simplices().filter(|s| self.radius(*s).is_positive()).collect();
        for (i, &a) in all.iter().enumerate() {
            for &b in &all[i + 1..] {
                if self.radius(a) == self.radius(b) && self.generators(a) != self.generators(b) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Output of [`separate`]. Vertex `i` of `separated` is the image of vertex `i`
/// of `original`.
#[derive(Debug, Clone)]
pub struct SeparationResult {
    pub original: StringSet,
    pub separated: StringSet,
    pub steps: Vec<SeparationStep>,
    pub epsilon: Rational,
    before: RadiusTable,
    after: RadiusTable,
}

impl SeparationResult {
    pub fn original_table(&self) -> &RadiusTable {
        &self.before
    }

    pub fn table(&self) -> &RadiusTable {
        &self.after
    }

    /// The vertex bijection `g`, which keeps ids.
    pub fn bijection(&self) -> Vec<usize> {
        (0..self.original.len()).collect()
    }

    /// Filtration of the separated set.
    pub fn filtration(&self) -> Result<Filtration> {
        self.after.filtration()
    }

    /// Filtration of the original set in generalized mode.
    pub fn original_filtration(&self) -> Result<Filtration> {
        self.before.filtration()
    }

    /// Distinct radii for every non-equivalent pair of positive-radius simplices.
    pub fn radii_separated(&self) -> bool {
        self.after.first_conflict(|_| true).is_none()
    }

    /// `0 <= r(g[σ]) - r(σ) < ε` for every simplex.
    pub fn shifts_within_epsilon(&self) -> bool {
        self.before.simplices().all(|s| {
            let d = self.after.radius(s) - self.before.radius(s);
            !d.is_negative() && d < self.epsilon
        })
    }
}

/// Default budget: a quarter of the smallest gap between distinct radii, at most 1/8.
pub fn default_epsilon(table: &RadiusTable) -> Rational {
    let cap = Rational::new(1, 8);
    match table.min_radius_gap() {
        Some(gap) => Rational::min_of(&(gap / Rational::from(4)), &cap).clone(),
        None => cap,
    }
}

/// Smallest `k` such that `1/2^k` is strictly below every bound.
pub fn choose_j(epsilon: &Rational, step: u32, generator_slacks: &[Rational], radius_gap: Option<&Rational>) -> (u32, Rational) {
    let mut bound = epsilon / &Rational::pow2(step);
    for s in generator_slacks.iter().filter(|s| s.is_positive()) {
        if *s < bound {
            bound = s.clone();
        }
    }
    if let Some(g) = radius_gap.filter(|g| g.is_positive()) {
        if *g < bound {
            bound = g.clone();
        }
    }
    (bound.dyadic_exponent_below(), bound)
}

/// Appends the perturbation coordinate, moving `z` by `1/j`.
pub fn separate_pair_with(set: &StringSet, z: usize, j_exponent: u32) -> Result<StringSet> {
    let n = set.alphabet();
    if n < 2 {
        return Err(Error::Invariant("separation needs an alphabet with at least two letters".into()));
    }
    let eps = Rational::pow2(j_exponent).recip();
    let elements = set
        .elements()
        .iter()
        .enumerate()
        .map(|(v, s)| {
            let mut dist = vec![Rational::zero(); n];
            if v == z {
                dist[0] = Rational::one() - &eps;
                dist[1] = eps.clone();
            } else {
                dist[0] = Rational::one();
            }
            s.extended(dist)
        })
        .collect::<Result<Vec<_>>>()?;
    StringSet::new(n, set.length() + 1, elements)
}

/// Chooses the moved vertex for a pair: from the set difference of the
/// lexicographically smaller generator set, else the other difference.
/// Returns `z` and the pair reordered so that `z` generates the second.
fn pick_vertex(table: &RadiusTable, a: Simplex, b: Simplex) -> Result<(usize, Simplex, Simplex)> {
    let (ga, gb) = (table.generators(a), table.generators(b));
    if ga == gb {
        return Err(Error::EquivalentSimplices);
    }
    let (small, large) = if ga <= gb { (ga, gb) } else { (gb, ga) };
    let diff = |x: Simplex, y: Simplex| x.vertices().find(|&v| !y.contains(v));
    let z = diff(small, large)
        .or_else(|| diff(large, small))
        .expect("distinct sets differ somewhere");
    if gb.contains(z) {
        Ok((z, a, b))
    } else {
        Ok((z, b, a))
    }
}

/// Runs one separation step on `(σ1, σ2)` with a caller-chosen `j = 2^j_exponent`.
///
/// Returns the extended set and the moved vertex; the pair is reported in the
/// order (unchanged radius, increased radius).
pub fn separate_pair(
    set: &StringSet,
    s1: Simplex,
    s2: Simplex,
    j_exponent: u32,
) -> Result<(StringSet, usize, (Simplex, Simplex))> {
    let table = RadiusTable::compute(set)?;
    if table.radius(s1) != table.radius(s2) {
        return Err(Error::RadiiDiffer {
            left: table.radius(s1).to_string(),
            right: table.radius(s2).to_string(),
        });
    }
    let (z, keep, grow) = pick_vertex(&table, s1, s2)?;
    Ok((separate_pair_with(set, z, j_exponent)?, z, (keep, grow)))
}

/// Separates the radii of `set` with total budget `epsilon`.
pub fn separate(set: &StringSet, epsilon: &Rational) -> Result<SeparationResult> {
    separate_with_cap(set, epsilon, DEFAULT_MAX_SET_SIZE)
}

pub fn separate_with_cap(set: &StringSet, epsilon: &Rational, cap: usize) -> Result<SeparationResult> {
    if set.len() > cap {
        return Err(Error::CapExceeded {
            what: "separation set size",
            size: set.len(),
            cap,
        });
    }
    let table = RadiusTable::compute(set)?;
    run(table, epsilon, &[&|_| true])
}

/// Separates with a phase order: each step resolves a conflict from the
/// first phase that still has one.
fn run(table: RadiusTable, epsilon: &Rational, phases: &[&dyn Fn(Simplex) -> bool]) -> Result<SeparationResult> {
    if !epsilon.is_positive() {
        return Err(Error::Invariant("epsilon must be positive".into()));
    }
    let m = table.set.len();
    let before = table.clone();
    let mut table = table;
    let mut steps = Vec::new();
    loop {
        let Some((a, b)) = phases.iter().find_map(|allowed| table.first_conflict(allowed)) else {
            break;
        };
        if steps.len() >= m {
            return Err(Error::Invariant(format!(
                "separation did not finish within {m} steps"
            )));
        }
        let (z, keep, grow) = pick_vertex(&table, a, b)?;
        let mut slacks = Vec::new();
        for s in table.simplices().filter(|s| s.contains(z) && s.len() > 1) {
            if table.generators(s).contains(z) {
                continue;
            }
            let vertices: Vec<&GeneralizedString> = s.vertices().map(|v| table.set.get(v)).collect();
            let (d, _) = nearest_center_distance(&vertices, table.radius(s), table.set.get(z))?;
            slacks.push(table.radius(s) - &d);
        }
        let gap = table.min_radius_gap();
        let (j_exponent, bound) = choose_j(epsilon, steps.len() as u32 + 1, &slacks, gap.as_ref());
        let previous = table.clone();
        table.set = separate_pair_with(&table.set, z, j_exponent)?;
        for s in all_simplices(m).filter(|s| s.contains(z)) {
            table.recompute(s)?;
        }
        let step = SeparationStep {
            moved_vertex: z,
            j_exponent,
            target_pair: (keep, grow),
            appended_position: table.set.length() - 1,
            bound,
        };
        check_step(&previous, &table, &step)?;
        steps.push(step);
    }
    Ok(SeparationResult {
        original: before.set.clone(),
        separated: table.set.clone(),
        steps,
        epsilon: epsilon.clone(),
        before,
        after: table,
    })
}

/// Verifies the guarantees of one step against the recomputed table.
fn check_step(before: &RadiusTable, after: &RadiusTable, step: &SeparationStep) -> Result<()> {
    let eps = step.perturbation();
    let (keep, grow) = step.target_pair;
    if after.radius(keep) != before.radius(keep) || after.radius(grow) <= before.radius(grow) {
        return Err(Error::Invariant(format!(
            "step moving {} did not separate {keep} and {grow}",
            step.moved_vertex
        )));
    }
    for s in before.simplices() {
        let (r0, r1) = (before.radius(s), after.radius(s));
        if r1 < r0 || *r1 > r0 + &eps {
            return Err(Error::Invariant(format!("radius of {s} moved from {r0} to {r1}")));
        }
    }
    let mut order: Vec<Simplex> = before.simplices().collect();
    order.sort_by(|a, b| before.radius(*a).cmp(before.radius(*b)));
    for w in order.windows(2) {
        if before.radius(w[0]) < before.radius(w[1]) && after.radius(w[0]) >= after.radius(w[1]) {
            return Err(Error::Invariant(format!("order of {} and {} was not preserved", w[0], w[1])));
        }
    }
    Ok(())
}

/// Vertex provenance for a union of two sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionIndex {
    /// Union ids of the vertices of the left set, in order.
    pub left: Vec<usize>,
    /// Union ids of the vertices of the right set, in order.
    pub right: Vec<usize>,
}

impl UnionIndex {
    fn mask(ids: &[usize]) -> u32 {
        ids.iter().fold(0, |m, &v| m | 1 << v)
    }

    pub fn left_mask(&self) -> u32 {
        Self::mask(&self.left)
    }

    pub fn right_mask(&self) -> u32 {
        Self::mask(&self.right)
    }
}

/// Separation of `A ∪ B` with `A`-internal conflicts resolved first, then
/// `B`-internal, then mixed ones.
#[derive(Debug, Clone)]
pub struct UnionSeparation {
    pub result: SeparationResult,
    pub index: UnionIndex,
}

impl UnionSeparation {
    /// The separated images of the left and right sets inside the union.
    pub fn sides(&self) -> Result<(StringSet, StringSet)> {
        let sep = &self.result.separated;
        Ok((sep.subset(&self.index.left)?, sep.subset(&self.index.right)?))
    }
}

/// Builds `A ∪ B` (shared strings become one vertex) and separates it.
pub fn separate_union(a: &StringSet, b: &StringSet, epsilon: &Rational) -> Result<UnionSeparation> {
    separate_union_with_cap(a, b, epsilon, DEFAULT_MAX_SET_SIZE)
}

pub fn separate_union_with_cap(a: &StringSet, b: &StringSet, epsilon: &Rational, cap: usize) -> Result<UnionSeparation> {
    let (union, index) = union_of(a, b)?;
    if union.len() > cap {
        return Err(Error::CapExceeded {
            what: "separation set size",
            size: union.len(),
            cap,
        });
    }
    let table = RadiusTable::compute(&union)?;
    let (lm, rm) = (index.left_mask(), index.right_mask());
    let left = move |s: Simplex| s.mask() & !lm == 0;
    let right = move |s: Simplex| s.mask() & !rm == 0;
    let any = |_: Simplex| true;
    let result = run(table, epsilon, &[&left, &right, &any])?;
    Ok(UnionSeparation { result, index })
}

/// The union set with provenance.
pub fn union_of(a: &StringSet, b: &StringSet) -> Result<(StringSet, UnionIndex)> {
    a.ensure_same_ambient(b)?;
    let mut elements: Vec<GeneralizedString> = a.elements().to_vec();
    let left: Vec<usize> = (0..a.len()).collect();
    let mut right = Vec::with_capacity(b.len());
    for s in b.elements() {
        match a.position_of(s) {
            Some(i) => right.push(i),
            None => {
                elements.push(s.clone());
                right.push(elements.len() - 1);
            }
        }
    }
    let union = StringSet::new(a.alphabet(), a.length(), elements)?;
    Ok((union, UnionIndex { left, right }))
}

/// Outcome of the equivalence-class check for one class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassInvariance {
    pub radius: Rational,
    pub class: Vec<Simplex>,
    /// Some vertex `x` splits the class into pairs `(σ, σ ∪ {x})`. Without
    /// such a vertex the class can change the barcode (for instance when its
    /// size is odd, the Euler characteristic changes).
    pub pairable: bool,
    /// Nonzero-length intervals per dimension with the class present.
    pub with_class: Vec<Vec<Interval>>,
    /// The same without the class.
    pub without_class: Vec<Vec<Interval>>,
}

impl ClassInvariance {
    pub fn agrees(&self) -> bool {
        self.with_class == self.without_class
    }
}

/// For every equivalence class with at least two members in a separated set,
/// compares the barcodes of the complex at the class radius with and without
/// the class.
pub fn equivalent_class_invariance(sep: &SeparationResult) -> Result<Vec<ClassInvariance>> {
    let table = sep.table();
    let mut classes: BTreeMap<(Rational, Simplex), Vec<Simplex>> = BTreeMap::new();
    for s in table.simplices() {
        let r = table.radius(s);
        if r.is_positive() {
            classes.entry((r.clone(), table.generators(s))).or_default().push(s);
        }
    }
    let filtration = sep.filtration()?;
    let mut out = Vec::new();
    for ((radius, _), class) in classes {
        if class.len() < 2 {
            continue;
        }
        let prefix: Vec<Entry> = filtration
            .entries()
            .iter()
            .filter(|e| e.radius <= radius)
            .cloned()
            .collect();
        if prefix.iter().any(|e| e.radius == radius && !class.contains(&e.simplex)) {
            return Err(Error::Invariant(format!(
                "level {radius} holds simplices outside one equivalence class"
            )));
        }
        let without: Vec<Entry> = prefix.iter().filter(|e| !class.contains(&e.simplex)).cloned().collect();
        let bars = |entries: Vec<Entry>| -> Result<Vec<Vec<Interval>>> {
            let f = Filtration::from_entries(sep.separated.clone(), Mode::Generalized, entries)?;
            let p = compute_persistence(&f);
            Ok((0..sep.separated.len()).map(|k| p.barcodes().intervals(k)).collect())
        };
        let with_class = bars(prefix)?;
        let without_class = bars(without)?;
        let pairable = (0..sep.separated.len()).any(|x| {
            class
                .iter()
                .all(|s| s.contains(x) && s.len() > 1 && class.contains(&s.without(x).unwrap()) || !s.contains(x) && class.contains(&s.with(x)))
        });
        out.push(ClassInvariance {
            radius,
            class,
            pairable,
            with_class,
            without_class,
        });
    }
    Ok(out)
}
