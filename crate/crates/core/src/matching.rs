//! Bottleneck matchings between barcodes and cycle registration through a
//! union filtration.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::filtration::{Filtration, DEFAULT_MAX_SET_SIZE};
use crate::metrics::{Mode, StringSet};
use crate::persistence::{compute_persistence, Bar, Interval, Persistence};
use crate::rational::Rational;
use crate::separation::{
    default_epsilon, separate_union_with_cap, separate_with_cap, union_of, RadiusTable, SeparationResult, UnionSeparation,
};
use crate::simplex::Simplex;
use crate::z2::BitVector;

/// A bottleneck matching. Indices refer to the input slices; bars not in
/// `pairs` are matched to the diagonal (zero-length bars always are).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarMatching {
    pub pairs: Vec<(usize, usize)>,
    pub left_unmatched: Vec<usize>,
    pub right_unmatched: Vec<usize>,
    pub delta: Rational,
}

impl BarMatching {
    /// Checks the δ-matching conditions against the inputs.
    pub fn is_valid(&self, left: &[Interval], right: &[Interval]) -> bool {
        let d = &self.delta;
        let fits = |i: &Interval, j: &Interval| match (&i.death, &j.death) {
            (Some(a), Some(b)) => (&i.birth - &j.birth).abs() <= *d && (a - b).abs() <= *d,
            (None, None) => (&i.birth - &j.birth).abs() <= *d,
            _ => false,
        };
        let short = |i: &Interval| i.length().is_some_and(|len| len <= d + d);
        self.pairs.iter().all(|&(a, b)| fits(&left[a], &right[b]))
            && self.left_unmatched.iter().all(|&a| short(&left[a]))
            && self.right_unmatched.iter().all(|&b| short(&right[b]))
            && self.pairs.len() + self.left_unmatched.len() == left.len()
            && self.pairs.len() + self.right_unmatched.len() == right.len()
    }
}

fn linf(a: &Interval, b: &Interval) -> Rational {
    let db = (&a.birth - &b.birth).abs();
    match (&a.death, &b.death) {
        (Some(x), Some(y)) => Rational::max_of(&db, &(x - y).abs()).clone(),
        _ => db,
    }
}

fn half_length(a: &Interval) -> Rational {
    a.length().expect("finite bar") / Rational::from(2)
}

/// Cost of matching one bar against one bar: either directly, or both to the diagonal.
pub fn single_bar_bottleneck(a: &Interval, b: &Interval) -> Rational {
    let direct = linf(a, b);
    let diagonal = Rational::max_of(&half_length(a), &half_length(b)).clone();
    Rational::min_of(&direct, &diagonal).clone()
}

/// Exact bottleneck distance and an optimal matching.
///
/// Zero-length bars are ignored. Infinite bars can only match infinite bars;
/// unequal counts make the distance infinite, reported as an error.
pub fn bottleneck(left: &[Interval], right: &[Interval]) -> Result<(Rational, BarMatching)> {
    let live = |bars: &[Interval]| -> (Vec<usize>, Vec<usize>) {
        let finite = (0..bars.len()).filter(|&i| bars[i].is_finite() && !bars[i].is_zero_length()).collect();
        let mut essential: Vec<usize> = (0..bars.len()).filter(|&i| !bars[i].is_finite()).collect();
        essential.sort_by(|&a, &b| bars[a].birth.cmp(&bars[b].birth));
        (finite, essential)
    };
    let (lf, le) = live(left);
    let (rf, re) = live(right);
    if le.len() != re.len() {
        return Err(Error::UnpairedEssentialBars {
            left: le.len(),
            right: re.len(),
        });
    }
    // on a line, pairing sorted births is optimal for the essential part
    let essential_pairs: Vec<(usize, usize)> = le.iter().copied().zip(re.iter().copied()).collect();
    let floor = essential_pairs
        .iter()
        .map(|&(a, b)| (&left[a].birth - &right[b].birth).abs())
        .max()
        .unwrap_or_else(Rational::zero);

    let mut candidates: Vec<Rational> = vec![floor.clone()];
    for &a in &lf {
        candidates.push(half_length(&left[a]));
        for &b in &rf {
            candidates.push(linf(&left[a], &right[b]));
        }
    }
    for &b in &rf {
        candidates.push(half_length(&right[b]));
    }
    candidates.retain(|c| *c >= floor);
    candidates.sort();
    candidates.dedup();

    let lf_bars: Vec<&Interval> = lf.iter().map(|&i| &left[i]).collect();
    let rf_bars: Vec<&Interval> = rf.iter().map(|&i| &right[i]).collect();
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    let mut best = finite_matching(&lf_bars, &rf_bars, &candidates[hi]).expect("largest candidate is feasible");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match finite_matching(&lf_bars, &rf_bars, &candidates[mid]) {
            Some(m) => {
                hi = mid;
                best = m;
            }
            None => lo = mid + 1,
        }
    }
    let delta = candidates[lo].clone();
    let mut pairs: Vec<(usize, usize)> = best.iter().map(|&(a, b)| (lf[a], rf[b])).collect();
    pairs.extend(essential_pairs);
    pairs.sort();
    let left_unmatched = (0..left.len()).filter(|i| !pairs.iter().any(|p| p.0 == *i)).collect();
    let right_unmatched = (0..right.len()).filter(|j| !pairs.iter().any(|p| p.1 == *j)).collect();
    let matching = BarMatching {
        pairs,
        left_unmatched,
        right_unmatched,
        delta: delta.clone(),
    };
    Ok((delta, matching))
}

/// A δ-matching of finite bars as (left, right) index pairs, if one exists.
///
/// Perfect matching on the usual augmented graph: each side gets one
/// diagonal copy per bar of the other side.
fn finite_matching(left: &[&Interval], right: &[&Interval], delta: &Rational) -> Option<Vec<(usize, usize)>> {
    let (nl, nr) = (left.len(), right.len());
    let n = nl + nr;
    // rows: left bars then diagonal copies of right bars; columns: right bars then diagonal copies of left bars
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..nl {
        for j in 0..nr {
            if linf(left[i], right[j]) <= *delta {
                adj[i].push(j);
            }
        }
        if half_length(left[i]) <= *delta {
            adj[i].push(nr + i);
        }
    }
    for j in 0..nr {
        if half_length(right[j]) <= *delta {
            adj[nl + j].push(j);
        }
        for i in 0..nl {
            adj[nl + j].push(nr + i);
        }
    }
    let mut match_col: Vec<Option<usize>> = vec![None; n];
    for row in 0..n {
        let mut seen = vec![false; n];
        if !augment(row, &adj, &mut match_col, &mut seen) {
            return None;
        }
    }
    let pairs = (0..nr)
        .filter_map(|j| match match_col[j] {
            Some(i) if i < nl => Some((i, j)),
            _ => None,
        })
        .collect();
    Some(pairs)
}

fn augment(row: usize, adj: &[Vec<usize>], match_col: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &c in &adj[row] {
        if seen[c] {
            continue;
        }
        seen[c] = true;
        if match_col[c].is_none() || augment(match_col[c].unwrap(), adj, match_col, seen) {
            match_col[c] = Some(row);
            return true;
        }
    }
    false
}

/// One side of a registration: a filtration embedded in the union, its
/// persistence, and the union id of each of its vertices.
#[derive(Debug, Clone, Copy)]
pub struct EmbeddedSide<'a> {
    pub filtration: &'a Filtration,
    pub persistence: &'a Persistence,
    pub union_ids: &'a [usize],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisteredPair {
    /// Index into the side's nonzero-length bars of the dimension.
    pub left: usize,
    pub right: usize,
    pub union_death: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegistrationReport {
    pub dim: usize,
    pub pairs: Vec<RegisteredPair>,
    pub residual_left: Vec<usize>,
    pub residual_right: Vec<usize>,
}

/// What happens to one bar's representative inside the union.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionFate {
    /// The class is new in the union at the bar's birth.
    pub born: bool,
    /// Radius where the representative becomes a union boundary.
    pub death: Option<Rational>,
}

fn chain_in_union(bar: &Bar, ids: &[usize], union: &Filtration) -> Result<BitVector> {
    let mut indices = Vec::with_capacity(bar.representative.simplices.len());
    for s in &bar.representative.simplices {
        let image: Simplex = s.map(|v| ids[v]);
        let i = union
            .index_of(image)
            .ok_or_else(|| Error::Invariant(format!("{image} missing from the union filtration")))?;
        indices.push(i);
    }
    Ok(BitVector::from_indices(union.len(), indices))
}

/// Birth test and union death for every nonzero-length `k`-bar of a side.
pub fn union_fates(side: EmbeddedSide<'_>, union: &Filtration, union_p: &Persistence, k: usize) -> Result<Vec<UnionFate>> {
    let mut out = Vec::new();
    for bar in side.persistence.barcodes().bars(k) {
        let z = chain_in_union(bar, side.union_ids, union)?;
        if union.radius_of(bar.birth_simplex.map(|v| side.union_ids[v])) != Some(bar.birth()) {
            return Err(Error::Invariant("radii differ between a side and the union".into()));
        }
        let before = union.entries().partition_point(|e| e.radius < *bar.birth());
        let at = union.prefix_len(bar.birth());
        let (mut span, _) = union_p.cycles_and_boundaries(k, before);
        let (_, boundaries) = union_p.cycles_and_boundaries(k, at);
        for v in boundaries.basis() {
            span.insert(v);
        }
        out.push(UnionFate {
            born: !span.contains(&z),
            death: union_p.boundary_level(&z),
        });
    }
    Ok(out)
}

/// Pairs bars of two sides whose representatives are born in the union at
/// their own birth and die there at the same level.
///
/// Several candidates on one death level (impossible for Morse inputs) are
/// paired in birth order.
pub fn register_cycles(
    left: EmbeddedSide<'_>,
    right: EmbeddedSide<'_>,
    union: &Filtration,
    union_p: &Persistence,
    k: usize,
) -> Result<RegistrationReport> {
    for (name, p) in [("left", left.persistence), ("right", right.persistence), ("union", union_p)] {
        if !p.is_morse() {
            return Err(Error::NotMorse(name));
        }
    }
    let lf = union_fates(left, union, union_p, k)?;
    let rf = union_fates(right, union, union_p, k)?;
    let group = |fates: &[UnionFate]| {
        let mut by_death: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
        for (i, f) in fates.iter().enumerate() {
            if let (true, Some(d)) = (f.born, &f.death) {
                by_death.entry(d.clone()).or_default().push(i);
            }
        }
        by_death
    };
    let (gl, gr) = (group(&lf), group(&rf));
    let mut pairs = Vec::new();
    for (death, ls) in &gl {
        if let Some(rs) = gr.get(death) {
            for (&a, &b) in ls.iter().zip(rs) {
                pairs.push(RegisteredPair {
                    left: a,
                    right: b,
                    union_death: death.clone(),
                });
            }
        }
    }
    let residual_left = (0..lf.len()).filter(|i| !pairs.iter().any(|p| p.left == *i)).collect();
    let residual_right = (0..rf.len()).filter(|j| !pairs.iter().any(|p| p.right == *j)).collect();
    Ok(RegistrationReport {
        dim: k,
        pairs,
        residual_left,
        residual_right,
    })
}

/// What [`d_new`] does when a separated filtration is not Morse, which
/// happens when an equivalence class changes homology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegistrationPolicy {
    /// Fail with [`Error::NotMorse`].
    Strict,
    /// Register nothing, so every `d_k` is a plain bottleneck distance.
    #[default]
    SkipWhenNotMorse,
}

/// Options for [`d_new`].
#[derive(Debug, Clone)]
pub struct DistanceOptions {
    /// Separation budget; `None` uses [`default_epsilon`] of the union.
    pub epsilon: Option<Rational>,
    /// Cap on the union size.
    pub max_set_size: usize,
    pub registration: RegistrationPolicy,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self {
            epsilon: None,
            max_set_size: DEFAULT_MAX_SET_SIZE,
            registration: RegistrationPolicy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisteredBars {
    pub left: Interval,
    pub right: Interval,
    pub union_death: Rational,
    pub cost: Rational,
}

/// The hybrid matching in one dimension `k >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionReport {
    pub dim: usize,
    pub registered: Vec<RegisteredBars>,
    pub residual_left: Vec<Interval>,
    pub residual_right: Vec<Interval>,
    pub residual_matching: BarMatching,
    pub distance: Rational,
}

#[derive(Debug, Clone)]
pub struct MatchReport {
    pub epsilon: Rational,
    pub k0: usize,
    /// `weights[k] = 2^k / (2^(k0+1) - 1)`.
    pub weights: Vec<Rational>,
    /// `distances[k] = d_k`.
    pub distances: Vec<Rational>,
    pub d_new: Rational,
    /// Sorted finite `BC_0` lengths of the unseparated sets.
    pub lengths: (Vec<Rational>, Vec<Rational>),
    pub dims: Vec<DimensionReport>,
    pub left: SeparationResult,
    pub right: SeparationResult,
    /// Separation of the union, with the inputs in canonical order.
    pub union: UnionSeparation,
    /// True when the union was built as `B ∪ A`.
    pub union_swapped: bool,
    /// The filtration that was not Morse, when registration was skipped.
    pub registration_skipped: Option<&'static str>,
}

fn check_pair(a: &StringSet, b: &StringSet) -> Result<()> {
    a.ensure_same_ambient(b)?;
    if a.len() != b.len() {
        return Err(Error::CardinalityMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::TooFewStrings { needed: 2, got: a.len() });
    }
    Ok(())
}

/// Sorted lengths of the finite `BC_0` bars.
pub fn bc0_lengths(set: &StringSet, mode: Mode) -> Result<Vec<Rational>> {
    let p = compute_persistence(&Filtration::build(set, mode)?);
    let mut lengths: Vec<Rational> = p.barcodes().all(0).iter().filter_map(|b| b.interval.length()).collect();
    lengths.sort();
    Ok(lengths)
}

/// Largest difference between the sorted finite `BC_0` lengths.
pub fn d0(a: &StringSet, b: &StringSet, mode: Mode) -> Result<Rational> {
    check_pair(a, b)?;
    Ok(sorted_gap(&bc0_lengths(a, mode)?, &bc0_lengths(b, mode)?))
}

fn sorted_gap(la: &[Rational], lb: &[Rational]) -> Rational {
    la.iter().zip(lb).map(|(x, y)| (x - y).abs()).max().unwrap_or_else(Rational::zero)
}

fn order_key(s: &StringSet) -> Vec<&[Rational]> {
    s.elements()
        .iter()
        .flat_map(|e| (0..e.len()).map(move |i| e.distribution(i)))
        .collect()
}

fn top_dim(p: &Persistence) -> usize {
    (1..p.barcodes().num_dims()).rev().find(|&k| !p.barcodes().bars(k).is_empty()).unwrap_or(0)
}

/// The hybrid distance between two equally sized string sets.
pub fn d_new(a: &StringSet, b: &StringSet, options: &DistanceOptions) -> Result<MatchReport> {
    check_pair(a, b)?;
    let swapped = order_key(b) < order_key(a);
    let (first, second) = if swapped { (b, a) } else { (a, b) };
    let cap = options.max_set_size;
    let (union_set, _) = union_of(first, second)?;
    if union_set.len() > cap {
        return Err(Error::CapExceeded {
            what: "union size",
            size: union_set.len(),
            cap,
        });
    }
    let epsilon = match &options.epsilon {
        Some(e) => e.clone(),
        None => default_epsilon(&RadiusTable::compute(&union_set)?),
    };
    let sep_a = separate_with_cap(a, &epsilon, cap)?;
    let sep_b = separate_with_cap(b, &epsilon, cap)?;
    let union = separate_union_with_cap(first, second, &epsilon, cap)?;
    let pa = compute_persistence(&sep_a.filtration()?);
    let pb = compute_persistence(&sep_b.filtration()?);

    let table = union.result.table();
    let uf = union.result.filtration()?;
    let up = compute_persistence(&uf);
    let (ids_a, ids_b) = if swapped {
        (&union.index.right, &union.index.left)
    } else {
        (&union.index.left, &union.index.right)
    };
    let fa = table.sub_filtration(ids_a)?;
    let fb = table.sub_filtration(ids_b)?;
    let (ea, eb) = (compute_persistence(&fa), compute_persistence(&fb));
    let side_a = EmbeddedSide {
        filtration: &fa,
        persistence: &ea,
        union_ids: ids_a,
    };
    let side_b = EmbeddedSide {
        filtration: &fb,
        persistence: &eb,
        union_ids: ids_b,
    };

    let k0 = top_dim(&pa).max(top_dim(&pb));
    let lengths = (bc0_lengths(a, Mode::Generalized)?, bc0_lengths(b, Mode::Generalized)?);
    let mut distances = vec![sorted_gap(&lengths.0, &lengths.1)];
    let mut dims = Vec::new();
    let not_morse = [("left", &pa), ("right", &pb), ("left in union", &ea), ("right in union", &eb), ("union", &up)]
        .into_iter()
        .find(|(_, p)| !p.is_morse())
        .map(|(name, _)| name);
    if let (Some(name), RegistrationPolicy::Strict) = (not_morse, options.registration) {
        return Err(Error::NotMorse(name));
    }
    for k in 1..=k0 {
        let report = match not_morse {
            None => register_cycles(side_a, side_b, &uf, &up, k)?,
            Some(_) => RegistrationReport {
                dim: k,
                pairs: Vec::new(),
                residual_left: (0..ea.barcodes().bars(k).len()).collect(),
                residual_right: (0..eb.barcodes().bars(k).len()).collect(),
            },
        };
        let dim = hybrid(k, &report, (&ea, &pa), (&eb, &pb))?;
        distances.push(dim.distance.clone());
        dims.push(dim);
    }
    let denom = Rational::pow2(k0 as u32 + 1) - Rational::one();
    let weights: Vec<Rational> = (0..=k0).map(|k| Rational::pow2(k as u32) / denom.clone()).collect();
    let d_new = weights.iter().zip(&distances).fold(Rational::zero(), |acc, (w, d)| acc + w * d);
    Ok(MatchReport {
        epsilon,
        k0,
        weights,
        distances,
        d_new,
        lengths,
        dims,
        left: sep_a,
        right: sep_b,
        union,
        union_swapped: swapped,
        registration_skipped: not_morse,
    })
}

/// Position of each embedded bar among the standalone bars, matched by
/// birth and death simplices.
fn standalone_positions(embedded: &[&Bar], standalone: &[&Bar]) -> Vec<Option<usize>> {
    embedded
        .iter()
        .map(|e| {
            standalone
                .iter()
                .position(|s| s.birth_simplex == e.birth_simplex && s.death_simplex == e.death_simplex)
        })
        .collect()
}

fn hybrid(
    k: usize,
    report: &RegistrationReport,
    (ea, pa): (&Persistence, &Persistence),
    (eb, pb): (&Persistence, &Persistence),
) -> Result<DimensionReport> {
    let (sa, sb) = (pa.barcodes().bars(k), pb.barcodes().bars(k));
    let map_a = standalone_positions(&ea.barcodes().bars(k), &sa);
    let map_b = standalone_positions(&eb.barcodes().bars(k), &sb);
    let mut used_a = vec![false; sa.len()];
    let mut used_b = vec![false; sb.len()];
    let mut registered = Vec::new();
    for pair in &report.pairs {
        if let (Some(i), Some(j)) = (map_a[pair.left], map_b[pair.right]) {
            used_a[i] = true;
            used_b[j] = true;
            let (left, right) = (sa[i].interval.clone(), sb[j].interval.clone());
            let cost = single_bar_bottleneck(&left, &right);
            registered.push(RegisteredBars {
                left,
                right,
                union_death: pair.union_death.clone(),
                cost,
            });
        }
    }
    let residual_left: Vec<Interval> = (0..sa.len()).filter(|&i| !used_a[i]).map(|i| sa[i].interval.clone()).collect();
    let residual_right: Vec<Interval> = (0..sb.len()).filter(|&j| !used_b[j]).map(|j| sb[j].interval.clone()).collect();
    let (delta, residual_matching) = bottleneck(&residual_left, &residual_right)?;
    let distance = registered.iter().fold(delta, |acc, r| acc + &r.cost);
    Ok(DimensionReport {
        dim: k,
        registered,
        residual_left,
        residual_right,
        residual_matching,
        distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(b: i64, d: i64) -> Interval {
        Interval::finite(Rational::from(b), Rational::from(d))
    }

    #[test]
    fn small_examples() {
        let bc = vec![iv(0, 2), iv(1, 5)];
        let (d, m) = bottleneck(&bc, &bc).unwrap();
        assert_eq!(d, Rational::zero());
        assert_eq!(m.pairs, vec![(0, 0), (1, 1)]);
        assert_eq!(bottleneck(&[iv(0, 4)], &[]).unwrap().0, Rational::from(2));
        let (d, m) = bottleneck(&[iv(3, 4)], &[iv(4, 5)]).unwrap();
        assert_eq!(d, Rational::new(1, 2));
        assert!(m.is_valid(&[iv(3, 4)], &[iv(4, 5)]));
    }

    #[test]
    fn single_bar_cases() {
        assert_eq!(single_bar_bottleneck(&iv(0, 2), &iv(0, 2)), Rational::zero());
        assert_eq!(single_bar_bottleneck(&iv(0, 2), &iv(0, 3)), Rational::one());
        assert_eq!(single_bar_bottleneck(&iv(0, 1), &iv(10, 11)), Rational::new(1, 2));
    }

    #[test]
    fn essential_bars() {
        let inf = Interval::new(Rational::zero(), None);
        let late = Interval::new(Rational::from(3), None);
        assert_eq!(bottleneck(std::slice::from_ref(&inf), &[late]).unwrap().0, Rational::from(3));
        assert_eq!(
            bottleneck(&[inf], &[]).unwrap_err(),
            Error::UnpairedEssentialBars { left: 1, right: 0 }
        );
    }

    /// Minimum over every partial injection of left bars into right bars.
    fn brute_force(left: &[Interval], right: &[Interval]) -> Rational {
        fn go(i: usize, left: &[Interval], right: &[Interval], used: &mut Vec<bool>, worst: Rational, best: &mut Option<Rational>) {
            if best.as_ref().is_some_and(|b| worst >= *b) {
                return;
            }
            if i == left.len() {
                let rest = (0..right.len())
                    .filter(|&j| !used[j])
                    .map(|j| half_length(&right[j]))
                    .fold(worst, |a, b| Rational::max_of(&a, &b).clone());
                if best.as_ref().is_none_or(|b| rest < *b) {
                    *best = Some(rest);
                }
                return;
            }
            go(i + 1, left, right, used, Rational::max_of(&worst, &half_length(&left[i])).clone(), best);
            for j in 0..right.len() {
                if !used[j] {
                    used[j] = true;
                    go(i + 1, left, right, used, Rational::max_of(&worst, &linf(&left[i], &right[j])).clone(), best);
                    used[j] = false;
                }
            }
        }
        let mut best = None;
        go(0, left, right, &mut vec![false; right.len()], Rational::zero(), &mut best);
        best.unwrap()
    }

    fn random_barcode(rng: &mut impl rand::Rng, max_len: usize) -> Vec<Interval> {
        (0..rng.gen_range(0..=max_len))
            .map(|_| {
                let b = rng.gen_range(0..12);
                iv(b, b + rng.gen_range(1..8))
            })
            .collect()
    }

    #[test]
    fn agrees_with_brute_force() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let (l, r) = (random_barcode(&mut rng, 4), random_barcode(&mut rng, 4));
            let (d, m) = bottleneck(&l, &r).unwrap();
            assert_eq!(d, brute_force(&l, &r), "{l:?} {r:?}");
            assert!(m.is_valid(&l, &r));
        }
    }

    #[test]
    fn metric_properties() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let (x, y, z) = (random_barcode(&mut rng, 4), random_barcode(&mut rng, 4), random_barcode(&mut rng, 4));
            let dxy = bottleneck(&x, &y).unwrap().0;
            assert_eq!(dxy, bottleneck(&y, &x).unwrap().0);
            assert!(dxy <= bottleneck(&x, &z).unwrap().0 + bottleneck(&z, &y).unwrap().0);
            let mut shuffled = x.clone();
            shuffled.reverse();
            assert!(bottleneck(&x, &shuffled).unwrap().0.is_zero());
        }
    }

    fn example() -> StringSet {
        StringSet::from_digit_strings(4, &["12244131", "22223443", "32143431", "14443214", "22134222"]).unwrap()
    }

    #[test]
    fn d0_examples() {
        let a = example();
        let lengths: Vec<Rational> = [2, 3, 3, 3].map(Rational::from).to_vec();
        assert_eq!(bc0_lengths(&a, Mode::Discrete).unwrap(), lengths);
        assert!(d0(&a, &a, Mode::Discrete).unwrap().is_zero());
        let b = StringSet::from_digit_strings(4, &["12244131", "22223443", "32143431", "14413214", "22134222"]).unwrap();
        assert_eq!(d0(&a, &b, Mode::Discrete).unwrap(), Rational::one());
        let small = StringSet::from_digit_strings(4, &["1111"]).unwrap();
        assert_eq!(d0(&small, &small, Mode::Discrete).unwrap_err(), Error::TooFewStrings { needed: 2, got: 1 });
        assert!(matches!(d0(&a, &small, Mode::Discrete), Err(Error::LengthMismatch { .. }) | Err(Error::CardinalityMismatch { .. })));
    }

    #[test]
    fn self_registration_is_complete() {
        let set = StringSet::from_digit_strings(2, &["1111", "2222", "1122", "2211"]).unwrap();
        let sep = crate::separation::separate(&set, &Rational::new(1, 16)).unwrap();
        let f = sep.filtration().unwrap();
        let p = compute_persistence(&f);
        let ids: Vec<usize> = (0..set.len()).collect();
        let side = EmbeddedSide {
            filtration: &f,
            persistence: &p,
            union_ids: &ids,
        };
        let bars = p.barcodes().bars(1).len();
        assert!(bars > 0);
        let report = register_cycles(side, side, &f, &p, 1).unwrap();
        assert_eq!(report.pairs.len(), bars);
        assert!(report.pairs.iter().all(|r| r.left == r.right));
        assert!(report.residual_left.is_empty() && report.residual_right.is_empty());
    }

    #[test]
    fn non_morse_registration_is_rejected() {
        let f = Filtration::build(&example(), Mode::Generalized).unwrap();
        let p = compute_persistence(&f);
        let ids: Vec<usize> = (0..5).collect();
        let side = EmbeddedSide {
            filtration: &f,
            persistence: &p,
            union_ids: &ids,
        };
        assert!(matches!(register_cycles(side, side, &f, &p, 1), Err(Error::NotMorse(_))));
    }

    #[test]
    fn d_new_of_a_set_with_itself() {
        let set = StringSet::from_digit_strings(2, &["1111", "2222", "1122", "2211"]).unwrap();
        let r = d_new(&set, &set, &DistanceOptions::default()).unwrap();
        assert!(r.d_new.is_zero());
        assert_eq!(r.k0, 1);
        assert_eq!(r.weights, vec![Rational::new(1, 3), Rational::new(2, 3)]);
        assert!(r.dims[0].residual_left.is_empty());
        assert_eq!(r.dims[0].registered.len(), 1);
    }

    #[test]
    fn d_new_is_symmetric() {
        let a = StringSet::from_digit_strings(2, &["1111", "2222", "1122", "2211"]).unwrap();
        let b = StringSet::from_digit_strings(2, &["1111", "2222", "1212", "2112"]).unwrap();
        let ab = d_new(&a, &b, &DistanceOptions::default()).unwrap();
        let ba = d_new(&b, &a, &DistanceOptions::default()).unwrap();
        assert_eq!(ab.d_new, ba.d_new);
        assert_eq!(ab.epsilon, ba.epsilon);
        assert_ne!(ab.union_swapped, ba.union_swapped);
        let total = ab.weights.iter().fold(Rational::zero(), |acc, w| acc + w);
        assert_eq!(total, Rational::one());
    }

    #[test]
    fn zero_length_bars_are_ignored() {
        let (d, m) = bottleneck(&[iv(2, 2), iv(0, 1)], &[iv(0, 1)]).unwrap();
        assert_eq!(d, Rational::zero());
        assert_eq!(m.pairs, vec![(1, 0)]);
        assert_eq!(m.left_unmatched, vec![0]);
    }
}
