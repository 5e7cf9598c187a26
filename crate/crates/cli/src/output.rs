//! Serializable result documents. Rationals are written as "p/q" strings and
//! infinite deaths as "inf".

use std::collections::BTreeMap;

use hammology::filtration::Filtration;
use hammology::matching::{BarMatching, DimensionReport, MatchReport, RegistrationReport};
use hammology::persistence::{Bar, BarcodeSet, Interval};
use hammology::separation::{SeparationResult, SeparationStep};
use hammology::{GeneralizedString, Rational, Simplex, StringSet};
use serde::{Serialize, Serializer};

/// A death level, or "inf".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Death(pub Option<Rational>);

impl Serialize for Death {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match &self.0 {
            Some(r) => serializer.collect_str(r),
            None => serializer.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalOut {
    pub birth: Rational,
    pub death: Death,
}

impl From<&Interval> for IntervalOut {
    fn from(i: &Interval) -> Self {
        Self {
            birth: i.birth.clone(),
            death: Death(i.death.clone()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BarOut {
    pub birth: Rational,
    pub death: Death,
    pub birth_simplex: Simplex,
    pub death_simplex: Option<Simplex>,
    pub representative: Vec<Simplex>,
}

impl From<&Bar> for BarOut {
    fn from(b: &Bar) -> Self {
        Self {
            birth: b.birth().clone(),
            death: Death(b.death().cloned()),
            birth_simplex: b.birth_simplex,
            death_simplex: b.death_simplex,
            representative: b.representative.simplices.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DimensionBars {
    pub dim: usize,
    pub bars: Vec<BarOut>,
}

/// Nonzero-length bars for dimensions `0..=max_dim`, empty ones dropped.
pub fn barcodes(bc: &BarcodeSet, max_dim: Option<usize>) -> Vec<DimensionBars> {
    let top = bc.num_dims().min(max_dim.map_or(usize::MAX, |d| d + 1));
    (0..top)
        .map(|dim| DimensionBars {
            dim,
            bars: bc.bars(dim).into_iter().map(BarOut::from).collect(),
        })
        .filter(|d| !d.bars.is_empty())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub simplex: Simplex,
    pub radius: Rational,
}

pub fn radius_table(f: &Filtration) -> Vec<TableRow> {
    f.entries()
        .iter()
        .map(|e| TableRow {
            simplex: e.simplex,
            radius: e.radius.clone(),
        })
        .collect()
}

/// A string in the input syntax: digits, a symbol list, or per-position maps.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum StringOut {
    Digits(String),
    Symbols(Vec<u16>),
    Distributions(Vec<BTreeMap<u16, Rational>>),
}

impl StringOut {
    pub fn new(s: &GeneralizedString) -> Self {
        match s.to_discrete() {
            Some(d) if s.alphabet() <= 9 => StringOut::Digits(d.symbols().iter().map(|c| char::from(b'0' + *c as u8)).collect()),
            Some(d) => StringOut::Symbols(d.symbols().to_vec()),
            None => StringOut::Distributions(
                (0..s.len())
                    .map(|i| s.support(i).map(|c| (c, s.weight(i, c).clone())).collect())
                    .collect(),
            ),
        }
    }
}

pub fn strings(set: &StringSet) -> Vec<StringOut> {
    set.elements().iter().map(StringOut::new).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct StepOut {
    pub z: usize,
    pub j_exponent: u32,
    pub perturbation: Rational,
    pub pair: (Simplex, Simplex),
    pub appended_position: usize,
    pub bound: Rational,
}

impl From<&SeparationStep> for StepOut {
    fn from(s: &SeparationStep) -> Self {
        Self {
            z: s.moved_vertex,
            j_exponent: s.j_exponent,
            perturbation: s.perturbation(),
            pair: s.target_pair,
            appended_position: s.appended_position,
            bound: s.bound.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationOut {
    pub epsilon: Rational,
    pub steps: Vec<StepOut>,
    pub separated: Vec<StringOut>,
    pub radii_separated: bool,
    pub shifts_within_epsilon: bool,
}

impl From<&SeparationResult> for SeparationOut {
    fn from(s: &SeparationResult) -> Self {
        Self {
            epsilon: s.epsilon.clone(),
            steps: s.steps.iter().map(StepOut::from).collect(),
            separated: strings(&s.separated),
            radii_separated: s.radii_separated(),
            shifts_within_epsilon: s.shifts_within_epsilon(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchingOut {
    pub delta: Rational,
    pub pairs: Vec<(IntervalOut, IntervalOut)>,
    pub left_diagonal: Vec<IntervalOut>,
    pub right_diagonal: Vec<IntervalOut>,
}

impl MatchingOut {
    pub fn new(m: &BarMatching, left: &[Interval], right: &[Interval]) -> Self {
        Self {
            delta: m.delta.clone(),
            pairs: m.pairs.iter().map(|&(a, b)| ((&left[a]).into(), (&right[b]).into())).collect(),
            left_diagonal: m.left_unmatched.iter().map(|&a| (&left[a]).into()).collect(),
            right_diagonal: m.right_unmatched.iter().map(|&b| (&right[b]).into()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RegisteredOut {
    pub left: IntervalOut,
    pub right: IntervalOut,
    pub union_death: Rational,
    pub cost: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimensionOut {
    pub dim: usize,
    pub d_k: Rational,
    pub registered: Vec<RegisteredOut>,
    pub residual: MatchingOut,
}

impl From<&DimensionReport> for DimensionOut {
    fn from(d: &DimensionReport) -> Self {
        Self {
            dim: d.dim,
            d_k: d.distance.clone(),
            registered: d
                .registered
                .iter()
                .map(|r| RegisteredOut {
                    left: (&r.left).into(),
                    right: (&r.right).into(),
                    union_death: r.union_death.clone(),
                    cost: r.cost.clone(),
                })
                .collect(),
            residual: MatchingOut::new(&d.residual_matching, &d.residual_left, &d.residual_right),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DnewOut {
    pub epsilon: Rational,
    pub k0: usize,
    pub weights: Vec<Rational>,
    pub distances: Vec<Rational>,
    pub d_new: Rational,
    pub bc0_lengths: (Vec<Rational>, Vec<Rational>),
    pub registration_skipped: Option<&'static str>,
    pub dimensions: Vec<DimensionOut>,
    pub separation: TracesOut,
}

#[derive(Debug, Clone, Serialize)]
pub struct TracesOut {
    pub left: SeparationOut,
    pub right: SeparationOut,
    pub union: SeparationOut,
    pub union_order: &'static str,
}

impl From<&MatchReport> for DnewOut {
    fn from(r: &MatchReport) -> Self {
        Self {
            epsilon: r.epsilon.clone(),
            k0: r.k0,
            weights: r.weights.clone(),
            distances: r.distances.clone(),
            d_new: r.d_new.clone(),
            bc0_lengths: r.lengths.clone(),
            registration_skipped: r.registration_skipped,
            dimensions: r.dims.iter().map(DimensionOut::from).collect(),
            separation: TracesOut {
                left: (&r.left).into(),
                right: (&r.right).into(),
                union: (&r.union.result).into(),
                union_order: if r.union_swapped { "second,first" } else { "first,second" },
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RegistrationOut {
    pub dim: usize,
    pub pairs: Vec<(usize, usize, Rational)>,
    pub residual_left: Vec<usize>,
    pub residual_right: Vec<usize>,
}

impl From<&RegistrationReport> for RegistrationOut {
    fn from(r: &RegistrationReport) -> Self {
        Self {
            dim: r.dim,
            pairs: r.pairs.iter().map(|p| (p.left, p.right, p.union_death.clone())).collect(),
            residual_left: r.residual_left.clone(),
            residual_right: r.residual_right.clone(),
        }
    }
}
