//! Simplex radii, centers and minimal generator sets.
//!
//! Discrete mode solves the closest-string problem exactly by binary search
//! over the radius with a branch-and-bound feasibility test restricted to the
//! letters occurring in each column. Generalized mode solves exact linear
//! programs: `d_GH(c, y)` is convex piecewise linear in the center `c`, so
//! "all vertices within `r` of `c`" is a projected polyhedron.

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation};
use crate::metrics::{gh_distance_unchecked, DiscreteString, GeneralizedString, Letter, Mode, StringSet};
use crate::rational::Rational;
use crate::simplex::Simplex;

/// A radius together with a center realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadiusCertificate {
    pub radius: Rational,
    pub center: GeneralizedString,
    pub mode: Mode,
}

/// Vertices of a simplex lying on the boundary of every circumscribed miniball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub simplex: Simplex,
    pub generators: Simplex,
    /// A center with exactly `generators` on its boundary, the rest strictly inside.
    pub witness_center: GeneralizedString,
    pub radius: Rational,
}

fn check_simplex(set: &StringSet, simplex: Simplex) -> Result<()> {
    if simplex.max_vertex() >= set.len() {
        return Err(Error::InvalidSimplex(format!(
            "{simplex} has vertices outside a set of {} strings",
            set.len()
        )));
    }
    Ok(())
}

/// Radius of `simplex` in the metric space selected by `mode`.
pub fn radius(set: &StringSet, simplex: Simplex, mode: Mode) -> Result<RadiusCertificate> {
    match mode {
        Mode::Discrete => radius_discrete(set, simplex),
        Mode::Generalized => radius_generalized(set, simplex),
    }
}

/// Closest-string radius over ordinary strings.
pub fn radius_discrete(set: &StringSet, simplex: Simplex) -> Result<RadiusCertificate> {
    check_simplex(set, simplex)?;
    let strings = simplex
        .vertices()
        .map(|v| set.get(v).to_discrete().ok_or(Error::NotDiscrete { index: v }))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&DiscreteString> = strings.iter().collect();
    let (r, center) = closest_string(&refs);
    Ok(RadiusCertificate {
        radius: Rational::from(r),
        center: crate::metrics::embed(&center),
        mode: Mode::Discrete,
    })
}

/// Exact closest string: smallest `r` and a string within `r` of all inputs.
pub fn closest_string(strings: &[&DiscreteString]) -> (usize, DiscreteString) {
    let first = strings[0];
    if strings.len() == 1 {
        return (0, first.clone());
    }
    let mut max_pair = 0;
    for (i, a) in strings.iter().enumerate() {
        for b in &strings[i + 1..] {
            let d = a
                .symbols()
                .iter()
                .zip(b.symbols())
                .filter(|(x, y)| x != y)
                .count();
            max_pair = max_pair.max(d);
        }
    }
    let search = ClosestStringSearch::new(strings);
    let mut lo = max_pair.div_ceil(2);
    let mut hi = max_pair;
    let mut best = first.clone();
    // hi is always feasible (any input string is within max_pair of the rest)
    while lo < hi {
        let mid = (lo + hi) / 2;
        match search.feasible(mid) {
            Some(c) => {
                hi = mid;
                best = c;
            }
            None => lo = mid + 1,
        }
    }
    if lo == max_pair {
        // re-derive the center at the final radius when it was never probed
        if let Some(c) = search.feasible(lo) {
            best = c;
        }
    }
    (lo, best)
}

struct ClosestStringSearch<'a> {
    strings: &'a [&'a DiscreteString],
    alphabet: usize,
    base: Vec<Letter>,
    /// Positions where the strings disagree, in search order.
    free: Vec<usize>,
    /// Candidate letters per free position, most frequent first.
    letters: Vec<Vec<Letter>>,
    /// `remaining[k][a*m+b]`: positions among `free[k..]` where strings `a` and `b` differ.
    remaining: Vec<Vec<usize>>,
}

impl<'a> ClosestStringSearch<'a> {
    fn new(strings: &'a [&'a DiscreteString]) -> Self {
        let m = strings.len();
        let l = strings[0].len();
        let base = strings[0].symbols().to_vec();
        let mut free = Vec::new();
        let mut letters = Vec::new();
        for i in 0..l {
            let mut counts: Vec<(usize, Letter)> = Vec::new();
            for s in strings {
                let a = s.symbol(i);
                match counts.iter_mut().find(|(_, x)| *x == a) {
                    Some(e) => e.0 += 1,
                    None => counts.push((1, a)),
                }
            }
            if counts.len() > 1 {
                counts.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
                free.push(i);
                letters.push(counts.into_iter().map(|(_, a)| a).collect());
            }
        }
        let mut remaining = vec![vec![0usize; m * m]; free.len() + 1];
        for k in (0..free.len()).rev() {
            let i = free[k];
            for a in 0..m {
                for b in 0..m {
                    let diff = (strings[a].symbol(i) != strings[b].symbol(i)) as usize;
                    remaining[k][a * m + b] = remaining[k + 1][a * m + b] + diff;
                }
            }
        }
        Self {
            strings,
            alphabet: strings[0].alphabet(),
            base,
            free,
            letters,
            remaining,
        }
    }

    fn feasible(&self, r: usize) -> Option<DiscreteString> {
        let mut dist = vec![0usize; self.strings.len()];
        let mut choice = vec![0 as Letter; self.free.len()];
        if self.dfs(0, r, &mut dist, &mut choice) {
            let mut symbols = self.base.clone();
            for (k, &i) in self.free.iter().enumerate() {
                symbols[i] = choice[k];
            }
            Some(DiscreteString::new(self.alphabet, symbols).expect("letters come from inputs"))
        } else {
            None
        }
    }

    fn dfs(&self, k: usize, r: usize, dist: &mut [usize], choice: &mut [Letter]) -> bool {
        let m = self.strings.len();
        // each remaining disagreement between a and b costs at least one of them a mismatch
        for a in 0..m {
            for b in a + 1..m {
                if dist[a] + dist[b] + self.remaining[k][a * m + b] > 2 * r {
                    return false;
                }
            }
        }
        if k == self.free.len() {
            return true;
        }
        let i = self.free[k];
        for &letter in &self.letters[k] {
            let mut ok = true;
            for (s, d) in self.strings.iter().zip(dist.iter_mut()) {
                if s.symbol(i) != letter {
                    *d += 1;
                    if *d > r {
                        ok = false;
                    }
                }
            }
            if ok {
                choice[k] = letter;
                if self.dfs(k + 1, r, dist, choice) {
                    return true;
                }
            }
            for (s, d) in self.strings.iter().zip(dist.iter_mut()) {
                if s.symbol(i) != letter {
                    *d -= 1;
                }
            }
        }
        false
    }
}

/// Radius of `simplex` over generalized strings, solved as an exact LP.
pub fn radius_generalized(set: &StringSet, simplex: Simplex) -> Result<RadiusCertificate> {
    check_simplex(set, simplex)?;
    let vertices: Vec<&GeneralizedString> = simplex.vertices().map(|v| set.get(v)).collect();
    let (radius, center) = min_radius(&vertices)?;
    Ok(RadiusCertificate {
        radius,
        center,
        mode: Mode::Generalized,
    })
}

/// True iff every vertex of `simplex` is within `r` of `center`.
pub fn is_center(center: &GeneralizedString, set: &StringSet, simplex: Simplex, r: &Rational) -> bool {
    if center.len() != set.length() || center.alphabet() != set.alphabet() {
        return false;
    }
    simplex
        .vertices()
        .all(|v| v < set.len() && gh_distance_unchecked(center, set.get(v)) <= *r)
}

/// Minimal generator set of `simplex` (generalized mode).
pub fn minimal_generators(set: &StringSet, simplex: Simplex) -> Result<GeneratorSet> {
    check_simplex(set, simplex)?;
    let vertices: Vec<&GeneralizedString> = simplex.vertices().map(|v| set.get(v)).collect();
    let (radius, center) = min_radius(&vertices)?;
    let (mask, witness) = generator_mask(&vertices, &radius, &center, |_| None)?;
    let ids = simplex.vertex_list();
    let generators = Simplex::from_mask(
        (0..ids.len())
            .filter(|k| mask >> k & 1 == 1)
            .fold(0u32, |m, k| m | 1 << ids[k]),
    );
    Ok(GeneratorSet {
        simplex,
        generators,
        witness_center: witness,
        radius,
    })
}

/// `σ ≈ τ`: same minimal generator set.
pub fn approx_equivalent(set: &StringSet, a: Simplex, b: Simplex) -> Result<bool> {
    if a == b {
        return Ok(true);
    }
    Ok(minimal_generators(set, a)?.generators == minimal_generators(set, b)?.generators)
}

/// `D(σ, u)`: least distance from `u` to a center of `σ`.
///
/// The centers range over the full center polytope of `σ` (radius `r(σ)`).
pub fn d_sigma(set: &StringSet, simplex: Simplex, u: usize) -> Result<Rational> {
    check_simplex(set, simplex)?;
    if u >= set.len() {
        return Err(Error::InvalidSimplex(format!("vertex {u} out of range")));
    }
    let vertices: Vec<&GeneralizedString> = simplex.vertices().map(|v| set.get(v)).collect();
    let (radius, _) = min_radius(&vertices)?;
    Ok(nearest_center_distance(&vertices, &radius, set.get(u))?.0)
}

// ---------------------------------------------------------------------------
// LP construction

/// Center variables of one LP: which positions vary and which letters they may use.
struct CenterModel<'a> {
    lp: LinearProgram,
    template: &'a GeneralizedString,
    active: Vec<usize>,
    /// `vars[k]`: (letter, variable) pairs of active position `active[k]`.
    vars: Vec<Vec<(Letter, usize)>>,
}

impl<'a> CenterModel<'a> {
    /// Positions where all `involved` strings agree are fixed to their common
    /// distribution (it is optimal for every term there); elsewhere the center
    /// only needs letters in the union of supports.
    fn new(involved: &[&'a GeneralizedString]) -> Self {
        let template = involved[0];
        let mut lp = LinearProgram::new(0);
        let mut active = Vec::new();
        let mut vars = Vec::new();
        for i in 0..template.len() {
            let d0 = template.distribution(i);
            if involved[1..].iter().all(|s| s.distribution(i) == d0) {
                continue;
            }
            let mut letters: Vec<Letter> = Vec::new();
            for s in involved {
                for a in s.support(i) {
                    if !letters.contains(&a) {
                        letters.push(a);
                    }
                }
            }
            letters.sort_unstable();
            let row: Vec<(Letter, usize)> = letters.into_iter().map(|a| (a, lp.add_var())).collect();
            lp.constrain(
                row.iter().map(|&(_, v)| (v, Rational::one())).collect(),
                Relation::Eq,
                Rational::one(),
            );
            active.push(i);
            vars.push(row);
        }
        Self {
            lp,
            template,
            active,
            vars,
        }
    }

    /// `d_GH(c, y)` as `constant + terms`, adding overlap variables where `y`
    /// is not a point mass.
    fn distance_expr(&mut self, y: &GeneralizedString) -> (Rational, Vec<(usize, Rational)>) {
        let mut constant = Rational::zero();
        let mut terms = Vec::new();
        for (k, &i) in self.active.iter().enumerate() {
            let var_of = |a: Letter| {
                self.vars[k]
                    .iter()
                    .find(|(b, _)| *b == a)
                    .map(|&(_, v)| v)
                    .expect("support letters are modelled")
            };
            match y.point_mass(i) {
                Some(a) => {
                    constant += Rational::one();
                    terms.push((var_of(a), -Rational::one()));
                }
                None => {
                    let support: Vec<Letter> = y.support(i).collect();
                    for a in support {
                        let c = var_of(a);
                        let t = self.lp.add_var();
                        // t >= y_a - c_a
                        self.lp.constrain(
                            vec![(c, Rational::one()), (t, Rational::one())],
                            Relation::Ge,
                            y.weight(i, a).clone(),
                        );
                        terms.push((t, Rational::one()));
                    }
                }
            }
        }
        (constant, terms)
    }

    fn center(&self, x: &[Rational]) -> GeneralizedString {
        let n = self.template.alphabet();
        let mut weights: Vec<Vec<Rational>> = (0..self.template.len())
            .map(|i| self.template.distribution(i).to_vec())
            .collect();
        for (k, &i) in self.active.iter().enumerate() {
            let mut dist = vec![Rational::zero(); n];
            for &(a, v) in &self.vars[k] {
                dist[a as usize - 1] = x[v].clone();
            }
            weights[i] = dist;
        }
        GeneralizedString::from_weights_unchecked(n, weights)
    }
}

fn lp_failure(e: crate::lp::LpError) -> Error {
    Error::Invariant(format!("center LP failed: {e}"))
}

/// Smallest `r` with a common center, and such a center.
pub(crate) fn min_radius(vertices: &[&GeneralizedString]) -> Result<(Rational, GeneralizedString)> {
    if vertices.len() == 1 {
        return Ok((Rational::zero(), vertices[0].clone()));
    }
    let mut model = CenterModel::new(vertices);
    if model.active.is_empty() {
        return Ok((Rational::zero(), vertices[0].clone()));
    }
    let r = model.lp.add_var();
    for y in vertices {
        let (constant, mut terms) = model.distance_expr(y);
        terms.push((r, -Rational::one()));
        model.lp.constrain(terms, Relation::Le, -constant);
    }
    model.lp.minimize(vec![(r, Rational::one())]);
    let sol = model.lp.solve().map_err(lp_failure)?;
    let center = model.center(&sol.x);
    Ok((sol.value, center))
}

/// `min d_GH(c, target)` over centers `c` within `radius` of every vertex.
pub(crate) fn nearest_center_distance(
    vertices: &[&GeneralizedString],
    radius: &Rational,
    target: &GeneralizedString,
) -> Result<(Rational, GeneralizedString)> {
    let mut involved: Vec<&GeneralizedString> = vertices.to_vec();
    involved.push(target);
    let mut model = CenterModel::new(&involved);
    if model.active.is_empty() {
        return Ok((Rational::zero(), target.clone()));
    }
    for y in vertices {
        let (constant, terms) = model.distance_expr(y);
        model.lp.constrain(terms, Relation::Le, radius - &constant);
    }
    let (constant, terms) = model.distance_expr(target);
    model.lp.minimize(terms);
    let sol = model.lp.solve().map_err(lp_failure)?;
    let center = model.center(&sol.x);
    Ok((sol.value + constant, center))
}

/// Minimal generators of the simplex spanned by `vertices` as a bitmask over
/// their positions, plus a witness center.
///
/// `face_radius(k)` may report the radius of the face without vertex `k`;
/// a strictly smaller face radius proves `k` is a generator without an LP.
pub(crate) fn generator_mask(
    vertices: &[&GeneralizedString],
    radius: &Rational,
    center: &GeneralizedString,
    face_radius: impl Fn(usize) -> Option<Rational>,
) -> Result<(u32, GeneralizedString)> {
    let m = vertices.len();
    if m == 1 || radius.is_zero() {
        return Ok(((1u32 << m) - 1, center.clone()));
    }
    let mut mask = 0u32;
    let mut interior_centers: Vec<GeneralizedString> = Vec::new();
    let mut center_used = false;
    for k in 0..m {
        if gh_distance_unchecked(center, vertices[k]) < *radius {
            if !center_used {
                interior_centers.push(center.clone());
                center_used = true;
            }
            continue;
        }
        if let Some(fr) = face_radius(k) {
            if fr < *radius {
                mask |= 1 << k;
                continue;
            }
        }
        let (d, c) = nearest_center_distance(vertices, radius, vertices[k])?;
        if d == *radius {
            mask |= 1 << k;
        } else {
            interior_centers.push(c);
        }
    }
    let witness = if interior_centers.is_empty() {
        center.clone()
    } else {
        average(&interior_centers)
    };
    Ok((mask, witness))
}

/// Position-wise average of generalized strings.
fn average(strings: &[GeneralizedString]) -> GeneralizedString {
    let k = Rational::from(strings.len());
    let n = strings[0].alphabet();
    let weights = (0..strings[0].len())
        .map(|i| {
            (0..n)
                .map(|j| strings.iter().map(|s| s.distribution(i)[j].clone()).sum::<Rational>() / &k)
                .collect()
        })
        .collect();
    GeneralizedString::from_weights_unchecked(n, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{embed, gh_distance};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn s(v: &[usize]) -> Simplex {
        Simplex::from_vertices(v).unwrap()
    }

    fn example_21() -> StringSet {
        StringSet::from_digit_strings(4, &["12244131", "22223443", "32143431", "14443214", "22134222"])
            .unwrap()
    }

    #[test]
    fn discrete_radius_examples() {
        let a = example_21();
        let c = radius_discrete(&a, s(&[0])).unwrap();
        assert_eq!(c.radius, Rational::zero());
        assert_eq!(c.center, *a.get(0));
        let c = radius_discrete(&a, s(&[0, 2])).unwrap();
        assert_eq!(c.radius, Rational::from(2));
        assert!(is_center(&c.center, &a, s(&[0, 2]), &c.radius));
        for named in ["32244431", "12143131"] {
            let center = embed(&DiscreteString::from_digits(4, named).unwrap());
            assert!(is_center(&center, &a, s(&[0, 2]), &Rational::from(2)));
            assert!(!is_center(&center, &a, s(&[0, 2]), &Rational::one()));
        }
        assert_eq!(radius_discrete(&a, s(&[0, 1, 3, 4])).unwrap().radius, Rational::from(5));
    }

    #[test]
    fn discrete_radius_rejects_generalized_input() {
        let g = GeneralizedString::new(2, vec![vec![q(1, 2), q(1, 2)]]).unwrap();
        let h = GeneralizedString::new(2, vec![vec![Rational::one(), Rational::zero()]]).unwrap();
        let set = StringSet::new(2, 1, vec![h, g]).unwrap();
        assert!(matches!(radius_discrete(&set, s(&[0, 1])), Err(Error::NotDiscrete { index: 1 })));
    }

    #[test]
    fn center_example_s36() {
        let set = StringSet::from_digit_strings(3, &["111112", "111113", "222221", "333331"]).unwrap();
        let all = s(&[0, 1, 2, 3]);
        let c = radius_generalized(&set, all).unwrap();
        assert_eq!(c.radius, q(11, 3));
        assert!(is_center(&c.center, &set, all, &c.radius));
        let d = |a: i64, b: i64, c: i64| vec![q(a, 15), q(b, 15), q(c, 15)];
        let point = vec![Rational::one(), Rational::zero(), Rational::zero()];
        let b = GeneralizedString::new(3, [vec![d(7, 4, 4); 5], vec![point.clone()]].concat()).unwrap();
        let b_prime =
            GeneralizedString::new(3, [vec![d(5, 5, 5), d(9, 3, 3)], vec![d(7, 4, 4); 3], vec![point]].concat()).unwrap();
        for center in [&b, &b_prime] {
            assert!(is_center(center, &set, all, &q(11, 3)));
            assert!(!is_center(center, &set, all, &q(10, 3)));
            for v in set.elements() {
                assert_eq!(gh_distance(center, v).unwrap(), q(11, 3));
            }
        }
    }

    #[test]
    fn pair_radius_is_half_distance() {
        let set = StringSet::from_digit_strings(4, &["12244131", "32143431"]).unwrap();
        let c = radius_generalized(&set, s(&[0, 1])).unwrap();
        assert_eq!(c.radius, Rational::from(2));
        let set = StringSet::from_digit_strings(2, &["11", "12"]).unwrap();
        assert_eq!(radius_generalized(&set, s(&[0, 1])).unwrap().radius, q(1, 2));
    }

    #[test]
    fn generators_of_the_square_example() {
        // 1111, 2222, 1222, 1212
        let set = StringSet::from_digit_strings(2, &["1111", "2222", "1222", "1212"]).unwrap();
        let sigma = s(&[0, 1]);
        let tau = s(&[0, 1, 2]);
        let theta = s(&[0, 1, 3]);
        for x in [sigma, tau, theta] {
            let g = minimal_generators(&set, x).unwrap();
            assert_eq!(g.generators, sigma, "{x}");
            assert_eq!(g.radius, Rational::from(2));
            // witness: generators on the boundary, everything else inside
            for v in x.vertices() {
                let d = gh_distance(&g.witness_center, set.get(v)).unwrap();
                if g.generators.contains(v) {
                    assert_eq!(d, g.radius);
                } else {
                    assert!(d < g.radius);
                }
            }
        }
        assert!(approx_equivalent(&set, sigma, tau).unwrap());
        assert!(approx_equivalent(&set, sigma, theta).unwrap());
        assert!(!approx_equivalent(&set, s(&[0]), s(&[1])).unwrap());
        assert_eq!(minimal_generators(&set, s(&[2])).unwrap().generators, s(&[2]));
    }

    #[test]
    fn named_centers_of_the_square_example() {
        let set = StringSet::from_digit_strings(2, &["1111", "2222", "1222"]).unwrap();
        let c1 = embed(&DiscreteString::from_digits(2, "1122").unwrap());
        let c2 = embed(&DiscreteString::from_digits(2, "2211").unwrap());
        let two = Rational::from(2);
        assert!(is_center(&c1, &set, s(&[0, 1]), &two));
        assert!(is_center(&c2, &set, s(&[0, 1]), &two));
        assert!(is_center(&c1, &set, s(&[0, 1, 2]), &two));
        assert!(!is_center(&c2, &set, s(&[0, 1, 2]), &two));
        let half = vec![q(1, 2), q(1, 2)];
        let c3 = GeneralizedString::new(
            2,
            vec![half.clone(), half, vec![Rational::one(), Rational::zero()], vec![Rational::zero(), Rational::one()]],
        )
        .unwrap();
        assert!(is_center(&c3, &set, s(&[0, 1]), &two));
        assert!(is_center(set.get(0), &set, s(&[0]), &Rational::zero()));
    }

    #[test]
    fn d_sigma_examples() {
        let set = StringSet::from_digit_strings(2, &["1111", "2222", "1222"]).unwrap();
        let sigma = s(&[0, 1]);
        assert_eq!(d_sigma(&set, sigma, 0).unwrap(), Rational::from(2));
        let d = d_sigma(&set, sigma, 2).unwrap();
        assert!(d < Rational::from(2));
        // 1222 can sit at distance 1 from a center such as 1122 with 1 and 2 split evenly: the
        // best center keeps 2 from both generators and agrees with 1222 on three positions.
        assert_eq!(d, Rational::one());
        assert_eq!(d_sigma(&set, s(&[2]), 2).unwrap(), Rational::zero());
    }
}
