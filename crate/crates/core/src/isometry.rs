//! Filtration isomorphisms and Hamming isometries between string sets.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::metrics::{hamming, DiscreteString, Letter, StringSet};
use crate::rational::Rational;
use crate::simplex::Simplex;

/// Default limit on set size for bijection searches.
pub const DEFAULT_MAX_SEARCH_SIZE: usize = 9;

/// Looks for a vertex bijection `f` with `r(σ) = r(f[σ])` for every simplex.
///
/// Returns `f` as a vector (`f[i]` is the image of vertex `i`). Level sets
/// must coincide, since the isomorphism is defined level by level.
pub fn filtration_isomorphism(a: &Filtration, b: &Filtration) -> Result<Option<Vec<usize>>> {
    filtration_isomorphism_with_cap(a, b, DEFAULT_MAX_SEARCH_SIZE)
}

pub fn filtration_isomorphism_with_cap(
    a: &Filtration,
    b: &Filtration,
    cap: usize,
) -> Result<Option<Vec<usize>>> {
    let m = a.set().len();
    if m != b.set().len() {
        return Err(Error::CardinalityMismatch {
            left: m,
            right: b.set().len(),
        });
    }
    if m > cap {
        return Err(Error::CapExceeded {
            what: "isomorphism search size",
            size: m,
            cap,
        });
    }
    if !a.is_full() || !b.is_full() {
        return Err(Error::InvalidSimplex("isomorphism search needs full filtrations".into()));
    }
    if a.levels() != b.levels() {
        return Ok(None);
    }
    // the multiset of radii per dimension is a cheap necessary condition
    let radii_by_dim = |f: &Filtration| {
        let mut v: Vec<(usize, Rational)> = f
            .entries()
            .iter()
            .map(|e| (e.simplex.dim(), e.radius.clone()))
            .collect();
        v.sort();
        v
    };
    if radii_by_dim(a) != radii_by_dim(b) {
        return Ok(None);
    }
    let profile = |f: &Filtration, v: usize| {
        let mut p: Vec<Rational> = (0..m)
            .filter(|&u| u != v)
            .map(|u| f.radius_of(Simplex::vertex(v).with(u)).unwrap().clone())
            .collect();
        p.sort();
        p
    };
    let pa: Vec<_> = (0..m).map(|v| profile(a, v)).collect();
    let pb: Vec<_> = (0..m).map(|v| profile(b, v)).collect();
    let mut image = vec![usize::MAX; m];
    let mut used = vec![false; m];
    let found = extend_bijection(0, &mut image, &mut used, &|v, w| pa[v] == pb[w], &|image, v| {
        // every simplex whose largest vertex is v is now fully mapped
        let lower = (1u32 << v) - 1;
        let mut sub = lower;
        loop {
            let sigma = Simplex::from_mask(sub | 1 << v);
            let tau = sigma.map(|u| image[u]);
            if a.radius_of(sigma) != b.radius_of(tau) {
                return false;
            }
            if sub == 0 {
                return true;
            }
            sub = (sub - 1) & lower;
        }
    });
    Ok(found.then_some(image))
}

/// Depth-first search over injective assignments of `0..m`, in vertex order.
fn extend_bijection(
    v: usize,
    image: &mut [usize],
    used: &mut [bool],
    compatible: &dyn Fn(usize, usize) -> bool,
    consistent: &dyn Fn(&[usize], usize) -> bool,
) -> bool {
    let m = image.len();
    if v == m {
        return true;
    }
    for w in 0..m {
        if used[w] || !compatible(v, w) {
            continue;
        }
        image[v] = w;
        used[w] = true;
        if consistent(image, v) && extend_bijection(v + 1, image, used, compatible, consistent) {
            return true;
        }
        used[w] = false;
        image[v] = usize::MAX;
    }
    false
}

/// An isometry of `(S(n,l), d_H)`: a position permutation composed with
/// per-position letter permutations.
///
/// The image `t` of `s` satisfies `t[positions[i]] = letters[i][s[i] - 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HammingIsometry {
    pub alphabet: usize,
    pub positions: Vec<usize>,
    pub letters: Vec<Vec<Letter>>,
}

impl HammingIsometry {
    pub fn identity(alphabet: usize, length: usize) -> Self {
        Self {
            alphabet,
            positions: (0..length).collect(),
            letters: vec![(1..=alphabet as Letter).collect(); length],
        }
    }

    /// Validates that all maps are permutations.
    pub fn new(alphabet: usize, positions: Vec<usize>, letters: Vec<Vec<Letter>>) -> Result<Self> {
        let l = positions.len();
        let is_perm = |p: &[usize], n: usize| {
            let mut seen = vec![false; n];
            p.len() == n && p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
        };
        if !is_perm(&positions, l) || letters.len() != l {
            return Err(Error::Invariant("position map is not a permutation".into()));
        }
        for perm in &letters {
            let shifted: Vec<usize> = perm.iter().map(|&a| (a as usize).wrapping_sub(1)).collect();
            if !is_perm(&shifted, alphabet) {
                return Err(Error::Invariant("letter map is not a permutation".into()));
            }
        }
        Ok(Self {
            alphabet,
            positions,
            letters,
        })
    }

    pub fn apply(&self, s: &DiscreteString) -> DiscreteString {
        let mut out = vec![0 as Letter; s.len()];
        for (i, &a) in s.symbols().iter().enumerate() {
            out[self.positions[i]] = self.letters[i][a as usize - 1];
        }
        DiscreteString::new(self.alphabet, out).expect("permutations preserve validity")
    }

    pub fn apply_set(&self, set: &StringSet) -> Result<StringSet> {
        let strings: Vec<DiscreteString> = set.to_discrete()?.iter().map(|s| self.apply(s)).collect();
        StringSet::from_discrete(set.alphabet(), set.length(), &strings)
    }
}

/// A Hamming isometry mapping `a` onto `b`, with the induced element bijection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetIsometry {
    pub isometry: HammingIsometry,
    /// `bijection[i]` is the index in `b` of the image of `a[i]`.
    pub bijection: Vec<usize>,
}

/// Restricted-growth form of a column: equal letters get equal labels,
/// numbered by first appearance.
fn column_pattern(column: impl Iterator<Item = Letter>) -> Vec<u8> {
    let mut seen: Vec<Letter> = Vec::new();
    column
        .map(|a| match seen.iter().position(|&x| x == a) {
            Some(k) => k as u8,
            None => {
                seen.push(a);
                (seen.len() - 1) as u8
            }
        })
        .collect()
}

/// Searches the isometry group of `(S(n,l), d_H)` for a map taking `a` onto `b`.
pub fn hamming_isometry(a: &StringSet, b: &StringSet) -> Result<Option<SetIsometry>> {
    hamming_isometry_with_cap(a, b, DEFAULT_MAX_SEARCH_SIZE)
}

pub fn hamming_isometry_with_cap(a: &StringSet, b: &StringSet, cap: usize) -> Result<Option<SetIsometry>> {
    a.ensure_same_ambient(b)?;
    let m = a.len();
    if m != b.len() {
        return Err(Error::CardinalityMismatch { left: m, right: b.len() });
    }
    if m > cap {
        return Err(Error::CapExceeded {
            what: "isomorphism search size",
            size: m,
            cap,
        });
    }
    let sa = a.to_discrete()?;
    let sb = b.to_discrete()?;
    let l = a.length();
    // letter-multiset signature of each column is invariant under letter renaming
    let signature = |set: &[DiscreteString], i: usize| {
        let mut counts: HashMap<Letter, usize> = HashMap::new();
        for s in set {
            *counts.entry(s.symbol(i)).or_default() += 1;
        }
        let mut c: Vec<usize> = counts.into_values().collect();
        c.sort_unstable();
        c
    };
    let mut siga: Vec<Vec<usize>> = (0..l).map(|i| signature(&sa, i)).collect();
    let mut sigb: Vec<Vec<usize>> = (0..l).map(|i| signature(&sb, i)).collect();
    siga.sort();
    sigb.sort();
    if siga != sigb {
        return Ok(None);
    }
    let da: Vec<Vec<usize>> = sa.iter().map(|x| sa.iter().map(|y| hamming(x, y).unwrap()).collect()).collect();
    let db: Vec<Vec<usize>> = sb.iter().map(|x| sb.iter().map(|y| hamming(x, y).unwrap()).collect()).collect();
    let profile = |d: &[Vec<usize>], v: usize| {
        let mut p = d[v].clone();
        p.sort_unstable();
        p
    };
    let pa: Vec<_> = (0..m).map(|v| profile(&da, v)).collect();
    let pb: Vec<_> = (0..m).map(|v| profile(&db, v)).collect();
    let mut patterns_a: Vec<Vec<u8>> = (0..l).map(|i| column_pattern(sa.iter().map(|s| s.symbol(i)))).collect();
    patterns_a.sort();

    let mut image = vec![usize::MAX; m];
    let mut used = vec![false; m];
    let mut result = None;
    search_isometry(
        0,
        &mut image,
        &mut used,
        &|v, w| pa[v] == pb[w],
        &|image: &[usize], v: usize| (0..v).all(|u| da[u][v] == db[image[u]][image[v]]),
        &mut |image: &[usize]| {
            let mut patterns_b: Vec<(Vec<u8>, usize)> = (0..l)
                .map(|q| (column_pattern(image.iter().map(|&w| sb[w].symbol(q))), q))
                .collect();
            patterns_b.sort();
            let sorted_b: Vec<&Vec<u8>> = patterns_b.iter().map(|(p, _)| p).collect();
            if patterns_a.iter().ne(sorted_b) {
                return false;
            }
            result = Some(build_isometry(&sa, &sb, image, a.alphabet()));
            true
        },
    );
    Ok(result.map(|isometry| SetIsometry {
        isometry,
        bijection: image,
    }))
}

fn search_isometry(
    v: usize,
    image: &mut [usize],
    used: &mut [bool],
    compatible: &dyn Fn(usize, usize) -> bool,
    consistent: &dyn Fn(&[usize], usize) -> bool,
    accept: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let m = image.len();
    if v == m {
        return accept(image);
    }
    for w in 0..m {
        if used[w] || !compatible(v, w) {
            continue;
        }
        image[v] = w;
        used[w] = true;
        if consistent(image, v) && search_isometry(v + 1, image, used, compatible, consistent, accept) {
            return true;
        }
        used[w] = false;
        image[v] = usize::MAX;
    }
    false
}

/// Builds the position and letter maps once the element bijection is known
/// to admit matching column patterns.
fn build_isometry(sa: &[DiscreteString], sb: &[DiscreteString], image: &[usize], n: usize) -> HammingIsometry {
    let l = sa[0].len();
    let mut free_b: Vec<bool> = vec![true; l];
    let mut positions = vec![0; l];
    let mut letters = Vec::with_capacity(l);
    for i in 0..l {
        let pat_a = column_pattern(sa.iter().map(|s| s.symbol(i)));
        let q = (0..l)
            .find(|&q| free_b[q] && column_pattern(image.iter().map(|&w| sb[w].symbol(q))) == pat_a)
            .expect("pattern multisets agree");
        free_b[q] = false;
        positions[i] = q;
        let mut map: Vec<Option<Letter>> = vec![None; n];
        for (k, s) in sa.iter().enumerate() {
            map[s.symbol(i) as usize - 1] = Some(sb[image[k]].symbol(q));
        }
        // complete to a permutation with the unused letters in order
        let taken: Vec<Letter> = map.iter().flatten().copied().collect();
        let mut unused = (1..=n as Letter).filter(|b| !taken.contains(b));
        letters.push(map.into_iter().map(|x| x.unwrap_or_else(|| unused.next().unwrap())).collect());
    }
    HammingIsometry {
        alphabet: n,
        positions,
        letters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::Mode;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s1_s2() -> (StringSet, StringSet) {
        (
            StringSet::from_digit_strings(3, &["11113", "22223", "33333"]).unwrap(),
            StringSet::from_digit_strings(3, &["11113", "22223", "33122"]).unwrap(),
        )
    }

    #[test]
    fn filtration_iso_example() {
        let (a, b) = s1_s2();
        let fa = Filtration::build(&a, Mode::Discrete).unwrap();
        let fb = Filtration::build(&b, Mode::Discrete).unwrap();
        assert_eq!(filtration_isomorphism(&fa, &fb).unwrap(), Some(vec![0, 1, 2]));
        assert_eq!(filtration_isomorphism(&fa, &fa).unwrap(), Some(vec![0, 1, 2]));
        assert_eq!(hamming_isometry(&a, &b).unwrap(), None);
    }

    #[test]
    fn identity_isometry() {
        let (a, _) = s1_s2();
        let found = hamming_isometry(&a, &a).unwrap().unwrap();
        assert_eq!(found.bijection, vec![0, 1, 2]);
        assert_eq!(found.isometry.apply_set(&a).unwrap(), a);
    }

    #[test]
    fn different_levels_are_not_isomorphic() {
        let a = StringSet::from_digit_strings(2, &["111", "112"]).unwrap();
        let b = StringSet::from_digit_strings(2, &["111", "222"]).unwrap();
        let fa = Filtration::build(&a, Mode::Discrete).unwrap();
        let fb = Filtration::build(&b, Mode::Discrete).unwrap();
        assert_eq!(filtration_isomorphism(&fa, &fb).unwrap(), None);
    }

    #[test]
    fn recovers_random_isometries() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (n, l, m) = (3, 5, 4);
            let mut strings: Vec<DiscreteString> = Vec::new();
            while strings.len() < m {
                let s = DiscreteString::new(n, (0..l).map(|_| rng.gen_range(1..=n as Letter)).collect()).unwrap();
                if !strings.contains(&s) {
                    strings.push(s);
                }
            }
            let a = StringSet::from_discrete(n, l, &strings).unwrap();
            let mut positions: Vec<usize> = (0..l).collect();
            positions.shuffle(&mut rng);
            let letters = (0..l)
                .map(|_| {
                    let mut p: Vec<Letter> = (1..=n as Letter).collect();
                    p.shuffle(&mut rng);
                    p
                })
                .collect();
            let phi = HammingIsometry::new(n, positions, letters).unwrap();
            let mut images: Vec<DiscreteString> = strings.iter().map(|s| phi.apply(s)).collect();
            images.shuffle(&mut rng);
            let b = StringSet::from_discrete(n, l, &images).unwrap();
            let found = hamming_isometry(&a, &b).unwrap().expect("an isometry exists");
            let mapped = found.isometry.apply_set(&a).unwrap();
            for (i, s) in mapped.elements().iter().enumerate() {
                assert_eq!(s, b.get(found.bijection[i]));
            }
            let fa = Filtration::build(&a, Mode::Discrete).unwrap();
            let fb = Filtration::build(&b, Mode::Discrete).unwrap();
            assert!(filtration_isomorphism(&fa, &fb).unwrap().is_some());
        }
    }
}
