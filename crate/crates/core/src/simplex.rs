use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest vertex count a [`Simplex`] can index.
pub const MAX_VERTICES: usize = 31;

/// A nonempty set of vertex ids, stored as a bitmask.
///
/// Ordering is lexicographic on the ascending vertex lists, so `[0,1] < [0,1,2] < [0,2]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Simplex(u32);

impl Simplex {
    pub fn from_vertices(vertices: &[usize]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidSimplex("empty vertex list".into()));
        }
        let mut mask = 0u32;
        for &v in vertices {
            if v >= MAX_VERTICES {
                return Err(Error::InvalidSimplex(format!("vertex id {v} out of range")));
            }
            if mask >> v & 1 == 1 {
                return Err(Error::InvalidSimplex(format!("vertex {v} repeated")));
            }
            mask |= 1 << v;
        }
        Ok(Simplex(mask))
    }

    /// Panics on an empty mask.
    pub fn from_mask(mask: u32) -> Self {
        assert!(mask != 0, "empty simplex");
        Simplex(mask)
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(1 << v)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn dim(self) -> usize {
        self.len() - 1
    }

    pub fn contains(self, v: usize) -> bool {
        v < 32 && self.0 >> v & 1 == 1
    }

    pub fn is_subset_of(self, other: Simplex) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn max_vertex(self) -> usize {
        31 - self.0.leading_zeros() as usize
    }

    pub fn vertices(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(v)
            }
        })
    }

    pub fn vertex_list(self) -> Vec<usize> {
        self.vertices().collect()
    }

    /// `self` without `v`, or `None` when that leaves nothing.
    pub fn without(self, v: usize) -> Option<Simplex> {
        let m = self.0 & !(1 << v);
        (m != 0).then_some(Simplex(m))
    }

    pub fn with(self, v: usize) -> Simplex {
        Simplex(self.0 | 1 << v)
    }

    pub fn union(self, other: Simplex) -> Simplex {
        Simplex(self.0 | other.0)
    }

    /// Codimension-one faces; empty for a vertex.
    pub fn facets(self) -> impl Iterator<Item = Simplex> {
        let full = self.0;
        self.vertices().filter_map(move |v| {
            let m = full & !(1 << v);
            (m != 0).then_some(Simplex(m))
        })
    }

    /// Image under a vertex map.
    pub fn map(self, f: impl Fn(usize) -> usize) -> Simplex {
        Simplex(self.vertices().fold(0, |m, v| m | 1 << f(v)))
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices().cmp(other.vertices())
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Simplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.vertex_list().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Simplex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(deserializer)?;
        Simplex::from_vertices(&v).map_err(serde::de::Error::custom)
    }
}

/// All nonempty subsets of `m` vertices, as masks `1..2^m`.
pub fn all_simplices(m: usize) -> impl Iterator<Item = Simplex> {
    (1u32..(1u32 << m)).map(Simplex)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order() {
        let s = |v: &[usize]| Simplex::from_vertices(v).unwrap();
        let mut list = vec![s(&[0, 2]), s(&[1]), s(&[0, 1, 2]), s(&[0, 1]), s(&[0])];
        list.sort();
        assert_eq!(
            list,
            vec![s(&[0]), s(&[0, 1]), s(&[0, 1, 2]), s(&[0, 2]), s(&[1])]
        );
    }

    #[test]
    fn facets_and_membership() {
        let t = Simplex::from_vertices(&[1, 3, 4]).unwrap();
        assert_eq!(t.dim(), 2);
        let f: Vec<String> = t.facets().map(|f| f.to_string()).collect();
        assert_eq!(f, vec!["[3,4]", "[1,4]", "[1,3]"]);
        assert!(t.contains(3) && !t.contains(2));
        assert_eq!(Simplex::vertex(2).facets().count(), 0);
        assert!(Simplex::from_vertices(&[]).is_err());
        assert!(Simplex::from_vertices(&[1, 1]).is_err());
    }
}
