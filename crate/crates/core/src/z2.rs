//! Bit-packed vectors over Z2 and incremental span membership.

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Largest set index.
    pub fn low(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Set indices in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + b)
                }
            })
        })
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// A subspace of Z2^n kept in echelon form keyed by lowest index.
#[derive(Debug, Clone, Default)]
pub struct Span {
    pivots: std::collections::BTreeMap<usize, BitVector>,
}

impl Span {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the basis; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        while let Some(low) = v.low() {
            match self.pivots.get(&low) {
                Some(p) => v.xor_assign(p),
                None => break,
            }
        }
        v
    }

    pub fn basis(&self) -> impl Iterator<Item = &BitVector> {
        self.pivots.values()
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        let r = self.reduce(v);
        match r.low() {
            Some(low) => {
                self.pivots.insert(low, r);
                true
            }
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_and_ones() {
        let v = BitVector::from_indices(130, [3, 64, 129]);
        assert_eq!(v.low(), Some(129));
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![3, 64, 129]);
        assert!(BitVector::zeros(10).low().is_none());
    }

    #[test]
    fn span_membership() {
        let mut s = Span::new();
        assert!(s.insert(&BitVector::from_indices(8, [0, 1])));
        assert!(s.insert(&BitVector::from_indices(8, [1, 2])));
        assert!(s.contains(&BitVector::from_indices(8, [0, 2])));
        assert!(!s.contains(&BitVector::from_indices(8, [0])));
        assert!(!s.insert(&BitVector::from_indices(8, [0, 2])));
        assert_eq!(s.dim(), 2);
    }
}
