#![allow(dead_code)]

use hammology::isometry::HammingIsometry;
use hammology::{Letter, StringSet};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const EXAMPLE: [&str; 5] = ["12244131", "22223443", "32143431", "14443214", "22134222"];

pub fn example() -> StringSet {
    StringSet::from_digit_strings(4, &EXAMPLE).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `m` distinct random strings of length `l` over `n` letters.
pub fn random_set(rng: &mut impl Rng, n: usize, l: usize, m: usize) -> StringSet {
    let mut strings: Vec<String> = Vec::new();
    while strings.len() < m {
        let s: String = (0..l).map(|_| char::from(b'1' + rng.gen_range(0..n) as u8)).collect();
        if !strings.contains(&s) {
            strings.push(s);
        }
    }
    let refs: Vec<&str> = strings.iter().map(String::as_str).collect();
    StringSet::from_digit_strings(n, &refs).unwrap()
}

/// A random set with `m <= n^l` guaranteed.
pub fn random_shape(rng: &mut impl Rng, max_n: usize, max_l: usize, min_m: usize, max_m: usize) -> StringSet {
    loop {
        let n = rng.gen_range(2..=max_n);
        let l = rng.gen_range(2..=max_l);
        let m = rng.gen_range(min_m..=max_m);
        if (m as u32) <= (n as u32).pow(l as u32) {
            return random_set(rng, n, l, m);
        }
    }
}

pub fn random_isometry(rng: &mut impl Rng, n: usize, l: usize) -> HammingIsometry {
    let mut positions: Vec<usize> = (0..l).collect();
    positions.shuffle(rng);
    let letters = (0..l)
        .map(|_| {
            let mut p: Vec<Letter> = (1..=n as Letter).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    HammingIsometry::new(n, positions, letters).unwrap()
}
