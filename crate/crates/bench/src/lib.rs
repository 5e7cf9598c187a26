//! Seeded input generators shared by the benchmarks.

use hammology::persistence::Interval;
use hammology::{Rational, StringSet};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `m` distinct random strings of length `l` over `n <= 9` letters.
pub fn random_set(rng: &mut impl Rng, n: usize, l: usize, m: usize) -> StringSet {
    let mut strings: Vec<String> = Vec::with_capacity(m);
    while strings.len() < m {
        let s: String = (0..l).map(|_| char::from(b'1' + rng.gen_range(0..n) as u8)).collect();
        if !strings.contains(&s) {
            strings.push(s);
        }
    }
    let refs: Vec<&str> = strings.iter().map(String::as_str).collect();
    StringSet::from_digit_strings(n, &refs).expect("generated strings are valid")
}

/// `count` finite bars with endpoints in quarters of `0..=4 * span`.
pub fn random_bars(rng: &mut impl Rng, count: usize, span: i64) -> Vec<Interval> {
    (0..count)
        .map(|_| {
            let b = rng.gen_range(0..4 * span);
            let d = rng.gen_range(b + 1..=4 * span);
            Interval::finite(Rational::new(b, 4), Rational::new(d, 4))
        })
        .collect()
}
