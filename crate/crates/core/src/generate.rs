//! Seeded instance and matching generators.
//!
//! All randomness goes through ChaCha8 seeded with a `u64`, so a seed reproduces its
//! output exactly within this implementation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::ModelError;
use crate::model::{edge_count, Colour, ColouredClique, PerfectMatching};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent seed for a named sub-stream (splitmix64 finaliser).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A uniformly random balanced colouring: each colour appears `n(2nk-1)` times,
/// shuffled and laid out in lexicographic edge order.
pub fn random_balanced(n: usize, k: usize, seed: u64) -> Result<ColouredClique, ModelError> {
    if n == 0 || k == 0 {
        return Err(ModelError::NonPositiveParameters { n, k });
    }
    let vertices = 2 * n * k;
    let share = n * (vertices - 1);
    let mut colours: Vec<Colour> = (1..=k as Colour)
        .flat_map(|c| std::iter::repeat_n(c, share))
        .collect();
    debug_assert_eq!(colours.len(), edge_count(vertices));
    colours.shuffle(&mut rng(seed));
    ColouredClique::new(n, k, colours)
}

/// A uniformly random perfect matching on `num_vertices` (even) vertices: shuffle, then
/// pair consecutive entries.
pub fn random_matching_on(num_vertices: usize, seed: u64) -> PerfectMatching {
    assert!(num_vertices.is_multiple_of(2), "odd vertex count {num_vertices}");
    let mut order: Vec<usize> = (0..num_vertices).collect();
    order.shuffle(&mut rng(seed));
    let pairs = order.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    PerfectMatching::new(pairs, num_vertices).expect("shuffled pairing is a perfect matching")
}

pub fn random_matching(clique: &ColouredClique, seed: u64) -> PerfectMatching {
    random_matching_on(clique.num_vertices(), seed)
}
