//! Fixed inputs shared by the benchmarks.

use std::sync::Arc;

use pcoh::random::{random_pcs, rng};
use pcoh::Pcs;

/// Seeded random spaces of web size `n`, each from at most `gens` generators.
pub fn spaces(seed: u64, count: usize, n: usize, gens: usize) -> Vec<Arc<Pcs>> {
    let mut r = rng(seed);
    (0..count).map(|_| random_pcs(&mut r, n, gens, 4).expect("random space")).collect()
}
