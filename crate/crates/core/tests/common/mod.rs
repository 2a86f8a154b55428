#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tetquery_core::{BoundingBox, Point3};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_box() -> BoundingBox {
    BoundingBox {
        min: [0.0; 3],
        max: [1.0; 3],
    }
}

pub fn random_points(rng: &mut impl Rng, bb: &BoundingBox, n: usize) -> Vec<Point3> {
    (0..n)
        .map(|_| std::array::from_fn(|k| rng.random_range(bb.min[k]..=bb.max[k])))
        .collect()
}

/// Sorted copy of a triple.
pub fn key(mut f: [i32; 3]) -> [i32; 3] {
    f.sort_unstable();
    f
}
