#![allow(dead_code)]

use cutstock::{Instance, ItemType};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SUITE_SIZE: usize = 400;
pub const SUITE_SEED: u64 = 0x5eed_2d_c5;

/// Random instance with at most `max_copies` copies on a sheet no larger than
/// 6x6. Every item fits unrotated, so both modes accept it.
pub fn random_instance(rng: &mut impl Rng, index: usize, max_copies: u32) -> Instance {
    let w: u32 = rng.random_range(1..=6);
    let h: u32 = rng.random_range(1..=6);
    let mut budget = rng.random_range(1..=max_copies);
    let mut types = Vec::new();
    while budget > 0 && types.len() < 4 {
        let d = rng.random_range(1..=budget);
        // sides of at least a third of the sheet make FFD and the area bound loose
        let iw = rng.random_range(w.div_ceil(3)..=w);
        let ih = rng.random_range(h.div_ceil(3)..=h);
        types.push(ItemType::new(iw, ih, d));
        budget -= d;
    }
    Instance::new(format!("rand{index:03}"), w, h, types).expect("generated dimensions fit")
}

/// The fixed suite used by the equivalence checks.
pub fn suite() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    (0..SUITE_SIZE).map(|i| random_instance(&mut rng, i, 6)).collect()
}
