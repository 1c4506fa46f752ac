//! Fixtures shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treespectrum::{build_simple_graph, ConstructionParams, IntMatrix, Word};

/// Word of length `len` with entries in `2..=max_entry`, fixed by `seed`.
pub fn seeded_word(seed: u64, len: usize, max_entry: u64) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<u64> = (0..len).map(|_| rng.gen_range(2..=max_entry)).collect();
    Word::from_u64s(&xs).expect("entries >= 2")
}

/// Root cofactor of `G_w` for the all-`q+1` word of length `m`.
pub fn simple_cofactor(m: usize, q: u32) -> IntMatrix {
    let word = Word::from_u64s(&vec![q as u64 + 1; m]).expect("entries >= 2");
    let params = ConstructionParams::new(m, q, word).expect("valid parameters");
    build_simple_graph(&params)
        .expect("valid graph")
        .cofactor(0)
        .expect("root exists")
}
