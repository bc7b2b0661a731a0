#![allow(dead_code)]

use boxcode::{Code, Codeword, Realization};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn code_on(n: usize) -> impl Strategy<Value = Code> {
    let nonempty = (1usize << n) - 1;
    prop::collection::vec(any::<bool>(), nonempty).prop_map(move |bits| {
        let words = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(k, _)| Codeword::from_bits(k as u16 + 1));
        Code::new(n, words).unwrap()
    })
}

pub fn code() -> impl Strategy<Value = Code> {
    (1usize..=4).prop_flat_map(code_on)
}

pub fn code_pair() -> impl Strategy<Value = (Code, Code)> {
    (1usize..=4).prop_flat_map(|n| (code_on(n), code_on(n)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn interval_realization(seed: u64, n: usize) -> Realization {
    boxcode::random::interval_realization(&mut rng(seed), n)
}

pub fn box_realization(seed: u64, n: usize, dim: usize) -> Realization {
    boxcode::random::box_realization(&mut rng(seed), n, dim)
}
