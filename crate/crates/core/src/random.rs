//! Seeded samplers. Everything random in the crate goes through a
//! `ChaCha8Rng` so results depend only on the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::braid::BraidWord;
use crate::symaut::{GeneratorWord, Letter};
use crate::words::{GroupContext, Word};

/// Seed used when neither a flag nor the environment provides one.
pub const DEFAULT_SEED: u64 = 0x5EED_2024;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ordered_pair<R: Rng>(n: usize, rng: &mut R) -> (usize, usize) {
    let i = rng.gen_range(1..=n);
    let mut j = rng.gen_range(1..n);
    if j >= i {
        j += 1;
    }
    (i, j)
}

/// A random letter from the whole alphabet (`A`, `R` and `S` letters).
pub fn random_letter<R: Rng>(n: usize, rng: &mut R) -> Letter {
    let (i, j) = ordered_pair(n, rng);
    match rng.gen_range(0..6) {
        0 | 1 => Letter::a(i, j),
        2 | 3 => Letter::a_inv(i, j),
        4 => Letter::R(i),
        _ => Letter::s(i.min(j), i.max(j)),
    }
}

pub fn random_pure_letter<R: Rng>(n: usize, rng: &mut R) -> Letter {
    let (i, j) = ordered_pair(n, rng);
    if rng.gen_bool(0.5) {
        Letter::a(i, j)
    } else {
        Letter::a_inv(i, j)
    }
}

/// A generator word of exactly `len` letters.
pub fn random_generator_word<R: Rng>(n: usize, len: usize, rng: &mut R) -> GeneratorWord {
    let letters = (0..len).map(|_| random_letter(n, rng)).collect();
    GeneratorWord::new(n, letters).expect("sampled indices are in range")
}

pub fn random_pure_word<R: Rng>(n: usize, len: usize, rng: &mut R) -> GeneratorWord {
    let letters = (0..len).map(|_| random_pure_letter(n, rng)).collect();
    GeneratorWord::new(n, letters).expect("sampled indices are in range")
}

/// A product of `1..=max_factors` conjugates `c ρ c^-1` with conjugators of
/// length at most `max_conj_len`.
pub fn random_rho_product<R: Rng>(n: usize, max_factors: usize, max_conj_len: usize, rng: &mut R) -> GeneratorWord {
    let mut out = GeneratorWord::empty(n);
    for _ in 0..rng.gen_range(1..=max_factors) {
        let c = random_generator_word(n, rng.gen_range(0..=max_conj_len), rng);
        out = out.concat(&GeneratorWord::rho(n).conjugated_by(&c));
    }
    out
}

/// A reduced word with up to `max_syllables` syllables of exponent at most
/// `max_exp` in absolute value.
pub fn random_word<R: Rng>(ctx: GroupContext, max_syllables: usize, max_exp: i64, rng: &mut R) -> Word {
    let raw: Vec<(usize, i64)> = (0..rng.gen_range(0..=max_syllables))
        .map(|_| {
            let e = rng.gen_range(1..=max_exp);
            (rng.gen_range(1..=ctx.rank()), if rng.gen_bool(0.5) { e } else { -e })
        })
        .collect();
    Word::normalize(raw, ctx).expect("sampled indices are in range")
}

pub fn random_braid<R: Rng>(n: usize, len: usize, rng: &mut R) -> BraidWord {
    let letters = (0..len)
        .map(|_| (rng.gen_range(1..n), if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect();
    BraidWord::new(n, letters).expect("sampled indices are in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_samples() {
        let a: Vec<String> = {
            let mut r = rng_from_seed(3);
            (0..5).map(|_| random_rho_product(4, 3, 5, &mut r).to_string()).collect()
        };
        let b: Vec<String> = {
            let mut r = rng_from_seed(3);
            (0..5).map(|_| random_rho_product(4, 3, 5, &mut r).to_string()).collect()
        };
        assert_eq!(a, b);
    }
}
