//! Seeded random presentations for property suites, plus brute-force
//! reference scans over small multipliers.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cardinal::{Cardinal, Undecidable};
use crate::invariants::is_m_group;
use crate::presentation::{Block, Presentation};
use crate::structure::{multiply, rank_profile};

pub const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Finite values and the Beth tower up to `2^2^c`; successor cardinals are
/// left out so every comparison in the corpus is decidable.
pub fn random_cardinal<R: Rng>(rng: &mut R) -> Cardinal {
    match rng.gen_range(0..10) {
        0..=3 => Cardinal::fin(rng.gen_range(1..=6)),
        4 | 5 => Cardinal::OMEGA,
        6 | 7 => Cardinal::CONTINUUM,
        8 => Cardinal::Beth(2),
        _ => Cardinal::Beth(3),
    }
}

fn random_prime<R: Rng>(rng: &mut R, primes: &[u64]) -> u64 {
    *primes.choose(rng).expect("non-empty prime list")
}

pub fn random_cyclic<R: Rng>(rng: &mut R, primes: &[u64], max_k: u32) -> Block {
    Block::cyclic(random_prime(rng, primes), rng.gen_range(1..=max_k))
}

pub fn random_unbounded_block<R: Rng>(rng: &mut R) -> Block {
    match rng.gen_range(0..5) {
        0 => Block::Prufer(random_prime(rng, &PRIMES)),
        1 => Block::Tower(random_prime(rng, &PRIMES)),
        2 => {
            let n = rng.gen_range(0..=2);
            let ex: BTreeSet<u64> = (0..n).map(|_| random_prime(rng, &PRIMES)).collect();
            Block::Soc(ex)
        }
        3 => Block::IntZ,
        _ => Block::RatQ,
    }
}

pub fn random_block<R: Rng>(rng: &mut R) -> Block {
    if rng.gen_bool(0.5) {
        random_cyclic(rng, &PRIMES, 3)
    } else {
        random_unbounded_block(rng)
    }
}

/// Up to `max_terms` blocks of every kind.
pub fn random_presentation<R: Rng>(rng: &mut R, max_terms: usize) -> Presentation {
    let n = rng.gen_range(0..=max_terms);
    let raw: Vec<(Block, Cardinal)> = (0..n).map(|_| (random_block(rng), random_cardinal(rng))).collect();
    Presentation::normalize(raw).expect("generated blocks are valid")
}

/// Cyclic blocks only, with `k ≤ 3`.
pub fn random_bounded<R: Rng>(rng: &mut R, max_terms: usize) -> Presentation {
    let n = rng.gen_range(1..=max_terms.max(1));
    let raw: Vec<(Block, Cardinal)> =
        (0..n).map(|_| (random_cyclic(rng, &PRIMES, 3), random_cardinal(rng))).collect();
    Presentation::normalize(raw).expect("generated blocks are valid")
}

/// Unbounded presentations whose cyclic part has exponent dividing
/// `2^2 · 3 · 5 = 60`, so `n₀ ≤ 60`.
pub fn random_small_exponent<R: Rng>(rng: &mut R, max_terms: usize) -> Presentation {
    loop {
        let n = rng.gen_range(1..=max_terms.max(1));
        let mut raw: Vec<(Block, Cardinal)> = Vec::new();
        for _ in 0..n {
            let block = if rng.gen_bool(0.5) {
                match rng.gen_range(0..3) {
                    0 => Block::cyclic(2, rng.gen_range(1..=2)),
                    1 => Block::cyclic(3, 1),
                    _ => Block::cyclic(5, 1),
                }
            } else {
                random_unbounded_block(rng)
            };
            raw.push((block, random_cardinal(rng)));
        }
        let g = Presentation::normalize(raw).expect("generated blocks are valid");
        if !g.is_bounded() {
            return g;
        }
    }
}

fn decided_m_group(g: &Presentation) -> Option<bool> {
    is_m_group(g).ok().map(|d| d.holds)
}

/// M-groups of infinite exponent.
pub fn random_unbounded_m_group<R: Rng>(rng: &mut R) -> Presentation {
    loop {
        let mut g = random_presentation(rng, 4);
        if rng.gen_bool(0.7) {
            let big = [Cardinal::CONTINUUM, Cardinal::Beth(2), Cardinal::Beth(3)]
                .choose(rng)
                .expect("non-empty")
                .clone();
            let extra = Presentation::single(random_unbounded_block(rng), big).expect("valid block");
            g = g.direct_sum(&extra);
        }
        if !g.is_bounded() && decided_m_group(&g) == Some(true) {
            return g;
        }
    }
}

pub fn random_non_m_group<R: Rng>(rng: &mut R) -> Presentation {
    loop {
        let g = if rng.gen_bool(0.5) { random_bounded(rng, 4) } else { random_presentation(rng, 4) };
        if decided_m_group(&g) == Some(false) {
            return g;
        }
    }
}

/// A reproducible mixed corpus of `n` presentations.
pub fn mixed_corpus(seed: u64, n: usize) -> Vec<Presentation> {
    let mut r = rng(seed);
    (0..n)
        .map(|i| match i % 4 {
            0 => random_bounded(&mut r, 4),
            1 => random_small_exponent(&mut r, 4),
            _ => random_presentation(&mut r, 5),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scan {
    /// `min |nG|` over the scanned `n`.
    pub min_size: Cardinal,
    /// `min r(nG)` over the scanned `n`.
    pub min_rank: Cardinal,
    /// Every scanned `nG` is trivial or of size at least `c`.
    pub m_group: bool,
}

fn min_card(a: Cardinal, b: Cardinal) -> Result<Cardinal, Undecidable> {
    Ok(if b.lt(&a)? { b } else { a })
}

/// Literal minimum over `n = 1..=n_max` of `|nG|` and `r(nG)`.
pub fn scan(g: &Presentation, n_max: u64) -> Result<Scan, Undecidable> {
    let mut min_size = g.cardinality();
    let mut min_rank = rank_profile(g).r;
    let mut m_group = true;
    for n in 1..=n_max {
        let ng = multiply(n, g).expect("n >= 1");
        let size = ng.cardinality();
        if !ng.is_trivial() && size.lt(&Cardinal::CONTINUUM)? {
            m_group = false;
        }
        min_size = min_card(min_size, size)?;
        min_rank = min_card(min_rank, rank_profile(&ng).r)?;
    }
    Ok(Scan { min_size, min_rank, m_group })
}
