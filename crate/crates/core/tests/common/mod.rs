#![allow(dead_code)]

use pathlab_core::mask::SubsetMask;
use pathlab_core::rational::{ratio, ExtendedRational};
use pathlab_core::FiniteSubmeasure;
use rand::Rng;

/// Minimum total weight of generators covering each subset. Every such
/// table is monotone and subadditive.
pub fn weighted_cover_table(n: usize, gens: &[(u64, ExtendedRational)]) -> Vec<ExtendedRational> {
    let size = 1usize << n;
    let mut t = vec![ExtendedRational::Infinity; size];
    t[0] = ExtendedRational::zero();
    for a in 1..size {
        let low = a & a.wrapping_neg();
        for (g, w) in gens {
            if *g as usize & low != 0 {
                let rest = a & !(*g as usize);
                let c = &t[rest] + w;
                if c < t[a] {
                    t[a] = c;
                }
            }
        }
    }
    t
}

/// A random valid submeasure on `n` points given by a weighted cover table.
/// Every singleton is a generator, so the table is finite.
pub fn random_table<R: Rng>(rng: &mut R, n: usize) -> FiniteSubmeasure {
    let full = (1u64 << n) - 1;
    let mut gens: Vec<(u64, ExtendedRational)> = (0..n)
        .map(|i| {
            (
                1u64 << i,
                ExtendedRational::Finite(ratio(rng.gen_range(1..=6), rng.gen_range(1..=3))),
            )
        })
        .collect();
    for _ in 0..rng.gen_range(0..=2 * n) {
        let g = rng.gen_range(1..=full);
        gens.push((
            g,
            ExtendedRational::Finite(ratio(rng.gen_range(1..=8), rng.gen_range(1..=3))),
        ));
    }
    FiniteSubmeasure::table(n, weighted_cover_table(n, &gens)).unwrap()
}

/// A random covering system on `n` points (every point covered).
pub fn random_cover<R: Rng>(rng: &mut R, n: usize) -> Vec<SubsetMask> {
    let full = (1u64 << n) - 1;
    let mut gens: Vec<u64> = (0..rng.gen_range(1..=n)).map(|_| rng.gen_range(1..=full)).collect();
    let covered = gens.iter().fold(0, |a, g| a | g);
    for i in 0..n {
        if covered >> i & 1 == 0 {
            let extra = rng.gen_range(0..=full) | 1 << i;
            gens.push(extra);
        }
    }
    gens.into_iter().map(|g| SubsetMask::from_index(n, g)).collect()
}

/// The subsets of `0..n` as masks.
pub fn masks(n: usize) -> impl Iterator<Item = SubsetMask> {
    (0..1u64 << n).map(move |i| SubsetMask::from_index(n, i))
}
