//! Oracles and generators shared by the integration tests. Nothing here
//! goes through the solver or the field tables.

#![allow(dead_code)]

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use subcover::cover::{is_cover, CoverFamily};
use subcover::solver::BitSet;
use subcover::subspace::enumerate_hyperplanes;
use subcover::FieldSpec;

/// Smallest covering subfamily by scanning subsets in size order, and
/// lexicographic order within a size.
pub fn brute_force_cover(num_points: usize, sets: &[BitSet]) -> Option<(usize, Vec<usize>)> {
    let targets: Vec<Vec<usize>> = sets.iter().map(|s| s.iter().collect()).collect();
    for size in 0..=sets.len() {
        for combo in (0..sets.len()).combinations(size) {
            let mut hit = vec![false; num_points];
            for &c in &combo {
                for &p in &targets[c] {
                    hit[p] = true;
                }
            }
            if hit.iter().all(|&h| h) {
                return Some((size, combo));
            }
        }
    }
    None
}

/// Schoolbook product of two field elements viewed as polynomials over
/// `F_p`, reduced by the monic modulus `x^k + m_{k-1} x^{k-1} + ... + m_0`.
pub fn poly_mul_oracle(p: usize, modulus: &[u8], a: usize, b: usize) -> usize {
    let k = modulus.len();
    let digits = |mut x: usize| -> Vec<i64> {
        (0..k)
            .map(|_| {
                let d = (x % p) as i64;
                x /= p;
                d
            })
            .collect()
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0i64; 2 * k - 1];
    for i in 0..k {
        for j in 0..k {
            prod[i + j] += da[i] * db[j];
        }
    }
    let p = p as i64;
    for deg in (k..2 * k - 1).rev() {
        let c = prod[deg].rem_euclid(p);
        prod[deg] = 0;
        for j in 0..k {
            prod[deg - k + j] -= c * modulus[j] as i64;
        }
    }
    prod[..k].iter().rev().fold(0, |acc, &c| acc * p + c.rem_euclid(p)) as usize
}

/// A random hyperplane family of `F^d` that covers: hyperplanes in random
/// order until the union is everything, plus up to `extra` more.
pub fn random_hyperplane_cover<R: Rng>(rng: &mut R, field: &FieldSpec, d: usize, extra: usize) -> CoverFamily {
    let mut all = enumerate_hyperplanes(field, d);
    all.shuffle(rng);
    let mut chosen = Vec::new();
    for h in all.iter() {
        chosen.push(h.clone());
        let fam = CoverFamily::linear(field, d, chosen.clone()).unwrap();
        if is_cover(&fam).unwrap() {
            break;
        }
    }
    for _ in 0..rng.gen_range(0..=extra) {
        chosen.push(all[rng.gen_range(0..all.len())].clone());
    }
    chosen.shuffle(rng);
    CoverFamily::linear(field, d, chosen).unwrap()
}

pub fn field(q: u64) -> FieldSpec {
    q.to_string().parse().unwrap()
}
