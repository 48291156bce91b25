//! Reference implementations over raw tables, written without the library's
//! transfer matrices or enumeration code.
#![allow(dead_code)]

use hatcycle_core::structure::{Perm3, StrategyIso};
use hatcycle_core::{CycleStrategy, LocalRule};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Raw = Vec<[[u8; 3]; 3]>;

pub fn strategy(raw: &Raw) -> CycleStrategy {
    let rules = raw
        .iter()
        .map(|t| LocalRule::from_values(*t).unwrap())
        .collect();
    CycleStrategy::new(raw.len(), rules).unwrap()
}

pub fn raw_of(f: &CycleStrategy) -> Raw {
    f.rules().iter().map(|r| r.values()).collect()
}

pub fn naive_correct(raw: &Raw, g: &[u8]) -> usize {
    let n = raw.len();
    (0..n)
        .filter(|&k| raw[k][g[(k + n - 1) % n] as usize][g[(k + 1) % n] as usize] == g[k])
        .count()
}

/// All assignments in lexicographic order.
pub fn all_assignments(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..3u64.pow(n as u32)).map(move |mut x| {
        let mut g = vec![0u8; n];
        for slot in g.iter_mut().rev() {
            *slot = (x % 3) as u8;
            x /= 3;
        }
        g
    })
}

/// Defeating assignments in lexicographic order.
pub fn naive_defeats(raw: &Raw) -> Vec<Vec<u8>> {
    all_assignments(raw.len())
        .filter(|g| naive_correct(raw, g) == 0)
        .collect()
}

/// Continuation counts straight from the definition:
/// `(plus, minus)` of edge `(b, c)` at boundary `k`.
pub fn naive_ell(raw: &Raw, k: usize, b: u8, c: u8) -> (u8, u8) {
    let n = raw.len();
    let next = &raw[(k + 1) % n];
    let here = &raw[k];
    let plus = (0..3).filter(|&d| next[b as usize][d] != c).count() as u8;
    let minus = (0..3).filter(|&a| here[a][c as usize] != b).count() as u8;
    (plus, minus)
}

pub fn random_raw(rng: &mut impl Rng, n: usize) -> Raw {
    (0..n)
        .map(|_| {
            let mut t = [[0u8; 3]; 3];
            for row in t.iter_mut() {
                for x in row.iter_mut() {
                    *x = rng.gen_range(0..3);
                }
            }
            t
        })
        .collect()
}

fn random_perm(rng: &mut impl Rng) -> [u8; 3] {
    let mut p = [0u8, 1, 2];
    p.shuffle(rng);
    p
}

/// Every layer a uniformly random 3x3 Latin square, so every edge is blue.
pub fn random_latin_raw(rng: &mut impl Rng, n: usize) -> Raw {
    (0..n)
        .map(|_| {
            let (p, q, s) = (random_perm(rng), random_perm(rng), random_perm(rng));
            let mut t = [[0u8; 3]; 3];
            for a in 0..3 {
                for c in 0..3 {
                    t[a][c] = s[((p[a] + q[c]) % 3) as usize];
                }
            }
            t
        })
        .collect()
}

pub fn random_iso(rng: &mut impl Rng, n: usize) -> StrategyIso {
    StrategyIso {
        vertex_perms: (0..n)
            .map(|_| Perm3::new(random_perm(rng)).unwrap())
            .collect(),
        rotation: rng.gen_range(0..n),
        reflected: rng.gen_bool(0.5),
    }
}
