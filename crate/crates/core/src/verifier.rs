//! Exact winning/losing decisions.
//!
//! A defeating assignment is a closed walk of length `n` through the
//! boundary states `(s_k, s_{k+1})`, where each step from boundary `k` to
//! `k+1` is allowed iff player `k+1` guesses wrong. The number of defeating
//! assignments is therefore `trace(T_0 T_1 ... T_{n-1})`.

use std::ops::AddAssign;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{HatError, Result};
use crate::game::{Assignment, Colour, CycleStrategy, LocalRule};

/// Index of the boundary state `(left, right)`.
#[inline]
pub fn state_index(left: Colour, right: Colour) -> usize {
    3 * left.index() + right.index()
}

/// The 0/1 step relation between consecutive boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferMatrix {
    entries: [[u8; 9]; 9],
}

impl TransferMatrix {
    pub fn entry(&self, from: usize, to: usize) -> u8 {
        self.entries[from][to]
    }

    pub fn entries(&self) -> &[[u8; 9]; 9] {
        &self.entries
    }

    pub fn row_sum(&self, from: usize) -> u32 {
        self.entries[from].iter().map(|&e| e as u32).sum()
    }
}

/// Transfer relation from boundary `k` to boundary `k+1`.
pub fn boundary_transfer(f: &CycleStrategy, k: i64) -> TransferMatrix {
    let mut entries = [[0u8; 9]; 9];
    let player = f.rule(k + 1);
    for a in Colour::ALL {
        for b in Colour::ALL {
            for c in Colour::ALL {
                if b != player.get(a, c) {
                    entries[state_index(a, b)][state_index(b, c)] = 1;
                }
            }
        }
    }
    TransferMatrix { entries }
}

/// Outcome of [`verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Winning,
    Losing { witness: Assignment },
}

impl Verdict {
    pub fn is_winning(&self) -> bool {
        matches!(self, Verdict::Winning)
    }

    pub fn witness(&self) -> Option<&Assignment> {
        match self {
            Verdict::Winning => None,
            Verdict::Losing { witness } => Some(witness),
        }
    }
}

// Successor masks: bit `c` of `succ[k][state]` is set iff the state may step
// to `(right, c)` across player `k+1`.
fn successor_masks(f: &CycleStrategy) -> Vec<[u8; 9]> {
    (0..f.n())
        .map(|k| {
            let player = f.rule(k as i64 + 1);
            let mut masks = [0u8; 9];
            for a in Colour::ALL {
                for b in Colour::ALL {
                    let mut m = 0u8;
                    for c in Colour::ALL {
                        if b != player.get(a, c) {
                            m |= 1 << c.index();
                        }
                    }
                    masks[state_index(a, b)] = m;
                }
            }
            masks
        })
        .collect()
}

fn closed_walks<T>(f: &CycleStrategy) -> T
where
    T: Zero + One + Clone + for<'a> AddAssign<&'a T>,
{
    let succ = successor_masks(f);
    let mut total = T::zero();
    for start in 0..9 {
        let mut v: [T; 9] = std::array::from_fn(|_| T::zero());
        v[start] = T::one();
        for masks in &succ {
            let mut next: [T; 9] = std::array::from_fn(|_| T::zero());
            for (s, count) in v.iter().enumerate() {
                if count.is_zero() {
                    continue;
                }
                let b = s % 3;
                for c in 0..3 {
                    if masks[s] & (1 << c) != 0 {
                        next[3 * b + c] += count;
                    }
                }
            }
            v = next;
        }
        total += &v[start];
    }
    total
}

/// Counts fit in `u128` while `3^n < 2^128`.
const U128_MAX_N: usize = 80;

/// Number of defeating assignments, exactly.
pub fn defeat_count(f: &CycleStrategy) -> BigUint {
    if f.n() <= U128_MAX_N {
        BigUint::from(closed_walks::<u128>(f))
    } else {
        closed_walks::<BigUint>(f)
    }
}

/// [`defeat_count`] for cycles short enough that the count fits a `u64`.
pub fn defeat_count_u64(f: &CycleStrategy) -> Option<u64> {
    (f.n() <= 40).then(|| closed_walks::<u64>(f))
}

/// Decides the strategy and, when losing, returns the lexicographically
/// smallest defeating assignment.
pub fn verify(f: &CycleStrategy) -> Verdict {
    let n = f.n();
    let succ = successor_masks(f);
    for start in 0..9usize {
        // reach[k][s]: from state s at boundary k the walk can still close at `start`.
        let mut reach = vec![[false; 9]; n + 1];
        reach[n][start] = true;
        for k in (0..n).rev() {
            for s in 0..9 {
                let b = s % 3;
                reach[k][s] = (0..3).any(|c| succ[k][s] & (1 << c) != 0 && reach[k + 1][3 * b + c]);
            }
        }
        if !reach[0][start] {
            continue;
        }
        let mut colours = Vec::with_capacity(n);
        colours.push(Colour::ALL[start / 3]);
        let mut state = start;
        for (k, masks) in succ.iter().enumerate().take(n - 1) {
            let b = state % 3;
            let c = (0..3)
                .find(|&c| masks[state] & (1 << c) != 0 && reach[k + 1][3 * b + c])
                .expect("reachability guarantees a continuation");
            colours.push(Colour::ALL[b]);
            state = 3 * b + c;
        }
        return Verdict::Losing {
            witness: Assignment::new(colours),
        };
    }
    Verdict::Winning
}

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceDefeats {
    pub count: u64,
    pub witnesses: Vec<Assignment>,
}

/// Enumerates all `3^n` assignments. Refuses cycles longer than `max_n`.
pub fn brute_force_defeats_capped(f: &CycleStrategy, max_n: usize) -> Result<BruteForceDefeats> {
    let n = f.n();
    if n > max_n {
        return Err(HatError::BudgetExceeded {
            what: "brute-force assignments",
            needed: 3u128.saturating_pow(n as u32),
            limit: 3u128.pow(max_n as u32),
        });
    }
    let mut g = vec![Colour::ALL[0]; n];
    let mut witnesses = Vec::new();
    loop {
        if f.correct_count_unchecked(&g) == 0 {
            witnesses.push(Assignment::new(g.clone()));
        }
        // odometer, last position fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(BruteForceDefeats {
                    count: witnesses.len() as u64,
                    witnesses,
                });
            }
            pos -= 1;
            if g[pos].value() < 2 {
                g[pos] = Colour::ALL[g[pos].index() + 1];
                break;
            }
            g[pos] = Colour::ALL[0];
        }
    }
}

pub fn brute_force_defeats(f: &CycleStrategy) -> Result<BruteForceDefeats> {
    brute_force_defeats_capped(f, DEFAULT_BRUTE_FORCE_CAP)
}

/// Probability of winning against a uniformly random assignment.
pub fn win_probability_fixed(f: &CycleStrategy) -> BigRational {
    let total = num_bigint::BigInt::from(3u32).pow(f.n() as u32);
    let defeats = num_bigint::BigInt::from(defeat_count(f));
    BigRational::one() - BigRational::new(defeats, total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarlo {
    pub analytic: BigRational,
    pub estimate: f64,
    pub wins: u64,
    pub trials: u64,
    pub seed: u64,
}

/// `1 - (2/3)^n`.
pub fn random_strategy_analytic(n: usize) -> BigRational {
    let two = num_bigint::BigInt::from(2u32).pow(n as u32);
    let three = num_bigint::BigInt::from(3u32).pow(n as u32);
    BigRational::one() - BigRational::new(two, three)
}

/// Monte Carlo estimate of the win probability of a fresh uniformly random
/// strategy against a fresh uniformly random assignment.
///
/// Trial `t` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `t`:
/// first the `9n` table entries (player 0 first, row-major), then the `n`
/// hat colours. Results do not depend on thread scheduling.
pub fn random_strategy_win_probability(n: usize, trials: u64, seed: u64) -> Result<MonteCarlo> {
    if n < 3 {
        return Err(HatError::domain("cycle length must be at least 3"));
    }
    if trials == 0 {
        return Err(HatError::domain("at least one trial is required"));
    }
    let wins = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let rules = (0..n)
                .map(|_| LocalRule::from_fn(|_, _| Colour::ALL[rng.gen_range(0..3)]))
                .collect();
            let f = CycleStrategy::new(n, rules).expect("n >= 3");
            let g: Vec<Colour> = (0..n).map(|_| Colour::ALL[rng.gen_range(0..3)]).collect();
            f.correct_count_unchecked(&g) > 0
        })
        .count() as u64;
    Ok(MonteCarlo {
        analytic: random_strategy_analytic(n),
        estimate: wins as f64 / trials as f64,
        wins,
        trials,
        seed,
    })
}
