//! Value types for the three-colour game on a cycle: colours, local guessing
//! rules, composite strategies, assignments, and the edges and path segments
//! of the enlarged layered graph.
//!
//! Colours are 0-based residues mod 3 (external 1-based colours `i` map to
//! `i - 1`). Player indices are reduced mod `n`; negative indices are fine.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{HatError, Result};

/// A hat colour, a residue mod 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct Colour(u8);

impl Colour {
    pub const ALL: [Colour; 3] = [Colour(0), Colour(1), Colour(2)];

    pub fn new(value: u8) -> Result<Self> {
        if value < 3 {
            Ok(Colour(value))
        } else {
            Err(HatError::domain(format!("colour {value} is not in 0..3")))
        }
    }

    /// Reduces any integer mod 3.
    pub fn from_mod(value: i64) -> Self {
        Colour(value.rem_euclid(3) as u8)
    }

    #[inline]
    pub fn value(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl<'de> Deserialize<'de> for Colour {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = u8::deserialize(d)?;
        Colour::new(v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Colour {
    type Output = Colour;
    fn add(self, rhs: Colour) -> Colour {
        Colour((self.0 + rhs.0) % 3)
    }
}

impl Sub for Colour {
    type Output = Colour;
    fn sub(self, rhs: Colour) -> Colour {
        Colour((self.0 + 3 - rhs.0) % 3)
    }
}

impl Neg for Colour {
    type Output = Colour;
    fn neg(self) -> Colour {
        Colour((3 - self.0) % 3)
    }
}

/// Number of distinct local rules, `3^9`.
pub const RULE_COUNT: usize = 19_683;

/// One player's guess as a function of the left and right neighbours'
/// colours. Row = left neighbour, column = right neighbour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalRule {
    table: [[Colour; 3]; 3],
}

impl LocalRule {
    pub fn new(table: [[Colour; 3]; 3]) -> Self {
        LocalRule { table }
    }

    pub fn from_fn(mut f: impl FnMut(Colour, Colour) -> Colour) -> Self {
        let mut table = [[Colour(0); 3]; 3];
        for l in Colour::ALL {
            for r in Colour::ALL {
                table[l.index()][r.index()] = f(l, r);
            }
        }
        LocalRule { table }
    }

    /// Builds a rule from raw values, rejecting anything outside `0..3`.
    pub fn from_values(values: [[u8; 3]; 3]) -> Result<Self> {
        let mut table = [[Colour(0); 3]; 3];
        for (row, vals) in table.iter_mut().zip(values.iter()) {
            for (cell, &v) in row.iter_mut().zip(vals.iter()) {
                *cell = Colour::new(v)?;
            }
        }
        Ok(LocalRule { table })
    }

    pub fn constant(c: Colour) -> Self {
        LocalRule { table: [[c; 3]; 3] }
    }

    #[inline]
    pub fn get(&self, left: Colour, right: Colour) -> Colour {
        self.table[left.index()][right.index()]
    }

    pub fn table(&self) -> &[[Colour; 3]; 3] {
        &self.table
    }

    pub fn values(&self) -> [[u8; 3]; 3] {
        self.table.map(|row| row.map(Colour::value))
    }

    /// Base-3 code of the nine entries, entry (0,0) most significant, so the
    /// numeric order of ids is the lexicographic order of the entries.
    pub fn id(&self) -> u16 {
        self.table
            .iter()
            .flatten()
            .fold(0u16, |acc, c| acc * 3 + c.0 as u16)
    }

    pub fn from_id(id: u16) -> Self {
        assert!((id as usize) < RULE_COUNT, "rule id {id} out of range");
        let mut table = [[Colour(0); 3]; 3];
        let mut rest = id;
        for pos in (0..9).rev() {
            table[pos / 3][pos % 3] = Colour((rest % 3) as u8);
            rest /= 3;
        }
        LocalRule { table }
    }

    /// All `3^9` rules in lexicographic order.
    pub fn all() -> impl Iterator<Item = LocalRule> {
        (0..RULE_COUNT as u16).map(LocalRule::from_id)
    }
}

impl Serialize for LocalRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.values().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LocalRule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = <[[u8; 3]; 3]>::deserialize(d)?;
        LocalRule::from_values(values).map_err(serde::de::Error::custom)
    }
}

/// A composite strategy on the cycle `C_n`, `n >= 3`.
///
/// Serialized as `{"n": n, "rules": [table_0, ..., table_{n-1}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawStrategy")]
pub struct CycleStrategy {
    n: usize,
    rules: Vec<LocalRule>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStrategy {
    n: usize,
    rules: Vec<LocalRule>,
}

impl TryFrom<RawStrategy> for CycleStrategy {
    type Error = HatError;

    fn try_from(raw: RawStrategy) -> Result<Self> {
        CycleStrategy::new(raw.n, raw.rules)
    }
}

impl CycleStrategy {
    pub fn new(n: usize, rules: Vec<LocalRule>) -> Result<Self> {
        if n < 3 {
            return Err(HatError::domain(format!(
                "cycle length {n} is below 3; use a general visibility game instead"
            )));
        }
        if rules.len() != n {
            return Err(HatError::SizeMismatch {
                expected: n,
                found: rules.len(),
            });
        }
        Ok(CycleStrategy { n, rules })
    }

    /// Every player uses the same rule.
    pub fn uniform(n: usize, rule: LocalRule) -> Result<Self> {
        CycleStrategy::new(n, vec![rule; n])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rules(&self) -> &[LocalRule] {
        &self.rules
    }

    #[inline]
    pub fn layer(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    #[inline]
    pub fn rule(&self, k: i64) -> &LocalRule {
        &self.rules[self.layer(k)]
    }

    /// Player `k`'s guess given the left (`k-1`) and right (`k+1`) colours.
    #[inline]
    pub fn guess(&self, k: i64, left: Colour, right: Colour) -> Colour {
        self.rule(k).get(left, right)
    }

    /// Number of players guessing their own colour correctly under `g`.
    pub fn correct_count(&self, g: &Assignment) -> Result<usize> {
        if g.len() != self.n {
            return Err(HatError::SizeMismatch {
                expected: self.n,
                found: g.len(),
            });
        }
        Ok(self.correct_count_unchecked(g.colours()))
    }

    pub(crate) fn correct_count_unchecked(&self, g: &[Colour]) -> usize {
        let n = self.n;
        (0..n)
            .filter(|&k| g[k] == self.rules[k].get(g[(k + n - 1) % n], g[(k + 1) % n]))
            .count()
    }

    /// True iff every player guesses wrong under `g`.
    pub fn is_defeated_by(&self, g: &Assignment) -> Result<bool> {
        Ok(self.correct_count(g)? == 0)
    }

    /// Every interior vertex of the segment differs from its player's guess.
    pub fn is_admissible(&self, p: &PathSegment) -> bool {
        p.colours.windows(3).enumerate().all(|(i, w)| {
            let k = p.start_layer + i as i64 + 1;
            w[1] != self.guess(k, w[0], w[2])
        })
    }

    /// Rotates the player labels: the new player `k` is the old player `k + shift`.
    pub fn rotated(&self, shift: i64) -> CycleStrategy {
        let rules = (0..self.n as i64).map(|k| *self.rule(k + shift)).collect();
        CycleStrategy { n: self.n, rules }
    }
}

/// A colouring of all `n` hats.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment {
    colours: Vec<Colour>,
}

impl Assignment {
    pub fn new(colours: Vec<Colour>) -> Self {
        Assignment { colours }
    }

    pub fn from_values(values: &[u8]) -> Result<Self> {
        values
            .iter()
            .map(|&v| Colour::new(v))
            .collect::<Result<Vec<_>>>()
            .map(Assignment::new)
    }

    pub fn colours(&self) -> &[Colour] {
        &self.colours
    }

    pub fn values(&self) -> Vec<u8> {
        self.colours.iter().map(|c| c.value()).collect()
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    #[inline]
    pub fn at(&self, k: i64) -> Colour {
        self.colours[k.rem_euclid(self.colours.len() as i64) as usize]
    }

    /// Decodes the `index`-th assignment in lexicographic order.
    pub fn from_index(n: usize, mut index: u64) -> Self {
        let mut colours = vec![Colour(0); n];
        for slot in colours.iter_mut().rev() {
            *slot = Colour((index % 3) as u8);
            index /= 3;
        }
        Assignment { colours }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.colours {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// An edge of `E_{k,k+1}`: `left` lives in layer `k`, `right` in layer `k+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub layer: usize,
    pub left: Colour,
    pub right: Colour,
}

impl Edge {
    pub fn new(layer: usize, left: Colour, right: Colour) -> Self {
        Edge { layer, left, right }
    }

    /// The nine edges of one boundary, ordered by `(left, right)`.
    pub fn boundary(layer: usize) -> impl Iterator<Item = Edge> {
        Colour::ALL
            .into_iter()
            .flat_map(move |l| Colour::ALL.into_iter().map(move |r| Edge::new(layer, l, r)))
    }
}

/// A path through consecutive layers, starting at `start_layer`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSegment {
    start_layer: i64,
    colours: Vec<Colour>,
}

impl PathSegment {
    pub fn new(start_layer: i64, colours: Vec<Colour>) -> Result<Self> {
        if colours.len() < 2 {
            return Err(HatError::domain(
                "a path segment needs at least two vertices",
            ));
        }
        Ok(PathSegment {
            start_layer,
            colours,
        })
    }

    pub fn start_layer(&self) -> i64 {
        self.start_layer
    }

    pub fn colours(&self) -> &[Colour] {
        &self.colours
    }

    /// The cyclic path `g` followed by its first two colours again, so every
    /// player of `g` is an interior vertex.
    pub fn closed(g: &Assignment) -> Self {
        let n = g.len() as i64;
        let colours = (-1..=n).map(|k| g.at(k)).collect();
        PathSegment {
            start_layer: -1,
            colours,
        }
    }
}
