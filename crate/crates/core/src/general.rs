//! Hat games on arbitrary visibility digraphs with per-vertex colour counts.
//!
//! An edge `(v, u)` means player `u` sees the hat of `v`. A player's rule maps
//! the tuple of colours it sees, ordered by the global vertex order, to a
//! guess. Tables are flat, in lexicographic order of those tuples.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{HatError, Result};
use crate::game::{Colour, CycleStrategy};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisibilityGame {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
    heights: Vec<u32>,
    in_neighbours: Vec<Vec<usize>>,
}

impl VisibilityGame {
    /// `edges` are `(seen, seer)` index pairs into `vertices`.
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<(usize, usize)>,
        heights: Vec<u32>,
    ) -> Result<Self> {
        let n = vertices.len();
        if heights.len() != n {
            return Err(HatError::SizeMismatch {
                expected: n,
                found: heights.len(),
            });
        }
        let mut names = HashSet::new();
        for v in &vertices {
            if !names.insert(v) {
                return Err(HatError::domain(format!("vertex {v:?} listed twice")));
            }
        }
        if let Some(i) = heights.iter().position(|&h| h == 0) {
            return Err(HatError::domain(format!(
                "vertex {:?} has height 0",
                vertices[i]
            )));
        }
        let mut seen = HashSet::new();
        let mut in_neighbours = vec![Vec::new(); n];
        for &(v, u) in &edges {
            if v >= n || u >= n {
                return Err(HatError::domain(format!(
                    "edge ({v}, {u}) leaves the vertex set"
                )));
            }
            if v == u {
                return Err(HatError::domain(format!("self-loop at {:?}", vertices[v])));
            }
            if !seen.insert((v, u)) {
                return Err(HatError::domain(format!(
                    "edge ({:?}, {:?}) listed twice",
                    vertices[v], vertices[u]
                )));
            }
            in_neighbours[u].push(v);
        }
        for list in &mut in_neighbours {
            list.sort_unstable();
        }
        Ok(VisibilityGame {
            vertices,
            edges,
            heights,
            in_neighbours,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    /// Vertices seen by `u`, in global order.
    pub fn in_neighbours(&self, u: usize) -> &[usize] {
        &self.in_neighbours[u]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// Number of observation tuples of `u`.
    pub fn observation_count(&self, u: usize) -> u128 {
        self.in_neighbours[u]
            .iter()
            .map(|&v| self.heights[v] as u128)
            .product()
    }

    /// Number of selectors, saturating.
    pub fn selector_count(&self) -> u128 {
        self.heights
            .iter()
            .fold(1u128, |acc, &h| acc.saturating_mul(h as u128))
    }

    /// The cycle `C_n`, every player seeing both neighbours, all heights `h`.
    /// Vertices are named `"0"`, `"1"`, ...
    pub fn cycle(n: usize, h: u32) -> Result<Self> {
        if n < 2 {
            return Err(HatError::domain(format!("cycle length {n} is below 2")));
        }
        let vertices = (0..n).map(|k| k.to_string()).collect();
        let mut edges: Vec<(usize, usize)> = (0..n).map(|k| (k, (k + 1) % n)).collect();
        edges.extend((0..n).map(|k| ((k + 1) % n, k)));
        if n == 2 {
            edges.truncate(2);
        }
        VisibilityGame::new(vertices, edges, vec![h; n])
    }

    /// Two players who see each other, with heights `h0` and `h1`.
    pub fn pair(h0: u32, h1: u32) -> Result<Self> {
        VisibilityGame::new(
            vec!["0".into(), "1".into()],
            vec![(0, 1), (1, 0)],
            vec![h0, h1],
        )
    }

    /// Parses `{"vertices": [...], "edges": [[v, u], ...], "heights": {v: h}}`.
    /// Vertex names may be strings or integers.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            vertices: Vec<Value>,
            #[serde(default)]
            edges: Vec<(Value, Value)>,
            heights: BTreeMap<String, u32>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| HatError::Parse(e.to_string()))?;
        let vertices = raw
            .vertices
            .iter()
            .map(vertex_name)
            .collect::<Result<Vec<_>>>()?;
        let index = |v: &Value| -> Result<usize> {
            let name = vertex_name(v)?;
            vertices
                .iter()
                .position(|x| *x == name)
                .ok_or_else(|| HatError::Parse(format!("unknown vertex {name:?}")))
        };
        let edges = raw
            .edges
            .iter()
            .map(|(v, u)| Ok((index(v)?, index(u)?)))
            .collect::<Result<Vec<_>>>()?;
        if let Some(extra) = raw.heights.keys().find(|k| !vertices.contains(k)) {
            return Err(HatError::Parse(format!(
                "height given for unknown vertex {extra:?}"
            )));
        }
        let heights = vertices
            .iter()
            .map(|v| {
                raw.heights
                    .get(v)
                    .copied()
                    .ok_or_else(|| HatError::Parse(format!("no height for vertex {v:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        VisibilityGame::new(vertices, edges, heights)
    }

    pub fn to_json(&self) -> Value {
        let heights: BTreeMap<&str, u32> = self
            .vertices
            .iter()
            .map(String::as_str)
            .zip(self.heights.iter().copied())
            .collect();
        serde_json::json!({
            "vertices": self.vertices,
            "edges": self.edges.iter().map(|&(v, u)| [&self.vertices[v], &self.vertices[u]]).collect::<Vec<_>>(),
            "heights": heights,
        })
    }
}

fn vertex_name(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(x) if x.is_u64() || x.is_i64() => Ok(x.to_string()),
        other => Err(HatError::Parse(format!(
            "vertex names must be strings or integers, got {other}"
        ))),
    }
}

/// A colour for every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Selector {
    pub colours: Vec<u32>,
}

impl Selector {
    pub fn new(game: &VisibilityGame, colours: Vec<u32>) -> Result<Self> {
        let s = Selector { colours };
        s.check(game)?;
        Ok(s)
    }

    fn check(&self, game: &VisibilityGame) -> Result<()> {
        if self.colours.len() != game.vertices.len() {
            return Err(HatError::SizeMismatch {
                expected: game.vertices.len(),
                found: self.colours.len(),
            });
        }
        for (i, (&c, &h)) in self.colours.iter().zip(&game.heights).enumerate() {
            if c >= h {
                return Err(HatError::domain(format!(
                    "colour {c} at {:?} is not below height {h}",
                    game.vertices[i]
                )));
            }
        }
        Ok(())
    }
}

/// One flat guess table per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneralStrategy {
    rules: Vec<Vec<u32>>,
}

impl GeneralStrategy {
    pub fn new(game: &VisibilityGame, rules: Vec<Vec<u32>>) -> Result<Self> {
        if rules.len() != game.vertices.len() {
            return Err(HatError::SizeMismatch {
                expected: game.vertices.len(),
                found: rules.len(),
            });
        }
        for (u, table) in rules.iter().enumerate() {
            let expected = game.observation_count(u);
            if table.len() as u128 != expected {
                return Err(HatError::SizeMismatch {
                    expected: expected as usize,
                    found: table.len(),
                });
            }
            if let Some(&bad) = table.iter().find(|&&c| c >= game.heights[u]) {
                return Err(HatError::domain(format!(
                    "guess {bad} at {:?} is not below height {}",
                    game.vertices[u], game.heights[u]
                )));
            }
        }
        Ok(GeneralStrategy { rules })
    }

    /// Builds tables by evaluating `guess(u, observed)` on every tuple.
    pub fn from_fn(
        game: &VisibilityGame,
        mut guess: impl FnMut(usize, &[u32]) -> u32,
    ) -> Result<Self> {
        let rules = (0..game.vertices.len())
            .map(|u| {
                let radices: Vec<u32> = game.in_neighbours[u]
                    .iter()
                    .map(|&v| game.heights[v])
                    .collect();
                let mut tuple = vec![0u32; radices.len()];
                let mut table = Vec::with_capacity(game.observation_count(u) as usize);
                loop {
                    table.push(guess(u, &tuple));
                    if !odometer(&mut tuple, &radices) {
                        break;
                    }
                }
                table
            })
            .collect();
        GeneralStrategy::new(game, rules)
    }

    /// A cycle strategy as a strategy of [`VisibilityGame::cycle`]`(n, 3)`.
    pub fn from_cycle(f: &CycleStrategy) -> Result<(VisibilityGame, Self)> {
        let n = f.n();
        let game = VisibilityGame::cycle(n, 3)?;
        let strategy = GeneralStrategy::from_fn(&game, |u, seen| {
            let (left, right) = ((u + n - 1) % n, (u + 1) % n);
            let of = |v: usize| {
                let pos = game.in_neighbours[u].iter().position(|&x| x == v).unwrap();
                Colour::new(seen[pos] as u8).unwrap()
            };
            f.guess(u as i64, of(left), of(right)).value() as u32
        })?;
        Ok((game, strategy))
    }

    pub fn rules(&self) -> &[Vec<u32>] {
        &self.rules
    }

    /// Guess of `u` under the full colouring `colours`.
    pub fn guess(&self, game: &VisibilityGame, u: usize, colours: &[u32]) -> u32 {
        let index = game.in_neighbours[u].iter().fold(0usize, |acc, &v| {
            acc * game.heights[v] as usize + colours[v] as usize
        });
        self.rules[u][index]
    }

    /// Parses `{"rules": {"<vertex>": [guesses...]}}`.
    pub fn from_json(game: &VisibilityGame, text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            rules: BTreeMap<String, Vec<u32>>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| HatError::Parse(e.to_string()))?;
        if let Some(extra) = raw.rules.keys().find(|k| game.vertex_index(k).is_none()) {
            return Err(HatError::Parse(format!(
                "rule given for unknown vertex {extra:?}"
            )));
        }
        let rules = game
            .vertices
            .iter()
            .map(|v| {
                raw.rules
                    .get(v)
                    .cloned()
                    .ok_or_else(|| HatError::Parse(format!("no rule for vertex {v:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        GeneralStrategy::new(game, rules)
    }

    pub fn to_json(&self, game: &VisibilityGame) -> Value {
        let rules: BTreeMap<&str, &Vec<u32>> = game
            .vertices
            .iter()
            .map(String::as_str)
            .zip(&self.rules)
            .collect();
        serde_json::json!({ "rules": rules })
    }
}

// Advances a mixed-radix counter, last digit fastest; false on wrap-around.
fn odometer(digits: &mut [u32], radices: &[u32]) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radices[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// The layered graph with a node `(colour, vertex)` for each colour below the
/// vertex's height, and an edge between every colour of `v` and every colour
/// of `u` whenever `u` sees `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredDigraph {
    /// `(colour, vertex)`, grouped by vertex.
    pub nodes: Vec<(u32, usize)>,
    /// Index pairs into `nodes`.
    pub edges: Vec<(usize, usize)>,
}

pub fn star_graph(game: &VisibilityGame) -> LayeredDigraph {
    let mut first = Vec::with_capacity(game.vertices.len());
    let mut nodes = Vec::new();
    for (v, &h) in game.heights.iter().enumerate() {
        first.push(nodes.len());
        nodes.extend((0..h).map(|i| (i, v)));
    }
    let mut edges = Vec::new();
    for &(v, u) in &game.edges {
        for i in 0..game.heights[v] as usize {
            for j in 0..game.heights[u] as usize {
                edges.push((first[v] + i, first[u] + j));
            }
        }
    }
    LayeredDigraph { nodes, edges }
}

pub fn general_correct_count(
    game: &VisibilityGame,
    f: &GeneralStrategy,
    g: &Selector,
) -> Result<usize> {
    if f.rules.len() != game.vertices.len() {
        return Err(HatError::SizeMismatch {
            expected: game.vertices.len(),
            found: f.rules.len(),
        });
    }
    g.check(game)?;
    Ok(count_correct(game, f, &g.colours))
}

fn count_correct(game: &VisibilityGame, f: &GeneralStrategy, colours: &[u32]) -> usize {
    (0..colours.len())
        .filter(|&u| f.guess(game, u, colours) == colours[u])
        .count()
}

fn check_budget(what: &'static str, needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(HatError::BudgetExceeded {
            what,
            needed,
            limit: budget,
        });
    }
    Ok(())
}

// Minimum over selectors, stopping once it drops to `floor`.
fn min_correct(game: &VisibilityGame, f: &GeneralStrategy, floor: usize) -> usize {
    let mut colours = vec![0u32; game.vertices.len()];
    let mut best = usize::MAX;
    loop {
        best = best.min(count_correct(game, f, &colours));
        if best <= floor || !odometer(&mut colours, &game.heights) {
            return best;
        }
    }
}

/// Exact minimum number of correct guesses over all selectors.
pub fn min_over_assignments(
    game: &VisibilityGame,
    f: &GeneralStrategy,
    budget: u128,
) -> Result<usize> {
    check_budget("selectors", game.selector_count(), budget)?;
    GeneralStrategy::new(game, f.rules.clone())?;
    Ok(min_correct(game, f, 0))
}

/// Upper bound on the game value: on average a player is right on a
/// `1/h` fraction of selectors, so the minimum is at most `floor(Σ 1/h)`.
pub fn averaging_bound(game: &VisibilityGame) -> usize {
    use num_rational::Ratio;
    use num_traits::ToPrimitive;
    let sum: Ratio<u64> = game.heights.iter().map(|&h| Ratio::new(1, h as u64)).sum();
    sum.floor().to_integer().to_usize().unwrap_or(usize::MAX)
}

/// The largest number of correct guesses a strategy can guarantee, by
/// enumerating every strategy. Returns at once when the averaging bound is 0,
/// and stops as soon as a strategy attains the bound.
pub fn game_value_bruteforce(game: &VisibilityGame, budget: u128) -> Result<usize> {
    let bound = averaging_bound(game);
    if bound == 0 {
        return Ok(0);
    }
    let strategies = (0..game.vertices.len()).try_fold(1u128, |acc, u| {
        let per_vertex = (game.heights[u] as u128)
            .checked_pow(u32::try_from(game.observation_count(u)).ok()?)?;
        acc.checked_mul(per_vertex)
    });
    check_budget("strategies", strategies.unwrap_or(u128::MAX), budget)?;
    check_budget("selectors", game.selector_count(), budget)?;

    let sizes: Vec<u32> = (0..game.vertices.len())
        .map(|u| game.observation_count(u) as u32)
        .collect();
    // one digit per table entry, vertex by vertex
    let radices: Vec<u32> = sizes
        .iter()
        .enumerate()
        .flat_map(|(u, &len)| std::iter::repeat_n(game.heights[u], len as usize))
        .collect();
    let mut digits = vec![0u32; radices.len()];
    let mut best = 0;
    loop {
        let mut rest = &digits[..];
        let rules = sizes
            .iter()
            .map(|&len| {
                let (head, tail) = rest.split_at(len as usize);
                rest = tail;
                head.to_vec()
            })
            .collect();
        let f = GeneralStrategy { rules };
        let value = min_correct(game, &f, best);
        if value > best {
            best = value;
            if best >= bound {
                return Ok(best);
            }
        }
        if !odometer(&mut digits, &radices) {
            return Ok(best);
        }
    }
}
