//! Constructive refutations and a certificate-producing search showing that
//! no winning strategy exists on small cycles.
//!
//! The search assumes four structural facts about winning strategies, listed
//! verbatim in [`Certificate::lemma_dependencies`]. Under them a winning
//! strategy is balanced with a constant number of yellow edges per boundary,
//! and after relabelling colours layer by layer its edge colouring is one of
//! the finitely many [`ColourStructure`]s. Each structure pins down the
//! continuation counts of every table, so the tables of a layer are looked up
//! in a precomputed signature index; every assembled candidate is then
//! verified exactly and refuted with a checkable defeating assignment.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HatError, Result};
use crate::game::{Assignment, Colour, CycleStrategy, LocalRule, RULE_COUNT};
use crate::structure::{
    characteristic_of, colour_edges, BoundaryColouring, EdgeColour, EdgeColouring, Perm3,
};
use crate::verifier::verify;

// ---------------------------------------------------------------------------
// refuters

/// How a defeating assignment was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    /// Intersection of a right fan and a left fan of blue paths.
    BlueFans,
    /// A monochromatic path that closes after one turn around the cycle.
    MonochromaticClosure,
    /// The alternating blue path through the blue vertices.
    BluePath,
    /// Reconstructed from the transfer-matrix product.
    Transfer,
}

fn colouring_or_precondition(f: &CycleStrategy) -> Result<EdgeColouring> {
    colour_edges(f).map_err(|e| HatError::precondition(format!("strategy is not balanced: {e}")))
}

fn defeats(f: &CycleStrategy, colours: Vec<Colour>) -> Option<Assignment> {
    (f.correct_count_unchecked(&colours) == 0).then(|| Assignment::new(colours))
}

fn transfer_witness(f: &CycleStrategy) -> Result<Assignment> {
    verify(f)
        .witness()
        .cloned()
        .ok_or_else(|| HatError::precondition("strategy is winning"))
}

/// Defeats a strategy whose edges are all blue, for `n >= 5`.
///
/// Starting from an edge at boundary 0, the eight admissible paths over
/// positions `0..=4` end in edges at boundary 3. A path running left from
/// the same edge down to position `3 - n` ends in one of four edges at the
/// same boundary, since the last two steps branch twice. Any shared edge
/// glues the two pieces into a closed admissible walk of length `n`.
pub fn defeat_all_blue(f: &CycleStrategy) -> Result<Assignment> {
    let n = f.n();
    if n < 5 {
        return Err(HatError::precondition(format!(
            "cycle length {n} is below 5"
        )));
    }
    let colouring = colouring_or_precondition(f)?;
    if characteristic_of(&colouring).constant != Some(0) {
        return Err(HatError::precondition("strategy has directed edges"));
    }
    let reach = n as i64 - 3;
    for s0 in Colour::ALL {
        for s1 in Colour::ALL {
            if let Some(g) = blue_fans_from(f, s0, s1, reach) {
                return Ok(g);
            }
        }
    }
    Err(HatError::precondition("no pair of blue fans closes"))
}

fn blue_fans_from(f: &CycleStrategy, s0: Colour, s1: Colour, reach: i64) -> Option<Assignment> {
    let n = f.n();
    // right fan over positions 0..=4
    let mut right = vec![vec![s0, s1]];
    for pos in 2..5i64 {
        right = right
            .into_iter()
            .flat_map(|p| {
                Colour::ALL.into_iter().filter_map(move |d| {
                    let k = pos as usize;
                    (p[k - 1] != f.guess(pos - 1, p[k - 2], d)).then(|| {
                        let mut q = p.clone();
                        q.push(d);
                        q
                    })
                })
            })
            .collect();
    }
    // left chain: chain[i] is the colour at position 1 - i
    let mut chain = vec![s1, s0];
    let left_of = |chain: &[Colour], a: Colour| {
        let i = chain.len();
        let pos = 1 - i as i64;
        chain[i - 1] != f.guess(pos + 1, a, chain[i - 2])
    };
    while (chain.len() as i64) < reach {
        let a = Colour::ALL.into_iter().find(|&a| left_of(&chain, a))?;
        chain.push(a);
    }
    let firsts: Vec<Colour> = Colour::ALL
        .into_iter()
        .filter(|&a| left_of(&chain, a))
        .collect();
    for a1 in firsts {
        chain.push(a1);
        let seconds: Vec<Colour> = Colour::ALL
            .into_iter()
            .filter(|&a| left_of(&chain, a))
            .collect();
        for a0 in seconds {
            for path in &right {
                if (path[3], path[4]) != (a0, a1) {
                    continue;
                }
                let mut g = vec![Colour::ALL[0]; n];
                g[..5.min(n)].copy_from_slice(&path[..5.min(n)]);
                // positions 5..n come from the left chain, position p = 1 - i
                for (i, &c) in chain.iter().enumerate().skip(2) {
                    let p = (1 - i as i64).rem_euclid(n as i64) as usize;
                    if p >= 5 {
                        g[p] = c;
                    }
                }
                if let Some(w) = defeats(f, g) {
                    return Some(w);
                }
            }
        }
        chain.pop();
    }
    None
}

fn follow(colouring: &EdgeColouring, start: Colour, colour: EdgeColour) -> Option<Vec<Colour>> {
    let mut path = vec![start];
    for k in 0..colouring.n() {
        let cur = *path.last().unwrap();
        let next = Colour::ALL
            .into_iter()
            .find(|&c| colouring.boundary(k as i64)[cur.index()][c.index()] == colour)?;
        path.push(next);
    }
    (path[colouring.n()] == start).then(|| {
        path.pop();
        path
    })
}

fn closed_monochromatic(
    f: &CycleStrategy,
    colouring: &EdgeColouring,
    order: &[EdgeColour],
) -> Option<Assignment> {
    for v in Colour::ALL {
        for &colour in order {
            if let Some(w) = follow(colouring, v, colour).and_then(|p| defeats(f, p)) {
                return Some(w);
            }
        }
    }
    None
}

pub(crate) fn refute_chi3_with_source(f: &CycleStrategy) -> Result<(Assignment, WitnessSource)> {
    let colouring = colouring_or_precondition(f)?;
    if characteristic_of(&colouring).constant != Some(3) {
        return Err(HatError::precondition(
            "strategy does not have three yellow edges per boundary",
        ));
    }
    if f.n().is_multiple_of(3) {
        return Err(HatError::precondition(format!(
            "cycle length {} is divisible by 3",
            f.n()
        )));
    }
    use EdgeColour::*;
    match closed_monochromatic(f, &colouring, &[Yellow, Red, Blue]) {
        Some(w) => Ok((w, WitnessSource::MonochromaticClosure)),
        None => Ok((transfer_witness(f)?, WitnessSource::Transfer)),
    }
}

/// Defeats a strategy with three yellow edges per boundary when `3 ∤ n`.
///
/// From each vertex of layer 0 the yellow, red and blue paths are followed
/// once around the cycle and the first one that closes into a defeating
/// assignment is returned. Should none close, the transfer-matrix witness is
/// returned instead.
pub fn refute_chi3(f: &CycleStrategy) -> Result<Assignment> {
    refute_chi3_with_source(f).map(|(w, _)| w)
}

pub(crate) fn refute_chi2_with_source(f: &CycleStrategy) -> Result<(Assignment, WitnessSource)> {
    let n = f.n();
    let colouring = colouring_or_precondition(f)?;
    if characteristic_of(&colouring).constant != Some(2) {
        return Err(HatError::precondition(
            "strategy does not have two yellow edges per boundary",
        ));
    }
    if n == 4 {
        return Err(HatError::precondition(
            "cycle length 4 admits winning strategies",
        ));
    }
    use EdgeColour::*;
    let found = if n % 2 == 1 {
        closed_monochromatic(f, &colouring, &[Red, Yellow])
            .map(|w| (w, WitnessSource::MonochromaticClosure))
    } else {
        blue_path(f, &colouring).map(|w| (w, WitnessSource::BluePath))
    };
    match found {
        Some(hit) => Ok(hit),
        None => Ok((transfer_witness(f)?, WitnessSource::Transfer)),
    }
}

// Labels along the blue path: 3 is the vertex with only blue edges, 1 and 2
// are the two yellow rows traced from layer 0.
fn blue_path_labels(n: usize) -> Vec<u8> {
    let mut labels = vec![3, 3, 1, 3];
    for i in 0..(n - 4) / 2 {
        labels.push(3);
        labels.push(if i % 2 == 0 { 1 } else { 2 });
    }
    labels
}

fn blue_path(f: &CycleStrategy, colouring: &EdgeColouring) -> Option<Assignment> {
    let n = f.n();
    let blue_vertex: Vec<Colour> = (0..n as i64)
        .map(|k| {
            Colour::ALL
                .into_iter()
                .find(|&v| !colouring.meets_directed(k, v))
        })
        .collect::<Option<_>>()?;
    let rows: Vec<Colour> = Colour::ALL
        .into_iter()
        .filter(|&v| v != blue_vertex[0])
        .collect();
    let labels = blue_path_labels(n);
    for (a, b) in [(rows[0], rows[1]), (rows[1], rows[0])] {
        // trace both yellow rows once around
        let mut row1 = vec![a];
        let mut row2 = vec![b];
        for k in 0..n - 1 {
            let yellow_from = |v: Colour| {
                Colour::ALL.into_iter().find(|&c| {
                    colouring.boundary(k as i64)[v.index()][c.index()] == EdgeColour::Yellow
                })
            };
            row1.push(yellow_from(row1[k])?);
            row2.push(yellow_from(row2[k])?);
        }
        for offset in 0..n {
            let g = (0..n)
                .map(|i| {
                    let k = (offset + i) % n;
                    (k, labels[i])
                })
                .fold(vec![Colour::ALL[0]; n], |mut g, (k, label)| {
                    g[k] = match label {
                        1 => row1[k],
                        2 => row2[k],
                        _ => blue_vertex[k],
                    };
                    g
                });
            if let Some(w) = defeats(f, g) {
                return Some(w);
            }
        }
    }
    None
}

/// Defeats a strategy with two yellow edges per boundary, `n != 4`.
///
/// For odd `n` a red (or yellow) path closes after one turn. For even
/// `n >= 6` the blue path `3,3,1,3,(3,1),(3,2),...` through the blue vertex
/// (3) and the two yellow rows (1, 2) is tried at every offset and under both
/// row labellings. Should neither apply, the transfer-matrix witness is
/// returned instead.
pub fn refute_chi2(f: &CycleStrategy) -> Result<Assignment> {
    refute_chi2_with_source(f).map(|(w, _)| w)
}

// ---------------------------------------------------------------------------
// colour structures

/// An edge colouring, normalised by per-layer colour relabelling, that a
/// winning strategy with a constant number of yellow edges could have.
///
/// Yellow edges are `(i, i)` at boundaries `0..n-1`; at the closing boundary
/// `n-1` they are `(i, monodromy(i))`. For three yellow edges the red edge
/// leaving `i` at boundary `k` goes to `yellow(turns[k](i))`. For two yellow
/// edges colour 2 is the all-blue vertex of every layer and red edges cross
/// the yellow ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColourStructure {
    pub chi: usize,
    pub monodromy: Perm3,
    pub turns: Vec<Perm3>,
    /// Some monochromatic path closes after one turn, so every strategy with
    /// this colouring loses.
    pub self_refuting: bool,
    #[serde(skip)]
    boundaries: Vec<BoundaryColouring>,
}

impl ColourStructure {
    pub fn n(&self) -> usize {
        self.boundaries.len()
    }

    pub fn boundaries(&self) -> &[BoundaryColouring] {
        &self.boundaries
    }

    pub fn boundary(&self, k: i64) -> &BoundaryColouring {
        &self.boundaries[k.rem_euclid(self.n() as i64) as usize]
    }

    pub fn label(&self) -> String {
        let m = self.monodromy.images();
        let mut s = format!("chi={} monodromy={}{}{}", self.chi, m[0], m[1], m[2]);
        if !self.turns.is_empty() {
            s.push_str(" turns=");
            s.extend(
                self.turns
                    .iter()
                    .map(|&t| if t == Perm3::FORWARD { '+' } else { '-' }),
            );
        }
        s
    }
}

fn all_blue(n: usize) -> ColourStructure {
    ColourStructure {
        chi: 0,
        monodromy: Perm3::IDENTITY,
        turns: Vec::new(),
        self_refuting: false,
        boundaries: vec![[[EdgeColour::Blue; 3]; 3]; n],
    }
}

fn boundary_from(yellow: Perm3, red: Perm3, rows: &[Colour]) -> BoundaryColouring {
    let mut m = [[EdgeColour::Blue; 3]; 3];
    for &i in rows {
        m[i.index()][yellow.apply(i).index()] = EdgeColour::Yellow;
        m[i.index()][red.apply(i).index()] = EdgeColour::Red;
    }
    m
}

fn chi2_structure(n: usize, tau: Perm3) -> ColourStructure {
    let rows = [Colour::ALL[0], Colour::ALL[1]];
    let boundaries = (0..n)
        .map(|k| {
            let yellow = if k == n - 1 { tau } else { Perm3::IDENTITY };
            boundary_from(yellow, yellow.compose(Perm3::SWAP01), &rows)
        })
        .collect();
    ColourStructure {
        chi: 2,
        monodromy: tau,
        turns: Vec::new(),
        self_refuting: tau.fixed_points() == 3,
        boundaries,
    }
}

fn chi3_structures(n: usize, sigma: Perm3) -> Vec<ColourStructure> {
    let back = Perm3::FORWARD.inverse();
    (0..1u64 << n)
        .map(|mask| {
            let turns: Vec<Perm3> = (0..n)
                .map(|k| {
                    if mask >> (n - 1 - k) & 1 == 0 {
                        Perm3::FORWARD
                    } else {
                        back
                    }
                })
                .collect();
            let boundaries = (0..n)
                .map(|k| {
                    let yellow = if k == n - 1 { sigma } else { Perm3::IDENTITY };
                    boundary_from(yellow, yellow.compose(turns[k]), &Colour::ALL)
                })
                .collect();
            ColourStructure {
                chi: 3,
                monodromy: sigma,
                turns,
                self_refuting: sigma.fixed_points() > 0,
                boundaries,
            }
        })
        .collect()
}

/// Every normalised colouring with `chi` yellow edges per boundary,
/// self-refuting ones included. One yellow edge per boundary is impossible:
/// the vertex it leaves would need a red edge into the vertex it enters.
pub fn colour_structures(n: usize, chi: usize) -> Vec<ColourStructure> {
    match chi {
        0 => vec![all_blue(n)],
        2 => vec![
            chi2_structure(n, Perm3::IDENTITY),
            chi2_structure(n, Perm3::SWAP01),
        ],
        3 => Perm3::all()
            .into_iter()
            .flat_map(|sigma| chi3_structures(n, sigma))
            .collect(),
        _ => Vec::new(),
    }
}

/// The colour structures a winning strategy on `C_n` could have: the all-blue
/// one, the two-yellow structure with a transposed monodromy, and the
/// three-yellow structures whose monodromy is a 3-cycle. Structures whose
/// yellow paths close after one turn are left out.
pub fn enumerate_colour_structures(n: usize) -> Result<Vec<ColourStructure>> {
    if n < 5 {
        return Err(HatError::precondition(format!(
            "cycle length {n} is below 5"
        )));
    }
    Ok([0, 1, 2, 3]
        .into_iter()
        .flat_map(|chi| colour_structures(n, chi))
        .filter(|s| !s.self_refuting)
        .collect())
}

// ---------------------------------------------------------------------------
// signature index

type Signature = ([u8; 9], [u8; 9]);

/// Row and column multiplicities: `rows[3a+b]` counts `b` in row `a`,
/// `cols[3c+b]` counts `b` in column `c`.
fn signature(t: &LocalRule) -> Signature {
    let mut rows = [0u8; 9];
    let mut cols = [0u8; 9];
    for a in Colour::ALL {
        for c in Colour::ALL {
            let b = t.get(a, c).index();
            rows[3 * a.index() + b] += 1;
            cols[3 * c.index() + b] += 1;
        }
    }
    (rows, cols)
}

fn signature_index() -> &'static HashMap<Signature, Vec<u16>> {
    static INDEX: OnceLock<HashMap<Signature, Vec<u16>>> = OnceLock::new();
    INDEX.get_or_init(|| {
        let mut index: HashMap<Signature, Vec<u16>> = HashMap::new();
        for t in LocalRule::all() {
            index.entry(signature(&t)).or_default().push(t.id());
        }
        index
    })
}

/// The signature a table at layer `k` must have: the edges of boundary
/// `k-1` fix its row multiplicities, those of boundary `k` its columns.
fn required_signature(left: &BoundaryColouring, right: &BoundaryColouring) -> Signature {
    let mut rows = [0u8; 9];
    let mut cols = [0u8; 9];
    for x in 0..3 {
        for y in 0..3 {
            rows[3 * x + y] = 3 - left[x][y].ell_plus();
            // right[b][c] with b = y, c = x
            cols[3 * x + y] = 3 - right[y][x].ell_minus();
        }
    }
    (rows, cols)
}

fn partner(row: &[EdgeColour; 3], colour: EdgeColour) -> Option<Colour> {
    Colour::ALL.into_iter().find(|c| row[c.index()] == colour)
}

// A yellow edge (a,b) is continued to the right only along the yellow edge
// leaving b; a red edge (b,c) is continued to the left only along the red
// edge entering b.
fn forced_continuations_hold(
    t: &LocalRule,
    left: &BoundaryColouring,
    right: &BoundaryColouring,
) -> bool {
    for a in Colour::ALL {
        for b in Colour::ALL {
            if left[a.index()][b.index()] == EdgeColour::Yellow {
                match partner(&right[b.index()], EdgeColour::Yellow) {
                    Some(d) if t.get(a, d) != b => {}
                    _ => return false,
                }
            }
            for c in Colour::ALL {
                if right[b.index()][c.index()] == EdgeColour::Red {
                    let column = Colour::ALL.map(|x| left[x.index()][b.index()]);
                    match partner(&column, EdgeColour::Red) {
                        Some(x) if t.get(x, c) != b => {}
                        _ => return false,
                    }
                }
            }
        }
    }
    true
}

/// Lexicographically smallest among its column permutations.
fn column_canonical(t: &LocalRule) -> bool {
    Perm3::all().into_iter().all(|p| {
        let permuted = LocalRule::from_fn(|a, c| t.get(a, p.apply(c)));
        t.id() <= permuted.id()
    })
}

/// Tables encoded as nine base-3 digits, row by row.
pub fn table_code(t: &LocalRule) -> String {
    t.values()
        .iter()
        .flatten()
        .map(|v| char::from(b'0' + v))
        .collect()
}

pub fn table_from_code(code: &str) -> Result<LocalRule> {
    let digits: Vec<u8> = code
        .bytes()
        .map(|b| match b {
            b'0'..=b'2' => Ok(b - b'0'),
            _ => Err(HatError::Parse(format!("bad table code {code:?}"))),
        })
        .collect::<Result<_>>()?;
    if digits.len() != 9 {
        return Err(HatError::Parse(format!(
            "table code {code:?} does not have 9 digits"
        )));
    }
    let mut values = [[0u8; 3]; 3];
    for (i, d) in digits.into_iter().enumerate() {
        values[i / 3][i % 3] = d;
    }
    LocalRule::from_values(values)
}

// ---------------------------------------------------------------------------
// certificates

/// Limits for [`prove_nonexistence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProverBudget {
    /// Table examinations plus candidate verifications.
    pub table_checks: u64,
    pub wall_clock: Option<Duration>,
    /// Largest cycle length accepted by [`prove_nonexistence`].
    pub max_n: usize,
}

pub const DEFAULT_TABLE_CHECKS: u64 = 1_000_000_000;

impl Default for ProverBudget {
    fn default() -> Self {
        ProverBudget {
            table_checks: DEFAULT_TABLE_CHECKS,
            wall_clock: None,
            max_n: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Conclusion {
    NoWinningStrategy,
    WinningFound {
        strategy: CycleStrategy,
    },
    /// The search stopped early; nothing is concluded.
    BudgetExceeded {
        resource: String,
        needed: u128,
        limit: u128,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub counts: BTreeMap<String, u64>,
}

impl Stage {
    fn new(name: &str, counts: &[(&str, u64)]) -> Self {
        Stage {
            name: name.to_string(),
            counts: counts.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        }
    }

    pub fn count(&self, key: &str) -> Option<u64> {
        self.counts.get(key).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Outcome {
    Defeated {
        witness: Vec<u8>,
        source: WitnessSource,
    },
    Winning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub structure: String,
    pub tables: Vec<String>,
    #[serde(flatten)]
    pub outcome: Outcome,
}

impl CandidateRecord {
    pub fn strategy(&self) -> Result<CycleStrategy> {
        let rules = self
            .tables
            .iter()
            .map(|c| table_from_code(c))
            .collect::<Result<Vec<_>>>()?;
        CycleStrategy::new(rules.len(), rules)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    pub conclusion: Conclusion,
    pub method_log: Vec<Stage>,
    pub lemma_dependencies: Vec<String>,
    pub candidates: Vec<CandidateRecord>,
}

impl Certificate {
    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.method_log.iter().find(|s| s.name == name)
    }

    pub fn is_conclusive(&self) -> bool {
        !matches!(self.conclusion, Conclusion::BudgetExceeded { .. })
    }
}

/// Facts about winning strategies that the search takes as given.
pub fn lemma_dependencies() -> Vec<String> {
    [
        "a winning strategy is balanced: every edge has exactly four admissible one-step continuations, left and right together",
        "in a winning strategy every boundary carries the same number of yellow edges",
        "in a winning strategy the three edges on either side of a vertex are yellow, red and blue, or all blue",
        "in a winning strategy the unique admissible continuation of a yellow edge to the right, or of a red edge to the left, has the same colour",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

struct Plan {
    structure: ColourStructure,
    layers: Vec<Vec<u16>>,
}

impl Plan {
    fn candidates(&self) -> u64 {
        self.layers.iter().map(|l| l.len() as u64).product()
    }

    fn candidate(&self, mut index: u64) -> CycleStrategy {
        let n = self.layers.len();
        let mut rules = vec![LocalRule::from_id(0); n];
        for k in (0..n).rev() {
            let len = self.layers[k].len() as u64;
            rules[k] = LocalRule::from_id(self.layers[k][(index % len) as usize]);
            index /= len;
        }
        CycleStrategy::new(n, rules).expect("n rules")
    }
}

#[derive(Default)]
struct PlanCounts {
    table_checks: u64,
    signature_matches: u64,
    forced_survivors: u64,
    gauge_survivors: u64,
}

fn plan(structure: ColourStructure, counts: &mut PlanCounts) -> Plan {
    let n = structure.n();
    let index = signature_index();
    let layers = (0..n)
        .map(|k| {
            let left = structure.boundary(k as i64 - 1);
            let right = structure.boundary(k as i64);
            let matches = index
                .get(&required_signature(left, right))
                .map_or(&[][..], |v| v);
            counts.table_checks += matches.len() as u64;
            counts.signature_matches += matches.len() as u64;
            let forced: Vec<u16> = matches
                .iter()
                .copied()
                .filter(|&id| forced_continuations_hold(&LocalRule::from_id(id), left, right))
                .collect();
            counts.forced_survivors += forced.len() as u64;
            // With no directed edges every layer's colours are still free:
            // relabelling layer k+1 sorts the columns of table k.
            let gauged: Vec<u16> = if structure.chi == 0 && k + 2 < n {
                forced
                    .into_iter()
                    .filter(|&id| column_canonical(&LocalRule::from_id(id)))
                    .collect()
            } else {
                forced
            };
            counts.gauge_survivors += gauged.len() as u64;
            gauged
        })
        .collect();
    Plan { structure, layers }
}

fn refute_candidate(f: &CycleStrategy, chi: usize) -> Outcome {
    if verify(f).is_winning() {
        return Outcome::Winning;
    }
    let n = f.n();
    let constructive = match chi {
        0 if n >= 5 => defeat_all_blue(f)
            .ok()
            .map(|w| (w, WitnessSource::BlueFans)),
        2 if n != 4 => refute_chi2_with_source(f).ok(),
        3 if !n.is_multiple_of(3) => refute_chi3_with_source(f).ok(),
        _ => None,
    };
    let (witness, source) = constructive.unwrap_or_else(|| {
        let w = transfer_witness(f).expect("losing strategy has a witness");
        (w, WitnessSource::Transfer)
    });
    debug_assert_eq!(f.correct_count(&witness), Ok(0));
    Outcome::Defeated {
        witness: witness.values(),
        source,
    }
}

/// Proves that `C_n` has no winning strategy, for `5 <= n <= budget.max_n`
/// with `3 ∤ n`.
pub fn prove_nonexistence(n: usize, budget: ProverBudget) -> Result<Certificate> {
    if n < 5 || n.is_multiple_of(3) {
        return Err(HatError::precondition(format!(
            "cycle length {n} is not covered: need n >= 5 and 3 not dividing n"
        )));
    }
    if n > budget.max_n {
        return Err(HatError::precondition(format!(
            "cycle length {n} exceeds the configured maximum {}",
            budget.max_n
        )));
    }
    search(n, budget)
}

/// The search behind [`prove_nonexistence`] without its range guard, for any
/// `n >= 4`. On cycles that admit winning strategies it reports one.
pub fn search(n: usize, budget: ProverBudget) -> Result<Certificate> {
    if n < 4 {
        return Err(HatError::precondition(format!(
            "cycle length {n} is below 4"
        )));
    }
    let started = Instant::now();
    let index = signature_index();
    let mut log = vec![Stage::new(
        "signature_index",
        &[
            ("tables", RULE_COUNT as u64),
            ("signature_classes", index.len() as u64),
        ],
    )];

    let by_chi: Vec<Vec<ColourStructure>> = (0..=3).map(|chi| colour_structures(n, chi)).collect();
    let structures: Vec<ColourStructure> = by_chi.iter().flatten().cloned().collect();
    log.push(Stage::new(
        "colour_structures",
        &[
            ("chi0", by_chi[0].len() as u64),
            ("chi1", by_chi[1].len() as u64),
            ("chi2", by_chi[2].len() as u64),
            ("chi3", by_chi[3].len() as u64),
            (
                "self_refuting",
                structures.iter().filter(|s| s.self_refuting).count() as u64,
            ),
            ("total", structures.len() as u64),
        ],
    ));

    let mut counts = PlanCounts::default();
    let plans: Vec<Plan> = structures
        .into_iter()
        .map(|s| plan(s, &mut counts))
        .collect();
    let total_candidates: u64 = plans.iter().map(Plan::candidates).sum();
    log.push(Stage::new(
        "layer_tables",
        &[
            ("table_checks", counts.table_checks),
            ("signature_matches", counts.signature_matches),
            ("forced_continuation_survivors", counts.forced_survivors),
            ("gauge_survivors", counts.gauge_survivors),
            (
                "structures_with_candidates",
                plans.iter().filter(|p| p.candidates() > 0).count() as u64,
            ),
            ("candidates", total_candidates),
        ],
    ));

    let exceeded = |resource: &str, needed: u128, limit: u128, log: Vec<Stage>| Certificate {
        n,
        conclusion: Conclusion::BudgetExceeded {
            resource: resource.to_string(),
            needed,
            limit,
        },
        method_log: log,
        lemma_dependencies: lemma_dependencies(),
        candidates: Vec::new(),
    };
    let needed = counts.table_checks as u128 + total_candidates as u128;
    if needed > budget.table_checks as u128 {
        return Ok(exceeded(
            "table_checks",
            needed,
            budget.table_checks as u128,
            log,
        ));
    }

    let mut candidates = Vec::with_capacity(total_candidates as usize);
    for p in &plans {
        if let Some(limit) = budget.wall_clock {
            if started.elapsed() > limit {
                return Ok(exceeded(
                    "wall_clock_ms",
                    started.elapsed().as_millis(),
                    limit.as_millis(),
                    log,
                ));
            }
        }
        let label = p.structure.label();
        let chi = p.structure.chi;
        let records: Vec<CandidateRecord> = (0..p.candidates())
            .into_par_iter()
            .map(|i| {
                let f = p.candidate(i);
                CandidateRecord {
                    structure: label.clone(),
                    tables: f.rules().iter().map(table_code).collect(),
                    outcome: refute_candidate(&f, chi),
                }
            })
            .collect();
        candidates.extend(records);
    }

    let mut sources: BTreeMap<WitnessSource, u64> = BTreeMap::new();
    let mut winning = Vec::new();
    for c in &candidates {
        match &c.outcome {
            Outcome::Defeated { source, .. } => *sources.entry(*source).or_default() += 1,
            Outcome::Winning => winning.push(c),
        }
    }
    let mut verification = vec![
        ("verifier_calls", candidates.len() as u64),
        ("refuted", candidates.len() as u64 - winning.len() as u64),
        ("winning", winning.len() as u64),
    ];
    let source_keys: Vec<(String, u64)> = sources
        .iter()
        .map(|(s, &v)| {
            (
                format!(
                    "witness_{}",
                    serde_json::to_value(s).unwrap().as_str().unwrap()
                ),
                v,
            )
        })
        .collect();
    verification.extend(source_keys.iter().map(|(k, v)| (k.as_str(), *v)));
    log.push(Stage::new("verification", &verification));

    let conclusion = match winning.first() {
        Some(c) => Conclusion::WinningFound {
            strategy: c.strategy()?,
        },
        None => Conclusion::NoWinningStrategy,
    };
    Ok(Certificate {
        n,
        conclusion,
        method_log: log,
        lemma_dependencies: lemma_dependencies(),
        candidates,
    })
}

/// Re-checks a certificate without trusting it: the candidate list must be
/// exactly the one the search enumerates, every defeating assignment must
/// defeat its candidate, and every winning candidate must verify.
pub fn check_certificate(cert: &Certificate) -> Result<()> {
    let bad = |msg: String| Err(HatError::Domain(format!("certificate rejected: {msg}")));
    if !cert.is_conclusive() {
        return bad("the search did not finish".into());
    }
    let mut counts = PlanCounts::default();
    let plans: Vec<Plan> = (0..=3)
        .flat_map(|chi| colour_structures(cert.n, chi))
        .map(|s| plan(s, &mut counts))
        .collect();
    let expected: Vec<(String, Vec<String>)> = plans
        .iter()
        .flat_map(|p| {
            (0..p.candidates()).map(move |i| {
                let f = p.candidate(i);
                (
                    p.structure.label(),
                    f.rules().iter().map(table_code).collect(),
                )
            })
        })
        .collect();
    if expected.len() != cert.candidates.len() {
        return bad(format!(
            "{} candidates listed, {} expected",
            cert.candidates.len(),
            expected.len()
        ));
    }
    let mut first_winning = None;
    for (record, (label, tables)) in cert.candidates.iter().zip(&expected) {
        if &record.structure != label || &record.tables != tables {
            return bad(format!("unexpected candidate {:?}", record.tables));
        }
        let f = record.strategy()?;
        match &record.outcome {
            Outcome::Defeated { witness, .. } => {
                let g = Assignment::from_values(witness)?;
                if f.correct_count(&g)? != 0 {
                    return bad(format!("{witness:?} does not defeat {tables:?}"));
                }
            }
            Outcome::Winning => {
                if !verify(&f).is_winning() {
                    return bad(format!("{tables:?} is not winning"));
                }
                first_winning.get_or_insert(f);
            }
        }
    }
    match (&cert.conclusion, first_winning) {
        (Conclusion::NoWinningStrategy, None) => Ok(()),
        (Conclusion::WinningFound { strategy }, Some(f)) if *strategy == f => Ok(()),
        _ => bad("conclusion does not match the candidates".into()),
    }
}
