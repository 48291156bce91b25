//! Classification of strategies by their admissible continuations.
//!
//! Every edge `(b, c)` of a boundary has `ell_plus` admissible continuations
//! to the right and `ell_minus` to the left. A strategy is balanced when the
//! two always sum to 4; its edges are then yellow (3 left, 1 right, directed
//! right), red (1 left, 3 right, directed left) or blue (2 and 2).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HatError, Result};
use crate::game::{Colour, CycleStrategy, Edge, LocalRule, PathSegment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Plus,
    Minus,
}

/// Number of admissible one-step continuations of `e` in `direction`.
pub fn ell(f: &CycleStrategy, e: Edge, direction: Direction) -> u8 {
    let k = e.layer as i64;
    match direction {
        Direction::Plus => Colour::ALL
            .into_iter()
            .filter(|&d| e.right != f.guess(k + 1, e.left, d))
            .count() as u8,
        Direction::Minus => Colour::ALL
            .into_iter()
            .filter(|&a| e.left != f.guess(k, a, e.right))
            .count() as u8,
    }
}

/// `(ell_plus, ell_minus)` for the nine edges of boundary `k`, indexed
/// `[left][right]`.
pub fn ell_table(f: &CycleStrategy, k: usize) -> [[(u8, u8); 3]; 3] {
    let mut out = [[(0, 0); 3]; 3];
    for e in Edge::boundary(k) {
        out[e.left.index()][e.right.index()] =
            (ell(f, e, Direction::Plus), ell(f, e, Direction::Minus));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeColour {
    Yellow,
    Red,
    Blue,
}

impl EdgeColour {
    /// Colour of an edge with the given continuation counts, if balanced.
    pub fn from_ell(plus: u8, minus: u8) -> Option<Self> {
        match (minus, plus) {
            (3, 1) => Some(EdgeColour::Yellow),
            (1, 3) => Some(EdgeColour::Red),
            (2, 2) => Some(EdgeColour::Blue),
            _ => None,
        }
    }

    pub fn ell_plus(self) -> u8 {
        match self {
            EdgeColour::Yellow => 1,
            EdgeColour::Red => 3,
            EdgeColour::Blue => 2,
        }
    }

    pub fn ell_minus(self) -> u8 {
        4 - self.ell_plus()
    }

    pub fn is_directed(self) -> bool {
        self != EdgeColour::Blue
    }

    pub fn letter(self) -> char {
        match self {
            EdgeColour::Yellow => 'Y',
            EdgeColour::Red => 'R',
            EdgeColour::Blue => 'B',
        }
    }
}

/// Colours of the nine edges of one boundary, indexed `[left][right]`.
pub type BoundaryColouring = [[EdgeColour; 3]; 3];

/// Yellow/red/blue colouring of all `9n` edges of a balanced strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColouring {
    boundaries: Vec<BoundaryColouring>,
}

impl EdgeColouring {
    pub fn n(&self) -> usize {
        self.boundaries.len()
    }

    pub fn boundaries(&self) -> &[BoundaryColouring] {
        &self.boundaries
    }

    pub fn boundary(&self, k: i64) -> &BoundaryColouring {
        &self.boundaries[k.rem_euclid(self.n() as i64) as usize]
    }

    pub fn colour_of(&self, e: Edge) -> EdgeColour {
        self.boundary(e.layer as i64)[e.left.index()][e.right.index()]
    }

    #[inline]
    fn at(&self, k: i64, left: Colour, right: Colour) -> EdgeColour {
        self.boundary(k)[left.index()][right.index()]
    }

    /// Number of edges of `colour` at boundary `k`.
    pub fn count(&self, k: usize, colour: EdgeColour) -> usize {
        self.boundaries[k]
            .iter()
            .flatten()
            .filter(|&&c| c == colour)
            .count()
    }

    /// Whether some yellow or red edge touches vertex `v` of layer `k`.
    pub fn meets_directed(&self, k: i64, v: Colour) -> bool {
        Colour::ALL
            .into_iter()
            .any(|x| self.at(k - 1, x, v).is_directed() || self.at(k, v, x).is_directed())
    }
}

/// An edge violating `ell_plus + ell_minus = 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotBalanced {
    pub edge: Edge,
    pub plus: u8,
    pub minus: u8,
}

impl fmt::Display for NotBalanced {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "edge ({},{}) at boundary {} has ell+ = {} and ell- = {}",
            self.edge.left, self.edge.right, self.edge.layer, self.plus, self.minus
        )
    }
}

impl std::error::Error for NotBalanced {}

/// Colours every edge, or returns the first unbalanced edge in boundary
/// order.
pub fn colour_edges(f: &CycleStrategy) -> std::result::Result<EdgeColouring, NotBalanced> {
    let mut boundaries = Vec::with_capacity(f.n());
    for k in 0..f.n() {
        let mut colours = [[EdgeColour::Blue; 3]; 3];
        for e in Edge::boundary(k) {
            let plus = ell(f, e, Direction::Plus);
            let minus = ell(f, e, Direction::Minus);
            colours[e.left.index()][e.right.index()] =
                EdgeColour::from_ell(plus, minus).ok_or(NotBalanced {
                    edge: e,
                    plus,
                    minus,
                })?;
        }
        boundaries.push(colours);
    }
    Ok(EdgeColouring { boundaries })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChiResult {
    pub per_boundary: Vec<usize>,
    pub constant: Option<usize>,
}

/// Yellow-edge count per boundary; `constant` is set when they all agree.
pub fn characteristic(f: &CycleStrategy) -> std::result::Result<ChiResult, NotBalanced> {
    let colouring = colour_edges(f)?;
    Ok(characteristic_of(&colouring))
}

pub fn characteristic_of(c: &EdgeColouring) -> ChiResult {
    let per_boundary: Vec<usize> = (0..c.n()).map(|k| c.count(k, EdgeColour::Yellow)).collect();
    let constant = per_boundary
        .iter()
        .all(|&x| x == per_boundary[0])
        .then(|| per_boundary[0]);
    ChiResult {
        per_boundary,
        constant,
    }
}

/// Star-condition failures: a three-edge star that is neither `{Y,R,B}` nor
/// all blue. Each entry is `(layer, vertex, side)` with side `Plus` for the
/// edges leaving the vertex to the right.
pub fn star_violations(c: &EdgeColouring) -> Vec<(usize, Colour, Direction)> {
    let ok = |mut star: [EdgeColour; 3]| {
        star.sort();
        star == [EdgeColour::Yellow, EdgeColour::Red, EdgeColour::Blue]
            || star == [EdgeColour::Blue; 3]
    };
    let mut out = Vec::new();
    for k in 0..c.n() {
        for v in Colour::ALL {
            let right = Colour::ALL.map(|x| c.at(k as i64, v, x));
            if !ok(right) {
                out.push((k, v, Direction::Plus));
            }
            let left = Colour::ALL.map(|x| c.at(k as i64 - 1, x, v));
            if !ok(left) {
                out.push((k, v, Direction::Minus));
            }
        }
    }
    out
}

/// A failed structural predicate of a balanced strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureViolation {
    /// A directed edge is admissibly continued, in its own direction, by an
    /// edge of a different colour.
    MixedContinuation { edge: Edge, continuation: Edge },
    /// The three edges on the tail side of a directed edge are not one of
    /// each colour.
    TailNotTricoloured { edge: Edge },
    /// Two consecutive edges of the same direction form an inadmissible path.
    DirectedPathBlocked { first: Edge, second: Edge },
    /// A blue two-edge path whose middle vertex meets a directed edge is
    /// inadmissible.
    BluePathBlocked { first: Edge, second: Edge },
}

fn admissible3(f: &CycleStrategy, k: i64, a: Colour, b: Colour, c: Colour) -> bool {
    f.is_admissible(&PathSegment::new(k - 1, vec![a, b, c]).expect("three vertices"))
}

/// Checks the directed-continuation, tricoloured-tail and path-admissibility
/// predicates on every edge and returns all violations. Works on any
/// balanced strategy, winning or not.
pub fn structure_diagnostics(
    f: &CycleStrategy,
    c: &EdgeColouring,
) -> Result<Vec<StructureViolation>> {
    match colour_edges(f) {
        Ok(ref own) if own == c => {}
        _ => {
            return Err(HatError::precondition(
                "colouring does not belong to this strategy",
            ))
        }
    }
    use EdgeColour::*;
    let n = f.n() as i64;
    let mut out = Vec::new();
    // two-edge paths (a,b,c) with b in layer k
    for k in 0..n {
        for b in Colour::ALL {
            for a in Colour::ALL {
                let left = c.at(k - 1, a, b);
                let first = Edge::new(f.layer(k - 1), a, b);
                for d in Colour::ALL {
                    let right = c.at(k, b, d);
                    let second = Edge::new(f.layer(k), b, d);
                    let adm = admissible3(f, k, a, b, d);
                    if adm && left == Yellow && right != Yellow {
                        out.push(StructureViolation::MixedContinuation {
                            edge: first,
                            continuation: second,
                        });
                    }
                    if adm && right == Red && left != Red {
                        out.push(StructureViolation::MixedContinuation {
                            edge: second,
                            continuation: first,
                        });
                    }
                    if !adm && left == right && left.is_directed() {
                        out.push(StructureViolation::DirectedPathBlocked { first, second });
                    }
                    if !adm && left == Blue && right == Blue && c.meets_directed(k, b) {
                        out.push(StructureViolation::BluePathBlocked { first, second });
                    }
                }
            }
        }
    }
    for k in 0..n {
        for e in Edge::boundary(k as usize) {
            let tail: Vec<EdgeColour> = match c.colour_of(e) {
                Yellow => Colour::ALL
                    .iter()
                    .map(|&a| c.at(k - 1, a, e.left))
                    .collect(),
                Red => Colour::ALL
                    .iter()
                    .map(|&d| c.at(k + 1, e.right, d))
                    .collect(),
                Blue => continue,
            };
            let mut sorted = tail.clone();
            sorted.sort();
            if sorted != [Yellow, Red, Blue] {
                out.push(StructureViolation::TailNotTricoloured { edge: e });
            }
        }
    }
    Ok(out)
}

/// A permutation of the three colours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm3([Colour; 3]);

impl Perm3 {
    pub const IDENTITY: Perm3 = Perm3(Colour::ALL);
    /// `0 -> 1 -> 2 -> 0`.
    pub const FORWARD: Perm3 = Perm3([Colour::ALL[1], Colour::ALL[2], Colour::ALL[0]]);
    /// Exchanges colours 0 and 1.
    pub const SWAP01: Perm3 = Perm3([Colour::ALL[1], Colour::ALL[0], Colour::ALL[2]]);

    pub fn new(images: [u8; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        let mut map = [Colour::ALL[0]; 3];
        for (slot, &v) in map.iter_mut().zip(images.iter()) {
            let c = Colour::new(v)?;
            if seen[c.index()] {
                return Err(HatError::domain(format!("{images:?} is not a permutation")));
            }
            seen[c.index()] = true;
            *slot = c;
        }
        Ok(Perm3(map))
    }

    /// All six permutations in lexicographic order of their images.
    pub fn all() -> [Perm3; 6] {
        [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ]
        .map(|p| Perm3::new(p).expect("valid permutation"))
    }

    #[inline]
    pub fn apply(self, c: Colour) -> Colour {
        self.0[c.index()]
    }

    pub fn inverse(self) -> Perm3 {
        let mut inv = [Colour::ALL[0]; 3];
        for c in Colour::ALL {
            inv[self.apply(c).index()] = c;
        }
        Perm3(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Perm3) -> Perm3 {
        Perm3(Colour::ALL.map(|c| self.apply(other.apply(c))))
    }

    pub fn fixed_points(self) -> usize {
        Colour::ALL.iter().filter(|&&c| self.apply(c) == c).count()
    }

    pub fn images(self) -> [u8; 3] {
        self.0.map(Colour::value)
    }
}

/// A relabelling of a strategy: a cycle symmetry followed by a colour
/// permutation at every layer.
///
/// Target layer `k'` takes the rule of source layer `k' + rotation`, or of
/// `rotation - k'` when reflected (which also swaps left and right).
/// `vertex_perms[k']` renames the colours of target layer `k'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyIso {
    pub vertex_perms: Vec<Perm3>,
    pub rotation: usize,
    pub reflected: bool,
}

impl StrategyIso {
    pub fn identity(n: usize) -> Self {
        StrategyIso {
            vertex_perms: vec![Perm3::IDENTITY; n],
            rotation: 0,
            reflected: false,
        }
    }

    pub fn colours_only(vertex_perms: Vec<Perm3>) -> Self {
        StrategyIso {
            vertex_perms,
            rotation: 0,
            reflected: false,
        }
    }

    fn source_layer(&self, target: i64, n: usize) -> usize {
        let r = self.rotation as i64;
        let k = if self.reflected {
            r - target
        } else {
            target + r
        };
        k.rem_euclid(n as i64) as usize
    }

    fn perm(&self, k: i64) -> Perm3 {
        self.vertex_perms[k.rem_euclid(self.vertex_perms.len() as i64) as usize]
    }

    /// Image of an assignment under the relabelling; defeats map to defeats.
    pub fn map_assignment(&self, g: &crate::game::Assignment) -> crate::game::Assignment {
        let n = g.len();
        let colours = (0..n as i64)
            .map(|t| self.perm(t).apply(g.colours()[self.source_layer(t, n)]))
            .collect();
        crate::game::Assignment::new(colours)
    }
}

pub fn apply_iso(f: &CycleStrategy, iso: &StrategyIso) -> Result<CycleStrategy> {
    let n = f.n();
    if iso.vertex_perms.len() != n {
        return Err(HatError::SizeMismatch {
            expected: n,
            found: iso.vertex_perms.len(),
        });
    }
    let rules = (0..n as i64)
        .map(|t| {
            let src = f.rules()[iso.source_layer(t, n)];
            let out = iso.perm(t);
            let left_inv = iso.perm(t - 1).inverse();
            let right_inv = iso.perm(t + 1).inverse();
            LocalRule::from_fn(|x, y| {
                let (x, y) = (left_inv.apply(x), right_inv.apply(y));
                let (a, c) = if iso.reflected { (y, x) } else { (x, y) };
                out.apply(src.get(a, c))
            })
        })
        .collect();
    CycleStrategy::new(n, rules)
}

/// Which relabellings [`find_iso_in`] may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoGroup {
    /// Per-layer colour permutations only.
    ColourPermutations,
    /// Colour permutations, rotations and reflection.
    Full,
}

/// Searches for an iso mapping `f` onto `g` over the full group.
pub fn find_iso(f: &CycleStrategy, g: &CycleStrategy, budget: u64) -> Result<Option<StrategyIso>> {
    find_iso_in(f, g, IsoGroup::Full, budget)
}

/// Exhaustive search in the order: rotation ascending, unreflected before
/// reflected, then colour permutations of layers `0, 1, ...` in
/// lexicographic order. Returns the first hit. `budget` bounds the number of
/// single-layer rule comparisons.
pub fn find_iso_in(
    f: &CycleStrategy,
    g: &CycleStrategy,
    group: IsoGroup,
    budget: u64,
) -> Result<Option<StrategyIso>> {
    let n = f.n();
    if g.n() != n {
        return Err(HatError::SizeMismatch {
            expected: n,
            found: g.n(),
        });
    }
    let symmetries: Vec<(usize, bool)> = match group {
        IsoGroup::ColourPermutations => vec![(0, false)],
        IsoGroup::Full => (0..n).flat_map(|r| [(r, false), (r, true)]).collect(),
    };
    let mut checks = 0u64;
    for (rotation, reflected) in symmetries {
        let geometric = StrategyIso {
            vertex_perms: vec![Perm3::IDENTITY; n],
            rotation,
            reflected,
        };
        let h = apply_iso(f, &geometric)?;
        if let Some(perms) = colour_perm_search(&h, g, budget, &mut checks)? {
            return Ok(Some(StrategyIso {
                vertex_perms: perms,
                rotation,
                reflected,
            }));
        }
    }
    Ok(None)
}

// Does permuting colours by (left, mid, right) turn h's rule into g's rule?
fn layer_matches(h: &LocalRule, g: &LocalRule, left: Perm3, mid: Perm3, right: Perm3) -> bool {
    Colour::ALL.iter().all(|&x| {
        Colour::ALL
            .iter()
            .all(|&y| g.get(left.apply(x), right.apply(y)) == mid.apply(h.get(x, y)))
    })
}

fn colour_perm_search(
    h: &CycleStrategy,
    g: &CycleStrategy,
    budget: u64,
    checks: &mut u64,
) -> Result<Option<Vec<Perm3>>> {
    let n = h.n();
    let perms = Perm3::all();
    let mut chosen = vec![Perm3::IDENTITY; n];

    fn charge(checks: &mut u64, budget: u64) -> Result<()> {
        *checks += 1;
        if *checks > budget {
            return Err(HatError::BudgetExceeded {
                what: "isomorphism layer checks",
                needed: *checks as u128,
                limit: budget as u128,
            });
        }
        Ok(())
    }

    // Extend chosen[0..=k] to chosen[k+1], checking layer k.
    fn extend(
        k: usize,
        h: &CycleStrategy,
        g: &CycleStrategy,
        chosen: &mut Vec<Perm3>,
        perms: &[Perm3; 6],
        budget: u64,
        checks: &mut u64,
    ) -> Result<bool> {
        let n = h.n();
        if k == n - 1 {
            // close the cycle: layers n-1 and 0
            charge(checks, budget)?;
            let last = layer_matches(
                &h.rules()[n - 1],
                &g.rules()[n - 1],
                chosen[n - 2],
                chosen[n - 1],
                chosen[0],
            );
            charge(checks, budget)?;
            return Ok(last
                && layer_matches(
                    &h.rules()[0],
                    &g.rules()[0],
                    chosen[n - 1],
                    chosen[0],
                    chosen[1],
                ));
        }
        for &p in perms {
            charge(checks, budget)?;
            if layer_matches(&h.rules()[k], &g.rules()[k], chosen[k - 1], chosen[k], p) {
                chosen[k + 1] = p;
                if extend(k + 1, h, g, chosen, perms, budget, checks)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    for &p0 in &perms {
        for &p1 in &perms {
            chosen[0] = p0;
            chosen[1] = p1;
            if extend(1, h, g, &mut chosen, &perms, budget, checks)? {
                return Ok(Some(chosen));
            }
        }
    }
    Ok(None)
}
