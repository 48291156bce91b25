//! Explicit strategies: the small algebraic ones and the two periodic
//! families with three and two yellow edges per boundary.

use crate::error::{HatError, Result};
use crate::game::{Colour, CycleStrategy, LocalRule};
use crate::structure::Perm3;

/// A fixed-point-free permutation of the colours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rotation3(Perm3);

impl Rotation3 {
    /// `0 -> 1 -> 2 -> 0`.
    pub const FORWARD: Rotation3 = Rotation3(Perm3::FORWARD);

    pub fn new(perm: Perm3) -> Result<Self> {
        if perm.fixed_points() != 0 {
            return Err(HatError::domain(format!(
                "{:?} has a fixed point",
                perm.images()
            )));
        }
        Ok(Rotation3(perm))
    }

    pub fn perm(self) -> Perm3 {
        self.0
    }

    pub fn inverse(self) -> Rotation3 {
        Rotation3(self.0.inverse())
    }
}

/// Rule shared by every layer of [`chi3_strategy`]; invariant under both
/// 3-cycles of the colours.
pub fn chi3_rule() -> LocalRule {
    LocalRule::from_values([[1, 0, 0], [1, 2, 1], [2, 2, 0]]).expect("valid table")
}

/// Rule shared by every layer of [`chi2_strategy`]; invariant under the
/// swap of colours 0 and 1.
pub fn chi2_rule() -> LocalRule {
    LocalRule::from_values([[2, 0, 0], [1, 2, 1], [1, 0, 2]]).expect("valid table")
}

fn rule(f: impl Fn(i64, i64) -> i64) -> LocalRule {
    LocalRule::from_fn(|l, r| Colour::from_mod(f(l.value() as i64, r.value() as i64)))
}

/// The three-player strategy `A = -B-C`, `B = -C-A-1`, `C = -A-B+1`, with
/// players `A, B, C` at layers 0, 1, 2.
pub fn algebraic_c3() -> CycleStrategy {
    CycleStrategy::new(
        3,
        vec![
            rule(|c, b| -b - c),
            rule(|a, c| -c - a - 1),
            rule(|b, a| -a - b + 1),
        ],
    )
    .expect("three rules")
}

/// Four players `A, B, C, D` with `A = D+B`, `B = -A-C`, `C = B-D`,
/// `D = C-A`.
pub fn algebraic_c4() -> CycleStrategy {
    CycleStrategy::new(
        4,
        vec![
            rule(|d, b| d + b),
            rule(|a, c| -a - c),
            rule(|b, d| b - d),
            rule(|c, a| c - a),
        ],
    )
    .expect("four rules")
}

/// Every layer plays `table`, except that the colours crossing the seam
/// between layers `n-1` and `0` are relabelled by `twist`: layer 0 reads its
/// left neighbour through `twist` and layer `n-1` reads its right neighbour
/// through `twist⁻¹`.
///
/// With an untwisted seam the symmetric tables of the two families lose on
/// every cycle; the twist is what makes the monodromy of the yellow rows a
/// genuine rotation (or transposition).
pub fn twisted_uniform(n: usize, table: LocalRule, twist: Perm3) -> Result<CycleStrategy> {
    if n < 3 {
        return Err(HatError::domain(format!("cycle length {n} is below 3")));
    }
    let inv = twist.inverse();
    let mut rules = vec![table; n];
    rules[0] = LocalRule::from_fn(|a, b| table.get(twist.apply(a), b));
    rules[n - 1] = LocalRule::from_fn(|a, c| table.get(a, inv.apply(c)));
    CycleStrategy::new(n, rules)
}

/// The three-yellow-edge family, winning exactly when `3 | n`.
pub fn chi3_strategy(n: usize) -> Result<CycleStrategy> {
    chi3_strategy_twisted(n, Rotation3::FORWARD)
}

pub fn chi3_strategy_twisted(n: usize, sigma: Rotation3) -> Result<CycleStrategy> {
    twisted_uniform(n, chi3_rule(), sigma.perm())
}

/// The two-yellow-edge family on even cycles, winning only for `n = 4`.
pub fn chi2_strategy(n: usize) -> Result<CycleStrategy> {
    if n % 2 == 1 {
        return Err(HatError::domain(format!("cycle length {n} is odd")));
    }
    if n < 4 {
        return Err(HatError::domain(format!("cycle length {n} is below 4")));
    }
    twisted_uniform(n, chi2_rule(), Perm3::SWAP01)
}

/// A winning strategy when one exists: the three-yellow family for `3 | n`,
/// the two-yellow family for `n = 4`, otherwise `None`. For `n = 4` the
/// all-blue [`algebraic_c4`] wins as well.
pub fn construct_winning(n: usize) -> Result<Option<CycleStrategy>> {
    if n < 3 {
        return Err(HatError::domain(format!("cycle length {n} is below 3")));
    }
    if n.is_multiple_of(3) {
        chi3_strategy(n).map(Some)
    } else if n == 4 {
        chi2_strategy(4).map(Some)
    } else {
        Ok(None)
    }
}
