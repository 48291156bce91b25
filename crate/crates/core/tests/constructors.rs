mod common;

use common::*;
use hatcycle_core::structure::Perm3;
use hatcycle_core::*;

fn defeats_of(f: &CycleStrategy) -> Vec<Vec<u8>> {
    naive_defeats(&raw_of(f))
}

#[test]
fn algebraic_strategies_cover_every_assignment() {
    let c3 = raw_of(&algebraic_c3());
    assert!(all_assignments(3).all(|g| naive_correct(&c3, &g) >= 1));
    let c4 = raw_of(&algebraic_c4());
    assert!(all_assignments(4).all(|g| naive_correct(&c4, &g) >= 1));
}

#[test]
fn algebraic_formulas() {
    let f = algebraic_c3();
    for g in all_assignments(3) {
        let [a, b, cc] = [g[0] as i64, g[1] as i64, g[2] as i64];
        let col = |x: i64| Colour::from_mod(x);
        let guesses = [
            f.guess(0, col(cc), col(b)),
            f.guess(1, col(a), col(cc)),
            f.guess(2, col(b), col(a)),
        ];
        assert_eq!(guesses, [col(-b - cc), col(-cc - a - 1), col(-a - b + 1)]);
    }
    let f = algebraic_c4();
    let col = |x: i64| Colour::from_mod(x);
    assert_eq!(f.guess(1, col(2), col(2)), col(-4));
    assert_eq!(f.guess(2, col(1), col(2)), col(-1));
    assert_eq!(f.guess(3, col(2), col(0)), col(2));
}

#[test]
fn chi3_family_wins_iff_three_divides_n() {
    for n in 3..=20 {
        let f = chi3_strategy(n).unwrap();
        assert_eq!(verify(&f).is_winning(), n % 3 == 0, "n = {n}");
    }
}

#[test]
fn chi3_defeats_are_three_rotations() {
    assert_eq!(
        defeats_of(&chi3_strategy(5).unwrap()),
        vec![
            vec![0, 1, 2, 0, 1],
            vec![1, 2, 0, 1, 2],
            vec![2, 0, 1, 2, 0]
        ]
    );
    assert_eq!(
        defeats_of(&chi3_strategy(4).unwrap()),
        vec![vec![0, 2, 1, 0], vec![1, 0, 2, 1], vec![2, 1, 0, 2]]
    );
    assert_eq!(
        defeats_of(&chi3_strategy(7).unwrap())[0],
        vec![0, 2, 1, 0, 2, 1, 0]
    );
    for n in [8, 10, 11] {
        assert_eq!(defeats_of(&chi3_strategy(n).unwrap()).len(), 3);
    }
}

#[test]
fn untwisted_tables_lose() {
    // the same table on every layer, without the relabelling at the seam
    let f = CycleStrategy::uniform(6, constructors::chi3_rule()).unwrap();
    assert_eq!(defeats_of(&f).len(), 9);
    let f = CycleStrategy::uniform(4, constructors::chi2_rule()).unwrap();
    assert!(!verify(&f).is_winning());
}

#[test]
fn chi2_family() {
    assert!(verify(&chi2_strategy(4).unwrap()).is_winning());
    let expected = [
        (6, 16, vec![0, 2, 1, 2, 0, 2]),
        (8, 32, vec![0, 2, 1, 2, 2, 0, 2, 2]),
    ];
    for (n, count, first) in expected {
        let d = defeats_of(&chi2_strategy(n).unwrap());
        assert_eq!(d.len(), count);
        assert_eq!(d[0], first);
    }
    assert_eq!(defeats_of(&chi2_strategy(10).unwrap()).len(), 64);
    assert!(matches!(chi2_strategy(5), Err(HatError::Domain(_))));
    for n in (6..=20).step_by(2) {
        assert!(!verify(&chi2_strategy(n).unwrap()).is_winning());
    }
}

#[test]
fn chi3_red_edges_turn_backwards() {
    // with yellow rows u1, u2, u3 = 0, 1, 2 the red edges are u1u3, u2u1, u3u2
    let col = colour_edges(&chi3_strategy(10).unwrap()).unwrap();
    for k in 0..9 {
        let red: Vec<(u8, u8)> = Edge::boundary(k)
            .filter(|&e| col.colour_of(e) == EdgeColour::Red)
            .map(|e| (e.left.value(), e.right.value()))
            .collect();
        assert_eq!(red, [(0, 2), (1, 0), (2, 1)]);
    }
}

#[test]
fn chi2_red_edges_cross_the_yellow_rows() {
    let col = colour_edges(&chi2_strategy(10).unwrap()).unwrap();
    for k in 0..10 {
        let yellow: Vec<Edge> = Edge::boundary(k)
            .filter(|&e| col.colour_of(e) == EdgeColour::Yellow)
            .collect();
        let red: Vec<Edge> = Edge::boundary(k)
            .filter(|&e| col.colour_of(e) == EdgeColour::Red)
            .collect();
        assert_eq!((yellow.len(), red.len()), (2, 2));
        for r in red {
            let crossing = yellow.iter().any(|y| y.left == r.left)
                && yellow.iter().any(|y| y.right == r.right);
            assert!(crossing);
            assert!(!yellow.contains(&r));
        }
    }
}

#[test]
fn dispatcher_wins_exactly_when_possible_up_to_99() {
    for n in 3..=99 {
        let f = construct_winning(n).unwrap();
        assert_eq!(f.is_some(), n % 3 == 0 || n == 4, "n = {n}");
        if let Some(f) = f {
            assert!(verify(&f).is_winning());
            if n <= 12 {
                assert_eq!(brute_force_defeats(&f).unwrap().count, 0);
            }
        }
    }
}

#[test]
fn twisting_by_a_fixed_point_loses() {
    for n in [6, 9] {
        let f =
            constructors::twisted_uniform(n, constructors::chi3_rule(), Perm3::IDENTITY).unwrap();
        assert!(!verify(&f).is_winning());
    }
}
