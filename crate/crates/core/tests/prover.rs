mod common;

use common::*;
use hatcycle_core::prover::{
    colour_structures, search, table_code, CandidateRecord, Outcome, WitnessSource,
    DEFAULT_TABLE_CHECKS,
};
use hatcycle_core::structure::Perm3;
use hatcycle_core::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn assert_defeats(f: &CycleStrategy, w: &Assignment) {
    let raw = raw_of(f);
    assert_eq!(naive_correct(&raw, &w.values()), 0);
    if f.n() <= 10 {
        assert!(naive_defeats(&raw).contains(&w.values()));
    }
}

#[test]
fn all_blue_refuter_on_random_latin_strategies() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 5..=12 {
        for _ in 0..150 {
            let f = strategy(&random_latin_raw(&mut rng, n));
            let w = defeat_all_blue(&f).unwrap();
            assert_defeats(&f, &w);
        }
    }
}

#[test]
fn all_blue_refuter_guards() {
    assert!(matches!(
        defeat_all_blue(&algebraic_c4()),
        Err(HatError::Precondition(_))
    ));
    assert!(matches!(
        defeat_all_blue(&chi3_strategy(5).unwrap()),
        Err(HatError::Precondition(_))
    ));
    let zero = CycleStrategy::uniform(5, LocalRule::constant(Colour::new(0).unwrap())).unwrap();
    assert!(matches!(
        defeat_all_blue(&zero),
        Err(HatError::Precondition(_))
    ));
}

#[test]
fn chi3_refuter() {
    for n in [4, 5, 7, 8, 10, 11, 13, 14, 16] {
        let f = chi3_strategy(n).unwrap();
        assert_defeats(&f, &refute_chi3(&f).unwrap());
    }
    assert_eq!(
        refute_chi3(&chi3_strategy(5).unwrap()).unwrap().values(),
        vec![0, 1, 2, 0, 1]
    );
    assert!(matches!(
        refute_chi3(&chi3_strategy(6).unwrap()),
        Err(HatError::Precondition(_))
    ));
}

#[test]
fn chi2_refuter() {
    for n in (6..=20).step_by(2) {
        let f = chi2_strategy(n).unwrap();
        let w = refute_chi2(&f).unwrap();
        assert_defeats(&f, &w);
        let col = colour_edges(&f).unwrap();
        for k in 0..n {
            let e = Edge::new(k, w.colours()[k], w.colours()[(k + 1) % n]);
            assert_eq!(col.colour_of(e), EdgeColour::Blue);
        }
    }
    assert_eq!(
        refute_chi2(&chi2_strategy(8).unwrap()).unwrap().values(),
        vec![2, 2, 0, 2, 2, 0, 2, 1]
    );
    assert!(matches!(
        refute_chi2(&chi2_strategy(4).unwrap()),
        Err(HatError::Precondition(_))
    ));
    // odd cycles: the two-yellow tables twisted by a transposition
    for n in [5, 7, 9] {
        let f = constructors::twisted_uniform(n, constructors::chi2_rule(), Perm3::SWAP01).unwrap();
        assert_defeats(&f, &refute_chi2(&f).unwrap());
    }
}

#[test]
fn refuters_survive_relabelling() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..40 {
        let n = 7;
        let iso = random_iso(&mut rng, n);
        let f = apply_iso(&chi3_strategy(n).unwrap(), &iso).unwrap();
        assert_defeats(&f, &refute_chi3(&f).unwrap());
        let iso = random_iso(&mut rng, 8);
        let g = apply_iso(&chi2_strategy(8).unwrap(), &iso).unwrap();
        assert_defeats(&g, &refute_chi2(&g).unwrap());
    }
}

#[test]
fn structure_enumeration() {
    let all = enumerate_colour_structures(5).unwrap();
    let chi3: Vec<_> = all.iter().filter(|s| s.chi == 3).collect();
    assert_eq!(chi3.len(), 2 * 32);
    assert!(chi3.iter().all(|s| s.monodromy.fixed_points() == 0));
    let chi2: Vec<_> = all.iter().filter(|s| s.chi == 2).collect();
    assert_eq!(chi2.len(), 1);
    assert_eq!(chi2[0].monodromy, Perm3::SWAP01);
    let chi0: Vec<_> = all.iter().filter(|s| s.chi == 0).collect();
    assert_eq!(chi0.len(), 1);
    assert!(all.iter().all(|s| s.chi != 1));
    // fixed-point monodromies close a yellow path of period n
    for s in colour_structures(5, 3).iter().filter(|s| s.self_refuting) {
        assert!(s.monodromy.fixed_points() > 0);
    }
}

fn certificate(n: usize) -> Certificate {
    prove_nonexistence(n, ProverBudget::default()).unwrap()
}

#[test]
fn nonexistence_certificates() {
    for n in [5, 7, 8] {
        let cert = certificate(n);
        assert_eq!(cert.conclusion, Conclusion::NoWinningStrategy);
        check_certificate(&cert).unwrap();
        assert!(!cert.candidates.is_empty());
        assert_eq!(cert.lemma_dependencies.len(), 4);
        let verified = cert.stage("verification").unwrap();
        assert_eq!(
            verified.count("refuted"),
            Some(cert.candidates.len() as u64)
        );
        for record in &cert.candidates {
            let f = record.strategy().unwrap();
            match &record.outcome {
                Outcome::Defeated { witness, source } => {
                    assert_eq!(naive_correct(&raw_of(&f), witness), 0);
                    assert_ne!(*source, WitnessSource::Transfer);
                }
                Outcome::Winning => panic!("winning candidate at n = {n}"),
            }
        }
    }
}

#[test]
fn certificate_json_roundtrip_and_tampering() {
    let cert = certificate(5);
    let text = serde_json::to_string(&cert).unwrap();
    let back: Certificate = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cert);

    let mut forged = cert.clone();
    if let Outcome::Defeated { witness, .. } = &mut forged.candidates[0].outcome {
        witness[0] = (witness[0] + 1) % 3;
    }
    assert!(check_certificate(&forged).is_err());

    let mut dropped = cert.clone();
    dropped.candidates.pop();
    assert!(check_certificate(&dropped).is_err());

    let mut swapped = cert;
    swapped.candidates[0] = CandidateRecord {
        tables: vec![table_code(&LocalRule::from_id(0)); 5],
        ..swapped.candidates[0].clone()
    };
    assert!(check_certificate(&swapped).is_err());
}

#[test]
fn unguarded_search_finds_known_winners() {
    for n in [4, 6] {
        let cert = search(n, ProverBudget::default()).unwrap();
        match &cert.conclusion {
            Conclusion::WinningFound { strategy } => assert!(verify(strategy).is_winning()),
            other => panic!("n = {n}: {other:?}"),
        }
        check_certificate(&cert).unwrap();
    }
    // at n = 6 the winners are exactly the three-yellow ones
    let cert = search(6, ProverBudget::default()).unwrap();
    let winners: Vec<&CandidateRecord> = cert
        .candidates
        .iter()
        .filter(|c| c.outcome == Outcome::Winning)
        .collect();
    assert!(winners.iter().all(|c| c.structure.starts_with("chi=3")));
    assert!(winners
        .iter()
        .any(|c| c.strategy().unwrap() == chi3_strategy(6).unwrap()));
}

#[test]
fn prover_guards_and_budget() {
    assert!(matches!(
        prove_nonexistence(6, ProverBudget::default()),
        Err(HatError::Precondition(_))
    ));
    assert!(matches!(
        prove_nonexistence(4, ProverBudget::default()),
        Err(HatError::Precondition(_))
    ));
    assert!(matches!(
        prove_nonexistence(11, ProverBudget::default()),
        Err(HatError::Precondition(_))
    ));
    let small = ProverBudget {
        table_checks: 100,
        ..ProverBudget::default()
    };
    let cert = prove_nonexistence(7, small).unwrap();
    assert!(matches!(cert.conclusion, Conclusion::BudgetExceeded { .. }));
    assert_eq!(ProverBudget::default().table_checks, DEFAULT_TABLE_CHECKS);
}

#[test]
fn unbalanced_strategies_lose() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut seen = 0;
    while seen < 1000 {
        let n = 3 + seen % 5;
        let f = strategy(&random_raw(&mut rng, n));
        if colour_edges(&f).is_err() {
            assert!(!verify(&f).is_winning());
            seen += 1;
        }
    }
}
