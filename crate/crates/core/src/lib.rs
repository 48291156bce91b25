//! Three-colour hat guessing on cycles: exact verification, constructions,
//! structural classification and small-size nonexistence proofs.

pub mod constructors;
pub mod error;
pub mod game;
pub mod general;
pub mod prover;
pub mod structure;
pub mod verifier;

pub use constructors::{
    algebraic_c3, algebraic_c4, chi2_strategy, chi3_strategy, chi3_strategy_twisted,
    construct_winning, Rotation3,
};
pub use error::{HatError, Result};
pub use game::{Assignment, Colour, CycleStrategy, Edge, LocalRule, PathSegment, RULE_COUNT};
pub use general::{
    game_value_bruteforce, general_correct_count, min_over_assignments, star_graph,
    GeneralStrategy, LayeredDigraph, Selector, VisibilityGame,
};
pub use prover::{
    check_certificate, defeat_all_blue, enumerate_colour_structures, prove_nonexistence,
    refute_chi2, refute_chi3, Certificate, ColourStructure, Conclusion, ProverBudget,
};
pub use structure::{
    apply_iso, characteristic, colour_edges, ell, find_iso, find_iso_in, structure_diagnostics,
    ChiResult, Direction, EdgeColour, EdgeColouring, IsoGroup, NotBalanced, Perm3, StrategyIso,
    StructureViolation,
};
pub use verifier::{
    boundary_transfer, brute_force_defeats, brute_force_defeats_capped, defeat_count,
    random_strategy_win_probability, verify, win_probability_fixed, BruteForceDefeats, MonteCarlo,
    TransferMatrix, Verdict,
};
