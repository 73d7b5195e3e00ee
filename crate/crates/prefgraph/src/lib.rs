//! Preference graphs of finite normal-form games.
//!
//! A preference graph has the game's strategy profiles as nodes and an arc
//! between profiles differing in one player's strategy, oriented toward
//! that player's higher payoff. This crate builds these graphs and their
//! weighted, reduced, best-response and symmetric variants, computes sink
//! equilibria and game-class memberships, recognizes unlabeled digraphs as
//! preference graphs, and simulates fictitious play, the replicator dynamic
//! and Markov game dynamics.

pub mod analysis;
pub mod dominance;
pub mod dynamics;
pub mod equivalence;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod graph;
pub mod reconstruction;

pub use analysis::{
    classify, classify_2x2, find_4cycles, is_brwa, is_ordinal_potential, is_weakly_acyclic,
    pure_nash, sink_equilibria, Classification, SinkEquilibrium, TwoByTwoClass,
};
pub use dominance::{is_dominance_solvable, iterated_elimination, strictly_dominates};
pub use dynamics::{
    absorption_distribution, fictitious_play, markov_chain, random_walk, replicator_field,
    replicator_integrate, stationary_distributions, FPTrace, MarkovChain, MarkovKind, TieRule,
    Trajectory,
};
pub use equivalence::{
    affine_equivalent, ordinal_equivalent, preference_equivalent, preference_isomorphic,
    strategic_equivalent, EquivalenceReport,
};
pub use error::{Error, Result};
pub use fixtures::{fixture, Fixture, GoldenFacts, FIXTURE_NAMES};
pub use game::{Game, MixedProfile, Player, Profile};
pub use graph::{
    build_best_response_graph, build_preference_graph, build_reduced_graph, is_strict,
    node_and_arc_counts, symmetric_preference_graph, GraphKind, PrefGraph, SymmetricGraph,
};
pub use reconstruction::{
    enumerate_preference_graphs, recognize, verify_uniqueness_lemmas, Labeling, UnlabeledDigraph,
};
