//! Canonical games frozen as goldens, plus seeded random-game generators.
//!
//! Fixtures whose payoffs are not printed anywhere (sd, dd, jordan,
//! connected_dominance) were constructed once and verified against their
//! stated graph properties; `examples/derive_fixtures.rs` re-derives them.

use crate::error::{Error, Result};
use crate::game::{Game, Player};
use rand::Rng;

/// Facts recomputed by the test suite every run; a fixture whose facts drift
/// is a regression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenFacts {
    /// Sink-equilibrium sizes in deterministic order (smallest profile index first).
    pub sink_sizes: Vec<usize>,
    /// Nodes of the preference graph with no incoming arc.
    pub source_count: usize,
    pub pne_count: usize,
    pub strict: bool,
    pub ordinal_potential: bool,
    pub weakly_acyclic: bool,
    pub brwa: bool,
    pub has_4cycle: bool,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub game: Game,
    pub expected: GoldenFacts,
}

pub const FIXTURE_NAMES: [&str; 11] = [
    "shapley",
    "inner_diamond",
    "berger_4x5",
    "mp",
    "co",
    "sd",
    "dd",
    "2x3_mp",
    "rps",
    "jordan",
    "connected_dominance",
];

fn two_player_named(
    names: [&str; 2],
    strategies: [&[&str]; 2],
    u1: Vec<Vec<f64>>,
    u2: Vec<Vec<f64>>,
) -> Game {
    let m1 = u1.len();
    let m2 = u1[0].len();
    let players = vec![
        Player {
            name: names[0].to_string(),
            strategies: strategies[0].iter().map(|s| s.to_string()).collect(),
        },
        Player {
            name: names[1].to_string(),
            strategies: strategies[1].iter().map(|s| s.to_string()).collect(),
        },
    ];
    let mut payoffs = Vec::with_capacity(m1 * m2 * 2);
    for s in 0..m1 {
        for t in 0..m2 {
            payoffs.push(u1[s][t]);
            payoffs.push(u2[s][t]);
        }
    }
    Game::new(players, payoffs).expect("fixture construction is static")
}

fn neg(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.iter().map(|&x| -x).collect()).collect()
}

fn rows(m: &[&[f64]]) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.to_vec()).collect()
}

fn facts(
    sink_sizes: &[usize],
    source_count: usize,
    pne_count: usize,
    ordinal_potential: bool,
    weakly_acyclic: bool,
    brwa: bool,
    has_4cycle: bool,
) -> GoldenFacts {
    GoldenFacts {
        sink_sizes: sink_sizes.to_vec(),
        source_count,
        pne_count,
        strict: true,
        ordinal_potential,
        weakly_acyclic,
        brwa,
        has_4cycle,
    }
}

/// Looks up a canonical game by name. Unknown names are an input error.
pub fn fixture(name: &str) -> Result<Fixture> {
    let (game, expected) = match name {
        // Shapley's 3x3 game: three sources and a 6-cycle sink equilibrium.
        "shapley" => (
            two_player_named(
                ["P1", "P2"],
                [&["a", "b", "c"], &["x", "y", "z"]],
                rows(&[&[0., 2., 1.], &[1., 0., 2.], &[2., 1., 0.]]),
                rows(&[&[0., 1., 2.], &[2., 0., 1.], &[1., 2., 0.]]),
            ),
            facts(&[6], 3, 0, false, false, false, false),
        ),
        // Zero-sum game whose best-response subgraph has a surplus 4-cycle
        // sink equilibrium next to the unique PNE.
        "inner_diamond" => {
            let u1 = rows(&[&[-3., -2., -1.], &[-4., 0., -6.], &[-5., -6., 0.]]);
            let u2 = neg(&u1);
            (
                two_player_named(["P1", "P2"], [&["a", "b", "c"], &["x", "y", "z"]], u1, u2),
                facts(&[1], 0, 1, false, false, true, true),
            )
        }
        // Berger's 4x5 quasi-supermodular game with a preference cycle.
        "berger_4x5" => (
            two_player_named(
                ["P1", "P2"],
                [&["a", "b", "c", "d"], &["v", "w", "x", "y", "z"]],
                rows(&[
                    &[3., 3., 2., 2., 0.],
                    &[2., 2., 3., 3., 1.],
                    &[1., 0., 0., 0., 2.],
                    &[0., 1., 1., 1., 3.],
                ]),
                rows(&[
                    &[4., 3., 2., 1., 0.],
                    &[2., 4., 1., 0., 3.],
                    &[2., 4., 1., 0., 3.],
                    &[0., 1., 2., 3., 4.],
                ]),
            ),
            facts(&[1, 1], 3, 2, false, true, true, false),
        ),
        // Matching Pennies with +-1 payoffs: the 4-cycle.
        "mp" => {
            let u1 = rows(&[&[1., -1.], &[-1., 1.]]);
            let u2 = neg(&u1);
            (
                two_player_named(["P1", "P2"], [&["H", "T"], &["H", "T"]], u1, u2),
                facts(&[4], 0, 0, false, false, false, true),
            )
        }
        // Coordination: two PNEs, two sources.
        "co" => (
            two_player_named(
                ["P1", "P2"],
                [&["A", "B"], &["A", "B"]],
                rows(&[&[1., 0.], &[0., 1.]]),
                rows(&[&[1., 0.], &[0., 1.]]),
            ),
            facts(&[1, 1], 2, 2, true, true, true, false),
        ),
        // Single-Dominance: only the row player has a dominant strategy.
        "sd" => (
            two_player_named(
                ["P1", "P2"],
                [&["a", "b"], &["x", "y"]],
                rows(&[&[3., 2.], &[1., 0.]]),
                rows(&[&[1., 0.], &[0., 1.]]),
            ),
            facts(&[1], 1, 1, true, true, true, false),
        ),
        // Double-Dominance: both players have a dominant strategy.
        "dd" => (
            two_player_named(
                ["P1", "P2"],
                [&["a", "b"], &["x", "y"]],
                rows(&[&[3., 2.], &[1., 0.]]),
                rows(&[&[1., 0.], &[1., 0.]]),
            ),
            facts(&[1], 1, 1, true, true, true, false),
        ),
        // The strongly connected 2x3 MP zero-sum generator. Player 1 has the
        // three strategies; the equilibrium is ((0,1/3,2/3),(2/3,1/3)).
        "2x3_mp" => {
            let u1 = rows(&[&[0., 4.], &[1., 3.], &[2., 1.]]);
            let u2 = neg(&u1);
            (
                two_player_named(["P1", "P2"], [&["a", "b", "c"], &["x", "y"]], u1, u2),
                facts(&[6], 0, 0, false, false, false, true),
            )
        }
        // Rock-Paper-Scissors as a full two-player symmetric zero-sum game.
        "rps" => {
            let u1 = rows(&[&[0., -1., 1.], &[1., 0., -1.], &[-1., 1., 0.]]);
            let u2 = neg(&u1);
            (
                two_player_named(
                    ["P1", "P2"],
                    [
                        &["Rock", "Paper", "Scissors"],
                        &["Rock", "Paper", "Scissors"],
                    ],
                    u1,
                    u2,
                ),
                facts(&[9], 0, 0, false, false, false, true),
            )
        }
        // Jordan's 2x2x2 game: each player scores 1 for mismatching the
        // player to their left. Two sources and a 6-cycle sink equilibrium.
        "jordan" => {
            let players = (0..3)
                .map(|i| Player {
                    name: format!("P{}", i + 1),
                    strategies: vec!["H".to_string(), "T".to_string()],
                })
                .collect();
            let mut payoffs = Vec::with_capacity(8 * 3);
            for a in 0..2usize {
                for b in 0..2usize {
                    for c in 0..2usize {
                        let p = [a, b, c];
                        for i in 0..3 {
                            let left = p[(i + 2) % 3];
                            payoffs.push(if p[i] != left { 1.0 } else { 0.0 });
                        }
                    }
                }
            }
            (
                Game::new(players, payoffs).expect("fixture construction is static"),
                facts(&[6], 2, 0, false, false, false, false),
            )
        }
        // A strongly connected 2x3 game where the second column strictly
        // dominates the third: dominated strategies can live inside a sink
        // equilibrium.
        "connected_dominance" => (
            two_player_named(
                ["P1", "P2"],
                [&["a", "b"], &["x", "y", "z"]],
                rows(&[&[1., 0., 0.], &[0., 1., 1.]]),
                rows(&[&[0., 2., 1.], &[2., 1., 0.]]),
            ),
            facts(&[6], 0, 0, false, false, false, true),
        ),
        other => {
            return Err(Error::input(format!(
                "unknown fixture {other:?}; known: {}",
                FIXTURE_NAMES.join(", ")
            )))
        }
    };
    Ok(Fixture {
        name: FIXTURE_NAMES
            .iter()
            .find(|&&n| n == name)
            .expect("name checked above"),
        game,
        expected,
    })
}

pub fn all_fixtures() -> Vec<Fixture> {
    FIXTURE_NAMES
        .iter()
        .map(|n| fixture(n).expect("static fixture"))
        .collect()
}

/// Random game with i.i.d. uniform payoffs in [0,1); ties have probability
/// zero, so these are almost surely strict.
pub fn random_game<R: Rng>(dims: &[usize], rng: &mut R) -> Game {
    let players = dims
        .iter()
        .enumerate()
        .map(|(i, &m)| Player {
            name: format!("P{}", i + 1),
            strategies: (0..m).map(|s| format!("s{s}")).collect(),
        })
        .collect();
    let count: usize = dims.iter().product::<usize>() * dims.len();
    let payoffs = (0..count).map(|_| rng.gen::<f64>()).collect();
    Game::new(players, payoffs).expect("dims validated by construction")
}

/// Random game, resampled until strict (a single draw almost always is).
pub fn random_strict_game<R: Rng>(dims: &[usize], rng: &mut R) -> Game {
    loop {
        let g = random_game(dims, rng);
        if crate::graph::is_strict(&g) {
            return g;
        }
    }
}

/// Random exactly-zero-sum two-player game: u2 = -u1 entrywise.
pub fn random_zero_sum_game<R: Rng>(dims: [usize; 2], rng: &mut R) -> Game {
    let u1: Vec<Vec<f64>> = (0..dims[0])
        .map(|_| (0..dims[1]).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let u2 = neg(&u1);
    Game::two_player(u1, u2).expect("dims validated by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fixture_is_input_error() {
        assert!(fixture("nope").is_err());
    }

    #[test]
    fn fixtures_are_strict_and_well_formed() {
        for f in all_fixtures() {
            assert!(crate::graph::is_strict(&f.game), "{} not strict", f.name);
            assert!(f.expected.strict);
        }
    }

    #[test]
    fn zero_sum_fixtures() {
        for name in ["inner_diamond", "mp", "2x3_mp", "rps"] {
            assert!(fixture(name).unwrap().game.is_zero_sum(), "{name}");
        }
        assert!(!fixture("co").unwrap().game.is_zero_sum());
    }

    #[test]
    fn connected_dominance_has_its_defining_properties() {
        let f = fixture("connected_dominance").unwrap();
        assert!(crate::dominance::strictly_dominates(&f.game, 1, 1, 2).unwrap());
        let g = crate::graph::build_preference_graph(&f.game);
        let sccs = crate::analysis::strongly_connected_components(&g);
        assert_eq!(sccs.len(), 1, "preference graph must be strongly connected");
    }

    #[test]
    fn random_zero_sum_is_zero_sum() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert!(random_zero_sum_game([3, 4], &mut rng).is_zero_sum());
        }
    }
}
