//! Re-derives the fixtures whose payoffs are not printed anywhere: the SD
//! and DD exemplars, Jordan's mismatching game and the connected-dominance
//! game. Run with `cargo run -p prefgraph --example derive_fixtures`.

use prefgraph::analysis::{classify_2x2, strongly_connected_components, TwoByTwoClass};
use prefgraph::dominance::strictly_dominates;
use prefgraph::fixtures::fixture;
use prefgraph::game::Game;
use prefgraph::graph::build_preference_graph;
use prefgraph::reconstruction::{canonical_code, enumerate_preference_graphs};

/// Smallest integer 2x2 games realizing each strict class, by brute force
/// over payoffs in 0..4.
fn derive_2x2_class(target: TwoByTwoClass) -> Game {
    for code in 0..4u64.pow(8) {
        let mut digits = [0f64; 8];
        let mut c = code;
        for d in digits.iter_mut() {
            *d = (c % 4) as f64;
            c /= 4;
        }
        let u1 = vec![vec![digits[0], digits[1]], vec![digits[2], digits[3]]];
        let u2 = vec![vec![digits[4], digits[5]], vec![digits[6], digits[7]]];
        let g = Game::two_player(u1, u2).expect("2x2 shape");
        if classify_2x2(&g).expect("2x2 dims") == target {
            return g;
        }
    }
    unreachable!("payoffs in 0..4 realize every class")
}

/// Exhaustive search for a 2x3 game with a strongly connected preference
/// graph in which column 1 strictly dominates column 2. Player 1 payoffs
/// only need one bit per column (which row wins), player 2 payoffs are
/// orderings of each row.
fn derive_connected_dominance() -> Game {
    let perms: Vec<Vec<f64>> = {
        let base = [0, 1, 2];
        let mut all = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    if a != b && b != c && a != c {
                        all.push(vec![base[a] as f64, base[b] as f64, base[c] as f64]);
                    }
                }
            }
        }
        all
    };
    for bits in 0..8u32 {
        let u1: Vec<Vec<f64>> = vec![
            (0..3).map(|c| ((bits >> c) & 1) as f64).collect(),
            (0..3).map(|c| (1 - ((bits >> c) & 1)) as f64).collect(),
        ];
        for row0 in &perms {
            for row1 in &perms {
                let u2 = vec![row0.clone(), row1.clone()];
                let g = Game::two_player(u1.clone(), u2).expect("2x3 shape");
                if !strictly_dominates(&g, 1, 1, 2).expect("valid indices") {
                    continue;
                }
                let graph = build_preference_graph(&g);
                if strongly_connected_components(&graph).len() == 1 {
                    return g;
                }
            }
        }
    }
    unreachable!("a strongly connected dominated-column game exists (Fig-12 style)")
}

fn main() {
    for (name, class) in [
        ("sd", TwoByTwoClass::SD),
        ("dd", TwoByTwoClass::DD),
    ] {
        let derived = derive_2x2_class(class);
        let frozen = fixture(name).expect("static fixture").game;
        assert_eq!(classify_2x2(&frozen).unwrap(), class);
        println!("{name}: derived {:?} exemplar:\n{}", class, derived.to_json());
    }

    let derived = derive_connected_dominance();
    let frozen = fixture("connected_dominance").unwrap().game;
    assert!(strictly_dominates(&frozen, 1, 1, 2).unwrap());
    assert_eq!(
        strongly_connected_components(&build_preference_graph(&frozen)).len(),
        1
    );
    println!("connected_dominance: first hit of the search:\n{}", derived.to_json());

    // Jordan's game: the mismatch construction must land on the unique
    // 2x2x2 class with neither sink nor 4-cycle.
    let jordan = fixture("jordan").unwrap().game;
    let classes = enumerate_preference_graphs(&[2, 2, 2], |g| {
        g.sinks().is_empty() && !prefgraph::analysis::has_4cycle(g)
    })
    .expect("2x2x2 is within budget");
    assert_eq!(classes.len(), 1);
    assert_eq!(
        canonical_code(&classes[0]),
        canonical_code(&build_preference_graph(&jordan))
    );
    println!("jordan: mismatch construction matches the unique sink-free 4-cycle-free class");
}
