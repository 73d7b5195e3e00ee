//! Strict dominance by pure strategies, iterated elimination and dominance
//! solvability.

use crate::error::{Error, Result};
use crate::game::{Game, Profile};
use serde::Serialize;

/// One elimination: `eliminated` was strictly dominated by `dominating` in
/// the game restricted to the strategies surviving at that step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EliminationStep {
    pub player: usize,
    pub eliminated: usize,
    pub dominating: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EliminationTrace {
    pub steps: Vec<EliminationStep>,
    /// Surviving strategy indices per player, ascending.
    pub surviving: Vec<Vec<usize>>,
}

impl EliminationTrace {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Wire<'a> {
            schema_version: u32,
            steps: &'a [EliminationStep],
            surviving: &'a [Vec<usize>],
        }
        serde_json::to_string_pretty(&Wire {
            schema_version: 1,
            steps: &self.steps,
            surviving: &self.surviving,
        })
        .expect("trace serialization cannot fail")
    }
}

/// Scan order for picking the next elimination; the result subgame does not
/// depend on it (checked by the property suite), only the trace does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EliminationOrder {
    LowestFirst,
    HighestFirst,
}

/// Whether strategy s strictly dominates t for player i: strictly higher
/// payoff against every combination of opponent strategies.
pub fn strictly_dominates(game: &Game, i: usize, s: usize, t: usize) -> Result<bool> {
    if i >= game.num_players() {
        return Err(Error::input(format!("player {i} out of range")));
    }
    let m = game.dims()[i];
    if s >= m || t >= m {
        return Err(Error::input(format!("strategy out of range for player {i}")));
    }
    if s == t {
        return Err(Error::input("a strategy cannot dominate itself"));
    }
    let g = crate::graph::PrefGraph::new(
        crate::graph::GraphKind::Preference,
        game.dims().to_vec(),
        Vec::new(),
    );
    Ok(g.rows_of_player(i)
        .into_iter()
        .all(|row| game.utility_by_index(row[s], i) > game.utility_by_index(row[t], i)))
}

fn dominates_within(
    game: &Game,
    surviving: &[Vec<usize>],
    i: usize,
    s: usize,
    t: usize,
) -> bool {
    // iterate opponent profiles restricted to the surviving strategies
    let n = game.num_players();
    let mut counter = vec![0usize; n];
    loop {
        let mut p: Vec<usize> = (0..n).map(|j| surviving[j][counter[j]]).collect();
        p[i] = s;
        let us = game.utility(&Profile(p.clone()), i).expect("in range");
        p[i] = t;
        let ut = game.utility(&Profile(p), i).expect("in range");
        if us <= ut {
            return false;
        }
        let mut k = n;
        loop {
            if k == 0 {
                return true;
            }
            k -= 1;
            if k == i {
                continue;
            }
            counter[k] += 1;
            if counter[k] < surviving[k].len() {
                break;
            }
            counter[k] = 0;
        }
    }
}

/// Repeatedly removes a strictly dominated strategy until none remains.
/// Tie-breaking picks the lowest player index, then the lowest strategy
/// index (and the lowest dominating strategy), so traces are deterministic.
pub fn iterated_elimination(game: &Game) -> EliminationTrace {
    iterated_elimination_ordered(game, EliminationOrder::LowestFirst)
}

pub fn iterated_elimination_ordered(game: &Game, order: EliminationOrder) -> EliminationTrace {
    let n = game.num_players();
    let mut surviving: Vec<Vec<usize>> = game.dims().iter().map(|&m| (0..m).collect()).collect();
    let mut steps = Vec::new();
    'outer: loop {
        let players: Vec<usize> = match order {
            EliminationOrder::LowestFirst => (0..n).collect(),
            EliminationOrder::HighestFirst => (0..n).rev().collect(),
        };
        for i in players {
            if surviving[i].len() == 1 {
                continue;
            }
            let mut candidates = surviving[i].clone();
            if order == EliminationOrder::HighestFirst {
                candidates.reverse();
            }
            for &t in &candidates {
                for &s in &candidates {
                    if s == t {
                        continue;
                    }
                    if dominates_within(game, &surviving, i, s, t) {
                        surviving[i].retain(|&x| x != t);
                        steps.push(EliminationStep {
                            player: i,
                            eliminated: t,
                            dominating: s,
                        });
                        continue 'outer;
                    }
                }
            }
        }
        return EliminationTrace { steps, surviving };
    }
}

/// The dominance solution: the unique surviving profile of iterated
/// elimination, if only one survives. Such a profile is always a PNE.
pub fn is_dominance_solvable(game: &Game) -> Option<Profile> {
    let trace = iterated_elimination(game);
    if trace.surviving.iter().all(|s| s.len() == 1) {
        let p = Profile(trace.surviving.iter().map(|s| s[0]).collect());
        debug_assert!(crate::analysis::pure_nash(game).contains(&p));
        Some(p)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;

    fn game(name: &str) -> Game {
        fixture(name).unwrap().game
    }

    #[test]
    fn connected_dominance_column_relation() {
        let g = game("connected_dominance");
        assert!(strictly_dominates(&g, 1, 1, 2).unwrap());
        assert!(!strictly_dominates(&g, 1, 2, 1).unwrap());
        assert!(strictly_dominates(&g, 1, 1, 1).is_err());
        assert!(strictly_dominates(&g, 2, 0, 1).is_err());
    }

    #[test]
    fn shapley_has_no_dominance_at_all() {
        let g = game("shapley");
        for i in 0..2 {
            for s in 0..3 {
                for t in 0..3 {
                    if s != t {
                        assert!(!strictly_dominates(&g, i, s, t).unwrap());
                    }
                }
            }
        }
        let trace = iterated_elimination(&g);
        assert!(trace.steps.is_empty());
        assert_eq!(trace.surviving, vec![vec![0, 1, 2], vec![0, 1, 2]]);
    }

    #[test]
    fn sd_class_game_solves_to_single_profile() {
        let trace = iterated_elimination(&game("sd"));
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.surviving, vec![vec![0], vec![0]]);
        assert_eq!(is_dominance_solvable(&game("sd")), Some(Profile(vec![0, 0])));
    }

    #[test]
    fn dd_solves_and_mp_co_do_not() {
        assert_eq!(is_dominance_solvable(&game("dd")), Some(Profile(vec![0, 0])));
        assert_eq!(is_dominance_solvable(&game("mp")), None);
        assert!(iterated_elimination(&game("co")).steps.is_empty());
    }

    #[test]
    fn dominated_strategy_inside_a_sink_equilibrium() {
        // the connected-dominance game is one strongly connected component,
        // yet column 2 is strictly dominated
        let g = game("connected_dominance");
        let graph = crate::graph::build_preference_graph(&g);
        assert_eq!(crate::analysis::strongly_connected_components(&graph).len(), 1);
        let trace = iterated_elimination(&g);
        assert!(trace.steps.iter().any(|s| s.player == 1 && s.eliminated == 2));
    }

    #[test]
    fn elimination_order_does_not_change_survivors() {
        for name in ["sd", "dd", "connected_dominance", "berger_4x5"] {
            let g = game(name);
            let a = iterated_elimination_ordered(&g, EliminationOrder::LowestFirst);
            let b = iterated_elimination_ordered(&g, EliminationOrder::HighestFirst);
            assert_eq!(a.surviving, b.surviving, "{name}");
        }
    }

    #[test]
    fn solution_is_a_pure_nash_equilibrium() {
        for name in ["sd", "dd"] {
            let g = game(name);
            let p = is_dominance_solvable(&g).unwrap();
            assert!(crate::analysis::pure_nash(&g).contains(&p));
        }
    }
}
