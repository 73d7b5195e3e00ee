//! The four equivalences between games on identical player and strategy
//! sets: affine, strategic, ordinal and preference. Affine is the finest and
//! preference the coarsest; strategic and ordinal sit between them on
//! incomparable axes (strategic restricts to comparable pairs, ordinal to
//! pure profiles).

use crate::error::{Error, Result};
use crate::game::Game;
use crate::graph::PrefGraph;
use serde::Serialize;

const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub affine: bool,
    pub strategic: bool,
    pub ordinal: bool,
    pub preference: bool,
}

impl EquivalenceReport {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Wire {
            schema_version: u32,
            affine: bool,
            strategic: bool,
            ordinal: bool,
            preference: bool,
        }
        serde_json::to_string_pretty(&Wire {
            schema_version: 1,
            affine: self.affine,
            strategic: self.strategic,
            ordinal: self.ordinal,
            preference: self.preference,
        })
        .expect("report serialization cannot fail")
    }
}

fn check_same_dims(u: &Game, v: &Game) -> Result<()> {
    if u.dims() != v.dims() {
        return Err(Error::input(format!(
            "games have different dims: {:?} vs {:?}",
            u.dims(),
            v.dims()
        )));
    }
    Ok(())
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * 1.0f64.max(a.abs()).max(b.abs())
}

/// Pairs (p, q) of i-comparable profile indices with q ranging over the
/// later row positions, visiting each unordered pair once.
fn comparable_pairs(dims: &[usize]) -> Vec<(usize, usize, usize)> {
    let g = PrefGraph::new(crate::graph::GraphKind::Preference, dims.to_vec(), Vec::new());
    let mut pairs = Vec::new();
    for i in 0..dims.len() {
        for row in g.rows_of_player(i) {
            for a in 0..row.len() {
                for b in a + 1..row.len() {
                    pairs.push((i, row[a], row[b]));
                }
            }
        }
    }
    pairs
}

/// Same sign of payoff difference on every comparable pair; equivalently,
/// equal preference graphs.
pub fn preference_equivalent(u: &Game, v: &Game) -> Result<bool> {
    check_same_dims(u, v)?;
    for (i, p, q) in comparable_pairs(u.dims()) {
        let du = u.utility_by_index(q, i) - u.utility_by_index(p, i);
        let dv = v.utility_by_index(q, i) - v.utility_by_index(p, i);
        if du.signum() != dv.signum() && !(du == 0.0 && dv == 0.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Payoff differences on comparable pairs agree up to one positive constant
/// per player; equivalently, equal weighted preference graphs up to
/// per-player rescaling.
pub fn strategic_equivalent(u: &Game, v: &Game) -> Result<bool> {
    check_same_dims(u, v)?;
    let mut scale: Vec<Option<f64>> = vec![None; u.num_players()];
    let pairs = comparable_pairs(u.dims());
    for &(i, p, q) in &pairs {
        if scale[i].is_some() {
            continue;
        }
        let du = u.utility_by_index(q, i) - u.utility_by_index(p, i);
        let dv = v.utility_by_index(q, i) - v.utility_by_index(p, i);
        if du != 0.0 {
            let c = dv / du;
            if c <= 0.0 {
                return Ok(false);
            }
            scale[i] = Some(c);
        }
    }
    for (i, p, q) in pairs {
        let du = u.utility_by_index(q, i) - u.utility_by_index(p, i);
        let dv = v.utility_by_index(q, i) - v.utility_by_index(p, i);
        match scale[i] {
            // player i never distinguishes comparable profiles in u; v must agree
            None => {
                if dv != 0.0 {
                    return Ok(false);
                }
            }
            Some(c) => {
                if du == 0.0 {
                    if dv != 0.0 {
                        return Ok(false);
                    }
                } else if !close(dv, c * du) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Same total preorder per player over all pure profiles (comparable or not).
pub fn ordinal_equivalent(u: &Game, v: &Game) -> Result<bool> {
    check_same_dims(u, v)?;
    let n = u.num_profiles();
    for i in 0..u.num_players() {
        for p in 0..n {
            for q in p + 1..n {
                let du = u.utility_by_index(q, i) - u.utility_by_index(p, i);
                let dv = v.utility_by_index(q, i) - v.utility_by_index(p, i);
                if du.signum() != dv.signum() && !(du == 0.0 && dv == 0.0) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// v = a*u + b per player with a > 0. By the von Neumann-Morgenstern
/// characterisation this is the mixed-profile order equivalence.
pub fn affine_equivalent(u: &Game, v: &Game) -> Result<bool> {
    check_same_dims(u, v)?;
    let n = u.num_profiles();
    for i in 0..u.num_players() {
        // fit on the widest utility spread for numerical stability
        let mut lo = 0usize;
        let mut hi = 0usize;
        for p in 1..n {
            if u.utility_by_index(p, i) < u.utility_by_index(lo, i) {
                lo = p;
            }
            if u.utility_by_index(p, i) > u.utility_by_index(hi, i) {
                hi = p;
            }
        }
        let du = u.utility_by_index(hi, i) - u.utility_by_index(lo, i);
        if du == 0.0 {
            // constant u requires constant v
            if (0..n).any(|p| v.utility_by_index(p, i) != v.utility_by_index(0, i)) {
                return Ok(false);
            }
            continue;
        }
        let a = (v.utility_by_index(hi, i) - v.utility_by_index(lo, i)) / du;
        if a <= 0.0 {
            return Ok(false);
        }
        let b = v.utility_by_index(lo, i) - a * u.utility_by_index(lo, i);
        for p in 0..n {
            if !close(v.utility_by_index(p, i), a * u.utility_by_index(p, i) + b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn report(u: &Game, v: &Game) -> Result<EquivalenceReport> {
    Ok(EquivalenceReport {
        affine: affine_equivalent(u, v)?,
        strategic: strategic_equivalent(u, v)?,
        ordinal: ordinal_equivalent(u, v)?,
        preference: preference_equivalent(u, v)?,
    })
}

/// Preference equivalence up to renaming of players and strategies, by
/// searching the relabeling group. Feasible only for small games; the group
/// size is capped at 10^6 elements.
pub fn preference_isomorphic(u: &Game, v: &Game) -> Result<bool> {
    let mut du = u.dims().to_vec();
    let mut dv = v.dims().to_vec();
    du.sort_unstable();
    dv.sort_unstable();
    if du != dv {
        return Ok(false);
    }
    let group: usize = u
        .dims()
        .iter()
        .map(|&m| (1..=m).product::<usize>())
        .product::<usize>()
        * (1..=u.num_players()).product::<usize>();
    if group > 1_000_000 {
        return Err(Error::resource(format!(
            "relabeling group of size {group} is too large"
        )));
    }
    let n = u.num_players();
    let mut player_perm: Vec<usize> = (0..n).collect();
    loop {
        if (0..n).all(|j| v.dims()[player_perm[j]] == u.dims()[j])
            && search_strategy_perms(u, v, &player_perm)?
        {
            return Ok(true);
        }
        if !next_permutation(&mut player_perm) {
            return Ok(false);
        }
    }
}

fn search_strategy_perms(u: &Game, v: &Game, player_perm: &[usize]) -> Result<bool> {
    let n = u.num_players();
    let mut perms: Vec<Vec<usize>> = u.dims().iter().map(|&m| (0..m).collect()).collect();
    loop {
        if preference_equivalent(u, &relabel(v, player_perm, &perms))? {
            return Ok(true);
        }
        // advance the tuple of permutations like a mixed-radix counter
        let mut j = n;
        loop {
            if j == 0 {
                return Ok(false);
            }
            j -= 1;
            if next_permutation(&mut perms[j]) {
                break;
            }
            perms[j] = (0..u.dims()[j]).collect();
        }
    }
}

/// The game over u's dims whose player j is v's player `player_perm[j]`,
/// with strategy s standing for v's strategy `strat_perms[j][s]`.
fn relabel(v: &Game, player_perm: &[usize], strat_perms: &[Vec<usize>]) -> Game {
    let n = player_perm.len();
    let dims: Vec<usize> = strat_perms.iter().map(|p| p.len()).collect();
    let players: Vec<crate::game::Player> = (0..n)
        .map(|j| crate::game::Player {
            name: format!("P{}", j + 1),
            strategies: (0..dims[j]).map(|s| format!("s{s}")).collect(),
        })
        .collect();
    let count: usize = dims.iter().product();
    let mut utilities = Vec::with_capacity(count);
    let probe = Game::new(players.clone(), vec![0.0; count * n]).expect("shape is valid");
    for idx in 0..count {
        let p = probe.profile_of_index(idx);
        let mut q = vec![0usize; n];
        for j in 0..n {
            q[player_perm[j]] = strat_perms[j][p.strategies()[j]];
        }
        let qi = v.profile_index(&crate::game::Profile(q));
        utilities.push(
            (0..n)
                .map(|j| v.utility_by_index(qi, player_perm[j]))
                .collect::<Vec<f64>>(),
        );
    }
    Game::from_utilities(players, utilities).expect("shape is valid")
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;

    fn game(name: &str) -> Game {
        fixture(name).unwrap().game
    }

    fn transform(g: &Game, f: impl Fn(usize, f64) -> f64) -> Game {
        let n = g.num_players();
        let utilities = (0..g.num_profiles())
            .map(|idx| (0..n).map(|i| f(i, g.utility_by_index(idx, i))).collect())
            .collect();
        Game::from_utilities(g.players().to_vec(), utilities).unwrap()
    }

    #[test]
    fn every_game_is_equivalent_to_itself() {
        let g = game("shapley");
        let r = report(&g, &g).unwrap();
        assert!(r.affine && r.strategic && r.ordinal && r.preference);
    }

    #[test]
    fn positive_affine_maps_are_affine_equivalent() {
        let g = game("berger_4x5");
        let v = transform(&g, |_, x| 3.0 * x + 1.0);
        let r = report(&g, &v).unwrap();
        assert!(r.affine && r.strategic && r.ordinal && r.preference);
        let neg = transform(&g, |_, x| -x);
        assert!(!affine_equivalent(&g, &neg).unwrap());
    }

    #[test]
    fn doubling_one_player_keeps_preference() {
        let g = game("shapley");
        let v = transform(&g, |i, x| if i == 0 { 2.0 * x } else { x });
        assert!(preference_equivalent(&g, &v).unwrap());
        assert!(strategic_equivalent(&g, &v).unwrap());
    }

    #[test]
    fn mp_and_co_payoffs_are_not_preference_equivalent() {
        assert!(!preference_equivalent(&game("mp"), &game("co")).unwrap());
    }

    #[test]
    fn per_player_constants_are_strategic_but_cube_is_not() {
        let g = game("berger_4x5");
        // adding a constant that depends on the opponent's strategy keeps
        // comparable differences but breaks the global order
        let probe = g.clone();
        let utilities = (0..g.num_profiles())
            .map(|idx| {
                let p = probe.profile_of_index(idx);
                vec![
                    g.utility_by_index(idx, 0) + 10.0 * p.strategies()[1] as f64,
                    g.utility_by_index(idx, 1) + 7.0 * p.strategies()[0] as f64,
                ]
            })
            .collect();
        let v = Game::from_utilities(g.players().to_vec(), utilities).unwrap();
        assert!(strategic_equivalent(&g, &v).unwrap());
        assert!(preference_equivalent(&g, &v).unwrap());
        assert!(!affine_equivalent(&g, &v).unwrap());
        assert!(!ordinal_equivalent(&g, &v).unwrap());

        let cubed = transform(&g, |_, x| x * x * x);
        assert!(ordinal_equivalent(&g, &cubed).unwrap());
        assert!(!affine_equivalent(&g, &cubed).unwrap());
        assert!(!strategic_equivalent(&g, &cubed).unwrap());
    }

    #[test]
    fn flipping_one_arc_breaks_strategic_equivalence() {
        let g = game("co");
        let mut u1 = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        u1[0][0] = -1.0; // reverses the column-0 preference of player 1
        let v = Game::two_player(u1, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(!strategic_equivalent(&g, &v).unwrap());
        assert!(!preference_equivalent(&g, &v).unwrap());
    }

    #[test]
    fn preference_equivalent_pair_can_rank_incomparable_profiles_differently() {
        // differ only across the diagonal: same preference graph, different
        // total order for player 1
        let u = Game::two_player(
            vec![vec![0.0, 2.0], vec![3.0, 1.0]],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        let v = Game::two_player(
            vec![vec![1.0, 2.0], vec![3.0, 0.0]],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        assert!(preference_equivalent(&u, &v).unwrap());
        assert!(!ordinal_equivalent(&u, &v).unwrap());
    }

    #[test]
    fn dim_mismatch_is_an_input_error() {
        assert!(preference_equivalent(&game("mp"), &game("shapley")).is_err());
    }

    #[test]
    fn preference_equivalence_matches_graph_equality() {
        let g = game("2x3_mp");
        let v = transform(&g, |i, x| if i == 1 { 0.5 * x } else { x });
        assert!(preference_equivalent(&g, &v).unwrap());
        let gu = crate::graph::build_preference_graph(&g);
        let gv = crate::graph::build_preference_graph(&v);
        assert!(gu.same_arcs(&gv));
    }

    #[test]
    fn isomorphism_detects_renamed_games() {
        let g = game("mp");
        // swap the two players and relabel strategies: still the 4-cycle
        let v = Game::two_player(
            vec![vec![-1.0, 1.0], vec![1.0, -1.0]],
            vec![vec![1.0, -1.0], vec![-1.0, 1.0]],
        )
        .unwrap();
        assert!(preference_isomorphic(&g, &v).unwrap());
        assert!(!preference_isomorphic(&g, &game("co")).unwrap());
        assert!(!preference_isomorphic(&g, &game("shapley")).unwrap());
    }
}
