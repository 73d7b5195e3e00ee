//! Preference graphs and their weighted, reduced, best-response and
//! symmetric variants.
//!
//! Nodes are strategy profiles addressed by their mixed-radix index (last
//! player fastest). Every arc joins two i-comparable profiles and points
//! toward the deviating player's weakly better payoff; a tie is stored as a
//! pair of anti-parallel zero-weight arcs, which keeps a single digraph
//! representation for both the strict and non-strict cases.

use crate::error::{Error, Result};
use crate::game::{Game, Profile};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Preference,
    Reduced,
    BestResponse,
    Symmetric,
}

/// A directed arc between comparable profiles. `weight` is the deviating
/// player's utility gain, always >= 0 (ties have weight 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub player: usize,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct PrefGraph {
    kind: GraphKind,
    dims: Vec<usize>,
    /// Strategy labels, one list per player, used for exports.
    names: Vec<Vec<String>>,
    /// Outgoing adjacency keyed by profile index.
    out: Vec<Vec<Arc>>,
}

impl PrefGraph {
    pub(crate) fn new(kind: GraphKind, dims: Vec<usize>, names: Vec<Vec<String>>) -> Self {
        let nodes = dims.iter().product();
        PrefGraph {
            kind,
            dims,
            names,
            out: vec![Vec::new(); nodes],
        }
    }

    /// Builds a graph with default labels from an explicit arc list.
    /// Arcs must connect comparable profiles for their annotated player.
    pub fn from_arcs(kind: GraphKind, dims: Vec<usize>, arcs: Vec<Arc>) -> Result<Self> {
        let names = default_names(&dims);
        let mut g = PrefGraph::new(kind, dims, names);
        for arc in arcs {
            let p = g.profile_of_index(arc.from);
            let q = g.profile_of_index(arc.to);
            match comparable_player(&p, &q) {
                Some(i) if i == arc.player => g.push(arc),
                _ => {
                    return Err(Error::input(format!(
                        "arc {p} -> {q} is not a player-{} deviation",
                        arc.player
                    )))
                }
            }
        }
        Ok(g)
    }

    pub(crate) fn push(&mut self, arc: Arc) {
        self.out[arc.from].push(arc);
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|a| a.len()).sum()
    }

    pub fn outgoing(&self, node: usize) -> &[Arc] {
        &self.out[node]
    }

    pub fn arcs(&self) -> impl Iterator<Item = &Arc> + '_ {
        self.out.iter().flatten()
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.out[from].iter().any(|a| a.to == to)
    }

    pub fn profile_index(&self, p: &Profile) -> usize {
        let mut idx = 0;
        for (k, &s) in p.strategies().iter().enumerate() {
            idx = idx * self.dims[k] + s;
        }
        idx
    }

    pub fn profile_of_index(&self, mut idx: usize) -> Profile {
        let mut s = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            s[k] = idx % self.dims[k];
            idx /= self.dims[k];
        }
        Profile(s)
    }

    /// Nodes with no outgoing arc (the pure Nash equilibria of strict games).
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&v| self.out[v].is_empty())
            .collect()
    }

    /// Nodes with no incoming arc.
    pub fn sources(&self) -> Vec<usize> {
        let mut indeg = vec![0usize; self.node_count()];
        for arc in self.arcs() {
            indeg[arc.to] += 1;
        }
        (0..self.node_count()).filter(|&v| indeg[v] == 0).collect()
    }

    /// Strategy `t` of player `i` beats `s` in every row: the graph-level
    /// form of strict dominance (only meaningful on strict graphs, where a
    /// single arc per pair encodes strict preference).
    pub fn strategy_dominates(&self, i: usize, t: usize, s: usize) -> bool {
        if s == t {
            return false;
        }
        self.rows_of_player(i).into_iter().all(|row| {
            let from = row[s];
            let to = row[t];
            self.out[from].iter().any(|a| a.to == to && a.weight > 0.0)
        })
    }

    /// For player i, all rows of i-comparable profiles: each row lists the
    /// node indices obtained by sweeping player i's strategy with the other
    /// coordinates fixed.
    pub fn rows_of_player(&self, i: usize) -> Vec<Vec<usize>> {
        let n = self.dims.len();
        let mut rows = Vec::new();
        let mut rest = vec![0usize; n];
        loop {
            if rest[i] == 0 {
                let mut row = Vec::with_capacity(self.dims[i]);
                for s in 0..self.dims[i] {
                    let mut p = rest.clone();
                    p[i] = s;
                    row.push(self.profile_index(&Profile(p)));
                }
                rows.push(row);
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return rows;
                }
                k -= 1;
                if k == i {
                    continue;
                }
                rest[k] += 1;
                if rest[k] < self.dims[k] {
                    break;
                }
                rest[k] = 0;
            }
        }
    }

    fn node_id(&self, idx: usize) -> String {
        let p = self.profile_of_index(idx);
        p.strategies()
            .iter()
            .enumerate()
            .map(|(k, &s)| self.names[k][s].clone())
            .collect::<Vec<_>>()
            .join("_")
    }

    /// DOT export. Node ids are underscore-joined strategy labels; each arc
    /// carries the deviating player as `label`, and its utility difference as
    /// `weight` when `weighted` is set.
    pub fn to_dot(&self, weighted: bool) -> String {
        let mut s = String::from("digraph prefgraph {\n");
        for idx in 0..self.node_count() {
            s.push_str(&format!("  \"{}\";\n", self.node_id(idx)));
        }
        for idx in 0..self.node_count() {
            for arc in &self.out[idx] {
                if weighted {
                    s.push_str(&format!(
                        "  \"{}\" -> \"{}\" [label=\"{}\", weight=\"{}\"];\n",
                        self.node_id(arc.from),
                        self.node_id(arc.to),
                        arc.player,
                        arc.weight
                    ));
                } else {
                    s.push_str(&format!(
                        "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                        self.node_id(arc.from),
                        self.node_id(arc.to),
                        arc.player
                    ));
                }
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct ArcJson {
            from: Vec<usize>,
            to: Vec<usize>,
            player: usize,
            weight: f64,
        }
        #[derive(Serialize)]
        struct GraphJson {
            schema_version: u32,
            kind: GraphKind,
            dims: Vec<usize>,
            arcs: Vec<ArcJson>,
        }
        let mut arcs: Vec<&Arc> = self.arcs().collect();
        arcs.sort_by_key(|a| (a.from, a.to));
        let wire = GraphJson {
            schema_version: 1,
            kind: self.kind,
            dims: self.dims.clone(),
            arcs: arcs
                .into_iter()
                .map(|a| ArcJson {
                    from: self.profile_of_index(a.from).0,
                    to: self.profile_of_index(a.to).0,
                    player: a.player,
                    weight: a.weight,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&wire).expect("graph serialization cannot fail")
    }

    /// Arc sets compared as (from, to) pairs, ignoring weights.
    pub fn same_arcs(&self, other: &PrefGraph) -> bool {
        if self.dims != other.dims {
            return false;
        }
        let mut a: Vec<(usize, usize)> = self.arcs().map(|x| (x.from, x.to)).collect();
        let mut b: Vec<(usize, usize)> = other.arcs().map(|x| (x.from, x.to)).collect();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

pub(crate) fn default_names(dims: &[usize]) -> Vec<Vec<String>> {
    dims.iter()
        .map(|&m| (0..m).map(|s| s.to_string()).collect())
        .collect()
}

/// The deviating player if p and q differ in exactly one coordinate.
pub fn comparable_player(p: &Profile, q: &Profile) -> Option<usize> {
    if p.len() != q.len() {
        return None;
    }
    let mut found = None;
    for (k, (a, b)) in p.strategies().iter().zip(q.strategies()).enumerate() {
        if a != b {
            if found.is_some() {
                return None;
            }
            found = Some(k);
        }
    }
    found
}

fn names_of(game: &Game) -> Vec<Vec<String>> {
    game.players()
        .iter()
        .map(|p| p.strategies.clone())
        .collect()
}

/// The preference graph: for each pair of i-comparable profiles an arc
/// toward the weakly higher payoff for player i (both directions on a tie),
/// weighted by the payoff difference.
pub fn build_preference_graph(game: &Game) -> PrefGraph {
    let mut g = PrefGraph::new(
        GraphKind::Preference,
        game.dims().to_vec(),
        names_of(game),
    );
    for i in 0..game.num_players() {
        for row in g.rows_of_player(i) {
            for a in 0..row.len() {
                for b in a + 1..row.len() {
                    let ua = game.utility_by_index(row[a], i);
                    let ub = game.utility_by_index(row[b], i);
                    if ub >= ua {
                        g.push(Arc {
                            from: row[a],
                            to: row[b],
                            player: i,
                            weight: ub - ua,
                        });
                    }
                    if ua >= ub {
                        g.push(Arc {
                            from: row[b],
                            to: row[a],
                            player: i,
                            weight: ua - ub,
                        });
                    }
                }
            }
        }
    }
    g
}

/// The per-row transitive reduction of the preference graph: an arc p -> q
/// survives only if no i-comparable r has arcs p -> r and r -> q. Same
/// reachability order (hence the same sink equilibria) with fewer arcs.
pub fn build_reduced_graph(game: &Game) -> PrefGraph {
    let full = build_preference_graph(game);
    let mut g = PrefGraph::new(GraphKind::Reduced, game.dims().to_vec(), names_of(game));
    for i in 0..game.num_players() {
        for row in full.rows_of_player(i) {
            for &p in &row {
                for arc in full.outgoing(p).iter().filter(|a| a.player == i) {
                    let q = arc.to;
                    let skip = row.iter().any(|&r| {
                        r != p && r != q && full.has_arc(p, r) && full.has_arc(r, q)
                    });
                    if !skip {
                        g.push(*arc);
                    }
                }
            }
        }
    }
    g
}

/// The best-response subgraph: arc p -> q only when q's deviating strategy
/// maximises player i's payoff against the fixed opponents. Ties among best
/// responses yield arcs into (and among) all of them.
pub fn build_best_response_graph(game: &Game) -> PrefGraph {
    let mut g = PrefGraph::new(
        GraphKind::BestResponse,
        game.dims().to_vec(),
        names_of(game),
    );
    for i in 0..game.num_players() {
        for row in g.rows_of_player(i) {
            let best = row
                .iter()
                .map(|&v| game.utility_by_index(v, i))
                .fold(f64::NEG_INFINITY, f64::max);
            for &p in &row {
                let up = game.utility_by_index(p, i);
                for &q in &row {
                    if q == p {
                        continue;
                    }
                    let uq = game.utility_by_index(q, i);
                    if uq == best && uq >= up {
                        g.push(Arc {
                            from: p,
                            to: q,
                            player: i,
                            weight: uq - up,
                        });
                    }
                }
            }
        }
    }
    g
}

/// True iff no two i-comparable profiles give player i the same payoff.
pub fn is_strict(game: &Game) -> bool {
    let g = PrefGraph::new(GraphKind::Preference, game.dims().to_vec(), Vec::new());
    for i in 0..game.num_players() {
        for row in g.rows_of_player(i) {
            for a in 0..row.len() {
                for b in a + 1..row.len() {
                    if game.utility_by_index(row[a], i) == game.utility_by_index(row[b], i) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Node and ordered-comparable-pair counts for the given dims. The pair
/// count `(sum (m_i - 1)) * prod m_i` is twice the stored arc count of a
/// strict game; both quantities are reported.
pub fn node_and_arc_counts(dims: &[usize]) -> (usize, usize) {
    let nodes: usize = dims.iter().product();
    let ordered_pairs: usize = dims.iter().map(|m| m - 1).sum::<usize>() * nodes;
    (nodes, ordered_pairs)
}

/// Symmetric form of the preference graph for a two-player symmetric
/// zero-sum game: nodes are strategies, with an arc from loser to winner of
/// each pairing (both ways on a draw).
#[derive(Debug, Clone)]
pub struct SymmetricGraph {
    pub strategies: Vec<String>,
    /// (loser, winner) pairs.
    pub arcs: Vec<(usize, usize)>,
}

impl SymmetricGraph {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph symmetric {\n");
        for name in &self.strategies {
            s.push_str(&format!("  \"{name}\";\n"));
        }
        for &(a, b) in &self.arcs {
            s.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                self.strategies[a], self.strategies[b]
            ));
        }
        s.push_str("}\n");
        s
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.strategies.len())
            .filter(|&v| self.arcs.iter().all(|&(a, _)| a != v))
            .collect()
    }
}

/// Requires u2(s,t) = u1(t,s) and zero-sum. Arc s -> t iff deviating from
/// the diagonal profile (s,s) to (t,s) weakly improves player 1, i.e.
/// u1(t,s) >= u1(s,s) = 0.
pub fn symmetric_preference_graph(game: &Game) -> Result<SymmetricGraph> {
    if game.num_players() != 2 || game.dims()[0] != game.dims()[1] {
        return Err(Error::input(
            "symmetric preference graph needs a two-player game with equal strategy sets",
        ));
    }
    if !game.is_zero_sum() {
        return Err(Error::input("game is not zero-sum"));
    }
    let m = game.dims()[0];
    for s in 0..m {
        for t in 0..m {
            let u2 = game.utility(&Profile(vec![s, t]), 1)?;
            let u1_swapped = game.utility(&Profile(vec![t, s]), 0)?;
            if u2 != u1_swapped {
                return Err(Error::input("game is not symmetric (u2(s,t) != u1(t,s))"));
            }
        }
    }
    let mut arcs = Vec::new();
    for s in 0..m {
        for t in 0..m {
            if s == t {
                continue;
            }
            if game.utility(&Profile(vec![t, s]), 0)? >= 0.0 {
                arcs.push((s, t));
            }
        }
    }
    Ok(SymmetricGraph {
        strategies: game.players()[0].strategies.clone(),
        arcs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;

    #[test]
    fn mp_graph_is_a_4_cycle() {
        let g = build_preference_graph(&fixture("mp").unwrap().game);
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.arc_count(), 4);
        assert!((0..4).all(|v| g.outgoing(v).len() == 1));
        // follow the unique out-arcs: must return to start after 4 hops
        let mut v = 0;
        for _ in 0..4 {
            v = g.outgoing(v)[0].to;
        }
        assert_eq!(v, 0);
    }

    #[test]
    fn shapley_graph_has_18_arcs_3_sources_no_sinks() {
        let g = build_preference_graph(&fixture("shapley").unwrap().game);
        assert_eq!(g.node_count(), 9);
        assert_eq!(g.arc_count(), 18);
        assert_eq!(g.sources().len(), 3);
        assert!(g.sinks().is_empty());
    }

    #[test]
    fn one_by_one_game_has_single_node_no_arcs() {
        let g = Game::new(
            vec![crate::game::Player {
                name: "P1".into(),
                strategies: vec!["only".into()],
            }],
            vec![0.0],
        )
        .unwrap();
        let pg = build_preference_graph(&g);
        assert_eq!(pg.node_count(), 1);
        assert_eq!(pg.arc_count(), 0);
        assert!(is_strict(&g));
    }

    #[test]
    fn tie_yields_anti_parallel_zero_weight_arcs() {
        let g = Game::two_player(vec![vec![1.0], vec![1.0]], vec![vec![0.0], vec![0.0]]).unwrap();
        let pg = build_preference_graph(&g);
        assert_eq!(pg.arc_count(), 2);
        assert!(pg.arcs().all(|a| a.weight == 0.0));
        assert!(!is_strict(&g));
    }

    #[test]
    fn weights_are_utility_differences() {
        let game = fixture("shapley").unwrap().game;
        let g = build_preference_graph(&game);
        for arc in g.arcs() {
            let diff = game.utility_by_index(arc.to, arc.player)
                - game.utility_by_index(arc.from, arc.player);
            assert!(diff >= 0.0);
            assert_eq!(arc.weight, diff);
        }
    }

    #[test]
    fn reduced_graph_of_2x2_equals_preference_graph() {
        for name in ["mp", "co", "sd", "dd"] {
            let game = fixture(name).unwrap().game;
            assert!(build_reduced_graph(&game).same_arcs(&build_preference_graph(&game)));
        }
    }

    #[test]
    fn reduced_one_player_chain() {
        let g = Game::new(
            vec![crate::game::Player {
                name: "P1".into(),
                strategies: vec!["a".into(), "b".into(), "c".into()],
            }],
            vec![0.0, 1.0, 2.0],
        )
        .unwrap();
        let r = build_reduced_graph(&g);
        assert_eq!(r.arc_count(), 2);
        assert!(r.has_arc(0, 1) && r.has_arc(1, 2) && !r.has_arc(0, 2));
    }

    #[test]
    fn reduced_tie_row_caveat() {
        // On a tie row the removal rule drops every arc into the top node:
        // with u = (0,0,1), both 0->2 and 1->2 vanish because each routes
        // weakly through the other's tie partner. Reachability is only
        // guaranteed to survive reduction on strict games.
        let g = Game::new(
            vec![crate::game::Player {
                name: "P1".into(),
                strategies: vec!["a".into(), "b".into(), "c".into()],
            }],
            vec![0.0, 0.0, 1.0],
        )
        .unwrap();
        let r = build_reduced_graph(&g);
        assert!(r.has_arc(0, 1) && r.has_arc(1, 0));
        assert!(!r.has_arc(0, 2) && !r.has_arc(1, 2));
    }

    #[test]
    fn reduced_berger_has_hasse_arc_count() {
        // strict game: each row keeps m_i - 1 chain arcs
        let game = fixture("berger_4x5").unwrap().game;
        let r = build_reduced_graph(&game);
        assert_eq!(r.arc_count(), 3 * 5 + 4 * 4);
        // it still carries a cycle (Berger's counterexample is not ordinal potential)
        let sccs = crate::analysis::strongly_connected_components(&r);
        assert!(sccs.iter().any(|c| c.len() > 1));
    }

    #[test]
    fn best_response_graph_equals_preference_graph_on_strict_2x2() {
        for name in ["mp", "co", "sd", "dd"] {
            let game = fixture(name).unwrap().game;
            assert!(build_best_response_graph(&game).same_arcs(&build_preference_graph(&game)));
        }
    }

    #[test]
    fn best_response_graph_is_arc_subset() {
        for name in ["shapley", "inner_diamond", "berger_4x5", "2x3_mp", "jordan"] {
            let game = fixture(name).unwrap().game;
            let pref = build_preference_graph(&game);
            let br = build_best_response_graph(&game);
            for arc in br.arcs() {
                assert!(pref.has_arc(arc.from, arc.to));
            }
        }
    }

    #[test]
    fn strictness_of_fixtures_and_a_tied_game() {
        assert!(is_strict(&fixture("shapley").unwrap().game));
        let tied = Game::two_player(
            vec![vec![1.0, 0.0], vec![1.0, 2.0]],
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        )
        .unwrap();
        // column 0 repeats u1 = 1 for both rows: player 1 tie
        assert!(!is_strict(&tied));
    }

    #[test]
    fn symmetric_rps_is_a_3_cycle() {
        let g = symmetric_preference_graph(&fixture("rps").unwrap().game).unwrap();
        assert_eq!(g.arcs.len(), 3);
        // Rock -> Paper -> Scissors -> Rock
        assert!(g.arcs.contains(&(0, 1)));
        assert!(g.arcs.contains(&(1, 2)));
        assert!(g.arcs.contains(&(2, 0)));
        assert!(g.sinks().is_empty());
    }

    #[test]
    fn symmetric_game_with_dominant_strategy_has_unique_sink() {
        // strategy 0 beats 1 and 2; 1 beats 2
        let u1 = vec![
            vec![0.0, 1.0, 1.0],
            vec![-1.0, 0.0, 1.0],
            vec![-1.0, -1.0, 0.0],
        ];
        let u2: Vec<Vec<f64>> = (0..3)
            .map(|s| (0..3).map(|t| u1[t][s]).collect())
            .collect();
        let g = Game::two_player(u1, u2).unwrap();
        let sg = symmetric_preference_graph(&g).unwrap();
        assert_eq!(sg.sinks(), vec![0]);
    }

    #[test]
    fn symmetric_rejects_non_zero_sum() {
        assert!(symmetric_preference_graph(&fixture("co").unwrap().game).is_err());
        assert!(symmetric_preference_graph(&fixture("jordan").unwrap().game).is_err());
    }

    #[test]
    fn node_and_arc_count_formula() {
        assert_eq!(node_and_arc_counts(&[3, 3]), (9, 36));
        assert_eq!(node_and_arc_counts(&[2, 2]), (4, 8));
        assert_eq!(node_and_arc_counts(&[1]), (1, 0));
        // strict games store half the ordered pairs
        for name in ["shapley", "jordan", "berger_4x5"] {
            let game = fixture(name).unwrap().game;
            let g = build_preference_graph(&game);
            let (nodes, pairs) = node_and_arc_counts(game.dims());
            assert_eq!(g.node_count(), nodes);
            assert_eq!(g.arc_count(), pairs / 2);
        }
    }

    #[test]
    fn dot_export_shape() {
        let g = build_preference_graph(&fixture("mp").unwrap().game);
        let dot = g.to_dot(true);
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("\"H_H\" -> "));
        assert!(dot.contains("weight=\"2\""));
        assert_eq!(dot.matches(" -> ").count(), 4);
    }

    #[test]
    fn rows_cover_each_player_once() {
        let game = fixture("jordan").unwrap().game;
        let g = build_preference_graph(&game);
        for i in 0..3 {
            let rows = g.rows_of_player(i);
            assert_eq!(rows.len(), 4);
            let mut seen: Vec<usize> = rows.iter().flatten().copied().collect();
            seen.sort_unstable();
            assert_eq!(seen, (0..8).collect::<Vec<_>>());
        }
    }
}
