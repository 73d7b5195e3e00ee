//! Sink equilibria, pure Nash equilibria and game-class predicates, all
//! driven by the structure of the preference graph.

use crate::error::{Error, Result};
use crate::game::{Game, Profile};
use crate::graph::{build_best_response_graph, build_preference_graph, is_strict, PrefGraph};
use serde::Serialize;

/// A sink strongly connected component of a graph over profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SinkEquilibrium {
    /// Node indices, ascending.
    pub indices: Vec<usize>,
    /// The same nodes as profiles.
    pub profiles: Vec<Profile>,
    /// Singleton components are pure Nash equilibria.
    pub is_pne: bool,
    /// Whether the set is a full product of per-player strategy subsets.
    pub is_subgame: bool,
}

/// Tarjan's algorithm, iterative single pass. Components are returned with
/// sorted members, ordered by smallest member.
pub fn strongly_connected_components(g: &PrefGraph) -> Vec<Vec<usize>> {
    let adj: Vec<Vec<usize>> = (0..g.node_count())
        .map(|v| g.outgoing(v).iter().map(|a| a.to).collect())
        .collect();
    scc_of_adjacency(&adj)
}

/// Tarjan over a plain adjacency list; used for both preference graphs and
/// Markov-chain support graphs.
pub(crate) fn scc_of_adjacency(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSET: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next = 0usize;
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for start in 0..n {
        if index[start] != UNSET {
            continue;
        }
        index[start] = next;
        low[start] = next;
        next += 1;
        stack.push(start);
        on_stack[start] = true;
        frames.push((start, 0));
        while let Some(frame) = frames.last_mut() {
            let (v, pos) = *frame;
            if pos < adj[v].len() {
                frame.1 += 1;
                let w = adj[v][pos];
                if index[w] == UNSET {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(u, _)) = frames.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

fn component_is_subgame(g: &PrefGraph, comp: &[usize]) -> bool {
    let mut per_player: Vec<Vec<bool>> = g.dims().iter().map(|&m| vec![false; m]).collect();
    for &v in comp {
        for (k, &s) in g.profile_of_index(v).strategies().iter().enumerate() {
            per_player[k][s] = true;
        }
    }
    let product: usize = per_player
        .iter()
        .map(|seen| seen.iter().filter(|&&b| b).count())
        .product();
    product == comp.len()
}

/// SCCs with no outgoing arcs, in deterministic order (smallest profile
/// index first). Runs in time linear in nodes plus arcs.
pub fn sink_equilibria(g: &PrefGraph) -> Vec<SinkEquilibrium> {
    let comps = strongly_connected_components(g);
    let mut comp_of = vec![0usize; g.node_count()];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = c;
        }
    }
    let mut is_sink = vec![true; comps.len()];
    for arc in g.arcs() {
        if comp_of[arc.from] != comp_of[arc.to] {
            is_sink[comp_of[arc.from]] = false;
        }
    }
    comps
        .into_iter()
        .enumerate()
        .filter(|(c, _)| is_sink[*c])
        .map(|(_, comp)| SinkEquilibrium {
            profiles: comp.iter().map(|&v| g.profile_of_index(v)).collect(),
            is_pne: comp.len() == 1,
            is_subgame: component_is_subgame(g, &comp),
            indices: comp,
        })
        .collect()
}

/// Profiles with no strictly improving unilateral deviation (weak PNEs).
pub fn pure_nash(game: &Game) -> Vec<Profile> {
    let g = build_preference_graph(game);
    (0..g.node_count())
        .filter(|&v| g.outgoing(v).iter().all(|a| a.weight == 0.0))
        .map(|v| g.profile_of_index(v))
        .collect()
}

/// A game is ordinal potential iff its preference graph is acyclic. Tie
/// pairs are mutually reachable, so a tie counts as a cycle here; strictness
/// is reported separately by `is_strict`.
pub fn is_ordinal_potential(game: &Game) -> bool {
    graph_is_acyclic(&build_preference_graph(game))
}

pub(crate) fn graph_is_acyclic(g: &PrefGraph) -> bool {
    strongly_connected_components(g)
        .iter()
        .all(|c| c.len() == 1)
}

/// If the preference graph is acyclic, a potential function over profiles
/// (indexed by profile index): the topological rank, which increases along
/// every arc. Empty otherwise.
pub fn build_ordinal_potential(game: &Game) -> Option<Vec<f64>> {
    let g = build_preference_graph(game);
    if !graph_is_acyclic(&g) {
        return None;
    }
    let n = g.node_count();
    let mut indeg = vec![0usize; n];
    for arc in g.arcs() {
        indeg[arc.to] += 1;
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    queue.sort_unstable();
    let mut rank = vec![0.0f64; n];
    let mut seen = 0usize;
    let mut next_rank = 0.0;
    while let Some(v) = queue.pop() {
        rank[v] = next_rank;
        next_rank += 1.0;
        seen += 1;
        for arc in g.outgoing(v) {
            indeg[arc.to] -= 1;
            if indeg[arc.to] == 0 {
                queue.push(arc.to);
            }
        }
    }
    debug_assert_eq!(seen, n, "acyclic graph must topologically sort");
    Some(rank)
}

/// Every sink component of the best-response graph is a single profile.
pub fn is_weakly_acyclic(game: &Game) -> bool {
    sink_equilibria(&build_best_response_graph(game))
        .iter()
        .all(|s| s.is_pne)
}

/// Every sink equilibrium of the preference graph is a single profile.
pub fn is_brwa(game: &Game) -> bool {
    sink_equilibria(&build_preference_graph(game))
        .iter()
        .all(|s| s.is_pne)
}

/// A two-player game is preference-equivalent to a zero-sum game iff
/// negating one player's payoffs leaves an acyclic preference graph.
pub fn is_zero_sum_pref_equivalent(game: &Game) -> Result<bool> {
    if game.num_players() != 2 {
        return Err(Error::input("zero-sum preference equivalence is two-player"));
    }
    Ok(is_ordinal_potential(&game.reflect(1)?))
}

/// The four strict 2x2 preference graphs, plus a bucket for ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TwoByTwoClass {
    MP,
    CO,
    SD,
    DD,
    NonStrict,
}

fn arc_pairs(g: &PrefGraph) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = g.arcs().map(|a| (a.from, a.to)).collect();
    v.sort_unstable();
    v
}

/// The 8 relabelings of a 2x2 game: row swap x column swap x player swap,
/// as node-index maps (node = 2s + t).
fn relabelings_2x2() -> Vec<[usize; 4]> {
    let mut maps = Vec::with_capacity(8);
    for swap_players in [false, true] {
        for swap_rows in [false, true] {
            for swap_cols in [false, true] {
                let mut map = [0usize; 4];
                for s in 0..2usize {
                    for t in 0..2usize {
                        let (mut a, mut b) = (s, t);
                        if swap_rows {
                            a = 1 - a;
                        }
                        if swap_cols {
                            b = 1 - b;
                        }
                        if swap_players {
                            std::mem::swap(&mut a, &mut b);
                        }
                        map[2 * s + t] = 2 * a + b;
                    }
                }
                maps.push(map);
            }
        }
    }
    maps
}

fn reference_2x2_classes() -> &'static [(TwoByTwoClass, Vec<(usize, usize)>)] {
    use std::sync::OnceLock;
    static REFS: OnceLock<Vec<(TwoByTwoClass, Vec<(usize, usize)>)>> = OnceLock::new();
    REFS.get_or_init(|| {
        [
            (TwoByTwoClass::MP, "mp"),
            (TwoByTwoClass::CO, "co"),
            (TwoByTwoClass::SD, "sd"),
            (TwoByTwoClass::DD, "dd"),
        ]
        .into_iter()
        .map(|(class, name)| {
            let game = crate::fixtures::fixture(name).expect("static fixture").game;
            (class, arc_pairs(&build_preference_graph(&game)))
        })
        .collect()
    })
}

/// Isomorphism class of a strict 2x2 preference graph, canonicalised by
/// trying all 8 relabelings against the four reference graphs.
pub fn classify_2x2(game: &Game) -> Result<TwoByTwoClass> {
    if game.dims() != [2, 2] {
        return Err(Error::input("classify_2x2 needs a 2x2 game"));
    }
    if !is_strict(game) {
        return Ok(TwoByTwoClass::NonStrict);
    }
    let arcs = arc_pairs(&build_preference_graph(game));
    for map in relabelings_2x2() {
        let mut relabeled: Vec<(usize, usize)> =
            arcs.iter().map(|&(a, b)| (map[a], map[b])).collect();
        relabeled.sort_unstable();
        for (class, reference) in reference_2x2_classes() {
            if &relabeled == reference {
                return Ok(*class);
            }
        }
    }
    unreachable!("every strict 2x2 graph is one of the four classes")
}

/// Quasi-supermodularity for two-player games under the index order: an
/// upward preference in a row or column forces the same preference in all
/// higher rows or columns.
pub fn is_quasi_supermodular(game: &Game) -> Result<bool> {
    if game.num_players() != 2 {
        return Err(Error::input("quasi-supermodularity check is two-player"));
    }
    let (m1, m2) = (game.dims()[0], game.dims()[1]);
    let u = |s: usize, t: usize, i: usize| {
        game.utility(&Profile(vec![s, t]), i).expect("in range")
    };
    for s in 0..m1 {
        for s2 in s + 1..m1 {
            for t in 0..m2 {
                for t2 in t + 1..m2 {
                    if u(s2, t, 0) > u(s, t, 0) && u(s2, t2, 0) <= u(s, t2, 0) {
                        return Ok(false);
                    }
                    if u(s, t2, 1) > u(s, t, 1) && u(s2, t2, 1) <= u(s2, t, 1) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// True iff every 2x2 subgame classifies as SD or DD, which implies the game
/// is dominance-solvable. A tie in any subgame yields false: the criterion
/// only certifies strict games.
pub fn dominance_solvable_by_2x2(game: &Game) -> Result<bool> {
    if game.num_players() != 2 {
        return Err(Error::input("2x2 dominance criterion is two-player"));
    }
    let (m1, m2) = (game.dims()[0], game.dims()[1]);
    for a in 0..m1 {
        for b in a + 1..m1 {
            for c in 0..m2 {
                for d in c + 1..m2 {
                    let sub = game.subgame(&[vec![a, b], vec![c, d]])?;
                    match classify_2x2(&sub)? {
                        TwoByTwoClass::SD | TwoByTwoClass::DD => {}
                        _ => return Ok(false),
                    }
                }
            }
        }
    }
    Ok(true)
}

/// All directed 4-cycles, one representative per rotation (the listed cycle
/// starts at its smallest node).
pub fn find_4cycles(g: &PrefGraph) -> Vec<[usize; 4]> {
    let mut cycles = Vec::new();
    for a in 0..g.node_count() {
        for arc1 in g.outgoing(a) {
            let b = arc1.to;
            if b <= a {
                continue;
            }
            for arc2 in g.outgoing(b) {
                let c = arc2.to;
                if c <= a || c == b {
                    continue;
                }
                for arc3 in g.outgoing(c) {
                    let d = arc3.to;
                    if d <= a || d == b || d == c {
                        continue;
                    }
                    if g.has_arc(d, a) {
                        cycles.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    cycles
}

pub fn has_4cycle(g: &PrefGraph) -> bool {
    for a in 0..g.node_count() {
        for arc1 in g.outgoing(a) {
            let b = arc1.to;
            if b == a {
                continue;
            }
            for arc2 in g.outgoing(b) {
                let c = arc2.to;
                if c == a || c == b {
                    continue;
                }
                for arc3 in g.outgoing(c) {
                    let d = arc3.to;
                    if d == a || d == b || d == c {
                        continue;
                    }
                    if g.has_arc(d, a) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Exhaustively searches the strongly connected strict preference graphs of
/// the given two-player dims for one without a 4-cycle. Returns the first
/// counterexample to the conjecture, if any.
pub fn conjecture_scan(dims: &[usize]) -> Result<Option<PrefGraph>> {
    if dims.len() != 2 {
        return Err(Error::input("conjecture scan covers two-player dims"));
    }
    let nodes: usize = dims.iter().product();
    if nodes > 16 {
        return Err(Error::resource(format!(
            "conjecture scan limited to 16 profiles, got {nodes}"
        )));
    }
    crate::reconstruction::check_orientation_budget(dims)?;
    let mut found = None;
    crate::reconstruction::for_each_strict_orientation(dims, &mut |g: &PrefGraph| {
        if found.is_none()
            && strongly_connected_components(g).len() == 1
            && !has_4cycle(g)
        {
            found = Some(g.clone());
        }
    });
    Ok(found)
}

#[derive(Debug, Clone, Serialize)]
pub struct SinkEquilibriumReport {
    pub profiles: Vec<Vec<String>>,
    pub is_pne: bool,
    pub is_subgame: bool,
}

/// Full class membership report for one game.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub schema_version: u32,
    pub strict: bool,
    pub ordinal_potential: bool,
    pub weakly_acyclic: bool,
    pub brwa: bool,
    /// Two-player games only.
    pub zero_sum_pref_equivalent: Option<bool>,
    pub dominance_solvable: bool,
    /// Two-player games only.
    pub dominance_solvable_by_2x2: Option<bool>,
    /// Two-player games only, strategy orderings taken as index order.
    pub quasi_supermodular: Option<bool>,
    pub pne_count: usize,
    pub pne: Vec<Vec<String>>,
    pub sink_equilibria: Vec<SinkEquilibriumReport>,
}

pub fn classify(game: &Game) -> Classification {
    let two_player = game.num_players() == 2;
    let pne = pure_nash(game);
    let sinks = sink_equilibria(&build_preference_graph(game));
    Classification {
        schema_version: 1,
        strict: is_strict(game),
        ordinal_potential: is_ordinal_potential(game),
        weakly_acyclic: is_weakly_acyclic(game),
        brwa: is_brwa(game),
        zero_sum_pref_equivalent: two_player
            .then(|| is_zero_sum_pref_equivalent(game).expect("two-player checked")),
        dominance_solvable: crate::dominance::is_dominance_solvable(game).is_some(),
        dominance_solvable_by_2x2: two_player
            .then(|| dominance_solvable_by_2x2(game).expect("two-player checked")),
        quasi_supermodular: two_player
            .then(|| is_quasi_supermodular(game).expect("two-player checked")),
        pne_count: pne.len(),
        pne: pne.iter().map(|p| game.profile_labels(p)).collect(),
        sink_equilibria: sinks
            .iter()
            .map(|s| SinkEquilibriumReport {
                profiles: s.profiles.iter().map(|p| game.profile_labels(p)).collect(),
                is_pne: s.is_pne,
                is_subgame: s.is_subgame,
            })
            .collect(),
    }
}

/// Recomputes the frozen facts of a fixture from scratch.
pub fn golden_facts(game: &Game) -> crate::fixtures::GoldenFacts {
    let g = build_preference_graph(game);
    crate::fixtures::GoldenFacts {
        sink_sizes: sink_equilibria(&g).iter().map(|s| s.indices.len()).collect(),
        source_count: g.sources().len(),
        pne_count: pure_nash(game).len(),
        strict: is_strict(game),
        ordinal_potential: is_ordinal_potential(game),
        weakly_acyclic: is_weakly_acyclic(game),
        brwa: is_brwa(game),
        has_4cycle: has_4cycle(&g),
    }
}
