//! Recognition of unlabeled digraphs as preference graphs, and exhaustive
//! enumeration of small preference graphs up to relabeling.
//!
//! Recognition factors the comparability graph (ignore arc directions) as a
//! Cartesian product of complete graphs: in such a product every edge lies
//! in exactly one maximal clique, namely its row, and the rows through a
//! single node give one clique per player. Coordinates are then read off
//! from graph distances to one origin node's rows, and finally each row's
//! orientation must be a total preorder (transitive, every pair covered).

use crate::error::{Error, Result};
use crate::game::{Game, Player, Profile};
use crate::graph::{Arc, GraphKind, PrefGraph};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// A digraph on 0-based nodes with no self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnlabeledDigraph {
    pub n: usize,
    pub arcs: BTreeSet<(usize, usize)>,
}

impl UnlabeledDigraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let arcs: BTreeSet<(usize, usize)> = arcs.into_iter().collect();
        for &(a, b) in &arcs {
            if a == b {
                return Err(Error::input(format!("self-loop at node {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::input(format!("arc ({a},{b}) out of range for {n} nodes")));
            }
        }
        Ok(UnlabeledDigraph { n, arcs })
    }

    /// Parses edge-list text: one "a b" pair per line; blank lines and lines
    /// starting with '#' are skipped. Node count is max id + 1.
    pub fn parse(text: &str) -> Result<Self> {
        let mut arcs = Vec::new();
        let mut max = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                tok.ok_or_else(|| Error::input(format!("line {}: expected \"a b\"", lineno + 1)))?
                    .parse()
                    .map_err(|_| Error::input(format!("line {}: bad node id", lineno + 1)))
            };
            let a = parse(it.next())?;
            let b = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::input(format!("line {}: expected \"a b\"", lineno + 1)));
            }
            max = Some(max.unwrap_or(0).max(a).max(b));
            arcs.push((a, b));
        }
        let n = max.map(|m| m + 1).unwrap_or(0);
        UnlabeledDigraph::new(n, arcs)
    }

    pub fn from_pref_graph(g: &PrefGraph) -> Self {
        UnlabeledDigraph {
            n: g.node_count(),
            arcs: g.arcs().map(|a| (a.from, a.to)).collect(),
        }
    }
}

/// A recovered labeling: a bijection from nodes to the profiles of `dims`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    pub dims: Vec<usize>,
    /// `assignment[node]` is the profile assigned to that node.
    pub assignment: Vec<Profile>,
}

impl Labeling {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Wire<'a> {
            schema_version: u32,
            dims: &'a [usize],
            assignment: Vec<&'a [usize]>,
        }
        serde_json::to_string_pretty(&Wire {
            schema_version: 1,
            dims: &self.dims,
            assignment: self.assignment.iter().map(|p| p.strategies()).collect(),
        })
        .expect("labeling serialization cannot fail")
    }
}

/// Decides whether `g` is the preference graph of some game and recovers a
/// labeling (unique up to renaming) if so.
pub fn recognize(g: &UnlabeledDigraph) -> Option<Labeling> {
    if g.n == 0 {
        return None;
    }
    if g.n == 1 {
        return g.arcs.is_empty().then(|| Labeling {
            dims: vec![1],
            assignment: vec![Profile(vec![0])],
        });
    }
    // undirected comparability adjacency
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.n];
    for &(a, b) in &g.arcs {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    // each edge must close into a unique clique: the edge plus the common
    // neighborhood of its endpoints
    let mut clique_of_edge: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let mut cliques: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in 0..g.n {
        for &b in adj[a].iter().filter(|&&b| b > a) {
            let mut clique: Vec<usize> = adj[a].intersection(&adj[b]).copied().collect();
            clique.push(a);
            clique.push(b);
            clique.sort_unstable();
            for (k, &x) in clique.iter().enumerate() {
                for &y in &clique[k + 1..] {
                    if !adj[x].contains(&y) {
                        return None; // closure is not a clique
                    }
                }
            }
            clique_of_edge.insert((a, b), clique.clone());
            cliques.insert(clique);
        }
    }
    // every edge inside a clique must regenerate that same clique
    for clique in &cliques {
        for (k, &x) in clique.iter().enumerate() {
            for &y in &clique[k + 1..] {
                if clique_of_edge.get(&(x, y)) != Some(clique) {
                    return None;
                }
            }
        }
    }
    let cliques: Vec<Vec<usize>> = cliques.into_iter().collect();
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); g.n];
    for (c, clique) in cliques.iter().enumerate() {
        for &x in clique {
            through[x].push(c);
        }
    }
    let num_players = through[0].len();
    if num_players == 0 || through.iter().any(|t| t.len() != num_players) {
        return None; // isolated node or inconsistent dimension count
    }
    // origin rows define the dimensions
    let origin_cliques = &through[0];
    let dims: Vec<usize> = origin_cliques.iter().map(|&c| cliques[c].len()).collect();
    if dims.iter().product::<usize>() != g.n {
        return None;
    }
    // breadth-first distances from every member of every origin row
    let coord_label: Vec<BTreeMap<usize, usize>> = origin_cliques
        .iter()
        .map(|&c| {
            cliques[c]
                .iter()
                .enumerate()
                .map(|(label, &node)| (node, label))
                .collect()
        })
        .collect();
    let mut assignment: Vec<Profile> = Vec::with_capacity(g.n);
    let dist_from: BTreeMap<usize, Vec<usize>> = origin_cliques
        .iter()
        .flat_map(|&c| cliques[c].iter().copied())
        .map(|x| (x, bfs_distances(&adj, x)))
        .collect();
    for v in 0..g.n {
        let mut coords = Vec::with_capacity(num_players);
        for (i, &c) in origin_cliques.iter().enumerate() {
            let mut best: Option<(usize, usize)> = None; // (distance, member)
            let mut unique = true;
            for &x in &cliques[c] {
                let d = dist_from[&x][v];
                match best {
                    None => best = Some((d, x)),
                    Some((bd, _)) if d < bd => {
                        best = Some((d, x));
                        unique = true;
                    }
                    Some((bd, _)) if d == bd => unique = false,
                    _ => {}
                }
            }
            let (d, x) = best.expect("origin rows are nonempty");
            if !unique || d == usize::MAX {
                return None;
            }
            coords.push(coord_label[i][&x]);
        }
        assignment.push(Profile(coords));
    }
    let labeling = Labeling { dims, assignment };
    verify_labeling(g, &labeling).then_some(labeling)
}

fn bfs_distances(adj: &[BTreeSet<usize>], start: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[start] = 0;
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Full check of the labeling invariants: bijection, arcs exactly between
/// comparable profiles, and a total preorder along every row.
fn verify_labeling(g: &UnlabeledDigraph, labeling: &Labeling) -> bool {
    let n = g.n;
    let expected: usize = labeling.dims.iter().product();
    if labeling.assignment.len() != n || expected != n {
        return false;
    }
    let mut seen = BTreeSet::new();
    for p in &labeling.assignment {
        if p.len() != labeling.dims.len()
            || p.strategies()
                .iter()
                .zip(&labeling.dims)
                .any(|(&s, &m)| s >= m)
            || !seen.insert(p.clone())
        {
            return false;
        }
    }
    let has_arc = |a: usize, b: usize| g.arcs.contains(&(a, b));
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let comparable =
                crate::graph::comparable_player(&labeling.assignment[a], &labeling.assignment[b])
                    .is_some();
            let connected = has_arc(a, b) || has_arc(b, a);
            if comparable != connected {
                return false;
            }
        }
    }
    // transitivity within rows (ties allowed: the relation is a preorder)
    let mut nodes_by_profile: BTreeMap<&Profile, usize> = BTreeMap::new();
    for (v, p) in labeling.assignment.iter().enumerate() {
        nodes_by_profile.insert(p, v);
    }
    let probe = PrefGraph::new(GraphKind::Preference, labeling.dims.clone(), Vec::new());
    for i in 0..labeling.dims.len() {
        for row in probe.rows_of_player(i) {
            let row_nodes: Vec<usize> = row
                .iter()
                .map(|&idx| nodes_by_profile[&probe.profile_of_index(idx)])
                .collect();
            for &x in &row_nodes {
                for &y in &row_nodes {
                    if x == y || !has_arc(x, y) {
                        continue;
                    }
                    for &z in &row_nodes {
                        if z != x && z != y && has_arc(y, z) && !has_arc(x, z) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Realizes a recognized graph as a game: each player's utility at a profile
/// is the number of row-mates strictly below it, which reproduces the arc
/// set exactly.
pub fn realize_game(g: &UnlabeledDigraph, labeling: &Labeling) -> Game {
    let dims = &labeling.dims;
    let players: Vec<Player> = dims
        .iter()
        .enumerate()
        .map(|(i, &m)| Player {
            name: format!("P{}", i + 1),
            strategies: (0..m).map(|s| format!("s{s}")).collect(),
        })
        .collect();
    let n = dims.len();
    let probe = PrefGraph::new(GraphKind::Preference, dims.clone(), Vec::new());
    let mut node_of_index = vec![0usize; g.n];
    for (v, p) in labeling.assignment.iter().enumerate() {
        node_of_index[probe.profile_index(p)] = v;
    }
    let mut utilities = vec![vec![0.0; n]; g.n];
    for i in 0..n {
        for row in probe.rows_of_player(i) {
            for &idx in &row {
                let v = node_of_index[idx];
                let below = row
                    .iter()
                    .filter(|&&other| {
                        let w = node_of_index[other];
                        w != v && g.arcs.contains(&(w, v)) && !g.arcs.contains(&(v, w))
                    })
                    .count();
                utilities[idx][i] = below as f64;
            }
        }
    }
    Game::from_utilities(players, utilities).expect("labeled dims are valid")
}

/// Upper bound on enumeration work: the raw orientation count
/// prod_i (m_i!)^(rows of player i) must stay within 10^8.
pub fn check_orientation_budget(dims: &[usize]) -> Result<()> {
    let mut ln_raw = 0.0f64;
    let nodes: usize = dims.iter().product();
    for (i, &m) in dims.iter().enumerate() {
        let rows = nodes / m;
        let ln_fact: f64 = (2..=m).map(|k| (k as f64).ln()).sum();
        ln_raw += rows as f64 * ln_fact;
        let _ = i;
    }
    if ln_raw > (1e8f64).ln() {
        return Err(Error::resource(format!(
            "orientation space for dims {dims:?} exceeds 10^8"
        )));
    }
    Ok(())
}

fn permutations_of(m: usize) -> Vec<Vec<usize>> {
    let mut result = vec![(0..m).collect::<Vec<usize>>()];
    let mut current = result[0].clone();
    while {
        // next lexicographic permutation
        let n = current.len();
        let mut i = n.saturating_sub(1);
        while i > 0 && current[i - 1] >= current[i] {
            i -= 1;
        }
        if i == 0 {
            false
        } else {
            let mut j = n - 1;
            while current[j] <= current[i - 1] {
                j -= 1;
            }
            current.swap(i - 1, j);
            current[i..].reverse();
            true
        }
    } {
        result.push(current.clone());
    }
    result
}

/// Visits every strict preference graph of `dims`: one total order per row,
/// independently. The caller must have checked the orientation budget.
pub fn for_each_strict_orientation(dims: &[usize], visit: &mut dyn FnMut(&PrefGraph)) {
    let probe = PrefGraph::new(GraphKind::Preference, dims.to_vec(), Vec::new());
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for i in 0..dims.len() {
        rows.extend(probe.rows_of_player(i));
    }
    let perms_by_size: BTreeMap<usize, Vec<Vec<usize>>> = dims
        .iter()
        .map(|&m| (m, permutations_of(m)))
        .collect();
    let mut choice = vec![0usize; rows.len()];
    loop {
        let mut g = PrefGraph::new(GraphKind::Preference, dims.to_vec(), crate::graph::default_names(dims));
        for (row, &c) in rows.iter().zip(&choice) {
            let perm = &perms_by_size[&row.len()][c];
            // perm[k] is the rank of strategy k within its row
            for a in 0..row.len() {
                for b in 0..row.len() {
                    if perm[a] < perm[b] {
                        let player = crate::graph::comparable_player(
                            &g.profile_of_index(row[a]),
                            &g.profile_of_index(row[b]),
                        )
                        .expect("row mates are comparable");
                        g.push(Arc {
                            from: row[a],
                            to: row[b],
                            player,
                            weight: (perm[b] - perm[a]) as f64,
                        });
                    }
                }
            }
        }
        visit(&g);
        let mut k = rows.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < perms_by_size[&rows[k].len()].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// A graph's arc set as a bit matrix, minimised over the whole relabeling
/// group (per-player strategy permutations and permutations of equal-sized
/// players): equal codes mean isomorphic preference graphs.
pub type CanonicalCode = Vec<u64>;

fn relabeling_node_maps(dims: &[usize]) -> Vec<Vec<usize>> {
    let n_players = dims.len();
    let probe = PrefGraph::new(GraphKind::Preference, dims.to_vec(), Vec::new());
    let nodes: usize = dims.iter().product();
    let mut player_perms = Vec::new();
    let mut perm: Vec<usize> = (0..n_players).collect();
    loop {
        if (0..n_players).all(|j| dims[perm[j]] == dims[j]) {
            player_perms.push(perm.clone());
        }
        if !advance_permutation(&mut perm) {
            break;
        }
    }
    let strat_perm_lists: Vec<Vec<Vec<usize>>> =
        dims.iter().map(|&m| permutations_of(m)).collect();
    let mut maps = Vec::new();
    for pperm in &player_perms {
        let mut idx = vec![0usize; n_players];
        loop {
            let mut map = vec![0usize; nodes];
            for node in 0..nodes {
                let p = probe.profile_of_index(node);
                let mut q = vec![0usize; n_players];
                for j in 0..n_players {
                    q[j] = strat_perm_lists[j][idx[j]][p.strategies()[pperm[j]]];
                }
                map[node] = probe.profile_index(&Profile(q));
            }
            maps.push(map);
            let mut k = n_players;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < strat_perm_lists[k].len() {
                    break;
                }
                idx[k] = 0;
            }
            if idx.iter().all(|&x| x == 0) {
                break;
            }
        }
    }
    maps
}

fn advance_permutation(perm: &mut [usize]) -> bool {
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

fn encode_arcs(n: usize, arcs: impl Iterator<Item = (usize, usize)>) -> CanonicalCode {
    let words = (n * n).div_ceil(64);
    let mut code = vec![0u64; words];
    for (a, b) in arcs {
        let bit = a * n + b;
        code[bit / 64] |= 1 << (bit % 64);
    }
    code
}

pub fn canonical_code(g: &PrefGraph) -> CanonicalCode {
    let n = g.node_count();
    let arcs: Vec<(usize, usize)> = g.arcs().map(|a| (a.from, a.to)).collect();
    relabeling_node_maps(g.dims())
        .into_iter()
        .map(|map| encode_arcs(n, arcs.iter().map(|&(a, b)| (map[a], map[b]))))
        .min()
        .expect("relabeling group contains the identity")
}

fn decode_canonical(dims: &[usize], code: &CanonicalCode) -> PrefGraph {
    let mut g = PrefGraph::new(
        GraphKind::Preference,
        dims.to_vec(),
        crate::graph::default_names(dims),
    );
    let n: usize = dims.iter().product();
    for a in 0..n {
        for b in 0..n {
            let bit = a * n + b;
            if code[bit / 64] & (1 << (bit % 64)) != 0 {
                let player = crate::graph::comparable_player(
                    &g.profile_of_index(a),
                    &g.profile_of_index(b),
                )
                .expect("canonical codes only join comparable profiles");
                g.push(Arc {
                    from: a,
                    to: b,
                    player,
                    weight: 1.0,
                });
            }
        }
    }
    g
}

/// All strict preference graphs of `dims` satisfying `predicate`, one
/// canonical representative per isomorphism class, deterministically
/// ordered by canonical code.
pub fn enumerate_preference_graphs(
    dims: &[usize],
    predicate: impl Fn(&PrefGraph) -> bool,
) -> Result<Vec<PrefGraph>> {
    check_orientation_budget(dims)?;
    let mut codes: BTreeSet<CanonicalCode> = BTreeSet::new();
    for_each_strict_orientation(dims, &mut |g| {
        if predicate(g) {
            codes.insert(canonical_code(g));
        }
    });
    Ok(codes
        .into_iter()
        .map(|code| decode_canonical(dims, &code))
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct UniquenessDimsReport {
    pub dims: Vec<usize>,
    pub raw_orientations: usize,
    pub classes_without_sink_or_4cycle: usize,
}

/// Result of sweeping the small dims for graphs with neither a sink node
/// nor a 4-cycle.
#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    pub schema_version: u32,
    pub per_dims: Vec<UniquenessDimsReport>,
    /// 3x3 has exactly one class and it matches the Shapley fixture.
    pub shapley_unique: bool,
    /// 2x2x2 has exactly one class and it matches the Jordan fixture.
    pub jordan_unique: bool,
}

/// Exhaustively confirms that the Shapley and Jordan graphs are the unique
/// smallest preference graphs with neither a sink nor a 4-cycle.
pub fn verify_uniqueness_lemmas() -> UniquenessReport {
    let predicate =
        |g: &PrefGraph| g.sinks().is_empty() && !crate::analysis::has_4cycle(g);
    let mut per_dims = Vec::new();
    let mut classes_by_dims: BTreeMap<Vec<usize>, Vec<PrefGraph>> = BTreeMap::new();
    for dims in [
        vec![2, 2],
        vec![2, 3],
        vec![3, 2],
        vec![2, 4],
        vec![3, 3],
        vec![2, 2, 2],
    ] {
        let nodes: usize = dims.iter().product();
        let raw: usize = dims
            .iter()
            .map(|&m| {
                let fact: usize = (2..=m).product();
                fact.pow((nodes / m) as u32)
            })
            .product();
        let classes =
            enumerate_preference_graphs(&dims, predicate).expect("dims are within budget");
        per_dims.push(UniquenessDimsReport {
            dims: dims.clone(),
            raw_orientations: raw,
            classes_without_sink_or_4cycle: classes.len(),
        });
        classes_by_dims.insert(dims, classes);
    }
    let matches_fixture = |dims: &[usize], fixture_name: &str| {
        let classes = &classes_by_dims[dims];
        classes.len() == 1 && {
            let f = crate::fixtures::fixture(fixture_name).expect("static fixture");
            let fg = crate::graph::build_preference_graph(&f.game);
            canonical_code(&classes[0]) == canonical_code(&fg)
        }
    };
    let smaller_all_empty = per_dims
        .iter()
        .filter(|r| r.dims != [3, 3] && r.dims != [2, 2, 2])
        .all(|r| r.classes_without_sink_or_4cycle == 0);
    UniquenessReport {
        schema_version: 1,
        shapley_unique: matches_fixture(&[3, 3], "shapley") && smaller_all_empty,
        jordan_unique: matches_fixture(&[2, 2, 2], "jordan") && smaller_all_empty,
        per_dims,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;
    use crate::graph::build_preference_graph;

    #[test]
    fn directed_4cycle_recognized_as_mp() {
        let g = UnlabeledDigraph::new(4, [(0, 1), (1, 3), (3, 2), (2, 0)]).unwrap();
        let labeling = recognize(&g).expect("the 4-cycle is a 2x2 preference graph");
        assert_eq!(labeling.dims, vec![2, 2]);
        let game = realize_game(&g, &labeling);
        assert_eq!(
            crate::analysis::classify_2x2(&game).unwrap(),
            crate::analysis::TwoByTwoClass::MP
        );
    }

    #[test]
    fn directed_3cycle_rejected() {
        let g = UnlabeledDigraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(recognize(&g).is_none());
    }

    #[test]
    fn shapley_graph_recognized_as_3x3() {
        let fg = build_preference_graph(&fixture("shapley").unwrap().game);
        let g = UnlabeledDigraph::from_pref_graph(&fg);
        let labeling = recognize(&g).expect("shapley's graph is a preference graph");
        assert_eq!(labeling.dims.len(), 2);
        assert_eq!(labeling.dims.iter().product::<usize>(), 9);
        let game = realize_game(&g, &labeling);
        let rebuilt = build_preference_graph(&game);
        let mapped: BTreeSet<(usize, usize)> = rebuilt
            .arcs()
            .map(|a| {
                let from = labeling
                    .assignment
                    .iter()
                    .position(|p| rebuilt.profile_index(p) == a.from)
                    .unwrap();
                let to = labeling
                    .assignment
                    .iter()
                    .position(|p| rebuilt.profile_index(p) == a.to)
                    .unwrap();
                (from, to)
            })
            .collect();
        assert_eq!(mapped, g.arcs);
    }

    #[test]
    fn single_node_and_single_row() {
        let one = UnlabeledDigraph::new(1, []).unwrap();
        assert_eq!(recognize(&one).unwrap().dims, vec![1]);
        // a transitive 3-chain with its shortcut is a 1x3 preference graph
        let chain = UnlabeledDigraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(recognize(&chain).unwrap().dims, vec![3]);
    }

    #[test]
    fn tie_pairs_are_recognized() {
        // 1x3 row with two tied bottom strategies below a top one
        let g = UnlabeledDigraph::new(3, [(0, 1), (1, 0), (0, 2), (1, 2)]).unwrap();
        let labeling = recognize(&g).expect("total preorder rows are valid");
        assert_eq!(labeling.dims, vec![3]);
    }

    #[test]
    fn intransitive_tie_rows_are_rejected() {
        // 0 ~ 1 tie, 1 -> 2, but 0 -> 2 missing: not a preorder
        let g = UnlabeledDigraph::new(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert!(recognize(&g).is_none());
    }

    #[test]
    fn perturbed_fixture_graphs_are_rejected() {
        for name in ["mp", "shapley", "jordan"] {
            let fg = build_preference_graph(&fixture(name).unwrap().game);
            let base = UnlabeledDigraph::from_pref_graph(&fg);
            // remove each arc in turn
            for &arc in &base.arcs {
                let mut arcs = base.arcs.clone();
                arcs.remove(&arc);
                let g = UnlabeledDigraph { n: base.n, arcs };
                assert!(recognize(&g).is_none(), "{name} minus {arc:?}");
            }
            // add one arc between the first non-adjacent pair
            'outer: for a in 0..base.n {
                for b in 0..base.n {
                    if a != b && !base.arcs.contains(&(a, b)) && !base.arcs.contains(&(b, a)) {
                        let mut arcs = base.arcs.clone();
                        arcs.insert((a, b));
                        let g = UnlabeledDigraph { n: base.n, arcs };
                        assert!(recognize(&g).is_none(), "{name} plus ({a},{b})");
                        break 'outer;
                    }
                }
            }
        }
    }

    #[test]
    fn enumerate_2x2_yields_four_classes() {
        let classes = enumerate_preference_graphs(&[2, 2], |_| true).unwrap();
        assert_eq!(classes.len(), 4);
    }

    #[test]
    fn enumerate_2x3_without_dominated_strategies_yields_three_classes() {
        let classes = enumerate_preference_graphs(&[2, 3], |g| {
            (0..2).all(|i| {
                (0..g.dims()[i]).all(|s| {
                    (0..g.dims()[i]).all(|t| s == t || !g.strategy_dominates(i, t, s))
                })
            })
        })
        .unwrap();
        assert_eq!(classes.len(), 3);
    }

    #[test]
    fn orientation_budget_enforced() {
        assert!(check_orientation_budget(&[2, 2]).is_ok());
        assert!(check_orientation_budget(&[3, 3]).is_ok());
        assert!(check_orientation_budget(&[4, 4]).is_err());
        assert!(enumerate_preference_graphs(&[4, 4], |_| true).is_err());
    }

    #[test]
    fn edge_list_parsing() {
        let g = UnlabeledDigraph::parse("# comment\n0 1\n1 2\n\n2 0\n").unwrap();
        assert_eq!(g.n, 3);
        assert_eq!(g.arcs.len(), 3);
        assert!(UnlabeledDigraph::parse("0 0").is_err());
        assert!(UnlabeledDigraph::parse("0").is_err());
        assert!(UnlabeledDigraph::parse("0 1 2").is_err());
    }

    #[test]
    fn canonical_code_is_relabeling_invariant() {
        let mp = build_preference_graph(&fixture("mp").unwrap().game);
        // relabeled MP: swap both players' strategies
        let swapped = Game::two_player(
            vec![vec![1.0, -1.0], vec![-1.0, 1.0]],
            vec![vec![-1.0, 1.0], vec![1.0, -1.0]],
        )
        .unwrap();
        let other = build_preference_graph(&swapped);
        assert_eq!(canonical_code(&mp), canonical_code(&other));
        let co = build_preference_graph(&fixture("co").unwrap().game);
        assert_ne!(canonical_code(&mp), canonical_code(&co));
    }
}
