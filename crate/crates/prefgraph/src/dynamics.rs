//! Game dynamics: discrete fictitious play, the replicator ODE, random
//! walks on preference graphs, and Markov game dynamics with stationary and
//! absorption analysis.

use crate::analysis::{scc_of_adjacency, SinkEquilibrium};
use crate::error::{Error, Result};
use crate::game::{Game, MixedProfile, Profile};
use crate::graph::PrefGraph;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// How fictitious play resolves non-unique best responses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieRule {
    LowestIndex,
    Random(u64),
}

/// A fictitious play run. The profile sequence determines everything else;
/// `counts` caches the cumulative strategy counts through the final round.
#[derive(Debug, Clone)]
pub struct FPTrace {
    pub profile_sequence: Vec<Profile>,
    pub counts: Vec<Vec<u64>>,
    /// 1-based rounds at which some player's argmax was non-unique.
    pub tie_events: Vec<usize>,
}

impl FPTrace {
    pub fn rounds(&self) -> usize {
        self.profile_sequence.len()
    }

    /// Empirical distribution of `player`'s play over rounds 1..=through.
    pub fn empirical(&self, player: usize, through: usize) -> Vec<f64> {
        let mut counts = vec![0u64; self.counts[player].len()];
        for p in &self.profile_sequence[..through] {
            counts[p.strategies()[player]] += 1;
        }
        counts.iter().map(|&c| c as f64 / through as f64).collect()
    }

    pub fn empirical_final(&self, player: usize) -> Vec<f64> {
        let total: u64 = self.counts[player].iter().sum();
        self.counts[player]
            .iter()
            .map(|&c| c as f64 / total as f64)
            .collect()
    }

    /// Max-norm distance between the empirical distributions at two rounds.
    pub fn empirical_gap(&self, t1: usize, t2: usize) -> f64 {
        let mut gap = 0.0f64;
        for player in 0..self.counts.len() {
            let a = self.empirical(player, t1);
            let b = self.empirical(player, t2);
            for (x, y) in a.iter().zip(&b) {
                gap = gap.max((x - y).abs());
            }
        }
        gap
    }

    /// Maximal runs of identical consecutive profiles, in order.
    pub fn run_length_blocks(&self) -> Vec<(Profile, usize)> {
        let mut blocks: Vec<(Profile, usize)> = Vec::new();
        for p in &self.profile_sequence {
            match blocks.last_mut() {
                Some((q, len)) if q == p => *len += 1,
                _ => blocks.push((p.clone(), 1)),
            }
        }
        blocks
    }

    /// Whether the last `last` completed blocks each grew by at least
    /// `ratio` over their predecessor (the final, possibly truncated block
    /// is ignored).
    pub fn blocks_grow(&self, last: usize, ratio: f64) -> bool {
        let blocks = self.run_length_blocks();
        if blocks.len() < last + 2 {
            return false;
        }
        let complete = &blocks[..blocks.len() - 1];
        let tail = &complete[complete.len() - (last + 1)..];
        tail.windows(2)
            .all(|w| w[1].1 as f64 >= ratio * w[0].1 as f64)
    }
}

/// Two-player simultaneous discrete fictitious play: round 1 plays
/// `initial`; afterwards each player best-responds to the opponent's
/// cumulative empirical counts, breaking ties by `tie_rule`.
pub fn fictitious_play(
    game: &Game,
    rounds: usize,
    tie_rule: TieRule,
    initial: &Profile,
) -> Result<FPTrace> {
    if game.num_players() != 2 {
        return Err(Error::input("fictitious play is two-player"));
    }
    if rounds == 0 {
        return Err(Error::input("fictitious play needs at least one round"));
    }
    game.utility(initial, 0)?;
    let (m1, m2) = (game.dims()[0], game.dims()[1]);
    let u1 = |s: usize, t: usize| game.utility_by_index(s * m2 + t, 0);
    let u2 = |s: usize, t: usize| game.utility_by_index(s * m2 + t, 1);

    let mut rng = match tie_rule {
        TieRule::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        TieRule::LowestIndex => None,
    };
    let mut counts = vec![vec![0u64; m1], vec![0u64; m2]];
    // cumulative payoff of each candidate strategy against the opponent counts
    let mut score1 = vec![0.0f64; m1];
    let mut score2 = vec![0.0f64; m2];
    let mut sequence = Vec::with_capacity(rounds);
    let mut tie_events = Vec::new();

    let (a0, b0) = (initial.strategies()[0], initial.strategies()[1]);
    sequence.push(initial.clone());
    counts[0][a0] += 1;
    counts[1][b0] += 1;
    for s in 0..m1 {
        score1[s] += u1(s, b0);
    }
    for t in 0..m2 {
        score2[t] += u2(a0, t);
    }

    for round in 2..=rounds {
        let cands1 = argmax_all(&score1);
        let cands2 = argmax_all(&score2);
        if cands1.len() > 1 || cands2.len() > 1 {
            tie_events.push(round);
        }
        let (a, b) = match rng.as_mut() {
            None => (cands1[0], cands2[0]),
            Some(r) => (
                cands1[r.gen_range(0..cands1.len())],
                cands2[r.gen_range(0..cands2.len())],
            ),
        };
        sequence.push(Profile(vec![a, b]));
        counts[0][a] += 1;
        counts[1][b] += 1;
        for s in 0..m1 {
            score1[s] += u1(s, b);
        }
        for t in 0..m2 {
            score2[t] += u2(a, t);
        }
    }
    Ok(FPTrace {
        profile_sequence: sequence,
        counts,
        tie_events,
    })
}

fn argmax_all(scores: &[f64]) -> Vec<usize> {
    let best = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (0..scores.len()).filter(|&s| scores[s] == best).collect()
}

/// Right-hand side of the replicator equation: each strategy's share scaled
/// by its payoff advantage over the player's current average.
pub fn replicator_field(game: &Game, x: &MixedProfile) -> Result<Vec<Vec<f64>>> {
    game.check_mixed(x)?;
    let payoff = per_strategy_payoffs(game, x);
    Ok((0..game.num_players())
        .map(|i| {
            let avg: f64 = x.0[i]
                .iter()
                .zip(&payoff[i])
                .map(|(&p, &u)| p * u)
                .sum();
            x.0[i]
                .iter()
                .zip(&payoff[i])
                .map(|(&p, &u)| p * (u - avg))
                .collect()
        })
        .collect())
}

/// payoff[i][s] = expected utility to player i of playing s against the
/// opponents' mixtures.
fn per_strategy_payoffs(game: &Game, x: &MixedProfile) -> Vec<Vec<f64>> {
    let n = game.num_players();
    let mut payoff: Vec<Vec<f64>> = game.dims().iter().map(|&m| vec![0.0; m]).collect();
    for idx in 0..game.num_profiles() {
        let p = game.profile_of_index(idx);
        // probability of the others' part, per player
        for i in 0..n {
            let mut w = 1.0;
            for (j, &s) in p.strategies().iter().enumerate() {
                if j != i {
                    w *= x.0[j][s];
                }
            }
            if w != 0.0 {
                payoff[i][p.strategies()[i]] += w * game.utility_by_index(idx, i);
            }
        }
    }
    payoff
}

/// An integrated replicator path. States are stored flat; the accessors
/// rebuild `MixedProfile`s on demand.
#[derive(Debug, Clone)]
pub struct Trajectory {
    dims: Vec<usize>,
    times: Vec<f64>,
    states: Vec<f64>,
    /// Largest deviation of a player's simplex sum from 1 observed before
    /// per-step renormalization.
    pub max_simplex_drift: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.times[k]
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    fn width(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn state(&self, k: usize) -> MixedProfile {
        let w = self.width();
        let flat = &self.states[k * w..(k + 1) * w];
        let mut dists = Vec::with_capacity(self.dims.len());
        let mut offset = 0;
        for &m in &self.dims {
            dists.push(flat[offset..offset + m].to_vec());
            offset += m;
        }
        MixedProfile(dists)
    }

    pub fn final_state(&self) -> MixedProfile {
        self.state(self.len() - 1)
    }

    /// Mean of all recorded states, per player renormalized.
    pub fn time_average(&self) -> MixedProfile {
        let w = self.width();
        let mut acc = vec![0.0f64; w];
        for k in 0..self.len() {
            for (a, v) in acc.iter_mut().zip(&self.states[k * w..(k + 1) * w]) {
                *a += v;
            }
        }
        let steps = self.len() as f64;
        let mut dists = Vec::with_capacity(self.dims.len());
        let mut offset = 0;
        for &m in &self.dims {
            let mut d: Vec<f64> = acc[offset..offset + m].iter().map(|v| v / steps).collect();
            let sum: f64 = d.iter().sum();
            for v in &mut d {
                *v /= sum;
            }
            dists.push(d);
            offset += m;
        }
        MixedProfile(dists)
    }

    pub fn to_csv(&self) -> String {
        let mut header = vec!["time".to_string()];
        for (i, &m) in self.dims.iter().enumerate() {
            for s in 0..m {
                header.push(format!("p{}_s{}", i + 1, s));
            }
        }
        let mut out = header.join(",");
        out.push('\n');
        let w = self.width();
        for k in 0..self.len() {
            out.push_str(&format!("{}", self.times[k]));
            for v in &self.states[k * w..(k + 1) * w] {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Classical fixed-step 4-stage Runge-Kutta integration of the replicator
/// equation. After each step negative round-off is clipped at zero and each
/// player's mixture renormalized; coordinates that start at zero stay zero.
pub fn replicator_integrate(
    game: &Game,
    x0: &MixedProfile,
    step: f64,
    horizon: f64,
) -> Result<Trajectory> {
    game.check_mixed(x0)?;
    if !(step > 0.0) || !(horizon >= 0.0) {
        return Err(Error::input("step must be positive and horizon nonnegative"));
    }
    let steps = (horizon / step).round() as usize;
    let dims = game.dims().to_vec();
    let width: usize = dims.iter().sum();
    let mut traj = Trajectory {
        dims: dims.clone(),
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity((steps + 1) * width),
        max_simplex_drift: 0.0,
    };
    let mut x = x0.clone();
    let record = |traj: &mut Trajectory, t: f64, x: &MixedProfile| {
        traj.times.push(t);
        for dist in &x.0 {
            traj.states.extend_from_slice(dist);
        }
    };
    record(&mut traj, 0.0, &x);
    let combine = |x: &MixedProfile, k: &[Vec<f64>], h: f64| -> MixedProfile {
        MixedProfile(
            x.0.iter()
                .zip(k)
                .map(|(dist, dk)| dist.iter().zip(dk).map(|(&v, &d)| v + h * d).collect())
                .collect(),
        )
    };
    for n in 1..=steps {
        let k1 = raw_field(game, &x);
        let k2 = raw_field(game, &combine(&x, &k1, step / 2.0));
        let k3 = raw_field(game, &combine(&x, &k2, step / 2.0));
        let k4 = raw_field(game, &combine(&x, &k3, step));
        for i in 0..dims.len() {
            for s in 0..dims[i] {
                x.0[i][s] +=
                    step / 6.0 * (k1[i][s] + 2.0 * k2[i][s] + 2.0 * k3[i][s] + k4[i][s]);
            }
        }
        // renormalize: clip round-off negatives, rescale each simplex
        for dist in &mut x.0 {
            let sum: f64 = dist.iter().sum();
            if !sum.is_finite() {
                return Err(Error::numeric(format!(
                    "replicator state non-finite at t={}; last good state {:?}",
                    n as f64 * step,
                    traj.final_state().0
                )));
            }
            traj.max_simplex_drift = traj.max_simplex_drift.max((sum - 1.0).abs());
            let mut clipped: f64 = 0.0;
            for v in dist.iter_mut() {
                if *v < 0.0 {
                    *v = 0.0;
                }
                clipped += *v;
            }
            for v in dist.iter_mut() {
                *v /= clipped;
            }
        }
        record(&mut traj, n as f64 * step, &x);
    }
    Ok(traj)
}

/// Field evaluation without simplex validation, for integrator stages that
/// sit slightly off the simplex.
fn raw_field(game: &Game, x: &MixedProfile) -> Vec<Vec<f64>> {
    let payoff = per_strategy_payoffs(game, x);
    (0..game.num_players())
        .map(|i| {
            let avg: f64 = x.0[i]
                .iter()
                .zip(&payoff[i])
                .map(|(&p, &u)| p * u)
                .sum();
            x.0[i]
                .iter()
                .zip(&payoff[i])
                .map(|(&p, &u)| p * (u - avg))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkovKind {
    PreferenceMarkov,
    BestResponseMarkov,
    Custom,
}

/// A row-stochastic transition matrix over the profiles of a game whose
/// positive off-diagonal entries sit on preference-graph arcs.
#[derive(Debug, Clone)]
pub struct MarkovChain {
    pub kind: MarkovKind,
    dims: Vec<usize>,
    rows: Vec<Vec<f64>>,
}

const ROW_SUM_TOL: f64 = 1e-12;

impl MarkovChain {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn transition(&self, from: usize, to: usize) -> f64 {
        self.rows[from][to]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Validates a hand-built chain against the game: row-stochastic, and
    /// positive off-diagonal entries only between i-comparable profiles with
    /// a weak improvement for the deviator.
    pub fn custom(game: &Game, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = game.num_profiles();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::input(format!("transition matrix must be {n}x{n}")));
        }
        for (p, row) in rows.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL || row.iter().any(|&v| v < 0.0) {
                return Err(Error::input(format!("row {p} is not a distribution")));
            }
            for (q, &v) in row.iter().enumerate() {
                if v > 0.0 && p != q {
                    let pp = game.profile_of_index(p);
                    let qq = game.profile_of_index(q);
                    match crate::graph::comparable_player(&pp, &qq) {
                        Some(i)
                            if game.utility_by_index(q, i) >= game.utility_by_index(p, i) => {}
                        _ => {
                            return Err(Error::input(format!(
                                "transition {pp} -> {qq} is not a weak-improvement deviation"
                            )))
                        }
                    }
                }
            }
        }
        Ok(MarkovChain {
            kind: MarkovKind::Custom,
            dims: game.dims().to_vec(),
            rows,
        })
    }

    /// Adjacency of positive off-diagonal transitions.
    fn support_adjacency(&self) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(p, row)| {
                row.iter()
                    .enumerate()
                    .filter(|&(q, &v)| v > 0.0 && q != p)
                    .map(|(q, _)| q)
                    .collect()
            })
            .collect()
    }

    fn profile_of_index(&self, mut idx: usize) -> Profile {
        let mut s = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            s[k] = idx % self.dims[k];
            idx /= self.dims[k];
        }
        Profile(s)
    }

    /// Sink SCCs of the support graph, packaged as sink equilibria.
    pub fn sink_components(&self) -> Vec<SinkEquilibrium> {
        let adj = self.support_adjacency();
        let comps = scc_of_adjacency(&adj);
        let mut comp_of = vec![0usize; self.n()];
        for (c, comp) in comps.iter().enumerate() {
            for &v in comp {
                comp_of[v] = c;
            }
        }
        let mut is_sink = vec![true; comps.len()];
        for (p, outs) in adj.iter().enumerate() {
            for &q in outs {
                if comp_of[p] != comp_of[q] {
                    is_sink[comp_of[p]] = false;
                }
            }
        }
        comps
            .into_iter()
            .enumerate()
            .filter(|(c, _)| is_sink[*c])
            .map(|(_, comp)| {
                let profiles: Vec<Profile> =
                    comp.iter().map(|&v| self.profile_of_index(v)).collect();
                let is_subgame = {
                    let mut per: Vec<std::collections::BTreeSet<usize>> =
                        vec![Default::default(); self.dims.len()];
                    for p in &profiles {
                        for (k, &s) in p.strategies().iter().enumerate() {
                            per[k].insert(s);
                        }
                    }
                    per.iter().map(|s| s.len()).product::<usize>() == comp.len()
                };
                SinkEquilibrium {
                    is_pne: comp.len() == 1,
                    is_subgame,
                    profiles,
                    indices: comp,
                }
            })
            .collect()
    }
}

/// The two canonical Markov game dynamics. The preference chain moves along
/// strictly improving arcs with probability proportional to the arc weight;
/// the best-response chain moves uniformly along best-response arcs. Nodes
/// with no admissible move self-loop.
pub fn markov_chain(game: &Game, kind: MarkovKind) -> Result<MarkovChain> {
    let n = game.num_profiles();
    let mut rows = vec![vec![0.0; n]; n];
    match kind {
        MarkovKind::PreferenceMarkov => {
            let g = crate::graph::build_preference_graph(game);
            for p in 0..n {
                let total: f64 = g
                    .outgoing(p)
                    .iter()
                    .filter(|a| a.weight > 0.0)
                    .map(|a| a.weight)
                    .sum();
                if total == 0.0 {
                    rows[p][p] = 1.0;
                } else {
                    for arc in g.outgoing(p).iter().filter(|a| a.weight > 0.0) {
                        rows[p][arc.to] += arc.weight / total;
                    }
                }
            }
        }
        MarkovKind::BestResponseMarkov => {
            let g = crate::graph::build_best_response_graph(game);
            for p in 0..n {
                let outs = g.outgoing(p);
                if outs.is_empty() {
                    rows[p][p] = 1.0;
                } else {
                    let w = 1.0 / outs.len() as f64;
                    for arc in outs {
                        rows[p][arc.to] += w;
                    }
                }
            }
        }
        MarkovKind::Custom => {
            return Err(Error::input(
                "custom chains are built with MarkovChain::custom",
            ))
        }
    }
    Ok(MarkovChain {
        kind,
        dims: game.dims().to_vec(),
        rows,
    })
}

/// Gaussian elimination with partial pivoting: solves A X = B in place.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<Vec<f64>>) -> Result<Vec<Vec<f64>>> {
    let n = a.len();
    let cols = b[0].len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .expect("nonempty range");
        if a[pivot][col].abs() < 1e-14 {
            return Err(Error::numeric("singular linear system".to_string()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                for k in 0..cols {
                    b[row][k] -= f * b[col][k];
                }
            }
        }
    }
    for col in (0..n).rev() {
        for k in 0..cols {
            let mut v = b[col][k];
            for j in col + 1..n {
                v -= a[col][j] * b[j][k];
            }
            b[col][k] = v / a[col][col];
        }
    }
    Ok(b)
}

/// Per sink component, the unique stationary distribution of the restricted
/// chain, returned as a full-length vector supported on that component.
pub fn stationary_distributions(
    chain: &MarkovChain,
) -> Result<Vec<(SinkEquilibrium, Vec<f64>)>> {
    let mut out = Vec::new();
    for sink in chain.sink_components() {
        let k = sink.indices.len();
        // restricted transition matrix, transposed for pi M = pi, with the
        // normalization row replacing the last equation
        let mut a = vec![vec![0.0; k]; k];
        for (bi, &p) in sink.indices.iter().enumerate() {
            for (bj, &q) in sink.indices.iter().enumerate() {
                a[bj][bi] = chain.transition(p, q) - if bi == bj { 1.0 } else { 0.0 };
            }
        }
        for v in a[k - 1].iter_mut() {
            *v = 1.0;
        }
        let mut b = vec![vec![0.0]; k];
        b[k - 1][0] = 1.0;
        let pi = solve_linear(a, b)?;
        let mut full = vec![0.0; chain.n()];
        for (bi, &p) in sink.indices.iter().enumerate() {
            full[p] = pi[bi][0].max(0.0);
        }
        // verify the fixed-point residual
        for &q in &sink.indices {
            let inflow: f64 = sink
                .indices
                .iter()
                .map(|&p| full[p] * chain.transition(p, q))
                .sum();
            if (inflow - full[q]).abs() > 1e-12 {
                return Err(Error::numeric(format!(
                    "stationary solve residual {} exceeds 1e-12",
                    (inflow - full[q]).abs()
                )));
            }
        }
        out.push((sink, full));
    }
    Ok(out)
}

/// Probability of ending in each sink component from a prior over profiles,
/// by the fundamental-matrix solve on the transient states.
pub fn absorption_distribution(
    chain: &MarkovChain,
    prior: &[f64],
) -> Result<Vec<(SinkEquilibrium, f64)>> {
    let n = chain.n();
    if prior.len() != n {
        return Err(Error::input(format!("prior must have {n} entries")));
    }
    let total: f64 = prior.iter().sum();
    if (total - 1.0).abs() > 1e-9 || prior.iter().any(|&v| v < 0.0) {
        return Err(Error::input("prior must be a distribution over profiles"));
    }
    let sinks = chain.sink_components();
    let mut sink_of = vec![None; n];
    for (c, sink) in sinks.iter().enumerate() {
        for &v in &sink.indices {
            sink_of[v] = Some(c);
        }
    }
    let transient: Vec<usize> = (0..n).filter(|&v| sink_of[v].is_none()).collect();
    let mut mass = vec![0.0f64; sinks.len()];
    for (v, &p) in prior.iter().enumerate().filter(|&(_, &p)| p > 0.0) {
        if let Some(c) = sink_of[v] {
            mass[c] += p;
        }
    }
    if !transient.is_empty() {
        let t = transient.len();
        let pos = {
            let mut pos = vec![usize::MAX; n];
            for (k, &v) in transient.iter().enumerate() {
                pos[v] = k;
            }
            pos
        };
        // (I - Q) X = R
        let mut a = vec![vec![0.0; t]; t];
        let mut r = vec![vec![0.0; sinks.len()]; t];
        for (i, &p) in transient.iter().enumerate() {
            for q in 0..n {
                let v = chain.transition(p, q);
                if v == 0.0 {
                    continue;
                }
                match sink_of[q] {
                    None => a[i][pos[q]] -= v,
                    Some(c) => r[i][c] += v,
                }
            }
            a[i][i] += 1.0;
        }
        let x = solve_linear(a, r)?;
        for (i, &p) in transient.iter().enumerate() {
            if prior[p] > 0.0 {
                for (c, m) in mass.iter_mut().enumerate() {
                    *m += prior[p] * x[i][c];
                }
            }
        }
    }
    Ok(sinks.into_iter().zip(mass).collect())
}

/// Uniform random walk along strictly improving arcs (falling back to tie
/// arcs on plateaus) until a sink component is reached. Returns the visited
/// path and the component.
pub fn random_walk(
    graph: &PrefGraph,
    start: &Profile,
    seed: u64,
) -> Result<(Vec<Profile>, SinkEquilibrium)> {
    let sinks = crate::analysis::sink_equilibria(graph);
    let n = graph.node_count();
    if start.len() != graph.dims().len()
        || start
            .strategies()
            .iter()
            .zip(graph.dims())
            .any(|(&s, &m)| s >= m)
    {
        return Err(Error::input("start profile out of range"));
    }
    let mut sink_of = vec![None; n];
    for (c, sink) in sinks.iter().enumerate() {
        for &v in &sink.indices {
            sink_of[v] = Some(c);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = graph.profile_index(start);
    let mut path = vec![start.clone()];
    const MAX_STEPS: usize = 100_000_000;
    for _ in 0..MAX_STEPS {
        if let Some(c) = sink_of[v] {
            return Ok((path, sinks[c].clone()));
        }
        let outs = graph.outgoing(v);
        let strict: Vec<usize> = outs
            .iter()
            .filter(|a| a.weight > 0.0)
            .map(|a| a.to)
            .collect();
        let next = if strict.is_empty() {
            outs[rng.gen_range(0..outs.len())].to
        } else {
            strict[rng.gen_range(0..strict.len())]
        };
        path.push(graph.profile_of_index(next));
        v = next;
    }
    Err(Error::numeric(
        "random walk failed to reach a sink component",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;
    use crate::graph::{build_best_response_graph, build_preference_graph};

    fn game(name: &str) -> Game {
        fixture(name).unwrap().game
    }

    #[test]
    fn fp_requires_two_players_and_rounds() {
        assert!(fictitious_play(&game("jordan"), 10, TieRule::LowestIndex, &Profile(vec![0, 0, 0])).is_err());
        assert!(fictitious_play(&game("mp"), 0, TieRule::LowestIndex, &Profile(vec![0, 0])).is_err());
    }

    #[test]
    fn fp_on_mp_converges_to_uniform() {
        let trace =
            fictitious_play(&game("mp"), 100_000, TieRule::LowestIndex, &Profile(vec![0, 0]))
                .unwrap();
        for player in 0..2 {
            for p in trace.empirical_final(player) {
                assert!((p - 0.5).abs() < 0.01, "player {player}: {p}");
            }
        }
    }

    #[test]
    fn fp_replay_reproduces_the_sequence() {
        // oracle replay: recompute each round's argmax from cumulative payoffs
        let g = game("shapley");
        let trace =
            fictitious_play(&g, 2_000, TieRule::Random(11), &Profile(vec![0, 0])).unwrap();
        let mut c2 = [0u64; 3];
        let mut c1 = [0u64; 3];
        let first = &trace.profile_sequence[0];
        c1[first.strategies()[0]] += 1;
        c2[first.strategies()[1]] += 1;
        for (round, p) in trace.profile_sequence.iter().enumerate().skip(1) {
            let score = |i: usize, s: usize| -> f64 {
                (0..3)
                    .map(|t| {
                        let profile = if i == 0 {
                            Profile(vec![s, t])
                        } else {
                            Profile(vec![t, s])
                        };
                        let count = if i == 0 { c2[t] } else { c1[t] } as f64;
                        count * g.utility(&profile, i).unwrap()
                    })
                    .sum()
            };
            for i in 0..2 {
                let played = p.strategies()[i];
                let best = (0..3)
                    .map(|s| score(i, s))
                    .fold(f64::NEG_INFINITY, f64::max);
                assert_eq!(
                    score(i, played),
                    best,
                    "round {} player {i} played a non-best-response",
                    round + 1
                );
            }
            c1[p.strategies()[0]] += 1;
            c2[p.strategies()[1]] += 1;
        }
    }

    #[test]
    fn fp_lowest_index_ties_on_shapley_sources_stay_degenerate() {
        // from a source with symmetric tie-breaking, simultaneous FP cycles
        // through the three sources forever; the random rule escapes
        let g = game("shapley");
        let trace =
            fictitious_play(&g, 300, TieRule::LowestIndex, &Profile(vec![0, 0])).unwrap();
        let sources = [Profile(vec![0, 0]), Profile(vec![1, 1]), Profile(vec![2, 2])];
        assert!(trace.profile_sequence.iter().all(|p| sources.contains(p)));
        let trace =
            fictitious_play(&g, 300, TieRule::Random(7), &Profile(vec![0, 0])).unwrap();
        assert!(trace.profile_sequence.iter().any(|p| !sources.contains(p)));
    }

    #[test]
    fn replicator_field_is_zero_at_vertices() {
        let g = game("shapley");
        for p in g.profiles() {
            let x = MixedProfile::vertex(g.dims(), &p);
            let f = replicator_field(&g, &x).unwrap();
            assert!(f.iter().flatten().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn replicator_faces_stay_invariant() {
        let g = game("shapley");
        let x0 = MixedProfile::new(vec![vec![0.0, 0.3, 0.7], vec![0.5, 0.5, 0.0]]).unwrap();
        let traj = replicator_integrate(&g, &x0, 1e-2, 5.0).unwrap();
        for k in 0..traj.len() {
            let x = traj.state(k);
            assert_eq!(x.0[0][0], 0.0);
            assert_eq!(x.0[1][2], 0.0);
        }
    }

    #[test]
    fn replicator_co_converges_to_nearby_vertex() {
        let g = game("co");
        let x0 = MixedProfile::new(vec![vec![0.9, 0.1], vec![0.9, 0.1]]).unwrap();
        let traj = replicator_integrate(&g, &x0, 1e-2, 200.0).unwrap();
        let end = traj.final_state();
        assert!((end.0[0][0] - 1.0).abs() < 1e-3);
        assert!((end.0[1][0] - 1.0).abs() < 1e-3);
        assert!(traj.max_simplex_drift < 1e-6);
    }

    #[test]
    fn one_player_replicator_climbs_to_the_best_strategy() {
        let g = Game::new(
            vec![crate::game::Player {
                name: "P1".into(),
                strategies: vec!["a".into(), "b".into(), "c".into()],
            }],
            vec![0.0, 1.0, 2.0],
        )
        .unwrap();
        let traj =
            replicator_integrate(&g, &MixedProfile::uniform(g.dims()), 1e-2, 50.0).unwrap();
        let end = traj.final_state();
        assert!((end.0[0][2] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn markov_chain_on_mp_is_the_cycle_rotation() {
        let chain = markov_chain(&game("mp"), MarkovKind::PreferenceMarkov).unwrap();
        for p in 0..4 {
            let row = &chain.rows()[p];
            assert_eq!(row.iter().filter(|&&v| v > 0.0).count(), 1);
            assert_eq!(row.iter().sum::<f64>(), 1.0);
            assert_eq!(row[p], 0.0);
        }
        let st = stationary_distributions(&chain).unwrap();
        assert_eq!(st.len(), 1);
        assert!(st[0].1.iter().all(|&v| (v - 0.25).abs() < 1e-12));
    }

    #[test]
    fn markov_chain_on_co_absorbs_at_both_pnes() {
        let chain = markov_chain(&game("co"), MarkovKind::PreferenceMarkov).unwrap();
        let pne_indices = [0usize, 3];
        for &p in &pne_indices {
            assert_eq!(chain.transition(p, p), 1.0);
        }
        let st = stationary_distributions(&chain).unwrap();
        assert_eq!(st.len(), 2);
        for (sink, dist) in &st {
            assert!(sink.is_pne);
            assert_eq!(dist.iter().filter(|&&v| v > 0.0).count(), 1);
        }
        let prior = vec![0.0, 0.0, 0.0, 1.0];
        let absorb = absorption_distribution(&chain, &prior).unwrap();
        let at_own: f64 = absorb
            .iter()
            .filter(|(s, _)| s.indices == vec![3])
            .map(|(_, m)| *m)
            .sum();
        assert_eq!(at_own, 1.0);
    }

    #[test]
    fn markov_support_matches_preference_arcs_on_shapley() {
        let g = game("shapley");
        let chain = markov_chain(&g, MarkovKind::PreferenceMarkov).unwrap();
        let graph = build_preference_graph(&g);
        for p in 0..chain.n() {
            for q in 0..chain.n() {
                if p != q && chain.transition(p, q) > 0.0 {
                    assert!(graph.has_arc(p, q));
                }
            }
        }
        // the 6-cycle is deterministic, so its stationary law is uniform
        let st = stationary_distributions(&chain).unwrap();
        assert_eq!(st.len(), 1);
        let (sink, dist) = &st[0];
        assert_eq!(sink.indices.len(), 6);
        for &v in &sink.indices {
            assert!((dist[v] - 1.0 / 6.0).abs() < 1e-12);
        }
        // absorption from any prior lands in the unique sink equilibrium
        let prior = vec![1.0 / 9.0; 9];
        let absorb = absorption_distribution(&chain, &prior).unwrap();
        assert_eq!(absorb.len(), 1);
        assert!((absorb[0].1 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn inner_diamond_best_response_absorption_split() {
        let g = game("inner_diamond");
        let chain = markov_chain(&g, MarkovKind::BestResponseMarkov).unwrap();
        let absorb = absorption_distribution(&chain, &[1.0 / 9.0; 9]).unwrap();
        assert_eq!(absorb.len(), 2);
        let total: f64 = absorb.iter().map(|(_, m)| m).sum();
        assert!((total - 1.0).abs() < 1e-9);
        for (sink, m) in &absorb {
            if sink.is_pne {
                assert!((m - 1.0 / 3.0).abs() < 1e-9);
            } else {
                assert_eq!(sink.indices.len(), 4);
                assert!((m - 2.0 / 3.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn custom_chain_validation() {
        let g = game("mp");
        let ok = markov_chain(&g, MarkovKind::PreferenceMarkov).unwrap();
        assert!(MarkovChain::custom(&g, ok.rows().to_vec()).is_ok());
        let mut bad = ok.rows().to_vec();
        bad[0] = vec![0.0, 0.0, 0.0, 1.0]; // (0,0) -> (1,1) is not comparable
        assert!(MarkovChain::custom(&g, bad).is_err());
    }

    #[test]
    fn walks_reach_sink_components() {
        let co = build_preference_graph(&game("co"));
        let (path, sink) = random_walk(&co, &Profile(vec![0, 1]), 3).unwrap();
        assert!(path.len() <= 3);
        assert!(sink.is_pne);
        let sh = build_preference_graph(&game("shapley"));
        let (path, sink) = random_walk(&sh, &Profile(vec![0, 0]), 3).unwrap();
        assert_eq!(sink.indices.len(), 6);
        assert!(path.len() <= 4, "sources feed the cycle within 3 steps");
        let (path, _) = random_walk(&sh, &Profile(vec![0, 1]), 3).unwrap();
        assert_eq!(path.len(), 1, "starts inside the sink equilibrium");
    }

    #[test]
    fn best_response_walk_uses_br_arcs() {
        let g = game("inner_diamond");
        let br = build_best_response_graph(&g);
        let (_, sink) = random_walk(&br, &Profile(vec![1, 1]), 5).unwrap();
        assert_eq!(sink.indices.len(), 4);
    }
}
