//! Finite normal-form games: payoff tensors, pure and mixed profiles,
//! subgames and simple payoff transforms.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Simplex tolerance for mixed strategies.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// One player: a display name and an ordered list of strategy labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Player {
    pub name: String,
    pub strategies: Vec<String>,
}

/// A pure strategy profile: one strategy index per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile(pub Vec<usize>);

impl Profile {
    pub fn new(strategies: Vec<usize>) -> Self {
        Profile(strategies)
    }

    pub fn strategies(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// A mixed profile: one probability vector per player.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedProfile(pub Vec<Vec<f64>>);

impl MixedProfile {
    /// Validates each vector: nonnegative entries summing to 1 within `SIMPLEX_TOL`.
    pub fn new(distributions: Vec<Vec<f64>>) -> Result<Self> {
        for (i, dist) in distributions.iter().enumerate() {
            if dist.is_empty() {
                return Err(Error::input(format!("player {i} has an empty mixture")));
            }
            let mut sum = 0.0;
            for &p in dist {
                if !(p >= -SIMPLEX_TOL) {
                    return Err(Error::input(format!(
                        "player {i} mixture has negative entry {p}"
                    )));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > SIMPLEX_TOL {
                return Err(Error::input(format!(
                    "player {i} mixture sums to {sum}, not 1"
                )));
            }
        }
        Ok(MixedProfile(distributions))
    }

    /// The vertex of the strategy space sitting at a pure profile.
    pub fn vertex(dims: &[usize], profile: &Profile) -> Self {
        let dists = dims
            .iter()
            .zip(profile.strategies())
            .map(|(&m, &s)| {
                let mut d = vec![0.0; m];
                d[s] = 1.0;
                d
            })
            .collect();
        MixedProfile(dists)
    }

    pub fn uniform(dims: &[usize]) -> Self {
        MixedProfile(dims.iter().map(|&m| vec![1.0 / m as f64; m]).collect())
    }

    pub fn player(&self, i: usize) -> &[f64] {
        &self.0[i]
    }
}

/// JSON wire format for a game. `payoffs` is in the fixed row-major profile
/// order (last player's strategy index varying fastest), each entry one
/// utility vector.
#[derive(Serialize, Deserialize)]
struct GameJson {
    #[serde(default = "schema_version_default")]
    schema_version: u32,
    players: Vec<Player>,
    payoffs: Vec<Vec<f64>>,
}

fn schema_version_default() -> u32 {
    1
}

/// A finite normal-form game. Payoffs are stored as a dense tensor in
/// row-major profile order (last player fastest) with one f64 per player per
/// profile. Immutable after construction; all operations are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    players: Vec<Player>,
    dims: Vec<usize>,
    /// `payoffs[index * N + i]` is player i's utility at the profile with
    /// the given mixed-radix index.
    payoffs: Vec<f64>,
}

impl Game {
    pub fn new(players: Vec<Player>, payoffs: Vec<f64>) -> Result<Self> {
        if players.is_empty() {
            return Err(Error::input("a game needs at least one player"));
        }
        let dims: Vec<usize> = players.iter().map(|p| p.strategies.len()).collect();
        for (i, p) in players.iter().enumerate() {
            if p.strategies.is_empty() {
                return Err(Error::input(format!(
                    "player {i} ({}) has no strategies",
                    p.name
                )));
            }
            for (a, s) in p.strategies.iter().enumerate() {
                if p.strategies[a + 1..].contains(s) {
                    return Err(Error::input(format!(
                        "player {i} repeats strategy label {s:?}"
                    )));
                }
            }
        }
        let num_profiles: usize = dims.iter().product();
        let expected = num_profiles * players.len();
        if payoffs.len() != expected {
            return Err(Error::input(format!(
                "payoff tensor has {} entries, expected {expected}",
                payoffs.len()
            )));
        }
        Ok(Game {
            players,
            dims,
            payoffs,
        })
    }

    /// Builds a game from per-profile utility vectors in profile-index order.
    pub fn from_utilities(players: Vec<Player>, utilities: Vec<Vec<f64>>) -> Result<Self> {
        let n = players.len();
        let mut flat = Vec::with_capacity(utilities.len() * n);
        for (k, u) in utilities.iter().enumerate() {
            if u.len() != n {
                return Err(Error::input(format!(
                    "profile {k} has {} utilities, expected {n}",
                    u.len()
                )));
            }
            flat.extend_from_slice(u);
        }
        Game::new(players, flat)
    }

    /// Two-player convenience constructor: `u1[s][t]`, `u2[s][t]` indexed by
    /// (player 1 strategy, player 2 strategy). Strategy names default to
    /// r0.. / c0.. .
    pub fn two_player(u1: Vec<Vec<f64>>, u2: Vec<Vec<f64>>) -> Result<Self> {
        let m1 = u1.len();
        if m1 == 0 || u2.len() != m1 {
            return Err(Error::input("payoff matrices must be nonempty and same shape"));
        }
        let m2 = u1[0].len();
        if m2 == 0 || u1.iter().any(|r| r.len() != m2) || u2.iter().any(|r| r.len() != m2) {
            return Err(Error::input("payoff matrices must be rectangular and same shape"));
        }
        let players = vec![
            Player {
                name: "P1".to_string(),
                strategies: (0..m1).map(|s| format!("r{s}")).collect(),
            },
            Player {
                name: "P2".to_string(),
                strategies: (0..m2).map(|t| format!("c{t}")).collect(),
            },
        ];
        let mut payoffs = Vec::with_capacity(m1 * m2 * 2);
        for s in 0..m1 {
            for t in 0..m2 {
                payoffs.push(u1[s][t]);
                payoffs.push(u2[s][t]);
            }
        }
        Game::new(players, payoffs)
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn num_profiles(&self) -> usize {
        self.dims.iter().product()
    }

    /// Mixed-radix encoding of a profile, last player fastest.
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

    /// All profiles in index order.
    pub fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        (0..self.num_profiles()).map(|idx| self.profile_of_index(idx))
    }

    fn check_profile(&self, p: &Profile) -> Result<()> {
        if p.len() != self.dims.len() {
            return Err(Error::input(format!(
                "profile has {} entries, game has {} players",
                p.len(),
                self.dims.len()
            )));
        }
        for (k, (&s, &m)) in p.strategies().iter().zip(&self.dims).enumerate() {
            if s >= m {
                return Err(Error::input(format!(
                    "strategy index {s} out of range for player {k} (size {m})"
                )));
            }
        }
        Ok(())
    }

    fn check_player(&self, i: usize) -> Result<()> {
        if i >= self.players.len() {
            return Err(Error::input(format!(
                "player index {i} out of range (game has {} players)",
                self.players.len()
            )));
        }
        Ok(())
    }

    /// Player i's utility at a pure profile, exactly as stored.
    pub fn utility(&self, p: &Profile, i: usize) -> Result<f64> {
        self.check_player(i)?;
        self.check_profile(p)?;
        Ok(self.utility_by_index(self.profile_index(p), i))
    }

    /// Unchecked utility lookup by profile index.
    pub fn utility_by_index(&self, idx: usize, i: usize) -> f64 {
        self.payoffs[idx * self.players.len() + i]
    }

    /// Expected utility of a mixed profile: the payoff at each pure profile
    /// weighted by the product of the players' coordinates.
    pub fn expected_utility(&self, x: &MixedProfile, i: usize) -> Result<f64> {
        self.check_player(i)?;
        self.check_mixed(x)?;
        let mut total = 0.0;
        for idx in 0..self.num_profiles() {
            let p = self.profile_of_index(idx);
            let mut prob = 1.0;
            for (j, &s) in p.strategies().iter().enumerate() {
                prob *= x.0[j][s];
            }
            if prob != 0.0 {
                total += prob * self.utility_by_index(idx, i);
            }
        }
        Ok(total)
    }

    pub(crate) fn check_mixed(&self, x: &MixedProfile) -> Result<()> {
        if x.0.len() != self.dims.len() {
            return Err(Error::input(format!(
                "mixed profile has {} players, game has {}",
                x.0.len(),
                self.dims.len()
            )));
        }
        for (j, (dist, &m)) in x.0.iter().zip(&self.dims).enumerate() {
            if dist.len() != m {
                return Err(Error::input(format!(
                    "player {j} mixture has {} entries, expected {m}",
                    dist.len()
                )));
            }
            let mut sum = 0.0;
            for &p in dist {
                if !(p >= -SIMPLEX_TOL) {
                    return Err(Error::input(format!(
                        "player {j} mixture has negative entry {p}"
                    )));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > SIMPLEX_TOL {
                return Err(Error::input(format!(
                    "player {j} mixture sums to {sum}, not 1"
                )));
            }
        }
        Ok(())
    }

    /// Whether `x` satisfies the Nash condition: no player gains more than
    /// `tol` by a unilateral pure deviation.
    pub fn is_nash(&self, x: &MixedProfile, tol: f64) -> Result<bool> {
        self.check_mixed(x)?;
        for i in 0..self.num_players() {
            let base = self.expected_utility(x, i)?;
            for s in 0..self.dims[i] {
                let mut dev = x.clone();
                dev.0[i] = vec![0.0; self.dims[i]];
                dev.0[i][s] = 1.0;
                if self.expected_utility(&dev, i)? > base + tol {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Restricts each player to a subset of their strategies. Subsets must be
    /// nonempty and strictly increasing; strategy names carry over.
    pub fn subgame(&self, subsets: &[Vec<usize>]) -> Result<Game> {
        if subsets.len() != self.dims.len() {
            return Err(Error::input(format!(
                "{} subsets given, game has {} players",
                subsets.len(),
                self.dims.len()
            )));
        }
        for (i, sub) in subsets.iter().enumerate() {
            if sub.is_empty() {
                return Err(Error::input(format!("player {i} restricted to no strategies")));
            }
            for (k, &s) in sub.iter().enumerate() {
                if s >= self.dims[i] {
                    return Err(Error::input(format!(
                        "strategy index {s} out of range for player {i}"
                    )));
                }
                if k > 0 && sub[k - 1] >= s {
                    return Err(Error::input(format!(
                        "player {i} subset must be strictly increasing"
                    )));
                }
            }
        }
        let players = self
            .players
            .iter()
            .zip(subsets)
            .map(|(p, sub)| Player {
                name: p.name.clone(),
                strategies: sub.iter().map(|&s| p.strategies[s].clone()).collect(),
            })
            .collect();
        let sub_dims: Vec<usize> = subsets.iter().map(|s| s.len()).collect();
        let n = self.num_players();
        let count: usize = sub_dims.iter().product();
        let mut payoffs = Vec::with_capacity(count * n);
        let mut counter = vec![0usize; n];
        loop {
            let original = Profile(
                counter
                    .iter()
                    .zip(subsets)
                    .map(|(&k, sub)| sub[k])
                    .collect(),
            );
            let idx = self.profile_index(&original);
            for i in 0..n {
                payoffs.push(self.utility_by_index(idx, i));
            }
            // advance mixed-radix counter, last player fastest
            let mut k = n;
            loop {
                if k == 0 {
                    return Game::new(players, payoffs);
                }
                k -= 1;
                counter[k] += 1;
                if counter[k] < sub_dims[k] {
                    break;
                }
                counter[k] = 0;
            }
        }
    }

    /// Negates player i's payoffs, leaving everyone else untouched.
    pub fn reflect(&self, i: usize) -> Result<Game> {
        self.check_player(i)?;
        let n = self.num_players();
        let mut payoffs = self.payoffs.clone();
        for idx in 0..self.num_profiles() {
            payoffs[idx * n + i] = -payoffs[idx * n + i];
        }
        Ok(Game {
            players: self.players.clone(),
            dims: self.dims.clone(),
            payoffs,
        })
    }

    /// True iff utilities sum to exactly zero at every profile.
    pub fn is_zero_sum(&self) -> bool {
        let n = self.num_players();
        (0..self.num_profiles()).all(|idx| (0..n).map(|i| self.utility_by_index(idx, i)).sum::<f64>() == 0.0)
    }

    pub fn to_json(&self) -> String {
        let num = self.num_profiles();
        let n = self.num_players();
        let payoffs = (0..num)
            .map(|idx| self.payoffs[idx * n..(idx + 1) * n].to_vec())
            .collect();
        let wire = GameJson {
            schema_version: 1,
            players: self.players.clone(),
            payoffs,
        };
        serde_json::to_string_pretty(&wire).expect("game serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Game> {
        let wire: GameJson =
            serde_json::from_str(text).map_err(|e| Error::input(format!("bad game JSON: {e}")))?;
        Game::from_utilities(wire.players, wire.payoffs)
    }

    /// Human-readable label tuple for a profile, e.g. ["r0", "c1"].
    pub fn profile_labels(&self, p: &Profile) -> Vec<String> {
        p.strategies()
            .iter()
            .zip(&self.players)
            .map(|(&s, pl)| pl.strategies[s].clone())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;

    #[test]
    fn utility_reads_shapley_entries() {
        let g = fixture("shapley").unwrap().game;
        assert_eq!(g.utility(&Profile(vec![0, 1]), 0).unwrap(), 2.0);
        assert_eq!(g.utility(&Profile(vec![0, 0]), 0).unwrap(), 0.0);
        assert!(g.utility(&Profile(vec![0, 0]), 2).is_err());
        assert!(g.utility(&Profile(vec![3, 0]), 0).is_err());
    }

    #[test]
    fn expected_utility_uniform_mp_is_zero() {
        let g = fixture("mp").unwrap().game;
        let x = MixedProfile::uniform(g.dims());
        assert!(g.expected_utility(&x, 0).unwrap().abs() < 1e-12);
        assert!(g.expected_utility(&x, 1).unwrap().abs() < 1e-12);
    }

    #[test]
    fn expected_utility_at_vertex_equals_utility() {
        let g = fixture("shapley").unwrap().game;
        for p in g.profiles() {
            let x = MixedProfile::vertex(g.dims(), &p);
            for i in 0..2 {
                assert_eq!(g.expected_utility(&x, i).unwrap(), g.utility(&p, i).unwrap());
            }
        }
    }

    #[test]
    fn expected_utility_at_2x3_mp_equilibrium() {
        // Independent evaluation of the expectation at the mixed equilibrium
        // of the 2x3 MP generator, plus the deviation check: supported
        // strategies tie with the expectation, no deviation beats it.
        let g = fixture("2x3_mp").unwrap().game;
        let x = MixedProfile::new(vec![vec![0.0, 1.0 / 3.0, 2.0 / 3.0], vec![2.0 / 3.0, 1.0 / 3.0]])
            .unwrap();
        let mut by_hand = [0.0f64; 2];
        for s in 0..3 {
            for t in 0..2 {
                let p = Profile(vec![s, t]);
                let w = x.player(0)[s] * x.player(1)[t];
                by_hand[0] += w * g.utility(&p, 0).unwrap();
                by_hand[1] += w * g.utility(&p, 1).unwrap();
            }
        }
        assert!((by_hand[0] - 5.0 / 3.0).abs() < 1e-9);
        assert!((by_hand[1] + 5.0 / 3.0).abs() < 1e-9);
        for i in 0..2 {
            let u = g.expected_utility(&x, i).unwrap();
            assert!((u - by_hand[i]).abs() < 1e-9);
            for s in 0..g.dims()[i] {
                let mut dev = x.clone();
                dev.0[i] = vec![0.0; g.dims()[i]];
                dev.0[i][s] = 1.0;
                let udev = g.expected_utility(&dev, i).unwrap();
                assert!(udev <= u + 1e-9, "player {i} gains by deviating to {s}");
                if x.player(i)[s] > 0.0 {
                    assert!((udev - u).abs() < 1e-9);
                }
            }
        }
        assert!(g.is_nash(&x, 1e-9).unwrap());
    }

    #[test]
    fn expected_utility_rejects_bad_simplex() {
        let g = fixture("mp").unwrap().game;
        let x = MixedProfile(vec![vec![0.7, 0.2], vec![0.5, 0.5]]);
        assert!(g.expected_utility(&x, 0).is_err());
        assert!(MixedProfile::new(vec![vec![0.7, 0.2]]).is_err());
    }

    #[test]
    fn subgame_full_range_is_identity() {
        let g = fixture("shapley").unwrap().game;
        let sub = g.subgame(&[vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        assert_eq!(sub, g);
    }

    #[test]
    fn subgame_of_shapley_top_left() {
        let g = fixture("shapley").unwrap().game;
        let sub = g.subgame(&[vec![0, 1], vec![0, 1]]).unwrap();
        let expect = [
            ((0, 0), (0.0, 0.0)),
            ((0, 1), (2.0, 1.0)),
            ((1, 0), (1.0, 2.0)),
            ((1, 1), (0.0, 0.0)),
        ];
        for ((s, t), (a, b)) in expect {
            let p = Profile(vec![s, t]);
            assert_eq!(sub.utility(&p, 0).unwrap(), a);
            assert_eq!(sub.utility(&p, 1).unwrap(), b);
        }
    }

    #[test]
    fn subgame_singletons_and_errors() {
        let g = fixture("shapley").unwrap().game;
        let sub = g.subgame(&[vec![1], vec![2]]).unwrap();
        assert_eq!(sub.num_profiles(), 1);
        assert_eq!(sub.utility(&Profile(vec![0, 0]), 0).unwrap(), 2.0);
        assert!(g.subgame(&[vec![], vec![0]]).is_err());
        assert!(g.subgame(&[vec![1, 0], vec![0]]).is_err());
        assert!(g.subgame(&[vec![0, 5], vec![0]]).is_err());
    }

    #[test]
    fn reflect_is_involution_and_zero_sum_becomes_identical_interest() {
        let g = fixture("2x3_mp").unwrap().game;
        assert!(g.is_zero_sum());
        let r = g.reflect(1).unwrap();
        assert_eq!(r.reflect(1).unwrap(), g);
        for p in r.profiles() {
            assert_eq!(r.utility(&p, 0).unwrap(), r.utility(&p, 1).unwrap());
            assert_eq!(r.utility(&p, 0).unwrap(), g.utility(&p, 0).unwrap());
        }
        assert!(g.reflect(2).is_err());
    }

    #[test]
    fn zero_sum_detection() {
        assert!(fixture("2x3_mp").unwrap().game.is_zero_sum());
        assert!(!fixture("shapley").unwrap().game.is_zero_sum());
        let trivial = Game::new(
            vec![Player {
                name: "P1".into(),
                strategies: vec!["a".into()],
            }],
            vec![0.0],
        )
        .unwrap();
        assert!(trivial.is_zero_sum());
    }

    #[test]
    fn json_round_trip_preserves_order() {
        let g = fixture("berger_4x5").unwrap().game;
        let text = g.to_json();
        let back = Game::from_json(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn json_rejects_length_mismatch() {
        let g = fixture("mp").unwrap().game;
        let mut wire: serde_json::Value = serde_json::from_str(&g.to_json()).unwrap();
        wire["payoffs"].as_array_mut().unwrap().pop();
        assert!(Game::from_json(&wire.to_string()).is_err());
    }

    #[test]
    fn profile_index_round_trip() {
        let g = fixture("jordan").unwrap().game;
        for idx in 0..g.num_profiles() {
            let p = g.profile_of_index(idx);
            assert_eq!(g.profile_index(&p), idx);
        }
        // last player varies fastest
        assert_eq!(g.profile_of_index(1), Profile(vec![0, 0, 1]));
    }
}
