//! Batch CLI over the prefgraph library. Every subcommand reads one game
//! (from a JSON file or a named fixture), writes machine-readable output to
//! --out or stdout, and keeps runs reproducible: identical argv and seed
//! give byte-identical files.
//!
//! Exit codes: 0 success, 1 input error, 2 resource or numeric error.

use clap::{Parser, Subcommand, ValueEnum};
use prefgraph::analysis::{classify, sink_equilibria};
use prefgraph::dynamics::{
    absorption_distribution, fictitious_play, markov_chain, replicator_integrate,
    stationary_distributions, MarkovKind, TieRule,
};
use prefgraph::error::Error;
use prefgraph::game::{Game, MixedProfile, Profile};
use prefgraph::graph::{
    build_best_response_graph, build_preference_graph, build_reduced_graph,
    symmetric_preference_graph, PrefGraph,
};
use prefgraph::reconstruction::{realize_game, recognize, UnlabeledDigraph};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "prefgraph",
    about = "Preference graphs, sink equilibria and game dynamics for normal-form games",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct GameInput {
    /// Path to a game JSON file
    #[arg(long, conflicts_with = "fixture")]
    game: Option<PathBuf>,
    /// Name of a built-in fixture game
    #[arg(long)]
    fixture: Option<String>,
}

impl GameInput {
    fn load(&self) -> Result<Game, Error> {
        match (&self.game, &self.fixture) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
                Game::from_json(&text)
            }
            (None, Some(name)) => Ok(prefgraph::fixture(name)?.game),
            _ => Err(Error::input("exactly one of --game or --fixture is required")),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphVariant {
    Preference,
    Reduced,
    BestResponse,
    Symmetric,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChainVariant {
    Preference,
    BestResponse,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieRuleArg {
    Lowest,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum PredicateArg {
    All,
    NoSinkNo4cycle,
    NoDominated,
}

#[derive(Subcommand)]
enum Command {
    /// Export a game's preference graph (or a variant)
    Graph {
        #[command(flatten)]
        input: GameInput,
        #[arg(long, value_enum, default_value = "preference")]
        kind: GraphVariant,
        /// Include arc weights in DOT output
        #[arg(long)]
        weighted: bool,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the sink equilibria of the preference graph
    Sinks {
        #[command(flatten)]
        input: GameInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full class-membership report
    Classify {
        #[command(flatten)]
        input: GameInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterated elimination of strictly dominated strategies
    Dominance {
        #[command(flatten)]
        input: GameInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test the four equivalences between two games
    Equiv {
        #[command(flatten)]
        input: GameInput,
        /// Path to the second game's JSON file
        #[arg(long, conflicts_with = "other_fixture")]
        other: Option<PathBuf>,
        /// Fixture name for the second game
        #[arg(long)]
        other_fixture: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recognize an edge-list digraph as a preference graph
    Reconstruct {
        /// Path to an edge-list file, one "a b" arc per line, 0-based nodes
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate strict preference graphs of given dims up to relabeling
    Enumerate {
        /// Dimensions, e.g. 2x3 or 2,3
        #[arg(long)]
        dims: String,
        #[arg(long, value_enum, default_value = "all")]
        predicate: PredicateArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run two-player discrete fictitious play
    Fp {
        #[command(flatten)]
        input: GameInput,
        #[arg(long, default_value_t = 1000)]
        rounds: usize,
        #[arg(long, value_enum, default_value = "lowest")]
        tie_rule: TieRuleArg,
        /// Starting profile, e.g. 0,0
        #[arg(long, default_value = "0,0")]
        initial: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the round-by-round trace as CSV here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the replicator dynamic
    Replicator {
        #[command(flatten)]
        input: GameInput,
        /// Initial mixed profile "p,p,...;q,q,..."; uniform if omitted
        #[arg(long)]
        x0: Option<String>,
        #[arg(long, default_value_t = 1e-2)]
        step: f64,
        #[arg(long, default_value_t = 100.0)]
        horizon: f64,
        /// Write the trajectory as CSV here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stationary and absorption analysis of a Markov game dynamic
    Markov {
        #[command(flatten)]
        input: GameInput,
        #[arg(long, value_enum, default_value = "preference")]
        kind: ChainVariant,
        /// Prior over profiles: "uniform" or "point:<profile>"
        #[arg(long, default_value = "uniform")]
        prior: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random walk along improving arcs until a sink equilibrium
    Walk {
        #[command(flatten)]
        input: GameInput,
        /// Starting profile, e.g. 0,0
        #[arg(long, default_value = "0,0")]
        start: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively confirm the smallest sink-free 4-cycle-free graphs
    VerifyLemmas {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List fixtures, or export one as game JSON
    Fixtures {
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_profile(text: &str) -> Result<Profile, Error> {
    let strategies = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::input(format!("bad strategy index {t:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Profile::new(strategies))
}

fn parse_dims(text: &str) -> Result<Vec<usize>, Error> {
    let cleaned = text.replace('x', ",");
    let dims = cleaned
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::input(format!("bad dimension {t:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if dims.is_empty() || dims.iter().any(|&m| m == 0) {
        return Err(Error::input("dims must be positive integers"));
    }
    Ok(dims)
}

fn parse_mixed(text: &str, game: &Game) -> Result<MixedProfile, Error> {
    let dists = text
        .split(';')
        .map(|part| {
            part.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::input(format!("bad probability {t:?}")))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let x = MixedProfile::new(dists)?;
    game.check_mixed_len(&x)?;
    Ok(x)
}

trait CheckLen {
    fn check_mixed_len(&self, x: &MixedProfile) -> Result<(), Error>;
}

impl CheckLen for Game {
    fn check_mixed_len(&self, x: &MixedProfile) -> Result<(), Error> {
        if x.0.len() != self.num_players()
            || x.0.iter().zip(self.dims()).any(|(d, &m)| d.len() != m)
        {
            return Err(Error::input("mixed profile shape does not match the game"));
        }
        Ok(())
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct SinkWire {
    profiles: Vec<Vec<String>>,
    is_pne: bool,
    is_subgame: bool,
}

fn sink_wire(game: &Game, s: &prefgraph::SinkEquilibrium) -> SinkWire {
    SinkWire {
        profiles: s.profiles.iter().map(|p| game.profile_labels(p)).collect(),
        is_pne: s.is_pne,
        is_subgame: s.is_subgame,
    }
}

fn graph_of(game: &Game, kind: GraphVariant) -> Result<PrefGraph, Error> {
    Ok(match kind {
        GraphVariant::Preference => build_preference_graph(game),
        GraphVariant::Reduced => build_reduced_graph(game),
        GraphVariant::BestResponse => build_best_response_graph(game),
        GraphVariant::Symmetric => {
            return Err(Error::input(
                "symmetric graphs have their own export; use --format dot",
            ))
        }
    })
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Graph {
            input,
            kind,
            weighted,
            format,
            out,
        } => {
            let game = input.load()?;
            let content = match (kind, format) {
                (GraphVariant::Symmetric, Format::Dot) => {
                    symmetric_preference_graph(&game)?.to_dot()
                }
                (GraphVariant::Symmetric, _) => {
                    return Err(Error::input("symmetric graphs export as DOT only"))
                }
                (k, Format::Dot) => graph_of(&game, k)?.to_dot(weighted),
                (k, Format::Json) => graph_of(&game, k)?.to_json(),
                (_, Format::Csv) => return Err(Error::input("graphs export as DOT or JSON")),
            };
            emit(&out, &content)
        }
        Command::Sinks { input, out } => {
            let game = input.load()?;
            let sinks = sink_equilibria(&build_preference_graph(&game));
            #[derive(Serialize)]
            struct Wire {
                schema_version: u32,
                sink_equilibria: Vec<SinkWire>,
            }
            let wire = Wire {
                schema_version: 1,
                sink_equilibria: sinks.iter().map(|s| sink_wire(&game, s)).collect(),
            };
            emit(&out, &serde_json::to_string_pretty(&wire).expect("serializable"))
        }
        Command::Classify { input, out } => {
            let game = input.load()?;
            let report = classify(&game);
            emit(&out, &serde_json::to_string_pretty(&report).expect("serializable"))
        }
        Command::Dominance { input, out } => {
            let game = input.load()?;
            let trace = prefgraph::iterated_elimination(&game);
            let solution = prefgraph::is_dominance_solvable(&game);
            #[derive(Serialize)]
            struct Wire {
                schema_version: u32,
                steps: Vec<prefgraph::dominance::EliminationStep>,
                surviving: Vec<Vec<usize>>,
                solution: Option<Vec<String>>,
            }
            let wire = Wire {
                schema_version: 1,
                steps: trace.steps.clone(),
                surviving: trace.surviving.clone(),
                solution: solution.map(|p| game.profile_labels(&p)),
            };
            emit(&out, &serde_json::to_string_pretty(&wire).expect("serializable"))
        }
        Command::Equiv {
            input,
            other,
            other_fixture,
            out,
        } => {
            let u = input.load()?;
            let v = GameInput {
                game: other,
                fixture: other_fixture,
            }
            .load()?;
            let report = prefgraph::equivalence::report(&u, &v)?;
            emit(&out, &report.to_json())
        }
        Command::Reconstruct { edges, out } => {
            let text = std::fs::read_to_string(&edges)
                .map_err(|e| Error::input(format!("cannot read {}: {e}", edges.display())))?;
            let digraph = UnlabeledDigraph::parse(&text)?;
            #[derive(Serialize)]
            struct Wire {
                schema_version: u32,
                recognized: bool,
                dims: Option<Vec<usize>>,
                assignment: Option<Vec<Vec<usize>>>,
                realized_game: Option<serde_json::Value>,
            }
            let wire = match recognize(&digraph) {
                None => Wire {
                    schema_version: 1,
                    recognized: false,
                    dims: None,
                    assignment: None,
                    realized_game: None,
                },
                Some(labeling) => {
                    let game = realize_game(&digraph, &labeling);
                    Wire {
                        schema_version: 1,
                        recognized: true,
                        dims: Some(labeling.dims.clone()),
                        assignment: Some(
                            labeling
                                .assignment
                                .iter()
                                .map(|p| p.strategies().to_vec())
                                .collect(),
                        ),
                        realized_game: Some(
                            serde_json::from_str(&game.to_json()).expect("valid JSON"),
                        ),
                    }
                }
            };
            emit(&out, &serde_json::to_string_pretty(&wire).expect("serializable"))
        }
        Command::Enumerate {
            dims,
            predicate,
            out,
        } => {
            let dims = parse_dims(&dims)?;
            let pred: Box<dyn Fn(&PrefGraph) -> bool> = match predicate {
                PredicateArg::All => Box::new(|_: &PrefGraph| true),
                PredicateArg::NoSinkNo4cycle => Box::new(|g: &PrefGraph| {
                    g.sinks().is_empty() && !prefgraph::analysis::has_4cycle(g)
                }),
                PredicateArg::NoDominated => Box::new(|g: &PrefGraph| {
                    (0..g.dims().len()).all(|i| {
                        (0..g.dims()[i]).all(|s| {
                            (0..g.dims()[i])
                                .all(|t| s == t || !g.strategy_dominates(i, t, s))
                        })
                    })
                }),
            };
            let classes = prefgraph::enumerate_preference_graphs(&dims, pred)?;
            #[derive(Serialize)]
            struct Wire {
                schema_version: u32,
                dims: Vec<usize>,
                class_count: usize,
                classes: Vec<serde_json::Value>,
            }
            let wire = Wire {
                schema_version: 1,
                dims,
                class_count: classes.len(),
                classes: classes
                    .iter()
                    .map(|g| serde_json::from_str(&g.to_json()).expect("valid JSON"))
                    .collect(),
            };
            emit(&out, &serde_json::to_string_pretty(&wire).expect("serializable"))
        }
        Command::Fp {
            input,
            rounds,
            tie_rule,
            initial,
            seed,
            out,
        } => {
            let game = input.load()?;
            let rule = match tie_rule {
                TieRuleArg::Lowest => TieRule::LowestIndex,
                TieRuleArg::Random => TieRule::Random(seed),
            };
            let trace = fictitious_play(&game, rounds, rule, &parse_profile(&initial)?)?;
            if let Some(path) = &out {
                let mut csv = String::from("round,p1,p2\n");
                for (k, p) in trace.profile_sequence.iter().enumerate() {
                    csv.push_str(&format!(
                        "{},{},{}\n",
                        k + 1,
                        p.strategies()[0],
                        p.strategies()[1]
                    ));
                }
                emit(&Some(path.clone()), &csv)?;
            }
            #[derive(Serialize)]
            struct Wire {
                schema_version: u32,
                rounds: usize,
                empirical: Vec<Vec<f64>>,
                tie_rounds: usize,
                nonconvergent_gap: f64,
            }
            let wire = Wire {
                schema_version: 1,
                rounds: trace.rounds(),
                empirical: (0..2).map(|i| trace.empirical_final(i)).collect(),
                tie_rounds: trace.tie_events.len(),
                nonconvergent_gap: trace.empirical_gap(trace.rounds() / 2, trace.rounds()),
            };
            println!("{}", serde_json::to_string_pretty(&wire).expect("serializable"));
            Ok(())
        }
        Command::Replicator {
            input,
            x0,
            step,
            horizon,
            out,
        } => {
            let game = input.load()?;
            let start = match x0 {
                Some(text) => parse_mixed(&text, &game)?,
                None => MixedProfile::uniform(game.dims()),
            };
            let traj = replicator_integrate(&game, &start, step, horizon)?;
            if let Some(path) = &out {
                emit(&Some(path.clone()), &traj.to_csv())?;
            }
            #[derive(Serialize)]
            struct Wire {
                schema_version: u32,
                steps: usize,
                final_state: Vec<Vec<f64>>,
                time_average: Vec<Vec<f64>>,
                max_simplex_drift: f64,
            }
            let wire = Wire {
                schema_version: 1,
                steps: traj.len() - 1,
                final_state: traj.final_state().0,
                time_average: traj.time_average().0,
                max_simplex_drift: traj.max_simplex_drift,
            };
            println!("{}", serde_json::to_string_pretty(&wire).expect("serializable"));
            Ok(())
        }
        Command::Markov {
            input,
            kind,
            prior,
            out,
        } => {
            let game = input.load()?;
            let chain = markov_chain(
                &game,
                match kind {
                    ChainVariant::Preference => MarkovKind::PreferenceMarkov,
                    ChainVariant::BestResponse => MarkovKind::BestResponseMarkov,
                },
            )?;
            let n = chain.n();
            let prior_vec: Vec<f64> = if prior == "uniform" {
                vec![1.0 / n as f64; n]
            } else if let Some(rest) = prior.strip_prefix("point:") {
                let p = parse_profile(rest)?;
                let idx = game.utility(&p, 0).map(|_| game.profile_index(&p))?;
                let mut v = vec![0.0; n];
                v[idx] = 1.0;
                v
            } else {
                return Err(Error::input("prior must be \"uniform\" or \"point:<profile>\""));
            };
            let stationary = stationary_distributions(&chain)?;
            let absorption = absorption_distribution(&chain, &prior_vec)?;
            #[derive(Serialize)]
            struct StationaryWire {
                sink: SinkWire,
                distribution: std::collections::BTreeMap<String, f64>,
            }
            #[derive(Serialize)]
            struct Wire {
                schema_version: u32,
                kind: MarkovKind,
                stationary: Vec<StationaryWire>,
                absorption: Vec<(SinkWire, f64)>,
            }
            let wire = Wire {
                schema_version: 1,
                kind: chain.kind,
                stationary: stationary
                    .iter()
                    .map(|(sink, dist)| StationaryWire {
                        sink: sink_wire(&game, sink),
                        distribution: sink
                            .indices
                            .iter()
                            .zip(&sink.profiles)
                            .map(|(&v, p)| (game.profile_labels(p).join("_"), dist[v]))
                            .collect(),
                    })
                    .collect(),
                absorption: absorption
                    .iter()
                    .map(|(sink, mass)| (sink_wire(&game, sink), *mass))
                    .collect(),
            };
            emit(&out, &serde_json::to_string_pretty(&wire).expect("serializable"))
        }
        Command::Walk {
            input,
            start,
            seed,
            out,
        } => {
            let game = input.load()?;
            let graph = build_preference_graph(&game);
            let (path, sink) = prefgraph::random_walk(&graph, &parse_profile(&start)?, seed)?;
            #[derive(Serialize)]
            struct Wire {
                schema_version: u32,
                path: Vec<Vec<String>>,
                reached: SinkWire,
            }
            let wire = Wire {
                schema_version: 1,
                path: path.iter().map(|p| game.profile_labels(p)).collect(),
                reached: sink_wire(&game, &sink),
            };
            emit(&out, &serde_json::to_string_pretty(&wire).expect("serializable"))
        }
        Command::VerifyLemmas { out } => {
            let report = prefgraph::verify_uniqueness_lemmas();
            emit(&out, &serde_json::to_string_pretty(&report).expect("serializable"))
        }
        Command::Fixtures { fixture, out } => match fixture {
            Some(name) => {
                let f = prefgraph::fixture(&name)?;
                emit(&out, &f.game.to_json())
            }
            None => {
                #[derive(Serialize)]
                struct Wire {
                    schema_version: u32,
                    fixtures: Vec<&'static str>,
                }
                let wire = Wire {
                    schema_version: 1,
                    fixtures: prefgraph::FIXTURE_NAMES.to_vec(),
                };
                emit(&out, &serde_json::to_string_pretty(&wire).expect("serializable"))
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own exit code conventions differ; usage problems are
            // input errors here
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Input(_) => ExitCode::from(1),
                Error::Resource(_) | Error::Numeric(_) => ExitCode::from(2),
            }
        }
    }
}
