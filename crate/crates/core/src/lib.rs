//! Evolutionary training of variational quantum circuit agents and neural
//! baselines in the cooperative two-player Coin Game.
//!
//! Quantum circuits are simulated exactly as dense statevectors. Training is
//! gradient free: truncation selection with an elite, optional crossover and
//! Gaussian mutation over flat parameter vectors.

pub mod coin_game;
pub mod error;
pub mod evolution;
pub mod harness;
pub mod metrics;
pub mod nn;
pub mod policy;
pub mod seed;
pub mod sim;
pub mod vqc;

pub use coin_game::{Action, CoinColor, CoinGameState, Pos, StepOutcome, TraceStep};
pub use error::{Error, Result};
pub use evolution::{
    evaluate_fitness, run_episode, run_evolution, AgentSpec, EvaluatedIndividual, EvolutionConfig,
    Genome, RunResult, Strategy,
};
pub use metrics::{EpisodeStats, GenerationRecord};
pub use nn::{NnGenome, NnShape};
pub use policy::{select_action, ActionValues};
pub use sim::StateVector;
pub use vqc::{vqc_param_count, VqcGenome, VqcShape};
