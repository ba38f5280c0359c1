//! Gradient-free training by truncation selection, an unmutated elite,
//! optional crossover and Gaussian mutation.
//!
//! Each generation every individual plays one fresh self-play episode (both
//! agents driven by the same genome) seeded from `(run_seed, generation,
//! index)`; its fitness is the summed reward of both agents.

use std::fmt;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coin_game::{CoinGameState, TraceStep, DEFAULT_EPISODE_LEN, N_ACTIONS, OBS_DIM};
use crate::error::{invalid, Error, Result};
use crate::metrics::{aggregate, EpisodeStats, GenerationRecord};
use crate::nn::{NnGenome, NnShape};
use crate::policy::select_action;
use crate::seed::{derive_seed, rng_for};
use crate::vqc::{CompiledVqc, VqcGenome, VqcShape};

// Stream tags for seed derivation.
const INIT_STREAM: u64 = 0x1;
const BREED_STREAM: u64 = 0x2;
const EPISODE_STREAM: u64 = 0x3;
const ACTION_STREAM: u64 = 0x4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Mutation only.
    Mu,
    /// Crossover at a uniformly random point, then mutation.
    RaReMu,
    /// Crossover after a uniformly random variational layer, then mutation.
    LaReMu,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mu" => Ok(Strategy::Mu),
            "raremu" => Ok(Strategy::RaReMu),
            "laremu" => Ok(Strategy::LaReMu),
            other => Err(Error::Config(format!(
                "unknown strategy {other:?} (expected mu, raremu or laremu)"
            ))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Mu => "mu",
            Strategy::RaReMu => "raremu",
            Strategy::LaReMu => "laremu",
        })
    }
}

/// Which kind of agent a population consists of, with its shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AgentSpec {
    Vqc { n_qubits: usize, n_layers: usize },
    Nn { hidden: (usize, usize) },
    /// Uniformly random legal moves; has no parameters.
    Random,
}

impl AgentSpec {
    pub fn name(&self) -> &'static str {
        match self {
            AgentSpec::Vqc { .. } => "vqc",
            AgentSpec::Nn { .. } => "nn",
            AgentSpec::Random => "random",
        }
    }

    pub fn param_count(&self) -> usize {
        match *self {
            AgentSpec::Vqc { n_qubits, n_layers } => {
                crate::vqc::vqc_param_count(n_qubits, n_layers, N_ACTIONS)
            }
            AgentSpec::Nn { hidden } => NnShape {
                input_dim: OBS_DIM,
                hidden,
                n_actions: N_ACTIONS,
            }
            .param_count(),
            AgentSpec::Random => 0,
        }
    }

    pub fn random_genome<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Genome> {
        Ok(match *self {
            AgentSpec::Vqc { n_qubits, n_layers } => {
                if (1usize << n_qubits.min(63)) < OBS_DIM {
                    return Err(invalid(format!(
                        "{n_qubits} qubits cannot embed {OBS_DIM} observation features"
                    )));
                }
                let shape = VqcShape::new(n_qubits, n_layers, N_ACTIONS)?;
                Genome::Vqc(VqcGenome::random(shape, rng)?)
            }
            AgentSpec::Nn { hidden } => {
                let shape = NnShape::new(OBS_DIM, hidden, N_ACTIONS)?;
                Genome::Nn(NnGenome::random(shape, rng)?)
            }
            AgentSpec::Random => Genome::Random,
        })
    }
}

/// The evolvable parameter vector of one individual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Genome {
    Vqc(VqcGenome),
    Nn(NnGenome),
    Random,
}

impl Genome {
    pub fn params(&self) -> &[f64] {
        match self {
            Genome::Vqc(g) => g.params(),
            Genome::Nn(g) => g.params(),
            Genome::Random => &[],
        }
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        match self {
            Genome::Vqc(g) => g.params_mut(),
            Genome::Nn(g) => g.params_mut(),
            Genome::Random => &mut [],
        }
    }

    pub fn param_count(&self) -> usize {
        self.params().len()
    }

    fn same_shape(&self, other: &Genome) -> bool {
        match (self, other) {
            (Genome::Vqc(a), Genome::Vqc(b)) => a.shape() == b.shape(),
            (Genome::Nn(a), Genome::Nn(b)) => a.shape() == b.shape(),
            (Genome::Random, Genome::Random) => true,
            _ => false,
        }
    }

    fn with_params(&self, params: Vec<f64>) -> Result<Genome> {
        Ok(match self {
            Genome::Vqc(g) => Genome::Vqc(VqcGenome::from_params(g.shape(), params)?),
            Genome::Nn(g) => Genome::Nn(NnGenome::from_params(g.shape(), params)?),
            Genome::Random => Genome::Random,
        })
    }
}

enum Policy<'a> {
    Vqc(CompiledVqc),
    Nn(&'a NnGenome),
    Random(Box<rand_chacha::ChaCha8Rng>),
}

impl Policy<'_> {
    fn act(&mut self, state: &CoinGameState) -> Result<usize> {
        let mask = state.legal_mask();
        let obs = || state.observe_for(state.active_agent);
        match self {
            Policy::Vqc(circuit) => select_action(&circuit.forward(&obs())?, &mask),
            Policy::Nn(net) => select_action(&net.forward(&obs())?, &mask),
            Policy::Random(rng) => {
                let legal: Vec<usize> = (0..N_ACTIONS).filter(|&a| mask[a]).collect();
                Ok(*legal.choose(rng.as_mut()).expect("every cell has a legal move"))
            }
        }
    }
}

/// Plays one self-play episode and returns its trace.
pub fn run_episode(genome: &Genome, episode_seed: u64, episode_len: usize) -> Result<Vec<TraceStep>> {
    let mut env_rng = rng_for(episode_seed, &[EPISODE_STREAM]);
    let mut policy = match genome {
        Genome::Vqc(g) => Policy::Vqc(g.compile()),
        Genome::Nn(g) => Policy::Nn(g),
        Genome::Random => Policy::Random(Box::new(rng_for(episode_seed, &[ACTION_STREAM]))),
    };
    let mut state = CoinGameState::reset(&mut env_rng);
    let mut trace = Vec::with_capacity(episode_len);
    while !state.is_done(episode_len) {
        let agent = state.active_agent;
        let action = policy.act(&state)?;
        let (next, outcome) = state.step(action, &mut env_rng)?;
        trace.push(TraceStep {
            step: state.step_count,
            agent,
            action,
            outcome,
        });
        state = next;
    }
    Ok(trace)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatedIndividual {
    pub genome: Genome,
    pub stats: EpisodeStats,
}

impl EvaluatedIndividual {
    /// Utilitarian fitness: summed reward of both agents.
    pub fn fitness(&self) -> f64 {
        self.stats.score
    }
}

pub fn evaluate_fitness(genome: &Genome, episode_seed: u64, episode_len: usize) -> Result<EvaluatedIndividual> {
    let trace = run_episode(genome, episode_seed, episode_len)?;
    Ok(EvaluatedIndividual {
        genome: genome.clone(),
        stats: crate::metrics::episode_metrics(&trace),
    })
}

/// Indices of the `tau` fittest individuals, best first, ties to the lower index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    pub parents: Vec<usize>,
    pub elite: usize,
}

pub fn truncation_select(fitness: &[f64], tau: usize) -> Result<Selection> {
    if tau == 0 || tau > fitness.len() {
        return Err(invalid(format!(
            "truncation {tau} not in 1..={}",
            fitness.len()
        )));
    }
    let mut order: Vec<usize> = (0..fitness.len()).collect();
    // Stable sort keeps lower indices first among equal fitness.
    order.sort_by(|&a, &b| fitness[b].total_cmp(&fitness[a]));
    order.truncate(tau);
    Ok(Selection {
        elite: order[0],
        parents: order,
    })
}

/// Adds `sigma * N(0, 1)` to every parameter. No clipping.
pub fn mutate<R: Rng + ?Sized>(genome: &mut Genome, sigma: f64, rng: &mut R) {
    if sigma == 0.0 {
        return;
    }
    for p in genome.params_mut() {
        let eps: f64 = rng.sample(StandardNormal);
        *p += sigma * eps;
    }
}

/// `a[..point] ++ b[point..]` over the flat parameter layout.
pub fn crossover_at(a: &Genome, b: &Genome, point: usize) -> Result<Genome> {
    if !a.same_shape(b) {
        return Err(invalid("crossover parents have different shapes"));
    }
    let n = a.param_count();
    if point > n {
        return Err(invalid(format!("crossover point {point} beyond {n} parameters")));
    }
    let mut params = a.params()[..point].to_vec();
    params.extend_from_slice(&b.params()[point..]);
    a.with_params(params)
}

/// Crossover at a point drawn uniformly from `0..=param_count`.
pub fn crossover_random<R: Rng + ?Sized>(a: &Genome, b: &Genome, rng: &mut R) -> Result<Genome> {
    let point = rng.random_range(0..=a.param_count());
    crossover_at(a, b, point)
}

/// Crossover point right after the last angle of `layer`.
pub fn layer_crossover_point(genome: &Genome, layer: usize) -> Result<usize> {
    match genome {
        Genome::Vqc(g) => {
            let shape = g.shape();
            if layer >= shape.n_layers {
                return Err(invalid(format!(
                    "layer {layer} out of range for {} layers",
                    shape.n_layers
                )));
            }
            Ok((layer + 1) * shape.layer_width())
        }
        _ => Err(invalid("layer-wise crossover needs VQC genomes")),
    }
}

/// Parent A supplies layers `0..=l` for a uniformly drawn `l`, parent B the
/// remaining layers and all biases.
pub fn crossover_layerwise<R: Rng + ?Sized>(a: &Genome, b: &Genome, rng: &mut R) -> Result<Genome> {
    let n_layers = match a {
        Genome::Vqc(g) => g.shape().n_layers,
        _ => return Err(invalid("layer-wise crossover needs VQC genomes")),
    };
    let layer = rng.random_range(0..n_layers);
    crossover_at(a, b, layer_crossover_point(a, layer)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub population_size: usize,
    pub generations: usize,
    pub episode_steps: usize,
    pub truncation: usize,
    pub mutation_power: f64,
    pub strategy: Strategy,
    pub agent: AgentSpec,
    pub run_seed: u64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            population_size: 250,
            generations: 200,
            episode_steps: DEFAULT_EPISODE_LEN,
            truncation: 5,
            mutation_power: 0.01,
            strategy: Strategy::Mu,
            agent: AgentSpec::Vqc {
                n_qubits: 6,
                n_layers: 8,
            },
            run_seed: 0,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::Config("population size must be at least 2".into()));
        }
        if self.truncation == 0 || self.truncation >= self.population_size {
            return Err(Error::Config(format!(
                "truncation {} must satisfy 1 <= tau < population {}",
                self.truncation, self.population_size
            )));
        }
        if !self.mutation_power.is_finite() || self.mutation_power < 0.0 {
            return Err(Error::Config(format!(
                "mutation power {} must be finite and >= 0",
                self.mutation_power
            )));
        }
        if self.episode_steps == 0 {
            return Err(Error::Config("episode length must be positive".into()));
        }
        if self.strategy != Strategy::Mu && self.truncation < 2 && self.agent != AgentSpec::Random {
            return Err(Error::Config(
                "crossover strategies need two distinct parents (tau >= 2)".into(),
            ));
        }
        if self.strategy == Strategy::LaReMu && matches!(self.agent, AgentSpec::Nn { .. }) {
            return Err(Error::Config("layer-wise crossover is only defined for VQC agents".into()));
        }
        // Surfaces shape errors before any work is done.
        self.agent.random_genome(&mut rng_for(0, &[]))?;
        Ok(())
    }

    pub fn episode_seed(&self, generation: usize, index: usize) -> u64 {
        derive_seed(self.run_seed, &[EPISODE_STREAM, generation as u64, index as u64])
    }
}

pub fn initial_population(config: &EvolutionConfig) -> Result<Vec<Genome>> {
    let mut rng = rng_for(config.run_seed, &[INIT_STREAM]);
    (0..config.population_size)
        .map(|_| config.agent.random_genome(&mut rng))
        .collect()
}

/// Evaluates a whole population; individuals are independent, so this runs
/// on the rayon pool and the result order follows the population order.
pub fn evaluate_population(
    population: &[Genome],
    config: &EvolutionConfig,
    generation: usize,
) -> Result<Vec<EvaluatedIndividual>> {
    population
        .par_iter()
        .enumerate()
        .map(|(i, g)| evaluate_fitness(g, config.episode_seed(generation, i), config.episode_steps))
        .collect()
}

/// Breeds `eta - 1` mutated offspring from the top `tau` and appends the
/// unmutated elite.
pub fn next_generation<R: Rng + ?Sized>(
    evaluated: &[EvaluatedIndividual],
    config: &EvolutionConfig,
    rng: &mut R,
) -> Result<Vec<Genome>> {
    let fitness: Vec<f64> = evaluated.iter().map(|e| e.fitness()).collect();
    let selection = truncation_select(&fitness, config.truncation)?;
    let parent = |i: usize| &evaluated[selection.parents[i]].genome;
    let tau = selection.parents.len();

    let mut next = Vec::with_capacity(config.population_size);
    for _ in 0..config.population_size - 1 {
        let mut child = match config.strategy {
            Strategy::Mu => parent(rng.random_range(0..tau)).clone(),
            Strategy::RaReMu | Strategy::LaReMu => {
                let (a, b) = distinct_pair(tau, rng);
                if config.strategy == Strategy::RaReMu {
                    crossover_random(parent(a), parent(b), rng)?
                } else {
                    crossover_layerwise(parent(a), parent(b), rng)?
                }
            }
        };
        mutate(&mut child, config.mutation_power, rng);
        next.push(child);
    }
    next.push(evaluated[selection.elite].genome.clone());
    Ok(next)
}

fn distinct_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    if n < 2 {
        return (0, 0);
    }
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub records: Vec<GenerationRecord>,
    /// Best individual of the last evaluated generation.
    pub final_elite: Genome,
}

pub fn run_evolution(config: &EvolutionConfig) -> Result<RunResult> {
    run_evolution_with(config, |_, _| {})
}

/// Like [`run_evolution`], handing every evaluated generation to `observe`.
pub fn run_evolution_with<F>(config: &EvolutionConfig, mut observe: F) -> Result<RunResult>
where
    F: FnMut(usize, &[EvaluatedIndividual]),
{
    config.validate()?;
    let mut population = initial_population(config)?;
    let mut records = Vec::with_capacity(config.generations);
    let mut final_elite = population[0].clone();
    for generation in 0..config.generations {
        let evaluated = evaluate_population(&population, config, generation)?;
        observe(generation, &evaluated);
        let stats: Vec<EpisodeStats> = evaluated.iter().map(|e| e.stats).collect();
        records.push(aggregate(&stats, generation, config.run_seed)?);

        if generation + 1 == config.generations {
            let fitness: Vec<f64> = evaluated.iter().map(|e| e.fitness()).collect();
            final_elite = evaluated[truncation_select(&fitness, 1)?.elite].genome.clone();
        } else {
            let mut rng = rng_for(config.run_seed, &[BREED_STREAM, generation as u64]);
            population = next_generation(&evaluated, config, &mut rng)?;
        }
    }
    Ok(RunResult {
        records,
        final_elite,
    })
}
