use std::path::PathBuf;

use clap::Parser;
use evoqmarl_core::evolution::Strategy;
use evoqmarl_core::harness::{AgentKind, ExperimentConfig, Overrides};

/// Evolve VQC or neural-network agents in the cooperative Coin Game.
///
/// Settings resolve as: flags, then the config file, then built-in defaults.
#[derive(Debug, Parser)]
#[command(name = "evoqmarl", version)]
pub struct Cli {
    /// Agent kind: vqc, nn or random.
    #[arg(long, value_parser = parse_agent)]
    pub agent: Option<AgentKind>,

    /// Generational strategy: mu, raremu or laremu.
    #[arg(long, value_parser = parse_strategy)]
    pub strategy: Option<Strategy>,

    /// Variational layers of the VQC.
    #[arg(long)]
    pub layers: Option<usize>,

    /// Qubits of the VQC.
    #[arg(long)]
    pub qubits: Option<usize>,

    /// Hidden layer sizes of the NN, as H1,H2.
    #[arg(long, value_name = "H1,H2")]
    pub hidden: Option<String>,

    #[arg(long)]
    pub population: Option<usize>,

    #[arg(long)]
    pub generations: Option<usize>,

    /// Number of parents kept by truncation selection.
    #[arg(long)]
    pub tau: Option<usize>,

    /// Mutation power.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,

    /// Steps per evaluation episode (both agents together).
    #[arg(long)]
    pub episode_steps: Option<usize>,

    /// Run seeds, e.g. `0,1,2` or `0..5`.
    #[arg(long)]
    pub seeds: Option<String>,

    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Flat `key = value` config file.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Worker threads for fitness evaluation.
    #[arg(long)]
    pub threads: Option<usize>,

    /// Also write a step-by-step episode trace of each seed's final elite.
    #[arg(long)]
    pub trace: bool,
}

fn parse_agent(s: &str) -> Result<AgentKind, String> {
    s.parse().map_err(|e: evoqmarl_core::Error| e.to_string())
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: evoqmarl_core::Error| e.to_string())
}

impl Cli {
    fn overrides(&self) -> evoqmarl_core::Result<Overrides> {
        let mut o = Overrides {
            agent: self.agent,
            strategy: self.strategy,
            layers: self.layers,
            qubits: self.qubits,
            population: self.population,
            generations: self.generations,
            tau: self.tau,
            sigma: self.sigma,
            episode_steps: self.episode_steps,
            out: self.out.clone(),
            threads: self.threads,
            ..Overrides::default()
        };
        if let Some(h) = &self.hidden {
            o.set("hidden", h)?;
        }
        if let Some(s) = &self.seeds {
            o.set("seeds", s)?;
        }
        Ok(o)
    }

    pub fn resolve(&self) -> evoqmarl_core::Result<ExperimentConfig> {
        let file = match &self.config {
            Some(path) => Overrides::from_config_file(path)?,
            None => Overrides::default(),
        };
        file.merged_with(self.overrides()?).resolve()
    }
}
