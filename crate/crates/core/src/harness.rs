//! Multi-seed experiment runner: configuration resolution, per-generation CSV
//! output and the JSON run manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{run_episode, run_evolution, AgentSpec, EvolutionConfig, Genome, Strategy};
use crate::metrics::GenerationRecord;

pub const CSV_HEADER: &str =
    "seed,generation,mean_score,max_score,mean_total_coins,mean_own_coins,own_coin_rate";

pub const DEFAULT_SEEDS: [u64; 5] = [0, 1, 2, 3, 4];
pub const DEFAULT_LAYERS: usize = 8;
pub const DEFAULT_QUBITS: usize = 6;
pub const DEFAULT_HIDDEN: (usize, usize) = (64, 64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgentKind {
    Vqc,
    Nn,
    Random,
}

impl std::str::FromStr for AgentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vqc" => Ok(AgentKind::Vqc),
            "nn" => Ok(AgentKind::Nn),
            "random" => Ok(AgentKind::Random),
            other => Err(Error::Config(format!(
                "unknown agent {other:?} (expected vqc, nn or random)"
            ))),
        }
    }
}

/// Partially specified settings from one source (config file or flags).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub agent: Option<AgentKind>,
    pub strategy: Option<Strategy>,
    pub layers: Option<usize>,
    pub qubits: Option<usize>,
    pub hidden: Option<(usize, usize)>,
    pub population: Option<usize>,
    pub generations: Option<usize>,
    pub tau: Option<usize>,
    pub sigma: Option<f64>,
    pub episode_steps: Option<usize>,
    pub seeds: Option<Vec<u64>>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Overrides {
    /// Fields set in `other` win.
    pub fn merged_with(self, other: Overrides) -> Overrides {
        Overrides {
            agent: other.agent.or(self.agent),
            strategy: other.strategy.or(self.strategy),
            layers: other.layers.or(self.layers),
            qubits: other.qubits.or(self.qubits),
            hidden: other.hidden.or(self.hidden),
            population: other.population.or(self.population),
            generations: other.generations.or(self.generations),
            tau: other.tau.or(self.tau),
            sigma: other.sigma.or(self.sigma),
            episode_steps: other.episode_steps.or(self.episode_steps),
            seeds: other.seeds.or(self.seeds),
            out: other.out.or(self.out),
            threads: other.threads.or(self.threads),
        }
    }

    /// Sets one field from a textual key, accepting the CLI flag names with or
    /// without dashes.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim();
        match key.as_str() {
            "agent" => self.agent = Some(value.parse()?),
            "strategy" => self.strategy = Some(value.parse()?),
            "layers" => self.layers = Some(parse_num(&key, value)?),
            "qubits" => self.qubits = Some(parse_num(&key, value)?),
            "hidden" => self.hidden = Some(parse_hidden(value)?),
            "population" => self.population = Some(parse_num(&key, value)?),
            "generations" => self.generations = Some(parse_num(&key, value)?),
            "tau" => self.tau = Some(parse_num(&key, value)?),
            "sigma" => self.sigma = Some(parse_num(&key, value)?),
            "episode-steps" => self.episode_steps = Some(parse_num(&key, value)?),
            "seeds" => self.seeds = Some(parse_seeds(value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "threads" => self.threads = Some(parse_num(&key, value)?),
            other => return Err(Error::Config(format!("unknown setting {other:?}"))),
        }
        Ok(())
    }

    /// Reads a flat `key = value` file; blank lines and `#` comments are skipped.
    pub fn from_config_text(text: &str) -> Result<Overrides> {
        let mut out = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| {
                    Error::Config(format!("line {}: expected key = value", lineno + 1))
                })?;
            out.set(key, value)
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(out)
    }

    pub fn from_config_file(path: &Path) -> Result<Overrides> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_config_text(&text)
    }

    /// Fills unset fields with defaults and validates the result.
    pub fn resolve(self) -> Result<ExperimentConfig> {
        let agent = match self.agent.unwrap_or(AgentKind::Vqc) {
            AgentKind::Vqc => AgentSpec::Vqc {
                n_qubits: self.qubits.unwrap_or(DEFAULT_QUBITS),
                n_layers: self.layers.unwrap_or(DEFAULT_LAYERS),
            },
            AgentKind::Nn => AgentSpec::Nn {
                hidden: self.hidden.unwrap_or(DEFAULT_HIDDEN),
            },
            AgentKind::Random => AgentSpec::Random,
        };
        let defaults = EvolutionConfig::default();
        let evolution = EvolutionConfig {
            population_size: self.population.unwrap_or(defaults.population_size),
            generations: self.generations.unwrap_or(defaults.generations),
            episode_steps: self.episode_steps.unwrap_or(defaults.episode_steps),
            truncation: self.tau.unwrap_or(defaults.truncation),
            mutation_power: self.sigma.unwrap_or(defaults.mutation_power),
            strategy: self.strategy.unwrap_or(defaults.strategy),
            agent,
            run_seed: 0,
        };
        evolution.validate()?;
        let seeds = self.seeds.unwrap_or_else(|| DEFAULT_SEEDS.to_vec());
        if seeds.is_empty() {
            return Err(Error::Config("seed list is empty".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("thread count must be positive".into()));
        }
        Ok(ExperimentConfig {
            evolution,
            seeds,
            out_dir: self.out.unwrap_or_else(|| PathBuf::from("runs")),
            threads: self.threads,
        })
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value {value:?} for {key}")))
}

fn parse_hidden(value: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((parse_num("hidden", a)?, parse_num("hidden", b)?)),
        _ => Err(Error::Config(format!(
            "hidden expects two comma-separated sizes, got {value:?}"
        ))),
    }
}

/// Comma-separated seeds; `a..b` expands to the half-open range.
fn parse_seeds(value: &str) -> Result<Vec<u64>> {
    let mut seeds = Vec::new();
    for part in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: u64 = parse_num("seeds", lo)?;
            let hi: u64 = parse_num("seeds", hi)?;
            seeds.extend(lo..hi);
        } else {
            seeds.push(parse_num("seeds", part)?);
        }
    }
    Ok(seeds)
}

/// Fully resolved experiment settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// `run_seed` is replaced by each entry of `seeds`.
    pub evolution: EvolutionConfig,
    pub seeds: Vec<u64>,
    pub out_dir: PathBuf,
    /// Evaluation worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Overrides::default().resolve().expect("defaults are valid")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedElite {
    pub seed: u64,
    pub genome: Genome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub config: ExperimentConfig,
    pub param_count: usize,
    pub elites: Vec<SeedElite>,
    pub duration_secs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    /// Per-seed records, in seed order.
    pub runs: Vec<(u64, Vec<GenerationRecord>)>,
    /// Per-generation means across seeds.
    pub aggregate: Vec<GenerationRecord>,
    pub manifest: RunManifest,
}

pub fn seed_csv_path(out_dir: &Path, seed: u64) -> PathBuf {
    out_dir.join(format!("seed_{seed}.csv"))
}

pub fn aggregate_csv_path(out_dir: &Path) -> PathBuf {
    out_dir.join("aggregate.csv")
}

pub fn manifest_path(out_dir: &Path) -> PathBuf {
    out_dir.join("manifest.json")
}

fn csv_row(out: &mut String, seed: &str, r: &GenerationRecord) {
    writeln!(
        out,
        "{seed},{},{:.6},{:.6},{:.6},{:.6},{:.6}",
        r.generation, r.mean_score, r.max_score, r.mean_total_coins, r.mean_own_coins, r.own_coin_rate
    )
    .expect("writing to a String cannot fail");
}

/// Per-seed CSV text: header plus one row per generation, LF line endings.
pub fn records_to_csv(records: &[GenerationRecord]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in records {
        csv_row(&mut out, &r.seed.to_string(), r);
    }
    out
}

/// Same schema as the per-seed files, with `all` in the seed column.
pub fn aggregate_to_csv(records: &[GenerationRecord]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in records {
        csv_row(&mut out, "all", r);
    }
    out
}

/// Means of every column across runs, generation by generation.
pub fn mean_across_seeds(runs: &[(u64, Vec<GenerationRecord>)]) -> Vec<GenerationRecord> {
    let Some((_, first)) = runs.first() else {
        return Vec::new();
    };
    let n = runs.len() as f64;
    (0..first.len())
        .map(|g| {
            let col = |f: fn(&GenerationRecord) -> f64| {
                runs.iter().map(|(_, recs)| f(&recs[g])).sum::<f64>() / n
            };
            GenerationRecord {
                seed: 0,
                generation: g,
                mean_score: col(|r| r.mean_score),
                max_score: col(|r| r.max_score),
                mean_total_coins: col(|r| r.mean_total_coins),
                mean_own_coins: col(|r| r.mean_own_coins),
                own_coin_rate: col(|r| r.own_coin_rate),
            }
        })
        .collect()
}

/// Runs every seed without touching the filesystem.
pub fn run_seeds(config: &ExperimentConfig) -> Result<Vec<(u64, Vec<GenerationRecord>, Genome)>> {
    let work = || -> Result<Vec<_>> {
        config
            .seeds
            .iter()
            .map(|&seed| {
                let evo = EvolutionConfig {
                    run_seed: seed,
                    ..config.evolution
                };
                let result = run_evolution(&evo)?;
                Ok((seed, result.records, result.final_elite))
            })
            .collect()
    };
    match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}")))?
            .install(work),
        None => work(),
    }
}

/// Runs all seeds and writes `seed_<s>.csv`, `aggregate.csv` and
/// `manifest.json` into the output directory.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let started = Instant::now();
    fs::create_dir_all(&config.out_dir)?;
    let results = run_seeds(config)?;

    let mut runs = Vec::with_capacity(results.len());
    let mut elites = Vec::with_capacity(results.len());
    for (seed, records, elite) in results {
        fs::write(seed_csv_path(&config.out_dir, seed), records_to_csv(&records))?;
        runs.push((seed, records));
        elites.push(SeedElite { seed, genome: elite });
    }
    let aggregate = mean_across_seeds(&runs);
    fs::write(aggregate_csv_path(&config.out_dir), aggregate_to_csv(&aggregate))?;

    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        param_count: config.evolution.agent.param_count(),
        elites,
        duration_secs: started.elapsed().as_secs_f64(),
    };
    fs::write(
        manifest_path(&config.out_dir),
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    Ok(ExperimentOutput {
        runs,
        aggregate,
        manifest,
    })
}

/// Text trace of one self-play episode, one line per step:
/// `step agent action reward0 reward1 event`.
pub fn episode_trace(genome: &Genome, episode_seed: u64, episode_len: usize) -> Result<String> {
    let mut out = String::from("# step agent action reward0 reward1 event\n");
    for step in run_episode(genome, episode_seed, episode_len)? {
        writeln!(out, "{step}").expect("writing to a String cannot fail");
    }
    Ok(out)
}
