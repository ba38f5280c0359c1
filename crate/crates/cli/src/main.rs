mod args;

use std::fs;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use evoqmarl_core::harness::{aggregate_csv_path, episode_trace, manifest_path, run_experiment};

use crate::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match cli.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cli, config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli, config: evoqmarl_core::harness::ExperimentConfig) -> anyhow::Result<()> {
    let evo = &config.evolution;
    eprintln!(
        "{} agent ({} parameters), strategy {}, population {}, {} generations, seeds {:?}",
        evo.agent.name(),
        evo.agent.param_count(),
        evo.strategy,
        evo.population_size,
        evo.generations,
        config.seeds
    );
    let output = run_experiment(&config)
        .with_context(|| format!("experiment writing to {}", config.out_dir.display()))?;

    for (seed, records) in &output.runs {
        if let Some(last) = records.last() {
            eprintln!(
                "seed {seed}: final mean score {:.3}, coins {:.2}, own coin rate {:.3}",
                last.mean_score, last.mean_total_coins, last.own_coin_rate
            );
        }
    }
    if cli.trace {
        for elite in &output.manifest.elites {
            let path = config.out_dir.join(format!("trace_seed_{}.txt", elite.seed));
            let text = episode_trace(&elite.genome, elite.seed, evo.episode_steps)?;
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    eprintln!(
        "wrote {} and {}",
        aggregate_csv_path(&config.out_dir).display(),
        manifest_path(&config.out_dir).display()
    );
    Ok(())
}
