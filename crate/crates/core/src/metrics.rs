//! Episode and per-generation evaluation metrics.

use serde::{Deserialize, Serialize};

use crate::coin_game::TraceStep;
use crate::error::{invalid, Result};

/// Score, total coins and own-color coins of one episode, summed over agents.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EpisodeStats {
    pub score: f64,
    pub total_coins: u32,
    pub own_coins: u32,
}

impl EpisodeStats {
    pub fn record(&mut self, step: &TraceStep) {
        self.score += step.outcome.rewards.iter().sum::<f64>();
        if let Some(c) = step.outcome.collected {
            self.total_coins += 1;
            self.own_coins += c.own_color as u32;
        }
    }

    pub fn own_coin_rate(&self) -> f64 {
        own_coin_rate(self.own_coins, self.total_coins).unwrap_or(0.0)
    }
}

pub fn episode_metrics(trace: &[TraceStep]) -> EpisodeStats {
    let mut stats = EpisodeStats::default();
    for step in trace {
        stats.record(step);
    }
    stats
}

/// `own / total`, with `0 / 0` defined as 0.
pub fn own_coin_rate(own_coins: u32, total_coins: u32) -> Result<f64> {
    if own_coins > total_coins {
        return Err(invalid(format!(
            "own coins {own_coins} exceed total coins {total_coins}"
        )));
    }
    if total_coins == 0 {
        return Ok(0.0);
    }
    Ok(own_coins as f64 / total_coins as f64)
}

/// Population metrics of one generation of one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub seed: u64,
    pub generation: usize,
    pub mean_score: f64,
    pub max_score: f64,
    pub mean_total_coins: f64,
    pub mean_own_coins: f64,
    /// Micro-averaged: population own coins over population total coins.
    pub own_coin_rate: f64,
}

pub fn aggregate(stats: &[EpisodeStats], generation: usize, seed: u64) -> Result<GenerationRecord> {
    if stats.is_empty() {
        return Err(invalid("cannot aggregate an empty population"));
    }
    let n = stats.len() as f64;
    let score_sum: f64 = stats.iter().map(|s| s.score).sum();
    let total: u64 = stats.iter().map(|s| s.total_coins as u64).sum();
    let own: u64 = stats.iter().map(|s| s.own_coins as u64).sum();
    Ok(GenerationRecord {
        seed,
        generation,
        mean_score: score_sum / n,
        max_score: stats.iter().map(|s| s.score).fold(f64::NEG_INFINITY, f64::max),
        mean_total_coins: total as f64 / n,
        mean_own_coins: own as f64 / n,
        own_coin_rate: if total == 0 { 0.0 } else { own as f64 / total as f64 },
    })
}
