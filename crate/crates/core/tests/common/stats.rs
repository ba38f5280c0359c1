//! Mutation sampling and moment statistics shared by the distribution checks.

use evoqmarl_core::evolution::{mutate, Genome};
use evoqmarl_core::nn::{NnGenome, NnShape};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Two-sided 1% critical value of the standard normal.
const Z_99: f64 = 2.575_829;
/// 1% critical value of chi-squared with 2 degrees of freedom.
const CHI2_2_99: f64 = 9.210_340;

/// A large all-zero genome, so its mutated parameters are the raw deltas.
fn zero_genome() -> Genome {
    let shape = NnShape::new(36, (160, 160), 4).unwrap();
    Genome::Nn(NnGenome::from_params(shape, vec![0.0; shape.param_count()]).unwrap())
}

/// `samples` parameter deltas after applying each mutation power in turn.
pub fn deltas(sigma_steps: &[f64], samples: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    while out.len() < samples {
        let mut g = zero_genome();
        for &s in sigma_steps {
            mutate(&mut g, s, &mut rng);
        }
        out.extend_from_slice(g.params());
    }
    out.truncate(samples);
    out
}

pub struct Moments {
    pub mean: f64,
    pub std: f64,
    pub skew: f64,
    pub excess_kurtosis: f64,
}

pub fn moments(x: &[f64]) -> Moments {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let m2 = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m3 = x.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
    let m4 = x.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    Moments {
        mean,
        std: (m2 * n / (n - 1.0)).sqrt(),
        skew: m3 / m2.powf(1.5),
        excess_kurtosis: m4 / (m2 * m2) - 3.0,
    }
}

/// Mean z-test, variance z-test (normal approximation of chi-squared) and a
/// Jarque-Bera shape test, each at the 1% level.
pub fn passes_normal_moment_test(x: &[f64], sigma: f64) -> bool {
    let n = x.len() as f64;
    let m = moments(x);
    let z_mean = m.mean / (sigma / n.sqrt());
    let z_var = ((m.std / sigma).powi(2) - 1.0) / (2.0 / (n - 1.0)).sqrt();
    let jb = n / 6.0 * (m.skew.powi(2) + m.excess_kurtosis.powi(2) / 4.0);
    z_mean.abs() < Z_99 && z_var.abs() < Z_99 && jb < CHI2_2_99
}

