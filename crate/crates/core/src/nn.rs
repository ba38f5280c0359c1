//! Fully connected baseline: two tanh hidden layers and a linear output layer.
//!
//! Flat layout: `W1 (h1 x input, row-major by output unit), b1, W2, b2, W3, b3`.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NnShape {
    pub input_dim: usize,
    pub hidden: (usize, usize),
    pub n_actions: usize,
}

impl NnShape {
    pub fn new(input_dim: usize, hidden: (usize, usize), n_actions: usize) -> Result<Self> {
        let shape = Self {
            input_dim,
            hidden,
            n_actions,
        };
        shape.validate()?;
        Ok(shape)
    }

    fn validate(&self) -> Result<()> {
        if self.input_dim == 0 || self.hidden.0 == 0 || self.hidden.1 == 0 || self.n_actions == 0 {
            return Err(invalid(format!("network dimensions must be positive: {self:?}")));
        }
        Ok(())
    }

    pub fn param_count(&self) -> usize {
        let (h1, h2) = self.hidden;
        (self.input_dim * h1 + h1) + (h1 * h2 + h2) + (h2 * self.n_actions + self.n_actions)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NnGenome {
    shape: NnShape,
    params: Vec<f64>,
}

impl NnGenome {
    /// Every weight and bias uniform in `[-pi, pi]`.
    pub fn random<R: Rng + ?Sized>(shape: NnShape, rng: &mut R) -> Result<Self> {
        shape.validate()?;
        let params = (0..shape.param_count())
            .map(|_| rng.random_range(-PI..=PI))
            .collect();
        Ok(Self { shape, params })
    }

    pub fn from_params(shape: NnShape, params: Vec<f64>) -> Result<Self> {
        shape.validate()?;
        if params.len() != shape.param_count() {
            return Err(invalid(format!(
                "network shape {shape:?} needs {} parameters, got {}",
                shape.param_count(),
                params.len()
            )));
        }
        Ok(Self { shape, params })
    }

    pub fn shape(&self) -> NnShape {
        self.shape
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn forward(&self, observation: &[f64]) -> Result<Vec<f64>> {
        if observation.len() != self.shape.input_dim {
            return Err(invalid(format!(
                "observation has {} entries, network expects {}",
                observation.len(),
                self.shape.input_dim
            )));
        }
        let (h1, h2) = self.shape.hidden;
        let rest = &self.params[..];
        let (hidden1, rest) = dense(rest, observation, h1, Some(f64::tanh));
        let (hidden2, rest) = dense(rest, &hidden1, h2, Some(f64::tanh));
        let (out, rest) = dense(rest, &hidden2, self.shape.n_actions, None);
        debug_assert!(rest.is_empty());
        Ok(out)
    }
}

/// One affine layer read off the front of `params`; returns the outputs and
/// the unread parameters.
fn dense<'a>(
    params: &'a [f64],
    input: &[f64],
    outputs: usize,
    activation: Option<fn(f64) -> f64>,
) -> (Vec<f64>, &'a [f64]) {
    let (weights, rest) = params.split_at(outputs * input.len());
    let (biases, rest) = rest.split_at(outputs);
    let out = weights
        .chunks_exact(input.len())
        .zip(biases)
        .map(|(row, b)| {
            let z = row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>() + b;
            activation.map_or(z, |f| f(z))
        })
        .collect();
    (out, rest)
}
