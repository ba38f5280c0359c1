//! Variational quantum circuit policy.
//!
//! Forward pass: amplitude-embed the observation, then `n_layers` times apply a
//! CNOT ring `CNOT(i, (i + 1) mod n)` for ascending `i` followed by
//! `RZ(alpha) RY(beta) RZ(gamma)` on every qubit, then read `<Z>` of the first
//! `n_actions` qubits and add one trainable bias per action.
//!
//! Parameter layout (crossover relies on it): all angles first, layer-major,
//! then qubit-major, then `(alpha, beta, gamma)`; the `n_actions` biases last.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::sim::{zyz_matrix, Mat2, StateVector};

/// Number of trainable parameters: three angles per qubit per layer plus one
/// bias per action.
pub fn vqc_param_count(n_qubits: usize, n_layers: usize, n_actions: usize) -> usize {
    3 * n_qubits * n_layers + n_actions
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VqcShape {
    pub n_qubits: usize,
    pub n_layers: usize,
    pub n_actions: usize,
}

impl VqcShape {
    pub fn new(n_qubits: usize, n_layers: usize, n_actions: usize) -> Result<Self> {
        let shape = Self {
            n_qubits,
            n_layers,
            n_actions,
        };
        shape.validate()?;
        Ok(shape)
    }

    fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.n_layers == 0 || self.n_actions == 0 {
            return Err(invalid(format!("VQC dimensions must be positive: {self:?}")));
        }
        if self.n_qubits > crate::sim::MAX_QUBITS {
            return Err(invalid(format!("{} qubits exceed the simulator cap", self.n_qubits)));
        }
        if self.n_actions > self.n_qubits {
            return Err(invalid(format!(
                "{} actions need at least as many measured qubits, got {}",
                self.n_actions, self.n_qubits
            )));
        }
        Ok(())
    }

    pub fn param_count(&self) -> usize {
        vqc_param_count(self.n_qubits, self.n_layers, self.n_actions)
    }

    pub fn angle_count(&self) -> usize {
        3 * self.n_qubits * self.n_layers
    }

    /// Number of parameters in one variational layer.
    pub fn layer_width(&self) -> usize {
        3 * self.n_qubits
    }

    /// Flat index of angle `slot` (0 = alpha, 1 = beta, 2 = gamma) of `qubit` in `layer`.
    pub fn angle_index(&self, layer: usize, qubit: usize, slot: usize) -> usize {
        layer * self.layer_width() + qubit * 3 + slot
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqcGenome {
    shape: VqcShape,
    params: Vec<f64>,
}

impl VqcGenome {
    /// Angles uniform in `[-pi, pi]`, biases zero.
    pub fn random<R: Rng + ?Sized>(shape: VqcShape, rng: &mut R) -> Result<Self> {
        shape.validate()?;
        let mut params: Vec<f64> = (0..shape.angle_count())
            .map(|_| rng.random_range(-PI..=PI))
            .collect();
        params.resize(shape.param_count(), 0.0);
        Ok(Self { shape, params })
    }

    pub fn from_params(shape: VqcShape, params: Vec<f64>) -> Result<Self> {
        shape.validate()?;
        if params.len() != shape.param_count() {
            return Err(invalid(format!(
                "VQC shape {shape:?} needs {} parameters, got {}",
                shape.param_count(),
                params.len()
            )));
        }
        Ok(Self { shape, params })
    }

    pub fn shape(&self) -> VqcShape {
        self.shape
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn angles(&self) -> &[f64] {
        &self.params[..self.shape.angle_count()]
    }

    pub fn biases(&self) -> &[f64] {
        &self.params[self.shape.angle_count()..]
    }

    pub fn compile(&self) -> CompiledVqc {
        CompiledVqc::new(self)
    }

    /// Action values for one observation.
    pub fn forward(&self, observation: &[f64]) -> Result<Vec<f64>> {
        self.compile().forward(observation)
    }
}

/// A genome with each qubit's three rotations fused into one 2x2 unitary, so
/// repeated forward passes skip the trigonometry.
#[derive(Debug, Clone)]
pub struct CompiledVqc {
    shape: VqcShape,
    /// `rotations[layer * n_qubits + qubit]`
    rotations: Vec<Mat2>,
    biases: Vec<f64>,
}

impl CompiledVqc {
    pub fn new(genome: &VqcGenome) -> Self {
        let shape = genome.shape;
        let rotations = genome
            .angles()
            .chunks_exact(3)
            .map(|a| zyz_matrix(a[0], a[1], a[2]))
            .collect();
        Self {
            shape,
            rotations,
            biases: genome.biases().to_vec(),
        }
    }

    pub fn forward(&self, observation: &[f64]) -> Result<Vec<f64>> {
        let n = self.shape.n_qubits;
        let mut state = StateVector::amplitude_embed(observation, n)?;
        for layer in self.rotations.chunks_exact(n) {
            if n > 1 {
                for i in 0..n {
                    state.apply_cnot(i, (i + 1) % n)?;
                }
            }
            for (qubit, rotation) in layer.iter().enumerate() {
                state.apply_single_qubit(qubit, rotation)?;
            }
        }
        let mut values = state.expectations_z(self.shape.n_actions)?;
        for (v, b) in values.iter_mut().zip(&self.biases) {
            *v += b;
        }
        Ok(values)
    }
}
