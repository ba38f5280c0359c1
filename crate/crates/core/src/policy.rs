//! Masked greedy action selection shared by every agent kind.

use crate::error::{invalid, Result};

/// Action values produced by a policy together with the legality mask of the
/// acting agent.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionValues {
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
}

impl ActionValues {
    pub fn select(&self) -> Result<usize> {
        select_action(&self.values, &self.mask)
    }
}

/// Min-max normalizes `values` into `[0, 1]`, zeroes illegal entries and
/// returns the index of the largest legal value.
///
/// When every value is equal the normalized values are all one. Ties go to the
/// lowest index, and if every legal normalized value is zero the lowest legal
/// index is returned.
pub fn select_action(values: &[f64], mask: &[bool]) -> Result<usize> {
    if values.len() != mask.len() {
        return Err(invalid(format!(
            "{} action values but {} mask entries",
            values.len(),
            mask.len()
        )));
    }
    let first_legal = mask
        .iter()
        .position(|&m| m)
        .ok_or_else(|| invalid("action mask has no legal entry"))?;

    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    let normalized = |v: f64| if span > 0.0 { (v - min) / span } else { 1.0 };

    let mut best = first_legal;
    let mut best_value = 0.0;
    for (i, (&v, &legal)) in values.iter().zip(mask).enumerate() {
        let masked = if legal { normalized(v) } else { 0.0 };
        if legal && masked > best_value {
            best = i;
            best_value = masked;
        }
    }
    Ok(best)
}
