//! Dense statevector simulation of a small qubit register.
//!
//! Basis ordering: qubit 0 is the most significant bit of the basis index, so
//! the basis state `|q0 q1 ... q(n-1)>` sits at index `sum(q_i * 2^(n-1-i))`.
//! Every gate and the amplitude embedding follow this convention.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 20;

/// A 2x2 complex matrix in row-major order.
pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Pure state of `n_qubits` qubits stored as `2^n_qubits` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros register `|0...0>`.
    pub fn new(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[0] = ONE;
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Computational basis state with the given index.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_register(n_qubits)?;
        if index >= 1 << n_qubits {
            return Err(invalid(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[index] = ONE;
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Builds a state from explicit amplitudes. The caller is responsible for
    /// normalization; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(invalid(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_register(n_qubits)?;
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Amplitude embedding: zero-pad `features` to `2^n_qubits` entries and
    /// L2-normalize them into the amplitudes.
    pub fn amplitude_embed(features: &[f64], n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        if features.is_empty() || features.len() > dim {
            return Err(invalid(format!(
                "{} features do not fit into {n_qubits} qubits (1..={dim})",
                features.len()
            )));
        }
        let norm = features.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::DegenerateInput(
                "feature vector has zero or non-finite norm".into(),
            ));
        }
        let mut amplitudes = vec![ZERO; dim];
        for (amp, &x) in amplitudes.iter_mut().zip(features) {
            *amp = Complex64::new(x / norm, 0.0);
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Measurement probability of every basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(invalid(format!(
                "qubit {qubit} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// Index stride of `qubit` under the MSB-first convention.
    fn stride(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    /// Applies an arbitrary 2x2 matrix to one wire.
    pub fn apply_single_qubit(&mut self, qubit: usize, gate: &Mat2) -> Result<()> {
        self.check_qubit(qubit)?;
        let stride = self.stride(qubit);
        let [[g00, g01], [g10, g11]] = *gate;
        // Walk blocks of 2*stride; the low half has the qubit bit clear.
        for block in self.amplitudes.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x0, x1) = (*a0, *a1);
                *a0 = g00 * x0 + g01 * x1;
                *a1 = g10 * x0 + g11 * x1;
            }
        }
        Ok(())
    }

    pub fn apply_ry(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.apply_single_qubit(qubit, &ry_matrix(angle))
    }

    pub fn apply_rz(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.check_qubit(qubit)?;
        let stride = self.stride(qubit);
        let (p0, p1) = rz_phases(angle);
        for block in self.amplitudes.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            lo.iter_mut().for_each(|a| *a *= p0);
            hi.iter_mut().for_each(|a| *a *= p1);
        }
        Ok(())
    }

    /// Flips `target` on every basis state whose `control` bit is set.
    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(invalid(format!(
                "CNOT control and target are both qubit {control}"
            )));
        }
        let c = self.stride(control);
        let t = self.stride(target);
        for i in 0..self.amplitudes.len() {
            if i & c != 0 && i & t == 0 {
                self.amplitudes.swap(i, i | t);
            }
        }
        Ok(())
    }

    /// Exact `<Z>` on one wire: `P(0) - P(1)`.
    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let stride = self.stride(qubit);
        let mut acc = 0.0;
        for block in self.amplitudes.chunks_exact(2 * stride) {
            let (lo, hi) = block.split_at(stride);
            acc += lo.iter().map(|a| a.norm_sqr()).sum::<f64>();
            acc -= hi.iter().map(|a| a.norm_sqr()).sum::<f64>();
        }
        Ok(acc)
    }

    /// `<Z>` for each of the first `count` wires in one pass over the amplitudes.
    pub fn expectations_z(&self, count: usize) -> Result<Vec<f64>> {
        if count > self.n_qubits {
            return Err(invalid(format!(
                "asked for {count} expectations from {} qubits",
                self.n_qubits
            )));
        }
        let mut out = vec![0.0; count];
        for (k, amp) in self.amplitudes.iter().enumerate() {
            let p = amp.norm_sqr();
            for (q, e) in out.iter_mut().enumerate() {
                if k & (1 << (self.n_qubits - 1 - q)) == 0 {
                    *e += p;
                } else {
                    *e -= p;
                }
            }
        }
        Ok(out)
    }
}

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(invalid(format!(
            "qubit count {n_qubits} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

fn rz_phases(angle: f64) -> (Complex64, Complex64) {
    let half = angle / 2.0;
    (
        Complex64::from_polar(1.0, -half),
        Complex64::from_polar(1.0, half),
    )
}

pub fn ry_matrix(angle: f64) -> Mat2 {
    let (s, c) = (angle / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

pub fn rz_matrix(angle: f64) -> Mat2 {
    let (p0, p1) = rz_phases(angle);
    [[p0, ZERO], [ZERO, p1]]
}

/// `a * b` for 2x2 matrices.
pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// The product `RZ(gamma) RY(beta) RZ(alpha)`, i.e. RZ(alpha) acts first.
pub fn zyz_matrix(alpha: f64, beta: f64, gamma: f64) -> Mat2 {
    mat2_mul(&rz_matrix(gamma), &mat2_mul(&ry_matrix(beta), &rz_matrix(alpha)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn assert_amps(state: &StateVector, expected: &[Complex64]) {
        assert_eq!(state.amplitudes().len(), expected.len());
        for (a, e) in state.amplitudes().iter().zip(expected) {
            assert!((a - e).norm() < 1e-12, "{a} != {e}");
        }
    }

    fn re(values: &[f64]) -> Vec<Complex64> {
        values.iter().map(|&v| Complex64::new(v, 0.0)).collect()
    }

    #[test]
    fn new_state_is_all_zeros() {
        assert_amps(&StateVector::new(1).unwrap(), &re(&[1.0, 0.0]));
        assert_amps(&StateVector::new(2).unwrap(), &re(&[1.0, 0.0, 0.0, 0.0]));
        let s = StateVector::new(6).unwrap();
        assert_eq!(s.amplitudes().len(), 64);
        assert_eq!(s.amplitudes()[0], ONE);
        assert!(s.amplitudes()[1..].iter().all(|a| *a == ZERO));
    }

    #[test]
    fn new_state_rejects_bad_sizes() {
        assert!(matches!(StateVector::new(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(StateVector::new(21), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn embed_pads_and_normalizes() {
        let s = StateVector::amplitude_embed(&[1.0, 0.0, 0.0], 2).unwrap();
        assert_amps(&s, &re(&[1.0, 0.0, 0.0, 0.0]));
        let s = StateVector::amplitude_embed(&[1.0; 4], 2).unwrap();
        assert_amps(&s, &re(&[0.5; 4]));

        let mut obs = vec![0.0; 36];
        obs[0] = 1.0;
        obs[17] = 1.0;
        obs[13] = 1.0;
        let s = StateVector::amplitude_embed(&obs, 6).unwrap();
        let nonzero: Vec<_> = s.amplitudes().iter().filter(|a| a.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 3);
        for a in nonzero {
            assert!((a.re - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn embed_errors() {
        assert!(matches!(
            StateVector::amplitude_embed(&[0.0, 0.0], 2),
            Err(Error::DegenerateInput(_))
        ));
        assert!(matches!(
            StateVector::amplitude_embed(&[1.0; 5], 2),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            StateVector::amplitude_embed(&[], 2),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn one_hot_embeds_to_basis_state() {
        for k in 0..8 {
            let mut f = vec![0.0; 8];
            f[k] = 2.5;
            let s = StateVector::amplitude_embed(&f, 3).unwrap();
            assert_eq!(s, StateVector::basis(3, k).unwrap());
        }
    }

    #[test]
    fn ry_examples() {
        let mut s = StateVector::new(1).unwrap();
        s.apply_ry(0, 0.0).unwrap();
        assert_amps(&s, &re(&[1.0, 0.0]));

        let mut s = StateVector::new(1).unwrap();
        s.apply_ry(0, PI).unwrap();
        assert_amps(&s, &re(&[0.0, 1.0]));

        let mut s = StateVector::new(1).unwrap();
        s.apply_ry(0, PI / 2.0).unwrap();
        assert_amps(&s, &re(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]));
    }

    #[test]
    fn rz_examples() {
        let mut s = StateVector::new(1).unwrap();
        s.apply_rz(0, 0.0).unwrap();
        assert_amps(&s, &re(&[1.0, 0.0]));

        let mut s = StateVector::new(1).unwrap();
        s.apply_rz(0, PI).unwrap();
        assert_amps(&s, &[Complex64::new(0.0, -1.0), ZERO]);
        assert!((s.expectation_z(0).unwrap() - 1.0).abs() < 1e-12);

        let mut s = StateVector::amplitude_embed(&[1.0, 1.0], 1).unwrap();
        s.apply_rz(0, PI / 2.0).unwrap();
        assert_amps(
            &s,
            &[
                Complex64::from_polar(FRAC_1_SQRT_2, -PI / 4.0),
                Complex64::from_polar(FRAC_1_SQRT_2, PI / 4.0),
            ],
        );
    }

    #[test]
    fn cnot_examples() {
        // |10> has index 2 with qubit 0 as the MSB.
        let mut s = StateVector::basis(2, 0b10).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert_eq!(s, StateVector::basis(2, 0b11).unwrap());

        let mut s = StateVector::new(2).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert_eq!(s, StateVector::new(2).unwrap());

        let mut s = StateVector::amplitude_embed(&[1.0, 0.0, 1.0, 0.0], 2).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert_amps(&s, &re(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]));
    }

    #[test]
    fn gate_index_errors() {
        let mut s = StateVector::new(2).unwrap();
        assert!(s.apply_ry(2, 0.1).is_err());
        assert!(s.apply_rz(5, 0.1).is_err());
        assert!(s.apply_cnot(1, 1).is_err());
        assert!(s.apply_cnot(0, 2).is_err());
        assert!(s.expectation_z(2).is_err());
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(StateVector::new(1).unwrap().expectation_z(0).unwrap(), 1.0);
        assert_eq!(StateVector::basis(1, 1).unwrap().expectation_z(0).unwrap(), -1.0);
        let plus = StateVector::amplitude_embed(&[1.0, 1.0], 1).unwrap();
        assert!(plus.expectation_z(0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn batched_expectations_match_single() {
        let mut s = StateVector::amplitude_embed(&[0.3, 0.1, 0.7, 0.2, 0.5, 0.9, 0.4, 0.6], 3).unwrap();
        s.apply_ry(1, 0.7).unwrap();
        s.apply_cnot(1, 2).unwrap();
        let all = s.expectations_z(3).unwrap();
        for (q, e) in all.iter().enumerate() {
            assert!((e - s.expectation_z(q).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn zyz_matches_sequential_rotations() {
        let (a, b, g) = (0.3, -1.2, 2.4);
        let mut seq = StateVector::amplitude_embed(&[0.2, 0.5, -0.3, 0.7], 2).unwrap();
        let mut fused = seq.clone();
        seq.apply_rz(1, a).unwrap();
        seq.apply_ry(1, b).unwrap();
        seq.apply_rz(1, g).unwrap();
        fused.apply_single_qubit(1, &zyz_matrix(a, b, g)).unwrap();
        for (x, y) in seq.amplitudes().iter().zip(fused.amplitudes()) {
            assert!((x - y).norm() < 1e-14);
        }
    }
}
