//! Reference implementations that share no code with the crate: full dense
//! matrices built by Kronecker products, and a plain-loop network.

#![allow(dead_code)]

pub mod stats;

use num_complex::Complex64 as C;

pub type Matrix = Vec<Vec<C>>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect())
        .collect()
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(a: &Matrix, v: &[C]) -> Vec<C> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn ry(theta: f64) -> Matrix {
    let (s, co) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    vec![vec![c(co, 0.0), c(-s, 0.0)], vec![c(s, 0.0), c(co, 0.0)]]
}

pub fn rz(theta: f64) -> Matrix {
    vec![
        vec![c((theta / 2.0).cos(), -(theta / 2.0).sin()), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c((theta / 2.0).cos(), (theta / 2.0).sin())],
    ]
}

/// `gate` on wire `qubit` of an `n`-wire register; wire 0 is the leftmost
/// Kronecker factor (most significant index bit).
pub fn on_wire(gate: &Matrix, qubit: usize, n: usize) -> Matrix {
    let mut m = vec![vec![c(1.0, 0.0)]];
    for w in 0..n {
        let factor = if w == qubit { gate.clone() } else { identity(2) };
        m = kron(&m, &factor);
    }
    m
}

/// CNOT as `|0><0| (x) I + |1><1| (x) X` on the chosen wires.
pub fn cnot(control: usize, target: usize, n: usize) -> Matrix {
    let p0 = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]];
    let p1 = vec![vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
    let x = vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]];
    let build = |ctrl: &Matrix, tgt: &Matrix| {
        let mut m = vec![vec![c(1.0, 0.0)]];
        for w in 0..n {
            let f = if w == control {
                ctrl.clone()
            } else if w == target {
                tgt.clone()
            } else {
                identity(2)
            };
            m = kron(&m, &f);
        }
        m
    };
    let a = build(&p0, &identity(2));
    let b = build(&p1, &x);
    a.iter()
        .zip(&b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

/// Pauli Z on one wire.
pub fn z_on(qubit: usize, n: usize) -> Matrix {
    let z = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]];
    on_wire(&z, qubit, n)
}

pub fn expectation(op: &Matrix, v: &[C]) -> f64 {
    let w = matvec(op, v);
    v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum()
}

/// Whole-circuit VQC oracle: embed, then per layer the CNOT-ring unitary and
/// the tensor product of `RZ(g) RY(b) RZ(a)` rotations, then `<Z_k> + bias_k`.
pub fn vqc_oracle(n: usize, layers: usize, n_actions: usize, params: &[f64], obs: &[f64]) -> Vec<f64> {
    let dim = 1 << n;
    let norm = obs.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut state: Vec<C> = (0..dim)
        .map(|k| c(obs.get(k).copied().unwrap_or(0.0) / norm, 0.0))
        .collect();
    for l in 0..layers {
        let mut ring = identity(dim);
        if n > 1 {
            for i in 0..n {
                ring = matmul(&cnot(i, (i + 1) % n, n), &ring);
            }
        }
        let mut rot = vec![vec![c(1.0, 0.0)]];
        for q in 0..n {
            let base = l * 3 * n + q * 3;
            let (a, b, g) = (params[base], params[base + 1], params[base + 2]);
            let u = matmul(&rz(g), &matmul(&ry(b), &rz(a)));
            rot = kron(&rot, &u);
        }
        state = matvec(&matmul(&rot, &ring), &state);
    }
    let biases = &params[3 * n * layers..];
    (0..n_actions)
        .map(|k| expectation(&z_on(k, n), &state) + biases[k])
        .collect()
}

/// Two tanh hidden layers and a linear head, written as explicit loops.
pub fn nn_reference(input: usize, h1: usize, h2: usize, out: usize, p: &[f64], x: &[f64]) -> Vec<f64> {
    let mut off = 0;
    let mut layer = |inp: &[f64], n_out: usize, act: bool| -> Vec<f64> {
        let n_in = inp.len();
        let w = &p[off..off + n_in * n_out];
        let b = &p[off + n_in * n_out..off + n_in * n_out + n_out];
        off += n_in * n_out + n_out;
        let mut y = vec![0.0; n_out];
        for o in 0..n_out {
            let mut acc = b[o];
            for i in 0..n_in {
                acc += w[o * n_in + i] * inp[i];
            }
            y[o] = if act { acc.tanh() } else { acc };
        }
        y
    };
    assert_eq!(x.len(), input);
    let a = layer(x, h1, true);
    let b = layer(&a, h2, true);
    layer(&b, out, false)
}
