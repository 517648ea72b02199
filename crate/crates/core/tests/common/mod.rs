// Copyright 2026 The floquet-clifford Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.


//! Dense-matrix oracles over a handful of qubits. Qubit q is bit q of the basis index.

#![allow(dead_code)]

use floquet_core::clifford::CliffordGate;
use num_complex::Complex64;
use rand::Rng;

pub type Mat = Vec<Vec<Complex64>>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> Mat {
    let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c(1.0, 0.0);
    }
    m
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
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

pub fn trace(a: &Mat) -> Complex64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

pub fn hadamard(n: usize, q: usize) -> Mat {
    let dim = 1 << n;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
    for b in 0..dim {
        let lo = b & !(1 << q);
        let hi = b | (1 << q);
        let sign = if (b >> q) & 1 == 1 { -s } else { s };
        m[lo][b] += c(s, 0.0);
        m[hi][b] += c(sign, 0.0);
    }
    m
}

pub fn phase_s(n: usize, q: usize) -> Mat {
    let mut m = identity(1 << n);
    for (b, row) in m.iter_mut().enumerate() {
        if (b >> q) & 1 == 1 {
            row[b] = c(0.0, 1.0);
        }
    }
    m
}

pub fn cnot(n: usize, ctl: usize, tgt: usize) -> Mat {
    let dim = 1 << n;
    let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
    for b in 0..dim {
        let out = if (b >> ctl) & 1 == 1 { b ^ (1 << tgt) } else { b };
        m[out][b] = c(1.0, 0.0);
    }
    m
}

/// Random H/S/CNOT word as a tableau and as a dense unitary.
pub fn random_word<R: Rng>(rng: &mut R, n: usize, len: usize) -> (CliffordGate, Mat) {
    let mut g = CliffordGate::identity(n);
    let mut u = identity(1 << n);
    for _ in 0..len {
        let kind = if n == 1 { rng.random_range(0..2) } else { rng.random_range(0..3) };
        let (gate, mat) = match kind {
            0 => {
                let q = rng.random_range(0..n);
                (CliffordGate::hadamard(n, q), hadamard(n, q))
            }
            1 => {
                let q = rng.random_range(0..n);
                (CliffordGate::phase_s(n, q), phase_s(n, q))
            }
            _ => {
                let a = rng.random_range(0..n);
                let b = (a + rng.random_range(1..n)) % n;
                (CliffordGate::cnot(n, a, b), cnot(n, a, b))
            }
        };
        g = gate.compose(&g).unwrap();
        u = mul(&mat, &u);
    }
    (g, u)
}

/// First column of `u`, i.e. `u|0...0>`.
pub fn apply_to_zero(u: &Mat) -> Vec<Complex64> {
    u.iter().map(|row| row[0]).collect()
}

/// Rényi-2 entropy (base 2) of the qubits in `region` for a pure state vector.
///
/// Stabilizer states have flat reduced spectra, so this equals the von Neumann entropy.
pub fn renyi2(psi: &[Complex64], n: usize, region: &[usize]) -> f64 {
    let rest: Vec<usize> = (0..n).filter(|q| !region.contains(q)).collect();
    let da = 1usize << region.len();
    let db = 1usize << rest.len();
    let index = |a: usize, b: usize| {
        let mut i = 0usize;
        for (k, &q) in region.iter().enumerate() {
            i |= ((a >> k) & 1) << q;
        }
        for (k, &q) in rest.iter().enumerate() {
            i |= ((b >> k) & 1) << q;
        }
        i
    };
    // rho_A[a][a'] = sum_b psi(a, b) conj(psi(a', b))
    let mut rho = vec![vec![c(0.0, 0.0); da]; da];
    for a in 0..da {
        for a2 in 0..da {
            rho[a][a2] = (0..db).map(|b| psi[index(a, b)] * psi[index(a2, b)].conj()).sum();
        }
    }
    let purity: f64 = (0..da)
        .flat_map(|a| (0..da).map(move |a2| (a, a2)))
        .map(|(a, a2)| (rho[a][a2] * rho[a2][a]).re)
        .sum();
    -purity.log2()
}
