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

//! Unit-test helpers.

pub mod dense {
    //! Dense complex matrices over a few qubits. Qubit q is bit q of the basis index.

    use num_complex::Complex64;
    use rand::Rng;

    use crate::clifford::CliffordGate;
    use crate::pauli::{Letter, PackedPauli};

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

    pub fn dagger(a: &Mat) -> Mat {
        let n = a.len();
        (0..n)
            .map(|i| (0..n).map(|j| a[j][i].conj()).collect())
            .collect()
    }

    pub fn conjugate(u: &Mat, p: &Mat) -> Mat {
        mul(&mul(u, p), &dagger(u))
    }

    pub fn approx_eq(a: &Mat, b: &Mat) -> bool {
        a.iter()
            .zip(b)
            .all(|(r, s)| r.iter().zip(s).all(|(x, y)| (x - y).norm() < 1e-9))
    }

    pub fn trace(a: &Mat) -> Complex64 {
        (0..a.len()).map(|i| a[i][i]).sum()
    }

    pub fn pauli_matrix(p: &PackedPauli) -> Mat {
        let n = p.num_qubits();
        let dim = 1 << n;
        let ipow = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
        for b in 0..dim {
            let mut amp = ipow[p.phase() as usize];
            let mut out = b;
            for q in 0..n {
                let bit = (b >> q) & 1;
                let sign = if bit == 1 { -1.0 } else { 1.0 };
                match p.get(q) {
                    Letter::I => {}
                    Letter::X => out ^= 1 << q,
                    Letter::Z => amp *= sign,
                    Letter::Y => {
                        amp *= c(0.0, sign);
                        out ^= 1 << q;
                    }
                }
            }
            m[out][b] = amp;
        }
        m
    }

    fn hadamard(n: usize, q: usize) -> Mat {
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

    fn phase_s(n: usize, q: usize) -> Mat {
        let mut m = identity(1 << n);
        for (b, row) in m.iter_mut().enumerate() {
            if (b >> q) & 1 == 1 {
                row[b] = c(0.0, 1.0);
            }
        }
        m
    }

    fn cnot(n: usize, ctl: usize, tgt: usize) -> Mat {
        let dim = 1 << n;
        let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
        for b in 0..dim {
            let out = if (b >> ctl) & 1 == 1 { b ^ (1 << tgt) } else { b };
            m[out][b] = c(1.0, 0.0);
        }
        m
    }

    /// Random H/S/CNOT word as both a tableau and a dense unitary.
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
}
