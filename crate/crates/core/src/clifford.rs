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

//! Clifford unitaries stored as signed images of the Pauli generators.
//!
//! Generator order is `X_0..X_{n-1}, Z_0..Z_{n-1}`, matching the (x|z) coordinate order, so the
//! symplectic matrix has the image of generator `j` as its column `j`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::pauli::{packed_product_phase, Letter, PackedPauli, PauliOperator, Site};

/// Largest qubit count accepted by the word-level sampler.
pub const MAX_SAMPLED_QUBITS: usize = 32;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CliffordGate {
    n: usize,
    images: Vec<PackedPauli>,
}

impl CliffordGate {
    pub fn identity(n: usize) -> Self {
        let images = (0..2 * n)
            .map(|j| PackedPauli::from_symplectic(&BitVector::unit(2 * n, j)))
            .collect();
        Self { n, images }
    }

    /// Trusted constructor for images produced by conjugating a valid gate.
    pub(crate) fn from_images_unchecked(images: Vec<PackedPauli>) -> Self {
        Self {
            n: images.len() / 2,
            images,
        }
    }

    /// Builds a gate from the images of `X_0..X_{n-1}, Z_0..Z_{n-1}`.
    pub fn from_images(images: Vec<PackedPauli>) -> Result<Self> {
        if images.len() % 2 != 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} images given, need an even count",
                images.len()
            )));
        }
        let n = images.len() / 2;
        for (j, p) in images.iter().enumerate() {
            if p.num_qubits() != n {
                return Err(Error::DimensionMismatch(format!(
                    "image {j} acts on {} qubits, expected {n}",
                    p.num_qubits()
                )));
            }
            if !p.is_hermitian() {
                return Err(Error::NonHermitian(format!("image of generator {j}: {p:?}")));
            }
        }
        for a in 0..2 * n {
            for b in a + 1..2 * n {
                let expected = (b == a + n) as u8;
                if images[a].commutes(&images[b]) != expected {
                    return Err(Error::NotSymplectic(format!(
                        "images of generators {a} and {b} have the wrong commutation relation"
                    )));
                }
            }
        }
        Ok(Self { n, images })
    }

    /// Builds a gate from `(image of X_q, image of Z_q)` pairs; sites are local indices `(q)`.
    pub fn from_pauli_images(pairs: &[(PauliOperator, PauliOperator)]) -> Result<Self> {
        let n = pairs.len();
        let index = |s: &Site| match *s {
            Site::Line(q) if q >= 0 && (q as usize) < n => Some(q as usize),
            _ => None,
        };
        let mut xs = Vec::with_capacity(n);
        let mut zs = Vec::with_capacity(n);
        for (x, z) in pairs {
            xs.push(PackedPauli::from_sparse(n, x, index)?);
            zs.push(PackedPauli::from_sparse(n, z, index)?);
        }
        xs.extend(zs);
        Self::from_images(xs)
    }

    /// From a symplectic matrix (columns are generator images) and sign bits.
    pub fn from_symplectic(s: &BitMatrix, r: &BitVector) -> Result<Self> {
        if s.rows() != s.cols() || s.rows() % 2 != 0 || r.len() != s.cols() {
            return Err(Error::DimensionMismatch(format!(
                "symplectic part {}x{} with {} sign bits",
                s.rows(),
                s.cols(),
                r.len()
            )));
        }
        if !is_symplectic(s) {
            return Err(Error::NotSymplectic("s^T J s != J".into()));
        }
        let images = (0..s.cols())
            .map(|j| {
                let mut p = PackedPauli::from_symplectic(&s.column(j));
                p.set_phase(2 * r.get(j) as u8);
                p
            })
            .collect();
        Ok(Self {
            n: s.rows() / 2,
            images,
        })
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Image of generator `j` (`X_j` for j < n, `Z_{j-n}` otherwise).
    #[inline]
    pub fn image(&self, j: usize) -> &PackedPauli {
        &self.images[j]
    }

    pub fn images(&self) -> &[PackedPauli] {
        &self.images
    }

    pub fn symplectic(&self) -> BitMatrix {
        let cols: Vec<BitVector> = self.images.iter().map(|p| p.symplectic()).collect();
        BitMatrix::from_columns(2 * self.n, &cols)
    }

    /// Transpose of [`Self::symplectic`]: row j is the image of generator j.
    pub fn symplectic_rows(&self) -> BitMatrix {
        let rows: Vec<BitVector> = self.images.iter().map(|p| p.symplectic()).collect();
        BitMatrix::from_row_vectors(2 * self.n, &rows)
    }

    pub fn signs(&self) -> BitVector {
        let mut r = BitVector::zeros(2 * self.n);
        for (j, p) in self.images.iter().enumerate() {
            r.set(j, p.phase() == 2);
        }
        r
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    /// `g p g†` for a packed Pauli on the gate's qubits.
    pub fn conjugate_packed(&self, p: &PackedPauli) -> Result<PackedPauli> {
        if p.num_qubits() != self.n {
            return Err(Error::SupportOutsideDomain(format!(
                "operator on {} qubits, gate on {}",
                p.num_qubits(),
                self.n
            )));
        }
        let mut out = PackedPauli::identity(self.n);
        let mut phase = p.phase();
        for q in 0..self.n {
            match p.get(q) {
                Letter::I => {}
                Letter::X => out.mul_assign(&self.images[q]),
                Letter::Z => out.mul_assign(&self.images[q + self.n]),
                Letter::Y => {
                    // Y = i X Z
                    phase += 1;
                    out.mul_assign(&self.images[q]);
                    out.mul_assign(&self.images[q + self.n]);
                }
            }
        }
        out.set_phase(out.phase() + phase);
        Ok(out)
    }

    /// `g p g†` for an operator whose sites are local indices `(0)..(n-1)`.
    pub fn conjugate(&self, p: &PauliOperator) -> Result<PauliOperator> {
        let n = self.n;
        let packed = PackedPauli::from_sparse(n, p, |s| match *s {
            Site::Line(q) if q >= 0 && (q as usize) < n => Some(q as usize),
            _ => None,
        })?;
        Ok(self
            .conjugate_packed(&packed)?
            .to_sparse(|q| Site::Line(q as i64)))
    }

    /// The gate `self ∘ first`: `first` acts first.
    pub fn compose(&self, first: &CliffordGate) -> Result<CliffordGate> {
        if self.n != first.n {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose gates on {} and {} qubits",
                self.n, first.n
            )));
        }
        let images = first
            .images
            .iter()
            .map(|p| self.conjugate_packed(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(CliffordGate { n: self.n, images })
    }

    pub fn inverse(&self) -> CliffordGate {
        let n = self.n;
        let s_inv = symplectic_inverse(&self.symplectic());
        let images = (0..2 * n)
            .map(|i| {
                let mut q = PackedPauli::from_symplectic(&s_inv.column(i));
                let img = self.conjugate_packed(&q).expect("same qubit count");
                debug_assert_eq!(img.symplectic(), BitVector::unit(2 * n, i));
                q.set_phase(img.phase());
                q
            })
            .collect();
        CliffordGate { n, images }
    }

    /// Gate fixture text: `n` followed by the images of `X_0, Z_0, X_1, Z_1, ...`.
    pub fn to_fixture(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for q in 0..self.n {
            for j in [q, q + self.n] {
                let p = self.images[j].to_sparse(|k| Site::Line(k as i64));
                out.push_str(&p.render());
                out.push('\n');
            }
        }
        out
    }

    pub fn from_fixture(text: &str) -> Result<CliffordGate> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty gate fixture".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad qubit count: {e}")))?;
        let paulis = lines.map(PauliOperator::parse).collect::<Result<Vec<_>>>()?;
        if paulis.len() != 2 * n {
            return Err(Error::Parse(format!(
                "expected {} image lines, found {}",
                2 * n,
                paulis.len()
            )));
        }
        let pairs: Vec<_> = paulis
            .chunks(2)
            .map(|c| (c[0].clone(), c[1].clone()))
            .collect();
        Self::from_pauli_images(&pairs)
    }

    // Elementary gates, mainly for tests and oracles.

    pub fn hadamard(n: usize, q: usize) -> Self {
        let mut g = Self::identity(n);
        g.images.swap(q, q + n);
        g
    }

    /// Phase gate: X -> Y, Z -> Z.
    pub fn phase_s(n: usize, q: usize) -> Self {
        let mut g = Self::identity(n);
        g.images[q].set(q, Letter::Y);
        g
    }

    pub fn cnot(n: usize, control: usize, target: usize) -> Self {
        assert_ne!(control, target);
        let mut g = Self::identity(n);
        g.images[control].set(target, Letter::X);
        g.images[target + n].set(control, Letter::Z);
        g
    }

    pub fn swap(n: usize, a: usize, b: usize) -> Self {
        let mut g = Self::identity(n);
        g.images.swap(a, b);
        g.images.swap(a + n, b + n);
        g
    }

    /// Conjugation by a Hermitian Pauli string: anticommuting generators flip sign.
    pub fn pauli(p: &PackedPauli) -> Self {
        let n = p.num_qubits();
        let mut g = Self::identity(n);
        for j in 0..2 * n {
            if p.commutes(&g.images[j]) == 1 {
                g.images[j].set_phase(2);
            }
        }
        g
    }
}

impl fmt::Debug for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CliffordGate(n={}) [", self.n)?;
        for (j, p) in self.images.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p:?}")?;
        }
        write!(f, "]")
    }
}

/// The standard form `J = [[0, I], [I, 0]]` in (x|z) order.
pub fn symplectic_form(n: usize) -> BitMatrix {
    let mut j = BitMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j.set(i, n + i, true);
        j.set(n + i, i, true);
    }
    j
}

/// Checks `sᵀ J s = J`.
pub fn is_symplectic(s: &BitMatrix) -> bool {
    if s.rows() != s.cols() || s.rows() % 2 != 0 {
        return false;
    }
    let j = symplectic_form(s.rows() / 2);
    let lhs = s
        .transpose()
        .mat_mul(&j)
        .and_then(|m| m.mat_mul(s))
        .expect("square");
    lhs == j
}

/// `s⁻¹ = J sᵀ J`.
pub fn symplectic_inverse(s: &BitMatrix) -> BitMatrix {
    let j = symplectic_form(s.rows() / 2);
    j.mat_mul(&s.transpose())
        .and_then(|m| m.mat_mul(&j))
        .expect("square")
}

/// Available uniform samplers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SamplerId {
    /// Sequential symplectic Gram-Schmidt with rejection, plus uniform sign bits.
    #[default]
    SymplecticGramSchmidt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CliffordEnsembleSpec {
    pub n: usize,
    pub seed: u64,
    pub sampler: SamplerId,
}

impl CliffordEnsembleSpec {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            sampler: SamplerId::default(),
        }
    }
}

#[inline]
fn omega(n: usize, a: u64, b: u64) -> u64 {
    let mask = (1u64 << n) - 1;
    let ax = a & mask;
    let az = a >> n;
    let bx = b & mask;
    let bz = b >> n;
    ((ax & bz) ^ (az & bx)).count_ones() as u64 & 1
}

/// Draws the symplectic part as packed (x|z) codes of the `2n` generator images, plus signs.
///
/// Returns images in generator order and the sign bits (bit j = sign of image j).
pub fn sample_symplectic_codes<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Vec<u64>, u64) {
    assert!((1..=MAX_SAMPLED_QUBITS).contains(&n), "sampler supports 1..=32 qubits");
    let dim = 2 * n;
    let full = if dim == 64 { u64::MAX } else { (1u64 << dim) - 1 };
    let mut xs: Vec<u64> = Vec::with_capacity(n);
    let mut zs: Vec<u64> = Vec::with_capacity(n);
    let project = |u: u64, xs: &[u64], zs: &[u64]| -> u64 {
        let mut u = u;
        for (&v, &w) in xs.iter().zip(zs) {
            // remove components along the earlier hyperbolic pair (v, w)
            let a = omega(n, u, w);
            let b = omega(n, u, v);
            if a == 1 {
                u ^= v;
            }
            if b == 1 {
                u ^= w;
            }
        }
        u
    };
    for _ in 0..n {
        let v = loop {
            let u = project(rng.random::<u64>() & full, &xs, &zs);
            if u != 0 {
                break u;
            }
        };
        let w = loop {
            let u = project(rng.random::<u64>() & full, &xs, &zs);
            if omega(n, v, u) == 1 {
                break u;
            }
        };
        xs.push(v);
        zs.push(w);
    }
    let signs = rng.random::<u64>() & full;
    xs.extend(zs);
    (xs, signs)
}

/// Uniform gate (modulo global phase) from an explicit generator.
pub fn sample_uniform_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CliffordGate {
    let (codes, signs) = sample_symplectic_codes(n, rng);
    gate_from_codes(n, &codes, signs)
}

/// Uniform gate (modulo global phase), deterministic in `spec.seed`.
pub fn sample_uniform(spec: &CliffordEnsembleSpec) -> CliffordGate {
    match spec.sampler {
        SamplerId::SymplecticGramSchmidt => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            sample_uniform_with(spec.n, &mut rng)
        }
    }
}

fn code_to_packed(n: usize, code: u64, phase: u8) -> PackedPauli {
    let mask = (1u64 << n) - 1;
    let x = BitVector::from_words(n, vec![code & mask]);
    let z = BitVector::from_words(n, vec![(code >> n) & mask]);
    PackedPauli::from_parts(x, z, phase)
}

pub(crate) fn gate_from_codes(n: usize, codes: &[u64], signs: u64) -> CliffordGate {
    let images = codes
        .iter()
        .enumerate()
        .map(|(j, &c)| code_to_packed(n, c, 2 * ((signs >> j) & 1) as u8))
        .collect();
    CliffordGate { n, images }
}

/// Lookup table of a small gate's action on all `4^n` local Pauli strings.
///
/// Index and image codes use the packed layout `x bits | z bits << n`. Entries hold the image code
/// in the low 16 bits and the phase exponent (relative to the Hermitian input) above.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalTable {
    n: usize,
    entries: Vec<u32>,
}

impl LocalTable {
    pub const MAX_QUBITS: usize = 6;

    pub fn from_codes(n: usize, images: &[u64], signs: u64) -> Self {
        assert!(n <= Self::MAX_QUBITS);
        let mask = (1u64 << n) - 1;
        let phase_of = |a: u64, b: u64| {
            packed_product_phase(a & mask, a >> n, b & mask, b >> n)
        };
        let size = 1usize << (2 * n);
        let mut entries = vec![0u32; size];
        for v in 1..size {
            let j = v.trailing_zeros() as usize;
            let a = 1u64 << j;
            let b = v as u64 ^ a;
            let (img_b, e_b) = ((entries[b as usize] & 0xffff) as u64, entries[b as usize] >> 16);
            let img_a = images[j];
            let e_a = 2 * ((signs >> j) & 1) as u32;
            // P_v = i^{-g(a,b)} P_a P_b, so its image carries i^{-g(a,b) + g(Sa,Sb)}.
            let k = (4 - phase_of(a, b)) + e_a + e_b + phase_of(img_a, img_b);
            entries[v] = (img_a ^ img_b) as u32 | ((k & 3) << 16);
        }
        Self { n, entries }
    }

    pub fn from_gate(g: &CliffordGate) -> Self {
        let n = g.num_qubits();
        let codes: Vec<u64> = g
            .images()
            .iter()
            .map(|p| {
                let x = p.x_bits().words().first().copied().unwrap_or(0);
                let z = p.z_bits().words().first().copied().unwrap_or(0);
                x | z << n
            })
            .collect();
        Self::from_codes(n, &codes, g.signs().words().first().copied().unwrap_or(0))
    }

    pub fn identity(n: usize) -> Self {
        let codes: Vec<u64> = (0..2 * n).map(|j| 1u64 << j).collect();
        Self::from_codes(n, &codes, 0)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Image code and phase exponent for the Hermitian local string `code`.
    #[inline]
    pub fn apply(&self, code: usize) -> (usize, u8) {
        let e = self.entries[code];
        ((e & 0xffff) as usize, (e >> 16) as u8)
    }

    pub fn to_gate(&self) -> CliffordGate {
        let codes: Vec<u64> = (0..2 * self.n)
            .map(|j| self.apply(1 << j).0 as u64)
            .collect();
        let mut signs = 0u64;
        for j in 0..2 * self.n {
            if self.apply(1 << j).1 == 2 {
                signs |= 1 << j;
            }
        }
        gate_from_codes(self.n, &codes, signs)
    }
}

impl fmt::Debug for LocalTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalTable({:?})", self.to_gate())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::dense;
    use std::collections::HashMap;

    fn worked_gate() -> CliffordGate {
        let p = |s: &str| PauliOperator::parse(s).unwrap();
        CliffordGate::from_pauli_images(&[
            (p("+1 (0):Z (1):X"), p("+1 (1):Z")),
            (p("+1 (0):Z"), p("+1 (0):X (1):Z")),
        ])
        .unwrap()
    }

    fn random_packed(rng: &mut ChaCha8Rng, n: usize) -> PackedPauli {
        let mut p = PackedPauli::identity(n);
        for q in 0..n {
            p.set(q, Letter::from_code(rng.random_range(0..4)));
        }
        p.set_phase(2 * rng.random_range(0..2));
        p
    }

    #[test]
    fn example_gate_images() {
        let g = worked_gate();
        let x0 = PauliOperator::parse("+1 (0):X").unwrap();
        assert_eq!(g.conjugate(&x0).unwrap().render(), "+1 (0):Z (1):X");
        let z1 = PauliOperator::parse("+1 (1):Z").unwrap();
        assert_eq!(g.conjugate(&z1).unwrap().render(), "+1 (0):X (1):Z");
        assert!(is_symplectic(&g.symplectic()));
    }

    #[test]
    fn identity_and_errors() {
        let id = CliffordGate::identity(3);
        let p = PauliOperator::parse("-1 (0):Y (2):X").unwrap();
        assert_eq!(id.conjugate(&p).unwrap(), p);
        let out = PauliOperator::parse("+1 (3):X").unwrap();
        assert!(matches!(id.conjugate(&out), Err(Error::SupportOutsideDomain(_))));

        let x = PauliOperator::parse("+1 (0):X").unwrap();
        let z = PauliOperator::parse("+1 (0):Z").unwrap();
        assert!(CliffordGate::from_pauli_images(&[(x.clone(), z.clone())])
            .unwrap()
            .is_identity());
        assert!(matches!(
            CliffordGate::from_pauli_images(&[(x.clone(), x.clone())]),
            Err(Error::NotSymplectic(_))
        ));
        assert!(matches!(
            CliffordGate::from_pauli_images(&[(x.with_phase(1), z)]),
            Err(Error::NonHermitian(_))
        ));
    }

    #[test]
    fn dense_oracle_random_two_qubit() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let (g, u) = dense::random_word(&mut rng, 2, 12);
            for _ in 0..4 {
                let p = random_packed(&mut rng, 2);
                let img = g.conjugate_packed(&p).unwrap();
                let lhs = dense::conjugate(&u, &dense::pauli_matrix(&p));
                assert!(dense::approx_eq(&lhs, &dense::pauli_matrix(&img)));
            }
        }
    }

    #[test]
    fn compose_matches_two_step() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let n = rng.random_range(1..5);
            let g1 = sample_uniform_with(n, &mut rng);
            let g2 = sample_uniform_with(n, &mut rng);
            let p = random_packed(&mut rng, n);
            let c = g2.compose(&g1).unwrap();
            let two = g2
                .conjugate_packed(&g1.conjugate_packed(&p).unwrap())
                .unwrap();
            assert_eq!(c.conjugate_packed(&p).unwrap(), two);
            assert_eq!(
                c.symplectic(),
                g2.symplectic().mat_mul(&g1.symplectic()).unwrap()
            );
            assert!(CliffordGate::identity(n).compose(&g1).unwrap() == g1);
        }
        assert!(CliffordGate::identity(2)
            .compose(&CliffordGate::identity(3))
            .is_err());
    }

    #[test]
    fn inverse_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert!(CliffordGate::identity(4).inverse().is_identity());
        for _ in 0..200 {
            let n = rng.random_range(1..6);
            let g = sample_uniform_with(n, &mut rng);
            let inv = g.inverse();
            assert!(g.compose(&inv).unwrap().is_identity());
            assert!(inv.compose(&g).unwrap().is_identity());
            assert_eq!(inv.inverse(), g);
            let solved = g.symplectic().inverse().unwrap().unwrap();
            assert_eq!(solved, inv.symplectic());
        }
    }

    #[test]
    fn conjugation_preserves_commutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..500 {
            let n = rng.random_range(1..7);
            let g = sample_uniform_with(n, &mut rng);
            assert!(is_symplectic(&g.symplectic()));
            let p = random_packed(&mut rng, n);
            let q = random_packed(&mut rng, n);
            let gp = g.conjugate_packed(&p).unwrap();
            let gq = g.conjugate_packed(&q).unwrap();
            assert!(gp.is_hermitian());
            assert_eq!(p.commutes(&q), gp.commutes(&gq));
        }
    }

    #[test]
    fn one_qubit_uniform_over_24() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let draws = 24 * 10_000;
        let mut counts: HashMap<Vec<u64>, u64> = HashMap::new();
        for _ in 0..draws {
            let (codes, signs) = sample_symplectic_codes(1, &mut rng);
            let mut key = codes;
            key.push(signs);
            *counts.entry(key).or_default() += 1;
        }
        assert_eq!(counts.len(), 24);
        let expected = draws as f64 / 24.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        let p = crate::stats::chi_squared_sf(chi2, 23.0);
        assert!(p > 0.01, "chi2 = {chi2}, p = {p}");
    }

    #[test]
    fn two_qubit_images_uniform_and_group_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        let mut symplectic = std::collections::HashSet::new();
        let mut counts = [0u64; 16];
        let draws = 150_000;
        for _ in 0..draws {
            let (codes, _) = sample_symplectic_codes(2, &mut rng);
            // image of X on qubit 0
            counts[codes[0] as usize] += 1;
            symplectic.insert(codes);
        }
        assert_eq!(counts[0], 0);
        // 720 symplectic parts times 16 sign patterns = 11520 Cliffords modulo phase
        assert_eq!(symplectic.len(), 720);
        assert_eq!(symplectic.len() * 16, 11520);
        let expected = draws as f64 / 15.0;
        let chi2: f64 = counts[1..]
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(crate::stats::chi_squared_sf(chi2, 14.0) > 0.01);
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = CliffordEnsembleSpec::new(4, 1234);
        assert_eq!(sample_uniform(&spec), sample_uniform(&spec));
        assert_ne!(
            sample_uniform(&spec),
            sample_uniform(&CliffordEnsembleSpec::new(4, 1235))
        );
    }

    #[test]
    fn symplectic_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let g = sample_uniform_with(3, &mut rng);
            let h = CliffordGate::from_symplectic(&g.symplectic(), &g.signs()).unwrap();
            assert_eq!(g, h);
        }
        let bad = BitMatrix::from_rows(&[[1, 1], [1, 1]]);
        assert!(CliffordGate::from_symplectic(&bad, &BitVector::zeros(2)).is_err());
    }

    #[test]
    fn local_table_matches_gate() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in 1..=4 {
            for _ in 0..30 {
                let g = sample_uniform_with(n, &mut rng);
                let t = LocalTable::from_gate(&g);
                assert_eq!(t.to_gate(), g);
                for code in 0..1usize << (2 * n) {
                    let mut p = PackedPauli::identity(n);
                    for q in 0..n {
                        p.set(q, Letter::from_bits(code >> q & 1 == 1, code >> (q + n) & 1 == 1));
                    }
                    let img = g.conjugate_packed(&p).unwrap();
                    let (c, ph) = t.apply(code);
                    let x = img.x_bits().words()[0] as usize;
                    let z = img.z_bits().words()[0] as usize;
                    assert_eq!(c, x | z << n);
                    assert_eq!(ph, img.phase());
                }
            }
        }
    }

    #[test]
    fn fixture_round_trip() {
        let g = worked_gate();
        let text = g.to_fixture();
        assert_eq!(
            text,
            "2\n+1 (0):Z (1):X\n+1 (1):Z\n+1 (0):Z\n+1 (0):X (1):Z\n"
        );
        assert_eq!(CliffordGate::from_fixture(&text).unwrap(), g);
    }
}
