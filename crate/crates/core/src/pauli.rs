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

//! Signed Pauli strings.
//!
//! Letters are the Hermitian matrices X, Y, Z encoded as (x|z) bits X=(1,0), Z=(0,1), Y=(1,1).
//! An operator is `i^phase` times the tensor product of its letters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// A lattice site. Ordering is lexicographic in the coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Site {
    Line(i64),
    Plane(i64, i64),
}

impl Site {
    pub fn origin(dim: usize) -> Site {
        match dim {
            1 => Site::Line(0),
            _ => Site::Plane(0, 0),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Site::Line(_) => 1,
            Site::Plane(..) => 2,
        }
    }

    pub fn x(&self) -> i64 {
        match *self {
            Site::Line(x) | Site::Plane(x, _) => x,
        }
    }

    pub fn y(&self) -> i64 {
        match *self {
            Site::Line(_) => 0,
            Site::Plane(_, y) => y,
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Line(x) => write!(f, "({x})"),
            Site::Plane(x, y) => write!(f, "({x},{y})"),
        }
    }
}

impl FromStr for Site {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad site '{s}'")))?;
        let coords: Vec<i64> = inner
            .split(',')
            .map(|c| c.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("bad site '{s}': {e}")))?;
        match coords.as_slice() {
            [x] => Ok(Site::Line(*x)),
            [x, y] => Ok(Site::Plane(*x, *y)),
            _ => Err(Error::Parse(format!("site '{s}' must have 1 or 2 coordinates"))),
        }
    }
}

/// Single-site Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    /// 2-bit code `x | z << 1`.
    #[inline]
    pub fn code(self) -> u8 {
        match self {
            Letter::I => 0,
            Letter::X => 1,
            Letter::Z => 2,
            Letter::Y => 3,
        }
    }

    #[inline]
    pub fn from_code(code: u8) -> Letter {
        match code & 3 {
            0 => Letter::I,
            1 => Letter::X,
            2 => Letter::Z,
            _ => Letter::Y,
        }
    }

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Letter {
        Letter::from_code(x as u8 | (z as u8) << 1)
    }

    #[inline]
    pub fn x(self) -> bool {
        self.code() & 1 == 1
    }

    #[inline]
    pub fn z(self) -> bool {
        self.code() & 2 == 2
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// Exponent k (mod 4) with `a·b = i^k (a XOR b)` for single-site letter codes.
#[inline]
pub fn letter_product_phase(a: u8, b: u8) -> u8 {
    // XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i.
    const TABLE: [[u8; 4]; 4] = [
        // b:  I  X  Z  Y
        [0, 0, 0, 0], // I
        [0, 0, 3, 1], // X
        [0, 1, 0, 3], // Z
        [0, 3, 1, 0], // Y
    ];
    TABLE[(a & 3) as usize][(b & 3) as usize]
}

/// Phase exponent of the product of two packed Hermitian strings, word-parallel.
#[inline]
pub fn packed_product_phase(x1: u64, z1: u64, x2: u64, z2: u64) -> u32 {
    let (xa, ya, za) = (x1 & !z1, x1 & z1, !x1 & z1);
    let (xb, yb, zb) = (x2 & !z2, x2 & z2, !x2 & z2);
    let plus = (xa & yb) | (ya & zb) | (za & xb);
    let minus = (ya & xb) | (za & yb) | (xa & zb);
    plus.count_ones().wrapping_sub(minus.count_ones()) & 3
}

fn phase_text(phase: u8) -> &'static str {
    match phase & 3 {
        0 => "+1",
        1 => "+i",
        2 => "-1",
        _ => "-i",
    }
}

/// Sparse Pauli string on an unbounded lattice.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PauliOperator {
    letters: BTreeMap<Site, Letter>,
    phase: u8,
}

impl PauliOperator {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(site: Site, letter: Letter) -> Self {
        let mut p = Self::identity();
        p.set(site, letter);
        p
    }

    pub fn from_letters<I: IntoIterator<Item = (Site, Letter)>>(phase: u8, letters: I) -> Self {
        let mut p = Self {
            letters: BTreeMap::new(),
            phase: phase & 3,
        };
        for (s, l) in letters {
            p.set(s, l);
        }
        p
    }

    /// Exponent of i in the overall phase.
    #[inline]
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase & 3;
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == 0
    }

    pub fn get(&self, site: &Site) -> Letter {
        self.letters.get(site).copied().unwrap_or(Letter::I)
    }

    /// Sets a letter; `Letter::I` removes the site.
    pub fn set(&mut self, site: Site, letter: Letter) {
        if letter == Letter::I {
            self.letters.remove(&site);
        } else {
            self.letters.insert(site, letter);
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = (&Site, &Letter)> {
        self.letters.iter()
    }

    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn support(&self) -> BTreeSet<Site> {
        self.letters.keys().copied().collect()
    }

    /// Group product `self · other` with exact phase.
    pub fn multiply(&self, other: &PauliOperator) -> PauliOperator {
        let mut out = self.clone();
        let mut k = self.phase as u32 + other.phase as u32;
        for (site, &b) in &other.letters {
            let a = out.get(site);
            k += letter_product_phase(a.code(), b.code()) as u32;
            out.set(*site, Letter::from_code(a.code() ^ b.code()));
        }
        out.phase = (k & 3) as u8;
        out
    }

    /// 1 if the operators anticommute, 0 if they commute.
    pub fn commutes(&self, other: &PauliOperator) -> u8 {
        let (small, large) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        let mut parity = 0u8;
        for (site, &a) in &small.letters {
            let b = large.get(site);
            if b != Letter::I && b != a {
                parity ^= 1;
            }
        }
        parity
    }

    /// Inverse element; for Hermitian strings this is the operator itself.
    pub fn inverse(&self) -> PauliOperator {
        let mut out = self.clone();
        out.phase = (4 - self.phase) & 3;
        out
    }

    /// Keeps only letters inside `region`; phase unchanged.
    pub fn restrict<F: Fn(&Site) -> bool>(&self, region: F) -> PauliOperator {
        PauliOperator {
            letters: self
                .letters
                .iter()
                .filter(|(s, _)| region(s))
                .map(|(s, l)| (*s, *l))
                .collect(),
            phase: self.phase,
        }
    }

    pub fn render(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<PauliOperator> {
        text.parse()
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", phase_text(self.phase))?;
        for (s, l) in &self.letters {
            write!(f, " {s}:{}", l.symbol())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli[{self}]")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let phase = match tokens.next() {
            Some("+1") | Some("1") => 0,
            Some("+i") | Some("i") => 1,
            Some("-1") => 2,
            Some("-i") => 3,
            other => return Err(Error::Parse(format!("bad phase token {other:?}"))),
        };
        let mut p = PauliOperator::identity().with_phase(phase);
        for tok in tokens {
            let (site, letter) = tok
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse(format!("bad letter token '{tok}'")))?;
            let site: Site = site.parse()?;
            let letter = match letter {
                "I" => Letter::I,
                "X" => Letter::X,
                "Y" => Letter::Y,
                "Z" => Letter::Z,
                _ => return Err(Error::Parse(format!("bad letter '{letter}'"))),
            };
            if p.letters.contains_key(&site) {
                return Err(Error::Parse(format!("duplicate site {site}")));
            }
            p.set(site, letter);
        }
        Ok(p)
    }
}

/// Dense Pauli string on `n` indexed qubits, used on finite systems.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PackedPauli {
    x: BitVector,
    z: BitVector,
    phase: u8,
}

impl PackedPauli {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
            phase: 0,
        }
    }

    pub fn from_parts(x: BitVector, z: BitVector, phase: u8) -> Self {
        assert_eq!(x.len(), z.len(), "x and z parts differ in length");
        Self {
            x,
            z,
            phase: phase & 3,
        }
    }

    /// From a length-2n (x|z) coordinate vector with phase +1.
    pub fn from_symplectic(v: &BitVector) -> Self {
        let n = v.len() / 2;
        let mut p = Self::identity(n);
        for i in v.iter_ones() {
            if i < n {
                p.x.set(i, true);
            } else {
                p.z.set(i - n, true);
            }
        }
        p
    }

    pub fn single(n: usize, qubit: usize, letter: Letter) -> Self {
        let mut p = Self::identity(n);
        p.set(qubit, letter);
        p
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase & 3;
    }

    pub fn x_bits(&self) -> &BitVector {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVector {
        &self.z
    }

    #[inline]
    pub fn get(&self, q: usize) -> Letter {
        Letter::from_bits(self.x.get(q), self.z.get(q))
    }

    #[inline]
    pub fn set(&mut self, q: usize, letter: Letter) {
        self.x.set(q, letter.x());
        self.z.set(q, letter.z());
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == 0
    }

    pub fn is_identity_letters(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// (x|z) coordinates as one length-2n vector.
    pub fn symplectic(&self) -> BitVector {
        let n = self.num_qubits();
        let mut v = BitVector::zeros(2 * n);
        for i in self.x.iter_ones() {
            v.set(i, true);
        }
        for i in self.z.iter_ones() {
            v.set(n + i, true);
        }
        v
    }

    /// In-place right multiplication `self = self · other`.
    pub fn mul_assign(&mut self, other: &PackedPauli) {
        assert_eq!(self.num_qubits(), other.num_qubits(), "qubit count mismatch");
        let mut k = self.phase as u32 + other.phase as u32;
        for i in 0..self.x.words().len() {
            k += packed_product_phase(
                self.x.words()[i],
                self.z.words()[i],
                other.x.words()[i],
                other.z.words()[i],
            );
        }
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
        self.phase = (k & 3) as u8;
    }

    pub fn multiply(&self, other: &PackedPauli) -> PackedPauli {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    pub fn commutes(&self, other: &PackedPauli) -> u8 {
        let mut parity = 0u32;
        for i in 0..self.x.words().len() {
            parity ^= ((self.x.words()[i] & other.z.words()[i])
                ^ (self.z.words()[i] & other.x.words()[i]))
                .count_ones();
        }
        (parity & 1) as u8
    }

    /// Converts using `site_of(q)` as the lattice position of qubit q.
    pub fn to_sparse<F: Fn(usize) -> Site>(&self, site_of: F) -> PauliOperator {
        let mut p = PauliOperator::identity().with_phase(self.phase);
        for q in 0..self.num_qubits() {
            let l = self.get(q);
            if l != Letter::I {
                p.set(site_of(q), l);
            }
        }
        p
    }

    /// Converts with `index_of(site)` giving the qubit index, `None` if off-system.
    pub fn from_sparse<F: Fn(&Site) -> Option<usize>>(
        n: usize,
        p: &PauliOperator,
        index_of: F,
    ) -> Result<PackedPauli> {
        let mut out = PackedPauli::identity(n);
        out.phase = p.phase();
        for (s, &l) in p.letters() {
            let q = index_of(s)
                .ok_or_else(|| Error::SupportOutsideDomain(format!("site {s} not in system")))?;
            out.set(q, l);
        }
        Ok(out)
    }
}

impl fmt::Debug for PackedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", phase_text(self.phase))?;
        write!(f, " ")?;
        for q in 0..self.num_qubits() {
            write!(f, "{}", self.get(q).symbol())?;
        }
        Ok(())
    }
}
