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


//! Spectral form factor of Floquet Clifford ensembles.
//!
//! For a Clifford `U` with symplectic part `S`, `|tr U|²` is `2^k` when every generator of the
//! invariant group `ker(S + I)` is mapped to itself with a `+` sign, and `0` otherwise.

use serde::{Deserialize, Serialize};

use crate::circuit::{FloquetCircuit, GateSource, Geometry};
use crate::clifford::CliffordGate;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::pauli::{packed_product_phase, PackedPauli};
use crate::scalar::Real;
use crate::stats::{self, fit_line, par_fold, LineFit};

/// Pauli strings fixed by conjugation, up to sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantGroup {
    /// `(x|z)` coordinates of a basis of `ker(S + I)`.
    pub generators: Vec<BitVector>,
    /// `true` where the generator picks up a minus sign.
    pub sign_flags: Vec<bool>,
}

impl InvariantGroup {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn all_positive(&self) -> bool {
        !self.sign_flags.iter().any(|&f| f)
    }
}

fn invariant_group_of(images: &[PackedPauli]) -> InvariantGroup {
    let n2 = images.len();
    let cols: Vec<BitVector> = images
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let mut v = p.symplectic();
            v.flip(j);
            v
        })
        .collect();
    let generators = BitMatrix::from_columns(n2, &cols).kernel_basis();
    let gate = CliffordGate::from_images_unchecked(images.to_vec());
    let sign_flags = generators
        .iter()
        .map(|v| {
            let img = gate
                .conjugate_packed(&PackedPauli::from_symplectic(v))
                .expect("matching size");
            debug_assert_eq!(img.symplectic(), *v);
            img.phase() == 2
        })
        .collect();
    InvariantGroup {
        generators,
        sign_flags,
    }
}

pub fn invariant_group(g: &CliffordGate) -> InvariantGroup {
    invariant_group_of(g.images())
}

/// `|tr g|²` as `Some(k)` for `2^k`, or `None` for zero.
pub fn trace_squared_exponent(g: &CliffordGate) -> Option<u32> {
    let h = invariant_group(g);
    h.all_positive().then_some(h.rank() as u32)
}

/// `|tr g|²`, exact. Panics beyond 63 qubits, where the value no longer fits.
pub fn trace_squared(g: &CliffordGate) -> u128 {
    assert!(g.num_qubits() <= 63, "|tr U|^2 overflows u128");
    trace_squared_exponent(g).map_or(0, |k| 1u128 << k)
}

/// Largest size accepted by [`brute_force_sff`].
pub const BRUTE_FORCE_MAX_QUBITS: usize = 12;

/// `Σ_P sign(P)` over every Pauli string `P` with `g P g† = ±P`, by enumeration of all `4^n`
/// strings in Gray-code order.
pub fn brute_force_sff(g: &CliffordGate) -> Result<u64> {
    let n = g.num_qubits();
    if n > BRUTE_FORCE_MAX_QUBITS {
        return Err(Error::OutOfRange(format!(
            "brute-force sum limited to {BRUTE_FORCE_MAX_QUBITS} qubits, got {n}"
        )));
    }
    let mask = (1u64 << n) - 1;
    let phase = |a: u64, b: u64| packed_product_phase(a & mask, a >> n, b & mask, b >> n);
    let gens: Vec<(u64, u32)> = g
        .images()
        .iter()
        .map(|p| {
            let x = p.x_bits().words().first().copied().unwrap_or(0);
            let z = p.z_bits().words().first().copied().unwrap_or(0);
            (x | z << n, p.phase() as u32)
        })
        .collect();
    // current string v (Hermitian) and its image i^k P_w
    let (mut v, mut w, mut k) = (0u64, 0u64, 0u32);
    let mut total: i64 = 1; // the identity
    for step in 1u64..(1u64 << (2 * n)) {
        let j = step.trailing_zeros() as usize;
        let e = 1u64 << j;
        let (we, ke) = gens[j];
        // P_{v^e} = i^{-g(v,e)} P_v P_e
        k = (k + 4 - phase(v, e) + ke + phase(w, we)) & 3;
        v ^= e;
        w ^= we;
        if v == w {
            debug_assert!(k % 2 == 0);
            total += if k == 0 { 1 } else { -1 };
        }
    }
    u64::try_from(total).map_err(|_| Error::OutOfRange("negative Pauli sum".into()))
}

/// `K(t)` for `t = 0..=t_max` from an exact per-time histogram of `log2 |tr U^t|²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SffEstimate {
    pub geometry: Geometry,
    pub l: usize,
    pub samples: u64,
    pub times: Vec<u64>,
    /// `K(t)`, the sample mean.
    pub k: Vec<f64>,
    pub stderr: Vec<f64>,
    /// `hist[t][j]`: realizations with `|tr U^t|² = 2^j`.
    pub hist: Vec<Vec<u64>>,
    /// Realizations with `tr U^t = 0`.
    pub zeros: Vec<u64>,
}

fn summarize(hist: &[u64], zeros: u64) -> (f64, f64, u64) {
    let n: u64 = hist.iter().sum::<u64>() + zeros;
    if n == 0 {
        return (0.0, 0.0, 0);
    }
    let sum: u128 = hist
        .iter()
        .enumerate()
        .map(|(j, &c)| (c as u128) << j)
        .sum();
    let mean = sum as f64 / n as f64;
    if n < 2 {
        return (mean, 0.0, n);
    }
    let ss: f64 = hist
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(j, &c)| c as f64 * ((j as f64).exp2() - mean).powi(2))
        .sum::<f64>()
        + zeros as f64 * mean * mean;
    (mean, (ss / (n - 1) as f64 / n as f64).sqrt(), n)
}

impl SffEstimate {
    fn from_hist(geometry: Geometry, hist: Vec<Vec<u64>>, zeros: Vec<u64>) -> Self {
        let l = geometry.num_sites().expect("finite");
        let mut k = Vec::with_capacity(hist.len());
        let mut stderr = Vec::with_capacity(hist.len());
        let mut samples = 0;
        for (h, &z) in hist.iter().zip(&zeros) {
            let (m, e, n) = summarize(h, z);
            k.push(m);
            stderr.push(e);
            samples = n;
        }
        Self {
            geometry,
            l,
            samples,
            times: (0..hist.len() as u64).collect(),
            k,
            stderr,
            hist,
            zeros,
        }
    }

    pub fn log2_k(&self) -> Vec<f64> {
        self.k.iter().map(|k| k.log2()).collect()
    }

    /// Merges two estimates over disjoint realizations of the same ensemble.
    pub fn merge(&self, other: &SffEstimate) -> Result<SffEstimate> {
        if self.geometry != other.geometry || self.hist.len() != other.hist.len() {
            return Err(Error::GeometryMismatch("estimates of different ensembles".into()));
        }
        let hist = self
            .hist
            .iter()
            .zip(&other.hist)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        let zeros = self.zeros.iter().zip(&other.zeros).map(|(a, b)| a + b).collect();
        Ok(Self::from_hist(self.geometry, hist, zeros))
    }

    /// Time-averaged curve, see [`time_average`].
    pub fn time_average(&self) -> Vec<f64> {
        time_average(&self.k)
    }
}

/// Exponents of `|tr U_per^t|²` for `t = 0..=t_max` in one realization.
pub fn realization_traces(c: &mut FloquetCircuit, t_max: u64) -> Result<Vec<Option<u32>>> {
    let n = c
        .geometry()
        .num_sites()
        .ok_or_else(|| Error::GeometryMismatch("form factor needs a finite geometry".into()))?;
    let mut images = CliffordGate::identity(n).images().to_vec();
    let mut out = Vec::with_capacity(t_max as usize + 1);
    out.push(Some(2 * n as u32));
    let mut plan = c.period_plan(0)?;
    for t in 1..=t_max {
        if !c.is_quenched() {
            plan = c.period_plan(t - 1)?;
        }
        for img in images.iter_mut() {
            plan.apply(c, img);
        }
        let h = invariant_group_of(&images);
        out.push(h.all_positive().then_some(h.rank() as u32));
    }
    Ok(out)
}

/// `K(t) = E |tr U_per^t|²` over independent quenched realizations.
pub fn sff_curve(geometry: Geometry, t_max: u64, samples: u64, seed: u64) -> Result<SffEstimate> {
    sff_curve_with(geometry, GateSource::Uniform, t_max, samples, seed)
}

pub fn sff_curve_with(
    geometry: Geometry,
    source: GateSource,
    t_max: u64,
    samples: u64,
    seed: u64,
) -> Result<SffEstimate> {
    let n = geometry
        .num_sites()
        .ok_or_else(|| Error::GeometryMismatch("form factor needs a finite geometry".into()))?;
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be at least 1".into()));
    }
    if n > 63 {
        return Err(Error::OutOfRange(format!("{n} sites: |tr U|^2 exceeds 128-bit sums")));
    }
    let len = t_max as usize + 1;
    let bins = 2 * n + 1;
    let (hist, zeros) = par_fold(
        samples,
        || (vec![vec![0u64; bins]; len], vec![0u64; len]),
        |acc, i| {
            let mut c = FloquetCircuit::with_source(geometry, stats::sample_seed(seed, i), source);
            let tr = realization_traces(&mut c, t_max).expect("finite geometry");
            for (t, e) in tr.into_iter().enumerate() {
                match e {
                    Some(k) => acc.0[t][k as usize] += 1,
                    None => acc.1[t] += 1,
                }
            }
        },
        |mut a, b| {
            for (x, y) in a.0.iter_mut().zip(&b.0) {
                for (u, v) in x.iter_mut().zip(y) {
                    *u += v;
                }
            }
            for (u, v) in a.1.iter_mut().zip(&b.1) {
                *u += v;
            }
            a
        },
    );
    Ok(SffEstimate::from_hist(geometry, hist, zeros))
}

/// `K̄(t) = (1/t) Σ_{t'=0}^{t} K(t')` for `t >= 1`, and `K̄(0) = K(0)`.
pub fn time_average<F: Real>(k: &[F]) -> Vec<F> {
    let mut acc = F::zero();
    k.iter()
        .enumerate()
        .map(|(t, &v)| {
            acc = acc + v;
            if t == 0 {
                v
            } else {
                acc / F::of_u64(t as u64)
            }
        })
        .collect()
}

/// Circular-unitary-ensemble form factor for dimension `2^l`.
pub fn rmt_reference<F: Real>(l: u32, t: u64) -> F {
    let d = F::of(2.0).powi(l as i32);
    if t == 0 {
        d * d
    } else if F::of_u64(t) <= d {
        F::of_u64(t)
    } else {
        d
    }
}

/// `K̃(ω) = (1/π) Σ_{t=1}^{t_max} K(t) cos(ωt)`, with `k[0]` ignored.
pub fn fourier_sff<F: Real>(k: &[F], omega: F) -> F {
    k.iter()
        .enumerate()
        .skip(1)
        .fold(F::zero(), |s, (t, &v)| s + v * (omega * F::of_u64(t as u64)).cos())
        / F::PI()
}

/// Exponential ramp `log2 K(t) ≈ slope·t + intercept`, `α = 2·slope`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RampFit {
    pub line: LineFit<f64>,
    pub alpha: f64,
    pub window: (u64, u64),
}

/// Default early-ramp window `[2, 3L/4]`; `t = 1` sits below the ramp.
pub fn default_ramp_window(l: usize) -> (u64, u64) {
    (2, (3 * l / 4).max(3) as u64)
}

/// Default plateau window `[3L, 4L]`.
pub fn default_plateau_window(l: usize) -> (u64, u64) {
    (3 * l as u64, 4 * l as u64)
}

pub fn fit_ramp(est: &SffEstimate, window: (u64, u64)) -> Result<RampFit> {
    let (a, b) = window;
    if a > b || b as usize >= est.k.len() {
        return Err(Error::OutOfRange(format!("ramp window [{a}, {b}] outside the curve")));
    }
    let ts: Vec<f64> = (a..=b).map(|t| t as f64).collect();
    let ys: Vec<f64> = (a..=b).map(|t| est.k[t as usize].log2()).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(Error::Fit("K(t) = 0 inside the ramp window".into()));
    }
    let line = fit_line(&ts, &ys)?;
    Ok(RampFit {
        line,
        alpha: 2.0 * line.slope,
        window,
    })
}

/// Time where the ramp line reaches the plateau level `log2 mean_{t in plateau} K(t)`.
pub fn plateau_onset(est: &SffEstimate, ramp: &RampFit, plateau: (u64, u64)) -> Result<f64> {
    let (a, b) = plateau;
    if a > b || b as usize >= est.k.len() {
        return Err(Error::OutOfRange(format!("plateau window [{a}, {b}] outside the curve")));
    }
    let level = ((a..=b).map(|t| est.k[t as usize]).sum::<f64>() / (b - a + 1) as f64).log2();
    if ramp.line.slope <= 0.0 {
        return Err(Error::Fit("ramp does not grow".into()));
    }
    Ok((level - ramp.line.intercept) / ramp.line.slope)
}

/// Smallest `m <= max` with `S^m = I`.
pub fn symplectic_order(g: &CliffordGate, max: u64) -> Option<u64> {
    let s = g.symplectic();
    let id = BitMatrix::identity(s.rows());
    let mut p = s.clone();
    for m in 1..=max {
        if p == id {
            return Some(m);
        }
        p = s.mat_mul(&p).expect("square");
    }
    None
}

/// Smallest `r <= max` with `S^r v = v`.
pub fn orbit_length(g: &CliffordGate, v: &BitVector, max: u64) -> Option<u64> {
    let s = g.symplectic();
    let mut w = s.mul_vec(v).ok()?;
    for r in 1..=max {
        if w == *v {
            return Some(r);
        }
        w = s.mul_vec(&w).ok()?;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{sample_uniform_with, CliffordEnsembleSpec};
    use crate::pauli::Letter;
    use crate::testkit::dense;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn single(n: usize, q: usize, l: Letter) -> PackedPauli {
        PackedPauli::single(n, q, l)
    }

    #[test]
    fn identity_group() {
        let h = invariant_group(&CliffordGate::identity(3));
        assert_eq!(h.rank(), 6);
        assert!(h.all_positive());
        assert_eq!(trace_squared(&CliffordGate::identity(3)), 64);
    }

    #[test]
    fn pauli_x_as_gate() {
        let g = CliffordGate::pauli(&single(1, 0, Letter::X));
        let h = invariant_group(&g);
        let x = single(1, 0, Letter::X).symplectic();
        let z = single(1, 0, Letter::Z).symplectic();
        assert_eq!(h.generators, vec![x, z]);
        assert_eq!(h.sign_flags, vec![false, true]);
        assert_eq!(trace_squared(&g), 0);
    }

    #[test]
    fn hadamard_and_phase() {
        let h = CliffordGate::hadamard(1, 0);
        let grp = invariant_group(&h);
        assert_eq!(grp.rank(), 1);
        assert_eq!(grp.generators[0], single(1, 0, Letter::Y).symplectic());
        assert_eq!(grp.sign_flags, vec![true]);
        assert_eq!(trace_squared(&h), 0);
        let s = CliffordGate::phase_s(1, 0);
        assert_eq!(trace_squared(&s), 2);
        assert_eq!(brute_force_sff(&s).unwrap(), 2);
        assert_eq!(brute_force_sff(&CliffordGate::identity(2)).unwrap(), 16);
    }

    #[test]
    fn matches_dense_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let n = rng.random_range(1..=3);
            let len = rng.random_range(0..12);
            let (g, u) = dense::random_word(&mut rng, n, len);
            let tr = dense::trace(&u).norm_sqr();
            let exact = trace_squared(&g);
            assert!((tr - exact as f64).abs() < 1e-9, "{tr} vs {exact}");
            assert_eq!(brute_force_sff(&g).unwrap() as u128, exact);
        }
    }

    #[test]
    fn matches_pauli_sum_on_uniform_gates() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=5 {
            for _ in 0..20 {
                let g = sample_uniform_with(n, &mut rng);
                assert_eq!(brute_force_sff(&g).unwrap() as u128, trace_squared(&g));
            }
        }
        let big = crate::clifford::sample_uniform(&CliffordEnsembleSpec::new(13, 1));
        assert!(brute_force_sff(&big).is_err());
    }

    #[test]
    fn circuit_powers_match_pauli_sum() {
        let geo = Geometry::chain(6, true).unwrap();
        for seed in 0..4 {
            let mut c = FloquetCircuit::new(geo, seed);
            let tr = realization_traces(&mut c, 8).unwrap();
            for (t, e) in tr.iter().enumerate() {
                let g = c.power(t as u64).unwrap();
                let expect = brute_force_sff(&g).unwrap();
                assert_eq!(e.map_or(0, |k| 1u64 << k), expect, "seed {seed} t {t}");
            }
        }
    }

    #[test]
    fn curve_basics() {
        let geo = Geometry::chain(4, true).unwrap();
        let est = sff_curve(geo, 6, 50, 1).unwrap();
        assert_eq!(est.k[0], 256.0);
        assert_eq!(est.stderr[0], 0.0);
        assert_eq!(est.hist[0][8], 50);
        assert_eq!(est, sff_curve(geo, 6, 50, 1).unwrap());
        let a = sff_curve(geo, 6, 30, 1).unwrap();
        assert_eq!(a.samples, 30);
        let frozen = sff_curve_with(geo, GateSource::Identity, 3, 5, 0).unwrap();
        assert!(frozen.k.iter().all(|&k| k == 256.0));
    }

    #[test]
    fn averages_and_transforms() {
        let k = [4.0, 4.0, 4.0, 4.0];
        let kb = time_average(&k);
        assert_eq!(kb[0], 4.0);
        assert_relative_eq!(kb[1], 8.0);
        assert_relative_eq!(kb[3], 16.0 / 3.0);
        let kf: Vec<f32> = time_average(&[1.0f32, 0.0, 2.0]);
        assert_relative_eq!(kf[2], 1.5);
        assert_eq!(rmt_reference::<f64>(3, 0), 64.0);
        assert_eq!(rmt_reference::<f64>(3, 5), 5.0);
        assert_eq!(rmt_reference::<f64>(3, 100), 8.0);
        assert_eq!(fourier_sff(&[5.0, 0.0, 0.0], 1.3), 0.0);
        assert_relative_eq!(fourier_sff(&[9.0, 1.0, 2.0], 0.0), 3.0 / std::f64::consts::PI);
        assert_relative_eq!(
            fourier_sff(&[0.0, 1.0], 0.7),
            0.7f64.cos() / std::f64::consts::PI,
            epsilon = 1e-15
        );
    }

    #[test]
    fn orbits_divide_order() {
        let geo = Geometry::chain(4, true).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for seed in 0..10 {
            let mut c = FloquetCircuit::new(geo, seed);
            let g = c.period_gate().unwrap();
            let m = symplectic_order(&g, 100_000).expect("finite group");
            for _ in 0..10 {
                let bits: Vec<u8> = (0..8).map(|_| rng.random_range(0..2)).collect();
                let v = BitVector::from_bits(&bits);
                let r = orbit_length(&g, &v, m).unwrap();
                assert_eq!(m % r, 0);
            }
        }
    }

    #[test]
    fn ramp_and_plateau_on_synthetic_curve() {
        // log2 K = t/2 + 3 up to t = 20, then flat at 13
        let k: Vec<f64> = (0..40u64)
            .map(|t| if t <= 20 { (t as f64 / 2.0 + 3.0).exp2() } else { 13f64.exp2() })
            .collect();
        let hist = vec![vec![0u64; 1]; 40];
        let mut est = SffEstimate::from_hist(Geometry::chain(4, true).unwrap(), hist, vec![1; 40]);
        est.k = k;
        let r = fit_ramp(&est, (2, 15)).unwrap();
        assert_relative_eq!(r.line.slope, 0.5, epsilon = 1e-12);
        assert_relative_eq!(r.alpha, 1.0, epsilon = 1e-12);
        assert_relative_eq!(plateau_onset(&est, &r, (30, 39)).unwrap(), 20.0, epsilon = 1e-9);
    }
}
