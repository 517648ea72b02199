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


//! Dynamical walls in 1D brickwork circuits.
//!
//! A two-qubit gate acting on sites `(j, j+1)` is split into 2×2 blocks in the site-block
//! ordering `(x_0, z_0, x_1, z_1)`:
//!
//! ```text
//! S = [[A, B],
//!      [C, D]]
//! ```
//!
//! so `C` carries site-0 content onto site 1 and `B` the reverse. Gate `g_j` sits on anchor `j`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Extent, FloquetCircuit, Geometry, Layer, WindowEvolver};
use crate::clifford::{sample_symplectic_codes, CliffordGate};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliOperator, Site};
use crate::stats::{self, fit_line, par_fold, Estimate};

/// 2×2 matrix over GF(2); bit `c` of row `r` is entry `(r, c)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block2(pub [u8; 2]);

impl Block2 {
    pub const ZERO: Block2 = Block2([0, 0]);
    pub const IDENTITY: Block2 = Block2([1, 2]);

    #[inline]
    pub fn get(self, r: usize, c: usize) -> bool {
        self.0[r] >> c & 1 == 1
    }

    #[inline]
    pub fn mul(self, rhs: Block2) -> Block2 {
        let row = |r: u8| (r & 1) * rhs.0[0] ^ (r >> 1 & 1) * rhs.0[1];
        Block2([row(self.0[0]), row(self.0[1])])
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == [0, 0]
    }
}

/// Site blocks of a two-qubit symplectic matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GateBlocks {
    pub a: Block2,
    pub b: Block2,
    pub c: Block2,
    pub d: Block2,
}

impl GateBlocks {
    /// From the packed `(x|z)` images of `X_0, X_1, Z_0, Z_1`.
    pub fn from_codes(codes: &[u64]) -> Self {
        // generator with component `comp` on `site` is bit comp*2+site
        let entry = |so: usize, co: usize, si: usize, ci: usize| {
            (codes[ci * 2 + si] >> (co * 2 + so) & 1) as u8
        };
        let block = |so: usize, si: usize| {
            let mut rows = [0u8; 2];
            for (co, row) in rows.iter_mut().enumerate() {
                for ci in 0..2 {
                    *row |= entry(so, co, si, ci) << ci;
                }
            }
            Block2(rows)
        };
        Self {
            a: block(0, 0),
            b: block(0, 1),
            c: block(1, 0),
            d: block(1, 1),
        }
    }

    pub fn from_gate(g: &CliffordGate) -> Result<Self> {
        if g.num_qubits() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "wall blocks need a 2-qubit gate, got {}",
                g.num_qubits()
            )));
        }
        let codes: Vec<u64> = g
            .images()
            .iter()
            .map(|p| {
                let x = p.x_bits().words()[0];
                let z = p.z_bits().words()[0];
                x | z << 2
            })
            .collect();
        Ok(Self::from_codes(&codes))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WallSide {
    /// Blocks rightward growth.
    Right,
    /// Blocks leftward growth.
    Left,
}

/// Penetration-one wall condition for the neighbouring pair `(g_j, g_{j+1})`.
pub fn wall_predicate(g0: &GateBlocks, g1: &GateBlocks, side: WallSide) -> bool {
    match side {
        WallSide::Right => {
            g1.c.mul(g0.c).is_zero() && g1.c.mul(g0.d).mul(g1.a).mul(g0.c).is_zero()
        }
        WallSide::Left => {
            g0.b.mul(g1.b).is_zero() && g0.b.mul(g1.a).mul(g0.d).mul(g1.b).is_zero()
        }
    }
}

/// Position reported for a wall on the pair at anchor `j`.
///
/// Right walls at `x` confine operators starting on sites `<= x` to `<= x + 1`; left walls at
/// `x` confine operators starting on `>= x` to `>= x - 1`.
pub fn wall_position(j: i64, side: WallSide) -> i64 {
    match side {
        WallSide::Right => j,
        WallSide::Left => j + 2,
    }
}

/// Site range of a chain that supports wall detection: unbounded or open.
fn chain_bounds(g: &Geometry) -> Result<(i64, i64)> {
    match g.extent {
        _ if g.dim != 1 => Err(Error::GeometryMismatch("walls live on 1D chains".into())),
        Extent::Unbounded => Ok((i64::MIN / 4, i64::MAX / 4)),
        Extent::Finite { lx, periodic: false, .. } => Ok((0, lx as i64 - 1)),
        Extent::Finite { .. } => Err(Error::GeometryMismatch(
            "wall positions are undefined on a periodic chain".into(),
        )),
    }
}

fn circuit_blocks(c: &mut FloquetCircuit, j: i64) -> GateBlocks {
    let layer = if j.rem_euclid(2) == 0 { Layer::A } else { Layer::B };
    GateBlocks::from_gate(&c.gate(layer, Site::Line(j))).expect("1D gates are 2-qubit")
}

/// Wall positions in `[x_min, x_max]` predicted from the gates of a 1D circuit.
pub fn predicted_walls(c: &mut FloquetCircuit, side: WallSide, x_min: i64, x_max: i64) -> Result<Vec<i64>> {
    let (lo, hi) = chain_bounds(c.geometry())?;
    let mut out = Vec::new();
    for x in x_min..=x_max {
        let j = match side {
            WallSide::Right => x,
            WallSide::Left => x - 2,
        };
        if j < lo || j + 2 > hi {
            return Err(Error::OutOfRange(format!("position {x} has no gate pair inside the chain")));
        }
        let (g0, g1) = (circuit_blocks(c, j), circuit_blocks(c, j + 1));
        if wall_predicate(&g0, &g1, side) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Furthest excursion `(min x, max x)` of single-site `X` and `Z` started at `s`, over
/// `2·t_probe` half-steps.
fn probe_reach(c: &mut FloquetCircuit, s: i64, t_probe: u64) -> (i64, i64) {
    let mut lo = s;
    let mut hi = s;
    for letter in [Letter::X, Letter::Z] {
        let p = PauliOperator::single(Site::Line(s), letter);
        if c.geometry().is_finite() {
            let mut q = p;
            for h in 0..2 * t_probe {
                q = c.apply_half_step_at(Layer::at_half_step(h), &q, h / 2);
                for site in q.support() {
                    if let Site::Line(x) = site {
                        lo = lo.min(x);
                        hi = hi.max(x);
                    }
                }
            }
            continue;
        }
        let mut ev = WindowEvolver::new(c, &p, 2 * t_probe).expect("unbounded chain");
        for _ in 0..2 * t_probe {
            ev.step(c);
            if let Some((a, b, _, _)) = ev.bbox() {
                lo = lo.min(a);
                hi = hi.max(b);
            }
        }
    }
    (lo, hi)
}

/// Walls in `[x_min, x_max]` found by evolving every single-site probe for `t_probe` periods.
///
/// Probes start at period boundaries. Sites further than `2·t_probe` from a candidate cannot
/// reach it and are not simulated.
pub fn detect_walls_dynamical(
    c: &mut FloquetCircuit,
    side: WallSide,
    x_min: i64,
    x_max: i64,
    t_probe: u64,
    penetration: i64,
) -> Result<Vec<i64>> {
    let (lo, hi) = chain_bounds(c.geometry())?;
    if x_min > x_max || penetration < 0 {
        return Err(Error::OutOfRange("empty range or negative penetration".into()));
    }
    if x_min < lo || x_max > hi {
        return Err(Error::OutOfRange(format!("[{x_min}, {x_max}] outside the chain")));
    }
    let margin = 2 * t_probe as i64 + 1;
    let (s0, s1) = match side {
        WallSide::Right => ((x_min - margin).max(lo), x_max),
        WallSide::Left => (x_min, (x_max + margin).min(hi)),
    };
    let reach: Vec<(i64, i64)> = (s0..=s1).map(|s| probe_reach(c, s, t_probe)).collect();
    let mut out = Vec::new();
    match side {
        WallSide::Right => {
            let mut worst = i64::MIN;
            for (k, s) in (s0..=s1).enumerate() {
                worst = worst.max(reach[k].1);
                if s >= x_min && worst <= s + penetration {
                    out.push(s);
                }
            }
        }
        WallSide::Left => {
            let mut worst = i64::MAX;
            for (k, &(lo, _)) in reach.iter().enumerate().rev() {
                let s = s0 + k as i64;
                worst = worst.min(lo);
                if s <= x_max && worst >= s - penetration {
                    out.push(s);
                }
            }
            out.reverse();
        }
    }
    Ok(out)
}

/// Fraction of candidate positions where gate prediction and dynamical detection agree.
pub fn wall_agreement(
    samples: u64,
    seed: u64,
    side: WallSide,
    width: i64,
    t_probe: u64,
) -> Result<Estimate<f64>> {
    let geo = Geometry::unbounded(1)?;
    let (agree, total) = par_fold(
        samples,
        || (0u64, 0u64),
        |acc, i| {
            let mut c = FloquetCircuit::new(geo, stats::sample_seed(seed, i));
            let p = predicted_walls(&mut c, side, 0, width - 1).expect("chain");
            let d = detect_walls_dynamical(&mut c, side, 0, width - 1, t_probe, 1).expect("chain");
            for x in 0..width {
                if p.contains(&x) == d.contains(&x) {
                    acc.0 += 1;
                }
                acc.1 += 1;
            }
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    );
    Ok(Estimate::proportion(agree, total))
}

/// Distribution of the first right wall in a chain of independent uniform gates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WallHistogram {
    pub samples: u64,
    pub l_max: usize,
    /// `counts[l]`: first wall at pair `l`.
    pub counts: Vec<u64>,
    /// No wall at any `l <= l_max`.
    pub none: u64,
    /// The same counts split into independent batches, for error bars of derived quantities.
    pub batches: Vec<Vec<u64>>,
}

pub const WALL_BATCHES: usize = 16;

/// First-wall position for one chain.
pub fn first_wall<R: Rng + ?Sized>(rng: &mut R, l_max: usize) -> Option<usize> {
    let draw = |rng: &mut R| GateBlocks::from_codes(&sample_symplectic_codes(2, rng).0);
    let mut prev = draw(rng);
    for l in 0..=l_max {
        let next = draw(rng);
        if wall_predicate(&prev, &next, WallSide::Right) {
            return Some(l);
        }
        prev = next;
    }
    None
}

pub fn wall_histogram(samples: u64, seed: u64, l_max: usize) -> Result<WallHistogram> {
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be at least 1".into()));
    }
    let width = l_max + 2;
    let batches = par_fold(
        samples,
        || vec![vec![0u64; width]; WALL_BATCHES],
        |acc, i| {
            let mut rng = stats::sample_rng(seed, i);
            let slot = first_wall(&mut rng, l_max).unwrap_or(l_max + 1);
            acc[(i % WALL_BATCHES as u64) as usize][slot] += 1;
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(&b) {
                for (u, v) in x.iter_mut().zip(y) {
                    *u += v;
                }
            }
            a
        },
    );
    let mut counts = vec![0u64; width];
    for b in &batches {
        for (u, v) in counts.iter_mut().zip(b) {
            *u += v;
        }
    }
    let none = counts.pop().expect("nonempty");
    Ok(WallHistogram {
        samples,
        l_max,
        counts,
        none,
        batches,
    })
}

/// Summary statistics of a [`WallHistogram`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WallAnalysis {
    /// `P(l = 0)`, a wall on the first pair.
    pub p0: Estimate<f64>,
    /// `P(no wall on pair 1 | no wall on pair 0)`.
    pub conditional_no_wall: Estimate<f64>,
    /// `P(l) ≈ c·e^{-l/μ}` for `l >= 1`.
    pub c: f64,
    pub mu: f64,
    pub fit_window: (usize, usize),
    /// Mean first-wall position, `Σ l·P(l)` over chains with a wall.
    pub mean_l: Estimate<f64>,
    /// `P(0) + Σ_{l>=1} c·e^{-l/μ}`, which should be 1.
    pub normalization: Estimate<f64>,
}

fn geometric_fit(counts: &[u64], total: u64, window: (usize, usize)) -> Result<(f64, f64)> {
    let (lo, hi) = window;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for l in lo..=hi.min(counts.len() - 1) {
        if counts[l] > 0 {
            xs.push(l as f64);
            ys.push((counts[l] as f64 / total as f64).ln());
        }
    }
    if xs.len() < 5 {
        return Err(Error::Fit(format!("{} populated bins in the fit window", xs.len())));
    }
    let f = fit_line(&xs, &ys)?;
    if f.slope >= 0.0 {
        return Err(Error::Fit("first-wall distribution does not decay".into()));
    }
    Ok((f.intercept.exp(), -1.0 / f.slope))
}

fn normalization(counts: &[u64], total: u64, c: f64, mu: f64) -> f64 {
    let r = (-1.0 / mu).exp();
    counts[0] as f64 / total as f64 + c * r / (1.0 - r)
}

/// First-wall histogram from dynamical detection with penetration `penetration`: for each
/// realization, the first right wall at `x >= 0` confining probes for `t_probe` periods.
pub fn wall_histogram_dynamical(
    samples: u64,
    seed: u64,
    l_max: usize,
    t_probe: u64,
    penetration: i64,
) -> Result<WallHistogram> {
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be at least 1".into()));
    }
    if penetration < 1 {
        return Err(Error::OutOfRange("penetration must be at least 1".into()));
    }
    let geo = Geometry::unbounded(1)?;
    let width = l_max + 2;
    let batches = par_fold(
        samples,
        || vec![vec![0u64; width]; WALL_BATCHES],
        |acc, i| {
            let mut c = FloquetCircuit::new(geo, stats::sample_seed(seed, i));
            let mut slot = l_max + 1;
            let mut lo = 0i64;
            while lo <= l_max as i64 {
                let hi = (lo + 15).min(l_max as i64);
                let found = detect_walls_dynamical(&mut c, WallSide::Right, lo, hi, t_probe, penetration)
                    .expect("unbounded chain");
                if let Some(&x) = found.first() {
                    slot = x as usize;
                    break;
                }
                lo = hi + 1;
            }
            acc[(i % WALL_BATCHES as u64) as usize][slot] += 1;
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(&b) {
                for (u, v) in x.iter_mut().zip(y) {
                    *u += v;
                }
            }
            a
        },
    );
    let mut counts = vec![0u64; width];
    for b in &batches {
        for (u, v) in counts.iter_mut().zip(b) {
            *u += v;
        }
    }
    let none = counts.pop().expect("nonempty");
    Ok(WallHistogram {
        samples,
        l_max,
        counts,
        none,
        batches,
    })
}

impl WallHistogram {
    /// Probability of a first wall at `l`.
    pub fn p(&self, l: usize) -> f64 {
        self.counts.get(l).map_or(0.0, |&c| c as f64 / self.samples as f64)
    }

    pub fn analyze(&self, fit_window: (usize, usize)) -> Result<WallAnalysis> {
        let n = self.samples;
        let beyond0 = n - self.counts[0];
        let beyond1 = beyond0 - self.counts.get(1).copied().unwrap_or(0);
        let (c, mu) = geometric_fit(&self.counts, n, fit_window)?;

        // k observations of value l
        let mut lt = stats::Tally::default();
        for (l, &k) in self.counts.iter().enumerate() {
            let (l, k) = (l as u128, k as u128);
            lt.count += k as u64;
            lt.sum += l * k;
            lt.sum_sq += l * l * k;
        }

        let norms: Vec<f64> = self
            .batches
            .iter()
            .filter_map(|b| {
                let m: u64 = b.iter().sum();
                let (bc, bmu) = geometric_fit(&b[..b.len() - 1], m, fit_window).ok()?;
                Some(normalization(b, m, bc, bmu))
            })
            .collect();
        let k = norms.len() as f64;
        let spread = if norms.len() > 1 {
            let m = norms.iter().sum::<f64>() / k;
            (norms.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt()
        } else {
            f64::NAN
        };

        Ok(WallAnalysis {
            p0: Estimate::proportion(self.counts[0], n),
            conditional_no_wall: Estimate::proportion(beyond1, beyond0),
            c,
            mu,
            fit_window,
            mean_l: lt.estimate(),
            normalization: Estimate {
                mean: normalization(&self.counts, n, c, mu),
                stderr: spread,
                samples: n,
            },
        })
    }
}
