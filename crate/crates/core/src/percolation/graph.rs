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


//! Random boundary-growth digraphs and their directed paths.
//!
//! The full graph `G` is built in rings: ring `n >= 2` has `4(n−1)` vertices, with corners at
//! positions `s(n−1)` for sides `s = 0..4`. The apex (ring 1) points to the four corners of
//! ring 2; a corner `c` of ring `n` points to positions `cn − 1, cn, cn + 1` of ring `n+1`; an
//! edge vertex `s(n−1) + j` points to `sn + j` and `sn + j + 1`.
//!
//! The quadrant keeps positions `0..n` of ring `n` (side 0 plus the corner of side 1) and is the
//! triangular digraph `(k, i) → (k+1, i), (k+1, i+1)` with `k = n − 1`.
//!
//! Arrow randomness is a hash of `(seed, ring, position)`, so the quadrant is a subgraph of the
//! full graph sample, and samples at different depths or `q` are coupled.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::tables::{vertex_distribution, ArrowDistribution, DENOMINATOR};
use crate::error::{Error, Result};
use crate::stats::{self, hash_words, par_fold, Estimate};

/// How out-arrows are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ArrowModel {
    /// Exact per-vertex joint laws.
    Joint,
    /// Every arrow absent independently with probability `q`.
    Independent { q: f64 },
}

impl ArrowModel {
    /// Independent arrows at the decoupling value of `q`.
    pub fn independent() -> Self {
        ArrowModel::Independent {
            q: super::tables::decouple_q().1,
        }
    }
}

const JOINT_TAG: u64 = 0x6a6f_696e_74;
const LEG_TAG: u64 = 0x6c65_67;

/// Out-degree of ring vertex `(n, p)`.
#[inline]
pub fn ring_arity(n: u64, p: u64) -> usize {
    if n == 1 {
        4
    } else if p % (n - 1) == 0 {
        3
    } else {
        2
    }
}

/// Positions in ring `n + 1` targeted by the legs of ring vertex `(n, p)`.
pub fn ring_targets(n: u64, p: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0, 1, 2, 3];
    }
    let m = n - 1;
    let next = 4 * n;
    let (s, j) = (p / m, p % m);
    if j == 0 {
        vec![(s * n + next - 1) % next, s * n, (s * n + 1) % next]
    } else {
        vec![s * n + j, s * n + j + 1]
    }
}

/// Deterministic tables shared across samples.
#[derive(Clone, Debug)]
pub struct Sampler {
    pub model: ArrowModel,
    tables: [ArrowDistribution; 3],
}

impl Sampler {
    pub fn new(model: ArrowModel) -> Result<Self> {
        if let ArrowModel::Independent { q } = model {
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::OutOfRange(format!("q = {q} outside [0, 1]")));
            }
        }
        Ok(Self {
            model,
            tables: [
                vertex_distribution(2)?,
                vertex_distribution(3)?,
                vertex_distribution(4)?,
            ],
        })
    }

    /// Out-arrow pattern of ring vertex `(n, p)`; bit `l` is leg `l` of [`ring_targets`].
    #[inline]
    pub fn ring_pattern(&self, seed: u64, n: u64, p: u64) -> u8 {
        let arity = ring_arity(n, p);
        match self.model {
            ArrowModel::Joint => {
                let h = hash_words(&[seed, n, p, JOINT_TAG]);
                let r = ((h as u128 * DENOMINATOR as u128) >> 64) as u64;
                self.tables[arity - 2].pattern_for(r) as u8
            }
            ArrowModel::Independent { q } => (0..arity).fold(0u8, |acc, l| {
                let h = hash_words(&[seed, n, p, LEG_TAG + l as u64]);
                let u = (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                acc | ((u >= q) as u8) << l
            }),
        }
    }

    /// Quadrant arrows of `(k, i)`: bit 0 to `(k+1, i)`, bit 1 to `(k+1, i+1)`.
    #[inline]
    pub fn quadrant_pattern(&self, seed: u64, k: u64, i: u64) -> u8 {
        let full = self.ring_pattern(seed, k + 1, i);
        if k > 0 && i == 0 {
            // corner of side 0: legs (−1, 0, 1), the first leaves the quadrant
            full >> 1 & 3
        } else {
            full & 3
        }
    }
}

/// Lower quadrant with explicit arrows, levels `0..depth` (level `k` has `k + 1` vertices).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadrantGraph {
    pub depth: usize,
    pub arrows: Vec<Vec<u8>>,
}

impl QuadrantGraph {
    pub fn filled(depth: usize, pattern: u8) -> Self {
        Self {
            depth,
            arrows: (0..depth).map(|k| vec![pattern & 3; k + 1]).collect(),
        }
    }

    pub fn has_arrow(&self, k: usize, i: usize, right: bool) -> bool {
        self.arrows[k][i] >> (right as u8) & 1 == 1
    }

    pub fn candidate_arrows(&self) -> usize {
        self.depth * (self.depth + 1)
    }

    pub fn present_arrows(&self) -> usize {
        self.arrows
            .iter()
            .flatten()
            .map(|b| b.count_ones() as usize)
            .sum()
    }
}

/// Explicit quadrant sample to `depth` arrow levels.
pub fn sample_quadrant(depth: usize, model: ArrowModel, seed: u64) -> Result<QuadrantGraph> {
    if depth == 0 {
        return Err(Error::OutOfRange("depth must be at least 1".into()));
    }
    let s = Sampler::new(model)?;
    Ok(QuadrantGraph {
        depth,
        arrows: (0..depth as u64)
            .map(|k| (0..=k).map(|i| s.quadrant_pattern(seed, k, i)).collect())
            .collect(),
    })
}

/// Deepest level reachable from the apex along arrows.
pub fn longest_path(g: &QuadrantGraph) -> usize {
    let mut reach = vec![true];
    for k in 0..g.depth {
        let mut next = vec![false; k + 2];
        let mut any = false;
        for (i, _) in reach.iter().enumerate().filter(|(_, &r)| r) {
            let b = g.arrows[k][i];
            if b & 1 == 1 {
                next[i] = true;
                any = true;
            }
            if b & 2 == 2 {
                next[i + 1] = true;
                any = true;
            }
        }
        if !any {
            return k;
        }
        reach = next;
    }
    g.depth
}

/// Longest path in a lazily sampled quadrant, stopping at `depth`.
pub fn quadrant_reach(s: &Sampler, seed: u64, depth: usize) -> usize {
    let mut reach: Vec<u64> = vec![0];
    let mut next: Vec<u64> = Vec::new();
    for k in 0..depth as u64 {
        next.clear();
        for &i in &reach {
            let b = s.quadrant_pattern(seed, k, i);
            if b & 1 == 1 && next.last() != Some(&i) {
                next.push(i);
            }
            if b & 2 == 2 {
                next.push(i + 1);
            }
        }
        if next.is_empty() {
            return k as usize;
        }
        std::mem::swap(&mut reach, &mut next);
    }
    depth
}

/// Longest path in a lazily sampled full graph, stopping at `depth`.
pub fn full_reach(s: &Sampler, seed: u64, depth: usize) -> usize {
    let mut reach: Vec<bool> = vec![true];
    for n in 1..=depth as u64 {
        let mut next = vec![false; 4 * n as usize];
        let mut any = false;
        for p in (0..reach.len()).filter(|&p| reach[p]) {
            let b = s.ring_pattern(seed, n, p as u64);
            for (l, t) in ring_targets(n, p as u64).into_iter().enumerate() {
                if b >> l & 1 == 1 {
                    next[t as usize] = true;
                    any = true;
                }
            }
        }
        if !any {
            return n as usize - 1;
        }
        reach = next;
    }
    depth
}

/// Survival `P(longest path >= d)` for every `d = 0..=depth`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivalCurve {
    pub model: ArrowModel,
    pub full_graph: bool,
    pub samples: u64,
    /// `reached[l]`: samples whose longest path is exactly `l`.
    pub reached: Vec<u64>,
}

impl SurvivalCurve {
    pub fn depth(&self) -> usize {
        self.reached.len() - 1
    }

    pub fn at(&self, d: usize) -> Estimate<f64> {
        let hits: u64 = self.reached[d.min(self.depth() + 1)..].iter().sum();
        Estimate::proportion(hits, self.samples)
    }

    pub fn final_estimate(&self) -> Estimate<f64> {
        self.at(self.depth())
    }
}

fn survival(depth: usize, model: ArrowModel, samples: u64, seed: u64, full: bool) -> Result<SurvivalCurve> {
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be at least 1".into()));
    }
    if depth == 0 {
        return Err(Error::OutOfRange("depth must be at least 1".into()));
    }
    let s = Sampler::new(model)?;
    let reached = par_fold(
        samples,
        || vec![0u64; depth + 1],
        |acc, i| {
            let sd = stats::sample_seed(seed, i);
            let l = if full {
                full_reach(&s, sd, depth)
            } else {
                quadrant_reach(&s, sd, depth)
            };
            acc[l] += 1;
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(&b) {
                *x += y;
            }
            a
        },
    );
    Ok(SurvivalCurve {
        model,
        full_graph: full,
        samples,
        reached,
    })
}

/// Quadrant survival curve up to `depth`.
pub fn survival_curve(depth: usize, model: ArrowModel, samples: u64, seed: u64) -> Result<SurvivalCurve> {
    survival(depth, model, samples, seed, false)
}

/// Full-graph survival curve up to `depth`, coupled with [`survival_curve`] at equal seeds.
pub fn full_survival_curve(depth: usize, model: ArrowModel, samples: u64, seed: u64) -> Result<SurvivalCurve> {
    survival(depth, model, samples, seed, true)
}

/// Fraction of quadrant samples with a path reaching `depth`.
pub fn survival_probability(depth: usize, model: ArrowModel, samples: u64, seed: u64) -> Result<Estimate<f64>> {
    Ok(survival_curve(depth, model, samples, seed)?.final_estimate())
}

impl fmt::Display for QuadrantGraph {
    /// `depth D`, then one line per level: `k:` followed by two-character tokens giving the
    /// arrows to `(k+1, i)` and `(k+1, i+1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "depth {}", self.depth)?;
        for (k, row) in self.arrows.iter().enumerate() {
            write!(f, "{k}:")?;
            for &b in row {
                write!(f, " {}{}", b & 1, b >> 1 & 1)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for QuadrantGraph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty quadrant fixture".into()))?;
        let depth: usize = header
            .strip_prefix("depth")
            .and_then(|d| d.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?;
        let mut arrows = Vec::with_capacity(depth);
        for (k, line) in lines.enumerate() {
            let (label, body) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("missing level label in {line:?}")))?;
            if label.trim().parse::<usize>().ok() != Some(k) {
                return Err(Error::Parse(format!("expected level {k}, got {label:?}")));
            }
            let row = body
                .split_whitespace()
                .map(|tok| match tok {
                    "00" => Ok(0u8),
                    "10" => Ok(1),
                    "01" => Ok(2),
                    "11" => Ok(3),
                    _ => Err(Error::Parse(format!("bad arrow token {tok:?}"))),
                })
                .collect::<Result<Vec<u8>>>()?;
            if row.len() != k + 1 {
                return Err(Error::Parse(format!("level {k} needs {} vertices", k + 1)));
            }
            arrows.push(row);
        }
        if arrows.len() != depth {
            return Err(Error::Parse(format!("{} levels for depth {depth}", arrows.len())));
        }
        Ok(Self { depth, arrows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_structure() {
        for n in 1..12u64 {
            let size = if n == 1 { 1 } else { 4 * (n - 1) };
            let mut indeg = vec![0; 4 * n as usize];
            for p in 0..size {
                let t = ring_targets(n, p);
                assert_eq!(t.len(), ring_arity(n, p));
                for x in t {
                    indeg[x as usize] += 1;
                }
            }
            // corners of the next ring have one parent, every other vertex two
            for (x, &d) in indeg.iter().enumerate() {
                let corner = x as u64 % n == 0;
                assert_eq!(d, if corner { 1 } else { 2 }, "ring {} pos {x}", n + 1);
            }
        }
    }

    #[test]
    fn quadrant_is_a_subgraph() {
        // quadrant arrows of (k, i) point to ring positions i and i + 1
        for k in 0..10u64 {
            for i in 0..=k {
                let t = ring_targets(k + 1, i);
                let legs: Vec<u64> = if k > 0 && i == 0 { t[1..].to_vec() } else { t[..2].to_vec() };
                assert_eq!(legs, vec![i, i + 1]);
            }
        }
    }

    #[test]
    fn extreme_q() {
        let none = sample_quadrant(6, ArrowModel::Independent { q: 1.0 }, 3).unwrap();
        assert_eq!(none.present_arrows(), 0);
        assert_eq!(longest_path(&none), 0);
        let all = sample_quadrant(6, ArrowModel::Independent { q: 0.0 }, 3).unwrap();
        assert_eq!(all.present_arrows(), all.candidate_arrows());
        assert_eq!(longest_path(&all), 6);
        assert!(Sampler::new(ArrowModel::Independent { q: 1.5 }).is_err());
        assert!(sample_quadrant(0, ArrowModel::Joint, 0).is_err());
    }

    #[test]
    fn independent_density() {
        let (_, q) = super::super::tables::decouple_q();
        let (mut present, mut total) = (0u64, 0u64);
        for seed in 0..400 {
            let g = sample_quadrant(20, ArrowModel::independent(), seed).unwrap();
            present += g.present_arrows() as u64;
            total += g.candidate_arrows() as u64;
        }
        let e = Estimate::<f64>::proportion(present, total);
        assert!((e.mean - (1.0 - q)).abs() < 3.0 * e.stderr, "{e:?}");
    }

    #[test]
    fn lazy_reach_matches_explicit() {
        for model in [ArrowModel::Joint, ArrowModel::independent(), ArrowModel::Independent { q: 0.4 }] {
            let s = Sampler::new(model).unwrap();
            for seed in 0..200 {
                let g = sample_quadrant(15, model, seed).unwrap();
                assert_eq!(longest_path(&g), quadrant_reach(&s, seed, 15));
            }
        }
    }

    #[test]
    fn full_graph_dominates_quadrant() {
        let s = Sampler::new(ArrowModel::Joint).unwrap();
        for seed in 0..300 {
            assert!(full_reach(&s, seed, 30) >= quadrant_reach(&s, seed, 30));
        }
    }

    #[test]
    fn depth_one_survival() {
        let (_, q) = super::super::tables::decouple_q();
        let e = survival_probability(1, ArrowModel::independent(), 40_000, 2).unwrap();
        assert!((e.mean - (1.0 - q * q)).abs() < 4.0 * e.stderr.max(1e-3));
        // joint: both arrows absent with probability 15/255
        let j = survival_probability(1, ArrowModel::Joint, 40_000, 2).unwrap();
        assert!((j.mean - 240.0 / 255.0).abs() < 4.0 * j.stderr);
    }

    #[test]
    fn curves_are_monotone_and_coupled() {
        let c = survival_curve(40, ArrowModel::Joint, 500, 1).unwrap();
        for d in 1..=40 {
            assert!(c.at(d).mean <= c.at(d - 1).mean);
        }
        let lo = survival_curve(40, ArrowModel::Independent { q: 0.2 }, 500, 1).unwrap();
        let hi = survival_curve(40, ArrowModel::Independent { q: 0.3 }, 500, 1).unwrap();
        for d in 0..=40 {
            assert!(hi.at(d).mean <= lo.at(d).mean);
        }
        assert_eq!(c, survival_curve(40, ArrowModel::Joint, 500, 1).unwrap());
    }

    #[test]
    fn fixture_round_trip() {
        let g = sample_quadrant(5, ArrowModel::Joint, 9).unwrap();
        let text = g.to_string();
        assert_eq!(text.parse::<QuadrantGraph>().unwrap(), g);
        assert!("depth 1\n0: 12\n".parse::<QuadrantGraph>().is_err());
        assert!("depth 2\n0: 11\n".parse::<QuadrantGraph>().is_err());
        assert!("depth 1\n0: 11 11\n".parse::<QuadrantGraph>().is_err());
    }
}
