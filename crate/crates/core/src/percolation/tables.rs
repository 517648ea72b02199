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


//! Exact out-arrow distributions of boundary gates.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::clifford::sample_symplectic_codes;
use crate::error::{Error, Result};
use crate::stats::{self, chi_squared_test, par_fold, ChiSquaredReport};

/// Common denominator `4^4 − 1`.
pub const DENOMINATOR: u64 = 255;

/// Joint law of the out-arrows of one vertex; bit `i` of a pattern is arrow `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDistribution {
    pub arity: usize,
    /// Numerators over [`DENOMINATOR`], indexed by pattern.
    pub weights: Vec<u64>,
}

/// Exact table for a vertex with `arity` out-arrows.
pub fn vertex_distribution(arity: usize) -> Result<ArrowDistribution> {
    // free legs each carry 4 states; absent legs 1, present legs 3
    let empty = match arity {
        2 => 15,
        3 => 3,
        4 => 0,
        _ => return Err(Error::OutOfRange(format!("arity {arity} not in {{2, 3, 4}}"))),
    };
    let free = 4u64.pow(4 - arity as u32);
    let weights = (0..1usize << arity)
        .map(|m| {
            if m == 0 {
                empty
            } else {
                free * 3u64.pow(m.count_ones())
            }
        })
        .collect();
    Ok(ArrowDistribution { arity, weights })
}

impl ArrowDistribution {
    pub fn probability(&self, pattern: usize) -> Ratio<u64> {
        Ratio::new(self.weights[pattern], DENOMINATOR)
    }

    pub fn table(&self) -> Vec<Ratio<u64>> {
        (0..self.weights.len()).map(|m| self.probability(m)).collect()
    }

    pub fn total(&self) -> Ratio<u64> {
        Ratio::new(self.weights.iter().sum(), DENOMINATOR)
    }

    /// Law of the legs in `keep` (in that order), summing out the rest.
    pub fn marginalize(&self, keep: &[usize]) -> Result<ArrowDistribution> {
        if keep.iter().any(|&l| l >= self.arity) {
            return Err(Error::OutOfRange("leg index beyond arity".into()));
        }
        let mut weights = vec![0u64; 1 << keep.len()];
        for (m, &w) in self.weights.iter().enumerate() {
            let sub = keep
                .iter()
                .enumerate()
                .fold(0usize, |acc, (k, &l)| acc | ((m >> l) & 1) << k);
            weights[sub] += w;
        }
        Ok(ArrowDistribution {
            arity: keep.len(),
            weights,
        })
    }

    /// Probability that leg `leg` is absent.
    pub fn absent(&self, leg: usize) -> Ratio<u64> {
        let w = self
            .weights
            .iter()
            .enumerate()
            .filter(|(m, _)| (m >> leg) & 1 == 0)
            .map(|(_, &w)| w)
            .sum();
        Ratio::new(w, DENOMINATOR)
    }

    /// Pattern for a uniform integer `r ∈ [0, 255)`, by inverse CDF in pattern order.
    #[inline]
    pub fn pattern_for(&self, r: u64) -> usize {
        debug_assert!(r < DENOMINATOR);
        let mut acc = 0;
        for (m, &w) in self.weights.iter().enumerate() {
            acc += w;
            if r < acc {
                return m;
            }
        }
        unreachable!("weights sum to the denominator")
    }
}

/// Agreement of out-arrow patterns of conjugated Paulis with the exact tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableCheck {
    /// Four-leg pattern counts against the arity-4 table.
    pub joint: ChiSquaredReport,
    /// Legs 0, 1 against the arity-4 table marginalized to two legs.
    pub pair: ChiSquaredReport,
    /// Legs 0, 1, 2 against the arity-4 table marginalized to three legs.
    pub triple: ChiSquaredReport,
    pub counts: Vec<u64>,
    pub all_absent: u64,
}

/// Conjugates every non-identity four-qubit Pauli in turn by uniform random Cliffords and
/// tabulates which qubits carry support.
pub fn verify_distribution_vs_clifford(samples: u64, seed: u64) -> Result<TableCheck> {
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be at least 1".into()));
    }
    let counts = par_fold(
        samples,
        || vec![0u64; 16],
        |acc, i| {
            let mut rng = stats::sample_rng(seed, i);
            let (images, _) = sample_symplectic_codes(4, &mut rng);
            let a = 1 + (i % 255) as usize;
            let img = (0..8)
                .filter(|j| (a >> j) & 1 == 1)
                .fold(0u64, |acc, j| acc ^ images[j]);
            let pattern = ((img | img >> 4) & 0xf) as usize;
            acc[pattern] += 1;
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(&b) {
                *x += y;
            }
            a
        },
    );
    let t4 = vertex_distribution(4)?;
    let probs = |d: &ArrowDistribution| -> Vec<f64> {
        d.weights.iter().map(|&w| w as f64 / DENOMINATOR as f64).collect()
    };
    let fold_counts = |legs: usize| -> Vec<u64> {
        let mut out = vec![0u64; 1 << legs];
        for (m, &c) in counts.iter().enumerate() {
            out[m & ((1 << legs) - 1)] += c;
        }
        out
    };
    let pair = t4.marginalize(&[0, 1])?;
    let triple = t4.marginalize(&[0, 1, 2])?;
    Ok(TableCheck {
        joint: chi_squared_test(&counts, &probs(&t4)),
        pair: chi_squared_test(&fold_counts(2), &probs(&pair)),
        triple: chi_squared_test(&fold_counts(3), &probs(&triple)),
        all_absent: counts[0],
        counts,
    })
}

/// `(ε, q)`: the smallest shift making the two-arrow table a product law, and the resulting
/// per-arrow absence probability `q = 1/2 − √(21/85)/2`.
pub fn decouple_q() -> (f64, f64) {
    let eps = (43.0 - 1785f64.sqrt()) / 170.0;
    let q = 0.5 - 0.5 * (21.0f64 / 85.0).sqrt();
    (eps, q)
}

/// The shifted two-arrow table `[[1/17 + ε, 16/85], [16/85, 48/85 − ε]]`.
pub fn shifted_table(eps: f64) -> [[f64; 2]; 2] {
    [[1.0 / 17.0 + eps, 16.0 / 85.0], [16.0 / 85.0, 48.0 / 85.0 - eps]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tables_are_exact() {
        let t4 = vertex_distribution(4).unwrap();
        assert_eq!(t4.probability(0), Ratio::new(0, 1));
        assert_eq!(t4.probability(0b1111), Ratio::new(81, 255));
        let t2 = vertex_distribution(2).unwrap();
        assert_eq!(t2.probability(0), Ratio::new(15, 255));
        assert_eq!(t2.weights, vec![15, 48, 48, 144]);
        let t3 = vertex_distribution(3).unwrap();
        assert_eq!(t3.weights[0], 3);
        assert_eq!(t3.weights[0b111], 108);
        for d in [&t2, &t3, &t4] {
            assert_eq!(d.total(), Ratio::new(1, 1));
        }
        assert!(vertex_distribution(5).is_err());
        assert!(vertex_distribution(1).is_err());
    }

    #[test]
    fn marginals_reduce_arity() {
        let t4 = vertex_distribution(4).unwrap();
        let t3 = vertex_distribution(3).unwrap();
        let t2 = vertex_distribution(2).unwrap();
        assert_eq!(t4.marginalize(&[0, 1, 2]).unwrap(), t3);
        assert_eq!(t4.marginalize(&[1, 3]).unwrap(), t2);
        assert_eq!(t3.marginalize(&[0, 2]).unwrap(), t2);
        assert_eq!(t3.marginalize(&[2, 1]).unwrap(), t2);
        // other legs free: (1 + 3)^3 patterns minus the all-identity one
        assert_eq!(t4.absent(2), Ratio::new(64 - 1, 255));
        assert_eq!(t2.absent(0), Ratio::new(63, 255));
    }

    #[test]
    fn inverse_cdf_covers_table() {
        let t3 = vertex_distribution(3).unwrap();
        let mut hits = vec![0u64; 8];
        for r in 0..DENOMINATOR {
            hits[t3.pattern_for(r)] += 1;
        }
        assert_eq!(hits, t3.weights);
    }

    #[test]
    fn decoupling_constants() {
        let (eps, q) = decouple_q();
        assert_relative_eq!(eps, 0.004_416_115_6, epsilon = 1e-9);
        assert_relative_eq!(q, 0.251_474_939_1, epsilon = 1e-9);
        let m = shifted_table(eps);
        assert!((m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() < 1e-15);
        assert_relative_eq!(m[0][0], q * q, epsilon = 1e-14);
        assert_relative_eq!(m[0][1], q * (1.0 - q), epsilon = 1e-14);
        assert_relative_eq!(m[1][1], (1.0 - q) * (1.0 - q), epsilon = 1e-14);
    }

    #[test]
    fn clifford_patterns_small_run() {
        let r = verify_distribution_vs_clifford(20_000, 4).unwrap();
        assert_eq!(r.all_absent, 0);
        assert_eq!(r.counts.iter().sum::<u64>(), 20_000);
        assert!(r.joint.p_value > 1e-4, "{:?}", r.joint);
    }
}
