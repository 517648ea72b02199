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

//! Seeding, exact accumulators, and small fitting helpers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hashes a tuple of words into one 64-bit value.
#[inline]
pub fn hash_words(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0x243f_6a88_85a3_08d3u64, |h, &w| mix64(h ^ mix64(w)))
}

/// Independent generator for sample `index` of a run seeded with `master`.
///
/// Counter-based: the stream depends only on `(master, index)`, never on scheduling.
pub fn sample_rng(master: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// Seed for realization `index`, for components that take a plain `u64` seed.
#[inline]
pub fn sample_seed(master: u64, index: u64) -> u64 {
    hash_words(&[master, index])
}

/// Runs `f` for every sample index and merges the results.
///
/// `merge` must be associative and commutative for results to be scheduling-independent;
/// the accumulators in this crate use integer sums so this holds exactly.
pub fn par_fold<T, F, M>(samples: u64, init: impl Fn() -> T + Sync + Send, f: F, merge: M) -> T
where
    T: Send,
    F: Fn(&mut T, u64) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    (0..samples)
        .into_par_iter()
        .fold(&init, |mut acc, i| {
            f(&mut acc, i);
            acc
        })
        .reduce(&init, merge)
}

/// Exact tally of nonnegative integer observations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub count: u64,
    pub sum: u128,
    pub sum_sq: u128,
}

impl Tally {
    #[inline]
    pub fn push(&mut self, v: u64) {
        self.count += 1;
        self.sum += v as u128;
        self.sum_sq += (v as u128) * (v as u128);
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self
    }

    pub fn mean<F: Real>(&self) -> F {
        if self.count == 0 {
            return F::zero();
        }
        F::of_u128(self.sum) / F::of_u64(self.count)
    }

    /// Standard error of the mean (sample variance with n-1).
    pub fn stderr<F: Real>(&self) -> F {
        if self.count < 2 {
            return F::zero();
        }
        let n = F::of_u64(self.count);
        let mean = self.mean::<F>();
        let var = (F::of_u128(self.sum_sq) - n * mean * mean) / (n - F::one());
        (var.max(F::zero()) / n).sqrt()
    }

    pub fn estimate<F: Real>(&self) -> Estimate<F> {
        Estimate {
            mean: self.mean(),
            stderr: self.stderr(),
            samples: self.count,
        }
    }
}

/// Mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate<F: Real> {
    pub mean: F,
    pub stderr: F,
    pub samples: u64,
}

impl<F: Real> Estimate<F> {
    /// Proportion estimate from `hits` out of `samples`.
    pub fn proportion(hits: u64, samples: u64) -> Self {
        let mut t = Tally::default();
        t.count = samples;
        t.sum = hits as u128;
        t.sum_sq = hits as u128;
        t.estimate()
    }
}

/// Least-squares line `y = slope·x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit<F: Real> {
    pub slope: F,
    pub intercept: F,
    /// Root-mean-square residual.
    pub residual: F,
    pub points: usize,
}

pub fn fit_line<F: Real>(xs: &[F], ys: &[F]) -> Result<LineFit<F>> {
    if xs.len() != ys.len() {
        return Err(Error::Fit("x and y lengths differ".into()));
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::Fit(format!("{n} points, need at least 2")));
    }
    let nf = F::of_u64(n as u64);
    let mx = xs.iter().fold(F::zero(), |a, &b| a + b) / nf;
    let my = ys.iter().fold(F::zero(), |a, &b| a + b) / nf;
    let mut sxx = F::zero();
    let mut sxy = F::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxx = sxx + (x - mx) * (x - mx);
        sxy = sxy + (x - mx) * (y - my);
    }
    if sxx == F::zero() {
        return Err(Error::Fit("degenerate x values".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - slope * x - intercept;
            r * r
        })
        .fold(F::zero(), |a, b| a + b);
    Ok(LineFit {
        slope,
        intercept,
        residual: (ss / nf).sqrt(),
        points: n,
    })
}

/// Upper-tail probability of a chi-squared variable.
pub fn chi_squared_sf(x: f64, dof: f64) -> f64 {
    ChiSquared::new(dof).expect("positive degrees of freedom").sf(x)
}

/// Pearson statistic and p-value of observed counts against expected probabilities.
///
/// Cells with zero expected probability are required to have zero count and are skipped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquaredReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub samples: u64,
    pub impossible_hits: u64,
}

pub fn chi_squared_test(observed: &[u64], probabilities: &[f64]) -> ChiSquaredReport {
    assert_eq!(observed.len(), probabilities.len());
    let total: u64 = observed.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0usize;
    let mut impossible = 0u64;
    for (&o, &p) in observed.iter().zip(probabilities) {
        if p == 0.0 {
            impossible += o;
            continue;
        }
        let e = p * total as f64;
        stat += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    let dof = cells.saturating_sub(1).max(1);
    let p_value = if impossible > 0 {
        0.0
    } else {
        chi_squared_sf(stat, dof as f64)
    };
    ChiSquaredReport {
        statistic: stat,
        dof,
        p_value,
        samples: total,
        impossible_hits: impossible,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;

    #[test]
    fn tally_matches_direct() {
        let vals = [3u64, 5, 5, 9, 0, 1];
        let mut t = Tally::default();
        for &v in &vals {
            t.push(v);
        }
        let mean = vals.iter().sum::<u64>() as f64 / 6.0;
        let var = vals.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / 5.0;
        assert_relative_eq!(t.mean::<f64>(), mean);
        assert_relative_eq!(t.stderr::<f64>(), (var / 6.0).sqrt(), epsilon = 1e-12);
        let (a, b) = vals.split_at(2);
        let mut ta = Tally::default();
        let mut tb = Tally::default();
        a.iter().for_each(|&v| ta.push(v));
        b.iter().for_each(|&v| tb.push(v));
        assert_eq!(ta.merge(tb), t);
    }

    #[test]
    fn fit_line_exact() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0).collect();
        let f = fit_line(&xs, &ys).unwrap();
        assert_relative_eq!(f.slope, 2.5, epsilon = 1e-12);
        assert_relative_eq!(f.intercept, -1.0, epsilon = 1e-12);
        let xs32: Vec<f32> = xs.iter().map(|&x| x as f32).collect();
        let ys32: Vec<f32> = ys.iter().map(|&y| y as f32).collect();
        assert!((fit_line(&xs32, &ys32).unwrap().slope - 2.5).abs() < 1e-5);
        assert!(fit_line(&[1.0], &[1.0]).is_err());
        assert!(fit_line(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn sample_streams_differ_and_repeat() {
        let a: u64 = sample_rng(5, 0).random();
        let b: u64 = sample_rng(5, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, sample_rng(5, 0).random::<u64>());
    }

    #[test]
    fn par_fold_is_order_independent() {
        let run = || {
            par_fold(
                1000,
                Tally::default,
                |t, i| t.push(sample_rng(3, i).random_range(0..100)),
                Tally::merge,
            )
        };
        let serial = {
            let mut t = Tally::default();
            for i in 0..1000 {
                t.push(sample_rng(3, i).random_range(0..100));
            }
            t
        };
        assert_eq!(run(), serial);
    }

    #[test]
    fn chi_squared_sanity() {
        assert_relative_eq!(chi_squared_sf(0.0, 3.0), 1.0);
        // median of chi2(1) is about 0.4549
        assert_relative_eq!(chi_squared_sf(0.454_936_4, 1.0), 0.5, epsilon = 1e-6);
        let r = chi_squared_test(&[10, 0, 10], &[0.5, 0.0, 0.5]);
        assert_eq!(r.dof, 1);
        assert_relative_eq!(r.p_value, 1.0);
        assert_eq!(chi_squared_test(&[1, 1], &[1.0, 0.0]).p_value, 0.0);
    }
}
