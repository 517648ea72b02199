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


//! Closed-form bound on the probability that the quadrant dual has a wall.
//!
//! `P(some wall) <= Σ_d N_d q^d`, with wall counts `N_d` for `d <= 6` and
//! `N_d <= (d − 3)·3^(d−2) + 2` beyond. Requires `3q < 1`.

use serde::{Deserialize, Serialize};

use super::tables::decouple_q;
use super::walls::count_walls;
use crate::error::{Error, Result};

/// Largest `d` taken from explicit counts.
pub const EXACT_UP_TO: usize = 6;

/// Published small-`d` wall counts for `d = 2..=6`.
pub const TABULATED_WALL_COUNTS: [u64; 5] = [1, 2, 3, 6, 18];

/// Where the small-`d` counts come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountSource {
    Tabulated,
    Enumerated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundTerm {
    pub d: usize,
    pub n_d: u64,
    pub term: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub q: f64,
    /// Table shift that makes the two-arrow law a product; zero when `q` is given directly.
    pub epsilon: f64,
    pub source: CountSource,
    pub terms: Vec<BoundTerm>,
    pub head: f64,
    pub tail: f64,
    /// Upper bound on the probability that a wall exists.
    pub no_path_bound: f64,
    /// Lower bound on the probability of an unbounded path.
    pub path_bound: f64,
}

/// Bound at the decoupling value of `q` with the tabulated counts.
pub fn analytic_bound() -> Result<BoundReport> {
    let (eps, q) = decouple_q();
    let mut r = analytic_bound_with(q, CountSource::Tabulated)?;
    r.epsilon = eps;
    Ok(r)
}

pub fn analytic_bound_at(q: f64) -> Result<BoundReport> {
    analytic_bound_with(q, CountSource::Tabulated)
}

/// Tail `Σ_{d>=7} [(d − 3)·3^(d−2) + 2] q^d` in closed form.
pub fn tail_sum(q: f64) -> Result<f64> {
    let x = 3.0 * q;
    if x >= 1.0 {
        return Err(Error::Divergent(format!("wall series diverges at 3q = {x}")));
    }
    // Σ_{m>=5} (m − 1) x^m = x^5 (5 − 4x)/(1 − x)^2 − x^5/(1 − x), with m = d − 2
    let x5 = x.powi(5);
    Ok(q * q * (x5 * (5.0 - 4.0 * x) / (1.0 - x).powi(2) - x5 / (1.0 - x))
        + 2.0 * q.powi(7) / (1.0 - q))
}

pub fn analytic_bound_with(q: f64, source: CountSource) -> Result<BoundReport> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::OutOfRange(format!("q = {q} outside [0, 1]")));
    }
    let tail = tail_sum(q)?;
    let terms = (2..=EXACT_UP_TO)
        .map(|d| {
            let n_d = match source {
                CountSource::Tabulated => TABULATED_WALL_COUNTS[d - 2],
                CountSource::Enumerated => count_walls(d)?,
            };
            Ok(BoundTerm {
                d,
                n_d,
                term: n_d as f64 * q.powi(d as i32),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let head = terms.iter().map(|t| t.term).sum::<f64>();
    let no_path_bound = head + tail;
    Ok(BoundReport {
        q,
        epsilon: 0.0,
        source,
        terms,
        head,
        tail,
        no_path_bound,
        path_bound: 1.0 - no_path_bound,
    })
}
