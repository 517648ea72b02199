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


//! Half-system entanglement of stabilizer states.

use serde::{Deserialize, Serialize};

use crate::circuit::{FloquetCircuit, Geometry, StabilizerState};
use crate::error::{Error, Result};
use crate::stats::{self, par_fold, Estimate, Tally};

/// Entanglement entropy (base 2) of `region`, given as qubit indices.
///
/// `S_A = rank(T|_A) − |A|`, where `T|_A` keeps the x and z columns of the qubits in `A`.
pub fn entanglement_entropy(state: &StabilizerState, region: &[usize]) -> Result<u64> {
    let n = state.num_qubits();
    let mut seen = vec![false; n];
    for &q in region {
        if q >= n {
            return Err(Error::InvalidRegion(format!("qubit {q} outside a {n}-qubit state")));
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(Error::InvalidRegion(format!("qubit {q} listed twice")));
        }
    }
    let cols: Vec<usize> = region.iter().copied().chain(region.iter().map(|&q| q + n)).collect();
    let rank = state.tableau().select_columns(&cols).rank();
    Ok((rank - region.len()) as u64)
}

/// Left half of a chain, or the lower half (`y < ly/2`) of a plane.
pub fn half_region(geometry: &Geometry) -> Result<Vec<usize>> {
    let (lx, ly) = geometry
        .shape()
        .ok_or_else(|| Error::GeometryMismatch("half-system cut needs a finite geometry".into()))?;
    Ok(if geometry.dim == 1 {
        (0..lx / 2).collect()
    } else {
        (0..lx * (ly / 2)).collect()
    })
}

/// Mean half-system entropy per period.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyCurve {
    pub geometry: Geometry,
    pub region_size: usize,
    pub samples: u64,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
}

impl EntropyCurve {
    pub fn at(&self, t: usize) -> Estimate<f64> {
        Estimate {
            mean: self.mean[t],
            stderr: self.stderr[t],
            samples: self.samples,
        }
    }

    /// Average of the per-time means over `t ∈ [from, to]`.
    pub fn plateau(&self, from: usize, to: usize) -> f64 {
        let s = &self.mean[from..=to];
        s.iter().sum::<f64>() / s.len() as f64
    }
}

/// `S(t)` for `t = 0..=t_max`, starting from the all-`Z` product state.
pub fn entanglement_curve(geometry: Geometry, t_max: u64, samples: u64, seed: u64) -> Result<EntropyCurve> {
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be at least 1".into()));
    }
    let region = half_region(&geometry)?;
    let n = geometry.num_sites().expect("finite");
    let len = t_max as usize + 1;
    let tallies = par_fold(
        samples,
        || vec![Tally::default(); len],
        |acc, i| {
            let mut c = FloquetCircuit::new(geometry, stats::sample_seed(seed, i));
            let mut st = StabilizerState::all_z(n);
            acc[0].push(0);
            for t in 1..len {
                st = c.evolve_state(&st, 1).expect("finite geometry");
                acc[t].push(entanglement_entropy(&st, &region).expect("valid region"));
            }
        },
        |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
    );
    Ok(EntropyCurve {
        geometry,
        region_size: region.len(),
        samples,
        mean: tallies.iter().map(|t| t.mean()).collect(),
        stderr: tallies.iter().map(|t| t.stderr()).collect(),
    })
}
