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


//! Disordered Floquet Clifford circuits in one and two dimensions: stabilizer dynamics,
//! operator spreading, entanglement, spectral form factors, and the percolation bound on
//! light-speed growth.

pub mod circuit;
pub mod clifford;
pub mod error;
pub mod gf2;
pub mod observables;
pub mod pauli;
pub mod percolation;
pub mod scalar;
pub mod sff;
pub mod stats;

#[cfg(test)]
pub(crate) mod testkit;
