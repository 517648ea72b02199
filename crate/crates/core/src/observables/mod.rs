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


//! Operator spreading, entanglement and wall statistics.

pub mod entropy;
pub mod spread;
pub mod walls;

pub use entropy::{entanglement_curve, entanglement_entropy, half_region, EntropyCurve};
pub use spread::{
    average_spread, average_spread_with, boundary_support, fit_exponential, fit_localization_length,
    lightspeed_fraction, lightspeed_fraction_with, rho, LocalizationFit, SpreadOptions, SpreadProfile,
    SpreadRun, SpreadSlice,
};
pub use walls::{
    detect_walls_dynamical, predicted_walls, wall_agreement, wall_histogram, wall_histogram_dynamical,
    wall_predicate, Block2,
    GateBlocks, WallAnalysis, WallHistogram, WallSide,
};
