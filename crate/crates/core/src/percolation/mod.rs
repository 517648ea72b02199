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


//! Directed percolation on the boundary-growth graph.

pub mod bound;
pub mod graph;
pub mod tables;
pub mod walls;

pub use bound::{analytic_bound, analytic_bound_at, analytic_bound_with, BoundReport, CountSource};
pub use graph::{
    full_survival_curve, longest_path, sample_quadrant, survival_curve, survival_probability,
    ArrowModel, QuadrantGraph, Sampler, SurvivalCurve,
};
pub use tables::{decouple_q, verify_distribution_vs_clifford, vertex_distribution, ArrowDistribution};
pub use walls::{
    count_walls, dual_of, enumerate_walls, wall_blocks_path_check,
    BlockCheck, DualGraph, DualNode, Wall,
};
