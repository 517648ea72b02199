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


//! Dual walls of the quadrant.
//!
//! In quadrant coordinates `(a, b) = (i, k − i)` arrows run `(a, b) → (a, b+1)` and
//! `(a, b) → (a+1, b)`. Face `f(a, b)` is the cell with top corner `(a, b)`; faces with
//! `a + b = depth − 1` are cut off by the last level. Left boundary nodes `ℓ_b` sit beside
//! `f(0, b)` and right boundary nodes `r_a` beside `f(a, 0)`. A dual edge is present when the
//! arrow it crosses is absent; a wall is a self-avoiding dual path from a left node to a right
//! node.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::graph::{longest_path, QuadrantGraph};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DualNode {
    Left(usize),
    Right(usize),
    Face(usize, usize),
}

/// Present dual edges of a sampled quadrant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualGraph {
    pub depth: usize,
    pub edges: Vec<(DualNode, DualNode)>,
}

/// Dual edge crossing arrow `leg` (0: to `(k+1, i)`, 1: to `(k+1, i+1)`) of vertex `(k, i)`.
pub fn crossing(k: usize, i: usize, leg: usize) -> (DualNode, DualNode) {
    let (a, b) = (i, k - i);
    let face = DualNode::Face(a, b);
    let other = match (leg, a, b) {
        (0, 0, _) => DualNode::Left(b),
        (0, _, _) => DualNode::Face(a - 1, b),
        (_, _, 0) => DualNode::Right(a),
        _ => DualNode::Face(a, b - 1),
    };
    (other, face)
}

pub fn dual_of(g: &QuadrantGraph) -> DualGraph {
    let mut edges = Vec::new();
    for (k, row) in g.arrows.iter().enumerate() {
        for (i, &bits) in row.iter().enumerate() {
            for leg in 0..2 {
                if bits >> leg & 1 == 0 {
                    edges.push(crossing(k, i, leg));
                }
            }
        }
    }
    DualGraph { depth: g.depth, edges }
}

impl DualGraph {
    /// Edge count of the shortest wall, if any.
    pub fn shortest_wall(&self) -> Option<usize> {
        let mut adj: HashMap<DualNode, Vec<DualNode>> = HashMap::new();
        for &(u, v) in &self.edges {
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        let mut dist: HashMap<DualNode, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        for &n in adj.keys() {
            if matches!(n, DualNode::Left(_)) {
                dist.insert(n, 0);
                queue.push_back(n);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            if matches!(u, DualNode::Right(_)) {
                return Some(du);
            }
            for &v in &adj[&u] {
                if !dist.contains_key(&v) {
                    dist.insert(v, du + 1);
                    queue.push_back(v);
                }
            }
        }
        None
    }
}

/// Outcome of comparing the shortest wall with the longest path of one sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockCheck {
    pub longest_path: usize,
    pub shortest_wall: Option<usize>,
}

impl BlockCheck {
    /// A wall of `d` edges leaves no path of length `d` or more.
    pub fn holds(&self) -> bool {
        self.shortest_wall.map_or(true, |d| self.longest_path < d)
    }
}

pub fn wall_blocks_path_check(g: &QuadrantGraph) -> BlockCheck {
    BlockCheck {
        longest_path: longest_path(g),
        shortest_wall: dual_of(g).shortest_wall(),
    }
}

/// A wall on the unbounded dual lattice: `Left(b)`, faces, `Right(a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub nodes: Vec<DualNode>,
}

impl Wall {
    pub fn edges(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn faces(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes.iter().filter_map(|n| match *n {
            DualNode::Face(a, b) => Some((a, b)),
            _ => None,
        })
    }
}

/// Largest `d` accepted by the enumerators.
pub const MAX_WALL_LENGTH: usize = 12;

fn extend(faces: &mut Vec<(usize, usize)>, target: usize, out: &mut Vec<Wall>) {
    let (a, b) = *faces.last().unwrap();
    if faces.len() == target {
        if b == 0 {
            let mut nodes = vec![DualNode::Left(faces[0].1)];
            nodes.extend(faces.iter().map(|&(a, b)| DualNode::Face(a, b)));
            nodes.push(DualNode::Right(a));
            out.push(Wall { nodes });
        }
        return;
    }
    // the path must still get back to b = 0
    if b > target - faces.len() {
        return;
    }
    let mut next = vec![(a + 1, b), (a, b + 1)];
    if a > 0 {
        next.push((a - 1, b));
    }
    if b > 0 {
        next.push((a, b - 1));
    }
    for f in next {
        if !faces.contains(&f) {
            faces.push(f);
            extend(faces, target, out);
            faces.pop();
        }
    }
}

/// All `d`-walls: self-avoiding dual paths of `d` edges from a left node to a right node.
pub fn enumerate_walls(d: usize) -> Result<Vec<Wall>> {
    if !(2..=MAX_WALL_LENGTH).contains(&d) {
        return Err(Error::OutOfRange(format!("wall length {d} outside [2, {MAX_WALL_LENGTH}]")));
    }
    let mut out = Vec::new();
    for b in 0..=d - 2 {
        extend(&mut vec![(0, b)], d - 1, &mut out);
    }
    Ok(out)
}

pub fn count_walls(d: usize) -> Result<u64> {
    Ok(enumerate_walls(d)?.len() as u64)
}

/// Upper bound `(d − 3)·3^(d−2) + 2` used for the tail of the bound.
pub fn wall_count_bound(d: usize) -> u64 {
    (d as u64).saturating_sub(3) * 3u64.pow(d.saturating_sub(2) as u32) + 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::percolation::graph::{sample_quadrant, ArrowModel};

    #[test]
    fn wall_counts() {
        let n: Vec<u64> = (2..=7).map(|d| count_walls(d).unwrap()).collect();
        assert_eq!(n, vec![1, 2, 4, 10, 24, 60]);
        assert!(count_walls(1).is_err());
        assert!(count_walls(13).is_err());
        for d in 4..=10 {
            assert!(count_walls(d).unwrap() <= wall_count_bound(d));
        }
    }

    #[test]
    fn walls_are_well_formed() {
        for d in 2..=8 {
            for w in enumerate_walls(d).unwrap() {
                assert_eq!(w.edges(), d);
                assert!(matches!(w.nodes[0], DualNode::Left(_)));
                assert!(matches!(w.nodes[d], DualNode::Right(_)));
                let faces: Vec<_> = w.faces().collect();
                for pair in faces.windows(2) {
                    let (p, q) = (pair[0], pair[1]);
                    assert_eq!(p.0.abs_diff(q.0) + p.1.abs_diff(q.1), 1);
                }
                let mut sorted = faces.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), faces.len());
            }
        }
    }

    #[test]
    fn lowest_start_is_unique() {
        for d in 3..=8 {
            let n = enumerate_walls(d)
                .unwrap()
                .iter()
                .filter(|w| w.nodes[0] == DualNode::Left(d - 2))
                .count();
            assert_eq!(n, 1, "d = {d}");
        }
    }

    #[test]
    fn enumerated_walls_block() {
        // cut exactly the arrows a wall crosses in an otherwise full graph
        for d in 2..=7 {
            for w in enumerate_walls(d).unwrap() {
                let mut g = QuadrantGraph::filled(d + 2, 3);
                let edges: Vec<_> = w.nodes.windows(2).map(|p| (p[0], p[1])).collect();
                for k in 0..g.depth {
                    for i in 0..=k {
                        for leg in 0..2 {
                            let (u, v) = crossing(k, i, leg);
                            if edges.contains(&(u, v)) || edges.contains(&(v, u)) {
                                g.arrows[k][i] &= !(1 << leg);
                            }
                        }
                    }
                }
                assert_eq!(g.present_arrows() + d, g.candidate_arrows());
                let c = wall_blocks_path_check(&g);
                assert!(c.longest_path < d, "{w:?}");
                assert!(c.shortest_wall.unwrap() <= d);
            }
        }
    }

    #[test]
    fn every_arrow_has_one_crossing() {
        let g = QuadrantGraph::filled(6, 0);
        let dual = dual_of(&g);
        assert_eq!(dual.edges.len(), g.candidate_arrows());
        let mut sorted = dual.edges.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), dual.edges.len());
        assert_eq!(dual.shortest_wall(), Some(2));
        assert_eq!(dual_of(&QuadrantGraph::filled(6, 3)).shortest_wall(), None);
    }

    #[test]
    fn three_wall_fixture() {
        let g: QuadrantGraph = "depth 3\n0: 01\n1: 11 00\n2: 11 11 11\n".parse().unwrap();
        let c = wall_blocks_path_check(&g);
        assert_eq!(c.shortest_wall, Some(3));
        assert_eq!(c.longest_path, 1);
        assert!(c.holds());
    }

    #[test]
    fn walls_block_paths_on_samples() {
        for model in [ArrowModel::Joint, ArrowModel::Independent { q: 0.45 }] {
            for seed in 0..400 {
                let g = sample_quadrant(12, model, seed).unwrap();
                let c = wall_blocks_path_check(&g);
                assert!(c.holds(), "seed {seed}: {c:?}");
                let dual = dual_of(&g);
                assert_eq!(dual.edges.len(), g.candidate_arrows() - g.present_arrows());
            }
        }
    }
}
