// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Undirected simple graphs with the degree, volume and cut primitives used by
//! the entropy computations.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Counts of what [`Graph::new`] removed while normalizing an edge list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
}

/// Immutable undirected simple graph over dense vertex ids `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    degree: Vec<u64>,
    total_volume: u64,
    adjacency: Vec<Vec<usize>>,
    fingerprint: String,
    normalization: Normalization,
}

/// Volume and boundary size of a vertex set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSetStats {
    pub volume: u64,
    pub cut: u64,
}

impl Graph {
    /// Builds a normalized graph. Self-loops are dropped and duplicate edges
    /// (in either orientation) are collapsed; both are counted in
    /// [`Graph::normalization`].
    pub fn new(num_vertices: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        let mut norm = Normalization::default();
        let mut edges = Vec::with_capacity(edge_list.len());
        for (index, &(u, v)) in edge_list.iter().enumerate() {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::Input(format!(
                    "edge #{index} ({u}, {v}) references a vertex outside 0..{num_vertices}"
                )));
            }
            if u == v {
                norm.self_loops_dropped += 1;
                continue;
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        norm.duplicates_collapsed = before - edges.len();
        if norm.self_loops_dropped > 0 {
            log::warn!("dropped {} self-loop(s)", norm.self_loops_dropped);
        }

        let mut adjacency = vec![Vec::new(); num_vertices];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let degree: Vec<u64> = adjacency.iter().map(|a| a.len() as u64).collect();
        let total_volume = 2 * edges.len() as u64;
        let fingerprint = fingerprint(num_vertices, &edges);

        Ok(Graph {
            num_vertices,
            edges,
            degree,
            total_volume,
            adjacency,
            fingerprint,
            normalization: norm,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list: `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> u64 {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degree
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Sum of all degrees, `2 |E|`.
    pub fn total_volume(&self) -> u64 {
        self.total_volume
    }

    /// SHA-256 of the canonical edge list, hex encoded.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    fn membership(&self, members: &[usize], mark: u8, marks: &mut [u8]) -> Result<()> {
        for &v in members {
            if v >= self.num_vertices {
                return Err(Error::Input(format!(
                    "vertex {v} is outside 0..{}",
                    self.num_vertices
                )));
            }
            if marks[v] != 0 && marks[v] != mark {
                return Err(Error::Input(format!("vertex {v} appears in both sets")));
            }
            marks[v] = mark;
        }
        Ok(())
    }

    /// Volume and cut of `members`. Repeated members count once.
    pub fn set_stats(&self, members: &[usize]) -> Result<VertexSetStats> {
        let mut marks = vec![0u8; self.num_vertices];
        self.membership(members, 1, &mut marks)?;
        let mut volume = 0;
        let mut cut = 0;
        for v in (0..self.num_vertices).filter(|&v| marks[v] == 1) {
            volume += self.degree[v];
            cut += self.adjacency[v].iter().filter(|&&u| marks[u] == 0).count() as u64;
        }
        Ok(VertexSetStats { volume, cut })
    }

    /// Number of edges with one endpoint in `a` and the other in `b`.
    pub fn cut_between(&self, a: &[usize], b: &[usize]) -> Result<u64> {
        let mut marks = vec![0u8; self.num_vertices];
        self.membership(a, 1, &mut marks)?;
        self.membership(b, 2, &mut marks)?;
        let mut count = 0;
        for v in (0..self.num_vertices).filter(|&v| marks[v] == 1) {
            count += self.adjacency[v].iter().filter(|&&u| marks[u] == 2).count() as u64;
        }
        Ok(count)
    }
}

fn fingerprint(num_vertices: usize, edges: &[(usize, usize)]) -> String {
    let mut hasher = Sha256::new();
    hasher.update((num_vertices as u64).to_le_bytes());
    for &(u, v) in edges {
        hasher.update((u as u64).to_le_bytes());
        hasher.update((v as u64).to_le_bytes());
    }
    hex::encode(hasher.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn bridge() -> Graph {
        Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap()
    }

    fn triangle() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn triangle_volume() {
        let g = triangle();
        assert_eq!(g.total_volume(), 6);
        assert_eq!(g.num_edges(), 3);
    }

    #[test]
    fn normalizes_loops_and_duplicates() {
        let g = Graph::new(2, &[(0, 1), (1, 0), (0, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(
            g.normalization(),
            Normalization {
                self_loops_dropped: 1,
                duplicates_collapsed: 1
            }
        );
    }

    #[test]
    fn bridge_degrees() {
        let g = bridge();
        assert_eq!(g.degrees(), &[2, 2, 3, 3, 2, 2]);
        assert_eq!(g.total_volume(), 14);
    }

    #[test]
    fn out_of_range_vertex() {
        let err = Graph::new(2, &[(0, 2)]).unwrap_err();
        assert!(err.to_string().contains("edge #0"), "{err}");
    }

    #[test]
    fn set_stats_examples() {
        let g = bridge();
        assert_eq!(
            g.set_stats(&[0, 1, 2]).unwrap(),
            VertexSetStats { volume: 7, cut: 1 }
        );
        assert_eq!(
            g.set_stats(&[0, 1, 2, 3, 4, 5]).unwrap(),
            VertexSetStats { volume: 14, cut: 0 }
        );
        assert_eq!(
            triangle().set_stats(&[0]).unwrap(),
            VertexSetStats { volume: 2, cut: 2 }
        );
        assert!(g.set_stats(&[6]).is_err());
    }

    #[test]
    fn cut_between_examples() {
        let g = bridge();
        assert_eq!(g.cut_between(&[0, 1, 2], &[3, 4, 5]).unwrap(), 1);
        assert_eq!(triangle().cut_between(&[0], &[1]).unwrap(), 1);
        assert_eq!(triangle().cut_between(&[0], &[]).unwrap(), 0);
        assert!(triangle().cut_between(&[0, 1], &[1]).is_err());
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..24).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..(3 * n))
                .prop_map(move |edges| Graph::new(n, &edges).unwrap())
        })
    }

    proptest! {
        #[test]
        fn structural_invariants(g in arb_graph()) {
            prop_assert_eq!(g.total_volume(), 2 * g.num_edges() as u64);
            for v in 0..g.num_vertices() {
                prop_assert_eq!(g.degree(v), g.neighbors(v).len() as u64);
                prop_assert!(!g.neighbors(v).contains(&v));
                for &u in g.neighbors(v) {
                    prop_assert!(g.neighbors(u).binary_search(&v).is_ok());
                }
            }
        }

        #[test]
        fn complement_has_same_cut(g in arb_graph(), mask in any::<u32>()) {
            let a: Vec<usize> = (0..g.num_vertices()).filter(|v| mask >> v & 1 == 1).collect();
            let b: Vec<usize> = (0..g.num_vertices()).filter(|v| mask >> v & 1 == 0).collect();
            let sa = g.set_stats(&a).unwrap();
            let sb = g.set_stats(&b).unwrap();
            prop_assert_eq!(sa.cut, sb.cut);
            prop_assert_eq!(sa.volume + sb.volume, g.total_volume());
            prop_assert!(sa.cut <= sa.volume);
        }

        #[test]
        fn union_cut_identity(g in arb_graph(), labels in proptest::collection::vec(0u8..3, 24)) {
            let pick = |l: u8| -> Vec<usize> {
                (0..g.num_vertices()).filter(|&v| labels[v] == l).collect()
            };
            let (a, b) = (pick(0), pick(1));
            let union: Vec<usize> = a.iter().chain(&b).copied().collect();
            let lhs = g.set_stats(&union).unwrap().cut;
            let rhs = g.set_stats(&a).unwrap().cut + g.set_stats(&b).unwrap().cut
                - 2 * g.cut_between(&a, &b).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn relabeling_preserves_stats(g in arb_graph(), seed in any::<u64>(), mask in any::<u32>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let n = g.num_vertices();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let moved: Vec<(usize, usize)> = g.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
            let h = Graph::new(n, &moved).unwrap();
            prop_assert_eq!(h.total_volume(), g.total_volume());
            let a: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
            let pa: Vec<usize> = a.iter().map(|&v| perm[v]).collect();
            prop_assert_eq!(g.set_stats(&a).unwrap(), h.set_stats(&pa).unwrap());
        }
    }
}
