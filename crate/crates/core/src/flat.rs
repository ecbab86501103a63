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

//! Flat-array form of a coding tree for callers that work with plain integer
//! arrays, such as scripting-language bindings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::minimize::{minimize, MinimizeConfig};
use crate::tree::{one_dim_entropy, tree_entropy, CodingTree, NodeId};

/// A coding tree as parallel arrays. Index `i` is the `i`-th node in
/// increasing node-id order; the root has parent `-1` and internal nodes
/// have leaf vertex `-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatTree {
    pub parent: Vec<i64>,
    pub level: Vec<i64>,
    pub leaf_vertex: Vec<i64>,
    pub entropy_bits: f64,
}

impl FlatTree {
    pub fn from_tree(g: &Graph, t: &CodingTree) -> Result<Self> {
        let ids: Vec<NodeId> = t.node_ids().collect();
        let index = |id: NodeId| ids.binary_search(&id).expect("live node") as i64;
        Ok(FlatTree {
            parent: ids
                .iter()
                .map(|&id| t.parent(id).map_or(-1, index))
                .collect(),
            level: ids.iter().map(|&id| t.level(id) as i64).collect(),
            leaf_vertex: ids
                .iter()
                .map(|&id| t.leaf_vertex(id).map_or(-1, |v| v as i64))
                .collect(),
            entropy_bits: tree_entropy(g, t)?.total,
        })
    }

    /// Decodes and validates against `g`. Levels are recomputed and must
    /// match the stored ones.
    pub fn to_tree(&self, g: &Graph) -> Result<CodingTree> {
        let len = self.parent.len();
        if self.level.len() != len || self.leaf_vertex.len() != len {
            return Err(Error::Input("flat tree arrays differ in length".into()));
        }
        let parents = self
            .parent
            .iter()
            .map(|&p| match p {
                -1 => Ok(None),
                p if p >= 0 && (p as usize) < len => Ok(Some(NodeId(p as usize))),
                p => Err(Error::Input(format!("parent index {p} out of range"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let leaves = self
            .leaf_vertex
            .iter()
            .map(|&v| match v {
                -1 => Ok(None),
                v if v >= 0 => Ok(Some(v as usize)),
                v => Err(Error::Input(format!("leaf vertex {v} is negative"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let t = CodingTree::from_parents(g, &parents, &leaves)?;
        for (i, &l) in self.level.iter().enumerate() {
            if t.level(NodeId(i)) as i64 != l {
                return Err(Error::Consistency(format!(
                    "node {i} has level {l}, tree says {}",
                    t.level(NodeId(i))
                )));
            }
        }
        Ok(t)
    }
}

fn graph_from_array(edges: &[[i64; 2]], num_vertices: usize) -> Result<Graph> {
    let edges = edges
        .iter()
        .map(|&[u, v]| {
            let ok = |x: i64| x >= 0 && (x as usize) < num_vertices;
            if ok(u) && ok(v) {
                Ok((u as usize, v as usize))
            } else {
                Err(Error::Input(format!(
                    "edge ({u}, {v}) is outside 0..{num_vertices}"
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Graph::new(num_vertices, &edges)
}

/// Minimizes with the default configuration at height `k`.
pub fn flat_minimize(edges: &[[i64; 2]], num_vertices: usize, k: usize) -> Result<FlatTree> {
    let g = graph_from_array(edges, num_vertices)?;
    let (t, _) = minimize(&g, &MinimizeConfig::new(k))?;
    FlatTree::from_tree(&g, &t)
}

/// One-dimensional structural entropy.
pub fn flat_entropy(edges: &[[i64; 2]], num_vertices: usize) -> Result<f64> {
    one_dim_entropy(&graph_from_array(edges, num_vertices)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BRIDGE: [[i64; 2]; 7] = [[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5], [2, 3]];

    fn modules(f: &FlatTree) -> Vec<Vec<usize>> {
        let root = f.parent.iter().position(|&p| p == -1).unwrap() as i64;
        let mut out: Vec<Vec<usize>> = (0..f.parent.len())
            .filter(|&i| f.parent[i] == root)
            .map(|m| {
                (0..f.parent.len())
                    .filter(|&i| f.leaf_vertex[i] >= 0 && f.parent[i] == m as i64)
                    .map(|i| f.leaf_vertex[i] as usize)
                    .collect()
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn bridge_minimize() {
        let f = flat_minimize(&BRIDGE, 6, 2).unwrap();
        assert!((f.entropy_bits - 1.6995138503199656).abs() < 1e-12);
        assert_eq!(f.parent.iter().filter(|&&p| p == -1).count(), 1);
        assert_eq!(modules(&f), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        let g = graph_from_array(&BRIDGE, 6).unwrap();
        let t = f.to_tree(&g).unwrap();
        assert!(t.validate(&g).is_empty());
        let (core, _) = minimize(&g, &MinimizeConfig::new(2)).unwrap();
        assert_eq!(FlatTree::from_tree(&g, &core).unwrap(), f);
    }

    #[test]
    fn config_and_input_errors() {
        assert!(matches!(
            flat_minimize(&BRIDGE, 6, 1),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            flat_minimize(&[[0, 7]], 6, 2),
            Err(Error::Input(_))
        ));
        assert!(matches!(flat_entropy(&[[-1, 0]], 2), Err(Error::Input(_))));
    }

    #[test]
    fn single_vertex() {
        let f = flat_minimize(&[], 1, 2).unwrap();
        assert_eq!(f.entropy_bits, 0.0);
        assert_eq!(f.parent.len(), 3);
        assert_eq!(*f.level.iter().max().unwrap(), 2);
    }

    #[test]
    fn entropy_values() {
        assert!((flat_entropy(&[[0, 1]], 2).unwrap() - 1.0).abs() < 1e-12);
        assert!((flat_entropy(&[[0, 1], [1, 2], [0, 2]], 3).unwrap() - 3f64.log2()).abs() < 1e-12);
        assert!((flat_entropy(&BRIDGE, 6).unwrap() - 2.556656707462823).abs() < 1e-12);
    }

    #[test]
    fn corrupted_arrays_are_rejected() {
        let g = graph_from_array(&BRIDGE, 6).unwrap();
        let mut f = flat_minimize(&BRIDGE, 6, 2).unwrap();
        f.level[0] += 1;
        assert!(matches!(f.to_tree(&g), Err(Error::Consistency(_))));
        let mut f = flat_minimize(&BRIDGE, 6, 2).unwrap();
        f.parent.pop();
        assert!(matches!(f.to_tree(&g), Err(Error::Input(_))));
        let mut f = flat_minimize(&BRIDGE, 6, 2).unwrap();
        let root = f.parent.iter().position(|&p| p == -1).unwrap();
        f.parent[root] = 0;
        assert!(f.to_tree(&g).is_err());
    }
}
