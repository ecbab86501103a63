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

//! Exhaustive ground truth for small graphs.
//!
//! A coding tree of height `k` whose leaves all sit at depth `k` is a chain
//! of nested set partitions; trees with shallower leaves are equivalent to
//! such a chain after entropy-neutral padding. The oracle enumerates every
//! chain and keeps the minimum entropy. Set partitions are generated as
//! restricted growth strings, which gives a canonical candidate order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::minimize::{minimize, MinimizeConfig};
use crate::tree::{node_term, CodingTree, NodeId};

/// Largest graph [`optimal_height2`] accepts (Bell(12) = 4,213,597 candidates).
pub const HEIGHT2_VERTEX_CAP: usize = 12;
/// Largest graph [`optimal_heightk`] accepts.
pub const HEIGHTK_VERTEX_CAP: usize = 8;
/// Deepest tree [`optimal_heightk`] accepts.
pub const HEIGHTK_HEIGHT_CAP: usize = 3;

/// Iterator over the set partitions of `0..n` as restricted growth strings:
/// `labels[0] = 0` and `labels[i] <= 1 + max(labels[..i])`.
#[derive(Debug, Clone)]
pub struct RestrictedGrowth {
    labels: Vec<usize>,
    prefix_max: Vec<usize>,
    started: bool,
    done: bool,
}

impl RestrictedGrowth {
    pub fn new(n: usize) -> Self {
        RestrictedGrowth {
            labels: vec![0; n],
            prefix_max: vec![0; n],
            started: false,
            done: n == 0,
        }
    }

    /// Advances to the next string; returns the labels or `None` at the end.
    pub fn next_labels(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.labels);
        }
        let n = self.labels.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.labels[i] <= self.prefix_max[i - 1] {
                break;
            }
        }
        self.labels[i] += 1;
        self.prefix_max[i] = self.prefix_max[i - 1].max(self.labels[i]);
        for j in i + 1..n {
            self.labels[j] = 0;
            self.prefix_max[j] = self.prefix_max[i];
        }
        Some(&self.labels)
    }
}

/// Bell number `B(n)`.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    row[0]
}

/// One internal node of an optimal hierarchy: its vertex set and, above the
/// last internal level, its sub-blocks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Block {
    pub vertices: Vec<usize>,
    pub children: Vec<Block>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub height: usize,
    pub optimal_entropy: f64,
    /// Level-1 blocks of the optimum, each sorted, in canonical order.
    pub optimal_partition: Vec<Vec<usize>>,
    pub hierarchy: Vec<Block>,
    pub num_candidates: u64,
    pub greedy_entropy: f64,
    /// `greedy_entropy - optimal_entropy`.
    pub gap: f64,
}

struct Ctx<'a> {
    g: &'a Graph,
    adjacency: Vec<u32>,
    total: u64,
}

impl Ctx<'_> {
    fn volume(&self, mask: u32) -> u64 {
        members(mask).map(|v| self.g.degree(v)).sum()
    }

    fn cut(&self, mask: u32) -> u64 {
        members(mask)
            .map(|v| (self.adjacency[v] & !mask).count_ones() as u64)
            .sum()
    }

    /// Minimum contribution of everything strictly below a node with marker
    /// `mask`, when `depth` levels remain down to the leaves.
    fn solve(&self, mask: u32, depth: usize) -> (f64, u64, Vec<Block>) {
        let vol = self.volume(mask);
        if depth == 1 {
            let leaves = members(mask)
                .map(|v| node_term(self.g.degree(v), self.g.degree(v), vol, self.total))
                .sum();
            return (leaves, 1, Vec::new());
        }
        let verts: Vec<usize> = members(mask).collect();
        let mut rgs = RestrictedGrowth::new(verts.len());
        let mut best: Option<(f64, Vec<u32>)> = None;
        let mut count = 0u64;
        while let Some(labels) = rgs.next_labels() {
            let blocks = label_masks(&verts, labels);
            let mut value = 0.0;
            let mut ways = 1u64;
            for &b in &blocks {
                let (below, c, _) = self.solve(b, depth - 1);
                value += node_term(self.cut(b), self.volume(b), vol, self.total) + below;
                ways *= c;
            }
            count += ways;
            if best.as_ref().is_none_or(|(v, _)| value < *v) {
                best = Some((value, blocks));
            }
        }
        let (value, blocks) = best.expect("non-empty vertex set");
        let mut hierarchy: Vec<Block> = blocks
            .into_iter()
            .map(|b| Block {
                vertices: members(b).collect(),
                children: self.solve(b, depth - 1).2,
            })
            .collect();
        hierarchy.sort();
        (value, count, hierarchy)
    }
}

fn members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&v| mask >> v & 1 == 1)
}

fn label_masks(verts: &[usize], labels: &[usize]) -> Vec<u32> {
    let blocks = labels.iter().max().map_or(0, |m| m + 1);
    let mut out = vec![0u32; blocks];
    for (&v, &l) in verts.iter().zip(labels) {
        out[l] |= 1 << v;
    }
    out
}

fn check_caps(g: &Graph, vertex_cap: usize) -> Result<()> {
    let n = g.num_vertices();
    if n == 0 {
        return Err(Error::Input("graph has no vertices".into()));
    }
    if n > vertex_cap {
        return Err(Error::Size {
            what: "vertex count",
            actual: n,
            cap: vertex_cap,
        });
    }
    Ok(())
}

fn finish(
    g: &Graph,
    k: usize,
    optimal: f64,
    hierarchy: Vec<Block>,
    count: u64,
) -> Result<OracleResult> {
    let (_, trace) = minimize(g, &MinimizeConfig::new(k))?;
    Ok(OracleResult {
        height: k,
        optimal_entropy: optimal,
        optimal_partition: hierarchy.iter().map(|b| b.vertices.clone()).collect(),
        hierarchy,
        num_candidates: count,
        greedy_entropy: trace.final_entropy,
        gap: trace.final_entropy - optimal,
    })
}

/// Minimum entropy over all height-2 coding trees, by enumerating every set
/// partition of the vertices. Singleton blocks stand for a pass-through node
/// over one leaf.
pub fn optimal_height2(g: &Graph) -> Result<OracleResult> {
    check_caps(g, HEIGHT2_VERTEX_CAP)?;
    let n = g.num_vertices();
    let total = g.total_volume();
    let degree = g.degrees();
    let mut rgs = RestrictedGrowth::new(n);
    let mut best = f64::INFINITY;
    let mut best_labels = vec![0; n];
    let mut count = 0u64;
    let mut vol = vec![0u64; n];
    let mut cut = vec![0u64; n];
    while let Some(labels) = rgs.next_labels() {
        count += 1;
        let blocks = labels.iter().max().unwrap() + 1;
        vol[..blocks].fill(0);
        cut[..blocks].fill(0);
        for v in 0..n {
            vol[labels[v]] += degree[v];
        }
        for &(u, v) in g.edges() {
            if labels[u] != labels[v] {
                cut[labels[u]] += 1;
                cut[labels[v]] += 1;
            }
        }
        let mut h: f64 = (0..blocks)
            .map(|b| node_term(cut[b], vol[b], total, total))
            .sum();
        h += (0..n)
            .map(|v| node_term(degree[v], degree[v], vol[labels[v]], total))
            .sum::<f64>();
        if h < best {
            best = h;
            best_labels.copy_from_slice(labels);
        }
    }
    let verts: Vec<usize> = (0..n).collect();
    let mut hierarchy: Vec<Block> = label_masks(&verts, &best_labels)
        .into_iter()
        .map(|m| Block {
            vertices: members(m).collect(),
            children: Vec::new(),
        })
        .collect();
    hierarchy.sort();
    finish(g, 2, best, hierarchy, count)
}

/// Minimum entropy over all coding trees of height `k` (2 or 3), by
/// enumerating every chain of nested partitions.
pub fn optimal_heightk(g: &Graph, k: usize) -> Result<OracleResult> {
    MinimizeConfig::new(k).validate()?;
    if k > HEIGHTK_HEIGHT_CAP {
        return Err(Error::Size {
            what: "height",
            actual: k,
            cap: HEIGHTK_HEIGHT_CAP,
        });
    }
    check_caps(g, HEIGHTK_VERTEX_CAP)?;
    let n = g.num_vertices();
    let adjacency = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let ctx = Ctx {
        g,
        adjacency,
        total: g.total_volume(),
    };
    let (value, count, hierarchy) = ctx.solve((1u32 << n) - 1, k);
    finish(g, k, value, hierarchy, count)
}

/// Padded coding tree realizing a hierarchy: every block becomes an internal
/// node, and a block's vertices hang directly below it when it has no
/// sub-blocks, through pass-through chains so all leaves sit at depth `k`.
pub fn hierarchy_tree(g: &Graph, hierarchy: &[Block], k: usize) -> Result<CodingTree> {
    let n = g.num_vertices();
    let mut parents: Vec<Option<NodeId>> = vec![None; n + 1];
    let mut leaf_vertex: Vec<Option<usize>> = (0..n).map(Some).chain([None]).collect();
    fn add(
        blocks: &[Block],
        parent: NodeId,
        level: usize,
        k: usize,
        parents: &mut Vec<Option<NodeId>>,
        leaf_vertex: &mut Vec<Option<usize>>,
    ) {
        for b in blocks {
            let id = NodeId(parents.len());
            parents.push(Some(parent));
            leaf_vertex.push(None);
            if b.children.is_empty() {
                for &v in &b.vertices {
                    let mut at = id;
                    for _ in level + 1..k {
                        let pad = NodeId(parents.len());
                        parents.push(Some(at));
                        leaf_vertex.push(None);
                        at = pad;
                    }
                    parents[v] = Some(at);
                }
            } else {
                add(&b.children, id, level + 1, k, parents, leaf_vertex);
            }
        }
    }
    add(hierarchy, NodeId(n), 1, k, &mut parents, &mut leaf_vertex);
    CodingTree::from_parents(g, &parents, &leaf_vertex)
}

/// All connected graphs on `1..=max_n` vertices up to isomorphism, each in
/// the labelling with the smallest edge bitmask. `max_n` is capped at 7.
pub fn connected_graph_catalog(max_n: usize) -> Result<Vec<Graph>> {
    if max_n > 7 {
        return Err(Error::Size {
            what: "catalog vertex count",
            actual: max_n,
            cap: 7,
        });
    }
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let index = |u: usize, v: usize| {
            pairs
                .iter()
                .position(|&p| p == (u.min(v), u.max(v)))
                .unwrap()
        };
        let perms = permutations(n);
        let maps: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
            .collect();
        let found: Vec<u64> = (0..1u64 << pairs.len())
            .into_par_iter()
            .filter(|&mask| {
                is_connected(n, &pairs, mask)
                    && maps.iter().all(|map| {
                        let moved = (0..pairs.len())
                            .filter(|&e| mask >> e & 1 == 1)
                            .fold(0u64, |m, e| m | 1 << map[e]);
                        moved >= mask
                    })
            })
            .collect();
        for mask in found {
            let edges: Vec<_> = (0..pairs.len())
                .filter(|&e| mask >> e & 1 == 1)
                .map(|e| pairs[e])
                .collect();
            out.push(Graph::new(n, &edges)?);
        }
    }
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for i in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=i).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, i);
                    q
                })
            })
            .collect();
    }
    out
}

fn is_connected(n: usize, pairs: &[(usize, usize)], mask: u64) -> bool {
    let mut reached = 1u32;
    loop {
        let before = reached;
        for (e, &(u, v)) in pairs.iter().enumerate() {
            if mask >> e & 1 == 1 && (reached >> u & 1 == 1 || reached >> v & 1 == 1) {
                reached |= 1 << u | 1 << v;
            }
        }
        if reached == before {
            return reached.count_ones() as usize == n;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapEntry {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub optimal_entropy: f64,
    pub greedy_entropy: f64,
    pub gap: f64,
}

/// Greedy-versus-optimum gaps over a set of graphs, machine readable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub height: usize,
    pub num_graphs: usize,
    pub mean_gap: f64,
    pub p95_gap: f64,
    pub max_gap: f64,
    pub zero_gap_graphs: usize,
    pub entries: Vec<GapEntry>,
}

/// Runs the oracle and the greedy minimizer on every graph.
pub fn gap_report(graphs: &[Graph], k: usize) -> Result<GapReport> {
    let entries = graphs
        .par_iter()
        .map(|g| {
            let r = if k == 2 && g.num_vertices() > HEIGHTK_VERTEX_CAP {
                optimal_height2(g)?
            } else {
                optimal_heightk(g, k)?
            };
            Ok(GapEntry {
                num_vertices: g.num_vertices(),
                edges: g.edges().to_vec(),
                optimal_entropy: r.optimal_entropy,
                greedy_entropy: r.greedy_entropy,
                gap: r.gap,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut gaps: Vec<f64> = entries.iter().map(|e| e.gap).collect();
    gaps.sort_by(f64::total_cmp);
    let count = gaps.len();
    let rank = ((0.95 * count as f64).ceil() as usize).clamp(1, count.max(1)) - 1;
    Ok(GapReport {
        height: k,
        num_graphs: count,
        mean_gap: gaps.iter().sum::<f64>() / count.max(1) as f64,
        p95_gap: gaps.get(rank).copied().unwrap_or(0.0),
        max_gap: gaps.last().copied().unwrap_or(0.0),
        zero_gap_graphs: gaps.iter().filter(|&&x| x.abs() < 1e-9).count(),
        entries,
    })
}
