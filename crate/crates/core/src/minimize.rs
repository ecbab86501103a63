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

//! Greedy structural-entropy minimization to a coding tree of fixed height.
//!
//! Stage 1 starts from the height-1 tree and repeatedly combines the pair of
//! root children whose merge lowers the entropy most, until the root has at
//! most two children. Stage 2 repeatedly drops the internal node whose
//! removal raises the entropy least, until the height is at most `k`.
//! Optionally the result is padded with pass-through nodes to height exactly
//! `k`.
//!
//! Stage 1 keeps, for every root child, the number of edges to each other
//! root child. Only pairs joined by at least one edge can lower the entropy,
//! so only those pairs enter the priority queue; the queue holds at most one
//! entry per pair and an entry is stale as soon as either endpoint has been
//! merged away. Stage 2 keys internal nodes by their drop cost and re-keys
//! the parent and the adopted children after each drop.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};
use std::time::{Duration, Instant};

use dary_heap::QuaternaryHeap;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::{combine_delta, drop_delta, CodingTree, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DropMode {
    /// Global argmin of the drop cost over all internal non-root nodes.
    #[default]
    Literal,
    /// Argmin restricted to ancestors of the deepest leaves, so every drop
    /// works toward the height bound.
    HeightAware,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimizeConfig {
    pub height_k: usize,
    pub pad_to_exact_height: bool,
    pub drop_mode: DropMode,
    /// Recorded for audit only; the minimizer itself is deterministic.
    pub seed: u64,
}

impl MinimizeConfig {
    pub fn new(height_k: usize) -> Self {
        MinimizeConfig {
            height_k,
            pad_to_exact_height: true,
            drop_mode: DropMode::Literal,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.height_k < 2 {
            return Err(Error::Config(format!(
                "height must exceed 1 (got {})",
                self.height_k
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Combine,
    Drop,
    Pad,
}

/// One rewrite. `nodes` is `[c1, c2, created]` for a combine, `[dropped]`
/// for a drop and `[inserted]` for a pad.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub kind: StepKind,
    pub nodes: Vec<NodeId>,
    pub delta: f64,
    pub entropy_after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeTrace {
    pub steps: Vec<TraceStep>,
    pub initial_entropy: f64,
    pub final_entropy: f64,
    /// Height after stage 1.
    pub stage1_height: usize,
}

impl MinimizeTrace {
    fn count(&self, kind: StepKind) -> usize {
        self.steps.iter().filter(|s| s.kind == kind).count()
    }

    pub fn combines(&self) -> usize {
        self.count(StepKind::Combine)
    }

    pub fn drops(&self) -> usize {
        self.count(StepKind::Drop)
    }

    pub fn pads(&self) -> usize {
        self.count(StepKind::Pad)
    }

    fn record(&mut self, kind: StepKind, nodes: Vec<NodeId>, delta: f64) {
        let before = self
            .steps
            .last()
            .map_or(self.initial_entropy, |s| s.entropy_after);
        self.steps.push(TraceStep {
            kind,
            nodes,
            delta,
            entropy_after: before + delta,
        });
    }
}

/// Wall time spent in each stage of one [`minimize_timed`] call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StageTimings {
    pub stage1: Duration,
    pub stage2: Duration,
}

/// Largest graph the minimizer accepts; node ids must fit in 32 bits.
pub const MAX_VERTICES: usize = (u32::MAX / 2) as usize;

/// Runs both stages and returns the tree with its full trace.
pub fn minimize(g: &Graph, cfg: &MinimizeConfig) -> Result<(CodingTree, MinimizeTrace)> {
    minimize_timed(g, cfg).map(|(t, trace, _)| (t, trace))
}

pub fn minimize_timed(
    g: &Graph,
    cfg: &MinimizeConfig,
) -> Result<(CodingTree, MinimizeTrace, StageTimings)> {
    cfg.validate()?;
    if g.num_vertices() > MAX_VERTICES {
        return Err(Error::Size {
            what: "vertex count",
            actual: g.num_vertices(),
            cap: MAX_VERTICES,
        });
    }
    let tree = CodingTree::trivial(g)?;
    let initial = tree.entropy(g)?.total;
    let mut trace = MinimizeTrace {
        steps: Vec::new(),
        initial_entropy: initial,
        final_entropy: initial,
        stage1_height: 0,
    };

    let start = Instant::now();
    let mut state = CombineState::new(g, tree);
    while state.step(&mut trace).is_some() {}
    let mut tree = state.into_tree();
    trace.stage1_height = tree.height();
    let stage1 = start.elapsed();

    let start = Instant::now();
    match cfg.drop_mode {
        DropMode::Literal => squeeze_literal(&mut tree, cfg.height_k, &mut trace)?,
        DropMode::HeightAware => squeeze_height_aware(&mut tree, cfg.height_k, &mut trace)?,
    }
    if cfg.pad_to_exact_height {
        while tree.height() < cfg.height_k {
            let root = tree.root();
            let u = tree.insert_unary_below(root)?;
            trace.record(StepKind::Pad, vec![u], 0.0);
        }
    }
    let stage2 = start.elapsed();

    trace.final_entropy = tree.entropy(g)?.total;
    Ok((tree, trace, StageTimings { stage1, stage2 }))
}

// --- stage 1 --------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct PairCandidate {
    reduction: f64,
    /// Tree nodes of the pair when the entry was made, `a < b`.
    a: u32,
    b: u32,
    /// Cluster handles and their versions when the entry was made.
    ha: u32,
    hb: u32,
    va: u32,
    vb: u32,
}

impl PartialEq for PairCandidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for PairCandidate {}

impl PartialOrd for PairCandidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PairCandidate {
    /// Larger reduction first, then the lexicographically smaller pair.
    fn cmp(&self, other: &Self) -> Ordering {
        self.reduction
            .total_cmp(&other.reduction)
            .then_with(|| (other.a, other.b).cmp(&(self.a, self.b)))
    }
}

/// Stage-1 working state: the tree plus the queue of combinable pairs.
///
/// Root children are tracked through cluster handles. A merged cluster
/// keeps the handle of the side with more neighbours, so only the other
/// side's adjacency is rewritten. Queue entries record handle versions; an
/// entry whose versions are out of date is re-scored when it reaches the
/// top. Merged volumes only grow and new node ids are always larger, so an
/// outdated entry never ranks below its pair's true score.
pub struct CombineState<'g> {
    graph: &'g Graph,
    tree: CodingTree,
    /// Per handle: edge counts to the other live handles.
    links: Vec<FxHashMap<u32, u32>>,
    /// Volume of each handle's cluster.
    volume: Vec<u64>,
    node: Vec<NodeId>,
    /// Inverse of `node` for live handles, indexed by node id.
    handle_at: Vec<usize>,
    version: Vec<u32>,
    alive: Vec<bool>,
    heap: QuaternaryHeap<PairCandidate>,
    /// Root children ordered by (volume, id), for edge-free merges.
    by_volume: BTreeSet<(u64, NodeId)>,
    /// Sum of the adjacency map sizes.
    link_entries: usize,
    levels_stale: bool,
}

impl<'g> CombineState<'g> {
    /// `tree` must be the height-1 tree of `g`.
    pub fn new(graph: &'g Graph, tree: CodingTree) -> Self {
        let n = graph.num_vertices();
        let mut links = vec![FxHashMap::default(); n];
        let mut by_volume = BTreeSet::new();
        for c in tree.children(tree.root()) {
            by_volume.insert((tree.volume(c), c));
        }
        let mut state = CombineState {
            graph,
            tree,
            links: Vec::new(),
            node: (0..n).map(NodeId).collect(),
            volume: graph.degrees().to_vec(),
            handle_at: (0..n).collect(),
            version: vec![0; n],
            alive: vec![true; n],
            heap: QuaternaryHeap::new(),
            by_volume,
            link_entries: 2 * graph.num_edges(),
            levels_stale: false,
        };
        let mut heap = Vec::with_capacity(graph.num_edges());
        for &(u, v) in graph.edges() {
            links[u].insert(v as u32, 1);
            links[v].insert(u as u32, 1);
            heap.push(state.score(u, v, 1));
        }
        state.links = links;
        state.heap = QuaternaryHeap::from(heap);
        state
    }

    fn score(&self, x: usize, y: usize, cut: u64) -> PairCandidate {
        let (x, y) = if self.node[x] < self.node[y] {
            (x, y)
        } else {
            (y, x)
        };
        let merged = self.volume[x] + self.volume[y];
        PairCandidate {
            reduction: -combine_delta(cut, merged, self.graph.total_volume()),
            a: self.node[x].0 as u32,
            b: self.node[y].0 as u32,
            ha: x as u32,
            hb: y as u32,
            va: self.version[x],
            vb: self.version[y],
        }
    }

    /// The tree so far. Levels are brought up to date on demand, which
    /// costs a pass over the tree after any combine.
    pub fn tree(&mut self) -> &CodingTree {
        if std::mem::take(&mut self.levels_stale) {
            self.tree.refresh_levels();
        }
        &self.tree
    }

    pub fn into_tree(mut self) -> CodingTree {
        if self.levels_stale {
            self.tree.refresh_levels();
        }
        self.tree
    }

    /// Replaces the queue with one current entry per adjacent pair.
    fn rebuild_heap(&mut self) {
        let mut entries = Vec::with_capacity(self.link_entries / 2);
        for &(_, id) in &self.by_volume {
            let h = self.handle_at[id.0];
            entries.extend(
                self.links[h]
                    .iter()
                    .filter(|&(&x, _)| x as usize > h)
                    .map(|(&x, &c)| self.score(h, x as usize, c as u64)),
            );
        }
        self.heap = QuaternaryHeap::from(entries);
    }

    /// Pops dead entries and re-scores outdated ones until the top entry is
    /// current. Returns its handles.
    fn settle(&mut self) -> Option<(usize, usize)> {
        while let Some(&top) = self.heap.peek() {
            let (ha, hb) = (top.ha as usize, top.hb as usize);
            if !(self.alive[ha] && self.alive[hb]) {
                self.heap.pop();
            } else if self.version[ha] != top.va || self.version[hb] != top.vb {
                let cut = self.links[ha].get(&(hb as u32)).map_or(0, |&c| c as u64);
                let fresh = self.score(ha, hb, cut);
                *self.heap.peek_mut().expect("non-empty") = fresh;
            } else {
                return Some((ha, hb));
            }
        }
        None
    }

    /// The pair stage 1 would combine next and its entropy reduction, or
    /// `None` once the root has at most two children.
    ///
    /// Pairs joined by edges are ranked by reduction with ties going to the
    /// smallest `(min id, max id)`. When no pair lowers the entropy, the two
    /// root children of smallest volume are paired (ties by id) with
    /// reduction 0.
    pub fn best_candidate(&mut self) -> Option<(NodeId, NodeId, f64)> {
        if self.tree.num_children(self.tree.root()) <= 2 {
            return None;
        }
        self.settle();
        match self.heap.peek() {
            Some(top) if top.reduction > 0.0 => Some((
                NodeId(top.a as usize),
                NodeId(top.b as usize),
                top.reduction,
            )),
            _ => {
                let mut it = self.by_volume.iter();
                let (&(_, x), &(_, y)) = (it.next()?, it.next()?);
                Some((x.min(y), x.max(y), 0.0))
            }
        }
    }

    /// Applies the best combine and records it; `None` when stage 1 is done.
    pub fn step(&mut self, trace: &mut MinimizeTrace) -> Option<NodeId> {
        let (a, b, reduction) = self.best_candidate()?;
        let (ha, hb) = if reduction > 0.0 {
            let top = self.heap.peek().expect("settled entry");
            (top.ha as usize, top.hb as usize)
        } else {
            (self.handle_at[a.0], self.handle_at[b.0])
        };
        let cut = self.links[ha].get(&(hb as u32)).map_or(0, |&c| c as u64);
        let (va, vb) = (self.tree.volume(a), self.tree.volume(b));
        let (created, delta) = self.tree.combine_unleveled(a, b, cut);
        self.levels_stale = true;
        trace.record(StepKind::Combine, vec![a, b, created], delta);
        self.by_volume.remove(&(va, a));
        self.by_volume.remove(&(vb, b));
        self.by_volume.insert((va + vb, created));

        let (keep, gone) = if self.links[ha].len() >= self.links[hb].len() {
            (ha, hb)
        } else {
            (hb, ha)
        };
        self.alive[gone] = false;
        self.node[keep] = created;
        self.volume[keep] = va + vb;
        if self.handle_at.len() <= created.0 {
            self.handle_at.resize(created.0 + 1, usize::MAX);
        }
        self.handle_at[created.0] = keep;
        self.version[keep] += 1;
        let moved = std::mem::take(&mut self.links[gone]);
        self.link_entries -= moved.len();
        if self.links[keep].remove(&(gone as u32)).is_some() {
            self.link_entries -= 1;
        }
        for (x, c) in moved {
            let x = x as usize;
            if x == keep {
                continue;
            }
            let lx = &mut self.links[x];
            lx.remove(&(gone as u32));
            let merged = {
                let e = lx.entry(keep as u32).or_insert(0);
                *e += c;
                *e
            };
            if merged == c {
                // x was not adjacent to `keep` before: one entry moved.
                self.link_entries += 1;
            } else {
                self.link_entries -= 1;
            }
            self.links[keep].insert(x as u32, merged);
            let fresh = self.score(x, keep, merged as u64);
            self.heap.push(fresh);
        }

        if self.heap.len() > self.link_entries + 1024 {
            self.rebuild_heap();
        }
        Some(created)
    }
}

/// Exhaustive version of [`CombineState::best_candidate`]: evaluates every
/// pair of root children against the graph. Quadratic; for tests and small
/// inputs.
pub fn best_combine_candidate(g: &Graph, t: &CodingTree) -> Option<(NodeId, NodeId, f64)> {
    let children: Vec<NodeId> = t.children(t.root()).collect();
    if children.len() <= 2 {
        return None;
    }
    let leaves: Vec<Vec<usize>> = children.iter().map(|&c| t.leaves_under(c)).collect();
    let mut best: Option<PairCandidate> = None;
    for i in 0..children.len() {
        for j in i + 1..children.len() {
            let cut = g.cut_between(&leaves[i], &leaves[j]).ok()?;
            let merged = t.volume(children[i]) + t.volume(children[j]);
            let (a, b) = (children[i].min(children[j]), children[i].max(children[j]));
            let cand = PairCandidate {
                reduction: -combine_delta(cut, merged, g.total_volume()),
                a: a.0 as u32,
                b: b.0 as u32,
                ha: 0,
                hb: 0,
                va: 0,
                vb: 0,
            };
            if best.is_none_or(|cur| cand > cur) {
                best = Some(cand);
            }
        }
    }
    let best = best?;
    if best.reduction > 0.0 {
        return Some((
            NodeId(best.a as usize),
            NodeId(best.b as usize),
            best.reduction,
        ));
    }
    let mut by_volume: Vec<(u64, NodeId)> = children.iter().map(|&c| (t.volume(c), c)).collect();
    by_volume.sort_unstable();
    let (x, y) = (by_volume[0].1, by_volume[1].1);
    Some((x.min(y), x.max(y), 0.0))
}

// --- stage 2 --------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct DropCandidate {
    increase: f64,
    id: NodeId,
    version: u32,
}

impl PartialEq for DropCandidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for DropCandidate {}

impl PartialOrd for DropCandidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DropCandidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.increase
            .total_cmp(&other.increase)
            .then_with(|| self.id.cmp(&other.id))
            .then_with(|| self.version.cmp(&other.version))
    }
}

/// Range-add, global-max segment tree over leaf depths in DFS order.
struct DepthTree {
    size: usize,
    max: Vec<i64>,
    add: Vec<i64>,
}

impl DepthTree {
    fn new(depths: &[usize]) -> Self {
        let size = depths.len().next_power_of_two();
        let mut max = vec![i64::MIN; 2 * size];
        for (i, &d) in depths.iter().enumerate() {
            max[size + i] = d as i64;
        }
        for i in (1..size).rev() {
            max[i] = max[2 * i].max(max[2 * i + 1]);
        }
        DepthTree {
            size,
            max,
            add: vec![0; 2 * size],
        }
    }

    fn height(&self) -> usize {
        self.max[1].max(0) as usize
    }

    /// Adds `delta` to positions `lo..hi`.
    fn range_add(&mut self, lo: usize, hi: usize, delta: i64) {
        self.update(1, 0, self.size, lo, hi, delta);
    }

    fn update(&mut self, node: usize, nlo: usize, nhi: usize, lo: usize, hi: usize, delta: i64) {
        if hi <= nlo || nhi <= lo {
            return;
        }
        if lo <= nlo && nhi <= hi {
            self.max[node] += delta;
            self.add[node] += delta;
            return;
        }
        let mid = (nlo + nhi) / 2;
        self.update(2 * node, nlo, mid, lo, hi, delta);
        self.update(2 * node + 1, mid, nhi, lo, hi, delta);
        self.max[node] = self.max[2 * node].max(self.max[2 * node + 1]) + self.add[node];
    }
}

/// Leaf-order interval of every node and the depth of every leaf, from one
/// DFS. Dropping nodes never changes the leaf set below a surviving node,
/// so the intervals stay valid for the whole of stage 2.
fn leaf_intervals(tree: &CodingTree) -> (Vec<(usize, usize)>, Vec<usize>) {
    let mut span = vec![(0, 0); tree.id_bound()];
    let mut depths = Vec::with_capacity(tree.num_vertices());
    let mut stack = vec![(tree.root(), false)];
    while let Some((id, closing)) = stack.pop() {
        if closing {
            span[id.0].1 = depths.len();
            continue;
        }
        span[id.0].0 = depths.len();
        if tree.is_leaf(id) {
            depths.push(tree.level(id));
            span[id.0].1 = depths.len();
        } else {
            stack.push((id, true));
            let children: Vec<NodeId> = tree.children(id).collect();
            stack.extend(children.into_iter().rev().map(|c| (c, false)));
        }
    }
    (span, depths)
}

/// Literal stage 2: global argmin over internal non-root nodes, driven by a
/// lazily invalidated min-heap.
fn squeeze_literal(tree: &mut CodingTree, k: usize, trace: &mut MinimizeTrace) -> Result<()> {
    if tree.height() <= k {
        return Ok(());
    }
    let bound = tree.id_bound();
    let total = tree.total_volume();
    let (span, depths) = leaf_intervals(tree);
    let mut depth = DepthTree::new(&depths);
    let mut child_cuts = vec![0u64; bound];
    for id in tree.node_ids() {
        if let Some(p) = tree.parent(id) {
            child_cuts[p.0] += tree.cut(id);
        }
    }
    let mut version = vec![0u32; bound];
    let cost = |tree: &CodingTree, child_cuts: &[u64], id: NodeId| {
        let parent = tree.parent(id).expect("non-root");
        drop_delta(
            child_cuts[id.0] - tree.cut(id),
            tree.volume(id),
            tree.volume(parent),
            total,
        )
    };
    let mut heap: BinaryHeap<Reverse<DropCandidate>> = tree
        .node_ids()
        .filter(|&id| tree.is_droppable(id))
        .map(|id| {
            Reverse(DropCandidate {
                increase: cost(tree, &child_cuts, id),
                id,
                version: 0,
            })
        })
        .collect();

    let mut adopted = Vec::new();
    while depth.height() > k {
        let Reverse(cand) = heap.pop().ok_or_else(|| {
            Error::Internal("no droppable node left while the tree is too tall".into())
        })?;
        if !tree.contains(cand.id) || version[cand.id.0] != cand.version {
            continue;
        }
        let parent = tree.parent(cand.id).expect("non-root");
        adopted.clear();
        adopted.extend(tree.children(cand.id));
        let dropped_cut = tree.cut(cand.id);
        let delta = tree.drop_delta_unchecked(cand.id);
        tree.drop_unleveled(cand.id);
        let (lo, hi) = span[cand.id.0];
        depth.range_add(lo, hi, -1);
        trace.record(StepKind::Drop, vec![cand.id], delta);
        version[cand.id.0] += 1;
        child_cuts[parent.0] = child_cuts[parent.0] - dropped_cut + child_cuts[cand.id.0];

        for &id in adopted.iter().chain(std::iter::once(&parent)) {
            if tree.is_droppable(id) {
                version[id.0] += 1;
                heap.push(Reverse(DropCandidate {
                    increase: cost(tree, &child_cuts, id),
                    id,
                    version: version[id.0],
                }));
            }
        }
    }
    tree.refresh_levels();
    Ok(())
}

fn squeeze_height_aware(tree: &mut CodingTree, k: usize, trace: &mut MinimizeTrace) -> Result<()> {
    while tree.height() > k {
        let (id, _) = best_drop_candidate(tree, DropMode::HeightAware).ok_or_else(|| {
            Error::Internal("no droppable node left while the tree is too tall".into())
        })?;
        let delta = tree.drop_node(id)?;
        trace.record(StepKind::Drop, vec![id], delta);
    }
    Ok(())
}

/// The node stage 2 would drop next and the entropy increase it causes,
/// by full scan. Ties go to the smallest id. In [`DropMode::HeightAware`]
/// only ancestors of maximum-depth leaves are considered.
pub fn best_drop_candidate(t: &CodingTree, mode: DropMode) -> Option<(NodeId, f64)> {
    let mut eligible = vec![false; t.id_bound()];
    match mode {
        DropMode::Literal => {
            for id in t.node_ids().filter(|&id| t.is_droppable(id)) {
                eligible[id.0] = true;
            }
        }
        DropMode::HeightAware => {
            let height = t.height();
            for leaf in t
                .node_ids()
                .filter(|&id| t.is_leaf(id) && t.level(id) == height)
            {
                for a in t.ancestors(leaf) {
                    if std::mem::replace(&mut eligible[a.0], true) {
                        break;
                    }
                }
            }
            eligible[t.root().0] = false;
        }
    }
    t.node_ids()
        .filter(|&id| eligible[id.0])
        .map(|id| (id, t.drop_delta_unchecked(id)))
        .min_by(|x, y| x.1.total_cmp(&y.1).then_with(|| x.0.cmp(&y.0)))
}

// --- baseline -------------------------------------------------------------

/// Randomly balanced tree of height `k`: vertices are shuffled with a seeded
/// generator and split recursively into halves (sizes differ by at most one)
/// at each level, with all leaves at depth `k`.
pub fn rbbt(g: &Graph, k: usize, seed: u64) -> Result<CodingTree> {
    MinimizeConfig::new(k).validate()?;
    let n = g.num_vertices();
    if n == 0 {
        return Err(Error::Input("graph has no vertices".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    // Leaves keep ids 0..n, the root is n, internal nodes follow.
    let mut parents: Vec<Option<NodeId>> = vec![None; n + 1];
    let mut leaf_vertex: Vec<Option<usize>> = (0..n).map(Some).chain([None]).collect();
    let mut frontier = vec![(NodeId(n), &order[..])];
    for _ in 1..k {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for (node, verts) in frontier {
            let (left, right) = verts.split_at(verts.len().div_ceil(2));
            for half in [left, right].into_iter().filter(|h| !h.is_empty()) {
                let id = NodeId(parents.len());
                parents.push(Some(node));
                leaf_vertex.push(None);
                next.push((id, half));
            }
        }
        frontier = next;
    }
    for (node, verts) in frontier {
        for &v in verts {
            parents[v] = Some(node);
        }
    }
    CodingTree::from_parents(g, &parents, &leaf_vertex)
}
