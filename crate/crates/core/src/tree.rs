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

//! Coding trees over a graph, their structural entropy, and the two local
//! rewrites used by the greedy minimizer.
//!
//! A coding tree is a rooted hierarchy whose leaves are in bijection with the
//! vertices of a graph. Every node caches the volume (sum of degrees) and cut
//! (number of boundary edges) of the vertex set below it, plus its depth.
//! The structural entropy of a graph under a tree is
//!
//! ```text
//! H(G; T) = - sum over non-root nodes v of  cut(v) / vol(V) * log2(vol(v) / vol(parent(v)))
//! ```
//!
//! with `0 * log 0 = 0` for isolated vertices.
//!
//! Nodes live in an arena indexed by [`NodeId`]. Children are kept in an
//! intrusive doubly linked sibling list so that [`CodingTree::drop_node`] can
//! splice a child list into the parent without shifting vectors.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Logarithm base used for every entropy value in this crate.
pub const LOG_BASE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Owned snapshot of one node, as exchanged with serializers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodingTreeNode {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub leaf_vertex: Option<usize>,
    pub volume: u64,
    pub cut: u64,
    pub level: usize,
}

#[derive(Debug, Clone)]
struct Node {
    parent: Option<NodeId>,
    first_child: Option<NodeId>,
    last_child: Option<NodeId>,
    prev_sibling: Option<NodeId>,
    next_sibling: Option<NodeId>,
    num_children: usize,
    leaf_vertex: Option<usize>,
    volume: u64,
    cut: u64,
    level: usize,
}

impl Node {
    fn new(parent: Option<NodeId>, volume: u64, cut: u64, level: usize) -> Self {
        Node {
            parent,
            first_child: None,
            last_child: None,
            prev_sibling: None,
            next_sibling: None,
            num_children: 0,
            leaf_vertex: None,
            volume,
            cut,
            level,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CodingTree {
    nodes: Vec<Option<Node>>,
    root: NodeId,
    graph_fingerprint: String,
    num_vertices: usize,
    total_volume: u64,
    /// Number of leaves at each depth; the height is the last non-zero slot.
    leaf_levels: Vec<usize>,
}

/// Entropy of a graph under a coding tree, with the contribution of every
/// non-root node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub total: f64,
    pub per_node: BTreeMap<NodeId, f64>,
    pub log_base: f64,
    /// Set when the graph has no edges; the entropy is then reported as 0.
    pub degenerate: bool,
}

/// One coding-tree axiom, or the cache/structure checks layered on top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    /// The root's marker is the whole vertex set.
    RootMarker,
    /// Every node is the codeword of a non-empty vertex subset.
    Codeword,
    /// Sibling markers are disjoint and union to the parent's marker.
    SiblingPartition,
    /// Leaves are in bijection with graph vertices.
    LeafBijection,
    /// Parent/child links, connectivity, graph identity.
    Structure,
    /// Cached volume, cut or level disagrees with a recomputation.
    Cache,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub node: Option<NodeId>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Some(id) => write!(f, "{:?} at {}: {}", self.axiom, id, self.detail),
            None => write!(f, "{:?}: {}", self.axiom, self.detail),
        }
    }
}

/// `-(cut / vol_total) * log2(volume / parent_volume)` with `0 log 0 = 0`.
#[inline]
pub(crate) fn node_term(cut: u64, volume: u64, parent_volume: u64, total_volume: u64) -> f64 {
    if cut == 0 || volume == 0 || total_volume == 0 {
        return 0.0;
    }
    -(cut as f64 / total_volume as f64) * (volume as f64 / parent_volume as f64).log2()
}

/// Entropy change of merging two root children with the given cut between
/// them and combined volume.
#[inline]
pub(crate) fn combine_delta(cut_between: u64, merged_volume: u64, total_volume: u64) -> f64 {
    if cut_between == 0 || total_volume == 0 {
        return 0.0;
    }
    (2.0 * cut_between as f64 / total_volume as f64)
        * (merged_volume as f64 / total_volume as f64).log2()
}

/// Entropy change of dropping a node whose children share `2 * intra` edge
/// endpoints.
#[inline]
pub(crate) fn drop_delta(
    twice_intra: u64,
    volume: u64,
    parent_volume: u64,
    total_volume: u64,
) -> f64 {
    if twice_intra == 0 || total_volume == 0 {
        return 0.0;
    }
    (twice_intra as f64 / total_volume as f64) * (parent_volume as f64 / volume as f64).log2()
}

pub struct Children<'a> {
    tree: &'a CodingTree,
    next: Option<NodeId>,
}

impl Iterator for Children<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let id = self.next?;
        self.next = self.tree.n(id).next_sibling;
        Some(id)
    }
}

impl CodingTree {
    /// Height-1 tree: a root whose children are one leaf per vertex.
    ///
    /// Leaf `v` gets node id `v`; the root is `n`.
    pub fn trivial(g: &Graph) -> Result<Self> {
        let n = g.num_vertices();
        if n == 0 {
            return Err(Error::Input("graph has no vertices".into()));
        }
        let root = NodeId(n);
        let mut tree = CodingTree {
            nodes: Vec::with_capacity(2 * n + 1),
            root,
            graph_fingerprint: g.fingerprint().to_owned(),
            num_vertices: n,
            total_volume: g.total_volume(),
            leaf_levels: vec![0, n],
        };
        for v in 0..n {
            let mut leaf = Node::new(Some(root), g.degree(v), g.degree(v), 1);
            leaf.leaf_vertex = Some(v);
            tree.nodes.push(Some(leaf));
        }
        tree.nodes
            .push(Some(Node::new(None, g.total_volume(), 0, 0)));
        for v in 0..n {
            tree.append_child(root, NodeId(v));
        }
        Ok(tree)
    }

    /// Rebuilds a tree from node snapshots. Only referential sanity is
    /// checked here (ids unique and in range, children exist); the axioms
    /// are left to [`CodingTree::validate`].
    pub fn from_nodes(
        root: NodeId,
        nodes: &[CodingTreeNode],
        graph_fingerprint: impl Into<String>,
        num_vertices: usize,
        total_volume: u64,
    ) -> Result<Self> {
        let size = nodes.iter().map(|n| n.id.0 + 1).max().unwrap_or(0);
        let mut arena: Vec<Option<Node>> = vec![None; size];
        for rec in nodes {
            if arena[rec.id.0].is_some() {
                return Err(Error::Format(format!("duplicate node id {}", rec.id)));
            }
            let mut node = Node::new(rec.parent, rec.volume, rec.cut, rec.level);
            node.leaf_vertex = rec.leaf_vertex;
            arena[rec.id.0] = Some(node);
        }
        if root.0 >= size || arena[root.0].is_none() {
            return Err(Error::Format(format!("root {root} is not a node")));
        }
        let mut tree = CodingTree {
            nodes: arena,
            root,
            graph_fingerprint: graph_fingerprint.into(),
            num_vertices,
            total_volume,
            leaf_levels: Vec::new(),
        };
        let mut adopted = vec![false; size];
        for rec in nodes {
            for &child in &rec.children {
                if child.0 >= size || tree.nodes[child.0].is_none() {
                    return Err(Error::Format(format!(
                        "node {} lists missing child {child}",
                        rec.id
                    )));
                }
                if std::mem::replace(&mut adopted[child.0], true) {
                    return Err(Error::Format(format!(
                        "node {child} is listed as a child twice"
                    )));
                }
                // Keep the recorded parent pointer; validate() reports mismatches.
                let parent = tree.n(child).parent;
                tree.append_child(rec.id, child);
                tree.n_mut(child).parent = parent;
            }
        }
        for rec in nodes {
            if rec.children.is_empty() {
                tree.count_leaf(rec.level, 1);
            }
        }
        Ok(tree)
    }

    /// Builds a tree from a parent array (`None` marks the root) and the
    /// graph vertex carried by each leaf, computing every cache from `g`.
    /// Children keep increasing-id order. Fails if the result is not a valid
    /// coding tree of `g`.
    pub fn from_parents(
        g: &Graph,
        parents: &[Option<NodeId>],
        leaf_vertex: &[Option<usize>],
    ) -> Result<Self> {
        if parents.len() != leaf_vertex.len() {
            return Err(Error::Input(
                "parent and leaf arrays differ in length".into(),
            ));
        }
        let mut roots = parents.iter().enumerate().filter(|(_, p)| p.is_none());
        let root = match (roots.next(), roots.next()) {
            (Some((r, _)), None) => NodeId(r),
            _ => return Err(Error::Input("exactly one node must have no parent".into())),
        };
        let mut tree = CodingTree {
            nodes: Vec::with_capacity(parents.len()),
            root,
            graph_fingerprint: g.fingerprint().to_owned(),
            num_vertices: g.num_vertices(),
            total_volume: g.total_volume(),
            leaf_levels: Vec::new(),
        };
        for (id, &lv) in leaf_vertex.iter().enumerate() {
            let mut node = Node::new(None, 0, 0, 0);
            node.leaf_vertex = lv;
            if let Some(p) = parents[id] {
                if p.0 >= parents.len() || p.0 == id {
                    return Err(Error::Input(format!("node {id} has invalid parent {p}")));
                }
            }
            tree.nodes.push(Some(node));
        }
        for (id, &p) in parents.iter().enumerate() {
            if let Some(p) = p {
                tree.append_child(p, NodeId(id));
            }
        }
        tree.refresh_caches(g)?;
        match tree.validate(g).into_iter().next() {
            Some(v) => Err(Error::Input(format!("not a coding tree: {v}"))),
            None => Ok(tree),
        }
    }

    /// Recomputes level, volume and cut of every node from the structure.
    fn refresh_caches(&mut self, g: &Graph) -> Result<()> {
        let bound = self.id_bound();
        let mut order = Vec::with_capacity(bound);
        let mut seen = vec![false; bound];
        let mut stack = vec![(self.root, 0usize)];
        while let Some((id, d)) = stack.pop() {
            if std::mem::replace(&mut seen[id.0], true) {
                return Err(Error::Input(format!("{id} is reachable twice")));
            }
            self.n_mut(id).level = d;
            order.push(id);
            stack.extend(self.children(id).map(|c| (c, d + 1)));
        }
        if order.len() != self.len() {
            return Err(Error::Input(
                "some nodes are not reachable from the root".into(),
            ));
        }
        let mut leaf_of = vec![None; g.num_vertices()];
        for &id in &order {
            if let Some(v) = self.n(id).leaf_vertex.filter(|_| self.is_leaf(id)) {
                match leaf_of.get_mut(v) {
                    Some(slot @ None) => *slot = Some(id),
                    _ => return Err(Error::Input(format!("vertex {v} has no unique leaf"))),
                }
            }
        }
        if leaf_of.iter().any(Option::is_none) {
            return Err(Error::Input("some vertices have no leaf".into()));
        }
        let mut inside = vec![0u64; bound];
        for &(a, b) in g.edges() {
            let (mut x, mut y) = (leaf_of[a].unwrap(), leaf_of[b].unwrap());
            while self.n(x).level > self.n(y).level {
                x = self.n(x).parent.unwrap();
            }
            while self.n(y).level > self.n(x).level {
                y = self.n(y).parent.unwrap();
            }
            while x != y {
                x = self.n(x).parent.unwrap();
                y = self.n(y).parent.unwrap();
            }
            inside[x.0] += 1;
        }
        let mut volume = vec![0u64; bound];
        self.leaf_levels.clear();
        for &id in order.iter().rev() {
            if let Some(v) = self.n(id).leaf_vertex {
                volume[id.0] = g.degree(v);
            }
            if self.is_leaf(id) {
                let level = self.n(id).level;
                self.count_leaf(level, 1);
            }
            if let Some(p) = self.n(id).parent {
                volume[p.0] += volume[id.0];
                inside[p.0] += inside[id.0];
            }
            let node = self.n_mut(id);
            node.volume = volume[id.0];
            node.cut = volume[id.0] - 2 * inside[id.0];
        }
        Ok(())
    }

    fn n(&self, id: NodeId) -> &Node {
        self.nodes[id.0].as_ref().expect("live node")
    }

    fn n_mut(&mut self, id: NodeId) -> &mut Node {
        self.nodes[id.0].as_mut().expect("live node")
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn graph_fingerprint(&self) -> &str {
        &self.graph_fingerprint
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn total_volume(&self) -> u64 {
        self.total_volume
    }

    /// Maximum leaf depth.
    pub fn height(&self) -> usize {
        self.leaf_levels.iter().rposition(|&c| c > 0).unwrap_or(0)
    }

    /// Leaf count per depth.
    pub fn leaf_levels(&self) -> &[usize] {
        &self.leaf_levels
    }

    /// Number of live nodes.
    pub fn len(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// One past the largest id ever handed out and still reserved.
    pub fn id_bound(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.nodes.get(id.0).is_some_and(Option::is_some)
    }

    /// Live node ids in increasing order.
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.is_some())
            .map(|(i, _)| NodeId(i))
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.n(id).parent
    }

    pub fn children(&self, id: NodeId) -> Children<'_> {
        Children {
            tree: self,
            next: self.n(id).first_child,
        }
    }

    pub fn num_children(&self, id: NodeId) -> usize {
        self.n(id).num_children
    }

    pub fn volume(&self, id: NodeId) -> u64 {
        self.n(id).volume
    }

    pub fn cut(&self, id: NodeId) -> u64 {
        self.n(id).cut
    }

    pub fn level(&self, id: NodeId) -> usize {
        self.n(id).level
    }

    pub fn leaf_vertex(&self, id: NodeId) -> Option<usize> {
        self.n(id).leaf_vertex
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.n(id).num_children == 0
    }

    /// Internal, non-root nodes: the ones [`CodingTree::drop_node`] accepts.
    pub fn is_droppable(&self, id: NodeId) -> bool {
        self.contains(id) && id != self.root && !self.is_leaf(id)
    }

    pub fn node(&self, id: NodeId) -> Option<CodingTreeNode> {
        let n = self.nodes.get(id.0)?.as_ref()?;
        Some(CodingTreeNode {
            id,
            parent: n.parent,
            children: self.children(id).collect(),
            leaf_vertex: n.leaf_vertex,
            volume: n.volume,
            cut: n.cut,
            level: n.level,
        })
    }

    /// Snapshots of all live nodes, sorted by id.
    pub fn to_nodes(&self) -> Vec<CodingTreeNode> {
        self.node_ids().filter_map(|id| self.node(id)).collect()
    }

    /// Graph vertices covered by `id`, sorted.
    pub fn leaves_under(&self, id: NodeId) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(cur) = stack.pop() {
            match self.n(cur).leaf_vertex {
                Some(v) if self.is_leaf(cur) => out.push(v),
                _ => stack.extend(self.children(cur)),
            }
        }
        out.sort_unstable();
        out
    }

    /// Ancestors of `id`, nearest first, ending at the root.
    pub fn ancestors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(self.n(id).parent, move |&p| self.n(p).parent)
    }

    // --- linked list plumbing -------------------------------------------

    fn append_child(&mut self, parent: NodeId, child: NodeId) {
        let last = self.n(parent).last_child;
        {
            let c = self.n_mut(child);
            c.parent = Some(parent);
            c.prev_sibling = last;
            c.next_sibling = None;
        }
        match last {
            Some(l) => self.n_mut(l).next_sibling = Some(child),
            None => self.n_mut(parent).first_child = Some(child),
        }
        let p = self.n_mut(parent);
        p.last_child = Some(child);
        p.num_children += 1;
    }

    fn unlink(&mut self, child: NodeId) {
        let (parent, prev, next) = {
            let c = self.n(child);
            (
                c.parent.expect("unlink of root"),
                c.prev_sibling,
                c.next_sibling,
            )
        };
        match prev {
            Some(p) => self.n_mut(p).next_sibling = next,
            None => self.n_mut(parent).first_child = next,
        }
        match next {
            Some(nx) => self.n_mut(nx).prev_sibling = prev,
            None => self.n_mut(parent).last_child = prev,
        }
        let p = self.n_mut(parent);
        p.num_children -= 1;
        let c = self.n_mut(child);
        c.prev_sibling = None;
        c.next_sibling = None;
    }

    fn alloc(&mut self, node: Node) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(Some(node));
        id
    }

    fn count_leaf(&mut self, level: usize, delta: isize) {
        if self.leaf_levels.len() <= level {
            self.leaf_levels.resize(level + 1, 0);
        }
        let slot = &mut self.leaf_levels[level];
        *slot = slot
            .checked_add_signed(delta)
            .expect("leaf level histogram underflow");
    }

    /// Adds `shift` to the level of every node strictly below `top`.
    fn shift_levels_below(&mut self, top: NodeId, shift: isize) {
        let mut stack: Vec<NodeId> = self.children(top).collect();
        while let Some(id) = stack.pop() {
            let old = self.n(id).level;
            let new = old.checked_add_signed(shift).expect("negative level");
            self.n_mut(id).level = new;
            if self.is_leaf(id) {
                self.count_leaf(old, -1);
                self.count_leaf(new, 1);
            } else {
                stack.extend(self.children(id));
            }
        }
    }

    fn shift_subtree(&mut self, top: NodeId, shift: isize) {
        let old = self.n(top).level;
        let new = old.checked_add_signed(shift).expect("negative level");
        self.n_mut(top).level = new;
        if self.is_leaf(top) {
            self.count_leaf(old, -1);
            self.count_leaf(new, 1);
        } else {
            self.shift_levels_below(top, shift);
        }
    }

    // --- rewrites ---------------------------------------------------------

    fn check_root_child(&self, id: NodeId) -> Result<()> {
        if !self.contains(id) || self.n(id).parent != Some(self.root) {
            return Err(Error::Precondition(format!(
                "{id} is not a child of the root"
            )));
        }
        Ok(())
    }

    /// Inserts a new node under the root whose children are `c1` and `c2`,
    /// returning its id and the entropy change (never positive).
    ///
    /// The cut between the two subtrees is recomputed from the graph; the
    /// minimizer uses [`CodingTree::combine_with_cut`] with a maintained value.
    pub fn combine(&mut self, g: &Graph, c1: NodeId, c2: NodeId) -> Result<(NodeId, f64)> {
        if c1 == c2 {
            return Err(Error::Precondition(format!(
                "cannot combine {c1} with itself"
            )));
        }
        self.check_root_child(c1)?;
        self.check_root_child(c2)?;
        self.check_graph(g)?;
        let a = self.leaves_under(c1);
        let b = self.leaves_under(c2);
        let cut = g.cut_between(&a, &b)?;
        Ok(self.combine_with_cut(c1, c2, cut))
    }

    /// [`CodingTree::combine`] with a caller-supplied cut between the two
    /// subtrees. Both ids must be distinct root children.
    pub(crate) fn combine_with_cut(&mut self, c1: NodeId, c2: NodeId, cut: u64) -> (NodeId, f64) {
        let out = self.combine_unleveled(c1, c2, cut);
        self.shift_subtree(c1, 1);
        self.shift_subtree(c2, 1);
        out
    }

    /// Combine that leaves the level caches of the moved subtrees stale.
    /// Callers must run [`CodingTree::refresh_levels`] before reading levels.
    pub(crate) fn combine_unleveled(&mut self, c1: NodeId, c2: NodeId, cut: u64) -> (NodeId, f64) {
        debug_assert!(c1 != c2);
        let (v1, g1) = (self.n(c1).volume, self.n(c1).cut);
        let (v2, g2) = (self.n(c2).volume, self.n(c2).cut);
        let merged = Node::new(None, v1 + v2, g1 + g2 - 2 * cut, 1);
        let id = self.alloc(merged);
        self.unlink(c1);
        self.unlink(c2);
        self.append_child(self.root, id);
        self.append_child(id, c1);
        self.append_child(id, c2);
        (id, combine_delta(cut, v1 + v2, self.total_volume))
    }

    /// Entropy change [`CodingTree::drop_node`] would cause, without
    /// applying it.
    pub fn drop_delta(&self, v: NodeId) -> Result<f64> {
        if !self.is_droppable(v) {
            return Err(Error::Precondition(format!(
                "{v} must be an internal non-root node to be dropped"
            )));
        }
        Ok(self.drop_delta_unchecked(v))
    }

    pub(crate) fn drop_delta_unchecked(&self, v: NodeId) -> f64 {
        let node = self.n(v);
        let parent = node.parent.expect("non-root");
        let child_cuts: u64 = self.children(v).map(|c| self.n(c).cut).sum();
        drop_delta(
            child_cuts - node.cut,
            node.volume,
            self.n(parent).volume,
            self.total_volume,
        )
    }

    /// Removes internal node `v`; its children take its place in the
    /// parent's child list, in order. Returns the entropy change (never
    /// negative).
    pub fn drop_node(&mut self, v: NodeId) -> Result<f64> {
        let delta = self.drop_delta(v)?;
        self.shift_levels_below(v, -1);
        self.drop_unleveled(v);
        Ok(delta)
    }

    /// Drop without the entropy change or level maintenance; see
    /// [`CodingTree::combine_unleveled`]. `v` must be droppable.
    pub(crate) fn drop_unleveled(&mut self, v: NodeId) {
        let parent = self.n(v).parent.expect("non-root");
        let (first, last, prev, next, count) = {
            let n = self.n(v);
            (
                n.first_child,
                n.last_child,
                n.prev_sibling,
                n.next_sibling,
                n.num_children,
            )
        };
        let (first, last) = (first.expect("internal"), last.expect("internal"));
        let mut cur = Some(first);
        while let Some(c) = cur {
            self.n_mut(c).parent = Some(parent);
            cur = self.n(c).next_sibling;
        }
        self.n_mut(first).prev_sibling = prev;
        self.n_mut(last).next_sibling = next;
        match prev {
            Some(p) => self.n_mut(p).next_sibling = Some(first),
            None => self.n_mut(parent).first_child = Some(first),
        }
        match next {
            Some(nx) => self.n_mut(nx).prev_sibling = Some(last),
            None => self.n_mut(parent).last_child = Some(last),
        }
        self.n_mut(parent).num_children += count - 1;
        self.nodes[v.0] = None;
        while matches!(self.nodes.last(), Some(None)) {
            self.nodes.pop();
        }
    }

    /// Recomputes every level and the leaf-depth histogram from the root.
    pub(crate) fn refresh_levels(&mut self) {
        self.leaf_levels.clear();
        let mut stack = vec![(self.root, 0usize)];
        while let Some((id, level)) = stack.pop() {
            self.n_mut(id).level = level;
            if self.is_leaf(id) {
                self.count_leaf(level, 1);
            } else {
                let mut cur = self.n(id).first_child;
                while let Some(c) = cur {
                    stack.push((c, level + 1));
                    cur = self.n(c).next_sibling;
                }
            }
        }
    }

    /// Inserts a pass-through node that becomes the only child of `v` and
    /// adopts all of `v`'s children. Entropy is unchanged.
    pub fn insert_unary_below(&mut self, v: NodeId) -> Result<NodeId> {
        if !self.contains(v) || self.is_leaf(v) {
            return Err(Error::Precondition(format!("{v} must be an internal node")));
        }
        let (volume, cut, level) = {
            let n = self.n(v);
            (n.volume, n.cut, n.level)
        };
        let u = self.alloc(Node::new(Some(v), volume, cut, level + 1));
        let (first, last, count) = {
            let n = self.n(v);
            (n.first_child, n.last_child, n.num_children)
        };
        {
            let un = self.n_mut(u);
            un.first_child = first;
            un.last_child = last;
            un.num_children = count;
        }
        let mut cur = first;
        while let Some(c) = cur {
            self.n_mut(c).parent = Some(u);
            cur = self.n(c).next_sibling;
        }
        {
            let vn = self.n_mut(v);
            vn.first_child = Some(u);
            vn.last_child = Some(u);
            vn.num_children = 1;
        }
        self.shift_levels_below(u, 1);
        Ok(u)
    }

    /// Inserts a pass-through node between `v` and its parent, in `v`'s
    /// position. Entropy is unchanged.
    pub fn insert_unary_above(&mut self, v: NodeId) -> Result<NodeId> {
        if !self.contains(v) || v == self.root {
            return Err(Error::Precondition(format!("{v} must be a non-root node")));
        }
        let (parent, prev, next, volume, cut, level) = {
            let n = self.n(v);
            (
                n.parent.expect("non-root"),
                n.prev_sibling,
                n.next_sibling,
                n.volume,
                n.cut,
                n.level,
            )
        };
        let mut un = Node::new(Some(parent), volume, cut, level);
        un.prev_sibling = prev;
        un.next_sibling = next;
        un.first_child = Some(v);
        un.last_child = Some(v);
        un.num_children = 1;
        let u = self.alloc(un);
        match prev {
            Some(p) => self.n_mut(p).next_sibling = Some(u),
            None => self.n_mut(parent).first_child = Some(u),
        }
        match next {
            Some(nx) => self.n_mut(nx).prev_sibling = Some(u),
            None => self.n_mut(parent).last_child = Some(u),
        }
        {
            let vn = self.n_mut(v);
            vn.parent = Some(u);
            vn.prev_sibling = None;
            vn.next_sibling = None;
        }
        self.shift_subtree(v, 1);
        Ok(u)
    }

    // --- entropy ------------------------------------------------------------

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if g.fingerprint() != self.graph_fingerprint || g.num_vertices() != self.num_vertices {
            return Err(Error::Consistency(
                "coding tree was built for a different graph".into(),
            ));
        }
        Ok(())
    }

    /// Structural entropy of `g` under this tree, from the node caches.
    pub fn entropy(&self, g: &Graph) -> Result<EntropyReport> {
        self.check_graph(g)?;
        let degenerate = self.total_volume == 0;
        if degenerate {
            log::warn!("graph has no edges; structural entropy is reported as 0");
        }
        let mut per_node = BTreeMap::new();
        let mut total = 0.0;
        for id in self.node_ids() {
            let node = self.n(id);
            let Some(parent) = node.parent else { continue };
            let term = node_term(
                node.cut,
                node.volume,
                self.n(parent).volume,
                self.total_volume,
            );
            total += term;
            per_node.insert(id, term);
        }
        Ok(EntropyReport {
            total,
            per_node,
            log_base: LOG_BASE,
            degenerate,
        })
    }

    /// Checks the coding-tree axioms and every cached value against `g`.
    /// An empty result means the tree is a valid coding tree of `g`.
    pub fn validate(&self, g: &Graph) -> Vec<Violation> {
        validate(self, g)
    }
}

impl PartialEq for CodingTree {
    /// Structural equality; the order of siblings is not significant.
    fn eq(&self, other: &Self) -> bool {
        if self.root != other.root
            || self.graph_fingerprint != other.graph_fingerprint
            || self.num_vertices != other.num_vertices
            || self.total_volume != other.total_volume
            || !self.node_ids().eq(other.node_ids())
        {
            return false;
        }
        self.node_ids().all(|id| {
            let (mut a, mut b) = (self.node(id).unwrap(), other.node(id).unwrap());
            a.children.sort_unstable();
            b.children.sort_unstable();
            a == b
        })
    }
}

/// Structural entropy of `g` under `t`.
pub fn tree_entropy(g: &Graph, t: &CodingTree) -> Result<EntropyReport> {
    t.entropy(g)
}

/// Entropy of `g` under the height-1 tree: the Shannon entropy of the
/// degree distribution.
pub fn one_dim_entropy(g: &Graph) -> Result<f64> {
    if g.num_vertices() == 0 {
        return Err(Error::Input("graph has no vertices".into()));
    }
    let total = g.total_volume();
    if total == 0 {
        log::warn!("graph has no edges; structural entropy is reported as 0");
        return Ok(0.0);
    }
    Ok(g.degrees()
        .iter()
        .map(|&d| node_term(d, d, total, total))
        .sum())
}

fn violation(axiom: Axiom, node: Option<NodeId>, detail: impl Into<String>) -> Violation {
    Violation {
        axiom,
        node,
        detail: detail.into(),
    }
}

fn validate(t: &CodingTree, g: &Graph) -> Vec<Violation> {
    let mut out = Vec::new();
    if t.graph_fingerprint != g.fingerprint() || t.num_vertices != g.num_vertices() {
        out.push(violation(
            Axiom::Structure,
            None,
            "tree belongs to a different graph",
        ));
        return out;
    }
    if !t.contains(t.root) {
        out.push(violation(Axiom::Structure, None, "root is not a node"));
        return out;
    }

    for id in t.node_ids() {
        let node = t.n(id);
        if node.parent.is_none() && id != t.root {
            out.push(violation(
                Axiom::Structure,
                Some(id),
                "second parentless node",
            ));
        }
        if id == t.root && node.parent.is_some() {
            out.push(violation(Axiom::Structure, Some(id), "root has a parent"));
        }
        for c in t.children(id) {
            if t.n(c).parent != Some(id) {
                out.push(violation(
                    Axiom::Structure,
                    Some(c),
                    format!(
                        "listed under {id} but parent pointer is {:?}",
                        t.n(c).parent
                    ),
                ));
            }
        }
        match (t.is_leaf(id), node.leaf_vertex) {
            (true, None) => out.push(violation(
                Axiom::LeafBijection,
                Some(id),
                "leaf is not attached to a graph vertex",
            )),
            (false, Some(v)) => out.push(violation(
                Axiom::Codeword,
                Some(id),
                format!("internal node carries leaf vertex {v}"),
            )),
            (true, Some(v)) if v >= g.num_vertices() => out.push(violation(
                Axiom::LeafBijection,
                Some(id),
                format!("leaf vertex {v} is outside the graph"),
            )),
            _ => {}
        }
    }

    // Walk from the root; a node reached twice means overlapping markers.
    let bound = t.id_bound();
    let mut depth = vec![usize::MAX; bound];
    let mut order = Vec::with_capacity(bound);
    let mut stack = vec![(t.root, 0usize)];
    let mut walk_ok = true;
    while let Some((id, d)) = stack.pop() {
        if depth[id.0] != usize::MAX {
            out.push(violation(
                Axiom::SiblingPartition,
                Some(id),
                "node is reachable along more than one path",
            ));
            walk_ok = false;
            continue;
        }
        depth[id.0] = d;
        order.push(id);
        stack.extend(t.children(id).map(|c| (c, d + 1)));
    }
    for id in t.node_ids() {
        if depth[id.0] == usize::MAX {
            out.push(violation(
                Axiom::Structure,
                Some(id),
                "node is not reachable from the root",
            ));
            walk_ok = false;
        }
    }

    let mut leaf_of = vec![None; g.num_vertices()];
    for &id in &order {
        if !t.is_leaf(id) {
            continue;
        }
        if let Some(v) = t.n(id).leaf_vertex.filter(|&v| v < g.num_vertices()) {
            if let Some(other) = leaf_of[v].replace(id) {
                out.push(violation(
                    Axiom::LeafBijection,
                    Some(id),
                    format!("vertex {v} already has leaf {other}"),
                ));
            }
        }
    }
    for (v, leaf) in leaf_of.iter().enumerate() {
        if leaf.is_none() {
            out.push(violation(
                Axiom::RootMarker,
                Some(t.root),
                format!("vertex {v} is not covered by any leaf"),
            ));
        }
    }

    if !walk_ok || !out.is_empty() {
        return out;
    }

    // Caches. Children come after parents in `order`, so a reverse pass is
    // a post-order.
    let mut volume = vec![0u64; bound];
    let mut inside = vec![0u64; bound];
    for &(a, b) in g.edges() {
        let (mut x, mut y) = (leaf_of[a].unwrap(), leaf_of[b].unwrap());
        while depth[x.0] > depth[y.0] {
            x = t.n(x).parent.unwrap();
        }
        while depth[y.0] > depth[x.0] {
            y = t.n(y).parent.unwrap();
        }
        while x != y {
            x = t.n(x).parent.unwrap();
            y = t.n(y).parent.unwrap();
        }
        inside[x.0] += 1;
    }
    for &id in order.iter().rev() {
        if let Some(v) = t.n(id).leaf_vertex {
            volume[id.0] = g.degree(v);
        }
        if let Some(p) = t.n(id).parent {
            volume[p.0] += volume[id.0];
            inside[p.0] += inside[id.0];
        }
    }
    let mut leaf_levels = vec![0usize; 1];
    for &id in &order {
        let node = t.n(id);
        let cut = volume[id.0] - 2 * inside[id.0];
        if node.volume != volume[id.0] {
            out.push(violation(
                Axiom::Cache,
                Some(id),
                format!(
                    "volume cache {} but subtree volume is {}",
                    node.volume, volume[id.0]
                ),
            ));
        }
        if node.cut != cut {
            out.push(violation(
                Axiom::Cache,
                Some(id),
                format!("cut cache {} but subtree cut is {cut}", node.cut),
            ));
        }
        if node.level != depth[id.0] {
            out.push(violation(
                Axiom::Cache,
                Some(id),
                format!("level cache {} but depth is {}", node.level, depth[id.0]),
            ));
        }
        if t.is_leaf(id) {
            if leaf_levels.len() <= depth[id.0] {
                leaf_levels.resize(depth[id.0] + 1, 0);
            }
            leaf_levels[depth[id.0]] += 1;
        }
    }
    let trimmed = |v: &[usize]| -> Vec<usize> {
        let end = v.iter().rposition(|&c| c > 0).map_or(0, |i| i + 1);
        v[..end].to_vec()
    };
    if trimmed(&leaf_levels) != trimmed(&t.leaf_levels) {
        out.push(violation(
            Axiom::Cache,
            None,
            "leaf level histogram is stale",
        ));
    }
    out
}

/// Cache-free evaluation of the entropy formula: every node's vertex set is
/// materialized and its volume and cut are measured on the graph directly.
/// Quadratic; meant as a cross-check for small trees.
pub fn entropy_from_scratch(g: &Graph, t: &CodingTree) -> Result<f64> {
    t.check_graph(g)?;
    let total = g.total_volume();
    if total == 0 {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for id in t.node_ids() {
        let Some(parent) = t.parent(id) else { continue };
        let own = g.set_stats(&t.leaves_under(id))?;
        let up = g.set_stats(&t.leaves_under(parent))?;
        sum += node_term(own.cut, own.volume, up.volume, total);
    }
    Ok(sum)
}
