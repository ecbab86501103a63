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

//! File formats: edge lists, the TUDataset multi-graph layout, numeric
//! matrices and the canonical coding-tree JSON document.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::minimize::MinimizeTrace;
use crate::tree::{CodingTree, CodingTreeNode, EntropyReport};

pub const TREE_FORMAT_VERSION: &str = "1";

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn is_comment(line: &str) -> bool {
    line.starts_with('#') || line.starts_with('%')
}

fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
}

/// A parsed edge list. Vertex `i` of `graph` had id `original_ids[i]` in the
/// file; ids are compacted in increasing order.
#[derive(Debug, Clone)]
pub struct ParsedEdgeList {
    pub graph: Graph,
    pub original_ids: Vec<u64>,
}

/// Parses `u v` lines separated by whitespace or commas. Lines starting with
/// `#` or `%` and blank lines are skipped; tokens after the second are
/// ignored.
pub fn parse_edge_list(text: &str) -> Result<ParsedEdgeList> {
    let mut raw = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || is_comment(line) {
            continue;
        }
        let mut it = tokens(line);
        let mut id = || -> Result<u64> {
            let tok = it.next().ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "expected two vertex ids".into(),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("{tok:?} is not a non-negative integer"),
            })
        };
        raw.push((id()?, id()?));
    }
    if raw.is_empty() {
        return Err(Error::Input("edge list has no edges".into()));
    }
    let original_ids: Vec<u64> = raw
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let dense = |x: u64| original_ids.binary_search(&x).expect("id was collected");
    let edges: Vec<(usize, usize)> = raw.iter().map(|&(u, v)| (dense(u), dense(v))).collect();
    let graph = Graph::new(original_ids.len(), &edges)?;
    Ok(ParsedEdgeList {
        graph,
        original_ids,
    })
}

/// One `u v` line per canonical edge. Isolated vertices have no line and do
/// not survive a round trip.
pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<ParsedEdgeList> {
    parse_edge_list(&read_text(path.as_ref())?)
}

pub fn write_edge_list(path: impl AsRef<Path>, g: &Graph) -> Result<()> {
    write_text(path.as_ref(), &serialize_edge_list(g))
}

/// Parses a numeric matrix, one row per line, entries separated by commas or
/// whitespace. Comment lines start with `#`.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = tokens(line)
            .map(|t| {
                t.parse::<f64>().map_err(|_| Error::Parse {
                    line: i + 1,
                    message: format!("{t:?} is not a number"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("row has {} entries, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Input("matrix has no rows".into()));
    }
    Ok(rows)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    parse_matrix(&read_text(path.as_ref())?)
}

/// All graphs of one TUDataset-format dataset.
#[derive(Debug, Clone)]
pub struct DatasetBundle {
    pub name: String,
    pub graphs: Vec<Graph>,
    /// One class label per graph, when the labels file is present.
    pub labels: Option<Vec<i64>>,
    pub warnings: Vec<String>,
    /// Global 0-based id of the first node of each graph, in file order of
    /// the graph's nodes. `node_ids[g][local]` gives the global id.
    pub node_ids: Vec<Vec<usize>>,
    /// Raw lines of the optional node/edge/graph attribute files, keyed by
    /// file suffix (e.g. `node_labels`). Never interpreted.
    pub metadata: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub num_graphs: usize,
    pub num_classes: Option<usize>,
    pub avg_nodes: f64,
    pub avg_edges: f64,
}

impl DatasetBundle {
    pub fn stats(&self) -> DatasetStats {
        let count = self.graphs.len().max(1) as f64;
        DatasetStats {
            num_graphs: self.graphs.len(),
            num_classes: self
                .labels
                .as_ref()
                .map(|l| l.iter().collect::<BTreeSet<_>>().len()),
            avg_nodes: self.graphs.iter().map(|g| g.num_vertices()).sum::<usize>() as f64 / count,
            avg_edges: self.graphs.iter().map(|g| g.num_edges()).sum::<usize>() as f64 / count,
        }
    }
}

const OPTIONAL_FILES: [&str; 5] = [
    "node_labels",
    "node_attributes",
    "edge_labels",
    "edge_attributes",
    "graph_attributes",
];

fn parse_index(tok: &str, line: usize, file: &str) -> Result<usize> {
    match tok.trim().parse::<usize>() {
        Ok(x) if x >= 1 => Ok(x),
        _ => Err(Error::Format(format!(
            "{file} line {line}: {tok:?} is not a 1-based index"
        ))),
    }
}

/// Reads `DIR/NAME_A.txt` and `DIR/NAME_graph_indicator.txt` (both 1-based),
/// plus `NAME_graph_labels.txt` when present.
pub fn parse_tudataset(dir: impl AsRef<Path>, name: &str) -> Result<DatasetBundle> {
    let dir = dir.as_ref();
    let file = |suffix: &str| dir.join(format!("{name}_{suffix}.txt"));

    let indicator_name = format!("{name}_graph_indicator.txt");
    let mut graph_of = Vec::new();
    for (i, line) in read_text(&file("graph_indicator"))?.lines().enumerate() {
        if !line.trim().is_empty() {
            graph_of.push(parse_index(line, i + 1, &indicator_name)? - 1);
        }
    }
    let num_graphs = graph_of.iter().max().map_or(0, |m| m + 1);
    let mut node_ids: Vec<Vec<usize>> = vec![Vec::new(); num_graphs];
    let mut local = Vec::with_capacity(graph_of.len());
    for (node, &g) in graph_of.iter().enumerate() {
        local.push(node_ids[g].len());
        node_ids[g].push(node);
    }
    if let Some(g) = node_ids.iter().position(|ids| ids.is_empty()) {
        return Err(Error::Format(format!("graph {} has no nodes", g + 1)));
    }

    let a_name = format!("{name}_A.txt");
    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); num_graphs];
    for (i, line) in read_text(&file("A"))?.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let (Some(a), Some(b)) = (parts.next(), parts.next()) else {
            return Err(Error::Format(format!(
                "{a_name} line {}: expected \"i, j\"",
                i + 1
            )));
        };
        let (u, v) = (
            parse_index(a, i + 1, &a_name)? - 1,
            parse_index(b, i + 1, &a_name)? - 1,
        );
        if u >= graph_of.len() || v >= graph_of.len() {
            return Err(Error::Format(format!(
                "{a_name} line {}: node {} is not in the graph indicator",
                i + 1,
                u.max(v) + 1
            )));
        }
        if graph_of[u] != graph_of[v] {
            return Err(Error::Format(format!(
                "edge ({}, {}) on line {} of {a_name} spans graphs {} and {}",
                u + 1,
                v + 1,
                i + 1,
                graph_of[u] + 1,
                graph_of[v] + 1
            )));
        }
        edges[graph_of[u]].push((local[u], local[v]));
    }

    let graphs = edges
        .par_iter()
        .zip(node_ids.par_iter())
        .map(|(e, ids)| Graph::new(ids.len(), e))
        .collect::<Result<Vec<_>>>()?;

    let mut warnings = Vec::new();
    // Each edge is listed once per direction; only repeats of the same
    // ordered entry are reported.
    let duplicates: usize = edges
        .par_iter_mut()
        .map(|e| {
            e.sort_unstable();
            e.windows(2).filter(|w| w[0] == w[1]).count()
        })
        .sum();
    for (i, g) in graphs.iter().enumerate() {
        let norm = g.normalization();
        if norm.self_loops_dropped > 0 {
            warnings.push(format!(
                "graph {}: dropped {} self-loop(s)",
                i + 1,
                norm.self_loops_dropped
            ));
        }
    }
    if duplicates > 0 {
        warnings.push(format!("collapsed {duplicates} repeated edge entries"));
    }

    let labels_path = file("graph_labels");
    let labels = if labels_path.exists() {
        let labels = read_text(&labels_path)?
            .lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, l)| {
                l.trim().parse::<i64>().map_err(|_| {
                    Error::Format(format!("graph label {} is not an integer: {l:?}", i + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if labels.len() != num_graphs {
            return Err(Error::Format(format!(
                "{} graph labels for {num_graphs} graphs",
                labels.len()
            )));
        }
        Some(labels)
    } else {
        None
    };

    let mut metadata = BTreeMap::new();
    for suffix in OPTIONAL_FILES {
        let path = file(suffix);
        if path.exists() {
            let lines = read_text(&path)?.lines().map(str::to_owned).collect();
            metadata.insert(suffix.to_owned(), lines);
        }
    }

    Ok(DatasetBundle {
        name: name.to_owned(),
        graphs,
        labels,
        warnings,
        node_ids,
        metadata,
    })
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub combines: usize,
    pub drops: usize,
    pub pads: usize,
    pub initial_entropy: f64,
}

/// Canonical on-disk form of a coding tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeDocument {
    pub format_version: String,
    pub graph_fingerprint: String,
    pub height: usize,
    pub entropy_bits: f64,
    pub nodes: Vec<CodingTreeNode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_summary: Option<TraceSummary>,
}

impl TreeDocument {
    /// Builds the document; fails with a consistency error unless `t` is a
    /// valid coding tree of `g`.
    pub fn new(
        g: &Graph,
        t: &CodingTree,
        report: &EntropyReport,
        trace: Option<&MinimizeTrace>,
    ) -> Result<Self> {
        if let Some(v) = t.validate(g).first() {
            return Err(Error::Consistency(format!(
                "refusing to serialize invalid tree: {v}"
            )));
        }
        Ok(TreeDocument {
            format_version: TREE_FORMAT_VERSION.to_owned(),
            graph_fingerprint: t.graph_fingerprint().to_owned(),
            height: t.height(),
            entropy_bits: round12(report.total),
            nodes: t.to_nodes(),
            trace_summary: trace.map(|tr| TraceSummary {
                combines: tr.combines(),
                drops: tr.drops(),
                pads: tr.pads(),
                initial_entropy: round12(tr.initial_entropy),
            }),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: TreeDocument = serde_json::from_str(text)?;
        if doc.format_version != TREE_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported tree format version {:?}",
                doc.format_version
            )));
        }
        Ok(doc)
    }

    /// Canonical text: sorted keys, nodes by id, two-space indentation and a
    /// trailing newline.
    pub fn render(&self) -> Result<String> {
        let mut doc = self.clone();
        doc.nodes.sort_by_key(|n| n.id);
        doc.entropy_bits = round12(doc.entropy_bits);
        if let Some(s) = doc.trace_summary.as_mut() {
            s.initial_entropy = round12(s.initial_entropy);
        }
        // serde_json's default map is ordered, so a round trip through Value
        // sorts every object's keys.
        let value = serde_json::to_value(&doc)?;
        let mut text = serde_json::to_string_pretty(&value)?;
        text.push('\n');
        Ok(text)
    }

    /// Rebuilds the tree. Only referential checks are made; call
    /// [`TreeDocument::to_tree_for`] to also check it against a graph.
    pub fn to_tree(&self) -> Result<CodingTree> {
        let mut roots = self.nodes.iter().filter(|n| n.parent.is_none());
        let root = match (roots.next(), roots.next()) {
            (Some(r), None) => r,
            _ => return Err(Error::Format("tree document needs exactly one root".into())),
        };
        let num_vertices = self
            .nodes
            .iter()
            .filter(|n| n.leaf_vertex.is_some())
            .count();
        CodingTree::from_nodes(
            root.id,
            &self.nodes,
            self.graph_fingerprint.clone(),
            num_vertices,
            root.volume,
        )
    }

    /// Rebuilds the tree and checks every axiom and cache against `g`.
    pub fn to_tree_for(&self, g: &Graph) -> Result<CodingTree> {
        let t = self.to_tree()?;
        match t.validate(g).first() {
            None => Ok(t),
            Some(v) => Err(Error::Consistency(format!(
                "tree document does not fit graph: {v}"
            ))),
        }
    }
}

/// Canonical JSON text of a valid tree.
pub fn serialize_tree(
    g: &Graph,
    t: &CodingTree,
    report: &EntropyReport,
    trace: Option<&MinimizeTrace>,
) -> Result<String> {
    TreeDocument::new(g, t, report, trace)?.render()
}

pub fn read_tree_document(path: impl AsRef<Path>) -> Result<TreeDocument> {
    TreeDocument::parse(&read_text(path.as_ref())?)
}

pub fn write_tree_document(path: impl AsRef<Path>, doc: &TreeDocument) -> Result<()> {
    write_text(path.as_ref(), &doc.render()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minimize::{minimize, MinimizeConfig};
    use crate::tree::tree_entropy;

    fn bridge() -> Graph {
        Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap()
    }

    #[test]
    fn edge_list_examples() {
        let p = parse_edge_list("0 1\n1 2\n0 2").unwrap();
        assert_eq!(p.graph.num_vertices(), 3);
        assert_eq!(p.graph.edges(), &[(0, 1), (0, 2), (1, 2)]);

        let p = parse_edge_list("# comment\n5,9\n9,5").unwrap();
        assert_eq!(p.graph.edges(), &[(0, 1)]);
        assert_eq!(p.original_ids, vec![5, 9]);
        assert_eq!(p.graph.normalization().duplicates_collapsed, 1);

        match parse_edge_list("0 1\nx 2") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_edge_list(""), Err(Error::Input(_))));
        assert!(matches!(
            parse_edge_list("% only\n\n"),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            parse_edge_list("3\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("-1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn edge_list_extra_tokens_and_tabs() {
        let p = parse_edge_list("0\t1\t0.5\n 1 , 2 \n").unwrap();
        assert_eq!(p.graph.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = bridge();
        let back = parse_edge_list(&serialize_edge_list(&g)).unwrap().graph;
        assert_eq!(back.edges(), g.edges());
        assert_eq!(back.fingerprint(), g.fingerprint());
    }

    #[test]
    fn matrix_parsing() {
        let m = parse_matrix("# a\n1, 0\n0 1\n").unwrap();
        assert_eq!(m, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(matches!(
            parse_matrix("1 2\n3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_matrix("1 q\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(parse_matrix(""), Err(Error::Input(_))));
    }

    #[test]
    fn round12_digits() {
        assert_eq!(round12(1.0), 1.0);
        assert_eq!(round12(1.6995138503199656), 1.69951385032);
        assert_eq!(round12(-0.0001234567890123456), -0.000123456789012);
        assert_eq!(round12(0.0), 0.0);
    }

    #[test]
    fn k2_document() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let t = CodingTree::trivial(&g).unwrap();
        let text = serialize_tree(&g, &t, &tree_entropy(&g, &t).unwrap(), None).unwrap();
        let doc = TreeDocument::parse(&text).unwrap();
        assert_eq!(doc.nodes.len(), 3);
        assert!(text.contains("\"entropy_bits\": 1.0,"), "{text}");
        assert!(!text.contains("trace_summary"));
    }

    #[test]
    fn document_keys_are_sorted() {
        let g = bridge();
        let (t, trace) = minimize(&g, &MinimizeConfig::new(2)).unwrap();
        let text = serialize_tree(&g, &t, &tree_entropy(&g, &t).unwrap(), Some(&trace)).unwrap();
        let top: Vec<usize> = [
            "entropy_bits",
            "format_version",
            "graph_fingerprint",
            "height",
            "nodes",
            "trace_summary",
        ]
        .iter()
        .map(|k| text.find(&format!("\"{k}\"")).unwrap())
        .collect();
        assert!(top.windows(2).all(|w| w[0] < w[1]));
        let node_keys: Vec<usize> = [
            "\"children\"",
            "\"cut\"",
            "\"id\"",
            "\"leaf_vertex\"",
            "\"level\"",
            "\"parent\"",
            "\"volume\"",
        ]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
        assert!(node_keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bridge_document_round_trip() {
        let g = bridge();
        let (t, trace) = minimize(&g, &MinimizeConfig::new(2)).unwrap();
        let report = tree_entropy(&g, &t).unwrap();
        let text = serialize_tree(&g, &t, &report, Some(&trace)).unwrap();
        let doc = TreeDocument::parse(&text).unwrap();
        assert_eq!(doc.render().unwrap(), text);
        let back = doc.to_tree_for(&g).unwrap();
        assert_eq!(back, t);
        assert!(back.validate(&g).is_empty());
        assert_eq!(doc.trace_summary.as_ref().unwrap().combines, 4);
        assert_eq!(doc.entropy_bits, 1.69951385032);
        let again =
            serialize_tree(&g, &back, &tree_entropy(&g, &back).unwrap(), Some(&trace)).unwrap();
        assert_eq!(again, text);
    }

    #[test]
    fn invalid_tree_is_not_serialized() {
        let g = bridge();
        let other = Graph::new(6, &[(0, 1), (1, 2)]).unwrap();
        let t = CodingTree::trivial(&other).unwrap();
        let report = tree_entropy(&other, &t).unwrap();
        assert!(matches!(
            serialize_tree(&g, &t, &report, None),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn document_for_wrong_graph_is_rejected() {
        let g = bridge();
        let t = CodingTree::trivial(&g).unwrap();
        let text = serialize_tree(&g, &t, &tree_entropy(&g, &t).unwrap(), None).unwrap();
        let doc = TreeDocument::parse(&text).unwrap();
        let other = Graph::new(6, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            doc.to_tree_for(&other),
            Err(Error::Consistency(_))
        ));
        let bad = text.replace("\"format_version\": \"1\"", "\"format_version\": \"9\"");
        assert!(matches!(TreeDocument::parse(&bad), Err(Error::Format(_))));
    }

    fn write_fixture(dir: &Path, name: &str, a: &str, indicator: &str, labels: Option<&str>) {
        fs::write(dir.join(format!("{name}_A.txt")), a).unwrap();
        fs::write(dir.join(format!("{name}_graph_indicator.txt")), indicator).unwrap();
        if let Some(l) = labels {
            fs::write(dir.join(format!("{name}_graph_labels.txt")), l).unwrap();
        }
    }

    #[test]
    fn tudataset_two_graphs() {
        let dir = tempfile::tempdir().unwrap();
        // triangle on nodes 1..3, edge on nodes 4..5, both directions listed
        write_fixture(
            dir.path(),
            "TOY",
            "1, 2\n2, 1\n2, 3\n3, 2\n1, 3\n3, 1\n4, 5\n5, 4\n",
            "1\n1\n1\n2\n2\n",
            Some("1\n-1\n"),
        );
        fs::write(dir.path().join("TOY_node_labels.txt"), "0\n0\n1\n2\n2\n").unwrap();
        let b = parse_tudataset(dir.path(), "TOY").unwrap();
        assert_eq!(b.graphs.len(), 2);
        assert_eq!(b.graphs[0].num_vertices(), 3);
        assert_eq!(b.graphs[0].num_edges(), 3);
        assert_eq!(b.graphs[1].num_vertices(), 2);
        assert_eq!(b.labels, Some(vec![1, -1]));
        assert_eq!(b.node_ids, vec![vec![0, 1, 2], vec![3, 4]]);
        assert_eq!(b.metadata["node_labels"].len(), 5);
        let s = b.stats();
        assert_eq!(s.num_graphs, 2);
        assert_eq!(s.num_classes, Some(2));
        assert!((s.avg_nodes - 2.5).abs() < 1e-12);
        assert!((s.avg_edges - 2.0).abs() < 1e-12);
        assert!(b.warnings.is_empty());
        write_fixture(dir.path(), "REP", "1, 2\n2, 1\n1, 2\n", "1\n1\n", None);
        let b = parse_tudataset(dir.path(), "REP").unwrap();
        assert_eq!(
            b.warnings,
            vec!["collapsed 1 repeated edge entries".to_string()]
        );
    }

    #[test]
    fn tudataset_errors() {
        let dir = tempfile::tempdir().unwrap();
        write_fixture(dir.path(), "X", "1, 2\n2, 3\n", "1\n1\n2\n", None);
        match parse_tudataset(dir.path(), "X") {
            Err(Error::Format(m)) => assert!(m.contains("(2, 3)"), "{m}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_tudataset(dir.path(), "MISSING"),
            Err(Error::Io { .. })
        ));
        write_fixture(dir.path(), "Y", "1, 2\n", "1\n1\n", Some("0\n1\n"));
        assert!(matches!(
            parse_tudataset(dir.path(), "Y"),
            Err(Error::Format(_))
        ));
        write_fixture(dir.path(), "Z", "1, 1\n1, 2\n", "1\n1\n", None);
        let b = parse_tudataset(dir.path(), "Z").unwrap();
        assert_eq!(
            b.warnings,
            vec!["graph 1: dropped 1 self-loop(s)".to_string()]
        );
        assert!(b.labels.is_none());
    }
}
