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

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use setree::flat::{flat_entropy, flat_minimize, FlatTree};
use setree::io::{
    parse_edge_list, parse_tudataset, read_tree_document, serialize_edge_list, serialize_tree,
    write_tree_document, TreeDocument,
};
use setree::{minimize, tree_entropy, CodingTree, Graph, MinimizeConfig};

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    // A path keeps every vertex in the edge list.
    edges.extend((1..n).map(|v| (v - 1, v)));
    Graph::new(n, &edges).unwrap()
}

#[test]
fn edge_lists_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let n = rng.random_range(2..30);
        let g = random_graph(&mut rng, n, 0.2);
        let back = parse_edge_list(&serialize_edge_list(&g)).unwrap().graph;
        assert_eq!(back.edges(), g.edges());
        assert_eq!(back.fingerprint(), g.fingerprint());
    }
}

#[test]
fn tree_documents_round_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..15 {
        let n = rng.random_range(3..40);
        let g = random_graph(&mut rng, n, 0.15);
        let (t, trace) = minimize(&g, &MinimizeConfig::new(2 + i % 3)).unwrap();
        let report = tree_entropy(&g, &t).unwrap();
        let doc = TreeDocument::new(&g, &t, &report, Some(&trace)).unwrap();
        let path = dir.path().join(format!("{i}.json"));
        write_tree_document(&path, &doc).unwrap();
        let read = read_tree_document(&path).unwrap();
        let back = read.to_tree_for(&g).unwrap();
        assert_eq!(back.to_nodes(), t.to_nodes());
        assert!((tree_entropy(&g, &back).unwrap().total - report.total).abs() < 1e-12);
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            serialize_tree(&g, &back, &report, Some(&trace)).unwrap()
        );
    }
}

#[test]
fn documents_for_another_graph_are_rejected() {
    let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let other = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
    let t = CodingTree::trivial(&g).unwrap();
    let text = serialize_tree(&g, &t, &tree_entropy(&g, &t).unwrap(), None).unwrap();
    let doc = TreeDocument::parse(&text).unwrap();
    assert!(doc.to_tree_for(&g).is_ok());
    assert!(doc.to_tree_for(&other).is_err());
    assert!(TreeDocument::parse(
        &text.replace("\"format_version\": \"1\"", "\"format_version\": \"9\"")
    )
    .is_err());
}

#[test]
fn flat_trees_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..15 {
        let n = rng.random_range(2..30);
        let g = random_graph(&mut rng, n, 0.2);
        let edges: Vec<[i64; 2]> = g
            .edges()
            .iter()
            .map(|&(u, v)| [u as i64, v as i64])
            .collect();
        let flat = flat_minimize(&edges, n, 3).unwrap();
        let t = flat.to_tree(&g).unwrap();
        assert!(t.height() <= 3);
        assert_eq!(FlatTree::from_tree(&g, &t).unwrap(), flat);
        let trivial = FlatTree::from_tree(&g, &CodingTree::trivial(&g).unwrap()).unwrap();
        assert!((trivial.entropy_bits - flat_entropy(&edges, n).unwrap()).abs() < 1e-12);
        assert!(flat.entropy_bits <= trivial.entropy_bits + 1e-12);
    }
}

#[test]
fn tudataset_fixture_parses() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/tudataset/TOY");
    let bundle = parse_tudataset(&dir, "TOY").unwrap();
    assert_eq!(bundle.graphs.len(), 3);
    assert_eq!(bundle.labels.as_deref(), Some(&[1, -1, 1][..]));
    assert!(bundle.warnings.is_empty());
    let sizes: Vec<(usize, usize)> = bundle
        .graphs
        .iter()
        .map(|g| (g.num_vertices(), g.num_edges()))
        .collect();
    assert_eq!(sizes, vec![(3, 3), (4, 3), (2, 1)]);
    assert_eq!(bundle.node_ids[1], vec![3, 4, 5, 6]);
    let stats = bundle.stats();
    assert_eq!(stats.num_classes, Some(2));
    assert!((stats.avg_nodes - 3.0).abs() < 1e-12);
}
