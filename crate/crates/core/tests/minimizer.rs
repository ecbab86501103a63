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

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use setree::bench::{generate, Family, GeneratorSpec};
use setree::minimize::StepKind;
use setree::oracle::{hierarchy_tree, optimal_heightk};
use setree::{minimize, one_dim_entropy, rbbt, tree_entropy, DropMode, Graph, MinimizeConfig};

fn graphs() -> Vec<Graph> {
    let mut out = Vec::new();
    for (i, family) in [
        Family::UniformRandom { p: 0.08 },
        Family::PreferentialAttachment { degree: 2 },
        Family::PlantedPartition {
            blocks: 3,
            p_in: 0.5,
            p_out: 0.02,
        },
    ]
    .into_iter()
    .enumerate()
    {
        for seed in 0..6 {
            let n = 20 + 15 * seed as usize;
            out.push(
                generate(&GeneratorSpec {
                    family,
                    n,
                    seed: seed + 100 * i as u64,
                })
                .unwrap()
                .graph,
            );
        }
    }
    out
}

#[test]
fn every_configuration_yields_a_valid_tree_within_the_bound() {
    for g in graphs() {
        for k in 2..=5 {
            for drop_mode in [DropMode::Literal, DropMode::HeightAware] {
                for pad in [true, false] {
                    let cfg = MinimizeConfig {
                        height_k: k,
                        pad_to_exact_height: pad,
                        drop_mode,
                        seed: 0,
                    };
                    let (t, trace) = minimize(&g, &cfg).unwrap();
                    assert!(t.validate(&g).is_empty(), "{:?}", t.validate(&g));
                    if pad {
                        assert_eq!(t.height(), k);
                    } else {
                        assert!(t.height() <= k);
                    }
                    let e = tree_entropy(&g, &t).unwrap().total;
                    assert!((e - trace.final_entropy).abs() < 1e-9);
                    assert!(e <= one_dim_entropy(&g).unwrap() + 1e-9);
                }
            }
        }
    }
}

#[test]
fn trace_deltas_have_the_right_signs_and_sum() {
    for g in graphs() {
        let (_, trace) = minimize(&g, &MinimizeConfig::new(3)).unwrap();
        let mut seen_drop = false;
        for s in &trace.steps {
            match s.kind {
                StepKind::Combine => {
                    assert!(!seen_drop, "combines come before drops");
                    assert!(s.delta <= 1e-12);
                }
                StepKind::Drop => {
                    seen_drop = true;
                    assert!(s.delta >= -1e-12);
                }
                StepKind::Pad => assert!(s.delta.abs() < 1e-12),
            }
        }
        let sum: f64 = trace.steps.iter().map(|s| s.delta).sum();
        assert!((trace.initial_entropy + sum - trace.final_entropy).abs() < 1e-9);
    }
}

#[test]
fn minimizer_is_deterministic() {
    for g in graphs().into_iter().take(6) {
        let a = minimize(&g, &MinimizeConfig::new(3)).unwrap();
        let b = minimize(&g, &MinimizeConfig::new(3)).unwrap();
        assert_eq!(a.0.to_nodes(), b.0.to_nodes());
        assert_eq!(a.1, b.1);
    }
}

#[test]
fn baseline_trees_are_valid_and_balanced() {
    for g in graphs() {
        for seed in 0..3 {
            let t = rbbt(&g, 3, seed).unwrap();
            assert!(t.validate(&g).is_empty());
            assert!(t.height() <= 3);
        }
    }
}

#[test]
fn oracle_hierarchies_are_valid_trees_below_greedy() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..12 {
        let n = rng.random_range(3..=7);
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(0.3) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, &edges).unwrap();
        for k in 2..=3 {
            let r = optimal_heightk(&g, k).unwrap();
            let t = hierarchy_tree(&g, &r.hierarchy, k).unwrap();
            assert!(t.validate(&g).is_empty());
            assert_eq!(t.height(), k);
            assert!((tree_entropy(&g, &t).unwrap().total - r.optimal_entropy).abs() < 1e-9);
            assert!(r.optimal_entropy <= r.greedy_entropy + 1e-12);
        }
    }
}

#[test]
fn graphs_without_edges_are_degenerate() {
    let g = Graph::new(4, &[]).unwrap();
    let (t, trace) = minimize(&g, &MinimizeConfig::new(2)).unwrap();
    assert!(t.validate(&g).is_empty());
    assert_eq!(trace.final_entropy, 0.0);
    assert!(tree_entropy(&g, &t).unwrap().degenerate);
}
