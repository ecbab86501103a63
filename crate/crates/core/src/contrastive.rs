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

//! NT-Xent contrastive loss and parameter-free bottom-up aggregation over a
//! coding tree.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{CodingTree, NodeId};

/// Which terms the NT-Xent denominator sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DenominatorMode {
    /// All `j`, including the positive pair.
    #[default]
    Standard,
    /// All `j != i`: the positive pair is excluded from the denominator.
    ExcludePositive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingBatch {
    pub view1: Vec<Vec<f64>>,
    pub view2: Vec<Vec<f64>>,
    pub temperature: f64,
    pub mode: DenominatorMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NtXentLoss {
    pub per_sample: Vec<f64>,
    pub mean: f64,
}

pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Domain(format!(
            "vectors have different lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::Domain("cosine similarity of a zero vector".into()));
    }
    Ok((dot / (na * nb)).clamp(-1.0, 1.0))
}

impl EmbeddingBatch {
    pub fn new(view1: Vec<Vec<f64>>, view2: Vec<Vec<f64>>, temperature: f64) -> Self {
        EmbeddingBatch {
            view1,
            view2,
            temperature,
            mode: DenominatorMode::Standard,
        }
    }

    pub fn with_mode(mut self, mode: DenominatorMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn len(&self) -> usize {
        self.view1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.view1.is_empty()
    }

    fn check(&self) -> Result<()> {
        let n = self.view1.len();
        if n != self.view2.len() {
            return Err(Error::Input(format!(
                "views have {} and {} rows",
                n,
                self.view2.len()
            )));
        }
        if n < 2 {
            return Err(Error::Input("a batch needs at least two samples".into()));
        }
        let d = self.view1[0].len();
        if self
            .view1
            .iter()
            .chain(&self.view2)
            .any(|row| row.len() != d)
        {
            return Err(Error::Input(
                "all embeddings must have the same dimension".into(),
            ));
        }
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(Error::Input(format!(
                "temperature must be positive, got {}",
                self.temperature
            )));
        }
        Ok(())
    }

    /// `sim(view1[i], view2[j]) / temperature` for all `i, j`.
    pub fn logits(&self) -> Result<Vec<Vec<f64>>> {
        self.check()?;
        self.view1
            .iter()
            .map(|a| {
                self.view2
                    .iter()
                    .map(|b| Ok(cosine_similarity(a, b)? / self.temperature))
                    .collect()
            })
            .collect()
    }
}

/// Per-sample and mean NT-Xent loss, `L_i = -s_ii + log sum_j exp(s_ij)`
/// with `s = logits()`. The log-sum-exp subtracts the row maximum first.
pub fn ntxent_loss(batch: &EmbeddingBatch) -> Result<NtXentLoss> {
    let logits = batch.logits()?;
    let per_sample: Vec<f64> = logits
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let terms = row
                .iter()
                .enumerate()
                .filter(|&(j, _)| batch.mode == DenominatorMode::Standard || j != i)
                .map(|(_, &s)| s);
            let max = terms.clone().fold(f64::NEG_INFINITY, f64::max);
            let lse = max + terms.map(|s| (s - max).exp()).sum::<f64>().ln();
            lse - row[i]
        })
        .collect();
    let mean = per_sample.iter().sum::<f64>() / per_sample.len() as f64;
    Ok(NtXentLoss { per_sample, mean })
}

/// A per-level map applied after summing child features.
pub trait LevelTransform {
    /// `level` is the depth of the node whose feature is being produced.
    fn apply(&self, level: usize, summed: Vec<f64>) -> Result<Vec<f64>>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl LevelTransform for Identity {
    fn apply(&self, _level: usize, summed: Vec<f64>) -> Result<Vec<f64>> {
        Ok(summed)
    }
}

/// Fixed square random matrix per level, entries uniform in
/// `[-1, 1] / sqrt(dim)`, drawn from a generator seeded by `(seed, level)`.
#[derive(Debug, Clone)]
pub struct RandomProjection {
    dim: usize,
    seed: u64,
}

impl RandomProjection {
    pub fn new(dim: usize, seed: u64) -> Self {
        RandomProjection { dim, seed }
    }

    pub fn matrix(&self, level: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(level as u64);
        let scale = 1.0 / (self.dim.max(1) as f64).sqrt();
        (0..self.dim)
            .map(|_| {
                (0..self.dim)
                    .map(|_| rng.random_range(-1.0..=1.0) * scale)
                    .collect()
            })
            .collect()
    }
}

impl LevelTransform for RandomProjection {
    fn apply(&self, level: usize, summed: Vec<f64>) -> Result<Vec<f64>> {
        if summed.len() != self.dim {
            return Err(Error::Domain(format!(
                "projection expects dimension {}, got {}",
                self.dim,
                summed.len()
            )));
        }
        Ok(self
            .matrix(level)
            .iter()
            .map(|row| row.iter().zip(&summed).map(|(w, x)| w * x).sum())
            .collect())
    }
}

/// Features of every node, grouped by depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeFeatures {
    pub per_level: Vec<BTreeMap<NodeId, Vec<f64>>>,
    pub leaf_input: BTreeMap<usize, Vec<f64>>,
}

impl TreeFeatures {
    /// The tree-level representation: the root's feature.
    pub fn root(&self) -> &[f64] {
        self.per_level[0].values().next().expect("root feature")
    }
}

/// Bottom-up aggregation: leaves take `leaf_input[vertex]`; every internal
/// node takes `transform(level, sum of its children's features)`, deepest
/// level first.
pub fn tree_aggregate(
    t: &CodingTree,
    leaf_input: &BTreeMap<usize, Vec<f64>>,
    transform: &dyn LevelTransform,
) -> Result<TreeFeatures> {
    let mut by_level: Vec<Vec<NodeId>> = Vec::new();
    for id in t.node_ids() {
        let level = t.level(id);
        if by_level.len() <= level {
            by_level.resize(level + 1, Vec::new());
        }
        by_level[level].push(id);
    }
    let mut per_level: Vec<BTreeMap<NodeId, Vec<f64>>> = vec![BTreeMap::new(); by_level.len()];
    let mut features: BTreeMap<NodeId, Vec<f64>> = BTreeMap::new();
    for (level, ids) in by_level.iter().enumerate().rev() {
        for &id in ids {
            let x = if t.is_leaf(id) {
                let v = t
                    .leaf_vertex(id)
                    .ok_or_else(|| Error::Input(format!("leaf {id} has no vertex")))?;
                leaf_input
                    .get(&v)
                    .cloned()
                    .ok_or_else(|| Error::Input(format!("no input feature for vertex {v}")))?
            } else {
                let mut sum: Option<Vec<f64>> = None;
                for c in t.children(id) {
                    let child = &features[&c];
                    match sum.as_mut() {
                        None => sum = Some(child.clone()),
                        Some(acc) if acc.len() == child.len() => {
                            acc.iter_mut().zip(child).for_each(|(a, b)| *a += b)
                        }
                        Some(acc) => {
                            return Err(Error::Input(format!(
                                "children of {id} carry features of dimension {} and {}",
                                acc.len(),
                                child.len()
                            )))
                        }
                    }
                }
                transform.apply(level, sum.expect("internal node has children"))?
            };
            per_level[level].insert(id, x.clone());
            features.insert(id, x);
        }
    }
    Ok(TreeFeatures {
        per_level,
        leaf_input: leaf_input.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::minimize::{minimize, MinimizeConfig};
    use proptest::prelude::*;

    /// Direct evaluation without max-subtraction.
    fn naive_loss(batch: &EmbeddingBatch) -> Vec<f64> {
        let s = batch.logits().unwrap();
        (0..s.len())
            .map(|i| {
                let denom: f64 = (0..s.len())
                    .filter(|&j| batch.mode == DenominatorMode::Standard || j != i)
                    .map(|j| s[i][j].exp())
                    .sum();
                -(s[i][i].exp() / denom).ln()
            })
            .collect()
    }

    fn orthogonal_fixture() -> EmbeddingBatch {
        EmbeddingBatch::new(
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            1.0,
        )
    }

    #[test]
    fn cosine_examples() {
        let v = [0.3, -1.2, 2.0];
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        assert!((cosine_similarity(&v, &v).unwrap() - 1.0).abs() < 1e-15);
        assert!((cosine_similarity(&v, &neg).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(cosine_similarity(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert!(matches!(
            cosine_similarity(&[0.0, 0.0], &[1.0, 0.0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn excluded_positive_fixture() {
        let loss =
            ntxent_loss(&orthogonal_fixture().with_mode(DenominatorMode::ExcludePositive)).unwrap();
        assert!((loss.per_sample[0] - (-1.0)).abs() < 1e-12);
    }

    #[test]
    fn standard_denominator_fixture() {
        let loss = ntxent_loss(&orthogonal_fixture()).unwrap();
        assert!((loss.per_sample[0] - 0.3132616875182228).abs() < 1e-12);
    }

    #[test]
    fn identical_embeddings_give_log_two() {
        let row = vec![0.5, 0.5, 0.1];
        let batch = EmbeddingBatch::new(vec![row.clone(); 2], vec![row; 2], 1.0);
        let loss = ntxent_loss(&batch).unwrap();
        for l in &loss.per_sample {
            assert!((l - std::f64::consts::LN_2).abs() < 1e-12);
        }
        assert!((loss.mean - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_batches() {
        let one = EmbeddingBatch::new(vec![vec![1.0]], vec![vec![1.0]], 1.0);
        assert!(matches!(ntxent_loss(&one), Err(Error::Input(_))));
        let ragged = EmbeddingBatch::new(vec![vec![1.0]; 2], vec![vec![1.0]; 3], 1.0);
        assert!(ntxent_loss(&ragged).is_err());
        let cold = EmbeddingBatch::new(vec![vec![1.0]; 2], vec![vec![1.0]; 2], 0.0);
        assert!(ntxent_loss(&cold).is_err());
    }

    #[test]
    fn loss_falls_as_positive_pair_aligns() {
        let mut last = f64::INFINITY;
        for step in 0..10 {
            let angle = 1.5 - step as f64 * 0.15;
            let batch = EmbeddingBatch::new(
                vec![vec![1.0, 0.0], vec![0.2, 1.0], vec![-1.0, 0.3]],
                vec![
                    vec![angle.cos(), angle.sin()],
                    vec![0.3, 1.0],
                    vec![-1.0, -0.2],
                ],
                0.5,
            );
            let l = ntxent_loss(&batch).unwrap().per_sample[0];
            assert!(l < last);
            last = l;
        }
    }

    fn arb_batch() -> impl Strategy<Value = EmbeddingBatch> {
        (2usize..6, 1usize..5).prop_flat_map(|(n, d)| {
            let row = || {
                proptest::collection::vec(0.1f64..1.0, d).prop_map(|mut v| {
                    v[0] += 0.5;
                    v
                })
            };
            let signed = move || {
                (
                    proptest::collection::vec(row(), n),
                    proptest::collection::vec(any::<bool>(), n * d),
                )
                    .prop_map(move |(mut rows, signs)| {
                        for (k, s) in signs.into_iter().enumerate() {
                            if s {
                                rows[k / d][k % d] *= -1.0;
                            }
                        }
                        rows
                    })
            };
            (signed(), signed(), 0.034f64..2.0, any::<bool>()).prop_map(|(a, b, tau, literal)| {
                EmbeddingBatch::new(a, b, tau).with_mode(if literal {
                    DenominatorMode::ExcludePositive
                } else {
                    DenominatorMode::Standard
                })
            })
        })
    }

    proptest! {
        #[test]
        fn scale_invariance(batch in arb_batch(), scale in 0.01f64..100.0) {
            let base = ntxent_loss(&batch).unwrap();
            let scaled = EmbeddingBatch {
                view1: batch.view1.iter().map(|r| r.iter().map(|x| x * scale).collect()).collect(),
                view2: batch.view2.iter().map(|r| r.iter().map(|x| x * scale).collect()).collect(),
                ..batch.clone()
            };
            let other = ntxent_loss(&scaled).unwrap();
            for (a, b) in base.per_sample.iter().zip(&other.per_sample) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        #[test]
        fn stabilized_matches_naive(batch in arb_batch()) {
            let stable = ntxent_loss(&batch).unwrap();
            for (a, b) in stable.per_sample.iter().zip(naive_loss(&batch)) {
                prop_assert!((a - b).abs() < 1e-6, "{} vs {}", a, b);
            }
        }
    }

    fn bridge_tree() -> (Graph, CodingTree) {
        let g = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap();
        let (t, _) = minimize(&g, &MinimizeConfig::new(2)).unwrap();
        (g, t)
    }

    #[test]
    fn scalar_ones_sum_to_vertex_count() {
        let (_, t) = bridge_tree();
        let input = (0..6).map(|v| (v, vec![1.0])).collect();
        let f = tree_aggregate(&t, &input, &Identity).unwrap();
        assert_eq!(f.root(), &[6.0]);
        assert_eq!(f.per_level.len(), 3);
        assert_eq!(f.per_level[1].len(), 2);
        assert_eq!(f.per_level[2].len(), 6);
    }

    #[test]
    fn degree_histogram_at_root() {
        let (g, t) = bridge_tree();
        let input = (0..6)
            .map(|v| {
                (
                    v,
                    if g.degree(v) == 2 {
                        vec![1.0, 0.0]
                    } else {
                        vec![0.0, 1.0]
                    },
                )
            })
            .collect();
        let f = tree_aggregate(&t, &input, &Identity).unwrap();
        assert_eq!(f.root(), &[4.0, 2.0]);
    }

    #[test]
    fn missing_leaf_feature() {
        let (_, t) = bridge_tree();
        let input = (0..5).map(|v| (v, vec![1.0])).collect();
        assert!(matches!(
            tree_aggregate(&t, &input, &Identity),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn child_order_does_not_matter() {
        let (g, t) = bridge_tree();
        let mut nodes = t.to_nodes();
        for n in &mut nodes {
            n.children.reverse();
        }
        let flipped = CodingTree::from_nodes(t.root(), &nodes, g.fingerprint(), 6, 14).unwrap();
        assert!(flipped.validate(&g).is_empty());
        let input: BTreeMap<usize, Vec<f64>> = (0..6)
            .map(|v| (v, vec![v as f64 * 0.37 - 1.0, 2.0, 0.5]))
            .collect();
        let proj = RandomProjection::new(3, 9);
        let a = tree_aggregate(&t, &input, &proj).unwrap();
        let b = tree_aggregate(&flipped, &input, &proj).unwrap();
        for (x, y) in a.root().iter().zip(b.root()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_conserves_componentwise_sum() {
        use crate::minimize::rbbt;
        let g = Graph::new(9, &[(0, 1), (2, 3), (4, 5), (6, 7), (7, 8)]).unwrap();
        let t = rbbt(&g, 3, 5).unwrap();
        let input: BTreeMap<usize, Vec<f64>> = (0..9).map(|v| (v, vec![v as f64, 1.0])).collect();
        let f = tree_aggregate(&t, &input, &Identity).unwrap();
        assert_eq!(f.root(), &[36.0, 9.0]);
    }

    #[test]
    fn projection_is_deterministic() {
        assert_eq!(
            RandomProjection::new(4, 1).matrix(2),
            RandomProjection::new(4, 1).matrix(2)
        );
        assert_ne!(
            RandomProjection::new(4, 1).matrix(2),
            RandomProjection::new(4, 1).matrix(3)
        );
        assert!(RandomProjection::new(4, 1).apply(0, vec![1.0; 3]).is_err());
    }
}
