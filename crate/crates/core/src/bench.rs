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

//! Synthetic graph generators and the timing and community-recovery
//! harnesses built on them.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::minimize::{minimize, minimize_timed, MinimizeConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum Family {
    /// G(n, p).
    UniformRandom { p: f64 },
    /// Each new vertex attaches to `degree` distinct earlier vertices with
    /// probability proportional to their degree.
    PreferentialAttachment { degree: usize },
    /// Contiguous blocks of near-equal size; pairs inside a block are linked
    /// with `p_in`, pairs across blocks with `p_out`.
    PlantedPartition {
        blocks: usize,
        p_in: f64,
        p_out: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    /// Block of each vertex, for planted-partition graphs.
    pub blocks: Option<Vec<usize>>,
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be in [0, 1], got {p}")))
    }
}

/// Number of failures before the next success of a Bernoulli(p) sequence.
fn skip(rng: &mut ChaCha8Rng, p: f64) -> u64 {
    if p >= 1.0 {
        return 0;
    }
    let r: f64 = rng.random();
    ((1.0 - r).ln() / (1.0 - p).ln())
        .floor()
        .min(u64::MAX as f64 / 2.0) as u64
}

/// Visits each pair `u < v` of `0..n` independently with probability `p`.
fn sample_pairs(rng: &mut ChaCha8Rng, n: usize, p: f64, mut emit: impl FnMut(usize, usize)) {
    if p <= 0.0 || n < 2 {
        return;
    }
    // Walk the rows v = 1..n, columns u = 0..v.
    let (mut v, mut u) = (1usize, 0u64);
    loop {
        u += skip(rng, p);
        while u >= v as u64 {
            u -= v as u64;
            v += 1;
            if v >= n {
                return;
            }
        }
        emit(u as usize, v);
        u += 1;
    }
}

/// Visits each pair of `0..a x 0..b` independently with probability `p`.
fn sample_grid(
    rng: &mut ChaCha8Rng,
    a: usize,
    b: usize,
    p: f64,
    mut emit: impl FnMut(usize, usize),
) {
    if p <= 0.0 || a == 0 || b == 0 {
        return;
    }
    let total = (a as u64) * (b as u64);
    let mut at = skip(rng, p);
    while at < total {
        emit((at / b as u64) as usize, (at % b as u64) as usize);
        at += 1 + skip(rng, p);
    }
}

/// Block sizes for `n` vertices in `blocks` contiguous blocks; the first
/// `n % blocks` blocks get one extra vertex.
pub fn block_sizes(n: usize, blocks: usize) -> Vec<usize> {
    (0..blocks)
        .map(|b| n / blocks + usize::from(b < n % blocks))
        .collect()
}

pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::Config("generator needs at least one vertex".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::new();
    let mut blocks = None;
    match spec.family {
        Family::UniformRandom { p } => {
            check_probability("p", p)?;
            sample_pairs(&mut rng, n, p, |u, v| edges.push((u, v)));
        }
        Family::PreferentialAttachment { degree } => {
            if degree == 0 || degree >= n {
                return Err(Error::Config(format!(
                    "attachment degree must be in 1..{n}, got {degree}"
                )));
            }
            // Seed clique on degree + 1 vertices, then one endpoint list
            // entry per edge end.
            let mut ends = Vec::new();
            for v in 0..=degree {
                for u in 0..v {
                    edges.push((u, v));
                    ends.extend([u, v]);
                }
            }
            let mut picked = Vec::with_capacity(degree);
            for v in degree + 1..n {
                picked.clear();
                while picked.len() < degree {
                    let u = ends[rng.random_range(0..ends.len())];
                    if !picked.contains(&u) {
                        picked.push(u);
                    }
                }
                for &u in &picked {
                    edges.push((u, v));
                    ends.extend([u, v]);
                }
            }
        }
        Family::PlantedPartition {
            blocks: count,
            p_in,
            p_out,
        } => {
            check_probability("p_in", p_in)?;
            check_probability("p_out", p_out)?;
            if count == 0 || count > n {
                return Err(Error::Config(format!(
                    "block count must be in 1..={n}, got {count}"
                )));
            }
            let sizes = block_sizes(n, count);
            let starts: Vec<usize> = sizes
                .iter()
                .scan(0, |acc, &s| {
                    let start = *acc;
                    *acc += s;
                    Some(start)
                })
                .collect();
            for (a, (&sa, &size_a)) in starts.iter().zip(&sizes).enumerate() {
                sample_pairs(&mut rng, size_a, p_in, |u, v| edges.push((sa + u, sa + v)));
                for (&sb, &size_b) in starts.iter().zip(&sizes).skip(a + 1) {
                    sample_grid(&mut rng, size_a, size_b, p_out, |u, v| {
                        edges.push((sa + u, sb + v))
                    });
                }
            }
            blocks = Some(
                sizes
                    .iter()
                    .enumerate()
                    .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
                    .collect(),
            );
        }
    }
    Ok(Generated {
        graph: Graph::new(n, &edges)?,
        blocks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    UniformRandom,
    PreferentialAttachment,
    PlantedPartition,
}

impl FamilyKind {
    /// Family instance on `n` vertices with about `average_degree`.
    pub fn with_average_degree(self, n: usize, average_degree: f64) -> Family {
        let p = (average_degree / (n.max(2) - 1) as f64).min(1.0);
        match self {
            FamilyKind::UniformRandom => Family::UniformRandom { p },
            FamilyKind::PreferentialAttachment => Family::PreferentialAttachment {
                degree: ((average_degree / 2.0).round() as usize).clamp(1, n.max(2) - 1),
            },
            FamilyKind::PlantedPartition => {
                // Four blocks, 80% of each vertex's expected degree inside its block.
                let blocks = 4.min(n);
                let inside = (n / blocks).max(2) - 1;
                let outside = (n - n / blocks).max(1);
                Family::PlantedPartition {
                    blocks,
                    p_in: (0.8 * average_degree / inside as f64).min(1.0),
                    p_out: (0.2 * average_degree / outside as f64).min(1.0),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub family: FamilyKind,
    /// Vertex counts, ascending.
    pub sizes: Vec<usize>,
    pub average_degree: f64,
    pub height_k: usize,
    pub repeats: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub m: usize,
    pub stage1_ms: f64,
    pub stage2_ms: f64,
    pub total_ms: f64,
    /// Height of the tree after stage 1.
    pub h_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// Least-squares slope of ln(total_ms) against ln(m); `None` with fewer
    /// than two distinct edge counts.
    pub fit_exponent: Option<f64>,
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / 2.0
    }
}

/// Least-squares slope of `y` on `x`.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (points.len() >= 2 && sxx > 0.0).then(|| sxy / sxx)
}

/// Times `minimize` at each size (median of `repeats` runs on one generated
/// graph per size) and fits the log-log slope of time against edges.
pub fn scaling_run(cfg: &ScalingConfig) -> Result<ScalingReport> {
    if cfg.repeats == 0 {
        return Err(Error::Config("repeats must be at least 1".into()));
    }
    if cfg.sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Config("sizes must be ascending".into()));
    }
    let mcfg = MinimizeConfig::new(cfg.height_k);
    mcfg.validate()?;
    let mut rows = Vec::new();
    for (i, &n) in cfg.sizes.iter().enumerate() {
        let spec = GeneratorSpec {
            family: cfg.family.with_average_degree(n, cfg.average_degree),
            n,
            seed: cfg.seed.wrapping_add(i as u64),
        };
        let g = generate(&spec)?.graph;
        let (mut s1, mut s2, mut total) = (Vec::new(), Vec::new(), Vec::new());
        let mut h_max = 0;
        for _ in 0..cfg.repeats {
            let start = Instant::now();
            let (_, trace, timings) = minimize_timed(&g, &mcfg)?;
            total.push(start.elapsed().as_secs_f64() * 1e3);
            s1.push(timings.stage1.as_secs_f64() * 1e3);
            s2.push(timings.stage2.as_secs_f64() * 1e3);
            h_max = trace.stage1_height;
        }
        log::info!(
            "scaling n={n} m={} total={:.1}ms",
            g.num_edges(),
            median(&mut total)
        );
        rows.push(ScalingRow {
            n,
            m: g.num_edges(),
            stage1_ms: median(&mut s1),
            stage2_ms: median(&mut s2),
            total_ms: median(&mut total),
            h_max,
        });
    }
    rows.sort_by_key(|r| r.m);
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.m > 0 && r.total_ms > 0.0)
        .map(|r| ((r.m as f64).ln(), r.total_ms.ln()))
        .collect();
    Ok(ScalingReport {
        fit_exponent: fit_slope(&points),
        rows,
    })
}

/// Largest block count [`agreement`] accepts.
pub const AGREEMENT_BLOCK_CAP: usize = 16;

/// Fraction of vertices whose found module maps to their planted block
/// under the best one-to-one matching of modules to blocks.
pub fn agreement(found: &[usize], planted: &[usize]) -> Result<f64> {
    if found.len() != planted.len() || found.is_empty() {
        return Err(Error::Input(
            "assignments must be non-empty and of equal length".into(),
        ));
    }
    let blocks = planted.iter().max().unwrap() + 1;
    if blocks > AGREEMENT_BLOCK_CAP {
        return Err(Error::Size {
            what: "planted block count",
            actual: blocks,
            cap: AGREEMENT_BLOCK_CAP,
        });
    }
    let modules = found.iter().max().unwrap() + 1;
    let mut overlap = vec![vec![0usize; blocks]; modules];
    for (&f, &p) in found.iter().zip(planted) {
        overlap[f][p] += 1;
    }
    // best[mask]: largest matched count using the blocks in mask.
    let mut best = vec![0usize; 1 << blocks];
    for row in &overlap {
        for mask in (0..1usize << blocks).rev() {
            for (b, &c) in row.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    best[mask] = best[mask].max(best[mask ^ 1 << b] + c);
                }
            }
        }
    }
    Ok(*best.iter().max().unwrap() as f64 / found.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub agreements: Vec<f64>,
    pub mean_agreement: f64,
}

/// Minimizes at height 2 on planted-partition graphs, one per seed, and
/// scores the level-1 modules against the planted blocks.
pub fn recovery_run(
    blocks: usize,
    p_in: f64,
    p_out: f64,
    n: usize,
    seeds: &[u64],
) -> Result<RecoveryReport> {
    if p_in < p_out {
        return Err(Error::Config(format!(
            "p_in ({p_in}) is below p_out ({p_out})"
        )));
    }
    if seeds.is_empty() {
        return Err(Error::Config("at least one seed is required".into()));
    }
    let mut agreements = Vec::new();
    for &seed in seeds {
        let gen = generate(&GeneratorSpec {
            family: Family::PlantedPartition {
                blocks,
                p_in,
                p_out,
            },
            n,
            seed,
        })?;
        let (t, _) = minimize(&gen.graph, &MinimizeConfig::new(2))?;
        let mut found = vec![0; n];
        for (m, module) in t.children(t.root()).enumerate() {
            for v in t.leaves_under(module) {
                found[v] = m;
            }
        }
        agreements.push(agreement(&found, gen.blocks.as_deref().expect("planted"))?);
    }
    let mean_agreement = agreements.iter().sum::<f64>() / agreements.len() as f64;
    Ok(RecoveryReport {
        agreements,
        mean_agreement,
    })
}
