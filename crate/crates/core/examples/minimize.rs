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

//! Greedy minimization at several heights, with the step trace.

use setree::minimize::{minimize_timed, StepKind};
use setree::{minimize, DropMode, Graph, MinimizeConfig};

fn main() -> setree::Result<()> {
    let g = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])?;
    let (t, trace) = minimize(&g, &MinimizeConfig::new(2))?;
    for step in &trace.steps {
        let verb = match step.kind {
            StepKind::Combine => "combine",
            StepKind::Drop => "drop",
            StepKind::Pad => "pad",
        };
        println!(
            "{verb:8} {:?} delta {:+.6} -> {:.6}",
            step.nodes, step.delta, step.entropy_after
        );
    }
    let modules: Vec<Vec<usize>> = t.children(t.root()).map(|c| t.leaves_under(c)).collect();
    println!("modules {modules:?}");

    // A larger graph: a ring of 8 cliques.
    let mut edges = Vec::new();
    for c in 0..8 {
        let base = c * 6;
        for u in 0..6 {
            for v in u + 1..6 {
                edges.push((base + u, base + v));
            }
        }
        edges.push((base, (base + 6) % 48));
    }
    let ring = Graph::new(48, &edges)?;
    for k in 2..=5 {
        for mode in [DropMode::Literal, DropMode::HeightAware] {
            let cfg = MinimizeConfig {
                drop_mode: mode,
                ..MinimizeConfig::new(k)
            };
            let (t, trace, timing) = minimize_timed(&ring, &cfg)?;
            println!(
                "k={k} {mode:?}: {:.4} bits, stage-1 height {}, final height {}, {:?}",
                trace.final_entropy,
                trace.stage1_height,
                t.height(),
                timing.stage1 + timing.stage2
            );
        }
    }
    Ok(())
}
