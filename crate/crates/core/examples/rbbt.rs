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

//! Random balanced binary trees against the greedy minimizer.

use setree::bench::{generate, Family, GeneratorSpec};
use setree::{minimize, rbbt, tree_entropy, MinimizeConfig};

fn main() -> setree::Result<()> {
    let g = generate(&GeneratorSpec {
        family: Family::PlantedPartition {
            blocks: 2,
            p_in: 0.9,
            p_out: 0.05,
        },
        n: 40,
        seed: 3,
    })?
    .graph;
    for k in 2..=4 {
        let greedy = minimize(&g, &MinimizeConfig::new(k))?.1.final_entropy;
        let random: Vec<f64> = (0..50)
            .map(|s| Ok(tree_entropy(&g, &rbbt(&g, k, s)?)?.total))
            .collect::<setree::Result<_>>()?;
        let mean = random.iter().sum::<f64>() / random.len() as f64;
        let best = random.iter().copied().fold(f64::INFINITY, f64::min);
        println!("k={k}: greedy {greedy:.4}, random mean {mean:.4}, best of 50 {best:.4}");
    }
    Ok(())
}
