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

//! Bottom-up feature aggregation over a minimized coding tree.

use std::collections::BTreeMap;

use setree::contrastive::{tree_aggregate, Identity, RandomProjection};
use setree::{minimize, Graph, MinimizeConfig};

fn main() -> setree::Result<()> {
    let g = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])?;
    let (t, _) = minimize(&g, &MinimizeConfig::new(2))?;
    let inputs: BTreeMap<usize, Vec<f64>> = (0..6)
        .map(|v| (v, vec![g.degree(v) as f64, if v < 3 { 1.0 } else { -1.0 }]))
        .collect();

    let summed = tree_aggregate(&t, &inputs, &Identity)?;
    for (level, nodes) in summed.per_level.iter().enumerate() {
        println!("level {level}: {nodes:?}");
    }

    let projected = tree_aggregate(&t, &inputs, &RandomProjection::new(2, 7))?;
    println!("projected root {:.4?}", projected.root());
    Ok(())
}
