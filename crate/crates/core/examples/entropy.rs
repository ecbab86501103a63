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

//! One-dimensional entropy and the entropy of a hand-built two-level tree.

use setree::{one_dim_entropy, tree_entropy, CodingTree, Graph};

fn main() -> setree::Result<()> {
    // Two triangles joined by the edge 2-3.
    let g = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])?;
    println!("H1 = {:.6} bits", one_dim_entropy(&g)?);

    let mut t = CodingTree::trivial(&g)?;
    let leaves: Vec<_> = t.children(t.root()).collect();
    let (left, d1) = t.combine(&g, leaves[0], leaves[1])?;
    let (_, d2) = t.combine(&g, left, leaves[2])?;
    println!("after two combines: delta {d1:.6} then {d2:.6}");

    let report = tree_entropy(&g, &t)?;
    println!(
        "tree entropy = {:.6} bits, height {}",
        report.total,
        t.height()
    );
    for (id, h) in &report.per_node {
        if *h != 0.0 {
            println!("  node {id}: {h:.6}");
        }
    }
    Ok(())
}
