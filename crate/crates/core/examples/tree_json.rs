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

//! Writes a minimized tree as a canonical JSON document and reads it back.

use setree::io::{serialize_tree, TreeDocument};
use setree::{minimize, tree_entropy, Graph, MinimizeConfig};

fn main() -> setree::Result<()> {
    let g = Graph::new(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])?;
    let (t, trace) = minimize(&g, &MinimizeConfig::new(2))?;
    let report = tree_entropy(&g, &t)?;
    let text = serialize_tree(&g, &t, &report, Some(&trace))?;
    print!("{text}");

    let back = TreeDocument::parse(&text)?.to_tree_for(&g)?;
    assert_eq!(back.to_nodes(), t.to_nodes());
    assert_eq!(serialize_tree(&g, &back, &report, Some(&trace))?, text);
    println!("round trip ok");
    Ok(())
}
