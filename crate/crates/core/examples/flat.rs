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

//! Trees as parallel integer arrays, the shape handed to other languages.

use setree::flat::{flat_entropy, flat_minimize};

fn main() -> setree::Result<()> {
    let edges = [[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5], [2, 3]];
    println!("H1 = {:.6}", flat_entropy(&edges, 6)?);
    let flat = flat_minimize(&edges, 6, 2)?;
    println!("parent      {:?}", flat.parent);
    println!("level       {:?}", flat.level);
    println!("leaf_vertex {:?}", flat.leaf_vertex);
    println!("entropy     {:.6}", flat.entropy_bits);
    Ok(())
}
