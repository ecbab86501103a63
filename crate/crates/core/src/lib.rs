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

//! Structural entropy of undirected graphs over coding trees, and greedy
//! construction of low-entropy coding trees of a fixed height.
//!
//! The crate is organised around a handful of modules:
//!
//! * [`graph`]: immutable simple graphs with degree, volume and cut queries.
//! * [`tree`]: coding trees, their entropy, and the COMBINE / DROP rewrites.
//! * [`minimize`]: the two-stage greedy minimizer and the random balanced
//!   baseline.
//! * [`oracle`]: exhaustive search over small graphs.
//! * [`contrastive`]: NT-Xent loss and bottom-up tree aggregation.
//! * [`io`]: edge lists, TUDataset directories, tree JSON documents.
//! * [`bench`]: synthetic generators and the scaling/recovery harness.
//! * [`flat`]: trees as parallel integer arrays, for language bindings.
//! * [`cli`]: the `setree` command-line tool.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod bench;
pub mod cli;
pub mod contrastive;
pub mod error;
pub mod flat;
pub mod graph;
pub mod io;
pub mod minimize;
pub mod oracle;
pub mod tree;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSetStats};
pub use minimize::{minimize, rbbt, DropMode, MinimizeConfig, MinimizeTrace};
pub use tree::{one_dim_entropy, tree_entropy, CodingTree, EntropyReport, NodeId};
