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

//! Loads a TUDataset directory and minimizes every graph.
//!
//! ```text
//! cargo run --example tudataset -- path/to/MUTAG MUTAG
//! ```
//!
//! Without arguments it reads the small fixture shipped with the tests.

use std::path::PathBuf;

use setree::io::parse_tudataset;
use setree::{minimize, MinimizeConfig};

fn main() -> setree::Result<()> {
    let mut args = std::env::args().skip(1);
    let (dir, name) = match (args.next(), args.next()) {
        (Some(d), Some(n)) => (PathBuf::from(d), n),
        _ => (
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/tudataset/TOY"),
            "TOY".to_owned(),
        ),
    };
    let bundle = parse_tudataset(&dir, &name)?;
    let stats = bundle.stats();
    println!(
        "{name}: {} graphs, {:?} classes, {:.2} nodes and {:.2} edges on average",
        stats.num_graphs, stats.num_classes, stats.avg_nodes, stats.avg_edges
    );
    for w in &bundle.warnings {
        println!("warning: {w}");
    }
    let cfg = MinimizeConfig::new(3);
    let mut total = 0.0;
    for g in &bundle.graphs {
        total += minimize(g, &cfg)?.1.final_entropy;
    }
    println!(
        "mean height-3 entropy {:.4}",
        total / bundle.graphs.len() as f64
    );
    Ok(())
}
