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

//! Exhaustive optima on small graphs and the greedy gap over the catalog of
//! connected graphs.

use setree::oracle::{bell, connected_graph_catalog, gap_report, optimal_height2, optimal_heightk};
use setree::Graph;

fn main() -> setree::Result<()> {
    let bridge = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])?;
    let r = optimal_height2(&bridge)?;
    println!(
        "bridge, k=2: optimum {:.6} over {} partitions (Bell(6) = {}), greedy {:.6}",
        r.optimal_entropy,
        r.num_candidates,
        bell(6),
        r.greedy_entropy
    );
    println!("optimal partition {:?}", r.optimal_partition);

    let r3 = optimal_heightk(&bridge, 3)?;
    println!(
        "bridge, k=3: optimum {:.6}, gap {:.2e}",
        r3.optimal_entropy, r3.gap
    );

    let catalog = connected_graph_catalog(6)?;
    for k in [2, 3] {
        let report = gap_report(&catalog, k)?;
        println!(
            "catalog k={k}: {} graphs, mean gap {:.5}, p95 {:.5}, max {:.5}, {} optimal",
            report.num_graphs,
            report.mean_gap,
            report.p95_gap,
            report.max_gap,
            report.zero_gap_graphs
        );
    }
    Ok(())
}
