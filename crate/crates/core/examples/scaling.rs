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

//! Minimizer wall time against edge count. Build with `--release`.

use setree::bench::{scaling_run, FamilyKind, ScalingConfig};

fn main() -> setree::Result<()> {
    let cfg = ScalingConfig {
        family: FamilyKind::UniformRandom,
        sizes: vec![200, 632, 2000, 6325, 20000],
        average_degree: 10.0,
        height_k: 2,
        repeats: 3,
        seed: 1,
    };
    let report = scaling_run(&cfg)?;
    println!(
        "{:>8} {:>8} {:>10} {:>10} {:>6}",
        "n", "m", "stage1 ms", "stage2 ms", "h_max"
    );
    for r in &report.rows {
        println!(
            "{:>8} {:>8} {:>10.2} {:>10.2} {:>6}",
            r.n, r.m, r.stage1_ms, r.stage2_ms, r.h_max
        );
    }
    if let Some(fit) = report.fit_exponent {
        println!("time ~ m^{fit:.3}");
    }
    Ok(())
}
