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

//! How well height-2 modules recover planted blocks as the blocks blur.

use setree::bench::recovery_run;

fn main() -> setree::Result<()> {
    let seeds: Vec<u64> = (0..10).collect();
    for p_out in [0.02, 0.05, 0.1, 0.2, 0.3] {
        let r = recovery_run(4, 0.6, p_out, 80, &seeds)?;
        println!("p_out {p_out:.2}: mean agreement {:.3}", r.mean_agreement);
    }
    Ok(())
}
