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

//! NT-Xent loss under both denominators.

use setree::contrastive::{ntxent_loss, DenominatorMode, EmbeddingBatch};

fn main() -> setree::Result<()> {
    let view1 = vec![vec![1.0, 0.1], vec![0.2, 1.0], vec![-1.0, 0.4]];
    let view2 = vec![vec![0.9, 0.2], vec![0.1, 1.1], vec![-0.8, -0.1]];
    for tau in [0.1, 0.5, 1.0] {
        for mode in [DenominatorMode::Standard, DenominatorMode::ExcludePositive] {
            let batch = EmbeddingBatch::new(view1.clone(), view2.clone(), tau).with_mode(mode);
            let loss = ntxent_loss(&batch)?;
            println!(
                "tau {tau:<4} {mode:?}: mean {:.6}, per sample {:.4?}",
                loss.mean, loss.per_sample
            );
        }
    }
    Ok(())
}
