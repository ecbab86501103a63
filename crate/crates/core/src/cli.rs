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

//! The `setree` command-line tool. Every successful command prints one JSON
//! report on stdout; failures print a JSON error on stderr and exit with 1
//! for bad input or 2 for internal errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bench::{recovery_run, scaling_run, FamilyKind, ScalingConfig};
use crate::contrastive::{ntxent_loss, DenominatorMode, EmbeddingBatch};
use crate::error::{Error, Result};
use crate::io::{
    parse_tudataset, read_edge_list, read_matrix, read_tree_document, write_tree_document,
    TreeDocument,
};
use crate::minimize::{minimize, rbbt, DropMode, MinimizeConfig};
use crate::oracle::{optimal_height2, optimal_heightk};
use crate::tree::{one_dim_entropy, tree_entropy};

#[derive(Debug, Parser)]
#[command(name = "setree", version, about = "Structural entropy coding trees")]
pub struct Cli {
    /// Log progress to stderr (the SETREE_LOG variable overrides the level).
    #[arg(long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One-dimensional entropy of a graph, or its entropy under a tree.
    Entropy {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        tree: Option<PathBuf>,
    },
    /// Greedy fixed-height minimization; writes a tree document.
    Minimize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        height: usize,
        #[arg(long, value_enum, default_value_t = DropModeArg::Literal)]
        drop_mode: DropModeArg,
        /// Leave trees shorter than the height bound unpadded.
        #[arg(long)]
        no_pad: bool,
        /// Record the trace summary in the document and the steps in the report.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        output: PathBuf,
    },
    /// Exhaustive optimum for small graphs, compared with the greedy result.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        height: usize,
    },
    /// Entropy of random balanced binary trees.
    Rbbt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        seed: u64,
        /// Use seeds seed..seed+trials-1.
        #[arg(long, default_value_t = 1)]
        trials: u64,
    },
    /// Statistics of a TUDataset directory.
    Dataset {
        #[arg(long)]
        tudataset: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long)]
        minimize_height: Option<usize>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// NT-Xent loss of two embedding matrices (CSV, one row per sample).
    Loss {
        #[arg(long)]
        view1: PathBuf,
        #[arg(long)]
        view2: PathBuf,
        #[arg(long)]
        tau: f64,
        #[arg(long, value_enum, default_value_t = LossModeArg::Standard)]
        mode: LossModeArg,
    },
    /// Synthetic benchmarks.
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Minimizer wall time against edge count.
    Scaling(ScalingArgs),
    /// Planted-partition recovery at height 2.
    Recovery(RecoveryArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ScalingArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::UniformRandom)]
    family: FamilyArg,
    /// Comma-separated vertex counts, ascending.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 10.0)]
    average_degree: f64,
    #[arg(long, default_value_t = 2)]
    height: usize,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct RecoveryArgs {
    #[arg(long)]
    blocks: usize,
    #[arg(long)]
    p_in: f64,
    #[arg(long)]
    p_out: f64,
    #[arg(long)]
    n: usize,
    /// Number of seeds, starting at --first-seed.
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    first_seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DropModeArg {
    Literal,
    HeightAware,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossModeArg {
    Standard,
    ExcludePositive,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    UniformRandom,
    PreferentialAttachment,
    PlantedPartition,
}

#[derive(Debug, Serialize)]
pub struct CliReport {
    pub command: String,
    pub input_fingerprint: String,
    pub result: Value,
    pub timing_ms: f64,
    pub version: String,
}

fn sha256_hex(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

fn read_bytes(path: &PathBuf) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

fn run_entropy(input: &PathBuf, tree: Option<&PathBuf>) -> Result<(String, Value)> {
    let g = read_edge_list(input)?.graph;
    let result = match tree {
        None => json!({
            "h1_bits": one_dim_entropy(&g)?,
            "num_vertices": g.num_vertices(),
            "num_edges": g.num_edges(),
        }),
        Some(path) => {
            let t = read_tree_document(path)?.to_tree_for(&g)?;
            let report = tree_entropy(&g, &t)?;
            json!({
                "tree_entropy_bits": report.total,
                "height": t.height(),
                "per_node": report.per_node,
                "degenerate": report.degenerate,
            })
        }
    };
    Ok((g.fingerprint().to_owned(), result))
}

fn run_minimize(
    input: &PathBuf,
    height: usize,
    drop_mode: DropModeArg,
    no_pad: bool,
    with_trace: bool,
    output: &PathBuf,
) -> Result<(String, Value)> {
    let cfg = MinimizeConfig {
        height_k: height,
        pad_to_exact_height: !no_pad,
        drop_mode: match drop_mode {
            DropModeArg::Literal => DropMode::Literal,
            DropModeArg::HeightAware => DropMode::HeightAware,
        },
        seed: 0,
    };
    cfg.validate()?;
    let g = read_edge_list(input)?.graph;
    let (t, trace) = minimize(&g, &cfg)?;
    let report = tree_entropy(&g, &t)?;
    let doc = TreeDocument::new(&g, &t, &report, with_trace.then_some(&trace))?;
    write_tree_document(output, &doc)?;
    log::info!(
        "minimized {} vertices to height {}: {:.6} -> {:.6} bits",
        g.num_vertices(),
        t.height(),
        trace.initial_entropy,
        report.total
    );
    let mut result = json!({
        "initial_entropy": trace.initial_entropy,
        "final_entropy": report.total,
        "combines": trace.combines(),
        "drops": trace.drops(),
        "pads": trace.pads(),
        "height": t.height(),
        "stage1_height": trace.stage1_height,
        "output": output,
    });
    if with_trace {
        result["steps"] = serde_json::to_value(&trace.steps)?;
    }
    Ok((g.fingerprint().to_owned(), result))
}

fn run_oracle(input: &PathBuf, height: usize) -> Result<(String, Value)> {
    MinimizeConfig::new(height).validate()?;
    let g = read_edge_list(input)?.graph;
    let r = if height == 2 {
        optimal_height2(&g)?
    } else {
        optimal_heightk(&g, height)?
    };
    Ok((g.fingerprint().to_owned(), serde_json::to_value(&r)?))
}

fn run_rbbt(input: &PathBuf, height: usize, seed: u64, trials: u64) -> Result<(String, Value)> {
    MinimizeConfig::new(height).validate()?;
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let g = read_edge_list(input)?.graph;
    let entropies = (seed..seed + trials)
        .map(|s| Ok(tree_entropy(&g, &rbbt(&g, height, s)?)?.total))
        .collect::<Result<Vec<f64>>>()?;
    let mean = entropies.iter().sum::<f64>() / entropies.len() as f64;
    let min = entropies.iter().copied().fold(f64::INFINITY, f64::min);
    let max = entropies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((
        g.fingerprint().to_owned(),
        json!({
            "trials": trials,
            "first_seed": seed,
            "mean": mean,
            "min": min,
            "max": max,
            "entropies": entropies,
        }),
    ))
}

fn run_dataset(
    dir: &PathBuf,
    name: &str,
    height: Option<usize>,
    jobs: usize,
) -> Result<(String, Value)> {
    if let Some(k) = height {
        MinimizeConfig::new(k).validate()?;
    }
    if jobs == 0 {
        return Err(Error::Config("jobs must be at least 1".into()));
    }
    let bundle = parse_tudataset(dir, name)?;
    for w in &bundle.warnings {
        log::warn!("{name}: {w}");
    }
    let prints: Vec<&[u8]> = bundle
        .graphs
        .iter()
        .map(|g| g.fingerprint().as_bytes())
        .collect();
    let mut result = serde_json::to_value(bundle.stats())?;
    result["name"] = json!(name);
    result["warnings"] = json!(bundle.warnings);
    if let Some(k) = height {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        let cfg = MinimizeConfig::new(k);
        let runs = pool.install(|| {
            bundle
                .graphs
                .par_iter()
                .map(|g| minimize(g, &cfg).map(|(_, tr)| (tr.initial_entropy, tr.final_entropy)))
                .collect::<Result<Vec<_>>>()
        })?;
        let count = runs.len().max(1) as f64;
        result["entropy"] = json!({
            "height": k,
            "mean_initial_entropy": runs.iter().map(|r| r.0).sum::<f64>() / count,
            "mean_final_entropy": runs.iter().map(|r| r.1).sum::<f64>() / count,
        });
    }
    Ok((sha256_hex(&prints), result))
}

fn run_loss(
    view1: &PathBuf,
    view2: &PathBuf,
    tau: f64,
    mode: LossModeArg,
) -> Result<(String, Value)> {
    let fingerprint = sha256_hex(&[&read_bytes(view1)?, &read_bytes(view2)?]);
    let mode = match mode {
        LossModeArg::Standard => DenominatorMode::Standard,
        LossModeArg::ExcludePositive => DenominatorMode::ExcludePositive,
    };
    let batch = EmbeddingBatch::new(read_matrix(view1)?, read_matrix(view2)?, tau).with_mode(mode);
    let loss = ntxent_loss(&batch)?;
    Ok((
        fingerprint,
        json!({"per_sample": loss.per_sample, "mean": loss.mean, "mode": mode, "temperature": tau}),
    ))
}

fn run_bench(cmd: &BenchCommand) -> Result<(String, Value)> {
    match cmd {
        BenchCommand::Scaling(a) => {
            let cfg = ScalingConfig {
                family: match a.family {
                    FamilyArg::UniformRandom => FamilyKind::UniformRandom,
                    FamilyArg::PreferentialAttachment => FamilyKind::PreferentialAttachment,
                    FamilyArg::PlantedPartition => FamilyKind::PlantedPartition,
                },
                sizes: a.sizes.clone(),
                average_degree: a.average_degree,
                height_k: a.height,
                repeats: a.repeats,
                seed: a.seed,
            };
            let report = scaling_run(&cfg)?;
            let args = serde_json::to_vec(a)?;
            Ok((
                sha256_hex(&[b"scaling", &args]),
                serde_json::to_value(report)?,
            ))
        }
        BenchCommand::Recovery(a) => {
            let seeds: Vec<u64> = (a.first_seed..a.first_seed + a.seeds).collect();
            let report = recovery_run(a.blocks, a.p_in, a.p_out, a.n, &seeds)?;
            let args = serde_json::to_vec(a)?;
            Ok((
                sha256_hex(&[b"recovery", &args]),
                serde_json::to_value(report)?,
            ))
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Entropy { .. } => "entropy",
        Command::Minimize { .. } => "minimize",
        Command::Oracle { .. } => "oracle",
        Command::Rbbt { .. } => "rbbt",
        Command::Dataset { .. } => "dataset",
        Command::Loss { .. } => "loss",
        Command::Bench(BenchCommand::Scaling(_)) => "bench scaling",
        Command::Bench(BenchCommand::Recovery(_)) => "bench recovery",
    }
}

/// Runs one parsed command and builds its report.
pub fn execute(cmd: &Command) -> Result<CliReport> {
    let start = Instant::now();
    let (input_fingerprint, result) = match cmd {
        Command::Entropy { input, tree } => run_entropy(input, tree.as_ref()),
        Command::Minimize {
            input,
            height,
            drop_mode,
            no_pad,
            trace,
            output,
        } => run_minimize(input, *height, *drop_mode, *no_pad, *trace, output),
        Command::Oracle { input, height } => run_oracle(input, *height),
        Command::Rbbt {
            input,
            height,
            seed,
            trials,
        } => run_rbbt(input, *height, *seed, *trials),
        Command::Dataset {
            tudataset,
            name,
            minimize_height,
            jobs,
        } => run_dataset(tudataset, name, *minimize_height, *jobs),
        Command::Loss {
            view1,
            view2,
            tau,
            mode,
        } => run_loss(view1, view2, *tau, *mode),
        Command::Bench(b) => run_bench(b),
    }?;
    Ok(CliReport {
        command: command_name(cmd).to_owned(),
        input_fingerprint,
        result,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
        version: env!("CARGO_PKG_VERSION").to_owned(),
    })
}

fn error_json(kind: &str, message: &str) -> String {
    json!({"error": {"kind": kind, "message": message}}).to_string()
}

fn init_logging(verbose: bool) {
    let default = if verbose { "info" } else { "warn" };
    let env = env_logger::Env::new().filter_or("SETREE_LOG", default);
    let _ = env_logger::Builder::from_env(env)
        .target(env_logger::Target::Stderr)
        .try_init();
}

/// Parses `args` (including the program name), runs the command and writes
/// the report or error. Returns the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = writeln!(err, "{}", error_json("usage", e.to_string().trim_end()));
            return 1;
        }
    };
    init_logging(cli.verbose);
    match execute(&cli.command) {
        Ok(report) => match serde_json::to_string(&report) {
            Ok(text) => {
                let _ = writeln!(out, "{text}");
                0
            }
            Err(e) => {
                let _ = writeln!(err, "{}", error_json("internal", &e.to_string()));
                2
            }
        },
        Err(e) => {
            let _ = writeln!(err, "{}", error_json(e.kind(), &e.to_string()));
            if e.is_user_error() {
                1
            } else {
                2
            }
        }
    }
}

/// [`run_with`] on the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(
        args,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(
            std::iter::once("setree").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn help_and_usage_errors() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("minimize"));
        let (code, out, err) = call(&["minimize", "--height", "2"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"]["kind"], "usage");
    }

    #[test]
    fn entropy_of_triangle() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.txt");
        std::fs::write(&path, "0 1\n1 2\n0 2\n").unwrap();
        let (code, out, _) = call(&["entropy", "--input", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["command"], "entropy");
        assert!((v["result"]["h1_bits"].as_f64().unwrap() - 3f64.log2()).abs() < 1e-12);
        assert_eq!(v["input_fingerprint"].as_str().unwrap().len(), 64);
    }

    #[test]
    fn missing_file_is_user_error() {
        let (code, out, err) = call(&["entropy", "--input", "/nonexistent/graph.txt"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"]["kind"], "io");
    }
}
