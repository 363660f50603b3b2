// SPDX-License-Identifier: Apache-2.0

//! `hlsmc`: helper-guided model checking of HLS-style AIGER netlists.
//!
//! Exit codes: 0 proof, 1 counterexample, 2 unknown, 3 any error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hlsmc::benchgen::{self, BenchSpec};
use hlsmc::clause::{parse_clauses, write_clauses, Clause};
use hlsmc::helpers::{compile_helper, generate_helpers, infer_manifest, Manifest};
use hlsmc::netlist::aiger::{parse_aiger, serialize_aiger};
use hlsmc::netlist::Netlist;
use hlsmc::orchestrator::{prove, ProverConfig};
use hlsmc::pdr::{pdr, Checkpoint, Cti, PdrOptions, ProveResult, Trace, Verdict};
use hlsmc::ranker::Ranker;

const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "hlsmc", version, about = "Helper-guided IC3/PDR for HLS-style AIGER netlists")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prove a target with ranked helper assertions.
    Prove(ProveArgs),
    /// Run the PDR engine alone.
    Pdr(PdrArgs),
    /// List the helper assertions for a design.
    Helpers(HelpersArgs),
    /// Rank helpers against a CTI log.
    Rank(RankArgs),
    /// Generate benchmark models with ground truth.
    Bench(BenchArgs),
    /// Exact verdict by explicit-state search.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// AIGER model, ASCII or binary.
    model: PathBuf,
    /// Output index (`3`, `o3`) or symbol name.
    #[arg(long, default_value = "0")]
    target: String,
}

#[derive(Args)]
struct ManifestArgs {
    /// Design manifest (JSON). Inferred from symbol names when omitted.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct ProveArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    manifest: ManifestArgs,
    /// Helpers per batch.
    #[arg(long, default_value_t = 10)]
    nh: usize,
    /// Initial timeout in seconds.
    #[arg(long, default_value_t = 1.0)]
    t0: f64,
    /// Timeout growth factor.
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Helper proof timeout in seconds.
    #[arg(long, default_value_t = 10.0)]
    th: f64,
    /// Global deadline in seconds.
    #[arg(long, default_value_t = 3600.0)]
    deadline: f64,
    /// Concurrent helper proofs.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Where to keep the latest checkpoint of an unfinished run.
    #[arg(long)]
    checkpoint_dir: Option<PathBuf>,
    #[command(flatten)]
    out: Artifacts,
    /// JSON run report.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct Artifacts {
    /// Write the invariant (proof) in the clause exchange format.
    #[arg(long)]
    emit_invariant: Option<PathBuf>,
    /// Write the counterexample trace.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct PdrArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Soft timeout in seconds, checked at frame boundaries.
    #[arg(long)]
    timeout: Option<f64>,
    /// Clauses to validate and install at F_1.
    #[arg(long)]
    sideload: Option<PathBuf>,
    /// Resume from this checkpoint.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Write the checkpoint of an Unknown result here.
    #[arg(long)]
    checkpoint_out: Option<PathBuf>,
    /// Write the CTI log (JSON) here.
    #[arg(long)]
    ctis: Option<PathBuf>,
    /// Check every completed frame with independent SAT queries.
    #[arg(long)]
    debug_frames: bool,
    /// Replay a trace file instead of proving.
    #[arg(long)]
    replay: Option<PathBuf>,
    #[command(flatten)]
    out: Artifacts,
}

#[derive(Args)]
struct HelpersArgs {
    model: PathBuf,
    #[command(flatten)]
    manifest: ManifestArgs,
    /// Also write one monitored AIGER per helper into this directory.
    #[arg(long)]
    emit_dir: Option<PathBuf>,
    /// Print JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RankArgs {
    model: PathBuf,
    #[command(flatten)]
    manifest: ManifestArgs,
    /// CTI log: a JSON array as written by `pdr --ctis`, or a checkpoint.
    #[arg(long)]
    ctis: PathBuf,
    /// How many helpers to list; all when omitted.
    #[arg(long)]
    nh: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    /// Output directory.
    out: PathBuf,
    /// Smallest and typical size of every family instead of the default suite.
    #[arg(long)]
    families: bool,
    /// Add this many random control models.
    #[arg(long, default_value_t = 0)]
    random: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Write the shortest counterexample trace.
    #[arg(long)]
    trace: Option<PathBuf>,
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn load_model(path: &Path) -> Result<Netlist> {
    parse_aiger(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_target(args: &ModelArgs) -> Result<(Netlist, usize)> {
    let n = load_model(&args.model)?;
    let Some(t) = n.resolve_output(&args.target) else {
        bail!("{}: no output `{}`", args.model.display(), args.target)
    };
    Ok((n, t))
}

fn load_manifest(args: &ManifestArgs, netlist: &Netlist) -> Result<Manifest> {
    match &args.manifest {
        Some(p) => {
            let text = String::from_utf8(read(p)?).with_context(|| format!("{} is not UTF-8", p.display()))?;
            Manifest::from_json(&text).with_context(|| format!("parsing {}", p.display()))
        }
        None => {
            let (m, diags) = infer_manifest(netlist);
            for d in diags {
                log::warn!("{}: {}", d.entry, d.message);
            }
            Ok(m)
        }
    }
}

fn exit_for(v: Verdict) -> u8 {
    match v {
        Verdict::Proof => 0,
        Verdict::Counterexample => 1,
        Verdict::Unknown => 2,
    }
}

fn emit(netlist: &Netlist, r: &ProveResult, out: &Artifacts) -> Result<()> {
    if let (Some(p), Verdict::Proof) = (&out.emit_invariant, r.verdict) {
        write(p, write_clauses(netlist, &r.invariant)?)?;
    }
    if let (Some(p), Some(t)) = (&out.trace, &r.trace) {
        write(p, t.to_text())?;
    }
    Ok(())
}

fn summary(r: &ProveResult) -> String {
    let s = &r.stats;
    let detail = match r.verdict {
        Verdict::Proof => format!("invariant of {} clauses", r.invariant.len()),
        Verdict::Counterexample => format!("trace of depth {}", r.trace.as_ref().map_or(0, Trace::depth)),
        Verdict::Unknown => "timed out".to_owned(),
    };
    format!(
        "{:?}: {detail} (sat queries {}, ctis {}, frames {}, {:.3}s)",
        r.verdict, s.sat_queries, s.ctis, s.frames, s.elapsed
    )
}

fn cmd_prove(a: ProveArgs) -> Result<u8> {
    let (n, target) = load_target(&a.model)?;
    let manifest = load_manifest(&a.manifest, &n)?;
    let cfg = ProverConfig {
        nh: a.nh,
        t0: a.t0,
        alpha: a.alpha,
        th: a.th,
        deadline: a.deadline,
        jobs: a.jobs,
        checkpoint_dir: a.checkpoint_dir,
        debug_frames: false,
    };
    let out = prove(&n, target, &manifest, &cfg)?;
    print!("{}", out.report.table());
    println!("{}", summary(&out.result));
    emit(&n, &out.result, &a.out)?;
    if let Some(p) = &a.report {
        write(p, out.report.to_json())?;
    }
    Ok(exit_for(out.result.verdict))
}

fn cmd_pdr(a: PdrArgs) -> Result<u8> {
    let (n, target) = load_target(&a.model)?;
    if let Some(p) = &a.replay {
        let text = String::from_utf8(read(p)?)?;
        let t = Trace::parse(&text).with_context(|| format!("parsing {}", p.display()))?;
        if t.replays(&n, target) {
            println!("trace raises {} at step {}", n.output_name(target), t.depth());
            return Ok(1);
        }
        bail!("trace does not raise {}", n.output_name(target));
    }
    let sideload: Vec<Clause> = match &a.sideload {
        Some(p) => {
            parse_clauses(&n, &String::from_utf8(read(p)?)?).with_context(|| format!("parsing {}", p.display()))?
        }
        None => Vec::new(),
    };
    let checkpoint = match &a.checkpoint {
        Some(p) => Some(
            Checkpoint::from_json(&String::from_utf8(read(p)?)?).with_context(|| format!("parsing {}", p.display()))?,
        ),
        None => None,
    };
    let opts = PdrOptions {
        timeout: a.timeout.map(Duration::from_secs_f64),
        hard_timeout: None,
        sideload,
        checkpoint,
        debug_frames: a.debug_frames,
    };
    let r = pdr(&n, target, &opts)?;
    if a.sideload.is_some() {
        println!(
            "sideload: {} accepted, {} rejected, {} installed",
            r.sideload.accepted.len(),
            r.sideload.rejected.len(),
            r.installed.len()
        );
    }
    println!("{}", summary(&r));
    emit(&n, &r, &a.out)?;
    if let (Some(p), Some(ckp)) = (&a.checkpoint_out, &r.checkpoint) {
        write(p, ckp.to_json())?;
    }
    if let Some(p) = &a.ctis {
        write(p, serde_json::to_string(&r.ctis)?)?;
    }
    Ok(exit_for(r.verdict))
}

fn cmd_helpers(a: HelpersArgs) -> Result<u8> {
    let n = load_model(&a.model)?;
    let manifest = load_manifest(&a.manifest, &n)?;
    let g = generate_helpers(&n, &manifest);
    for d in &g.diagnostics {
        log::warn!("{}: {}", d.entry, d.message);
    }
    if a.json {
        println!("{}", serde_json::to_string_pretty(&g.helpers)?);
    } else {
        for h in &g.helpers {
            println!("{}\t{}\t{}", h.id, h.family, h.display());
        }
    }
    if let Some(dir) = &a.emit_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (k, h) in g.helpers.iter().enumerate() {
            let c = compile_helper(&n, h).with_context(|| format!("compiling {}", h.id))?;
            write(&dir.join(format!("helper_{k:03}.aag")), serialize_aiger(&c.netlist))?;
        }
    }
    Ok(0)
}

fn load_ctis(path: &Path) -> Result<Vec<Cti>> {
    let text = String::from_utf8(read(path)?)?;
    if let Ok(v) = serde_json::from_str::<Vec<Cti>>(&text) {
        return Ok(v);
    }
    let ckp = Checkpoint::from_json(&text)
        .with_context(|| format!("{} is neither a CTI log nor a checkpoint", path.display()))?;
    Ok(ckp.ctis)
}

fn cmd_rank(a: RankArgs) -> Result<u8> {
    let n = load_model(&a.model)?;
    let manifest = load_manifest(&a.manifest, &n)?;
    let ctis = load_ctis(&a.ctis)?;
    let helpers = generate_helpers(&n, &manifest).helpers;
    let total = helpers.len();
    let mut ranker = Ranker::new(&n, helpers);
    let served = ranker.get_best_from(&ctis, a.nh.unwrap_or(total));
    println!("{:>4} {:>8} {:>5}  id", "rank", "score", "|R|");
    for (k, h) in served.iter().enumerate() {
        let e = ranker.entries().iter().find(|e| e.helper.id == h.id).expect("ranked");
        println!("{:>4} {:>8} {:>5}  {}", k + 1, e.score, e.registers.len(), h.id);
    }
    Ok(0)
}

fn cmd_bench(a: BenchArgs) -> Result<u8> {
    let mut specs = if a.families { BenchSpec::family_sizes() } else { BenchSpec::default_suite() };
    for k in 0..a.random as u64 {
        let latches = 2 + ((a.seed + k) % 15) as usize;
        let inputs = 1 + ((a.seed + k) % 3) as usize;
        specs.push(BenchSpec::RandomControl { latches, inputs, seed: a.seed + k });
    }
    let suite = benchgen::write_suite(&a.out, &specs)?;
    for e in &suite.benchmarks {
        let depth = e.depth.map_or("-".to_owned(), |d| d.to_string());
        println!("{:<32} {:>3} latches  {:?}  depth {depth}", e.name, e.latches, e.verdict);
    }
    Ok(0)
}

fn cmd_oracle(a: OracleArgs) -> Result<u8> {
    let (n, target) = load_target(&a.model)?;
    let r = benchgen::oracle(&n, target)?;
    let depth = r.depth.map_or(String::new(), |d| format!(", shortest counterexample depth {d}"));
    println!("{:?}: {} reachable states{depth}", r.verdict, r.reachable_states);
    if let (Some(p), Some(t)) = (&a.trace, &r.trace) {
        write(p, t.to_text())?;
    }
    Ok(exit_for(r.verdict))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let r = match cli.command {
        Command::Prove(a) => cmd_prove(a),
        Command::Pdr(a) => cmd_pdr(a),
        Command::Helpers(a) => cmd_helpers(a),
        Command::Rank(a) => cmd_rank(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
