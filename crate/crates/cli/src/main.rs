//! `hetwalk` command-line tool: load a typed edge list, sample walks, train
//! embeddings and summarise corpora.
//!
//! Exit codes: 0 on success, 1 on runtime or I/O errors, 2 on usage errors.

mod manifest;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hetwalk::bias::{BiasParams, EdgeSwitchModel, NodeSwitchModel};
use hetwalk::graph::{HetMultigraph, Vocabulary};
use hetwalk::io::{self, LoadOptions};
use hetwalk::walk::{generate_walks, walk_stats, WalkConfig, WalkCorpus};
use hetwalk::{embedding, EdgeTypeId, Error, NodeTypeId, Result, SgnsConfig};

use manifest::{manifest_path, sha256_file, Manifest};

#[derive(Parser, Debug)]
#[command(name = "hetwalk", version, about = "Type-aware random walks and embeddings for heterogeneous multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample second-order walks and write them one per line.
    Walk(WalkCmd),
    /// Train skip-gram embeddings from a walk file or from freshly sampled walks.
    Embed(EmbedCmd),
    /// Summarise node and edge type usage of a walk file.
    Stats(StatsCmd),
    /// Re-run the command recorded in a manifest and check the output digest.
    Replay(ReplayCmd),
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Edge list: `u<TAB>v<TAB>edge_type[<TAB>weight]`.
    #[arg(long, value_name = "PATH")]
    edges: PathBuf,
    /// Node types: `node<TAB>type`. Unlisted nodes get the type "default".
    #[arg(long, value_name = "PATH")]
    node_types: Option<PathBuf>,
    /// Skip the first data line of each input file.
    #[arg(long)]
    header: bool,
}

#[derive(Args, Debug)]
struct BiasArgs {
    /// Return parameter.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// In-out parameter.
    #[arg(long, default_value_t = 1.0)]
    q: f64,

    /// Uniform node-type switching factor.
    #[arg(long, conflicts_with_all = ["s_matrix", "special_node_types"])]
    s: Option<f64>,
    /// Directed node-type switching table: `from<TAB>to<TAB>value`.
    #[arg(long, value_name = "PATH", conflicts_with = "special_node_types")]
    s_matrix: Option<PathBuf>,
    /// Comma-separated special node types; requires --s-to and --s-from.
    #[arg(long, value_name = "LIST", value_delimiter = ',', requires_all = ["s_to", "s_from"])]
    special_node_types: Option<Vec<String>>,
    /// Factor for steps into the special node types.
    #[arg(long, requires = "special_node_types")]
    s_to: Option<f64>,
    /// Factor for steps out of the special node types.
    #[arg(long, requires = "special_node_types")]
    s_from: Option<f64>,

    /// Uniform edge-type switching factor.
    #[arg(long, conflicts_with_all = ["e_matrix", "special_edge_types"])]
    e: Option<f64>,
    /// Directed edge-type switching table: `from<TAB>to<TAB>value`.
    #[arg(long, value_name = "PATH", conflicts_with = "special_edge_types")]
    e_matrix: Option<PathBuf>,
    /// Comma-separated special edge types; requires --e-to and --e-from.
    #[arg(long, value_name = "LIST", value_delimiter = ',', requires_all = ["e_to", "e_from"])]
    special_edge_types: Option<Vec<String>>,
    #[arg(long, requires = "special_edge_types")]
    e_to: Option<f64>,
    #[arg(long, requires = "special_edge_types")]
    e_from: Option<f64>,
}

#[derive(Args, Debug)]
struct WalkArgs {
    /// Nodes per walk, including the start node.
    #[arg(long, default_value_t = 80)]
    walk_length: usize,
    /// Walks started from every node.
    #[arg(long, default_value_t = 10)]
    num_walks: u32,
    /// Worker threads for walk generation (output does not depend on it).
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args, Debug)]
struct WalkCmd {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    bias: BiasArgs,
    #[command(flatten)]
    walk: WalkArgs,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Walk file to write.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SgnsArgs {
    #[arg(long, default_value_t = 128)]
    dims: usize,
    /// Maximum context distance.
    #[arg(long, default_value_t = 10)]
    window: usize,
    /// Negative samples per positive pair.
    #[arg(long, default_value_t = 5)]
    negatives: usize,
    #[arg(long, default_value_t = 5)]
    epochs: usize,
    /// Initial learning rate.
    #[arg(long, default_value_t = 0.025)]
    lr: f64,
    /// Final learning rate.
    #[arg(long, default_value_t = 0.0001)]
    min_lr: f64,
    /// Use the full window for every center instead of a random shrink.
    #[arg(long)]
    fixed_window: bool,
    /// Training threads; more than one is lock-free and not bit-reproducible.
    #[arg(long, default_value_t = 1)]
    train_threads: usize,
}

#[derive(Args, Debug)]
struct EmbedCmd {
    #[command(flatten)]
    graph: GraphArgs,
    /// Train on an existing walk file instead of sampling walks.
    #[arg(
        long,
        value_name = "PATH",
        conflicts_with_all = [
            "p", "q", "s", "s_matrix", "special_node_types", "s_to", "s_from",
            "e", "e_matrix", "special_edge_types", "e_to", "e_from",
            "walk_length", "num_walks", "threads",
        ]
    )]
    walks: Option<PathBuf>,
    #[command(flatten)]
    bias: BiasArgs,
    #[command(flatten)]
    walk: WalkArgs,
    #[command(flatten)]
    sgns: SgnsArgs,
    /// Seed for walk sampling and training.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Embedding file to write.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Args, Debug)]
struct StatsCmd {
    #[arg(long, value_name = "PATH")]
    walks: PathBuf,
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReplayCmd {
    /// Manifest written by a previous `walk` or `embed` run.
    #[arg(long, value_name = "PATH")]
    manifest: PathBuf,
    /// Write the reproduced output here instead of the recorded path.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn load(graph: &GraphArgs, m: &mut Manifest) -> Result<HetMultigraph> {
    let opts = LoadOptions {
        header: graph.header,
        ..LoadOptions::default()
    };
    let g = io::load_graph(&graph.edges, graph.node_types.as_deref(), &opts)?;
    m.push_file("input.edges", &graph.edges)?;
    if let Some(path) = &graph.node_types {
        m.push_file("input.node_types", path)?;
    }
    m.push("graph.nodes", g.node_count());
    m.push("graph.edge_instances", g.instance_count());
    m.push("graph.node_types", g.node_type_vocab().names().join(","));
    m.push("graph.edge_types", g.edge_type_vocab().names().join(","));
    Ok(g)
}

fn lookup_types(vocab: &Vocabulary, names: &[String], what: &str) -> Result<Vec<u32>> {
    names
        .iter()
        .map(|n| {
            vocab
                .get(n)
                .ok_or_else(|| Error::Usage(format!("unknown {what} type {n:?} (known: {})", vocab.names().join(", "))))
        })
        .collect()
}

fn node_switch(b: &BiasArgs, g: &HetMultigraph, m: &mut Manifest) -> Result<NodeSwitchModel> {
    let vocab = g.node_type_vocab();
    if let Some(path) = &b.s_matrix {
        m.push_file("input.s_matrix", path)?;
        return NodeSwitchModel::pairwise_directed(io::read_switch_matrix(path, vocab)?);
    }
    if let Some(names) = &b.special_node_types {
        let ids = lookup_types(vocab, names, "node")?;
        return NodeSwitchModel::special_set(ids.into_iter().map(NodeTypeId), b.s_to.unwrap(), b.s_from.unwrap());
    }
    NodeSwitchModel::uniform(b.s.unwrap_or(1.0))
}

fn edge_switch(b: &BiasArgs, g: &HetMultigraph, m: &mut Manifest) -> Result<EdgeSwitchModel> {
    let vocab = g.edge_type_vocab();
    if let Some(path) = &b.e_matrix {
        m.push_file("input.e_matrix", path)?;
        return EdgeSwitchModel::pairwise_directed(io::read_switch_matrix(path, vocab)?);
    }
    if let Some(names) = &b.special_edge_types {
        let ids = lookup_types(vocab, names, "edge")?;
        return EdgeSwitchModel::special_set(ids.into_iter().map(EdgeTypeId), b.e_to.unwrap(), b.e_from.unwrap());
    }
    EdgeSwitchModel::uniform(b.e.unwrap_or(1.0))
}

fn sample(
    g: &HetMultigraph,
    bias: &BiasArgs,
    walk: &WalkArgs,
    seed: u64,
    m: &mut Manifest,
) -> Result<WalkCorpus> {
    let node = node_switch(bias, g, m)?;
    let edge = edge_switch(bias, g, m)?;
    let params = BiasParams::new(bias.p, bias.q, node, edge)?;
    let cfg = WalkConfig {
        walk_length: walk.walk_length,
        walks_per_node: walk.num_walks,
        seed,
        threads: walk.threads,
    };
    cfg.validate()?;
    m.push("p", params.p());
    m.push("q", params.q());
    m.push("node_switch", params.node_switch().describe());
    m.push("edge_switch", params.edge_switch().describe());
    m.push("walk.length", cfg.walk_length);
    m.push("walk.per_node", cfg.walks_per_node);
    m.push("walk.seed", cfg.seed);
    m.push("walk.threads", cfg.threads);
    generate_walks(g, &params, &cfg)
}

fn finish(mut m: Manifest, out: &Path) -> Result<()> {
    m.push_file("output", out)?;
    m.write(&manifest_path(out))
}

fn cmd_walk(c: &WalkCmd, mut m: Manifest) -> Result<()> {
    let g = load(&c.graph, &mut m)?;
    let corpus = sample(&g, &c.bias, &c.walk, c.seed, &mut m)?;
    io::write_walks(&corpus, &g, &c.out)?;
    m.push("walks", corpus.len());
    finish(m, &c.out)
}

fn cmd_embed(c: &EmbedCmd, mut m: Manifest) -> Result<()> {
    let s = &c.sgns;
    let cfg = SgnsConfig {
        dims: s.dims,
        window: s.window,
        negatives: s.negatives,
        epochs: s.epochs,
        initial_lr: s.lr,
        min_lr: s.min_lr,
        seed: c.seed,
        threads: s.train_threads,
        dynamic_window: !s.fixed_window,
    };
    cfg.validate()?;
    let g = load(&c.graph, &mut m)?;
    let corpus = match &c.walks {
        Some(path) => {
            m.push_file("input.walks", path)?;
            io::read_walks(path, &g)?
        }
        None => sample(&g, &c.bias, &c.walk, c.seed, &mut m)?,
    };
    for (k, v) in [
        ("sgns.dims", cfg.dims.to_string()),
        ("sgns.window", cfg.window.to_string()),
        ("sgns.dynamic_window", cfg.dynamic_window.to_string()),
        ("sgns.negatives", cfg.negatives.to_string()),
        ("sgns.epochs", cfg.epochs.to_string()),
        ("sgns.lr", cfg.initial_lr.to_string()),
        ("sgns.min_lr", cfg.min_lr.to_string()),
        ("sgns.seed", cfg.seed.to_string()),
        ("sgns.threads", cfg.threads.to_string()),
    ] {
        m.push(k, v);
    }
    let trained = embedding::train(&corpus, g.node_count(), &cfg)?;
    for (i, loss) in trained.report.epoch_loss.iter().enumerate() {
        m.push(&format!("sgns.epoch_loss.{i}"), loss);
    }
    io::write_embeddings(&trained.embeddings, &g, &c.out)?;
    finish(m, &c.out)
}

fn cmd_stats(c: &StatsCmd) -> Result<()> {
    let mut scratch = Manifest::default();
    let g = load(&c.graph, &mut scratch)?;
    let corpus = io::read_walks(&c.walks, &g)?;
    let stats = walk_stats(&corpus, &g)?;
    let report = match c.format {
        Format::Text => format!("{stats}\n"),
        Format::Tsv => stats.to_tsv(),
    };
    match &c.out {
        Some(path) => std::fs::write(path, report).map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        }),
        None => {
            let _ = std::io::stdout().write_all(report.as_bytes());
            Ok(())
        }
    }
}

fn cmd_replay(c: &ReplayCmd) -> Result<()> {
    let recorded = Manifest::read(&c.manifest)?;
    let mismatch = |msg: String| Error::Validation(format!("{}: {msg}", c.manifest.display()));
    if recorded.get("tool") != Some(manifest::TOOL) {
        eprintln!(
            "hetwalk: warning: manifest written by {:?}, replaying with {:?}",
            recorded.get("tool").unwrap_or("unknown"),
            manifest::TOOL
        );
    }
    for key in ["input.edges", "input.node_types", "input.s_matrix", "input.e_matrix", "input.walks"] {
        if let (Some(path), Some(digest)) = (recorded.get(key), recorded.get(&format!("{key}.sha256"))) {
            if sha256_file(Path::new(path))? != digest {
                return Err(mismatch(format!("{path} changed since the recorded run")));
            }
        }
    }
    let mut args: Vec<String> = recorded.get_all("arg").map(str::to_owned).collect();
    if let Some(out) = &c.out {
        let i = args
            .iter()
            .position(|a| a == "--out")
            .ok_or_else(|| mismatch("no --out argument recorded".into()))?;
        args[i + 1] = out.display().to_string();
    }
    let cli = Cli::try_parse_from(std::iter::once("hetwalk".to_owned()).chain(args.iter().cloned()))
        .map_err(|e| mismatch(format!("recorded arguments no longer parse: {e}")))?;
    let out = match &cli.command {
        Command::Walk(w) => w.out.clone(),
        Command::Embed(e) => e.out.clone(),
        _ => return Err(mismatch("only walk and embed runs can be replayed".into())),
    };
    run(cli.command, args)?;
    let expected = recorded.get("output.sha256").ok_or_else(|| mismatch("no output digest".into()))?;
    let got = sha256_file(&out)?;
    if got != expected {
        return Err(mismatch(format!("replayed output {} differs from the recorded run", out.display())));
    }
    println!("reproduced {} ({got})", out.display());
    Ok(())
}

fn run(command: Command, args: Vec<String>) -> Result<()> {
    match &command {
        Command::Walk(c) => cmd_walk(c, Manifest::new("walk", &args)),
        Command::Embed(c) => cmd_embed(c, Manifest::new("embed", &args)),
        Command::Stats(c) => cmd_stats(c),
        Command::Replay(c) => cmd_replay(c),
    }
}

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let args: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match run(cli.command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hetwalk: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
