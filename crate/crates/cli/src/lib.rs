//! Command-line tables and reports for the walk models in qwalk-core.

pub mod output;
pub mod tables;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qwalk_core::{parse_graph6, CoinKind, Error, Graph, Result};

pub use output::{fixed6, raw17, OutputFormat};
pub use tables::{
    build_walk, embeddings_table, group_embeddings, group_shunts, hit_report, mix_report,
    pair_state, rounded6, shunts_table, szegedy_report, EmbeddingRow, GroupedEmbeddingRow,
    GroupedShuntRow, HitReport, MixReport, ShuntRow, SzegedyReport, WalkChoice,
};

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Quantum-walk tables from combinatorial graph data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One row per rotation system of the graph: genus, trace, entropy.
    Embeddings(EmbeddingsArgs),
    /// One row per shunt decomposition of the graph: cycles, signature, trace.
    Shunts(ShuntsArgs),
    /// Two-reflection walk of the simple random walk, with hitting times.
    Szegedy(SzegedyArgs),
    /// Average-mixing statistics for one chosen walk.
    Mix(MixArgs),
    /// Hitting times for one chosen walk and state pair.
    Hit(HitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> OutputFormat {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Arc,
    Shunt,
    Szegedy,
}

#[derive(Debug, Args)]
pub struct EmbeddingsArgs {
    /// graph6 string, or @path to a file holding one
    #[arg(long)]
    pub graph: String,
    #[arg(long, default_value = "circulant7")]
    pub coin: CoinKind,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Collapse rows to (genus, trace, count) groups
    #[arg(long)]
    pub group: bool,
    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ShuntsArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, default_value = "gauss")]
    pub coin: CoinKind,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Collapse rows to per-signature groups
    #[arg(long)]
    pub group: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SzegedyArgs {
    #[arg(long)]
    pub graph: String,
    /// Start arc, written u,v
    #[arg(long)]
    pub from: String,
    /// Target arc, written u,v
    #[arg(long)]
    pub to: String,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MixArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, value_enum, default_value_t = ModelArg::Arc)]
    pub model: ModelArg,
    /// Coin for the coined models; defaults to circulant7 (arc) or gauss (shunt)
    #[arg(long)]
    pub coin: Option<CoinKind>,
    /// Which enumerated structure to use (rotation system or decomposition)
    #[arg(long, default_value_t = 0)]
    pub index: usize,
    /// Also compare the finite-horizon time average against the exact matrix
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HitArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, value_enum, default_value_t = ModelArg::Szegedy)]
    pub model: ModelArg,
    #[arg(long)]
    pub coin: Option<CoinKind>,
    #[arg(long, default_value_t = 0)]
    pub index: usize,
    /// Start state, written u,v
    #[arg(long)]
    pub from: String,
    /// Target state, written u,v
    #[arg(long)]
    pub to: String,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Truncation horizon; defaults to 10 * dim^2
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Read a graph from a literal graph6 string or from `@path`.
pub fn load_graph(spec: &str) -> Result<(Graph, String)> {
    let text = if let Some(path) = spec.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| Error::Parameter(format!("cannot read {path}: {e}")))?
    } else {
        spec.to_string()
    };
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && *l != ">>graph6<<")
        .ok_or_else(|| Error::Graph6Parse {
            offset: 0,
            reason: "no graph6 line in input".into(),
        })?;
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    Ok((parse_graph6(line)?, line.to_string()))
}

/// Parse a state label of the form `u,v`.
pub fn parse_pair(text: &str) -> Result<(usize, usize)> {
    let err = || Error::Parameter(format!("expected a pair like 0,1 but got {text:?}"));
    let (a, b) = text.split_once(',').ok_or_else(err)?;
    Ok((
        a.trim().parse().map_err(|_| err())?,
        b.trim().parse().map_err(|_| err())?,
    ))
}

fn walk_choice(model: ModelArg, coin: Option<CoinKind>, index: usize) -> WalkChoice {
    match model {
        ModelArg::Arc => WalkChoice::Arc {
            kind: coin.unwrap_or(CoinKind::Circulant7),
            index,
        },
        ModelArg::Shunt => WalkChoice::Shunt {
            kind: coin.unwrap_or(CoinKind::Gauss),
            index,
        },
        ModelArg::Szegedy => WalkChoice::Szegedy,
    }
}

/// Run a parsed command, returning the rendered output and its destination.
pub fn run(cli: &Cli) -> Result<(String, Option<PathBuf>)> {
    match &cli.command {
        Command::Embeddings(args) => {
            let (g, _) = load_graph(&args.graph)?;
            let rows = embeddings_table(&g, args.coin)?;
            let text = if args.group {
                output::render_grouped_embeddings(&group_embeddings(&rows), args.format.into())?
            } else {
                output::render_embeddings(&rows, args.format.into())?
            };
            Ok((text, args.out.clone()))
        }
        Command::Shunts(args) => {
            let (g, _) = load_graph(&args.graph)?;
            let rows = shunts_table(&g, args.coin)?;
            let text = if args.group {
                output::render_grouped_shunts(&group_shunts(&rows), args.format.into())?
            } else {
                output::render_shunts(&rows, args.format.into())?
            };
            Ok((text, args.out.clone()))
        }
        Command::Szegedy(args) => {
            let (g, graph6) = load_graph(&args.graph)?;
            let report = szegedy_report(
                &g,
                &graph6,
                parse_pair(&args.from)?,
                parse_pair(&args.to)?,
                args.eps,
            )?;
            Ok((
                output::render_szegedy(&report, args.format.into())?,
                args.out.clone(),
            ))
        }
        Command::Mix(args) => {
            let (g, graph6) = load_graph(&args.graph)?;
            let choice = walk_choice(args.model, args.coin, args.index);
            let report = mix_report(&g, &graph6, &choice, args.horizon)?;
            Ok((
                output::render_mix(&report, args.format.into())?,
                args.out.clone(),
            ))
        }
        Command::Hit(args) => {
            let (g, graph6) = load_graph(&args.graph)?;
            let choice = walk_choice(args.model, args.coin, args.index);
            let report = hit_report(
                &g,
                &graph6,
                &choice,
                parse_pair(&args.from)?,
                parse_pair(&args.to)?,
                args.eps,
                args.k_max,
            )?;
            Ok((
                output::render_hit(&report, args.format.into())?,
                args.out.clone(),
            ))
        }
    }
}

/// Exit code classes: parse failures are 3, everything else is 2.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Graph6Parse { .. } | Error::UnsupportedSize { .. } => 3,
        _ => 2,
    }
}
