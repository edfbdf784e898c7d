//! `locgen`: generation, certification, 1D graph tools, recodings and the
//! even tileset census from the command line.
//!
//! Exit codes: 0 proved / success, 1 refuted, 2 unknown, 3 input error.

mod args;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "locgen",
    version,
    about = "Local generation and finite certificates for subshifts of finite type"
)]
pub struct Cli {
    /// Write a run manifest to this path (`-` for stderr).
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a window of a configuration.
    Gen(GenArgs),
    /// Certify properties of patterns and regions.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Directed-graph tools for one-dimensional shifts.
    Graph1d {
        #[command(subcommand)]
        cmd: GraphCmd,
    },
    /// Higher power blocks, intertwining and input windows.
    Recode {
        #[command(subcommand)]
        cmd: RecodeCmd,
    },
    /// Census of even bicolor tilesets up to symmetry.
    Classify(ClassifyArgs),
    /// Render a pattern file as text or an image.
    Render(RenderArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Wires,
    Corners,
    Triangles,
    Dominoes,
    Checkerboard,
    Constant,
    Sturmian,
    Separation,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutFormat {
    Text,
    Pattern,
    Pgm,
    Ppm,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    Lower,
    Upper,
}

/// Where a subshift comes from: a built-in name or a tile set file.
#[derive(Args, Debug, Clone)]
pub struct SpecSource {
    /// Built-in subshift name.
    #[arg(long)]
    pub spec: Option<String>,
    /// Wang tile set file (`N E S W` per line).
    #[arg(long, conflicts_with = "spec")]
    pub tiles: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    pub generator: Generator,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `WxH[@x,y]` or, for 1D generators, `a..b`.
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    pub out: OutFormat,
    /// Pixels per cell in images.
    #[arg(long, default_value_t = 8)]
    pub scale: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Corner phases.
    #[arg(long, default_value_t = 0)]
    pub k: u8,
    #[arg(long, default_value_t = 0)]
    pub l: u8,
    /// Ramification radius.
    #[arg(long, default_value_t = 1)]
    pub r: i64,
    /// Ramification period `x,y`.
    #[arg(long)]
    pub v: Option<String>,
    /// Checkerboard parity, or the rational part of a Sturmian phase.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub phase: String,
    /// Coefficient of the slope in a Sturmian phase.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub alpha_coeff: i64,
    /// `silver`, `golden` or `p/q`.
    #[arg(long, default_value = "silver")]
    pub alpha: String,
    #[arg(long, value_enum, default_value_t = Convention::Lower)]
    pub convention: Convention,
    /// Bits of precision for irrational slopes.
    #[arg(long, default_value_t = 256)]
    pub bits: u32,
    /// Bit word for the separation map.
    #[arg(long)]
    pub prefix: Option<String>,
    /// Symbol for the constant generator.
    #[arg(long, default_value_t = 0)]
    pub symbol: u32,
    #[command(flatten)]
    pub source: SpecSource,
}

#[derive(Args, Debug, Clone)]
pub struct Limits {
    /// Largest invalidity window `Q_n`.
    #[arg(long, default_value_t = 6)]
    pub max_n: i64,
    /// Largest box side in the completion search.
    #[arg(long, default_value_t = 8)]
    pub period_bound: i64,
    /// Node budget per search.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
}

#[derive(Args, Debug, Clone)]
pub struct WitnessArgs {
    /// `triangles`, `dominoes` or `checkerboard`.
    #[arg(long)]
    pub spec: String,
    #[arg(long, default_value_t = 1)]
    pub r: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    /// Pattern support, as a region (default: the single cell at the origin).
    #[arg(long, default_value = "q:0")]
    pub f: String,
    #[arg(long, default_value_t = 1)]
    pub beta: i64,
    /// Extra cells around the graft neighbourhood.
    #[arg(long)]
    pub margin: Option<i64>,
}

#[derive(Subcommand, Debug)]
pub enum VerifyKind {
    /// Is a pattern valid?
    Validity {
        #[command(flatten)]
        source: SpecSource,
        #[arg(long)]
        pattern: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Are two regions independent?
    Independence {
        #[command(flatten)]
        source: SpecSource,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 2)]
        margin: i64,
        #[command(flatten)]
        limits: Limits,
    },
    /// Find an offset making a region independent of its translate.
    Weakmix {
        #[command(flatten)]
        source: SpecSource,
        #[arg(long, allow_hyphen_values = true)]
        region: String,
        /// `x,y;x,y;...` (default: `0,1` up to `0,6`).
        #[arg(long, allow_hyphen_values = true)]
        candidates: Option<String>,
        #[arg(long, default_value_t = 2)]
        margin: i64,
        #[command(flatten)]
        limits: Limits,
    },
    /// Graft the pattern at `lambda v + mu u` onto `lambda v`; succeeds (0) when refuted.
    Graft {
        #[command(flatten)]
        witness: WitnessArgs,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        lambda: i64,
        #[arg(long, default_value_t = 1)]
        mu: i64,
    },
    /// Check every graft of a ramification witness.
    Ramification {
        #[command(flatten)]
        witness: WitnessArgs,
        #[arg(long = "K", default_value_t = 2)]
        big_k: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum GraphCmd {
    /// Print `G^k`.
    Power {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: u64,
    },
    /// Least `k` with `G^k` transitive.
    Transitive {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Strongly connected components of `G^k` (default: least transitive `k`).
    Condense {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: Option<u64>,
    },
    /// Generate a walk on a 1D window.
    Walk {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "0..31", allow_hyphen_values = true)]
        window: String,
    },
    /// Vertex-shift graph of a built-in 1D subshift on words of length `n`.
    VertexShift {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum RecodeCmd {
    /// Higher power presentation of a pattern or a subshift.
    Block {
        /// Block vector, e.g. `2` or `2,1`.
        #[arg(long)]
        a: String,
        #[arg(long)]
        pattern: Option<PathBuf>,
        /// Alphabet size of the pattern (default: largest symbol + 1).
        #[arg(long)]
        alphabet: Option<usize>,
        #[command(flatten)]
        source: SpecSource,
    },
    /// Interleave part patterns (or split one with `--inverse`).
    Intertwine {
        #[arg(long)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long)]
        inverse: bool,
        /// Part files in block order, or the single pattern to split.
        files: Vec<PathBuf>,
    },
    /// Input windows and narrowness radius of a finite function.
    Window {
        #[arg(long, conflicts_with = "rule")]
        table: Option<PathBuf>,
        /// Built-in rule: `wires`, `identity` or `constant`.
        #[arg(long)]
        rule: Option<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Tsv,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Pick the symmetry group whose orbit count matches the reference census of 36 classes.
    #[arg(long)]
    pub auto_group: bool,
    /// Explicit generators, e.g. `rotate90,mirror`.
    #[arg(long, conflicts_with = "auto_group")]
    pub group: Option<String>,
    #[arg(long, default_value_t = 6)]
    pub window_n: i64,
    #[arg(long, default_value_t = 6)]
    pub period_bound: i64,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    pub format: TableFormat,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Text,
    Pgm,
    Ppm,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[arg(long)]
    pub pattern: PathBuf,
    #[command(flatten)]
    pub source: SpecSource,
    #[arg(long, value_enum, default_value_t = RenderFormat::Ppm)]
    pub format: RenderFormat,
    #[arg(long, default_value_t = 8)]
    pub scale: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 3,
            });
        }
    };
    let start = Instant::now();
    let outcome = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            commands::Outcome::new(3, format!("error: {e}"))
        }
    };
    if let Some(path) = &cli.manifest {
        let text = commands::manifest(&argv, &cli.command, &outcome, start.elapsed());
        let written = if path.as_os_str() == "-" {
            eprint!("{text}");
            Ok(())
        } else {
            std::fs::write(path, text)
        };
        if let Err(e) = written {
            eprintln!("error: cannot write manifest: {e}");
            return ExitCode::from(3);
        }
    }
    ExitCode::from(outcome.code as u8)
}
