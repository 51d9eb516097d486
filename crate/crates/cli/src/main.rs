mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use commands::{CliError, Emit};

#[derive(Parser, Debug)]
#[command(name = "tightram", version, about = "Tight components, fractional matchings, blow-ups and small Ramsey searches")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input document; standard input when omitted.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Node budget for backtracking searches.
    #[arg(long, global = true)]
    budget_nodes: Option<u64>,
    /// Worker threads for `ramsey`, `mu` and `cycle`.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Pipeline configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit a complete, random, dense or extremal instance.
    Gen(GenArgs),
    /// Tight components; monochromatic ones when the input is coloured.
    Components,
    /// Walk search, induced walks and the closed-walk structure check.
    Walk(WalkArgs),
    /// Monochromatic tight cycle or path search.
    Cycle(CycleArgs),
    /// Greedy, maximum or fractional (LP) matchings.
    Matching(MatchingArgs),
    /// Build blow-ups and convert matchings across them.
    #[command(subcommand)]
    Blowup(BlowupCommand),
    /// Run the matching-enlargement pipeline on a coloured instance.
    Pipeline,
    /// Check the parity colouring for monochromatic tight cycles.
    ExtremalVerify(ExtremalArgs),
    /// Exact small Ramsey numbers of tight paths and cycles.
    Ramsey(RamseyArgs),
    /// Exact minimum confined fractional matching over all colourings.
    Mu(MuArgs),
    /// The (mu, alpha)-density census.
    Density(DensityArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(short, default_value_t = 3)]
    pub k: usize,
    #[arg(short)]
    pub n: usize,
    /// The complete k-graph.
    #[arg(long, group = "kind")]
    pub complete: bool,
    /// Binomial random k-graph with edge probability P.
    #[arg(long, group = "kind", value_name = "P")]
    pub random: Option<String>,
    /// A (1-EPS, EPS)-dense k-graph.
    #[arg(long, group = "kind", value_name = "EPS")]
    pub dense: Option<String>,
    /// The parity colouring with no monochromatic tight cycle of length k·n + i.
    #[arg(long, group = "kind")]
    pub extremal: bool,
    #[arg(short, default_value_t = 0)]
    pub i: usize,
    /// Colour each edge red with this probability.
    #[arg(long, value_name = "P")]
    pub p_red: Option<String>,
    /// Colour every edge R or B.
    #[arg(long)]
    pub color: Option<String>,
}

#[derive(Args, Debug)]
pub struct WalkArgs {
    /// Shortest walk from this edge, e.g. `0,1,2`.
    #[arg(long, requires = "to")]
    pub from: Option<String>,
    #[arg(long)]
    pub to: Option<String>,
    /// The walk induced by a vertex sequence.
    #[arg(long, conflicts_with = "from")]
    pub sequence: Option<String>,
    /// Run the structure check with this 0-based pivot on the induced walk.
    #[arg(long, requires = "sequence")]
    pub pivot: Option<usize>,
    /// Draw a random case meeting the structure check's precondition.
    #[arg(long, conflicts_with_all = ["from", "sequence"])]
    pub sample: bool,
    /// Swap the roles of red and blue in the structure check.
    #[arg(long)]
    pub reversed: bool,
    #[arg(long, default_value_t = 6)]
    pub max_filler: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ShapeArg {
    Cycle,
    Path,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ColorArg {
    Any,
    Red,
    Blue,
}

#[derive(Args, Debug)]
pub struct CycleArgs {
    #[arg(long)]
    pub length: usize,
    #[arg(long, value_enum, default_value_t = ShapeArg::Cycle)]
    pub shape: ShapeArg,
    #[arg(long, value_enum, default_value_t = ColorArg::Any)]
    pub color: ColorArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum MatchingMethod {
    Greedy,
    Max,
    Lp,
}

#[derive(Args, Debug)]
pub struct MatchingArgs {
    #[arg(long, value_enum, default_value_t = MatchingMethod::Greedy)]
    pub method: MatchingMethod,
    /// Restrict to one monochromatic component, e.g. `red:0`.
    #[arg(long)]
    pub component: Option<String>,
    #[arg(long, default_value_t = tightram_core::matching::DEFAULT_MATCHING_EDGE_CAP)]
    pub edge_cap: usize,
}

#[derive(Subcommand, Debug)]
pub enum BlowupCommand {
    /// The r-blow-up of a coloured graph with its component map.
    Build {
        #[arg(short)]
        r: usize,
    },
    /// Move a fractional matching between a graph and its r-blow-up.
    Convert {
        #[arg(short)]
        r: usize,
        /// Fractional matching document.
        #[arg(long)]
        matching: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long, default_value_t = 1)]
        rprime: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Direction {
    Lift,
    Project,
}

#[derive(Args, Debug)]
pub struct ExtremalArgs {
    #[arg(short, default_value_t = 3)]
    pub k: usize,
    #[arg(short)]
    pub n: usize,
    #[arg(short, default_value_t = 0)]
    pub i: usize,
}

#[derive(Args, Debug)]
pub struct RamseyArgs {
    #[arg(long, value_enum, default_value_t = ShapeArg::Path)]
    pub shape: ShapeArg,
    #[arg(short, default_value_t = 3)]
    pub k: usize,
    /// Vertices of the target path or cycle.
    #[arg(short)]
    pub m: usize,
    /// Largest host size tried.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, default_value_t = tightram_core::search::DEFAULT_RAMSEY_EDGE_CAP)]
    pub edge_cap: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum MuModeArg {
    Single,
    RedBlue,
}

#[derive(Args, Debug)]
pub struct MuArgs {
    #[arg(short, default_value_t = 3)]
    pub k: usize,
    #[arg(short)]
    pub n: usize,
    /// Weight floor; `1/k!` when omitted.
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long, value_enum, default_value_t = MuModeArg::Single)]
    pub mode: MuModeArg,
    #[arg(long, default_value_t = tightram_core::matching::DEFAULT_MU_EDGE_CAP)]
    pub edge_cap: usize,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[arg(long)]
    pub mu: String,
    #[arg(long)]
    pub alpha: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    subcommand: &'a str,
    argv: Vec<String>,
    seed: Option<u64>,
    caps: Caps,
    wall_time_ms: u128,
    exit_code: u8,
    output_sha256: String,
}

#[derive(Serialize)]
struct Caps {
    budget_nodes: Option<u64>,
    workers: Option<usize>,
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Gen(_) => "gen",
        Command::Components => "components",
        Command::Walk(_) => "walk",
        Command::Cycle(_) => "cycle",
        Command::Matching(_) => "matching",
        Command::Blowup(_) => "blowup",
        Command::Pipeline => "pipeline",
        Command::ExtremalVerify(_) => "extremal-verify",
        Command::Ramsey(_) => "ramsey",
        Command::Mu(_) => "mu",
        Command::Density(_) => "density",
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let result = commands::run(&cli);
    let (emit, error) = match result {
        Ok(emit) => (emit, None),
        Err(err) => (Emit { body: String::new(), exit: err.exit_code() }, Some(err)),
    };
    let mut exit = emit.exit;
    if error.is_none() {
        if let Err(e) = write_output(&cli, &emit.body) {
            eprintln!("{}", serde_json::json!({"error": "io", "message": e.to_string()}));
            exit = 2;
        }
    }
    if let Some(err) = &error {
        eprintln!("{}", err.to_json());
    }
    let manifest = Manifest {
        subcommand: subcommand_name(&cli.command),
        argv: argv[1..].to_vec(),
        seed: cli.seed,
        caps: Caps {
            budget_nodes: cli.budget_nodes,
            workers: cli.workers,
        },
        wall_time_ms: start.elapsed().as_millis(),
        exit_code: exit,
        output_sha256: hex::encode(Sha256::digest(emit.body.as_bytes())),
    };
    eprintln!("{}", serde_json::to_string(&manifest).expect("manifest serializes"));
    ExitCode::from(exit)
}

fn write_output(cli: &Cli, body: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, body),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()
        }
    }
}

impl CliError {
    fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Core(e) => serde_json::json!({"error": e.code(), "message": e.to_string()}),
            CliError::Usage(m) => serde_json::json!({"error": "usage", "message": m}),
            CliError::Io(m) => serde_json::json!({"error": "io", "message": m}),
        }
    }
}
