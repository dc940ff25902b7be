use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vplane::SystemKind;

mod commands;
mod error;

/// Hide and recover messages in virtual bit-planes of grayscale PGM images.
#[derive(Debug, Parser)]
#[command(name = "vplane", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the plane count, weights and representable range of a system.
    Plan {
        #[command(flatten)]
        system: SystemArgs,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Print canonical decompositions for a range of pixel values.
    Table {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value_t = 0)]
        from: u64,
        /// Last value (defaults to 2^k - 1).
        #[arg(long)]
        to: Option<u64>,
        /// Write CSV here instead of printing a table.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Write a synthetic 8-bit cover image.
    Synth {
        #[arg(long, value_enum)]
        pattern: PatternArg,
        #[arg(long, default_value_t = 64)]
        width: usize,
        #[arg(long, default_value_t = 64)]
        height: usize,
        /// Constant value or random seed, depending on the pattern.
        #[arg(long, default_value_t = 0)]
        value: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        force: bool,
    },
    /// Embed a message into a cover image.
    Embed(EmbedArgs),
    /// Recover a message from a stego image.
    Extract(ExtractArgs),
    /// Compare a cover and stego image.
    Analyze {
        cover: PathBuf,
        stego: PathBuf,
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        plane: usize,
        /// Write per-level histogram counts of both images as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Embed at every (system, plane) and tabulate distortion.
    Sweep {
        cover: PathBuf,
        /// Comma-separated systems.
        #[arg(long, value_delimiter = ',', default_value = "binary,natural,prime,fib:1")]
        systems: Vec<SystemKind>,
        /// Comma-separated plane indices (default: all planes of each system).
        #[arg(long, value_delimiter = ',')]
        planes: Option<Vec<usize>>,
        /// Text repeated to fill the cover.
        #[arg(long, default_value = "sandipan")]
        message: String,
        #[arg(long, default_value_t = 8)]
        k: u32,
        /// Write the report table here (stdout otherwise).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write per-plane weights of each system.
        #[arg(long)]
        weights_csv: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
}

#[derive(Debug, Clone, Args)]
struct SystemArgs {
    /// binary, natural, prime or fib:p
    #[arg(long, default_value = "natural")]
    system: SystemKind,
    /// Pixel bit depth.
    #[arg(long, default_value_t = 8)]
    k: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PatternArg {
    Gradient,
    Constant,
    Checker,
    Random,
}

#[derive(Debug, Args)]
struct EmbedArgs {
    cover: PathBuf,
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long)]
    plane: usize,
    /// Message text.
    #[arg(long, group = "source")]
    message: Option<String>,
    /// Read the message bytes from a file.
    #[arg(long, group = "source")]
    message_file: Option<PathBuf>,
    /// Random message of this many bytes (requires --seed).
    #[arg(long, group = "source")]
    random: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Repeat the message until the plane's capacity is used up.
    #[arg(long)]
    fill: bool,
    /// Omit the 32-bit length header; extract with --length.
    #[arg(long)]
    raw: bool,
    #[arg(long)]
    out: PathBuf,
    /// Also write the JSON report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    stego: PathBuf,
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long)]
    plane: usize,
    /// Message length in bits when no header was embedded.
    #[arg(long, conflicts_with = "prefix")]
    length: Option<u64>,
    /// Read the 32-bit length header (default).
    #[arg(long)]
    prefix: bool,
    /// Write the message here (stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    force: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
