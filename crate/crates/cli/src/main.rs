mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use output::{error_json, Output};

#[derive(Parser)]
#[command(name = "tropos", version, about = "Tropicalization, potential cones and Poisson brackets on SL_n")]
struct Cli {
    /// Output format written to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Coords {
    Theta,
    Matrix,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum LevelArg {
    Fast,
    Full,
}

/// Comma-separated positive integers, e.g. `1,2,1`.
#[derive(Clone, Debug)]
pub struct Word(pub Vec<usize>);

/// Comma-separated reals.
#[derive(Clone, Debug)]
pub struct Floats(pub Vec<f64>);

fn word_arg(s: &str) -> Result<Word, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().ok().filter(|&x| x > 0).ok_or_else(|| format!("bad letter `{t}` in word `{s}`")))
        .collect::<Result<_, _>>()
        .map(Word)
}

fn n_arg(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if (2..=6).contains(&n) => Ok(n),
        _ => Err(format!("n must be an integer in 2..=6, got `{s}`")),
    }
}

fn sign_arg(s: &str) -> Result<i32, String> {
    match s {
        "1" | "+1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err(format!("sign must be 1 or -1, got `{s}`")),
    }
}

fn floats_arg(s: &str) -> Result<Floats, String> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad number `{t}`"))).collect::<Result<_, _>>().map(Floats)
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Tropicalize one expression, or a map given by several.
    Trop {
        #[arg(long, required = true)]
        expr: Vec<String>,
        /// Comma-separated variable order; defaults to the sorted variables.
        #[arg(long)]
        vars: Option<String>,
        /// Rational point at which to evaluate the tropicalization.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Strict cone {ξ : φ^t(ξ) < 0 for all φ}.
    Cone {
        #[arg(long = "phi", required = true)]
        phi: Vec<String>,
        #[arg(long)]
        vars: Option<String>,
        /// Test membership of a rational point.
        #[arg(long, allow_hyphen_values = true)]
        member: Option<String>,
    },
    /// Decide whether f^t < 0 on the cone of the potentials.
    Dominate {
        #[arg(long = "phi", required = true)]
        phi: Vec<String>,
        #[arg(long)]
        f: String,
        #[arg(long)]
        vars: Option<String>,
    },
    /// String cone of SL_n from its potentials.
    StringCone {
        #[arg(long, value_parser = n_arg)]
        n: usize,
        #[arg(long, value_parser = word_arg)]
        word: Word,
        #[arg(long, value_enum, default_value_t = Coords::Theta)]
        coords: Coords,
        /// Simple-root word E_{j1}..E_{jk} for an estimate certificate.
        #[arg(long, value_parser = word_arg, requires = "minor")]
        estimate: Option<Word>,
        /// Minor as rows,cols, e.g. 12,23.
        #[arg(long, requires = "estimate")]
        minor: Option<String>,
    },
    /// Bracket table of the dual group in cluster coordinates.
    GstarBracket {
        #[arg(long, value_parser = n_arg)]
        n: usize,
        #[arg(long, value_parser = word_arg)]
        word: Word,
        /// 1-based coordinate pair i,j.
        #[arg(long, value_parser = word_arg)]
        pair: Option<Word>,
        #[arg(long, default_value = "1/2")]
        form_scale: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true, value_parser = sign_arg)]
        sign: i32,
    },
    /// Certify every mixed residual against the dual-group cone.
    VerifyWlc {
        #[arg(long, value_parser = n_arg)]
        n: usize,
        #[arg(long, value_parser = word_arg)]
        word: Word,
        #[arg(long, default_value = "1/2")]
        form_scale: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true, value_parser = sign_arg)]
        sign: i32,
    },
    /// Partial tropicalization: cone, torus and constant bracket.
    Pt {
        #[arg(long, value_parser = n_arg)]
        n: usize,
        #[arg(long, value_parser = word_arg)]
        word: Word,
    },
    /// Measured brackets along the scaling family at sampled cone points.
    Scaling {
        #[arg(long, value_parser = n_arg)]
        n: usize,
        #[arg(long, value_parser = word_arg)]
        word: Word,
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long, default_value_t = 60.0)]
        smax: f64,
        #[arg(long, default_value_t = 5.0)]
        step: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also run the outside-cone control.
        #[arg(long)]
        probe: bool,
        /// Write per-entry measurements here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// (1/s) log|f| and arg f along e^{sξ+iν}.
    PlLimit {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        vars: Option<String>,
        #[arg(long, value_parser = floats_arg, allow_hyphen_values = true)]
        xi: Floats,
        #[arg(long, value_parser = floats_arg, allow_hyphen_values = true)]
        nu: Floats,
        #[arg(long, value_parser = floats_arg, default_value = "5,10,20,40,60")]
        s_grid: Floats,
    },
    /// Run the self-check suite.
    Verify {
        #[arg(value_enum, default_value_t = LevelArg::Fast)]
        level: LevelArg,
        /// Override the invariant form scale (a wrong value must fail calibration).
        #[arg(long, default_value = "1/2")]
        form_scale: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("TROPOS_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| format!("TROPOS_THREADS must be a positive integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn emit(out: &Output, fmt: Emit) -> std::io::Result<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match fmt {
        Emit::Json => {
            serde_json::to_writer_pretty(&mut lock, &out.json)?;
            writeln!(lock)?;
        }
        Emit::Csv => out.table.write_to(&mut lock).map_err(std::io::Error::other)?,
    }
    lock.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match commands::run(cli.cmd) {
        Ok(out) => {
            if let Err(e) = emit(&out, cli.emit) {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    return ExitCode::SUCCESS;
                }
                eprintln!("{}", error_json("IoError", &e.to_string()));
                return ExitCode::from(1);
            }
            ExitCode::from(out.status as u8)
        }
        Err(e) => {
            println!("{}", error_json(e.kind(), &e.message()));
            ExitCode::from(1)
        }
    }
}
