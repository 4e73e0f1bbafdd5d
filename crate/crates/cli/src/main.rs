//! relqi — command-line front end.
//!
//! One binary, subcommand style. JSON commands emit a schema-stable run
//! report; CSV commands emit `#` metadata lines plus plain rows. Exit
//! codes: 0 success, 1 usage/format errors, 2 domain errors, 3 accuracy
//! errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::{render, Meta};

const DEFAULT_SEED: u64 = 1;
const DEFAULT_NODES: usize = 32;

#[derive(Parser, Debug)]
#[command(
    name = "relqi",
    version,
    about = "Wigner rotations, frame decoherence channels, and invariant encodings",
    disable_help_subcommand = true
)]
struct Cli {
    /// RNG seed (precedence: this flag, then config file, then RELQI_SEED,
    /// then the built-in default).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Suppress timestamp and wall-time fields for byte-identical reruns.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Write the report/CSV to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Flat key=value defaults (seed, quadrature-nodes, deterministic,
    /// no-validate); explicit flags win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Gauss–Hermite nodes per momentum axis.
    #[arg(long, global = true, value_name = "N")]
    quadrature_nodes: Option<usize>,
    /// Accept state files that fail normalization checks (renormalizing).
    #[arg(long, global = true)]
    no_validate: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Wigner rotation of a boost acting on a massive momentum.
    Wigner {
        /// Boost velocity "vx,vy,vz" with |v| < 1.
        #[arg(long, value_name = "VX,VY,VZ")]
        boost: String,
        /// Spatial momentum "px,py,pz" in units of mc (energy on shell).
        #[arg(long, value_name = "PX,PY,PZ")]
        momentum: String,
    },
    /// Displaced-packet overlap table (CSV).
    Overlap {
        /// Momentum spread Δ in units of mc.
        #[arg(long)]
        delta: f64,
        /// Largest displacement; defaults to 6/Δ.
        #[arg(long)]
        a_max: Option<f64>,
        /// Number of grid points.
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Decoherence channels (JSON report).
    Channel {
        #[command(subcommand)]
        kind: ChannelCmd,
    },
    /// Average a register over unknown frame orientations.
    Twirl {
        /// Register size (1 = the single-qubit twirl).
        #[arg(long)]
        qubits: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
        /// Monte Carlo sample count.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Input state file; defaults to |0…0⟩⟨0…0|.
        #[arg(long, value_name = "PATH")]
        state: Option<PathBuf>,
    },
    /// Noiseless-subsystem codecs.
    Codec {
        #[command(subcommand)]
        op: CodecCmd,
    },
    /// Multiplicity table (CSV): one row per (n, j) sector.
    Multiplicity {
        #[arg(long)]
        n_max: usize,
    },
    /// Massless little group and the two-photon code.
    Photon {
        #[command(subcommand)]
        op: PhotonCmd,
    },
    /// Parameter sweeps (CSV).
    Sweep {
        #[arg(long, value_enum)]
        kind: SweepKind,
        /// Fixed boost speed (delta sweep).
        #[arg(long)]
        v: Option<f64>,
        #[arg(long)]
        v_min: Option<f64>,
        #[arg(long)]
        v_max: Option<f64>,
        /// Fixed spread (v sweep).
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        delta_min: Option<f64>,
        #[arg(long)]
        delta_max: Option<f64>,
        #[arg(long)]
        points: usize,
        /// Input state file; defaults to |+⟩⟨+|.
        #[arg(long, value_name = "PATH")]
        state: Option<PathBuf>,
    },
    /// Run the built-in invariant suite.
    Selftest,
}

#[derive(Subcommand, Debug)]
enum ChannelCmd {
    /// Leading-order boost channel with Γ = (1−√(1−v²))Δ/v.
    BoostApprox {
        #[arg(long)]
        v: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, value_name = "PATH")]
        state: Option<PathBuf>,
    },
    /// Exact quadrature boost channel over a Gaussian packet.
    BoostExact {
        #[arg(long)]
        v: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, value_name = "PATH")]
        state: Option<PathBuf>,
    },
    /// Prior-weighted mixture of leading-order boost channels.
    Mixture {
        /// Grid "v:w,v:w,…"; weights are normalized.
        #[arg(long)]
        prior: String,
        #[arg(long)]
        delta: f64,
        #[arg(long, value_name = "PATH")]
        state: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum CodecCmd {
    /// Emit the codec (n, j, isometry) as JSON.
    Info {
        #[arg(long)]
        n: usize,
        /// Doubled sector spin 2j.
        #[arg(long)]
        two_j: u32,
        #[arg(long)]
        dim: usize,
    },
    /// Encode a logical state file into the physical register.
    Encode {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        two_j: u32,
        #[arg(long)]
        dim: usize,
        #[arg(long, value_name = "PATH")]
        state: PathBuf,
        /// Also write the physical state to this file.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Project a physical state file back to the logical space.
    Decode {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        two_j: u32,
        #[arg(long)]
        dim: usize,
        #[arg(long, value_name = "PATH")]
        state: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum PhotonCmd {
    /// Little-group phase ω and null-rotation diagnostic β.
    Phase {
        /// Optional rotation "ax,ay,az,angle" applied first.
        #[arg(long, value_name = "AX,AY,AZ,ANGLE")]
        rotate: Option<String>,
        /// Optional boost velocity "vx,vy,vz" applied second.
        #[arg(long, value_name = "VX,VY,VZ")]
        boost: Option<String>,
        /// Spatial photon momentum "kx,ky,kz".
        #[arg(long, value_name = "KX,KY,KZ")]
        momentum: String,
    },
    /// Encode a one-qubit state file into a two-photon pair.
    Encode {
        #[arg(long, value_name = "PATH")]
        state: PathBuf,
        #[arg(long, value_name = "KX,KY,KZ")]
        momentum: String,
        /// Also write the bare pair-state JSON to this file.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Decode a two-photon pair file back to the logical qubit.
    Decode {
        #[arg(long, value_name = "PATH")]
        pair: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum MethodArg {
    Exact,
    Mc,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum SweepKind {
    V,
    Delta,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(relqi::Error),
}

impl From<relqi::Error> for CliError {
    fn from(e: relqi::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) if e.is_format() => 1,
            CliError::Core(e) if e.is_accuracy() => 3,
            CliError::Core(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Core(e) => format!("error: {e}"),
        }
    }
}

/// Effective global options after merging config-file defaults.
struct Globals {
    seed: u64,
    deterministic: bool,
    quadrature_nodes: usize,
    no_validate: bool,
    output: Option<PathBuf>,
}

fn load_config(path: &PathBuf) -> Result<std::collections::BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {path:?}: {e}")))?;
    let mut map = std::collections::BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {} is not key=value", lineno + 1))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn resolve_globals(cli: &Cli) -> Result<Globals, CliError> {
    let config = match &cli.config {
        Some(path) => load_config(path)?,
        None => Default::default(),
    };
    let parse_u64 = |key: &str| -> Result<Option<u64>, CliError> {
        config
            .get(key)
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|_| CliError::Usage(format!("config {key}={v} is not an integer")))
            })
            .transpose()
    };
    let parse_bool = |key: &str| -> Result<Option<bool>, CliError> {
        config
            .get(key)
            .map(|v| match v.as_str() {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                other => Err(CliError::Usage(format!("config {key}={other} is not a bool"))),
            })
            .transpose()
    };

    let env_seed = match std::env::var("RELQI_SEED") {
        Ok(v) => Some(v.parse::<u64>().map_err(|_| {
            CliError::Usage(format!("RELQI_SEED={v} is not a 64-bit unsigned integer"))
        })?),
        Err(_) => None,
    };
    let seed = cli
        .seed
        .or(parse_u64("seed")?)
        .or(env_seed)
        .unwrap_or(DEFAULT_SEED);
    let quadrature_nodes = cli
        .quadrature_nodes
        .or(parse_u64("quadrature-nodes")?.map(|v| v as usize))
        .unwrap_or(DEFAULT_NODES);
    if !(4..=128).contains(&quadrature_nodes) {
        return Err(CliError::Usage(format!(
            "quadrature-nodes {quadrature_nodes} outside 4..=128"
        )));
    }
    let deterministic = cli.deterministic || parse_bool("deterministic")?.unwrap_or(false);
    let no_validate = cli.no_validate || parse_bool("no-validate")?.unwrap_or(false);
    Ok(Globals {
        seed,
        deterministic,
        quadrature_nodes,
        no_validate,
        output: cli.output.clone(),
    })
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version are success paths; everything else is usage.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };

    let globals = match resolve_globals(&cli) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("{}", e.message());
            std::process::exit(e.exit_code());
        }
    };

    let meta = Meta {
        command: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
        seed: globals.seed,
        quadrature_nodes: globals.quadrature_nodes,
        deterministic: globals.deterministic,
        config: serde_json::json!({
            "seed": globals.seed,
            "quadrature_nodes": globals.quadrature_nodes,
            "deterministic": globals.deterministic,
            "no_validate": globals.no_validate,
        }),
        started: Instant::now(),
        timestamp_ms: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0),
    };

    let outcome = commands::dispatch(&cli.command, &globals, &meta);
    match outcome {
        Ok((payload, diagnostics, exit_code)) => {
            let text = render(&meta, payload, diagnostics);
            if let Some(path) = &globals.output {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {path:?}: {e}");
                    std::process::exit(1);
                }
            } else {
                print!("{text}");
            }
            std::process::exit(exit_code);
        }
        Err(e) => {
            eprintln!("{}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
