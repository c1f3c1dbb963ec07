//! Command-line front end: load states, witnesses, and maps from JSON
//! files, run the analyses, and print human- or machine-readable
//! reports.
//!
//! Exit codes are the scripting contract:
//!   0  success
//!   1  unreadable or unparsable input file
//!   2  invariant violation (bad dimensions, non-Hermitian input,
//!      density checks, bad rank)
//!   3  `analyze` certified the state as entangled
//!   4  `bellbound` observed a distance below the 1/4 bound

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sepkit::io::{self, FileError, MatrixFile};
use sepkit::maps::{self, KPositivityVerdict, PositivityVerdict};
use sepkit::separability::{self, Classification};
use sepkit::witness::{self, BlockPositivityVerdict};
use sepkit::C64;

#[derive(Parser)]
#[command(
    name = "sepkit",
    version,
    about = "Separability analysis for bipartite quantum states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a state file: PPT spectrum, block structure, distance
    /// estimate, and an overall classification.
    Analyze {
        /// Path to a `state` MatrixFile.
        path: PathBuf,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
        /// Frank-Wolfe iteration budget for the distance estimate.
        #[arg(long, default_value_t = 500)]
        iterations: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Witness operations: conversions, block positivity, detection.
    Witness {
        #[command(subcommand)]
        command: WitnessCommand,
    },
    /// Map operations: positivity hierarchy tests.
    Map {
        #[command(subcommand)]
        command: MapCommand,
    },
    /// Check the 1/4 trace-norm distance bound between the maximally
    /// entangled 2x2 state and random separable mixtures.
    Bellbound {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// Read a map file and write the corresponding witness.
    FromMap {
        path: PathBuf,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read a witness file and write the corresponding map (Choi form).
    ToMap {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numeric block-positivity verdict plus spectral summary.
    Check {
        path: PathBuf,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Evaluate Tr(H rho) for a witness against a state.
    Detect { witness: PathBuf, state: PathBuf },
}

#[derive(Subcommand)]
enum MapCommand {
    /// Positive / k-positive / completely positive verdicts.
    Test {
        path: PathBuf,
        /// Also test k-positivity at this k.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

/// Error plus the exit code it maps to.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<FileError> for CliError {
    fn from(err: FileError) -> Self {
        let code = if err.is_parse() { 1 } else { 2 };
        CliError::new(code, err.to_string())
    }
}

impl From<witness::WitnessError> for CliError {
    fn from(err: witness::WitnessError) -> Self {
        CliError::new(2, err.to_string())
    }
}

impl From<maps::MapError> for CliError {
    fn from(err: maps::MapError) -> Self {
        CliError::new(2, err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Analyze {
            path,
            json,
            iterations,
            seed,
        } => cmd_analyze(&path, json, iterations, seed),
        Command::Witness { command } => match command {
            WitnessCommand::FromMap { path, out } => cmd_witness_from_map(&path, out.as_deref()),
            WitnessCommand::ToMap { path, out } => cmd_witness_to_map(&path, out.as_deref()),
            WitnessCommand::Check {
                path,
                restarts,
                seed,
            } => cmd_witness_check(&path, restarts, seed),
            WitnessCommand::Detect { witness, state } => cmd_witness_detect(&witness, &state),
        },
        Command::Map { command } => match command {
            MapCommand::Test {
                path,
                k,
                restarts,
                seed,
            } => cmd_map_test(&path, k, restarts, seed),
        },
        Command::Bellbound { samples, seed } => cmd_bellbound(samples, seed),
    }
}

fn write_or_print(file: &MatrixFile, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            file.save(path)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            println!("{}", file.to_json());
            Ok(())
        }
    }
}

fn fmt_vec(v: &[C64]) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
        .collect();
    format!("[{}]", parts.join(", "))
}

fn cmd_analyze(path: &Path, json: bool, iterations: usize, seed: u64) -> Result<u8, CliError> {
    let state = io::load_state(path)?;
    let report = separability::analyze_with(&state, iterations, seed);
    if json {
        let value = serde_json::json!({
            "classification": report.classification.to_string(),
            "pptMinEig": report.ppt.min_eigenvalue,
            "blockResidual": report.block.residual,
            "distance": report.distance,
            "runtimeMs": report.runtime_ms,
        });
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    } else {
        println!(
            "state: {} ({}x{})",
            path.display(),
            state.d_a(),
            state.d_b()
        );
        println!(
            "ppt: {} (min eigenvalue of partial transpose {:.6e})",
            if report.ppt.is_ppt { "yes" } else { "NO" },
            report.ppt.min_eigenvalue
        );
        println!(
            "horodecki scan (transposition): min eigenvalue {:.6e}",
            report.horodecki_min_eigenvalue
        );
        println!(
            "block structure: residual {:.6e}, max commutator {:.6e}, product-like: {}",
            report.block.residual,
            report.block.max_commutator,
            if report.block.is_product_like {
                "yes"
            } else {
                "no"
            }
        );
        match report.distance {
            Some(d) => println!("separable-set distance (Frobenius, upper bound): {d:.6e}"),
            None => println!("separable-set distance: skipped (dimension above cap)"),
        }
        println!("classification: {}", report.classification);
        println!("runtime: {} ms", report.runtime_ms);
    }
    Ok(if report.classification == Classification::EntangledCertified {
        3
    } else {
        0
    })
}

fn cmd_witness_from_map(path: &Path, out: Option<&Path>) -> Result<u8, CliError> {
    let map = io::load_map(path)?;
    let w = witness::witness_from_map(&map)?;
    write_or_print(&io::witness_to_file(&w), out)?;
    Ok(0)
}

fn cmd_witness_to_map(path: &Path, out: Option<&Path>) -> Result<u8, CliError> {
    let w = io::load_witness(path)?;
    let map = witness::map_from_witness(&w);
    write_or_print(&io::map_to_file(&map), out)?;
    Ok(0)
}

fn cmd_witness_check(path: &Path, restarts: Option<usize>, seed: u64) -> Result<u8, CliError> {
    let w = io::load_witness(path)?;
    let restarts = restarts.unwrap_or_else(|| maps::default_restarts(w.d_a(), w.d_b()));
    let trace = w.h().trace().re;
    let min_eig = w.min_eigenvalue()?;
    println!("witness: {} ({}x{})", path.display(), w.d_a(), w.d_b());
    println!("trace: {trace:.6}");
    println!("min eigenvalue: {min_eig:.6e}");
    match witness::is_block_positive_numeric(&w, restarts, seed) {
        BlockPositivityVerdict::BlockPositive { min_found } => {
            println!("block-positive: empirical-yes (search minimum {min_found:.3e})");
            if min_eig < 0.0 {
                println!("witness class: block-positive but not PSD (detects entanglement)");
            } else {
                println!("witness class: PSD (detects nothing)");
            }
        }
        BlockPositivityVerdict::NotBlockPositive { z, v, value } => {
            println!("block-positive: NO (value {value:.6e})");
            println!("violating z: {}", fmt_vec(&z));
            println!("violating v: {}", fmt_vec(&v));
        }
        BlockPositivityVerdict::Inconclusive { reason } => {
            println!("block-positive: inconclusive ({reason})");
        }
    }
    Ok(0)
}

fn cmd_witness_detect(witness_path: &Path, state_path: &Path) -> Result<u8, CliError> {
    let w = io::load_witness(witness_path)?;
    let state = io::load_state(state_path)?;
    let d = witness::detects(&w, &state)?;
    println!("Tr(H rho) = {:.9}", d.value);
    println!("detected: {}", d.detected);
    Ok(0)
}

fn cmd_map_test(
    path: &Path,
    k: Option<usize>,
    restarts: Option<usize>,
    seed: u64,
) -> Result<u8, CliError> {
    let map = io::load_map(path)?;
    let restarts = restarts.unwrap_or_else(|| maps::default_restarts(map.d_in(), map.d_out()));
    println!(
        "map: {} (M_{} -> M_{})",
        path.display(),
        map.d_in(),
        map.d_out()
    );
    match maps::is_positive_numeric(&map, restarts, seed) {
        PositivityVerdict::Positive { min_found } => {
            println!("positive: empirical-yes (search minimum {min_found:.3e})");
        }
        PositivityVerdict::NotPositive { x, y, value } => {
            println!("positive: NO (value {value:.6e})");
            println!("violating x: {}", fmt_vec(&x));
            println!("violating y: {}", fmt_vec(&y));
        }
        PositivityVerdict::Inconclusive { reason } => {
            println!("positive: inconclusive ({reason})");
        }
    }
    if let Some(k) = k {
        match maps::is_k_positive_numeric(&map, k, restarts, seed)? {
            KPositivityVerdict::KPositive { min_found } => {
                println!("{k}-positive: empirical-yes (search minimum {min_found:.3e})");
            }
            KPositivityVerdict::NotKPositive { psi, value } => {
                println!("{k}-positive: NO (value {value:.6e})");
                println!("violating vector: {}", fmt_vec(&psi));
            }
            KPositivityVerdict::Inconclusive { reason } => {
                println!("{k}-positive: inconclusive ({reason})");
            }
        }
    }
    let cp = maps::is_completely_positive(&map)?;
    println!(
        "completely positive: {} (min Choi eigenvalue {:.6e})",
        if cp.is_cp { "yes" } else { "NO" },
        cp.min_eigenvalue
    );
    Ok(0)
}

fn cmd_bellbound(samples: usize, seed: u64) -> Result<u8, CliError> {
    let res = separability::bell_bound_check(samples, seed);
    println!("samples: {samples}");
    println!(
        "min trace-norm distance to sampled separable mixtures: {:.9}",
        res.min_trace_norm_distance
    );
    println!("bound 0.25: {}", if res.pass { "pass" } else { "FAIL" });
    Ok(if res.pass { 0 } else { 4 })
}
