use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use schur_horn::{
    block_decompose, correct_diagonal, gen_violation_perturbation, schur_horn_correct, schur_horn_correct_hermitian,
    CorrectionCertificate, MatrixKind,
};
use schur_horn_harness::io::{read_json, read_matrix, write_json};
use schur_horn_harness::{epsilon_sweep, validate_certificate, Result, SweepConfig, ValidationTolerances};

#[derive(Parser)]
#[command(name = "shc", version, about = "Diagonal-preserving spectral corrections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a matrix with diagonal d and spectrum l.
    Construct {
        #[arg(short = 'd', long)]
        diagonal: PathBuf,
        #[arg(short = 'l', long)]
        lambda: PathBuf,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Correct matrix A to spectrum l, keeping its diagonal.
    Correct {
        #[arg(short = 'A', long)]
        matrix: PathBuf,
        #[arg(short = 'l', long)]
        lambda: PathBuf,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Print the block partition of A.
    Decompose {
        #[arg(short = 'A', long)]
        matrix: PathBuf,
    },
    /// Print a perturbation of l that breaks the i-th relation against d.
    Violate {
        #[arg(short = 'l', long)]
        lambda: PathBuf,
        #[arg(short = 'd', long)]
        diagonal: PathBuf,
        #[arg(short = 'i', long)]
        index: usize,
        #[arg(long)]
        eps: f64,
    },
    /// Run an epsilon sweep and write per-trial records as CSV.
    Sweep {
        #[arg(short = 'c', long)]
        config: PathBuf,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Re-check a certificate against A and l.
    Validate {
        #[arg(short = 'A', long)]
        matrix: PathBuf,
        #[arg(short = 'l', long)]
        lambda: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
}

fn summary(c: &CorrectionCertificate) -> serde_json::Value {
    json!({
        "diag_residual": c.diag_residual,
        "spectrum_residual": c.spectrum_residual,
        "distance_to_original": c.distance_to_original,
        "rotations": c.rotation_count(),
    })
}

/// Returns whether every check passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Construct { diagonal, lambda, out } => {
            let d: Vec<f64> = read_json(&diagonal)?;
            let l: Vec<f64> = read_json(&lambda)?;
            let c = correct_diagonal(&d, &l)?;
            write_json(&out, &c)?;
            println!("{}", summary(&c));
        }
        Command::Correct { matrix, lambda, out } => {
            let a = read_matrix(&matrix)?;
            let l: Vec<f64> = read_json(&lambda)?;
            let c = match a.kind() {
                MatrixKind::RealSymmetric => schur_horn_correct(&a, &l)?,
                MatrixKind::ComplexHermitian => schur_horn_correct_hermitian(&a, &l)?,
            };
            write_json(&out, &c)?;
            println!("{}", summary(&c));
        }
        Command::Decompose { matrix } => {
            let a = read_matrix(&matrix)?;
            let p = block_decompose(&a)?;
            println!("{}", serde_json::to_string_pretty(&p)?);
        }
        Command::Violate { lambda, diagonal, index, eps } => {
            let l: Vec<f64> = read_json(&lambda)?;
            let d: Vec<f64> = read_json(&diagonal)?;
            let lt = gen_violation_perturbation(&l, &d, index, eps)?;
            println!("{}", serde_json::to_string(&lt)?);
        }
        Command::Sweep { config, out } => {
            let cfg: SweepConfig = read_json(&config)?;
            let r = epsilon_sweep(&cfg)?;
            r.write_csv(BufWriter::new(File::create(&out)?))?;
            let s = json!({
                "family": cfg.family,
                "n": cfg.n,
                "records": r.records.len(),
                "failed": r.failures(),
                "fitted_slope": r.fit.slope,
                "slope_band": r.fit.band,
                "g1_slope": r.g1_fit.map(|f| f.slope),
                "g2_slope": r.g2_fit.map(|f| f.slope),
            });
            println!("{}", serde_json::to_string_pretty(&s)?);
        }
        Command::Validate { matrix, lambda, cert } => {
            let a = read_matrix(&matrix)?;
            let l: Vec<f64> = read_json(&lambda)?;
            let c: CorrectionCertificate = read_json(&cert)?;
            let r = validate_certificate(&a, &l, &c, ValidationTolerances::default());
            println!("{}", serde_json::to_string_pretty(&r)?);
            return Ok(r.all_ok());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_feasibility() { 2 } else { 1 })
        }
    }
}
