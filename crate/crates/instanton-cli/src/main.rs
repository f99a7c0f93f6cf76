//! `instanton`: validate Donaldson data, compute homology flavors and
//! spectral sequences, generate catalog data, reverse orientation.
//!
//! Exit codes: 0 success, 1 the datum fails a mathematical check,
//! 2 the input cannot be read or does not match the document schema.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use instanton::catalog::{self, CatalogError};
use instanton::document::{self, DocumentError};
use instanton::donaldson::{self, DonaldsonDatum, DonaldsonError, Flavor};
use instanton::exactlinalg::Ring;

#[derive(Parser)]
#[command(name = "instanton", version, about = "Equivariant instanton homology from finite Donaldson data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Tilde,
    Plus,
    Minus,
    Tate,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::Tilde => Flavor::Tilde,
            FlavorArg::Plus => Flavor::Plus,
            FlavorArg::Minus => Flavor::Minus,
            FlavorArg::Tate => Flavor::Tate,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a datum; prints "ok" or the list of violations.
    Validate {
        /// Datum document (stdin when omitted or "-").
        file: Option<PathBuf>,
    },
    /// Homology of one flavor.
    Compute {
        file: Option<PathBuf>,
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        /// Width of the reported range of unrolled degrees, centered at 0.
        #[arg(long, default_value_t = 24)]
        window: i64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Pages of the index spectral sequence.
    Ss {
        file: Option<PathBuf>,
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        /// Last page to compute.
        #[arg(long, default_value_t = 8)]
        pages: usize,
    },
    /// Built-in data, written as a datum document.
    Catalog {
        /// Q, Z or F<p> (for example F5).
        #[arg(long, default_value = "Q", global = true)]
        ring: String,
        #[command(subcommand)]
        entry: CatalogEntry,
    },
    /// Euler characteristic of the framed homology.
    Euler { file: Option<PathBuf> },
    /// The datum of the orientation-reversed manifold.
    Reverse { file: Option<PathBuf> },
}

#[derive(Subcommand)]
enum CatalogEntry {
    /// The lens space L(p, q).
    Lens { p: i64, q: i64 },
    /// S³.
    Sphere,
    /// The Poincaré sphere Σ(2,3,5).
    Poincare {
        /// Sign of the ±8 Floer U-map entries.
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        sign: i64,
    },
    /// Seeded random data with irreducible orbits only.
    Synthetic {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        orbits: usize,
    },
}

/// A failed run: exit code plus a JSON report for stderr.
struct Failure {
    code: u8,
    report: serde_json::Value,
}

impl Failure {
    fn schema(kind: &str, message: impl ToString) -> Failure {
        Failure { code: 2, report: json!({ "error": kind, "message": message.to_string() }) }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Failure {
        Failure { code: 2, report: e.to_json() }
    }
}

impl From<DonaldsonError> for Failure {
    fn from(e: DonaldsonError) -> Failure {
        let report = match &e {
            DonaldsonError::Invalid(v) => document::violations_json(v),
            _ => json!({ "error": "ComputationError", "message": e.to_string() }),
        };
        Failure { code: 1, report }
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Failure {
        Failure { code: 1, report: json!({ "error": "CatalogError", "message": e.to_string() }) }
    }
}

fn read_input(file: &Option<PathBuf>) -> Result<String, Failure> {
    let mut text = String::new();
    match file {
        Some(path) if path.as_os_str() != "-" => {
            text = std::fs::read_to_string(path).map_err(|e| Failure::schema("IoError", format!("{}: {}", path.display(), e)))?;
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::schema("IoError", e))?;
        }
    }
    Ok(text)
}

fn read_datum(file: &Option<PathBuf>) -> Result<DonaldsonDatum, Failure> {
    Ok(document::parse_datum(&read_input(file)?)?)
}

fn read_valid(file: &Option<PathBuf>) -> Result<DonaldsonDatum, Failure> {
    let datum = read_datum(file)?;
    let violations = donaldson::validate(&datum);
    if !violations.is_empty() {
        return Err(Failure { code: 1, report: document::violations_json(&violations) });
    }
    Ok(datum)
}

fn parse_ring(s: &str) -> Result<Ring, Failure> {
    let bad = || Failure::schema("RingError", format!("unknown ring {:?} (expected Q, Z or F<p>)", s));
    match s {
        "Q" => Ok(Ring::Rationals),
        "Z" => Ok(Ring::Integers),
        _ => {
            let p: u64 = s.strip_prefix('F').and_then(|p| p.parse().ok()).ok_or_else(bad)?;
            Ring::prime_field(p).map_err(|_| bad())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Validate { file } => {
            let datum = read_datum(&file)?;
            let violations = donaldson::validate(&datum);
            if violations.is_empty() {
                Ok("ok".to_string())
            } else {
                println!("{}", pretty(&document::violations_json(&violations)));
                Err(Failure { code: 1, report: json!({ "error": "ValidationFailed", "count": violations.len() }) })
            }
        }
        Command::Compute { file, flavor, window, format } => {
            let datum = read_valid(&file)?;
            let result = donaldson::compute(&datum, flavor.into(), window)?;
            Ok(match format {
                Format::Table => document::flavor_result_table(&result).trim_end().to_string(),
                Format::Json => pretty(&document::flavor_result_json(&result)),
            })
        }
        Command::Ss { file, flavor, pages } => {
            let datum = read_valid(&file)?;
            let iss = donaldson::index_spectral_sequence(&datum, flavor.into(), pages)?;
            Ok(pretty(&document::spectral_sequence_json(&iss)))
        }
        Command::Catalog { ring, entry } => {
            let ring = parse_ring(&ring)?;
            let datum = match entry {
                CatalogEntry::Lens { p, q } => catalog::lens_space(p, q, ring)?,
                CatalogEntry::Sphere => catalog::sphere(ring)?,
                CatalogEntry::Poincare { sign } => catalog::poincare_sphere(ring, sign)?,
                CatalogEntry::Synthetic { seed, orbits } => catalog::synthetic_admissible(seed, orbits, ring)?,
            };
            Ok(document::datum_to_json(&datum))
        }
        Command::Euler { file } => {
            let datum = read_valid(&file)?;
            Ok(donaldson::euler_characteristic(&datum).to_string())
        }
        Command::Reverse { file } => {
            let datum = read_valid(&file)?;
            Ok(document::datum_to_json(&donaldson::reverse_orientation(&datum)))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            // a closed pipe downstream is not an error here
            let _ = writeln!(std::io::stdout(), "{}", out);
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", pretty(&f.report));
            ExitCode::from(f.code)
        }
    }
}
