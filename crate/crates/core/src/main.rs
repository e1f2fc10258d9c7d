use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gaussmap::catalog;
use gaussmap::sampling::{ToleranceProfile, DEFAULT_SEED};
use gaussmap::verify::{self, CheckId, ScanRequest, VerifyRequest};
use gaussmap::Error;

/// Numerical checks of rough Laplacians, Simons operators and Gauss-map
/// harmonicity on catalogued submanifolds.
#[derive(Parser)]
#[command(name = "gaussmap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one check (or `all`) and emit a report.
    Verify {
        /// Check id, or `all` for every check on its default example.
        check: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run a check over a parameter grid, one row per grid point.
    Scan {
        check: String,
        /// Grid spec, e.g. `r=0.2:0.8:7;theta=0,1.5`. Keys appearing as
        /// `{key}` in --example are substituted there.
        #[arg(long)]
        grid: String,
        #[command(flatten)]
        common: Common,
    },
    /// List checks, examples and tolerance profiles.
    List,
}

#[derive(clap::Args)]
struct Common {
    /// Catalog example, e.g. `circles(0.6)`.
    #[arg(long)]
    example: Option<String>,
    /// Check parameter `key=value`; repeatable.
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
    /// Sample seed; falls back to GAUSSMAP_SEED, then 42.
    #[arg(long)]
    seed: Option<u64>,
    /// Tolerance profile.
    #[arg(long, default_value = "default")]
    tol: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Common {
    fn seed(&self) -> Result<u64, Error> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var("GAUSSMAP_SEED") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|e| Error::Usage(format!("GAUSSMAP_SEED={v}: {e}"))),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }

    fn params(&self) -> Result<BTreeMap<String, String>, Error> {
        let mut out = BTreeMap::new();
        for p in &self.params {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("--param '{p}' must be key=value")))?;
            if out.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Usage(format!("--param '{k}' given twice")));
            }
        }
        Ok(out)
    }

    fn emit(&self, json: String, csv: impl FnOnce() -> Result<String, Error>) -> Result<(), Error> {
        let text = match self.format {
            Format::Json => json,
            Format::Csv => csv()?,
        };
        match &self.out {
            None => {
                print!("{text}");
                Ok(())
            }
            Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            }),
        }
    }
}

fn list() {
    println!("checks:");
    for c in CheckId::ALL {
        println!("  {:<20} {} (default example: {})", c.name(), c.description(), c.default_example());
    }
    println!("examples:");
    for (name, about) in catalog::names() {
        println!("  {name:<20} {about}");
    }
    println!("tolerance profiles: {}", ToleranceProfile::names().join(", "));
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::List => {
            list();
            Ok(false)
        }
        Command::Verify { check, common } => {
            let check = match check.as_str() {
                "all" => None,
                other => Some(other.parse::<CheckId>()?),
            };
            let req = VerifyRequest {
                check,
                example: common.example.clone(),
                params: common.params()?,
                seed: common.seed()?,
                tolerance: ToleranceProfile::by_name(&common.tol)?,
            };
            let report = verify::verify(&req)?;
            common.emit(report.to_json(), || report.to_csv())?;
            Ok(report.failed())
        }
        Command::Scan { check, grid, common } => {
            let req = ScanRequest {
                check: check.parse()?,
                example: common.example.clone(),
                grid,
                params: common.params()?,
                seed: common.seed()?,
                tolerance: ToleranceProfile::by_name(&common.tol)?,
            };
            let report = verify::scan(&req)?;
            common.emit(report.to_json(), || report.to_csv())?;
            Ok(report.failed())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Usage(_) | Error::Domain(_) | Error::Contract(_) | Error::Io { .. } => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(1),
            }
        }
    }
}
