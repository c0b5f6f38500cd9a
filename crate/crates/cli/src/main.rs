use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use entpdf::statelib::{Family, FamilySpec};
use entpdf_cli::commands::{self, VerifyOptions};
use entpdf_cli::{exit, load_state, to_json, CliError};

#[derive(Parser)]
#[command(name = "entpdf", version, about = "Entanglement densities of two-qubit mixed states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the seven markers plus concurrence and negativity.
    Markers { state: PathBuf },
    /// Print the placement angles needed to rebuild a state from its markers.
    Extras { state: PathBuf },
    /// Write per-subspace and combined density curves plus a manifest.
    Pdf {
        state: PathBuf,
        #[arg(long, default_value_t = commands::DEFAULT_GRID)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare each subspace density against Monte Carlo sampling.
    Verify {
        state: PathBuf,
        #[arg(long, default_value_t = commands::DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = commands::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = commands::DEFAULT_BINS)]
        bins: usize,
        #[arg(long, default_value_t = commands::DEFAULT_GRID)]
        grid: usize,
    },
    /// Generate a state from one of the built-in families.
    Gen(GenArgs),
    /// Rebuild a state (up to local operations) from markers and extras.
    Reconstruct {
        markers: PathBuf,
        extras: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct GenArgs {
    /// product, vector_polarized, pseudopure, cross_tensor or quadrupolar
    family: Option<String>,
    /// Read a {"family", "params"} JSON file instead.
    #[arg(long, conflicts_with = "family")]
    spec: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    k1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    k2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lam: Option<f64>,
    #[arg(long, visible_alias = "mu-q", allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

impl GenArgs {
    fn spec(&self) -> Result<FamilySpec, CliError> {
        if let Some(path) = &self.spec {
            return commands::read_json(path);
        }
        let name = self
            .family
            .as_deref()
            .ok_or_else(|| CliError::input("gen needs a family name or --spec"))?;
        let family: Family = name.parse()?;
        let given = [
            ("k1", self.k1),
            ("k2", self.k2),
            ("p1", self.p1),
            ("p2", self.p2),
            ("k", self.k),
            ("p", self.p),
            ("lam", self.lam),
            ("mu_q", self.mu),
        ];
        let params: Vec<(&str, f64)> = given.iter().filter_map(|(n, v)| v.map(|v| (*n, v))).collect();
        Ok(FamilySpec::new(family, &params))
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Markers { state } => {
            println!("{}", to_json(&commands::markers(&load_state(&state)?)?));
        }
        Command::Extras { state } => {
            println!("{}", to_json(&commands::extras(&load_state(&state)?)?));
        }
        Command::Pdf { state, grid, out } => {
            let manifest = commands::pdf(&load_state(&state)?, grid, &out)?;
            println!("{}", to_json(&manifest));
        }
        Command::Verify { state, samples, seed, bins, grid } => {
            let opts = VerifyOptions { samples, seed, bins, grid };
            let report = commands::verify(&load_state(&state)?, &opts)?;
            println!("{}", to_json(&report));
            if !report.pass {
                for line in report.diagnostics() {
                    eprintln!("verify: {line}");
                }
                return Ok(exit::FAILED);
            }
        }
        Command::Gen(args) => {
            let (file, expected) = commands::gen(&args.spec()?)?;
            file.write(&args.out)?;
            println!("{}", to_json(&expected));
        }
        Command::Reconstruct { markers, extras, out } => {
            let ms = commands::read_json(&markers)?;
            let ex = commands::read_json(&extras)?;
            let (file, report) = commands::reconstruct(&ms, &ex)?;
            file.write(&out)?;
            println!("{}", to_json(&report));
        }
    }
    Ok(exit::OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
