use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use flametemp_cli::cases::{prepare_database, run_case, CaseSpec, Fuel, Mode, Oxidizer};
use flametemp_cli::curves::{curves_csv, CurveRequest};
use flametemp_cli::output::{render_case, render_table, Format, TableRow};
use flametemp_cli::validate::{render_report, validate_database};
use flametemp_core::prelude::*;

#[derive(Parser)]
#[command(
    name = "flametemp",
    version,
    about = "Adiabatic flame temperatures from NASA 7-coefficient thermodynamic data",
    long_about = "Computes adiabatic flame temperatures for CH4/H2 in O2 or air, either \
                  under single-step complete combustion (enthalpy-balance root solve) or \
                  at chemical equilibrium (Gibbs minimization at constant enthalpy and \
                  pressure), using the bundled GRI-Mech 3.0 data."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a single fuel/oxidizer case
    Run(RunArgs),
    /// Run the full 8-case reference matrix and compare to published values
    Table(TableArgs),
    /// Export enthalpy curves (CSV) for selected species
    Curves(CurvesArgs),
    /// Parse and validate a thermo database file
    ValidateDb(ValidateDbArgs),
}

#[derive(Args)]
struct DbOpts {
    /// Thermo database file; defaults to the bundled GRI-Mech 3.0 data
    #[arg(long, env = "FLAMETEMP_DB", value_name = "PATH")]
    db: Option<PathBuf>,
    /// Leave the N2 low-range a6 coefficient at its original value
    #[arg(long)]
    no_n2_patch: bool,
}

#[derive(Args)]
struct OutOpts {
    /// Output format
    #[arg(long, value_enum, default_value = "table")]
    format: CliFormat,
    /// Write output to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Include provenance notes for the reference constants
    #[arg(long)]
    explain: bool,
}

#[derive(Args)]
struct RunArgs {
    /// Fuel species
    #[arg(long, value_enum)]
    fuel: CliFuel,
    /// Oxidizer preset
    #[arg(long, value_enum)]
    oxidizer: CliOxidizer,
    /// Product-composition model
    #[arg(long, value_enum)]
    mode: CliMode,
    /// Reactant temperature, K
    #[arg(long, default_value_t = T_REF)]
    t0: f64,
    /// Pressure, Pa
    #[arg(long, default_value_t = P_STANDARD)]
    pressure: f64,
    #[command(flatten)]
    db: DbOpts,
    #[command(flatten)]
    out: OutOpts,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    db: DbOpts,
    #[command(flatten)]
    out: OutOpts,
}

#[derive(Args)]
struct CurvesArgs {
    /// Comma-separated species names
    #[arg(long, value_delimiter = ',', required = true)]
    species: Vec<String>,
    /// Grid start, K
    #[arg(long, default_value_t = 300.0)]
    t_min: f64,
    /// Grid end, K
    #[arg(long, default_value_t = 3500.0)]
    t_max: f64,
    /// Grid spacing, K
    #[arg(long, default_value_t = 50.0)]
    step: f64,
    /// Thermo database file(s); repeat for side-by-side columns. Defaults to
    /// the bundled GRI-Mech 3.0 data
    #[arg(long, env = "FLAMETEMP_DB", value_name = "PATH")]
    db: Vec<PathBuf>,
    /// Leave the N2 low-range a6 coefficient at its original value
    #[arg(long)]
    no_n2_patch: bool,
    /// Write output to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateDbArgs {
    /// Thermo database file to validate
    path: PathBuf,
    /// Apply the N2 coefficient correction before validating
    #[arg(long)]
    n2_patch: bool,
    /// Write output to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum CliFuel {
    Ch4,
    H2,
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum CliOxidizer {
    O2,
    Air3,
    Air4,
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum CliMode {
    Complete,
    Equilibrium,
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum CliFormat {
    Table,
    Csv,
    Json,
    Md,
}

impl From<CliFuel> for Fuel {
    fn from(v: CliFuel) -> Fuel {
        match v {
            CliFuel::Ch4 => Fuel::Ch4,
            CliFuel::H2 => Fuel::H2,
        }
    }
}
impl From<CliOxidizer> for Oxidizer {
    fn from(v: CliOxidizer) -> Oxidizer {
        match v {
            CliOxidizer::O2 => Oxidizer::O2,
            CliOxidizer::Air3 => Oxidizer::Air3,
            CliOxidizer::Air4 => Oxidizer::Air4,
        }
    }
}
impl From<CliMode> for Mode {
    fn from(v: CliMode) -> Mode {
        match v {
            CliMode::Complete => Mode::Complete,
            CliMode::Equilibrium => Mode::Equilibrium,
        }
    }
}
impl From<CliFormat> for Format {
    fn from(v: CliFormat) -> Format {
        match v {
            CliFormat::Table => Format::Table,
            CliFormat::Csv => Format::Csv,
            CliFormat::Json => Format::Json,
            CliFormat::Md => Format::Md,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// 0 success, 2 usage, 3 parse, 4 solver non-convergence (1 otherwise).
fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<flametemp_core::Error>() {
        Some(core) => match core {
            Error::Parse { .. } | Error::DuplicateSpecies { .. } | Error::Serialize(_) => 3,
            Error::NoBracket { .. }
            | Error::NoConvergence { .. }
            | Error::SingularSystem { .. }
            | Error::NoCandidates(_) => 4,
            Error::Domain { .. }
            | Error::InvalidInput(_)
            | Error::UnknownSpecies(_)
            | Error::UnsupportedFuel { .. }
            | Error::RichMixture { .. }
            | Error::Patch(_) => 2,
        },
        None => 1,
    }
}

fn load_database(path: Option<&Path>) -> Result<ThermoDatabase> {
    match path {
        None => Ok(ThermoDatabase::bundled().clone()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .with_context(|| format!("reading database {}", p.display()))?;
            Ok(parse_thermo_text(&text)
                .with_context(|| format!("parsing database {}", p.display()))?)
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Run(args) => {
            let base = load_database(args.db.db.as_deref())?;
            let db = prepare_database(&base, !args.db.no_n2_patch)?;
            let spec = CaseSpec {
                fuel: args.fuel.into(),
                oxidizer: args.oxidizer.into(),
                mode: args.mode.into(),
                t0: args.t0,
                pressure: args.pressure,
                patch_n2: !args.db.no_n2_patch,
            };
            let result = run_case(&spec, &db)?;
            emit(
                &render_case(&result, args.out.format.into(), args.out.explain),
                args.out.out.as_deref(),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Table(args) => {
            let base = load_database(args.db.db.as_deref())?;
            let db = prepare_database(&base, !args.db.no_n2_patch)?;
            let patch = !args.db.no_n2_patch;
            let specs: Vec<CaseSpec> = CaseSpec::paper_matrix()
                .into_iter()
                .map(|s| CaseSpec { patch_n2: patch, ..s })
                .collect();
            // independent solves over a shared immutable database; rows are
            // assembled in case order regardless of completion order
            let rows: Vec<TableRow> = std::thread::scope(|scope| {
                let handles: Vec<_> = specs
                    .iter()
                    .map(|spec| {
                        let db = &db;
                        scope.spawn(move || run_case(spec, db).map_err(|e| (*spec, e.to_string())))
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("case thread"))
                    .collect()
            });
            let (text, all_ok) = render_table(&rows, args.out.format.into(), args.out.explain);
            emit(&text, args.out.out.as_deref())?;
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            })
        }
        Cmd::Curves(args) => {
            let labeled: Vec<(String, ThermoDatabase)> = if args.db.is_empty() {
                vec![("bundled".to_string(), ThermoDatabase::bundled().clone())]
            } else {
                args.db
                    .iter()
                    .map(|p| Ok((p.display().to_string(), load_database(Some(p))?)))
                    .collect::<Result<_>>()?
            };
            let patched: Vec<(String, ThermoDatabase)> = labeled
                .into_iter()
                .map(|(label, db)| {
                    let db = prepare_database(&db, !args.no_n2_patch)?;
                    Ok((label, db))
                })
                .collect::<Result<_>>()?;
            let req = CurveRequest {
                species: args.species,
                t_min: args.t_min,
                t_max: args.t_max,
                step: args.step,
            };
            let text = curves_csv(&patched, &req)?;
            emit(&text, args.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::ValidateDb(args) => {
            let base = load_database(Some(&args.path))?;
            let db = prepare_database(&base, args.n2_patch)?;
            let report = validate_database(&db)?;
            emit(&render_report(&report), args.out.as_deref())?;
            Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
