//! Batch command-line front end: argument parsing, dispatch to the
//! computational modules, artifact emission and exit codes.

mod commands;
pub mod emit;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::Error;
use crate::media::{PermittivityModel, Polarization};
use emit::{to_json, write_artifact, Cell, Format, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

/// Command-line arguments.
#[derive(Debug, Clone, Parser)]
#[command(
    name = "casimir",
    version,
    about = "Mode spectra, Lifshitz integrals and Casimir stresses of planar dielectrics"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Run a configuration previously emitted in a JSON report; other flags
    /// are ignored.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Permittivity model: const:xi=X, plasma:xi=X, lorentz:kappa0=K,omega0=W or pc.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Output path; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Relative quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Transverse cutoff.
    #[arg(long = "R0", global = true)]
    pub r0: Option<f64>,
    /// Imaginary-frequency cutoff.
    #[arg(long, global = true)]
    pub rho: Option<f64>,
    /// Real-frequency cutoff of the spectral summation.
    #[arg(long = "Lambda", global = true)]
    pub lambda_cutoff: Option<f64>,
    #[arg(long = "omega-max", global = true)]
    pub omega_max: Option<f64>,
    #[arg(long, global = true)]
    pub nmax: Option<u32>,
    #[arg(long, global = true, default_value_t = 1.0)]
    pub lambda1: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    pub lambda2: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    pub lambda: f64,
    /// Gap width in metres.
    #[arg(long = "Lz", global = true)]
    pub lz: Option<f64>,
    /// Restrict to TE (both polarizations when neither flag is given).
    #[arg(long, global = true)]
    pub te: bool,
    /// Restrict to TM.
    #[arg(long, global = true)]
    pub tm: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Cauchy,
    Unitarity,
    Kappa1,
    Positivity,
    Pc,
    Vankampen,
}

/// Subcommands.
#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Closed-cavity roots for one family or all families up to --nmax.
    CavitySpectrum {
        /// Mode word; all eight when absent.
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        nx: Option<u32>,
        #[arg(long)]
        ny: Option<u32>,
    },
    /// Integer solutions of the OLO (TE) and LOL (TM) conditions.
    Diophantine {
        #[arg(long)]
        word: String,
        /// Exact xi (integer, p/q or decimal); taken from --model when absent.
        #[arg(long)]
        xi: Option<String>,
    },
    /// Branch-point and pole loci on an R grid up to --R0.
    Loci {
        #[arg(long = "r-min")]
        r_min: Option<f64>,
        #[arg(long = "r-steps", default_value_t = 100)]
        r_steps: usize,
    },
    /// Reflection and transmission amplitudes of a propagating word.
    Scattering {
        #[arg(long, default_value = "OOO")]
        word: String,
        #[arg(long)]
        omega: f64,
        #[arg(long = "R")]
        r: f64,
        /// Incidence direction, R or L.
        #[arg(long, default_value = "R")]
        direction: String,
    },
    /// Real poles of the open system at one R.
    Poles {
        #[arg(long = "R")]
        r: f64,
    },
    /// Imaginary-axis integral, and the spectral summation when --Lambda is given.
    Lifshitz,
    /// Interaction energy and pressure at gap --Lz.
    Casimir,
    /// Density of states on a frequency grid up to --omega-max.
    Dos {
        #[arg(long, default_value_t = 120)]
        bins: usize,
    },
    /// Non-retarded plasmon energy and stress for a lorentz model with omega0 in rad/s.
    Plasmon {
        #[arg(long, default_value_t = 30)]
        nterms: u32,
    },
    /// Verification suites; exit 3 when a check fails.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CavitySpectrum { .. } => "cavity-spectrum",
            Command::Diophantine { .. } => "diophantine",
            Command::Loci { .. } => "loci",
            Command::Scattering { .. } => "scattering",
            Command::Poles { .. } => "poles",
            Command::Lifshitz => "lifshitz",
            Command::Casimir => "casimir",
            Command::Dos { .. } => "dos",
            Command::Plasmon { .. } => "plasmon",
            Command::Verify { .. } => "verify",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Lifshitz
            | Command::Casimir
            | Command::Plasmon { .. }
            | Command::Verify { .. } => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// Fully resolved run configuration. Infinite cutoffs are stored as `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub model: Option<PermittivityModel>,
    pub polarizations: Vec<Polarization>,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda: f64,
    pub lz: Option<f64>,
    pub r0: Option<f64>,
    pub rho: Option<f64>,
    pub lambda_cutoff: Option<f64>,
    pub omega_max: Option<f64>,
    pub nmax: Option<u32>,
    pub tol: f64,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn finite_positive(name: &str, v: Option<f64>) -> Result<Option<f64>, String> {
    match v {
        Some(x) if x.is_infinite() && x > 0.0 => Ok(None),
        Some(x) if !(x > 0.0) => Err(format!("--{name} must be positive, got {x}")),
        other => Ok(other),
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, String> {
        let command = cli.command.ok_or("a subcommand is required (see --help)")?;
        let g = cli.global;
        let model = g
            .model
            .as_deref()
            .map(str::parse::<PermittivityModel>)
            .transpose()
            .map_err(|e| e.to_string())?;
        let polarizations = match (g.te, g.tm) {
            (true, false) => vec![Polarization::TE],
            (false, true) => vec![Polarization::TM],
            _ => Polarization::BOTH.to_vec(),
        };
        let config = RunConfig {
            format: g.format.unwrap_or_else(|| command.default_format()),
            command,
            model,
            polarizations,
            lambda1: g.lambda1,
            lambda2: g.lambda2,
            lambda: g.lambda,
            lz: g.lz,
            r0: finite_positive("R0", g.r0)?,
            rho: finite_positive("rho", g.rho)?,
            lambda_cutoff: finite_positive("Lambda", g.lambda_cutoff)?,
            omega_max: finite_positive("omega-max", g.omega_max)?,
            nmax: g.nmax,
            tol: g.tol,
            seed: g.seed,
            out: g.out,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(format!("--tol must lie in (0, 1), got {}", self.tol));
        }
        for (name, v) in [
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
            ("lambda", self.lambda),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("--{name} must be positive and finite, got {v}"));
            }
        }
        if let Some(l) = self.lz {
            if !(l > 0.0 && l.is_finite()) {
                return Err(format!("--Lz must be positive and finite, got {l}"));
            }
        }
        if self.nmax == Some(0) {
            return Err("--nmax must be at least 1".into());
        }
        Ok(())
    }
}

/// Outcome of a command: a table, plus pass/fail for verification commands.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub passed: Option<bool>,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InvalidArgument(_)
            | Error::UnsupportedModel(_)
            | Error::KinematicMismatch(_)
            | Error::Domain(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

struct Rows<'a>(&'a Table);

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = ser.serialize_seq(Some(self.0.rows.len()))?;
        for row in &self.0.rows {
            seq.serialize_element(&Row(&self.0.header, row))?;
        }
        seq.end()
    }
}

struct Row<'a>(&'a [&'static str], &'a [Cell]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut map = ser.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            match v {
                Cell::Num(x) if x.is_finite() => map.serialize_entry(k, x)?,
                Cell::Num(x) => map.serialize_entry(k, &emit::format_f64(*x))?,
                Cell::Int(i) => map.serialize_entry(k, i)?,
                Cell::Bool(b) => map.serialize_entry(k, b)?,
                Cell::Text(t) => map.serialize_entry(k, t)?,
            }
        }
        map.end()
    }
}

/// JSON report: the command echo, the configuration and the result rows.
#[derive(Serialize)]
struct Report<'a> {
    command: &'static str,
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    passed: Option<bool>,
    rows: Rows<'a>,
}

/// Renders the artifact text of an outcome.
pub fn render(config: &RunConfig, outcome: &Outcome) -> Result<String, CliError> {
    match config.format {
        Format::Csv => Ok(outcome.table.to_csv()),
        Format::Json => to_json(&Report {
            command: config.command.name(),
            config,
            passed: outcome.passed,
            rows: Rows(&outcome.table),
        })
        .map_err(|e| CliError::Numerical(e.to_string())),
    }
}

/// Runs a resolved configuration, writes its artifact and returns the exit
/// code. Wall time goes to standard error so that artifacts stay
/// byte-identical across runs.
pub fn run(config: &RunConfig) -> i32 {
    let start = Instant::now();
    let result = commands::dispatch(config).and_then(|o| {
        let text = render(config, &o)?;
        write_artifact(config.out.as_deref(), &text)
            .map_err(|e| CliError::Numerical(format!("cannot write output: {e}")))?;
        Ok(o)
    });
    eprintln!(
        "{}: {:.3} s",
        config.command.name(),
        start.elapsed().as_secs_f64()
    );
    match result {
        Ok(Outcome {
            passed: Some(false),
            ..
        }) => {
            eprintln!("verification failed");
            EXIT_VERIFICATION
        }
        Ok(_) => EXIT_OK,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(CliError::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            EXIT_NUMERICAL
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code: 0 success, 1 usage error, 2 numerical failure, 3
/// verification failure.
pub fn execute<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let config = match &cli.global.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))
            .and_then(|text| config_from_report(&text)),
        None => RunConfig::from_cli(cli),
    };
    match config {
        Ok(c) => run(&c),
        Err(m) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
    }
}

/// Extracts the configuration from a JSON report, or parses a bare
/// configuration object.
pub fn config_from_report(text: &str) -> Result<RunConfig, String> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let inner = v.get("config").cloned().unwrap_or(v);
    let config: RunConfig = serde_json::from_value(inner).map_err(|e| e.to_string())?;
    config.validate()?;
    Ok(config)
}
