//! `leaky`: exact one-part k-leaky double Hurwitz descendants from the shell.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use leaky_core::arith::{format_decimal, format_fraction};
use leaky_core::compute::{compute, crosscheck, ComputeRequest, Method, ResultRecord};
use leaky_core::formulas::hg_k0_descendant;
use leaky_core::poly::interpolate_h0_on;
use leaky_core::poly::SampleGrid;
use leaky_core::profile::ProfileJson;
use leaky_core::recursion::Recursions;
use leaky_core::trop::{cover_to_dot, enumerate_covers, CoverRecord};
use leaky_core::{s_series, Error, FractionJson, Profile};
use serde::Serialize;
use serde_json::json;

/// Environment variable naming the on-disk memo file. Unset: no persistence.
const CACHE_ENV: &str = "LEAKY_MEMO_CACHE";

#[derive(Parser)]
#[command(name = "leaky", version, about = "Exact one-part k-leaky double Hurwitz descendants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one invariant.
    Compute {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, default_value = "auto")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
        /// Also print an approximate decimal (display only).
        #[arg(long)]
        decimal: bool,
    },
    /// Evaluate by every applicable method and compare exactly.
    Crosscheck {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Reconstruct the genus-zero polynomial for an exponent pattern.
    Interpolate {
        #[arg(long)]
        m: usize,
        #[arg(long, value_delimiter = ',')]
        psi: Vec<u32>,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Print the S(z) coefficient table, or evaluate the k = 0 series formula.
    Series {
        /// Truncation order of the table.
        #[arg(long, conflicts_with_all = ["genus", "nu"])]
        order: Option<usize>,
        #[arg(long, requires = "nu")]
        genus: Option<u32>,
        /// Defaults to the sum of the negative parts (k = 0).
        #[arg(long)]
        d: Option<i64>,
        #[arg(long, value_delimiter = ',', requires = "genus")]
        nu: Option<Vec<i64>>,
        #[arg(long, default_value_t = 0)]
        e0: u32,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// List genus-zero tropical covers, one record per line.
    Covers {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Emit Graphviz DOT instead of JSON records.
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long, default_value_t = 0)]
    genus: u32,
    #[arg(long, allow_negative_numbers = true)]
    d: Option<i64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    nu: Vec<i64>,
    /// Exponents `e0,e1,...,em`; all zero when omitted.
    #[arg(long, value_delimiter = ',')]
    psi: Vec<u32>,
    /// The whole profile as JSON `{"genus", "d", "nu", "psi"}` instead of flags.
    #[arg(long, conflicts_with_all = ["d", "nu", "psi"])]
    json: Option<String>,
}

impl ProfileArgs {
    fn profile(&self) -> Result<Profile, Error> {
        if let Some(text) = &self.json {
            let raw: ProfileJson =
                serde_json::from_str(text).map_err(|e| Error::Validation(format!("profile JSON: {e}")))?;
            return Profile::try_from(raw);
        }
        let d = self.d.ok_or_else(|| Error::Validation("missing --d".into()))?;
        let psi = if self.psi.is_empty() { vec![0; self.nu.len() + 1] } else { self.psi.clone() };
        Profile::validate(self.genus, d, &self.nu, &psi)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Formula,
    Recursion,
    Tropical,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Formula => Method::Formula,
            MethodArg::Recursion => Method::Recursion,
            MethodArg::Tropical => Method::Tropical,
        }
    }
}

enum Failure {
    Engine(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Engine(Error::Unsupported(_) | Error::Domain(_)) => 4,
            Failure::Engine(Error::InconsistentSamples(_)) | Failure::Mismatch(_) => 3,
            Failure::Engine(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Mismatch(_) => "mismatch",
            Failure::Engine(e) => match e {
                Error::Validation(_) => "validation",
                Error::Range(_) => "range",
                Error::Domain(_) => "domain",
                Error::Unsupported(_) => "unsupported",
                Error::NonUnitSeries | Error::SeriesIndex { .. } => "series",
                Error::InconsistentSamples(_) => "inconsistent-samples",
                Error::Parse(_) => "parse",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Mismatch(m) => m.clone(),
            Failure::Engine(e) => e.to_string(),
        }
    }
}

/// The recursion engine, preloaded from the memo file if one is configured.
struct Session {
    engine: Recursions,
    cache: Option<PathBuf>,
}

impl Session {
    fn open() -> Result<Self, Error> {
        let engine = Recursions::new();
        let cache = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
        if let Some(path) = &cache {
            engine.load(path)?;
        }
        Ok(Self { engine, cache })
    }

    fn close(self) -> Result<(), Error> {
        if let Some(path) = &self.cache {
            self.engine.save(path)?;
        }
        Ok(())
    }
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn print_record(record: &ResultRecord, output: Output, decimal: bool) -> Result<(), Error> {
    match output {
        Output::Json => print_json(record),
        Output::Text => {
            let value = record.value()?;
            println!("{}", format_fraction(&value));
            if decimal {
                println!("~ {} (approximate)", format_decimal(&value, 12));
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Compute { profile, method, output, decimal } => {
            let session = Session::open()?;
            let req = ComputeRequest { profile: profile.profile()?, method: method.into() };
            let record = compute(&req, &session.engine)?;
            print_record(&record, output, decimal)?;
            session.close()?;
        }
        Command::Crosscheck { profile, output } => {
            let session = Session::open()?;
            let p = profile.profile()?;
            let report = crosscheck(&p, &session.engine)?;
            match output {
                Output::Json => print_json(&report),
                Output::Text => {
                    for entry in &report.entries {
                        println!(
                            "{:<10} {}/{}  ({} us)",
                            entry.method.name(), entry.value.num, entry.value.den, entry.elapsed_us
                        );
                    }
                    println!("{}", if report.agree { "agree" } else { "MISMATCH" });
                }
            }
            session.close()?;
            if !report.agree {
                if matches!(output, Output::Text) && !report.diagnostics.is_empty() {
                    eprintln!("{}", serde_json::to_string_pretty(&report.diagnostics).expect("serializable"));
                }
                let values: Vec<String> =
                    report.entries.iter().map(|e| format!("{}={}/{}", e.method, e.value.num, e.value.den)).collect();
                return Err(Failure::Mismatch(format!("methods disagree: {}", values.join(", "))));
            }
        }
        Command::Interpolate { m, psi, output } => {
            if psi.len() != m + 1 {
                return Err(Error::Validation(format!("--psi needs {} entries, got {}", m + 1, psi.len())).into());
            }
            let session = Session::open()?;
            let poly = interpolate_h0_on(&session.engine, &psi, SampleGrid::primary())?;
            match output {
                Output::Json => print_json(&poly.to_json()),
                Output::Text => println!("{poly}"),
            }
            session.close()?;
        }
        Command::Series { order, genus, d, nu, e0, output } => match (order, genus, nu) {
            (_, Some(genus), Some(nu)) => {
                let d = d.unwrap_or_else(|| nu.iter().sum());
                let mut psi = vec![0; nu.len() + 1];
                psi[0] = e0;
                let p = Profile::validate(genus, d, &nu, &psi)?;
                let start = std::time::Instant::now();
                let value = hg_k0_descendant(genus, e0, d, &nu)?;
                let record = ResultRecord {
                    request: p.to_json(),
                    requested: Method::Formula,
                    method: Method::Formula,
                    k: p.k(),
                    value: FractionJson::from(&value),
                    elapsed_us: start.elapsed().as_micros() as u64,
                };
                print_record(&record, output, false)?;
            }
            (order, None, None) => {
                let s = s_series(order.unwrap_or(7));
                match output {
                    Output::Json => {
                        let coeffs: Vec<FractionJson> = s.coeffs().iter().map(FractionJson::from).collect();
                        print_json(&json!({ "order": s.order(), "coefficients": coeffs }));
                    }
                    Output::Text => {
                        for (i, c) in s.coeffs().iter().enumerate() {
                            println!("z^{i}\t{}", format_fraction(c));
                        }
                    }
                }
            }
            _ => return Err(Error::Validation("series needs --order, or both --genus and --nu".into()).into()),
        },
        Command::Covers { profile, dot } => {
            let p = profile.profile()?;
            let stdout = io::stdout();
            let mut out = io::BufWriter::new(stdout.lock());
            for cover in enumerate_covers(&p)? {
                let line = if dot {
                    cover_to_dot(&cover, &p)
                } else {
                    serde_json::to_string(&CoverRecord::new(&cover, &p)).expect("serializable")
                };
                if writeln!(out, "{line}").is_err() {
                    break;
                }
            }
            let _ = out.flush();
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{}", json!({ "error": failure.kind(), "message": failure.message() }));
            ExitCode::from(failure.code())
        }
    }
}
