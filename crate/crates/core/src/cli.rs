//! Command-line front end.
//!
//! Exit codes: 0 success or certification pass, 1 usage error, 2 validation
//! failure (including a Kodaira dimension other than 1 where thresholds are
//! requested), 3 certification failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use serde::Serialize;

use crate::canonical::canonical_data;
use crate::enumerator::{certify_bound, classify_case, enumerate_configs, Exclusion, RegionBounds};
use crate::error::Error;
use crate::examples::{builtin, plurigenus_table, table_to_csv, table_to_text};
use crate::invariants::{
    kodaira_value, validate_with, FiberDatum, FiberKind, SurfaceConfig, ValidationOptions,
};
use crate::threshold::{
    stable_threshold, stable_threshold_with, ThresholdOptions, DEFAULT_SCAN_CAP,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CERT_FAIL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qell",
    version,
    about = "Multicanonical thresholds of quasi-elliptic surfaces in characteristics 2 and 3"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// JSON; newline-delimited records for streams.
    Structured,
    /// Comma-separated values with a header row.
    Delimited,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a configuration and show its canonical data.
    Analyze {
        #[command(flatten)]
        config: ConfigArgs,
        /// Require a wild fiber whenever t > 0.
        #[arg(long)]
        strict: bool,
    },
    /// Plurigenus table for m = 1..=m_max.
    Table {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = 10)]
        m_max: i64,
    },
    /// Stable threshold certificate.
    Threshold {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = DEFAULT_SCAN_CAP)]
        scan_cap: i64,
    },
    /// Stream every configuration in a region with its thresholds.
    Enumerate {
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Certify the supremum of stable thresholds over a region.
    Certify {
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Print the built-in configurations.
    Examples {
        /// Print only this configuration (example-3-1 or question-3-3).
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// JSON configuration file with fields p, g, chi, t, fibers.
    #[arg(long, conflicts_with_all = ["p", "g", "chi", "t", "fiber"])]
    pub config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub chi: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<i64>,
    /// Multiple fiber as KIND:A (e.g. tame:2, wild:1) or bare `tame`; repeatable.
    #[arg(long)]
    pub fiber: Vec<String>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub p: i64,
    #[arg(long, default_value_t = 4)]
    pub g_max: i64,
    #[arg(long = "chi-t-max", default_value_t = 6, allow_negative_numbers = true)]
    pub chi_t_max: i64,
    #[arg(long, default_value_t = 6)]
    pub lambda_max: i64,
    /// Named exclusion rule (question-3-3); repeatable.
    #[arg(long)]
    pub exclude: Vec<String>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidConfig(_) | Error::NotKodairaOne { .. } => EXIT_INVALID,
            _ => EXIT_USAGE,
        };
        let message = match &e {
            Error::NotKodairaOne { .. } => format!(
                "{e}; thresholds are defined only when the Kodaira dimension is 1 \
                 (2g-2+chi+t+sum(a_i)/p > 0)"
            ),
            _ => e.to_string(),
        };
        Self { code, message }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type CliResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the invocation.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult {
    match &cli.command {
        Command::Analyze { config, strict } => analyze(&config.load()?, *strict, cli.format, out),
        Command::Table { config, m_max } => table(&config.load()?, *m_max, cli.format, out),
        Command::Threshold { config, scan_cap } => {
            threshold(&config.load()?, *scan_cap, cli.format, out)
        }
        Command::Enumerate { bounds } => enumerate(&bounds.region()?, cli.format, out),
        Command::Certify { bounds } => certify(&bounds.region()?, cli.format, out),
        Command::Examples { name } => examples(name.as_deref(), cli.format, out),
    }
}

impl ConfigArgs {
    fn load(&self) -> std::result::Result<SurfaceConfig, Failure> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            return serde_json::from_str(&text)
                .map_err(|e| Failure::usage(format!("cannot parse {}: {e}", path.display())));
        }
        let missing: Vec<&str> = [
            ("--p", self.p),
            ("--g", self.g),
            ("--chi", self.chi),
            ("--t", self.t),
        ]
        .iter()
        .filter(|(_, v)| v.is_none())
        .map(|(n, _)| *n)
        .collect();
        if !missing.is_empty() {
            return Err(Failure::usage(format!(
                "a configuration needs --config FILE or all of --p --g --chi --t (missing {})",
                missing.join(" ")
            )));
        }
        let p = self.p.unwrap_or_default();
        let fibers = self
            .fiber
            .iter()
            .map(|s| parse_fiber(s, p))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(SurfaceConfig::new(
            p,
            self.g.unwrap_or_default(),
            self.chi.unwrap_or_default(),
            self.t.unwrap_or_default(),
            fibers,
        ))
    }
}

fn parse_fiber(s: &str, p: i64) -> std::result::Result<FiberDatum, Failure> {
    let (kind, a) = match s.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (s, None),
    };
    let kind = match kind.trim() {
        "tame" => FiberKind::Tame,
        "wild" => FiberKind::Wild,
        other => return Err(Failure::usage(format!("unknown fiber kind {other:?}"))),
    };
    let residue_a = match (a, kind) {
        (Some(a), _) => a
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("bad fiber residue in {s:?}")))?,
        (None, FiberKind::Tame) => p - 1,
        (None, FiberKind::Wild) => {
            return Err(Failure::usage(format!(
                "wild fiber {s:?} needs an explicit residue, e.g. wild:1"
            )))
        }
    };
    Ok(FiberDatum { kind, residue_a })
}

impl BoundsArgs {
    fn region(&self) -> std::result::Result<RegionBounds, Failure> {
        let exclusions = self
            .exclude
            .iter()
            .map(|s| s.parse::<Exclusion>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RegionBounds {
            p: self.p,
            g_max: self.g_max,
            chi_plus_t_max: self.chi_t_max,
            lambda_max: self.lambda_max,
            exclusions,
        })
    }
}

fn fibers_field(config: &SurfaceConfig) -> String {
    config
        .fibers
        .iter()
        .map(|f| format!("{}:{}", f.kind, f.residue_a))
        .join(";")
}

fn ints_field(values: &[i64]) -> String {
    values.iter().join(";")
}

fn write_csv<R: Serialize>(rows: &[R], out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let mut writer = csv::Writer::from_writer(out);
    for r in rows {
        writer
            .serialize(r)
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let line = serde_json::to_string(value).map_err(|e| Failure::usage(e.to_string()))?;
    writeln!(out, "{line}")?;
    Ok(())
}

fn write_json_pretty<T: Serialize>(
    value: &T,
    out: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    let doc = serde_json::to_string_pretty(value).map_err(|e| Failure::usage(e.to_string()))?;
    writeln!(out, "{doc}")?;
    Ok(())
}

#[derive(Serialize)]
struct Analysis<'a> {
    config: &'a SurfaceConfig,
    validation: crate::invariants::ValidationReport,
    kodaira_value: Option<String>,
    kodaira_dim_is_one: Option<bool>,
    canonical: Option<crate::canonical::CanonicalClass>,
    step: Option<i64>,
}

#[derive(Serialize)]
struct AnalysisRow {
    p: i64,
    g: i64,
    chi: i64,
    t: i64,
    fibers: String,
    valid: bool,
    violations: String,
    kodaira_value: String,
    kodaira_dim_is_one: String,
    base_coeff: String,
}

fn analyze(config: &SurfaceConfig, strict: bool, format: Format, out: &mut dyn Write) -> CliResult {
    let validation = validate_with(config, ValidationOptions { strict });
    let valid = validation.is_valid();
    let (value, canonical) = if valid {
        (Some(kodaira_value(config)?), Some(canonical_data(config)?))
    } else {
        (None, None)
    };
    let step = canonical.as_ref().map(|c| c.step()).transpose()?;
    let analysis = Analysis {
        config,
        kodaira_value: value.map(|v| v.to_string()),
        kodaira_dim_is_one: value.map(|v| v > num_rational::Ratio::from_integer(0)),
        canonical,
        step,
        validation,
    };
    match format {
        Format::Structured => write_json_pretty(&analysis, out)?,
        Format::Delimited => {
            let row = AnalysisRow {
                p: config.p,
                g: config.g,
                chi: config.chi,
                t: config.t,
                fibers: fibers_field(config),
                valid,
                violations: analysis
                    .validation
                    .violations()
                    .iter()
                    .map(|v| v.rule.id())
                    .join(";"),
                kodaira_value: analysis.kodaira_value.clone().unwrap_or_default(),
                kodaira_dim_is_one: analysis
                    .kodaira_dim_is_one
                    .map(|b| b.to_string())
                    .unwrap_or_default(),
                base_coeff: analysis
                    .canonical
                    .as_ref()
                    .map(|c| c.base_coeff.to_string())
                    .unwrap_or_default(),
            };
            write_csv(&[row], out)?;
        }
        Format::Text => {
            writeln!(out, "config: {config}")?;
            if valid {
                writeln!(out, "validation: valid")?;
            } else {
                writeln!(out, "validation: invalid")?;
                for v in analysis.validation.violations() {
                    writeln!(out, "  [{}] {}", v.rule, v.message)?;
                }
            }
            if let (Some(v), Some(c)) = (&analysis.kodaira_value, &analysis.canonical) {
                writeln!(out, "2g-2+chi+t+sum(a_i)/p = {v}")?;
                writeln!(
                    out,
                    "kodaira_dim_is_one: {}",
                    analysis.kodaira_dim_is_one.unwrap_or(false)
                )?;
                writeln!(out, "base_coeff: {}", c.base_coeff)?;
                writeln!(out, "residues: {}", c.residues.iter().join(","))?;
                writeln!(out, "step: {}", analysis.step.unwrap_or_default())?;
            }
        }
    }
    Ok(if valid { EXIT_OK } else { EXIT_INVALID })
}

fn table(config: &SurfaceConfig, m_max: i64, format: Format, out: &mut dyn Write) -> CliResult {
    let records = plurigenus_table(config, m_max)?;
    match format {
        Format::Text => write!(out, "{}", table_to_text(&records))?,
        Format::Structured => write_json_pretty(&records, out)?,
        Format::Delimited => write!(out, "{}", table_to_csv(&records)?)?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CertificateRow {
    p: i64,
    g: i64,
    chi: i64,
    t: i64,
    fibers: String,
    first_success: i64,
    stable_m: i64,
    step: i64,
    failures: String,
    window: String,
}

fn threshold(
    config: &SurfaceConfig,
    scan_cap: i64,
    format: Format,
    out: &mut dyn Write,
) -> CliResult {
    let cert = stable_threshold_with(config, &ThresholdOptions { scan_cap })?;
    match format {
        Format::Structured => write_json_pretty(&cert, out)?,
        Format::Delimited => write_csv(
            &[CertificateRow {
                p: config.p,
                g: config.g,
                chi: config.chi,
                t: config.t,
                fibers: fibers_field(config),
                first_success: cert.first_success,
                stable_m: cert.stable_m,
                step: cert.step,
                failures: ints_field(&cert.failures),
                window: ints_field(&cert.window),
            }],
            out,
        )?,
        Format::Text => {
            writeln!(out, "config: {config}")?;
            writeln!(out, "stable_m={}", cert.stable_m)?;
            writeln!(out, "first_success={}", cert.first_success)?;
            writeln!(out, "failures={}", cert.failures.iter().join(","))?;
            writeln!(out, "step={}", cert.step)?;
            writeln!(out, "window={}", cert.window.iter().join(","))?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct EnumeratedRecord {
    #[serde(flatten)]
    config: SurfaceConfig,
    case: crate::enumerator::CaseLabel,
    first_success: i64,
    stable_m: i64,
}

#[derive(Serialize)]
struct EnumeratedRow {
    p: i64,
    g: i64,
    chi: i64,
    t: i64,
    fibers: String,
    case: String,
    first_success: i64,
    stable_m: i64,
}

fn enumerate(bounds: &RegionBounds, format: Format, out: &mut dyn Write) -> CliResult {
    let mut writer = (format == Format::Delimited).then(|| csv::Writer::from_writer(Vec::new()));
    for config in enumerate_configs(bounds)? {
        let cert = stable_threshold(&config)?;
        let case = classify_case(&config)?;
        match format {
            Format::Structured => write_json(
                &EnumeratedRecord {
                    config,
                    case,
                    first_success: cert.first_success,
                    stable_m: cert.stable_m,
                },
                out,
            )?,
            Format::Delimited => {
                let row = EnumeratedRow {
                    p: config.p,
                    g: config.g,
                    chi: config.chi,
                    t: config.t,
                    fibers: fibers_field(&config),
                    case: case.to_string(),
                    first_success: cert.first_success,
                    stable_m: cert.stable_m,
                };
                writer
                    .as_mut()
                    .expect("delimited writer")
                    .serialize(row)
                    .map_err(|e| Failure::usage(e.to_string()))?;
            }
            Format::Text => writeln!(
                out,
                "{config}  case={case} first_success={} stable_m={}",
                cert.first_success, cert.stable_m
            )?,
        }
    }
    if let Some(w) = writer {
        let bytes = w.into_inner().map_err(|e| Failure::usage(e.to_string()))?;
        out.write_all(&bytes)?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CaseRow {
    case: String,
    count: usize,
    max_stable: String,
    reference_bound: i64,
    pass: bool,
}

fn certify(bounds: &RegionBounds, format: Format, out: &mut dyn Write) -> CliResult {
    let report = certify_bound(bounds)?;
    match format {
        Format::Text => write!(out, "{}", report.to_text())?,
        Format::Structured => write_json_pretty(&report, out)?,
        Format::Delimited => {
            let rows: Vec<CaseRow> = report
                .per_case
                .iter()
                .map(|(l, s)| (l.to_string(), s))
                .chain(
                    report
                        .sub_cases
                        .iter()
                        .map(|s| (s.name.clone(), &s.summary)),
                )
                .map(|(case, s)| CaseRow {
                    case,
                    count: s.count,
                    max_stable: s.max_stable.map(|m| m.to_string()).unwrap_or_default(),
                    reference_bound: s.reference_bound,
                    pass: s.pass,
                })
                .collect();
            write_csv(&rows, out)?;
        }
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_CERT_FAIL })
}

#[derive(Serialize)]
struct ExampleRow {
    name: String,
    p: i64,
    g: i64,
    chi: i64,
    t: i64,
    fibers: String,
}

fn examples(name: Option<&str>, format: Format, out: &mut dyn Write) -> CliResult {
    let all = builtin();
    let selected: Vec<_> = match name {
        Some(n) => {
            let hit = all.into_iter().find(|(k, _)| *k == n).ok_or_else(|| {
                Failure::usage(format!(
                    "unknown example {n:?}; known: {}",
                    builtin().iter().map(|(k, _)| *k).join(", ")
                ))
            })?;
            vec![hit]
        }
        None => all,
    };
    match format {
        Format::Structured => {
            for (_, c) in &selected {
                write_json(c, out)?;
            }
        }
        Format::Delimited => {
            let rows: Vec<_> = selected
                .iter()
                .map(|(n, c)| ExampleRow {
                    name: n.to_string(),
                    p: c.p,
                    g: c.g,
                    chi: c.chi,
                    t: c.t,
                    fibers: fibers_field(c),
                })
                .collect();
            write_csv(&rows, out)?;
        }
        Format::Text => {
            for (n, c) in &selected {
                writeln!(out, "{n}: {c}")?;
            }
        }
    }
    Ok(EXIT_OK)
}
