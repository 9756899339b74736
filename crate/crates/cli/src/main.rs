use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use revhazard::characterizations::{
    default_families, run_matrix, theorem_catalog, CheckConfig, CheckReport, CheckSpec, Verdict,
    DEFAULT_EQ_TOL,
};
use revhazard::distributions::DistributionModel;
use revhazard::empirics::{default_candidates, identify, SampleSet, DEFAULT_TRIM};
use revhazard::functionals;
use revhazard::quadrature::{sample_inverse_cdf, Tolerance};

#[derive(Parser)]
#[command(
    name = "revhazard",
    version,
    about = "Reversed hazard rate, inactivity time and characterization checks",
    allow_negative_numbers = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the characterization checks over families and theorems.
    Verify(VerifyArgs),
    /// Tabulate F, f, phi, m and L on a probability-spaced grid.
    Table(TableArgs),
    /// Rank candidate families for a sample file.
    Identify(IdentifyArgs),
    /// Draw a seeded inverse-CDF sample, one value per line.
    Sample(SampleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct VerifyArgs {
    /// Family in text form, e.g. `type3ev:gamma=1,b=0`; repeatable.
    #[arg(long)]
    family: Vec<String>,
    /// Check in text form, e.g. `T2_4:k=3`; repeatable.
    #[arg(long)]
    theorem: Vec<String>,
    #[arg(long, default_value_t = 1e-9)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
    #[arg(long, default_value_t = DEFAULT_EQ_TOL)]
    eq_tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct TableArgs {
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 16)]
    grid: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct IdentifyArgs {
    /// Sample file: one value per line, `#` comments.
    sample: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TRIM)]
    trim: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SampleArgs {
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure that maps to exit code 1.
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

type CmdResult = Result<ExitCode, Fail>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Table(a) => table(a),
        Command::Identify(a) => identify_cmd(a),
        Command::Sample(a) => sample(a),
    };
    match result {
        Ok(code) => code,
        Err(Fail(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn positive(name: &str, v: f64) -> Result<(), Fail> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Fail(format!("--{name} must be a positive number, got {v}")))
    }
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), Fail> {
    match out {
        Some(path) => fs::write(path, body)
            .map_err(|e| Fail(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String, Fail> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, Fail> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| Fail(e.to_string()))?;
    Ok(String::from_utf8(bytes)?)
}

fn parse_families(texts: &[String]) -> Result<Vec<DistributionModel>, Fail> {
    if texts.is_empty() {
        return Ok(default_families());
    }
    texts
        .iter()
        .map(|t| t.parse().map_err(|e| Fail(format!("--family {t}: {e}"))))
        .collect()
}

fn verify(a: VerifyArgs) -> CmdResult {
    positive("rel-tol", a.rel_tol)?;
    positive("abs-tol", a.abs_tol)?;
    positive("eq-tol", a.eq_tol)?;
    let models = parse_families(&a.family)?;
    let specs: Vec<CheckSpec> = if a.theorem.is_empty() {
        theorem_catalog()
    } else {
        a.theorem
            .iter()
            .map(|t| t.parse().map_err(|e| Fail(format!("--theorem {t}: {e}"))))
            .collect::<Result<_, _>>()?
    };
    let config = CheckConfig {
        tol: Tolerance::new(a.rel_tol, a.abs_tol),
        eq_tol: a.eq_tol,
    };
    let reports = run_matrix(&models, &specs, &config);
    let body = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&reports)?,
        Format::Csv => verify_csv(&reports)?,
    };
    emit(&a.output.out, &body)?;

    let failing = reports.iter().filter(|r| fails(r)).count();
    if failing > 0 {
        eprintln!("{failing} check(s) failed");
        Ok(ExitCode::from(2))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

/// A row counts against the exit code when it contradicts Cauchy–Schwarz or
/// misses an asserted equality. Suspect rows are informational only.
fn fails(r: &CheckReport) -> bool {
    if r.suspect {
        return false;
    }
    r.verdict == Verdict::Violation || (r.expected_equality && r.verdict != Verdict::Equality)
}

fn verify_csv(reports: &[CheckReport]) -> Result<String, Fail> {
    let header = [
        "theorem",
        "check",
        "family",
        "model",
        "lhs",
        "rhs",
        "gap",
        "ratio",
        "verdict",
        "expected_equality",
        "suspect",
        "printed_direction_holds",
        "p",
        "err_estimates",
    ];
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.theorem.to_string(),
                r.check.clone(),
                r.family.clone(),
                r.model.clone(),
                opt(r.lhs),
                opt(r.rhs),
                opt(r.gap),
                opt(r.ratio),
                format!("{:?}", r.verdict),
                r.expected_equality.to_string(),
                r.suspect.to_string(),
                r.printed_direction_holds
                    .map(|b| b.to_string())
                    .unwrap_or_default(),
                opt(r.p),
                r.err_estimates
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
            ]
        })
        .collect();
    csv_string(&header, rows)
}

#[derive(Serialize)]
struct TableRow {
    t: f64,
    cdf: f64,
    pdf: f64,
    phi: f64,
    m: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rai: Option<f64>,
}

fn table(a: TableArgs) -> CmdResult {
    if a.grid < 8 {
        return Err(Fail(format!("--grid must be at least 8, got {}", a.grid)));
    }
    let model: DistributionModel = a
        .family
        .parse()
        .map_err(|e| Fail(format!("--family {}: {e}", a.family)))?;
    let finite_b = model.support().has_finite_upper();
    if !finite_b {
        eprintln!(
            "warning: {} has no finite right endpoint; the L column is omitted",
            model.spec()
        );
    }
    let rows = functionals::probability_grid(&model, a.grid)?
        .into_iter()
        .map(|t| -> Result<TableRow, Fail> {
            let v = functionals::evaluate(&model, t)?;
            Ok(TableRow {
                t,
                cdf: model.cdf(t),
                pdf: model.pdf_at(t)?,
                phi: v.phi,
                m: v.m,
                rai: v.rai,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let body = match a.output.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut header = vec!["t", "F", "f", "phi", "m"];
            if finite_b {
                header.push("L");
            }
            let rows = rows
                .iter()
                .map(|r| {
                    let mut v = vec![
                        r.t.to_string(),
                        r.cdf.to_string(),
                        r.pdf.to_string(),
                        r.phi.to_string(),
                        r.m.to_string(),
                    ];
                    if let Some(l) = r.rai {
                        v.push(l.to_string());
                    }
                    v
                })
                .collect();
            csv_string(&header, rows)?
        }
    };
    emit(&a.output.out, &body)?;
    Ok(ExitCode::SUCCESS)
}

fn identify_cmd(a: IdentifyArgs) -> CmdResult {
    let text = fs::read_to_string(&a.sample)
        .map_err(|e| Fail(format!("cannot read {}: {e}", a.sample.display())))?;
    let sample = SampleSet::parse_text(&text)
        .map_err(|e| Fail(format!("{}: {e}", a.sample.display())))?;
    let report = identify(&sample, &default_candidates(), a.trim)?;
    let body = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let rows = report
                .entries
                .iter()
                .map(|e| {
                    vec![
                        e.rank.to_string(),
                        e.label.clone(),
                        e.theorem.to_string(),
                        opt(e.ratio_hat),
                        opt(e.score),
                        opt(e.spread),
                    ]
                })
                .collect();
            csv_string(
                &["rank", "label", "theorem", "ratio_hat", "score", "spread"],
                rows,
            )?
        }
    };
    emit(&a.output.out, &body)?;
    Ok(ExitCode::SUCCESS)
}

fn sample(a: SampleArgs) -> CmdResult {
    let model: DistributionModel = a
        .family
        .parse()
        .map_err(|e| Fail(format!("--family {}: {e}", a.family)))?;
    let s = sample_inverse_cdf(&model, a.n, a.seed)?;
    let mut body = format!("# {} n={} seed={}\n", model.spec(), a.n, a.seed);
    for x in s.values() {
        body.push_str(&x.to_string());
        body.push('\n');
    }
    emit(&a.out, &body)?;
    Ok(ExitCode::SUCCESS)
}
