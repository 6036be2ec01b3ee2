use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use radon_core::closed_forms::counts::{count_table, CountKind, CountRow};
use radon_core::closed_forms::SphericalTable;
use radon_core::spectral::{decompose_dual_level, decompose_level, dual_spherical_from_projector, spherical_from_projector, DecompositionReport};
use radon_core::verifier::{grid_configs, run_many, CheckGroup, RunConfig};
use radon_core::{Error, Family, Geometry, QParameter, Result, SubsetGeometry, SubspaceGeometry};

#[derive(Parser)]
#[command(name = "radon", version, about = "Exact Radon filtrations of subset and subspace lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose one level into its filtration components.
    Decompose(Common),
    /// Closed-form spherical functions of one level.
    Spherical(Common),
    /// Run the verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Run every configuration of the desk-scale grid.
        #[arg(long)]
        grid: bool,
    },
    /// Closed-form and enumerated configuration counts.
    Count(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// verify: check groups (comma separated); count: the count kind;
    /// spherical: `oracle` to compare against the projector.
    #[arg(long)]
    check: Option<String>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Subset,
    Subspace,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// A run failure: usage problems exit 1, inconsistencies exit 2.
enum Failure {
    Usage(String),
    Inconsistent(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistency(_) | Error::Singular | Error::DimensionMismatch(_) => Failure::Inconsistent(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

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
        Command::Decompose(c) => decompose(&c),
        Command::Spherical(c) => spherical(&c),
        Command::Verify { common, grid } => verify(&common, grid),
        Command::Count(c) => count(&c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Inconsistent(msg)) => {
            eprintln!("inconsistency: {msg}");
            ExitCode::from(2)
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn family(c: &Common) -> std::result::Result<Family, Failure> {
    match c.family {
        Some(FamilyArg::Subset) => Ok(Family::Subset),
        Some(FamilyArg::Subspace) => Ok(Family::Subspace),
        None => Err(usage("--family is required")),
    }
}

fn required(v: Option<usize>, flag: &str) -> std::result::Result<usize, Failure> {
    v.ok_or_else(|| usage(format!("{flag} is required")))
}

fn q_param(c: &Common, family: Family) -> std::result::Result<Option<QParameter>, Failure> {
    match (family, c.q) {
        (Family::Subset, None) => Ok(None),
        (Family::Subset, Some(_)) => Err(usage("--q applies to the subspace family only")),
        (Family::Subspace, None) => Err(usage("--q is required for the subspace family")),
        (Family::Subspace, Some(q)) => Ok(Some(QParameter::new(q)?)),
    }
}

/// Binds the geometry described by the common flags and evaluates `body`.
macro_rules! with_geometry {
    ($c:expr, |$g:ident, $q:ident| $body:expr) => {{
        let family = family($c)?;
        let n = required($c.n, "--n")?;
        let $q = q_param($c, family)?;
        match $q {
            None => {
                let $g = SubsetGeometry::new(n)?;
                $body
            }
            Some(qp) => {
                let $g = SubspaceGeometry::new(n, qp)?;
                $body
            }
        }
    }};
}

fn emit(c: &Common, text: &str) -> Outcome {
    match &c.out {
        Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| usage(e.to_string()))
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Levels above the middle go through the mirror filtration.
fn split_level(n: usize, s: usize) -> std::result::Result<(usize, bool), Failure> {
    if s > n {
        return Err(usage(format!("--s {s} exceeds --n {n}")));
    }
    Ok(if 2 * s > n { (n - s, true) } else { (s, false) })
}

fn decompose(c: &Common) -> Outcome {
    let s = required(c.s, "--s")?;
    let report: DecompositionReport = with_geometry!(c, |g, _q| {
        let (s, dual) = split_level(g.n(), s)?;
        if dual {
            decompose_dual_level(&g, s)?.report
        } else {
            decompose_level(&g, s)?.report
        }
    });
    let text = match c.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .components
                .iter()
                .map(|comp| {
                    vec![
                        comp.t.to_string(),
                        comp.dimension.to_string(),
                        comp.expected_dimension.clone(),
                        comp.eigenvalue.clone(),
                        comp.spherical.join(";"),
                    ]
                })
                .collect();
            csv_text(&strings(&["t", "dimension", "expected_dimension", "eigenvalue", "spherical"]), &rows)?
        }
    };
    emit(c, &text)
}

#[derive(Serialize)]
struct SphericalCheck {
    closed_form: SphericalTable,
    oracle: SphericalTable,
    verdict: &'static str,
}

fn spherical(c: &Common) -> Outcome {
    let s = required(c.s, "--s")?;
    let fam = family(c)?;
    let with_oracle = match c.check.as_deref() {
        None => false,
        Some("oracle") => true,
        Some(other) => return Err(usage(format!("spherical accepts --check oracle, not '{other}'"))),
    };
    let (closed, oracle) = with_geometry!(c, |g, q| {
        let (s, dual) = split_level(g.n(), s)?;
        let closed = SphericalTable::closed_form(fam, g.n(), s, q)?;
        let oracle = if with_oracle {
            let profiles = (0..=s)
                .map(|t| {
                    let f = if dual { dual_spherical_from_projector(&g, s, t)? } else { spherical_from_projector(&g, s, t)? };
                    Ok(f.profile)
                })
                .collect::<Result<Vec<_>>>()?;
            Some(SphericalTable::from_profiles(fam, g.n(), s, q, &profiles))
        } else {
            None
        };
        (closed, oracle)
    });
    let Some(oracle) = oracle else {
        let text = match c.format {
            Format::Json => closed.to_json()? + "\n",
            Format::Csv => closed.to_csv()?,
        };
        return emit(c, &text);
    };
    let agree = closed.rows == oracle.rows;
    let verdict = if agree { "pass" } else { "fail" };
    let text = match c.format {
        Format::Json => json(&SphericalCheck {
            closed_form: closed,
            oracle,
            verdict,
        })?,
        Format::Csv => {
            let width = closed.rows.first().map_or(0, |r| r.values.len());
            let mut header = strings(&["source", "t"]);
            header.extend((0..width).map(|j| format!("j{j}")));
            let mut rows = Vec::new();
            for (source, table) in [("closed-form", &closed), ("oracle", &oracle)] {
                for r in &table.rows {
                    let mut line = vec![source.to_string(), r.t.to_string()];
                    line.extend(r.values.iter().cloned());
                    rows.push(line);
                }
            }
            let mut verdict_line = vec!["verdict".to_string(), verdict.to_string()];
            verdict_line.resize(header.len(), String::new());
            rows.push(verdict_line);
            csv_text(&header, &rows)?
        }
    };
    emit(c, &text)?;
    if agree {
        Ok(())
    } else {
        Err(Failure::Inconsistent("closed form and oracle spherical functions differ".into()))
    }
}

fn parse_checks(c: &Common) -> std::result::Result<Vec<CheckGroup>, Failure> {
    match &c.check {
        None => Ok(Vec::new()),
        Some(list) => list.split(',').map(|name| name.parse().map_err(Failure::from)).collect(),
    }
}

fn verify(c: &Common, grid: bool) -> Outcome {
    let checks = parse_checks(c)?;
    let configs = if grid {
        if c.family.is_some() || c.n.is_some() || c.q.is_some() || c.s.is_some() {
            return Err(usage("--grid runs fixed configurations; drop --family, --n, --s and --q"));
        }
        grid_configs(&checks, c.jobs)
    } else {
        let family = family(c)?;
        vec![RunConfig {
            family,
            n: required(c.n, "--n")?,
            q: q_param(c, family)?,
            s: c.s,
            checks,
            jobs: c.jobs,
        }]
    };
    let result = run_many(&configs, c.jobs)?;
    let text = match c.format {
        Format::Json => result.to_json()?,
        Format::Csv => result.to_csv()?,
    };
    emit(c, &text)?;
    if result.passed() {
        Ok(())
    } else {
        let first = result.failures().next().map(|r| r.id.clone()).unwrap_or_default();
        Err(Failure::Inconsistent(format!("{} check(s) failed, first {first}", result.summary.fail)))
    }
}

#[derive(Serialize)]
struct CountReport {
    family: Family,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<u32>,
    rows: Vec<CountRow>,
    agree: bool,
}

fn count(c: &Common) -> Outcome {
    let fam = family(c)?;
    let kinds: Vec<CountKind> = match &c.check {
        Some(name) => {
            let kind: CountKind = name.parse()?;
            if kind.family() != fam {
                return Err(usage(format!("{kind} is a {} count", kind.family())));
            }
            vec![kind]
        }
        None => CountKind::ALL.into_iter().filter(|k| k.family() == fam).collect(),
    };
    let (n, q, rows) = with_geometry!(c, |g, q| {
        let mut rows = Vec::new();
        for &kind in &kinds {
            rows.extend(count_table(&g, kind, c.s)?);
        }
        (g.n(), q, rows)
    });
    let agree = rows.iter().all(|r| r.agree);
    let text = match c.format {
        Format::Json => json(&CountReport {
            family: fam,
            n,
            q: q.map(QParameter::value),
            rows,
            agree,
        })?,
        Format::Csv => {
            let lines: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.kind.to_string(),
                        r.params.clone(),
                        r.closed_form.clone(),
                        r.oracle.clone(),
                        r.printed.clone().unwrap_or_default(),
                        r.agree.to_string(),
                    ]
                })
                .collect();
            csv_text(&strings(&["kind", "parameters", "closed_form", "oracle", "printed", "agree"]), &lines)?
        }
    };
    emit(c, &text)?;
    if agree {
        Ok(())
    } else {
        Err(Failure::Inconsistent("closed form and enumeration disagree".into()))
    }
}
