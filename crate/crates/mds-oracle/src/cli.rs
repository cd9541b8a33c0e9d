//! Command-line front door: parse inputs, dispatch to the checkers, the
//! search, and the derivative oracle, and render reports.
//!
//! One subcommand per invocation:
//!
//! * `check-2d --p-left=X,Y --p-right=X,Y` — plane 4-gon criterion,
//! * `check-3d --p-left=X,Y,Z --p-right=X,Y,Z` — 3-polytope criterion,
//! * `check-tetra --tuple=XL,XR,SY,SZ` — tetrahedron tuple criterion,
//! * `check-wps --weights=A,B,C1,…` — weighted-projective-space criterion,
//! * `rays --tuple=XL,XR,SY,SZ` — fan reconstruction of a tuple,
//! * `search --dim=D --bound=N` — exhaustive weight-range search,
//! * `verify-derivative` — randomized closed-form-versus-kernel campaign.
//!
//! Rationals on the command line are `p/q` or integer literals; floats are
//! rejected (the library is exact).  Output on the `out` stream is
//! machine-readable and byte-stable for a fixed invocation; diagnostics go
//! to `err`.  Formats: `json` (default; schema tag `mds-oracle/1`), `csv`
//! (header row first), `md` (pipe tables mirroring the result-table
//! layout).
//!
//! Exit codes: `0` for a `NotMDS` verdict, a completed search, a
//! successful fan reconstruction, or a fully verified campaign; `1` for an
//! `Inconclusive` verdict or a campaign with failures; `2` for invalid
//! input.

use std::io::Write;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigInt;
use serde::Serialize;

use crate::checker::{
    check_2d_with, check_3d_with, check_tetra_with, CheckReport, Verdict,
};
use crate::derivative::{run_campaign, CampaignReport};
use crate::exact::{parse_rational, Rational};
use crate::polytope::{Polygon4, Polytope3, TetraTuple};
use crate::wps::{check_wps, search, tetra_fan, Fan, TableRow, WpsCheckReport, WpsWeights};

/// Version tag carried by every JSON envelope.
const SCHEMA: &str = "mds-oracle/1";

/// Environment variable consulted for the default `--jobs` of `search`.
const JOBS_ENV: &str = "MDS_ORACLE_JOBS";

/// Run the command line given by `args` (without the program name),
/// writing machine output to `out` and diagnostics to `err`.
///
/// Returns the process exit code; see the module documentation for the
/// mapping.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let argv = std::iter::once("mds-oracle".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    2
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
    }
}

#[derive(Parser)]
#[command(name = "mds-oracle", version, about = "Exact sufficient criteria for non-Mori-dreamness of blowups of toric varieties at a general torus point", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a rational plane 4-gon with vertices (0,0), (0,1), p_left,
    /// p_right.
    #[command(name = "check-2d")]
    Check2d(Check2dArgs),
    /// Check a rational 3-polytope over the unit-triangle base with apexes
    /// p_left, p_right.
    #[command(name = "check-3d")]
    Check3d(Check3dArgs),
    /// Check a tetrahedron given in tuple form (x_left, x_right, slope_y,
    /// slope_z).
    #[command(name = "check-tetra")]
    CheckTetra(CheckTetraArgs),
    /// Check a weighted projective space of dimension 3 or 4 given by its
    /// weights.
    #[command(name = "check-wps")]
    CheckWps(CheckWpsArgs),
    /// Reconstruct the fan (rays, weights, lattice index) of a tetrahedron
    /// tuple.
    #[command(name = "rays")]
    Rays(RaysArgs),
    /// Exhaustively search a weight range for spaces passing the
    /// criterion.
    #[command(name = "search")]
    Search(SearchArgs),
    /// Cross-check the derivative closed forms against the kernel oracle
    /// on random problems.
    #[command(name = "verify-derivative")]
    VerifyDerivative(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Args)]
struct FormatArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Shorthand for `--format=json`.
    #[arg(long, conflicts_with = "format")]
    json: bool,
}

impl FormatArgs {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Args)]
struct Check2dArgs {
    /// Left vertex as two rationals `X,Y` with `X < 0`.
    #[arg(long = "p-left", value_name = "X,Y", allow_hyphen_values = true)]
    p_left: String,
    /// Right vertex as two rationals `X,Y` with `X > 0`.
    #[arg(long = "p-right", value_name = "X,Y", allow_hyphen_values = true)]
    p_right: String,
    /// Multiply the minimal integral dilation by this factor.
    #[arg(long = "m-factor", value_name = "K", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    m_factor: u64,
    /// Integral shear `y -> y + A*x` applied before checking.
    #[arg(long, value_name = "A", allow_hyphen_values = true)]
    shear: Option<i64>,
    #[command(flatten)]
    format: FormatArgs,
}

#[derive(Args)]
struct Check3dArgs {
    /// Left vertex as three rationals `X,Y,Z` with `X < 0`.
    #[arg(long = "p-left", value_name = "X,Y,Z", allow_hyphen_values = true)]
    p_left: String,
    /// Right vertex as three rationals `X,Y,Z` with `X > 0`.
    #[arg(long = "p-right", value_name = "X,Y,Z", allow_hyphen_values = true)]
    p_right: String,
    /// Multiply the minimal integral dilation by this factor.
    #[arg(long = "m-factor", value_name = "K", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    m_factor: u64,
    /// Integral shear `(y, z) -> (y + A*x, z + B*x)` applied before
    /// checking.
    #[arg(long, value_name = "A,B", allow_hyphen_values = true)]
    shear: Option<String>,
    #[command(flatten)]
    format: FormatArgs,
}

#[derive(Args)]
struct CheckTetraArgs {
    /// Tuple `x_left,x_right,slope_y,slope_z` of rationals with
    /// `x_left < 0 < x_right`.
    #[arg(long, value_name = "XL,XR,SY,SZ", allow_hyphen_values = true)]
    tuple: String,
    /// Multiply the minimal integral dilation by this factor.
    #[arg(long = "m-factor", value_name = "K", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    m_factor: u64,
    /// Integral shear `(y, z) -> (y + A*x, z + B*x)` applied before
    /// checking.
    #[arg(long, value_name = "A,B", allow_hyphen_values = true)]
    shear: Option<String>,
    #[command(flatten)]
    format: FormatArgs,
}

#[derive(Args)]
struct CheckWpsArgs {
    /// Weights `a,b,c_1,…,c_k` (four or five positive integers).
    #[arg(long, value_name = "A,B,C1,...")]
    weights: String,
    #[command(flatten)]
    format: FormatArgs,
}

#[derive(Args)]
struct RaysArgs {
    /// Tuple `x_left,x_right,slope_y,slope_z` of rationals with
    /// `x_left < 0 < x_right`.
    #[arg(long, value_name = "XL,XR,SY,SZ", allow_hyphen_values = true)]
    tuple: String,
    #[command(flatten)]
    format: FormatArgs,
}

#[derive(Args)]
struct SearchArgs {
    /// Dimension of the spaces to search (3 or 4).
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..=4))]
    dim: u32,
    /// Inclusive upper bound on every weight.
    #[arg(long)]
    bound: u64,
    /// Worker threads (default: the MDS_ORACLE_JOBS environment variable,
    /// else one per core).
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    #[command(flatten)]
    format: FormatArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Number of random problems per family (that many 2D and as many
    /// 3D).
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Seed for the reproducible problem generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    format: FormatArgs,
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<u8, String> {
    match &cli.command {
        Command::Check2d(a) => {
            let pl = rational_list(&a.p_left, 2, "--p-left")?;
            let pr = rational_list(&a.p_right, 2, "--p-right")?;
            let mut polygon = Polygon4::new([pl[0].clone(), pl[1].clone()], [pr[0].clone(), pr[1].clone()])
                .map_err(|e| e.to_string())?;
            if let Some(s) = a.shear {
                polygon = polygon.shear(&BigInt::from(s));
            }
            let report = check_2d_with(&polygon, a.m_factor).map_err(|e| e.to_string())?;
            render_check(out, "check-2d", &report, a.format.format())?;
            Ok(verdict_code(report.verdict))
        }
        Command::Check3d(a) => {
            let pl = rational_list(&a.p_left, 3, "--p-left")?;
            let pr = rational_list(&a.p_right, 3, "--p-right")?;
            let mut polytope = Polytope3::new(
                [pl[0].clone(), pl[1].clone(), pl[2].clone()],
                [pr[0].clone(), pr[1].clone(), pr[2].clone()],
            )
            .map_err(|e| e.to_string())?;
            if let Some(s) = &a.shear {
                let (sa, sb) = shear_pair(s)?;
                polytope = polytope.shear(&sa, &sb);
            }
            let report = check_3d_with(&polytope, a.m_factor).map_err(|e| e.to_string())?;
            render_check(out, "check-3d", &report, a.format.format())?;
            Ok(verdict_code(report.verdict))
        }
        Command::CheckTetra(a) => {
            let mut tetra = tuple_arg(&a.tuple)?;
            if let Some(s) = &a.shear {
                let (sa, sb) = shear_pair(s)?;
                tetra = tetra.shear(&sa, &sb);
            }
            let report = check_tetra_with(&tetra, a.m_factor).map_err(|e| e.to_string())?;
            render_check(out, "check-tetra", &report, a.format.format())?;
            Ok(verdict_code(report.verdict))
        }
        Command::CheckWps(a) => {
            let weights = weights_arg(&a.weights)?;
            let report = check_wps(&weights);
            render_wps(out, &report, a.format.format())?;
            Ok(verdict_code(report.verdict))
        }
        Command::Rays(a) => {
            let tetra = tuple_arg(&a.tuple)?;
            let fan = tetra_fan(&tetra).map_err(|e| e.to_string())?;
            render_fan(out, &fan, a.format.format())?;
            Ok(0)
        }
        Command::Search(a) => {
            let rows = match jobs(a.jobs)? {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| e.to_string())?
                    .install(|| search(a.dim, a.bound)),
                None => search(a.dim, a.bound),
            };
            render_rows(out, a.dim, a.bound, &rows, a.format.format())?;
            Ok(0)
        }
        Command::VerifyDerivative(a) => {
            let report = run_campaign(a.samples, a.samples, a.seed);
            render_campaign(out, a.samples, a.seed, &report, a.format.format())?;
            Ok(if report.all_passed() { 0 } else { 1 })
        }
    }
}

// ---------------------------------------------------------------------------
// argument parsing
// ---------------------------------------------------------------------------

fn rational_list(s: &str, expected: usize, flag: &str) -> Result<Vec<Rational>, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != expected {
        return Err(format!(
            "{flag}: expected {expected} comma-separated rationals, got {} in {s:?}",
            parts.len()
        ));
    }
    parts
        .iter()
        .map(|t| parse_rational(t).map_err(|e| format!("{flag}: {e}")))
        .collect()
}

fn tuple_arg(s: &str) -> Result<TetraTuple, String> {
    let v = rational_list(s, 4, "--tuple")?;
    TetraTuple::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())
        .map_err(|e| e.to_string())
}

fn weights_arg(s: &str) -> Result<WpsWeights, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let weights: Vec<u64> = parts
        .iter()
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("--weights: invalid weight {t:?} (expected a positive integer)"))
        })
        .collect::<Result<_, _>>()?;
    WpsWeights::new(weights).map_err(|e| e.to_string())
}

fn shear_pair(s: &str) -> Result<(BigInt, BigInt), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("--shear: expected two comma-separated integers, got {s:?}"));
    }
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map(BigInt::from)
            .map_err(|_| format!("--shear: invalid integer {t:?}"))
    };
    Ok((parse(parts[0])?, parse(parts[1])?))
}

fn jobs(flag: Option<u64>) -> Result<Option<usize>, String> {
    if let Some(n) = flag {
        return Ok(Some(n as usize));
    }
    match std::env::var(JOBS_ENV) {
        Ok(raw) => {
            let n: usize = raw
                .parse()
                .map_err(|_| format!("{JOBS_ENV}: invalid job count {raw:?}"))?;
            if n == 0 {
                return Err(format!("{JOBS_ENV}: job count must be positive"));
            }
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

fn verdict_code(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::NotMDS => 0,
        Verdict::Inconclusive => 1,
    }
}

fn verdict_str(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::NotMDS => "NotMDS",
        Verdict::Inconclusive => "Inconclusive",
    }
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ReportEnvelope<'a, T: Serialize> {
    schema: &'static str,
    command: &'a str,
    report: &'a T,
}

#[derive(Serialize)]
struct SearchEnvelope<'a> {
    schema: &'static str,
    command: &'static str,
    dim: u32,
    bound: u64,
    rows: &'a [TableRow],
}

#[derive(Serialize)]
struct CampaignEnvelope<'a> {
    schema: &'static str,
    command: &'static str,
    samples_per_family: usize,
    seed: u64,
    report: &'a CampaignReport,
}

fn emit(out: &mut dyn Write, text: String) -> Result<(), String> {
    out.write_all(text.as_bytes()).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| e.to_string())
}

fn csv_table(rows: &[Vec<String>]) -> Result<String, String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.write_record(row).map_err(|e| e.to_string())?;
    }
    let bytes = writer.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn md_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut text = String::new();
    text.push_str(&format!("| {} |\n", header.join(" | ")));
    text.push_str(&format!("|{}\n", " --- |".repeat(header.len())));
    for row in rows {
        text.push_str(&format!("| {} |\n", row.join(" | ")));
    }
    text
}

fn yes_no(b: bool) -> String {
    if b { "yes".to_string() } else { "no".to_string() }
}

fn render_check(
    out: &mut dyn Write,
    command: &str,
    report: &CheckReport,
    format: Format,
) -> Result<(), String> {
    match format {
        Format::Json => {
            emit(out, to_json(&ReportEnvelope { schema: SCHEMA, command, report })?)
        }
        Format::Csv => {
            let mut rows = vec![vec![
                "verdict".to_string(),
                "branch".to_string(),
                "condition".to_string(),
                "holds".to_string(),
                "witness".to_string(),
            ]];
            for c in &report.conditions {
                rows.push(vec![
                    verdict_str(report.verdict).to_string(),
                    report.branch.clone(),
                    c.id.clone(),
                    yes_no(c.holds),
                    c.witness.clone(),
                ]);
            }
            emit(out, csv_table(&rows)?)
        }
        Format::Md => {
            let rows: Vec<Vec<String>> = report
                .conditions
                .iter()
                .map(|c| vec![c.id.clone(), yes_no(c.holds), c.witness.clone()])
                .collect();
            let text = format!(
                "verdict: {} (branch: {})\n\n{}",
                verdict_str(report.verdict),
                report.branch,
                md_table(&["condition", "holds", "witness"], &rows)
            );
            emit(out, text)
        }
    }
}

fn render_wps(out: &mut dyn Write, report: &WpsCheckReport, format: Format) -> Result<(), String> {
    match format {
        Format::Json => emit(
            out,
            to_json(&ReportEnvelope { schema: SCHEMA, command: "check-wps", report })?,
        ),
        Format::Csv => {
            let mut rows = vec![vec![
                "verdict".to_string(),
                "weights".to_string(),
                "relation".to_string(),
                "passes".to_string(),
                "condition".to_string(),
                "holds".to_string(),
                "witness".to_string(),
            ]];
            for rc in &report.relations {
                for c in &rc.conditions {
                    rows.push(vec![
                        verdict_str(report.verdict).to_string(),
                        weights_str(&report.weights),
                        rc.relation.to_string(),
                        yes_no(rc.passes),
                        c.id.clone(),
                        yes_no(c.holds),
                        c.witness.clone(),
                    ]);
                }
            }
            emit(out, csv_table(&rows)?)
        }
        Format::Md => {
            let mut rows = Vec::new();
            for rc in &report.relations {
                for c in &rc.conditions {
                    rows.push(vec![
                        rc.relation.to_string(),
                        yes_no(rc.passes),
                        c.id.clone(),
                        yes_no(c.holds),
                        c.witness.clone(),
                    ]);
                }
            }
            let text = format!(
                "verdict: {} (weights: {})\n\n{}",
                verdict_str(report.verdict),
                weights_str(&report.weights),
                md_table(&["relation", "passes", "condition", "holds", "witness"], &rows)
            );
            emit(out, text)
        }
    }
}

fn render_fan(out: &mut dyn Write, fan: &Fan, format: Format) -> Result<(), String> {
    match format {
        Format::Json => emit(
            out,
            to_json(&ReportEnvelope { schema: SCHEMA, command: "rays", report: fan })?,
        ),
        Format::Csv => {
            let mut rows = vec![vec![
                "ray".to_string(),
                "weight".to_string(),
                "index".to_string(),
            ]];
            for (ray, weight) in fan.rays.iter().zip(fan.weights.weights()) {
                rows.push(vec![ray_str(ray), weight.to_string(), fan.index.to_string()]);
            }
            emit(out, csv_table(&rows)?)
        }
        Format::Md => {
            let rows: Vec<Vec<String>> = fan
                .rays
                .iter()
                .zip(fan.weights.weights())
                .map(|(ray, weight)| vec![ray_str(ray), weight.to_string()])
                .collect();
            let text = format!(
                "lattice index: {}\n\n{}",
                fan.index,
                md_table(&["ray", "weight"], &rows)
            );
            emit(out, text)
        }
    }
}

fn render_rows(
    out: &mut dyn Write,
    dim: u32,
    bound: u64,
    rows: &[TableRow],
    format: Format,
) -> Result<(), String> {
    match format {
        Format::Json => emit(
            out,
            to_json(&SearchEnvelope { schema: SCHEMA, command: "search", dim, bound, rows })?,
        ),
        Format::Csv => {
            let mut table = vec![vec![
                "weights".to_string(),
                "relation".to_string(),
                "n".to_string(),
            ]];
            for row in rows {
                table.push(vec![
                    weights_str(&row.weights),
                    row.relation.to_string(),
                    row.n.to_string(),
                ]);
            }
            emit(out, csv_table(&table)?)
        }
        Format::Md => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|row| {
                    vec![weights_str(&row.weights), row.relation.to_string(), row.n.to_string()]
                })
                .collect();
            emit(out, md_table(&["weights", "relation", "n"], &table))
        }
    }
}

fn render_campaign(
    out: &mut dyn Write,
    samples: usize,
    seed: u64,
    report: &CampaignReport,
    format: Format,
) -> Result<(), String> {
    match format {
        Format::Json => emit(
            out,
            to_json(&CampaignEnvelope {
                schema: SCHEMA,
                command: "verify-derivative",
                samples_per_family: samples,
                seed,
                report,
            })?,
        ),
        Format::Csv => {
            let rows = vec![
                vec![
                    "samples_2d".to_string(),
                    "agreed_2d".to_string(),
                    "samples_3d".to_string(),
                    "agreed_3d".to_string(),
                    "nonvanish_agreed".to_string(),
                    "all_passed".to_string(),
                ],
                vec![
                    report.samples_2d.to_string(),
                    report.agreed_2d.to_string(),
                    report.samples_3d.to_string(),
                    report.agreed_3d.to_string(),
                    report.nonvanish_agreed.to_string(),
                    yes_no(report.all_passed()),
                ],
            ];
            emit(out, csv_table(&rows)?)
        }
        Format::Md => {
            let mut text = format!(
                "2d agreement: {}/{}\n3d agreement: {}/{}\nnonvanish agreement: {}/{}\n",
                report.agreed_2d,
                report.samples_2d,
                report.agreed_3d,
                report.samples_3d,
                report.nonvanish_agreed,
                report.samples_3d,
            );
            match &report.first_failure {
                None => text.push_str("all checks passed\n"),
                Some(f) => {
                    text.push_str("first failure:\n");
                    text.push_str(&to_json(f)?);
                }
            }
            emit(out, text)
        }
    }
}

fn weights_str(w: &WpsWeights) -> String {
    w.weights().iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn ray_str(ray: &[BigInt]) -> String {
    format!("({})", ray.iter().map(BigInt::to_string).collect::<Vec<_>>().join(","))
}
