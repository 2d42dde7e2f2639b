//! Command-line front end.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::PgVector;
use crate::aw::{classify, default_tolerance, AwType};
use crate::bertrand::{bertrand_mate, verify_bertrand_pair};
use crate::curve::{
    check_admissibility, make_sampled_curve, point_degeneracy, sampled_reach, CurveJet, Domain,
    DEFAULT_LIGHTLIKE_TOL,
};
use crate::diagnostics::Diagnostic;
use crate::equiform::{equiform_data, equiform_residual, natural_class, NaturalTolerances};
use crate::error::{Degeneracy, Error};
use crate::frenet::frenet_residual;
use crate::zoo::{figure_spec, zoo_entry, ZooCurve, ZooParams};

pub const SCHEMA: &str = "pg-curvelab/1";

/// Step of the frame residual columns written by `eval`.
pub const RESIDUAL_STEP: f64 = 1e-4;

/// Default step for curves rebuilt from sampled positions.
pub const DEFAULT_SAMPLE_STEP: f64 = 1e-3;

/// Nodes used by the local interpolant of an input file.
pub const INTERPOLATION_NODES: usize = 8;

pub const DEFAULT_GRID_COUNT: usize = 101;

#[derive(Debug, Parser)]
#[command(
    name = "pg-curvelab",
    version,
    about = "Curves in the pseudo-Galilean space"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Frenet and equiform apparatus on a grid
    Eval(CurveArgs),
    /// AW(k) classification and natural class
    Classify(CurveArgs),
    /// Build the offset mate and verify the Bertrand pair
    Bertrand(BertrandArgs),
    /// List the built-in curves
    ZooList(OutArgs),
    /// Position samples for figures 1-5
    Figure {
        number: u8,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Built-in curve name (see zoo-list)
    #[arg(long)]
    pub curve: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// CSV file with columns s,x,y,z
    #[arg(long, conflicts_with = "curve")]
    pub input: Option<PathBuf>,
    /// start:stop:count
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Smallest difference step for curves rebuilt from samples
    #[arg(long, default_value_t = DEFAULT_SAMPLE_STEP)]
    pub h: f64,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct BertrandArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    /// Classification tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub tol_zero: Option<f64>,
    #[arg(long)]
    pub tol_const: Option<f64>,
    #[arg(long)]
    pub tol_light: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output file; standard output when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Eval,
    Classify,
    Bertrand,
    ZooList,
    Figure,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveSpec {
    Zoo { curve: ZooCurve, params: ZooParams },
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || CliError::Validation(format!("grid '{text}' is not start:stop:count"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let g = GridSpec { start, stop, count };
        g.validate()?;
        Ok(g)
    }

    /// A single point (`count = 1`, `start = stop`) is accepted for
    /// pointwise evaluation.
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(CliError::Validation("grid bounds must be finite".into()));
        }
        match self.count {
            0 => Err(CliError::Validation("grid count must be positive".into())),
            1 if self.start != self.stop => Err(CliError::Validation(
                "a one-point grid needs start = stop".into(),
            )),
            1 => Ok(()),
            _ if self.start >= self.stop => {
                Err(CliError::Validation("grid needs start < stop".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn points(&self) -> Vec<f64> {
        crate::curve::linspace(self.start, self.stop, self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub tol_class: Option<f64>,
    pub tol_zero: Option<f64>,
    pub tol_const: Option<f64>,
    pub tol_light: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub curve: Option<CurveSpec>,
    pub grid: Option<GridSpec>,
    pub tolerances: Tolerances,
    pub sample_step: f64,
    pub lambda: f64,
    pub figure: u8,
    pub out: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Curve(#[from] Error),
    #[error("input file: {0}")]
    Input(String),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Curve(e) => match e {
                Error::Inadmissible { .. }
                | Error::MateInadmissible { .. }
                | Error::Q1Lightlike { .. }
                | Error::IsotropicTangent { .. }
                | Error::ReversedParameter { .. }
                | Error::NotArcLength { .. } => 3,
                _ => 2,
            },
            CliError::Validation(_) | CliError::Input(_) => 2,
            CliError::Output(_) => 1,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Input(_) => "input",
            CliError::Output(_) => "output",
            CliError::Curve(e) => match e {
                Error::DomainEmpty(..) => "domain-empty",
                Error::StepTooSmall { .. } => "step-too-small",
                Error::DomainTooNarrow { .. } => "domain-too-narrow",
                Error::NotArcLength { .. } => "not-arc-length",
                Error::EmptyGrid => "empty-grid",
                Error::OutsideDomain { .. } => "outside-domain",
                Error::GridTooSmall { .. } => "grid-too-small",
                Error::Inadmissible { .. } => "inadmissible",
                Error::IsotropicTangent { .. } => "isotropic-tangent",
                Error::ReversedParameter { .. } => "reversed-parameter",
                Error::JetOrderTooLow { .. } => "jet-order-too-low",
                Error::Q1Lightlike { .. } => "q1-lightlike",
                Error::MateInadmissible { .. } => "mate-inadmissible",
                Error::UnknownName(_) => "unknown-name",
                Error::ParamConstraintViolated(_) => "param-constraint",
                Error::NonFinite(_) => "non-finite",
            },
        }
    }

    /// One-line JSON document for the error stream.
    pub fn to_json(&self) -> String {
        json!({
            "schema": SCHEMA,
            "error": {
                "code": self.code(),
                "message": self.to_string(),
                "exit": self.exit_code(),
            }
        })
        .to_string()
    }
}

fn positive(name: &str, v: Option<f64>) -> Result<Option<f64>, CliError> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(CliError::Validation(format!(
            "{name} must be a positive number, got {x}"
        ))),
        _ => Ok(v),
    }
}

fn curve_spec(args: &CurveArgs, fallback: Option<ZooCurve>) -> Result<CurveSpec, CliError> {
    if let Some(path) = &args.input {
        return Ok(CurveSpec::File(path.clone()));
    }
    let curve = match (&args.curve, fallback) {
        (Some(name), _) => ZooCurve::from_name(name)?,
        (None, Some(c)) => c,
        (None, None) => {
            return Err(CliError::Validation(
                "either --curve or --input is required".into(),
            ))
        }
    };
    let d = curve.default_params();
    Ok(CurveSpec::Zoo {
        curve,
        params: ZooParams {
            a: args.a.unwrap_or(d.a),
            b: args.b.unwrap_or(d.b),
        },
    })
}

fn curve_config(
    command: Command,
    args: &CurveArgs,
    fallback: Option<ZooCurve>,
) -> Result<RunConfig, CliError> {
    let grid = args.grid.as_deref().map(GridSpec::parse).transpose()?;
    let format = args.out.format.unwrap_or(match command {
        Command::Eval => Format::Csv,
        _ => Format::Json,
    });
    if !(args.h > 0.0 && args.h.is_finite()) {
        return Err(CliError::Validation(format!(
            "--h must be positive, got {}",
            args.h
        )));
    }
    Ok(RunConfig {
        command,
        curve: Some(curve_spec(args, fallback)?),
        grid,
        tolerances: Tolerances {
            tol_class: positive("--tol", args.tol.tol)?,
            tol_zero: positive("--tol-zero", args.tol.tol_zero)?,
            tol_const: positive("--tol-const", args.tol.tol_const)?,
            tol_light: positive("--tol-light", args.tol.tol_light)?
                .unwrap_or(DEFAULT_LIGHTLIKE_TOL),
        },
        sample_step: args.h,
        lambda: 0.0,
        figure: 0,
        out: args.out.out.clone(),
        format,
    })
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let bare = |command: Command, out: &OutArgs, format: Format, figure: u8| RunConfig {
            command,
            curve: None,
            grid: None,
            tolerances: Tolerances {
                tol_class: None,
                tol_zero: None,
                tol_const: None,
                tol_light: DEFAULT_LIGHTLIKE_TOL,
            },
            sample_step: DEFAULT_SAMPLE_STEP,
            lambda: 0.0,
            figure,
            out: out.out.clone(),
            format: out.format.unwrap_or(format),
        };
        match &cli.command {
            CommandArgs::Eval(a) => curve_config(Command::Eval, a, None),
            CommandArgs::Classify(a) => curve_config(Command::Classify, a, None),
            CommandArgs::Bertrand(b) => {
                if !b.lambda.is_finite() {
                    return Err(CliError::Validation("--lambda must be finite".into()));
                }
                let mut cfg =
                    curve_config(Command::Bertrand, &b.curve, Some(ZooCurve::BertrandHelix))?;
                cfg.lambda = b.lambda;
                Ok(cfg)
            }
            CommandArgs::ZooList(out) => Ok(bare(Command::ZooList, out, Format::Csv, 0)),
            CommandArgs::Figure { number, out } => {
                Ok(bare(Command::Figure, out, Format::Csv, *number))
            }
        }
    }
}

/// Curve to analyse together with its report metadata.
struct Loaded {
    curve: CurveJet,
    label: String,
    params: Value,
    notes: Vec<Diagnostic>,
    claimed: Option<std::collections::BTreeSet<AwType>>,
}

fn load(spec: &CurveSpec, sample_step: f64) -> Result<Loaded, CliError> {
    match spec {
        CurveSpec::Zoo { curve, params } => {
            let e = zoo_entry(*curve, *params, None)?;
            Ok(Loaded {
                label: curve.name().to_string(),
                params: json!({ "a": params.a, "b": params.b }),
                notes: e.notes.clone(),
                claimed: Some(e.claimed_aw()),
                curve: e.curve,
            })
        }
        CurveSpec::File(path) => Ok(Loaded {
            curve: read_sampled_curve(path, sample_step)?,
            label: format!("input:{}", path.display()),
            params: Value::Null,
            notes: Vec::new(),
            claimed: None,
        }),
    }
}

/// Reads an `s,x,y,z` CSV and rebuilds the curve from positions only.
///
/// Positions between samples come from a Lagrange interpolant through the
/// nearest nodes. The domain is shrunk by the stencil reach of the sampled
/// constructor so that no derivative extrapolates past the data.
pub fn read_sampled_curve(path: &Path, h: f64) -> Result<CurveJet, CliError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::Input(e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Input(e.to_string()))?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| CliError::Input(format!("missing column '{name}'")))
    };
    let cols = [column("s")?, column("x")?, column("y")?, column("z")?];
    let mut rows: Vec<[f64; 4]> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(e.to_string()))?;
        let mut row = [0.0_f64; 4];
        for (slot, &c) in row.iter_mut().zip(&cols) {
            let field = record.get(c).unwrap_or("");
            *slot = field.trim().parse().map_err(|_| {
                CliError::Input(format!("row {}: '{field}' is not a number", i + 1))
            })?;
            if !slot.is_finite() {
                return Err(CliError::Input(format!("row {}: non-finite value", i + 1)));
            }
        }
        rows.push(row);
    }
    if rows.len() < INTERPOLATION_NODES {
        return Err(CliError::Input(format!(
            "need at least {INTERPOLATION_NODES} samples, got {}",
            rows.len()
        )));
    }
    if rows.windows(2).any(|w| !(w[1][0] > w[0][0])) {
        return Err(CliError::Input(
            "s column must be strictly increasing".into(),
        ));
    }
    let (first, last) = (rows[0][0], rows[rows.len() - 1][0]);
    let reach = sampled_reach(first.abs().max(last.abs()));
    let domain = Domain::new(first + reach, last - reach).map_err(|_| {
        CliError::Input(format!(
            "samples span [{first}, {last}] is too short for differentiation"
        ))
    })?;
    let nodes: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let values: Vec<PgVector> = rows
        .iter()
        .map(|r| PgVector::new(r[1], r[2], r[3]))
        .collect();
    let position = move |t: f64| lagrange(&nodes, &values, t);
    Ok(make_sampled_curve(position, domain, h)?)
}

fn lagrange(nodes: &[f64], values: &[PgVector], t: f64) -> PgVector {
    let n = INTERPOLATION_NODES.min(nodes.len());
    let i = nodes.partition_point(|&s| s < t);
    let start = i.saturating_sub(n / 2).min(nodes.len() - n);
    let (xs, ys) = (&nodes[start..start + n], &values[start..start + n]);
    let mut out = PgVector::ZERO;
    for j in 0..n {
        let mut w = 1.0;
        for m in 0..n {
            if m != j {
                w *= (t - xs[m]) / (xs[j] - xs[m]);
            }
        }
        out += ys[j] * w;
    }
    out
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_line(out: &mut String, fields: &[String]) {
    out.push_str(&fields.join(","));
    out.push('\n');
}

/// Domain and admissibility gate shared by the curve commands.
fn ensure_admissible(c: &CurveJet, grid: &[f64], tol_light: f64) -> Result<(), CliError> {
    let domain = c.domain();
    if let Some(&s) = grid.iter().find(|&&s| !domain.contains(s)) {
        return Err(Error::OutsideDomain {
            s,
            lo: domain.lo,
            hi: domain.hi,
        }
        .into());
    }
    let report = check_admissibility(c, grid, tol_light)?;
    if let Some(&s) = report.failing_params.first() {
        let reason = point_degeneracy(&c.jet(s, 1)?, &c.jet(s, 2)?, tol_light)
            .unwrap_or(Degeneracy::SignatureChange);
        return Err(Error::Inadmissible { s, reason }.into());
    }
    Ok(())
}

fn grid_for(cfg: &RunConfig, c: &CurveJet) -> Result<(GridSpec, Vec<f64>), CliError> {
    let g = cfg.grid.unwrap_or_else(|| {
        let d = c.domain();
        GridSpec {
            start: d.lo,
            stop: d.hi,
            count: DEFAULT_GRID_COUNT,
        }
    });
    let points = g.points();
    ensure_admissible(c, &points, cfg.tolerances.tol_light)?;
    Ok((g, points))
}

const VECTOR_COLUMNS: [&str; 6] = ["e1", "e2", "e3", "t", "n", "b"];

fn eval(cfg: &RunConfig, loaded: &Loaded) -> Result<String, CliError> {
    let c = &loaded.curve;
    let (spec, grid) = grid_for(cfg, c)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &s in &grid {
        let e = equiform_data(c, s)?;
        let f = e.frenet;
        let p = c.point(s);
        rows.push((
            p,
            e,
            [f.e1, f.e2, f.e3, e.tangent, e.normal, e.binormal],
            frenet_residual(c, s, RESIDUAL_STEP)?,
            equiform_residual(c, s, RESIDUAL_STEP)?,
        ));
    }
    match cfg.format {
        Format::Csv => {
            let mut out = String::new();
            let mut header: Vec<String> = [
                "s",
                "x",
                "y",
                "z",
                "kappa",
                "tau",
                "epsilon",
                "curvature",
                "torsion",
            ]
            .iter()
            .map(|h| h.to_string())
            .collect();
            for v in VECTOR_COLUMNS {
                for k in 1..=3 {
                    header.push(format!("{v}_{k}"));
                }
            }
            header.push("frenet_residual".into());
            header.push("equiform_residual".into());
            csv_line(&mut out, &header);
            for (p, e, vecs, fr, er) in &rows {
                let mut fields = vec![
                    num(e.s),
                    num(p.x1),
                    num(p.x2),
                    num(p.x3),
                    num(e.frenet.kappa),
                    num(e.frenet.tau),
                    e.epsilon().to_string(),
                    num(e.curvature),
                    num(e.torsion),
                ];
                for v in vecs {
                    fields.extend(v.to_array().map(num));
                }
                fields.push(num(*fr));
                fields.push(num(*er));
                csv_line(&mut out, &fields);
            }
            Ok(out)
        }
        Format::Json => {
            let points: Vec<Value> = rows
                .iter()
                .map(|(p, e, vecs, fr, er)| {
                    let mut m = serde_json::Map::new();
                    m.insert("s".into(), json!(e.s));
                    m.insert("position".into(), json!(p.to_array()));
                    m.insert("kappa".into(), json!(e.frenet.kappa));
                    m.insert("tau".into(), json!(e.frenet.tau));
                    m.insert("epsilon".into(), json!(e.epsilon()));
                    m.insert("curvature".into(), json!(e.curvature));
                    m.insert("torsion".into(), json!(e.torsion));
                    for (name, v) in VECTOR_COLUMNS.iter().zip(vecs) {
                        m.insert(name.to_string(), json!(v.to_array()));
                    }
                    m.insert("frenet_residual".into(), json!(fr));
                    m.insert("equiform_residual".into(), json!(er));
                    Value::Object(m)
                })
                .collect();
            let doc = json!({
                "schema": SCHEMA,
                "curve": loaded.label,
                "params": loaded.params,
                "grid": spec,
                "points": points,
                "diagnostics": loaded.notes,
            });
            Ok(pretty(&doc))
        }
    }
}

fn set_string(set: &std::collections::BTreeSet<AwType>) -> String {
    let names: Vec<String> = set.iter().map(|t| t.to_string()).collect();
    format!("{{{}}}", names.join(", "))
}

fn classify_cmd(cfg: &RunConfig, loaded: &Loaded) -> Result<String, CliError> {
    let c = &loaded.curve;
    let (spec, grid) = grid_for(cfg, c)?;
    let kind = c.kind();
    let tol = cfg
        .tolerances
        .tol_class
        .unwrap_or_else(|| default_tolerance(kind));
    let report = classify(c, &grid, tol)?;

    let mut diagnostics = loaded.notes.clone();
    diagnostics.extend(report.diagnostics.iter().cloned());
    if let Some(&first) = report.degenerate_points.first() {
        diagnostics.push(
            Diagnostic::new(
                "q2-star-degenerate",
                format!(
                    "Q2 has no component off Q1 at {} of {} grid points; weak AW(2) is projected on the binormal direction there",
                    report.degenerate_points.len(),
                    grid.len()
                ),
            )
            .at(first),
        );
    }
    let holding = report.holding();
    if let Some(claimed) = &loaded.claimed {
        if *claimed != holding {
            diagnostics.push(Diagnostic::new(
                "claimed-aw-mismatch",
                format!(
                    "computed types {} differ from the claimed {}",
                    set_string(&holding),
                    set_string(claimed)
                ),
            ));
        }
    }

    let defaults = NaturalTolerances::for_kind(kind);
    let natural_tol = NaturalTolerances {
        tol_const: cfg.tolerances.tol_const.unwrap_or(defaults.tol_const),
        tol_zero: cfg.tolerances.tol_zero.unwrap_or(defaults.tol_zero),
    };
    let natural = match natural_class(c, &grid, natural_tol) {
        Ok(n) => Some(n),
        Err(Error::GridTooSmall { needed, got }) => {
            diagnostics.push(Diagnostic::new(
                "natural-class-skipped",
                format!("natural class needs {needed} grid points, got {got}"),
            ));
            None
        }
        Err(e) => return Err(e.into()),
    };

    match cfg.format {
        Format::Csv => {
            let mut out = String::new();
            csv_line(
                &mut out,
                &["type", "holds", "sup_residual", "vector_sup_residual"].map(String::from),
            );
            for (t, e) in &report.entries {
                csv_line(
                    &mut out,
                    &[
                        t.to_string(),
                        e.holds.to_string(),
                        num(e.sup_residual),
                        num(e.vector_sup_residual),
                    ],
                );
            }
            Ok(out)
        }
        Format::Json => {
            let aw: BTreeMap<String, Value> = report
                .entries
                .iter()
                .map(|(t, e)| {
                    (
                        t.to_string(),
                        json!({
                            "holds": e.holds,
                            "sup_residual": e.sup_residual,
                            "vector_sup_residual": e.vector_sup_residual,
                        }),
                    )
                })
                .collect();
            let doc = json!({
                "schema": SCHEMA,
                "curve": loaded.label,
                "params": loaded.params,
                "grid": spec,
                "jets": kind,
                "tolerance": tol,
                "natural_class": natural,
                "aw": aw,
                "holds": holding,
                "degenerate_points": report.degenerate_points,
                "diagnostics": diagnostics,
            });
            Ok(pretty(&doc))
        }
    }
}

fn bertrand_cmd(cfg: &RunConfig, loaded: &Loaded) -> Result<String, CliError> {
    let c = &loaded.curve;
    let (spec, grid) = grid_for(cfg, c)?;
    let tol = cfg
        .tolerances
        .tol_class
        .unwrap_or_else(|| default_tolerance(c.kind()));
    let mate = bertrand_mate(c, cfg.lambda)?;
    let lambda = cfg.lambda;
    let pair = verify_bertrand_pair(c, &mate, |_| lambda, &grid, tol)?;
    match cfg.format {
        Format::Csv => {
            let mut out = String::from("key,value\n");
            let v = serde_json::to_value(&pair).map_err(|e| CliError::Output(e.to_string()))?;
            if let Value::Object(m) = v {
                for (k, v) in m {
                    let text = match v {
                        Value::Number(n) => num(n.as_f64().unwrap_or(f64::NAN)),
                        Value::String(s) => s,
                        other => other.to_string(),
                    };
                    let _ = writeln!(out, "{k},{text}");
                }
            }
            Ok(out)
        }
        Format::Json => {
            let doc = json!({
                "schema": SCHEMA,
                "curve": loaded.label,
                "params": loaded.params,
                "grid": spec,
                "lambda": lambda,
                "tolerance": tol,
                "pair": pair,
                "diagnostics": loaded.notes,
            });
            Ok(pretty(&doc))
        }
    }
}

fn zoo_list(cfg: &RunConfig) -> String {
    let entries: Vec<(ZooCurve, ZooParams, Domain)> = ZooCurve::ALL
        .iter()
        .map(|&c| {
            let p = c.default_params();
            (c, p, c.default_domain(p))
        })
        .collect();
    match cfg.format {
        Format::Csv => {
            let mut out =
                String::from("name,example,default_a,default_b,domain_lo,domain_hi,constraints\n");
            for (c, p, d) in entries {
                let example = c
                    .example_number()
                    .map(|n| n.to_string())
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},\"{}\"",
                    c.name(),
                    example,
                    p.a,
                    p.b,
                    d.lo,
                    d.hi,
                    c.constraints()
                );
            }
            out
        }
        Format::Json => {
            let list: Vec<Value> = entries
                .into_iter()
                .map(|(c, p, d)| {
                    json!({
                        "name": c.name(),
                        "example": c.example_number(),
                        "default_params": p,
                        "default_domain": d,
                        "constraints": c.constraints(),
                    })
                })
                .collect();
            pretty(&json!({ "schema": SCHEMA, "curves": list }))
        }
    }
}

fn figure(cfg: &RunConfig) -> Result<String, CliError> {
    let spec = figure_spec(cfg.figure)?;
    let entry = zoo_entry(spec.curve, spec.params, Some(spec.domain))?;
    let grid = spec.domain.linspace(spec.samples);
    match cfg.format {
        Format::Csv => {
            let mut out = String::from("s,x,y,z\n");
            for s in grid {
                let p = entry.position(s);
                csv_line(&mut out, &[num(s), num(p.x1), num(p.x2), num(p.x3)]);
            }
            Ok(out)
        }
        Format::Json => {
            let points: Vec<[f64; 4]> = grid
                .iter()
                .map(|&s| {
                    let p = entry.position(s);
                    [s, p.x1, p.x2, p.x3]
                })
                .collect();
            Ok(pretty(&json!({
                "schema": SCHEMA,
                "figure": spec.number,
                "curve": spec.curve.name(),
                "params": spec.params,
                "domain": spec.domain,
                "points": points,
                "diagnostics": entry.notes,
            })))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Produces the output document for a configuration.
pub fn render(cfg: &RunConfig) -> Result<String, CliError> {
    let with_curve = |f: fn(&RunConfig, &Loaded) -> Result<String, CliError>| {
        let spec = cfg
            .curve
            .as_ref()
            .ok_or_else(|| CliError::Validation("no curve given".into()))?;
        let loaded = load(spec, cfg.sample_step)?;
        f(cfg, &loaded)
    };
    match cfg.command {
        Command::Eval => with_curve(eval),
        Command::Classify => with_curve(classify_cmd),
        Command::Bertrand => with_curve(bertrand_cmd),
        Command::ZooList => Ok(zoo_list(cfg)),
        Command::Figure => figure(cfg),
    }
}

/// Renders and writes the output; returns the process exit status.
pub fn run(cfg: &RunConfig) -> i32 {
    let result = render(cfg).and_then(|text| match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Output(e.to_string()))
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

/// Entry point for the binary: parses arguments, runs, returns the status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                print!("{e}");
                return 0;
            }
            let err = CliError::Validation(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return err.exit_code();
        }
    };
    match RunConfig::from_cli(&cli) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(
            GridSpec::parse("0:2:5").unwrap(),
            GridSpec {
                start: 0.0,
                stop: 2.0,
                count: 5
            }
        );
        assert!(GridSpec::parse("0:0:1").is_ok());
        assert!(GridSpec::parse("-3:-0.6:4").is_ok());
        for bad in ["0:1", "1:0:5", "0:1:0", "0:1:1", "a:1:3", "0:inf:3"] {
            assert!(GridSpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn lagrange_reproduces_polynomials() {
        let nodes: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let values: Vec<PgVector> = nodes
            .iter()
            .map(|&s| PgVector::new(s, s.powi(7) - s, 2.0 * s * s))
            .collect();
        for t in [0.05, 0.93, 1.87] {
            let p = lagrange(&nodes, &values, t);
            assert!((p.x2 - (t.powi(7) - t)).abs() < 1e-12);
            assert!((p.x3 - 2.0 * t * t).abs() < 1e-13);
        }
    }

    #[test]
    fn exit_codes() {
        let inadmissible = CliError::Curve(Error::Inadmissible {
            s: 0.0,
            reason: crate::error::Degeneracy::Inflection,
        });
        assert_eq!(inadmissible.exit_code(), 3);
        assert_eq!(
            CliError::Curve(Error::UnknownName("x".into())).exit_code(),
            2
        );
        let v: Value = serde_json::from_str(&inadmissible.to_json()).unwrap();
        assert_eq!(v["error"]["code"], "inadmissible");
        assert_eq!(v["schema"], SCHEMA);
    }
}
