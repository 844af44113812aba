//! JSON in, JSON/CSV out: classify a Killing two-tensor, emit its confocal
//! web as plot data, and check a potential for integrability.
//!
//! Exit codes: 0 success, 1 parse error, 2 trivial tensor, 3 not a Killing
//! tensor, 4 incompatible potential.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use ktweb::frames::FrameError;
use ktweb::mechanics::{
    bde_residual, bracket_vanishes, reconstruct_integral_potential, verify_first_integral_numeric,
    NaturalHamiltonian, QuadraticIntegral,
};
use ktweb::{
    canonicalize, invariants, orbit_dimension, parse_poly, separable_map, separable_map_text,
    web_points, web_points_csv, BiPoly, Canonicalization, Frame, Isometry, KtParams, Rational,
    SymTensorField,
};

#[derive(Parser)]
#[command(
    name = "ktweb",
    version,
    about = "Classify planar Killing two-tensors and produce their separable coordinate webs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format (default: json for classify/check, csv for web-points)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: invariants, web type, moving frame, canonical form
    Classify { file: PathBuf },
    /// Sample the two confocal coordinate-curve families in original coordinates
    WebPoints {
        file: PathBuf,
        /// Number of curves per family
        #[arg(long, default_value_t = 8)]
        curves: usize,
        /// Number of sample points per curve
        #[arg(long, default_value_t = 80)]
        samples: usize,
    },
    /// Check a potential: Bertrand-Darboux residual, reconstruction, bracket, drift
    Check {
        file: PathBuf,
        /// Trajectory duration for the numeric conservation witness
        #[arg(long = "T", default_value_t = 10.0)]
        t_final: f64,
        /// Integrator step
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
    },
}

/// Input document: exactly one of `beta` or the component triple, plus
/// optional potentials.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemSpec {
    beta: Option<Vec<String>>,
    #[serde(rename = "K11")]
    k11: Option<String>,
    #[serde(rename = "K12")]
    k12: Option<String>,
    #[serde(rename = "K22")]
    k22: Option<String>,
    #[serde(rename = "V")]
    v: Option<String>,
    #[serde(rename = "U")]
    u: Option<String>,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ktweb: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Classify { file } => {
            let spec = load_spec(file)?;
            let beta = load_params(&spec)?;
            let report = classify_report(&beta, &spec)?;
            emit(&report, cli.format.unwrap_or(Format::Json));
            Ok(())
        }
        Command::WebPoints {
            file,
            curves,
            samples,
        } => {
            let spec = load_spec(file)?;
            let beta = load_params(&spec)?;
            let canon = canonicalize(&beta).map_err(frame_error)?;
            let chart = separable_map(&canon.to_f64());
            let points = web_points(&chart, *curves, *samples);
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => print!("{}", web_points_csv(&points)),
                Format::Json => {
                    let rows: Vec<Value> = points
                        .iter()
                        .map(|p| {
                            json!({
                                "family": p.family.to_string(),
                                "curve_index": p.curve_index,
                                "u": num(p.u),
                                "v": num(p.v),
                                "q1": num(p.q1),
                                "q2": num(p.q2),
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&Value::Array(rows)).unwrap()
                    );
                }
            }
            Ok(())
        }
        Command::Check { file, t_final, dt } => {
            let spec = load_spec(file)?;
            let beta = load_params(&spec)?;
            let (report, compatible) = check_report(&beta, &spec, *t_final, *dt)?;
            emit(&report, cli.format.unwrap_or(Format::Json));
            if compatible {
                Ok(())
            } else {
                Err(CliError::new(
                    4,
                    "potential incompatible with the Killing tensor",
                ))
            }
        }
    }
}

fn load_spec(file: &PathBuf) -> Result<ProblemSpec, CliError> {
    let text = fs::read_to_string(file)
        .map_err(|e| CliError::new(1, format!("cannot read {}: {e}", file.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::new(1, format!("invalid input document: {e}")))
}

fn load_params(spec: &ProblemSpec) -> Result<KtParams<Rational>, CliError> {
    let has_components = spec.k11.is_some() || spec.k12.is_some() || spec.k22.is_some();
    match (&spec.beta, has_components) {
        (Some(_), true) => Err(CliError::new(
            1,
            "give either `beta` or the K components, not both",
        )),
        (None, false) => Err(CliError::new(
            1,
            "missing tensor: give `beta` or K11/K12/K22",
        )),
        (Some(beta), false) => {
            if beta.len() != 6 {
                return Err(CliError::new(
                    1,
                    format!("`beta` must have 6 entries, got {}", beta.len()),
                ));
            }
            let mut parsed = Vec::with_capacity(6);
            for (i, s) in beta.iter().enumerate() {
                let r = Rational::from_str(s.trim())
                    .map_err(|e| CliError::new(1, format!("beta[{i}] = {s:?}: {e}")))?;
                parsed.push(r);
            }
            Ok(KtParams::new(std::array::from_fn(|i| parsed[i].clone())))
        }
        (None, true) => {
            let component = |name: &str, src: &Option<String>| -> Result<BiPoly, CliError> {
                let src = src
                    .as_deref()
                    .ok_or_else(|| CliError::new(1, format!("missing component {name}")))?;
                parse_poly(src).map_err(|e| CliError::new(1, format!("{name}: {e}")))
            };
            let field = SymTensorField::new(
                component("K11", &spec.k11)?,
                component("K12", &spec.k12)?,
                component("K22", &spec.k22)?,
            );
            field.params().map_err(|e| CliError::new(3, e.to_string()))
        }
    }
}

fn frame_error(e: FrameError) -> CliError {
    let code = match e {
        FrameError::TrivialTensor => 2,
        FrameError::WrongType { .. } => 3,
    };
    CliError::new(code, e.to_string())
}

fn parse_potential(name: &str, src: &str) -> Result<BiPoly, CliError> {
    parse_poly(src).map_err(|e| CliError::new(1, format!("{name}: {e}")))
}

fn classify_report(beta: &KtParams<Rational>, spec: &ProblemSpec) -> Result<Value, CliError> {
    let canon = canonicalize(beta).map_err(frame_error)?;
    let inv = invariants(beta);

    let mut report = Map::new();
    report.insert(
        "invariants".into(),
        json!({
            "delta1": inv.delta1.to_string(),
            "delta2": inv.delta2.to_string(),
            "delta3": inv.delta3.to_string(),
        }),
    );
    report.insert("web_type".into(), Value::String(canon.web().to_string()));
    report.insert("orbit_dimension".into(), json!(orbit_dimension(beta)));
    report.insert("frame".into(), frame_value(&canon.frame()));
    match &canon {
        Canonicalization::Exact(d) => {
            report.insert(
                "beta_canonical".into(),
                Value::Array(
                    d.beta_canonical
                        .as_array()
                        .iter()
                        .map(|b| Value::String(b.to_string()))
                        .collect(),
                ),
            );
            report.insert("ell1".into(), Value::String(d.ell1.to_string()));
            report.insert("ell2".into(), Value::String(d.ell2.to_string()));
            report.insert("separable_map".into(), Value::String(separable_map_text(d)));
        }
        Canonicalization::Approx(d) => {
            report.insert(
                "beta_canonical".into(),
                Value::Array(
                    d.beta_canonical
                        .as_array()
                        .iter()
                        .map(|b| num(*b))
                        .collect(),
                ),
            );
            report.insert("ell1".into(), num(d.ell1));
            report.insert("ell2".into(), num(d.ell2));
            report.insert("separable_map".into(), Value::String(separable_map_text(d)));
        }
    }
    if let Some(k) = canon.k() {
        report.insert("k".into(), num(k));
    }

    let mut checks = Map::new();
    checks.insert("killing_ok".into(), Value::Bool(beta.tensor().is_killing()));
    if let Some(vsrc) = &spec.v {
        let v = parse_potential("V", vsrc)?;
        checks.insert(
            "bde_ok".into(),
            Value::Bool(bde_residual(beta, &v).is_zero()),
        );
        let u = match &spec.u {
            Some(usrc) => Some(parse_potential("U", usrc)?),
            None => reconstruct_integral_potential(beta, &v).ok(),
        };
        let bracket_ok = u
            .map(|u| {
                bracket_vanishes(
                    &NaturalHamiltonian {
                        potential: v.clone(),
                    },
                    &QuadraticIntegral {
                        kt: beta.clone(),
                        potential: u,
                    },
                )
            })
            .unwrap_or(false);
        checks.insert("bracket_ok".into(), Value::Bool(bracket_ok));
    }
    report.insert("checks".into(), Value::Object(checks));
    Ok(Value::Object(report))
}

fn check_report(
    beta: &KtParams<Rational>,
    spec: &ProblemSpec,
    t_final: f64,
    dt: f64,
) -> Result<(Value, bool), CliError> {
    if beta.is_trivial() {
        return Err(CliError::new(2, FrameError::TrivialTensor.to_string()));
    }
    let vsrc = spec
        .v
        .as_deref()
        .ok_or_else(|| CliError::new(1, "`check` requires a potential V"))?;
    let v = parse_potential("V", vsrc)?;

    let mut report = Map::new();
    report.insert(
        "bde_residual_zero".into(),
        Value::Bool(bde_residual(beta, &v).is_zero()),
    );

    let (compatible, u_reconstructed) = match reconstruct_integral_potential(beta, &v) {
        Ok(u) => (true, Some(u)),
        Err(e) => {
            report.insert("residual".into(), Value::String(e.residual.to_string()));
            (false, None)
        }
    };
    report.insert("compatible".into(), Value::Bool(compatible));
    report.insert(
        "U_reconstructed".into(),
        u_reconstructed
            .as_ref()
            .map(|u| Value::String(u.to_string()))
            .unwrap_or(Value::Null),
    );

    let u = match &spec.u {
        Some(usrc) => Some(parse_potential("U", usrc)?),
        None => u_reconstructed,
    };
    let hamiltonian = NaturalHamiltonian { potential: v };
    match u {
        Some(u) => {
            let integral = QuadraticIntegral {
                kt: beta.clone(),
                potential: u,
            };
            report.insert(
                "bracket_zero".into(),
                Value::Bool(bracket_vanishes(&hamiltonian, &integral)),
            );
            let drift = verify_first_integral_numeric(
                &hamiltonian,
                &integral,
                [0.1, 0.2, 0.3, -0.1],
                t_final,
                dt,
            );
            report.insert(
                "numeric_drift".into(),
                json!({
                    "max_dH": num(drift.max_dh),
                    "max_dF": num(drift.max_df),
                    "diverged": drift.diverged,
                }),
            );
        }
        None => {
            report.insert("bracket_zero".into(), Value::Bool(false));
            report.insert("numeric_drift".into(), Value::Null);
        }
    }
    Ok((Value::Object(report), compatible))
}

fn frame_value(frame: &Frame) -> Value {
    match frame {
        Frame::Exact(g) => json!({
            "p1": g.t1.to_string(),
            "p2": g.t2.to_string(),
            "p3": exact_angle_value(g),
        }),
        Frame::Approx(g) => json!({
            "p1": num(g.t1),
            "p2": num(g.t2),
            "p3": num(g.angle()),
        }),
    }
}

/// Angle of an exact frame: the rational string "0" for the identity
/// rotation, a float otherwise (quarter-turn angles are irrational).
fn exact_angle_value(g: &Isometry<Rational>) -> Value {
    if g.rot.is_identity() {
        Value::String("0".into())
    } else {
        num(g.angle())
    }
}

fn num(x: f64) -> Value {
    let x = if x == 0.0 { 0.0 } else { x }; // drop the sign of -0.0
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn emit(report: &Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).unwrap()),
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", report, &mut rows);
            rows.sort();
            let mut out = String::from("key,value\n");
            for (k, v) in rows {
                let _ = writeln!(out, "{k},{v}");
            }
            print!("{out}");
        }
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let key = |suffix: &str| {
        if prefix.is_empty() {
            suffix.to_string()
        } else {
            format!("{prefix}.{suffix}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), format!("\"{s}\""))),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}
