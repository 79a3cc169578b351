//! Command-line front end: config ingestion, single computations, parameter
//! sweeps, validation runs, CSV emission.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric/domain error.

use std::fs;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use casimir::thermal::pressure_finite_t_with;
use casimir::{
    eps_imag_axis, eps_static, pressure_zero_t, run_suite_filtered, CasimirError, Configuration,
    Geometry, Length, Material, OscillatorTerm, PermittivityModel, PressureResult,
    QuadratureSettings, Temperature, WaveNumber, ZeroFreqConvention,
};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(name = "casimir", about = "Casimir/van der Waals pressure between dielectric layers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Size of the worker thread pool (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the pressure for one configuration.
    Compute(ComputeArgs),
    /// Evaluate the pressure along a swept variable and emit CSV.
    Sweep(SweepArgs),
    /// Run the cross-check suite.
    Validate(ValidateArgs),
    /// Tabulate the permittivity of the configured material.
    Material(MaterialArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// TOML configuration file.
    config: String,
    /// Emit the result as a CSV row under the standard header.
    #[arg(long)]
    csv: bool,
    /// Report |P| instead of the signed pressure.
    #[arg(long)]
    magnitude: bool,
    /// Print the parsed configuration back as TOML and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML configuration file with a [sweep] block.
    config: String,
    /// Write the CSV here instead of the path in the config (or stdout).
    #[arg(long, value_name = "FILE")]
    output: Option<String>,
    /// Report |P| instead of the signed pressure.
    #[arg(long)]
    magnitude: bool,
    /// Print the parsed configuration back as TOML and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct ValidateArgs {
    /// Run only the checks whose name contains this substring.
    #[arg(long, value_name = "SUBSTR")]
    filter: Option<String>,
    /// Emit the report as CSV instead of plain text.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct MaterialArgs {
    /// TOML configuration file (only the [material] block is needed).
    config: String,
    /// Wavenumber (1/nm) to tabulate; repeatable.
    #[arg(long = "k", value_name = "K")]
    wavenumbers: Vec<f64>,
}

// ---------------------------------------------------------------------------
// Configuration file schema

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    /// Temperature in K; absent means the zero-temperature integral.
    /// Top-level key: must precede the table blocks in the file.
    #[serde(skip_serializing_if = "Option::is_none")]
    temperature: Option<f64>,
    /// "regularized" (default) or "conductor".
    #[serde(skip_serializing_if = "Option::is_none")]
    zero_frequency: Option<String>,
    material: MaterialSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    geometry: Option<GeometrySpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quadrature: Option<QuadratureSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<SweepSpec>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct MaterialSpec {
    /// "small-density" (default) or "clausius-mossotti".
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<String>,
    #[serde(default, rename = "oscillator", skip_serializing_if = "Vec::is_empty")]
    oscillators: Vec<OscillatorSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    drude: Option<DrudeSpec>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct OscillatorSpec {
    k_p: f64,
    k_r: f64,
    #[serde(default)]
    k_c: f64,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct DrudeSpec {
    k_p: f64,
    #[serde(default)]
    k_c: f64,
    /// Binding cutoff regularizing the free-carrier pole at k = 0.
    #[serde(skip_serializing_if = "Option::is_none")]
    k_s: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct GeometrySpec {
    /// "ideal", "half-spaces", "slabs", "filled-gap", "film", "sheets".
    #[serde(rename = "type")]
    kind: String,
    /// Gap in nm.
    d: f64,
    /// Slab thickness in nm (slabs, filled-gap).
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    /// Normalized sheet conductivity (sheets).
    #[serde(skip_serializing_if = "Option::is_none")]
    zeta: Option<f64>,
    /// Material filling the gap (filled-gap).
    #[serde(skip_serializing_if = "Option::is_none")]
    gap_material: Option<MaterialSpec>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct QuadratureSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    n_theta: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_theta_strip: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_chi: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rel_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    chi_max: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct SweepSpec {
    /// "d", "t" or "T".
    variable: String,
    start: f64,
    stop: f64,
    points: usize,
    /// "linear" (default) or "log".
    #[serde(skip_serializing_if = "Option::is_none")]
    spacing: Option<String>,
    /// CSV destination; stdout when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<String>,
}

// ---------------------------------------------------------------------------
// Config -> engine types

struct ConfigError(String);

impl From<CasimirError> for ConfigError {
    fn from(e: CasimirError) -> Self {
        ConfigError(e.to_string())
    }
}

fn build_material(spec: &MaterialSpec) -> Result<Material, ConfigError> {
    let model = match spec.model.as_deref() {
        None | Some("small-density") => PermittivityModel::SmallDensity,
        Some("clausius-mossotti") => PermittivityModel::ClausiusMossotti,
        Some(other) => {
            return Err(ConfigError(format!(
                "unknown permittivity model {other:?}; expected \"small-density\" or \"clausius-mossotti\""
            )))
        }
    };
    let terms = spec
        .oscillators
        .iter()
        .map(|o| OscillatorTerm::new(o.k_p, o.k_r, o.k_c))
        .collect::<Result<Vec<_>, _>>()?;
    let (drude, binding) = match &spec.drude {
        Some(d) => (
            Some(OscillatorTerm::new(d.k_p, 0.0, d.k_c)?),
            match d.k_s {
                Some(k_s) => Some(WaveNumber::new(k_s)?),
                None => None,
            },
        ),
        None => (None, None),
    };
    Ok(Material::new(terms, drude, binding, model)?)
}

fn build_geometry(spec: &GeometrySpec) -> Result<Geometry, ConfigError> {
    let thickness = || -> Result<Length, ConfigError> {
        let t = spec.t.ok_or_else(|| {
            ConfigError(format!("geometry type {:?} needs a thickness t", spec.kind))
        })?;
        Ok(Length::new(t)?)
    };
    Ok(match spec.kind.as_str() {
        "ideal" => Geometry::IdealCasimir,
        "half-spaces" => Geometry::HalfSpaces,
        "slabs" => Geometry::SlabSlab {
            thickness: thickness()?,
        },
        "filled-gap" => Geometry::FilledGap {
            thickness: thickness()?,
            gap_material: build_material(spec.gap_material.as_ref().ok_or_else(|| {
                ConfigError("filled-gap geometry needs a [geometry.gap_material] block".into())
            })?)?,
        },
        "film" => Geometry::FilmInVacuum,
        "sheets" => Geometry::ConductiveSheets {
            zeta: spec.zeta.ok_or_else(|| {
                ConfigError("sheets geometry needs a conductivity zeta".into())
            })?,
        },
        other => {
            return Err(ConfigError(format!(
                "unknown geometry type {other:?}; expected ideal, half-spaces, slabs, filled-gap, film or sheets"
            )))
        }
    })
}

fn build_configuration(run: &RunConfig) -> Result<Configuration, ConfigError> {
    let geometry_spec = run
        .geometry
        .as_ref()
        .ok_or_else(|| ConfigError("missing [geometry] block".into()))?;
    let geometry = build_geometry(geometry_spec)?;
    let material = build_material(&run.material)?;
    Ok(Configuration::new(
        geometry,
        material,
        Length::new(geometry_spec.d)?,
    )?)
}

fn build_settings(run: &RunConfig) -> Result<QuadratureSettings, ConfigError> {
    let mut settings = QuadratureSettings::default();
    if let Some(q) = &run.quadrature {
        if let Some(n) = q.n_theta {
            settings.n_theta = n;
        }
        if let Some(n) = q.n_theta_strip {
            settings.n_theta_strip = n;
        }
        if let Some(v) = q.theta0 {
            settings.theta0 = v;
        }
        if let Some(n) = q.n_chi {
            settings.n_chi = n;
        }
        if let Some(v) = q.rel_tol {
            settings.rel_tol = v;
        }
        settings.chi_max_override = q.chi_max;
    }
    settings.validate()?;
    Ok(settings)
}

fn build_convention(run: &RunConfig) -> Result<ZeroFreqConvention, ConfigError> {
    match run.zero_frequency.as_deref() {
        None | Some("regularized") => Ok(ZeroFreqConvention::Regularized),
        Some("conductor") => Ok(ZeroFreqConvention::Conductor),
        Some(other) => Err(ConfigError(format!(
            "unknown zero_frequency convention {other:?}; expected \"regularized\" or \"conductor\""
        ))),
    }
}

fn build_temperature(run: &RunConfig) -> Result<Option<Temperature>, ConfigError> {
    match run.temperature {
        Some(kelvin) => Ok(Some(Temperature::new(kelvin)?)),
        None => Ok(None),
    }
}

fn parse_config(path: &str) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {path}: {e}")))?;
    toml::from_str(&text).map_err(|e| ConfigError(format!("{path}: {e}")))
}

// ---------------------------------------------------------------------------
// Commands

fn evaluate(
    config: &Configuration,
    settings: &QuadratureSettings,
    temperature: Option<Temperature>,
    convention: ZeroFreqConvention,
) -> Result<PressureResult, CasimirError> {
    match temperature {
        Some(t) => pressure_finite_t_with(config, t, settings, convention),
        None => pressure_zero_t(config, settings),
    }
}

const CSV_HEADER: &str = "variable,pressure_N_per_m2,est_error,tail_fraction";

fn csv_row(variable: f64, result: &PressureResult, magnitude: bool) -> String {
    let p = result.pressure.n_per_m2();
    let p = if magnitude { p.abs() } else { p + 0.0 }; // +0.0 folds -0 into 0
    format!(
        "{variable:.16e},{p:.16e},{:.16e},{:.16e}",
        result.est_error, result.tail_fraction
    )
}

fn dump_config(run: &RunConfig) -> ExitCode {
    match toml::to_string_pretty(run) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: cannot serialize configuration: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn config_fail(e: ConfigError) -> ExitCode {
    eprintln!("configuration error: {}", e.0);
    ExitCode::from(EXIT_CONFIG)
}

fn numeric_fail(e: CasimirError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_NUMERIC)
}

fn cmd_compute(args: &ComputeArgs) -> ExitCode {
    let run = match parse_config(&args.config) {
        Ok(run) => run,
        Err(e) => return config_fail(e),
    };
    if args.dump_config {
        return dump_config(&run);
    }
    let prepared = (|| {
        Ok::<_, ConfigError>((
            build_configuration(&run)?,
            build_settings(&run)?,
            build_temperature(&run)?,
            build_convention(&run)?,
        ))
    })();
    let (config, settings, temperature, convention) = match prepared {
        Ok(p) => p,
        Err(e) => return config_fail(e),
    };
    match evaluate(&config, &settings, temperature, convention) {
        Ok(result) => {
            if args.csv {
                println!("{CSV_HEADER}");
                println!("{}", csv_row(config.gap.nm(), &result, args.magnitude));
            } else {
                let p = result.pressure.n_per_m2();
                let p = if args.magnitude { p.abs() } else { p + 0.0 };
                println!(
                    "pressure = {p:.16e} N/m^2, est_error = {:.3e} N/m^2, tail_fraction = {:.3e}",
                    result.est_error, result.tail_fraction
                );
            }
            ExitCode::SUCCESS
        }
        Err(e) => numeric_fail(e),
    }
}

fn sweep_values(spec: &SweepSpec) -> Result<Vec<f64>, ConfigError> {
    if spec.points == 0 {
        return Err(ConfigError("sweep needs at least one point".into()));
    }
    if !(spec.start > 0.0 && spec.stop > 0.0) {
        return Err(ConfigError("sweep range must be positive".into()));
    }
    let log = match spec.spacing.as_deref() {
        None | Some("linear") => false,
        Some("log") => true,
        Some(other) => {
            return Err(ConfigError(format!(
                "unknown sweep spacing {other:?}; expected \"linear\" or \"log\""
            )))
        }
    };
    if spec.points == 1 {
        return Ok(vec![spec.start]);
    }
    let n = spec.points as f64 - 1.0;
    Ok((0..spec.points)
        .map(|i| {
            let f = i as f64 / n;
            if log {
                spec.start * (spec.stop / spec.start).powf(f)
            } else {
                spec.start + (spec.stop - spec.start) * f
            }
        })
        .collect())
}

/// Rebuild the configuration/temperature pair with the swept variable set.
fn sweep_point(
    base: &Configuration,
    temperature: Option<Temperature>,
    variable: &str,
    value: f64,
) -> Result<(Configuration, Option<Temperature>), CasimirError> {
    match variable {
        "d" => {
            let mut config = base.clone();
            config.gap = Length::new(value)?;
            Ok((config, temperature))
        }
        "t" => {
            let mut config = base.clone();
            match &mut config.geometry {
                Geometry::SlabSlab { thickness }
                | Geometry::FilledGap { thickness, .. } => *thickness = Length::new(value)?,
                _ => {
                    return Err(CasimirError::InvalidParameter(
                        "thickness sweep needs a slabs or filled-gap geometry".into(),
                    ))
                }
            }
            Ok((config, temperature))
        }
        "T" => Ok((base.clone(), Some(Temperature::new(value)?))),
        other => Err(CasimirError::InvalidParameter(format!(
            "unknown sweep variable {other:?}; expected d, t or T"
        ))),
    }
}

fn cmd_sweep(args: &SweepArgs) -> ExitCode {
    let run = match parse_config(&args.config) {
        Ok(run) => run,
        Err(e) => return config_fail(e),
    };
    if args.dump_config {
        return dump_config(&run);
    }
    let prepared = (|| {
        let spec = run
            .sweep
            .as_ref()
            .ok_or_else(|| ConfigError("missing [sweep] block".into()))?;
        Ok::<_, ConfigError>((
            build_configuration(&run)?,
            build_settings(&run)?,
            build_temperature(&run)?,
            build_convention(&run)?,
            sweep_values(spec)?,
            spec.variable.clone(),
            args.output.clone().or_else(|| spec.output.clone()),
        ))
    })();
    let (base, settings, temperature, convention, values, variable, output) = match prepared {
        Ok(p) => p,
        Err(e) => return config_fail(e),
    };

    // All points in parallel; rows are emitted in sweep order regardless of
    // completion order, and a failure aborts the output after the last good
    // row with a marker comment.
    let results: Vec<Result<PressureResult, CasimirError>> = values
        .par_iter()
        .map(|&value| {
            let (config, temp) = sweep_point(&base, temperature, &variable, value)?;
            evaluate(&config, &settings, temp, convention)
        })
        .collect();

    let mut body = String::from(CSV_HEADER);
    body.push('\n');
    let mut failure = None;
    for (value, result) in values.iter().zip(&results) {
        match result {
            Ok(r) => {
                body.push_str(&csv_row(*value, r, args.magnitude));
                body.push('\n');
            }
            Err(e) => {
                body.push_str(&format!("# aborted at {variable} = {value}: {e}\n"));
                failure = Some(e.clone());
                break;
            }
        }
    }

    let written = match &output {
        Some(path) => fs::File::create(path)
            .and_then(|mut f| f.write_all(body.as_bytes()))
            .map_err(|e| ConfigError(format!("cannot write {path}: {e}"))),
        None => {
            print!("{body}");
            Ok(())
        }
    };
    if let Err(e) = written {
        return config_fail(e);
    }
    match failure {
        Some(e) => numeric_fail(e),
        None => ExitCode::SUCCESS,
    }
}

fn cmd_validate(args: &ValidateArgs) -> ExitCode {
    let report = run_suite_filtered(args.filter.as_deref());
    if args.csv {
        print!("{}", report.to_csv());
    } else {
        print!("{}", report.to_text());
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NUMERIC)
    }
}

fn cmd_material(args: &MaterialArgs) -> ExitCode {
    let run = match parse_config(&args.config) {
        Ok(run) => run,
        Err(e) => return config_fail(e),
    };
    let material = match build_material(&run.material) {
        Ok(m) => m,
        Err(e) => return config_fail(e),
    };
    let mut rows: Vec<(String, Result<f64, CasimirError>)> = Vec::new();
    rows.push(("0+".to_string(), eps_static(&material)));
    let defaults = [1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0];
    let ks: &[f64] = if args.wavenumbers.is_empty() {
        &defaults
    } else {
        &args.wavenumbers
    };
    for &k in ks {
        let value = WaveNumber::new(k).and_then(|k| eps_imag_axis(&material, k));
        rows.push((format!("{k:e}"), value));
    }
    // eps -> 1 from above at large wavenumber.
    rows.push((
        "1e6".to_string(),
        WaveNumber::new(1e6).and_then(|k| eps_imag_axis(&material, k)),
    ));

    println!("{:>12}  {:>22}", "k (1/nm)", "eps(ik)");
    for (label, value) in &rows {
        match value {
            Ok(eps) => println!("{label:>12}  {eps:>22.10}"),
            Err(e) => println!("{label:>12}  error: {e}"),
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("configuration error: cannot size the thread pool: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    }
    match &cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Material(args) => cmd_material(args),
    }
}
