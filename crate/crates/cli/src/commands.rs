//! The three subcommands, as functions from a scenario to a report.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use weylkit_core::compat::{
    integrability_check, is_lightcone_compatible, point_seed, weylize as weylize_points,
    CheckOptions, CompatReport, Verdict,
};
use weylkit_core::geodesic::{integrate_geodesic, null_norm_drift, pregeodesic_residual};
use weylkit_core::geometry::{Connection, ConnectionField};

use crate::error::{CliError, EXIT_INCOMPATIBLE, EXIT_OK};
use crate::json;
use crate::scenario::{FormRole, GeodesicFile, Scenario, Settings};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Settings plus the scenario file, exactly as used.
#[derive(Debug, Clone, Serialize)]
pub struct EchoedConfig {
    pub settings: Settings,
    pub scenario: Value,
}

fn echo(scenario: &Scenario) -> EchoedConfig {
    EchoedConfig {
        settings: scenario.settings,
        scenario: scenario.source.clone(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    /// `φ^i`.
    pub phi_vec: Vec<f64>,
    /// `φ_k = g_{ki} φ^i`.
    pub phi: Vec<f64>,
    pub eta: Vec<f64>,
    pub residual: f64,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub index: usize,
    pub point: Vec<f64>,
    pub seed: u64,
    pub samples: usize,
    pub scale: f64,
    pub absolute_tolerance: f64,
    pub max_nullcone_residual: f64,
    pub decomposition: DecompositionReport,
    pub sampling_verdict: &'static str,
    pub decomposition_verdict: &'static str,
    pub verdict: &'static str,
}

fn verdict_str(ok: bool) -> &'static str {
    if ok {
        Verdict::Compatible.as_str()
    } else {
        Verdict::Incompatible.as_str()
    }
}

fn point_report(
    index: usize,
    scenario: &Scenario,
    report: &CompatReport,
) -> Result<PointReport, CliError> {
    let gp = scenario
        .metric
        .at(&report.point)
        .map_err(|source| CliError::Point { index, source })?;
    let dec = &report.decomposition;
    Ok(PointReport {
        index,
        point: report.point.clone(),
        seed: report.seed,
        samples: report.samples,
        scale: report.scale,
        absolute_tolerance: report.absolute_tolerance(),
        max_nullcone_residual: report.max_nullcone_residual,
        decomposition: DecompositionReport {
            phi_vec: dec.phi_vec.clone(),
            phi: dec.phi_form(&gp),
            eta: dec.eta.clone(),
            residual: dec.residual,
            warning: dec.warning.clone(),
        },
        sampling_verdict: verdict_str(report.sampling_compatible()),
        decomposition_verdict: verdict_str(report.decomposition_compatible()),
        verdict: report.verdict().as_str(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub command: &'static str,
    pub version: &'static str,
    pub name: Option<String>,
    pub dimension: usize,
    pub connection: String,
    pub points: Vec<PointReport>,
    pub verdict: &'static str,
    pub config: EchoedConfig,
}

impl CheckReport {
    pub fn exit_code(&self) -> i32 {
        if self.verdict == Verdict::Compatible.as_str() {
            EXIT_OK
        } else {
            EXIT_INCOMPATIBLE
        }
    }
}

fn require_points(scenario: &Scenario) -> Result<(), CliError> {
    if scenario.points.is_empty() {
        return Err(CliError::Scenario(
            "points: at least one point is required".into(),
        ));
    }
    Ok(())
}

/// Pointwise light-cone compatibility at every scenario point.
pub fn check(scenario: &Scenario) -> Result<CheckReport, CliError> {
    require_points(scenario)?;
    let options = scenario.settings.check_options();
    let mut points = Vec::with_capacity(scenario.points.len());
    for (index, p) in scenario.points.iter().enumerate() {
        let opts = CheckOptions {
            seed: point_seed(options.seed, index),
            ..options
        };
        let report = is_lightcone_compatible(&scenario.metric, &scenario.connection, p, &opts)
            .map_err(|source| CliError::Point { index, source })?;
        points.push(point_report(index, scenario, &report)?);
    }
    let all = points
        .iter()
        .all(|p| p.verdict == Verdict::Compatible.as_str());
    Ok(CheckReport {
        command: "check",
        version: VERSION,
        name: scenario.name.clone(),
        dimension: scenario.chart.dim(),
        connection: scenario.connection.label(),
        points,
        verdict: verdict_str(all),
        config: echo(scenario),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WeylPointReport {
    pub index: usize,
    pub point: Vec<f64>,
    /// `φ_k = g_{ki} φ^i` of the normal form.
    pub phi: Vec<f64>,
    pub eta: Vec<f64>,
    /// One-form of the Weyl structure projectively equivalent to the connection.
    pub weyl_form: Vec<f64>,
    pub max_nullcone_residual: f64,
    pub decomposition_residual: f64,
    pub absolute_tolerance: f64,
    /// Values of the scenario's own one-form, when it has one.
    pub expected: Option<Vec<f64>>,
    pub max_abs_error: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Integrability {
    pub closed: bool,
    pub max_curl: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymbolicForm {
    /// `weyl` compares with `weyl_form`, `phi` with `phi`.
    pub role: FormRole,
    pub components: Vec<String>,
    pub max_abs_error: f64,
    pub integrability: Integrability,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeylizeReport {
    pub command: &'static str,
    pub version: &'static str,
    pub name: Option<String>,
    pub dimension: usize,
    pub connection: String,
    pub points: Vec<WeylPointReport>,
    pub symbolic_form: Option<SymbolicForm>,
    pub config: EchoedConfig,
}

/// Recover the Weyl one-form at every point; fails with exit code 2 when a
/// point has no normal form.
pub fn weylize(scenario: &Scenario) -> Result<WeylizeReport, CliError> {
    require_points(scenario)?;
    let options = scenario.settings.check_options();
    let result = weylize_points(
        &scenario.metric,
        &scenario.connection,
        &scenario.points,
        &options,
    )?;
    let mut points = Vec::with_capacity(result.points.len());
    let mut worst: f64 = 0.0;
    for (index, wp) in result.points.iter().enumerate() {
        let expected = match &scenario.symbolic_form {
            Some((_, form)) => Some(
                form.at(&wp.point)
                    .map_err(|source| CliError::Point { index, source })?,
            ),
            None => None,
        };
        let max_abs_error = match (&scenario.symbolic_form, &expected) {
            (Some((role, _)), Some(values)) => {
                let got = match role {
                    FormRole::Weyl => &wp.weyl_form,
                    FormRole::Phi => &wp.phi,
                };
                let err = got
                    .iter()
                    .zip(values)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                worst = worst.max(err);
                Some(err)
            }
            _ => None,
        };
        points.push(WeylPointReport {
            index,
            point: wp.point.clone(),
            phi: wp.phi.clone(),
            eta: wp.eta.clone(),
            weyl_form: wp.weyl_form.clone(),
            max_nullcone_residual: wp.report.max_nullcone_residual,
            decomposition_residual: wp.report.decomposition.residual,
            absolute_tolerance: wp.report.absolute_tolerance(),
            expected,
            max_abs_error,
        });
    }
    let symbolic_form = match &scenario.symbolic_form {
        Some((role, form)) => {
            let check = integrability_check(form, &scenario.points, scenario.settings.tolerance)?;
            Some(SymbolicForm {
                role: *role,
                components: form
                    .components()
                    .iter()
                    .map(|e| e.display(&scenario.chart).to_string())
                    .collect(),
                max_abs_error: worst,
                integrability: Integrability {
                    closed: check.closed,
                    max_curl: check.max_curl,
                },
            })
        }
        None => None,
    };
    Ok(WeylizeReport {
        command: "weylize",
        version: VERSION,
        name: scenario.name.clone(),
        dimension: scenario.chart.dim(),
        connection: scenario.connection.label(),
        points,
        symbolic_form,
        config: echo(scenario),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GeodesicEntry {
    pub index: usize,
    pub file: String,
    pub x0: Vec<f64>,
    pub v0: Vec<f64>,
    pub steps: usize,
    pub h: f64,
    /// `g(v0, v0)`; zero for a null start.
    pub initial_norm: f64,
    pub null_norm_drift: f64,
    /// Against the Levi-Civita connection the curve was integrated with.
    pub self_residual: f64,
    /// Against the scenario's connection.
    pub pregeodesic_residual: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeodesicSummary {
    pub command: &'static str,
    pub version: &'static str,
    pub name: Option<String>,
    pub dimension: usize,
    pub integrated_with: &'static str,
    pub connection: String,
    pub tolerance: f64,
    pub geodesics: Vec<GeodesicEntry>,
    pub flagged: usize,
    pub config: EchoedConfig,
}

impl GeodesicSummary {
    pub fn exit_code(&self) -> i32 {
        if self.flagged == 0 {
            EXIT_OK
        } else {
            EXIT_INCOMPATIBLE
        }
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn run_geodesic(
    scenario: &Scenario,
    levi_civita: &Connection,
    index: usize,
    geo: &GeodesicFile,
    dir: &Path,
) -> Result<GeodesicEntry, CliError> {
    let at = |source| CliError::Geodesic { index, source };
    let trace = integrate_geodesic(levi_civita, &geo.x0, &geo.v0, geo.steps, geo.h).map_err(at)?;
    let file = format!("geodesic_{index}.csv");
    let mut csv = Vec::new();
    trace.write_csv(&mut csv).map_err(at)?;
    write_file(&dir.join(&file), &csv)?;
    let initial_norm = scenario
        .metric
        .at(&geo.x0)
        .map_err(at)?
        .form(&geo.v0, &geo.v0);
    let null_norm_drift = null_norm_drift(&scenario.metric, &trace).map_err(at)?;
    let (self_residual, pregeodesic_residual) = if trace.len() >= 3 {
        (
            pregeodesic_residual(levi_civita, &trace).map_err(at)?,
            pregeodesic_residual(&scenario.connection, &trace).map_err(at)?,
        )
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(GeodesicEntry {
        index,
        file,
        x0: geo.x0.clone(),
        v0: geo.v0.clone(),
        steps: geo.steps,
        h: geo.h,
        initial_norm,
        null_norm_drift,
        self_residual,
        pregeodesic_residual,
        flagged: pregeodesic_residual > scenario.settings.geodesic_tolerance,
    })
}

/// Integrate every scenario geodesic with the Levi-Civita connection of the
/// metric, write one CSV per curve plus `summary.json` into `dir`, and measure
/// each curve against the scenario's connection.
pub fn geodesic(scenario: &Scenario, dir: &Path) -> Result<GeodesicSummary, CliError> {
    if scenario.geodesics.is_empty() {
        return Err(CliError::Scenario(
            "geodesics: at least one entry is required".into(),
        ));
    }
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let levi_civita = Connection::LeviCivita(scenario.metric.clone());
    let mut geodesics = Vec::with_capacity(scenario.geodesics.len());
    for (index, geo) in scenario.geodesics.iter().enumerate() {
        geodesics.push(run_geodesic(scenario, &levi_civita, index, geo, dir)?);
    }
    let summary = GeodesicSummary {
        command: "geodesic",
        version: VERSION,
        name: scenario.name.clone(),
        dimension: scenario.chart.dim(),
        integrated_with: "levi_civita",
        connection: scenario.connection.label(),
        tolerance: scenario.settings.geodesic_tolerance,
        flagged: geodesics.iter().filter(|g| g.flagged).count(),
        geodesics,
        config: echo(scenario),
    };
    write_file(
        &dir.join("summary.json"),
        json::to_string(&summary)?.as_bytes(),
    )?;
    Ok(summary)
}
