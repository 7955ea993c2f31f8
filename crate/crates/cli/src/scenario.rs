//! Scenario files: a chart, a metric, named one-forms, a connection, and the
//! points and initial data to examine.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use weylkit_core::compat::{CheckOptions, DEFAULT_TOLERANCE};
use weylkit_core::geometry::{Connection, ConnectionSpec, OneFormSpec, WeylStructure};
use weylkit_core::tensor::DEGENERACY_THRESHOLD;
use weylkit_core::{Chart, MetricSpec};

use crate::error::CliError;

/// Default bound on the pre-geodesic residual before a curve is flagged.
pub const DEFAULT_GEODESIC_TOLERANCE: f64 = 1e-6;

/// An expression written either as text or as a bare number.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ExprText {
    Text(String),
    Number(f64),
}

impl fmt::Display for ExprText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprText::Text(s) => f.write_str(s),
            ExprText::Number(x) => write!(f, "{x:?}"),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartFile {
    pub dim: usize,
    #[serde(default)]
    pub coordinates: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GeodesicFile {
    pub x0: Vec<f64>,
    pub v0: Vec<f64>,
    pub steps: usize,
    pub h: f64,
}

/// The file as written, before any expression is parsed.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub name: Option<String>,
    pub chart: ChartFile,
    pub metric: Vec<Vec<ExprText>>,
    #[serde(default)]
    pub one_forms: BTreeMap<String, Vec<ExprText>>,
    pub connection: Value,
    #[serde(default)]
    pub points: Vec<Vec<f64>>,
    #[serde(default)]
    pub geodesics: Vec<GeodesicFile>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub geodesic_tolerance: Option<f64>,
    #[serde(default)]
    pub degeneracy_threshold: Option<f64>,
}

/// Command-line values that take precedence over the scenario file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub tolerance: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub degeneracy_threshold: Option<f64>,
}

/// Effective numerical settings, echoed into every report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Settings {
    pub tolerance: f64,
    /// `None` means `10 n²` per point.
    pub samples: Option<usize>,
    pub seed: u64,
    pub geodesic_tolerance: f64,
    pub degeneracy_threshold: f64,
}

impl Settings {
    pub fn check_options(&self) -> CheckOptions {
        CheckOptions {
            samples: self.samples,
            tolerance: self.tolerance,
            seed: self.seed,
        }
    }
}

/// Which output field a symbolically supplied one-form should reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormRole {
    /// The one-form of a Weyl structure, compared with `weyl_form`.
    Weyl,
    /// The `φ` of a normal-form connection, compared with `phi`.
    Phi,
}

/// A loaded and validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: Option<String>,
    pub chart: Chart,
    pub metric: MetricSpec,
    pub connection: Connection,
    /// The one-form the connection was built from, if any.
    pub symbolic_form: Option<(FormRole, OneFormSpec)>,
    pub points: Vec<Vec<f64>>,
    pub geodesics: Vec<GeodesicFile>,
    pub settings: Settings,
    /// The file contents as parsed JSON, echoed into reports.
    pub source: Value,
}

fn invalid(path: &str, msg: impl fmt::Display) -> CliError {
    CliError::Scenario(format!("{path}: {msg}"))
}

fn positive(path: &str, value: f64) -> Result<f64, CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(invalid(
            path,
            format!("must be a positive number, got {value}"),
        ))
    }
}

struct Builder<'a> {
    chart: &'a Chart,
    metric: &'a MetricSpec,
    one_forms: &'a BTreeMap<String, OneFormSpec>,
}

impl Builder<'_> {
    fn form(&self, value: &Value, path: &str) -> Result<OneFormSpec, CliError> {
        match value {
            Value::String(name) => self
                .one_forms
                .get(name)
                .cloned()
                .ok_or_else(|| invalid(path, format!("unknown one-form {name:?}"))),
            Value::Array(_) => {
                let texts: Vec<ExprText> =
                    serde_json::from_value(value.clone()).map_err(|e| invalid(path, e))?;
                parse_form(self.chart, &texts, path)
            }
            _ => Err(invalid(
                path,
                "expected a one-form name or an array of expressions",
            )),
        }
    }

    fn connection(
        &self,
        value: &Value,
        path: &str,
    ) -> Result<(Connection, Option<(FormRole, OneFormSpec)>), CliError> {
        match value {
            Value::String(s) if s == "levi_civita" => Ok((Connection::LeviCivita(self.metric.clone()), None)),
            Value::String(s) => Err(invalid(path, format!("unknown connection {s:?}"))),
            Value::Array(_) => {
                let texts: Vec<Vec<Vec<ExprText>>> = serde_json::from_value(value.clone())
                    .map_err(|e| invalid(path, e))?;
                let n = self.chart.dim();
                let shape_ok = texts.len() == n
                    && texts.iter().all(|p| p.len() == n && p.iter().all(|r| r.len() == n));
                if !shape_ok {
                    return Err(invalid(path, format!("expected a {n}x{n}x{n} array")));
                }
                let strings: Vec<Vec<Vec<String>>> = texts
                    .iter()
                    .map(|p| p.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect())
                    .collect();
                let spec = ConnectionSpec::parse(self.chart.clone(), &strings).map_err(|e| invalid(path, e))?;
                Ok((Connection::Explicit(spec), None))
            }
            Value::Object(map) if map.len() == 1 => {
                let (key, inner) = map.iter().next().expect("one entry");
                let sub = format!("{path}.{key}");
                match key.as_str() {
                    "weyl" => {
                        let phi = self.form(inner, &sub)?;
                        let w = WeylStructure::new(self.metric.clone(), phi.clone())?;
                        Ok((Connection::Weyl(w), Some((FormRole::Weyl, phi))))
                    }
                    "eps" => {
                        let obj = inner
                            .as_object()
                            .ok_or_else(|| invalid(&sub, "expected {\"phi\": .., \"eta\": ..}"))?;
                        if let Some(k) = obj.keys().find(|k| *k != "phi" && *k != "eta") {
                            return Err(invalid(&sub, format!("unknown field {k:?}")));
                        }
                        let phi = match obj.get("phi") {
                            Some(v) => self.form(v, &format!("{sub}.phi"))?,
                            None => return Err(invalid(&sub, "missing field \"phi\"")),
                        };
                        let eta = match obj.get("eta") {
                            Some(v) => self.form(v, &format!("{sub}.eta"))?,
                            None => OneFormSpec::zero(self.chart.clone()),
                        };
                        let conn = Connection::Eps {
                            metric: self.metric.clone(),
                            phi: phi.clone(),
                            eta,
                        };
                        Ok((conn, Some((FormRole::Phi, phi))))
                    }
                    "projective_shift" => {
                        let obj = inner
                            .as_object()
                            .ok_or_else(|| invalid(&sub, "expected {\"base\": .., \"psi\": ..}"))?;
                        if let Some(k) = obj.keys().find(|k| *k != "base" && *k != "psi") {
                            return Err(invalid(&sub, format!("unknown field {k:?}")));
                        }
                        let base = obj.get("base").ok_or_else(|| invalid(&sub, "missing field \"base\""))?;
                        let psi = obj.get("psi").ok_or_else(|| invalid(&sub, "missing field \"psi\""))?;
                        let (base, form) = self.connection(base, &format!("{sub}.base"))?;
                        let psi = self.form(psi, &format!("{sub}.psi"))?;
                        Ok((base.shifted(psi)?, form))
                    }
                    other => Err(invalid(path, format!("unknown connection kind {other:?}"))),
                }
            }
            _ => Err(invalid(
                path,
                "expected \"levi_civita\", an expression array, or one of {\"weyl\"}, {\"eps\"}, {\"projective_shift\"}",
            )),
        }
    }
}

fn parse_form(chart: &Chart, texts: &[ExprText], path: &str) -> Result<OneFormSpec, CliError> {
    if texts.len() != chart.dim() {
        return Err(invalid(
            path,
            format!("expected {} components, found {}", chart.dim(), texts.len()),
        ));
    }
    let strings: Vec<String> = texts.iter().map(|e| e.to_string()).collect();
    for (i, s) in strings.iter().enumerate() {
        weylkit_core::ScalarExpr::parse(s, chart)
            .map_err(|e| invalid(&format!("{path}[{i}]"), format!("{e} in {s:?}")))?;
    }
    OneFormSpec::parse(chart.clone(), &strings).map_err(|e| invalid(path, e))
}

fn parse_metric(chart: &Chart, rows: &[Vec<ExprText>]) -> Result<MetricSpec, CliError> {
    let n = chart.dim();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(invalid("metric", format!("expected a {n}x{n} array")));
    }
    let strings: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|e| e.to_string()).collect())
        .collect();
    for (j, row) in strings.iter().enumerate() {
        for (k, s) in row.iter().enumerate() {
            weylkit_core::ScalarExpr::parse(s, chart)
                .map_err(|e| invalid(&format!("metric[{j}][{k}]"), format!("{e} in {s:?}")))?;
        }
    }
    MetricSpec::parse(chart.clone(), &strings).map_err(|e| invalid("metric", e))
}

impl Scenario {
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Scenario(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text, overrides)
    }

    pub fn from_json(text: &str, overrides: &Overrides) -> Result<Self, CliError> {
        let source: Value = serde_json::from_str(text)
            .map_err(|e| CliError::Scenario(format!("invalid JSON: {e}")))?;
        let file: ScenarioFile = serde_json::from_value(source.clone())
            .map_err(|e| CliError::Scenario(e.to_string()))?;
        let chart = match &file.chart.coordinates {
            Some(names) => {
                if names.len() != file.chart.dim {
                    return Err(invalid(
                        "chart.coordinates",
                        format!("{} names for dimension {}", names.len(), file.chart.dim),
                    ));
                }
                Chart::with_names(names.clone())
            }
            None => Chart::new(file.chart.dim),
        }
        .map_err(|e| invalid("chart", e))?;

        let settings = Settings {
            tolerance: positive(
                "tolerance",
                overrides
                    .tolerance
                    .or(file.tolerance)
                    .unwrap_or(DEFAULT_TOLERANCE),
            )?,
            samples: overrides.samples.or(file.samples),
            seed: overrides.seed.or(file.seed).unwrap_or(0),
            geodesic_tolerance: positive(
                "geodesic_tolerance",
                file.geodesic_tolerance
                    .unwrap_or(DEFAULT_GEODESIC_TOLERANCE),
            )?,
            degeneracy_threshold: positive(
                "degeneracy_threshold",
                overrides
                    .degeneracy_threshold
                    .or(file.degeneracy_threshold)
                    .unwrap_or(DEGENERACY_THRESHOLD),
            )?,
        };

        let metric = parse_metric(&chart, &file.metric)?
            .with_degeneracy_threshold(settings.degeneracy_threshold);
        let mut one_forms = BTreeMap::new();
        for (name, texts) in &file.one_forms {
            one_forms.insert(
                name.clone(),
                parse_form(&chart, texts, &format!("one_forms.{name}"))?,
            );
        }
        let builder = Builder {
            chart: &chart,
            metric: &metric,
            one_forms: &one_forms,
        };
        let (connection, symbolic_form) = builder.connection(&file.connection, "connection")?;

        let n = chart.dim();
        for (i, p) in file.points.iter().enumerate() {
            if p.len() != n {
                return Err(invalid(
                    &format!("points[{i}]"),
                    format!("expected {n} coordinates, found {}", p.len()),
                ));
            }
        }
        for (i, geo) in file.geodesics.iter().enumerate() {
            let path = format!("geodesics[{i}]");
            if geo.x0.len() != n || geo.v0.len() != n {
                return Err(invalid(&path, format!("x0 and v0 need {n} components")));
            }
            if geo.steps == 0 {
                return Err(invalid(&path, "steps must be at least 1"));
            }
            positive(&format!("{path}.h"), geo.h)?;
        }

        Ok(Self {
            name: file.name,
            chart,
            metric,
            connection,
            symbolic_form,
            points: file.points,
            geodesics: file.geodesics,
            settings,
            source,
        })
    }
}
