//! Random smooth fields for property tests and benchmark scenarios.
//!
//! Expressions are generated as text in the coordinate grammar and parsed, so
//! the same strings can be dropped into scenario files. Metrics are small
//! perturbations of Minkowski space and stay Lorentzian on the ball of radius
//! 1/2 around the origin for amplitudes up to 0.05.

use rand::Rng;

use crate::error::Result;
use crate::expr::{Chart, ScalarExpr};
use crate::geometry::{MetricSpec, OneFormSpec};

fn coeff<R: Rng + ?Sized>(rng: &mut R, amplitude: f64) -> String {
    format!("({:.6})", rng.random_range(-amplitude..=amplitude))
}

fn term<R: Rng + ?Sized>(rng: &mut R, dim: usize, amplitude: f64) -> String {
    let a = rng.random_range(0..dim);
    let b = rng.random_range(0..dim);
    let c = coeff(rng, amplitude);
    let freq = format!("{:.4}", rng.random_range(0.5..2.0));
    let phase = format!("{:.4}", rng.random_range(0.0..3.0));
    match rng.random_range(0..6) {
        0 => c,
        1 => format!("{c}*x{a}"),
        2 => format!("{c}*sin({freq}*x{a} + {phase})"),
        3 => format!("{c}*x{a}*x{b}"),
        4 => format!("{c}*exp(0.5*sin({freq}*x{a}))"),
        _ => format!("{c}*cos({freq}*x{a})*x{b}^2"),
    }
}

/// A smooth expression: sum of `terms` random terms with coefficients in
/// `[-amplitude, amplitude]`.
pub fn random_expr_text<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    terms: usize,
    amplitude: f64,
) -> String {
    let parts: Vec<String> = (0..terms.max(1))
        .map(|_| term(rng, dim, amplitude))
        .collect();
    parts.join(" + ")
}

pub fn random_expr<R: Rng + ?Sized>(
    rng: &mut R,
    chart: &Chart,
    terms: usize,
    amplitude: f64,
) -> ScalarExpr {
    let text = random_expr_text(rng, chart.dim(), terms, amplitude);
    ScalarExpr::parse(&text, chart).expect("generated expressions use x0..x{n-1}")
}

/// Row-major text of `diag(-1, 1, ..., 1) + h(x)` with a symmetric smooth `h`.
pub fn random_metric_texts<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    amplitude: f64,
) -> Vec<Vec<String>> {
    let mut rows = vec![vec![String::new(); dim]; dim];
    for j in 0..dim {
        for k in j..dim {
            let base = match (j == k, j) {
                (true, 0) => "-1",
                (true, _) => "1",
                _ => "0",
            };
            let text = format!("{base} + {}", random_expr_text(rng, dim, 2, amplitude));
            rows[j][k] = text.clone();
            rows[k][j] = text;
        }
    }
    rows
}

pub fn random_metric<R: Rng + ?Sized>(
    rng: &mut R,
    chart: &Chart,
    amplitude: f64,
) -> Result<MetricSpec> {
    let rows = random_metric_texts(rng, chart.dim(), amplitude);
    MetricSpec::parse(chart.clone(), &rows)
}

pub fn random_one_form_texts<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    amplitude: f64,
) -> Vec<String> {
    (0..dim)
        .map(|_| random_expr_text(rng, dim, 3, amplitude))
        .collect()
}

pub fn random_one_form<R: Rng + ?Sized>(
    rng: &mut R,
    chart: &Chart,
    amplitude: f64,
) -> Result<OneFormSpec> {
    OneFormSpec::parse(
        chart.clone(),
        &random_one_form_texts(rng, chart.dim(), amplitude),
    )
}

/// Uniform point in the cube `[-radius, radius]^dim`.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    (0..dim)
        .map(|_| rng.random_range(-radius..=radius))
        .collect()
}
