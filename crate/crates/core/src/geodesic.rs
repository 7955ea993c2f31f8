//! Geodesic integration and curve-level compatibility checks.
//!
//! Curves are integrated with fixed-step classical RK4 on
//! `ẍ^i = -Γ^i_{jk}(x) ẋ^j ẋ^k`. A curve is a pre-geodesic of a connection when
//! its covariant acceleration is parallel to its velocity; the transverse part
//! of that acceleration is measured with the Euclidean inner product of the
//! chart because null tangents make the metric projection singular.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::geometry::{ConnectionField, MetricSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct TraceSample {
    pub t: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

/// Uniformly sampled curve `(t, x(t), ẋ(t))`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicTrace {
    samples: Vec<TraceSample>,
    h: f64,
    connection: String,
}

impl GeodesicTrace {
    /// Validates a consistent dimension and a strictly increasing, uniform parameter.
    pub fn new(samples: Vec<TraceSample>, connection: impl Into<String>) -> Result<Self> {
        let Some(first) = samples.first() else {
            return Err(Error::TraceTooShort(0));
        };
        let n = first.x.len();
        for s in &samples {
            if s.x.len() != n || s.v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: s.x.len().max(s.v.len()),
                });
            }
        }
        let h = if samples.len() > 1 {
            (samples[samples.len() - 1].t - first.t) / (samples.len() - 1) as f64
        } else {
            0.0
        };
        for (k, w) in samples.windows(2).enumerate() {
            let dt = w[1].t - w[0].t;
            if dt <= 0.0 || (dt - h).abs() > 1e-9 * h.abs().max(1.0) {
                return Err(Error::InvalidArgument(format!(
                    "trace parameter must increase uniformly (step {k}: dt = {dt})"
                )));
            }
        }
        Ok(Self {
            samples,
            h,
            connection: connection.into(),
        })
    }

    pub fn samples(&self) -> &[TraceSample] {
        &self.samples
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn connection(&self) -> &str {
        &self.connection
    }

    pub fn dim(&self) -> usize {
        self.samples[0].x.len()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// CSV with header `t,x0..x{n-1},v0..v{n-1}` and 17 significant digits.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let n = self.dim();
        let mut w = csv::Writer::from_writer(writer);
        let header: Vec<String> = std::iter::once("t".to_string())
            .chain((0..n).map(|i| format!("x{i}")))
            .chain((0..n).map(|i| format!("v{i}")))
            .collect();
        w.write_record(&header)?;
        for s in &self.samples {
            let row: Vec<String> = std::iter::once(s.t)
                .chain(s.x.iter().copied())
                .chain(s.v.iter().copied())
                .map(|v| format!("{v:.16e}"))
                .collect();
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R, connection: impl Into<String>) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let header = r.headers()?.clone();
        let cols = header.len();
        if cols < 5 || cols % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "trace header has {cols} columns, expected 1 + 2n"
            )));
        }
        let n = (cols - 1) / 2;
        let expected: Vec<String> = std::iter::once("t".to_string())
            .chain((0..n).map(|i| format!("x{i}")))
            .chain((0..n).map(|i| format!("v{i}")))
            .collect();
        if header.iter().zip(&expected).any(|(a, b)| a.trim() != b) {
            return Err(Error::InvalidArgument(format!(
                "trace header must be {}",
                expected.join(",")
            )));
        }
        let mut samples = Vec::new();
        for record in r.records() {
            let record = record?;
            let values = record
                .iter()
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidArgument(format!("bad number {f:?} in trace")))
                })
                .collect::<Result<Vec<f64>>>()?;
            samples.push(TraceSample {
                t: values[0],
                x: values[1..=n].to_vec(),
                v: values[n + 1..].to_vec(),
            });
        }
        Self::new(samples, connection)
    }
}

fn acceleration<C: ConnectionField + ?Sized>(conn: &C, x: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    let gamma = conn.christoffel_at(x)?;
    let n = x.len();
    Ok((0..n)
        .map(|i| {
            let mut s = 0.0;
            for j in 0..n {
                for k in 0..n {
                    s += gamma.get3(i, j, k) * v[j] * v[k];
                }
            }
            -s
        })
        .collect())
}

fn axpy(x: &[f64], a: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(x, y)| x + a * y).collect()
}

/// One classical RK4 step of the geodesic equation.
pub fn rk4_step<C: ConnectionField + ?Sized>(
    conn: &C,
    x: &[f64],
    v: &[f64],
    h: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let k1x = v.to_vec();
    let k1v = acceleration(conn, x, v)?;
    let x2 = axpy(x, 0.5 * h, &k1x);
    let v2 = axpy(v, 0.5 * h, &k1v);
    let k2x = v2.clone();
    let k2v = acceleration(conn, &x2, &v2)?;
    let x3 = axpy(x, 0.5 * h, &k2x);
    let v3 = axpy(v, 0.5 * h, &k2v);
    let k3x = v3.clone();
    let k3v = acceleration(conn, &x3, &v3)?;
    let x4 = axpy(x, h, &k3x);
    let v4 = axpy(v, h, &k3v);
    let k4x = v4.clone();
    let k4v = acceleration(conn, &x4, &v4)?;
    let combine = |y: &[f64], k1: &[f64], k2: &[f64], k3: &[f64], k4: &[f64]| -> Vec<f64> {
        (0..y.len())
            .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect()
    };
    Ok((
        combine(x, &k1x, &k2x, &k3x, &k4x),
        combine(v, &k1v, &k2v, &k3v, &k4v),
    ))
}

/// Integrate `steps` RK4 steps of size `h` from `(x0, v0)` at `t = 0`.
pub fn integrate_geodesic<C: ConnectionField + ?Sized>(
    conn: &C,
    x0: &[f64],
    v0: &[f64],
    steps: usize,
    h: f64,
) -> Result<GeodesicTrace> {
    let n = conn.dim();
    for len in [x0.len(), v0.len()] {
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: len,
            });
        }
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "step size must be positive, got {h}"
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("need at least one step".into()));
    }
    if v0.iter().all(|c| *c == 0.0) {
        return Err(Error::ZeroVector);
    }
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(TraceSample {
        t: 0.0,
        x: x0.to_vec(),
        v: v0.to_vec(),
    });
    let (mut x, mut v) = (x0.to_vec(), v0.to_vec());
    for step in 1..=steps {
        let (nx, nv) = rk4_step(conn, &x, &v, h).map_err(|source| Error::Integration {
            step,
            source: Box::new(source),
        })?;
        if nx.iter().chain(&nv).any(|c| !c.is_finite()) {
            return Err(Error::Integration {
                step,
                source: Box::new(Error::NonFinite),
            });
        }
        samples.push(TraceSample {
            t: step as f64 * h,
            x: nx.clone(),
            v: nv.clone(),
        });
        (x, v) = (nx, nv);
    }
    GeodesicTrace::new(samples, conn.label())
}

/// `max |g(v,v) - g(v₀,v₀)|` along the trace; for a null start this is the
/// largest departure from the light cone.
pub fn null_norm_drift(g: &MetricSpec, trace: &GeodesicTrace) -> Result<f64> {
    let norm = |s: &TraceSample| -> Result<f64> { Ok(g.at(&s.x)?.form(&s.v, &s.v)) };
    let initial = norm(&trace.samples[0])?;
    let mut drift: f64 = 0.0;
    for s in trace.samples() {
        drift = drift.max((norm(s)? - initial).abs());
    }
    Ok(drift)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest Euclidean-transverse part of `∇_γ̇ γ̇` along the trace, normalized
/// by `1 + ‖r‖`. The acceleration is a central difference of the sampled
/// velocities, so boundary samples are skipped.
pub fn pregeodesic_residual<C: ConnectionField + ?Sized>(
    conn: &C,
    trace: &GeodesicTrace,
) -> Result<f64> {
    let samples = trace.samples();
    if samples.len() < 3 {
        return Err(Error::TraceTooShort(samples.len()));
    }
    if conn.dim() != trace.dim() {
        return Err(Error::ChartMismatch(conn.dim(), trace.dim()));
    }
    if let Some(k) = samples.iter().position(|s| s.v.iter().all(|c| *c == 0.0)) {
        return Err(Error::ZeroVelocity(k));
    }
    let mut worst: f64 = 0.0;
    for k in 1..samples.len() - 1 {
        let (prev, cur, next) = (&samples[k - 1], &samples[k], &samples[k + 1]);
        let dt = next.t - prev.t;
        let geodesic_acc = acceleration(conn, &cur.x, &cur.v)?;
        // r = a + Γ v v
        let r: Vec<f64> = (0..cur.v.len())
            .map(|i| (next.v[i] - prev.v[i]) / dt - geodesic_acc[i])
            .collect();
        let along = dot(&r, &cur.v) / dot(&cur.v, &cur.v);
        let transverse = axpy(&r, -along, &cur.v);
        let value = dot(&transverse, &transverse).sqrt() / (1.0 + dot(&r, &r).sqrt());
        worst = worst.max(value);
    }
    Ok(worst)
}
