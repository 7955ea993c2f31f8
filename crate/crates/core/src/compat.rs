//! Light-cone compatibility of a connection with a conformal class.
//!
//! Two independent tests decide whether a difference tensor
//! `D = Γ - F` is compatible with the light cone of `g` at a point:
//!
//! * **sampling**: for null vectors `v`, the quadratic `w^i = D^i_{jk} v^j v^k`
//!   must be parallel to `v`, i.e. `w^i v^s - w^s v^i = 0`;
//! * **decomposition**: `D` must lie in the family
//!   `φ^i g_{jk} + δ^i_j η_k + δ^i_k η_j`. The parameters are recovered in
//!   closed form by trace extraction and the reconstruction residual judges
//!   membership.
//!
//! For `n >= 3` the two tests are equivalent. The decomposition residual is
//! authoritative; sampling is a cross-check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::{difference_tensor, pure_trace, ConnectionField, MetricSpec, OneFormSpec};
use crate::tensor::{PointTensor, SymMatrix};

/// Default relative tolerance, applied to `max(1, ‖D‖∞)`.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Default number of null samples per point: `10 n²`.
pub fn default_samples(dim: usize) -> usize {
    10 * dim * dim
}

/// Per-point options shared by [`is_lightcone_compatible`] and [`weylize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Null samples per point; `None` means [`default_samples`].
    pub samples: Option<usize>,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            samples: None,
            tolerance: DEFAULT_TOLERANCE,
            seed: 0,
        }
    }
}

impl CheckOptions {
    pub fn samples_for(&self, dim: usize) -> usize {
        self.samples.unwrap_or_else(|| default_samples(dim))
    }
}

/// Unit null vectors of `gp`, deterministic in `seed`.
///
/// Each sample mixes a random unit vector `u₊` from the positive eigenspace
/// with one `u₋` from the negative eigenspace, weighted so their quadratic
/// contributions cancel.
pub fn sample_null_vectors(gp: &SymMatrix, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if count == 0 {
        return Err(Error::InvalidArgument(
            "sample count must be at least 1".into(),
        ));
    }
    let (positive, negative) = gp.signature()?;
    if positive == 0 || negative == 0 {
        return Err(Error::DefiniteSignature { positive, negative });
    }
    let n = gp.dim();
    let (values, vectors) = gp.eigen();
    let neg: Vec<usize> = (0..n).filter(|&a| values[a] < 0.0).collect();
    let pos: Vec<usize> = (0..n).filter(|&a| values[a] > 0.0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // random unit combination of the given eigenvectors, and its g-norm
    let mut draw = |idx: &[usize]| -> (Vec<f64>, f64) {
        loop {
            let coeffs: Vec<f64> = idx
                .iter()
                .map(|_| StandardNormal.sample(&mut rng))
                .collect();
            let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm < 1e-8 {
                continue;
            }
            let mut u = vec![0.0; n];
            let mut q = 0.0;
            for (c, &a) in coeffs.iter().zip(idx) {
                let c = c / norm;
                q += values[a] * c * c;
                for (ui, ei) in u.iter_mut().zip(&vectors[a]) {
                    *ui += c * ei;
                }
            }
            return (u, q);
        }
    };

    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let (up, qp) = draw(&pos);
        let (um, qm) = draw(&neg);
        let (a, b) = ((-qm).sqrt(), qp.sqrt());
        let mut v: Vec<f64> = up.iter().zip(&um).map(|(x, y)| a * x + b * y).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        out.push(v);
    }
    Ok(out)
}

fn euclidean_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_rank3(d: &PointTensor) -> Result<()> {
    if d.rank() != 3 {
        return Err(Error::ShapeMismatch(d.rank(), d.dim(), 3, d.dim()));
    }
    Ok(())
}

/// `max_{i,s} |w^i v^s - w^s v^i| / ‖v‖³` with `w^i = D^i_{jk} v^j v^k`.
pub fn nullcone_residual(d: &PointTensor, v: &[f64]) -> Result<f64> {
    check_rank3(d)?;
    let n = d.dim();
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    let norm = euclidean_norm(v);
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let w: Vec<f64> = (0..n)
        .map(|i| {
            let mut s = 0.0;
            for j in 0..n {
                for k in 0..n {
                    s += d.get3(i, j, k) * v[j] * v[k];
                }
            }
            s
        })
        .collect();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for s in i + 1..n {
            worst = worst.max((w[i] * v[s] - w[s] * v[i]).abs());
        }
    }
    Ok(worst / norm.powi(3))
}

fn check_metric_shape(d: &PointTensor, gp: &SymMatrix) -> Result<()> {
    check_rank3(d)?;
    if gp.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            expected: d.dim(),
            found: gp.dim(),
        });
    }
    if d.dim() < 2 {
        return Err(Error::UnsupportedDimension {
            dim: d.dim(),
            min: 2,
            max: crate::expr::MAX_DIM,
        });
    }
    Ok(())
}

/// `n - 2/(n+1)`, the scalar relating the trace-free contraction of `D` to `φ^i`.
pub fn extraction_coefficient(dim: usize) -> f64 {
    let n = dim as f64;
    n - 2.0 / (n + 1.0)
}

/// `(D^i_{jk} - D^s_{sk} δ^i_j/(n+1) - D^s_{sj} δ^i_k/(n+1)) g^{jk}`.
///
/// For `D` in normal form this equals `extraction_coefficient(n) · φ^i`.
pub fn extraction_rhs(d: &PointTensor, gp: &SymMatrix) -> Result<Vec<f64>> {
    check_metric_shape(d, gp)?;
    let n = d.dim();
    let ginv = gp.invert()?;
    let trace = d.contract(0, 1)?;
    let t = trace.entries();
    let inv_np1 = 1.0 / (n as f64 + 1.0);
    Ok((0..n)
        .map(|i| {
            let mut full = 0.0;
            for j in 0..n {
                for k in 0..n {
                    full += d.get3(i, j, k) * ginv.get(j, k);
                }
            }
            // δ^i_j g^{jk} D^s_{sk} and δ^i_k g^{jk} D^s_{sj}
            let first: f64 = (0..n).map(|k| t[k] * ginv.get(i, k)).sum();
            let second: f64 = (0..n).map(|j| t[j] * ginv.get(j, i)).sum();
            full - inv_np1 * first - inv_np1 * second
        })
        .collect())
}

/// Recover `φ^i` (upper index) of the normal form.
///
/// For tensors outside the family the result is finite but meaningless; check
/// the reconstruction residual.
pub fn extract_phi(d: &PointTensor, gp: &SymMatrix) -> Result<Vec<f64>> {
    let coeff = extraction_coefficient(d.dim());
    Ok(extraction_rhs(d, gp)?
        .into_iter()
        .map(|x| x / coeff)
        .collect())
}

/// Recover `η_k = (D^s_{sk} - g_{ks} φ^s) / (n+1)`.
pub fn extract_eta(d: &PointTensor, phi_vec: &[f64], gp: &SymMatrix) -> Result<Vec<f64>> {
    check_metric_shape(d, gp)?;
    let n = d.dim();
    if phi_vec.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: phi_vec.len(),
        });
    }
    let trace = d.contract(0, 1)?;
    let phi_low = gp.mul_vec(phi_vec);
    Ok(trace
        .entries()
        .iter()
        .zip(&phi_low)
        .map(|(t, p)| (t - p) / (n as f64 + 1.0))
        .collect())
}

/// `φ^i g_{jk} + δ^i_j η_k + δ^i_k η_j`.
pub fn normal_form(gp: &SymMatrix, phi_vec: &[f64], eta: &[f64]) -> PointTensor {
    let n = gp.dim();
    let metric_part = PointTensor::from_fn(n, 3, |idx| phi_vec[idx[0]] * gp.get(idx[1], idx[2]))
        .with_symmetry(1, 2)
        .expect("g is symmetric");
    metric_part.add(&pure_trace(eta)).expect("shapes agree")
}

/// Normal-form parameters of a difference tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// `φ^i`, upper index.
    pub phi_vec: Vec<f64>,
    /// `η_k`, lower index.
    pub eta: Vec<f64>,
    /// L∞ distance between `D` and its reconstruction.
    pub residual: f64,
    pub warning: Option<String>,
}

impl Decomposition {
    /// `φ_k = g_{ki} φ^i`.
    pub fn phi_form(&self, gp: &SymMatrix) -> Vec<f64> {
        gp.mul_vec(&self.phi_vec)
    }

    /// The one-form `ω` whose Weyl connection `Γ(g, ω)` is projectively
    /// equivalent to `F + D`. Since `Γ(g, ω) - F = δ ω + δ ω - g ω^♯`, this is
    /// `ω = -φ_k`; the leftover difference is pure trace in `η + φ`.
    pub fn weyl_form(&self, gp: &SymMatrix) -> Vec<f64> {
        self.phi_form(gp).into_iter().map(|x| 0.0 - x).collect()
    }
}

/// Split `D` into normal form and measure what is left over.
pub fn decompose(d: &PointTensor, gp: &SymMatrix) -> Result<Decomposition> {
    let phi_vec = extract_phi(d, gp)?;
    let eta = extract_eta(d, &phi_vec, gp)?;
    let rebuilt = normal_form(gp, &phi_vec, &eta);
    let residual = d.max_abs_diff(&rebuilt)?;
    let warning = (d.dim() < 3).then(|| {
        format!(
            "dimension {} < 3: reconstruction is computed but light-cone compatibility \
             does not force the normal form",
            d.dim()
        )
    });
    Ok(Decomposition {
        phi_vec,
        eta,
        residual,
        warning,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Compatible,
    Incompatible,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Compatible => "compatible",
            Verdict::Incompatible => "incompatible",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompatReport {
    pub point: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub max_nullcone_residual: f64,
    pub decomposition: Decomposition,
    /// Relative tolerance as requested.
    pub tolerance: f64,
    /// `max(1, ‖D‖∞)`; residuals are compared against `tolerance * scale`.
    pub scale: f64,
}

impl CompatReport {
    pub fn absolute_tolerance(&self) -> f64 {
        self.tolerance * self.scale
    }

    pub fn decomposition_residual(&self) -> f64 {
        self.decomposition.residual
    }

    pub fn sampling_compatible(&self) -> bool {
        self.max_nullcone_residual <= self.absolute_tolerance()
    }

    pub fn decomposition_compatible(&self) -> bool {
        self.decomposition.residual <= self.absolute_tolerance()
    }

    pub fn verdict(&self) -> Verdict {
        if self.sampling_compatible() && self.decomposition_compatible() {
            Verdict::Compatible
        } else {
            Verdict::Incompatible
        }
    }
}

/// Run both tests on a difference tensor at one point.
pub fn assess(
    d: &PointTensor,
    gp: &SymMatrix,
    point: &[f64],
    options: &CheckOptions,
) -> Result<CompatReport> {
    check_metric_shape(d, gp)?;
    let n = d.dim();
    let samples = options.samples_for(n);
    if samples < 2 * n {
        return Err(Error::InvalidArgument(format!(
            "need at least {} null samples in dimension {n}, got {samples}",
            2 * n
        )));
    }
    let vectors = sample_null_vectors(gp, samples, options.seed)?;
    let mut max_nullcone_residual: f64 = 0.0;
    for v in &vectors {
        max_nullcone_residual = max_nullcone_residual.max(nullcone_residual(d, v)?);
    }
    Ok(CompatReport {
        point: point.to_vec(),
        samples,
        seed: options.seed,
        max_nullcone_residual,
        decomposition: decompose(d, gp)?,
        tolerance: options.tolerance,
        scale: d.max_abs().max(1.0),
    })
}

/// Pointwise light-cone compatibility of `gamma` with the conformal class of `g`.
pub fn is_lightcone_compatible<C: ConnectionField + ?Sized>(
    g: &MetricSpec,
    gamma: &C,
    p: &[f64],
    options: &CheckOptions,
) -> Result<CompatReport> {
    let gp = g.at(p)?;
    let d = difference_tensor(gamma, g, p)?;
    assess(&d, &gp, p, options)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylPoint {
    pub point: Vec<f64>,
    /// Lowered normal-form parameter `φ_k = g_{ki} φ^i`.
    pub phi: Vec<f64>,
    pub eta: Vec<f64>,
    /// One-form of the Weyl structure `(g, ω)` projectively equivalent to Γ.
    pub weyl_form: Vec<f64>,
    pub report: CompatReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Weylization {
    pub points: Vec<WeylPoint>,
}

/// Seed used for point `index`: `seed XOR index`.
pub fn point_seed(seed: u64, index: usize) -> u64 {
    seed ^ index as u64
}

/// Recover the Weyl structure behind a light-cone compatible connection.
///
/// Fails with [`Error::Incompatible`] naming the worst point if any point's
/// decomposition residual exceeds tolerance.
pub fn weylize<C: ConnectionField + ?Sized>(
    g: &MetricSpec,
    gamma: &C,
    points: &[Vec<f64>],
    options: &CheckOptions,
) -> Result<Weylization> {
    let n = g.dim();
    if n < 3 {
        return Err(Error::UnsupportedDimension {
            dim: n,
            min: 3,
            max: crate::expr::MAX_DIM,
        });
    }
    let mut out = Vec::with_capacity(points.len());
    let mut worst: Option<(usize, f64)> = None;
    for (index, p) in points.iter().enumerate() {
        let opts = CheckOptions {
            seed: point_seed(options.seed, index),
            ..*options
        };
        let report = is_lightcone_compatible(g, gamma, p, &opts)?;
        if !report.decomposition_compatible() {
            let excess = report.decomposition.residual / report.absolute_tolerance();
            if worst.is_none_or(|(_, w)| excess > w) {
                worst = Some((index, excess));
            }
        }
        let gp = g.at(p)?;
        out.push(WeylPoint {
            point: p.clone(),
            phi: report.decomposition.phi_form(&gp),
            eta: report.decomposition.eta.clone(),
            weyl_form: report.decomposition.weyl_form(&gp),
            report,
        });
    }
    if let Some((index, _)) = worst {
        let wp = &out[index];
        return Err(Error::Incompatible {
            index,
            point: wp.point.clone(),
            residual: wp.report.decomposition.residual,
        });
    }
    Ok(Weylization { points: out })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrability {
    pub closed: bool,
    /// Largest `|∂_j φ_k - ∂_k φ_j|` over the points.
    pub max_curl: f64,
}

/// Closedness of `phi` on sample points, via its exact symbolic curl.
pub fn integrability_check(
    phi: &OneFormSpec,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<Integrability> {
    let n = phi.dim();
    let comps = phi.components();
    // components whose mixed partials expand to the same polynomial have an
    // identically zero curl and are not evaluated
    let mut curl = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            let a = comps[k].differentiate(j);
            let b = comps[j].differentiate(k);
            if !crate::canon::provably_equal(&a, &b) {
                curl.push(a - b);
            }
        }
    }
    let mut max_curl: f64 = 0.0;
    for p in points {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        for c in &curl {
            max_curl = max_curl.max(c.eval(p)?.abs());
        }
    }
    Ok(Integrability {
        closed: max_curl <= tol,
        max_curl,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Chart, ScalarExpr};
    use crate::geometry::{Connection, ConnectionSpec};

    fn minkowski(n: usize) -> SymMatrix {
        let mut d = vec![1.0; n];
        d[0] = -1.0;
        SymMatrix::diag(&d).unwrap()
    }

    /// Only `D^1_{11} = 1`.
    fn witness_tensor() -> PointTensor {
        PointTensor::from_fn(3, 3, |i| if i == [1, 1, 1] { 1.0 } else { 0.0 })
    }

    #[test]
    fn minkowski_samples_are_null_and_unit() {
        let g = minkowski(4);
        for seed in [0, 1, 99] {
            let vs = sample_null_vectors(&g, 50, seed).unwrap();
            assert_eq!(vs.len(), 50);
            for v in vs {
                let spatial: f64 = v[1..].iter().map(|x| x * x).sum();
                assert!((v[0] * v[0] - spatial).abs() <= 1e-15);
                assert!((euclidean_norm(&v) - 1.0).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let g = minkowski(4);
        assert_eq!(
            sample_null_vectors(&g, 10, 5).unwrap(),
            sample_null_vectors(&g, 10, 5).unwrap()
        );
        assert_ne!(
            sample_null_vectors(&g, 10, 5).unwrap(),
            sample_null_vectors(&g, 10, 6).unwrap()
        );
    }

    #[test]
    fn definite_metric_has_no_light_cone() {
        let g = SymMatrix::diag(&[1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            sample_null_vectors(&g, 5, 0),
            Err(Error::DefiniteSignature {
                positive: 3,
                negative: 0
            })
        ));
    }

    #[test]
    fn two_dimensional_null_directions() {
        // -2a² + 3b² = 0  =>  |v0| : |v1| = √3 : √2
        let g = SymMatrix::diag(&[-2.0, 3.0]).unwrap();
        let vs = sample_null_vectors(&g, 5, 11).unwrap();
        let (a, b) = (3f64.sqrt() / 5f64.sqrt(), 2f64.sqrt() / 5f64.sqrt());
        for v in vs {
            assert!((v[0].abs() - a).abs() < 1e-15);
            assert!((v[1].abs() - b).abs() < 1e-15);
        }
    }

    #[test]
    fn nullcone_residual_examples() {
        let v = [0.3, -0.2, 0.9];
        assert_eq!(
            nullcone_residual(&PointTensor::zeros(3, 3), &v).unwrap(),
            0.0
        );

        let trace = pure_trace(&[0.7, -1.2, 0.4]);
        assert!(nullcone_residual(&trace, &v).unwrap() <= 1e-15);

        // w = (0, 1, 0) for v = (1, 1, 0); |w¹v⁰ - w⁰v¹| = 1, normalized by ‖v‖³ = 2√2
        let r = nullcone_residual(&witness_tensor(), &[1.0, 1.0, 0.0]).unwrap();
        assert!((r - 1.0 / 8f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            nullcone_residual(&witness_tensor(), &[0.0; 3]),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn extraction_examples() {
        let g = minkowski(4);
        let zero = PointTensor::zeros(4, 3);
        assert_eq!(extract_phi(&zero, &g).unwrap(), vec![0.0; 4]);
        assert_eq!(extract_eta(&zero, &[0.0; 4], &g).unwrap(), vec![0.0; 4]);

        let phi_vec = [-1.0, 0.0, 0.0, 0.0];
        let eta = [0.0, 2.0, 0.0, 0.0];
        let d = normal_form(&g, &phi_vec, &eta);
        let phi = extract_phi(&d, &g).unwrap();
        for (a, b) in phi.iter().zip(&phi_vec) {
            assert!((a - b).abs() < 1e-15);
        }
        let recovered = extract_eta(&d, &phi, &g).unwrap();
        for (a, b) in recovered.iter().zip(&eta) {
            assert!((a - b).abs() < 1e-15);
        }

        let trace_only = pure_trace(&[0.5, -1.0, 3.0, 0.25]);
        assert!(extract_phi(&trace_only, &g)
            .unwrap()
            .iter()
            .all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn eta_from_pure_trace_in_three_dimensions() {
        let g = minkowski(3);
        let d = pure_trace(&[1.0, 1.0, 0.0]);
        assert_eq!(d.contract(0, 1).unwrap().entries(), &[4.0, 4.0, 0.0]);
        assert_eq!(extract_eta(&d, &[0.0; 3], &g).unwrap(), vec![1.0, 1.0, 0.0]);
    }

    #[test]
    fn decompose_zero_and_witness() {
        let g = minkowski(3);
        let dec = decompose(&PointTensor::zeros(3, 3), &g).unwrap();
        assert_eq!(dec.phi_vec, vec![0.0; 3]);
        assert_eq!(dec.eta, vec![0.0; 3]);
        assert_eq!(dec.residual, 0.0);
        assert!(dec.warning.is_none());

        let dec = decompose(&witness_tensor(), &g).unwrap();
        // φ¹ = η₁ = 1/5, reconstruction of D^1_{11} is 3/5
        assert!((dec.phi_vec[1] - 0.2).abs() < 1e-15);
        assert!((dec.eta[1] - 0.2).abs() < 1e-15);
        assert!((dec.residual - 0.4).abs() < 1e-15);
    }

    #[test]
    fn two_dimensional_decomposition_is_flagged() {
        let g = SymMatrix::diag(&[-1.0, 1.0]).unwrap();
        let dec = decompose(&PointTensor::zeros(2, 3), &g).unwrap();
        assert!(dec.warning.is_some());
    }

    #[test]
    fn pointwise_check_of_levi_civita_and_witness() {
        let chart = Chart::new(3).unwrap();
        let g = MetricSpec::minkowski(chart.clone());
        let p = [0.1, 0.2, 0.3];
        let options = CheckOptions::default();
        let report =
            is_lightcone_compatible(&g, &Connection::LeviCivita(g.clone()), &p, &options).unwrap();
        assert_eq!(report.verdict(), Verdict::Compatible);
        assert_eq!(report.max_nullcone_residual, 0.0);
        assert_eq!(report.samples, 90);

        let mut comps = vec![ScalarExpr::zero(); 27];
        comps[(3 + 1) * 3 + 1] = ScalarExpr::constant(1.0);
        let witness = ConnectionSpec::new(chart, comps).unwrap();
        let report = is_lightcone_compatible(&g, &witness, &p, &options).unwrap();
        assert_eq!(report.verdict(), Verdict::Incompatible);
        assert!(!report.sampling_compatible());
        assert!(!report.decomposition_compatible());
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let g = minkowski(3);
        let options = CheckOptions {
            samples: Some(5),
            ..Default::default()
        };
        assert!(matches!(
            assess(&PointTensor::zeros(3, 3), &g, &[0.0; 3], &options),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn weylize_requires_three_dimensions() {
        let g = MetricSpec::minkowski(Chart::new(2).unwrap());
        let lc = Connection::LeviCivita(g.clone());
        assert!(matches!(
            weylize(&g, &lc, &[vec![0.0, 0.0]], &CheckOptions::default()),
            Err(Error::UnsupportedDimension { dim: 2, .. })
        ));
    }

    #[test]
    fn integrability_examples() {
        let chart = Chart::new(3).unwrap();
        let points = vec![
            vec![0.1, 0.2, 0.3],
            vec![-1.0, 2.0, 0.5],
            vec![3.0, -0.7, 1.1],
        ];

        let exact =
            OneFormSpec::gradient(chart.clone(), &ScalarExpr::parse("x0*x1", &chart).unwrap())
                .unwrap();
        let r = integrability_check(&exact, &points, 1e-12).unwrap();
        assert!(r.closed);
        assert_eq!(r.max_curl, 0.0);

        let twisted = OneFormSpec::parse(chart.clone(), &["x1", "0", "0"]).unwrap();
        let r = integrability_check(&twisted, &points, 1e-12).unwrap();
        assert!(!r.closed);
        assert_eq!(r.max_curl, 1.0);

        let r = integrability_check(&OneFormSpec::zero(chart), &points, 0.0).unwrap();
        assert!(r.closed);
    }
}
