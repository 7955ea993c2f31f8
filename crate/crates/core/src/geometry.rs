//! Metrics, one-forms and connections on a chart.
//!
//! Specs hold symbolic coefficients; every point-level quantity is recomputed
//! from them on demand. One-forms are always stored with a lower index and
//! raised with `g^{ij}` where an upper index is needed.

use crate::error::{Error, Result};
use crate::expr::{Chart, Func, ScalarExpr};
use crate::tensor::{PointTensor, SymMatrix, DEGENERACY_THRESHOLD};

fn check_point(chart: &Chart, p: &[f64]) -> Result<()> {
    if p.len() != chart.dim() {
        return Err(Error::DimensionMismatch {
            expected: chart.dim(),
            found: p.len(),
        });
    }
    Ok(())
}

fn check_same_chart(a: &Chart, b: &Chart) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::ChartMismatch(a.dim(), b.dim()));
    }
    Ok(())
}

fn check_expr(chart: &Chart, e: &ScalarExpr) -> Result<()> {
    if e.min_dim() > chart.dim() {
        return Err(Error::DimensionMismatch {
            expected: chart.dim(),
            found: e.min_dim(),
        });
    }
    Ok(())
}

fn parse_all<S: AsRef<str>>(chart: &Chart, texts: &[S]) -> Result<Vec<ScalarExpr>> {
    texts
        .iter()
        .map(|t| ScalarExpr::parse(t.as_ref(), chart).map_err(Error::from))
        .collect()
}

/// Symmetric matrix of coefficient expressions `g_{jk}`.
#[derive(Debug, Clone)]
pub struct MetricSpec {
    chart: Chart,
    components: Vec<ScalarExpr>,
    // ∂_l g_{jk}, stored [l][j][k]
    derivatives: Vec<ScalarExpr>,
    degeneracy: f64,
}

impl MetricSpec {
    /// `components` is row-major `n x n`; `g[j][k]` and `g[k][j]` must be the
    /// same expression.
    pub fn new(chart: Chart, components: Vec<ScalarExpr>) -> Result<Self> {
        let n = chart.dim();
        if components.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: components.len(),
            });
        }
        for e in &components {
            check_expr(&chart, e)?;
        }
        for j in 0..n {
            for k in 0..j {
                if components[j * n + k] != components[k * n + j] {
                    return Err(Error::NotSymmetric(vec![j, k]));
                }
            }
        }
        let mut derivatives = Vec::with_capacity(n * n * n);
        for l in 0..n {
            for e in &components {
                derivatives.push(e.differentiate(l));
            }
        }
        Ok(Self {
            chart,
            components,
            derivatives,
            degeneracy: DEGENERACY_THRESHOLD,
        })
    }

    pub fn parse<S: AsRef<str>>(chart: Chart, rows: &[Vec<S>]) -> Result<Self> {
        let n = chart.dim();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(format!(
                "metric must be a {n}x{n} array of expressions"
            )));
        }
        let flat: Vec<&str> = rows.iter().flatten().map(|s| s.as_ref()).collect();
        let components = parse_all(&chart, &flat)?;
        Self::new(chart, components)
    }

    pub fn diagonal(chart: Chart, diag: Vec<ScalarExpr>) -> Result<Self> {
        let n = chart.dim();
        if diag.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: diag.len(),
            });
        }
        let mut components = vec![ScalarExpr::zero(); n * n];
        for (i, e) in diag.into_iter().enumerate() {
            components[i * n + i] = e;
        }
        Self::new(chart, components)
    }

    /// `diag(-1, 1, ..., 1)`.
    pub fn minkowski(chart: Chart) -> Self {
        let n = chart.dim();
        let diag = (0..n)
            .map(|i| ScalarExpr::constant(if i == 0 { -1.0 } else { 1.0 }))
            .collect();
        Self::diagonal(chart, diag).expect("minkowski metric")
    }

    /// Override the relative degeneracy threshold used at evaluation.
    pub fn with_degeneracy_threshold(mut self, threshold: f64) -> Self {
        self.degeneracy = threshold;
        self
    }

    pub fn degeneracy_threshold(&self) -> f64 {
        self.degeneracy
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn component(&self, j: usize, k: usize) -> &ScalarExpr {
        &self.components[j * self.dim() + k]
    }

    /// Numeric `g_{jk}` at `p`; fails if degenerate there.
    pub fn at(&self, p: &[f64]) -> Result<SymMatrix> {
        check_point(&self.chart, p)?;
        let values = self
            .components
            .iter()
            .map(|e| e.eval(p))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let m = SymMatrix::new(self.dim(), values)?;
        m.check_nondegenerate(self.degeneracy)?;
        Ok(m)
    }

    pub fn inverse_at(&self, p: &[f64]) -> Result<SymMatrix> {
        self.at(p)?.invert_with(self.degeneracy)
    }

    /// `∂_l g_{jk}` at `p`, flattened `[l][j][k]`.
    pub fn derivatives_at(&self, p: &[f64]) -> Result<Vec<f64>> {
        check_point(&self.chart, p)?;
        Ok(self
            .derivatives
            .iter()
            .map(|e| e.eval(p))
            .collect::<std::result::Result<Vec<_>, _>>()?)
    }
}

/// Components `ω_i` of a one-form.
#[derive(Debug, Clone)]
pub struct OneFormSpec {
    chart: Chart,
    components: Vec<ScalarExpr>,
}

impl OneFormSpec {
    pub fn new(chart: Chart, components: Vec<ScalarExpr>) -> Result<Self> {
        if components.len() != chart.dim() {
            return Err(Error::DimensionMismatch {
                expected: chart.dim(),
                found: components.len(),
            });
        }
        for e in &components {
            check_expr(&chart, e)?;
        }
        Ok(Self { chart, components })
    }

    pub fn parse<S: AsRef<str>>(chart: Chart, texts: &[S]) -> Result<Self> {
        let components = parse_all(&chart, texts)?;
        Self::new(chart, components)
    }

    pub fn zero(chart: Chart) -> Self {
        let n = chart.dim();
        Self {
            chart,
            components: vec![ScalarExpr::zero(); n],
        }
    }

    pub fn constant(chart: Chart, values: &[f64]) -> Result<Self> {
        let components = values.iter().map(|v| ScalarExpr::constant(*v)).collect();
        Self::new(chart, components)
    }

    /// The exact differential `df`.
    pub fn gradient(chart: Chart, f: &ScalarExpr) -> Result<Self> {
        check_expr(&chart, f)?;
        let components = (0..chart.dim()).map(|k| f.differentiate(k)).collect();
        Self::new(chart, components)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn components(&self) -> &[ScalarExpr] {
        &self.components
    }

    pub fn at(&self, p: &[f64]) -> Result<Vec<f64>> {
        check_point(&self.chart, p)?;
        Ok(self
            .components
            .iter()
            .map(|e| e.eval(p))
            .collect::<std::result::Result<Vec<_>, _>>()?)
    }

    fn zip(
        &self,
        other: &OneFormSpec,
        f: impl Fn(ScalarExpr, ScalarExpr) -> ScalarExpr,
    ) -> Result<Self> {
        check_same_chart(&self.chart, &other.chart)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| f(a.clone(), b.clone()))
            .collect();
        Ok(Self {
            chart: self.chart.clone(),
            components,
        })
    }

    pub fn add(&self, other: &OneFormSpec) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &OneFormSpec) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn negated(&self) -> Self {
        Self {
            chart: self.chart.clone(),
            components: self.components.iter().map(|e| -e.clone()).collect(),
        }
    }
}

/// Christoffel symbol expressions `Γ^i_{jk}`, symmetric in `j, k`.
///
/// The coefficients are `base^i_{jk} + δ^i_j ψ_k + δ^i_k ψ_j`. Projective
/// shifts accumulate into `ψ` rather than into the base coefficients, so a
/// shift by `ψ` followed by `-ψ` evaluates exactly to the original.
#[derive(Debug, Clone)]
pub struct ConnectionSpec {
    chart: Chart,
    base: Vec<ScalarExpr>,
    shift: Vec<ScalarExpr>,
}

impl ConnectionSpec {
    /// `components` flattened `[i][j][k]`.
    pub fn new(chart: Chart, components: Vec<ScalarExpr>) -> Result<Self> {
        let n = chart.dim();
        if components.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n * n,
                found: components.len(),
            });
        }
        for e in &components {
            check_expr(&chart, e)?;
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..j {
                    if components[(i * n + j) * n + k] != components[(i * n + k) * n + j] {
                        return Err(Error::NotSymmetric(vec![i, j, k]));
                    }
                }
            }
        }
        Ok(Self {
            chart,
            base: components,
            shift: vec![ScalarExpr::zero(); n],
        })
    }

    /// `texts[i][j][k]`.
    pub fn parse<S: AsRef<str>>(chart: Chart, texts: &[Vec<Vec<S>>]) -> Result<Self> {
        let n = chart.dim();
        let shape_ok = texts.len() == n
            && texts
                .iter()
                .all(|plane| plane.len() == n && plane.iter().all(|row| row.len() == n));
        if !shape_ok {
            return Err(Error::InvalidArgument(format!(
                "connection must be a {n}x{n}x{n} array of expressions"
            )));
        }
        let flat: Vec<&str> = texts
            .iter()
            .flatten()
            .flatten()
            .map(|s| s.as_ref())
            .collect();
        let components = parse_all(&chart, &flat)?;
        Self::new(chart, components)
    }

    pub fn zero(chart: Chart) -> Self {
        let n = chart.dim();
        Self {
            chart,
            base: vec![ScalarExpr::zero(); n * n * n],
            shift: vec![ScalarExpr::zero(); n],
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// Full coefficient expression, base plus accumulated shift.
    pub fn component(&self, i: usize, j: usize, k: usize) -> ScalarExpr {
        let n = self.dim();
        let mut trace = ScalarExpr::zero();
        if i == j {
            trace = trace + self.shift[k].clone();
        }
        if i == k {
            trace = trace + self.shift[j].clone();
        }
        self.base[(i * n + j) * n + k].clone() + trace
    }

    pub fn at(&self, p: &[f64]) -> Result<PointTensor> {
        check_point(&self.chart, p)?;
        let n = self.dim();
        let shift = self
            .shift
            .iter()
            .map(|e| e.eval(p))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let mut values = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut trace = 0.0;
                    if i == j {
                        trace += shift[k];
                    }
                    if i == k {
                        trace += shift[j];
                    }
                    values.push(self.base[(i * n + j) * n + k].eval(p)? + trace);
                }
            }
        }
        PointTensor::new(n, 3, values, &[(1, 2)])
    }
}

/// Anything that yields Christoffel symbols at a point.
pub trait ConnectionField {
    fn dim(&self) -> usize;
    fn christoffel_at(&self, p: &[f64]) -> Result<PointTensor>;

    fn label(&self) -> String {
        "explicit".into()
    }
}

impl ConnectionField for ConnectionSpec {
    fn dim(&self) -> usize {
        self.chart.dim()
    }

    fn christoffel_at(&self, p: &[f64]) -> Result<PointTensor> {
        self.at(p)
    }
}

/// A Weylian metric represented by one pair `(g, φ)`.
#[derive(Debug, Clone)]
pub struct WeylStructure {
    pub metric: MetricSpec,
    pub phi: OneFormSpec,
}

impl WeylStructure {
    pub fn new(metric: MetricSpec, phi: OneFormSpec) -> Result<Self> {
        check_same_chart(metric.chart(), phi.chart())?;
        Ok(Self { metric, phi })
    }

    pub fn connection_at(&self, p: &[f64]) -> Result<PointTensor> {
        weyl_connection(&self.metric, &self.phi, p)
    }

    /// `∇g + 2φ⊗g` for the induced connection; vanishes up to rounding.
    pub fn compatibility_residual(&self, p: &[f64]) -> Result<PointTensor> {
        let gamma = self.connection_at(p)?;
        nabla_g_residual(&self.metric, &gamma, &self.phi, p)
    }

    /// Another representative of the same Weylian metric:
    /// `(e^{2λ} g, φ - dλ)` with `λ = ln Ω`.
    pub fn regauged(&self, ln_omega: &ScalarExpr) -> Result<Self> {
        Ok(Self {
            metric: conformal_rescale(&self.metric, ln_omega)?,
            phi: gauge_transform(&self.phi, ln_omega)?,
        })
    }
}

/// A connection given explicitly or induced from other fields.
#[derive(Debug, Clone)]
pub enum Connection {
    Explicit(ConnectionSpec),
    LeviCivita(MetricSpec),
    Weyl(WeylStructure),
    /// `F + φ^i g_{jk} + η_j δ^i_k + η_k δ^i_j`, see [`eps_connection`].
    Eps {
        metric: MetricSpec,
        phi: OneFormSpec,
        eta: OneFormSpec,
    },
    ProjectiveShift {
        base: Box<Connection>,
        psi: OneFormSpec,
    },
}

impl Connection {
    /// `Γ + δ^i_j ψ_k + δ^i_k ψ_j`.
    pub fn shifted(self, psi: OneFormSpec) -> Result<Self> {
        if self.dim() != psi.dim() {
            return Err(Error::ChartMismatch(self.dim(), psi.dim()));
        }
        Ok(Connection::ProjectiveShift {
            base: Box::new(self),
            psi,
        })
    }
}

impl From<ConnectionSpec> for Connection {
    fn from(spec: ConnectionSpec) -> Self {
        Connection::Explicit(spec)
    }
}

impl ConnectionField for Connection {
    fn label(&self) -> String {
        match self {
            Connection::Explicit(_) => "explicit".into(),
            Connection::LeviCivita(_) => "levi_civita".into(),
            Connection::Weyl(_) => "weyl".into(),
            Connection::Eps { .. } => "eps".into(),
            Connection::ProjectiveShift { base, .. } => {
                format!("projective_shift({})", base.label())
            }
        }
    }

    fn dim(&self) -> usize {
        match self {
            Connection::Explicit(s) => s.dim(),
            Connection::LeviCivita(g) => g.dim(),
            Connection::Weyl(w) => w.metric.dim(),
            Connection::Eps { metric, .. } => metric.dim(),
            Connection::ProjectiveShift { base, .. } => base.dim(),
        }
    }

    fn christoffel_at(&self, p: &[f64]) -> Result<PointTensor> {
        match self {
            Connection::Explicit(s) => s.at(p),
            Connection::LeviCivita(g) => levi_civita(g, p),
            Connection::Weyl(w) => w.connection_at(p),
            Connection::Eps { metric, phi, eta } => eps_connection(metric, phi, eta, p),
            Connection::ProjectiveShift { base, psi } => {
                let gamma = base.christoffel_at(p)?;
                let shift = pure_trace(&psi.at(p)?);
                gamma.add(&shift)
            }
        }
    }
}

/// `δ^i_j η_k + δ^i_k η_j`.
pub fn pure_trace(eta: &[f64]) -> PointTensor {
    let n = eta.len();
    PointTensor::from_fn(n, 3, |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let mut v = 0.0;
        if i == j {
            v += eta[k];
        }
        if i == k {
            v += eta[j];
        }
        v
    })
    .with_symmetry(1, 2)
    .expect("pure trace tensors are lower-symmetric")
}

/// Build a lower-symmetric rank-3 tensor from a function evaluated for `j <= k`.
fn lower_symmetric(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> PointTensor {
    let mut entries = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in j..n {
                let v = f(i, j, k);
                entries[(i * n + j) * n + k] = v;
                entries[(i * n + k) * n + j] = v;
            }
        }
    }
    PointTensor::new(n, 3, entries, &[(1, 2)]).expect("lower-symmetric tensor")
}

struct MetricAt {
    g: SymMatrix,
    ginv: SymMatrix,
    christoffel: PointTensor,
}

fn metric_and_christoffel(g: &MetricSpec, p: &[f64]) -> Result<MetricAt> {
    let gm = g.at(p)?;
    let ginv = gm.invert_with(g.degeneracy_threshold())?;
    let dg = g.derivatives_at(p)?;
    let n = g.dim();
    let d = |l: usize, j: usize, k: usize| dg[(l * n + j) * n + k];
    let christoffel = lower_symmetric(n, |i, j, k| {
        let mut s = 0.0;
        for l in 0..n {
            s += ginv.get(i, l) * (d(j, l, k) + d(k, l, j) - d(l, j, k));
        }
        0.5 * s
    });
    Ok(MetricAt {
        g: gm,
        ginv,
        christoffel,
    })
}

/// Levi-Civita connection `½ g^{il}(∂_j g_{lk} + ∂_k g_{lj} - ∂_l g_{jk})` at `p`.
pub fn levi_civita(g: &MetricSpec, p: &[f64]) -> Result<PointTensor> {
    Ok(metric_and_christoffel(g, p)?.christoffel)
}

/// Weyl connection `F^i_{jk} + δ^i_j φ_k + δ^i_k φ_j - g_{jk} φ^i` of the pair `(g, φ)`.
pub fn weyl_connection(g: &MetricSpec, phi: &OneFormSpec, p: &[f64]) -> Result<PointTensor> {
    check_same_chart(g.chart(), phi.chart())?;
    let MetricAt {
        g: gm,
        ginv,
        christoffel: f,
    } = metric_and_christoffel(g, p)?;
    let phi_low = phi.at(p)?;
    let phi_up = ginv.mul_vec(&phi_low);
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    Ok(lower_symmetric(g.dim(), |i, j, k| {
        f.get3(i, j, k) + delta(i, j) * phi_low[k] + delta(i, k) * phi_low[j]
            - gm.get(j, k) * phi_up[i]
    }))
}

/// EPS-compatible connection `F^i_{jk} + φ^i g_{jk} + η_j δ^i_k + η_k δ^i_j`.
/// `phi` is a one-form and is raised with `g^{ij}`.
pub fn eps_connection(
    g: &MetricSpec,
    phi: &OneFormSpec,
    eta: &OneFormSpec,
    p: &[f64],
) -> Result<PointTensor> {
    check_same_chart(g.chart(), phi.chart())?;
    check_same_chart(g.chart(), eta.chart())?;
    let MetricAt {
        g: gm,
        ginv,
        christoffel: f,
    } = metric_and_christoffel(g, p)?;
    let phi_up = ginv.mul_vec(&phi.at(p)?);
    let eta = eta.at(p)?;
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    Ok(lower_symmetric(g.dim(), |i, j, k| {
        f.get3(i, j, k) + phi_up[i] * gm.get(j, k) + eta[j] * delta(i, k) + eta[k] * delta(i, j)
    }))
}

/// Componentwise `∂_l g_{jk} - Γ^m_{lj} g_{mk} - Γ^m_{lk} g_{jm} + 2 φ_l g_{jk}`,
/// stored `[l][j][k]`.
pub fn nabla_g_residual(
    g: &MetricSpec,
    gamma: &PointTensor,
    phi: &OneFormSpec,
    p: &[f64],
) -> Result<PointTensor> {
    let n = g.dim();
    check_same_chart(g.chart(), phi.chart())?;
    if gamma.rank() != 3 || gamma.dim() != n {
        return Err(Error::ShapeMismatch(gamma.rank(), gamma.dim(), 3, n));
    }
    let gm = g.at(p)?;
    let dg = g.derivatives_at(p)?;
    let phi = phi.at(p)?;
    Ok(PointTensor::from_fn(n, 3, |idx| {
        let (l, j, k) = (idx[0], idx[1], idx[2]);
        let mut r = dg[(l * n + j) * n + k] + 2.0 * phi[l] * gm.get(j, k);
        for m in 0..n {
            r -= gamma.get3(m, l, j) * gm.get(m, k) + gamma.get3(m, l, k) * gm.get(j, m);
        }
        r
    }))
}

/// `Γ'^i_{jk} = Γ^i_{jk} + δ^i_j ψ_k + δ^i_k ψ_j`, symbolically.
pub fn projective_shift(gamma: &ConnectionSpec, psi: &OneFormSpec) -> Result<ConnectionSpec> {
    check_same_chart(gamma.chart(), psi.chart())?;
    let shift = gamma
        .shift
        .iter()
        .zip(psi.components())
        .map(|(a, b)| a.clone() + b.clone())
        .collect();
    Ok(ConnectionSpec {
        chart: gamma.chart.clone(),
        base: gamma.base.clone(),
        shift,
    })
}

/// `g → e^{2 ln Ω} g`.
pub fn conformal_rescale(g: &MetricSpec, ln_omega: &ScalarExpr) -> Result<MetricSpec> {
    check_expr(g.chart(), ln_omega)?;
    let factor = ScalarExpr::call(Func::Exp, ScalarExpr::constant(2.0) * ln_omega.clone());
    let components = g
        .components
        .iter()
        .map(|e| {
            if e.is_zero() {
                ScalarExpr::zero()
            } else {
                factor.clone() * e.clone()
            }
        })
        .collect();
    Ok(MetricSpec::new(g.chart.clone(), components)?.with_degeneracy_threshold(g.degeneracy))
}

/// `φ → φ - d ln Ω`.
pub fn gauge_transform(phi: &OneFormSpec, ln_omega: &ScalarExpr) -> Result<OneFormSpec> {
    let d = OneFormSpec::gradient(phi.chart.clone(), ln_omega)?;
    phi.sub(&d)
}

/// `D^s_{jk} = Γ^s_{jk} - F^s_{jk}` relative to the Levi-Civita connection of `g`.
pub fn difference_tensor<C: ConnectionField + ?Sized>(
    gamma: &C,
    g: &MetricSpec,
    p: &[f64],
) -> Result<PointTensor> {
    if gamma.dim() != g.dim() {
        return Err(Error::ChartMismatch(gamma.dim(), g.dim()));
    }
    let f = levi_civita(g, p)?;
    gamma.christoffel_at(p)?.sub(&f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart(n: usize) -> Chart {
        Chart::new(n).unwrap()
    }

    fn e(s: &str, n: usize) -> ScalarExpr {
        ScalarExpr::parse(s, &chart(n)).unwrap()
    }

    #[test]
    fn minkowski_metric_at_any_point() {
        let g = MetricSpec::minkowski(chart(4));
        let m = g.at(&[0.3, -1.0, 2.0, 5.0]).unwrap();
        assert_eq!(m, SymMatrix::diag(&[-1.0, 1.0, 1.0, 1.0]).unwrap());
        assert_eq!(
            levi_civita(&g, &[0.3, -1.0, 2.0, 5.0]).unwrap().max_abs(),
            0.0
        );
    }

    #[test]
    fn conformally_flat_at_origin() {
        let g = MetricSpec::parse(
            chart(3),
            &[
                vec!["-exp(2*x0)", "0", "0"],
                vec!["0", "exp(2*x0)", "0"],
                vec!["0", "0", "exp(2*x0)"],
            ],
        )
        .unwrap();
        assert_eq!(
            g.at(&[0.0, 4.0, 1.0]).unwrap(),
            SymMatrix::diag(&[-1.0, 1.0, 1.0]).unwrap()
        );
    }

    #[test]
    fn degenerate_metric_is_rejected() {
        let g = MetricSpec::diagonal(chart(2), vec![e("x0", 2), e("1", 2)]).unwrap();
        assert!(matches!(
            g.at(&[0.0, 1.0]),
            Err(Error::DegenerateMetric { .. })
        ));
        assert!(matches!(
            levi_civita(&g, &[0.0, 1.0]),
            Err(Error::DegenerateMetric { .. })
        ));
        assert!(g.at(&[1.0, 1.0]).is_ok());
    }

    #[test]
    fn asymmetric_specs_are_rejected() {
        let c = chart(2);
        let r = MetricSpec::parse(c.clone(), &[vec!["1", "x0"], vec!["x1", "1"]]);
        assert!(matches!(r, Err(Error::NotSymmetric(_))));
        let mut texts = vec![vec![vec!["0"; 2]; 2]; 2];
        texts[0][0][1] = "x0";
        assert!(matches!(
            ConnectionSpec::parse(c, &texts),
            Err(Error::NotSymmetric(_))
        ));
    }

    #[test]
    fn polar_like_flat_metric() {
        // g = diag(1, x0^2): F^0_{11} = -x0, F^1_{01} = 1/x0
        let g = MetricSpec::diagonal(chart(2), vec![e("1", 2), e("x0^2", 2)]).unwrap();
        let f = levi_civita(&g, &[2.0, 0.7]).unwrap();
        assert_eq!(f.get3(0, 1, 1), -2.0);
        assert_eq!(f.get3(1, 0, 1), 0.5);
        assert_eq!(f.get3(1, 1, 0), 0.5);
        assert_eq!(f.get3(0, 0, 0), 0.0);
        assert_eq!(f.get3(1, 1, 1), 0.0);
        assert_eq!(f.get3(0, 0, 1), 0.0);
    }

    #[test]
    fn weyl_connection_on_minkowski_with_constant_phi() {
        let c = 0.75;
        let g = MetricSpec::minkowski(chart(4));
        let phi = OneFormSpec::constant(chart(4), &[c, 0.0, 0.0, 0.0]).unwrap();
        let gamma = weyl_connection(&g, &phi, &[0.0; 4]).unwrap();
        assert_eq!(gamma.get3(0, 0, 0), c);
        assert_eq!(gamma.get3(1, 0, 1), c);
        assert_eq!(gamma.get3(1, 1, 0), c);
        assert_eq!(gamma.get3(0, 1, 1), c);
        assert_eq!(gamma.get3(0, 0, 1), 0.0);
        assert_eq!(gamma.get3(1, 1, 1), 0.0);
    }

    #[test]
    fn weyl_with_zero_form_is_levi_civita() {
        let g = MetricSpec::diagonal(chart(3), vec![e("-1-x1^2", 3), e("exp(x0)", 3), e("2", 3)])
            .unwrap();
        let p = [0.2, 0.4, -0.1];
        let w = weyl_connection(&g, &OneFormSpec::zero(chart(3)), &p).unwrap();
        assert_eq!(w, levi_civita(&g, &p).unwrap());
    }

    #[test]
    fn nabla_g_residual_examples() {
        let g = MetricSpec::minkowski(chart(4));
        let p = [0.0; 4];
        let zero = PointTensor::zeros(4, 3);
        let r = nabla_g_residual(&g, &zero, &OneFormSpec::zero(chart(4)), &p).unwrap();
        assert_eq!(r.max_abs(), 0.0);

        let phi = OneFormSpec::constant(chart(4), &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let r = nabla_g_residual(&g, &zero, &phi, &p).unwrap();
        assert_eq!(r.max_abs(), 2.0);
        assert_eq!(r.get3(0, 0, 0), -2.0);
        assert_eq!(r.get3(0, 1, 1), 2.0);
        assert_eq!(r.get3(1, 1, 1), 0.0);
    }

    #[test]
    fn projective_shift_examples() {
        let c = chart(3);
        let base = ConnectionSpec::zero(c.clone());
        let psi = OneFormSpec::constant(c.clone(), &[1.0, 0.0, 0.0]).unwrap();
        let shifted = projective_shift(&base, &psi).unwrap();
        let t = shifted.at(&[0.0; 3]).unwrap();
        let expected = |i: usize, j: usize, k: usize| match (i, j, k) {
            (0, 0, 0) => 2.0,
            (1, 0, 1) | (1, 1, 0) | (2, 0, 2) | (2, 2, 0) => 1.0,
            _ => 0.0,
        };
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(t.get3(i, j, k), expected(i, j, k), "({i},{j},{k})");
                }
            }
        }

        let unchanged = projective_shift(&base, &OneFormSpec::zero(c.clone())).unwrap();
        assert_eq!(unchanged.at(&[0.0; 3]).unwrap().max_abs(), 0.0);

        let psi = OneFormSpec::parse(c.clone(), &["x1", "sin(x0)", "x2^2"]).unwrap();
        let gamma = ConnectionSpec::parse(
            c.clone(),
            &[
                vec![
                    vec!["x0", "1", "0"],
                    vec!["1", "0", "x2"],
                    vec!["0", "x2", "3"],
                ],
                vec![
                    vec!["0", "0", "0"],
                    vec!["0", "x1", "0"],
                    vec!["0", "0", "0"],
                ],
                vec![
                    vec!["2", "0", "0"],
                    vec!["0", "0", "0"],
                    vec!["0", "0", "x0*x1"],
                ],
            ],
        )
        .unwrap();
        let back =
            projective_shift(&projective_shift(&gamma, &psi).unwrap(), &psi.negated()).unwrap();
        let p = [0.3, -0.8, 1.1];
        assert_eq!(back.at(&p).unwrap(), gamma.at(&p).unwrap());
    }

    #[test]
    fn gauge_transform_examples() {
        let c = chart(3);
        let g = MetricSpec::minkowski(c.clone());
        let phi = OneFormSpec::zero(c.clone());
        let zero = ScalarExpr::zero();
        let p = [0.4, 0.1, -0.3];
        assert_eq!(
            conformal_rescale(&g, &zero).unwrap().at(&p).unwrap(),
            g.at(&p).unwrap()
        );
        assert_eq!(
            gauge_transform(&phi, &zero).unwrap().at(&p).unwrap(),
            vec![0.0; 3]
        );

        let t = gauge_transform(&phi, &e("x0", 3)).unwrap();
        assert_eq!(t.at(&p).unwrap(), vec![-1.0, 0.0, 0.0]);
    }

    #[test]
    fn conformal_rescale_composes() {
        let c = chart(3);
        let g =
            MetricSpec::diagonal(c.clone(), vec![e("-1", 3), e("1 + x0^2", 3), e("1", 3)]).unwrap();
        let (lambda, mu) = (e("sin(x1)", 3), e("x0*x2", 3));
        let twice = conformal_rescale(&conformal_rescale(&g, &lambda).unwrap(), &mu).unwrap();
        let once = conformal_rescale(&g, &(lambda + mu)).unwrap();
        for p in [[0.1, 0.2, 0.3], [-0.5, 0.9, 0.0], [0.7, -0.4, 1.2]] {
            let (a, b) = (twice.at(&p).unwrap(), once.at(&p).unwrap());
            for (x, y) in a.entries().iter().zip(b.entries()) {
                assert!((x - y).abs() <= 1e-14 * (1.0 + x.abs()));
            }
        }
    }

    #[test]
    fn difference_tensor_examples() {
        let c = chart(4);
        let g = MetricSpec::diagonal(
            c.clone(),
            vec![e("-exp(x1)", 4), e("1", 4), e("1 + x0^2", 4), e("2", 4)],
        )
        .unwrap();
        let p = [0.3, -0.2, 0.5, 0.1];
        let lc = Connection::LeviCivita(g.clone());
        assert_eq!(difference_tensor(&lc, &g, &p).unwrap().max_abs(), 0.0);

        let psi = OneFormSpec::parse(c.clone(), &["x1", "1", "x0*x3", "0"]).unwrap();
        let shifted = lc.shifted(psi.clone()).unwrap();
        let d = difference_tensor(&shifted, &g, &p).unwrap();
        let expected = pure_trace(&psi.at(&p).unwrap());
        assert!(d.max_abs_diff(&expected).unwrap() <= 1e-15);
    }

    #[test]
    fn eps_connection_examples() {
        let c = chart(4);
        let g = MetricSpec::minkowski(c.clone());
        let p = [0.0; 4];
        let zero = OneFormSpec::zero(c.clone());
        assert_eq!(
            eps_connection(&g, &zero, &zero, &p).unwrap(),
            levi_civita(&g, &p).unwrap()
        );
        let phi = OneFormSpec::constant(c.clone(), &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let gamma = eps_connection(&g, &phi, &zero, &p).unwrap();
        assert_eq!(gamma.get3(0, 0, 0), 1.0);
        assert_eq!(gamma.get3(0, 1, 1), -1.0);
        assert_eq!(gamma.get3(0, 2, 2), -1.0);
        assert_eq!(gamma.get3(1, 1, 1), 0.0);
    }

    #[test]
    fn eps_with_eta_equals_shifted_phi_only_connection() {
        let c = chart(3);
        let g = MetricSpec::diagonal(
            c.clone(),
            vec![e("-1 - x2^2", 3), e("1", 3), e("exp(x0)", 3)],
        )
        .unwrap();
        let phi = OneFormSpec::parse(c.clone(), &["x1", "0.5", "x0*x2"]).unwrap();
        let eta = OneFormSpec::parse(c.clone(), &["cos(x0)", "x2", "-1"]).unwrap();
        let p = [0.2, -0.6, 0.9];
        let full = eps_connection(&g, &phi, &eta, &p).unwrap();
        let phi_only = Connection::Eps {
            metric: g.clone(),
            phi: phi.clone(),
            eta: OneFormSpec::zero(c.clone()),
        };
        let shifted = phi_only.shifted(eta).unwrap().christoffel_at(&p).unwrap();
        assert!(full.max_abs_diff(&shifted).unwrap() <= 1e-15);
    }

    #[test]
    fn chart_mismatch_is_reported() {
        let g = MetricSpec::minkowski(chart(3));
        let phi = OneFormSpec::zero(chart(4));
        assert!(matches!(
            weyl_connection(&g, &phi, &[0.0; 3]),
            Err(Error::ChartMismatch(3, 4))
        ));
        assert!(matches!(
            g.at(&[0.0; 4]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
