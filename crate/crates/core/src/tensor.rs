//! Dense tensors at a single point, plus symmetric matrices for metrics.
//!
//! Storage is row-major over `dim^rank` entries. Dimensions are capped at
//! [`MAX_DIM`], so a rank-3 tensor never exceeds 216 entries.

use crate::error::{Error, Result};
use crate::expr::MAX_DIM;

/// Relative threshold below which a metric is treated as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PointTensor {
    dim: usize,
    rank: usize,
    entries: Vec<f64>,
    symmetries: Vec<(usize, usize)>,
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension {
            dim,
            min: 1,
            max: MAX_DIM,
        })
    }
}

/// Iterate over all multi-indices of a `dim^rank` tensor in storage order.
fn multi_indices(dim: usize, rank: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = dim.pow(rank as u32);
    (0..total).map(move |mut flat| {
        let mut idx = vec![0; rank];
        for slot in (0..rank).rev() {
            idx[slot] = flat % dim;
            flat /= dim;
        }
        idx
    })
}

impl PointTensor {
    /// Zero tensor. Panics if `dim` is outside `1..=MAX_DIM`.
    pub fn zeros(dim: usize, rank: usize) -> Self {
        check_dim(dim).expect("tensor dimension");
        Self {
            dim,
            rank,
            entries: vec![0.0; dim.pow(rank as u32)],
            symmetries: Vec::new(),
        }
    }

    pub fn from_fn(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut t = Self::zeros(dim, rank);
        for (slot, idx) in multi_indices(dim, rank).enumerate() {
            t.entries[slot] = f(&idx);
        }
        t
    }

    /// Build from raw entries, validating finiteness and every declared symmetry.
    pub fn new(
        dim: usize,
        rank: usize,
        entries: Vec<f64>,
        symmetries: &[(usize, usize)],
    ) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim.pow(rank as u32) {
            return Err(Error::DimensionMismatch {
                expected: dim.pow(rank as u32),
                found: entries.len(),
            });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut t = Self {
            dim,
            rank,
            entries,
            symmetries: Vec::new(),
        };
        for &(a, b) in symmetries {
            t = t.with_symmetry(a, b)?;
        }
        Ok(t)
    }

    pub fn kronecker(dim: usize) -> Self {
        Self::from_fn(dim, 2, |i| if i[0] == i[1] { 1.0 } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn symmetries(&self) -> &[(usize, usize)] {
        &self.symmetries
    }

    fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.entries[self.flat(idx)]
    }

    /// Rank-3 accessor, `t^i_{jk}`.
    pub fn get3(&self, i: usize, j: usize, k: usize) -> f64 {
        self.entries[(i * self.dim + j) * self.dim + k]
    }

    fn check_slot(&self, slot: usize) -> Result<()> {
        if slot < self.rank {
            Ok(())
        } else {
            Err(Error::SlotOutOfRange {
                slot,
                rank: self.rank,
            })
        }
    }

    fn swapped(idx: &[usize], a: usize, b: usize) -> Vec<usize> {
        let mut s = idx.to_vec();
        s.swap(a, b);
        s
    }

    fn declare(&mut self, a: usize, b: usize) {
        let pair = (a.min(b), a.max(b));
        if !self.symmetries.contains(&pair) {
            self.symmetries.push(pair);
        }
    }

    /// Declare slots `a` and `b` symmetric, failing unless the entries already
    /// agree exactly.
    pub fn with_symmetry(mut self, a: usize, b: usize) -> Result<Self> {
        self.check_slot(a)?;
        self.check_slot(b)?;
        for idx in multi_indices(self.dim, self.rank) {
            if self.get(&idx) != self.get(&Self::swapped(&idx, a, b)) {
                return Err(Error::SymmetryViolation(a, b));
            }
        }
        self.declare(a, b);
        Ok(self)
    }

    /// Average over the transposition of slots `a` and `b` and declare the symmetry.
    pub fn symmetrized(&self, a: usize, b: usize) -> Result<Self> {
        self.check_slot(a)?;
        self.check_slot(b)?;
        let mut out = self.clone();
        for idx in multi_indices(self.dim, self.rank) {
            let other = self.get(&Self::swapped(&idx, a, b));
            let slot = out.flat(&idx);
            out.entries[slot] = 0.5 * (self.entries[slot] + other);
        }
        // averaging is not bitwise symmetric in general; copy one triangle
        for idx in multi_indices(self.dim, self.rank) {
            if idx[a] > idx[b] {
                let src = out.flat(&Self::swapped(&idx, a, b));
                let dst = out.flat(&idx);
                out.entries[dst] = out.entries[src];
            }
        }
        out.declare(a, b);
        Ok(out)
    }

    /// Sum over slots `slot_a` and `slot_b`, reducing the rank by two.
    pub fn contract(&self, slot_a: usize, slot_b: usize) -> Result<PointTensor> {
        self.check_slot(slot_a)?;
        self.check_slot(slot_b)?;
        if slot_a == slot_b {
            return Err(Error::SameSlot(slot_a));
        }
        let rank = self.rank - 2;
        let remaining: Vec<usize> = (0..self.rank)
            .filter(|s| *s != slot_a && *s != slot_b)
            .collect();
        let mut out = PointTensor::zeros(self.dim, rank);
        let mut full = vec![0; self.rank];
        for (slot, idx) in multi_indices(self.dim, rank).enumerate() {
            for (pos, &s) in remaining.iter().enumerate() {
                full[s] = idx[pos];
            }
            let mut sum = 0.0;
            for m in 0..self.dim {
                full[slot_a] = m;
                full[slot_b] = m;
                sum += self.get(&full);
            }
            out.entries[slot] = sum;
        }
        let renumber = |s: usize| remaining.iter().position(|r| *r == s);
        for &(a, b) in &self.symmetries {
            if let (Some(a), Some(b)) = (renumber(a), renumber(b)) {
                out.declare(a, b);
            }
        }
        Ok(out)
    }

    fn check_shape(&self, other: &PointTensor) -> Result<()> {
        if self.rank != other.rank || self.dim != other.dim {
            return Err(Error::ShapeMismatch(
                self.rank, self.dim, other.rank, other.dim,
            ));
        }
        Ok(())
    }

    /// L∞ distance between two tensors of the same shape.
    pub fn max_abs_diff(&self, other: &PointTensor) -> Result<f64> {
        self.check_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// L∞ norm.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Entrywise combination; keeps only symmetries shared by both operands.
    pub fn zip_with(&self, other: &PointTensor, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            dim: self.dim,
            rank: self.rank,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(*a, *b))
                .collect(),
            symmetries: self
                .symmetries
                .iter()
                .copied()
                .filter(|s| other.symmetries.contains(s))
                .collect(),
        })
    }

    pub fn add(&self, other: &PointTensor) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PointTensor) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            entries: self.entries.iter().map(|v| c * v).collect(),
            ..self.clone()
        }
    }
}

/// Symmetric `n x n` matrix; used for `g_{jk}` and `g^{jk}` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SymMatrix {
    /// Row-major entries; symmetric up to a few ulps of the entry scale.
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = entries.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let mut m = Self { dim, entries };
        for i in 0..dim {
            for j in 0..i {
                let (a, b) = (m.get(i, j), m.get(j, i));
                if (a - b).abs() > 8.0 * f64::EPSILON * scale {
                    return Err(Error::NotSymmetric(vec![i, j]));
                }
                m.entries[i * dim + j] = b;
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument("matrix rows must be square".into()));
        }
        Self::new(dim, rows.concat())
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut entries = vec![0.0; n * n];
        for (i, v) in values.iter().enumerate() {
            entries[i * n + i] = *v;
        }
        Self::new(n, entries)
    }

    pub fn identity(dim: usize) -> Self {
        Self::diag(&vec![1.0; dim]).expect("identity")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Largest absolute entry.
    pub fn scale(&self) -> f64 {
        self.entries.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Bilinear form `m(u, v)`.
    pub fn form(&self, u: &[f64], v: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                s += self.get(i, j) * u[i] * v[j];
            }
        }
        s
    }

    /// Determinant via LU with partial pivoting.
    pub fn determinant(&self) -> f64 {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
                .expect("non-empty");
            if a[pivot * n + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let factor = a[r * n + col] / p;
                for k in col..n {
                    a[r * n + k] -= factor * a[col * n + k];
                }
            }
        }
        det
    }

    /// Fails unless `|det| > threshold * scale^n`.
    pub fn check_nondegenerate(&self, threshold: f64) -> Result<()> {
        let det = self.determinant();
        let scale = self.scale();
        if scale == 0.0 || det.abs() <= threshold * scale.powi(self.dim as i32) {
            return Err(Error::DegenerateMetric { det });
        }
        Ok(())
    }

    pub fn invert(&self) -> Result<SymMatrix> {
        self.invert_with(DEGENERACY_THRESHOLD)
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn invert_with(&self, threshold: f64) -> Result<SymMatrix> {
        self.check_nondegenerate(threshold)?;
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut inv = SymMatrix::identity(n).entries;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
                .expect("non-empty");
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                    inv.swap(pivot * n + k, col * n + k);
                }
            }
            let p = a[col * n + col];
            for k in 0..n {
                a[col * n + k] /= p;
                inv[col * n + k] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor == 0.0 {
                    continue;
                }
                for k in 0..n {
                    a[r * n + k] -= factor * a[col * n + k];
                    inv[r * n + k] -= factor * inv[col * n + k];
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                let avg = 0.5 * (inv[i * n + j] + inv[j * n + i]);
                inv[i * n + j] = avg;
                inv[j * n + i] = avg;
            }
        }
        Ok(SymMatrix {
            dim: n,
            entries: inv,
        })
    }

    /// Eigenvalues (ascending) and matching orthonormal eigenvectors, by
    /// cyclic Jacobi rotations.
    pub fn eigen(&self) -> (Vec<f64>, Vec<Vec<f64>>) {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut v = SymMatrix::identity(n).entries;
        for _sweep in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i * n + j] * a[i * n + j])
                .sum();
            let diag: f64 = (0..n).map(|i| a[i * n + i] * a[i * n + i]).sum();
            if off <= f64::EPSILON * f64::EPSILON * diag || off == 0.0 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
            .map(|k| (a[k * n + k], (0..n).map(|i| v[i * n + k]).collect()))
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        pairs.into_iter().unzip()
    }

    /// `(positive, negative)` eigenvalue counts.
    pub fn signature(&self) -> Result<(usize, usize)> {
        self.signature_with(DEGENERACY_THRESHOLD)
    }

    pub fn signature_with(&self, threshold: f64) -> Result<(usize, usize)> {
        let (values, _) = self.eigen();
        let floor = threshold * self.scale();
        if self.scale() == 0.0 || values.iter().any(|v| v.abs() <= floor) {
            return Err(Error::DegenerateMetric {
                det: self.determinant(),
            });
        }
        let positive = values.iter().filter(|v| **v > 0.0).count();
        Ok((positive, self.dim - positive))
    }
}
