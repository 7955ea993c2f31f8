#![allow(dead_code)]

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weylkit_core::expr::{Func, ScalarExpr};
use weylkit_core::tensor::SymMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `max |a - b| / max(1, max |b|)`.
pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let scale = b.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
        / scale
}

/// Random symmetric Lorentzian matrix `Λᵀ diag(-1, 1, ..) Λ` with a random
/// near-identity `Λ`.
pub fn random_lorentzian<R: rand::Rng>(rng: &mut R, n: usize) -> SymMatrix {
    let lambda: Vec<f64> = (0..n * n)
        .map(|k| {
            let d = if k / n == k % n { 1.0 } else { 0.0 };
            d + rng.random_range(-0.4..0.4)
        })
        .collect();
    let eta = |a: usize| if a == 0 { -1.0 } else { 1.0 };
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for a in 0..n {
                s += lambda[a * n + i] * eta(a) * lambda[a * n + j];
            }
            entries[i * n + j] = s;
        }
    }
    for i in 0..n {
        for j in 0..i {
            entries[i * n + j] = entries[j * n + i];
        }
    }
    SymMatrix::new(n, entries).unwrap()
}

pub fn random_vec<R: rand::Rng>(rng: &mut R, n: usize, amplitude: f64) -> Vec<f64> {
    (0..n)
        .map(|_| rng.random_range(-amplitude..=amplitude))
        .collect()
}

pub const DIM: usize = 4;

// Every generated tree is defined on [-1, 1]^4: logs, roots and divisions only
// ever see arguments bounded away from zero.
fn leaf() -> impl Strategy<Value = ScalarExpr> {
    prop_oneof![
        (-2.0..2.0_f64).prop_map(ScalarExpr::constant),
        (0..DIM).prop_map(ScalarExpr::var),
    ]
}

fn shifted(base: f64, e: ScalarExpr) -> ScalarExpr {
    ScalarExpr::constant(base) + ScalarExpr::call(Func::Sin, e)
}

pub fn expr() -> impl Strategy<Value = ScalarExpr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / shifted(2.0, b)),
            inner.clone().prop_map(|a| -a),
            inner.clone().prop_map(|a| ScalarExpr::call(Func::Sin, a)),
            inner.clone().prop_map(|a| ScalarExpr::call(Func::Cos, a)),
            inner.clone().prop_map(|a| ScalarExpr::call(Func::Tanh, a)),
            inner
                .clone()
                .prop_map(|a| ScalarExpr::call(Func::Exp, ScalarExpr::call(Func::Sin, a))),
            inner
                .clone()
                .prop_map(|a| ScalarExpr::call(Func::Ln, shifted(1.5, a))),
            inner
                .clone()
                .prop_map(|a| ScalarExpr::call(Func::Sqrt, shifted(1.5, a))),
            (inner.clone(), 0..4_i32).prop_map(|(a, k)| a.powi(k)),
            (inner, 1..3_i32).prop_map(|(a, k)| shifted(2.0, a).powi(-k)),
        ]
    })
}
