//! Polynomial normal form of expressions.
//!
//! An expression is expanded into a sum of monomials with exact rational
//! coefficients. Monomials are products of integer powers of atoms:
//! coordinates, function applications, reciprocals of sums, and constants that
//! are not small dyadic rationals. Two expressions with equal normal forms
//! evaluate identically in exact arithmetic, which lets mixed partial
//! derivatives be compared without rounding.

use std::collections::BTreeMap;

use crate::expr::{Func, ScalarExpr};

/// Expansion is abandoned beyond this many terms.
const MAX_TERMS: usize = 20_000;

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduced fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Ratio {
    num: i128,
    den: i128,
}

impl Ratio {
    const ONE: Ratio = Ratio { num: 1, den: 1 };

    fn new(num: i128, den: i128) -> Option<Ratio> {
        if den == 0 {
            return None;
        }
        let g = gcd(num, den).max(1);
        let sign = if den < 0 { -1 } else { 1 };
        Some(Ratio {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    /// Integers and dyadic fractions with small denominators.
    fn from_f64(c: f64) -> Option<Ratio> {
        const LIMIT: f64 = 9_007_199_254_740_992.0; // 2^53
        let mut scaled = c;
        let mut den: i128 = 1;
        for _ in 0..=10 {
            if scaled.fract() == 0.0 && scaled.abs() < LIMIT {
                return Ratio::new(scaled as i128, den);
            }
            scaled *= 2.0;
            den *= 2;
        }
        None
    }

    fn is_zero(self) -> bool {
        self.num == 0
    }

    fn add(self, o: Ratio) -> Option<Ratio> {
        let num = self
            .num
            .checked_mul(o.den)?
            .checked_add(o.num.checked_mul(self.den)?)?;
        Ratio::new(num, self.den.checked_mul(o.den)?)
    }

    fn mul(self, o: Ratio) -> Option<Ratio> {
        Ratio::new(self.num.checked_mul(o.num)?, self.den.checked_mul(o.den)?)
    }

    fn neg(self) -> Ratio {
        Ratio {
            num: -self.num,
            den: self.den,
        }
    }

    fn powi(self, k: i32) -> Option<Ratio> {
        let base = if k < 0 {
            Ratio::new(self.den, self.num)?
        } else {
            self
        };
        let mut out = Ratio::ONE;
        for _ in 0..k.unsigned_abs() {
            out = out.mul(base)?;
        }
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    Var(usize),
    /// Bit pattern of a positive constant without a small rational form.
    Const(u64),
    Call(Func, Poly),
    /// A sum with more than one term, normalized to leading coefficient 1.
    Sum(Poly),
}

type Monomial = BTreeMap<Atom, i32>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Poly(BTreeMap<Monomial, Ratio>);

impl Poly {
    fn zero() -> Poly {
        Poly(BTreeMap::new())
    }

    fn scalar(r: Ratio) -> Poly {
        Poly::term(Monomial::new(), r)
    }

    fn term(m: Monomial, r: Ratio) -> Poly {
        let mut map = BTreeMap::new();
        if !r.is_zero() {
            map.insert(m, r);
        }
        Poly(map)
    }

    fn atom(a: Atom, exponent: i32) -> Poly {
        Poly::term(Monomial::from([(a, exponent)]), Ratio::ONE)
    }

    fn constant(c: f64) -> Option<Poly> {
        if !c.is_finite() {
            return None;
        }
        if let Some(r) = Ratio::from_f64(c) {
            return Some(Poly::scalar(r));
        }
        let sign = if c < 0.0 { -1 } else { 1 };
        Some(Poly::term(
            Monomial::from([(Atom::Const(c.abs().to_bits()), 1)]),
            Ratio::new(sign, 1)?,
        ))
    }

    fn add_term(&mut self, m: Monomial, r: Ratio) -> Option<()> {
        let sum = match self.0.get(&m) {
            Some(existing) => existing.add(r)?,
            None => r,
        };
        if sum.is_zero() {
            self.0.remove(&m);
        } else {
            self.0.insert(m, sum);
        }
        (self.0.len() <= MAX_TERMS).then_some(())
    }

    fn add(mut self, o: Poly) -> Option<Poly> {
        for (m, r) in o.0 {
            self.add_term(m, r)?;
        }
        Some(self)
    }

    fn neg(self) -> Poly {
        Poly(self.0.into_iter().map(|(m, r)| (m, r.neg())).collect())
    }

    fn mul(&self, o: &Poly) -> Option<Poly> {
        if self.0.len().checked_mul(o.0.len())? > MAX_TERMS {
            return None;
        }
        let mut out = Poly::zero();
        for (ma, ra) in &self.0 {
            for (mb, rb) in &o.0 {
                let mut m = ma.clone();
                for (atom, e) in mb {
                    let total = m.get(atom).copied().unwrap_or(0).checked_add(*e)?;
                    if total == 0 {
                        m.remove(atom);
                    } else {
                        m.insert(atom.clone(), total);
                    }
                }
                out.add_term(m, ra.mul(*rb)?)?;
            }
        }
        Some(out)
    }

    fn powi(&self, k: i32) -> Option<Poly> {
        if k >= 0 {
            let mut out = Poly::scalar(Ratio::ONE);
            for _ in 0..k {
                out = out.mul(self)?;
            }
            return Some(out);
        }
        match self.0.len() {
            0 => None,
            1 => {
                let (m, r) = self.0.iter().next()?;
                let mut inv = Monomial::new();
                for (atom, e) in m {
                    inv.insert(atom.clone(), e.checked_mul(k)?);
                }
                Some(Poly::term(inv, r.powi(k)?))
            }
            _ => {
                // p = c·p̂ with p̂ monic, so p^k = c^k · p̂^k
                let lead = *self.0.values().next()?;
                let unit = lead.powi(-1)?;
                let monic = Poly(
                    self.0
                        .iter()
                        .map(|(m, r)| Some((m.clone(), r.mul(unit)?)))
                        .collect::<Option<_>>()?,
                );
                Some(Poly::term(
                    Monomial::from([(Atom::Sum(monic), k)]),
                    lead.powi(k)?,
                ))
            }
        }
    }

    pub(crate) fn of(e: &ScalarExpr) -> Option<Poly> {
        match e {
            ScalarExpr::Const(c) => Poly::constant(*c),
            ScalarExpr::Var(i) => Some(Poly::atom(Atom::Var(*i), 1)),
            ScalarExpr::Neg(a) => Some(Poly::of(a)?.neg()),
            ScalarExpr::Add(a, b) => Poly::of(a)?.add(Poly::of(b)?),
            ScalarExpr::Sub(a, b) => Poly::of(a)?.add(Poly::of(b)?.neg()),
            ScalarExpr::Mul(a, b) => Poly::of(a)?.mul(&Poly::of(b)?),
            ScalarExpr::Div(a, b) => Poly::of(a)?.mul(&Poly::of(b)?.powi(-1)?),
            ScalarExpr::Pow(a, k) => Poly::of(a)?.powi(*k),
            ScalarExpr::Call(f, a) => Some(Poly::atom(Atom::Call(*f, Poly::of(a)?), 1)),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// True when `a - b` expands to the zero polynomial. `false` means unknown.
pub(crate) fn provably_equal(a: &ScalarExpr, b: &ScalarExpr) -> bool {
    match (Poly::of(a), Poly::of(b)) {
        (Some(pa), Some(pb)) => pa.add(pb.neg()).is_some_and(|d| d.is_zero()),
        _ => false,
    }
}
