use super::{ExtReal, QuadSurd, Rational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::Mul;

/// A 2×2 integer matrix `[[a, b], [c, d]]` acting on ℝ ∪ {∞} by `x ↦ (ax + b)/(cx + d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl IntMatrix2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMatrix2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn from_big(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        IntMatrix2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        IntMatrix2::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// The adjugate `[[d, −b], [−c, a]]`, which acts as the inverse transformation.
    pub fn adjugate(&self) -> Self {
        IntMatrix2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    /// Exact inverse of a unimodular matrix.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if !det.abs().is_one() {
            return Err(Error::domain(format!("matrix {} is not unimodular", self)));
        }
        let adj = self.adjugate();
        Ok(IntMatrix2 {
            a: adj.a * &det,
            b: adj.b * &det,
            c: adj.c * &det,
            d: adj.d * &det,
        })
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut out = IntMatrix2::identity();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn neg(&self) -> Self {
        IntMatrix2 {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    /// Equality in PSL(2, ℤ): equal up to an overall sign.
    pub fn eq_projective(&self, other: &Self) -> bool {
        self == other || *self == other.neg()
    }

    /// Linear fractional action; see [`lft_apply`](super::lft_apply).
    pub fn apply(&self, x: &ExtReal) -> Result<ExtReal> {
        if self.det().is_zero() {
            return Err(Error::domain(format!("singular matrix {}", self)));
        }
        Ok(self.apply_unchecked(x))
    }

    /// Linear fractional action on a rational, returning `None` at the pole.
    pub fn apply_rational(&self, x: &Rational) -> Option<Rational> {
        let num =
            Rational::from_integer(self.a.clone()) * x + Rational::from_integer(self.b.clone());
        let den =
            Rational::from_integer(self.c.clone()) * x + Rational::from_integer(self.d.clone());
        if den.is_zero() {
            None
        } else {
            Some(num / den)
        }
    }

    pub(crate) fn apply_unchecked(&self, x: &ExtReal) -> ExtReal {
        match x {
            ExtReal::Finite(s) => {
                let a = QuadSurd::from(self.a.clone());
                let b = QuadSurd::from(self.b.clone());
                let c = QuadSurd::from(self.c.clone());
                let d = QuadSurd::from(self.d.clone());
                let den = &(&c * s) + &d;
                if den.is_zero() {
                    ExtReal::PosInf
                } else {
                    ExtReal::Finite(&(&(&a * s) + &b) / &den)
                }
            }
            _ => {
                if self.c.is_zero() {
                    ExtReal::PosInf
                } else {
                    ExtReal::Finite(QuadSurd::rational(Rational::new(
                        self.a.clone(),
                        self.c.clone(),
                    )))
                }
            }
        }
    }
}

impl Mul for &IntMatrix2 {
    type Output = IntMatrix2;
    fn mul(self, o: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }
}

impl Mul for IntMatrix2 {
    type Output = IntMatrix2;
    fn mul(self, o: IntMatrix2) -> IntMatrix2 {
        &self * &o
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Product of a sequence of matrices, left to right.
pub fn product<'a>(ms: impl IntoIterator<Item = &'a IntMatrix2>) -> IntMatrix2 {
    ms.into_iter()
        .fold(IntMatrix2::identity(), |acc, m| &acc * m)
}
