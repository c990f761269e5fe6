//! Exact number tower: rationals, real quadratic surds, the extended line and
//! integer 2×2 matrices acting by linear fractional transformations.
//!
//! Nothing here uses floating point for decisions. Text formats:
//! rationals as `p/q` or `n`, surds as `(u+v*sqrt(d))/w`, and `inf` for the cusp.

mod matrix;
mod parse;
mod surd;

pub use matrix::{product, IntMatrix2};
pub use parse::{parse_ext_real, parse_surd};
pub use surd::{fmt_rational, int, rat, sign_two_radicals, QuadSurd, Rational};

#[cfg(test)]
pub(crate) use surd::big;
pub(crate) use surd::exact_sqrt;

use crate::error::Result;
use num_bigint::BigInt;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// A point of ℝ ∪ {−∞, +∞} with finite part in a real quadratic field.
///
/// Geodesic code treats the cusp as unsigned and always stores it as `PosInf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtReal {
    NegInf,
    Finite(QuadSurd),
    PosInf,
}

impl ExtReal {
    pub fn rational(r: Rational) -> Self {
        ExtReal::Finite(QuadSurd::rational(r))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        ExtReal::rational(rat(p, q))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(&self) -> Option<&QuadSurd> {
        match self {
            ExtReal::Finite(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.finite().and_then(|s| s.as_rational())
    }

    /// Radicand of the finite part (zero for rationals and infinities).
    pub fn radicand(&self) -> BigInt {
        self.finite().map(|s| s.d().clone()).unwrap_or_default()
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::PosInf => f64::INFINITY,
            ExtReal::Finite(s) => s.to_f64(),
        }
    }
}

impl From<QuadSurd> for ExtReal {
    fn from(s: QuadSurd) -> Self {
        ExtReal::Finite(s)
    }
}

impl From<Rational> for ExtReal {
    fn from(r: Rational) -> Self {
        ExtReal::rational(r)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtReal::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::PosInf => f.write_str("inf"),
            ExtReal::Finite(s) => s.fmt(f),
        }
    }
}

impl FromStr for ExtReal {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_ext_real(s)
    }
}

impl FromStr for QuadSurd {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_surd(s)
    }
}

/// `(a·x + b)/(c·x + d)`; a vanishing denominator gives the cusp and `x = ∞` gives `a/c`.
pub fn lft_apply(m: &IntMatrix2, x: &ExtReal) -> Result<ExtReal> {
    m.apply(x)
}

/// The unique integer `n` with `n ≤ x < n + 1`.
pub fn surd_floor(x: &QuadSurd) -> BigInt {
    x.floor()
}

/// Exact total order on the extended line.
pub fn compare(x: &ExtReal, y: &ExtReal) -> Ordering {
    x.cmp(y)
}

/// The transformation `z ↦ (z + 2)/(2z + 1)` that separates hit, miss and corner labels.
pub fn n_matrix() -> IntMatrix2 {
    IntMatrix2::new(1, 2, 2, 1)
}

/// `N(z)` on rationals; `N` has no pole on `[0, ∞)`.
pub fn n_of(z: &Rational) -> Rational {
    n_matrix()
        .apply_rational(z)
        .expect("N has no pole at a non-negative argument")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_examples() {
        assert_eq!(n_of(&rat(1, 2)), rat(5, 4));
        assert_eq!(n_of(&rat(70, 169)), rat(136, 103));
        let id = IntMatrix2::identity();
        assert_eq!(
            lft_apply(&id, &ExtReal::from_ratio(70, 169)).unwrap(),
            ExtReal::from_ratio(70, 169)
        );
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = IntMatrix2::new(1, 2, 2, 4);
        assert!(lft_apply(&m, &ExtReal::from_ratio(1, 3)).is_err());
    }

    #[test]
    fn infinity_conventions() {
        let m = IntMatrix2::new(2, 1, 3, 1);
        assert_eq!(
            m.apply(&ExtReal::PosInf).unwrap(),
            ExtReal::from_ratio(2, 3)
        );
        let t = IntMatrix2::new(1, 1, 0, 1);
        assert_eq!(t.apply(&ExtReal::PosInf).unwrap(), ExtReal::PosInf);
        let s = IntMatrix2::new(0, -1, 1, 0);
        assert_eq!(
            s.apply(&ExtReal::from_ratio(0, 1)).unwrap(),
            ExtReal::PosInf
        );
    }

    #[test]
    fn comparison_examples() {
        let a = ExtReal::from_ratio(4, 3);
        let b = ExtReal::from_ratio(5, 4);
        assert_eq!(compare(&a, &b), Ordering::Greater);
        assert_eq!(compare(&ExtReal::from_ratio(6, 5), &b), Ordering::Less);
        let t: ExtReal = "(1*sqrt(3)-1)/2".parse().unwrap();
        assert_eq!(compare(&t, &t.clone()), Ordering::Equal);
        assert!(ExtReal::NegInf < t && t < ExtReal::PosInf);
    }

    #[test]
    fn floor_examples() {
        assert_eq!(surd_floor(&"5/14".parse().unwrap()), big(0));
        assert_eq!(surd_floor(&"(sqrt(3)-1)/2".parse().unwrap()), big(0));
        assert_eq!(surd_floor(&"-sqrt(13)".parse().unwrap()), big(-4));
    }
}
