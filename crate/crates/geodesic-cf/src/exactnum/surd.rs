use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arbitrary-precision rational; always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// `p/q` as a [`Rational`].
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// The integer `n` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Largest trial divisor used when stripping square factors from a radicand.
const SQUARE_STRIP_LIMIT: u64 = 100_000;

/// Exact integer square root if `n` is a perfect square.
pub(crate) fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Writes `d = s² · r` with small square factors moved into `s`.
fn split_square(d: &BigInt) -> (BigInt, BigInt) {
    thread_local! {
        static CACHE: std::cell::RefCell<std::collections::HashMap<BigInt, (BigInt, BigInt)>> =
            Default::default();
    }
    if let Some(hit) = CACHE.with(|c| c.borrow().get(d).cloned()) {
        return hit;
    }
    let out = split_square_uncached(d);
    CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() > 1 << 16 {
            c.clear();
        }
        c.insert(d.clone(), out.clone());
    });
    out
}

fn split_square_uncached(d: &BigInt) -> (BigInt, BigInt) {
    if let Some(s) = exact_sqrt(d) {
        return (s, BigInt::one());
    }
    if let Some(n) = num_traits::ToPrimitive::to_u128(d) {
        let (mut r, mut s) = (n, 1u128);
        let mut p: u64 = 2;
        while p <= SQUARE_STRIP_LIMIT {
            let pp = (p as u128) * (p as u128);
            if pp > r {
                break;
            }
            while r % pp == 0 {
                r /= pp;
                s *= p as u128;
            }
            p += if p == 2 { 1 } else { 2 };
        }
        let (mut s, mut r) = (BigInt::from(s), BigInt::from(r));
        if let Some(t) = exact_sqrt(&r) {
            s *= t;
            r = BigInt::one();
        }
        return (s, r);
    }
    let mut r = d.clone();
    let mut s = BigInt::one();
    let mut p: u64 = 2;
    while p <= SQUARE_STRIP_LIMIT {
        let pb = BigInt::from(p);
        let pp = &pb * &pb;
        if pp > r {
            break;
        }
        while (&r % &pp).is_zero() {
            r /= &pp;
            s *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(t) = exact_sqrt(&r) {
        s *= t;
        r = BigInt::one();
    }
    (s, r)
}

/// Sign of a rational as -1, 0 or 1.
fn rsign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// An element `u + v·√d` of a real quadratic field, or a rational when `v = 0`.
///
/// The radicand is kept free of small square factors and is zero exactly when the
/// value is rational, so `d ∈ {0, 1}` never appears with `v ≠ 0`.
#[derive(Clone, Debug)]
pub struct QuadSurd {
    u: Rational,
    v: Rational,
    d: BigInt,
}

impl QuadSurd {
    pub fn new(u: Rational, v: Rational, d: BigInt) -> Self {
        assert!(!d.is_negative(), "negative radicand");
        if v.is_zero() || d.is_zero() {
            return QuadSurd::rational(u);
        }
        let (s, r) = split_square(&d);
        let v = v * Rational::from_integer(s);
        if r.is_one() {
            QuadSurd::rational(u + v)
        } else {
            QuadSurd { u, v, d: r }
        }
    }

    pub fn rational(u: Rational) -> Self {
        QuadSurd {
            u,
            v: Rational::zero(),
            d: BigInt::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        QuadSurd::rational(int(n))
    }

    /// `√n` for a non-negative integer `n`.
    pub fn sqrt(n: i64) -> Self {
        QuadSurd::new(Rational::zero(), Rational::one(), big(n))
    }

    pub fn zero() -> Self {
        QuadSurd::rational(Rational::zero())
    }

    pub fn one() -> Self {
        QuadSurd::rational(Rational::one())
    }

    pub fn u(&self) -> &Rational {
        &self.u
    }

    pub fn v(&self) -> &Rational {
        &self.v
    }

    /// The radicand; zero for rationals.
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.u)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadSurd {
            u: self.u.clone(),
            v: -&self.v,
            d: self.d.clone(),
        }
    }

    /// Field norm `u² − v²d`.
    pub fn norm(&self) -> Rational {
        &self.u * &self.u - &self.v * &self.v * Rational::from_integer(self.d.clone())
    }

    pub fn recip(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "division by zero");
        let c = self.conj();
        QuadSurd {
            u: c.u / &n,
            v: c.v / &n,
            d: c.d,
        }
    }

    /// Sign of the value as -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        let su = rsign(&self.u);
        let sv = rsign(&self.v);
        if sv == 0 {
            return su;
        }
        if su == 0 || su == sv {
            return sv;
        }
        let u2 = &self.u * &self.u;
        let v2d = &self.v * &self.v * Rational::from_integer(self.d.clone());
        if u2 > v2d {
            su
        } else {
            sv
        }
    }

    /// The unique integer `n` with `n ≤ self < n + 1`.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.u.floor().to_integer();
        }
        let t = &self.v * &self.v * Rational::from_integer(self.d.clone());
        let root = (t.numer() * t.denom()).sqrt() / t.denom();
        let w = if self.v.is_positive() {
            root
        } else {
            -root - 1
        };
        let mut n = self.u.floor().to_integer() + w;
        loop {
            let lo = QuadSurd::rational(Rational::from_integer(n.clone()));
            if *self < lo {
                n -= 1;
                continue;
            }
            let hi = QuadSurd::rational(Rational::from_integer(&n + 1));
            if *self >= hi {
                n += 1;
                continue;
            }
            return n;
        }
    }

    /// Brings two values onto one radicand if their fields coincide.
    fn align(a: &QuadSurd, b: &QuadSurd) -> Option<(BigInt, Rational, Rational)> {
        if a.v.is_zero() {
            return Some((b.d.clone(), Rational::zero(), b.v.clone()));
        }
        if b.v.is_zero() || a.d == b.d {
            return Some((a.d.clone(), a.v.clone(), b.v.clone()));
        }
        let s = exact_sqrt(&(&a.d * &b.d))?;
        // √a = (s / b) · √b
        let va = &a.v * Rational::new(s, b.d.clone());
        Some((b.d.clone(), va, b.v.clone()))
    }

    fn combine(a: &QuadSurd, b: &QuadSurd) -> (BigInt, Rational, Rational) {
        QuadSurd::align(a, b).unwrap_or_else(|| {
            panic!(
                "arithmetic across distinct radicands {} and {} is not supported",
                a.d, b.d
            )
        })
    }

    /// Exact comparison, including values from different quadratic fields.
    pub fn cmp_value(&self, other: &QuadSurd) -> Ordering {
        let s = match QuadSurd::align(self, other) {
            Some(_) => (self - other).signum(),
            None => sign_two_radicals(
                &(&self.u - &other.u),
                &self.v,
                &self.d,
                &(-&other.v),
                &other.d,
            ),
        };
        s.cmp(&0)
    }

    /// Approximate float, for rendering only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let u = self.u.to_f64().unwrap_or(f64::NAN);
        if self.v.is_zero() {
            return u;
        }
        let v = self.v.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        u + v * d.sqrt()
    }
}

/// Sign of `x + y√a + z√b` where `√a` and `√b` span independent fields.
pub fn sign_two_radicals(x: &Rational, y: &Rational, a: &BigInt, z: &Rational, b: &BigInt) -> i8 {
    let ra = Rational::from_integer(a.clone());
    let rb = Rational::from_integer(b.clone());
    let (sy, sz) = (rsign(y), rsign(z));
    let y2a = y * y * &ra;
    let z2b = z * z * &rb;
    let sw = if sy == 0 {
        sz
    } else if sz == 0 || sy == sz {
        sy
    } else if y2a > z2b {
        sy
    } else {
        sz
    };
    let sx = rsign(x);
    if sw == 0 {
        return sx;
    }
    if sx == 0 || sx == sw {
        return sw;
    }
    // x and w have opposite signs: compare x² with w² = y²a + z²b + 2yz√(ab).
    let p = x * x - &y2a - &z2b;
    let q = -(y * z * int(2));
    let diff = QuadSurd::new(p, q, a * b).signum();
    if diff > 0 {
        sx
    } else {
        sw
    }
}

impl PartialEq for QuadSurd {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl Eq for QuadSurd {}

impl std::hash::Hash for QuadSurd {
    // equal values always share their rational part, whatever the radicand representation
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.u.hash(state);
    }
}

impl PartialOrd for QuadSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

impl From<Rational> for QuadSurd {
    fn from(r: Rational) -> Self {
        QuadSurd::rational(r)
    }
}

impl From<i64> for QuadSurd {
    fn from(n: i64) -> Self {
        QuadSurd::from_int(n)
    }
}

impl From<BigInt> for QuadSurd {
    fn from(n: BigInt) -> Self {
        QuadSurd::rational(Rational::from_integer(n))
    }
}

impl Neg for &QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd {
            u: -&self.u,
            v: -&self.v,
            d: self.d.clone(),
        }
    }
}

impl Neg for QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        -&self
    }
}

impl Add for &QuadSurd {
    type Output = QuadSurd;
    fn add(self, o: &QuadSurd) -> QuadSurd {
        let (d, va, vb) = QuadSurd::combine(self, o);
        QuadSurd::new(&self.u + &o.u, va + vb, d)
    }
}

impl Sub for &QuadSurd {
    type Output = QuadSurd;
    fn sub(self, o: &QuadSurd) -> QuadSurd {
        let (d, va, vb) = QuadSurd::combine(self, o);
        QuadSurd::new(&self.u - &o.u, va - vb, d)
    }
}

impl Mul for &QuadSurd {
    type Output = QuadSurd;
    fn mul(self, o: &QuadSurd) -> QuadSurd {
        let (d, va, vb) = QuadSurd::combine(self, o);
        let rd = Rational::from_integer(d.clone());
        QuadSurd::new(
            &self.u * &o.u + &va * &vb * rd,
            &self.u * &vb + &va * &o.u,
            d,
        )
    }
}

impl Div for &QuadSurd {
    type Output = QuadSurd;
    fn div(self, o: &QuadSurd) -> QuadSurd {
        self * &o.recip()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadSurd {
            type Output = QuadSurd;
            fn $m(self, o: QuadSurd) -> QuadSurd {
                (&self).$m(&o)
            }
        }
        impl $tr<&QuadSurd> for QuadSurd {
            type Output = QuadSurd;
            fn $m(self, o: &QuadSurd) -> QuadSurd {
                (&self).$m(o)
            }
        }
        impl $tr<QuadSurd> for &QuadSurd {
            type Output = QuadSurd;
            fn $m(self, o: QuadSurd) -> QuadSurd {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

/// Formats a rational as `n` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return f.write_str(&fmt_rational(&self.u));
        }
        let w = self.u.denom().lcm(self.v.denom());
        let uu = (&self.u * Rational::from_integer(w.clone())).to_integer();
        let vv = (&self.v * Rational::from_integer(w.clone())).to_integer();
        let mut s = String::from("(");
        if !uu.is_zero() {
            s.push_str(&uu.to_string());
            s.push(if vv.is_negative() { '-' } else { '+' });
        } else if vv.is_negative() {
            s.push('-');
        }
        s.push_str(&format!("{}*sqrt({}))", vv.abs(), self.d));
        if !w.is_one() {
            s.push_str(&format!("/{}", w));
        }
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_factors_move_out_of_the_radicand() {
        let x = QuadSurd::sqrt(12);
        assert_eq!(x.d(), &big(3));
        assert_eq!(x.v(), &int(2));
        assert!(QuadSurd::sqrt(49).is_rational());
    }

    #[test]
    fn sign_of_mixed_terms() {
        // 7 - 4√3 > 0 since 49 > 48
        let x = QuadSurd::new(int(7), int(-4), big(3));
        assert_eq!(x.signum(), 1);
        // 6 - 4√3 < 0
        let y = QuadSurd::new(int(6), int(-4), big(3));
        assert_eq!(y.signum(), -1);
    }

    #[test]
    fn mixed_radicand_comparison() {
        let s = sign_two_radicals(&int(0), &int(1), &big(2), &int(1), &big(3));
        assert_eq!(s, 1);
        // 1 + √2 - √6: 1 + 1.414 - 2.449 < 0
        let s = sign_two_radicals(&int(1), &int(1), &big(2), &int(-1), &big(6));
        assert_eq!(s, -1);
        // 2 + √2 - √6 > 0
        let s = sign_two_radicals(&int(2), &int(1), &big(2), &int(-1), &big(6));
        assert_eq!(s, 1);
        assert!(QuadSurd::sqrt(5) > QuadSurd::sqrt(3));
        assert!(QuadSurd::new(int(1), int(1), big(2)) < QuadSurd::sqrt(6));
    }

    #[test]
    fn floor_examples() {
        assert_eq!(QuadSurd::rational(rat(5, 14)).floor(), big(0));
        let t = QuadSurd::new(rat(-1, 2), rat(1, 2), big(3));
        assert_eq!(t.floor(), big(0));
        assert_eq!((-QuadSurd::sqrt(13)).floor(), big(-4));
        assert_eq!(QuadSurd::rational(rat(-7, 2)).floor(), big(-4));
    }

    #[test]
    fn reciprocal_and_display() {
        let t = QuadSurd::new(rat(-1, 2), rat(1, 2), big(3));
        assert_eq!(t.to_string(), "(-1+1*sqrt(3))/2");
        let r = t.recip();
        // 2/(√3−1) = √3 + 1
        assert_eq!(r, QuadSurd::new(int(1), int(1), big(3)));
        assert_eq!(&r * &t, QuadSurd::one());
    }
}
