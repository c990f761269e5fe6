//! Ordinary, additive and Farey-tree continued fractions.
//!
//! The additive (ACF) word of `x > 0` is `R^{a0} F R^{a1} F …` over
//! `R = [[1,1],[0,1]]`, `F = [[0,1],[1,0]]`; the Farey word is `R^{a0} D^{a1} R^{a2} …`
//! with `D = [[1,0],[1,1]]`. A terminating expansion ends its word after the last
//! digit; there is no infinite-tail convention.

use crate::error::{Error, Result};
use crate::exactnum::{ExtReal, IntMatrix2, QuadSurd, Rational};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

/// Ordinary continued fraction digits `[a0; a1, a2, …]`.
///
/// A terminating expansion is canonical: it never ends in a digit 1 unless it is `[1]`.
/// The floor algorithm already produces the normalized negative form
/// `[−1; 1, a1 − 1, a2, …]` for `θ ∈ (−1/2, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OcfDigits {
    pub a0: BigInt,
    pub tail: Vec<u64>,
    /// True when the expansion terminates after the last stored digit.
    pub finite: bool,
}

impl OcfDigits {
    pub fn new(a0: i64, tail: &[u64]) -> Self {
        OcfDigits::from_parts(BigInt::from(a0), tail.to_vec(), true)
    }

    /// Builds a terminating expansion, folding a trailing `…, a, 1` into `…, a + 1`.
    pub fn from_parts(a0: BigInt, mut tail: Vec<u64>, finite: bool) -> Self {
        if finite {
            while tail.last() == Some(&1) {
                tail.pop();
                match tail.last_mut() {
                    Some(a) => *a += 1,
                    None => {
                        return OcfDigits {
                            a0: a0 + 1,
                            tail,
                            finite,
                        }
                    }
                }
            }
        }
        OcfDigits { a0, tail, finite }
    }

    /// Number of digits including `a0`.
    pub fn len(&self) -> usize {
        1 + self.tail.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Digit `a_n`, with `a_0` at index 0.
    pub fn digit(&self, n: usize) -> BigInt {
        if n == 0 {
            self.a0.clone()
        } else {
            BigInt::from(self.tail[n - 1])
        }
    }

    /// The matrix `∏ [[a_k, 1], [1, 0]]` over all stored digits.
    pub fn matrix(&self) -> IntMatrix2 {
        convergents(self)
            .last()
            .map(|c| c.matrix())
            .expect("at least one digit")
    }

    /// Exact value of a terminating expansion.
    pub fn value(&self) -> Option<Rational> {
        if !self.finite {
            return None;
        }
        let m = self.matrix();
        Some(Rational::new(m.a, m.c))
    }

    /// Parses `a0;a1,a2,…`, `a0,a1,…` or a single integer.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = match s.find(';') {
            Some(i) => (&s[..i], Some((i + 1, &s[i + 1..]))),
            None => match s.find(',') {
                Some(i) => (&s[..i], Some((i + 1, &s[i + 1..]))),
                None => (s, None),
            },
        };
        let a0: BigInt = head
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, "expected integer a0"))?;
        let mut tail = Vec::new();
        if let Some((start, rest)) = rest {
            let mut off = start;
            for tok in rest.split(',') {
                let t = tok.trim();
                let a: u64 = t
                    .parse()
                    .map_err(|_| Error::parse(off, format!("bad digit '{}'", t)))?;
                if a == 0 {
                    return Err(Error::parse(off, "partial quotients must be positive"));
                }
                tail.push(a);
                off += tok.len() + 1;
            }
        }
        Ok(OcfDigits::from_parts(a0, tail, true))
    }
}

impl fmt::Display for OcfDigits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.a0)?;
        if !self.tail.is_empty() {
            let t: Vec<String> = self.tail.iter().map(|a| a.to_string()).collect();
            write!(f, ";{}", t.join(","))?;
        }
        if !self.finite {
            f.write_str(",…")?;
        }
        Ok(())
    }
}

/// Lazy floor-algorithm digits of a finite value; yields `a0` first.
#[derive(Clone, Debug)]
pub struct OcfStream {
    x: Option<QuadSurd>,
}

impl OcfStream {
    pub fn new(x: &QuadSurd) -> Self {
        OcfStream { x: Some(x.clone()) }
    }

    /// The current complete quotient, or `None` once the expansion has terminated.
    pub fn remainder(&self) -> Option<&QuadSurd> {
        self.x.as_ref()
    }
}

impl Iterator for OcfStream {
    type Item = BigInt;
    fn next(&mut self) -> Option<BigInt> {
        let x = self.x.take()?;
        let a = x.floor();
        let frac = &x - &QuadSurd::from(a.clone());
        if !frac.is_zero() {
            self.x = Some(frac.recip());
        }
        Some(a)
    }
}

fn finite_arg(x: &ExtReal) -> Result<&QuadSurd> {
    x.finite()
        .ok_or_else(|| Error::domain("continued fraction of an infinite value"))
}

fn to_digit(a: &BigInt) -> Result<u64> {
    a.to_u64()
        .ok_or_else(|| Error::domain(format!("partial quotient {} exceeds 64 bits", a)))
}

/// The first `limit` digits (counting `a0`) of the ordinary continued fraction of `x`.
pub fn ocf_digits(x: &ExtReal, limit: usize) -> Result<OcfDigits> {
    if limit == 0 {
        return Err(Error::domain("limit must be at least 1"));
    }
    let mut s = OcfStream::new(finite_arg(x)?);
    let a0 = s.next().expect("first digit always exists");
    let mut tail = Vec::new();
    while 1 + tail.len() < limit {
        match s.next() {
            Some(a) => tail.push(to_digit(&a)?),
            None => break,
        }
    }
    let finite = s.remainder().is_none();
    Ok(OcfDigits { a0, tail, finite })
}

/// A purely periodic tail detected in a surd expansion: `x = [pre; (period)^∞]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicOcf {
    pub pre: OcfDigits,
    pub period: Vec<u64>,
}

/// Detects the eventual period of a quadratic irrational by exact recurrence of a
/// complete quotient, giving up after `limit` digits.
pub fn ocf_period(x: &QuadSurd, limit: usize) -> Result<PeriodicOcf> {
    if x.is_rational() {
        return Err(Error::domain("rational numbers have no period"));
    }
    let mut s = OcfStream::new(x);
    let a0 = s.next().expect("first digit always exists");
    // complete quotients x_1, x_2, …; seen[i] is x_{i+1} and digits[i] is a_{i+1}
    let mut seen: Vec<QuadSurd> = Vec::new();
    let mut digits: Vec<u64> = Vec::new();
    while digits.len() < limit {
        let xi = s.remainder().cloned().expect("irrational never terminates");
        if let Some(j) = seen.iter().position(|y| *y == xi) {
            return Ok(PeriodicOcf {
                pre: OcfDigits {
                    a0,
                    tail: digits[..j].to_vec(),
                    finite: false,
                },
                period: digits[j..].to_vec(),
            });
        }
        seen.push(xi);
        digits.push(to_digit(&s.next().expect("irrational never terminates"))?);
    }
    Err(Error::Budget(format!("no period within {} digits", limit)))
}

impl PeriodicOcf {
    /// Exact value of `[pre; (period)^∞]`.
    pub fn value(&self) -> QuadSurd {
        let m = OcfDigits {
            a0: BigInt::from(self.period[0]),
            tail: self.period[1..].to_vec(),
            finite: false,
        }
        .matrix();
        // y = (a y + b)/(c y + d)  ⇒  c y² + (d − a) y − b = 0, take the root y > 1
        let (a, b, c, d) = (&m.a, &m.b, &m.c, &m.d);
        let disc = (a - d) * (a - d) + BigInt::from(4) * b * c;
        let two_c = Rational::from_integer(BigInt::from(2) * c);
        let y = QuadSurd::new(
            Rational::from_integer(a - d) / &two_c,
            Rational::one() / &two_c,
            disc,
        );
        let pm = self.pre.matrix();
        match pm.apply_unchecked(&ExtReal::Finite(y)) {
            ExtReal::Finite(v) => v,
            _ => unreachable!("a periodic continued fraction is finite"),
        }
    }
}

/// `p_n, q_n, p_{n−1}, q_{n−1}` for one prefix of an expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentPair {
    pub p: BigInt,
    pub q: BigInt,
    pub p_prev: BigInt,
    pub q_prev: BigInt,
}

impl ConvergentPair {
    /// `[[p_n, p_{n−1}], [q_n, q_{n−1}]]`.
    pub fn matrix(&self) -> IntMatrix2 {
        IntMatrix2::from_big(
            self.p.clone(),
            self.p_prev.clone(),
            self.q.clone(),
            self.q_prev.clone(),
        )
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.p.clone(), self.q.clone())
    }
}

/// All convergent pairs of the stored digits; element `n` covers `a_0 … a_n`.
pub fn convergents(digits: &OcfDigits) -> Vec<ConvergentPair> {
    let mut out = Vec::with_capacity(digits.len());
    let (mut p, mut q) = (BigInt::one(), BigInt::zero());
    let (mut pp, mut qp) = (BigInt::zero(), BigInt::one());
    for n in 0..digits.len() {
        let a = digits.digit(n);
        let np = &a * &p + &pp;
        let nq = &a * &q + &qp;
        pp = std::mem::replace(&mut p, np);
        qp = std::mem::replace(&mut q, nq);
        out.push(ConvergentPair {
            p: p.clone(),
            q: q.clone(),
            p_prev: pp.clone(),
            q_prev: qp.clone(),
        });
    }
    out
}

/// Letters of additive continued fractions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AcfSym {
    F,
    R,
}

/// Letters of Farey-tree expansions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FareySym {
    R,
    D,
}

impl AcfSym {
    pub fn matrix(self) -> IntMatrix2 {
        match self {
            AcfSym::F => IntMatrix2::new(0, 1, 1, 0),
            AcfSym::R => IntMatrix2::new(1, 1, 0, 1),
        }
    }
}

impl FareySym {
    pub fn matrix(self) -> IntMatrix2 {
        match self {
            FareySym::R => IntMatrix2::new(1, 1, 0, 1),
            FareySym::D => IntMatrix2::new(1, 0, 1, 1),
        }
    }
}

/// Lazy ACF stream `R^{a0} F R^{a1} F …` of a positive value.
#[derive(Clone, Debug)]
pub struct AcfStream {
    digits: OcfStream,
    pending_r: u64,
    pending_f: bool,
}

impl Iterator for AcfStream {
    type Item = AcfSym;
    fn next(&mut self) -> Option<AcfSym> {
        loop {
            if self.pending_r > 0 {
                self.pending_r -= 1;
                return Some(AcfSym::R);
            }
            if self.pending_f {
                self.pending_f = false;
                return Some(AcfSym::F);
            }
            let a = self.digits.next()?;
            self.pending_r = a.to_u64().expect("partial quotient fits in 64 bits");
            self.pending_f = true;
        }
    }
}

fn positive_arg(x: &ExtReal) -> Result<&QuadSurd> {
    let s = finite_arg(x)?;
    if s.signum() <= 0 {
        return Err(Error::domain("additive and Farey expansions need x > 0"));
    }
    Ok(s)
}

/// ACF word of `x > 0`.
pub fn acf_of(x: &ExtReal) -> Result<AcfStream> {
    Ok(AcfStream {
        digits: OcfStream::new(positive_arg(x)?),
        pending_r: 0,
        pending_f: false,
    })
}

/// Lazy Farey stream `R^{a0} D^{a1} R^{a2} …` of a positive value.
#[derive(Clone, Debug)]
pub struct FareyStream {
    digits: OcfStream,
    index: usize,
    pending: u64,
    letter: FareySym,
}

impl Iterator for FareyStream {
    type Item = FareySym;
    fn next(&mut self) -> Option<FareySym> {
        while self.pending == 0 {
            let a = self.digits.next()?;
            self.pending = a.to_u64().expect("partial quotient fits in 64 bits");
            self.letter = if self.index % 2 == 0 {
                FareySym::R
            } else {
                FareySym::D
            };
            self.index += 1;
        }
        self.pending -= 1;
        Some(self.letter)
    }
}

/// Farey word of `x > 0`.
pub fn farey_of(x: &ExtReal) -> Result<FareyStream> {
    Ok(FareyStream {
        digits: OcfStream::new(positive_arg(x)?),
        index: 0,
        pending: 0,
        letter: FareySym::R,
    })
}

/// ACF → Farey by the two-state machine: `F` flips the state silently, `R` prints
/// `R` in state +1 and `D` in state −1.
pub fn acf_to_farey(w: &[AcfSym]) -> Vec<FareySym> {
    let mut plus = true;
    let mut out = Vec::with_capacity(w.len());
    for &s in w {
        match s {
            AcfSym::F => plus = !plus,
            AcfSym::R => out.push(if plus { FareySym::R } else { FareySym::D }),
        }
    }
    out
}

/// Farey → ACF by `D ↦ F R F` followed by cancellation of adjacent `F F`.
pub fn farey_to_acf(w: &[FareySym]) -> Vec<AcfSym> {
    let mut out = Vec::with_capacity(w.len() * 3);
    for &s in w {
        match s {
            FareySym::R => out.push(AcfSym::R),
            FareySym::D => out.extend([AcfSym::F, AcfSym::R, AcfSym::F]),
        }
    }
    reduce_acf(&out)
}

/// Removes adjacent `F F` pairs.
pub fn reduce_acf(w: &[AcfSym]) -> Vec<AcfSym> {
    let mut out: Vec<AcfSym> = Vec::with_capacity(w.len());
    for &s in w {
        if s == AcfSym::F && out.last() == Some(&AcfSym::F) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    out
}

/// Product of the letter matrices of an ACF word.
pub fn acf_matrix(w: &[AcfSym]) -> IntMatrix2 {
    w.iter()
        .fold(IntMatrix2::identity(), |acc, s| &acc * &s.matrix())
}

/// Product of the letter matrices of a Farey word.
pub fn farey_matrix(w: &[FareySym]) -> IntMatrix2 {
    w.iter()
        .fold(IntMatrix2::identity(), |acc, s| &acc * &s.matrix())
}

/// ACF word of a digit sequence; every digit, including the last, is followed by `F`.
pub fn acf_of_digits(d: &OcfDigits) -> Result<Vec<AcfSym>> {
    let a0 = to_digit(&d.a0).map_err(|_| Error::domain("additive expansions need a0 ≥ 0"))?;
    let mut out = Vec::new();
    for a in std::iter::once(a0).chain(d.tail.iter().copied()) {
        out.extend(std::iter::repeat(AcfSym::R).take(a as usize));
        out.push(AcfSym::F);
    }
    Ok(out)
}

/// Reads OCF digits back from an ACF word: runs of `R` separated by `F`.
pub fn digits_of_acf(w: &[AcfSym]) -> Vec<u64> {
    let mut out = vec![0u64];
    for &s in w {
        match s {
            AcfSym::R => *out.last_mut().expect("nonempty") += 1,
            AcfSym::F => out.push(0),
        }
    }
    if out.len() > 1 && *out.last().expect("nonempty") == 0 {
        out.pop();
    }
    out
}

pub fn fmt_acf(w: &[AcfSym]) -> String {
    w.iter()
        .map(|s| match s {
            AcfSym::F => 'F',
            AcfSym::R => 'R',
        })
        .collect()
}

pub fn fmt_farey(w: &[FareySym]) -> String {
    w.iter()
        .map(|s| match s {
            FareySym::R => 'R',
            FareySym::D => 'D',
        })
        .collect()
}

pub fn parse_acf(s: &str) -> Result<Vec<AcfSym>> {
    s.char_indices()
        .map(|(i, c)| match c {
            'F' => Ok(AcfSym::F),
            'R' => Ok(AcfSym::R),
            _ => Err(Error::parse(i, format!("'{}' is not an ACF letter", c))),
        })
        .collect()
}

pub fn parse_farey(s: &str) -> Result<Vec<FareySym>> {
    s.char_indices()
        .map(|(i, c)| match c {
            'R' => Ok(FareySym::R),
            'D' => Ok(FareySym::D),
            _ => Err(Error::parse(i, format!("'{}' is not a Farey letter", c))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn x(s: &str) -> ExtReal {
        s.parse().unwrap()
    }

    #[test]
    fn digits_of_rationals() {
        assert_eq!(
            ocf_digits(&x("5/14"), 20).unwrap(),
            OcfDigits::new(0, &[2, 1, 4])
        );
        assert_eq!(ocf_digits(&x("0"), 20).unwrap(), OcfDigits::new(0, &[]));
        assert_eq!(ocf_digits(&x("3/2"), 20).unwrap(), OcfDigits::new(1, &[2]));
        assert!(ocf_digits(&ExtReal::PosInf, 5).is_err());
    }

    #[test]
    fn negative_values_use_the_normalized_form() {
        // −5/14 = [−1; 1, 1, 1, 4]
        let d = ocf_digits(&x("-5/14"), 20).unwrap();
        assert_eq!(d, OcfDigits::new(-1, &[1, 1, 1, 4]));
        assert_eq!(d.value(), Some(rat(-5, 14)));
    }

    #[test]
    fn digits_of_a_surd() {
        let d = ocf_digits(&x("(sqrt(3)-1)/2"), 7).unwrap();
        assert_eq!(d.a0, BigInt::zero());
        assert_eq!(d.tail, vec![2, 1, 2, 1, 2, 1]);
        assert!(!d.finite);
    }

    #[test]
    fn canonical_form_folds_a_trailing_one() {
        assert_eq!(
            OcfDigits::parse("0;2,1,3,1").unwrap(),
            OcfDigits::new(0, &[2, 1, 4])
        );
        assert_eq!(OcfDigits::parse("1").unwrap().tail, Vec::<u64>::new());
        assert_eq!(OcfDigits::parse("0;1").unwrap(), OcfDigits::new(1, &[]));
        assert_eq!(OcfDigits::new(0, &[2, 1, 4]).to_string(), "0;2,1,4");
    }

    #[test]
    fn convergent_examples() {
        let c = convergents(&OcfDigits::new(1, &[2]));
        assert_eq!(c.last().unwrap().matrix(), IntMatrix2::new(3, 1, 2, 1));
        let c = convergents(&OcfDigits::new(0, &[]));
        assert_eq!(c[0].matrix(), IntMatrix2::new(0, 1, 1, 0));
        let c = convergents(&OcfDigits::new(0, &[2, 1, 4]));
        let v: Vec<Rational> = c.iter().map(|p| p.value()).collect();
        assert_eq!(v, vec![rat(0, 1), rat(1, 2), rat(1, 3), rat(5, 14)]);
    }

    #[test]
    fn additive_and_farey_examples() {
        let w: Vec<_> = acf_of(&x("3/2")).unwrap().collect();
        assert_eq!(fmt_acf(&w), "RFRRF");
        let f: Vec<_> = farey_of(&x("3/2")).unwrap().collect();
        assert_eq!(fmt_farey(&f), "RDD");
        let f: Vec<_> = farey_of(&x("1")).unwrap().collect();
        assert_eq!(fmt_farey(&f), "R");
        assert!(acf_of(&x("-1/3")).is_err());
        assert_eq!(acf_matrix(&w), IntMatrix2::new(3, 1, 2, 1));
    }

    #[test]
    fn conversion_examples() {
        assert_eq!(
            fmt_farey(&acf_to_farey(&parse_acf("RFRRF").unwrap())),
            "RDD"
        );
        assert!(acf_to_farey(&[]).is_empty());
        assert_eq!(fmt_farey(&acf_to_farey(&parse_acf("FRF").unwrap())), "D");
        assert_eq!(fmt_acf(&farey_to_acf(&parse_farey("D").unwrap())), "FRF");
        assert_eq!(
            fmt_acf(&farey_to_acf(&parse_farey("RDD").unwrap())),
            "RFRRF"
        );
    }

    #[test]
    fn period_detection() {
        let t: QuadSurd = "(sqrt(3)-1)/2".parse().unwrap();
        let p = ocf_period(&t, 50).unwrap();
        assert_eq!(
            p.pre,
            OcfDigits {
                a0: BigInt::zero(),
                tail: vec![],
                finite: false
            }
        );
        assert_eq!(p.period, vec![2, 1]);
        assert_eq!(p.value(), t);
        let s: QuadSurd = "sqrt(13)".parse().unwrap();
        let p = ocf_period(&s, 50).unwrap();
        assert_eq!(p.period, vec![1, 1, 1, 1, 6]);
        assert_eq!(p.value(), s);
    }
}
