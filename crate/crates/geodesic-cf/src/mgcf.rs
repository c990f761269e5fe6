//! Minkowski geodesic continued fractions (MGCF).
//!
//! [`mgcf_direct`] runs Minkowski reduction of the lattice basis `{(1,0), (−θ,t)}` as `t`
//! decreases. [`annotate_ones`] and [`mgcf_from_annotated`] compute the same word from
//! ordinary digits by tagging every digit 1 as hit, miss or corner.

use crate::cf::{convergents, ocf_digits, ConvergentPair, OcfDigits};
use crate::error::{Error, Result};
use crate::exactnum::{n_matrix, ExtReal, IntMatrix2, QuadSurd, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MgcfSym {
    L,
    R,
    J,
    C,
}

impl MgcfSym {
    pub fn matrix(self) -> IntMatrix2 {
        match self {
            MgcfSym::L => IntMatrix2::new(1, 0, 1, -1),
            MgcfSym::R => IntMatrix2::new(1, 0, 1, 1),
            MgcfSym::J => IntMatrix2::new(0, 1, 1, 0),
            MgcfSym::C => IntMatrix2::new(1, 1, 0, 1),
        }
    }

    pub fn letter(self) -> char {
        match self {
            MgcfSym::L => 'L',
            MgcfSym::R => 'R',
            MgcfSym::J => 'J',
            MgcfSym::C => 'C',
        }
    }
}

pub fn fmt_mgcf(w: &[MgcfSym]) -> String {
    w.iter().map(|s| s.letter()).collect()
}

pub fn parse_mgcf(s: &str) -> Result<Vec<MgcfSym>> {
    s.char_indices()
        .map(|(i, c)| match c {
            'L' => Ok(MgcfSym::L),
            'R' => Ok(MgcfSym::R),
            'J' => Ok(MgcfSym::J),
            'C' => Ok(MgcfSym::C),
            _ => Err(Error::parse(i, format!("'{}' is not an MGCF letter", c))),
        })
        .collect()
}

/// Convergent matrix of a word: `A^(n) ⋯ A^(1)`, the product taken right to left.
pub fn mgcf_matrix(w: &[MgcfSym]) -> IntMatrix2 {
    w.iter()
        .fold(IntMatrix2::identity(), |acc, s| &s.matrix() * &acc)
}

/// Number of `L` and `J` symbols mod 2; equals the determinant sign of [`mgcf_matrix`].
pub fn mgcf_parity(w: &[MgcfSym]) -> u8 {
    (w.iter()
        .filter(|s| matches!(s, MgcfSym::L | MgcfSym::J))
        .count()
        % 2) as u8
}

/// Output of the direct reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MgcfExpansion {
    pub word: Vec<MgcfSym>,
    /// Critical values `s_n = t_n²`, one per symbol, strictly decreasing.
    pub critical: Vec<QuadSurd>,
    /// Convergent matrix after each symbol.
    pub matrices: Vec<IntMatrix2>,
    /// True when the reduced basis stays reduced for all smaller `t`.
    pub terminated: bool,
}

/// Lattice state `P·B_t(θ)`; row `i` is `(p_i − q_i θ, q_i t)`.
#[derive(Clone, Debug)]
pub struct ReductionState {
    pub p: IntMatrix2,
    /// Current threshold `s = t²`; `None` stands for `t = ∞`.
    pub s: Option<QuadSurd>,
    theta: QuadSurd,
}

impl ReductionState {
    pub fn new(theta: QuadSurd) -> Self {
        ReductionState {
            p: IntMatrix2::identity(),
            s: None,
            theta,
        }
    }

    fn err(&self, p: &BigInt, q: &BigInt) -> QuadSurd {
        &QuadSurd::from(p.clone()) - &(&QuadSurd::from(q.clone()) * &self.theta)
    }

    /// The `s` at which `‖u‖² = ‖w‖²`, where `u = (e_u, q_u t)` and `w = (e_w, q_w t)` and
    /// `q_w > q_u`; `None` when that equality never occurs for `0 < s` below the threshold.
    fn crossing(&self, eu: &QuadSurd, qu: &BigInt, ew: &QuadSurd, qw: &BigInt) -> Option<QuadSurd> {
        let coeff = qw * qw - qu * qu;
        if !coeff.is_positive() {
            return None;
        }
        let num = &(eu * eu) - &(ew * ew);
        let s = &num / &QuadSurd::from(coeff);
        if s.signum() <= 0 {
            return None;
        }
        match &self.s {
            Some(cur) if s >= *cur => None,
            _ => Some(s),
        }
    }

    /// Advances to the next critical value; `None` when the basis is reduced for all `t`.
    pub fn step(&mut self) -> Option<(MgcfSym, QuadSurd)> {
        let m = &self.p;
        let (p1, q1, p2, q2) = (&m.a, &m.b, &m.c, &m.d);
        let e1 = self.err(p1, q1);
        let e2 = self.err(p2, q2);
        let e_sum = &e1 + &e2;
        let q_sum = q1 + q2;
        let e_diff = &e1 - &e2;
        let q_diff = q1 - q2;

        let j = if q1 < q2 {
            self.crossing(&e1, q1, &e2, q2)
        } else {
            None
        };
        let r = self.crossing(&e2, q2, &e_sum, &q_sum);
        let l = if *q1 > BigInt::from(2) * q2 {
            self.crossing(&e2, q2, &e_diff, &q_diff)
        } else {
            None
        };

        let best = [&j, &r, &l].into_iter().flatten().max()?.clone();
        let hit = |x: &Option<QuadSurd>| x.as_ref() == Some(&best);
        let sym = match (hit(&j), hit(&r), hit(&l)) {
            (true, true, false) => MgcfSym::C,
            (true, false, false) => MgcfSym::J,
            (false, true, false) => MgcfSym::R,
            (false, false, true) => MgcfSym::L,
            other => unreachable!("impossible simultaneous equalities {:?}", other),
        };
        let old = self.p.clone();
        self.p = &sym.matrix() * &old;
        debug_assert!(self.p.is_unimodular());
        // the replaced basis vector must gain a strictly larger denominator
        match sym {
            MgcfSym::J => assert!(self.p.b > old.b),
            MgcfSym::R | MgcfSym::L => assert!(self.p.d > old.d),
            MgcfSym::C => assert!(self.p.b > old.b),
        }
        assert!(!self.p.b.is_negative() && !self.p.d.is_negative());
        self.s = Some(best.clone());
        Some((sym, best))
    }
}

/// MGCF of `θ ∈ [−1/2, 1/2)` by direct lattice reduction, at most `limit` symbols.
pub fn mgcf_direct(theta: &ExtReal, limit: usize) -> Result<MgcfExpansion> {
    let t = theta
        .finite()
        .ok_or_else(|| Error::domain("θ must be finite"))?;
    let half = QuadSurd::rational(Rational::new(1.into(), 2.into()));
    if *t < -&half || *t >= half {
        return Err(Error::domain(format!("θ = {} is outside [−1/2, 1/2)", t)));
    }
    let mut st = ReductionState::new(t.clone());
    let mut out = MgcfExpansion {
        word: Vec::new(),
        critical: Vec::new(),
        matrices: Vec::new(),
        terminated: false,
    };
    while out.word.len() < limit {
        match st.step() {
            Some((sym, s)) => {
                out.word.push(sym);
                out.critical.push(s);
                out.matrices.push(st.p.clone());
            }
            None => {
                out.terminated = true;
                break;
            }
        }
    }
    Ok(out)
}

/// Tag of an ordinary digit 1: the previous convergent is hit, missed, or the geodesic
/// passes through a corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OneTag {
    H,
    M,
    C,
}

impl OneTag {
    pub fn letter(self) -> char {
        match self {
            OneTag::H => 'h',
            OneTag::M => 'm',
            OneTag::C => 'c',
        }
    }
}

/// Ordinary digits in which every digit 1 past `a0` carries a [`OneTag`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedDigits {
    pub a0: BigInt,
    pub tail: Vec<(u64, Option<OneTag>)>,
    pub finite: bool,
}

impl AnnotatedDigits {
    pub fn digits(&self) -> OcfDigits {
        OcfDigits {
            a0: self.a0.clone(),
            tail: self.tail.iter().map(|d| d.0).collect(),
            finite: self.finite,
        }
    }

    /// Parses `0;2,1c,4`.
    pub fn parse(s: &str) -> Result<Self> {
        let (head, rest) = match s.find(';') {
            Some(i) => (&s[..i], Some((i + 1, &s[i + 1..]))),
            None => (s, None),
        };
        let a0: BigInt = head
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, "expected integer a0"))?;
        let mut tail = Vec::new();
        if let Some((mut off, rest)) = rest {
            for tok in rest.split(',') {
                let t = tok.trim();
                let (num, tag) = match t.chars().last() {
                    Some('h') => (&t[..t.len() - 1], Some(OneTag::H)),
                    Some('m') => (&t[..t.len() - 1], Some(OneTag::M)),
                    Some('c') => (&t[..t.len() - 1], Some(OneTag::C)),
                    _ => (t, None),
                };
                let a: u64 = num
                    .parse()
                    .map_err(|_| Error::parse(off, format!("bad digit '{}'", t)))?;
                if a == 0 || (tag.is_some() && a != 1) {
                    return Err(Error::parse(off, format!("bad digit '{}'", t)));
                }
                tail.push((a, tag));
                off += tok.len() + 1;
            }
        }
        Ok(AnnotatedDigits {
            a0,
            tail,
            finite: true,
        })
    }
}

impl fmt::Display for AnnotatedDigits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.a0)?;
        let toks: Vec<String> = self
            .tail
            .iter()
            .map(|(a, t)| match t {
                Some(t) => format!("{}{}", a, t.letter()),
                None => a.to_string(),
            })
            .collect();
        if !toks.is_empty() {
            write!(f, ";{}", toks.join(","))?;
        }
        if !self.finite {
            f.write_str(",…")?;
        }
        Ok(())
    }
}

/// `α_n = q_{n−1}/q_n` and the tail `β_n = −(p_{n−1} − q_{n−1}θ)/(p_n − q_nθ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneResolutionContext {
    pub alpha: Rational,
    pub beta: QuadSurd,
}

impl OneResolutionContext {
    /// Sign of `β − N(α)`: greater is a hit, equal a corner, less a miss.
    pub fn tag(&self) -> OneTag {
        let n = QuadSurd::rational(crate::exactnum::n_of(&self.alpha));
        match self.beta.cmp(&n) {
            Ordering::Greater => OneTag::H,
            Ordering::Equal => OneTag::C,
            Ordering::Less => OneTag::M,
        }
    }
}

/// Tags every digit 1 of `θ`'s expansion; `a1 = 1` is always a miss.
pub fn annotate_ones(digits: &OcfDigits, theta: &ExtReal) -> Result<AnnotatedDigits> {
    let t = theta
        .finite()
        .ok_or_else(|| Error::domain("θ must be finite"))?;
    let check = ocf_digits(theta, digits.len())?;
    let consistent =
        check.a0 == digits.a0 && check.tail == digits.tail && (check.finite || !digits.finite);
    if !consistent {
        return Err(Error::domain(format!(
            "digits {} do not expand {}",
            digits, theta
        )));
    }
    let conv = convergents(digits);
    let mut tail = Vec::with_capacity(digits.tail.len());
    for (i, &a) in digits.tail.iter().enumerate() {
        // a = a_{n+1} with n = i
        let tag = if a != 1 {
            None
        } else if i == 0 {
            Some(OneTag::M)
        } else {
            Some(one_context(&conv[i], t).tag())
        };
        tail.push((a, tag));
    }
    Ok(AnnotatedDigits {
        a0: digits.a0.clone(),
        tail,
        finite: digits.finite,
    })
}

fn one_context(cur: &ConvergentPair, t: &QuadSurd) -> OneResolutionContext {
    let alpha = Rational::new(cur.q_prev.clone(), cur.q.clone());
    let e = |p: &BigInt, q: &BigInt| &QuadSurd::from(p.clone()) - &(&QuadSurd::from(q.clone()) * t);
    let beta = -(&e(&cur.p_prev, &cur.q_prev) / &e(&cur.p, &cur.q));
    OneResolutionContext { alpha, beta }
}

/// The context of the digit `a_{n+1}` for `n ≥ 1`.
pub fn resolution_context(digits: &OcfDigits, theta: &QuadSurd, n: usize) -> OneResolutionContext {
    let conv = convergents(digits);
    one_context(&conv[n], theta)
}

/// `N(α)` as a rational.
pub fn n_of_alpha(alpha: &Rational) -> Rational {
    n_matrix()
        .apply_rational(alpha)
        .expect("N has no pole on [0, 1)")
}

/// Segment codec from annotated digits to the MGCF word.
///
/// For a non-terminating input the last digit is dropped, since its segment depends on the
/// tag of the digit after it.
pub fn mgcf_from_annotated(ad: &AnnotatedDigits) -> Result<Vec<MgcfSym>> {
    let mut w = vec![MgcfSym::J];
    let mut i = 0;
    let d = &ad.tail;
    if ad.a0 == -BigInt::one() {
        match d.first() {
            Some((1, Some(OneTag::M))) => {}
            _ => return Err(Error::domain("a0 = −1 must be followed by 1m")),
        }
        w.push(MgcfSym::L);
        i = 1;
    } else if !ad.a0.is_zero() {
        return Err(Error::domain("a0 must be 0 or −1"));
    }
    let end = if ad.finite {
        d.len()
    } else {
        d.len().saturating_sub(1)
    };
    let rs =
        |w: &mut Vec<MgcfSym>, k: u64| w.extend(std::iter::repeat(MgcfSym::R).take(k as usize));
    while i < end {
        let (k, tag) = d[i];
        if matches!(tag, Some(OneTag::M) | Some(OneTag::C)) {
            return Err(Error::domain(format!(
                "digit {} tagged {:?} cannot start a segment",
                i + 1,
                tag
            )));
        }
        match d.get(i + 1) {
            Some((1, Some(OneTag::M))) => {
                if !ad.finite && i + 1 >= end {
                    break;
                }
                rs(&mut w, k + 1);
                w.extend([MgcfSym::J, MgcfSym::L]);
                i += 2;
            }
            Some((1, Some(OneTag::C))) => {
                if !ad.finite && i + 1 >= end {
                    break;
                }
                rs(&mut w, k);
                w.push(MgcfSym::C);
                i += 2;
            }
            _ => {
                rs(&mut w, k);
                w.push(MgcfSym::J);
                i += 1;
            }
        }
    }
    Ok(w)
}

/// Inverse of [`mgcf_from_annotated`], parsing greedily left to right.
///
/// A trailing run of `R` with no closing symbol is an incomplete segment; it is dropped and
/// the result is marked non-terminating.
pub fn annotated_from_mgcf(w: &[MgcfSym]) -> Result<AnnotatedDigits> {
    if w.first() != Some(&MgcfSym::J) {
        return Err(Error::parse(0, "an MGCF word starts with J"));
    }
    let mut out = AnnotatedDigits {
        a0: BigInt::zero(),
        tail: Vec::new(),
        finite: true,
    };
    let mut i = 1;
    if w.get(1) == Some(&MgcfSym::L) {
        out.a0 = -BigInt::one();
        out.tail.push((1, Some(OneTag::M)));
        i = 2;
    }
    let head_tag = |k: u64| if k == 1 { Some(OneTag::H) } else { None };
    while i < w.len() {
        let start = i;
        let mut k = 0u64;
        while i < w.len() && w[i] == MgcfSym::R {
            k += 1;
            i += 1;
        }
        if k == 0 {
            return Err(Error::parse(start, "a segment starts with R"));
        }
        match w.get(i) {
            None => {
                out.finite = false;
                break;
            }
            Some(MgcfSym::J) => {
                if w.get(i + 1) == Some(&MgcfSym::L) {
                    if k < 2 {
                        return Err(Error::parse(start, "R J L encodes no digit"));
                    }
                    out.tail.push((k - 1, head_tag(k - 1)));
                    out.tail.push((1, Some(OneTag::M)));
                    i += 2;
                } else {
                    out.tail.push((k, head_tag(k)));
                    i += 1;
                }
            }
            Some(MgcfSym::C) => {
                out.tail.push((k, head_tag(k)));
                out.tail.push((1, Some(OneTag::C)));
                i += 1;
            }
            Some(_) => return Err(Error::parse(i, "unexpected L")),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(s: &str) -> ExtReal {
        s.parse().unwrap()
    }

    fn direct(s: &str) -> String {
        fmt_mgcf(&mgcf_direct(&x(s), 1000).unwrap().word)
    }

    fn via_digits(s: &str) -> String {
        let d = ocf_digits(&x(s), 1000).unwrap();
        fmt_mgcf(&mgcf_from_annotated(&annotate_ones(&d, &x(s)).unwrap()).unwrap())
    }

    #[test]
    fn direct_examples() {
        let e = mgcf_direct(&x("0"), 10).unwrap();
        assert_eq!(fmt_mgcf(&e.word), "J");
        assert!(e.terminated);
        assert_eq!(direct("5/14"), "JRRCRRRRJ");
        let w = direct("1/3");
        assert!(w.starts_with('J') && !w.contains('C'));
        assert_eq!(w, via_digits("1/3"));
        assert!(direct("-1/3").starts_with("JL"));
        assert!(mgcf_direct(&x("1/2"), 10).is_err());
    }

    #[test]
    fn critical_values_decrease() {
        let e = mgcf_direct(&x("(sqrt(3)-1)/2"), 60).unwrap();
        assert_eq!(e.word.len(), 60);
        assert!(e.critical.windows(2).all(|p| p[0] > p[1]));
        assert!(e.critical.iter().all(|s| s.signum() > 0));
    }

    #[test]
    fn annotation_examples() {
        let tag = |s: &str| {
            let d = OcfDigits::parse(s).unwrap();
            let v = ExtReal::rational(d.value().unwrap());
            annotate_ones(&d, &v).unwrap().tail[1].1
        };
        assert_eq!(tag("0;2,1,4"), Some(OneTag::C));
        assert_eq!(tag("0;2,1,3"), Some(OneTag::H));
        assert_eq!(tag("0;2,1,5"), Some(OneTag::M));
        let bad = OcfDigits::parse("0;2,1,5").unwrap();
        assert!(annotate_ones(&bad, &x("5/14")).is_err());
    }

    #[test]
    fn codec_examples() {
        let ad = AnnotatedDigits::parse("0").unwrap();
        assert_eq!(fmt_mgcf(&mgcf_from_annotated(&ad).unwrap()), "J");
        let ad = AnnotatedDigits::parse("0;2,1c,4").unwrap();
        assert_eq!(ad.to_string(), "0;2,1c,4");
        let w = mgcf_from_annotated(&ad).unwrap();
        assert_eq!(fmt_mgcf(&w), "JRRCRRRRJ");
        assert_eq!(annotated_from_mgcf(&w).unwrap(), ad);
        let ad = AnnotatedDigits::parse("-1;1m,3").unwrap();
        assert!(fmt_mgcf(&mgcf_from_annotated(&ad).unwrap()).starts_with("JL"));
        match annotated_from_mgcf(&parse_mgcf("RJ").unwrap()) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn parity_matches_determinant() {
        let e = mgcf_direct(&x("-7/19"), 100).unwrap();
        for n in 1..=e.word.len() {
            let det = mgcf_matrix(&e.word[..n]).det();
            let par = mgcf_parity(&e.word[..n]);
            assert_eq!(det, BigInt::from(if par == 0 { 1 } else { -1 }));
            assert_eq!(mgcf_matrix(&e.word[..n]), e.matrices[n - 1]);
        }
    }
}
