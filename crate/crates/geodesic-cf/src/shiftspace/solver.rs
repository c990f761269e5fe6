//! Exact feasibility of a two-variable model.
//!
//! Each constraint is a bilinear sign condition in `(y, w)`. Its zero set is the graph of a
//! linear fractional map, so between consecutive critical values of `y` (domain ends, poles,
//! crossings with the `w` bounds and pairwise crossings) the feasible `w`-set changes only
//! continuously. One rational sample per open cell plus every critical value decides
//! feasibility; at a fixed `y` the `w`-set is an interval computed exactly.

use super::model::{constraints, Constraint, Model, Rel};
use crate::exactnum::{int, QuadSurd, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Feasible `w` at a fixed `y`: an interval with exact ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WSet {
    pub lo: QuadSurd,
    pub lo_closed: bool,
    pub hi: QuadSurd,
    pub hi_closed: bool,
}

impl WSet {
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

/// How a sampled `y` was chosen.
#[derive(Clone, Debug)]
pub enum YKind {
    /// Inside the open cell `(lo, hi)`; every `y` there behaves alike.
    Cell(QuadSurd, QuadSurd),
    Critical,
    /// A past with no free digits.
    Point {
        initial: bool,
    },
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub y: QuadSurd,
    pub kind: YKind,
    pub w: WSet,
}

fn q(r: &Rational) -> QuadSurd {
    QuadSurd::rational(r.clone())
}

/// Feasible `w` for the given constraints at `y`.
pub fn w_set(m: &Model, cs: &[&Constraint], y: &QuadSurd) -> Option<WSet> {
    let mut s = WSet {
        lo: q(&m.w_lo),
        lo_closed: m.w_lo_closed,
        hi: q(&m.w_hi),
        hi_closed: m.w_hi_closed,
    };
    for c in cs {
        let coef = &(y * &q(&c.a)) + &q(&c.c);
        let cst = &(y * &q(&c.b)) + &q(&c.d);
        let t = coef.signum() * c.sign;
        if t == 0 {
            let v = cst.signum() * c.sign;
            let ok = match c.rel {
                Rel::Greater => v > 0,
                Rel::Less => v < 0,
                Rel::Equal => v == 0,
            };
            if !ok {
                return None;
            }
            continue;
        }
        let r = -(&cst / &coef);
        let above = match c.rel {
            Rel::Greater => Some(t > 0),
            Rel::Less => Some(t < 0),
            Rel::Equal => None,
        };
        match above {
            Some(true) => match r.cmp(&s.lo) {
                Ordering::Greater => {
                    s.lo = r;
                    s.lo_closed = false;
                }
                Ordering::Equal => s.lo_closed = false,
                Ordering::Less => {}
            },
            Some(false) => match r.cmp(&s.hi) {
                Ordering::Less => {
                    s.hi = r;
                    s.hi_closed = false;
                }
                Ordering::Equal => s.hi_closed = false,
                Ordering::Greater => {}
            },
            None => {
                let inside_lo = match r.cmp(&s.lo) {
                    Ordering::Greater => true,
                    Ordering::Equal => s.lo_closed,
                    Ordering::Less => false,
                };
                let inside_hi = match r.cmp(&s.hi) {
                    Ordering::Less => true,
                    Ordering::Equal => s.hi_closed,
                    Ordering::Greater => false,
                };
                if !(inside_lo && inside_hi) {
                    return None;
                }
                s.lo = r.clone();
                s.hi = r;
                s.lo_closed = true;
                s.hi_closed = true;
            }
        }
    }
    match s.lo.cmp(&s.hi) {
        Ordering::Less => Some(s),
        Ordering::Equal if s.lo_closed && s.hi_closed => Some(s),
        _ => None,
    }
}

/// Real roots of `a·y² + b·y + c`.
fn quadratic_roots(a: &Rational, b: &Rational, c: &Rational) -> Vec<QuadSurd> {
    if a.is_zero() {
        if b.is_zero() {
            return vec![];
        }
        return vec![q(&(-c / b))];
    }
    let disc = b * b - int(4) * a * c;
    if disc.is_negative() {
        return vec![];
    }
    let two_a = int(2) * a;
    let u = -b / &two_a;
    if disc.is_zero() {
        return vec![q(&u)];
    }
    // √(p/q) = √(p·q)/q
    let (p, qq) = (disc.numer().clone(), disc.denom().clone());
    let radicand: BigInt = &p * &qq;
    let v = Rational::one() / (&two_a * Rational::from_integer(qq));
    let root = radicand.sqrt();
    if &root * &root == radicand {
        let s = Rational::from_integer(root) * &v;
        return vec![q(&(&u + &s)), q(&(&u - &s))];
    }
    vec![
        QuadSurd::new(u.clone(), v.clone(), radicand.clone()),
        QuadSurd::new(u, -v, radicand),
    ]
}

/// Critical values of `y` strictly inside `(0, y_hi)`, sorted and distinct.
pub fn critical_ys(m: &Model, cs: &[&Constraint]) -> Vec<QuadSurd> {
    let zero = QuadSurd::zero();
    let hi = q(&m.y_hi);
    let mut out: Vec<QuadSurd> = Vec::new();
    let mut push = |v: QuadSurd| {
        if v > zero && v < hi {
            out.push(v);
        }
    };
    let ends = [m.w_lo.clone(), m.w_hi.clone()];
    for c in cs {
        if !c.a.is_zero() {
            push(q(&(-&c.c / &c.a)));
        }
        for w in &ends {
            let k = &c.a * w + &c.b;
            let r = &c.c * w + &c.d;
            for v in quadratic_roots(&Rational::zero(), &k, &r) {
                push(v);
            }
        }
    }
    for (i, ci) in cs.iter().enumerate() {
        for cj in &cs[i + 1..] {
            let a2 = &ci.b * &cj.a - &cj.b * &ci.a;
            let a1 = &ci.b * &cj.c + &ci.d * &cj.a - &cj.b * &ci.c - &cj.d * &ci.a;
            let a0 = &ci.d * &cj.c - &cj.d * &ci.c;
            for v in quadratic_roots(&a2, &a1, &a0) {
                push(v);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The rational with the smallest denominator in the open interval `(lo, hi)`.
pub fn simplest_between(lo: &QuadSurd, hi: &QuadSurd) -> Rational {
    debug_assert!(lo < hi);
    let fl = lo.floor();
    let next = Rational::from_integer(&fl + BigInt::one());
    if q(&next) < *hi {
        return next;
    }
    let base = QuadSurd::rational(Rational::from_integer(fl.clone()));
    let lo_f = lo - &base;
    let hi_f = hi - &base;
    let inner = if lo_f.is_zero() {
        Rational::from_integer(hi_f.recip().floor() + BigInt::one())
    } else {
        simplest_between(&hi_f.recip(), &lo_f.recip())
    };
    Rational::from_integer(fl) + inner.recip()
}

/// All `y` samples needed to decide the model, with their feasible `w`-sets.
pub fn samples(m: &Model, cs: &[&Constraint]) -> Vec<Sample> {
    let mut out = Vec::new();
    for p in &m.points {
        let y = q(&p.y);
        if let Some(w) = w_set(m, cs, &y) {
            out.push(Sample {
                y,
                kind: YKind::Point { initial: p.initial },
                w,
            });
        }
    }
    let crit = critical_ys(m, cs);
    let mut cuts = vec![QuadSurd::zero()];
    cuts.extend(crit.iter().cloned());
    cuts.push(q(&m.y_hi));
    for win in cuts.windows(2) {
        let y = q(&simplest_between(&win[0], &win[1]));
        if let Some(w) = w_set(m, cs, &y) {
            out.push(Sample {
                y,
                kind: YKind::Cell(win[0].clone(), win[1].clone()),
                w,
            });
        }
    }
    for y in crit {
        if let Some(w) = w_set(m, cs, &y) {
            out.push(Sample {
                y,
                kind: YKind::Critical,
                w,
            });
        }
    }
    out
}

/// Result of deciding one model.
#[derive(Clone, Debug)]
pub struct Decision {
    pub samples: Vec<Sample>,
}

impl Decision {
    pub fn feasible(&self) -> bool {
        !self.samples.is_empty()
    }

    pub fn initial(&self) -> bool {
        self.samples
            .iter()
            .any(|s| matches!(s.kind, YKind::Point { initial: true }))
    }
}

pub fn decide(m: &Model) -> Decision {
    let cs = constraints(m);
    let refs: Vec<&Constraint> = cs.iter().collect();
    Decision {
        samples: samples(m, &refs),
    }
}

/// A minimal subset of constraints that is already infeasible.
pub fn conflict(m: &Model) -> Vec<Constraint> {
    let cs = constraints(m);
    let mut keep: Vec<bool> = vec![true; cs.len()];
    for i in 0..cs.len() {
        keep[i] = false;
        let refs: Vec<&Constraint> = cs
            .iter()
            .zip(&keep)
            .filter(|(_, k)| **k)
            .map(|(c, _)| c)
            .collect();
        if !samples(m, &refs).is_empty() {
            keep[i] = true;
        }
    }
    cs.into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(c, _)| c)
        .collect()
}

/// Whether a rational point satisfies every constraint of the model.
pub fn satisfies(m: &Model, y: &Rational, w: &Rational) -> bool {
    let in_y = (y.is_positive() && *y < m.y_hi) || m.points.iter().any(|p| p.y == *y);
    let in_w = (*w > m.w_lo || (m.w_lo_closed && *w == m.w_lo))
        && (*w < m.w_hi || (m.w_hi_closed && *w == m.w_hi));
    if !(in_y && in_w) {
        return false;
    }
    constraints(m).iter().all(|c| {
        let p = &c.a * y * w + &c.b * y + &c.c * w + &c.d;
        let s = match p.cmp(&Rational::zero()) {
            Ordering::Greater => c.sign,
            Ordering::Less => -c.sign,
            Ordering::Equal => 0,
        };
        match c.rel {
            Rel::Greater => s > 0,
            Rel::Less => s < 0,
            Rel::Equal => s == 0,
        }
    })
}
