//! Constraint models of a cutting block.
//!
//! A block read in a fixed parity becomes a run of exact digits `e₁ … e_r` between a free
//! past `y = α₀ = [0; a_n, a_{n−1}, …]` and a free future `z = β_r`. Every tagged 1 and every
//! segment start that may be a 1 contributes one comparison `β_j ⋚ N(α_j)`.

use crate::cutting::{mgcf_from_cutting_parity, CutSym};
use crate::exactnum::{int, rat, IntMatrix2, Rational};
use crate::mgcf::MgcfSym;
use num_traits::{One, Zero};
use std::fmt;

/// Required sign of `β_j − N(α_j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Greater,
    Equal,
    Less,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Greater => ">",
            Rel::Equal => "=",
            Rel::Less => "<",
        }
    }
}

/// A value of `y` at an end of its range, realized by a past with no free digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PastPoint {
    pub y: Rational,
    /// The block starts at the first symbol of a vertical expansion.
    pub initial: bool,
}

/// One reading of a block.
#[derive(Clone, Debug)]
pub struct Model {
    pub parity: u8,
    pub letters: Vec<MgcfSym>,
    /// `y` ranges over `(0, y_hi)`.
    pub y_hi: Rational,
    pub points: Vec<PastPoint>,
    pub digits: Vec<u64>,
    /// `rels[j]` constrains the boundary after `j` exact digits.
    pub rels: Vec<Option<Rel>>,
    pub w_lo: Rational,
    pub w_lo_closed: bool,
    pub w_hi: Rational,
    pub w_hi_closed: bool,
}

impl Model {
    /// `α_j` as a transformation of `y`.
    pub fn alpha_matrix(&self, j: usize) -> IntMatrix2 {
        self.digits[..j]
            .iter()
            .fold(IntMatrix2::identity(), |acc, &e| {
                &IntMatrix2::new(0, 1, 1, e as i64) * &acc
            })
    }

    /// `β_j` as a transformation of `w = 1/z`.
    pub fn beta_matrix(&self, j: usize) -> IntMatrix2 {
        self.digits[j..]
            .iter()
            .rev()
            .fold(IntMatrix2::new(0, 1, 1, 0), |acc, &e| {
                &IntMatrix2::new(e as i64, 1, 1, 0) * &acc
            })
    }

    pub fn constraints(&self) -> impl Iterator<Item = (usize, Rel)> + '_ {
        self.rels
            .iter()
            .enumerate()
            .filter_map(|(j, r)| r.map(|r| (j, r)))
    }

    pub fn reading(&self) -> String {
        self.letters.iter().map(|s| s.letter()).collect()
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hi = crate::exactnum::fmt_rational(&self.y_hi);
        write!(f, "y∈(0,{})", hi)?;
        for (j, e) in self.digits.iter().enumerate() {
            match self.rels[j] {
                Some(r) => write!(f, " {} {}", r.symbol(), e)?,
                None => write!(f, " | {}", e)?,
            }
        }
        if let Some(r) = self.rels[self.digits.len()] {
            write!(f, " {}", r.symbol())?;
        }
        let lo = if self.w_lo_closed { "[" } else { "(" };
        let hi = if self.w_hi_closed { "]" } else { ")" };
        write!(
            f,
            " z: 1/z∈{}{},{}{}",
            lo,
            crate::exactnum::fmt_rational(&self.w_lo),
            crate::exactnum::fmt_rational(&self.w_hi),
            hi
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Close {
    J,
    JL,
    C,
    /// `J` as the last letter of the block: the `L` of `JL` may follow.
    JEnd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Head {
    J,
    JL,
    L,
    C,
    Run(u64, Close),
}

#[derive(Clone, Debug)]
struct Skeleton {
    head: Head,
    segments: Vec<(u64, Close)>,
    open_run: Option<u64>,
}

/// Outcome of splitting a reading into segments.
enum Shape {
    Segments(Skeleton),
    /// The whole reading is one run of `R`.
    Run,
}

fn read_close(l: &[MgcfSym], i: &mut usize) -> Option<Close> {
    match l[*i] {
        MgcfSym::J if l.get(*i + 1) == Some(&MgcfSym::L) => {
            *i += 2;
            Some(Close::JL)
        }
        MgcfSym::J => {
            *i += 1;
            Some(if *i == l.len() { Close::JEnd } else { Close::J })
        }
        MgcfSym::C => {
            *i += 1;
            Some(Close::C)
        }
        _ => None,
    }
}

fn run_len(l: &[MgcfSym], i: &mut usize) -> u64 {
    let start = *i;
    while *i < l.len() && l[*i] == MgcfSym::R {
        *i += 1;
    }
    (*i - start) as u64
}

fn skeleton(l: &[MgcfSym]) -> Option<Shape> {
    let mut i = 0;
    let head = match l.first()? {
        MgcfSym::L => {
            i = 1;
            Head::L
        }
        MgcfSym::J => match read_close(l, &mut i)? {
            Close::JL => Head::JL,
            Close::C => unreachable!(),
            Close::J | Close::JEnd => Head::J,
        },
        MgcfSym::C => {
            i = 1;
            Head::C
        }
        MgcfSym::R => {
            let k = run_len(l, &mut i);
            if i == l.len() {
                return Some(Shape::Run);
            }
            Head::Run(k, read_close(l, &mut i)?)
        }
    };
    let mut segments = Vec::new();
    let mut open_run = None;
    while i < l.len() {
        let k = run_len(l, &mut i);
        if k == 0 {
            return None;
        }
        if i == l.len() {
            open_run = Some(k);
            break;
        }
        segments.push((k, read_close(l, &mut i)?));
    }
    Some(Shape::Segments(Skeleton {
        head,
        segments,
        open_run,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TailKind {
    Open,
    JEnd { infinite_ok: bool },
    AtLeast(u64),
}

#[derive(Clone, Debug)]
struct Builder {
    y_hi: Rational,
    points: Vec<PastPoint>,
    digits: Vec<u64>,
    rels: Vec<Option<Rel>>,
    seg_start: bool,
}

impl Builder {
    fn new(y_hi: Rational, points: Vec<PastPoint>) -> Self {
        Builder {
            y_hi,
            points,
            digits: Vec::new(),
            rels: vec![None],
            seg_start: false,
        }
    }

    fn set(&mut self, r: Rel) {
        let last = self.rels.last_mut().expect("nonempty");
        debug_assert!(last.is_none() || *last == Some(r));
        *last = Some(r);
    }

    fn digit(&mut self, e: u64) {
        if e == 1 && self.seg_start {
            self.set(Rel::Greater);
        }
        self.digits.push(e);
        self.rels.push(None);
        self.seg_start = false;
    }

    /// Applies a closing that follows a digit already pushed (or held by `y`).
    fn close(&mut self, c: Close) {
        match c {
            Close::J | Close::JEnd => {}
            Close::JL => {
                self.set(Rel::Less);
                self.digit(1);
            }
            Close::C => {
                self.set(Rel::Equal);
                self.digit(1);
            }
        }
        self.seg_start = true;
    }

    fn finish(mut self, tail: TailKind, parity: u8, letters: &[MgcfSym]) -> Model {
        let may_be_one = match tail {
            TailKind::AtLeast(k) => k == 1,
            _ => true,
        };
        if self.seg_start && may_be_one {
            self.set(Rel::Greater);
        }
        let (w_lo_closed, w_hi, w_hi_closed) = match tail {
            TailKind::Open => (false, Rational::one(), false),
            TailKind::JEnd { infinite_ok } => (infinite_ok, Rational::one(), false),
            TailKind::AtLeast(1) => (false, Rational::one(), false),
            TailKind::AtLeast(k) => (false, rat(1, k as i64), true),
        };
        Model {
            parity,
            letters: letters.to_vec(),
            y_hi: self.y_hi,
            points: self.points,
            digits: self.digits,
            rels: self.rels,
            w_lo: Rational::zero(),
            w_lo_closed,
            w_hi,
            w_hi_closed,
        }
    }
}

fn zero_point(initial: bool) -> PastPoint {
    PastPoint {
        y: Rational::zero(),
        initial,
    }
}

/// Starting builders for the head, with the closing that still has to be applied.
fn head_builders(head: Head, parity: u8) -> Vec<(Builder, Option<Close>)> {
    let at = |want: u8, p: PastPoint| if parity == want { vec![p] } else { vec![] };
    // The run closed by the head lies in the past as the first digit of y. A run of one
    // is a segment-head 1, so y ∈ (1/2, 1) carries that digit explicitly with its tag.
    let split = |pts: Vec<PastPoint>, close: Option<Close>| {
        let mut low_pts = pts;
        low_pts.push(PastPoint {
            y: rat(1, 2),
            initial: false,
        });
        let low = Builder::new(rat(1, 2), low_pts);
        let mut high = Builder::new(Rational::one(), vec![]);
        high.seg_start = true;
        high.digit(1);
        vec![(low, close), (high, close)]
    };
    match head {
        Head::J => split(at(0, zero_point(true)), Some(Close::J)),
        Head::JL => split(at(0, zero_point(true)), Some(Close::JL)),
        Head::L => split(at(1, zero_point(false)), None)
            .into_iter()
            .map(|(mut b, _)| {
                b.set(Rel::Less);
                b.digit(1);
                b.seg_start = true;
                (b, None)
            })
            .collect(),
        Head::C => split(vec![], Some(Close::C)),
        Head::Run(k, close) => {
            let closes: Vec<Close> = match close {
                Close::JEnd => vec![Close::JEnd, Close::JL],
                c => vec![c],
            };
            let mut out = Vec::new();
            for c in closes {
                let lb = match c {
                    Close::JL => (k.max(2)) - 1,
                    _ => k,
                };
                let lb2 = lb.max(2);
                let p = PastPoint {
                    y: rat(1, lb2 as i64),
                    initial: false,
                };
                out.push((Builder::new(rat(1, lb2 as i64), at(1, p)), Some(c)));
                if lb == 1 {
                    let mut b = Builder::new(Rational::one(), at(1, zero_point(false)));
                    b.seg_start = true;
                    b.digit(1);
                    out.push((b, Some(c)));
                }
            }
            out
        }
    }
}

fn head_close_tail(head: Head, c: Close) -> TailKind {
    match head {
        Head::Run(k, _) => TailKind::JEnd {
            infinite_ok: k >= 2 && c == Close::JEnd,
        },
        _ => TailKind::JEnd { infinite_ok: false },
    }
}

fn build(sk: &Skeleton, parity: u8, letters: &[MgcfSym]) -> Vec<Model> {
    let mut out = Vec::new();
    for (b, pending) in head_builders(sk.head, parity) {
        // (builder, tail decided so far)
        let mut states: Vec<(Builder, Option<TailKind>)> = Vec::new();
        match pending {
            Some(Close::JEnd) => {
                let mut j = b.clone();
                j.close(Close::J);
                states.push((j, Some(head_close_tail(sk.head, Close::JEnd))));
            }
            Some(c) if sk.head == Head::J && sk.segments.is_empty() && sk.open_run.is_none() => {
                // lone J: it may also be the J of JL
                let mut j = b.clone();
                j.close(c);
                states.push((j, Some(TailKind::JEnd { infinite_ok: false })));
                let mut jl = b;
                jl.close(Close::JL);
                states.push((jl, Some(TailKind::Open)));
            }
            Some(c) => {
                let mut j = b;
                j.close(c);
                states.push((j, None));
            }
            None => states.push((b, None)),
        }
        for (k, c) in &sk.segments {
            let (k, c) = (*k, *c);
            let mut next = Vec::new();
            for (b, tail) in states {
                if tail.is_some() {
                    next.push((b, tail));
                    continue;
                }
                match c {
                    Close::J => {
                        let mut b = b;
                        b.digit(k);
                        b.close(Close::J);
                        next.push((b, None));
                    }
                    Close::C => {
                        let mut b = b;
                        b.digit(k);
                        b.close(Close::C);
                        next.push((b, None));
                    }
                    Close::JL => {
                        if k >= 2 {
                            let mut b = b;
                            b.digit(k - 1);
                            b.close(Close::JL);
                            next.push((b, None));
                        }
                    }
                    Close::JEnd => {
                        let mut j = b.clone();
                        j.digit(k);
                        j.close(Close::J);
                        next.push((
                            j,
                            Some(TailKind::JEnd {
                                infinite_ok: k >= 2,
                            }),
                        ));
                        if k >= 2 {
                            let mut jl = b;
                            jl.digit(k - 1);
                            jl.close(Close::JL);
                            next.push((jl, Some(TailKind::Open)));
                        }
                    }
                }
            }
            states = next;
        }
        for (b, tail) in states {
            if let Some(t) = tail {
                out.push(b.finish(t, parity, letters));
                continue;
            }
            match sk.open_run {
                None => out.push(b.finish(TailKind::Open, parity, letters)),
                Some(k) => {
                    let mut at_least = b.clone();
                    at_least.seg_start = true;
                    out.push(at_least.finish(TailKind::AtLeast(k), parity, letters));
                    if k >= 2 {
                        let mut m = b;
                        m.digit(k - 1);
                        m.close(Close::JL);
                        out.push(m.finish(TailKind::Open, parity, letters));
                    }
                }
            }
        }
    }
    out
}

/// All models of a block over both starting parities.
#[derive(Clone, Debug, Default)]
pub struct Readings {
    pub models: Vec<Model>,
    /// Parities whose reading is a single run of `R` (no digit is visible).
    pub runs: Vec<u8>,
}

pub fn readings(block: &[CutSym]) -> Readings {
    let mut r = Readings::default();
    for parity in 0..2u8 {
        let Ok(letters) = mgcf_from_cutting_parity(block, parity) else {
            continue;
        };
        if letters.is_empty() {
            continue;
        }
        match skeleton(&letters) {
            None => {}
            Some(Shape::Run) => r.runs.push(parity),
            Some(Shape::Segments(sk)) => r.models.extend(build(&sk, parity, &letters)),
        }
    }
    r
}

/// `N(α_j)` and `β_j` as matrices, with the bilinear numerator of `β_j − N(α_j)`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub boundary: usize,
    pub rel: Rel,
    /// `P(y, w) = a·yw + b·y + c·w + d`.
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    /// `sign·P` has the sign of `β − N(α)` on the domain.
    pub sign: i8,
}

impl Constraint {
    pub fn describe(&self) -> String {
        format!(
            "β{} {} N(α{})",
            self.boundary,
            self.rel.symbol(),
            self.boundary
        )
    }
}

fn bigr(x: &num_bigint::BigInt) -> Rational {
    Rational::from_integer(x.clone())
}

pub fn constraints(m: &Model) -> Vec<Constraint> {
    let n = crate::exactnum::n_matrix();
    let y_mid = &m.y_hi / int(2);
    let w_mid = (&m.w_lo + &m.w_hi) / int(2);
    m.constraints()
        .map(|(j, rel)| {
            let f = &n * &m.alpha_matrix(j);
            let g = m.beta_matrix(j);
            let (f1, f2, f3, f4) = (bigr(&f.a), bigr(&f.b), bigr(&f.c), bigr(&f.d));
            let (g1, g2, g3, g4) = (bigr(&g.a), bigr(&g.b), bigr(&g.c), bigr(&g.d));
            let a = &g1 * &f3 - &f1 * &g3;
            let b = &g2 * &f3 - &f1 * &g4;
            let c = &g1 * &f4 - &f2 * &g3;
            let d = &g2 * &f4 - &f2 * &g4;
            let den = (&g3 * &w_mid + &g4) * (&f3 * &y_mid + &f4);
            let sign = if den > Rational::zero() { 1 } else { -1 };
            Constraint {
                boundary: j,
                rel,
                a,
                b,
                c,
                d,
                sign,
            }
        })
        .collect()
}
