//! Exact tracing of geodesics through the translates of the fundamental domain
//! `ℱ = {|z| ≥ 1, |Re z| ≤ 1/2}` and corner detection.
//!
//! At each step the geodesic is pulled back into `ℱ`, its exit side is found by exact
//! comparison, and the generator pairing that side is applied. Exit through the right
//! edge, left edge or bottom arc gives `R̄`, `L̄` or `J̄`; exit through the corner
//! `1/2 + (√3/2)i` gives `C̄₂`, through `−1/2 + (√3/2)i` gives `C̄₁`.

mod svg;

pub use svg::render_svg;

use crate::cutting::CutSym;
use crate::error::{Error, Result};
use crate::exactnum::{ExtReal, IntMatrix2, QuadSurd, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;

/// An oriented geodesic from `head` to `foot`; the cusp is always `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeodesicSpec {
    pub head: ExtReal,
    pub foot: ExtReal,
}

fn normalize(x: ExtReal) -> ExtReal {
    match x {
        ExtReal::NegInf => ExtReal::PosInf,
        other => other,
    }
}

/// `(p, q)` with `x = p/q` in lowest terms and `∞ = 1/0`, for rational endpoints.
fn as_fraction(x: &ExtReal) -> Option<(BigInt, BigInt)> {
    match x {
        ExtReal::Finite(s) => s
            .as_rational()
            .map(|r| (r.numer().clone(), r.denom().clone())),
        _ => Some((BigInt::one(), BigInt::zero())),
    }
}

impl GeodesicSpec {
    pub fn new(head: ExtReal, foot: ExtReal) -> Result<Self> {
        let (head, foot) = (normalize(head), normalize(foot));
        if head == foot {
            return Err(Error::domain("a geodesic needs two distinct endpoints"));
        }
        Ok(GeodesicSpec { head, foot })
    }

    /// The downward vertical `⟨∞, θ⟩`.
    pub fn vertical(theta: ExtReal) -> Result<Self> {
        GeodesicSpec::new(ExtReal::PosInf, theta)
    }

    pub fn is_vertical(&self) -> bool {
        !self.head.is_finite() || !self.foot.is_finite()
    }

    pub fn reversed(&self) -> Self {
        GeodesicSpec {
            head: self.foot.clone(),
            foot: self.head.clone(),
        }
    }

    /// Image under a matrix of nonzero determinant.
    pub fn transform(&self, m: &IntMatrix2) -> Result<Self> {
        GeodesicSpec::new(m.apply(&self.head)?, m.apply(&self.foot)?)
    }

    /// True when the geodesic runs along edges of the tessellation: both endpoints
    /// rational with `|p₁q₂ − p₂q₁| = 2`.
    pub fn is_edge_geodesic(&self) -> bool {
        match (as_fraction(&self.head), as_fraction(&self.foot)) {
            (Some((p1, q1)), Some((p2, q2))) => (p1 * q2 - p2 * q1).abs() == BigInt::from(2),
            _ => false,
        }
    }

    /// Parses `head,foot`.
    pub fn parse(s: &str) -> Result<Self> {
        let i = s
            .find(',')
            .ok_or_else(|| Error::parse(0, "expected 'head,foot'"))?;
        let head = s[..i].parse::<ExtReal>()?;
        let foot = s[i + 1..].parse::<ExtReal>().map_err(|e| match e {
            Error::Parse { offset, msg } => Error::Parse {
                offset: offset + i + 1,
                msg,
            },
            other => other,
        })?;
        GeodesicSpec::new(head, foot)
    }
}

impl fmt::Display for GeodesicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.head, self.foot)
    }
}

/// The side of `ℱ` through which a pulled-back geodesic leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExitSide {
    Left,
    Right,
    Arc,
    LeftCorner,
    RightCorner,
}

impl ExitSide {
    pub fn symbol(self) -> CutSym {
        match self {
            ExitSide::Left => CutSym::L,
            ExitSide::Right => CutSym::R,
            ExitSide::Arc => CutSym::J,
            ExitSide::LeftCorner => CutSym::C1,
            ExitSide::RightCorner => CutSym::C2,
        }
    }
}

/// One crossing of the trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub symbol: CutSym,
    pub side: ExitSide,
    /// Real part of the exit point in the coordinates of the pulled-back `ℱ`.
    pub exit_x: QuadSurd,
    /// `h_j = g₁ ⋯ g_j`.
    pub h: IntMatrix2,
}

fn half() -> QuadSurd {
    QuadSurd::rational(Rational::new(1.into(), 2.into()))
}

/// Exit of the geodesic from `ℱ`, or `None` when it runs up into the cusp.
fn exit_of(g: &GeodesicSpec) -> Result<Option<(ExitSide, QuadSurd)>> {
    let h = half();
    let nh = -&h;
    let inside = |x: &QuadSurd| *x > nh && *x < h;
    match (&g.head, &g.foot) {
        (ExtReal::Finite(a), ExtReal::PosInf) => {
            if inside(a) {
                Ok(None)
            } else {
                Err(Error::domain(format!(
                    "geodesic {} misses the interior of ℱ",
                    g
                )))
            }
        }
        (ExtReal::PosInf, ExtReal::Finite(b)) => {
            if inside(b) {
                Ok(Some((ExitSide::Arc, b.clone())))
            } else {
                Err(Error::domain(format!(
                    "geodesic {} misses the interior of ℱ",
                    g
                )))
            }
        }
        (ExtReal::Finite(a), ExtReal::Finite(b)) => {
            let (mn, mx) = if a < b { (a, b) } else { (b, a) };
            let mut lo = if *mn > nh { mn.clone() } else { nh.clone() };
            let mut hi = if *mx < h { mx.clone() } else { h.clone() };
            let s = a + b;
            let prod = a * b;
            let (mut arc_lo, mut arc_hi) = (false, false);
            match s.signum() {
                0 => {
                    if &prod + &QuadSurd::one() >= QuadSurd::zero() {
                        return Err(Error::domain(format!(
                            "geodesic {} misses the interior of ℱ",
                            g
                        )));
                    }
                }
                sign => {
                    // |z| ≥ 1 on the semicircle ⇔ (a + b)·x ≥ 1 + ab
                    let k = &(&prod + &QuadSurd::one()) / &s;
                    if sign > 0 && k >= lo {
                        lo = k;
                        arc_lo = true;
                    } else if sign < 0 && k <= hi {
                        hi = k;
                        arc_hi = true;
                    }
                }
            }
            if lo >= hi {
                return Err(Error::domain(format!(
                    "geodesic {} misses the interior of ℱ",
                    g
                )));
            }
            let side = if b > a {
                match (arc_hi, hi == h) {
                    (true, true) => ExitSide::RightCorner,
                    (true, false) => ExitSide::Arc,
                    (false, true) => ExitSide::Right,
                    (false, false) => unreachable!("a geodesic cannot end inside ℱ"),
                }
            } else {
                match (arc_lo, lo == nh) {
                    (true, true) => ExitSide::LeftCorner,
                    (true, false) => ExitSide::Arc,
                    (false, true) => ExitSide::Left,
                    (false, false) => unreachable!("a geodesic cannot end inside ℱ"),
                }
            };
            let x = if b > a { hi } else { lo };
            Ok(Some((side, x)))
        }
        _ => unreachable!("endpoints are distinct and the cusp is +∞"),
    }
}

/// Lazy tracer; yields one [`TraceStep`] per crossed side.
#[derive(Clone, Debug)]
pub struct Tracer {
    current: GeodesicSpec,
    h: IntMatrix2,
    done: bool,
}

impl Tracer {
    /// Checks that the geodesic is transverse to the tessellation and meets the interior
    /// of `ℱ`.
    pub fn new(g: &GeodesicSpec) -> Result<Self> {
        if g.is_edge_geodesic() {
            return Err(Error::domain(format!(
                "geodesic {} runs along tessellation edges",
                g
            )));
        }
        exit_of(g)?;
        Ok(Tracer {
            current: g.clone(),
            h: IntMatrix2::identity(),
            done: false,
        })
    }

    /// The geodesic pulled back by the current `h`.
    pub fn current(&self) -> &GeodesicSpec {
        &self.current
    }

    pub fn h(&self) -> &IntMatrix2 {
        &self.h
    }
}

impl Iterator for Tracer {
    type Item = TraceStep;
    fn next(&mut self) -> Option<TraceStep> {
        if self.done {
            return None;
        }
        let exit = exit_of(&self.current).expect("each pulled-back geodesic meets ℱ");
        let Some((side, exit_x)) = exit else {
            self.done = true;
            return None;
        };
        let sym = side.symbol();
        let m = sym.matrix();
        self.h = &self.h * &m;
        self.current = self
            .current
            .transform(&m.adjugate())
            .expect("generators are invertible");
        Some(TraceStep {
            symbol: sym,
            side,
            exit_x,
            h: self.h.clone(),
        })
    }
}

/// A finished trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    /// True when the geodesic ran into the cusp before `limit` steps.
    pub cusp: bool,
}

impl Trace {
    pub fn symbols(&self) -> Vec<CutSym> {
        self.steps.iter().map(|s| s.symbol).collect()
    }
}

/// Traces at most `limit` crossings.
pub fn trace(g: &GeodesicSpec, limit: usize) -> Result<Trace> {
    let mut t = Tracer::new(g)?;
    let steps: Vec<TraceStep> = t.by_ref().take(limit).collect();
    let cusp = steps.len() < limit || t.next().is_none();
    Ok(Trace { steps, cusp })
}

/// Cutting sequence of `⟨∞, θ⟩`, at most `limit` symbols.
pub fn vertical_symbols(theta: &ExtReal, limit: usize) -> Result<Vec<CutSym>> {
    Ok(trace(&GeodesicSpec::vertical(theta.clone())?, limit)?.symbols())
}

/// A translate `g(ρ)` of the corner `ρ = 1/2 + (√3/2)i` lying on a vertical geodesic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerHit {
    /// The hit is at height `t = √3 · r`.
    pub r: Rational,
    /// Real part `N/(2D)` of the corner point.
    pub n: BigInt,
    pub d: BigInt,
    /// `witness(ρ)` is the corner point.
    pub witness: IntMatrix2,
}

impl CornerHit {
    pub fn t(&self) -> QuadSurd {
        QuadSurd::new(Rational::zero(), self.r.clone(), BigInt::from(3))
    }
}

/// `(N/(2D), 1/(2D))`: the point `g(ρ)` is `x + y·√3·i`, with `D = c² + cd + d²` and
/// `N = 2ac + ad + bc + 2bd`.
pub fn corner_point(m: &IntMatrix2) -> Result<(Rational, Rational)> {
    if !m.det().is_one() {
        return Err(Error::domain(format!("{} does not have determinant 1", m)));
    }
    let (a, b, c, d) = (&m.a, &m.b, &m.c, &m.d);
    let big_d = c * c + c * d + d * d;
    let n = BigInt::from(2) * a * c + a * d + b * c + BigInt::from(2) * b * d;
    let two_d = BigInt::from(2) * &big_d;
    Ok((
        Rational::new(n, two_d.clone()),
        Rational::new(BigInt::one(), two_d),
    ))
}

/// A determinant-1 matrix sending `ρ` to `N/(2D) + i·√3/(2D)`, if one exists.
pub fn corner_witness(n: &BigInt, big_d: &BigInt) -> Option<IntMatrix2> {
    let two_d = BigInt::from(2) * big_d;
    let bound = {
        // |c|, |d| ≤ √(4D/3)
        let mut r = BigInt::zero();
        while &r * &r * BigInt::from(3) <= BigInt::from(4) * big_d {
            r += 1;
        }
        r
    };
    let mut c = -bound.clone();
    while c <= bound {
        let mut d = -bound.clone();
        while d <= bound {
            if &c * &c + &c * &d + &d * &d == *big_d && c.gcd(&d).is_one() {
                let eg = d.extended_gcd(&c);
                // eg.x·d + eg.y·c = ±1
                let s = eg.gcd.signum();
                let (a0, b0) = (eg.x * &s, -(eg.y * &s));
                let n0 =
                    BigInt::from(2) * &a0 * &c + &a0 * &d + &b0 * &c + BigInt::from(2) * &b0 * &d;
                let diff = n - &n0;
                if (&diff % &two_d).is_zero() {
                    let m = &diff / &two_d;
                    return Some(IntMatrix2::from_big(
                        a0 + &m * &c,
                        b0 + &m * &d,
                        c.clone(),
                        d.clone(),
                    ));
                }
            }
            d += 1;
        }
        c += 1;
    }
    None
}

/// All corner translates on the vertical geodesic `x = θ`, highest first.
///
/// A corner at `N/(2D)` exists iff `N² + 3 ≡ 0 (mod 4D)`; with `θ = p/q` this forces
/// `D = kq/2` and `N = kp` for `k ∈ {1, 3}`.
pub fn corner_hits_vertical(theta: &Rational) -> Vec<CornerHit> {
    let (p, q) = (theta.numer(), theta.denom());
    let mut out = Vec::new();
    for k in [1, 3] {
        let kq = q * BigInt::from(k);
        if kq.is_odd() {
            continue;
        }
        let big_d: BigInt = &kq / 2;
        let n = p * BigInt::from(k);
        let four_d = BigInt::from(4) * &big_d;
        let rem: BigInt = (&n * &n + 3) % &four_d;
        if !rem.is_zero() {
            continue;
        }
        let witness = corner_witness(&n, &big_d).expect("every disc −3 form represents a corner");
        out.push(CornerHit {
            r: Rational::new(BigInt::one(), BigInt::from(2) * &big_d),
            n,
            d: big_d,
            witness,
        });
    }
    out
}

/// The corner point crossed at a corner step, as a determinant-1 image of `ρ`.
pub fn corner_step_witness(h_before: &IntMatrix2, side: ExitSide) -> Option<IntMatrix2> {
    match side {
        ExitSide::RightCorner => Some(h_before.clone()),
        ExitSide::LeftCorner => Some(h_before * &CutSym::L.matrix()),
        _ => None,
    }
}

/// Corner statistics of the closed geodesic `⟨−√d, √d⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicCorners {
    pub preperiod: usize,
    pub period: usize,
    pub corners: usize,
    /// Corner points of one period as `(N, D)`.
    pub points: Vec<(BigInt, BigInt)>,
}

/// Traces `⟨−√d, √d⟩` until the pulled-back geodesic recurs and counts corner symbols
/// in one period.
pub fn periodic_corner_count(d: u64, limit: usize) -> Result<PeriodicCorners> {
    let root = QuadSurd::sqrt(d as i64);
    if root.is_rational() || d == 0 {
        return Err(Error::domain(format!("{} is a square", d)));
    }
    let g = GeodesicSpec::new(ExtReal::Finite(-&root), ExtReal::Finite(root))?;
    let mut tracer = Tracer::new(&g)?;
    let mut seen: HashMap<GeodesicSpec, usize> = HashMap::new();
    let mut steps: Vec<(TraceStep, IntMatrix2)> = Vec::new();
    for i in 0..=limit {
        if let Some(&j) = seen.get(tracer.current()) {
            let period = &steps[j..i];
            let points = period
                .iter()
                .filter_map(|(s, h_before)| corner_step_witness(h_before, s.side))
                .map(|w| {
                    let c = &w.c;
                    let dd = &w.d;
                    let big_d = c * c + c * dd + dd * dd;
                    let n = BigInt::from(2) * &w.a * c
                        + &w.a * dd
                        + &w.b * c
                        + BigInt::from(2) * &w.b * dd;
                    (n, big_d)
                })
                .collect::<Vec<_>>();
            return Ok(PeriodicCorners {
                preperiod: j,
                period: i - j,
                corners: points.len(),
                points,
            });
        }
        seen.insert(tracer.current().clone(), i);
        let h_before = tracer.h().clone();
        match tracer.next() {
            Some(s) => steps.push((s, h_before)),
            None => return Err(Error::domain("closed geodesic ran into the cusp")),
        }
    }
    Err(Error::Budget(format!("no period within {} steps", limit)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutting::fmt_cutting;
    use crate::exactnum::rat;

    fn geo(s: &str) -> GeodesicSpec {
        GeodesicSpec::parse(s).unwrap()
    }

    #[test]
    fn semicircle_example() {
        let t = trace(&geo("-5/2,5/2"), 5).unwrap();
        assert_eq!(fmt_cutting(&t.symbols()), "RRJLL");
    }

    #[test]
    fn vertical_examples() {
        let t = trace(&geo("inf,0"), 10).unwrap();
        assert_eq!(fmt_cutting(&t.symbols()), "J");
        assert!(t.cusp);
        let w = vertical_symbols(&ExtReal::from_ratio(5, 14), 100).unwrap();
        assert_eq!(fmt_cutting(&w), "JLLC1LLLLJ");
    }

    #[test]
    fn rejects_edges_and_misses() {
        assert!(Tracer::new(&geo("inf,1/2")).is_err());
        assert!(Tracer::new(&geo("-1,1")).is_err());
        assert!(Tracer::new(&geo("2,3")).is_err());
        assert!(Tracer::new(&geo("inf,1")).is_err());
    }

    #[test]
    fn elliptic_point_gives_one_j() {
        // ⟨−2, 1/2⟩ passes through i
        let t = trace(&geo("-2,1/2"), 3).unwrap();
        assert_eq!(t.steps[0].symbol, CutSym::J);
        assert_eq!(t.steps[0].exit_x, QuadSurd::zero());
    }

    #[test]
    fn corner_point_examples() {
        assert_eq!(
            corner_point(&IntMatrix2::identity()).unwrap(),
            (rat(1, 2), rat(1, 2))
        );
        assert_eq!(
            corner_point(&IntMatrix2::new(2, 1, 1, 1)).unwrap(),
            (rat(3, 2), rat(1, 6))
        );
        assert_eq!(
            corner_point(&IntMatrix2::new(1, 1, 0, 1)).unwrap(),
            (rat(3, 2), rat(1, 2))
        );
        assert!(corner_point(&IntMatrix2::new(0, 1, 1, 0)).is_err());
    }

    #[test]
    fn vertical_corner_examples() {
        let hits = corner_hits_vertical(&rat(1, 2));
        let r: Vec<Rational> = hits.iter().map(|h| h.r.clone()).collect();
        assert_eq!(r, vec![rat(1, 2), rat(1, 6)]);
        assert_eq!(hits[0].t(), QuadSurd::new(rat(0, 1), rat(1, 2), 3.into()));
        let hits = corner_hits_vertical(&rat(5, 14));
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].r, rat(1, 14));
        assert_eq!(
            corner_point(&hits[0].witness).unwrap(),
            (rat(5, 14), rat(1, 14))
        );
        assert!(corner_hits_vertical(&rat(1, 3)).is_empty());
    }

    #[test]
    fn periodic_examples() {
        assert_eq!(periodic_corner_count(13, 10_000).unwrap().corners, 4);
        assert!(periodic_corner_count(16, 10).is_err());
    }
}
