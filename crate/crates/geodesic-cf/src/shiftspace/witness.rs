//! Geodesics realizing a feasible point of a model.
//!
//! A point `(y, w)` fixes the past `α₀ = y` and the future `β₀`. With the digits of `y`
//! written forward, `M = [[a0,1],[1,0]] ∏ [[c,1],[1,0]]` carries `⟨−y, β₀⟩` to a geodesic
//! through `ℱ`; a rational past makes it the vertical `⟨∞, M(β₀)⟩`. Every candidate is
//! checked by tracing.

use super::model::{constraints, Model};
use super::solver::{simplest_between, w_set, Sample, WSet, YKind};
use crate::cf::OcfStream;
use crate::cutting::CutSym;
use crate::exactnum::{rat, ExtReal, IntMatrix2, QuadSurd};
use crate::tessellation::{trace, GeodesicSpec, Tracer};
use num_traits::ToPrimitive;
use std::collections::VecDeque;

const CELL_CANDIDATES: usize = 24;
const SURD_DEPTH: usize = 12;
const REDUCTION_STEPS: usize = 200;

fn digits_of(y: &QuadSurd, limit: usize) -> (Vec<u64>, bool) {
    if y.is_zero() {
        return (vec![], true);
    }
    // y ∈ (0, 1): skip a0 = 0
    let mut s = OcfStream::new(y);
    let _ = s.next();
    let mut out = Vec::new();
    for d in s.by_ref().take(limit) {
        match d.to_u64() {
            Some(d) => out.push(d),
            None => break,
        }
    }
    let exact = s.remainder().is_none();
    (out, exact)
}

/// Rationals inside `(lo, hi)`, simplest first.
fn cell_points(lo: &QuadSurd, hi: &QuadSurd, n: usize) -> Vec<QuadSurd> {
    let mut out = Vec::new();
    let mut queue = VecDeque::from([(lo.clone(), hi.clone())]);
    while let Some((a, b)) = queue.pop_front() {
        if out.len() >= n {
            break;
        }
        let s = QuadSurd::rational(simplest_between(&a, &b));
        queue.push_back((a, s.clone()));
        queue.push_back((s.clone(), b));
        out.push(s);
    }
    out
}

fn w_points(s: &WSet) -> Vec<QuadSurd> {
    if s.is_point() {
        return vec![s.lo.clone()];
    }
    let mut out = vec![QuadSurd::rational(simplest_between(&s.lo, &s.hi))];
    if s.lo_closed {
        out.push(s.lo.clone());
    }
    if s.hi_closed {
        out.push(s.hi.clone());
    }
    out
}

fn cf_matrix(d: u64) -> IntMatrix2 {
    IntMatrix2::new(d as i64, 1, 1, 0)
}

fn contains(hay: &[CutSym], needle: &[CutSym]) -> bool {
    needle.is_empty() || hay.windows(needle.len()).any(|w| w == needle)
}

fn same_field(a: &QuadSurd, b: &QuadSurd) -> bool {
    a.is_rational() || b.is_rational() || a.d() == b.d()
}

/// Moves `g` by the modular group until it meets the interior of `ℱ`.
fn into_domain(g: GeodesicSpec) -> Option<GeodesicSpec> {
    let mut g = g;
    for _ in 0..REDUCTION_STEPS {
        if Tracer::new(&g).is_ok() {
            return Some(g);
        }
        let (ExtReal::Finite(h), ExtReal::Finite(f)) = (&g.head, &g.foot) else {
            return None;
        };
        if !same_field(h, f) {
            return None;
        }
        let half = QuadSurd::rational(rat(1, 2));
        let c = &(h + f) * &half;
        let n = (&c + &half).floor().to_i64()?;
        let shifted = g.transform(&IntMatrix2::new(1, -n, 0, 1)).ok()?;
        if Tracer::new(&shifted).is_ok() {
            return Some(shifted);
        }
        g = shifted.transform(&CutSym::J.matrix()).ok()?;
    }
    None
}

/// A translate of `g` whose forward trace contains `block`, searching `limit` symbols on
/// both sides of `ℱ`.
fn forward_witness(g: &GeodesicSpec, block: &[CutSym], limit: usize) -> Option<GeodesicSpec> {
    let back = trace(&g.reversed(), limit).ok()?;
    let fwd = trace(g, limit).ok()?;
    let mut w: Vec<CutSym> = back.symbols().iter().rev().map(|s| s.inverse()).collect();
    w.extend(fwd.symbols());
    let i = w.windows(block.len()).position(|x| x == block)?;
    let j = back.steps.len().saturating_sub(i);
    let g = match j {
        0 => g.clone(),
        _ => g.transform(&back.steps[j - 1].h.adjugate()).ok()?,
    };
    let t = trace(&g, limit + block.len()).ok()?;
    contains(&t.symbols(), block).then_some(g)
}

/// Tries to realize the block through the point `(y, w)` of `m`.
pub fn realize(m: &Model, block: &[CutSym], y: &QuadSurd, w: &QuadSurd) -> Option<GeodesicSpec> {
    let beta0 = match m.beta_matrix(0).apply(&ExtReal::Finite(w.clone())) {
        Ok(ExtReal::Finite(b)) => b,
        _ => return None,
    };
    if !same_field(y, &beta0) {
        return None;
    }
    let (ys, exact) = digits_of(y, SURD_DEPTH);
    let mut pasts: Vec<Vec<u64>> = Vec::new();
    if exact {
        let fwd: Vec<u64> = ys.iter().rev().copied().collect();
        pasts.push(fwd.clone());
        if let Some(&f) = fwd.first() {
            if f >= 2 {
                let mut alt = vec![1, f - 1];
                alt.extend_from_slice(&fwd[1..]);
                pasts.push(alt);
            }
        }
    } else {
        for k in 1..=ys.len() {
            pasts.push(ys[..k].iter().rev().copied().collect());
        }
    }
    let digit_sum: u64 = m.digits.iter().sum();
    for past in pasts {
        let first = match past.first() {
            Some(&f) => f,
            None => beta0.floor().to_u64().unwrap_or(1),
        };
        let a0: i64 = if first >= 2 { 0 } else { -1 };
        let mut mm = IntMatrix2::new(a0, 1, 1, 0);
        for &c in &past {
            mm = &mm * &cf_matrix(c);
        }
        let head = if exact {
            ExtReal::PosInf
        } else {
            match mm.apply(&ExtReal::Finite(-y)) {
                Ok(h) => h,
                Err(_) => continue,
            }
        };
        let foot = match mm.apply(&ExtReal::Finite(beta0.clone())) {
            Ok(f) => f,
            Err(_) => continue,
        };
        if head == ExtReal::PosInf && foot == ExtReal::rational(rat(-1, 2)) {
            continue;
        }
        let Some(g) = GeodesicSpec::new(head, foot).ok().and_then(into_domain) else {
            continue;
        };
        let past_sum: u64 = past.iter().sum();
        let limit = 3 * (past_sum + digit_sum) as usize + 3 * past.len() + 4 * block.len() + 60;
        if let Some(g) = forward_witness(&g, block, limit) {
            return Some(g);
        }
    }
    None
}

/// A realizing geodesic for one of the feasible samples, preferring initial ones.
pub fn find(m: &Model, samples: &[Sample], block: &[CutSym]) -> Option<GeodesicSpec> {
    let cs = constraints(m);
    let refs: Vec<_> = cs.iter().collect();
    let mut ordered: Vec<&Sample> = samples
        .iter()
        .filter(|s| matches!(s.kind, YKind::Point { initial: true }))
        .collect();
    ordered.extend(
        samples
            .iter()
            .filter(|s| !matches!(s.kind, YKind::Point { initial: true })),
    );
    for s in ordered {
        let ys = match &s.kind {
            YKind::Cell(lo, hi) => cell_points(lo, hi, CELL_CANDIDATES),
            _ => vec![s.y.clone()],
        };
        for y in ys {
            let Some(ws) = w_set(m, &refs, &y) else {
                continue;
            };
            for w in w_points(&ws) {
                if let Some(g) = realize(m, block, &y, &w) {
                    return Some(g);
                }
            }
        }
    }
    None
}
