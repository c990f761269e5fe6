//! Cutting-sequence alphabet, parity conversion to and from MGCF words, segment
//! factorization and cutting → ACF.

use crate::cf::{acf_of_digits, AcfSym};
use crate::error::{Error, Result};
use crate::exactnum::IntMatrix2;
use crate::mgcf::{AnnotatedDigits, MgcfSym, OneTag};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Cutting symbols `L̄, R̄, J̄, C̄₁, C̄₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CutSym {
    L,
    R,
    J,
    C1,
    C2,
}

impl CutSym {
    pub const ALL: [CutSym; 5] = [CutSym::L, CutSym::R, CutSym::J, CutSym::C1, CutSym::C2];

    pub fn matrix(self) -> IntMatrix2 {
        match self {
            CutSym::L => IntMatrix2::new(1, -1, 0, 1),
            CutSym::R => IntMatrix2::new(1, 1, 0, 1),
            CutSym::J => IntMatrix2::new(0, -1, 1, 0),
            CutSym::C1 => IntMatrix2::new(-1, 0, 1, -1),
            CutSym::C2 => IntMatrix2::new(-1, 0, -1, -1),
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            CutSym::L => "L",
            CutSym::R => "R",
            CutSym::J => "J",
            CutSym::C1 => "C1",
            CutSym::C2 => "C2",
        }
    }

    pub fn is_corner(self) -> bool {
        matches!(self, CutSym::C1 | CutSym::C2)
    }

    /// The symbol of the reversed geodesic: side pairings are their own inverses except
    /// `L̄ ↔ R̄` and `C̄₁ ↔ C̄₂`.
    pub fn inverse(self) -> CutSym {
        match self {
            CutSym::L => CutSym::R,
            CutSym::R => CutSym::L,
            CutSym::J => CutSym::J,
            CutSym::C1 => CutSym::C2,
            CutSym::C2 => CutSym::C1,
        }
    }
}

impl fmt::Display for CutSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

pub fn fmt_cutting(w: &[CutSym]) -> String {
    w.iter().map(|s| s.token()).collect()
}

/// Parses tokens `L`, `R`, `J`, `C1`, `C2` written without separators.
pub fn parse_cutting(s: &str) -> Result<Vec<CutSym>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let sym = match b[i] {
            b'L' => CutSym::L,
            b'R' => CutSym::R,
            b'J' => CutSym::J,
            b'C' => match b.get(i + 1) {
                Some(b'1') => {
                    i += 1;
                    CutSym::C1
                }
                Some(b'2') => {
                    i += 1;
                    CutSym::C2
                }
                _ => return Err(Error::parse(i, "C must be followed by 1 or 2")),
            },
            c if c.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            _ => {
                let c = s[i..].chars().next().unwrap_or('?');
                return Err(Error::parse(i, format!("'{}' is not a cutting symbol", c)));
            }
        };
        out.push(sym);
        i += 1;
    }
    Ok(out)
}

/// `h = g₁ g₂ ⋯ g_n`.
pub fn cutting_matrix(w: &[CutSym]) -> IntMatrix2 {
    w.iter()
        .fold(IntMatrix2::identity(), |acc, s| &acc * &s.matrix())
}

/// One letter of the parity machine; returns the cutting symbol and the new parity.
pub fn parity_step(sym: MgcfSym, parity: u8) -> (CutSym, u8) {
    let even = parity == 0;
    match sym {
        MgcfSym::R => (if even { CutSym::R } else { CutSym::L }, parity),
        MgcfSym::L => (if even { CutSym::L } else { CutSym::R }, parity ^ 1),
        MgcfSym::J => (CutSym::J, parity ^ 1),
        MgcfSym::C => (if even { CutSym::C2 } else { CutSym::C1 }, parity),
    }
}

/// Inverse of [`parity_step`]; `None` for a corner symbol that cannot occur in this parity.
pub fn parity_unstep(sym: CutSym, parity: u8) -> Option<(MgcfSym, u8)> {
    let even = parity == 0;
    Some(match (sym, even) {
        (CutSym::R, true) | (CutSym::L, false) => (MgcfSym::R, parity),
        (CutSym::L, true) | (CutSym::R, false) => (MgcfSym::L, parity ^ 1),
        (CutSym::J, _) => (MgcfSym::J, parity ^ 1),
        (CutSym::C2, true) | (CutSym::C1, false) => (MgcfSym::C, parity),
        _ => return None,
    })
}

/// Converts an MGCF word started in the given parity.
pub fn cutting_from_mgcf_parity(w: &[MgcfSym], mut parity: u8) -> Vec<CutSym> {
    w.iter()
        .map(|&s| {
            let (c, p) = parity_step(s, parity);
            parity = p;
            c
        })
        .collect()
}

/// MGCF → cutting sequence, starting in even parity.
pub fn cutting_from_mgcf(w: &[MgcfSym]) -> Vec<CutSym> {
    cutting_from_mgcf_parity(w, 0)
}

/// Reads a cutting word as MGCF letters from the given parity.
pub fn mgcf_from_cutting_parity(w: &[CutSym], mut parity: u8) -> Result<Vec<MgcfSym>> {
    w.iter()
        .enumerate()
        .map(|(i, &s)| {
            let (m, p) = parity_unstep(s, parity)
                .ok_or_else(|| Error::parse(i, format!("{} cannot occur in this parity", s)))?;
            parity = p;
            Ok(m)
        })
        .collect()
}

/// Inverse of [`cutting_from_mgcf`] for vertical words.
pub fn mgcf_from_cutting(w: &[CutSym]) -> Result<Vec<MgcfSym>> {
    if w.first() != Some(&CutSym::J) {
        return Err(Error::parse(0, "a vertical cutting sequence starts with J"));
    }
    mgcf_from_cutting_parity(w, 0)
}

/// The nine blocks whose consecutive crossed edges lie on one hyperbolic line.
pub fn edge_forbidden_blocks() -> Vec<Vec<CutSym>> {
    use CutSym::*;
    vec![
        vec![J, J],
        vec![L, R],
        vec![R, L],
        vec![L, J, L, J],
        vec![R, J, R, J],
        vec![J, L, J, L],
        vec![J, R, J, R],
        vec![L, J, L, L, J, L],
        vec![R, J, R, R, J, R],
    ]
}

/// First occurrence `(position, block)` of an edge-forbidden factor.
pub fn find_edge_forbidden(w: &[CutSym]) -> Option<(usize, Vec<CutSym>)> {
    let blocks = edge_forbidden_blocks();
    (0..w.len()).find_map(|i| {
        blocks
            .iter()
            .find(|b| w[i..].starts_with(b))
            .map(|b| (i, b.clone()))
    })
}

/// A complete segment `R̄^k J̄ | R̄^{k+1} J̄ R̄ | R̄^k C̄₂` (even) or its odd mirror.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    /// Parity at the start of the segment.
    pub parity: u8,
    pub digits: Vec<(u64, Option<OneTag>)>,
    pub start: usize,
    pub end: usize,
}

/// How an unterminated trailing run `R̄^k` may continue.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuffixEncoding {
    /// The digit is at least `k`.
    AtLeast(u64),
    /// The digit is exactly `k − 1` and the next digit is `1_m`.
    ThenOneM(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentParse {
    /// For words starting with `J̄`: `a0` (0 or −1).
    pub a0: Option<i64>,
    /// Symbols before the first complete segment of a non-vertical word.
    pub prefix: Vec<CutSym>,
    pub segments: Vec<Segment>,
    /// Trailing run with no closing symbol.
    pub suffix: Vec<CutSym>,
    pub suffix_encodings: Vec<SuffixEncoding>,
}

impl SegmentParse {
    /// Annotated digits of a vertical word; `finite` is false when a suffix is pending.
    pub fn to_annotated(&self) -> Option<AnnotatedDigits> {
        let a0 = self.a0?;
        let mut tail = Vec::new();
        if a0 == -1 {
            tail.push((1, Some(OneTag::M)));
        }
        for s in &self.segments {
            tail.extend(s.digits.iter().copied());
        }
        Some(AnnotatedDigits {
            a0: BigInt::from(a0),
            tail,
            finite: self.suffix.is_empty(),
        })
    }
}

fn head_tag(k: u64) -> Option<OneTag> {
    if k == 1 {
        Some(OneTag::H)
    } else {
        None
    }
}

/// Factors a cutting word into segments.
///
/// A word starting with `J̄` is read as vertical. Otherwise the reading parity is fixed by
/// the first symbol, which is taken as part of a run (or a corner), and everything up to
/// the first closing symbol is an incomplete prefix.
pub fn parse_segments(w: &[CutSym]) -> Result<SegmentParse> {
    if let Some((pos, b)) = find_edge_forbidden(w) {
        return Err(Error::parse(
            pos,
            format!("edge-forbidden factor {}", fmt_cutting(&b)),
        ));
    }
    let mut out = SegmentParse {
        a0: None,
        prefix: Vec::new(),
        segments: Vec::new(),
        suffix: Vec::new(),
        suffix_encodings: Vec::new(),
    };
    let Some(&first) = w.first() else {
        return Ok(out);
    };
    let parity0 = match first {
        CutSym::J | CutSym::R | CutSym::C2 => 0,
        CutSym::L | CutSym::C1 => 1,
    };
    let m = mgcf_from_cutting_parity(w, parity0)?;
    let mut parity = parity0;
    let mut i = 0;
    if first == CutSym::J {
        parity = 1;
        i = 1;
        if m.get(1) == Some(&MgcfSym::L) {
            out.a0 = Some(-1);
            parity = 0;
            i = 2;
        } else {
            out.a0 = Some(0);
        }
    } else {
        // incomplete prefix: through the first closing symbol
        while i < m.len() && m[i] == MgcfSym::R {
            i += 1;
        }
        if i == m.len() {
            return finish_suffix(out, w, 0, i as u64);
        }
        match m[i] {
            MgcfSym::J => {
                i += 1;
                parity ^= 1;
                if m.get(i) == Some(&MgcfSym::L) {
                    i += 1;
                    parity ^= 1;
                }
            }
            MgcfSym::C => i += 1,
            _ => return Err(Error::parse(i, "no segment factorization")),
        }
        out.prefix = w[..i].to_vec();
    }
    while i < m.len() {
        let start = i;
        let mut k = 0u64;
        while i < m.len() && m[i] == MgcfSym::R {
            k += 1;
            i += 1;
        }
        if k == 0 {
            return Err(Error::parse(start, "no segment factorization"));
        }
        if i == m.len() {
            return finish_suffix(out, w, start, k);
        }
        let seg_parity = parity;
        let digits = match m[i] {
            MgcfSym::J if m.get(i + 1) == Some(&MgcfSym::L) => {
                if k < 2 {
                    return Err(Error::parse(start, "no segment factorization"));
                }
                i += 2;
                vec![(k - 1, head_tag(k - 1)), (1, Some(OneTag::M))]
            }
            MgcfSym::J => {
                i += 1;
                parity ^= 1;
                vec![(k, head_tag(k))]
            }
            MgcfSym::C => {
                i += 1;
                vec![(k, head_tag(k)), (1, Some(OneTag::C))]
            }
            _ => return Err(Error::parse(i, "no segment factorization")),
        };
        out.segments.push(Segment {
            parity: seg_parity,
            digits,
            start,
            end: i,
        });
    }
    Ok(out)
}

fn finish_suffix(
    mut out: SegmentParse,
    w: &[CutSym],
    start: usize,
    k: u64,
) -> Result<SegmentParse> {
    out.suffix = w[start..].to_vec();
    out.suffix_encodings.push(SuffixEncoding::AtLeast(k));
    if k >= 2 {
        out.suffix_encodings.push(SuffixEncoding::ThenOneM(k - 1));
    }
    Ok(out)
}

/// Online cutting → ACF for a vertical word with `a0 = 0`: emits only symbols forced for
/// every continuation of the input.
pub fn acf_from_cutting(w: &[CutSym]) -> Result<Vec<AcfSym>> {
    Ok(acf_from_cutting_timed(w)?
        .into_iter()
        .map(|(s, _)| s)
        .collect())
}

/// Like [`acf_from_cutting`], pairing each output symbol with the number of input
/// symbols read when it was emitted.
pub fn acf_from_cutting_timed(w: &[CutSym]) -> Result<Vec<(AcfSym, usize)>> {
    let m = mgcf_from_cutting(w)?;
    if m.get(1) == Some(&MgcfSym::L) {
        return Err(Error::domain("additive expansions need θ > 0"));
    }
    let mut out = Vec::new();
    let emit = |out: &mut Vec<(AcfSym, usize)>, syms: &[AcfSym], t: usize| {
        out.extend(syms.iter().map(|&s| (s, t)));
    };
    // state: run length k of R's after the last closing, and whether the last closing
    // was a bare J that may still turn into J L
    let mut k = 0u64;
    let mut open_j = false;
    for (idx, &s) in m.iter().enumerate() {
        let t = idx + 1;
        if idx == 0 {
            continue;
        }
        if idx == 1 {
            // a0 = 0 is settled once the symbol after J is not L
            emit(&mut out, &[AcfSym::F], t);
        }
        match s {
            MgcfSym::R => {
                if open_j {
                    // R^k J then R: the digit was k
                    emit(&mut out, &[AcfSym::R, AcfSym::F], t);
                    open_j = false;
                    k = 0;
                }
                k += 1;
                if k >= 2 {
                    emit(&mut out, &[AcfSym::R], t);
                }
            }
            MgcfSym::J => {
                if open_j || k == 0 {
                    return Err(Error::parse(idx, "no segment factorization"));
                }
                open_j = true;
            }
            MgcfSym::L => {
                if !open_j || k < 2 {
                    return Err(Error::parse(idx, "no segment factorization"));
                }
                // R^k J L: digit k − 1 then 1_m
                emit(&mut out, &[AcfSym::F, AcfSym::R, AcfSym::F], t);
                open_j = false;
                k = 0;
            }
            MgcfSym::C => {
                if open_j || k == 0 {
                    return Err(Error::parse(idx, "no segment factorization"));
                }
                emit(&mut out, &[AcfSym::R, AcfSym::F, AcfSym::R, AcfSym::F], t);
                k = 0;
            }
        }
    }
    Ok(out)
}

/// Cutting → ACF for a complete vertical expansion of a rational `θ ≥ 0`.
pub fn acf_from_cutting_complete(w: &[CutSym]) -> Result<Vec<AcfSym>> {
    let p = parse_segments(w)?;
    let ad = p
        .to_annotated()
        .ok_or_else(|| Error::parse(0, "a vertical cutting sequence starts with J"))?;
    if !ad.finite {
        return Err(Error::domain("word ends inside a segment"));
    }
    acf_of_digits(&ad.digits())
}
