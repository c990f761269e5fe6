//! Admissible and forbidden blocks of cutting sequences.
//!
//! [`decide_block`] reads a block in both parities, turns every reading into a constraint
//! model over the free past `y` and future `w` (see [`model`]), decides each model exactly
//! (see [`solver`]) and backs every admissible verdict with a traced geodesic. Central
//! sequences, the corner-resolution words built from them, minimal forbidden blocks and
//! follower-set separation sit on top.

pub mod model;
pub mod solver;
mod witness;

pub use crate::cutting::edge_forbidden_blocks;
pub use model::{constraints, readings, Constraint, Model, PastPoint, Readings, Rel};
pub use solver::simplest_between;

use crate::cf::{ocf_digits, OcfDigits};
use crate::cutting::{find_edge_forbidden, fmt_cutting, CutSym};
use crate::error::{Error, Result};
use crate::exactnum::{int, n_of, ExtReal, Rational};
use crate::mgcf::{annotate_ones, OneTag};
use crate::tessellation::{trace, GeodesicSpec};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

/// A block with its free head and tail variables, as a list of sign conditions.
pub type ConstraintSystem = Model;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockStatus {
    /// Occurs in some cutting sequence, including at the start of a vertical one.
    Admissible,
    /// Contains an edge-forbidden factor or has no segment reading.
    EdgeForbidden,
    /// Every reading has an infeasible constraint model.
    WholeForbidden,
    /// Occurs in cutting sequences but never as the first symbols of a vertical one.
    ExcludedInitialOnly,
}

impl BlockStatus {
    pub fn is_admissible(self) -> bool {
        matches!(
            self,
            BlockStatus::Admissible | BlockStatus::ExcludedInitialOnly
        )
    }

    pub fn is_forbidden(self) -> bool {
        !self.is_admissible()
    }

    pub fn name(self) -> &'static str {
        match self {
            BlockStatus::Admissible => "admissible",
            BlockStatus::EdgeForbidden => "edge-forbidden",
            BlockStatus::WholeForbidden => "whole-forbidden",
            BlockStatus::ExcludedInitialOnly => "excluded-initial-only",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockVerdict {
    pub block: Vec<CutSym>,
    pub status: BlockStatus,
    /// A geodesic whose trace contains the block.
    pub witness: Option<GeodesicSpec>,
    pub reason: Option<String>,
}

#[derive(Serialize)]
struct WitnessJson {
    head: String,
    foot: String,
}

#[derive(Serialize)]
struct VerdictJson {
    block: String,
    status: BlockStatus,
    witness: Option<WitnessJson>,
    reason: Option<String>,
}

impl BlockVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        let v = VerdictJson {
            block: fmt_cutting(&self.block),
            status: self.status,
            witness: self.witness.as_ref().map(|g| WitnessJson {
                head: g.head.to_string(),
                foot: g.foot.to_string(),
            }),
            reason: self.reason.clone(),
        };
        serde_json::to_value(v).expect("verdicts serialize")
    }
}

/// The two three-symbol resolutions of a corner symbol.
pub fn resolutions(sym: CutSym) -> Option<[[CutSym; 3]; 2]> {
    use CutSym::*;
    match sym {
        C1 => Some([[J, R, J], [L, J, L]]),
        C2 => Some([[J, L, J], [R, J, R]]),
        _ => None,
    }
}

struct Analysis {
    status: BlockStatus,
    reason: Option<String>,
    feasible: Vec<(Model, solver::Decision)>,
    runs: Vec<u8>,
}

fn analyze(block: &[CutSym]) -> Analysis {
    let fail = |status, reason: String| Analysis {
        status,
        reason: Some(reason),
        feasible: vec![],
        runs: vec![],
    };
    if block.is_empty() {
        return Analysis {
            status: BlockStatus::Admissible,
            reason: None,
            feasible: vec![],
            runs: vec![],
        };
    }
    if let Some((i, b)) = find_edge_forbidden(block) {
        return fail(
            BlockStatus::EdgeForbidden,
            format!(
                "edge-forbidden factor {} at position {}",
                fmt_cutting(&b),
                i
            ),
        );
    }
    let r = readings(block);
    if r.models.is_empty() && r.runs.is_empty() {
        return fail(
            BlockStatus::EdgeForbidden,
            "no segment factorization in either parity".to_string(),
        );
    }
    let mut feasible = Vec::new();
    let mut infeasible = Vec::new();
    for m in r.models {
        let d = solver::decide(&m);
        if d.feasible() {
            feasible.push((m, d));
        } else {
            infeasible.push(m);
        }
    }
    if feasible.is_empty() && r.runs.is_empty() {
        let parts: Vec<String> = infeasible
            .iter()
            .map(|m| {
                let c: Vec<String> = solver::conflict(m).iter().map(|c| c.describe()).collect();
                format!("reading {} [{}]: {}", m.reading(), m, c.join(" and "))
            })
            .collect();
        return fail(BlockStatus::WholeForbidden, parts.join("; "));
    }
    let initial = feasible.iter().any(|(_, d)| d.initial());
    Analysis {
        status: if initial {
            BlockStatus::Admissible
        } else {
            BlockStatus::ExcludedInitialOnly
        },
        reason: None,
        feasible,
        runs: r.runs,
    }
}

/// Status of a block without searching for a witness.
pub fn block_status(block: &[CutSym]) -> BlockStatus {
    analyze(block).status
}

fn run_witness(block: &[CutSym]) -> Option<GeodesicSpec> {
    let k = block.len() as i64;
    [
        Rational::new(1.into(), (k + 2).into()),
        Rational::new((-1).into(), (k + 2).into()),
    ]
    .into_iter()
    .filter_map(|t| GeodesicSpec::vertical(ExtReal::rational(t)).ok())
    .find(|g| {
        trace(g, block.len() + 8)
            .map(|t| contains(&t.symbols(), block))
            .unwrap_or(false)
    })
}

fn contains(hay: &[CutSym], needle: &[CutSym]) -> bool {
    needle.is_empty() || hay.windows(needle.len()).any(|w| w == needle)
}

/// Decides a block and, when it is admissible, finds a geodesic realizing it.
pub fn decide_block(block: &[CutSym]) -> BlockVerdict {
    let a = analyze(block);
    let witness = if block.is_empty() {
        GeodesicSpec::vertical(ExtReal::rational(Rational::zero())).ok()
    } else if a.status.is_admissible() {
        let mut ordered: Vec<&(Model, solver::Decision)> =
            a.feasible.iter().filter(|(_, d)| d.initial()).collect();
        ordered.extend(a.feasible.iter().filter(|(_, d)| !d.initial()));
        ordered
            .into_iter()
            .find_map(|(m, d)| witness::find(m, &d.samples, block))
            .or_else(|| {
                if a.runs.is_empty() {
                    None
                } else {
                    run_witness(block)
                }
            })
    } else {
        None
    };
    BlockVerdict {
        block: block.to_vec(),
        status: a.status,
        witness,
        reason: a.reason,
    }
}

/// A rational point satisfying some model of the block, found by random sampling.
///
/// Independent of the exact cell decomposition; used to cross-check it.
pub fn sample_feasible(
    block: &[CutSym],
    trials: usize,
    seed: u64,
) -> Option<(Model, Rational, Rational)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let models = readings(block).models;
    if models.is_empty() {
        return None;
    }
    for _ in 0..trials {
        let m = &models[rng.gen_range(0..models.len())];
        let y = if !m.points.is_empty() && rng.gen_bool(0.2) {
            m.points[rng.gen_range(0..m.points.len())].y.clone()
        } else {
            let q: i64 = rng.gen_range(2..400);
            let p: i64 = rng.gen_range(1..q);
            Rational::new(p.into(), q.into()) * &m.y_hi
        };
        let eq = constraints(m).into_iter().find(|c| c.rel == Rel::Equal);
        let w = match eq {
            // solve a·yw + b·y + c·w + d = 0 for w
            Some(c) => {
                let coef = &c.a * &y + &c.c;
                if coef.is_zero() {
                    continue;
                }
                -(&c.b * &y + &c.d) / coef
            }
            None => {
                if m.w_lo_closed && rng.gen_bool(0.1) {
                    m.w_lo.clone()
                } else {
                    let q: i64 = rng.gen_range(2..400);
                    let p: i64 = rng.gen_range(1..q);
                    &m.w_lo + Rational::new(p.into(), q.into()) * (&m.w_hi - &m.w_lo)
                }
            }
        };
        if solver::satisfies(m, &y, &w) {
            return Some((m.clone(), y, w));
        }
    }
    None
}

/// `W` is excluded as an initial block exactly when `L̄W` or `R̄W` is forbidden.
pub fn excluded_initial(w: &[CutSym]) -> bool {
    [CutSym::L, CutSym::R].into_iter().any(|s| {
        let mut b = vec![s];
        b.extend_from_slice(w);
        block_status(&b).is_forbidden()
    })
}

/// A finite digit context around a critical 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbiguityQuery {
    /// `d₁ … d_n` in reading order; `d_n` is adjacent to the critical 1.
    pub head: Vec<u64>,
    /// A marker `d₀ = ∞` before the head: the context starts a vertical expansion.
    pub initial: bool,
    /// `b₁ … b_m` after the critical 1.
    pub tail: Vec<u64>,
}

fn cf_value(a0: i64, digits: &[u64]) -> Rational {
    OcfDigits::from_parts(a0.into(), digits.to_vec(), true)
        .value()
        .expect("finite")
}

impl AmbiguityQuery {
    fn reversed_head(&self, bump: bool) -> Vec<u64> {
        let mut d: Vec<u64> = self.head.iter().rev().copied().collect();
        if bump && !self.initial {
            if let Some(last) = d.last_mut() {
                *last += 1;
            }
        }
        d
    }

    pub fn delta0(&self) -> Rational {
        cf_value(0, &self.reversed_head(false))
    }

    pub fn delta1(&self) -> Rational {
        cf_value(0, &self.reversed_head(true))
    }

    pub fn beta0(&self) -> Rational {
        cf_value(1, &self.tail)
    }

    pub fn beta1(&self) -> Rational {
        if self.tail.is_empty() {
            return int(2);
        }
        let mut t = self.tail.clone();
        *t.last_mut().expect("nonempty") += 1;
        cf_value(1, &t)
    }
}

fn closed(a: Rational, b: Rational) -> (Rational, Rational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Whether the closed intervals `[β₀, β₁]` and `[N(δ₀), N(δ₁)]` meet.
pub fn is_ambiguous(q: &AmbiguityQuery) -> bool {
    let (b0, b1) = closed(q.beta0(), q.beta1());
    let (n0, n1) = closed(n_of(&q.delta0()), n_of(&q.delta1()));
    b0.max(n0) <= b1.min(n1)
}

/// Tail `b₁ … b_m` with `[1; b₁, …, b_m] = N([0; d_n, …, d₁])`.
pub fn central_head_to_tail(head: &[u64]) -> Vec<u64> {
    let rev: Vec<u64> = head.iter().rev().copied().collect();
    let beta = n_of(&cf_value(0, &rev));
    ocf_digits(&ExtReal::rational(beta), usize::MAX)
        .expect("finite rational")
        .tail
}

/// `head, 1_c, tail` together with its rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralSequence {
    pub head: Vec<u64>,
    pub tail: Vec<u64>,
    /// `[0; head, 1, tail]`, or its value shifted into `(−1/2, 0)` when `d₁ = 1`.
    pub theta: Rational,
}

impl CentralSequence {
    /// `None` when the equality forces an empty tail (the head `[1]`).
    pub fn from_head(head: &[u64]) -> Option<Self> {
        if head.is_empty() || head.contains(&0) {
            return None;
        }
        let tail = central_head_to_tail(head);
        if tail.is_empty() {
            return None;
        }
        let mut digits = head.to_vec();
        digits.push(1);
        digits.extend_from_slice(&tail);
        let a0 = if head[0] >= 2 { 0 } else { -1 };
        Some(CentralSequence {
            head: head.to_vec(),
            tail,
            theta: cf_value(a0, &digits),
        })
    }

    /// Index of the `1_c` among the digits after `a0`.
    pub fn critical_index(&self) -> usize {
        self.head.len()
    }

    /// Indices of digits tagged `1_c` in the expansion of `θ`.
    pub fn corner_tags(&self) -> Result<Vec<usize>> {
        let t = ExtReal::rational(self.theta.clone());
        let d = ocf_digits(&t, usize::MAX)?;
        let ad = annotate_ones(&d, &t)?;
        Ok(ad
            .tail
            .iter()
            .enumerate()
            .filter(|(_, (_, tag))| *tag == Some(OneTag::C))
            .map(|(i, _)| i)
            .collect())
    }

    /// The full cutting sequence of `⟨∞, θ⟩`.
    pub fn cutting(&self) -> Result<Vec<CutSym>> {
        let g = GeodesicSpec::vertical(ExtReal::rational(self.theta.clone()))?;
        let limit = 3 * (self.head.iter().sum::<u64>() + self.tail.iter().sum::<u64>()) as usize
            + 3 * (self.head.len() + self.tail.len())
            + 16;
        let t = trace(&g, limit)?;
        if !t.cusp {
            return Err(Error::Budget("trace did not reach the cusp".into()));
        }
        Ok(t.symbols())
    }

    /// `(cutting sequence, position of its only corner)`.
    pub fn corner(&self) -> Result<(Vec<CutSym>, usize)> {
        let w = self.cutting()?;
        let corners: Vec<usize> = (0..w.len()).filter(|&i| w[i].is_corner()).collect();
        match corners.as_slice() {
            [c] => Ok((w, *c)),
            _ => Err(Error::domain(format!(
                "{} has {} corners",
                fmt_cutting(&w),
                corners.len()
            ))),
        }
    }
}

/// A word built from a central sequence, with its status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerWord {
    pub word: Vec<CutSym>,
    pub status: BlockStatus,
}

/// The eight words `X · T[..c] · resolution · T[c+1..] · Y` with `X, Y ∈ {L̄, R̄}`.
pub fn corner_words(cs: &CentralSequence) -> Result<Vec<CornerWord>> {
    let (t, c) = cs.corner()?;
    let res = resolutions(t[c]).expect("corner symbol");
    let mut out = Vec::with_capacity(8);
    for x in [CutSym::L, CutSym::R] {
        for r in &res {
            for y in [CutSym::L, CutSym::R] {
                let mut w = vec![x];
                w.extend_from_slice(&t[..c]);
                w.extend_from_slice(r);
                w.extend_from_slice(&t[c + 1..]);
                w.push(y);
                let status = block_status(&w);
                out.push(CornerWord { word: w, status });
            }
        }
    }
    Ok(out)
}

/// Longest block length accepted by [`enumerate_minimal_forbidden`].
pub const MAX_ENUMERATION_LEN: usize = 41;

#[derive(Clone, Debug, Default)]
pub struct MinimalForbidden {
    /// Sorted by length, then symbol order.
    pub blocks: Vec<Vec<CutSym>>,
    /// How many blocks come from central sequences (the rest are edge-forbidden).
    pub central_derived: usize,
}

fn compositions(sum: u64, out: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>) {
    if sum == 0 {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        return;
    }
    for d in 1..=sum {
        cur.push(d);
        compositions(sum - d, out, cur);
        cur.pop();
    }
}

/// Heads used for enumeration: digits in `{1, 2}` up to length `n`, and every head with
/// digit sum at most 8.
pub fn enumeration_heads(n: usize) -> Vec<Vec<u64>> {
    let mut set = BTreeSet::new();
    for len in 1..=n {
        for mask in 0..(1u64 << len) {
            set.insert(
                (0..len)
                    .map(|i| 1 + ((mask >> i) & 1))
                    .collect::<Vec<u64>>(),
            );
        }
    }
    let mut all = Vec::new();
    for s in 1..=8 {
        compositions(s, &mut all, &mut Vec::new());
    }
    set.extend(all);
    set.into_iter().collect()
}

/// Memoized admissibility shared across worker threads.
#[derive(Default)]
pub struct StatusCache {
    map: Mutex<HashMap<Vec<CutSym>, bool>>,
}

impl StatusCache {
    pub fn is_admissible(&self, w: &[CutSym]) -> bool {
        if let Some(&v) = self.map.lock().expect("poisoned").get(w) {
            return v;
        }
        let v = block_status(w).is_admissible();
        self.map.lock().expect("poisoned").insert(w.to_vec(), v);
        v
    }

    /// Forbidden, with every proper factor admissible. The language is factorial, so the
    /// two maximal proper factors suffice.
    pub fn is_minimal_forbidden(&self, w: &[CutSym]) -> bool {
        if w.is_empty() || self.is_admissible(w) {
            return false;
        }
        self.is_admissible(&w[1..]) && self.is_admissible(&w[..w.len() - 1])
    }
}

fn central_forbidden(head: &[u64], max_len: usize, cache: &StatusCache) -> Vec<Vec<CutSym>> {
    let Some(cs) = CentralSequence::from_head(head) else {
        return vec![];
    };
    let Ok((t, _)) = cs.corner() else {
        return vec![];
    };
    if t.len() + 4 > max_len {
        return vec![];
    }
    let Ok(words) = corner_words(&cs) else {
        return vec![];
    };
    words
        .into_iter()
        .filter(|w| w.status.is_forbidden() && cache.is_minimal_forbidden(&w.word))
        .map(|w| w.word)
        .collect()
}

/// Minimal forbidden blocks of length at most `max_len` from central sequences, together
/// with the edge-forbidden blocks.
pub fn enumerate_minimal_forbidden(max_len: usize, jobs: usize) -> Result<MinimalForbidden> {
    if max_len > MAX_ENUMERATION_LEN {
        return Err(Error::Budget(format!(
            "max length {} exceeds {}",
            max_len, MAX_ENUMERATION_LEN
        )));
    }
    // heads over {1,2} of length n give words of length at most 12n+5
    let n = ((max_len + 6) / 12).max(1);
    let heads = enumeration_heads(n);
    let cache = StatusCache::default();
    let jobs = jobs.max(1);
    let found: Mutex<BTreeSet<Vec<CutSym>>> = Mutex::new(BTreeSet::new());
    std::thread::scope(|s| {
        for chunk in 0..jobs {
            let (heads, cache, found) = (&heads, &cache, &found);
            s.spawn(move || {
                for h in heads.iter().skip(chunk).step_by(jobs) {
                    let ws = central_forbidden(h, max_len, cache);
                    found.lock().expect("poisoned").extend(ws);
                }
            });
        }
    });
    let central = found.into_inner().expect("poisoned");
    let central_derived = central.len();
    let mut all: BTreeSet<Vec<CutSym>> = central;
    all.extend(
        edge_forbidden_blocks()
            .into_iter()
            .filter(|b| b.len() <= max_len),
    );
    let mut blocks: Vec<Vec<CutSym>> = all.into_iter().collect();
    blocks.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    Ok(MinimalForbidden {
        blocks,
        central_derived,
    })
}

/// A continuation telling apart the follower sets of two left words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FollowerSeparation {
    pub left_j: Vec<CutSym>,
    pub left_k: Vec<CutSym>,
    pub continuation: Vec<CutSym>,
    /// `left_j · continuation` is admissible and `left_k · continuation` is not, or the
    /// reverse when false.
    pub admissible_after_j: bool,
}

/// The central sequence with head `[3, 2^{4i+2}]`.
pub fn follower_family(i: usize) -> Option<CentralSequence> {
    let mut head = vec![3];
    head.extend(std::iter::repeat(2).take(4 * i + 2));
    CentralSequence::from_head(&head)
}

/// Separates the follower sets of left words ending in the heads `[3, 2^{4j+2}]` and
/// `[3, 2^{4k+2}]`.
pub fn follower_separation(j: usize, k: usize) -> Result<FollowerSeparation> {
    if j == k || j == 0 || k == 0 {
        return Err(Error::domain("follower separation needs distinct j, k ≥ 1"));
    }
    let fam = |i: usize| -> Result<(Vec<CutSym>, usize)> {
        follower_family(i)
            .ok_or_else(|| Error::domain("empty central tail"))?
            .corner()
    };
    let (tj, cj) = fam(j)?;
    let (tk, ck) = fam(k)?;
    for x in [CutSym::L, CutSym::R] {
        let mut uj = vec![x];
        uj.extend_from_slice(&tj[..cj]);
        let mut uk = vec![x];
        uk.extend_from_slice(&tk[..ck]);
        for (t, c) in [(&tj, cj), (&tk, ck)] {
            let res = resolutions(t[c]).expect("corner symbol");
            for r in &res {
                for y in [CutSym::L, CutSym::R] {
                    let mut v = r.to_vec();
                    v.extend_from_slice(&t[c + 1..]);
                    v.push(y);
                    let a = block_status(&[uj.as_slice(), &v].concat()).is_admissible();
                    let b = block_status(&[uk.as_slice(), &v].concat()).is_admissible();
                    if a != b {
                        return Ok(FollowerSeparation {
                            left_j: uj,
                            left_k: uk,
                            continuation: v,
                            admissible_after_j: a,
                        });
                    }
                }
            }
        }
    }
    Err(Error::domain(format!(
        "no separating continuation for j = {}, k = {}",
        j, k
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutting::parse_cutting;

    fn w(s: &str) -> Vec<CutSym> {
        parse_cutting(s).unwrap()
    }

    #[test]
    fn simplest_between_rationals() {
        use crate::exactnum::{rat, QuadSurd};
        let q = |p, d| QuadSurd::rational(rat(p, d));
        assert_eq!(simplest_between(&q(1, 3), &q(1, 2)), rat(2, 5));
        assert_eq!(simplest_between(&q(0, 1), &q(1, 1)), rat(1, 2));
        assert_eq!(simplest_between(&q(3, 2), &q(7, 2)), rat(2, 1));
        assert_eq!(simplest_between(&q(0, 1), &q(1, 5)), rat(1, 6));
        let s3 = QuadSurd::sqrt(3);
        assert_eq!(simplest_between(&q(17, 10), &s3), rat(12, 7));
    }

    #[test]
    fn lone_j_is_admissible() {
        let v = decide_block(&w("J"));
        assert_eq!(v.status, BlockStatus::Admissible);
        assert!(v.witness.is_some());
    }

    #[test]
    fn empty_block() {
        assert_eq!(decide_block(&[]).status, BlockStatus::Admissible);
    }

    #[test]
    fn edge_forbidden() {
        let v = decide_block(&w("LJRJJ"));
        assert_eq!(v.status, BlockStatus::EdgeForbidden);
        assert!(v.reason.unwrap().contains("JJ"));
    }

    #[test]
    fn ambiguity_examples() {
        let q = |h: &[u64], t: &[u64]| AmbiguityQuery {
            head: h.to_vec(),
            initial: false,
            tail: t.to_vec(),
        };
        assert!(is_ambiguous(&q(&[2], &[4])));
        assert!(!is_ambiguous(&q(&[2], &[7])));
        assert!(is_ambiguous(&q(&[2, 1], &[7])));
    }

    #[test]
    fn central_tails() {
        assert_eq!(central_head_to_tail(&[2]), vec![4]);
        assert_eq!(central_head_to_tail(&[2; 6]), vec![3, 8, 4]);
        let mut h = vec![3];
        h.extend([2; 6]);
        assert_eq!(central_head_to_tail(&h), vec![3, 8, 4, 10]);
        assert!(CentralSequence::from_head(&[1]).is_none());
    }

    #[test]
    fn verdict_json_shape() {
        let v = decide_block(&w("JJ")).to_json();
        assert_eq!(v["status"], "edge-forbidden");
        assert!(v["witness"].is_null());
        assert_eq!(v["block"], "JJ");
    }
}
