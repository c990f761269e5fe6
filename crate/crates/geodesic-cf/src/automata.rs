//! Finite-state transducers between the expansions, the homographic machine for `N`, and
//! the look-ahead constructions around central sequences.

use crate::cf::{acf_of, ocf_digits, AcfSym, OcfDigits, OcfStream};
use crate::cutting::{parity_step, parity_unstep, CutSym};
use crate::error::{Error, Result};
use crate::exactnum::{ExtReal, IntMatrix2, QuadSurd, Rational};
use crate::mgcf::{annotate_ones, MgcfSym, OneTag};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::time::{Duration, Instant};

/// A deterministic transducer whose edges print words, possibly empty.
///
/// Missing edges lead to the `reject` state when one is declared; a run that enters it
/// fails at that input position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    pub states: Vec<String>,
    pub initial: usize,
    pub alphabet: Vec<String>,
    edges: HashMap<(usize, String), (usize, Vec<String>)>,
    /// Words printed when the input ends in a state.
    finals: HashMap<usize, Vec<String>>,
    pub reject: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    from: String,
    #[serde(rename = "in")]
    input: String,
    out: Vec<String>,
    to: String,
}

#[derive(Serialize, Deserialize)]
struct FinalJson {
    state: String,
    out: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct TransducerJson {
    states: Vec<String>,
    initial: String,
    edges: Vec<EdgeJson>,
    #[serde(default)]
    finals: Vec<FinalJson>,
    #[serde(default)]
    reject: Option<String>,
}

fn strs(w: &[&str]) -> Vec<String> {
    w.iter().map(|s| s.to_string()).collect()
}

impl Transducer {
    pub fn new(states: &[&str], initial: &str, alphabet: &[&str]) -> Self {
        Transducer {
            states: strs(states),
            initial: states
                .iter()
                .position(|s| *s == initial)
                .expect("initial state"),
            alphabet: strs(alphabet),
            edges: HashMap::new(),
            finals: HashMap::new(),
            reject: None,
        }
    }

    fn index(&self, state: &str) -> usize {
        self.states
            .iter()
            .position(|s| s == state)
            .unwrap_or_else(|| panic!("unknown state {}", state))
    }

    pub fn edge(&mut self, from: &str, input: &str, out: &[&str], to: &str) -> &mut Self {
        let (f, t) = (self.index(from), self.index(to));
        self.edges.insert((f, input.to_string()), (t, strs(out)));
        self
    }

    pub fn final_output(&mut self, state: &str, out: &[&str]) -> &mut Self {
        let s = self.index(state);
        self.finals.insert(s, strs(out));
        self
    }

    /// Sends every missing edge to `state`.
    pub fn reject_to(&mut self, state: &str) -> &mut Self {
        let r = self.index(state);
        self.reject = Some(r);
        for s in 0..self.states.len() {
            for a in self.alphabet.clone() {
                self.edges.entry((s, a)).or_insert((r, vec![]));
            }
        }
        self
    }

    /// True when every state has exactly one edge per input symbol.
    pub fn is_total(&self) -> bool {
        (0..self.states.len()).all(|s| {
            self.alphabet
                .iter()
                .all(|a| self.edges.contains_key(&(s, a.clone())))
        })
    }

    pub fn transition(&self, state: usize, input: &str) -> Option<(usize, &[String])> {
        self.edges
            .get(&(state, input.to_string()))
            .map(|(t, o)| (*t, o.as_slice()))
    }

    pub fn start(&self) -> TransducerRun<'_> {
        TransducerRun {
            t: self,
            state: self.initial,
            pos: 0,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut edges: Vec<EdgeJson> = self
            .edges
            .iter()
            .map(|((f, i), (t, o))| EdgeJson {
                from: self.states[*f].clone(),
                input: i.clone(),
                out: o.clone(),
                to: self.states[*t].clone(),
            })
            .collect();
        let order = |s: &str| self.states.iter().position(|x| x == s);
        let sym = |s: &str| self.alphabet.iter().position(|x| x == s);
        edges.sort_by_key(|e| (order(&e.from), sym(&e.input)));
        let mut finals: Vec<FinalJson> = self
            .finals
            .iter()
            .map(|(s, o)| FinalJson {
                state: self.states[*s].clone(),
                out: o.clone(),
            })
            .collect();
        finals.sort_by_key(|f| order(&f.state));
        let j = TransducerJson {
            states: self.states.clone(),
            initial: self.states[self.initial].clone(),
            edges,
            finals,
            reject: self.reject.map(|r| self.states[r].clone()),
        };
        serde_json::to_value(j).expect("transducers serialize")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: TransducerJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::parse(0, e.to_string()))?;
        let find = |s: &str| {
            j.states
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| Error::parse(0, format!("unknown state {}", s)))
        };
        let mut alphabet: Vec<String> = Vec::new();
        let mut edges = HashMap::new();
        for e in &j.edges {
            if !alphabet.contains(&e.input) {
                alphabet.push(e.input.clone());
            }
            edges.insert(
                (find(&e.from)?, e.input.clone()),
                (find(&e.to)?, e.out.clone()),
            );
        }
        let mut finals = HashMap::new();
        for f in &j.finals {
            finals.insert(find(&f.state)?, f.out.clone());
        }
        Ok(Transducer {
            initial: find(&j.initial)?,
            reject: j.reject.as_deref().map(find).transpose()?,
            states: j.states,
            alphabet,
            edges,
            finals,
        })
    }
}

/// One execution of a transducer.
#[derive(Clone, Debug)]
pub struct TransducerRun<'a> {
    t: &'a Transducer,
    state: usize,
    pos: usize,
}

impl<'a> TransducerRun<'a> {
    /// Reads one symbol and returns what the edge prints.
    pub fn step(&mut self, input: &str) -> Result<&'a [String]> {
        if !self.t.alphabet.iter().any(|a| a == input) {
            return Err(Error::parse(
                self.pos,
                format!("symbol '{}' is not in the input alphabet", input),
            ));
        }
        let (to, out) = self
            .t
            .transition(self.state, input)
            .ok_or_else(|| Error::parse(self.pos, format!("no edge for '{}'", input)))?;
        if Some(to) == self.t.reject {
            return Err(Error::parse(
                self.pos,
                format!(
                    "'{}' rejected in state {}",
                    input, self.t.states[self.state]
                ),
            ));
        }
        self.state = to;
        self.pos += 1;
        Ok(out)
    }

    pub fn state(&self) -> &'a str {
        &self.t.states[self.state]
    }

    /// The word printed when the input ends here.
    pub fn finish(&self) -> &'a [String] {
        self.t
            .finals
            .get(&self.state)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }
}

/// Output along the run; the input is treated as a prefix of a longer stream.
pub fn run<S: AsRef<str>>(t: &Transducer, input: &[S]) -> Result<Vec<String>> {
    let mut r = t.start();
    let mut out = Vec::new();
    for s in input {
        out.extend_from_slice(r.step(s.as_ref())?);
    }
    Ok(out)
}

/// Output along the run followed by the final word of the last state.
pub fn run_complete<S: AsRef<str>>(t: &Transducer, input: &[S]) -> Result<Vec<String>> {
    let mut r = t.start();
    let mut out = Vec::new();
    for s in input {
        out.extend_from_slice(r.step(s.as_ref())?);
    }
    out.extend_from_slice(r.finish());
    Ok(out)
}

/// Longest stretch of consecutive input symbols that print nothing, over a corpus.
pub fn max_lag<S: AsRef<str>>(t: &Transducer, corpus: &[Vec<S>]) -> Result<usize> {
    let mut worst = 0;
    for w in corpus {
        let mut r = t.start();
        let mut silent = 0;
        for s in w {
            if r.step(s.as_ref())?.is_empty() {
                silent += 1;
                worst = worst.max(silent);
            } else {
                silent = 0;
            }
        }
    }
    Ok(worst)
}

/// ACF → Farey: `F` switches state silently, `R` prints `R` in state `+` and `D` in `−`.
pub fn acf_to_farey_machine() -> Transducer {
    let mut t = Transducer::new(&["+", "-"], "+", &["R", "F"]);
    t.edge("+", "R", &["R"], "+")
        .edge("+", "F", &[], "-")
        .edge("-", "R", &["D"], "-")
        .edge("-", "F", &[], "+");
    t
}

fn parity_name(p: u8) -> &'static str {
    if p == 0 {
        "even"
    } else {
        "odd"
    }
}

/// MGCF → cutting sequence: the parity of the letters read so far picks the image.
pub fn parity_machine() -> Transducer {
    let letters = [MgcfSym::J, MgcfSym::L, MgcfSym::R, MgcfSym::C];
    let names: Vec<String> = letters.iter().map(|s| s.letter().to_string()).collect();
    let alphabet: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut t = Transducer::new(&["even", "odd"], "even", &alphabet);
    for p in 0..2u8 {
        for (s, n) in letters.iter().zip(&names) {
            let (c, q) = parity_step(*s, p);
            t.edge(parity_name(p), n, &[c.token()], parity_name(q));
        }
    }
    t
}

fn acf_tokens(s: &str) -> Vec<&str> {
    s.split("").filter(|c| !c.is_empty()).collect()
}

/// Vertical cutting sequence → ACF of `θ > 0`, reading segments as they close.
///
/// States record the parity and how much of the current segment has been seen: `run1`
/// and `run2` after one or at least two letters `R`, `j1`/`j2` after the closing `J` of
/// such a run. The final word flushes a segment closed by a bare `J`.
pub fn cutting_to_acf_machine() -> Transducer {
    let phases = ["first", "start", "run1", "run2", "j1", "j2"];
    let mut names = vec!["init".to_string()];
    for ph in phases {
        for p in 0..2u8 {
            names.push(format!("{}-{}", ph, parity_name(p)));
        }
    }
    names.push("dead".to_string());
    let states: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let alphabet: Vec<&str> = CutSym::ALL.iter().map(|s| s.token()).collect();
    let mut t = Transducer::new(&states, "init", &alphabet);
    let st = |ph: &str, p: u8| format!("{}-{}", ph, parity_name(p));
    t.edge("init", "J", &[], &st("first", 1));
    for p in 0..2u8 {
        for c in CutSym::ALL {
            let Some((m, q)) = parity_unstep(c, p) else {
                continue;
            };
            let tok = c.token();
            let mut add = |from: &str, out: &str, to: String| {
                t.edge(&st(from, p), tok, &acf_tokens(out), &to);
            };
            match m {
                MgcfSym::R => {
                    add("first", "F", st("run1", q));
                    add("start", "", st("run1", q));
                    add("run1", "R", st("run2", q));
                    add("run2", "R", st("run2", q));
                    add("j1", "RF", st("run1", q));
                    add("j2", "RF", st("run1", q));
                }
                MgcfSym::J => {
                    add("run1", "", st("j1", q));
                    add("run2", "", st("j2", q));
                }
                MgcfSym::L => add("j2", "FRF", st("start", q)),
                MgcfSym::C => {
                    add("run1", "RFRF", st("start", q));
                    add("run2", "RFRF", st("start", q));
                }
            }
        }
        t.final_output(&st("j1", p), &["R", "F"]);
        t.final_output(&st("j2", p), &["R", "F"]);
    }
    t.reject_to("dead");
    t
}

pub fn acf_tokens_of(w: &[AcfSym]) -> Vec<String> {
    w.iter()
        .map(|s| match s {
            AcfSym::F => "F".to_string(),
            AcfSym::R => "R".to_string(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum End {
    Fin(BigInt, BigInt),
    PosInf,
    NegInf,
}

impl End {
    fn of(p: BigInt, q: BigInt) -> End {
        match q.sign() {
            num_bigint::Sign::NoSign => {
                if p.is_positive() {
                    End::PosInf
                } else {
                    End::NegInf
                }
            }
            num_bigint::Sign::Minus => End::Fin(-p, -q),
            num_bigint::Sign::Plus => End::Fin(p, q),
        }
    }

    fn ge_one(&self) -> bool {
        match self {
            End::Fin(p, q) => p >= q,
            End::PosInf => true,
            End::NegInf => false,
        }
    }

    fn lt_one(&self) -> bool {
        !self.ge_one()
    }

    fn le_zero(&self) -> bool {
        match self {
            End::Fin(p, _) => !p.is_positive(),
            End::PosInf => false,
            End::NegInf => true,
        }
    }
}

/// Streams the ACF of `m(x)` from the ACF of `x`.
///
/// The state `M` satisfies `emitted · M = m · consumed` up to sign. An output letter is
/// printed once it is forced for every value the unread input can take: `[0, ∞]` at the
/// start and after `R`, `[1, ∞]` after `F`.
#[derive(Clone, Debug)]
pub struct HomographicMachine {
    m: IntMatrix2,
    state: IntMatrix2,
    after_f: bool,
    emitted: IntMatrix2,
    consumed: IntMatrix2,
    track: bool,
}

impl HomographicMachine {
    pub fn new(m: IntMatrix2) -> Result<Self> {
        if m.det().is_zero() {
            return Err(Error::domain("homographic machine needs det ≠ 0"));
        }
        Ok(HomographicMachine {
            state: m.clone(),
            m,
            after_f: false,
            emitted: IntMatrix2::identity(),
            consumed: IntMatrix2::identity(),
            track: cfg!(debug_assertions),
        })
    }

    /// Keeps the emitted and consumed products so the invariant can be checked.
    pub fn tracking(mut self, on: bool) -> Self {
        self.track = on;
        self
    }

    pub fn state(&self) -> &IntMatrix2 {
        &self.state
    }

    pub fn check_invariant(&self) -> bool {
        !self.track || (&self.emitted * &self.state).eq_projective(&(&self.m * &self.consumed))
    }

    fn bounds(&self) -> Option<(End, End)> {
        let s = &self.state;
        let lo = if self.after_f {
            BigInt::one()
        } else {
            BigInt::zero()
        };
        let den_lo = &s.c * &lo + &s.d;
        if !s.c.is_zero() && (den_lo.is_zero() || den_lo.sign() != s.c.sign()) {
            return None;
        }
        let e1 = End::of(&s.a * &lo + &s.b, den_lo);
        let e2 = if s.c.is_zero() {
            if s.a.is_zero() {
                End::of(s.b.clone(), s.d.clone())
            } else if (s.a.is_positive()) == (s.d.is_positive()) {
                End::PosInf
            } else {
                End::NegInf
            }
        } else {
            End::of(s.a.clone(), s.c.clone())
        };
        Some((e1, e2))
    }

    fn emit(&mut self, sym: AcfSym, out: &mut Vec<AcfSym>) {
        let inv = match sym {
            AcfSym::R => IntMatrix2::new(1, -1, 0, 1),
            AcfSym::F => IntMatrix2::new(0, 1, 1, 0),
        };
        self.state = &inv * &self.state;
        if self.track {
            self.emitted = &self.emitted * &sym.matrix();
        }
        out.push(sym);
    }

    fn drain(&mut self, out: &mut Vec<AcfSym>) -> Result<()> {
        while let Some((e1, e2)) = self.bounds() {
            if e1.le_zero() && e2.le_zero() {
                return Err(Error::domain("the image is not positive"));
            }
            if e1.ge_one() && e2.ge_one() {
                self.emit(AcfSym::R, out);
            } else if e1.lt_one() && e2.lt_one() && !(e1.le_zero() || e2.le_zero()) {
                self.emit(AcfSym::F, out);
            } else {
                break;
            }
            debug_assert!(self.check_invariant());
        }
        Ok(())
    }

    /// Absorbs one input letter and returns the letters it forces.
    pub fn push(&mut self, sym: AcfSym) -> Result<Vec<AcfSym>> {
        self.state = &self.state * &sym.matrix();
        if self.track {
            self.consumed = &self.consumed * &sym.matrix();
        }
        self.after_f = sym == AcfSym::F;
        let mut out = Vec::new();
        self.drain(&mut out)?;
        debug_assert!(self.check_invariant());
        Ok(out)
    }

    /// Ends the input (its value is the word applied to `∞`) and flushes the rest.
    pub fn finish(mut self) -> Result<Vec<AcfSym>> {
        let s = &self.state;
        let mut out = Vec::new();
        if s.c.is_zero() {
            return Ok(out);
        }
        let v = Rational::new(s.a.clone(), s.c.clone());
        if v.is_negative() {
            return Err(Error::domain("the image is not positive"));
        }
        if v.is_zero() {
            self.emit(AcfSym::F, &mut out);
            return Ok(out);
        }
        let rest: Vec<AcfSym> = acf_of(&ExtReal::rational(v))?.collect();
        for r in rest {
            self.emit(r, &mut out);
        }
        Ok(out)
    }
}

/// ACF of `m(x)` for a finite ACF word of `x`.
pub fn homographic_acf(m: &IntMatrix2, input: &[AcfSym]) -> Result<Vec<AcfSym>> {
    let mut h = HomographicMachine::new(m.clone())?;
    let mut out = Vec::new();
    for &s in input {
        out.extend(h.push(s)?);
    }
    out.extend(h.finish()?);
    Ok(out)
}

/// Online comparison of a continued fraction fed one ACF letter at a time against a
/// fixed digit sequence.
struct CfCompare<'a> {
    target: &'a [u64],
    index: usize,
    run: u64,
}

impl<'a> CfCompare<'a> {
    /// Orientation of digit `k`: a larger digit at an even index means a larger value.
    fn sign(&self, larger: bool) -> Ordering {
        match (larger, self.index % 2 == 0) {
            (true, true) | (false, false) => Ordering::Greater,
            _ => Ordering::Less,
        }
    }

    fn target_digit(&self) -> Option<u64> {
        self.target.get(self.index).copied()
    }

    /// `Some(order of streamed value vs target)` once decided.
    fn feed(&mut self, s: AcfSym) -> Option<Ordering> {
        match s {
            AcfSym::R => {
                self.run += 1;
                match self.target_digit() {
                    Some(t) if self.run > t => Some(self.sign(true)),
                    _ => None,
                }
            }
            AcfSym::F => {
                let t = self.target_digit()?;
                if self.run < t {
                    return Some(self.sign(false));
                }
                self.index += 1;
                self.run = 0;
                None
            }
        }
    }

    /// The streamed expansion ended: its next digit is `∞`.
    fn end(&self) -> Option<Ordering> {
        if self.run > 0 {
            return None;
        }
        match self.target_digit() {
            None => Some(Ordering::Equal),
            Some(_) => Some(self.sign(true)),
        }
    }
}

/// Tag of the digit `a_{n+1} = 1`, decided by streaming `[a_n; …, a_1]` through the
/// homographic machine of `N` and comparing with `β_n = [1; a_{n+2}, …]`.
///
/// `digits` are `a_1, a_2, …`; `later` must reach far enough for the comparison to
/// finish. Returns the tag and how many input letters were consumed.
pub fn stream_tag(digits: &[u64], n: usize) -> Result<(OneTag, usize)> {
    if n == 0 {
        return Ok((OneTag::M, 0));
    }
    let beta: Vec<u64> = std::iter::once(1)
        .chain(digits[n + 1..].iter().copied())
        .collect();
    let mut h = HomographicMachine::new(IntMatrix2::new(2, 1, 1, 2))?.tracking(false);
    let mut cmp = CfCompare {
        target: &beta,
        index: 0,
        run: 0,
    };
    let to_tag = |o: Ordering| match o {
        // the streamed value is N(α); β above it is a hit
        Ordering::Less => OneTag::H,
        Ordering::Equal => OneTag::C,
        Ordering::Greater => OneTag::M,
    };
    let mut consumed = 0;
    for i in (0..n).rev() {
        let word = std::iter::repeat(AcfSym::R)
            .take(digits[i] as usize)
            .chain(std::iter::once(AcfSym::F));
        for s in word {
            consumed += 1;
            for o in h.push(s)? {
                if let Some(r) = cmp.feed(o) {
                    return Ok((to_tag(r), consumed));
                }
            }
        }
    }
    for o in h.finish()? {
        if let Some(r) = cmp.feed(o) {
            return Ok((to_tag(r), consumed));
        }
    }
    let r = cmp
        .end()
        .ok_or_else(|| Error::Budget("comparison needs more digits of β".into()))?;
    Ok((to_tag(r), consumed))
}

/// Tags of every digit 1 among the first `len` digits, streamed one comparison at a time.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StreamedTags {
    pub tags: Vec<(usize, OneTag)>,
    /// Largest number of input letters one comparison consumed.
    pub max_consumed: usize,
    pub total_consumed: usize,
}

pub fn streamed_tags(digits: &[u64], len: usize) -> Result<StreamedTags> {
    let mut r = StreamedTags::default();
    for n in 0..len.min(digits.len()) {
        if digits[n] != 1 {
            continue;
        }
        let (tag, c) = stream_tag(digits, n)?;
        r.tags.push((n, tag));
        r.max_consumed = r.max_consumed.max(c);
        r.total_consumed += c;
    }
    Ok(r)
}

/// First `count` digits `a_1, a_2, …` of `x ∈ (0, 1)`.
pub fn digits_after_point(x: &QuadSurd, count: usize) -> Vec<u64> {
    OcfStream::new(x)
        .skip(1)
        .take(count)
        .map(|d| d.to_u64().expect("digit fits in 64 bits"))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchPoint {
    pub len: usize,
    pub seconds: f64,
    pub max_consumed: usize,
    pub all_hits: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub points: Vec<BenchPoint>,
    /// Least-squares slope of `log time` against `log len`.
    pub exponent: f64,
    /// Largest ratio between the values of `max_consumed / len`.
    pub state_spread: f64,
}

/// Times [`streamed_tags`] on prefixes of `x`, keeping the fastest of `reps` runs.
pub fn benchmark_tags(x: &QuadSurd, lens: &[usize], reps: usize) -> Result<BenchReport> {
    let top = lens.iter().copied().max().unwrap_or(0);
    // the comparison for a digit near the end reads about as far past it as before it
    let digits = digits_after_point(x, 2 * top + 64);
    let mut points = Vec::new();
    for &len in lens {
        let mut best = Duration::MAX;
        let mut last = StreamedTags::default();
        for _ in 0..reps.max(1) {
            let t = Instant::now();
            last = streamed_tags(&digits, len)?;
            best = best.min(t.elapsed());
        }
        points.push(BenchPoint {
            len,
            seconds: best.as_secs_f64(),
            max_consumed: last.max_consumed,
            all_hits: last.tags.iter().skip(1).all(|(_, t)| *t == OneTag::H),
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.len as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.seconds.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let per: Vec<f64> = points
        .iter()
        .map(|p| p.max_consumed as f64 / p.len as f64)
        .collect();
    let hi = per.iter().cloned().fold(f64::MIN, f64::max);
    let lo = per.iter().cloned().fold(f64::MAX, f64::min);
    Ok(BenchReport {
        points,
        exponent: sxy / sxx,
        state_spread: hi / lo,
    })
}

/// Two expansions sharing a long prefix whose critical 1 gets different tags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LookaheadDemo {
    pub j: usize,
    /// Digits after `a0 = 0` of the central sequence and of the two continuations.
    pub central: Vec<u64>,
    pub miss: Vec<u64>,
    pub hit: Vec<u64>,
    pub critical: usize,
    pub tags: [OneTag; 3],
    /// Leading digits shared by the two continuations.
    pub common_digits: usize,
    /// Position, counted from the letter `R` of the critical 1, where the two ACF
    /// words first differ.
    pub lookahead: usize,
}

fn tag_at(digits: &[u64], i: usize) -> Result<OneTag> {
    let theta = OcfDigits::new(0, digits).value().expect("finite expansion");
    let t = ExtReal::rational(theta);
    let ad = annotate_ones(&ocf_digits(&t, usize::MAX)?, &t)?;
    ad.tail[i]
        .1
        .ok_or_else(|| Error::domain("critical digit is not 1"))
}

fn acf_from(digits: &[u64], from: usize) -> Vec<AcfSym> {
    let mut w = Vec::new();
    for &d in &digits[from..] {
        w.extend(std::iter::repeat(AcfSym::R).take(d as usize));
        w.push(AcfSym::F);
    }
    w
}

/// `[0; 2^{4j+2}, 1, 3, (8, 4)^j]` is central; ending it with `…, 4, 2` or `…, 3, 2`
/// resolves the critical 1 as a miss or a hit.
pub fn unbounded_lookahead_demo(j: usize) -> Result<LookaheadDemo> {
    if j == 0 {
        return Err(Error::domain("j ≥ 1"));
    }
    let mut central = vec![2u64; 4 * j + 2];
    let critical = central.len();
    central.extend([1, 3]);
    for _ in 0..j {
        central.extend([8, 4]);
    }
    let mut miss = central.clone();
    miss.push(2);
    let mut hit = central.clone();
    *hit.last_mut().expect("nonempty") = 3;
    hit.push(2);
    let tags = [
        tag_at(&central, critical)?,
        tag_at(&miss, critical)?,
        tag_at(&hit, critical)?,
    ];
    let common_digits = miss.iter().zip(&hit).take_while(|(a, b)| a == b).count();
    let (wm, wh) = (acf_from(&miss, critical), acf_from(&hit, critical));
    let diff = wm
        .iter()
        .zip(&wh)
        .position(|(a, b)| a != b)
        .unwrap_or(wm.len().min(wh.len()));
    Ok(LookaheadDemo {
        j,
        central,
        miss,
        hit,
        critical,
        tags,
        common_digits,
        lookahead: diff + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{fmt_acf, parse_acf};
    use crate::exactnum::rat;

    #[test]
    fn farey_machine_example() {
        let t = acf_to_farey_machine();
        assert_eq!(
            run(&t, &["R", "F", "R", "R", "F"]).unwrap(),
            vec!["R", "D", "D"]
        );
        assert!(run::<&str>(&t, &[]).unwrap().is_empty());
        assert!(t.is_total());
    }

    #[test]
    fn parity_machine_example() {
        let t = parity_machine();
        assert_eq!(run(&t, &["J", "L"]).unwrap(), vec!["J", "R"]);
        assert!(t.is_total());
    }

    #[test]
    fn rejects_foreign_symbols() {
        let t = acf_to_farey_machine();
        let e = run(&t, &["R", "X"]).unwrap_err();
        assert_eq!(
            e,
            Error::parse(1, "symbol 'X' is not in the input alphabet")
        );
    }

    #[test]
    fn json_round_trip() {
        let t = cutting_to_acf_machine();
        let back = Transducer::from_json(&t.to_json()).unwrap();
        assert_eq!(back.states, t.states);
        let w = ["J", "L", "L", "C1", "L", "L", "L", "L", "J"];
        assert_eq!(
            run_complete(&back, &w).unwrap(),
            run_complete(&t, &w).unwrap()
        );
    }

    #[test]
    fn homographic_examples() {
        let n = IntMatrix2::new(1, 2, 2, 1);
        let half = parse_acf("FRRF").unwrap();
        assert_eq!(fmt_acf(&homographic_acf(&n, &half).unwrap()), "RFRRRRF");
        let id = IntMatrix2::identity();
        let w = parse_acf("RRFRFRRRF").unwrap();
        assert_eq!(homographic_acf(&id, &w).unwrap(), w);
        let x: Vec<AcfSym> = acf_of(&ExtReal::rational(rat(70, 169))).unwrap().collect();
        let y: Vec<AcfSym> = acf_of(&ExtReal::rational(rat(136, 103))).unwrap().collect();
        let out = homographic_acf(&n, &x).unwrap();
        assert_eq!(out, y);
        assert!(out.len() <= 3 * x.len());
    }

    #[test]
    fn negative_image_rejected() {
        let m = IntMatrix2::new(-1, 0, 0, 1);
        assert!(homographic_acf(&m, &parse_acf("RRF").unwrap()).is_err());
    }
}
