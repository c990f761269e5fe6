use geodesic_cf::cutting::{find_edge_forbidden, fmt_cutting, CutSym};
use geodesic_cf::exactnum::{ExtReal, QuadSurd, Rational};
use geodesic_cf::shiftspace::{
    block_status, decide_block, enumeration_heads, excluded_initial, BlockStatus, CentralSequence,
};
use geodesic_cf::tessellation::{corner_hits_vertical, trace, vertical_symbols, GeodesicSpec};
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeSet;

const ALPHABET: [CutSym; 5] = [CutSym::L, CutSym::R, CutSym::J, CutSym::C1, CutSym::C2];

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn vertical_corpus(max_q: i64, limit: usize) -> Vec<Vec<CutSym>> {
    let mut out = Vec::new();
    for q in 1..=max_q {
        for p in -(q - 1) / 2..=(q - 1) / 2 {
            if p.gcd(&q) == 1 {
                out.push(vertical_symbols(&ExtReal::rational(r(p, q)), limit).unwrap());
            }
        }
    }
    out
}

fn factors(words: &[Vec<CutSym>], max_len: usize) -> BTreeSet<Vec<CutSym>> {
    let mut set = BTreeSet::new();
    for w in words {
        for i in 0..w.len() {
            for k in 1..=max_len.min(w.len() - i) {
                set.insert(w[i..i + k].to_vec());
            }
        }
    }
    set
}

fn all_words(max_len: usize, alphabet: &[CutSym]) -> Vec<Vec<CutSym>> {
    let mut out: Vec<Vec<CutSym>> = Vec::new();
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &s in alphabet {
                let mut v: Vec<CutSym> = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn confirmed(block: &[CutSym]) -> bool {
    let v = decide_block(block);
    let Some(g) = v.witness else { return false };
    let t = trace(&g, 400 + 4 * block.len()).unwrap();
    t.symbols().windows(block.len()).any(|x| x == block)
}

#[test]
fn traced_factors_are_never_forbidden() {
    let blocks = factors(&vertical_corpus(500, 200), 10);
    assert!(blocks.len() > 1000, "{} blocks", blocks.len());
    eprintln!("{} distinct factors", blocks.len());
    let bad: Vec<String> = blocks
        .iter()
        .filter(|b| block_status(b).is_forbidden())
        .map(|b| fmt_cutting(b))
        .collect();
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(10)]);
}

#[test]
fn admissible_verdicts_carry_witnesses() {
    let mut blocks: BTreeSet<Vec<CutSym>> = all_words(5, &ALPHABET).into_iter().collect();
    blocks.extend(factors(&vertical_corpus(120, 200), 10));
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..20_000 {
        let n = rng.gen_range(6..=10);
        let w: Vec<CutSym> = (0..n).map(|_| ALPHABET[rng.gen_range(0..3)]).collect();
        if find_edge_forbidden(&w).is_none() {
            blocks.insert(w);
        }
    }
    let mut admissible = 0;
    for b in &blocks {
        if block_status(b).is_admissible() {
            admissible += 1;
            assert!(confirmed(b), "no confirmed witness for {}", fmt_cutting(b));
        }
    }
    assert!(admissible > 1000);
}

#[test]
fn initial_words_have_vertical_witnesses() {
    // prefixes up to length 9 stop changing well before q = 400
    let initial: BTreeSet<Vec<CutSym>> = vertical_corpus(400, 9)
        .into_iter()
        .flat_map(|w| (1..=w.len()).map(move |k| w[..k].to_vec()))
        .collect();
    let mut decided = BTreeSet::new();
    let mut layer = vec![vec![CutSym::J]];
    while let Some(w) = layer.pop() {
        assert_eq!(
            block_status(&w),
            BlockStatus::Admissible,
            "{}",
            fmt_cutting(&w)
        );
        assert!(!excluded_initial(&w));
        assert!(
            initial.contains(&w),
            "no vertical θ starts with {}",
            fmt_cutting(&w)
        );
        decided.insert(w.clone());
        if w.len() == 9 {
            continue;
        }
        for s in ALPHABET {
            let mut v = w.clone();
            v.push(s);
            match block_status(&v) {
                BlockStatus::Admissible => layer.push(v),
                BlockStatus::ExcludedInitialOnly => assert!(excluded_initial(&v)),
                _ => {}
            }
        }
    }
    assert_eq!(decided, initial);
    assert!(decided.len() > 200);
    assert!(excluded_initial(&[CutSym::R, CutSym::J]));
}

#[test]
fn central_sequences_have_one_corner() {
    let mut checked = 0;
    for head in enumeration_heads(4) {
        let Some(cs) = CentralSequence::from_head(&head) else {
            continue;
        };
        assert_eq!(
            cs.corner_tags().unwrap(),
            vec![cs.critical_index()],
            "{:?}",
            head
        );
        assert_eq!(corner_hits_vertical(&cs.theta).len(), 1, "{:?}", head);
        let (w, _) = cs.corner().unwrap();
        assert_eq!(w.iter().filter(|s| s.is_corner()).count(), 1);
        checked += 1;
    }
    assert!(checked > 50);
}

#[test]
fn two_sided_corpus_matches_decisions() {
    let mut words = Vec::new();
    let mut rng = StdRng::seed_from_u64(71);
    for d in 2..=400i64 {
        let root = QuadSurd::sqrt(d);
        if root.is_rational() {
            continue;
        }
        for k in 0..4 {
            let (s, t) = if k == 0 {
                (r(0, 1), r(0, 1))
            } else {
                (
                    r(rng.gen_range(-40..40), 160),
                    r(rng.gen_range(-40..40), 160),
                )
            };
            let head = &QuadSurd::rational(s) - &root;
            let foot = &QuadSurd::rational(t) + &root;
            let Ok(g) = GeodesicSpec::new(ExtReal::Finite(head), ExtReal::Finite(foot)) else {
                continue;
            };
            if let Ok(tr) = trace(&g, 200) {
                words.push(tr.symbols());
            }
        }
    }
    assert!(words.len() > 1000);
    let seen = factors(&words, 8);
    for b in &seen {
        assert!(
            block_status(b).is_admissible(),
            "{} occurs but is forbidden",
            fmt_cutting(b)
        );
    }
    for w in all_words(6, &[CutSym::L, CutSym::R, CutSym::J]) {
        assert_eq!(
            block_status(&w).is_admissible(),
            seen.contains(&w),
            "{}",
            fmt_cutting(&w)
        );
    }
}
