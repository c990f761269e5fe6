use geodesic_cf::automata::*;
use geodesic_cf::cf::{acf_of, acf_to_farey, fmt_farey, ocf_digits, AcfSym};
use geodesic_cf::cutting::{acf_from_cutting, cutting_from_mgcf, CutSym};
use geodesic_cf::exactnum::{n_matrix, ExtReal, IntMatrix2, QuadSurd, Rational};
use geodesic_cf::mgcf::{annotate_ones, mgcf_direct, OneTag};
use geodesic_cf::tessellation::vertical_symbols;
use num_integer::Integer;

fn fractions(max_q: i64, lo_num: i64, lo_den: i64, hi_num: i64, hi_den: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    for q in 1..=max_q {
        for p in lo_num * q / lo_den - 1..=hi_num * q / hi_den + 1 {
            let r = Rational::new(p.into(), q.into());
            if p.gcd(&q) == 1
                && r > Rational::new(lo_num.into(), lo_den.into())
                && r < Rational::new(hi_num.into(), hi_den.into())
            {
                out.push(r);
            }
        }
    }
    out
}

fn acf(r: &Rational) -> Vec<AcfSym> {
    acf_of(&ExtReal::rational(r.clone())).unwrap().collect()
}

fn tokens(w: &[CutSym]) -> Vec<&'static str> {
    w.iter().map(|s| s.token()).collect()
}

#[test]
fn farey_machine_matches_direct_conversion() {
    let t = acf_to_farey_machine();
    let corpus: Vec<Vec<String>> = fractions(45, 0, 1, 3, 1)
        .iter()
        .map(|r| acf_tokens_of(&acf(r)))
        .collect();
    assert!(corpus.len() >= 1000);
    for (w, r) in corpus.iter().zip(fractions(45, 0, 1, 3, 1)) {
        let direct = fmt_farey(&acf_to_farey(&acf(&r)));
        assert_eq!(run(&t, w).unwrap().concat(), direct, "{}", r);
    }
    assert_eq!(max_lag(&t, &corpus).unwrap(), 1);
}

#[test]
fn parity_machine_matches_cutting_module() {
    let t = parity_machine();
    let mut corpus = Vec::new();
    for r in fractions(60, -1, 2, 1, 2) {
        let w = mgcf_direct(&ExtReal::rational(r), 10_000).unwrap().word;
        let letters: Vec<String> = w.iter().map(|s| s.letter().to_string()).collect();
        let out = run(&t, &letters).unwrap();
        assert_eq!(out, tokens(&cutting_from_mgcf(&w)));
        corpus.push(letters);
    }
    assert!(corpus.len() >= 1000);
    assert_eq!(max_lag(&t, &corpus).unwrap(), 0);
}

#[test]
fn cutting_machine_matches_acf() {
    let t = cutting_to_acf_machine();
    let mut corpus = Vec::new();
    for r in fractions(85, 0, 1, 1, 2) {
        let theta = ExtReal::rational(r.clone());
        let w = vertical_symbols(&theta, 10_000).unwrap();
        let toks = tokens(&w);
        let complete = run_complete(&t, &toks).unwrap();
        assert_eq!(complete, acf_tokens_of(&acf(&r)), "θ = {}", r);
        for k in 1..=w.len() {
            let online = run(&t, &toks[..k]).unwrap();
            assert_eq!(
                online,
                acf_tokens_of(&acf_from_cutting(&w[..k]).unwrap()),
                "θ = {} k = {}",
                r,
                k
            );
        }
        corpus.push(toks);
    }
    assert!(corpus.len() >= 1000);
    let lag = max_lag(&t, &corpus).unwrap();
    assert!(lag <= 4, "lag {}", lag);
}

#[test]
fn cutting_machine_rejects_non_vertical_start() {
    let t = cutting_to_acf_machine();
    let e = run(&t, &["L", "J"]).unwrap_err();
    assert!(e.to_string().contains("rejected"), "{}", e);
}

#[test]
fn homographic_machine_on_rationals() {
    let n = n_matrix();
    for r in fractions(40, 0, 1, 1, 1) {
        let x = acf(&r);
        let mut h = HomographicMachine::new(n.clone()).unwrap().tracking(true);
        let mut out = Vec::new();
        for &s in &x {
            out.extend(h.push(s).unwrap());
            assert!(h.check_invariant());
        }
        out.extend(h.finish().unwrap());
        let nx = n.apply_rational(&r).unwrap();
        assert_eq!(out, acf(&nx), "x = {}", r);
        assert!(out.len() <= 3 * x.len(), "x = {}", r);
    }
    let m = IntMatrix2::new(3, 1, 1, 2);
    for r in fractions(25, 0, 1, 4, 1) {
        let y = m.apply_rational(&r).unwrap();
        assert_eq!(homographic_acf(&m, &acf(&r)).unwrap(), acf(&y), "x = {}", r);
    }
}

fn tags_by_annotation(x: &QuadSurd, len: usize) -> Vec<(usize, OneTag)> {
    let theta = ExtReal::Finite(x.clone());
    let ad = annotate_ones(&ocf_digits(&theta, len + 80).unwrap(), &theta).unwrap();
    ad.tail
        .iter()
        .take(len)
        .enumerate()
        .filter_map(|(i, (_, t))| t.map(|t| (i, t)))
        .collect()
}

#[test]
fn streamed_tags_match_annotation() {
    let x = &(&QuadSurd::sqrt(3) - &QuadSurd::from_int(1))
        * &QuadSurd::rational(Rational::new(1.into(), 2.into()));
    let digits = digits_after_point(&x, 140);
    let s = streamed_tags(&digits, 60).unwrap();
    assert_eq!(s.tags, tags_by_annotation(&x, 60));
    for d in [7i64, 13, 19, 21] {
        let y = QuadSurd::sqrt(d);
        let frac = &y - &QuadSurd::rational(Rational::from_integer(y.floor()));
        let digits = digits_after_point(&frac, 140);
        assert_eq!(
            streamed_tags(&digits, 60).unwrap().tags,
            tags_by_annotation(&frac, 60),
            "√{}",
            d
        );
    }
}

#[test]
fn lookahead_demo() {
    let mut last = 0;
    for j in 1..=3 {
        let d = unbounded_lookahead_demo(j).unwrap();
        assert_eq!(d.tags, [OneTag::C, OneTag::M, OneTag::H]);
        assert_eq!(d.critical, 4 * j + 2);
        assert!(d.common_digits >= 4 * j + 2);
        assert_eq!(d.lookahead, 14 * j + 5);
        assert!(d.lookahead > last);
        last = d.lookahead;
    }
}

#[test]
fn benchmark_report_shape() {
    let x = &(&QuadSurd::sqrt(3) - &QuadSurd::from_int(1))
        * &QuadSurd::rational(Rational::new(1.into(), 2.into()));
    let r = benchmark_tags(&x, &[50, 100], 1).unwrap();
    assert_eq!(r.points.len(), 2);
    assert!(r.points.iter().all(|p| p.all_hits && p.max_consumed > 0));
}
