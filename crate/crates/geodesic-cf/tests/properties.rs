use geodesic_cf::automata::HomographicMachine;
use geodesic_cf::cf::{
    acf_matrix, acf_of, acf_of_digits, acf_to_farey, convergents, farey_to_acf, ocf_digits,
    ocf_period, reduce_acf, AcfSym, OcfDigits,
};
use geodesic_cf::cutting::{cutting_from_mgcf, mgcf_from_cutting, parity_step, CutSym};
use geodesic_cf::exactnum::{
    compare, lft_apply, n_matrix, surd_floor, ExtReal, IntMatrix2, QuadSurd, Rational,
};
use geodesic_cf::mgcf::{mgcf_direct, mgcf_matrix, mgcf_parity};
use geodesic_cf::shiftspace::{block_status, sample_feasible, solver};
use geodesic_cf::tessellation::{periodic_corner_count, trace, vertical_symbols, GeodesicSpec};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;
use std::cmp::Ordering;

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn surd() -> impl Strategy<Value = QuadSurd> {
    (
        -1_000_000i64..=1_000_000,
        1i64..=1000,
        -1_000_000i64..=1_000_000,
        1i64..=1000,
        2i64..=1000,
    )
        .prop_map(|(a, b, c, e, d)| QuadSurd::new(r(a, b), r(c, e), d.into()))
}

fn unimodular() -> impl Strategy<Value = IntMatrix2> {
    let gens = [
        IntMatrix2::new(1, 1, 0, 1),
        IntMatrix2::new(1, -1, 0, 1),
        IntMatrix2::new(0, -1, 1, 0),
        IntMatrix2::new(0, 1, 1, 0),
    ];
    proptest::collection::vec(0usize..4, 0..50).prop_map(move |ix| {
        ix.iter()
            .fold(IntMatrix2::identity(), |m, &i| &m * &gens[i])
    })
}

/// θ = p/q with |θ| < 1/2.
fn small_rational(max_q: i64) -> impl Strategy<Value = Rational> {
    (1i64..=max_q)
        .prop_flat_map(|q| (Just(q), -(q - 1) / 2..=(q - 1) / 2))
        .prop_map(|(q, p)| r(p, q))
}

fn acf_word() -> impl Strategy<Value = Vec<AcfSym>> {
    // R^{a0} F R^{a1} F … with a_i ≥ 1 after the first
    (0u64..4, proptest::collection::vec(1u64..6, 0..40)).prop_map(|(a0, rest)| {
        let d = OcfDigits::new(a0 as i64, &rest);
        acf_of_digits(&d).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lft_inverse_round_trip(m in unimodular(), x in surd()) {
        let inv = m.inverse().unwrap();
        let y = lft_apply(&m, &ExtReal::Finite(x.clone())).unwrap();
        prop_assert_eq!(lft_apply(&inv, &y).unwrap(), ExtReal::Finite(x));
    }

    #[test]
    fn compare_is_a_total_order(a in surd(), b in surd(), c in surd()) {
        let (a, b, c) = (ExtReal::Finite(a), ExtReal::Finite(b), ExtReal::Finite(c));
        prop_assert_eq!(compare(&a, &b), compare(&b, &a).reverse());
        if compare(&a, &b) != Ordering::Greater && compare(&b, &c) != Ordering::Greater {
            prop_assert_ne!(compare(&a, &c), Ordering::Greater);
        }
        prop_assert_eq!(compare(&a, &ExtReal::PosInf), Ordering::Less);
    }

    #[test]
    fn compare_agrees_with_rationals(p1 in -1000i64..1000, q1 in 1i64..1000, p2 in -1000i64..1000, q2 in 1i64..1000) {
        let (x, y) = (r(p1, q1), r(p2, q2));
        prop_assert_eq!(compare(&ExtReal::rational(x.clone()), &ExtReal::rational(y.clone())), x.cmp(&y));
    }

    #[test]
    fn det_is_multiplicative(a in unimodular(), b in unimodular()) {
        prop_assert_eq!((&a * &b).det(), a.det() * b.det());
        prop_assert!(a.is_unimodular());
    }

    #[test]
    fn farey_acf_round_trip(w in acf_word()) {
        let back = farey_to_acf(&acf_to_farey(&w));
        let fs = w.iter().filter(|s| **s == AcfSym::F).count();
        if fs % 2 == 0 {
            prop_assert_eq!(back, reduce_acf(&w));
        } else {
            // the Farey word forgets a trailing state flip
            prop_assert!(acf_matrix(&reduce_acf(&w)).eq_projective(&(&acf_matrix(&back) * &AcfSym::F.matrix())));
        }
        let f = acf_to_farey(&w);
        prop_assert_eq!(acf_to_farey(&farey_to_acf(&f)), f);
    }

    #[test]
    fn acf_product_is_convergent_matrix(p in 0i64..2000, q in 1i64..=500) {
        let x = ExtReal::rational(r(p, q));
        let d = ocf_digits(&x, 10_000).unwrap();
        let w: Vec<AcfSym> = acf_of(&x).unwrap().collect();
        let c = convergents(&d);
        prop_assert_eq!(acf_matrix(&w), c.last().unwrap().matrix());
    }

    #[test]
    fn convergent_determinants_alternate(a0 in -5i64..5, tail in proptest::collection::vec(1u64..50, 0..30)) {
        let d = OcfDigits::new(a0, &tail);
        for (n, c) in convergents(&d).iter().enumerate() {
            let det = &c.p * &c.q_prev - &c.p_prev * &c.q;
            let want = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            prop_assert_eq!(det, want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn surd_periods_reproduce_value(a in 1i64..50, b in 1i64..20, dd in 2i64..200) {
        let x = QuadSurd::new(r(a, b), r(1, b), dd.into());
        prop_assume!(!x.is_rational());
        let p = ocf_period(&x, 5000).unwrap();
        prop_assert_eq!(p.value(), x);
    }

    #[test]
    fn floor_brackets_value(x in surd()) {
        let f = surd_floor(&x);
        let lo = QuadSurd::rational(Rational::from_integer(f.clone()));
        let hi = QuadSurd::rational(Rational::from_integer(f + 1));
        prop_assert!(lo <= x && x < hi);
    }

    #[test]
    fn mgcf_critical_values_and_parity(theta in small_rational(300)) {
        let e = mgcf_direct(&ExtReal::rational(theta), 10_000).unwrap();
        prop_assert!(e.terminated);
        for s in &e.critical {
            prop_assert!(s.signum() > 0);
        }
        for w in e.critical.windows(2) {
            prop_assert!(w[0] > w[1]);
        }
        for (n, m) in e.matrices.iter().enumerate() {
            prop_assert!(m.det().abs().is_one());
            let prefix = &e.word[..=n];
            let det = mgcf_matrix(prefix).det();
            prop_assert_eq!(det.is_negative(), mgcf_parity(prefix) == 1);
        }
    }

    #[test]
    fn cutting_round_trip_and_parity_law(theta in small_rational(200)) {
        let w = mgcf_direct(&ExtReal::rational(theta), 10_000).unwrap().word;
        prop_assert_eq!(mgcf_from_cutting(&cutting_from_mgcf(&w)).unwrap(), w.clone());
        let mut parity = 0u8;
        for (n, s) in w.iter().enumerate() {
            parity = parity_step(*s, parity).1;
            prop_assert_eq!(parity == 1, mgcf_matrix(&w[..=n]).det().is_negative());
        }
    }

    #[test]
    fn homographic_invariant_holds(p in 1i64..500, q in 1i64..500) {
        let x: Vec<AcfSym> = acf_of(&ExtReal::rational(r(p, q))).unwrap().collect();
        let mut h = HomographicMachine::new(n_matrix()).unwrap().tracking(true);
        for s in x {
            h.push(s).unwrap();
            prop_assert!(h.check_invariant());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn irrational_verticals_miss_corners(a in -400i64..400, v in 1i64..40, b in 1i64..400, d in 2i64..60) {
        let x = QuadSurd::new(r(a, b), r(1, v), d.into());
        prop_assume!(!x.is_rational());
        // fractional part shifted into (-1/2, 1/2)
        let theta = &(&x - &QuadSurd::rational(Rational::from_integer(x.floor()))) - &QuadSurd::rational(r(1, 2));
        let w = vertical_symbols(&ExtReal::Finite(theta), 500).unwrap();
        prop_assert!(w.iter().all(|s| !s.is_corner()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_feasible_points_agree_with_solver(
        w in proptest::collection::vec(prop_oneof![Just(CutSym::L), Just(CutSym::R), Just(CutSym::J), Just(CutSym::C1), Just(CutSym::C2)], 1..9),
        seed in 0u64..1_000_000,
    ) {
        if let Some((m, y, z)) = sample_feasible(&w, 200, seed) {
            prop_assert!(solver::satisfies(&m, &y, &z));
            prop_assert!(solver::decide(&m).feasible());
            prop_assert!(block_status(&w).is_admissible(), "sampled point for a forbidden block");
        }
    }
}

#[test]
fn closed_geodesic_reversal() {
    for d in [2u64, 3, 7, 13, 19, 21, 133] {
        let p = periodic_corner_count(d, 10_000).unwrap();
        let root = QuadSurd::sqrt(d as i64);
        let g = GeodesicSpec::new(ExtReal::Finite(-&root), ExtReal::Finite(root)).unwrap();
        let fwd = trace(&g, p.preperiod + 3 * p.period).unwrap().symbols();
        let period = &fwd[p.preperiod..p.preperiod + p.period];
        let rev: Vec<CutSym> = period.iter().rev().map(|s| s.inverse()).collect();
        let back = trace(&g.reversed(), 3 * p.period).unwrap().symbols();
        let cyc: Vec<CutSym> = rev
            .iter()
            .chain(rev.iter())
            .chain(rev.iter())
            .copied()
            .collect();
        let window = &back[back.len() - p.period..];
        assert!(cyc.windows(p.period).any(|x| x == window), "√{}", d);
        for (n, dd) in &p.points {
            // corner point N/(2D) + i√3/(2D) on x² + y² = d
            assert_eq!(
                n * n + BigInt::from(3),
                BigInt::from(4 * d) * dd * dd,
                "√{}",
                d
            );
        }
    }
}
