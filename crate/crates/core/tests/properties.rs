//! Property tests for the invariants of scalars, double rotations, the
//! billiard conjugacy, languages, section maps and predictions.

use mirrorlab::billiard::{folded_return, from_billiard_params, section_coordinate, section_point};
use mirrorlab::classify::{classify_map, predict_complexity, ChainOutcome, ClassKind, DirectionClass};
use mirrorlab::language::build_language;
use mirrorlab::sections::{SectionMap, SectionState};
use mirrorlab::{DirectionSlope, DoubleRotation, Rational, Scalar, Table};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Scalar> {
    (-2000i64..2000, 1i64..500).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn cubic() -> impl Strategy<Value = Scalar> {
    let r = || (-50i64..50, 1i64..30).prop_map(|(n, d)| Rational::new(n, d));
    (r(), r(), r()).prop_map(|(a, b, c)| Scalar::cubic(a, b, c))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![rational(), cubic()]
}

fn unit(max_den: i64) -> impl Strategy<Value = Scalar> {
    (2..=max_den).prop_flat_map(|d| (0..d).prop_map(move |n| Scalar::ratio(n, d)))
}

fn open_unit(max_den: i64) -> impl Strategy<Value = Scalar> {
    (2..=max_den).prop_flat_map(|d| (1..d).prop_map(move |n| Scalar::ratio(n, d)))
}

fn rotation() -> impl Strategy<Value = DoubleRotation> {
    (unit(60), unit(60), open_unit(60)).prop_map(|(a, b, c)| DoubleRotation::new(a, b, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mod1_is_idempotent_and_in_unit(x in scalar()) {
        let m = x.mod1();
        prop_assert!(m.in_unit());
        prop_assert_eq!(m.mod1(), m.clone());
        let diff = &x - &m;
        prop_assert!(diff.is_rational() && diff.as_rational().unwrap().is_integer());
    }

    #[test]
    fn field_laws(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        if !x.is_zero() {
            prop_assert_eq!(&x / &x, Scalar::one());
        }
    }

    #[test]
    fn order_agrees_with_floats_when_separated(x in scalar(), y in scalar()) {
        let (fx, fy) = (x.to_f64(), y.to_f64());
        if (fx - fy).abs() > 1e-6 {
            prop_assert_eq!(x < y, fx < fy);
        }
        prop_assert_eq!(x.cmp(&y), (&x - &y).signum().cmp(&0));
    }

    #[test]
    fn preimages_invert_the_map(t in rotation(), y in unit(500)) {
        for (z, branch) in t.preimages(&y) {
            prop_assert_eq!(t.apply(&z), y.clone());
            prop_assert_eq!(t.branch(&z), branch);
        }
        let image = t.apply(&y);
        prop_assert!(t.preimages(&image).iter().any(|(z, _)| *z == y));
        prop_assert!(t.preimages(&y).len() <= 2);
    }

    #[test]
    fn coding_shifts_along_orbits(t in rotation(), y in unit(500)) {
        let w = t.encode(&y, 12);
        prop_assert_eq!(w[0], t.branch(&y));
        prop_assert_eq!(&t.encode(&t.apply(&y), 11)[..], &w[1..]);
    }

    #[test]
    fn attractor_prefixes_are_nested(t in rotation()) {
        let mut prev = t.attractor_prefix(0);
        prop_assert_eq!(prev.measure(), Scalar::one());
        for n in 1..=10 {
            let next = t.attractor_prefix(n);
            prop_assert!(next.is_subset_of(&prev));
            prop_assert!(next.measure() <= prev.measure());
            prev = next;
        }
    }

    #[test]
    fn coded_orbits_belong_to_the_language(t in rotation(), ys in prop::collection::vec(unit(400), 1..8)) {
        let levels = build_language(&t, 10);
        let words: std::collections::HashSet<Vec<u8>> = levels.words(10).into_iter().collect();
        for y in ys {
            prop_assert!(words.contains(&t.encode(&y, 10)));
        }
        for n in 0..10 {
            prop_assert!(levels.p(n + 1) >= levels.p(n));
        }
    }

    /// Folded-table returns to x = a equal the double rotation.
    #[test]
    fn billiard_returns_are_the_double_rotation(
        a in (1i64..50).prop_map(|n| Scalar::ratio(n, 101)),
        b in (1i64..50).prop_map(|n| Scalar::ratio(n, 103)),
        t in (-300i64..300, 1i64..40).prop_map(|(n, d)| Scalar::ratio(n, d)),
        u in unit(997),
    ) {
        let table = Table::new(a, b).unwrap();
        let d = DirectionSlope::new(t);
        let map = from_billiard_params(&table, &d).unwrap();
        let Ok(mut p) = section_point(&table, &d, &u) else { return Ok(()) };
        let mut u = u;
        for _ in 0..10 {
            let Ok((next, bounce)) = folded_return(&table, &p) else { return Ok(()) };
            let nu = section_coordinate(&table, &d, &next);
            prop_assert_eq!(&nu, &map.apply(&u));
            prop_assert_eq!(bounce, map.branch(&u) == 0);
            p = next;
            u = nu;
        }
    }

    #[test]
    fn section_heights_rotate_rigidly(
        (p, q) in prop_oneof![Just((1u32, 3u32)), Just((1, 4)), Just((2, 5)), Just((3, 7))],
        b in (1i64..99).prop_map(|n| Scalar::ratio(n, 199)),
        t in (-500i64..500, 1i64..60).prop_map(|(n, d)| Scalar::ratio(n, d)),
        i in 0u32..7,
        y in unit(300),
    ) {
        let m = SectionMap::new(p, q, b, t.clone()).unwrap();
        let s = SectionState::new(i % q, y.clone());
        let next = m.apply_s(&s);
        prop_assert_eq!(next.y, (&y + &(&t / &Scalar::int(q as i64))).mod1());
        prop_assert!(next.i < q);
        for n in 0..6 {
            prop_assert!(m.preimage_count(&s, n) <= q as usize);
        }
    }

    /// Once a rational class is decided at a longer horizon, a shorter one
    /// agrees unless it was already exceptional there.
    #[test]
    fn classes_are_stable_under_longer_horizons(t in rotation()) {
        let long = classify_map(&t, 80);
        let short = classify_map(&t, 40);
        if long.kind != ClassKind::Exceptional {
            prop_assert_eq!(short.kind, long.kind);
        }
        if short.kind == ClassKind::Exceptional {
            prop_assert_eq!(long.kind, ClassKind::Exceptional);
        }
    }

    #[test]
    fn predictions_are_continuous(e in prop::option::of(1usize..60), f in prop::option::of(1usize..60)) {
        let chain = |n: Option<usize>| match n {
            Some(n0) => ChainOutcome::Doubles { n0 },
            None => ChainOutcome::Dies { step: 3 },
        };
        let kind = match (e.is_some(), f.is_some()) {
            (true, true) => ClassKind::A3,
            (false, false) => ClassKind::A1,
            _ => ClassKind::A2,
        };
        let class = DirectionClass { kind, chain_e: chain(e), chain_f: chain(f), connection: None };
        let pred = predict_complexity(&class).unwrap();
        prop_assert_eq!(pred.eval(0), 1);
        for w in pred.pieces.windows(2) {
            let k = w[1].from as i64 - 1;
            prop_assert_eq!(w[0].slope * k + w[0].intercept, w[1].slope * k + w[1].intercept);
            prop_assert!(w[1].slope > w[0].slope);
        }
        prop_assert!(pred.pieces.iter().all(|p| (1..=3).contains(&p.slope)));
    }
}

#[test]
fn gamma_is_the_cubic_root() {
    let g = Scalar::gamma();
    let lhs = &(&g * &g) * &g;
    let rhs = &(&(&g * &g) + &(&Scalar::int(3) * &g)) - &Scalar::one();
    assert_eq!(lhs, rhs);
    assert!((g.to_f64() - 0.311_107_817_465_982_2).abs() < 1e-15);
}
