use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use diagonal_billiard::perimeter::{ccw_arc_length, make_table, perimeter_to_side, side_to_perimeter, PerimeterCoord};
use diagonal_billiard::{
    associated_family, associated_family_bruteforce, circular_order, simulate, simulate_unfolded, verify_all,
    weight_profile, AnchorSet, LaunchSense, LaunchSpec, Rational,
};

fn big(r: &Rational) -> BigRational {
    BigRational::new(r.numer(), r.denom())
}

fn rational() -> impl Strategy<Value = Rational> {
    let num = prop_oneof![-50i64..50, any::<i64>(), Just(i64::MIN), Just(i64::MAX)];
    let den = prop_oneof![1i64..50, 1i64..=i64::MAX];
    (num, den).prop_map(|(n, d)| Rational::from_bigints(BigInt::from(n), BigInt::from(d)))
}

fn coord() -> impl Strategy<Value = Rational> {
    (2i64..5000).prop_flat_map(|d| (1..d).prop_map(move |v| Rational::new(v, d)))
}

/// A launch with no corner at its start, and an orbit length.
fn launch() -> impl Strategy<Value = (LaunchSpec, usize)> {
    let p = (5i64..3000).prop_flat_map(|d| (1..=(d - 1) / 2).prop_map(move |u| Rational::new(u, d)));
    let sense = prop_oneof![Just(LaunchSense::Ccw), Just(LaunchSense::Cw)];
    (p, coord(), sense, 5usize..60).prop_filter_map("launch from a corner", |(p, s1, sense, n)| {
        let table = make_table(p).ok()?;
        let spec = LaunchSpec::with_sense(table, PerimeterCoord::new(s1).ok()?, sense).ok()?;
        Some((spec, n))
    })
}

proptest! {
    #[test]
    fn arithmetic_matches_bigrational(a in rational(), b in rational()) {
        prop_assert_eq!(big(&(&a + &b)), big(&a) + big(&b));
        prop_assert_eq!(big(&(&a - &b)), big(&a) - big(&b));
        prop_assert_eq!(big(&(&a * &b)), big(&a) * big(&b));
        if !b.is_zero() {
            prop_assert_eq!(big(&(&a / &b)), big(&a) / big(&b));
        }
        prop_assert_eq!(a.cmp(&b), big(&a).cmp(&big(&b)));
        prop_assert_eq!(big(&-&a), -big(&a));
    }

    #[test]
    fn field_laws(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
    }

    #[test]
    fn canonical_form(a in rational(), b in rational()) {
        let s = &a * &b;
        // Equal values have one representation.
        prop_assert_eq!(Rational::from_bigints(s.numer(), s.denom()), s.clone());
        prop_assert_eq!(s.is_small(), s.numer() > BigInt::from(i64::MIN) && s.numer() <= BigInt::from(i64::MAX)
            && s.denom() <= BigInt::from(i64::MAX));
        prop_assert_eq!(s.to_string().parse::<Rational>().unwrap(), s);
    }

    #[test]
    fn rem_euclid_lands_in_range(a in rational(), m in coord()) {
        let r = a.rem_euclid(&m);
        prop_assert!(!r.is_negative() && r < m);
        prop_assert!((&(&a - &r) / &m).is_integer());
    }

    #[test]
    fn perimeter_round_trip(p in (5i64..500).prop_flat_map(|d| (1..=(d - 1) / 2).prop_map(move |u| Rational::new(u, d))), s in coord()) {
        let table = make_table(p).unwrap();
        let coord = PerimeterCoord::new(s).unwrap();
        match perimeter_to_side(&table, &coord) {
            Ok(pt) => prop_assert_eq!(side_to_perimeter(&table, &pt).unwrap(), coord),
            Err(_) => prop_assert!(table.is_corner(coord.value())),
        }
    }

    #[test]
    fn arcs_in_both_directions_cover_the_perimeter(a in coord(), b in coord()) {
        prop_assume!(a != b);
        let (a, b) = (PerimeterCoord::new(a).unwrap(), PerimeterCoord::new(b).unwrap());
        let total = ccw_arc_length(&a, &b).unwrap() + ccw_arc_length(&b, &a).unwrap();
        prop_assert_eq!(total, Rational::ONE);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn unfolding_agrees_with_ray_tracing((spec, n) in launch()) {
        prop_assert_eq!(simulate(&spec, n), simulate_unfolded(&spec, n));
    }

    #[test]
    fn consecutive_points_lie_on_a_diagonal((spec, n) in launch()) {
        let Ok(orbit) = simulate(&spec, n) else { return Ok(()) };
        for pair in orbit.points().windows(2) {
            let (a, b) = (&pair[0].side_point, &pair[1].side_point);
            let (dx, dy) = (&b.x - &a.x, &b.y - &a.y);
            prop_assert!(!dx.is_zero());
            prop_assert_eq!(dx.abs(), dy.abs());
            // The move follows the outgoing direction of the first point.
            prop_assert_eq!(dx.signum(), i32::from(pair[0].outgoing.dx()));
            prop_assert_eq!(dy.signum(), i32::from(pair[0].outgoing.dy()));
        }
    }

    #[test]
    fn families_match_brute_force((spec, n) in launch()) {
        let Ok(orbit) = simulate(&spec, n) else { return Ok(()) };
        for anchors in [AnchorSet::FIRST, AnchorSet::BOTH] {
            prop_assert_eq!(associated_family(&orbit, anchors), associated_family_bruteforce(&orbit, anchors));
        }
    }

    #[test]
    fn the_first_family_grows_with_the_anchor_set((spec, n) in launch()) {
        let Ok(orbit) = simulate(&spec, n) else { return Ok(()) };
        let first = associated_family(&orbit, AnchorSet::FIRST).unwrap();
        let both = associated_family(&orbit, AnchorSet::BOTH).unwrap();
        for seg in &first.segments {
            prop_assert!(both.segments.contains(seg), "{} missing", seg);
        }
    }

    #[test]
    fn elementary_segments_tile_the_perimeter((spec, n) in launch()) {
        let Ok(orbit) = simulate(&spec, n) else { return Ok(()) };
        let order = circular_order(&orbit);
        let segs = order.elementary_segments();
        prop_assert_eq!(segs.len(), n);
        prop_assert_eq!(segs.iter().map(|s| s.length.clone()).sum::<Rational>(), Rational::ONE);
        for s in &segs {
            prop_assert_eq!(order.interior_len(s), 0);
        }
    }

    #[test]
    fn weight_classes_have_one_length((spec, n) in launch()) {
        let Ok(orbit) = simulate(&spec, n) else { return Ok(()) };
        let prof = weight_profile(&orbit).unwrap();
        for seg in circular_order(&orbit).elementary_segments() {
            let i = prof.class_of(seg.weight().value);
            prop_assert!(i.is_some(), "weight {} outside {:?}", seg.weight().value, prof.omega);
            prop_assert_eq!(&seg.length, &prof.a[i.unwrap()]);
        }
        prop_assert_eq!(prof.counts.iter().sum::<usize>(), n);
    }

    #[test]
    fn no_claim_fails((spec, n) in launch()) {
        let Ok(orbit) = simulate(&spec, n) else { return Ok(()) };
        let report = verify_all(&orbit).unwrap();
        let failures: Vec<_> = report.failures().collect();
        prop_assert!(failures.is_empty(), "{:?}", failures);
    }
}
