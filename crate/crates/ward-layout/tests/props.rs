//! Property-based invariants over the geometry, serde, and statistics
//! layers.

use proptest::prelude::*;
use ward_layout::annealer::metropolis;
use ward_layout::geometry::{
    angle_diff, normalize_angle, polys_overlap, rect_footprint, Pose,
};
use ward_layout::room::Placement;
use ward_layout::{analysis, assets, room};

fn arb_rect() -> impl Strategy<Value = ward_layout::geometry::Polygon> {
    (
        -5.0..5.0f64,
        -5.0..5.0f64,
        0.0..std::f64::consts::TAU,
        0.1..3.0f64,
        0.1..3.0f64,
    )
        .prop_map(|(x, y, theta, w, d)| rect_footprint(&Pose::new(x, y, theta), w, d))
}

fn arb_placement() -> impl Strategy<Value = Placement> {
    prop_oneof![
        (any::<f64>().prop_filter("finite", |x| x.is_finite()), -1e6..1e6f64, 0.0..10.0f64)
            .prop_map(|(x, y, theta)| Placement::Pose(Pose::new(x % 1e6, y, theta))),
        (0.0..100.0f64).prop_map(|s| Placement::Wall { s }),
        (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y)| Placement::Point([x, y])),
    ]
}

proptest! {
    #[test]
    fn angles_normalize_into_range(theta in -100.0..100.0f64) {
        let n = normalize_angle(theta);
        prop_assert!((0.0..std::f64::consts::TAU).contains(&n));
        // Same direction up to float error.
        prop_assert!((n.sin() - theta.sin()).abs() < 1e-9);
        prop_assert!((n.cos() - theta.cos()).abs() < 1e-9);
    }

    #[test]
    fn angle_diff_is_signed_and_bounded(a in -10.0..10.0f64, b in -10.0..10.0f64) {
        let d = angle_diff(a, b);
        prop_assert!(d.abs() <= std::f64::consts::PI + 1e-12);
        // `d` carries `a` onto `b` around the circle.
        prop_assert!((normalize_angle(a + d) - normalize_angle(b)).abs() < 1e-9
            || (normalize_angle(a + d) - normalize_angle(b)).abs() > std::f64::consts::TAU - 1e-9);
    }

    #[test]
    fn overlap_is_symmetric(a in arb_rect(), b in arb_rect()) {
        prop_assert_eq!(polys_overlap(&a, &b), polys_overlap(&b, &a));
    }

    #[test]
    fn footprint_has_requested_area(
        x in -5.0..5.0f64, y in -5.0..5.0f64,
        theta in 0.0..std::f64::consts::TAU,
        w in 0.1..3.0f64, d in 0.1..3.0f64,
    ) {
        let fp = rect_footprint(&Pose::new(x, y, theta), w, d);
        prop_assert!((fp.area() - w * d).abs() < 1e-9);
        prop_assert!(fp.centroid().dist(ward_layout::geometry::v(x, y)) < 1e-9);
    }

    #[test]
    fn wall_round_trip(s_frac in 0.0..1.0f64) {
        let problem = room::parse_problem(assets::INBOARD_ROOM).unwrap();
        let chain = problem.room.chain();
        let s = s_frac * chain.total_length();
        let p = chain.wall_point(s).unwrap();
        let s2 = chain.wall_coord(p.position()).unwrap();
        let p2 = chain.wall_point(s2).unwrap();
        prop_assert!(p2.position().dist(p.position()) < 1e-9);
    }

    #[test]
    fn placement_serde_round_trip(p in arb_placement()) {
        let json = serde_json::to_string(&p).unwrap();
        let back: Placement = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn metropolis_is_a_probability(
        dc in -10.0..10.0f64, kappa in 0.01..5.0f64, t in 0.001..50.0f64,
    ) {
        let p = metropolis(dc, kappa, t);
        prop_assert!((0.0..=1.0).contains(&p));
        if dc <= 0.0 {
            prop_assert_eq!(p, 1.0);
        }
    }

    #[test]
    fn ks_is_symmetric(
        a in prop::collection::vec(-10.0..10.0f64, 2..30),
        b in prop::collection::vec(-10.0..10.0f64, 2..30),
    ) {
        let ab = analysis::ks_two_sample(&a, &b).unwrap();
        let ba = analysis::ks_two_sample(&b, &a).unwrap();
        prop_assert!((ab.d - ba.d).abs() < 1e-12);
        prop_assert!((ab.p_value - ba.p_value).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&ab.p_value));
    }
}
