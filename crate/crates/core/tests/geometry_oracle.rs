use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rrho_core::geometry::*;
use rrho_core::scenario::ScenarioKnown;

/// Counts hits of several indicators over one uniform sample of a box.
fn oracle<const N: usize>(bounds: Rect, samples: u64, seed: u64, f: impl Fn(Point2D) -> [bool; N]) -> [(f64, f64); N] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = [0u64; N];
    for _ in 0..samples {
        let p = Point2D::new(
            bounds.min.x + bounds.width() * rng.random::<f64>(),
            bounds.min.y + bounds.height() * rng.random::<f64>(),
        );
        for (h, inside) in hits.iter_mut().zip(f(p)) {
            *h += inside as u64;
        }
    }
    hits.map(|h| {
        let frac = h as f64 / samples as f64;
        (frac * bounds.area(), bounds.area() * (frac * (1.0 - frac) / samples as f64).sqrt())
    })
}

fn in_wedge(apex: Point2D, lo: Point2D, hi: Point2D, p: Point2D) -> bool {
    (lo - apex).cross(p - apex) >= 0.0 && (p - apex).cross(hi - apex) >= 0.0
}

fn ccw_endpoints(apex: Point2D, wall: &SegmentObstacle) -> (Point2D, Point2D) {
    if (wall.a - apex).cross(wall.b - apex) > 0.0 {
        (wall.a, wall.b)
    } else {
        (wall.b, wall.a)
    }
}

#[test]
fn excess_area_reference_move_matches_oracle() {
    let g = MoveGeometry::new(2.0, 2.0, PI / 4.0).unwrap();
    let big_r = displaced_distance(&g);
    let l1 = Point2D::new(0.0, 0.0);
    let l2 = Point2D::from_angle(PI / 4.0) * 2.0;
    let [(est, _)] = oracle(Rect::around(l2, big_r), 10_000_000, 11, |p| {
        [p.distance(l2) <= big_r && p.distance(l1) > 2.0]
    });
    let closed = excess_area(&g).unwrap();
    assert!((closed - est).abs() / closed < 0.002, "closed {closed} oracle {est}");
}

#[test]
fn room_blocked_area_matches_oracle() {
    let scene = ScenarioKnown::reference_room();
    let pos = scene.positions(2.0, PI / 4.0);
    let g = MoveGeometry::new(2.0, 2.0, PI / 4.0).unwrap();
    let big_r = displaced_distance(&g);
    let wall = scene.walls[0];
    let w = BlockageWedge::from_wall(scene.enb, &wall, pos.before, pos.after);
    let b = blocked_candidate_area(&w, 2.0, big_r).unwrap();
    let (lo, hi) = ccw_endpoints(scene.enb, &wall);
    let [(est, _)] = oracle(Rect::around(pos.after, big_r), 10_000_000, 12, |p| {
        [p.distance(pos.after) <= big_r && p.distance(pos.before) > 2.0 && in_wedge(scene.enb, lo, hi, p)]
    });
    assert!((b.a_b - est).abs() / b.a_b < 0.005, "closed {} oracle {est}", b.a_b);
}

#[test]
fn blocked_area_fixture() {
    // Frozen from the rejection oracle above and the exact engine.
    let scene = ScenarioKnown::reference_room();
    let pos = scene.positions(2.0, PI / 4.0);
    let w = BlockageWedge::from_wall(scene.enb, &scene.walls[0], pos.before, pos.after);
    let b = blocked_candidate_area(&w, 2.0, (8.0 + 4.0 * 2f64.sqrt()).sqrt()).unwrap();
    assert!((b.a_b - 22.1704).abs() < 1e-3, "{b:?}");
    assert!(w.alpha1() < w.width && w.d_bu1() > 0.0 && w.d_bu2() > 0.0);
}

/// Random wall-shadow configurations with the UE behind the wall before
/// and after the move.
fn random_scene(rng: &mut ChaCha8Rng) -> (ScenarioKnown, f64, f64) {
    loop {
        let mut scene = ScenarioKnown::reference_room();
        scene.room = Rect::around(Point2D::new(0.0, 0.0), 100.0);
        scene.enb = Point2D::new(0.0, 0.0);
        let x = rng.random_range(2.0..6.0);
        let y0 = rng.random_range(-3.0..0.0);
        let len = rng.random_range(1.0..5.0);
        scene.walls = vec![SegmentObstacle::new(Point2D::new(x, y0), Point2D::new(x, y0 + len)).unwrap()];
        let mid = y0 + len * rng.random_range(0.2..0.8);
        let depth = rng.random_range(1.5..4.0);
        scene.ue_start = Point2D::new(x + depth, mid * (x + depth) / x);
        scene.r = rng.random_range(0.5..3.0);
        scene.serving_bearing = rng.random_range(0.0..TAU);
        let d = rng.random_range(0.2..3.0);
        let xi = rng.random_range(0.0..PI);
        let pos = scene.positions(d, xi);
        if hidden_by(&scene.walls, scene.enb, pos.before) && hidden_by(&scene.walls, scene.enb, pos.after) {
            return (scene, d, xi);
        }
    }
}

#[test]
fn random_configurations_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for k in 0..10 {
        let (scene, d, xi) = random_scene(&mut rng);
        let g = MoveGeometry::new(scene.r, d, xi).unwrap();
        let big_r = displaced_distance(&g);
        let pos = scene.positions(d, xi);
        let wall = scene.walls[0];
        let w = BlockageWedge::from_wall(scene.enb, &wall, pos.before, pos.after);
        let b = blocked_candidate_area(&w, scene.r, big_r).unwrap();
        let a_e = excess_area(&g).unwrap();
        let a1 = visible_excess_area_a1(&scene, &g).unwrap();
        let (lo, hi) = ccw_endpoints(scene.enb, &wall);
        let est = oracle(Rect::around(pos.after, big_r.max(scene.r + d)), 2_000_000, 100 + k, |p| {
            let in2 = p.distance(pos.after) <= big_r;
            let in1 = p.distance(pos.before) <= scene.r;
            let wedge = in_wedge(scene.enb, lo, hi, p);
            [in2 && !in1, in2 && wedge, in1 && wedge, in2 && !in1 && wedge, in2 && !in1 && !wedge]
        });
        for (closed, (mean, se)) in [a_e, b.a_s1, b.a_s2, b.a_b, a1].into_iter().zip(est) {
            let z = if se > 0.0 { (closed - mean).abs() / se } else { (closed - mean).abs() * 1e9 };
            worst = worst.max(z);
            assert!(z < 4.5, "config {k}: closed {closed} oracle {mean} se {se}");
        }
    }
    println!("largest deviation {worst:.2} standard errors");
}

#[test]
fn numeric_blocked_area_examples() {
    let scene = ScenarioKnown::reference_room();
    let pos = scene.positions(2.0, PI / 4.0);
    let big_r = (8.0 + 4.0 * 2f64.sqrt()).sqrt();
    let bounds = Rect::around(pos.after, big_r);
    let lune = |p: Point2D| p.distance(pos.after) <= big_r && p.distance(pos.before) > 2.0;

    let far = SegmentObstacle::new(Point2D::new(50.0, 50.0), Point2D::new(52.0, 50.0)).unwrap();
    let far = ExtraBlocker::Obstacle { segment: far, viewer: pos.after };
    assert_eq!(numeric_blocked_area(bounds, lune, &far, 100_000, 1).unwrap().area, 0.0);

    let full = ExtraBlocker::SelfBlock(CircularSector::new(pos.after, None, 0.0, TAU).unwrap());
    let all = numeric_blocked_area(bounds, lune, &full, 1_000_000, 2).unwrap();
    let lune_area = excess_area(&MoveGeometry::new(2.0, 2.0, PI / 4.0).unwrap()).unwrap();
    assert!((all.area - lune_area).abs() < 4.0 * all.stderr);

    // The extra obstacle of the room hides part of the visible area; the
    // estimate agrees with the exact engine.
    let room = ScenarioKnown::reference_room_obstacle();
    let obstacle = room.extra_obstacles[0];
    let wall = room.walls[0];
    let visible = |p: Point2D| lune(p) && !wall.intersects(room.enb, p) && !wall.intersects(pos.after, p);
    let extra = ExtraBlocker::Obstacle { segment: obstacle, viewer: pos.after };
    let est = numeric_blocked_area(bounds, visible, &extra, 4_000_000, 3).unwrap();
    let plain = visible_area_exact(&pos, 2.0, big_r, room.enb, &room.walls, &[], None).unwrap();
    let blocked = visible_area_exact(&pos, 2.0, big_r, room.enb, &room.walls, &[obstacle], None).unwrap();
    assert!(est.area > 0.5);
    assert!(((plain - blocked) - est.area).abs() < 4.0 * est.stderr, "{} vs {:?}", plain - blocked, est);
}

#[test]
fn exact_visible_area_matches_membership_oracle() {
    let scene = ScenarioKnown::reference_room_self_block(40f64.to_radians());
    let mut scene = scene;
    scene.extra_obstacles = ScenarioKnown::reference_room_obstacle().extra_obstacles;
    let pos = scene.positions(2.0, PI / 4.0);
    let big_r = (8.0 + 4.0 * 2f64.sqrt()).sqrt();
    let sector = scene.self_block_sector(&pos).unwrap();
    let exact = visible_area_exact(&pos, 2.0, big_r, scene.enb, &scene.walls, &scene.extra_obstacles, Some(&sector)).unwrap();
    let mut blockers = scene.walls.clone();
    blockers.extend(scene.extra_obstacles.iter().copied());
    let [(est, se)] = oracle(Rect::around(pos.after, big_r), 4_000_000, 5, |p| {
        [p.distance(pos.after) <= big_r
            && p.distance(pos.before) > 2.0
            && !hidden_by(&scene.walls, scene.enb, p)
            && segment_visibility(pos.after, p, &blockers, Some(&sector))]
    });
    assert!((exact - est).abs() < 4.0 * se, "exact {exact} oracle {est} se {se}");
}

#[test]
fn wide_sector_uses_its_complement() {
    let c = Point2D::new(1.0, 2.0);
    let pos = MovePositions { before: Point2D::new(50.0, 50.0), serving: Point2D::new(50.0, 52.0), after: c, heading: 0.0 };
    for sweep in [0.5, PI, 4.0, TAU] {
        let sector = CircularSector::new(c, None, 0.3, sweep).unwrap();
        let vis = visible_area_exact(&pos, 1.0, 3.0, Point2D::new(-90.0, 0.0), &[], &[], Some(&sector)).unwrap();
        let expect = 9.0 * PI * (1.0 - sweep / TAU);
        assert!((vis - expect).abs() < 1e-9, "sweep {sweep}: {vis} vs {expect}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn displaced_distance_triangle_bounds(r in 0.01f64..10.0, d in 0.0f64..10.0, xi in 0.0f64..=PI) {
        let big_r = displaced_distance(&MoveGeometry::new(r, d, xi).unwrap());
        prop_assert!(big_r >= (r - d).abs() - 1e-9 && big_r <= r + d + 1e-9);
    }

    #[test]
    fn excess_area_bounds_and_limits(r in 0.1f64..5.0, d in 0.0f64..5.0, xi in 0.0f64..=PI) {
        let g = MoveGeometry::new(r, d, xi).unwrap();
        let big_r = displaced_distance(&g);
        let a = excess_area(&g).unwrap();
        prop_assert!(a >= 0.0 && a <= PI * big_r * big_r + 1e-9);
        let still = excess_area(&MoveGeometry::new(r, 0.0, xi).unwrap()).unwrap();
        prop_assert!(still.abs() <= 1e-9);
        let straight = MoveGeometry::new(r, d, 1e-9).unwrap();
        let rr = displaced_distance(&straight);
        let expect = PI * (rr * rr - r * r);
        prop_assert!((excess_area(&straight).unwrap() - expect).abs() <= 1e-6 * (1.0 + expect));
    }

    #[test]
    fn blocked_area_grows_with_wedge_width(
        base in -1.0f64..1.0, w1 in 0.0f64..1.2, extra in 0.0f64..1.0,
        d in 0.2f64..3.0, xi in 0.0f64..=PI,
    ) {
        let before = Point2D::new(8.0, 0.0);
        let after = before + Point2D::from_angle(xi) * d;
        let big_r = after.distance(before + Point2D::new(-2.0, 0.0));
        let narrow = BlockageWedge { apex: Point2D::default(), lower_bearing: base, width: w1, ue_before: before, ue_after: after };
        let wide = BlockageWedge { width: (w1 + extra).min(PI - 1e-6), ..narrow };
        let a = blocked_candidate_area(&narrow, 2.0, big_r).unwrap().a_b;
        let b = blocked_candidate_area(&wide, 2.0, big_r).unwrap().a_b;
        prop_assert!(b >= a - 1e-9, "narrow {} wide {}", a, b);
    }

    #[test]
    fn visible_area_ordering(d in 0.0f64..2.5, xi_deg in 0.0f64..90.0) {
        let scene = ScenarioKnown::reference_room();
        let g = MoveGeometry::new(2.0, d, xi_deg.to_radians()).unwrap();
        let a1 = visible_excess_area_a1(&scene, &g).unwrap();
        let a_e = excess_area(&g).unwrap();
        let big_r = displaced_distance(&g);
        prop_assert!(0.0 <= a1 && a1 <= a_e + 1e-12 && a_e <= PI * big_r * big_r + 1e-9);
    }
}
