//! Planar geometry of the excess area uncovered by a one-step UE move.
//!
//! Movement angles follow one convention throughout the crate: `xi = 0`
//! means the UE moves directly away from its serving node (RIS or eNB) and
//! `xi = pi` means it moves straight toward it.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::region::{area_excluding, ConvexRegion, Disk, HalfPlane};
use crate::scenario::ScenarioKnown;

/// Slack allowed on inverse-trig arguments before they count as a domain error.
pub const TRIG_TOLERANCE: f64 = 1e-12;

/// Default sample count of the rejection-sampling area estimator.
pub const DEFAULT_ORACLE_SAMPLES: u64 = 10_000_000;

const MIN_ORACLE_SAMPLES: u64 = 10_000;
const SHARD_SAMPLES: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2D { x, y }
    }

    pub fn from_angle(angle: f64) -> Self {
        Point2D::new(angle.cos(), angle.sin())
    }

    pub fn dot(self, o: Point2D) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2D) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, o: Point2D) -> f64 {
        (self - o).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2D {
    type Output = Point2D;
    fn add(self, o: Point2D) -> Point2D {
        Point2D::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2D {
    type Output = Point2D;
    fn sub(self, o: Point2D) -> Point2D {
        Point2D::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2D {
    type Output = Point2D;
    fn mul(self, k: f64) -> Point2D {
        Point2D::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2D {
    type Output = Point2D;
    fn neg(self) -> Point2D {
        Point2D::new(-self.x, -self.y)
    }
}

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point2D,
    pub max: Point2D,
}

impl Rect {
    pub fn new(min: Point2D, max: Point2D) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || max.x <= min.x || max.y <= min.y {
            return Err(Error::invalid("rectangle", "corners must be finite with max > min"));
        }
        Ok(Rect { min, max })
    }

    pub fn around(center: Point2D, half: f64) -> Self {
        Rect {
            min: center - Point2D::new(half, half),
            max: center + Point2D::new(half, half),
        }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, p: Point2D) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentObstacle {
    pub a: Point2D,
    pub b: Point2D,
}

impl SegmentObstacle {
    pub fn new(a: Point2D, b: Point2D) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::invalid("obstacle", "endpoints must be finite"));
        }
        if a == b {
            return Err(Error::invalid("obstacle", "endpoints must differ"));
        }
        Ok(SegmentObstacle { a, b })
    }

    /// True if the closed segment `pq` touches this segment.
    pub fn intersects(&self, p: Point2D, q: Point2D) -> bool {
        segments_intersect(p, q, self.a, self.b)
    }

    /// Points hidden behind this segment as seen from `viewer`: the wedge
    /// spanned by the endpoints intersected with the far side of the segment.
    /// `None` when the viewer is collinear with the segment.
    pub fn shadow_from(&self, viewer: Point2D) -> Option<ConvexRegion> {
        let (da, db) = (self.a - viewer, self.b - viewer);
        let turn = da.cross(db);
        if turn.abs() < 1e-14 {
            return None;
        }
        // Order endpoints so that `lo -> hi` is counter-clockwise about the viewer.
        let (lo, hi) = if turn > 0.0 { (self.a, self.b) } else { (self.b, self.a) };
        Some(
            ConvexRegion::new()
                .with_half_plane(HalfPlane::left_of(viewer, lo - viewer))
                .with_half_plane(HalfPlane::right_of(viewer, hi - viewer))
                .with_half_plane(HalfPlane::right_of(lo, hi - lo)),
        )
    }
}

fn orient(a: Point2D, b: Point2D, c: Point2D) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point2D, b: Point2D, p: Point2D) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

fn segments_intersect(p: Point2D, q: Point2D, a: Point2D, b: Point2D) -> bool {
    let d1 = orient(a, b, p);
    let d2 = orient(a, b, q);
    let d3 = orient(p, q, a);
    let d4 = orient(p, q, b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(a, b, p))
        || (d2 == 0.0 && on_segment(a, b, q))
        || (d3 == 0.0 && on_segment(p, q, a))
        || (d4 == 0.0 && on_segment(p, q, b))
}

/// Angular sector anchored at `origin`, spanning `sweep` radians
/// counter-clockwise from `start_angle`. `radius: None` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularSector {
    pub origin: Point2D,
    pub radius: Option<f64>,
    pub start_angle: f64,
    pub sweep: f64,
}

impl CircularSector {
    pub fn new(origin: Point2D, radius: Option<f64>, start_angle: f64, sweep: f64) -> Result<Self> {
        if !(0.0..=TAU).contains(&sweep) {
            return Err(Error::invalid("sweep", format!("{sweep} is outside [0, 2pi]")));
        }
        if let Some(r) = radius {
            if r.is_nan() || r <= 0.0 {
                return Err(Error::invalid("radius", "must be positive"));
            }
        }
        Ok(CircularSector {
            origin,
            radius,
            start_angle,
            sweep,
        })
    }

    /// Sector of angle `sweep` centred on direction `center_angle`.
    pub fn centered(origin: Point2D, center_angle: f64, sweep: f64) -> Result<Self> {
        CircularSector::new(origin, None, center_angle - sweep / 2.0, sweep)
    }

    pub fn contains(&self, q: Point2D) -> bool {
        let v = q - self.origin;
        if let Some(r) = self.radius {
            if v.norm() > r {
                return false;
            }
        }
        if self.sweep >= TAU {
            return true;
        }
        let rel = (v.angle() - self.start_angle).rem_euclid(TAU);
        rel <= self.sweep
    }

    fn ray(&self, angle: f64) -> Point2D {
        Point2D::from_angle(angle)
    }

    /// Convex wedge covering this sector when `sweep <= pi`.
    fn convex_wedge(&self) -> ConvexRegion {
        let mut w = ConvexRegion::new()
            .with_half_plane(HalfPlane::left_of(self.origin, self.ray(self.start_angle)))
            .with_half_plane(HalfPlane::right_of(self.origin, self.ray(self.start_angle + self.sweep)));
        if let Some(r) = self.radius {
            w = w.with_disk(Disk::new(self.origin, r));
        }
        w
    }

    /// Convex wedge covering the angular complement when `sweep >= pi`.
    fn complement_wedge(&self) -> ConvexRegion {
        let start = self.start_angle + self.sweep;
        ConvexRegion::new()
            .with_half_plane(HalfPlane::left_of(self.origin, self.ray(start)))
            .with_half_plane(HalfPlane::right_of(self.origin, self.ray(start + TAU - self.sweep)))
    }
}

/// One-step move of the UE relative to its serving node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoveGeometry {
    pub r: f64,
    pub d_u: f64,
    pub xi: f64,
}

impl MoveGeometry {
    pub fn new(r: f64, d_u: f64, xi: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::invalid("r", format!("{r} must be positive and finite")));
        }
        if !(d_u >= 0.0 && d_u.is_finite()) {
            return Err(Error::invalid("d_U", format!("{d_u} must be nonnegative and finite")));
        }
        if !(0.0..=PI).contains(&xi) {
            return Err(Error::invalid("xi", format!("{xi} is outside [0, pi]")));
        }
        Ok(MoveGeometry { r, d_u, xi })
    }
}

pub(crate) fn clamp_unit(value: f64, context: &'static str) -> Result<f64> {
    if value.is_nan() || value.abs() > 1.0 + TRIG_TOLERANCE {
        return Err(Error::Domain { context, value });
    }
    Ok(value.clamp(-1.0, 1.0))
}

/// Distance from the displaced UE to its serving node.
pub fn displaced_distance(g: &MoveGeometry) -> f64 {
    let sq = g.r * g.r + g.d_u * g.d_u - 2.0 * g.r * g.d_u * (PI - g.xi).cos();
    sq.max(0.0).sqrt()
}

/// Area of the disk of radius `R` about the new position that lies outside
/// the disk of radius `r` about the old one.
pub fn excess_area(g: &MoveGeometry) -> Result<f64> {
    let (r, d) = (g.r, g.d_u);
    if d == 0.0 {
        return Ok(0.0);
    }
    let big_r = displaced_distance(g);
    if big_r == 0.0 {
        return Ok(0.0);
    }
    // Angle at the serving node between the two UE positions. The acos form
    // stays on the right branch when that angle is obtuse.
    let cos_s = clamp_unit((r * r + big_r * big_r - d * d) / (2.0 * r * big_r), "excess_area")?;
    let at_serving = cos_s.acos();
    let area = PI * big_r * big_r - big_r * big_r * (g.xi - at_serving) - r * r * (PI - g.xi)
        + r * d * g.xi.sin();
    if area < -1e-9 * (1.0 + big_r * big_r) {
        log::warn!("excess area {area} is negative for {g:?}; clamped to 0");
    }
    Ok(area.max(0.0))
}

/// How a wedge cuts a disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WedgeCut {
    Disjoint,
    Contained,
    OneBorder,
    TwoBorders,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskWedgeArea {
    pub area: f64,
    pub cut: WedgeCut,
}

/// Shadow wedge cast by a wall as seen from a base station, together with
/// the UE positions before and after the move.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockageWedge {
    pub apex: Point2D,
    /// Bearing of the clockwise border ray.
    pub lower_bearing: f64,
    /// Angular width, in `[0, pi)`.
    pub width: f64,
    pub ue_before: Point2D,
    pub ue_after: Point2D,
}

impl BlockageWedge {
    pub fn from_wall(apex: Point2D, wall: &SegmentObstacle, ue_before: Point2D, ue_after: Point2D) -> Self {
        let (ba, bb) = ((wall.a - apex).angle(), (wall.b - apex).angle());
        let ccw = (bb - ba).rem_euclid(TAU);
        let (lower_bearing, width) = if ccw <= PI { (ba, ccw) } else { (bb, TAU - ccw) };
        BlockageWedge {
            apex,
            lower_bearing,
            width,
            ue_before,
            ue_after,
        }
    }

    pub fn upper_bearing(&self) -> f64 {
        self.lower_bearing + self.width
    }

    pub fn d_bu1(&self) -> f64 {
        self.apex.distance(self.ue_before)
    }

    pub fn d_bu2(&self) -> f64 {
        self.apex.distance(self.ue_after)
    }

    fn offset_from(&self, border: f64, p: Point2D) -> f64 {
        let rel = ((p - self.apex).angle() - border).rem_euclid(TAU);
        if rel > PI {
            TAU - rel
        } else {
            rel
        }
    }

    /// Angle at the apex between the old UE position and its nearer border.
    pub fn alpha1(&self) -> f64 {
        self.offset_from(self.lower_bearing, self.ue_before)
            .min(self.offset_from(self.upper_bearing(), self.ue_before))
    }

    /// Angle at the apex between the new UE position and the lower border.
    pub fn alpha3(&self) -> f64 {
        self.offset_from(self.lower_bearing, self.ue_after)
    }

    /// Angle at the apex between the new UE position and the upper border.
    pub fn alpha4(&self) -> f64 {
        self.offset_from(self.upper_bearing(), self.ue_after)
    }

    pub fn region(&self) -> ConvexRegion {
        ConvexRegion::new()
            .with_half_plane(HalfPlane::left_of(self.apex, Point2D::from_angle(self.lower_bearing)))
            .with_half_plane(HalfPlane::right_of(self.apex, Point2D::from_angle(self.upper_bearing())))
    }

    pub fn contains(&self, p: Point2D) -> bool {
        self.region().contains(p)
    }
}

/// Distance from the apex to the nearer crossing of a border ray with the
/// circle, for a centre at distance `d` and angle `alpha` off the ray.
pub fn near_intersection_distance(d: f64, alpha: f64, radius: f64) -> f64 {
    let disc = radius * radius - d * d * alpha.sin().powi(2);
    d * alpha.cos() - disc.max(0.0).sqrt()
}

/// Chord cut from the circle by a border ray.
pub fn chord_length(d: f64, alpha: f64, radius: f64) -> f64 {
    2.0 * (radius * radius - d * d * alpha.sin().powi(2)).max(0.0).sqrt()
}

/// Area of the triangle spanned by the circle centre and a border chord.
pub fn chord_triangle_area(d: f64, alpha: f64, radius: f64) -> f64 {
    let h = d * alpha.sin();
    h.abs() * (radius * radius - h * h).max(0.0).sqrt()
}

/// Area of the part of the disk beyond a line at signed distance `s` from
/// the centre (positive when the centre is on the kept side).
fn cap_beyond(s: f64, radius: f64) -> Result<f64> {
    if s >= radius {
        return Ok(0.0);
    }
    if s <= -radius {
        return Ok(PI * radius * radius);
    }
    let c = clamp_unit(s / radius, "circular segment")?;
    Ok(radius * radius * c.acos() - s * (radius * radius - s * s).sqrt())
}

/// Area of a disk inside the wedge.
pub fn disk_wedge_area(w: &BlockageWedge, center: Point2D, radius: f64) -> Result<DiskWedgeArea> {
    if w.width <= 0.0 || radius <= 0.0 {
        return Ok(DiskWedgeArea {
            area: 0.0,
            cut: WedgeCut::Disjoint,
        });
    }
    let v = center - w.apex;
    let s_lo = Point2D::from_angle(w.lower_bearing).cross(v);
    let s_hi = v.cross(Point2D::from_angle(w.upper_bearing()));

    // The two caps double count the part of the disk in the opposite cone.
    let back = ConvexRegion::disk(Disk::new(center, radius))
        .with_half_plane(HalfPlane::right_of(w.apex, Point2D::from_angle(w.lower_bearing)))
        .with_half_plane(HalfPlane::left_of(w.apex, Point2D::from_angle(w.upper_bearing())))
        .area()?;
    let area = PI * radius * radius - cap_beyond(s_lo, radius)? - cap_beyond(s_hi, radius)? + back;
    let area = area.clamp(0.0, PI * radius * radius);

    let cuts = [s_lo, s_hi].iter().filter(|s| s.abs() < radius).count();
    let cut = if area <= 0.0 {
        WedgeCut::Disjoint
    } else {
        match cuts {
            0 => WedgeCut::Contained,
            1 => WedgeCut::OneBorder,
            _ => WedgeCut::TwoBorders,
        }
    };
    Ok(DiskWedgeArea { area, cut })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockedArea {
    /// Disk about the new position inside the wedge.
    pub a_s1: f64,
    /// Disk about the old position inside the wedge.
    pub a_s2: f64,
    /// Part of the old disk inside the wedge that lies outside the new disk.
    pub lune_correction: f64,
    /// Excess area inside the wedge.
    pub a_b: f64,
    /// The wedge is empty or misses both circles.
    pub degenerate: bool,
}

/// Part of the excess area that falls inside the blockage wedge.
pub fn blocked_candidate_area(w: &BlockageWedge, r: f64, big_r: f64) -> Result<BlockedArea> {
    let s1 = disk_wedge_area(w, w.ue_after, big_r)?;
    let s2 = disk_wedge_area(w, w.ue_before, r)?;
    let degenerate = s1.cut == WedgeCut::Disjoint && s2.cut == WedgeCut::Disjoint;
    if degenerate {
        return Ok(BlockedArea {
            a_s1: 0.0,
            a_s2: 0.0,
            lune_correction: 0.0,
            a_b: 0.0,
            degenerate,
        });
    }
    let overlap = w
        .region()
        .with_disk(Disk::new(w.ue_before, r))
        .with_disk(Disk::new(w.ue_after, big_r))
        .area()?;
    let lune_correction = (s2.area - overlap).max(0.0);
    let a_b = (s1.area - s2.area + lune_correction).max(0.0);
    Ok(BlockedArea {
        a_s1: s1.area,
        a_s2: s2.area,
        lune_correction,
        a_b,
        degenerate,
    })
}

/// Positions involved in one move of a known scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovePositions {
    pub before: Point2D,
    pub serving: Point2D,
    pub after: Point2D,
    /// Direction of travel, radians.
    pub heading: f64,
}

/// True if the segment from `from` to `p` crosses any of `walls`.
pub fn hidden_by(walls: &[SegmentObstacle], from: Point2D, p: Point2D) -> bool {
    walls.iter().any(|w| w.intersects(from, p))
}

/// Excess area of a known scenario that is not shadowed by its walls.
pub fn visible_excess_area_a1(scene: &ScenarioKnown, g: &MoveGeometry) -> Result<f64> {
    let pos = scene.positions(g.d_u, g.xi);
    let a_e = excess_area(g)?;
    if scene.walls.is_empty() {
        return Ok(a_e);
    }
    for p in [pos.before, pos.after] {
        if !hidden_by(&scene.walls, scene.enb, p) {
            return Err(Error::OutsideBlockedRegion { x: p.x, y: p.y });
        }
    }
    let big_r = displaced_distance(g);
    let blocked = if scene.walls.len() == 1 {
        let w = BlockageWedge::from_wall(scene.enb, &scene.walls[0], pos.before, pos.after);
        blocked_candidate_area(&w, g.r, big_r)?.a_b
    } else {
        let base = ConvexRegion::disk(Disk::new(pos.after, big_r));
        let mut removed = vec![ConvexRegion::disk(Disk::new(pos.before, g.r))];
        for wall in &scene.walls {
            let w = BlockageWedge::from_wall(scene.enb, wall, pos.before, pos.after);
            removed.push(w.region());
        }
        a_e - area_excluding(&base, &removed)?
    };
    Ok((a_e - blocked).clamp(0.0, a_e))
}

/// Extra blockers whose shadow is removed from the visible excess area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtraBlocker {
    /// Obstacle segment seen from the given viewpoint.
    Obstacle { segment: SegmentObstacle, viewer: Point2D },
    SelfBlock(CircularSector),
}

impl ExtraBlocker {
    pub fn blocks(&self, q: Point2D) -> bool {
        match self {
            ExtraBlocker::Obstacle { segment, viewer } => segment.intersects(*viewer, q),
            ExtraBlocker::SelfBlock(sector) => sector.contains(q),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaEstimate {
    pub area: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Rejection-sampling estimate of the area of `{p in bounds : inside(p)}`.
/// Samples are drawn in fixed shards, each with its own stream, so the
/// result does not depend on the thread count.
pub fn estimate_area<F>(bounds: Rect, samples: u64, seed: u64, inside: F) -> Result<AreaEstimate>
where
    F: Fn(Point2D) -> bool + Sync,
{
    if !(bounds.min.is_finite() && bounds.max.is_finite()) || bounds.area() <= 0.0 {
        return Err(Error::UnboundedRegion);
    }
    if samples == 0 {
        return Err(Error::invalid("samples", "must be positive"));
    }
    let shards = samples.div_ceil(SHARD_SAMPLES);
    let hits: u64 = (0..shards)
        .into_par_iter()
        .map(|k| {
            let n = SHARD_SAMPLES.min(samples - k * SHARD_SAMPLES);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let mut count = 0u64;
            for _ in 0..n {
                let p = Point2D::new(
                    rng.random_range(bounds.min.x..bounds.max.x),
                    rng.random_range(bounds.min.y..bounds.max.y),
                );
                if inside(p) {
                    count += 1;
                }
            }
            count
        })
        .sum();
    let frac = hits as f64 / samples as f64;
    Ok(AreaEstimate {
        area: frac * bounds.area(),
        stderr: bounds.area() * (frac * (1.0 - frac) / samples as f64).sqrt(),
        samples,
    })
}

/// Rejection-sampling estimate of the part of a bounded region hidden by
/// an extra blocker.
pub fn numeric_blocked_area<F>(
    bounds: Rect,
    region: F,
    extra: &ExtraBlocker,
    samples: u64,
    seed: u64,
) -> Result<AreaEstimate>
where
    F: Fn(Point2D) -> bool + Sync,
{
    if samples < MIN_ORACLE_SAMPLES {
        return Err(Error::invalid(
            "samples",
            format!("{samples} is below the minimum of {MIN_ORACLE_SAMPLES}"),
        ));
    }
    estimate_area(bounds, samples, seed, |p| region(p) && extra.blocks(p))
}

/// Line of sight from `p` to `q`: no obstacle crosses the segment and `q`
/// lies outside the self-blockage sector anchored at `p`.
pub fn segment_visibility(
    p: Point2D,
    q: Point2D,
    obstacles: &[SegmentObstacle],
    self_block: Option<&CircularSector>,
) -> bool {
    if obstacles.iter().any(|o| o.intersects(p, q)) {
        return false;
    }
    match self_block {
        Some(sector) => !sector.contains(q),
        None => true,
    }
}

/// Exact visible area after a move: the new disk minus the old disk, the
/// wall wedges seen from the eNB, wall and obstacle shadows seen from the
/// new position, and the self-blockage sector.
pub fn visible_area_exact(
    pos: &MovePositions,
    r: f64,
    big_r: f64,
    enb: Point2D,
    walls: &[SegmentObstacle],
    obstacles: &[SegmentObstacle],
    self_block: Option<&CircularSector>,
) -> Result<f64> {
    let mut base = ConvexRegion::disk(Disk::new(pos.after, big_r));
    let mut removed = vec![ConvexRegion::disk(Disk::new(pos.before, r))];
    for wall in walls {
        let w = BlockageWedge::from_wall(enb, wall, pos.before, pos.after);
        removed.push(w.region());
        removed.extend(wall.shadow_from(pos.after));
    }
    for o in obstacles {
        removed.extend(o.shadow_from(pos.after));
    }
    if let Some(sector) = self_block {
        if sector.sweep >= TAU {
            return Ok(0.0);
        }
        if sector.sweep > PI {
            base = base.intersect(&sector.complement_wedge());
        } else if sector.sweep > 0.0 {
            removed.push(sector.convex_wedge());
        }
    }
    area_excluding(&base, &removed)
}
