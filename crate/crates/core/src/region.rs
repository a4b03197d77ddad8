//! Exact areas of convex regions bounded by circles and lines.
//!
//! A [`ConvexRegion`] is an intersection of closed disks and closed
//! half-planes. Its area is computed by integrating `x dy - y dx` around the
//! boundary, which is made of circular arcs and straight segments.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::Point2D;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: Point2D,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point2D, radius: f64) -> Self {
        Disk { center, radius }
    }

    pub fn contains(&self, p: Point2D) -> bool {
        p.distance(self.center) <= self.radius
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }
}

/// The closed half-plane `{p : normal . p <= offset}` with a unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub normal: Point2D,
    pub offset: f64,
}

impl HalfPlane {
    /// Points on the left of (or on) the directed line through `origin`
    /// along `direction`.
    pub fn left_of(origin: Point2D, direction: Point2D) -> Self {
        let len = direction.norm();
        let normal = Point2D::new(direction.y / len, -direction.x / len);
        HalfPlane {
            normal,
            offset: normal.dot(origin),
        }
    }

    /// Points on the right of (or on) the directed line.
    pub fn right_of(origin: Point2D, direction: Point2D) -> Self {
        HalfPlane::left_of(origin, -direction)
    }

    pub fn contains(&self, p: Point2D) -> bool {
        self.normal.dot(p) <= self.offset
    }

    pub fn complement(&self) -> Self {
        HalfPlane {
            normal: -self.normal,
            offset: -self.offset,
        }
    }

    fn translated(&self, shift: Point2D) -> Self {
        HalfPlane {
            normal: self.normal,
            offset: self.offset - self.normal.dot(shift),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvexRegion {
    pub disks: Vec<Disk>,
    pub half_planes: Vec<HalfPlane>,
}

impl ConvexRegion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn disk(d: Disk) -> Self {
        ConvexRegion {
            disks: vec![d],
            half_planes: Vec::new(),
        }
    }

    pub fn with_disk(mut self, d: Disk) -> Self {
        self.disks.push(d);
        self
    }

    pub fn with_half_plane(mut self, h: HalfPlane) -> Self {
        self.half_planes.push(h);
        self
    }

    pub fn intersect(&self, other: &ConvexRegion) -> ConvexRegion {
        let mut out = self.clone();
        out.disks.extend_from_slice(&other.disks);
        out.half_planes.extend_from_slice(&other.half_planes);
        out
    }

    pub fn contains(&self, p: Point2D) -> bool {
        self.disks.iter().all(|d| d.contains(p)) && self.half_planes.iter().all(|h| h.contains(p))
    }

    /// Exact area. Fails with [`Error::UnboundedRegion`] if the region is
    /// nonempty and unbounded.
    pub fn area(&self) -> Result<f64> {
        if self.disks.is_empty() && self.half_planes.is_empty() {
            return Err(Error::UnboundedRegion);
        }
        // Work relative to a nearby origin to limit cancellation.
        let shift = self
            .disks
            .first()
            .map(|d| d.center)
            .unwrap_or_else(|| self.half_planes[0].normal * self.half_planes[0].offset);
        let disks = dedup_disks(self.disks.iter().map(|d| Disk::new(d.center - shift, d.radius)));
        let planes = dedup_planes(self.half_planes.iter().map(|h| h.translated(shift)));

        if disks.iter().any(|d| d.radius <= 0.0) {
            return Ok(0.0);
        }

        let mut twice_area = 0.0;
        for (i, d) in disks.iter().enumerate() {
            let mut allowed = vec![(0.0, TAU)];
            for h in &planes {
                let k = (h.offset - h.normal.dot(d.center)) / d.radius;
                let phi = h.normal.y.atan2(h.normal.x);
                let width = if k >= 1.0 {
                    PI
                } else if k <= -1.0 {
                    -1.0
                } else {
                    PI - k.acos()
                };
                allowed = intersect_arcs(&allowed, phi + PI, width);
            }
            for (j, other) in disks.iter().enumerate() {
                if i == j || allowed.is_empty() {
                    continue;
                }
                let v = other.center - d.center;
                let dist = v.norm();
                let width = if dist == 0.0 {
                    if d.radius <= other.radius {
                        PI
                    } else {
                        -1.0
                    }
                } else {
                    let k = (d.radius * d.radius + dist * dist - other.radius * other.radius)
                        / (2.0 * d.radius * dist);
                    if k <= -1.0 {
                        PI
                    } else if k >= 1.0 {
                        -1.0
                    } else {
                        k.acos()
                    }
                };
                allowed = intersect_arcs(&allowed, v.y.atan2(v.x), width);
            }
            for &(t1, t2) in &allowed {
                let (c, r) = (d.center, d.radius);
                twice_area += r * r * (t2 - t1)
                    + r * (c.x * (t2.sin() - t1.sin()) - c.y * (t2.cos() - t1.cos()));
            }
        }

        for (i, h) in planes.iter().enumerate() {
            let u = Point2D::new(-h.normal.y, h.normal.x);
            let p0 = h.normal * h.offset;
            let mut lo = f64::NEG_INFINITY;
            let mut hi = f64::INFINITY;
            for (j, g) in planes.iter().enumerate() {
                if i == j {
                    continue;
                }
                let a = g.normal.dot(u);
                let b = g.offset - g.normal.dot(p0);
                if a.abs() < 1e-15 {
                    if b < 0.0 {
                        hi = lo;
                    }
                } else if a > 0.0 {
                    hi = hi.min(b / a);
                } else {
                    lo = lo.max(b / a);
                }
            }
            for d in &disks {
                let w = p0 - d.center;
                let half_b = u.dot(w);
                let disc = half_b * half_b - (w.dot(w) - d.radius * d.radius);
                if disc <= 0.0 {
                    hi = lo;
                    break;
                }
                let s = disc.sqrt();
                lo = lo.max(-half_b - s);
                hi = hi.min(-half_b + s);
            }
            if hi <= lo {
                continue;
            }
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::UnboundedRegion);
            }
            let a = p0 + u * lo;
            let b = p0 + u * hi;
            twice_area += a.cross(b);
        }
        Ok((0.5 * twice_area).max(0.0))
    }
}

/// Area of `base` minus the union of `removed`, by inclusion-exclusion.
pub fn area_excluding(base: &ConvexRegion, removed: &[ConvexRegion]) -> Result<f64> {
    let n = removed.len();
    if n > 20 {
        return Err(Error::invalid("removed", "too many regions for inclusion-exclusion"));
    }
    let mut total = 0.0;
    for mask in 0u32..(1u32 << n) {
        let mut region = base.clone();
        for (k, r) in removed.iter().enumerate() {
            if mask & (1 << k) != 0 {
                region = region.intersect(r);
            }
        }
        let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * region.area()?;
    }
    Ok(total.max(0.0))
}

fn dedup_disks(it: impl Iterator<Item = Disk>) -> Vec<Disk> {
    let mut out: Vec<Disk> = Vec::new();
    for d in it {
        if !out.iter().any(|e| e == &d) {
            out.push(d);
        }
    }
    out
}

fn dedup_planes(it: impl Iterator<Item = HalfPlane>) -> Vec<HalfPlane> {
    let mut out: Vec<HalfPlane> = Vec::new();
    for h in it {
        let dup = out.iter().any(|e| {
            (e.normal - h.normal).norm() < 1e-14 && (e.offset - h.offset).abs() < 1e-12
        });
        if !dup {
            out.push(h);
        }
    }
    out
}

/// Intersect a sorted list of disjoint arcs in `[0, 2pi)` with the arc
/// centred at `center` of half-width `width`.
fn intersect_arcs(arcs: &[(f64, f64)], center: f64, width: f64) -> Vec<(f64, f64)> {
    if width >= PI {
        return arcs.to_vec();
    }
    if width <= 0.0 {
        return Vec::new();
    }
    let lo = (center - width).rem_euclid(TAU);
    let hi = lo + 2.0 * width;
    let pieces: Vec<(f64, f64)> = if hi <= TAU {
        vec![(lo, hi)]
    } else {
        vec![(0.0, hi - TAU), (lo, TAU)]
    };
    let mut out = Vec::new();
    for &(a, b) in arcs {
        for &(c, d) in &pieces {
            let s = a.max(c);
            let e = b.min(d);
            if e > s {
                out.push((s, e));
            }
        }
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(x: f64, y: f64) -> Point2D {
        Point2D::new(x, y)
    }

    #[test]
    fn single_disk() {
        let r = ConvexRegion::disk(Disk::new(p(3.0, -1.0), 2.0));
        assert_abs_diff_eq!(r.area().unwrap(), 4.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn half_disk() {
        let r = ConvexRegion::disk(Disk::new(p(1.0, 1.0), 1.0))
            .with_half_plane(HalfPlane::left_of(p(0.0, 1.0), p(1.0, 0.0)));
        assert_abs_diff_eq!(r.area().unwrap(), PI / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn lens_matches_formula() {
        let (r1, r2, d): (f64, f64, f64) = (2.0, 1.5, 2.5);
        let region = ConvexRegion::disk(Disk::new(p(0.0, 0.0), r1))
            .with_disk(Disk::new(p(d, 0.0), r2));
        let a1 = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).acos();
        let a2 = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).acos();
        let expected = r1 * r1 * (a1 - a1.sin() * a1.cos()) + r2 * r2 * (a2 - a2.sin() * a2.cos());
        assert_abs_diff_eq!(region.area().unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn square_from_half_planes() {
        let mut r = ConvexRegion::new();
        r = r.with_half_plane(HalfPlane::left_of(p(0.0, 0.0), p(1.0, 0.0)));
        r = r.with_half_plane(HalfPlane::left_of(p(2.0, 0.0), p(0.0, 1.0)));
        r = r.with_half_plane(HalfPlane::left_of(p(2.0, 3.0), p(-1.0, 0.0)));
        r = r.with_half_plane(HalfPlane::left_of(p(0.0, 3.0), p(0.0, -1.0)));
        assert_abs_diff_eq!(r.area().unwrap(), 6.0, epsilon = 1e-12);
    }

    #[test]
    fn unbounded_is_an_error() {
        let r = ConvexRegion::new().with_half_plane(HalfPlane::left_of(p(0.0, 0.0), p(1.0, 0.0)));
        assert_eq!(r.area(), Err(Error::UnboundedRegion));
        assert_eq!(ConvexRegion::new().area(), Err(Error::UnboundedRegion));
    }

    #[test]
    fn empty_intersections() {
        let far = ConvexRegion::disk(Disk::new(p(0.0, 0.0), 1.0)).with_disk(Disk::new(p(5.0, 0.0), 1.0));
        assert_eq!(far.area().unwrap(), 0.0);
        let cut = ConvexRegion::disk(Disk::new(p(0.0, 0.0), 1.0))
            .with_half_plane(HalfPlane::left_of(p(0.0, 2.0), p(1.0, 0.0)));
        assert_eq!(cut.area().unwrap(), 0.0);
    }

    #[test]
    fn nested_disks() {
        let r = ConvexRegion::disk(Disk::new(p(0.0, 0.0), 3.0)).with_disk(Disk::new(p(0.5, 0.0), 1.0));
        assert_abs_diff_eq!(r.area().unwrap(), PI, epsilon = 1e-12);
    }

    #[test]
    fn annulus_by_exclusion() {
        let outer = ConvexRegion::disk(Disk::new(p(0.0, 0.0), 2.0));
        let inner = ConvexRegion::disk(Disk::new(p(0.0, 0.0), 1.0));
        assert_abs_diff_eq!(area_excluding(&outer, &[inner]).unwrap(), 3.0 * PI, epsilon = 1e-12);
    }
}
