//! 2D primitives for rooms and objects: polygons, poses, overlap and
//! containment tests, and the unwrapped-wall coordinate system used as the
//! placement domain for wall-mounted objects and doors.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::{Error, Result};

/// Tolerance for "on the wall" / "on the boundary" decisions, in meters.
pub const WALL_EPS: f64 = 1e-6;
/// Strictness tolerance for overlap tests.
const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

pub fn v(x: f64, y: f64) -> Vec2 {
    Vec2 { x, y }
}

impl Vec2 {
    pub fn add(self, o: Vec2) -> Vec2 {
        v(self.x + o.x, self.y + o.y)
    }
    pub fn sub(self, o: Vec2) -> Vec2 {
        v(self.x - o.x, self.y - o.y)
    }
    pub fn scale(self, k: f64) -> Vec2 {
        v(self.x * k, self.y * k)
    }
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }
    pub fn dist(self, o: Vec2) -> f64 {
        self.sub(o).norm()
    }
    /// Left-hand perpendicular; for a CCW polygon edge this points inward.
    pub fn perp(self) -> Vec2 {
        v(-self.y, self.x)
    }
    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        v(self.x / n, self.y / n)
    }
    pub fn rotated(self, theta: f64) -> Vec2 {
        let (s, c) = theta.sin_cos();
        v(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

/// Position plus heading. `theta` is kept normalized to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Pose {
        Pose {
            x,
            y,
            theta: normalize_angle(theta),
        }
    }
    pub fn position(&self) -> Vec2 {
        v(self.x, self.y)
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Signed difference `b - a` wrapped into `(-π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let mut d = (b - a).rem_euclid(TAU);
    if d > std::f64::consts::PI {
        d -= TAU;
    }
    d
}

/// A simple counter-clockwise polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct Polygon {
    vertices: Vec<Vec2>,
}

impl TryFrom<Vec<[f64; 2]>> for Polygon {
    type Error = Error;
    fn try_from(raw: Vec<[f64; 2]>) -> Result<Polygon> {
        Polygon::new(raw.into_iter().map(|[x, y]| v(x, y)).collect())
    }
}

impl From<Polygon> for Vec<[f64; 2]> {
    fn from(p: Polygon) -> Vec<[f64; 2]> {
        p.vertices.iter().map(|p| [p.x, p.y]).collect()
    }
}

impl Polygon {
    pub fn new(vertices: Vec<Vec2>) -> Result<Polygon> {
        if vertices.len() < 3 {
            return Err(Error::InvalidGeometry(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        for i in 0..vertices.len() {
            let j = (i + 1) % vertices.len();
            if vertices[i].dist(vertices[j]) < 1e-12 {
                return Err(Error::InvalidGeometry(format!(
                    "consecutive duplicate vertex at index {i}"
                )));
            }
        }
        let poly = Polygon { vertices };
        let area = poly.signed_area();
        if area.abs() < 1e-9 {
            return Err(Error::InvalidGeometry("degenerate polygon (area ~ 0)".into()));
        }
        if area < 0.0 {
            return Err(Error::InvalidGeometry(
                "polygon vertices must be counter-clockwise".into(),
            ));
        }
        Ok(poly)
    }

    /// Axis-aligned rectangle from min/max corners.
    pub fn rect(min: Vec2, max: Vec2) -> Polygon {
        Polygon {
            vertices: vec![min, v(max.x, min.y), max, v(min.x, max.y)],
        }
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        let mut a = 0.0;
        for i in 0..n {
            a += self.vertices[i].cross(self.vertices[(i + 1) % n]);
        }
        a / 2.0
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn centroid(&self) -> Vec2 {
        let n = self.vertices.len();
        let mut c = v(0.0, 0.0);
        let mut a = 0.0;
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let w = p.cross(q);
            c = c.add(p.add(q).scale(w));
            a += w;
        }
        c.scale(1.0 / (3.0 * a))
    }

    pub fn bounds(&self) -> (Vec2, Vec2) {
        let mut min = self.vertices[0];
        let mut max = self.vertices[0];
        for p in &self.vertices {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        (min, max)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Point containment; boundary points count as contained.
    pub fn contains(&self, p: Vec2) -> bool {
        if self.on_boundary(p, WALL_EPS) {
            return true;
        }
        self.contains_interior(p)
    }

    /// Strict interior containment (boundary does not count).
    pub fn contains_strict(&self, p: Vec2) -> bool {
        !self.on_boundary(p, WALL_EPS) && self.contains_interior(p)
    }

    fn contains_interior(&self, p: Vec2) -> bool {
        // Even-odd crossing with a half-open edge rule.
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn on_boundary(&self, p: Vec2, tol: f64) -> bool {
        self.edges()
            .any(|(a, b)| point_segment_distance(p, a, b) <= tol)
    }

    /// Distance from `p` to the polygon; 0 if inside or on the boundary.
    pub fn distance(&self, p: Vec2) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Whole-polygon containment: every vertex of `poly` inside `self` and no
    /// proper edge crossing. Boundary contact counts as contained. `self` may
    /// be non-convex (L-shaped rooms).
    pub fn contains_poly(&self, poly: &Polygon) -> bool {
        if !poly.vertices.iter().all(|&p| self.contains(p)) {
            return false;
        }
        for (a, b) in poly.edges() {
            for (c, d) in self.edges() {
                if segments_cross_properly(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    /// Interior intersection test against a convex polygon, valid for
    /// non-convex `self`. Touching boundaries do not count.
    pub fn intersects_convex(&self, convex: &Polygon) -> bool {
        if convex.vertices.iter().any(|&p| self.contains_strict(p)) {
            return true;
        }
        if self.vertices.iter().any(|&p| convex.contains_strict(p)) {
            return true;
        }
        for (a, b) in self.edges() {
            for (c, d) in convex.edges() {
                if segments_cross_properly(a, b, c, d) {
                    return true;
                }
            }
        }
        false
    }
}

fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = (p.sub(a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a.add(ab.scale(t)))
}

/// True iff segments ab and cd cross transversally through each other's
/// interiors. Shared endpoints and collinear overlap do not count.
pub fn segments_cross_properly(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let o1 = b.sub(a).cross(c.sub(a));
    let o2 = b.sub(a).cross(d.sub(a));
    let o3 = d.sub(c).cross(a.sub(c));
    let o4 = d.sub(c).cross(b.sub(c));
    o1 * o2 < -EPS && o3 * o4 < -EPS
}

/// True iff two segments intersect at all (including endpoint touches).
pub fn segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    if segments_cross_properly(a, b, c, d) {
        return true;
    }
    let tol = 1e-12;
    point_segment_distance(c, a, b) <= tol
        || point_segment_distance(d, a, b) <= tol
        || point_segment_distance(a, c, d) <= tol
        || point_segment_distance(b, c, d) <= tol
}

/// Separating-axis overlap test for two convex polygons. Interiors must
/// intersect; shared boundary only is not an overlap.
pub fn polys_overlap(a: &Polygon, b: &Polygon) -> bool {
    !has_separating_axis(a, b) && !has_separating_axis(b, a)
}

fn has_separating_axis(a: &Polygon, b: &Polygon) -> bool {
    for (p, q) in a.edges() {
        let axis = q.sub(p).perp();
        let (min_a, max_a) = project(a, axis);
        let (min_b, max_b) = project(b, axis);
        // Touching projections (zero-measure overlap) separate.
        if max_a <= min_b + EPS || max_b <= min_a + EPS {
            return true;
        }
    }
    false
}

fn project(poly: &Polygon, axis: Vec2) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for p in poly.vertices() {
        let d = p.dot(axis);
        min = min.min(d);
        max = max.max(d);
    }
    (min, max)
}

/// Which sub-room a wall segment belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubRoom {
    Main,
    Bathroom,
}

/// Compass label for the shell wall an edge lies on; interior partition
/// walls carry no label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShellWall {
    North,
    South,
    East,
    West,
}

/// Per-edge annotations supplied when unwrapping a sub-room polygon.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct EdgeTags {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shell: Option<ShellWall>,
    #[serde(default)]
    pub hallway: bool,
}

/// One wall segment of the unwrapped chain.
#[derive(Debug, Clone)]
pub struct WallSegment {
    pub start: Vec2,
    pub end: Vec2,
    /// Unit vector pointing into the owning sub-room.
    pub inward: Vec2,
    pub sub_room: SubRoom,
    pub shared_with_bathroom: bool,
    pub tags: EdgeTags,
    /// Arc-length coordinate of `start` on the chain.
    pub start_s: f64,
    pub length: f64,
}

impl WallSegment {
    pub fn direction(&self) -> Vec2 {
        self.end.sub(self.start).normalized()
    }
    pub fn point_at(&self, t: f64) -> Vec2 {
        self.start.add(self.direction().scale(t))
    }
}

/// The walls of the room unwrapped into a single arc-length line. The
/// coordinate `s ∈ [0, total_length)` addresses every wall point once: main
/// room perimeter first, then the bathroom perimeter.
#[derive(Debug, Clone)]
pub struct WallChain {
    segments: Vec<WallSegment>,
    total_length: f64,
}

impl WallChain {
    pub fn segments(&self) -> &[WallSegment] {
        &self.segments
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    /// Segment containing arc-length coordinate `s`.
    pub fn segment_at(&self, s: f64) -> Result<&WallSegment> {
        if !(0.0..self.total_length).contains(&s) {
            return Err(Error::WallCoordRange {
                s,
                total: self.total_length,
            });
        }
        let idx = self
            .segments
            .iter()
            .rposition(|seg| seg.start_s <= s)
            .expect("s >= 0 lies in some segment");
        Ok(&self.segments[idx])
    }

    /// Point at arc-length `s`, facing the inward normal of its segment.
    pub fn wall_point(&self, s: f64) -> Result<Pose> {
        let seg = self.segment_at(s)?;
        let p = seg.point_at(s - seg.start_s);
        Ok(Pose::new(p.x, p.y, seg.inward.y.atan2(seg.inward.x)))
    }

    /// Inverse of [`WallChain::wall_point`]: arc-length coordinate of a point
    /// lying within [`WALL_EPS`] of some wall segment.
    pub fn wall_coord(&self, p: Vec2) -> Result<f64> {
        let mut best: Option<(f64, f64)> = None;
        for seg in &self.segments {
            let dir = seg.direction();
            let t = p.sub(seg.start).dot(dir).clamp(0.0, seg.length);
            let d = p.dist(seg.point_at(t));
            if d <= WALL_EPS && best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, seg.start_s + t));
            }
        }
        match best {
            Some((_, s)) => Ok(s % self.total_length),
            None => Err(Error::NotOnWall(p.x, p.y)),
        }
    }
}

/// Unwraps one sub-room polygon onto the end of an existing chain (pass an
/// empty builder result for the first sub-room). `shared` flags edges that
/// are common to both sub-rooms.
pub fn unwrap_walls(
    polygon: &Polygon,
    tags: &[EdgeTags],
    sub_room: SubRoom,
    shared: &[bool],
) -> Result<Vec<WallSegment>> {
    let n = polygon.vertices().len();
    if tags.len() != n || shared.len() != n {
        return Err(Error::InvalidGeometry(format!(
            "expected {n} edge annotations, got {} tags / {} shared flags",
            tags.len(),
            shared.len()
        )));
    }
    let mut segments = Vec::with_capacity(n);
    let mut s = 0.0;
    for (i, (a, b)) in polygon.edges().enumerate() {
        let dir = b.sub(a);
        segments.push(WallSegment {
            start: a,
            end: b,
            inward: dir.perp().normalized(),
            sub_room,
            shared_with_bathroom: shared[i],
            tags: tags[i],
            start_s: s,
            length: dir.norm(),
        });
        s += dir.norm();
    }
    Ok(segments)
}

/// Concatenates per-sub-room segment lists into one chain.
pub fn chain_from_segments(parts: Vec<Vec<WallSegment>>) -> WallChain {
    let mut segments = Vec::new();
    let mut s = 0.0;
    for part in parts {
        for mut seg in part {
            seg.start_s = s;
            s += seg.length;
            segments.push(seg);
        }
    }
    WallChain {
        segments,
        total_length: s,
    }
}

/// Rectangle footprint of an object at a free pose: `width` along the local
/// x axis, `depth` along local y, centered on the pose.
pub fn rect_footprint(pose: &Pose, width: f64, depth: f64) -> Polygon {
    let c = pose.position();
    let corners = [
        v(-width / 2.0, -depth / 2.0),
        v(width / 2.0, -depth / 2.0),
        v(width / 2.0, depth / 2.0),
        v(-width / 2.0, depth / 2.0),
    ];
    Polygon {
        vertices: corners
            .iter()
            .map(|p| c.add(p.rotated(pose.theta)))
            .collect(),
    }
}

/// Pose equivalent of a wall placement: the object's back edge is centered
/// at arc-length `s`, flush with the wall, extruded inward by `depth`. The
/// local +y axis of the returned pose faces into the room.
pub fn wall_pose(chain: &WallChain, s: f64, depth: f64) -> Result<Pose> {
    let seg = chain.segment_at(s)?;
    let anchor = seg.point_at(s - seg.start_s);
    let c = anchor.add(seg.inward.scale(depth / 2.0));
    let theta = seg.inward.y.atan2(seg.inward.x) - std::f64::consts::FRAC_PI_2;
    Ok(Pose::new(c.x, c.y, theta))
}

/// Which footprint sides a clearance zone abuts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClearanceSides {
    /// The local +y face (away from the wall for wall-mounted objects).
    Front,
    /// The two faces adjacent to the longest edges of the footprint.
    BothLongSides,
}

/// Clearance rectangles abutting the footprint of an object at `pose`.
pub fn clearance_rects(
    pose: &Pose,
    width: f64,
    depth: f64,
    sides: ClearanceSides,
    clearance_depth: f64,
) -> Vec<Polygon> {
    let local = match sides {
        ClearanceSides::Front => vec![Polygon::rect(
            v(-width / 2.0, depth / 2.0),
            v(width / 2.0, depth / 2.0 + clearance_depth),
        )],
        ClearanceSides::BothLongSides => {
            if width >= depth {
                vec![
                    Polygon::rect(
                        v(-width / 2.0, depth / 2.0),
                        v(width / 2.0, depth / 2.0 + clearance_depth),
                    ),
                    Polygon::rect(
                        v(-width / 2.0, -depth / 2.0 - clearance_depth),
                        v(width / 2.0, -depth / 2.0),
                    ),
                ]
            } else {
                vec![
                    Polygon::rect(
                        v(width / 2.0, -depth / 2.0),
                        v(width / 2.0 + clearance_depth, depth / 2.0),
                    ),
                    Polygon::rect(
                        v(-width / 2.0 - clearance_depth, -depth / 2.0),
                        v(-width / 2.0, depth / 2.0),
                    ),
                ]
            }
        }
    };
    let c = pose.position();
    local
        .into_iter()
        .map(|r| Polygon {
            vertices: r
                .vertices
                .iter()
                .map(|p| c.add(p.rotated(pose.theta)))
                .collect(),
        })
        .collect()
}

/// Quarter-disc swing region of a door hinged at the `-x` end of its wall
/// opening, sweeping from the wall into the room. Convex fan polygon.
pub fn door_swing_fan(chain: &WallChain, s: f64, width: f64) -> Result<Polygon> {
    let seg = chain.segment_at(s)?;
    let anchor = seg.point_at(s - seg.start_s);
    let u = seg.direction();
    let hinge = anchor.sub(u.scale(width / 2.0));
    let steps = 8;
    let mut vertices = vec![hinge];
    for i in 0..=steps {
        let phi = std::f64::consts::FRAC_PI_2 * i as f64 / steps as f64;
        vertices.push(hinge.add(u.rotated(phi).scale(width)));
    }
    Ok(Polygon { vertices })
}

/// True iff two segments are collinear and overlap over a positive length.
pub fn segments_overlap_collinear(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let ab = b.sub(a);
    let tol = 1e-9;
    if ab.cross(c.sub(a)).abs() > tol || ab.cross(d.sub(a)).abs() > tol {
        return false;
    }
    let len2 = ab.dot(ab);
    let tc = c.sub(a).dot(ab) / len2;
    let td = d.sub(a).dot(ab) / len2;
    let (lo, hi) = (tc.min(td), tc.max(td));
    lo.max(0.0) + 1e-9 < hi.min(1.0)
}
