//! Grid-based fall-risk model: baseline static evaluation from object
//! proximity, lighting, flooring and door operation; stochastic patient
//! trajectories between interaction targets; and their combination into a
//! per-cell risk distribution.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{angle_diff, segments_intersect, Polygon, SubRoom, Vec2, v};
use crate::room::{DoorOperation, Layout, Problem, Scenario, SupportKind};
use crate::{Error, Result};

/// Tunable magnitudes of the risk model. The defaults give effects the
/// expected signs and a cell-value span of roughly 0.7 to 1.7; every value
/// is overridable in the problem file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RiskFactors {
    pub support_strength: f64,
    pub hazard_strength: f64,
    /// Cells farther than this from every light are considered dim, meters.
    pub lighting_radius: f64,
    pub lighting_dim_penalty: f64,
    pub door_swing_penalty: f64,
    pub sit_to_stand: f64,
    pub stand_to_sit: f64,
    pub walk: f64,
    pub turn_base: f64,
    /// Extra motion risk per radian of turning angle.
    pub turn_angle_gain: f64,
    pub trajectories_per_scenario: usize,
    /// When true, effects of multiple nearby supports/hazards multiply;
    /// otherwise only the strongest effect applies.
    pub compound_support: bool,
}

impl Default for RiskFactors {
    fn default() -> Self {
        RiskFactors {
            support_strength: 0.3,
            hazard_strength: 0.3,
            lighting_radius: 3.0,
            lighting_dim_penalty: 1.2,
            door_swing_penalty: 1.2,
            sit_to_stand: 1.5,
            stand_to_sit: 1.4,
            walk: 1.0,
            turn_base: 1.2,
            turn_angle_gain: 0.3,
            trajectories_per_scenario: 10,
            compound_support: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskStats {
    pub median: f64,
    pub max: f64,
    pub mean: f64,
    /// Population standard deviation over unmasked cells.
    pub std: f64,
}

/// Discretized per-cell risk map over the room bounding box. Cells outside
/// the room are masked out of all statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskGrid {
    origin: Vec2,
    resolution: f64,
    width: usize,
    height: usize,
    cells: Vec<f64>,
    mask: Vec<bool>,
    unreachable: bool,
}

impl RiskGrid {
    /// Grid over the bounding box of the given polygons; a cell is unmasked
    /// iff its center lies inside one of them.
    pub fn over(polygons: &[&Polygon], resolution: f64) -> Result<RiskGrid> {
        if resolution <= 0.0 {
            return Err(Error::ResolutionTooCoarse { resolution });
        }
        let mut min = v(f64::INFINITY, f64::INFINITY);
        let mut max = v(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in polygons {
            let (lo, hi) = p.bounds();
            min = v(min.x.min(lo.x), min.y.min(lo.y));
            max = v(max.x.max(hi.x), max.y.max(hi.y));
        }
        let width = ((max.x - min.x) / resolution).round().max(0.0) as usize;
        let height = ((max.y - min.y) / resolution).round().max(0.0) as usize;
        let width = width.max(((max.x - min.x) / resolution).ceil() as usize);
        let height = height.max(((max.y - min.y) / resolution).ceil() as usize);
        if width == 0 || height == 0 {
            return Err(Error::ResolutionTooCoarse { resolution });
        }
        let mut mask = vec![false; width * height];
        for iy in 0..height {
            for ix in 0..width {
                let c = v(
                    min.x + (ix as f64 + 0.5) * resolution,
                    min.y + (iy as f64 + 0.5) * resolution,
                );
                mask[iy * width + ix] = polygons.iter().any(|p| p.contains(c));
            }
        }
        if !mask.iter().any(|&m| m) {
            return Err(Error::ResolutionTooCoarse { resolution });
        }
        Ok(RiskGrid {
            origin: min,
            resolution,
            width,
            height,
            cells: vec![1.0; width * height],
            mask,
            unreachable: false,
        })
    }

    /// A 1 x n fully unmasked grid holding the given values. Used by tests
    /// and by statistic-only callers.
    pub fn from_values(values: &[f64]) -> RiskGrid {
        RiskGrid {
            origin: v(0.0, 0.0),
            resolution: 1.0,
            width: values.len(),
            height: 1,
            cells: values.to_vec(),
            mask: vec![true; values.len()],
            unreachable: false,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }
    pub fn height(&self) -> usize {
        self.height
    }
    pub fn resolution(&self) -> f64 {
        self.resolution
    }
    pub fn origin(&self) -> Vec2 {
        self.origin
    }

    pub fn idx(&self, ix: usize, iy: usize) -> usize {
        iy * self.width + ix
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.cells[self.idx(ix, iy)]
    }

    pub fn set(&mut self, ix: usize, iy: usize, value: f64) {
        let i = self.idx(ix, iy);
        self.cells[i] = value;
    }

    pub fn is_masked(&self, ix: usize, iy: usize) -> bool {
        !self.mask[self.idx(ix, iy)]
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> Vec2 {
        v(
            self.origin.x + (ix as f64 + 0.5) * self.resolution,
            self.origin.y + (iy as f64 + 0.5) * self.resolution,
        )
    }

    /// Cell containing a point, if within the grid extent.
    pub fn cell_of(&self, p: Vec2) -> Option<(usize, usize)> {
        let fx = (p.x - self.origin.x) / self.resolution;
        let fy = (p.y - self.origin.y) / self.resolution;
        if fx < 0.0 || fy < 0.0 {
            return None;
        }
        let ix = fx as usize;
        let iy = fy as usize;
        if ix >= self.width || iy >= self.height {
            return None;
        }
        Some((ix, iy))
    }

    pub fn unmasked_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.cells
            .iter()
            .zip(&self.mask)
            .filter(|(_, m)| **m)
            .map(|(c, _)| *c)
    }

    pub fn unmasked_count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    pub fn mark_unreachable(&mut self) {
        self.unreachable = true;
    }

    pub fn unreachable(&self) -> bool {
        self.unreachable
    }

    /// Median, max, mean and population std over unmasked cells.
    pub fn stats(&self) -> Result<RiskStats> {
        let mut vals: Vec<f64> = self.unmasked_values().collect();
        if vals.is_empty() {
            return Err(Error::EmptyGrid);
        }
        vals.sort_by(f64::total_cmp);
        let n = vals.len();
        let median = if n % 2 == 1 {
            vals[n / 2]
        } else {
            (vals[n / 2 - 1] + vals[n / 2]) / 2.0
        };
        let max = vals[n - 1];
        let mean = vals.iter().sum::<f64>() / n as f64;
        let var = vals.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        Ok(RiskStats {
            median,
            max,
            mean,
            std: var.sqrt(),
        })
    }

    /// Row-major CSV of cell values; masked cells are blank.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for iy in 0..self.height {
            let row: Vec<String> = (0..self.width)
                .map(|ix| {
                    if self.mask[self.idx(ix, iy)] {
                        format!("{}", self.get(ix, iy))
                    } else {
                        String::new()
                    }
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Grid covering the room at the room's configured resolution.
pub fn make_grid(problem: &Problem) -> Result<RiskGrid> {
    RiskGrid::over(
        &[&problem.room.main_room, &problem.room.bathroom],
        problem.room.grid_resolution,
    )
}

/// Static per-cell evaluation: base value 1.0 modified by the strongest
/// supporting and hazardous object in reach, lighting coverage, the floor
/// factor, and swinging-door arcs.
pub fn baseline_risk(
    grid: &RiskGrid,
    layout: &Layout,
    problem: &Problem,
    factors: &RiskFactors,
) -> Result<RiskGrid> {
    let mut supports = Vec::new();
    let mut hazards = Vec::new();
    let mut lights = Vec::new();
    let mut swings = Vec::new();
    for (obj, placement) in problem.objects.iter().zip(&layout.placements) {
        if obj.is_light() {
            lights.push(problem.placement_pose(obj, placement)?.position());
            continue;
        }
        if let Some(fan) = problem.door_swing(obj, placement)? {
            swings.push(fan);
        }
        if let Some(fp) = problem.footprint(obj, placement)? {
            let eff = obj.support.strength;
            match obj.support.kind {
                SupportKind::Supportive => supports.push((fp, obj.support.reach, eff)),
                SupportKind::Hazardous => hazards.push((fp, obj.support.reach, eff)),
                SupportKind::Neutral => {}
            }
        }
    }

    let mut out = grid.clone();
    for iy in 0..grid.height() {
        for ix in 0..grid.width() {
            if grid.is_masked(ix, iy) {
                continue;
            }
            let c = grid.cell_center(ix, iy);
            let mut value = 1.0;

            value *= proximity_factor(c, &supports, factors.support_strength, factors, false);
            value *= proximity_factor(c, &hazards, factors.hazard_strength, factors, true);

            if !lights.is_empty() || factors.lighting_dim_penalty > 1.0 {
                let lit = lights.iter().any(|l| l.dist(c) <= factors.lighting_radius);
                if !lit {
                    value *= factors.lighting_dim_penalty;
                }
            }

            value *= problem.room.flooring_factor;

            if problem.room.door_operation == DoorOperation::Swinging
                && swings.iter().any(|fan| fan.contains(c))
            {
                value *= factors.door_swing_penalty;
            }

            out.set(ix, iy, value.max(1e-3));
        }
    }
    Ok(out)
}

fn proximity_factor(
    c: Vec2,
    objects: &[(Polygon, f64, f64)],
    global_strength: f64,
    factors: &RiskFactors,
    hazardous: bool,
) -> f64 {
    let effects = objects.iter().filter_map(|(fp, reach, strength)| {
        if *reach <= 0.0 {
            return None;
        }
        let d = fp.distance(c);
        let e = global_strength * strength * (1.0 - d / reach).max(0.0);
        (e > 0.0).then_some(e)
    });
    if factors.compound_support {
        effects.fold(1.0, |acc, e| acc * if hazardous { 1.0 + e } else { 1.0 - e })
    } else {
        let e = effects.fold(0.0, f64::max);
        if hazardous {
            1.0 + e
        } else {
            1.0 - e
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activity {
    SitToStand,
    Walk,
    Turn,
    StandToSit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint {
    pub position: Vec2,
    pub activity: Activity,
    /// Absolute heading change at this waypoint, radians.
    pub turn_angle: f64,
}

/// A simulated patient path between two interaction targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub waypoints: Vec<Waypoint>,
}

impl Trajectory {
    pub fn length(&self) -> f64 {
        self.waypoints
            .windows(2)
            .map(|w| w[0].position.dist(w[1].position))
            .sum()
    }
}

/// Precomputed occupancy and wall-barrier data for one layout, shared by
/// all trajectory draws of an evaluation.
pub struct TrajectoryField {
    obstacles: Vec<Polygon>,
    blocked: Vec<bool>,
    /// Shared-wall pieces not covered by a door opening; paths may not
    /// cross these.
    barriers: Vec<(Vec2, Vec2)>,
    grid: RiskGrid,
}

impl TrajectoryField {
    pub fn new(problem: &Problem, layout: &Layout, grid: &RiskGrid) -> Result<TrajectoryField> {
        let mut obstacles = Vec::new();
        let mut door_edges = Vec::new();
        for (obj, placement) in problem.objects.iter().zip(&layout.placements) {
            if obj.is_light() {
                continue;
            }
            if obj.is_door() {
                // Door openings are passages, not obstacles. Remember the
                // opening extent to cut it out of the wall barrier.
                let pose = problem.placement_pose(obj, placement)?;
                let along = v(obj.width / 2.0, 0.0).rotated(pose.theta);
                let back = pose
                    .position()
                    .sub(v(0.0, obj.depth / 2.0).rotated(pose.theta));
                door_edges.push((back.sub(along), back.add(along)));
                continue;
            }
            if let Some(fp) = problem.footprint(obj, placement)? {
                obstacles.push(fp);
            }
        }

        let mut barriers = Vec::new();
        for seg in problem.room.chain().segments() {
            if seg.sub_room != SubRoom::Main || !seg.shared_with_bathroom {
                continue;
            }
            let dir = seg.direction();
            // Door openings on this wall line, as [t0, t1] intervals.
            let mut cuts: Vec<(f64, f64)> = door_edges
                .iter()
                .filter_map(|&(a, b)| {
                    let da = dist_to_line(a, seg.start, seg.end);
                    let db = dist_to_line(b, seg.start, seg.end);
                    if da > 1e-4 || db > 1e-4 {
                        return None;
                    }
                    let ta = a.sub(seg.start).dot(dir);
                    let tb = b.sub(seg.start).dot(dir);
                    Some((ta.min(tb), ta.max(tb)))
                })
                .collect();
            cuts.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut t = 0.0;
            for (c0, c1) in cuts {
                if c0 > t + 1e-9 {
                    barriers.push((seg.point_at(t), seg.point_at(c0.min(seg.length))));
                }
                t = t.max(c1);
            }
            if t < seg.length - 1e-9 {
                barriers.push((seg.point_at(t.max(0.0)), seg.end));
            }
        }

        let mut blocked = vec![false; grid.width() * grid.height()];
        for iy in 0..grid.height() {
            for ix in 0..grid.width() {
                let i = grid.idx(ix, iy);
                if grid.is_masked(ix, iy) {
                    blocked[i] = true;
                    continue;
                }
                let c = grid.cell_center(ix, iy);
                blocked[i] = obstacles.iter().any(|o| o.contains(c));
            }
        }

        Ok(TrajectoryField {
            obstacles,
            blocked,
            barriers,
            grid: grid.clone(),
        })
    }

    fn is_free_cell(&self, ix: usize, iy: usize) -> bool {
        !self.blocked[self.grid.idx(ix, iy)]
    }

    fn crosses_barrier(&self, a: Vec2, b: Vec2) -> bool {
        self.barriers
            .iter()
            .any(|&(c, d)| segments_intersect(a, b, c, d))
    }

    fn point_free(&self, p: Vec2) -> bool {
        self.grid.cell_of(p).is_some_and(|(ix, iy)| {
            !self.grid.is_masked(ix, iy) && !self.obstacles.iter().any(|o| o.contains(p))
        })
    }

    fn line_of_sight(&self, a: Vec2, b: Vec2) -> bool {
        if self.crosses_barrier(a, b) {
            return false;
        }
        let steps = (a.dist(b) / (self.grid.resolution() / 2.0)).ceil().max(1.0) as usize;
        (0..=steps).all(|i| {
            let t = i as f64 / steps as f64;
            self.point_free(a.add(b.sub(a).scale(t)))
        })
    }

    /// Nearest free cell to a point, searching a small neighborhood. A
    /// point nudged outside the outline (an interaction spot beside an
    /// object in a corner) is clamped to the closest cell first.
    fn anchor_cell(&self, p: Vec2) -> Option<(usize, usize)> {
        let (ix, iy) = self.grid.cell_of(p).unwrap_or_else(|| {
            let fx = (p.x - self.grid.origin().x) / self.grid.resolution() - 0.5;
            let fy = (p.y - self.grid.origin().y) / self.grid.resolution() - 0.5;
            (
                (fx.round().max(0.0) as usize).min(self.grid.width() - 1),
                (fy.round().max(0.0) as usize).min(self.grid.height() - 1),
            )
        });
        if self.is_free_cell(ix, iy) {
            return Some((ix, iy));
        }
        let mut best: Option<((usize, usize), f64)> = None;
        let r = 4i64;
        for dy in -r..=r {
            for dx in -r..=r {
                let nx = ix as i64 + dx;
                let ny = iy as i64 + dy;
                if nx < 0 || ny < 0 || nx >= self.grid.width() as i64 || ny >= self.grid.height() as i64 {
                    continue;
                }
                let (nx, ny) = (nx as usize, ny as usize);
                if !self.is_free_cell(nx, ny) {
                    continue;
                }
                let center = self.grid.cell_center(nx, ny);
                if self.crosses_barrier(p, center) {
                    continue;
                }
                let d = center.dist(p);
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some(((nx, ny), d));
                }
            }
        }
        best.map(|(c, _)| c)
    }

    /// Shortest 8-connected grid path between two cells, respecting blocked
    /// cells and wall barriers. Returns cell waypoints.
    pub fn shortest_path(
        &self,
        start: (usize, usize),
        goal: (usize, usize),
    ) -> Option<Vec<(usize, usize)>> {
        let w = self.grid.width();
        let h = self.grid.height();
        let idx = |c: (usize, usize)| c.1 * w + c.0;
        let mut dist = vec![f64::INFINITY; w * h];
        let mut prev = vec![usize::MAX; w * h];
        let mut heap: BinaryHeap<Reverse<(u64, usize)>> = BinaryHeap::new();
        let key = |d: f64, g: Vec2, c: Vec2| -> u64 { ((d + g.dist(c)) * 1e9) as u64 };
        let goal_c = self.grid.cell_center(goal.0, goal.1);
        dist[idx(start)] = 0.0;
        heap.push(Reverse((
            key(0.0, goal_c, self.grid.cell_center(start.0, start.1)),
            idx(start),
        )));
        const DIRS: [(i64, i64); 8] = [
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
        ];
        while let Some(Reverse((_, i))) = heap.pop() {
            if i == idx(goal) {
                let mut path = vec![goal];
                let mut c = i;
                while prev[c] != usize::MAX {
                    c = prev[c];
                    path.push((c % w, c / w));
                }
                path.reverse();
                return Some(path);
            }
            let (cx, cy) = (i % w, i / w);
            let cc = self.grid.cell_center(cx, cy);
            for (dx, dy) in DIRS {
                let nx = cx as i64 + dx;
                let ny = cy as i64 + dy;
                if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue;
                }
                let (nx, ny) = (nx as usize, ny as usize);
                if !self.is_free_cell(nx, ny) {
                    continue;
                }
                // No corner cutting on diagonal moves.
                if dx != 0 && dy != 0 {
                    if !self.is_free_cell(nx, cy) || !self.is_free_cell(cx, ny) {
                        continue;
                    }
                }
                let nc = self.grid.cell_center(nx, ny);
                if self.crosses_barrier(cc, nc) {
                    continue;
                }
                let nd = dist[i] + cc.dist(nc);
                let j = self.grid.idx(nx, ny);
                if nd < dist[j] {
                    dist[j] = nd;
                    prev[j] = i;
                    heap.push(Reverse((key(nd, goal_c, nc), j)));
                }
            }
        }
        None
    }
}

fn dist_to_line(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b.sub(a);
    (ab.cross(p.sub(a)) / ab.norm()).abs()
}

/// Heading change above which a waypoint counts as a turn (15 degrees).
const TURN_THRESHOLD: f64 = 15.0 * std::f64::consts::PI / 180.0;
/// Spacing of the coarse waypoints that receive Gaussian noise, meters.
const COARSE_SPACING: f64 = 0.5;

/// Simulates one patient path for a scenario: shortest grid path, smoothed,
/// then perturbed with bounded Gaussian waypoint noise and re-checked
/// collision-free.
pub fn simulate_trajectory(
    problem: &Problem,
    layout: &Layout,
    field: &TrajectoryField,
    scenario: &Scenario,
    rng: &mut ChaCha8Rng,
) -> Result<Trajectory> {
    let start_obj = &problem.objects[problem
        .object_index(&scenario.from)
        .ok_or_else(|| Error::Validation(format!("unknown scenario object `{}`", scenario.from)))?];
    let goal_obj = &problem.objects[problem
        .object_index(&scenario.to)
        .ok_or_else(|| Error::Validation(format!("unknown scenario object `{}`", scenario.to)))?];
    let start_i = problem.object_index(&scenario.from).unwrap();
    let goal_i = problem.object_index(&scenario.to).unwrap();
    let start_pt = problem.interaction_point(start_obj, &layout.placements[start_i])?;
    let goal_pt = problem.interaction_point(goal_obj, &layout.placements[goal_i])?;

    if start_pt.dist(goal_pt) < 1e-9 {
        return Ok(Trajectory {
            waypoints: vec![
                Waypoint {
                    position: start_pt,
                    activity: Activity::SitToStand,
                    turn_angle: 0.0,
                },
                Waypoint {
                    position: goal_pt,
                    activity: Activity::StandToSit,
                    turn_angle: 0.0,
                },
            ],
        });
    }

    let unreachable = || Error::UnreachableScenario {
        from: scenario.from.clone(),
        to: scenario.to.clone(),
    };
    let start_cell = field.anchor_cell(start_pt).ok_or_else(unreachable)?;
    let goal_cell = field.anchor_cell(goal_pt).ok_or_else(unreachable)?;
    let cells = field
        .shortest_path(start_cell, goal_cell)
        .ok_or_else(unreachable)?;

    // World-space polyline with the exact interaction points as endpoints.
    let mut pts = vec![start_pt];
    pts.extend(cells.iter().map(|&(ix, iy)| field.grid.cell_center(ix, iy)));
    pts.push(goal_pt);

    let pts = shortcut_smooth(field, &pts);
    let mut coarse = resample(&pts, COARSE_SPACING);

    // Bounded Gaussian waypoint noise; a perturbation that would collide or
    // cross a wall is dropped in favor of the original waypoint. Half a
    // cell keeps the expected detour a few percent of path length.
    let sigma = field.grid.resolution() / 2.0;
    for i in 1..coarse.len().saturating_sub(1) {
        let jitter = v(
            gaussian(rng, sigma).clamp(-2.0 * sigma, 2.0 * sigma),
            gaussian(rng, sigma).clamp(-2.0 * sigma, 2.0 * sigma),
        );
        let cand = coarse[i].add(jitter);
        if field.point_free(cand)
            && field.line_of_sight(coarse[i - 1], cand)
            && field.line_of_sight(cand, coarse[i + 1])
        {
            coarse[i] = cand;
        }
    }

    let fine = resample(&coarse, field.grid.resolution());
    Ok(label_waypoints(&fine))
}

fn gaussian(rng: &mut ChaCha8Rng, sigma: f64) -> f64 {
    // Box-Muller.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    sigma * (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn shortcut_smooth(field: &TrajectoryField, pts: &[Vec2]) -> Vec<Vec2> {
    let mut out = vec![pts[0]];
    let mut i = 0;
    while i < pts.len() - 1 {
        let mut j = pts.len() - 1;
        while j > i + 1 && !field.line_of_sight(pts[i], pts[j]) {
            j -= 1;
        }
        out.push(pts[j]);
        i = j;
    }
    out
}

fn resample(pts: &[Vec2], spacing: f64) -> Vec<Vec2> {
    let mut out = Vec::new();
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let n = (a.dist(b) / spacing).ceil().max(1.0) as usize;
        for k in 0..n {
            out.push(a.add(b.sub(a).scale(k as f64 / n as f64)));
        }
    }
    out.push(*pts.last().unwrap());
    out
}

fn label_waypoints(pts: &[Vec2]) -> Trajectory {
    let n = pts.len();
    let mut waypoints = Vec::with_capacity(n);
    for (i, &p) in pts.iter().enumerate() {
        let (activity, turn_angle) = if i == 0 {
            (Activity::SitToStand, 0.0)
        } else if i == n - 1 {
            (Activity::StandToSit, 0.0)
        } else {
            let h_in = pts[i].sub(pts[i - 1]);
            let h_out = pts[i + 1].sub(pts[i]);
            let angle = angle_diff(h_in.y.atan2(h_in.x), h_out.y.atan2(h_out.x)).abs();
            if angle > TURN_THRESHOLD {
                (Activity::Turn, angle)
            } else {
                (Activity::Walk, angle)
            }
        };
        waypoints.push(Waypoint {
            position: p,
            activity,
            turn_angle,
        });
    }
    Trajectory { waypoints }
}

/// Per-waypoint motion risk: activity multiplier scaled by turning angle.
pub fn motion_risk(traj: &Trajectory, factors: &RiskFactors) -> Vec<(Vec2, f64)> {
    traj.waypoints
        .iter()
        .map(|w| {
            let mult = match w.activity {
                Activity::SitToStand => factors.sit_to_stand,
                Activity::StandToSit => factors.stand_to_sit,
                Activity::Walk => factors.walk,
                Activity::Turn => factors.turn_base,
            };
            (w.position, mult * (1.0 + factors.turn_angle_gain * w.turn_angle))
        })
        .collect()
}

/// Merges baseline and motion risk: cells visited by trajectory points get
/// the mean of the baseline value and the mean of the point risks there.
pub fn combined_risk(
    baseline: &RiskGrid,
    trajectories: &[Trajectory],
    factors: &RiskFactors,
) -> RiskGrid {
    let mut sums = vec![0.0; baseline.width * baseline.height];
    let mut counts = vec![0usize; baseline.width * baseline.height];
    for traj in trajectories {
        for (p, r) in motion_risk(traj, factors) {
            if let Some((ix, iy)) = baseline.cell_of(p) {
                if !baseline.is_masked(ix, iy) {
                    let i = baseline.idx(ix, iy);
                    sums[i] += r;
                    counts[i] += 1;
                }
            }
        }
    }
    let mut out = baseline.clone();
    for iy in 0..out.height {
        for ix in 0..out.width {
            let i = out.idx(ix, iy);
            if counts[i] > 0 {
                let traj_mean = sums[i] / counts[i] as f64;
                out.cells[i] = (baseline.cells[i] + traj_mean) / 2.0;
            }
        }
    }
    out
}

/// Full risk evaluation of a layout: baseline plus sampled trajectories for
/// every scenario. Unreachable scenarios flag the grid so the cost layer
/// assigns +inf.
pub fn evaluate(problem: &Problem, layout: &Layout, rng: &mut ChaCha8Rng) -> Result<RiskGrid> {
    let grid = make_grid(problem)?;
    let baseline = baseline_risk(&grid, layout, problem, &problem.risk_factors)?;
    let field = TrajectoryField::new(problem, layout, &grid)?;
    let mut trajectories = Vec::new();
    for sc in &problem.scenarios {
        for _ in 0..problem.risk_factors.trajectories_per_scenario {
            match simulate_trajectory(problem, layout, &field, sc, rng) {
                Ok(t) => trajectories.push(t),
                Err(Error::UnreachableScenario { .. }) => {
                    let mut out = baseline;
                    out.mark_unreachable();
                    return Ok(out);
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(combined_risk(&baseline, &trajectories, &problem.risk_factors))
}
