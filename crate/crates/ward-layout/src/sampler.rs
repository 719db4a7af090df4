//! Feasible-layout generation: a backtracking sampler that assigns objects
//! one at a time, rejecting placements that violate any constraint. The
//! same engine draws uniform initial layouts and Gaussian "nearby" layouts
//! around a feasible base.

use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constraints;
use crate::geometry::{normalize_angle, Pose, SubRoom, Vec2, WallSegment};
use crate::room::{DoorKind, DomainKind, Layout, ObjectSpec, Placement, Problem, RequiredSubRoom};
use crate::{Error, Result};

/// Gaussian widths for one free-pose object class. The angle is given in
/// degrees at the configuration surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeSigma {
    pub x: f64,
    pub y: f64,
    pub theta_deg: f64,
}

/// Gaussian proposal widths used when drawing a layout near an existing
/// one, split by object class and sub-room.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PerturbationSpec {
    pub free_main: FreeSigma,
    pub free_bathroom: FreeSigma,
    /// Wall-coordinate sigma for main-room wall furniture, meters.
    pub wall_main: f64,
    pub wall_bathroom: f64,
    pub door_main: f64,
    pub door_bathroom: f64,
    /// Per-axis sigma for ceiling lights, meters.
    pub light: f64,
}

impl Default for PerturbationSpec {
    fn default() -> Self {
        PerturbationSpec {
            free_main: FreeSigma {
                x: 1.0,
                y: 1.0,
                theta_deg: 30.0,
            },
            free_bathroom: FreeSigma {
                x: 0.5,
                y: 0.5,
                theta_deg: 30.0,
            },
            wall_main: 5.0,
            wall_bathroom: 1.0,
            door_main: 4.0,
            door_bathroom: 2.0,
            light: 1.0,
        }
    }
}

impl PerturbationSpec {
    /// All-zero widths; nearby draws then reproduce the base layout.
    pub fn zero() -> PerturbationSpec {
        PerturbationSpec {
            free_main: FreeSigma {
                x: 0.0,
                y: 0.0,
                theta_deg: 0.0,
            },
            free_bathroom: FreeSigma {
                x: 0.0,
                y: 0.0,
                theta_deg: 0.0,
            },
            wall_main: 0.0,
            wall_bathroom: 0.0,
            door_main: 0.0,
            door_bathroom: 0.0,
            light: 0.0,
        }
    }
}

/// Search effort limits for the backtracking sampler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerBudget {
    pub timeout_secs: f64,
    pub max_attempts_per_variable: usize,
    /// Total backtrack steps allowed, as a multiple of the object count.
    pub max_backtrack_depth_factor: usize,
}

impl Default for SamplerBudget {
    fn default() -> Self {
        SamplerBudget {
            timeout_secs: 5.0,
            max_attempts_per_variable: 50,
            max_backtrack_depth_factor: 10,
        }
    }
}

impl SamplerBudget {
    pub fn validate(&self) -> Result<()> {
        if !(self.timeout_secs > 0.0) {
            return Err(Error::Validation("sampler timeout must be > 0".into()));
        }
        if self.max_attempts_per_variable == 0 || self.max_backtrack_depth_factor == 0 {
            return Err(Error::Validation(
                "sampler attempt and backtrack budgets must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Assignment order: doors first (their wall choices are the scarcest),
/// then wall furniture large-to-small, then free furniture, then lights.
/// Most-constrained-first keeps backtracking shallow.
pub fn assignment_order(problem: &Problem) -> Vec<usize> {
    let mut order: Vec<usize> = (0..problem.objects.len()).collect();
    let rank = |obj: &ObjectSpec| -> (u8, f64) {
        let group = match obj.domain {
            DomainKind::Door => match obj.door_kind {
                Some(DoorKind::Bathroom) => 0,
                _ => 1,
            },
            DomainKind::Wall => 2,
            DomainKind::FreePose => 3,
            DomainKind::CeilingLight => 4,
        };
        // Negative area so larger objects sort first within a group.
        (group, -(obj.width * obj.depth))
    };
    order.sort_by(|&a, &b| {
        let (ga, aa) = rank(&problem.objects[a]);
        let (gb, ab) = rank(&problem.objects[b]);
        ga.cmp(&gb).then(aa.total_cmp(&ab)).then(a.cmp(&b))
    });
    order
}

fn gaussian(rng: &mut ChaCha8Rng, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    sigma * (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn sub_room_matches(required: RequiredSubRoom, sub_room: SubRoom) -> bool {
    match required {
        RequiredSubRoom::Main => sub_room == SubRoom::Main,
        RequiredSubRoom::Bathroom => sub_room == SubRoom::Bathroom,
        RequiredSubRoom::Either => true,
    }
}

/// Wall intervals (in chain arc length) on which the center of an object
/// of width `w` may sit.
fn wall_intervals(problem: &Problem, obj: &ObjectSpec) -> Vec<(f64, f64)> {
    let allowed = |seg: &WallSegment| -> bool {
        match obj.door_kind {
            None => sub_room_matches(obj.sub_room, seg.sub_room),
            Some(DoorKind::Main) => problem.room.main_door_permitted(seg),
            Some(DoorKind::Bathroom) => {
                seg.sub_room == SubRoom::Main && seg.shared_with_bathroom
            }
        }
    };
    problem
        .room
        .chain()
        .segments()
        .iter()
        .filter(|seg| allowed(seg) && seg.length >= obj.width)
        .map(|seg| {
            (
                seg.start_s + obj.width / 2.0,
                seg.start_s + seg.length - obj.width / 2.0,
            )
        })
        .collect()
}

fn uniform_on_intervals(intervals: &[(f64, f64)], rng: &mut ChaCha8Rng) -> Option<f64> {
    let total: f64 = intervals.iter().map(|(a, b)| b - a).sum();
    if intervals.is_empty() {
        return None;
    }
    if total <= 0.0 {
        // Only degenerate (exact-fit) intervals; pick one midpoint.
        let (a, b) = intervals[rng.gen_range(0..intervals.len())];
        return Some((a + b) / 2.0);
    }
    let mut t = rng.gen_range(0.0..total);
    for (a, b) in intervals {
        if t <= b - a {
            return Some(a + t);
        }
        t -= b - a;
    }
    Some(intervals[intervals.len() - 1].1)
}

fn point_region(problem: &Problem, required: RequiredSubRoom) -> (Vec2, Vec2) {
    match required {
        RequiredSubRoom::Main => problem.room.main_room.bounds(),
        RequiredSubRoom::Bathroom => problem.room.bathroom.bounds(),
        RequiredSubRoom::Either => problem.room.bounds(),
    }
}

fn in_region(problem: &Problem, required: RequiredSubRoom, p: Vec2) -> bool {
    match required {
        RequiredSubRoom::Main => problem.room.main_room.contains(p),
        RequiredSubRoom::Bathroom => problem.room.bathroom.contains(p),
        RequiredSubRoom::Either => problem.room.contains(p),
    }
}

enum Proposer<'a> {
    Uniform,
    Nearby(&'a Layout),
}

impl Proposer<'_> {
    fn propose(
        &self,
        problem: &Problem,
        index: usize,
        rng: &mut ChaCha8Rng,
    ) -> Option<Placement> {
        let obj = &problem.objects[index];
        match self {
            Proposer::Uniform => propose_uniform(problem, obj, rng),
            Proposer::Nearby(base) => {
                Some(propose_nearby(problem, obj, &base.placements[index], rng))
            }
        }
    }
}

fn propose_uniform(problem: &Problem, obj: &ObjectSpec, rng: &mut ChaCha8Rng) -> Option<Placement> {
    match obj.domain {
        DomainKind::Wall | DomainKind::Door => {
            let intervals = wall_intervals(problem, obj);
            uniform_on_intervals(&intervals, rng).map(|s| Placement::Wall { s })
        }
        DomainKind::FreePose => {
            let (lo, hi) = point_region(problem, obj.sub_room);
            let x = rng.gen_range(lo.x..=hi.x);
            let y = rng.gen_range(lo.y..=hi.y);
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            Some(Placement::Pose(Pose::new(x, y, theta)))
        }
        DomainKind::CeilingLight => {
            let (lo, hi) = point_region(problem, obj.sub_room);
            Some(Placement::Point([
                rng.gen_range(lo.x..=hi.x),
                rng.gen_range(lo.y..=hi.y),
            ]))
        }
    }
}

fn wall_sigma(problem: &Problem, obj: &ObjectSpec) -> f64 {
    let p = &problem.perturbation;
    let bathroom = obj.sub_room == RequiredSubRoom::Bathroom;
    match obj.door_kind {
        Some(DoorKind::Main) => p.door_main,
        Some(DoorKind::Bathroom) => p.door_bathroom,
        None => {
            if bathroom {
                p.wall_bathroom
            } else {
                p.wall_main
            }
        }
    }
}

fn propose_nearby(
    problem: &Problem,
    obj: &ObjectSpec,
    base: &Placement,
    rng: &mut ChaCha8Rng,
) -> Placement {
    let p = &problem.perturbation;
    match (obj.domain, base) {
        (DomainKind::Wall | DomainKind::Door, Placement::Wall { s }) => {
            let total = problem.room.chain().total_length();
            let s = (s + gaussian(rng, wall_sigma(problem, obj))).rem_euclid(total);
            Placement::Wall { s }
        }
        (DomainKind::FreePose, Placement::Pose(pose)) => {
            let sigma = if obj.sub_room == RequiredSubRoom::Bathroom {
                p.free_bathroom
            } else {
                p.free_main
            };
            let position = redraw_in_region(
                problem,
                obj.sub_room,
                pose.position(),
                sigma.x,
                sigma.y,
                rng,
            );
            let theta =
                normalize_angle(pose.theta + gaussian(rng, sigma.theta_deg.to_radians()));
            Placement::Pose(Pose::new(position.x, position.y, theta))
        }
        (DomainKind::CeilingLight, Placement::Point([x, y])) => {
            let position = redraw_in_region(
                problem,
                obj.sub_room,
                crate::geometry::v(*x, *y),
                p.light,
                p.light,
                rng,
            );
            Placement::Point([position.x, position.y])
        }
        // Mismatched base placement kinds never survive layout parsing;
        // keep the base untouched if one shows up.
        (_, other) => *other,
    }
}

/// Gaussian step for a point, re-drawn (not clamped) while it falls
/// outside its region; gives up after a few tries and keeps the base.
fn redraw_in_region(
    problem: &Problem,
    required: RequiredSubRoom,
    base: Vec2,
    sigma_x: f64,
    sigma_y: f64,
    rng: &mut ChaCha8Rng,
) -> Vec2 {
    for _ in 0..20 {
        let cand = crate::geometry::v(
            base.x + gaussian(rng, sigma_x),
            base.y + gaussian(rng, sigma_y),
        );
        if in_region(problem, required, cand) {
            return cand;
        }
    }
    base
}

fn solve(problem: &Problem, proposer: Proposer<'_>, rng: &mut ChaCha8Rng) -> Result<Layout> {
    let order = assignment_order(problem);
    let n = order.len();
    let budget = &problem.budget;
    let deadline = Instant::now() + Duration::from_secs_f64(budget.timeout_secs);
    let max_backtracks = budget.max_backtrack_depth_factor * n.max(1);

    let mut partial: Vec<Option<Placement>> = vec![None; n];
    let mut attempts = vec![0usize; n];
    let mut depth = 0usize;
    let mut backtracks = 0usize;

    while depth < n {
        let assigned = partial.iter().filter(|p| p.is_some()).count();
        if Instant::now() > deadline {
            return Err(Error::Infeasible { assigned, total: n });
        }
        if attempts[depth] >= budget.max_attempts_per_variable {
            attempts[depth] = 0;
            backtracks += 1;
            if depth == 0 || backtracks > max_backtracks {
                return Err(Error::Infeasible { assigned, total: n });
            }
            depth -= 1;
            partial[order[depth]] = None;
            continue;
        }
        attempts[depth] += 1;
        let index = order[depth];
        let Some(candidate) = proposer.propose(problem, index, rng) else {
            // No proposal domain at all (for example no wall long enough):
            // exhaust this variable immediately.
            attempts[depth] = budget.max_attempts_per_variable;
            continue;
        };
        partial[index] = Some(candidate);
        if constraints::is_feasible(problem, &partial)? {
            depth += 1;
            if depth < n {
                attempts[depth] = 0;
            }
        } else {
            partial[index] = None;
        }
    }

    Ok(Layout {
        placements: partial.into_iter().map(|p| p.expect("assigned")).collect(),
    })
}

/// Draws a uniformly sampled feasible layout.
pub fn sample_initial(problem: &Problem, rng: &mut ChaCha8Rng) -> Result<Layout> {
    solve(problem, Proposer::Uniform, rng)
}

/// Draws a feasible layout near `base` using the problem's Gaussian
/// proposal widths. With all-zero widths this reproduces `base`.
pub fn nearby_layout(problem: &Problem, base: &Layout, rng: &mut ChaCha8Rng) -> Result<Layout> {
    solve(problem, Proposer::Nearby(base), rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;
    use crate::room::{parse_layout, parse_problem};
    use rand::SeedableRng;

    #[test]
    fn order_groups_doors_walls_free_lights() {
        let problem = parse_problem(assets::INBOARD_ROOM).unwrap();
        let order = assignment_order(&problem);
        let groups: Vec<u8> = order
            .iter()
            .map(|&i| match problem.objects[i].domain {
                DomainKind::Door => 0,
                DomainKind::Wall => 1,
                DomainKind::FreePose => 2,
                DomainKind::CeilingLight => 3,
            })
            .collect();
        let mut sorted = groups.clone();
        sorted.sort_unstable();
        assert_eq!(groups, sorted);
        // The scarcest wall choice leads, then the largest wall object.
        assert_eq!(problem.objects[order[0]].id, "bathroom_door");
        assert_eq!(problem.objects[order[2]].id, "bed");
    }

    #[test]
    fn initial_samples_are_feasible_and_diverse() {
        let problem = parse_problem(assets::INBOARD_ROOM).unwrap();
        let mut layouts = Vec::new();
        for seed in 0..8u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let layout = sample_initial(&problem, &mut rng).unwrap();
            let violations = constraints::check_layout(&problem, &layout).unwrap();
            assert!(violations.is_empty(), "seed {seed}: {violations:?}");
            layouts.push(layout);
        }
        let distinct = layouts
            .iter()
            .enumerate()
            .all(|(i, a)| layouts.iter().skip(i + 1).all(|b| a != b));
        assert!(distinct);
    }

    #[test]
    fn outboard_samples_are_feasible() {
        let problem = parse_problem(assets::OUTBOARD_ROOM).unwrap();
        for seed in 0..4u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let layout = sample_initial(&problem, &mut rng).unwrap();
            assert!(constraints::check_layout(&problem, &layout).unwrap().is_empty());
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let problem = parse_problem(assets::INBOARD_ROOM).unwrap();
        let a = sample_initial(&problem, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = sample_initial(&problem, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_sigma_nearby_reproduces_base() {
        let mut problem = parse_problem(assets::INBOARD_ROOM).unwrap();
        problem.perturbation = PerturbationSpec::zero();
        let base = parse_layout(assets::TRADITIONAL_LAYOUT, &problem).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let near = nearby_layout(&problem, &base, &mut rng).unwrap();
        assert_eq!(near, base);
    }

    #[test]
    fn nearby_layouts_stay_feasible() {
        let problem = parse_problem(assets::INBOARD_ROOM).unwrap();
        let base = parse_layout(assets::TRADITIONAL_LAYOUT, &problem).unwrap();
        for seed in 0..6u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let near = nearby_layout(&problem, &base, &mut rng).unwrap();
            let violations = constraints::check_layout(&problem, &near).unwrap();
            assert!(violations.is_empty(), "seed {seed}: {violations:?}");
        }
    }

    #[test]
    fn nearby_wall_steps_have_the_configured_spread() {
        // One wall object on a long wall, far from corners, so constraint
        // rejections are negligible and the accepted steps are the raw
        // Gaussian proposals.
        let text = r##"{
          "name": "long wall",
          "room": {
            "main_room": [[0,0],[40,0],[40,8],[3,8],[3,6],[0,6]],
            "main_room_walls": [
              {"shell":"south","hallway":true},{"shell":"east"},{"shell":"north"},
              {},{},{"shell":"west"}
            ],
            "bathroom": [[0,6],[3,6],[3,8],[0,8]],
            "bathroom_walls": [{},{},{"shell":"north"},{"shell":"west"}],
            "typology": "inboard"
          },
          "objects": [
            {"id":"bed","name":"Bed","width":1.0,"depth":2.1,
             "domain":"wall","sub_room":"main"}
          ]
        }"##;
        let mut problem = parse_problem(text).unwrap();
        problem.perturbation.wall_main = 1.0;
        let base = Layout {
            placements: vec![Placement::Wall { s: 20.0 }],
        };
        assert!(constraints::check_layout(&problem, &base).unwrap().is_empty());

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut deltas = Vec::new();
        for _ in 0..600 {
            let near = nearby_layout(&problem, &base, &mut rng).unwrap();
            let Placement::Wall { s } = near.placements[0] else {
                panic!("wall placement expected")
            };
            deltas.push(s - 20.0);
        }
        let mean = deltas.iter().sum::<f64>() / deltas.len() as f64;
        let std = (deltas.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>()
            / deltas.len() as f64)
            .sqrt();
        assert!(mean.abs() < 0.15, "mean {mean}");
        assert!((0.85..1.15).contains(&std), "std {std}");
    }

    #[test]
    fn wall_coordinate_wraps_around_the_chain() {
        let problem = parse_problem(assets::INBOARD_ROOM).unwrap();
        let total = problem.room.chain().total_length();
        let obj = &problem.objects[problem.object_index("bed").unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut wrapped = false;
        for _ in 0..500 {
            let p = propose_nearby(&problem, obj, &Placement::Wall { s: 0.5 }, &mut rng);
            let Placement::Wall { s } = p else { unreachable!() };
            assert!((0.0..total).contains(&s));
            if s > total - 6.0 {
                wrapped = true;
            }
        }
        assert!(wrapped, "no proposal wrapped below s = 0");
    }

    #[test]
    fn impossible_object_reports_infeasible() {
        // Toilet deeper than the whole bathroom.
        let text = r##"{
          "name": "tiny bathroom",
          "room": {
            "main_room": [[0.6,0],[4,0],[4,4],[0,4],[0,0.6],[0.6,0.6]],
            "main_room_walls": [
              {"shell":"south","hallway":true},{"shell":"east"},{"shell":"north"},
              {"shell":"west"},{},{}
            ],
            "bathroom": [[0,0],[0.6,0],[0.6,0.6],[0,0.6]],
            "bathroom_walls": [{"shell":"south"},{},{},{"shell":"west"}],
            "typology": "inboard"
          },
          "objects": [
            {"id":"toilet","name":"Toilet","width":0.5,"depth":0.7,
             "domain":"wall","sub_room":"bathroom"}
          ]
        }"##;
        let problem = parse_problem(text).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        match sample_initial(&problem, &mut rng) {
            Err(Error::Infeasible { .. }) => {}
            other => panic!("expected Infeasible, got {other:?}"),
        }
    }
}
