//! Hard placement constraints. All checks accept partial layouts (a
//! `None` placement makes every constraint on that object vacuously true),
//! which is what lets the backtracking sampler validate prefixes.

use std::fmt;

use crate::geometry::{polys_overlap, SubRoom};
use crate::room::{
    sub_room_of, DoorKind, Layout, Placement, Problem, RequiredSubRoom, RoomClass,
};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    /// Footprint entirely inside one sub-room of the room outline.
    InBounds,
    /// Floor-object footprints are pairwise disjoint (lights exempt).
    NoOverlap,
    /// Nothing with a footprint intrudes into another object's keep-free
    /// zone.
    Clearance,
    /// The footprint lies in the object's required sub-room.
    SubRoomMembership,
    /// Wall-mounted objects sit flush on a single wall segment of the
    /// required sub-room.
    WallAdjacency,
    /// Each light point lies inside its own sub-room.
    OneLightPerSubRoom,
    /// The bathroom door sits on a wall shared between the two sub-rooms.
    BathroomDoorOnSharedWall,
    /// The hallway door sits on a wall side allowed by the room typology.
    HallwayDoorTypology,
    /// A walk-through rectangle in front of each door stays free.
    DoorNotBlocked,
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConstraintKind::InBounds => "in_bounds",
            ConstraintKind::NoOverlap => "no_overlap",
            ConstraintKind::Clearance => "clearance",
            ConstraintKind::SubRoomMembership => "sub_room_membership",
            ConstraintKind::WallAdjacency => "wall_adjacency",
            ConstraintKind::OneLightPerSubRoom => "one_light_per_sub_room",
            ConstraintKind::BathroomDoorOnSharedWall => "bathroom_door_on_shared_wall",
            ConstraintKind::HallwayDoorTypology => "hallway_door_typology",
            ConstraintKind::DoorNotBlocked => "door_not_blocked",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub kind: ConstraintKind,
    /// Ids of the objects involved.
    pub objects: Vec<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.kind, self.objects.join(", "), self.detail)
    }
}

fn membership_ok(required: RequiredSubRoom, class: RoomClass) -> bool {
    match required {
        RequiredSubRoom::Main => class == RoomClass::Main,
        RequiredSubRoom::Bathroom => class == RoomClass::Bathroom,
        RequiredSubRoom::Either => matches!(class, RoomClass::Main | RoomClass::Bathroom),
    }
}

fn sub_room_matches(required: RequiredSubRoom, sub_room: SubRoom) -> bool {
    match required {
        RequiredSubRoom::Main => sub_room == SubRoom::Main,
        RequiredSubRoom::Bathroom => sub_room == SubRoom::Bathroom,
        RequiredSubRoom::Either => true,
    }
}

const SPAN_EPS: f64 = 1e-9;

/// All violations of a (possibly partial) assignment. Placements of the
/// wrong kind for an object's domain surface as errors, not violations.
pub fn check(problem: &Problem, partial: &[Option<Placement>]) -> Result<Vec<Violation>> {
    let mut violations = Vec::new();
    let room = &problem.room;
    let chain = room.chain();

    // Footprints of everything placed, for the pairwise checks.
    let mut footprints: Vec<Option<crate::geometry::Polygon>> =
        vec![None; problem.objects.len()];
    for (i, (obj, placement)) in problem.objects.iter().zip(partial).enumerate() {
        if let Some(p) = placement {
            footprints[i] = problem.footprint(obj, p)?;
        }
    }

    for (i, (obj, placement)) in problem.objects.iter().zip(partial).enumerate() {
        let Some(placement) = placement else { continue };

        if obj.is_light() {
            let pose = problem.placement_pose(obj, placement)?;
            if !membership_ok(
                obj.sub_room,
                point_class(pose.position(), room),
            ) {
                violations.push(Violation {
                    kind: ConstraintKind::OneLightPerSubRoom,
                    objects: vec![obj.id.clone()],
                    detail: format!(
                        "light at ({:.2}, {:.2}) is outside its sub-room",
                        pose.x, pose.y
                    ),
                });
            }
            continue;
        }

        let fp = footprints[i].as_ref().expect("floor object has a footprint");
        let class = sub_room_of(fp, room);
        if matches!(class, RoomClass::Outside | RoomClass::Straddling) {
            violations.push(Violation {
                kind: ConstraintKind::InBounds,
                objects: vec![obj.id.clone()],
                detail: format!("footprint is {class:?} the room outline"),
            });
        } else if !membership_ok(obj.sub_room, class) {
            violations.push(Violation {
                kind: ConstraintKind::SubRoomMembership,
                objects: vec![obj.id.clone()],
                detail: format!("footprint lies in {class:?}, required {:?}", obj.sub_room),
            });
        }

        // Wall-mounted objects and doors: flush on one segment.
        if let Placement::Wall { s } = placement {
            let seg = chain.segment_at(*s)?;
            let half = obj.width / 2.0;
            let within = *s - half >= seg.start_s - SPAN_EPS
                && *s + half <= seg.start_s + seg.length + SPAN_EPS;
            if !within {
                violations.push(Violation {
                    kind: ConstraintKind::WallAdjacency,
                    objects: vec![obj.id.clone()],
                    detail: format!("span at s={s:.3} crosses a wall corner"),
                });
            }
            match obj.door_kind {
                None => {
                    if !sub_room_matches(obj.sub_room, seg.sub_room) {
                        violations.push(Violation {
                            kind: ConstraintKind::WallAdjacency,
                            objects: vec![obj.id.clone()],
                            detail: format!(
                                "mounted on a {:?} wall, required {:?}",
                                seg.sub_room, obj.sub_room
                            ),
                        });
                    }
                }
                Some(DoorKind::Bathroom) => {
                    if seg.sub_room != SubRoom::Main || !seg.shared_with_bathroom {
                        violations.push(Violation {
                            kind: ConstraintKind::BathroomDoorOnSharedWall,
                            objects: vec![obj.id.clone()],
                            detail: "bathroom door is not on the shared wall".into(),
                        });
                    }
                }
                Some(DoorKind::Main) => {
                    if !room.main_door_permitted(seg) {
                        violations.push(Violation {
                            kind: ConstraintKind::HallwayDoorTypology,
                            objects: vec![obj.id.clone()],
                            detail: format!(
                                "hallway door on a wall not permitted for {:?} rooms",
                                room.typology
                            ),
                        });
                    }
                }
            }
        }
    }

    // Pairwise footprint overlap.
    for i in 0..problem.objects.len() {
        let Some(fp_i) = &footprints[i] else { continue };
        for j in (i + 1)..problem.objects.len() {
            let Some(fp_j) = &footprints[j] else { continue };
            if polys_overlap(fp_i, fp_j) {
                violations.push(Violation {
                    kind: ConstraintKind::NoOverlap,
                    objects: vec![
                        problem.objects[i].id.clone(),
                        problem.objects[j].id.clone(),
                    ],
                    detail: "footprints overlap".into(),
                });
            }
        }
    }

    // Keep-free zones: ordinary clearances, then door approach rectangles.
    for (i, (obj, placement)) in problem.objects.iter().zip(partial).enumerate() {
        let Some(placement) = placement else { continue };
        let mut zones = problem.clearance_regions(obj, placement)?;
        let door_zones_from = zones.len();
        zones.extend(problem.door_clear_regions(obj, placement)?);
        for (zi, zone) in zones.iter().enumerate() {
            for (j, fp) in footprints.iter().enumerate() {
                if i == j {
                    continue;
                }
                let Some(fp) = fp else { continue };
                if polys_overlap(zone, fp) {
                    let kind = if zi >= door_zones_from {
                        ConstraintKind::DoorNotBlocked
                    } else {
                        ConstraintKind::Clearance
                    };
                    violations.push(Violation {
                        kind,
                        objects: vec![obj.id.clone(), problem.objects[j].id.clone()],
                        detail: "keep-free zone is obstructed".into(),
                    });
                }
            }
        }
    }

    Ok(violations)
}

fn point_class(p: crate::geometry::Vec2, room: &crate::room::RoomSpec) -> RoomClass {
    if room.main_room.contains(p) {
        RoomClass::Main
    } else if room.bathroom.contains(p) {
        RoomClass::Bathroom
    } else {
        RoomClass::Outside
    }
}

/// Whether a (possibly partial) assignment satisfies every constraint.
pub fn is_feasible(problem: &Problem, partial: &[Option<Placement>]) -> Result<bool> {
    Ok(check(problem, partial)?.is_empty())
}

/// Violations of a complete layout.
pub fn check_layout(problem: &Problem, layout: &Layout) -> Result<Vec<Violation>> {
    let partial: Vec<Option<Placement>> = layout.placements.iter().copied().map(Some).collect();
    check(problem, &partial)
}

/// Convenience used by the sampler: feasibility of a complete layout.
pub fn layout_feasible(problem: &Problem, layout: &Layout) -> Result<bool> {
    Ok(check_layout(problem, layout)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;
    use crate::geometry::Pose;
    use crate::room::{parse_layout, parse_problem};

    fn inboard() -> (Problem, Layout) {
        let problem = parse_problem(assets::INBOARD_ROOM).unwrap();
        let layout = parse_layout(assets::TRADITIONAL_LAYOUT, &problem).unwrap();
        (problem, layout)
    }

    #[test]
    fn empty_assignment_is_vacuously_feasible() {
        let (problem, _) = inboard();
        let partial = vec![None; problem.objects.len()];
        assert!(is_feasible(&problem, &partial).unwrap());
    }

    #[test]
    fn traditional_layout_is_feasible() {
        let (problem, layout) = inboard();
        let violations = check_layout(&problem, &layout).unwrap();
        assert!(violations.is_empty(), "{violations:?}");
    }

    fn with_placement(layout: &Layout, problem: &Problem, id: &str, p: Placement) -> Layout {
        let mut l = layout.clone();
        l.placements[problem.object_index(id).unwrap()] = p;
        l
    }

    fn kinds(problem: &Problem, layout: &Layout) -> Vec<ConstraintKind> {
        check_layout(problem, layout)
            .unwrap()
            .iter()
            .map(|v| v.kind)
            .collect()
    }

    #[test]
    fn out_of_bounds_chair() {
        let (problem, layout) = inboard();
        let l = with_placement(
            &layout,
            &problem,
            "patient_chair",
            Placement::Pose(Pose::new(10.0, 10.0, 0.0)),
        );
        assert!(kinds(&problem, &l).contains(&ConstraintKind::InBounds));
    }

    #[test]
    fn straddling_footprint_is_out_of_bounds() {
        let (problem, layout) = inboard();
        // Centered on the bathroom partition wall.
        let l = with_placement(
            &layout,
            &problem,
            "patient_chair",
            Placement::Pose(Pose::new(2.0, 1.0, 0.0)),
        );
        assert!(kinds(&problem, &l).contains(&ConstraintKind::InBounds));
    }

    #[test]
    fn chair_in_bathroom_violates_membership() {
        let (problem, layout) = inboard();
        let l = with_placement(
            &layout,
            &problem,
            "patient_chair",
            Placement::Pose(Pose::new(1.0, 0.6, 0.0)),
        );
        assert!(kinds(&problem, &l).contains(&ConstraintKind::SubRoomMembership));
    }

    #[test]
    fn overlapping_chairs() {
        let (problem, layout) = inboard();
        let i = problem.object_index("visitor_chair").unwrap();
        let l = with_placement(
            &layout,
            &problem,
            "patient_chair",
            layout.placements[i],
        );
        assert!(kinds(&problem, &l).contains(&ConstraintKind::NoOverlap));
    }

    #[test]
    fn stand_in_front_of_sofa_violates_clearance() {
        let (problem, layout) = inboard();
        // Sofa front zone is y in [4.85, 5.2], x in [1.9, 3.7].
        let l = with_placement(
            &layout,
            &problem,
            "medical_stand",
            Placement::Pose(Pose::new(2.8, 5.0, 0.0)),
        );
        assert!(kinds(&problem, &l).contains(&ConstraintKind::Clearance));
    }

    #[test]
    fn chair_blocking_bathroom_door() {
        let (problem, layout) = inboard();
        let l = with_placement(
            &layout,
            &problem,
            "patient_chair",
            Placement::Pose(Pose::new(2.6, 1.25, 0.0)),
        );
        assert!(kinds(&problem, &l).contains(&ConstraintKind::DoorNotBlocked));
    }

    #[test]
    fn toilet_on_main_room_wall() {
        let (problem, layout) = inboard();
        // s = 5.0 is on the main room's east wall.
        let l = with_placement(&layout, &problem, "toilet", Placement::Wall { s: 5.0 });
        let ks = kinds(&problem, &l);
        assert!(
            ks.contains(&ConstraintKind::WallAdjacency)
                || ks.contains(&ConstraintKind::SubRoomMembership),
            "{ks:?}"
        );
    }

    #[test]
    fn wall_span_crossing_a_corner() {
        let (problem, layout) = inboard();
        // Main chain corner at s = 2.5 (south-east corner of the hallway
        // wall); a 1.8 m sofa centered there spans two segments.
        let l = with_placement(&layout, &problem, "sofa", Placement::Wall { s: 2.5 });
        assert!(kinds(&problem, &l).contains(&ConstraintKind::WallAdjacency));
    }

    #[test]
    fn bathroom_door_off_shared_wall() {
        let (problem, layout) = inboard();
        // s = 10.2 is the north shell wall.
        let l = with_placement(&layout, &problem, "bathroom_door", Placement::Wall { s: 12.0 });
        assert!(kinds(&problem, &l).contains(&ConstraintKind::BathroomDoorOnSharedWall));
    }

    #[test]
    fn hallway_door_typology_inboard_vs_outboard() {
        let (problem, layout) = inboard();
        // East wall (s in [2.5, 8.5]) is not a bathroom-adjacent shell in
        // the inboard room, so the hallway door may not sit there.
        let l = with_placement(&layout, &problem, "main_door", Placement::Wall { s: 7.0 });
        assert!(kinds(&problem, &l).contains(&ConstraintKind::HallwayDoorTypology));

        // West wall (s in [13.0, 16.5]) is a bathroom-side shell: allowed.
        let l2 = with_placement(&layout, &problem, "main_door", Placement::Wall { s: 15.0 });
        let ks = kinds(&problem, &l2);
        assert!(!ks.contains(&ConstraintKind::HallwayDoorTypology), "{ks:?}");
    }

    #[test]
    fn lights_must_be_in_their_sub_room() {
        let (problem, layout) = inboard();
        let l = with_placement(
            &layout,
            &problem,
            "main_light",
            Placement::Point([1.0, 1.0]),
        );
        assert!(kinds(&problem, &l).contains(&ConstraintKind::OneLightPerSubRoom));
    }

    #[test]
    fn partial_prefix_of_feasible_layout_is_feasible() {
        let (problem, layout) = inboard();
        for n in 0..=problem.objects.len() {
            let partial: Vec<Option<Placement>> = layout
                .placements
                .iter()
                .enumerate()
                .map(|(i, p)| (i < n).then_some(*p))
                .collect();
            assert!(is_feasible(&problem, &partial).unwrap(), "prefix {n}");
        }
    }
}
