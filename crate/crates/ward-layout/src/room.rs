//! Declarative problem definition: room geometry with two sub-rooms, the
//! object catalog with per-object placement domains, and (de)serialization
//! of problems and layouts.

use serde::{Deserialize, Serialize};

use crate::annealer::SaParams;
use crate::cost::CostSpec;
use crate::geometry::{
    self, chain_from_segments, rect_footprint, segments_overlap_collinear, unwrap_walls,
    ClearanceSides, EdgeTags, Polygon, Pose, ShellWall, SubRoom, Vec2, WallChain,
};
use crate::risk::RiskFactors;
use crate::sampler::{PerturbationSpec, SamplerBudget};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Typology {
    Inboard,
    Outboard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoorOperation {
    Swinging,
    Sliding,
}

/// Placement domain of an object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    /// x, y, orientation anywhere in the room.
    FreePose,
    /// Arc-length coordinate on the unwrapped wall chain.
    Wall,
    /// x, y on the ceiling; no orientation, no floor footprint.
    CeilingLight,
    /// Wall coordinate; participates in door-specific constraints.
    Door,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RequiredSubRoom {
    Main,
    Bathroom,
    Either,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportKind {
    Supportive,
    Hazardous,
    Neutral,
}

/// Supporting or hazardous influence of an object on nearby floor cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportProfile {
    pub kind: SupportKind,
    /// Distance over which the effect tapers to zero, meters.
    #[serde(default = "default_reach")]
    pub reach: f64,
    /// Relative effect strength; scaled by the global model strengths.
    #[serde(default = "default_strength")]
    pub strength: f64,
}

fn default_reach() -> f64 {
    0.6
}
fn default_strength() -> f64 {
    1.0
}

impl Default for SupportProfile {
    fn default() -> Self {
        SupportProfile {
            kind: SupportKind::Neutral,
            reach: default_reach(),
            strength: default_strength(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClearanceSpec {
    pub sides: ClearanceSides,
    /// Depth of the keep-free zone, meters.
    pub depth: f64,
}

/// Marks an object as a start/end point of patient ambulation scenarios.
/// The offset is where the patient stands relative to the footprint center,
/// in the object's local frame (meters).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionSpec {
    pub offset: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoorKind {
    /// Connects the main room to the hallway.
    Main,
    /// Connects the bathroom to the main room.
    Bathroom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub id: String,
    pub name: String,
    /// Footprint extent along the local x axis (along the wall for
    /// wall-mounted objects), meters.
    pub width: f64,
    /// Footprint extent along the local y axis (into the room for
    /// wall-mounted objects), meters.
    pub depth: f64,
    pub domain: DomainKind,
    pub sub_room: RequiredSubRoom,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clearance: Option<ClearanceSpec>,
    #[serde(default, skip_serializing_if = "is_neutral")]
    pub support: SupportProfile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interaction: Option<InteractionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub door_kind: Option<DoorKind>,
}

fn is_neutral(p: &SupportProfile) -> bool {
    p.kind == SupportKind::Neutral
}

impl ObjectSpec {
    pub fn is_floor_object(&self) -> bool {
        matches!(self.domain, DomainKind::FreePose | DomainKind::Wall | DomainKind::Door)
    }
    pub fn is_door(&self) -> bool {
        self.domain == DomainKind::Door
    }
    pub fn is_light(&self) -> bool {
        self.domain == DomainKind::CeilingLight
    }
}

/// One ambulation task between two interaction targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub from: String,
    pub to: String,
}

/// One object's configuration vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Pose(Pose),
    Wall { s: f64 },
    Point([f64; 2]),
}

/// The full room layout: one placement per object, in problem object order.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub placements: Vec<Placement>,
}

/// Classification of a footprint against the two sub-rooms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoomClass {
    Main,
    Bathroom,
    Straddling,
    Outside,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RoomSpecFile {
    main_room: Polygon,
    main_room_walls: Vec<EdgeTags>,
    bathroom: Polygon,
    bathroom_walls: Vec<EdgeTags>,
    typology: Typology,
    #[serde(default = "default_flooring")]
    flooring_factor: f64,
    #[serde(default = "default_door_operation")]
    door_operation: DoorOperation,
    #[serde(default = "default_resolution")]
    grid_resolution: f64,
}

fn default_flooring() -> f64 {
    1.0
}
fn default_door_operation() -> DoorOperation {
    DoorOperation::Swinging
}
fn default_resolution() -> f64 {
    0.25
}

/// Validated room geometry with the derived wall chain.
#[derive(Debug, Clone)]
pub struct RoomSpec {
    pub main_room: Polygon,
    pub main_room_walls: Vec<EdgeTags>,
    pub bathroom: Polygon,
    pub bathroom_walls: Vec<EdgeTags>,
    pub typology: Typology,
    pub flooring_factor: f64,
    pub door_operation: DoorOperation,
    pub grid_resolution: f64,
    chain: WallChain,
    bathroom_shells: Vec<ShellWall>,
}

impl RoomSpec {
    fn compile(file: RoomSpecFile) -> Result<RoomSpec> {
        let n_main = file.main_room.vertices().len();
        let n_bath = file.bathroom.vertices().len();
        if file.main_room_walls.len() != n_main {
            return Err(Error::Validation(format!(
                "main_room_walls: expected {n_main} entries, got {}",
                file.main_room_walls.len()
            )));
        }
        if file.bathroom_walls.len() != n_bath {
            return Err(Error::Validation(format!(
                "bathroom_walls: expected {n_bath} entries, got {}",
                file.bathroom_walls.len()
            )));
        }
        if file.main_room.intersects_convex(&file.bathroom) {
            return Err(Error::Validation(
                "bathroom interior overlaps the main room".into(),
            ));
        }
        if file.grid_resolution <= 0.0 {
            return Err(Error::Validation("grid_resolution must be > 0".into()));
        }

        // Shared walls are edge pairs common to both polygons.
        let main_edges: Vec<_> = file.main_room.edges().collect();
        let bath_edges: Vec<_> = file.bathroom.edges().collect();
        let main_shared: Vec<bool> = main_edges
            .iter()
            .map(|&(a, b)| {
                bath_edges
                    .iter()
                    .any(|&(c, d)| segments_overlap_collinear(a, b, c, d))
            })
            .collect();
        let bath_shared: Vec<bool> = bath_edges
            .iter()
            .map(|&(c, d)| {
                main_edges
                    .iter()
                    .any(|&(a, b)| segments_overlap_collinear(a, b, c, d))
            })
            .collect();
        if !main_shared.iter().any(|&s| s) {
            return Err(Error::Validation(
                "main room and bathroom share no wall".into(),
            ));
        }

        let mut bathroom_shells = Vec::new();
        for (i, tags) in file.bathroom_walls.iter().enumerate() {
            if !bath_shared[i] {
                if let Some(shell) = tags.shell {
                    if !bathroom_shells.contains(&shell) {
                        bathroom_shells.push(shell);
                    }
                }
            }
        }

        let main_segs = unwrap_walls(
            &file.main_room,
            &file.main_room_walls,
            SubRoom::Main,
            &main_shared,
        )?;
        let bath_segs = unwrap_walls(
            &file.bathroom,
            &file.bathroom_walls,
            SubRoom::Bathroom,
            &bath_shared,
        )?;
        let chain = chain_from_segments(vec![main_segs, bath_segs]);

        Ok(RoomSpec {
            main_room: file.main_room,
            main_room_walls: file.main_room_walls,
            bathroom: file.bathroom,
            bathroom_walls: file.bathroom_walls,
            typology: file.typology,
            flooring_factor: file.flooring_factor,
            door_operation: file.door_operation,
            grid_resolution: file.grid_resolution,
            chain,
            bathroom_shells,
        })
    }

    fn to_file(&self) -> RoomSpecFile {
        RoomSpecFile {
            main_room: self.main_room.clone(),
            main_room_walls: self.main_room_walls.clone(),
            bathroom: self.bathroom.clone(),
            bathroom_walls: self.bathroom_walls.clone(),
            typology: self.typology,
            flooring_factor: self.flooring_factor,
            door_operation: self.door_operation,
            grid_resolution: self.grid_resolution,
        }
    }

    pub fn chain(&self) -> &WallChain {
        &self.chain
    }

    /// Shell walls the bathroom sits against; determines legal hallway-door
    /// walls per typology.
    pub fn bathroom_shells(&self) -> &[ShellWall] {
        &self.bathroom_shells
    }

    /// Whether the hallway door may sit on the given main-room wall segment
    /// under this room's typology.
    pub fn main_door_permitted(&self, seg: &geometry::WallSegment) -> bool {
        if seg.sub_room != SubRoom::Main {
            return false;
        }
        match seg.tags.shell {
            None => false,
            Some(shell) => match self.typology {
                Typology::Inboard => self.bathroom_shells.contains(&shell),
                Typology::Outboard => !self.bathroom_shells.contains(&shell),
            },
        }
    }

    pub fn sub_room_polygon(&self, sub_room: SubRoom) -> &Polygon {
        match sub_room {
            SubRoom::Main => &self.main_room,
            SubRoom::Bathroom => &self.bathroom,
        }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        self.main_room.contains(p) || self.bathroom.contains(p)
    }

    /// Bounding box over both sub-rooms.
    pub fn bounds(&self) -> (Vec2, Vec2) {
        let (min_m, max_m) = self.main_room.bounds();
        let (min_b, max_b) = self.bathroom.bounds();
        (
            geometry::v(min_m.x.min(min_b.x), min_m.y.min(min_b.y)),
            geometry::v(max_m.x.max(max_b.x), max_m.y.max(max_b.y)),
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ProblemFile {
    name: String,
    room: RoomSpecFile,
    objects: Vec<ObjectSpec>,
    #[serde(default)]
    scenarios: Vec<Scenario>,
    #[serde(default)]
    risk_factors: RiskFactors,
    #[serde(default)]
    cost: CostSpec,
    #[serde(default)]
    sa: SaParams,
    #[serde(default)]
    perturbation: PerturbationSpec,
    #[serde(default)]
    budget: SamplerBudget,
}

/// A fully validated layout-optimization problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    pub room: RoomSpec,
    pub objects: Vec<ObjectSpec>,
    pub scenarios: Vec<Scenario>,
    pub risk_factors: RiskFactors,
    pub cost: CostSpec,
    pub sa: SaParams,
    pub perturbation: PerturbationSpec,
    pub budget: SamplerBudget,
}

/// Parses and validates a problem file (JSON).
pub fn parse_problem(text: &str) -> Result<Problem> {
    let file: ProblemFile =
        serde_json::from_str(text).map_err(|e| Error::parse("problem", e))?;
    let room = RoomSpec::compile(file.room)?;

    let mut seen = std::collections::HashSet::new();
    for obj in &file.objects {
        if !seen.insert(obj.id.clone()) {
            return Err(Error::Validation(format!("duplicate object id `{}`", obj.id)));
        }
        if obj.width <= 0.0 || obj.depth <= 0.0 {
            return Err(Error::Validation(format!(
                "object `{}`: width and depth must be > 0",
                obj.id
            )));
        }
        if let Some(cl) = &obj.clearance {
            if cl.depth < 0.0 {
                return Err(Error::Validation(format!(
                    "object `{}`: clearance depth must be >= 0",
                    obj.id
                )));
            }
        }
        if obj.support.reach < 0.0 || obj.support.strength < 0.0 {
            return Err(Error::Validation(format!(
                "object `{}`: support reach and strength must be >= 0",
                obj.id
            )));
        }
        if obj.is_door() && obj.door_kind.is_none() {
            return Err(Error::Validation(format!(
                "object `{}`: doors must declare door_kind",
                obj.id
            )));
        }
    }
    for sc in &file.scenarios {
        for id in [&sc.from, &sc.to] {
            let obj = file
                .objects
                .iter()
                .find(|o| &o.id == id)
                .ok_or_else(|| Error::Validation(format!("scenario references unknown object `{id}`")))?;
            if obj.interaction.is_none() {
                return Err(Error::Validation(format!(
                    "scenario endpoint `{id}` is not an interaction target"
                )));
            }
        }
    }
    file.sa.validate()?;
    file.cost.validate()?;
    file.budget.validate()?;

    Ok(Problem {
        name: file.name,
        room,
        objects: file.objects,
        scenarios: file.scenarios,
        risk_factors: file.risk_factors,
        cost: file.cost,
        sa: file.sa,
        perturbation: file.perturbation,
        budget: file.budget,
    })
}

/// Serializes a problem back to its file form.
pub fn serialize_problem(problem: &Problem) -> String {
    let file = ProblemFile {
        name: problem.name.clone(),
        room: problem.room.to_file(),
        objects: problem.objects.clone(),
        scenarios: problem.scenarios.clone(),
        risk_factors: problem.risk_factors.clone(),
        cost: problem.cost.clone(),
        sa: problem.sa.clone(),
        perturbation: problem.perturbation.clone(),
        budget: problem.budget.clone(),
    };
    serde_json::to_string_pretty(&file).expect("problem serialization cannot fail")
}

impl Problem {
    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.id == id)
    }

    /// The equivalent free pose of any placement kind. Errors if the
    /// placement does not match the object's domain.
    pub fn placement_pose(&self, obj: &ObjectSpec, placement: &Placement) -> Result<Pose> {
        match (obj.domain, placement) {
            (DomainKind::FreePose, Placement::Pose(p)) => Ok(*p),
            (DomainKind::Wall | DomainKind::Door, Placement::Wall { s }) => {
                geometry::wall_pose(self.room.chain(), *s, obj.depth)
            }
            (DomainKind::CeilingLight, Placement::Point([x, y])) => Ok(Pose::new(*x, *y, 0.0)),
            _ => Err(Error::Validation(format!(
                "placement kind does not match domain of `{}`",
                obj.id
            ))),
        }
    }

    /// Floor footprint polygon; `None` for ceiling lights.
    pub fn footprint(&self, obj: &ObjectSpec, placement: &Placement) -> Result<Option<Polygon>> {
        if obj.is_light() {
            return Ok(None);
        }
        let pose = self.placement_pose(obj, placement)?;
        Ok(Some(rect_footprint(&pose, obj.width, obj.depth)))
    }

    pub fn clearance_regions(
        &self,
        obj: &ObjectSpec,
        placement: &Placement,
    ) -> Result<Vec<Polygon>> {
        let Some(cl) = &obj.clearance else {
            return Ok(Vec::new());
        };
        let pose = self.placement_pose(obj, placement)?;
        Ok(geometry::clearance_rects(
            &pose, obj.width, obj.depth, cl.sides, cl.depth,
        ))
    }

    /// Swing-arc region of a door; `None` for non-doors or sliding doors.
    pub fn door_swing(&self, obj: &ObjectSpec, placement: &Placement) -> Result<Option<Polygon>> {
        if !obj.is_door() || self.room.door_operation != DoorOperation::Swinging {
            return Ok(None);
        }
        let Placement::Wall { s } = placement else {
            return Err(Error::Validation(format!(
                "door `{}` requires a wall placement",
                obj.id
            )));
        };
        Ok(Some(geometry::door_swing_fan(
            self.room.chain(),
            *s,
            obj.width,
        )?))
    }

    /// Keep-free passage rectangles of a door (door width x 0.9 m). Bathroom
    /// doors need passage on both sides of the wall.
    pub fn door_clear_regions(
        &self,
        obj: &ObjectSpec,
        placement: &Placement,
    ) -> Result<Vec<Polygon>> {
        if !obj.is_door() {
            return Ok(Vec::new());
        }
        let pose = self.placement_pose(obj, placement)?;
        let both = obj.door_kind == Some(DoorKind::Bathroom);
        let sides = if both {
            ClearanceSides::BothLongSides
        } else {
            ClearanceSides::Front
        };
        // BothLongSides picks the long faces; a door leaf is much wider than
        // deep, so those are the two faces across the wall, as intended.
        Ok(geometry::clearance_rects(
            &pose, obj.width, obj.depth, sides, 0.9,
        ))
    }

    /// Where the patient stands or sits when interacting with the object.
    pub fn interaction_point(&self, obj: &ObjectSpec, placement: &Placement) -> Result<Vec2> {
        let spec = obj.interaction.as_ref().ok_or_else(|| {
            Error::Validation(format!("object `{}` is not an interaction target", obj.id))
        })?;
        let pose = self.placement_pose(obj, placement)?;
        let off = geometry::v(spec.offset[0], spec.offset[1]).rotated(pose.theta);
        Ok(pose.position().add(off))
    }
}

/// Classifies a footprint by containment in the sub-rooms.
pub fn sub_room_of(footprint: &Polygon, room: &RoomSpec) -> RoomClass {
    if room.main_room.contains_poly(footprint) {
        RoomClass::Main
    } else if room.bathroom.contains_poly(footprint) {
        RoomClass::Bathroom
    } else if room.main_room.intersects_convex(footprint)
        || room.bathroom.intersects_convex(footprint)
    {
        RoomClass::Straddling
    } else {
        RoomClass::Outside
    }
}

/// Writes a layout as a JSON object mapping object id to placement. Key
/// order is alphabetical, so output bytes are stable.
pub fn serialize_layout(layout: &Layout, problem: &Problem) -> Result<String> {
    if layout.placements.len() != problem.objects.len() {
        return Err(Error::Validation(format!(
            "layout has {} placements for {} objects",
            layout.placements.len(),
            problem.objects.len()
        )));
    }
    let mut map = serde_json::Map::new();
    let mut entries: Vec<_> = problem
        .objects
        .iter()
        .zip(&layout.placements)
        .map(|(o, p)| (o.id.clone(), serde_json::to_value(p).unwrap()))
        .collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    for (id, val) in entries {
        map.insert(id, val);
    }
    Ok(serde_json::to_string_pretty(&serde_json::Value::Object(map))? + "\n")
}

/// Parses a layout file against a problem, restoring problem object order.
pub fn parse_layout(text: &str, problem: &Problem) -> Result<Layout> {
    let map: std::collections::BTreeMap<String, Placement> =
        serde_json::from_str(text).map_err(|e| Error::parse("layout", e))?;
    if map.len() != problem.objects.len() {
        return Err(Error::Validation(format!(
            "layout has {} placements for {} objects",
            map.len(),
            problem.objects.len()
        )));
    }
    let mut placements = Vec::with_capacity(problem.objects.len());
    for obj in &problem.objects {
        let p = map.get(&obj.id).ok_or_else(|| {
            Error::Validation(format!("layout is missing object `{}`", obj.id))
        })?;
        // Surface kind mismatches at parse time.
        problem.placement_pose(obj, p)?;
        placements.push(*p);
    }
    Ok(Layout { placements })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;

    #[test]
    fn inboard_example_has_eleven_objects() {
        let p = parse_problem(assets::INBOARD_ROOM).unwrap();
        assert_eq!(p.objects.len(), 11);
        for id in [
            "sofa",
            "bed",
            "patient_chair",
            "visitor_chair",
            "medical_stand",
            "toilet",
            "sink",
            "main_light",
            "bathroom_light",
            "main_door",
            "bathroom_door",
        ] {
            assert!(p.object_index(id).is_some(), "missing {id}");
        }
    }

    #[test]
    fn empty_object_list_is_valid() {
        let p = parse_problem(assets::INBOARD_ROOM).unwrap();
        let mut stripped = p;
        stripped.objects.clear();
        stripped.scenarios.clear();
        let text = serialize_problem(&stripped);
        let p2 = parse_problem(&text).unwrap();
        assert!(p2.objects.is_empty());
    }

    #[test]
    fn unknown_scenario_object_is_an_error() {
        let p = parse_problem(assets::INBOARD_ROOM).unwrap();
        let mut bad = p;
        bad.scenarios.push(Scenario {
            from: "bed".into(),
            to: "jacuzzi".into(),
        });
        let text = serialize_problem(&bad);
        let err = parse_problem(&text).unwrap_err();
        assert!(err.to_string().contains("jacuzzi"));
    }

    #[test]
    fn problem_round_trips() {
        for text in [assets::INBOARD_ROOM, assets::OUTBOARD_ROOM] {
            let p = parse_problem(text).unwrap();
            let p2 = parse_problem(&serialize_problem(&p)).unwrap();
            assert_eq!(p.objects, p2.objects);
            assert_eq!(p.room.typology, p2.room.typology);
            assert_eq!(
                p.room.chain().total_length(),
                p2.room.chain().total_length()
            );
        }
    }

    #[test]
    fn traditional_layout_parses() {
        let p = parse_problem(assets::INBOARD_ROOM).unwrap();
        let layout = parse_layout(assets::TRADITIONAL_LAYOUT, &p).unwrap();
        assert_eq!(layout.placements.len(), p.objects.len());
    }

    #[test]
    fn layout_round_trip_identity() {
        let p = parse_problem(assets::INBOARD_ROOM).unwrap();
        let layout = parse_layout(assets::TRADITIONAL_LAYOUT, &p).unwrap();
        let text = serialize_layout(&layout, &p).unwrap();
        let layout2 = parse_layout(&text, &p).unwrap();
        assert_eq!(layout, layout2);
    }

    #[test]
    fn layout_count_mismatch_rejected() {
        let p = parse_problem(assets::INBOARD_ROOM).unwrap();
        let mut map: std::collections::BTreeMap<String, Placement> =
            serde_json::from_str(assets::TRADITIONAL_LAYOUT).unwrap();
        map.remove("sofa");
        let text = serde_json::to_string(&map).unwrap();
        assert!(parse_layout(&text, &p).is_err());
    }

    #[test]
    fn sub_room_classification() {
        let p = parse_problem(assets::INBOARD_ROOM).unwrap();
        let mid_main = Polygon::rect(geometry::v(3.0, 4.0), geometry::v(3.5, 4.5));
        assert_eq!(sub_room_of(&mid_main, &p.room), RoomClass::Main);
        let in_bath = Polygon::rect(geometry::v(0.5, 0.5), geometry::v(1.0, 1.0));
        assert_eq!(sub_room_of(&in_bath, &p.room), RoomClass::Bathroom);
        let straddle = Polygon::rect(geometry::v(1.5, 1.0), geometry::v(2.5, 1.5));
        assert_eq!(sub_room_of(&straddle, &p.room), RoomClass::Straddling);
        let outside = Polygon::rect(geometry::v(10.0, 10.0), geometry::v(11.0, 11.0));
        assert_eq!(sub_room_of(&outside, &p.room), RoomClass::Outside);
    }

    #[test]
    fn inboard_door_walls() {
        let p = parse_problem(assets::INBOARD_ROOM).unwrap();
        let permitted: Vec<_> = p
            .room
            .chain()
            .segments()
            .iter()
            .filter(|s| p.room.main_door_permitted(s))
            .collect();
        assert!(!permitted.is_empty());
        for seg in permitted {
            let shell = seg.tags.shell.unwrap();
            assert!(p.room.bathroom_shells().contains(&shell));
        }
    }
}
