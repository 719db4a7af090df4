//! Bundled example rooms used by the examples, tests, and CLI defaults.

/// Problem file: single-bed room with the bathroom on the hallway side.
pub const INBOARD_ROOM: &str = include_str!("../assets/inboard.room.json");

/// Problem file: same catalog with the bathroom on the exterior side.
pub const OUTBOARD_ROOM: &str = include_str!("../assets/outboard.room.json");

/// A conventional hand-drawn layout for [`INBOARD_ROOM`], used as the
/// comparison baseline.
pub const TRADITIONAL_LAYOUT: &str = include_str!("../assets/traditional.layout.json");

#[cfg(test)]
mod tests {
    use super::*;
    use crate::room::{parse_layout, parse_problem};

    #[test]
    fn bundled_problems_parse() {
        let inboard = parse_problem(INBOARD_ROOM).unwrap();
        assert_eq!(inboard.objects.len(), 11);
        let outboard = parse_problem(OUTBOARD_ROOM).unwrap();
        assert_eq!(outboard.objects.len(), 11);
        assert_eq!(inboard.scenarios.len(), 3);
    }

    #[test]
    fn traditional_layout_parses_against_inboard() {
        let problem = parse_problem(INBOARD_ROOM).unwrap();
        let layout = parse_layout(TRADITIONAL_LAYOUT, &problem).unwrap();
        assert_eq!(layout.placements.len(), problem.objects.len());
    }
}
