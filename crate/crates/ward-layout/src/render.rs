//! Deterministic vector/raster output: an SVG schematic of a layout and
//! risk-grid heatmaps (SVG with colorbar, and binary PPM).

use std::fmt::Write as _;

use crate::geometry::Polygon;
use crate::risk::RiskGrid;
use crate::room::{Layout, Problem};
use crate::Result;

const SCALE: f64 = 80.0; // pixels per meter
const MARGIN: f64 = 20.0;

fn fmt(x: f64) -> String {
    format!("{x:.2}")
}

/// Schematic SVG of a layout: room outline, footprints, keep-free zones,
/// door swings, lights, and interaction points. Output is byte-identical
/// for identical inputs.
pub fn render_schematic(problem: &Problem, layout: &Layout) -> Result<String> {
    let (lo, hi) = problem.room.bounds();
    let w = (hi.x - lo.x) * SCALE + 2.0 * MARGIN;
    let h = (hi.y - lo.y) * SCALE + 2.0 * MARGIN;
    // Flip y so the plan reads with +y up.
    let tx = |x: f64| MARGIN + (x - lo.x) * SCALE;
    let ty = |y: f64| h - MARGIN - (y - lo.y) * SCALE;
    let poly_points = |p: &Polygon| -> String {
        p.vertices()
            .iter()
            .map(|v| format!("{},{}", fmt(tx(v.x)), fmt(ty(v.y))))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut svg = String::new();
    writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"##,
        fmt(w),
        fmt(h),
        fmt(w),
        fmt(h)
    )
    .unwrap();
    writeln!(svg, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##).unwrap();

    for (poly, name) in [
        (&problem.room.main_room, "main-room"),
        (&problem.room.bathroom, "bathroom"),
    ] {
        writeln!(
            svg,
            r##"<polygon class="{name}" points="{}" fill="#f4f4f4" stroke="#333333" stroke-width="3"/>"##,
            poly_points(poly)
        )
        .unwrap();
    }

    // Keep-free zones below footprints so they read as background.
    for (obj, placement) in problem.objects.iter().zip(&layout.placements) {
        let mut zones = problem.clearance_regions(obj, placement)?;
        zones.extend(problem.door_clear_regions(obj, placement)?);
        for zone in &zones {
            writeln!(
                svg,
                r##"<polygon class="clearance" points="{}" fill="#dce9f7" fill-opacity="0.6" stroke="#7aa6d6" stroke-width="1" stroke-dasharray="4 3"/>"##,
                poly_points(zone)
            )
            .unwrap();
        }
        if let Some(fan) = problem.door_swing(obj, placement)? {
            writeln!(
                svg,
                r##"<polygon class="door-swing" points="{}" fill="none" stroke="#b08828" stroke-width="1" stroke-dasharray="2 3"/>"##,
                poly_points(&fan)
            )
            .unwrap();
        }
    }

    for (obj, placement) in problem.objects.iter().zip(&layout.placements) {
        if obj.is_light() {
            let pose = problem.placement_pose(obj, placement)?;
            writeln!(
                svg,
                r##"<circle class="light" cx="{}" cy="{}" r="6" fill="#f5d142" stroke="#a08a1f" stroke-width="1"/>"##,
                fmt(tx(pose.x)),
                fmt(ty(pose.y))
            )
            .unwrap();
            continue;
        }
        let Some(fp) = problem.footprint(obj, placement)? else {
            continue;
        };
        let fill = if obj.is_door() { "#c49a6c" } else { "#9bb7d4" };
        writeln!(
            svg,
            r##"<polygon class="object" points="{}" fill="{fill}" stroke="#24476b" stroke-width="1.5"/>"##,
            poly_points(&fp)
        )
        .unwrap();
        let pose = problem.placement_pose(obj, placement)?;
        writeln!(
            svg,
            r##"<text x="{}" y="{}" font-size="10" text-anchor="middle" fill="#1a1a1a">{}</text>"##,
            fmt(tx(pose.x)),
            fmt(ty(pose.y)),
            obj.id
        )
        .unwrap();
        if obj.interaction.is_some() {
            let p = problem.interaction_point(obj, placement)?;
            writeln!(
                svg,
                r##"<circle class="interaction" cx="{}" cy="{}" r="3" fill="#c03a3a"/>"##,
                fmt(tx(p.x)),
                fmt(ty(p.y))
            )
            .unwrap();
        }
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Diverging color for a risk value: blue below 1, white at 1, red above.
/// `span` is the largest absolute deviation from 1 in the grid.
fn diverging_color(value: f64, span: f64) -> (u8, u8, u8) {
    let t = ((value - 1.0) / span).clamp(-1.0, 1.0);
    let lerp = |a: f64, b: f64, t: f64| (a + (b - a) * t).round() as u8;
    if t < 0.0 {
        let t = -t;
        (lerp(255.0, 59.0, t), lerp(255.0, 76.0, t), lerp(255.0, 192.0, t))
    } else {
        (lerp(255.0, 180.0, t), lerp(255.0, 4.0, t), lerp(255.0, 38.0, t))
    }
}

const MASK_GREY: (u8, u8, u8) = (200, 200, 200);

fn grid_span(grid: &RiskGrid) -> f64 {
    grid.unmasked_values()
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max)
        .max(0.2)
}

/// Binary PPM (P6) heatmap, one pixel per cell, row 0 at the top.
pub fn render_heatmap_ppm(grid: &RiskGrid) -> Vec<u8> {
    let span = grid_span(grid);
    let mut out = format!("P6\n{} {}\n255\n", grid.width(), grid.height()).into_bytes();
    for iy in (0..grid.height()).rev() {
        for ix in 0..grid.width() {
            let (r, g, b) = if grid.is_masked(ix, iy) {
                MASK_GREY
            } else {
                diverging_color(grid.get(ix, iy), span)
            };
            out.extend_from_slice(&[r, g, b]);
        }
    }
    out
}

/// SVG heatmap with one rect per cell and a vertical colorbar.
pub fn render_heatmap_svg(grid: &RiskGrid) -> String {
    let span = grid_span(grid);
    let cell = 12.0;
    let bar_w = 18.0;
    let gap = 24.0;
    let w = grid.width() as f64 * cell + gap + bar_w + 60.0;
    let h = grid.height() as f64 * cell;
    let mut svg = String::new();
    writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"##,
        fmt(w),
        fmt(h),
        fmt(w),
        fmt(h)
    )
    .unwrap();
    for iy in 0..grid.height() {
        for ix in 0..grid.width() {
            let (r, g, b) = if grid.is_masked(ix, iy) {
                MASK_GREY
            } else {
                diverging_color(grid.get(ix, iy), span)
            };
            let x = ix as f64 * cell;
            let y = (grid.height() - 1 - iy) as f64 * cell;
            writeln!(
                svg,
                r##"<rect x="{}" y="{}" width="{}" height="{}" fill="rgb({r},{g},{b})"/>"##,
                fmt(x),
                fmt(y),
                fmt(cell),
                fmt(cell)
            )
            .unwrap();
        }
    }
    // Colorbar from 1 - span (bottom) to 1 + span (top).
    let bar_x = grid.width() as f64 * cell + gap;
    let steps = 64;
    let step_h = h / steps as f64;
    for i in 0..steps {
        let value = 1.0 + span * (1.0 - 2.0 * (i as f64 + 0.5) / steps as f64);
        let (r, g, b) = diverging_color(value, span);
        writeln!(
            svg,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="rgb({r},{g},{b})"/>"##,
            fmt(bar_x),
            fmt(i as f64 * step_h),
            fmt(bar_w),
            fmt(step_h + 0.5)
        )
        .unwrap();
    }
    for (frac, value) in [(0.0, 1.0 + span), (0.5, 1.0), (1.0, 1.0 - span)] {
        writeln!(
            svg,
            r##"<text x="{}" y="{}" font-size="10" fill="#1a1a1a">{:.2}</text>"##,
            fmt(bar_x + bar_w + 4.0),
            fmt((frac * (h - 1.0)).max(10.0)),
            value
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;
    use crate::room::{parse_layout, parse_problem};

    #[test]
    fn schematic_is_deterministic_and_complete() {
        let problem = parse_problem(assets::INBOARD_ROOM).unwrap();
        let layout = parse_layout(assets::TRADITIONAL_LAYOUT, &problem).unwrap();
        let a = render_schematic(&problem, &layout).unwrap();
        let b = render_schematic(&problem, &layout).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
        // One polygon per floor object (9 of 11 objects; 2 are lights).
        assert_eq!(a.matches(r##"class="object""##).count(), 9);
        assert_eq!(a.matches(r##"class="light""##).count(), 2);
        // Both sub-room outlines present.
        assert!(a.contains(r##"class="main-room""##));
        assert!(a.contains(r##"class="bathroom""##));
        // Two swinging doors.
        assert_eq!(a.matches(r##"class="door-swing""##).count(), 2);
    }

    #[test]
    fn ppm_header_and_size() {
        let grid = RiskGrid::from_values(&[0.8, 1.0, 1.2, 1.5]);
        let ppm = render_heatmap_ppm(&grid);
        let header = b"P6\n4 1\n255\n";
        assert!(ppm.starts_with(header));
        assert_eq!(ppm.len(), header.len() + 4 * 3);
    }

    #[test]
    fn colormap_endpoints_and_center() {
        assert_eq!(diverging_color(1.0, 0.5), (255, 255, 255));
        assert_eq!(diverging_color(0.5, 0.5), (59, 76, 192));
        assert_eq!(diverging_color(1.5, 0.5), (180, 4, 38));
        // Out-of-range values clamp to the endpoints.
        assert_eq!(diverging_color(9.0, 0.5), (180, 4, 38));
    }

    #[test]
    fn heatmap_svg_marks_masked_cells_grey() {
        use crate::geometry::{v, Polygon};
        // L-shaped outline: its bounding box has masked corner cells.
        let l = Polygon::new(vec![
            v(0.0, 0.0),
            v(4.0, 0.0),
            v(4.0, 2.0),
            v(2.0, 2.0),
            v(2.0, 4.0),
            v(0.0, 4.0),
        ])
        .unwrap();
        let grid = RiskGrid::over(&[&l], 0.5).unwrap();
        let svg = render_heatmap_svg(&grid);
        assert!(svg.contains("rgb(200,200,200)"));
        assert_eq!(svg, render_heatmap_svg(&grid));
    }
}
