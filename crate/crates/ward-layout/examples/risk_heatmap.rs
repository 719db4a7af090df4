//! Evaluates the bundled traditional layout and writes its risk heatmap
//! (SVG and PPM) plus the raw grid as CSV.
//!
//! ```bash
//! cargo run --release -p ward-layout --example risk_heatmap [OUT_DIR]
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ward_layout::room::{parse_layout, parse_problem};
use ward_layout::{assets, batch, cost, render, risk};

fn main() -> Result<(), ward_layout::Error> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "target/example-output/risk_heatmap".into());
    let out = std::path::Path::new(&out);
    std::fs::create_dir_all(out)?;

    let problem = parse_problem(assets::INBOARD_ROOM)?;
    let layout = parse_layout(assets::TRADITIONAL_LAYOUT, &problem)?;

    let mut rng = ChaCha8Rng::seed_from_u64(batch::evaluation_seed(0, 0));
    let grid = risk::evaluate(&problem, &layout, &mut rng)?;
    let stats = grid.stats()?;
    println!(
        "traditional layout: cost {:.4} (median {:.4}, max {:.4}, mean {:.4}, std {:.4})",
        cost::cost(&grid, &problem.cost)?,
        stats.median,
        stats.max,
        stats.mean,
        stats.std
    );

    std::fs::write(out.join("heatmap.svg"), render::render_heatmap_svg(&grid))?;
    std::fs::write(out.join("heatmap.ppm"), render::render_heatmap_ppm(&grid))?;
    std::fs::write(out.join("grid.csv"), grid.to_csv())?;
    std::fs::write(
        out.join("schematic.svg"),
        render::render_schematic(&problem, &layout)?,
    )?;
    println!("wrote heatmap artifacts to {}", out.display());
    Ok(())
}
