//! Runs one full annealing pass on the inboard room and writes the best
//! layout, its schematic, and the trial history.
//!
//! ```bash
//! cargo run --release -p ward-layout --example optimize_room [OUT_DIR]
//! ```

use ward_layout::annealer::history_csv;
use ward_layout::room::{parse_problem, serialize_layout};
use ward_layout::{assets, batch, render};

fn main() -> Result<(), ward_layout::Error> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "target/example-output/optimize_room".into());
    let out = std::path::Path::new(&out);
    std::fs::create_dir_all(out)?;

    let problem = parse_problem(assets::INBOARD_ROOM)?;
    let run = batch::run_one(&problem, 0)?;
    println!(
        "initial cost {:.4} -> best cost {:.4} ({:.1}% lower) over {} trials",
        run.outcome.initial_cost,
        run.outcome.best_cost,
        100.0 * (1.0 - run.outcome.best_cost / run.outcome.initial_cost),
        run.outcome.history.len()
    );

    std::fs::write(
        out.join("best.layout.json"),
        serialize_layout(&run.outcome.best_layout, &problem)?,
    )?;
    std::fs::write(
        out.join("best.svg"),
        render::render_schematic(&problem, &run.outcome.best_layout)?,
    )?;
    std::fs::write(
        out.join("initial.svg"),
        render::render_schematic(&problem, &run.initial_layout)?,
    )?;
    std::fs::write(out.join("history.csv"), history_csv(&run.outcome.history))?;
    println!("wrote run artifacts to {}", out.display());
    Ok(())
}
