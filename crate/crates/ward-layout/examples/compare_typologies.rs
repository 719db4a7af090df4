//! Optimizes the inboard and outboard rooms over several seeds and
//! compares the final cost distributions with a two-sample K-S test.
//!
//! ```bash
//! cargo run --release -p ward-layout --example compare_typologies [RUNS]
//! ```

use ward_layout::room::parse_problem;
use ward_layout::{analysis, assets, batch};

fn main() -> Result<(), ward_layout::Error> {
    let runs: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(6);

    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let mut finals = Vec::new();
    for (name, text) in [
        ("inboard", assets::INBOARD_ROOM),
        ("outboard", assets::OUTBOARD_ROOM),
    ] {
        let problem = parse_problem(text)?;
        let result = batch::run_many(&problem, 0, runs)?;
        let initial = result.initial_costs();
        let final_costs = result.final_costs();
        println!(
            "{name:>8}: mean initial {:.4} -> mean final {:.4} ({:.1}% reduction)",
            mean(&initial),
            mean(&final_costs),
            100.0 * (1.0 - mean(&final_costs) / mean(&initial)),
        );
        finals.push(final_costs);
    }

    let ks = analysis::ks_two_sample(&finals[0], &finals[1])?;
    println!(
        "final-cost distributions: K-S D = {:.3}, p = {:.4} ({})",
        ks.d,
        ks.p_value,
        if ks.p_value < 0.05 {
            "typologies differ at the 5% level"
        } else {
            "no significant difference"
        }
    );
    Ok(())
}
