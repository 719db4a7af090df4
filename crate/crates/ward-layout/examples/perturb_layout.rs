//! Draws feasible layouts near the traditional one at growing proposal
//! widths and reports how far each object moved.
//!
//! ```bash
//! cargo run --release -p ward-layout --example perturb_layout [OUT_DIR]
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ward_layout::room::{parse_layout, parse_problem, Placement};
use ward_layout::{assets, render, sampler};

fn displacement(problem: &ward_layout::room::Problem, a: &Placement, b: &Placement) -> f64 {
    let total = problem.room.chain().total_length();
    match (a, b) {
        (Placement::Wall { s: sa }, Placement::Wall { s: sb }) => {
            let d = (sb - sa).rem_euclid(total);
            d.min(total - d)
        }
        (Placement::Pose(pa), Placement::Pose(pb)) => pa.position().dist(pb.position()),
        (Placement::Point([xa, ya]), Placement::Point([xb, yb])) => {
            ((xb - xa).powi(2) + (yb - ya).powi(2)).sqrt()
        }
        _ => f64::NAN,
    }
}

fn main() -> Result<(), ward_layout::Error> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "target/example-output/perturb_layout".into());
    let out = std::path::Path::new(&out);
    std::fs::create_dir_all(out)?;

    let mut problem = parse_problem(assets::INBOARD_ROOM)?;
    let base = parse_layout(assets::TRADITIONAL_LAYOUT, &problem)?;
    std::fs::write(out.join("base.svg"), render::render_schematic(&problem, &base)?)?;

    let default_spec = problem.perturbation.clone();
    for (label, scale) in [("zero", 0.0), ("quarter", 0.25), ("full", 1.0)] {
        problem.perturbation = scale_spec(&default_spec, scale);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let near = sampler::nearby_layout(&problem, &base, &mut rng)?;
        let mean_move = base
            .placements
            .iter()
            .zip(&near.placements)
            .map(|(a, b)| displacement(&problem, a, b))
            .sum::<f64>()
            / base.placements.len() as f64;
        println!("{label:>8} widths: mean displacement {mean_move:.3} m");
        std::fs::write(
            out.join(format!("near_{label}.svg")),
            render::render_schematic(&problem, &near)?,
        )?;
    }
    println!("wrote schematics to {}", out.display());
    Ok(())
}

fn scale_spec(spec: &sampler::PerturbationSpec, f: f64) -> sampler::PerturbationSpec {
    let scale_free = |s: &sampler::FreeSigma| sampler::FreeSigma {
        x: s.x * f,
        y: s.y * f,
        theta_deg: s.theta_deg * f,
    };
    sampler::PerturbationSpec {
        free_main: scale_free(&spec.free_main),
        free_bathroom: scale_free(&spec.free_bathroom),
        wall_main: spec.wall_main * f,
        wall_bathroom: spec.wall_bathroom * f,
        door_main: spec.door_main * f,
        door_bathroom: spec.door_bathroom * f,
        light: spec.light * f,
    }
}
