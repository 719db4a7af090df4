//! Samples feasible layouts for the bundled inboard room and writes one
//! schematic SVG per seed.
//!
//! ```bash
//! cargo run --release -p ward-layout --example generate_layouts [OUT_DIR]
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ward_layout::room::{parse_problem, serialize_layout};
use ward_layout::{assets, constraints, render, sampler};

fn main() -> Result<(), ward_layout::Error> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "target/example-output/generate_layouts".into());
    let out = std::path::Path::new(&out);
    std::fs::create_dir_all(out)?;

    let problem = parse_problem(assets::INBOARD_ROOM)?;
    for seed in 0..4u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = sampler::sample_initial(&problem, &mut rng)?;
        let violations = constraints::check_layout(&problem, &layout)?;
        assert!(violations.is_empty(), "sampler returned an invalid layout");
        std::fs::write(
            out.join(format!("layout_{seed}.json")),
            serialize_layout(&layout, &problem)?,
        )?;
        std::fs::write(
            out.join(format!("layout_{seed}.svg")),
            render::render_schematic(&problem, &layout)?,
        )?;
        println!("seed {seed}: feasible layout written");
    }
    println!("wrote layouts to {}", out.display());
    Ok(())
}
