//! Multi-seed optimization runs with deterministic per-evaluation RNG
//! derivation, optional thread parallelism, and artifact output.

use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis;
use crate::annealer::{self, SaOutcome};
use crate::cost;
use crate::render;
use crate::risk;
use crate::room::{serialize_layout, Layout, Problem};
use crate::sampler;
use crate::Result;

/// Environment variable capping worker threads for batch runs.
pub const THREADS_ENV: &str = "WARD_LAYOUT_THREADS";

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stateless derivation of the RNG for evaluation number `counter` of the
/// run with seed `run_seed`. Re-evaluating the same layout at the same
/// counter reproduces the same trajectories bit for bit.
pub fn evaluation_seed(run_seed: u64, counter: u64) -> u64 {
    splitmix64(run_seed ^ splitmix64(counter))
}

/// Cost evaluator with a per-call derived RNG stream.
pub struct Evaluator<'a> {
    problem: &'a Problem,
    run_seed: u64,
    counter: u64,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a Problem, run_seed: u64) -> Evaluator<'a> {
        Evaluator {
            problem,
            run_seed,
            counter: 0,
        }
    }

    pub fn evaluations(&self) -> u64 {
        self.counter
    }

    pub fn evaluate(&mut self, layout: &Layout) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(evaluation_seed(self.run_seed, self.counter));
        self.counter += 1;
        let grid = risk::evaluate(self.problem, layout, &mut rng)?;
        cost::cost(&grid, &self.problem.cost)
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub seed: u64,
    pub initial_layout: Layout,
    pub outcome: SaOutcome,
}

#[derive(Debug, Clone)]
pub struct BatchResult {
    pub runs: Vec<RunResult>,
}

impl BatchResult {
    /// Index of the run with the lowest best cost.
    pub fn best_run(&self) -> usize {
        self.runs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.outcome.best_cost.total_cmp(&b.outcome.best_cost))
            .map(|(i, _)| i)
            .expect("batch has at least one run")
    }

    pub fn initial_costs(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.outcome.initial_cost).collect()
    }

    pub fn final_costs(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.outcome.best_cost).collect()
    }
}

/// One full annealing run: sample an initial feasible layout with the
/// seed, then optimize it under the problem's annealing schedule.
pub fn run_one(problem: &Problem, seed: u64) -> Result<RunResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial = sampler::sample_initial(problem, &mut rng)?;
    let mut evaluator = Evaluator::new(problem, seed);
    let outcome = annealer::optimize(problem, &initial, &mut |l| evaluator.evaluate(l), &mut rng)?;
    Ok(RunResult {
        seed,
        initial_layout: initial,
        outcome,
    })
}

/// Worker thread count: `WARD_LAYOUT_THREADS` if set, otherwise the
/// machine's available parallelism, never more than the number of runs.
pub fn thread_count(runs: usize) -> usize {
    let configured = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n > 0);
    let hw = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    configured.unwrap_or(hw).min(runs.max(1))
}

/// Runs seeds `base_seed .. base_seed + runs` in parallel. Results come
/// back in seed order regardless of scheduling.
pub fn run_many(problem: &Problem, base_seed: u64, runs: usize) -> Result<BatchResult> {
    assert!(runs > 0, "runs must be >= 1");
    let threads = thread_count(runs);
    let mut slots: Vec<Option<Result<RunResult>>> = Vec::new();
    slots.resize_with(runs, || None);

    if threads <= 1 {
        for (i, slot) in slots.iter_mut().enumerate() {
            *slot = Some(run_one(problem, base_seed + i as u64));
        }
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let slot_refs: Vec<std::sync::Mutex<&mut Option<Result<RunResult>>>> =
            slots.iter_mut().map(std::sync::Mutex::new).collect();
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if i >= runs {
                        break;
                    }
                    let result = run_one(problem, base_seed + i as u64);
                    **slot_refs[i].lock().unwrap() = Some(result);
                });
            }
        });
    }

    let runs = slots
        .into_iter()
        .map(|s| s.expect("every slot filled"))
        .collect::<Result<Vec<_>>>()?;
    Ok(BatchResult { runs })
}

/// Writes all artifacts of a batch into `out_dir` and returns the
/// manifest JSON that was written alongside them.
pub fn write_artifacts(
    problem: &Problem,
    batch: &BatchResult,
    base_seed: u64,
    out_dir: &Path,
) -> Result<serde_json::Value> {
    fs::create_dir_all(out_dir)?;
    let mut artifacts: Vec<String> = Vec::new();
    let put = |name: &str, bytes: &[u8], artifacts: &mut Vec<String>| -> Result<PathBuf> {
        let path = out_dir.join(name);
        fs::write(&path, bytes)?;
        artifacts.push(name.to_string());
        Ok(path)
    };

    for run in &batch.runs {
        let seed = run.seed;
        put(
            &format!("initial_{seed}.layout.json"),
            serialize_layout(&run.initial_layout, problem)?.as_bytes(),
            &mut artifacts,
        )?;
        put(
            &format!("best_{seed}.layout.json"),
            serialize_layout(&run.outcome.best_layout, problem)?.as_bytes(),
            &mut artifacts,
        )?;
        put(
            &format!("history_{seed}.csv"),
            annealer::history_csv(&run.outcome.history).as_bytes(),
            &mut artifacts,
        )?;
    }

    let histories: Vec<_> = batch.runs.iter().map(|r| r.outcome.history.clone()).collect();
    let aggregate = analysis::aggregate_histories(&histories)?;
    put(
        "aggregate.csv",
        analysis::aggregate_csv(&aggregate).as_bytes(),
        &mut artifacts,
    )?;

    let mut costs = String::from("seed,initial_cost,best_cost\n");
    for run in &batch.runs {
        costs.push_str(&format!(
            "{},{},{}\n",
            run.seed, run.outcome.initial_cost, run.outcome.best_cost
        ));
    }
    put("costs.csv", costs.as_bytes(), &mut artifacts)?;

    let best = &batch.runs[batch.best_run()];
    let best_layout = &best.outcome.best_layout;
    put(
        "best.layout.json",
        serialize_layout(best_layout, problem)?.as_bytes(),
        &mut artifacts,
    )?;
    put(
        "best.schematic.svg",
        render::render_schematic(problem, best_layout)?.as_bytes(),
        &mut artifacts,
    )?;
    let mut grid_rng = ChaCha8Rng::seed_from_u64(evaluation_seed(best.seed, u64::MAX));
    let grid = risk::evaluate(problem, best_layout, &mut grid_rng)?;
    put(
        "best.heatmap.svg",
        render::render_heatmap_svg(&grid).as_bytes(),
        &mut artifacts,
    )?;
    put("best.heatmap.ppm", &render::render_heatmap_ppm(&grid), &mut artifacts)?;
    put("best.grid.csv", grid.to_csv().as_bytes(), &mut artifacts)?;

    let manifest = serde_json::json!({
        "problem": problem.name,
        "base_seed": base_seed,
        "runs": batch.runs.len(),
        "best_seed": best.seed,
        "best_cost": best.outcome.best_cost,
        "resolved": {
            "sa": problem.sa,
            "cost": problem.cost,
            "risk_factors": problem.risk_factors,
            "perturbation": problem.perturbation,
            "budget": problem.budget,
            "grid_resolution": problem.room.grid_resolution,
        },
        "artifacts": artifacts,
    });
    fs::write(
        out_dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    Ok(manifest)
}
