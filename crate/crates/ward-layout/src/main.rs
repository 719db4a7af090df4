//! Thin batch CLI over the library: optimize, evaluate, render, compare.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ward_layout::cost::TailMode;
use ward_layout::room::{parse_layout, parse_problem, serialize_layout, Layout, Problem};
use ward_layout::{analysis, batch, cost, render, risk, Error};

#[derive(Parser)]
#[command(name = "ward-layout", version, about = "Hospital room layout optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TailModeArg {
    Eq1Verbatim,
    Cvar,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Overrides applied on top of the problem file.
#[derive(Args)]
struct ProblemOverrides {
    /// Annealing cycles.
    #[arg(long)]
    cycles: Option<usize>,
    /// Trials per cycle.
    #[arg(long)]
    trials: Option<usize>,
    /// Initial temperature.
    #[arg(long)]
    t0: Option<f64>,
    /// Cooling factor per cycle.
    #[arg(long)]
    k: Option<f64>,
    /// Risk grid resolution in meters.
    #[arg(long)]
    resolution: Option<f64>,
    /// Tail term of the cost function.
    #[arg(long, value_enum)]
    tail_mode: Option<TailModeArg>,
}

impl ProblemOverrides {
    fn apply(&self, problem: &mut Problem) {
        if let Some(c) = self.cycles {
            problem.sa.num_cycles = c;
        }
        if let Some(t) = self.trials {
            problem.sa.num_trials = t;
        }
        if let Some(t0) = self.t0 {
            problem.sa.t0 = t0;
        }
        if let Some(k) = self.k {
            problem.sa.k = k;
        }
        if let Some(r) = self.resolution {
            problem.room.grid_resolution = r;
        }
        if let Some(mode) = self.tail_mode {
            problem.cost.tail_mode = match mode {
                TailModeArg::Eq1Verbatim => TailMode::Eq1Verbatim,
                TailModeArg::Cvar => TailMode::Cvar,
            };
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded annealing and write layouts, histories, and renders.
    Optimize {
        /// Problem file (JSON).
        problem: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Independent runs with seeds seed, seed+1, ...
        #[arg(long, default_value_t = 1)]
        runs: usize,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        overrides: ProblemOverrides,
    },
    /// Evaluate one layout and report its risk statistics and cost.
    Evaluate {
        problem: PathBuf,
        layout: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Optional directory for the risk grid and heatmap.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: ProblemOverrides,
    },
    /// Render a schematic (and heatmap) for a layout.
    Render {
        problem: PathBuf,
        layout: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        overrides: ProblemOverrides,
    },
    /// Optimize two problems and compare their final cost distributions.
    Compare {
        problem_a: PathBuf,
        problem_b: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        overrides: ProblemOverrides,
    },
}

fn load_problem(path: &Path, overrides: &ProblemOverrides) -> Result<Problem, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
    let mut problem = parse_problem(&text)?;
    overrides.apply(&mut problem);
    problem.sa.validate()?;
    problem.cost.validate()?;
    Ok(problem)
}

fn load_layout(path: &Path, problem: &Problem) -> Result<Layout, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
    parse_layout(&text, problem)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Optimize {
            problem,
            seed,
            runs,
            out,
            overrides,
        } => {
            let problem = load_problem(&problem, &overrides)?;
            let result = batch::run_many(&problem, seed, runs)?;
            let manifest = batch::write_artifacts(&problem, &result, seed, &out)?;
            let best = &result.runs[result.best_run()];
            println!(
                "{} runs; best seed {} cost {:.6}; artifacts in {}",
                runs,
                best.seed,
                best.outcome.best_cost,
                out.display()
            );
            let _ = manifest;
            Ok(())
        }
        Command::Evaluate {
            problem,
            layout,
            seed,
            format,
            out,
            overrides,
        } => {
            let problem = load_problem(&problem, &overrides)?;
            let layout = load_layout(&layout, &problem)?;
            let mut rng = ChaCha8Rng::seed_from_u64(batch::evaluation_seed(seed, 0));
            let grid = risk::evaluate(&problem, &layout, &mut rng)?;
            let stats = grid.stats()?;
            let c = cost::cost(&grid, &problem.cost)?;
            match format {
                Format::Json => {
                    let report = serde_json::json!({
                        "cost": c,
                        "median": stats.median,
                        "max": stats.max,
                        "mean": stats.mean,
                        "std": stats.std,
                        "unreachable": grid.unreachable(),
                        "cells": grid.unmasked_count(),
                    });
                    println!("{}", serde_json::to_string_pretty(&report)?);
                }
                Format::Text => {
                    println!("cost    {c:.6}");
                    println!("median  {:.6}", stats.median);
                    println!("max     {:.6}", stats.max);
                    println!("mean    {:.6}", stats.mean);
                    println!("std     {:.6}", stats.std);
                    println!("cells   {}", grid.unmasked_count());
                    if grid.unreachable() {
                        println!("warning: some scenario has no collision-free path");
                    }
                }
            }
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                std::fs::write(dir.join("grid.csv"), grid.to_csv())?;
                std::fs::write(dir.join("heatmap.svg"), render::render_heatmap_svg(&grid))?;
                std::fs::write(dir.join("heatmap.ppm"), render::render_heatmap_ppm(&grid))?;
            }
            Ok(())
        }
        Command::Render {
            problem,
            layout,
            out,
            seed,
            overrides,
        } => {
            let problem = load_problem(&problem, &overrides)?;
            let layout = load_layout(&layout, &problem)?;
            std::fs::create_dir_all(&out)?;
            std::fs::write(
                out.join("schematic.svg"),
                render::render_schematic(&problem, &layout)?,
            )?;
            let mut rng = ChaCha8Rng::seed_from_u64(batch::evaluation_seed(seed, 0));
            let grid = risk::evaluate(&problem, &layout, &mut rng)?;
            std::fs::write(out.join("heatmap.svg"), render::render_heatmap_svg(&grid))?;
            std::fs::write(out.join("heatmap.ppm"), render::render_heatmap_ppm(&grid))?;
            // Round-trip the layout next to the renders for convenience.
            std::fs::write(out.join("layout.json"), serialize_layout(&layout, &problem)?)?;
            println!("wrote schematic and heatmap to {}", out.display());
            Ok(())
        }
        Command::Compare {
            problem_a,
            problem_b,
            seed,
            runs,
            out,
            format,
            overrides,
        } => {
            let pa = load_problem(&problem_a, &overrides)?;
            let pb = load_problem(&problem_b, &overrides)?;
            let ba = batch::run_many(&pa, seed, runs)?;
            let bb = batch::run_many(&pb, seed, runs)?;
            let fa = ba.final_costs();
            let fb = bb.final_costs();
            let ks = analysis::ks_two_sample(&fa, &fb)?;
            let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
            let report = serde_json::json!({
                "a": { "problem": pa.name, "mean_final_cost": mean(&fa), "final_costs": fa },
                "b": { "problem": pb.name, "mean_final_cost": mean(&fb), "final_costs": fb },
                "ks": { "d": ks.d, "p_value": ks.p_value },
                "runs": runs,
                "base_seed": seed,
            });
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
                Format::Text => {
                    println!("{}: mean final cost {:.6}", pa.name, mean(&fa));
                    println!("{}: mean final cost {:.6}", pb.name, mean(&fb));
                    println!("K-S D = {:.4}, p = {:.4}", ks.d, ks.p_value);
                }
            }
            if let Some(path) = out {
                if let Some(parent) = path.parent() {
                    if !parent.as_os_str().is_empty() {
                        std::fs::create_dir_all(parent)?;
                    }
                }
                std::fs::write(&path, serde_json::to_string_pretty(&report)? + "\n")?;
            }
            Ok(())
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Json(_) | Error::Io(_) | Error::Validation(_) => 2,
        Error::Infeasible { .. } => 3,
        _ => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
