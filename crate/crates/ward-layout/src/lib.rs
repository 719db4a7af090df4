//! Layout optimization for hospital rooms with respect to patient fall risk.
//!
//! The crate models a single-bed hospital room (a main room plus a bathroom)
//! as a constraint satisfaction problem over furniture, lights, and doors,
//! evaluates candidate layouts with a grid-based fall-risk model driven by
//! simulated patient trajectories, and improves layouts with simulated
//! annealing over feasible configurations only.
//!
//! Start from [`room::Problem`]: parse a problem file, call
//! [`sampler::sample_initial`] for a feasible layout, and
//! [`annealer::optimize`] to improve it. The `examples/` directory has one
//! runnable example per capability:
//!
//! ```bash
//! cargo run --release -p ward-layout --example generate_layouts
//! cargo run --release -p ward-layout --example risk_heatmap
//! cargo run --release -p ward-layout --example optimize_room
//! cargo run --release -p ward-layout --example perturb_layout
//! cargo run --release -p ward-layout --example compare_typologies
//! ```
//!
//! A thin `ward-layout` binary exposes the same flows as `optimize`,
//! `evaluate`, `render`, and `compare` subcommands for batch use.

pub mod analysis;
pub mod annealer;
pub mod assets;
pub mod batch;
pub mod constraints;
pub mod cost;
pub mod geometry;
pub mod render;
pub mod risk;
pub mod room;
pub mod sampler;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("point ({0}, {1}) is not on any wall segment")]
    NotOnWall(f64, f64),
    #[error("wall coordinate {s} outside [0, {total})")]
    WallCoordRange { s: f64, total: f64 },
    #[error("parse error at {path}: {msg}")]
    Parse { path: String, msg: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("no feasible layout within budget ({assigned} of {total} objects placed)")]
    Infeasible { assigned: usize, total: usize },
    #[error("scenario {from} -> {to} has no collision-free path")]
    UnreachableScenario { from: String, to: String },
    #[error("grid has no unmasked cells")]
    EmptyGrid,
    #[error("grid resolution {resolution} m does not fit the room")]
    ResolutionTooCoarse { resolution: f64 },
    #[error("history lengths differ: {0} vs {1}")]
    HistoryLengthMismatch(usize, usize),
    #[error("sample is empty")]
    EmptySample,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    fn parse(path: impl fmt::Display, msg: impl fmt::Display) -> Self {
        Error::Parse {
            path: path.to_string(),
            msg: msg.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
