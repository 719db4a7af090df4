//! Scalar layout objective over a risk grid: a weighted combination of the
//! median, the maximum, and a high-risk-tail term with a cut-off alpha.

use serde::{Deserialize, Serialize};

use crate::risk::{RiskGrid, RiskStats};
use crate::{Error, Result};

/// How the tail cut-off alpha is chosen for each evaluated grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaRule {
    /// Fraction of the grid's max risk value (recomputed per evaluation).
    FractionOfMax(f64),
    Fixed(f64),
}

/// How the third term of the objective reads the tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailMode {
    /// (alpha - mean) / std, exactly as the weighted formula is written.
    Eq1Verbatim,
    /// Conditional value-at-risk: mean of cell values strictly above alpha.
    Cvar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostSpec {
    /// Weights for the median, max, and tail terms.
    pub weights: [f64; 3],
    pub alpha: AlphaRule,
    #[serde(default = "default_tail_mode")]
    pub tail_mode: TailMode,
}

fn default_tail_mode() -> TailMode {
    TailMode::Eq1Verbatim
}

impl Default for CostSpec {
    fn default() -> Self {
        CostSpec {
            weights: [0.33, 0.33, 0.33],
            alpha: AlphaRule::FractionOfMax(0.95),
            tail_mode: TailMode::Eq1Verbatim,
        }
    }
}

impl CostSpec {
    pub fn validate(&self) -> Result<()> {
        if self.weights.iter().any(|w| *w < 0.0) {
            return Err(Error::Validation("cost weights must be >= 0".into()));
        }
        if let AlphaRule::FractionOfMax(f) = self.alpha {
            if !(0.0 < f && f <= 1.0) {
                return Err(Error::Validation(
                    "alpha fraction must lie in (0, 1]".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Tail cut-off for the given grid statistics.
pub fn alpha_cutoff(stats: &RiskStats, spec: &CostSpec) -> f64 {
    match spec.alpha {
        AlphaRule::FractionOfMax(f) => f * stats.max,
        AlphaRule::Fixed(a) => a,
    }
}

/// Evaluates the objective on a risk grid. Grids flagged unreachable (no
/// collision-free path for some scenario) cost +inf so they never win.
pub fn cost(grid: &RiskGrid, spec: &CostSpec) -> Result<f64> {
    if grid.unreachable() {
        return Ok(f64::INFINITY);
    }
    let stats = grid.stats()?;
    let alpha = alpha_cutoff(&stats, spec);
    let [w1, w2, w3] = spec.weights;
    let tail = match spec.tail_mode {
        TailMode::Eq1Verbatim => {
            if stats.std == 0.0 {
                0.0
            } else {
                (alpha - stats.mean) / stats.std
            }
        }
        TailMode::Cvar => {
            let tail_cells: Vec<f64> = grid
                .unmasked_values()
                .filter(|v| *v > alpha)
                .collect();
            if tail_cells.is_empty() {
                0.0
            } else {
                tail_cells.iter().sum::<f64>() / tail_cells.len() as f64
            }
        }
    };
    Ok(w1 * stats.median + w2 * stats.max + w3 * tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::risk::RiskGrid;

    fn grid_of(values: &[f64]) -> RiskGrid {
        RiskGrid::from_values(values)
    }

    #[test]
    fn alpha_fraction_and_fixed() {
        let stats = grid_of(&[1.0, 2.0]).stats().unwrap();
        let frac = CostSpec {
            alpha: AlphaRule::FractionOfMax(0.95),
            ..CostSpec::default()
        };
        assert!((alpha_cutoff(&stats, &frac) - 1.9).abs() < 1e-12);
        let fixed = CostSpec {
            alpha: AlphaRule::Fixed(1.5),
            ..CostSpec::default()
        };
        assert!((alpha_cutoff(&stats, &fixed) - 1.5).abs() < 1e-12);
        let full = CostSpec {
            alpha: AlphaRule::FractionOfMax(1.0),
            ..CostSpec::default()
        };
        assert!((alpha_cutoff(&stats, &full) - stats.max).abs() < 1e-12);
    }

    #[test]
    fn verbatim_hand_computation() {
        // cells {1,1,1,1,2}: median 1, max 2, mean 1.2, population std 0.4.
        let g = grid_of(&[1.0, 1.0, 1.0, 1.0, 2.0]);
        let spec = CostSpec::default();
        let c = cost(&g, &spec).unwrap();
        let expected = 0.33 * 1.0 + 0.33 * 2.0 + 0.33 * ((1.9 - 1.2) / 0.4);
        assert!((c - expected).abs() < 1e-12, "{c} vs {expected}");
        assert!((expected - 1.5675).abs() < 1e-10);
    }

    #[test]
    fn degenerate_uniform_grid() {
        let g = grid_of(&[1.0; 9]);
        let c = cost(&g, &CostSpec::default()).unwrap();
        assert!((c - 0.66).abs() < 1e-12);
    }

    #[test]
    fn cvar_hand_computation() {
        let g = grid_of(&[1.0, 1.0, 1.0, 1.0, 2.0]);
        let spec = CostSpec {
            tail_mode: TailMode::Cvar,
            ..CostSpec::default()
        };
        let c = cost(&g, &spec).unwrap();
        let expected = 0.33 * 1.0 + 0.33 * 2.0 + 0.33 * 2.0;
        assert!((c - expected).abs() < 1e-12);
    }

    #[test]
    fn unreachable_dominates() {
        let mut g = grid_of(&[1.0, 1.5]);
        g.mark_unreachable();
        assert_eq!(cost(&g, &CostSpec::default()).unwrap(), f64::INFINITY);
    }

    #[test]
    fn single_term_weighting_orders_by_median() {
        let spec = CostSpec {
            weights: [1.0, 0.0, 0.0],
            ..CostSpec::default()
        };
        let a = grid_of(&[1.0, 1.0, 5.0]);
        let b = grid_of(&[2.0, 2.0, 2.0]);
        assert!(cost(&a, &spec).unwrap() < cost(&b, &spec).unwrap());
    }
}
