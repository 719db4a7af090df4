//! Cross-run analysis: aggregation of annealing histories and a
//! two-sample Kolmogorov-Smirnov test for comparing cost distributions.

use serde::{Deserialize, Serialize};

use crate::annealer::TrialRecord;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    /// Supremum distance between the two empirical CDFs.
    pub d: f64,
    /// Asymptotic two-sided p-value.
    pub p_value: f64,
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// approximation `Q_ks((sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) * D)` where
/// `ne = n * m / (n + m)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);

    let (n, m) = (xs.len(), ys.len());
    let mut i = 0;
    let mut j = 0;
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let x = xs[i];
        let y = ys[j];
        let t = x.min(y);
        while i < n && xs[i] <= t {
            i += 1;
        }
        while j < m && ys[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    // Once one sample is exhausted its ECDF is 1 and the gap only
    // shrinks, so the loop has already seen the supremum.

    let ne = (n * m) as f64 / (n + m) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok(KsResult {
        d,
        p_value: qks(lambda),
    })
}

/// Kolmogorov survival function `Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2
/// lambda^2}`, clamped to [0, 1].
fn qks(lambda: f64) -> f64 {
    if lambda < 1e-6 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64) * (k as f64) * lambda * lambda).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-12 * sum.abs().max(1e-12) {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Per-trial summary across several runs of equal length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregateRecord {
    pub cycle: usize,
    pub trial: usize,
    pub temperature: f64,
    pub mean_current: f64,
    pub min_current: f64,
    pub max_current: f64,
    pub mean_best: f64,
}

/// Averages several annealing histories point-wise. All histories must
/// have the same length (same cycle/trial structure).
pub fn aggregate_histories(histories: &[Vec<TrialRecord>]) -> Result<Vec<AggregateRecord>> {
    let Some(first) = histories.first() else {
        return Err(Error::EmptySample);
    };
    for h in histories {
        if h.len() != first.len() {
            return Err(Error::HistoryLengthMismatch(first.len(), h.len()));
        }
    }
    let runs = histories.len() as f64;
    Ok((0..first.len())
        .map(|i| {
            let mut mean_current = 0.0;
            let mut mean_best = 0.0;
            let mut min_current = f64::INFINITY;
            let mut max_current = f64::NEG_INFINITY;
            for h in histories {
                mean_current += h[i].current_cost;
                mean_best += h[i].best_cost;
                min_current = min_current.min(h[i].current_cost);
                max_current = max_current.max(h[i].current_cost);
            }
            AggregateRecord {
                cycle: first[i].cycle,
                trial: first[i].trial,
                temperature: first[i].temperature,
                mean_current: mean_current / runs,
                min_current,
                max_current,
                mean_best: mean_best / runs,
            }
        })
        .collect())
}

/// Aggregate history as CSV with a header row.
pub fn aggregate_csv(records: &[AggregateRecord]) -> String {
    let mut out = String::from(
        "cycle,trial,temperature,mean_current,min_current,max_current,mean_best\n",
    );
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.cycle,
            r.trial,
            r.temperature,
            r.mean_current,
            r.min_current,
            r.max_current,
            r.mean_best
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples_have_zero_distance() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let r = ks_two_sample(&a, &a).unwrap();
        assert!(r.d < 1e-12);
        assert!(r.p_value > 0.999);
    }

    #[test]
    fn disjoint_samples_have_distance_one() {
        let a = [1.0, 2.0, 3.0];
        let b = [10.0, 11.0, 12.0];
        let r = ks_two_sample(&a, &b).unwrap();
        assert!((r.d - 1.0).abs() < 1e-12);
        assert!(r.p_value < 0.05);
    }

    #[test]
    fn textbook_case_d_point_six() {
        // Two samples of 10 with ECDF supremum distance exactly 0.6; the
        // asymptotic approximation gives p close to 0.031.
        let a: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let b: Vec<f64> = (1..=10).map(|i| i as f64 + 5.5).collect();
        let r = ks_two_sample(&a, &b).unwrap();
        assert!((r.d - 0.6).abs() < 1e-12, "d = {}", r.d);
        assert!((r.p_value - 0.0311).abs() < 0.0016, "p = {}", r.p_value);
    }

    #[test]
    fn symmetry_and_empty_errors() {
        let a = [0.3, 1.4, 2.0, 5.0];
        let b = [0.1, 0.2, 0.3];
        let r1 = ks_two_sample(&a, &b).unwrap();
        let r2 = ks_two_sample(&b, &a).unwrap();
        assert!((r1.d - r2.d).abs() < 1e-15);
        assert!((r1.p_value - r2.p_value).abs() < 1e-15);
        assert!(ks_two_sample(&[], &a).is_err());
    }

    #[test]
    fn duplicates_and_ties_are_handled() {
        let a = [1.0, 1.0, 1.0, 2.0];
        let b = [1.0, 2.0, 2.0, 2.0];
        let r = ks_two_sample(&a, &b).unwrap();
        // At x = 1: F_a = 0.75, F_b = 0.25.
        assert!((r.d - 0.5).abs() < 1e-12);
    }

    fn record(cycle: usize, trial: usize, current: f64, best: f64) -> TrialRecord {
        TrialRecord {
            cycle,
            trial,
            temperature: 8.0,
            candidate_cost: current,
            current_cost: current,
            best_cost: best,
            accepted: true,
            acceptance_probability: 1.0,
            uniform_draw: 0.5,
        }
    }

    #[test]
    fn aggregation_means_and_envelope() {
        let h1 = vec![record(1, 1, 2.0, 2.0), record(1, 2, 1.0, 1.0)];
        let h2 = vec![record(1, 1, 4.0, 4.0), record(1, 2, 3.0, 3.0)];
        let agg = aggregate_histories(&[h1, h2]).unwrap();
        assert_eq!(agg.len(), 2);
        assert!((agg[0].mean_current - 3.0).abs() < 1e-12);
        assert_eq!(agg[0].min_current, 2.0);
        assert_eq!(agg[0].max_current, 4.0);
        assert!((agg[1].mean_best - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_lengths_error() {
        let h1 = vec![record(1, 1, 2.0, 2.0)];
        let h2 = vec![record(1, 1, 2.0, 2.0), record(1, 2, 1.0, 1.0)];
        assert!(matches!(
            aggregate_histories(&[h1, h2]),
            Err(Error::HistoryLengthMismatch(1, 2))
        ));
        assert!(aggregate_histories(&[]).is_err());
    }
}
