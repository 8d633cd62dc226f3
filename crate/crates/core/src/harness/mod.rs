//! Batch drivers producing figure data: density grids, score traces, utility
//! distributions and full payoff sweeps.

mod density;
mod scores;
mod sweep;

use std::io::Write;

use serde::Serialize;

pub use density::{density_grid, DensityGrid, Window};
pub use scores::{score_timeseries, ScoreSeries};
pub use sweep::{analyze_matrix, output_dir, run_sweep, AnalysisArtifacts, SweepArtifacts};

use crate::error::{Error, Result};
use crate::game::{GameConfig, PayoffMatrix, Strategy};

/// Blue utilities of one Blue strategy against every Red strategy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyUtilities {
    pub row: usize,
    pub strategy: Strategy,
    pub utilities: Vec<f64>,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UtilityDistribution {
    /// Ordered by first-turn action, then by the remaining turns.
    pub strategies: Vec<StrategyUtilities>,
    /// Index into `strategies` of the highest mean utility (first on ties).
    pub best_by_mean: usize,
}

impl UtilityDistribution {
    pub fn best(&self) -> &StrategyUtilities {
        &self.strategies[self.best_by_mean]
    }

    /// Mean of the strategy means over strategies whose first action is
    /// `first`, or `None` when there is none.
    pub fn mean_for_first_action(&self, first: f64) -> Option<f64> {
        let means: Vec<f64> = self
            .strategies
            .iter()
            .filter(|s| s.strategy.at(0) == first)
            .map(|s| s.mean)
            .collect();
        (!means.is_empty()).then(|| means.iter().sum::<f64>() / means.len() as f64)
    }

    /// CSV `row,blue_strategy,label,first_action,mean,min,max,utilities`, the
    /// last column holding every utility separated by `;`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["row", "blue_strategy", "label", "first_action", "mean", "min", "max", "utilities"])?;
        for s in &self.strategies {
            let all: Vec<String> = s.utilities.iter().map(f64::to_string).collect();
            w.write_record([
                s.row.to_string(),
                s.strategy.label(),
                s.strategy.to_string(),
                s.strategy.at(0).to_string(),
                s.mean.to_string(),
                s.min.to_string(),
                s.max.to_string(),
                all.join(";"),
            ])?;
        }
        w.flush().map_err(|e| Error::io("utility distribution", e))?;
        Ok(())
    }
}

pub fn utility_by_strategy(matrix: &PayoffMatrix) -> Result<UtilityDistribution> {
    let values = matrix.values()?;
    let mut strategies: Vec<StrategyUtilities> = values
        .into_iter()
        .enumerate()
        .map(|(row, utilities)| {
            let mean = utilities.iter().sum::<f64>() / utilities.len() as f64;
            let min = utilities.iter().copied().fold(f64::INFINITY, f64::min);
            let max = utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            StrategyUtilities {
                row,
                strategy: matrix.blue_strategies[row].clone(),
                utilities,
                mean,
                min,
                max,
            }
        })
        .collect();
    if strategies.is_empty() {
        return Err(Error::MalformedMatrix("matrix has no rows".into()));
    }
    strategies.sort_by(|a, b| {
        a.strategy
            .values()
            .partial_cmp(b.strategy.values())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.row.cmp(&b.row))
    });
    let best_by_mean = (0..strategies.len()).fold(0, |best, k| {
        if strategies[k].mean > strategies[best].mean {
            k
        } else {
            best
        }
    });
    Ok(UtilityDistribution {
        strategies,
        best_by_mean,
    })
}

/// Start times of every turn after the first.
pub fn turn_markers(config: &GameConfig) -> Vec<f64> {
    (1..config.turns).map(|k| config.turn_boundary(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cell() {
        let m = PayoffMatrix::from_numbers(&[vec![2.5]]).unwrap();
        let d = utility_by_strategy(&m).unwrap();
        assert_eq!(d.strategies.len(), 1);
        assert_eq!(d.best().utilities, vec![2.5]);
        assert_eq!((d.best().min, d.best().max, d.best().mean), (2.5, 2.5, 2.5));
    }

    #[test]
    fn constant_matrix_is_degenerate() {
        let m = PayoffMatrix::from_numbers(&vec![vec![-1.0; 4]; 3]).unwrap();
        let d = utility_by_strategy(&m).unwrap();
        for s in &d.strategies {
            assert_eq!((s.min, s.mean, s.max), (-1.0, -1.0, -1.0));
        }
        assert_eq!(d.best_by_mean, 0);
    }

    #[test]
    fn best_mean_and_first_action_means() {
        let m = PayoffMatrix::from_numbers(&[vec![1.0, 3.0], vec![5.0, -1.0]]).unwrap();
        let d = utility_by_strategy(&m).unwrap();
        assert_eq!(d.best().row, 0);
        let first = m.blue_strategies[1].at(0);
        assert_eq!(d.mean_for_first_action(first), Some(2.0));
        assert_eq!(d.mean_for_first_action(9.0), None);

        let mut bad = m.clone();
        bad.cells[0].mean_utility_blue = None;
        assert!(matches!(utility_by_strategy(&bad), Err(Error::InvalidCells(1))));
    }
}
