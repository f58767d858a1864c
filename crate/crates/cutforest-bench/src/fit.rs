//! Log-log scaling fits over CSV output: group rows by size, average a
//! chosen column, and fit a least-squares line through the points
//! (log2 n, log2 mean). Floats are fine here; this is analysis, not query
//! answering.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

use crate::report::{column_value, read_rows};

/// A fitted line `y = slope·x + intercept` with the point count behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Plain least squares. Fails on fewer than two points or zero x-variance.
pub fn least_squares(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 2 {
        bail!("least squares needs at least two points, got {}", points.len());
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|&(x, _)| x).sum::<f64>() / n;
    let mean_y = points.iter().map(|&(_, y)| y).sum::<f64>() / n;
    let var_x: f64 = points.iter().map(|&(x, _)| (x - mean_x).powi(2)).sum();
    if var_x == 0.0 {
        bail!("least squares needs spread in x; all abscissas are equal");
    }
    let cov: f64 = points.iter().map(|&(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = cov / var_x;
    Ok(FitResult { slope, intercept: mean_y - slope * mean_x, points: points.len() })
}

/// Per-size means of one column plus the log-log fit through them.
#[derive(Debug, Clone)]
pub struct ScalingFit {
    pub fit: FitResult,
    /// `(n, mean of the column over that n's rows)` in ascending n.
    pub means: Vec<(usize, f64)>,
    pub column: String,
}

/// Means of `column` grouped by n, from rows already in memory.
pub fn column_means(
    rows: &[crate::report::ResultRow],
    column: &str,
) -> Result<Vec<(usize, f64)>> {
    let mut sums: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for row in rows {
        let v = column_value(row, column)
            .with_context(|| format!("unknown numeric column {column:?}"))?;
        let e = sums.entry(row.n).or_insert((0.0, 0));
        e.0 += v;
        e.1 += 1;
    }
    Ok(sums.into_iter().map(|(n, (s, c))| (n, s / c as f64)).collect())
}

/// Fits log2(mean of `column`) against log2(n) over a CSV written by the
/// runner. Needs at least three distinct sizes; means must be positive so
/// their logs exist.
pub fn fit_scaling(csv: &Path, column: &str) -> Result<ScalingFit> {
    let rows = read_rows(csv)?;
    let means = column_means(&rows, column)?;
    if means.len() < 3 {
        bail!(
            "scaling fit needs at least 3 distinct sizes, got {} in {}",
            means.len(),
            csv.display()
        );
    }
    let mut points = Vec::with_capacity(means.len());
    for &(n, mean) in &means {
        if mean <= 0.0 {
            bail!("column {column:?} has nonpositive mean {mean} at n={n}; cannot take logs");
        }
        points.push(((n as f64).log2(), mean.log2()));
    }
    let fit = least_squares(&points)?;
    Ok(ScalingFit { fit, means, column: column.to_string() })
}
