//! Cutoff-convergence bookkeeping for quantities computed on truncated states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub cutoff: usize,
    pub tail_mass: f64,
    pub value: f64,
    /// `|value - previous value|`; absent on the first row.
    pub difference: Option<f64>,
}

/// One quantity evaluated over an ascending list of cutoffs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSeries {
    pub name: String,
    pub tolerance: f64,
    pub rows: Vec<ConvergenceRow>,
    /// Smallest cutoff from which every later successive difference is below
    /// `tolerance`.
    pub converged_at: Option<usize>,
    /// Two-point extrapolation of the last two rows to zero tail mass.
    pub extrapolated: Option<f64>,
}

impl ConvergenceSeries {
    /// `points` are `(cutoff, tail_mass, value)` with strictly ascending cutoffs.
    pub fn new(name: impl Into<String>, tolerance: f64, points: &[(usize, f64, f64)]) -> Result<Self> {
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(Error::Config(format!("convergence tolerance must be positive, got {tolerance}")));
        }
        if points.is_empty() {
            return Err(Error::Config("convergence study needs at least one cutoff".into()));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Config("cutoffs must be strictly ascending".into()));
        }
        let rows: Vec<ConvergenceRow> = points
            .iter()
            .enumerate()
            .map(|(k, &(cutoff, tail_mass, value))| ConvergenceRow {
                cutoff,
                tail_mass,
                value,
                difference: (k > 0).then(|| (value - points[k - 1].2).abs()),
            })
            .collect();

        // With zero tail mass at the first cutoff nothing further can change.
        let converged_at = if rows[0].tail_mass == 0.0 && rows.iter().all(|r| r.difference.map_or(true, |d| d < tolerance)) {
            Some(rows[0].cutoff)
        } else {
            let mut start = None;
            for k in (1..rows.len()).rev() {
                if rows[k].difference.unwrap() < tolerance {
                    start = Some(rows[k - 1].cutoff);
                } else {
                    break;
                }
            }
            start
        };

        let extrapolated = match rows.as_slice() {
            [.., a, b] => extrapolate_in_tail(a.value, a.tail_mass, b.value, b.tail_mass),
            [only] if only.tail_mass == 0.0 => Some(only.value),
            _ => None,
        };

        Ok(ConvergenceSeries {
            name: name.into(),
            tolerance,
            rows,
            converged_at,
            extrapolated,
        })
    }

    pub fn converged(&self) -> bool {
        self.converged_at.is_some()
    }

    pub fn last(&self) -> &ConvergenceRow {
        self.rows.last().expect("non-empty by construction")
    }

    /// The cutoff at which an unconverged series was given up.
    pub fn abandoned_cutoff(&self) -> Option<usize> {
        (!self.converged()).then(|| self.last().cutoff)
    }
}

/// Evaluates `f(cutoff) -> (tail_mass, value)` at each cutoff.
pub fn study(
    name: impl Into<String>,
    cutoffs: &[usize],
    tolerance: f64,
    f: impl Fn(usize) -> Result<(f64, f64)>,
) -> Result<ConvergenceSeries> {
    let points = cutoffs
        .iter()
        .map(|&n| f(n).map(|(tail, v)| (n, tail, v)))
        .collect::<Result<Vec<_>>>()?;
    ConvergenceSeries::new(name, tolerance, &points)
}

/// Linear extrapolation in tail mass to zero:
/// `v₂ + (v₂ - v₁) · τ₂ / (τ₁ - τ₂)`.
///
/// Returns `v₂` when `τ₂ = 0` and `None` when the tails do not decrease.
pub fn extrapolate_in_tail(v1: f64, tail1: f64, v2: f64, tail2: f64) -> Option<f64> {
    if tail2 == 0.0 {
        return Some(v2);
    }
    if tail1.is_nan() || tail1 <= tail2 {
        return None;
    }
    Some(v2 + (v2 - v1) * tail2 / (tail1 - tail2))
}
