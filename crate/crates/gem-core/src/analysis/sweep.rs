use rayon::prelude::*;

use crate::error::Result;

/// One row of a parameter sweep; failures are kept per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<V, R> {
    pub value: V,
    pub outcome: std::result::Result<R, String>,
}

/// Runs `run` for every value in parallel. Rows come back in input order.
pub fn sweep<V, R>(values: &[V], run: impl Fn(&V) -> Result<R> + Sync) -> Vec<SweepRow<V, R>>
where
    V: Clone + Send + Sync,
    R: Send,
{
    values
        .par_iter()
        .map(|v| SweepRow { value: v.clone(), outcome: run(v).map_err(|e| e.to_string()) })
        .collect()
}

/// True when the successful outcomes, in row order, are monotone under `key`.
pub fn is_monotone<V, R>(rows: &[SweepRow<V, R>], key: impl Fn(&R) -> f64, increasing: bool) -> bool {
    let vals: Vec<f64> = rows.iter().filter_map(|r| r.outcome.as_ref().ok().map(&key)).collect();
    vals.windows(2).all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
}
