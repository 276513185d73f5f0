use crate::error::Result;
use crate::io::fmt17;
use crate::scalar::Real;
use crate::stats::ols::{design_with_intercept, fit_ols};

#[derive(Clone, Debug, PartialEq)]
pub struct SelectionRow<T> {
    pub regressors: Vec<String>,
    pub r2: T,
    pub adj_r2: T,
}

/// Non-empty subsets of `0..n` ordered by size, then lexicographically.
pub fn ordered_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut subsets: Vec<Vec<usize>> = (1u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    subsets
}

/// Fits every non-empty subset of the named regressors, each with an intercept.
pub fn model_selection_table<T: Real>(regressors: &[(&str, &[T])], y: &[T]) -> Result<Vec<SelectionRow<T>>> {
    ordered_subsets(regressors.len())
        .into_iter()
        .map(|subset| {
            let cols: Vec<&[T]> = subset.iter().map(|&i| regressors[i].1).collect();
            let fit = fit_ols(&design_with_intercept(&cols), y)?;
            Ok(SelectionRow {
                regressors: subset.iter().map(|&i| regressors[i].0.to_string()).collect(),
                r2: fit.r2,
                adj_r2: fit.adj_r2,
            })
        })
        .collect()
}

pub const SELECTION_HEADER: &str = "regressors,r2,adj_r2";

pub fn selection_csv<T: Real>(rows: &[SelectionRow<T>]) -> String {
    let mut s = String::from(SELECTION_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{}\n",
            r.regressors.join("+"),
            fmt17(r.r2.to_f64_lossy()),
            fmt17(r.adj_r2.to_f64_lossy())
        ));
    }
    s
}
