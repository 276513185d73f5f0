//! Per-node, per-step regression rows pairing recovered sources with
//! spatial-derivative regressors.

use crate::heat::constrained::LambdaSeries;
use crate::heat::grid::RodGrid;
use crate::heat::operators::spatial_derivatives;
use crate::io::fmt17;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct RegressionRows<T> {
    pub t: Vec<T>,
    pub node: Vec<usize>,
    pub x: Vec<T>,
    pub u: Vec<T>,
    pub d1: Vec<T>,
    pub d2: Vec<T>,
    pub lambda: Vec<T>,
}

impl<T: Real> RegressionRows<T> {
    pub fn new() -> Self {
        RegressionRows {
            t: Vec::new(),
            node: Vec::new(),
            x: Vec::new(),
            u: Vec::new(),
            d1: Vec::new(),
            d2: Vec::new(),
            lambda: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    /// Rows at the given indices, in order.
    pub fn select(&self, keep: &[usize]) -> Self {
        let pick = |v: &[T]| keep.iter().map(|&i| v[i]).collect();
        RegressionRows {
            t: pick(&self.t),
            node: keep.iter().map(|&i| self.node[i]).collect(),
            x: pick(&self.x),
            u: pick(&self.u),
            d1: pick(&self.d1),
            d2: pick(&self.d2),
            lambda: pick(&self.lambda),
        }
    }
}

/// One row per interior node and step, with regressors evaluated on the
/// constrained temperature at that step.
pub fn regression_rows<T: Real>(grid: &RodGrid<T>, series: &LambdaSeries<T>, time_offset: T) -> RegressionRows<T> {
    let mut rows = RegressionRows::new();
    for (j, (u, lambda)) in series.u.iter().zip(&series.lambda).enumerate() {
        let t = series.time(j) + time_offset;
        for d in spatial_derivatives(grid, u) {
            rows.t.push(t);
            rows.node.push(d.node);
            rows.x.push(grid.nodes()[d.node]);
            rows.u.push(u[d.node]);
            rows.d1.push(d.first);
            rows.d2.push(d.second);
            rows.lambda.push(lambda[d.node]);
        }
    }
    rows
}

pub const LAMBDA_CSV_HEADER: &str = "t_s,node_index,x_m,u_K,D1,D2,lambda";

pub fn lambda_csv(rows: &RegressionRows<f64>) -> String {
    let mut s = String::from(LAMBDA_CSV_HEADER);
    s.push('\n');
    for r in 0..rows.len() {
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt17(rows.t[r]),
            rows.node[r],
            fmt17(rows.x[r]),
            fmt17(rows.u[r]),
            fmt17(rows.d1[r]),
            fmt17(rows.d2[r]),
            fmt17(rows.lambda[r])
        ));
    }
    s
}
