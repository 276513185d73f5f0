//! Comparison of predicted positions against a reference ephemeris.

use crate::error::{Error, Result};
use crate::io::fmt17;
use crate::orbit::predict::Trajectory;
use crate::vec3::Vec3;

pub const REPORT_HEADER: &str = "t_s,x,y,z,ref_x,ref_y,ref_z,err_x,err_y,err_z,d";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorRow {
    pub t: f64,
    pub predicted: Vec3<f64>,
    pub reference: Vec3<f64>,
    /// Per-axis absolute difference.
    pub abs_error: Vec3<f64>,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PredictionReport {
    pub rows: Vec<ErrorRow>,
    /// Row two hours after the start of the prediction, when present.
    pub at_two_hours: Option<ErrorRow>,
    pub at_end: ErrorRow,
}

pub const TWO_HOURS_S: f64 = 7200.0;

/// Evaluates `prediction` at each reference epoch it covers.
///
/// Reference epochs must fall on the 1 s output lattice of the prediction.
pub fn error_report(
    prediction: &Trajectory<f64>,
    ref_epochs: &[f64],
    ref_positions: &[Vec3<f64>],
) -> Result<PredictionReport> {
    let t0 = prediction.t0;
    let t_end = prediction.time(prediction.positions.len().saturating_sub(1));
    let mut rows = Vec::new();
    for (&t, &r) in ref_epochs.iter().zip(ref_positions) {
        if t < t0 - 1e-6 || t > t_end + 1e-6 {
            continue;
        }
        let k = (t - t0).round();
        if (t - t0 - k).abs() > 1e-6 {
            return Err(Error::Alignment(format!(
                "reference epoch {t} s is not on the prediction's 1 s grid"
            )));
        }
        let p = prediction.positions[k as usize];
        let diff = p - r;
        rows.push(ErrorRow {
            t,
            predicted: p,
            reference: r,
            abs_error: diff.map(f64::abs),
            distance: diff.norm(),
        });
    }
    let at_end = *rows.last().ok_or_else(|| {
        Error::Alignment("no reference epoch falls within the prediction span".into())
    })?;
    let at_two_hours = rows
        .iter()
        .find(|r| (r.t - t0 - TWO_HOURS_S).abs() < 1e-6)
        .copied();
    Ok(PredictionReport {
        rows,
        at_two_hours,
        at_end,
    })
}

impl PredictionReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(REPORT_HEADER);
        s.push('\n');
        for r in &self.rows {
            let fields: Vec<String> = [r.t]
                .into_iter()
                .chain(r.predicted.0)
                .chain(r.reference.0)
                .chain(r.abs_error.0)
                .chain([r.distance])
                .map(fmt17)
                .collect();
            s.push_str(&fields.join(","));
            s.push('\n');
        }
        s
    }

    /// Human-readable summary lines.
    pub fn summary(&self) -> String {
        let line = |label: &str, r: &ErrorRow| {
            format!(
                "{label}: t={} s |dx|={:.3} |dy|={:.3} |dz|={:.3} d={:.3} m\n",
                r.t, r.abs_error[0], r.abs_error[1], r.abs_error[2], r.distance
            )
        };
        let mut s = String::new();
        if let Some(r) = &self.at_two_hours {
            s.push_str(&line("2 h", r));
        }
        s.push_str(&line("end", &self.at_end));
        s
    }
}
