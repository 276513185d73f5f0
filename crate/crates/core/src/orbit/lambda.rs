//! Forcing extraction along an observed track.

use crate::dae::{consistent_init, trap_constrained_step, GravityModel};
use crate::error::{Error, Result};
use crate::io::{data_lines, fmt17, parse_f64, split_row};
use crate::scalar::Real;
use crate::vec3::Vec3;

pub const LAMBDA_HEADER: &str = "t_s,x_m,y_m,z_m,lam_x,lam_y,lam_z";

/// Uniformly sampled positions with forward-difference velocities.
#[derive(Clone, Debug, PartialEq)]
pub struct InterpolatedTrack<T> {
    pub t0: T,
    pub dt: T,
    pub positions: Vec<Vec3<T>>,
    /// `(x[k+1] − x[k]) / dt`; one shorter than `positions`.
    pub velocities: Vec<Vec3<T>>,
}

impl<T: Real> InterpolatedTrack<T> {
    pub fn from_positions(t0: T, dt: T, positions: Vec<Vec3<T>>) -> Result<Self> {
        if !(dt > T::zero()) {
            return Err(Error::InvalidParameter(format!("track step must be positive, got {dt}")));
        }
        let inv = T::one() / dt;
        let velocities = positions
            .windows(2)
            .map(|w| {
                if dt == T::one() {
                    w[1] - w[0]
                } else {
                    (w[1] - w[0]) * inv
                }
            })
            .collect();
        Ok(InterpolatedTrack {
            t0,
            dt,
            positions,
            velocities,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn time(&self, k: usize) -> T {
        self.t0 + self.dt * T::from_usize_lossy(k)
    }
}

/// One forcing sample tagged with the position it was recovered at.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaRecord<T> {
    pub t: T,
    pub position: Vec3<T>,
    pub lambda: Vec3<T>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LambdaDataset<T> {
    pub records: Vec<LambdaRecord<T>>,
}

/// Runs the constrained scheme along `track` and collects the forcing
/// recovered at every step.
///
/// The scheme starts at the second track sample; records cover samples
/// `2 ..= len − 2`, the last one whose velocity is known.
pub fn build_lambda_dataset<T: Real>(
    track: &InterpolatedTrack<T>,
    gravity: &GravityModel<T>,
) -> Result<LambdaDataset<T>> {
    let n = track.len();
    if n < 4 {
        return Err(Error::InsufficientData {
            what: "track samples",
            needed: 4,
            got: n,
        });
    }
    let x = &track.positions;
    let v = &track.velocities;
    let mut state = consistent_init(track.time(1), [x[0], x[1], x[2]], v[1], track.dt)
        .map_err(|e| e.at_epoch(track.time(1).to_f64_lossy()))?;
    let mut records = Vec::with_capacity(n - 3);
    for k in 1..n - 2 {
        let (next, sample) = trap_constrained_step(&state, v[k + 1], track.dt, gravity)
            .map_err(|e| e.at_epoch(track.time(k + 1).to_f64_lossy()))?;
        records.push(LambdaRecord {
            t: sample.t,
            position: next.x,
            lambda: sample.lambda,
        });
        state = next;
    }
    Ok(LambdaDataset { records })
}

impl<T: Real> LambdaDataset<T> {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn positions(&self) -> Vec<Vec3<T>> {
        self.records.iter().map(|r| r.position).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(64 + self.records.len() * 170);
        s.push_str(LAMBDA_HEADER);
        s.push('\n');
        for r in &self.records {
            let row = [r.t.to_f64_lossy()]
                .into_iter()
                .chain(r.position.to_f64())
                .chain(r.lambda.to_f64())
                .map(fmt17)
                .collect::<Vec<_>>()
                .join(",");
            s.push_str(&row);
            s.push('\n');
        }
        s
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = data_lines(text);
        let (hno, header) = lines
            .next()
            .ok_or_else(|| Error::format(1, "empty forcing dataset"))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols.join(",") != LAMBDA_HEADER {
            return Err(Error::format(hno, format!("expected header {LAMBDA_HEADER:?}")));
        }
        let mut records = Vec::new();
        for (no, line) in lines {
            let f = split_row(line, no, 7)?;
            let mut v = [0.0; 7];
            for (slot, field) in v.iter_mut().zip(&f) {
                *slot = parse_f64(field, no, "value")?;
            }
            records.push(LambdaRecord {
                t: T::lit(v[0]),
                position: Vec3::from_f64([v[1], v[2], v[3]]),
                lambda: Vec3::from_f64([v[4], v[5], v[6]]),
            });
        }
        if records.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(LambdaDataset { records })
    }
}
