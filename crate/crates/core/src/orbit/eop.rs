//! Terrestrial-to-celestial rotation series.
//!
//! CSV layout: header `epoch_s,r11,r12,r13,r21,r22,r23,r31,r32,r33`, one row per
//! epoch. An optional leading comment `# origin=YYYY-MM-DDTHH:MM:SS` fixes the
//! instant `epoch_s` counts from; without it, `epoch_s` counts from the first
//! epoch of the ephemeris being rotated. Each matrix maps terrestrial
//! coordinates to celestial ones.

use std::collections::BTreeMap;

use chrono::NaiveDateTime;

use crate::error::{Error, Result};
use crate::io::{data_lines, fmt17, parse_f64, split_row};
use crate::orbit::sp3::{seconds_between, Sp3Ephemeris};
use crate::vec3::Mat3;

pub const EOP_HEADER: &str = "epoch_s,r11,r12,r13,r21,r22,r23,r31,r32,r33";

/// Epochs are matched to the nearest microsecond.
const EPOCH_KEY_SCALE: f64 = 1e6;
const ORTHONORMALITY_TOL: f64 = 1e-9;
const ORIGIN_TAG: &str = "# origin=";
const ORIGIN_FORMAT: &str = "%Y-%m-%dT%H:%M:%S%.f";

fn key(t: f64) -> i64 {
    (t * EPOCH_KEY_SCALE).round() as i64
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RotationSeries {
    rotations: BTreeMap<i64, (f64, Mat3<f64>)>,
    /// Instant that `epoch_s` counts from, when declared.
    pub origin: Option<NaiveDateTime>,
}

/// Checks `RᵀR = I` and `det R = +1` to within 1e-9.
pub fn validate_rotation(epoch: f64, r: &Mat3<f64>) -> Result<()> {
    if r.0.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidRotation {
            epoch,
            msg: "non-finite entry".into(),
        });
    }
    let rtr = r.transpose().mul_mat(r);
    let id = Mat3::<f64>::identity();
    for i in 0..3 {
        for j in 0..3 {
            let dev = (rtr.0[i][j] - id.0[i][j]).abs();
            if dev > ORTHONORMALITY_TOL {
                return Err(Error::InvalidRotation {
                    epoch,
                    msg: format!("not orthonormal (|RᵀR − I| = {dev:e})"),
                });
            }
        }
    }
    let det = r.determinant();
    if (det - 1.0).abs() > ORTHONORMALITY_TOL {
        return Err(Error::InvalidRotation {
            epoch,
            msg: format!("determinant {det} is not +1"),
        });
    }
    Ok(())
}

impl RotationSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, epoch: f64, r: Mat3<f64>) -> Result<()> {
        validate_rotation(epoch, &r)?;
        self.rotations.insert(key(epoch), (epoch, r));
        Ok(())
    }

    /// Identity rotation at every epoch, for data already in a celestial frame.
    pub fn identity(epochs: &[f64]) -> Self {
        let rotations = epochs
            .iter()
            .map(|&t| (key(t), (t, Mat3::identity())))
            .collect();
        RotationSeries {
            rotations,
            origin: None,
        }
    }

    pub fn with_origin(mut self, origin: NaiveDateTime) -> Self {
        self.origin = Some(origin);
        self
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    pub fn get(&self, epoch: f64) -> Result<&Mat3<f64>> {
        self.rotations
            .get(&key(epoch))
            .map(|(_, r)| r)
            .ok_or(Error::MissingRotation { epoch })
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut origin = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(v) = line.strip_prefix(ORIGIN_TAG) {
                let o = NaiveDateTime::parse_from_str(v.trim(), ORIGIN_FORMAT)
                    .map_err(|e| Error::format(i + 1, format!("bad origin {v:?}: {e}")))?;
                origin = Some(o);
            } else if !line.is_empty() && !line.starts_with('#') {
                break;
            }
        }
        let mut lines = data_lines(text);
        let (hno, header) = lines
            .next()
            .ok_or_else(|| Error::format(1, "empty rotation file"))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols.join(",") != EOP_HEADER {
            return Err(Error::format(hno, format!("expected header {EOP_HEADER:?}")));
        }
        let mut out = RotationSeries::new();
        out.origin = origin;
        for (no, line) in lines {
            let f = split_row(line, no, 10)?;
            let t = parse_f64(f[0], no, "epoch_s")?;
            let mut m = [[0.0; 3]; 3];
            for (k, field) in f[1..].iter().enumerate() {
                m[k / 3][k % 3] = parse_f64(field, no, "rotation entry")?;
            }
            out.insert(t, Mat3(m))
                .map_err(|e| Error::format(no, e.to_string()))?;
        }
        Ok(out)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        if let Some(o) = self.origin {
            s.push_str(&format!("{ORIGIN_TAG}{}\n", o.format(ORIGIN_FORMAT)));
        }
        s.push_str(EOP_HEADER);
        s.push('\n');
        for (t, r) in self.rotations.values() {
            s.push_str(&fmt17(*t));
            for v in r.0.iter().flatten() {
                s.push(',');
                s.push_str(&fmt17(*v));
            }
            s.push('\n');
        }
        s
    }

    /// Rotates `eph` into the celestial frame, aligning epochs through the
    /// declared origin when there is one.
    pub fn rotate(&self, eph: &Sp3Ephemeris) -> Result<Sp3Ephemeris> {
        let offset = self.origin.map_or(0.0, |o| seconds_between(o, eph.origin));
        self.rotate_to_icrf(eph, offset)
    }

    /// Rotates every sample of `eph` into the celestial frame. `epoch_offset`
    /// is added to the ephemeris epochs before lookup.
    pub fn rotate_to_icrf(&self, eph: &Sp3Ephemeris, epoch_offset: f64) -> Result<Sp3Ephemeris> {
        let positions = eph
            .epochs
            .iter()
            .zip(&eph.positions)
            .map(|(&t, &x)| Ok(self.get(t + epoch_offset)?.mul_vec(x)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Sp3Ephemeris {
            positions,
            ..eph.clone()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec3::Vec3;
    use chrono::NaiveDate;

    fn eph() -> Sp3Ephemeris {
        Sp3Ephemeris {
            satellite_id: "C05".into(),
            origin: NaiveDate::from_ymd_opt(2015, 12, 10).unwrap().and_hms_opt(0, 0, 0).unwrap(),
            epochs: vec![0.0, 900.0],
            positions: vec![Vec3::new(4.2e7, 1.0, -2.0), Vec3::new(3.0e7, 2.9e7, 5.0)],
        }
    }

    #[test]
    fn identity_is_bitwise_noop() {
        let e = eph();
        let r = RotationSeries::identity(&e.epochs);
        assert_eq!(r.rotate_to_icrf(&e, 0.0).unwrap(), e);
    }

    #[test]
    fn missing_epoch_is_reported() {
        let e = eph();
        let r = RotationSeries::identity(&[0.0]);
        assert!(matches!(
            r.rotate_to_icrf(&e, 0.0),
            Err(Error::MissingRotation { epoch }) if epoch == 900.0
        ));
    }

    #[test]
    fn rejects_non_orthonormal() {
        let mut m = Mat3::<f64>::identity();
        m.0[0][1] = 1e-6;
        assert!(matches!(RotationSeries::new().insert(0.0, m), Err(Error::InvalidRotation { .. })));
        let reflect = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]);
        assert!(RotationSeries::new().insert(0.0, reflect).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let mut r = RotationSeries::new();
        r.insert(0.0, Mat3::rotation_z(0.3)).unwrap();
        r.insert(900.0, Mat3::rotation_x(-1.1).mul_mat(&Mat3::rotation_z(2.0))).unwrap();
        let back = RotationSeries::parse_csv(&r.to_csv()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn declared_origin_aligns_later_files() {
        let e = eph();
        let day_before = e.origin - chrono::Duration::days(1);
        let mut r = RotationSeries::new().with_origin(day_before);
        r.insert(86_400.0, Mat3::rotation_z(std::f64::consts::FRAC_PI_2)).unwrap();
        r.insert(87_300.0, Mat3::identity()).unwrap();
        let text = r.to_csv();
        assert!(text.starts_with("# origin=2015-12-09T00:00:00\n"));
        let back = RotationSeries::parse_csv(&text).unwrap();
        assert_eq!(back, r);
        let out = back.rotate(&e).unwrap();
        assert!((out.positions[0][1] - 4.2e7).abs() < 1e-6);
        assert_eq!(out.positions[1], e.positions[1]);
    }

    #[test]
    fn bad_header_is_format_error() {
        assert!(matches!(RotationSeries::parse_csv("t,r11\n"), Err(Error::Format { line: 1, .. })));
    }
}
