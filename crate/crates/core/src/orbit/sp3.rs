//! SP3-c / SP3-d precise ephemeris reading and writing.
//!
//! Only the two leading header lines, epoch lines (`*`) and position records
//! (`P`) are interpreted. Coordinates are read in kilometres and returned in
//! metres; clock fields, velocity and accuracy records are ignored.

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, Timelike};

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Positions of one satellite from one or more SP3 files.
#[derive(Clone, Debug, PartialEq)]
pub struct Sp3Ephemeris {
    pub satellite_id: String,
    /// Time system epoch of the first sample (GPS time in IGS products).
    pub origin: NaiveDateTime,
    /// Seconds since `origin`, strictly increasing.
    pub epochs: Vec<f64>,
    /// Metres, in the frame of the product (ITRF for IGS files).
    pub positions: Vec<Vec3<f64>>,
}

impl Sp3Ephemeris {
    pub fn len(&self) -> usize {
        self.epochs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epochs.is_empty()
    }

    /// Seconds between `origin` and `other_origin`.
    pub fn offset_to(&self, other_origin: NaiveDateTime) -> f64 {
        seconds_between(other_origin, self.origin)
    }

    /// Re-expresses epochs as seconds since `new_origin`.
    pub fn rebased(mut self, new_origin: NaiveDateTime) -> Self {
        let shift = seconds_between(new_origin, self.origin);
        for t in &mut self.epochs {
            *t += shift;
        }
        self.origin = new_origin;
        self
    }

    /// Concatenates consecutive files for the same satellite. Exact duplicate
    /// epochs at file seams are merged; any other overlap is an error.
    pub fn concat(parts: Vec<Sp3Ephemeris>) -> Result<Sp3Ephemeris> {
        let mut iter = parts.into_iter();
        let mut out = iter.next().ok_or(Error::InsufficientData {
            what: "SP3 files",
            needed: 1,
            got: 0,
        })?;
        for part in iter {
            if part.satellite_id != out.satellite_id {
                return Err(Error::InvalidParameter(format!(
                    "cannot concatenate satellite {} with {}",
                    out.satellite_id, part.satellite_id
                )));
            }
            let part = part.rebased(out.origin);
            for (t, x) in part.epochs.into_iter().zip(part.positions) {
                let last = *out.epochs.last().expect("non-empty ephemeris");
                if (t - last).abs() < 1e-6 {
                    let prev = *out.positions.last().expect("non-empty ephemeris");
                    if (prev - x).max_abs() > 1e-6 {
                        return Err(Error::InvalidObservation(format!(
                            "conflicting positions for duplicated epoch {t} s"
                        )));
                    }
                    continue;
                }
                if t < last {
                    return Err(Error::InvalidObservation(format!(
                        "SP3 files overlap or are out of order at epoch {t} s"
                    )));
                }
                out.epochs.push(t);
                out.positions.push(x);
            }
        }
        Ok(out)
    }
}

pub fn seconds_between(from: NaiveDateTime, to: NaiveDateTime) -> f64 {
    let d = to - from;
    let secs = d.num_seconds();
    let nanos = (d - Duration::seconds(secs))
        .num_nanoseconds()
        .unwrap_or(0);
    secs as f64 + nanos as f64 * 1e-9
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Sp3Parse {
        line,
        msg: msg.into(),
    }
}

fn normalize_id(id: &str) -> String {
    let id = id.trim_end();
    // SP3-a style GPS ids use a blank system letter
    if let Some(rest) = id.strip_prefix(' ') {
        format!("G{:0>2}", rest.trim())
    } else {
        id.to_string()
    }
}

fn parse_epoch_line(line: &str, line_no: usize) -> Result<NaiveDateTime> {
    let fields: Vec<&str> = line[1..].split_whitespace().collect();
    if fields.len() < 6 {
        return Err(parse_err(line_no, "epoch line needs six fields"));
    }
    let int = |s: &str, what: &str| -> Result<u32> {
        s.parse::<u32>()
            .map_err(|_| parse_err(line_no, format!("bad {what} {s:?}")))
    };
    let year = int(fields[0], "year")? as i32;
    let (month, day) = (int(fields[1], "month")?, int(fields[2], "day")?);
    let (hour, minute) = (int(fields[3], "hour")?, int(fields[4], "minute")?);
    let sec: f64 = fields[5]
        .parse()
        .map_err(|_| parse_err(line_no, format!("bad seconds {:?}", fields[5])))?;
    if !(0.0..61.0).contains(&sec) {
        return Err(parse_err(line_no, format!("seconds out of range: {sec}")));
    }
    let whole = sec.floor();
    let nanos = ((sec - whole) * 1e9).round() as i64;
    NaiveDate::from_ymd_opt(year, month, day)
        .and_then(|d| d.and_hms_opt(hour, minute, 0))
        .map(|dt| dt + Duration::seconds(whole as i64) + Duration::nanoseconds(nanos))
        .ok_or_else(|| parse_err(line_no, "invalid calendar epoch"))
}

fn coord(line: &str, range: std::ops::Range<usize>, line_no: usize) -> Result<f64> {
    let field = line
        .get(range.clone())
        .ok_or_else(|| parse_err(line_no, "position record too short"))?;
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| parse_err(line_no, format!("bad coordinate {field:?}")))
}

/// Parses SP3 text and extracts the positions of `satellite_id`.
pub fn parse_sp3(text: &str, satellite_id: &str) -> Result<Sp3Ephemeris> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));

    let (n1, first) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut chars = first.chars();
    if chars.next() != Some('#') {
        return Err(parse_err(n1, "first header line must start with '#'"));
    }
    match chars.next() {
        Some('c') | Some('d') => {}
        other => {
            return Err(parse_err(
                n1,
                format!("unsupported SP3 version {other:?} (expected 'c' or 'd')"),
            ))
        }
    }
    let (n2, second) = lines.next().ok_or_else(|| parse_err(2, "missing second header line"))?;
    if !second.starts_with("##") {
        return Err(parse_err(n2, "second header line must start with '##'"));
    }

    let want = normalize_id(satellite_id);
    let mut origin: Option<NaiveDateTime> = None;
    let mut current: Option<(usize, f64)> = None;
    let mut have_current = false;
    let mut epochs = Vec::new();
    let mut positions = Vec::new();
    let mut first_gap: Option<(usize, f64)> = None;

    for (no, line) in lines {
        if line.starts_with('*') {
            if let (Some(cur), false) = (current, have_current) {
                first_gap.get_or_insert(cur);
            }
            let dt = parse_epoch_line(line, no)?;
            let origin = *origin.get_or_insert(dt);
            let t = seconds_between(origin, dt);
            if let Some((_, prev)) = current {
                if t <= prev {
                    return Err(parse_err(no, format!("non-monotone epoch {dt}")));
                }
            }
            current = Some((no, t));
            have_current = false;
        } else if line.starts_with('P') {
            let Some((_, t)) = current else {
                return Err(parse_err(no, "position record before first epoch"));
            };
            let id = line
                .get(1..4)
                .ok_or_else(|| parse_err(no, "position record too short"))?;
            if normalize_id(id) != want {
                continue;
            }
            if have_current {
                return Err(parse_err(no, format!("duplicate record for {want}")));
            }
            let p = Vec3::new(
                coord(line, 4..18, no)?,
                coord(line, 18..32, no)?,
                coord(line, 32..46, no)?,
            );
            if p.0.iter().all(|&c| c == 0.0) {
                return Err(parse_err(no, format!("missing position for {want} (zero record)")));
            }
            epochs.push(t);
            positions.push(p * 1000.0);
            have_current = true;
        } else if line.trim() == "EOF" {
            break;
        }
    }
    if let (Some(cur), false) = (current, have_current) {
        first_gap.get_or_insert(cur);
    }
    if epochs.is_empty() {
        return Err(Error::UnknownSatellite(want));
    }
    if let Some((eno, t)) = first_gap {
        return Err(parse_err(eno, format!("epoch {t} s has no position record for {want}")));
    }
    Ok(Sp3Ephemeris {
        satellite_id: want,
        origin: origin.expect("epochs imply an origin"),
        epochs,
        positions,
    })
}

/// Satellite ids with position records in the first epoch block, in file order.
pub fn list_satellites(text: &str) -> Vec<String> {
    let mut ids = Vec::new();
    let mut blocks = 0;
    for line in text.lines() {
        if line.starts_with('*') {
            blocks += 1;
            if blocks > 1 {
                break;
            }
        } else if blocks == 1 && line.starts_with('P') {
            if let Some(id) = line.get(1..4) {
                ids.push(normalize_id(id));
            }
        }
    }
    ids
}

const GPS_EPOCH: (i32, u32, u32) = (1980, 1, 6);
const MJD_EPOCH: (i32, u32, u32) = (1858, 11, 17);

fn midnight(d: (i32, u32, u32)) -> NaiveDateTime {
    NaiveDate::from_ymd_opt(d.0, d.1, d.2)
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .expect("valid constant date")
}

fn epoch_fields(dt: NaiveDateTime) -> String {
    let sec = dt.second() as f64 + dt.nanosecond() as f64 * 1e-9;
    format!(
        "{:4} {:2} {:2} {:2} {:2} {:11.8}",
        dt.year(),
        dt.month(),
        dt.day(),
        dt.hour(),
        dt.minute(),
        sec
    )
}

/// Writes an SP3-c position file for one satellite.
///
/// `epochs` are seconds since `origin`; positions are metres and are printed
/// in kilometres with six decimals, the format's fixed resolution.
pub fn write_sp3(
    satellite_id: &str,
    origin: NaiveDateTime,
    epochs: &[f64],
    positions: &[Vec3<f64>],
    agency: &str,
) -> String {
    assert_eq!(epochs.len(), positions.len());
    let to_dt = |t: f64| origin + Duration::nanoseconds((t * 1e9).round() as i64);
    let start = to_dt(epochs.first().copied().unwrap_or(0.0));
    let interval = if epochs.len() > 1 { epochs[1] - epochs[0] } else { 0.0 };
    let since_gps = seconds_between(midnight(GPS_EPOCH), start);
    let week = (since_gps / 604_800.0).floor();
    let sow = since_gps - week * 604_800.0;
    let since_mjd = seconds_between(midnight(MJD_EPOCH), start) / 86_400.0;
    let mjd = since_mjd.floor();

    let mut out = String::new();
    out.push_str(&format!(
        "#cP{} {:7} ORBIT IGb08 FIT  {:<4}\n",
        epoch_fields(start),
        epochs.len(),
        agency
    ));
    out.push_str(&format!(
        "## {:4} {:15.8} {:14.8} {:5} {:15.13}\n",
        week as i64,
        sow,
        interval,
        mjd as i64,
        since_mjd - mjd
    ));
    out.push_str(&format!("+    1   {:<3}{}\n", satellite_id, "  0".repeat(16)));
    out.push_str(&format!("++         {}\n", "  0".repeat(17)));
    out.push_str("%c M  cc GPS ccc cccc cccc cccc cccc ccccc ccccc ccccc ccccc\n");
    out.push_str("%f  1.2500000  1.025000000  0.00000000000  0.000000000000000\n");
    out.push_str("/* synthetic ephemeris\n");
    for (&t, p) in epochs.iter().zip(positions) {
        out.push_str(&format!("*  {}\n", epoch_fields(to_dt(t))));
        let km = *p * 1e-3;
        out.push_str(&format!(
            "P{:<3}{:14.6}{:14.6}{:14.6}{:14.6}\n",
            satellite_id, km[0], km[1], km[2], 999_999.999_999
        ));
    }
    out.push_str("EOF\n");
    out
}
