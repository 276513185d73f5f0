//! Rod geometry, material constants and measured temperature series.

use crate::error::{Error, Result};
use crate::io::{data_lines, fmt17, parse_f64};
use crate::scalar::Real;

/// Sanity band for measured temperatures, kelvin.
pub const TEMPERATURE_BAND: (f64, f64) = (200.0, 400.0);

/// Measurement nodes including both ends of the rod.
#[derive(Clone, Debug, PartialEq)]
pub struct RodGrid<T> {
    nodes: Vec<T>,
    pub alpha: T,
    pub u0: T,
    pub un: T,
}

impl<T: Real> RodGrid<T> {
    pub fn new(nodes: Vec<T>, alpha: T, u0: T, un: T) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "a rod grid needs at least one interior node, got {} nodes",
                nodes.len()
            )));
        }
        if nodes[0] != T::zero() {
            return Err(Error::InvalidParameter("first node must be at x = 0".into()));
        }
        if let Some(i) = nodes.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(format!(
                "node positions must increase strictly (nodes {i} and {})",
                i + 1
            )));
        }
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("diffusivity must be positive, got {alpha}")));
        }
        if !u0.is_finite() || !un.is_finite() {
            return Err(Error::InvalidParameter("boundary temperatures must be finite".into()));
        }
        Ok(RodGrid { nodes, alpha, u0, un })
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    /// Number of nodes, boundaries included.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn length(&self) -> T {
        *self.nodes.last().expect("grid has nodes")
    }

    pub fn interior(&self) -> std::ops::Range<usize> {
        1..self.nodes.len() - 1
    }

    /// Spacing to the right neighbour of interior node `i`.
    pub fn h_right(&self, i: usize) -> T {
        self.nodes[i + 1] - self.nodes[i]
    }

    /// Spacing to the left neighbour of interior node `i`.
    pub fn h_left(&self, i: usize) -> T {
        self.nodes[i] - self.nodes[i - 1]
    }

    /// Straight-line profile between the boundary temperatures.
    pub fn steady_profile(&self) -> Vec<T> {
        let l = self.length();
        self.nodes
            .iter()
            .map(|&x| self.u0 + (self.un - self.u0) * (x / l))
            .collect()
    }

    pub fn with_boundaries(&self, u: &mut [T]) {
        u[0] = self.u0;
        let n = u.len() - 1;
        u[n] = self.un;
    }
}

/// Temperatures on a uniform time lattice starting at `t = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct TemperatureSeries<T> {
    pub dt: T,
    /// Time of the first sample in the source file, removed from the lattice.
    pub time_offset: T,
    /// One vector per time with every node, boundaries included.
    pub u: Vec<Vec<T>>,
}

impl<T: Real> TemperatureSeries<T> {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn time(&self, k: usize) -> T {
        self.dt * T::from_usize_lossy(k)
    }

    /// Number of leading samples with `t ≤ t_end`.
    pub fn count_through(&self, t_end: T) -> usize {
        let tol = self.dt * T::lit(1e-9);
        (0..self.u.len())
            .take_while(|&k| self.time(k) <= t_end + tol)
            .count()
    }
}

/// Material constants and boundary temperatures from the sidecar file.
#[derive(Clone, Debug, PartialEq)]
pub struct RodConfig {
    pub length_m: f64,
    pub k_w_mk: f64,
    pub rho_kg_m3: f64,
    pub cp_j_kgk: f64,
    pub u0_k: f64,
    pub un_k: f64,
    pub alpha_m2_s: Option<f64>,
}

impl RodConfig {
    /// `k / (c_p ρ)` unless a diffusivity is given explicitly.
    pub fn alpha(&self) -> f64 {
        self.alpha_m2_s
            .unwrap_or(self.k_w_mk / (self.cp_j_kgk * self.rho_kg_m3))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut get = std::collections::BTreeMap::new();
        for (no, line) in data_lines(text) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {no}: expected key=value")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("line {no}: bad number {:?}", v.trim())))?;
            if !v.is_finite() {
                return Err(Error::Config(format!("line {no}: value must be finite")));
            }
            get.insert(k.trim().to_string(), v);
        }
        let need = |k: &str| {
            get.get(k)
                .copied()
                .ok_or_else(|| Error::Config(format!("missing key {k}")))
        };
        let alpha = get.get("alpha_m2_s").copied();
        let (k, rho, cp) = if alpha.is_some() {
            (
                get.get("k_W_mK").copied().unwrap_or(f64::NAN),
                get.get("rho_kg_m3").copied().unwrap_or(f64::NAN),
                get.get("cp_J_kgK").copied().unwrap_or(f64::NAN),
            )
        } else {
            (need("k_W_mK")?, need("rho_kg_m3")?, need("cp_J_kgK")?)
        };
        let cfg = RodConfig {
            length_m: need("length_m")?,
            k_w_mk: k,
            rho_kg_m3: rho,
            cp_j_kgk: cp,
            u0_k: need("u0_K")?,
            un_k: need("un_K")?,
            alpha_m2_s: alpha,
        };
        if !(cfg.alpha() > 0.0) {
            return Err(Error::Config(format!("diffusivity must be positive, got {}", cfg.alpha())));
        }
        if !(cfg.length_m > 0.0) {
            return Err(Error::Config("length_m must be positive".into()));
        }
        Ok(cfg)
    }

    pub fn to_text(&self, comment: Option<&str>) -> String {
        let mut s = String::new();
        if let Some(c) = comment {
            for l in c.lines() {
                s.push_str(&format!("# {l}\n"));
            }
        }
        let mut kv = |k: &str, v: f64| {
            if v.is_finite() {
                s.push_str(&format!("{k}={}\n", fmt17(v)));
            }
        };
        kv("length_m", self.length_m);
        kv("k_W_mK", self.k_w_mk);
        kv("rho_kg_m3", self.rho_kg_m3);
        kv("cp_J_kgK", self.cp_j_kgk);
        kv("u0_K", self.u0_k);
        kv("un_K", self.un_k);
        if let Some(a) = self.alpha_m2_s {
            kv("alpha_m2_s", a);
        }
        s
    }
}

/// Reads the measurement CSV (`t_s,x=<pos>,...`, interior nodes only) and the
/// sidecar configuration.
///
/// The time axis is shifted so the first sample sits at `t = 0`.
pub fn load_experiment_csv(csv: &str, config: &str) -> Result<(RodGrid<f64>, TemperatureSeries<f64>)> {
    let cfg = RodConfig::parse(config)?;
    let mut lines = data_lines(csv);
    let (hno, header) = lines
        .next()
        .ok_or_else(|| Error::format(1, "empty temperature file"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.first() != Some(&"t_s") || cols.len() < 2 {
        return Err(Error::format(hno, "header must be t_s,x=<pos>,..."));
    }
    let mut nodes = vec![0.0];
    for c in &cols[1..] {
        let pos = c
            .strip_prefix("x=")
            .ok_or_else(|| Error::format(hno, format!("column {c:?} is not of the form x=<pos>")))?;
        let x = parse_f64(pos, hno, "node position")?;
        if !(x > *nodes.last().unwrap_or(&0.0)) || x >= cfg.length_m {
            return Err(Error::format(
                hno,
                format!("node positions must increase strictly inside (0, {}); got {x}", cfg.length_m),
            ));
        }
        nodes.push(x);
    }
    nodes.push(cfg.length_m);
    let grid = RodGrid::new(nodes, cfg.alpha(), cfg.u0_k, cfg.un_k)
        .map_err(|e| Error::format(hno, e.to_string()))?;

    let width = cols.len();
    let mut times = Vec::new();
    let mut u = Vec::new();
    for (no, line) in lines {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != width || f.iter().any(|s| s.is_empty()) {
            return Err(Error::format(no, format!("missing samples: expected {width} values")));
        }
        let t = parse_f64(f[0], no, "t_s")?;
        let mut row = Vec::with_capacity(width + 1);
        row.push(cfg.u0_k);
        for v in &f[1..] {
            let temp = parse_f64(v, no, "temperature")?;
            if !(TEMPERATURE_BAND.0..=TEMPERATURE_BAND.1).contains(&temp) {
                return Err(Error::format(
                    no,
                    format!("temperature {temp} K outside [{}, {}] K", TEMPERATURE_BAND.0, TEMPERATURE_BAND.1),
                ));
            }
            row.push(temp);
        }
        row.push(cfg.un_k);
        if let Some(&(_, prev)) = times.last() {
            if !(t > prev) {
                return Err(Error::format(no, format!("time {t} does not increase")));
            }
        }
        times.push((no, t));
        u.push(row);
    }
    if times.len() < 2 {
        return Err(Error::InsufficientData {
            what: "temperature samples",
            needed: 2,
            got: times.len(),
        });
    }
    let dt = times[1].1 - times[0].1;
    for w in times.windows(2) {
        if ((w[1].1 - w[0].1) - dt).abs() > 1e-6 * dt {
            return Err(Error::format(
                w[1].0,
                format!("non-uniform sampling: step {} s, expected {dt} s", w[1].1 - w[0].1),
            ));
        }
    }
    Ok((
        grid,
        TemperatureSeries {
            dt,
            time_offset: times[0].1,
            u,
        },
    ))
}

/// Writes the measurement CSV for interior nodes.
pub fn write_experiment_csv(grid: &RodGrid<f64>, series: &TemperatureSeries<f64>) -> String {
    let mut s = String::from("t_s");
    for &x in &grid.nodes()[grid.interior()] {
        s.push_str(",x=");
        s.push_str(&fmt17(x));
    }
    s.push('\n');
    for (k, row) in series.u.iter().enumerate() {
        s.push_str(&fmt17(series.time(k) + series.time_offset));
        for &v in &row[grid.interior()] {
            s.push(',');
            s.push_str(&fmt17(v));
        }
        s.push('\n');
    }
    s
}
