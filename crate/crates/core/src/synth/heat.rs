use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::heat::grid::{write_experiment_csv, RodConfig, RodGrid, TemperatureSeries};
use crate::heat::operators::{assemble_operators, spatial_derivatives};
use crate::io::{fmt17, write_atomic};
use crate::scalar::Real;
use crate::synth::forcing::HeatSource;

/// Aluminium rod, 0.306 m, ice bath at one end and room temperature at the other.
pub fn reference_rod() -> RodConfig {
    RodConfig {
        length_m: 0.306,
        k_w_mk: 209.0,
        rho_kg_m3: 2763.14,
        cp_j_kgk: 900.0,
        u0_k: 273.15,
        un_k: 292.65,
        alpha_m2_s: None,
    }
}

/// Ten interior measurement positions, first and last adjacent to the ends,
/// with deliberately uneven spacing in between.
pub fn reference_nodes(length_m: f64) -> Vec<f64> {
    let first = 0.00434;
    let last = 0.28734;
    let jitter = [0.0, 0.004, -0.003, 0.006, -0.002, 0.003, -0.005, 0.002, -0.004, 0.0];
    let mut nodes = vec![0.0];
    for (i, j) in jitter.iter().enumerate() {
        nodes.push(first + (last - first) * i as f64 / 9.0 + j);
    }
    nodes.push(length_m);
    nodes
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticRod<T> {
    /// Noise-free temperatures on the lattice `t_k = k·dt`, step 0 = initial profile.
    pub series: TemperatureSeries<T>,
    /// `source[k−1]` is the source applied at step `k`; boundary entries are zero.
    pub source: Vec<Vec<T>>,
}

/// Backward-Euler heat equation with a source, stepped on `grid` for `steps`
/// steps of `dt` from `init`.
///
/// An explicit source solves `L̃·uᵏ = uᵏ⁻¹ + Δt·s(xᵢ, tₖ)`. The curvature-linked
/// source solves `A·uᵏ = uᵏ⁻¹ + Δt·β₀` with diffusivity `α + β₁`, so the
/// source seen by the nominal operator is `β₀ + β₁·D²(uᵏ)`.
pub fn synth_heat<T: Real>(
    grid: &RodGrid<T>,
    source: &HeatSource,
    init: &[T],
    steps: usize,
    dt: T,
) -> Result<SyntheticRod<T>> {
    source.validate()?;
    if init.len() != grid.len() {
        return Err(Error::InvalidParameter(format!(
            "initial profile has {} values for {} nodes",
            init.len(),
            grid.len()
        )));
    }
    if !(dt > T::zero()) {
        return Err(Error::InvalidParameter("time step must be positive".into()));
    }
    let (linked, beta1) = match source {
        HeatSource::CurvatureLinked { beta1, .. } => (true, T::lit(*beta1)),
        _ => (false, T::zero()),
    };
    let ops = assemble_operators(grid, dt, beta1);
    let system = if linked { &ops.augmented } else { &ops.implicit };

    let mut u = init.to_vec();
    grid.with_boundaries(&mut u);
    let mut states = vec![u.clone()];
    let mut sources = Vec::with_capacity(steps);
    for k in 1..=steps {
        let t = dt * T::from_usize_lossy(k);
        let mut s = vec![T::zero(); grid.len()];
        for i in grid.interior() {
            s[i] = source.eval(grid.nodes()[i], t);
        }
        let mut rhs = u.clone();
        for i in grid.interior() {
            rhs[i] += dt * s[i];
        }
        u = system.solve(&rhs)?;
        if linked {
            for d in spatial_derivatives(grid, &u) {
                s[d.node] += beta1 * d.second;
            }
        }
        states.push(u.clone());
        sources.push(s);
    }
    Ok(SyntheticRod {
        series: TemperatureSeries {
            dt,
            time_offset: T::zero(),
            u: states,
        },
        source: sources,
    })
}

/// Adds independent N(0, σ²) noise to interior temperatures.
pub fn add_observation_noise(series: &mut TemperatureSeries<f64>, sigma: f64, seed: u64) -> Result<()> {
    if sigma == 0.0 {
        return Ok(());
    }
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| Error::InvalidParameter(format!("noise level {sigma}: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for row in &mut series.u {
        let last = row.len() - 1;
        for v in &mut row[1..last] {
            *v += normal.sample(&mut rng);
        }
    }
    Ok(())
}

pub const TRUTH_LAMBDA_HEADER: &str = "t_s,node_index,x_m,lambda";

pub fn truth_lambda_csv(grid: &RodGrid<f64>, rod: &SyntheticRod<f64>, time_offset: f64) -> String {
    let mut s = String::from(TRUTH_LAMBDA_HEADER);
    s.push('\n');
    for (j, src) in rod.source.iter().enumerate() {
        let t = rod.series.time(j + 1) + time_offset;
        for i in grid.interior() {
            s.push_str(&format!("{},{i},{},{}\n", fmt17(t), fmt17(grid.nodes()[i]), fmt17(src[i])));
        }
    }
    s
}

#[derive(Clone, Debug)]
pub struct HeatFiles {
    pub data: PathBuf,
    pub config: PathBuf,
    pub truth: PathBuf,
}

/// Writes `rod.csv` (observed series), `rod.cfg` and `truth_lambda.csv`.
pub fn write_heat_files(
    grid: &RodGrid<f64>,
    config: &RodConfig,
    rod: &SyntheticRod<f64>,
    observed: &TemperatureSeries<f64>,
    header_comment: &str,
    out_dir: &Path,
) -> Result<HeatFiles> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let data = out_dir.join("rod.csv");
    let cfg = out_dir.join("rod.cfg");
    let truth = out_dir.join("truth_lambda.csv");
    let mut csv = String::new();
    for l in header_comment.lines() {
        csv.push_str(&format!("# {l}\n"));
    }
    csv.push_str(&write_experiment_csv(grid, observed));
    write_atomic(&data, csv.as_bytes())?;
    write_atomic(&cfg, config.to_text(Some(header_comment)).as_bytes())?;
    write_atomic(&truth, truth_lambda_csv(grid, rod, observed.time_offset).as_bytes())?;
    Ok(HeatFiles {
        data,
        config: cfg,
        truth,
    })
}
