//! `lforce` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or runtime error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use chrono::NaiveDateTime;
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use crate::dae::GravityModel;
use crate::error::Error;
use crate::heat::grid::{load_experiment_csv, RodConfig, RodGrid, TemperatureSeries};
use crate::heat::pipeline::{fit_source_model, training_rows, HeatModel};
use crate::heat::predict::{predict, prediction_csv, ReinitSchedule, SourceModel};
use crate::heat::regression::lambda_csv;
use crate::io::{fmt17, read_to_string, write_atomic};
use crate::orbit::eop::RotationSeries;
use crate::orbit::lambda::LambdaDataset;
use crate::orbit::pipeline::{fit_interpolator, lambda_dataset_from_ephemeris, load_celestial_ephemeris};
use crate::orbit::predict::{predict_nominal_verlet, predict_orbit, ForcingLookup};
use crate::orbit::report::error_report;
use crate::orbit::sp3::list_satellites;
use crate::stats::diagnostics::{diagnostics_csv, normal_plot_csv, RowLabel};
use crate::stats::selection::selection_csv;
use crate::stats::{model_selection_table, normal_plot_points, FilterRules};
use crate::synth::heat::{add_observation_noise, reference_nodes, reference_rod, synth_heat, write_heat_files};
use crate::synth::orbit::{circular_state, synth_orbit, write_orbit_files, OrbitScenario, OrbitSynthMode};
use crate::synth::{HeatSource, OrbitForcing};
use crate::vec3::Mat3;

#[derive(Parser, Debug)]
#[command(name = "lforce", version, about = "Forcing estimation and augmented-model prediction")]
struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Satellite ephemeris pipeline.
    #[command(subcommand)]
    Orbit(OrbitCommand),
    /// Rod heat-conduction pipeline.
    #[command(subcommand)]
    Heat(HeatCommand),
    /// Synthetic data generation.
    #[command(subcommand)]
    Synth(SynthCommand),
}

#[derive(Subcommand, Debug)]
enum OrbitCommand {
    /// Recover the forcing dataset from SP3 files.
    BuildLambda(BuildLambdaArgs),
    /// Predict with the augmented (or nominal) model.
    Predict(OrbitPredictArgs),
}

#[derive(Args, Debug)]
struct BuildLambdaArgs {
    #[arg(long, num_args = 1.., required = true)]
    sp3: Vec<PathBuf>,
    #[arg(long)]
    eop: PathBuf,
    #[arg(long)]
    sat: String,
    #[arg(long)]
    out: PathBuf,
    /// Gravitational parameter, m³/s².
    #[arg(long)]
    gm: Option<f64>,
}

#[derive(Args, Debug)]
struct OrbitPredictArgs {
    #[arg(long)]
    lambda: PathBuf,
    /// SP3 files used for the initial positions; consecutive files are
    /// concatenated so the start can sit away from a file edge.
    #[arg(long, num_args = 1.., required = true)]
    init_sp3: Vec<PathBuf>,
    #[arg(long)]
    eop: PathBuf,
    /// Satellite id; may be omitted when the SP3 file lists one satellite.
    #[arg(long)]
    sat: Option<String>,
    /// Start, seconds after the first epoch of the first initial SP3 file.
    #[arg(long)]
    start: f64,
    /// Horizon in whole seconds.
    #[arg(long)]
    duration: u64,
    /// Point-mass model without forcing.
    #[arg(long)]
    nominal: bool,
    /// Integration step, s (default 1 for the augmented model, 0.1 for the nominal one).
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, requires = "ref_sp3")]
    report: Option<PathBuf>,
    #[arg(long, requires = "report")]
    ref_sp3: Option<PathBuf>,
    #[arg(long)]
    gm: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum HeatCommand {
    /// Recover per-node sources over the training partition.
    Lambda(HeatLambdaArgs),
    /// Fit the source regression and write the model file.
    Fit(HeatFitArgs),
    /// Predict temperatures with the fitted or nominal model.
    Predict(HeatPredictArgs),
}

#[derive(Args, Debug)]
struct HeatInput {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args, Debug)]
struct HeatLambdaArgs {
    #[command(flatten)]
    input: HeatInput,
    /// Last training time on the file's time axis, s.
    #[arg(long)]
    train_end: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct HeatFitArgs {
    #[command(flatten)]
    input: HeatInput,
    #[arg(long)]
    train_end: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    diagnostics: PathBuf,
    #[arg(long, default_value_t = 3.0)]
    resid_thresh: f64,
    /// Cook's distance threshold (default 4/N).
    #[arg(long)]
    cook_thresh: Option<f64>,
    #[arg(long)]
    selection_table: Option<PathBuf>,
    #[arg(long)]
    normal_plot: Option<PathBuf>,
    /// Refit without flagged rows.
    #[arg(long)]
    drop_flagged: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SourceVariant {
    /// Curvature of the running prediction, folded into the diffusivity.
    Running,
    /// Curvature of the observation at each step.
    Observed,
}

#[derive(Args, Debug)]
struct HeatPredictArgs {
    #[command(flatten)]
    input: HeatInput,
    #[arg(long, required_unless_present = "nominal")]
    model: Option<PathBuf>,
    /// Reinitialization period in seconds, or `none`.
    #[arg(long)]
    reinit: String,
    #[arg(long)]
    nominal: bool,
    #[arg(long, value_enum, default_value_t = SourceVariant::Running)]
    source: SourceVariant,
    /// Time of the initial observation on the file's time axis (default:
    /// first sample after the training span).
    #[arg(long)]
    start: Option<f64>,
    /// Number of steps (default: to the end of the data).
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    /// Print the mean squared error against the observations.
    #[arg(long)]
    mse: bool,
    /// Permit prediction over epochs used for training.
    #[arg(long)]
    allow_overlap: bool,
}

#[derive(Subcommand, Debug)]
enum SynthCommand {
    /// Synthetic satellite with a known forcing field.
    Orbit(SynthOrbitArgs),
    /// Synthetic rod with a known source.
    Heat(SynthHeatArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SynthMode {
    /// Same discretization as the recovery scheme (exact recovery).
    Scheme,
    /// Fine-step Runge–Kutta truth.
    Rk4,
}

#[derive(Args, Debug)]
struct SynthOrbitArgs {
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 11)]
    days: usize,
    /// Circular-orbit radius, m.
    #[arg(long, default_value_t = 4.2164e7)]
    radius: f64,
    /// Tilt of the initial velocity out of the equatorial plane, degrees.
    #[arg(long, default_value_t = 1.5)]
    inclination_deg: f64,
    /// Forcing as JSON (default: the reference quadratic field).
    #[arg(long)]
    forcing: Option<String>,
    #[arg(long, value_enum, default_value_t = SynthMode::Rk4)]
    mode: SynthMode,
    #[arg(long, default_value_t = 0.01)]
    rk4_step: f64,
    #[arg(long, default_value = "C05")]
    sat: String,
    #[arg(long, default_value = "2015-12-10T00:00:00")]
    origin: String,
    #[arg(long)]
    gm: Option<f64>,
    /// SP3 sampling interval, s.
    #[arg(long, default_value_t = 900)]
    interval: usize,
    /// Truth CSV sampling interval, s.
    #[arg(long, default_value_t = 60)]
    truth_stride: usize,
}

#[derive(Args, Debug)]
struct SynthHeatArgs {
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 788)]
    steps: usize,
    #[arg(long, default_value_t = 2.0)]
    dt: f64,
    /// Time of the first sample written to the file, s.
    #[arg(long, default_value_t = 0.9)]
    time_offset: f64,
    /// Source as JSON (default: the reference persistent source).
    #[arg(long)]
    source: Option<String>,
    /// `steady` or `uniform:<K>`.
    #[arg(long, default_value = "uniform:285")]
    init: String,
    /// Observation noise standard deviation, K.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Error carrying its exit code; messages are single lines.
#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: 2,
            message: e.to_string(),
        }
    }
}

type CliResult<T = ()> = std::result::Result<T, CliError>;

/// Attaches the file name to errors raised while interpreting its contents.
fn in_file<T>(path: &Path, r: crate::Result<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        Error::Io { .. } => e.into(),
        e => CliError {
            code: 2,
            message: format!("{}: {e}", path.display()),
        },
    })
}

fn read(path: &Path) -> CliResult<String> {
    Ok(read_to_string(path)?)
}

fn write(path: &Path, text: &str) -> CliResult {
    write_atomic(path, text.as_bytes())?;
    info!("wrote {}", path.display());
    Ok(())
}

fn gravity(gm: Option<f64>) -> CliResult<GravityModel<f64>> {
    match gm {
        None => Ok(GravityModel::earth()),
        Some(v) => GravityModel::new(v).map_err(|e| CliError::usage(format!("--gm: {e}"))),
    }
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::usage(format!("{name} must be positive, got {v}")))
    }
}

/// Parses arguments, runs one stage and returns the process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .format_timestamp(None)
        .try_init();
    let result = match cli.command {
        Command::Orbit(OrbitCommand::BuildLambda(a)) => orbit_build_lambda(a),
        Command::Orbit(OrbitCommand::Predict(a)) => orbit_predict(a),
        Command::Heat(HeatCommand::Lambda(a)) => heat_lambda(a),
        Command::Heat(HeatCommand::Fit(a)) => heat_fit(a),
        Command::Heat(HeatCommand::Predict(a)) => heat_predict(a),
        Command::Synth(SynthCommand::Orbit(a)) => synth_orbit_cmd(a),
        Command::Synth(SynthCommand::Heat(a)) => synth_heat_cmd(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("lforce: error: {}", e.message.replace('\n', " "));
            e.code
        }
    }
}

fn load_eop(path: &Path) -> CliResult<RotationSeries> {
    in_file(path, RotationSeries::parse_csv(&read(path)?))
}

fn orbit_build_lambda(a: BuildLambdaArgs) -> CliResult {
    let g = gravity(a.gm)?;
    let eop = load_eop(&a.eop)?;
    let texts = a.sp3.iter().map(|p| read(p)).collect::<CliResult<Vec<_>>>()?;
    for (p, t) in a.sp3.iter().zip(&texts) {
        in_file(p, crate::orbit::sp3::parse_sp3(t, &a.sat).map(|_| ()))?;
    }
    let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
    let eph = load_celestial_ephemeris(&refs, &a.sat, &eop)?;
    info!("{} epochs for {}", eph.len(), eph.satellite_id);
    let ds = lambda_dataset_from_ephemeris(&eph, &g)?;
    info!("{} forcing records", ds.len());
    write(&a.out, &ds.to_csv())
}

fn orbit_predict(a: OrbitPredictArgs) -> CliResult {
    let g = gravity(a.gm)?;
    if a.duration == 0 {
        return Err(CliError::usage("--duration must be at least 1 s"));
    }
    let step = positive("--step", a.step.unwrap_or(if a.nominal { 0.1 } else { 1.0 }))?;
    let eop = load_eop(&a.eop)?;
    let init_texts = a.init_sp3.iter().map(|p| read(p)).collect::<CliResult<Vec<_>>>()?;
    let sat = match a.sat.clone() {
        Some(s) => s,
        None => match list_satellites(&init_texts[0]).as_slice() {
            [only] => only.clone(),
            _ => return Err(CliError::usage("--sat is required when the SP3 file lists several satellites")),
        },
    };
    for (p, t) in a.init_sp3.iter().zip(&init_texts) {
        in_file(p, crate::orbit::sp3::parse_sp3(t, &sat).map(|_| ()))?;
    }
    let init_path = &a.init_sp3[0];
    let refs: Vec<&str> = init_texts.iter().map(String::as_str).collect();
    let init = in_file(init_path, load_celestial_ephemeris(&refs, &sat, &eop))?;
    let interp = in_file(init_path, fit_interpolator(&init))?;
    let duration = a.duration as usize;
    let x0 = in_file(init_path, interp.eval(a.start))?;
    let trajectory = if a.nominal {
        let xb = in_file(init_path, interp.eval(a.start + step))?;
        predict_nominal_verlet(a.start, x0, xb, duration, step, &g)?
    } else {
        let ds = in_file(&a.lambda, LambdaDataset::<f64>::parse_csv(&read(&a.lambda)?))?;
        let lookup = in_file(&a.lambda, ForcingLookup::new(&ds))?;
        let x1 = in_file(init_path, interp.eval(a.start + 1.0))?;
        predict_orbit(&lookup, a.start, x0, x1, duration, step, &g)?
    };
    write(&a.out, &trajectory.to_csv())?;
    if let (Some(report_path), Some(ref_path)) = (&a.report, &a.ref_sp3) {
        let reference = in_file(ref_path, load_celestial_ephemeris(&[&read(ref_path)?], &sat, &eop))?
            .rebased(init.origin);
        let report = in_file(ref_path, error_report(&trajectory, &reference.epochs, &reference.positions))?;
        write(report_path, &report.to_csv())?;
        print!("{}", report.summary());
    }
    Ok(())
}

fn load_heat(input: &HeatInput) -> CliResult<(RodGrid<f64>, TemperatureSeries<f64>)> {
    let config = read(&input.config)?;
    in_file(&input.config, RodConfig::parse(&config))?;
    Ok(in_file(&input.data, load_experiment_csv(&read(&input.data)?, &config))?)
}

fn heat_lambda(a: HeatLambdaArgs) -> CliResult {
    let (grid, series) = load_heat(&a.input)?;
    let (rows, _) = in_file(&a.input.data, training_rows(&grid, &series, a.train_end))?;
    write(&a.out, &lambda_csv(&rows))
}

fn heat_fit(a: HeatFitArgs) -> CliResult {
    let (grid, series) = load_heat(&a.input)?;
    let (rows, span) = in_file(&a.input.data, training_rows(&grid, &series, a.train_end))?;
    let rules = FilterRules {
        resid_thresh: positive("--resid-thresh", a.resid_thresh)?,
        cook_thresh: a.cook_thresh.map(|c| positive("--cook-thresh", c)).transpose()?,
    };
    let sf = fit_source_model(&rows, span, &rules, a.drop_flagged)?;
    let labels: Vec<RowLabel> = (0..rows.len())
        .map(|i| RowLabel {
            node: rows.node[i],
            t: rows.t[i],
        })
        .collect();
    write(&a.diagnostics, &diagnostics_csv(&sf.full_fit, &sf.diagnostics, &labels, &sf.flagged))?;
    if let Some(p) = &a.normal_plot {
        write(p, &normal_plot_csv(&normal_plot_points(&sf.diagnostics)))?;
    }
    if let Some(p) = &a.selection_table {
        let table = model_selection_table(&[("u", &rows.u), ("D", &rows.d1), ("D2", &rows.d2)], &rows.lambda)?;
        write(p, &selection_csv(&table))?;
    }
    write(&a.out, &sf.model.to_json())?;
    let m = &sf.model;
    println!(
        "beta0={} beta1={} r2={} n={} flagged={} dropped={}",
        fmt17(m.beta0),
        fmt17(m.beta1),
        fmt17(m.r2),
        m.n,
        sf.flagged.iter().filter(|&&f| f).count(),
        m.dropped
    );
    Ok(())
}

fn parse_reinit(s: &str) -> CliResult<ReinitSchedule<f64>> {
    if s.eq_ignore_ascii_case("none") {
        return Ok(ReinitSchedule::Never);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| CliError::usage(format!("--reinit expects seconds or `none`, got {s:?}")))?;
    Ok(ReinitSchedule::Every(positive("--reinit", v)?))
}

fn heat_predict(a: HeatPredictArgs) -> CliResult {
    let schedule = parse_reinit(&a.reinit)?;
    let (grid, series) = load_heat(&a.input)?;
    let model = match &a.model {
        Some(p) => Some(in_file(p, HeatModel::from_json(&read(p)?))?),
        None => None,
    };
    let file_time = |k: usize| series.time(k) + series.time_offset;
    let tol = 1e-6 * series.dt;
    let k0 = match (a.start, &model) {
        (Some(t), _) => {
            let k = ((t - series.time_offset) / series.dt).round();
            if k < 0.0 || k as usize >= series.len() || (file_time(k as usize) - t).abs() > tol {
                return Err(CliError::usage(format!("--start {t} is not a sample time of the data")));
            }
            k as usize
        }
        (None, Some(m)) => (0..series.len())
            .find(|&k| file_time(k) > m.training_span[1] + tol)
            .ok_or_else(|| CliError::from(Error::InsufficientData {
                what: "samples after the training span",
                needed: 1,
                got: 0,
            }))?,
        (None, None) => 0,
    };
    let available = series.len() - 1 - k0;
    let steps = a.steps.unwrap_or(available);
    if steps == 0 || steps > available {
        return Err(CliError::usage(format!("--steps must be in 1..={available} from the chosen start")));
    }
    if let Some(m) = &model {
        let (from, to) = (file_time(k0), file_time(k0 + steps));
        if !a.allow_overlap && m.overlaps(from, to) {
            return Err(CliError::from(Error::Schedule(format!(
                "model trained on [{}, {}] s overlaps requested epochs [{from}, {to}] s; pass --allow-overlap to proceed",
                m.training_span[0], m.training_span[1]
            ))));
        }
    }
    let source = match (&model, a.nominal, a.source) {
        (_, true, _) | (None, _, _) => SourceModel::Nominal,
        (Some(m), false, SourceVariant::Running) => SourceModel::RunningCurvature {
            beta0: m.beta0,
            beta1: m.beta1,
        },
        (Some(m), false, SourceVariant::Observed) => SourceModel::ObservedCurvature {
            beta0: m.beta0,
            beta1: m.beta1,
        },
    };
    let obs = &series.u[k0..=k0 + steps];
    let pred = predict(&grid, source, series.dt, file_time(k0), &obs[0], steps, schedule, Some(obs))?;
    write(&a.out, &prediction_csv(&grid, &pred, Some(obs)))?;
    if a.mse {
        match pred.mse {
            Some(v) => println!("mse_K2={}", fmt17(v)),
            None => println!("mse_K2=nan (no predicted steps)"),
        }
    }
    Ok(())
}

fn parse_json<T: serde::de::DeserializeOwned>(flag: &str, text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::usage(format!("{flag}: {e}")))
}

#[derive(serde::Serialize)]
struct OrbitScenarioRecord<'a> {
    days: usize,
    radius_m: f64,
    inclination_deg: f64,
    gm: f64,
    mode: &'a str,
    rk4_step_s: Option<f64>,
    satellite: &'a str,
    origin: &'a str,
    forcing: &'a OrbitForcing,
}

fn synth_orbit_cmd(a: SynthOrbitArgs) -> CliResult {
    let g = gravity(a.gm)?;
    positive("--radius", a.radius)?;
    if a.days == 0 {
        return Err(CliError::usage("--days must be at least 1"));
    }
    let origin = NaiveDateTime::parse_from_str(&a.origin, "%Y-%m-%dT%H:%M:%S")
        .map_err(|e| CliError::usage(format!("--origin: {e}")))?;
    let forcing = match &a.forcing {
        Some(j) => parse_json::<OrbitForcing>("--forcing", j)?,
        None => OrbitForcing::reference_field(),
    };
    forcing.validate().map_err(|e| CliError::usage(format!("--forcing: {e}")))?;
    let (x0, v0) = circular_state(a.radius, &g);
    let v0 = Mat3::rotation_x(a.inclination_deg.to_radians()).mul_vec(v0);
    let mode = match a.mode {
        SynthMode::Scheme => OrbitSynthMode::SchemeConsistent,
        SynthMode::Rk4 => OrbitSynthMode::Rk4 {
            step: positive("--rk4-step", a.rk4_step)?,
        },
    };
    let scenario = OrbitScenario {
        x0,
        v0,
        forcing: forcing.clone(),
        duration_s: a.days * 86_400,
        gravity: g,
    };
    let orbit = synth_orbit(&scenario, mode)?;
    let files = write_orbit_files(&orbit, &a.sat, origin, a.interval, a.truth_stride, &a.out_dir)?;
    let record = OrbitScenarioRecord {
        days: a.days,
        radius_m: a.radius,
        inclination_deg: a.inclination_deg,
        gm: g.gm(),
        mode: match a.mode {
            SynthMode::Scheme => "scheme",
            SynthMode::Rk4 => "rk4",
        },
        rk4_step_s: matches!(a.mode, SynthMode::Rk4).then_some(a.rk4_step),
        satellite: &a.sat,
        origin: &a.origin,
        forcing: &forcing,
    };
    let json = serde_json::to_string_pretty(&record).expect("scenario serializes") + "\n";
    write(&a.out_dir.join("scenario.json"), &json)?;
    println!("wrote {} SP3 files, {}, {}", files.sp3.len(), files.eop.display(), files.truth.display());
    Ok(())
}

fn synth_heat_cmd(a: SynthHeatArgs) -> CliResult {
    let dt = positive("--dt", a.dt)?;
    if a.steps == 0 {
        return Err(CliError::usage("--steps must be at least 1"));
    }
    if !(a.noise >= 0.0 && a.noise.is_finite()) {
        return Err(CliError::usage("--noise must be non-negative"));
    }
    let source = match &a.source {
        Some(j) => parse_json::<HeatSource>("--source", j)?,
        None => HeatSource::reference_persistent(),
    };
    source.validate().map_err(|e| CliError::usage(format!("--source: {e}")))?;
    let config = reference_rod();
    let grid = RodGrid::new(reference_nodes(config.length_m), config.alpha(), config.u0_k, config.un_k)?;
    let init = if a.init == "steady" {
        grid.steady_profile()
    } else if let Some(v) = a.init.strip_prefix("uniform:") {
        let t: f64 = v
            .parse()
            .map_err(|_| CliError::usage(format!("--init: bad temperature {v:?}")))?;
        vec![t; grid.len()]
    } else {
        return Err(CliError::usage("--init expects `steady` or `uniform:<K>`"));
    };
    let mut rod = synth_heat(&grid, &source, &init, a.steps, dt)?;
    rod.series.time_offset = a.time_offset;
    let mut observed = rod.series.clone();
    add_observation_noise(&mut observed, a.noise, a.seed)?;
    let source_json = serde_json::to_string(&source).expect("source serializes");
    let comment = format!(
        "synthetic rod: source={source_json} init={} noise_K={} seed={} dt_s={} steps={}",
        a.init, a.noise, a.seed, dt, a.steps
    );
    let files = write_heat_files(&grid, &config, &rod, &observed, &comment, &a.out_dir)?;
    println!(
        "wrote {}, {}, {}",
        files.data.display(),
        files.config.display(),
        files.truth.display()
    );
    Ok(())
}
