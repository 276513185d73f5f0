use chrono::NaiveDate;
use lagrange_forcing::dae::{GravityModel, EARTH_GM};
use lagrange_forcing::orbit::parse_sp3;
use lagrange_forcing::stats::{
    design_with_intercept, diagnostics, filter_influential, fit_ols, flag_influential, model_selection_table,
    FilterRules,
};
use lagrange_forcing::synth::orbit::{circular_state, synth_orbit, write_orbit_files, OrbitScenario, OrbitSynthMode};
use lagrange_forcing::synth::OrbitForcing;
use lagrange_forcing::Vec3;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn to_nalgebra(cols: &[Vec<f64>]) -> DMatrix<f64> {
    let n = cols[0].len();
    DMatrix::from_fn(n, cols.len() + 1, |i, j| if j == 0 { 1.0 } else { cols[j - 1][i] })
}

#[test]
fn monte_carlo_coefficients_within_three_standard_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(2015);
    let noise = Normal::new(0.0, 0.1).unwrap();
    let d2: Vec<f64> = (0..5000).map(|_| Normal::new(0.0, 1.0).unwrap().sample(&mut rng)).collect();
    let y: Vec<f64> = d2.iter().map(|&x| 2.0 + 3.0 * x + noise.sample(&mut rng)).collect();
    let fit = fit_ols(&design_with_intercept(&[&d2]), &y).unwrap();
    let x = to_nalgebra(&[d2]);
    let cov = (x.transpose() * &x).try_inverse().unwrap() * fit.sigma2;
    for (j, truth) in [2.0, 3.0].into_iter().enumerate() {
        let se = cov[(j, j)].sqrt();
        assert!((fit.coefficients[j] - truth).abs() <= 3.0 * se);
    }
    assert!((fit.sigma2 - 0.01).abs() <= 0.001);
}

#[test]
fn extreme_point_dominates_cooks_distance() {
    let x: Vec<f64> = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 30.0];
    let mut y: Vec<f64> = x.iter().map(|&v| 1.0 + 0.5 * v).collect();
    for (i, e) in [0.3, -0.2, 0.1, -0.4, 0.2, 0.0, -0.1, 0.3, -0.2].iter().enumerate() {
        y[i] += e;
    }
    y[9] += 6.0;
    let design = design_with_intercept(&[&x]);
    let fit = fit_ols(&design, &y).unwrap();
    let rep = diagnostics(&fit, &design).unwrap();

    // Explicit hat matrix H = X (XᵀX)⁻¹ Xᵀ.
    let xm = to_nalgebra(&[x.clone()]);
    let h = &xm * (xm.transpose() * &xm).try_inverse().unwrap() * xm.transpose();
    for i in 0..10 {
        assert!((rep.leverage[i] - h[(i, i)]).abs() < 1e-12);
    }
    let top = (0..10).max_by(|&a, &b| rep.cooks_d[a].total_cmp(&rep.cooks_d[b])).unwrap();
    assert_eq!(top, 9);
    let runner_up = rep.cooks_d[..9].iter().cloned().fold(0.0, f64::max);
    assert!(rep.cooks_d[9] > 10.0 * runner_up);
}

#[test]
fn infinite_thresholds_flag_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x: Vec<f64> = (0..200).map(|i| i as f64).collect();
    let mut y: Vec<f64> = x.iter().map(|&v| v + Normal::new(0.0, 1.0).unwrap().sample(&mut rng)).collect();
    y[17] += 50.0;
    let design = design_with_intercept(&[&x]);
    let fit = fit_ols(&design, &y).unwrap();
    let rep = diagnostics(&fit, &design).unwrap();
    let never = FilterRules { resid_thresh: f64::INFINITY, cook_thresh: Some(f64::INFINITY) };
    assert!(flag_influential(&rep, &never).iter().all(|f| !f));
    assert_eq!(filter_influential(&rep, &never).len(), 200);
    let default = flag_influential(&rep, &FilterRules::default());
    assert_eq!(default.iter().filter(|&&f| f).count(), 1);
    assert!(default[17]);
}

#[test]
fn selection_table_covers_seven_subsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 400;
    let u: Vec<f64> = (0..n).map(|_| Normal::new(280.0, 5.0).unwrap().sample(&mut rng)).collect();
    let d1: Vec<f64> = (0..n).map(|_| Normal::new(0.0, 10.0).unwrap().sample(&mut rng)).collect();
    let d2: Vec<f64> = (0..n).map(|_| Normal::new(0.0, 100.0).unwrap().sample(&mut rng)).collect();
    let y: Vec<f64> = d2.iter().map(|&v| 0.01 + 2e-4 * v).collect();
    let table = model_selection_table(&[("u", &u), ("D", &d1), ("D2", &d2)], &y).unwrap();
    assert_eq!(table.len(), 7);
    for row in &table {
        assert!(row.adj_r2 <= row.r2 + 1e-15);
        if row.regressors.iter().any(|r| r == "D2") {
            assert!((row.r2 - 1.0).abs() < 1e-12, "{:?}", row.regressors);
        } else {
            assert!(row.r2 < 0.1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fit_invariants(
        n in 6usize..60,
        k in 1usize..4,
        seed in any::<u64>(),
    ) {
        prop_assume!(n > k + 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let unit = Normal::new(0.0, 1.0).unwrap();
        let cols: Vec<Vec<f64>> = (0..k).map(|_| (0..n).map(|_| unit.sample(&mut rng)).collect()).collect();
        let y: Vec<f64> = (0..n).map(|i| 0.5 + cols.iter().map(|c| c[i]).sum::<f64>() + unit.sample(&mut rng)).collect();
        let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
        let design = design_with_intercept(&refs);
        let fit = fit_ols(&design, &y).unwrap();

        // Normal equations.
        let scale: f64 = y.iter().map(|v| v.abs()).sum::<f64>() * (1.0 + cols.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max));
        for j in 0..=k {
            let g: f64 = (0..n).map(|i| design[(i, j)] * fit.residuals[i]).sum();
            prop_assert!(g.abs() <= 1e-8 * scale);
        }
        // R² recomputed independently.
        let mean = y.iter().sum::<f64>() / n as f64;
        let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
        let x = to_nalgebra(&cols);
        let beta = (x.transpose() * &x).lu().solve(&(x.transpose() * DVector::from_vec(y.clone()))).unwrap();
        let ss_res = (DVector::from_vec(y.clone()) - &x * beta).norm_squared();
        prop_assert!((fit.r2 - (1.0 - ss_res / ss_tot)).abs() <= 1e-10);
        prop_assert!(fit.adj_r2 <= fit.r2);
        prop_assert!(fit.sigma2 >= 0.0);

        let rep = diagnostics(&fit, &design).unwrap();
        prop_assert!(rep.leverage.iter().all(|&h| h > 0.0 && h < 1.0));
        prop_assert!((rep.leverage.iter().sum::<f64>() - (k + 1) as f64).abs() <= 1e-9);

        // Nested subsets never lose R².
        let mut last = -1.0;
        for m in 1..=k {
            let r2 = fit_ols(&design_with_intercept(&refs[..m]), &y).unwrap().r2;
            prop_assert!(r2 >= last - 1e-12);
            last = r2;
        }
    }
}

#[test]
fn rk4_circular_sp3_samples_stay_on_the_circle() {
    let g = GravityModel::<f64>::earth();
    let r = 4.2164e7;
    let (x0, v0) = circular_state(r, &g);
    let period = (2.0 * std::f64::consts::PI * (r.powi(3) / EARTH_GM).sqrt()).ceil() as usize;
    let sc = OrbitScenario { x0, v0, forcing: OrbitForcing::Zero, duration_s: period, gravity: g };
    let orbit = synth_orbit(&sc, OrbitSynthMode::Rk4 { step: 0.01 }).unwrap();
    let worst = orbit.positions.iter().map(|p| (p.norm() - r).abs() / r).fold(0.0, f64::max);
    assert!(worst <= 1e-9, "worst {worst}");

    let dir = tempfile::tempdir().unwrap();
    let origin = NaiveDate::from_ymd_opt(2015, 12, 10).unwrap().and_hms_opt(0, 0, 0).unwrap();
    let files = write_orbit_files(&orbit, "C05", origin, 900, 3600, dir.path()).unwrap();
    for f in &files.sp3 {
        let e = parse_sp3(&std::fs::read_to_string(f).unwrap(), "C05").unwrap();
        for p in &e.positions {
            // SP3 prints millimetres, so the file adds at most 0.5 mm per axis.
            assert!((p.norm() - r).abs() <= 1e-9 * r + 1e-3);
        }
    }
}

#[test]
fn gravity_free_sp3_samples_are_collinear() {
    let sc = OrbitScenario {
        x0: Vec3::new(1.0e7, 2.0e6, -3.0e6),
        v0: Vec3::new(100.0, -50.0, 25.0),
        forcing: OrbitForcing::Zero,
        duration_s: 86_400,
        gravity: GravityModel::none(),
    };
    let orbit = synth_orbit(&sc, OrbitSynthMode::Rk4 { step: 1.0 }).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let origin = NaiveDate::from_ymd_opt(2015, 12, 10).unwrap().and_hms_opt(0, 0, 0).unwrap();
    let files = write_orbit_files(&orbit, "C05", origin, 900, 3600, dir.path()).unwrap();
    let e = parse_sp3(&std::fs::read_to_string(&files.sp3[0]).unwrap(), "C05").unwrap();
    for (t, p) in e.epochs.iter().zip(&e.positions) {
        let expected = sc.x0 + sc.v0 * *t;
        assert!((*p - expected).max_abs() <= 1e-3);
    }
}
