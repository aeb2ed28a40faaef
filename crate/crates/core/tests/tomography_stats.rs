mod common;

use bds::states::{fidelity, werner};
use bds::tomography::{
    born_probabilities, estimate_correlations, reconstruct, sample_counts, tomograph,
    CorrelationMatrix, MeasurementSetting, TomographyCounts,
};

#[test]
fn sample_means_track_born_probabilities() {
    let rho = werner(0.5).unwrap();
    let shots = 8192u64;
    let runs = 200;
    for setting in MeasurementSetting::all() {
        let p = born_probabilities(&rho, setting);
        let mut mean = [0.0; 4];
        for seed in 0..runs {
            let c = sample_counts(&rho, shots, seed).unwrap().get(setting);
            for (m, x) in mean.iter_mut().zip(c) {
                *m += x as f64 / (shots as f64 * runs as f64);
            }
        }
        for (m, q) in mean.iter().zip(p) {
            // standard error of the pooled frequency
            let se = (q * (1.0 - q) / (shots as f64 * runs as f64)).sqrt();
            assert!((m - q).abs() < 5.0 * se + 1e-12, "{setting:?}: {m} vs {q}");
        }
    }
}

#[test]
fn single_setting_variance_is_binomial() {
    let rho = werner(0.5).unwrap();
    let setting = MeasurementSetting::from_label("XX").unwrap();
    let shots = 1000u64;
    let n = 2000;
    let q = born_probabilities(&rho, setting)[1];
    let xs: Vec<f64> = (0..n)
        .map(|s| sample_counts(&rho, shots, s).unwrap().get(setting)[1] as f64)
        .collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let want = shots as f64 * q * (1.0 - q);
    assert!((var / want - 1.0).abs() < 0.1, "var {var} vs {want}");
}

#[test]
fn exact_mode_reproduces_random_states() {
    let mut rng = common::rng(31);
    for i in 0..50 {
        let rho = common::random_state(&mut rng, i);
        let rec = tomograph(&rho, 0, 0).unwrap();
        assert!(rec.state.matrix().max_abs_diff(rho.matrix()) < 1e-10);
        let corr = CorrelationMatrix::of_state(&rho);
        assert!(corr.validate().is_ok());
    }
}

#[test]
fn finite_shot_fidelity() {
    for w in [0.0, 0.5, 1.0] {
        let rho = werner(w).unwrap();
        for seed in 0..10 {
            let rec = tomograph(&rho, 8192, seed).unwrap();
            let f = fidelity(&rec.state, &rho).unwrap();
            assert!(f >= 0.97, "w={w} seed={seed}: F={f}");
            let tr = rec.state.matrix().trace().re;
            assert!((tr - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn pure_state_counts_need_projection_sometimes() {
    // A pure target sits on the boundary, so shot noise regularly pushes the
    // linear inversion outside the state space.
    let rho = werner(1.0).unwrap();
    let projected = (0..20)
        .filter(|&s| tomograph(&rho, 8192, s).unwrap().projected)
        .count();
    assert!(projected > 0);
}

#[test]
fn counts_file_round_trip_reconstructs() {
    let rho = werner(0.5).unwrap();
    let counts = sample_counts(&rho, 8192, 5).unwrap();
    let back = TomographyCounts::from_json_str(&counts.to_json_string()).unwrap();
    let rec = reconstruct(&estimate_correlations(&back)).unwrap();
    assert!(fidelity(&rec.state, &rho).unwrap() >= 0.98);
}
