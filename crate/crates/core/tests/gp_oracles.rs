mod common;

use common::*;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use seqbart::design::{random_lhd, DesignMatrix, Placement};
use seqbart::gp::*;
use seqbart::seqopt::mc_expected_improvement;
use seqbart::stats::normal_cdf;

/// Simple-kriging mean and sd by explicit LU solves.
fn dense_predict(x: &DesignMatrix, y: &[f64], p: &GpHyperParams, at: &[f64]) -> (f64, f64) {
    let n = x.n();
    let r = DMatrix::from_fn(n, n, |i, j| {
        gauss_corr(x.row(i), x.row(j), &p.theta) + if i == j { p.nugget } else { 0.0 }
    });
    let k = DVector::from_fn(n, |i, _| gauss_corr(at, x.row(i), &p.theta));
    let lu = r.lu();
    let resid = DVector::from_fn(n, |i, _| y[i] - p.mean);
    let mean = p.mean + k.dot(&lu.solve(&resid).unwrap());
    let var = p.sigma2_process * (1.0 + p.nugget - k.dot(&lu.solve(&k).unwrap()));
    (mean, var.max(0.0).sqrt())
}

fn dense_profile(x: &DesignMatrix, y: &[f64], theta: &[f64], nugget: f64) -> (f64, f64) {
    let n = x.n();
    let r = DMatrix::from_fn(n, n, |i, j| {
        gauss_corr(x.row(i), x.row(j), theta) + if i == j { nugget } else { 0.0 }
    });
    let lu = r.clone().lu();
    let one = DVector::from_element(n, 1.0);
    let yv = DVector::from_column_slice(y);
    let mu = one.dot(&lu.solve(&yv).unwrap()) / one.dot(&lu.solve(&one).unwrap());
    let e = &yv - &one * mu;
    (mu, e.dot(&lu.solve(&e).unwrap()) / n as f64)
}

#[test]
fn prediction_matches_dense_linear_algebra() {
    let mut r = rng(21);
    for case in 0..20 {
        let d = r.random_range(1..=3);
        let n = r.random_range(3..=10);
        let x = random_lhd(n, d, &mut r, Placement::UniformInStratum).unwrap();
        let y: Vec<f64> = x
            .rows()
            .map(|p| p.iter().map(|v| (4.0 * v).sin()).sum::<f64>() + r.random_range(-0.1..0.1))
            .collect();
        let model = gp_fit(&x, &y, &GpOptions::default(), &mut r).unwrap();
        let p = model.params();
        let (mu, s2) = dense_profile(&x, &y, &p.theta, p.nugget);
        assert!(
            (mu - p.mean).abs() < 1e-8 * (1.0 + mu.abs()),
            "case {case}: mean {mu} vs {}",
            p.mean
        );
        assert!(
            (s2 - p.sigma2_process).abs() < 1e-8 * (1.0 + s2),
            "case {case}: var {s2} vs {}",
            p.sigma2_process
        );
        for _ in 0..5 {
            let at: Vec<f64> = (0..d).map(|_| r.random::<f64>()).collect();
            let pred = gp_predict(&model, &at);
            let (m, s) = dense_predict(&x, &y, p, &at);
            assert!((pred.mean - m).abs() < 1e-8, "case {case}: {} vs {m}", pred.mean);
            assert!((pred.sd - s).abs() < 1e-8, "case {case}: {} vs {s}", pred.sd);
        }
    }
}

#[test]
fn fitted_likelihood_beats_generating_parameters() {
    let mut r = rng(22);
    let n = 30;
    let x = random_lhd(n, 1, &mut r, Placement::UniformInStratum).unwrap();
    let (theta, nugget) = (5.0, 1e-6);
    let k = DMatrix::from_fn(n, n, |i, j| {
        gauss_corr(x.row(i), x.row(j), &[theta]) + if i == j { nugget } else { 0.0 }
    });
    let l = k.cholesky().unwrap().unpack();
    let z = DVector::from_vec(normal_draws(n, 0.0, 1.0, &mut r));
    let y: Vec<f64> = (l * z).iter().map(|v| 2.0 + 0.7 * v).collect();
    let truth = profile_log_likelihood(&x, &y, &[theta], nugget).unwrap().log_likelihood;
    let model = gp_fit(&x, &y, &GpOptions::default(), &mut r).unwrap();
    assert!(
        model.log_likelihood() >= truth - 1e-6,
        "{} < {truth}",
        model.log_likelihood()
    );
}

#[test]
fn near_interpolation_with_small_nugget() {
    let x = DesignMatrix::from_rows(2, &[vec![0.1, 0.1], vec![0.9, 0.2], vec![0.4, 0.8], vec![0.7, 0.6]]).unwrap();
    let y = [1.0, -0.5, 0.3, 2.0];
    let opts = GpOptions {
        nugget_max: 1e-6,
        ..GpOptions::default()
    };
    let model = gp_fit(&x, &y, &opts, &mut rng(23)).unwrap();
    for (row, yi) in x.rows().zip(y) {
        let p = gp_predict(&model, row);
        assert!((p.mean - yi).abs() < 1e-3, "{} vs {yi}", p.mean);
        assert!(p.sd < 1e-2 * model.params().sigma2_process.sqrt());
    }
}

#[test]
fn closed_form_ei_table() {
    assert!((ei_closed_form(0.0, 0.0, 1.0) - 0.398_942_280_401_432_7).abs() < 1e-6);
    assert_eq!(ei_closed_form(1.0, 0.0, 0.0), 1.0);
    assert!((ei_closed_form(-1.0, 0.0, 1.0) - 0.083_315_470_587_686_3).abs() < 1e-6);
    assert!((normal_cdf(-1.0) - 0.158_655_253_931_457_07).abs() < 1e-15);
}

#[test]
fn monte_carlo_ei_agrees_with_closed_form() {
    let mut r = rng(24);
    for s in [0.1, 1.0] {
        for z in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            let y_hat = 0.3;
            let f_min = y_hat + z * s;
            let draws = normal_draws(1_000_000, y_hat, s, &mut r);
            let imp: Vec<f64> = draws.iter().map(|d| (f_min - d).max(0.0)).collect();
            let (_, se) = mean_and_se(&imp);
            let mc = mc_expected_improvement(&draws, f_min).unwrap();
            let exact = ei_closed_form(f_min, y_hat, s);
            assert!((mc - exact).abs() <= 3.0 * se, "s={s} z={z}: {mc} vs {exact} (se {se})");
        }
    }
}
