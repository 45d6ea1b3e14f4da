mod common;

use common::grid_minima;
use seqbart::testbed::*;

#[test]
fn gramacy_matches_extended_precision_reference() {
    let text = include_str!("data/gramacy_reference.csv");
    let mut count = 0;
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        let (x, y) = line.split_once(',').unwrap();
        let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
        let got = gramacy_lee_1d(x).unwrap();
        assert!((got - y).abs() <= 1e-12 * y.abs(), "x={x}: {got} vs {y}");
        count += 1;
    }
    assert_eq!(count, 1000);
}

#[test]
fn tabulated_values() {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9;
    assert!(close(gramacy_lee_1d(0.0).unwrap(), 0.0625));
    assert!(close(gramacy_lee_1d(0.25).unwrap(), 0.0));
    assert!(close(gramacy_lee_1d(GRAMACY_MIN_X).unwrap(), -0.869_011_134_989_5));
    assert!(close(bernstein_warp(0.5, &[0.0, 0.1, 0.2, 0.5, 1.0]), 0.2875));
    assert!(close(ronkkonen_2d(&[0.0, 0.0]).unwrap(), 0.9));
    assert!(close(ronkkonen_2d(&[1.0, 1.0]).unwrap(), 0.9));
    assert!(close(spike_4d(&[0.5; 4]).unwrap(), -8.0));
    assert!(close(spike_4d(&[1.0; 4]).unwrap(), -3.637_189_707_302_727));
    assert!(close(spike_4d(&[0.0; 4]).unwrap(), 3.637_189_707_302_727));
}

#[test]
fn ronkkonen_has_sixteen_global_minima() {
    let minima = grid_minima(|a, b| ronkkonen_2d(&[a, b]).unwrap(), 2001, RONKKONEN_MIN_Y, 1e-3);
    assert_eq!(minima.len(), 16, "{minima:?}");
    let best = minima
        .iter()
        .map(|&(a, b)| ronkkonen_2d(&[a, b]).unwrap())
        .fold(f64::INFINITY, f64::min);
    assert!(best >= RONKKONEN_MIN_Y - 1e-12 && best - RONKKONEN_MIN_Y < 1e-3);
}

#[test]
fn domain_errors() {
    assert!(gramacy_lee_1d(1.01).is_err());
    assert!(ronkkonen_2d(&[0.5, -0.1]).is_err());
    assert!(spike_4d(&[0.5; 3]).is_err());
    let sim = get_simulator("spike4d").unwrap();
    assert!(sim.evaluate(&[f64::NAN, 0.0, 0.0, 0.0]).is_err());
}
