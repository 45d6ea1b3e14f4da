//! Box-constrained Nelder-Mead used for likelihood maximization.

/// Minimizes `f` from `start`, clamping every trial point into `[lower, upper]`.
/// Returns the best point and value after at most `budget` evaluations.
pub fn nelder_mead(
    f: &mut dyn FnMut(&[f64]) -> f64,
    start: &[f64],
    lower: &[f64],
    upper: &[f64],
    step: f64,
    budget: usize,
) -> (Vec<f64>, f64) {
    let p = start.len();
    let clamp = |x: &mut Vec<f64>| {
        for ((v, l), u) in x.iter_mut().zip(lower).zip(upper) {
            *v = v.clamp(*l, *u);
        }
    };
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(p + 1);
    let mut x0 = start.to_vec();
    clamp(&mut x0);
    let f0 = eval(&x0, &mut evals);
    simplex.push((x0.clone(), f0));
    for i in 0..p {
        let mut x = x0.clone();
        x[i] += if x[i] + step <= upper[i] { step } else { -step };
        clamp(&mut x);
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    while evals < budget {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[p].1);
        if (worst - best).abs() <= 1e-10 * (1.0 + best.abs()) && best.is_finite() {
            break;
        }
        let mut centroid = vec![0.0; p];
        for (x, _) in &simplex[..p] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / p as f64;
            }
        }
        let towards = |coef: f64| -> Vec<f64> {
            let mut x: Vec<f64> = centroid
                .iter()
                .zip(&simplex[p].0)
                .map(|(c, w)| c + coef * (c - w))
                .collect();
            clamp(&mut x);
            x
        };
        let xr = towards(1.0);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = towards(2.0);
            let fe = eval(&xe, &mut evals);
            simplex[p] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[p - 1].1 {
            simplex[p] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[p].1 {
                let xc = towards(0.5);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = towards(-0.5);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc < simplex[p].1.min(fr) {
                simplex[p] = (xc, fc);
            } else {
                let x_best = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let mut x: Vec<f64> = x_best.iter().zip(&item.0).map(|(b, v)| b + 0.5 * (v - b)).collect();
                    clamp(&mut x);
                    let v = eval(&x, &mut evals);
                    *item = (x, v);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_rosenbrock_minimum() {
        let mut f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let (x, v) = nelder_mead(&mut f, &[-1.2, 1.0], &[-5.0, -5.0], &[5.0, 5.0], 0.5, 5000);
        assert!(v < 1e-8, "value {v} at {x:?}");
    }

    #[test]
    fn respects_bounds() {
        let mut f = |x: &[f64]| x[0];
        let (x, _) = nelder_mead(&mut f, &[0.5], &[0.0], &[1.0], 0.2, 200);
        assert_eq!(x[0], 0.0);
    }
}
