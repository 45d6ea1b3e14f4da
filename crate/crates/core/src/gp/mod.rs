//! Stationary Gaussian-process baseline with plug-in maximum-likelihood
//! hyperparameters and closed-form expected improvement.
//!
//! Correlation is the anisotropic Gaussian `exp(-sum_k theta_k (x_k - x'_k)^2)`.
//! A relative nugget `omega` adds `sigma_h^2 * omega` of independent noise. The
//! constant trend and process variance are profiled out of the likelihood, so
//! the search runs only over `log theta` and `log omega`.

mod optim;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;

pub use optim::nelder_mead;

use crate::design::DesignMatrix;
use crate::error::{invalid, Error, Result};
use crate::stats::{normal_cdf, normal_pdf};

#[derive(Debug, Clone, PartialEq)]
pub struct GpHyperParams {
    pub theta: Vec<f64>,
    pub sigma2_process: f64,
    pub nugget: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictiveMoment {
    pub mean: f64,
    pub sd: f64,
}

/// Likelihood search settings.
#[derive(Debug, Clone, PartialEq)]
pub struct GpOptions {
    pub nugget_floor: f64,
    pub nugget_max: f64,
    pub theta_lower: f64,
    pub theta_upper: f64,
    /// Random starts; `None` uses `5 + 2d`.
    pub starts: Option<usize>,
    /// Likelihood evaluations per start.
    pub search_budget: usize,
}

impl Default for GpOptions {
    fn default() -> Self {
        Self {
            nugget_floor: 1e-8,
            nugget_max: 1.0,
            theta_lower: 1e-2,
            theta_upper: 1e3,
            starts: None,
            search_budget: 300,
        }
    }
}

pub fn gauss_corr(x: &[f64], x2: &[f64], theta: &[f64]) -> f64 {
    let s: f64 = x
        .iter()
        .zip(x2)
        .zip(theta)
        .map(|((a, b), t)| t * (a - b) * (a - b))
        .sum();
    (-s).exp()
}

fn correlation_matrix(x: &DesignMatrix, theta: &[f64], nugget: f64) -> DMatrix<f64> {
    let n = x.n();
    let mut r = DMatrix::zeros(n, n);
    for i in 0..n {
        r[(i, i)] = 1.0 + nugget;
        for j in 0..i {
            let c = gauss_corr(x.row(i), x.row(j), theta);
            r[(i, j)] = c;
            r[(j, i)] = c;
        }
    }
    r
}

/// Profile likelihood at fixed correlation parameters, with the pieces needed
/// for prediction.
#[derive(Debug, Clone)]
pub struct ProfileFit {
    pub log_likelihood: f64,
    pub mean: f64,
    pub sigma2: f64,
    chol: Cholesky<f64, Dyn>,
    weights: DVector<f64>,
}

/// Concentrated log likelihood with the trend and process variance at their
/// closed-form maximizers.
pub fn profile_log_likelihood(x: &DesignMatrix, y: &[f64], theta: &[f64], nugget: f64) -> Result<ProfileFit> {
    let n = x.n();
    let r = correlation_matrix(x, theta, nugget);
    let chol = match r.clone().cholesky() {
        Some(c) => c,
        None => return Err(ill_conditioned(&r)),
    };
    let yv = DVector::from_column_slice(y);
    let ones = DVector::from_element(n, 1.0);
    let ri_y = chol.solve(&yv);
    let ri_1 = chol.solve(&ones);
    let mean = ones.dot(&ri_y) / ones.dot(&ri_1);
    let centered = &yv - &ones * mean;
    let weights = chol.solve(&centered);
    let sigma2 = (centered.dot(&weights) / n as f64).max(0.0);
    let log_det: f64 = 2.0 * chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>();
    let nf = n as f64;
    let log_likelihood =
        -0.5 * nf * (std::f64::consts::TAU * sigma2.max(f64::MIN_POSITIVE)).ln() - 0.5 * log_det - 0.5 * nf;
    Ok(ProfileFit {
        log_likelihood,
        mean,
        sigma2,
        chol,
        weights,
    })
}

fn ill_conditioned(r: &DMatrix<f64>) -> Error {
    let eig = r.clone().symmetric_eigenvalues();
    let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    Error::IllConditioned { condition }
}

/// A fitted GP: hyperparameters plus the factorized correlation matrix.
#[derive(Debug, Clone)]
pub struct GpModel {
    x: DesignMatrix,
    params: GpHyperParams,
    log_likelihood: f64,
    chol: Cholesky<f64, Dyn>,
    weights: DVector<f64>,
}

impl GpModel {
    pub fn params(&self) -> &GpHyperParams {
        &self.params
    }

    pub fn log_likelihood(&self) -> f64 {
        self.log_likelihood
    }

    fn from_profile(x: &DesignMatrix, theta: Vec<f64>, nugget: f64, fit: ProfileFit) -> Self {
        Self {
            x: x.clone(),
            params: GpHyperParams {
                theta,
                sigma2_process: fit.sigma2,
                nugget,
                mean: fit.mean,
            },
            log_likelihood: fit.log_likelihood,
            chol: fit.chol,
            weights: fit.weights,
        }
    }
}

/// Maximizes the profile likelihood over `(theta, nugget)` by multi-start
/// Nelder-Mead in log space.
pub fn gp_fit<R: Rng + ?Sized>(x: &DesignMatrix, y: &[f64], options: &GpOptions, rng: &mut R) -> Result<GpModel> {
    let (n, d) = (x.n(), x.d());
    if n < 2 || y.len() != n {
        return Err(invalid("GP fit needs at least two points with matching responses"));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(invalid("responses must be finite"));
    }
    if !(options.nugget_floor > 0.0) || options.nugget_floor > options.nugget_max {
        return Err(invalid("nugget bounds must satisfy 0 < floor <= max"));
    }
    let nugget_lo = options.nugget_floor.ln();
    let nugget_hi = options.nugget_max.ln();
    let mut lower = vec![options.theta_lower.ln(); d];
    let mut upper = vec![options.theta_upper.ln(); d];
    lower.push(nugget_lo);
    upper.push(nugget_hi);

    // a constant response pins the process variance at zero
    if y.iter().all(|v| *v == y[0]) {
        let theta = vec![1.0; d];
        let fit = profile_log_likelihood(x, y, &theta, options.nugget_floor)?;
        return Ok(GpModel::from_profile(x, theta, options.nugget_floor, fit));
    }

    let unpack = |p: &[f64]| -> (Vec<f64>, f64) { (p[..d].iter().map(|v| v.exp()).collect(), p[d].exp()) };
    let mut objective = |p: &[f64]| -> f64 {
        let (theta, nugget) = unpack(p);
        match profile_log_likelihood(x, y, &theta, nugget) {
            Ok(f) => -f.log_likelihood,
            Err(_) => f64::INFINITY,
        }
    };

    let starts = options.starts.unwrap_or(5 + 2 * d).max(1);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for _ in 0..starts {
        let start: Vec<f64> = lower
            .iter()
            .zip(&upper)
            .map(|(l, u)| rng.random_range(*l..=*u))
            .collect();
        let (p, v) = nelder_mead(&mut objective, &start, &lower, &upper, 1.0, options.search_budget);
        if best.as_ref().is_none_or(|b| v < b.1) {
            best = Some((p, v));
        }
    }
    let (p, v) = best.unwrap();
    let (theta, nugget) = unpack(&p);
    if !v.is_finite() {
        let r = correlation_matrix(x, &theta, nugget);
        return Err(ill_conditioned(&r));
    }
    let fit = profile_log_likelihood(x, y, &theta, nugget)?;
    Ok(GpModel::from_profile(x, theta, nugget, fit))
}

/// Kriging mean and standard deviation at `x` with the trend treated as known.
pub fn gp_predict(model: &GpModel, x: &[f64]) -> PredictiveMoment {
    let p = &model.params;
    let r = DVector::from_iterator(model.x.n(), model.x.rows().map(|xi| gauss_corr(x, xi, &p.theta)));
    let mean = p.mean + r.dot(&model.weights);
    let v = model
        .chol
        .l_dirty()
        .solve_lower_triangular(&r)
        .expect("cholesky factor has a positive diagonal");
    let var = p.sigma2_process * (1.0 + p.nugget - v.norm_squared());
    PredictiveMoment {
        mean,
        sd: var.max(0.0).sqrt(),
    }
}

/// Expected improvement below `f_min` for a normal prediction `N(y_hat, s^2)`.
pub fn ei_closed_form(f_min: f64, y_hat: f64, s: f64) -> f64 {
    let diff = f_min - y_hat;
    if s <= 0.0 {
        return diff.max(0.0);
    }
    let z = diff / s;
    (diff * normal_cdf(z) + s * normal_pdf(z)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn correlation_values() {
        assert_eq!(gauss_corr(&[0.3, 0.4], &[0.3, 0.4], &[2.0, 3.0]), 1.0);
        assert!((gauss_corr(&[0.0], &[1.0], &[1.0]) - (-1f64).exp()).abs() < 1e-15);
        assert!((gauss_corr(&[0.0, 0.0], &[1.0, 1.0], &[1.0, 2.0]) - 0.049_787_068_367_863_944).abs() < 1e-15);
    }

    #[test]
    fn ei_tabulated() {
        assert!((ei_closed_form(0.0, 0.0, 1.0) - 0.398_942_280_401_432_7).abs() < 1e-12);
        assert_eq!(ei_closed_form(1.0, 0.0, 0.0), 1.0);
        assert_eq!(ei_closed_form(-1.0, 0.0, 0.0), 0.0);
        assert!((ei_closed_form(-1.0, 0.0, 1.0) - 0.083_315_470_587_686_3).abs() < 1e-9);
    }

    #[test]
    fn constant_response() {
        let x = DesignMatrix::from_rows(1, &[vec![0.1], vec![0.5], vec![0.9]]).unwrap();
        let m = gp_fit(&x, &[2.0; 3], &GpOptions::default(), &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(m.params().sigma2_process, 0.0);
        for t in [0.0, 0.3, 0.77] {
            let p = gp_predict(&m, &[t]);
            assert!((p.mean - 2.0).abs() < 1e-12);
            assert_eq!(p.sd, 0.0);
        }
    }

    #[test]
    fn near_interpolation_two_points() {
        let x = DesignMatrix::from_rows(1, &[vec![0.0], vec![1.0]]).unwrap();
        let y = [1.0, -1.0];
        let opts = GpOptions {
            theta_lower: 100.0,
            ..GpOptions::default()
        };
        let m = gp_fit(&x, &y, &opts, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        for (xi, yi) in [(0.0, 1.0), (1.0, -1.0)] {
            let p = gp_predict(&m, &[xi]);
            assert!((p.mean - yi).abs() <= 3.0 * p.sd + 1e-9, "{p:?}");
        }
    }

    #[test]
    fn far_point_reverts_to_prior() {
        let x = DesignMatrix::from_rows(1, &[vec![0.1], vec![0.2], vec![0.35], vec![0.4]]).unwrap();
        let y = [0.3, -0.2, 0.5, 0.1];
        let m = gp_fit(&x, &y, &GpOptions::default(), &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let p = &m.params;
        let far = gp_predict(&m, &[1e6]);
        assert!((far.mean - p.mean).abs() < 1e-12);
        assert!((far.sd.powi(2) - p.sigma2_process * (1.0 + p.nugget)).abs() < 1e-12);
    }

    #[test]
    fn ill_conditioned_reports_condition() {
        let x = DesignMatrix::from_rows(1, &[vec![0.5], vec![0.5]]).unwrap();
        match profile_log_likelihood(&x, &[0.0, 1.0], &[1.0], 0.0) {
            Err(Error::IllConditioned { condition }) => assert!(condition > 1e12),
            other => panic!("expected ill-conditioned, got {:?}", other.map(|f| f.log_likelihood)),
        }
    }
}
