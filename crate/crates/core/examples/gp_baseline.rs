//! Fit the Gaussian-process baseline by maximum likelihood and use its
//! closed-form expected improvement.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use seqbart::design::{maximin_lhd, random_lhd, Placement};
use seqbart::gp::{ei_closed_form, gp_fit, gp_predict, GpOptions};
use seqbart::testbed::ronkkonen_2d;

fn main() -> seqbart::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let x = maximin_lhd(20, 2, &mut rng, 40)?;
    let y: Vec<f64> = x.rows().map(|r| ronkkonen_2d(r).unwrap()).collect();
    let model = gp_fit(&x, &y, &GpOptions::default(), &mut rng)?;
    let p = model.params();
    println!(
        "theta {:.3?}  nugget {:.2e}  process variance {:.4}  mean {:.4}  log-likelihood {:.3}",
        p.theta,
        p.nugget,
        p.sigma2_process,
        p.mean,
        model.log_likelihood()
    );

    let f_min = y.iter().cloned().fold(f64::INFINITY, f64::min);
    let candidates = random_lhd(500, 2, &mut rng, Placement::UniformInStratum)?;
    let (best, ei) = candidates
        .rows()
        .map(|c| {
            let m = gp_predict(&model, c);
            (c.to_vec(), ei_closed_form(f_min, m.mean, m.sd))
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    println!("f_min {f_min:.4}; next point {best:.3?} with EI {ei:.5}");
    Ok(())
}
