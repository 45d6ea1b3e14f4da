//! Random versus maximin Latin hypercubes, and the corner-augmented
//! starting design used by the sequential search.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use seqbart::design::{augment_corners, maximin_lhd, min_interpoint_distance, random_lhd, Placement};

fn main() -> seqbart::Result<()> {
    let (n, d) = (10, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    let random = random_lhd(n, d, &mut rng, Placement::UniformInStratum)?;
    let maximin = maximin_lhd(n, d, &mut rng, 2 * n)?;
    println!("random LHD   min distance {:.4}", min_interpoint_distance(&random)?);
    println!("maximin LHD  min distance {:.4}", min_interpoint_distance(&maximin)?);
    assert!(random.is_latin_hypercube() && maximin.is_latin_hypercube());

    let start = augment_corners(&maximin);
    println!("\nstarting design ({} points):", start.n());
    for row in start.rows() {
        println!("  {:.3?}", row);
    }
    Ok(())
}
