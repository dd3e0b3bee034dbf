//! Norming sequences for the Fréchet, Gumbel and Weibull regimes.

use longedge::geometry::NormKind;
use longedge::norming::{self, gumbel_g1_lambert_d2};
use longedge::Model;

fn main() -> longedge::Result<()> {
    let f = norming::frechet_schedule(1, 3.0, 1.0, Model::Continuous, NormKind::OneNorm)?;
    let w = norming::weibull_schedule(1, 1.0, 1.0, 1.0, NormKind::OneNorm)?;
    let g1 = norming::gumbel_g1_schedule(2, 1.0, Model::Continuous, 1.0, NormKind::TwoNorm)?;
    let g2 = norming::gumbel_g2_schedule(1, 1.0, 1.0, Model::Continuous, 1.0, NormKind::OneNorm)?;
    println!("Frechet K = {:.6}, Weibull K = {:.6}", f.k, w.k);
    println!("{:>9} {:>10} {:>10} {:>10} {:>12} {:>10}", "n", "F c_n", "W c_n", "G1 b~_n", "Lambert b~", "G2 K_n");
    for n in [10u64, 100, 1_000, 10_000, 100_000] {
        let (_, lb) = gumbel_g1_lambert_d2(1.0, n)?;
        println!(
            "{n:>9} {:>10.4} {:>10.5} {:>10.6} {:>12.6} {:>10.5}",
            f.c(n)?,
            w.c(n)?,
            g1.b_tilde(n)?,
            lb,
            g2.shift_at(n)?
        );
    }
    Ok(())
}
