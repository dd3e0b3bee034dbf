//! Total variation and Wasserstein bounds for the exceedance count, and
//! their rate in n.

use longedge::analytic::poisson_bounds;
use longedge::connection::ConnectionFunction;
use longedge::geometry::NormKind;
use longedge::norming::frechet_schedule;
use longedge::stats::fit_rate;
use longedge::Model;

fn main() -> longedge::Result<()> {
    let g = ConnectionFunction::F { alpha: 3.0 };
    let s = frechet_schedule(1, 3.0, 1.0, Model::Continuous, NormKind::OneNorm)?;
    let mut pts = Vec::new();
    for n in [100u64, 1_000, 10_000, 100_000, 1_000_000] {
        let b = poisson_bounds(&g, 1.0, 1, NormKind::OneNorm, n, s.threshold(n, 1.0)?)?;
        println!("n = {n:>8}: beta_n {:.5}  dtv <= {:.3e}  dw <= {:.3e}", b.beta_n, b.dtv_bound, b.dw_bound);
        pts.push((n as f64, b.dtv_bound));
    }
    let fit = fit_rate(&pts)?;
    println!("slope {:.4} +- {:.1e}", fit.slope, fit.stderr);
    Ok(())
}
