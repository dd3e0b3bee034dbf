//! Quadrant, undirected and directed percolation on ℤ drawn on one
//! probability space.

use longedge::analytic::{directed_max_cdf, undirected_cdf_d1};
use longedge::connection::ConnectionFunction;
use longedge::sampler::directed::CoupledSampler;
use longedge::sampler::run_replicates;
use longedge::Model;

fn main() -> longedge::Result<()> {
    let g = ConnectionFunction::F { alpha: 2.0 };
    let n = 50;
    let s = CoupledSampler::new(g, n)?;
    let recs = run_replicates(2000, 3, 4, |seed| Ok(s.sample(seed)))?;
    let ordered = recs.iter().filter(|r| r.quadrant <= r.undirected && r.undirected <= r.directed).count();
    println!("ordered in {ordered} of {} replicates", recs.len());

    println!("{:>8} {:>10} {:>10} {:>10}", "t", "dLRPq", "LRP", "dLRP");
    for t in [10.0, 50.0, 200.0, 1000.0] {
        let q = directed_max_cdf(&g, 1, n, t, Model::Dlrpq)?.value;
        let u = undirected_cdf_d1(&g, n, t)?.0;
        let p = directed_max_cdf(&g, 1, n, t, Model::Dlrp)?.value;
        let frac = |f: fn(&longedge::sampler::directed::CoupledRecord) -> f64| {
            recs.iter().filter(|r| f(r) <= t).count() as f64 / recs.len() as f64
        };
        println!("{t:>8} {q:>10.4} {u:>10.4} {p:>10.4}");
        println!("{:>8} {:>10.4} {:>10.4} {:>10.4}", "mc", frac(|r| r.quadrant), frac(|r| r.undirected), frac(|r| r.directed));
    }
    Ok(())
}
