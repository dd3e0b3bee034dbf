//! Undirected long-range percolation on ℤ²: sampled exceedance counts.

use longedge::connection::ConnectionFunction;
use longedge::geometry::NormKind;
use longedge::sampler::undirected::UndirectedSampler;
use longedge::sampler::run_replicates;
use longedge::stats::IntHistogram;

fn main() -> longedge::Result<()> {
    let g = ConnectionFunction::F { alpha: 4.0 };
    let s = UndirectedSampler::new(g, 2, 15, NormKind::OneNorm, false)?;
    let t = 25.0;
    let recs = run_replicates(1000, 21, 4, |seed| Ok(s.sample(seed, t)))?;
    let w = IntHistogram::from_values(recs.iter().map(|r| r.w_count));
    let wp = IntHistogram::from_values(recs.iter().map(|r| r.w_prime_count.unwrap_or(0)));
    println!("threshold {t}: W mean {:.3}, W' mean {:.3}", w.mean(), wp.mean());
    println!("W histogram  {:?}", w.counts);
    println!("W' histogram {:?}", wp.counts);
    Ok(())
}
