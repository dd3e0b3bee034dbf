//! Longest edge at a typical point: exact samples against the analytic CDF.

use longedge::analytic::typical_edge_cdf;
use longedge::connection::ConnectionFunction;
use longedge::geometry::NormKind;
use longedge::sampler::typical::TypicalEdgeSampler;
use longedge::sampler::{run_replicates, stream};
use longedge::stats::{dkw_epsilon, ks_distance_with_atoms, EmpiricalDistribution};

fn main() -> longedge::Result<()> {
    let g = ConnectionFunction::G1 { lambda: 1.0 };
    let (rho, d, norm) = (2.0, 2, NormKind::TwoNorm);
    let s = TypicalEdgeSampler::new(g, rho, d, norm)?;
    let m = 20_000;
    let xs = run_replicates(m, 1, 4, |seed| s.sample(&mut seed.rng(stream::TYPICAL)))?;
    let emp = EmpiricalDistribution::new(xs)?;
    let cdf = |x: f64| if x < 0.0 { 0.0 } else { typical_edge_cdf(&g, rho, d, norm, x).map(|p| p.value).unwrap_or(f64::NAN) };
    let left = |x: f64| if x <= 0.0 { 0.0 } else { cdf(x) };
    println!("P(no edge) = {:.5}", s.no_edge_probability());
    for r in [1.0, 3.0, 5.0, 7.0] {
        println!("r = {r}: ecdf {:.4}  exact {:.4}", emp.ecdf(r), cdf(r));
    }
    println!(
        "KS = {:.4}, DKW band (1%) = {:.4}",
        ks_distance_with_atoms(&emp, cdf, left),
        dkw_epsilon(m as usize, 0.01)
    );
    Ok(())
}
