//! Random connection model with a polynomial connection function: the
//! normalized longest edge and the exceedance count.

use longedge::config::{ExperimentConfig, Padding, Threshold};
use longedge::connection::ConnectionFunction;
use longedge::geometry::NormKind;
use longedge::runner;
use longedge::Model;

fn main() -> longedge::Result<()> {
    let cfg = ExperimentConfig {
        model: Model::Continuous,
        connection: ConnectionFunction::F { alpha: 3.0 },
        d: 1,
        rho: 1.0,
        norm: NormKind::OneNorm,
        n_grid: vec![50, 200],
        replicates: 500,
        threshold: Threshold::R(1.0),
        r_grid: vec![0.5, 1.0, 2.0, 4.0],
        padding: Padding::Ceiling(1e-4),
        seed: 7,
        exact: Default::default(),
        allow_high_dim: false,
    };
    let (_, summary) = runner::simulate(&cfg, 4)?;
    for row in &summary.rows {
        println!(
            "n = {}: c_n = {:.3}, padding = {:.1}, certificate = {:.1e}, E W = {:.3} (beta_n = {:.3})",
            row.n,
            row.c_n.unwrap_or(f64::NAN),
            row.padding,
            row.certificate,
            row.w_mean,
            row.beta_n.unwrap_or(f64::NAN)
        );
        for p in &row.ecdf {
            let half = (-0.5 * p.r.powi(-2)).exp();
            println!("   r = {:<4} ecdf {:.3}  limit {:.3}  exp(-r^-2/2) {:.3}", p.r, p.ecdf, p.limit_cdf, half);
        }
    }
    Ok(())
}
