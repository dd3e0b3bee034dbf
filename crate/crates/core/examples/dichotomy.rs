//! The d = 1, α = 2 undirected chain: exact exponents and their limit on
//! both sides of the switch point.

use longedge::analytic::{dichotomy_limit, ZStarLaw};

fn main() -> longedge::Result<()> {
    let k = 1.0;
    let law = ZStarLaw::new(k);
    println!("scale c_n = n, switch point r = {}", law.switch_point());
    println!("{:>6} {:>12} {:>12} {:>10}", "r", "extrapolated", "closed form", "gap");
    for r in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let rep = dichotomy_limit(r, k, 0.01)?;
        println!("{r:>6} {:>12.7} {:>12.7} {:>10.2e}", rep.mu, law.mu(r), rep.convergence);
    }
    Ok(())
}
