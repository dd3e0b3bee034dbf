//! Continuum tail masses and certified lattice tail sums for each family.

use longedge::connection::{tail_mass_continuum, tail_sum_lattice, ConnectionFunction, LatticeDomain};
use longedge::geometry::NormKind;

fn main() -> longedge::Result<()> {
    let families = [
        ConnectionFunction::F { alpha: 3.0 },
        ConnectionFunction::G1 { lambda: 1.0 },
        ConnectionFunction::G2 { lambda: 1.0, alpha: 2.0 },
        ConnectionFunction::W { m: 1.0, alpha: 1.0 },
    ];
    for g in families {
        let c = tail_mass_continuum(&g, 2, NormKind::TwoNorm, 0.5)?;
        let l = tail_sum_lattice(&g, 2, 0.5, LatticeDomain::Full, 1e-10)?;
        println!(
            "{g:?}\n  continuum G(0.5) = {:.10} ({:?})\n  lattice   T(0.5) = {:.10} +- {:.1e}",
            c.value, c.method, l.value, l.truncation_error
        );
    }
    Ok(())
}
