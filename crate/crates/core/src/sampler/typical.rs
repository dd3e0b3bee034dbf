use rand::Rng;

use crate::connection::{self, ConnectionFunction};
use crate::error::{Error, Result};
use crate::geometry::NormKind;
use crate::special;

/// Exact inverse-CDF sampler for the longest edge at the origin under the
/// Palm measure. Outcome 0 stands for "no edge".
#[derive(Debug, Clone)]
pub struct TypicalEdgeSampler {
    g: ConnectionFunction,
    rho: f64,
    d: u32,
    norm: NormKind,
    g0: f64,
}

impl TypicalEdgeSampler {
    pub fn new(g: ConnectionFunction, rho: f64, d: u32, norm: NormKind) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::param("rho must be positive"));
        }
        let g0 = connection::tail_mass_closed_form(&g, d, norm, 0.0)?;
        Ok(TypicalEdgeSampler { g, rho, d, norm, g0 })
    }

    /// Probability of the atom at 0 (no neighbour at all).
    pub fn no_edge_probability(&self) -> f64 {
        (-self.rho * self.g0).exp()
    }

    fn tail(&self, r: f64) -> f64 {
        connection::tail_mass_closed_form(&self.g, self.d, self.norm, r).unwrap_or(0.0)
    }

    /// Maps a uniform `u ∈ (0,1)` to the sample.
    pub fn invert(&self, u: f64) -> Result<f64> {
        let y = -u.ln() / self.rho;
        if y >= self.g0 {
            return Ok(0.0);
        }
        let mut hi = self.g.support_radius().unwrap_or(1.0);
        while self.tail(hi) > y {
            hi *= 2.0;
            if hi > 1e300 {
                return Err(Error::Bracket { lo: 0.0, hi });
            }
        }
        // G is decreasing; match in log space to keep relative precision
        special::find_root(|r| self.tail(r).max(1e-300).ln() - y.ln(), 0.0, hi, 1e-14)
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Result<f64> {
        let u: f64 = 1.0 - rng.random::<f64>();
        self.invert(u)
    }
}

pub fn sample_typical_edge<R: Rng>(
    g: &ConnectionFunction,
    rho: f64,
    d: u32,
    norm: NormKind,
    rng: &mut R,
) -> Result<f64> {
    TypicalEdgeSampler::new(*g, rho, d, norm)?.sample(rng)
}
