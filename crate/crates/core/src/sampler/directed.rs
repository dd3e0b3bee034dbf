use rand::Rng;

use super::undirected::UndirectedSampler;
use super::{exp1, stream, ExceedanceRecord, SeedSpec};
use crate::connection::{ConnectionFunction, ShellTail};
use crate::error::{Error, Result};
use crate::geometry::{NormKind, Window};
use crate::model::Model;

/// Exact sampler for directed percolation on ℤ^d (`Dlrp`) or on the quadrant
/// (`Dlrpq`): per-vertex maxima are independent with CDF
/// `exp(-Σ_{k>s} count(k) w(k))` and are drawn by inverse transform.
#[derive(Debug, Clone)]
pub struct DirectedSampler {
    tail: ShellTail,
    window: Window,
    sites: u64,
}

impl DirectedSampler {
    pub fn new(g: ConnectionFunction, d: u32, n: u64, variant: Model, norm: NormKind) -> Result<Self> {
        norm.require_one_norm()?;
        let domain = match variant {
            Model::Dlrp | Model::Dlrpq => variant.lattice_domain().unwrap(),
            _ => return Err(Error::param("directed sampler needs the dlrp or dlrpq model")),
        };
        let window = Window::new(d, n)?;
        let sites = window.vertex_count()?;
        const SITE_BUDGET: u128 = 1 << 32;
        if sites > SITE_BUDGET {
            return Err(Error::Budget {
                what: "window sites".into(),
                required: sites,
                limit: SITE_BUDGET,
            });
        }
        Ok(DirectedSampler {
            tail: ShellTail::new(g, d, domain)?,
            window,
            sites: sites as u64,
        })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// One per-vertex maximum; 0 means no outgoing edge.
    pub fn vertex_max<R: Rng>(&self, rng: &mut R) -> u64 {
        self.tail.inverse(exp1(rng)).unwrap_or(0)
    }

    pub fn sample_with_maxima(&self, seed: SeedSpec, threshold: f64) -> (ExceedanceRecord, Vec<u64>) {
        let mut rng = seed.rng(stream::DIRECTED);
        let maxima: Vec<u64> = (0..self.sites).map(|_| self.vertex_max(&mut rng)).collect();
        let rec = record_from_maxima(seed.replicate, &maxima, threshold);
        (rec, maxima)
    }

    pub fn sample(&self, seed: SeedSpec, threshold: f64) -> ExceedanceRecord {
        self.sample_with_maxima(seed, threshold).0
    }
}

fn record_from_maxima(replicate: u64, maxima: &[u64], threshold: f64) -> ExceedanceRecord {
    let best = maxima.iter().copied().max().unwrap_or(0);
    ExceedanceRecord {
        replicate,
        e_star: (best > 0).then_some(best as f64),
        w_count: maxima.iter().filter(|&&m| m as f64 > threshold).count() as u64,
        w_prime_count: None,
        threshold_used: threshold,
        truncation_certificate: 0.0,
    }
}

pub fn sample_directed(
    g: &ConnectionFunction,
    d: u32,
    n: u64,
    variant: Model,
    threshold: f64,
    seed: SeedSpec,
) -> Result<ExceedanceRecord> {
    Ok(DirectedSampler::new(*g, d, n, variant, NormKind::OneNorm)?.sample(seed, threshold))
}

/// Longest edges of the three lattice models on one probability space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledRecord {
    pub quadrant: f64,
    pub undirected: f64,
    pub directed: f64,
}

/// Couples directed quadrant, undirected and directed percolation on ℤ.
///
/// The undirected sample is drawn first. A quadrant edge `x → x+k` is the
/// undirected edge `{x, x+k}`, so the quadrant maximum only sees window pairs
/// and rightward outside edges. A directed edge `x → y` with `y > x` or `y`
/// outside the window is likewise shared; the remaining edges `x → y` with
/// `y < x` inside the window get fresh independent coins. Every marginal is
/// exact and `quadrant ≤ undirected ≤ directed` holds pathwise.
#[derive(Debug, Clone)]
pub struct CoupledSampler {
    undirected: UndirectedSampler,
}

impl CoupledSampler {
    pub fn new(g: ConnectionFunction, n: u64) -> Result<Self> {
        Ok(CoupledSampler {
            undirected: UndirectedSampler::new(g, 1, n, NormKind::OneNorm, false)?,
        })
    }

    pub fn sample(&self, seed: SeedSpec) -> CoupledRecord {
        let parts = self.undirected.sample_d1_parts(seed);
        let mut reversed = seed.rng(stream::REVERSED);
        let extra = self.undirected.window_pair_max(&mut reversed);
        let quadrant = parts.window_max.max(parts.right_max);
        let undirected = quadrant.max(parts.left_max);
        CoupledRecord {
            quadrant: quadrant as f64,
            undirected: undirected as f64,
            directed: undirected.max(extra) as f64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;
    use std::f64::consts::PI;

    #[test]
    fn no_edge_frequency_n0() {
        let g = ConnectionFunction::F { alpha: 2.0 };
        let s = DirectedSampler::new(g, 1, 0, Model::Dlrpq, NormKind::OneNorm).unwrap();
        let m = 100_000u64;
        let zeros = (0..m).filter(|&i| s.sample(SeedSpec::new(5, i), 0.0).e_star.is_none()).count() as f64;
        let p = (-PI * PI / 6.0).exp();
        let sigma = (p * (1.0 - p) / m as f64).sqrt();
        assert!((zeros / m as f64 - p).abs() < 4.0 * sigma);
    }

    #[test]
    fn tiny_lambda_everyone_exceeds() {
        let g = ConnectionFunction::G1 { lambda: 1e-6 };
        let s = DirectedSampler::new(g, 2, 2, Model::Dlrp, NormKind::OneNorm).unwrap();
        let r = s.sample(SeedSpec::new(1, 0), 0.5);
        assert_eq!(r.w_count, 25);
        assert_eq!(r.truncation_certificate, 0.0);
    }

    #[test]
    fn record_consistency() {
        let g = ConnectionFunction::F { alpha: 2.5 };
        let s = DirectedSampler::new(g, 2, 3, Model::Dlrp, NormKind::OneNorm).unwrap();
        for i in 0..300 {
            let r = s.sample(SeedSpec::new(9, i), 6.0);
            assert_eq!(r.w_count >= 1, r.e_star_or_zero() > 6.0);
        }
    }

    #[test]
    fn coupling_is_ordered() {
        let c = CoupledSampler::new(ConnectionFunction::F { alpha: 2.0 }, 20).unwrap();
        for i in 0..500 {
            let r = c.sample(SeedSpec::new(2, i));
            assert!(r.quadrant <= r.undirected && r.undirected <= r.directed);
        }
    }

    #[test]
    fn coupled_marginals_match_directed_cdfs() {
        let g = ConnectionFunction::F { alpha: 2.0 };
        let n = 5;
        let c = CoupledSampler::new(g, n).unwrap();
        let m = 20_000;
        let recs: Vec<CoupledRecord> = (0..m).map(|i| c.sample(SeedSpec::new(4, i))).collect();
        for t in [3.0, 10.0, 40.0] {
            let fq = recs.iter().filter(|r| r.quadrant <= t).count() as f64 / m as f64;
            let fp = recs.iter().filter(|r| r.directed <= t).count() as f64 / m as f64;
            let q = analytic::directed_max_cdf(&g, 1, n, t, Model::Dlrpq).unwrap().value;
            let p = analytic::directed_max_cdf(&g, 1, n, t, Model::Dlrp).unwrap().value;
            assert!((fq - q).abs() < 0.015, "t={t} {fq} {q}");
            assert!((fp - p).abs() < 0.015, "t={t} {fp} {p}");
        }
    }
}
