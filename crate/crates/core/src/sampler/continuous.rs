use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::{geometric_skip, stream, ExceedanceRecord, GraphSample, SeedSpec};
use crate::connection::{self, ConnectionFunction};
use crate::error::{Error, Result};
use crate::geometry::NormKind;
use crate::special;

const MAX_DIM: usize = 8;
const POINT_BUDGET: f64 = 5e7;

/// Probability bound that truncating the Poisson process to `B_{n+R}`
/// changed the longest edge or the exceedance count:
/// `(ρ² + ρ)(2n)^d · ∫_{‖z‖>R} g`.
pub fn truncation_certificate(g: &ConnectionFunction, rho: f64, d: u32, norm: NormKind, n: u64, padding: f64) -> Result<f64> {
    let tail = connection::tail_mass_closed_form(g, d, norm, padding)?;
    Ok(((rho * rho + rho) * (2.0 * n as f64).powi(d as i32) * tail).min(1.0))
}

/// Smallest padding (up to root tolerance) whose certificate is at most
/// `ceiling`. For the `W` family this is `M`, with certificate 0.
pub fn padding_for_ceiling(g: &ConnectionFunction, rho: f64, d: u32, norm: NormKind, n: u64, ceiling: f64) -> Result<f64> {
    if !(ceiling > 0.0) {
        return Err(Error::param("certificate ceiling must be positive"));
    }
    if let Some(m) = g.support_radius() {
        return Ok(m);
    }
    let cert = |r: f64| truncation_certificate(g, rho, d, norm, n, r).unwrap_or(1.0);
    if cert(0.0) <= ceiling {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while cert(hi) > ceiling {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Certificate {
                certificate: cert(hi),
                ceiling,
            });
        }
    }
    let r = special::find_root(|r| cert(r).max(1e-300).ln() - ceiling.ln(), 0.0, hi, 1e-12)?;
    let mut r = r * (1.0 + 1e-9);
    while cert(r) > ceiling {
        r *= 1.0 + 1e-6;
    }
    Ok(r)
}

/// Random connection model sampler on `B_{n+R}` with window `B_n`.
///
/// Points are sorted by the Morton code of a regular grid, so every dyadic
/// block is a contiguous index range. From each window point the block tree
/// is descended; a block is resolved directly once `count · g(s_min) ≤ 1`,
/// where `s_min` is the distance to the block, by geometric skipping with
/// probability `g(s_min)` and thinning each candidate by `g(s)/g(s_min)`.
#[derive(Debug, Clone)]
pub struct ContinuousSampler {
    g: ConnectionFunction,
    rho: f64,
    d: usize,
    norm: NormKind,
    n: f64,
    half: f64,
    levels: u32,
    certificate: f64,
}

struct Layout {
    pos: Vec<f64>,
    codes: Vec<u64>,
    inside: Vec<bool>,
}

impl ContinuousSampler {
    pub fn new(
        g: ConnectionFunction,
        rho: f64,
        d: u32,
        norm: NormKind,
        n: u64,
        padding: f64,
        ceiling: Option<f64>,
    ) -> Result<Self> {
        g.validate(d)?;
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::param("rho must be positive"));
        }
        if d == 0 || d as usize > MAX_DIM {
            return Err(Error::param(format!("continuous sampler supports 1 <= d <= {MAX_DIM}")));
        }
        if !(padding >= 0.0 && padding.is_finite()) {
            return Err(Error::param("padding must be finite and nonnegative"));
        }
        let certificate = truncation_certificate(&g, rho, d, norm, n, padding)?;
        if let Some(c) = ceiling {
            if certificate > c {
                return Err(Error::Certificate { certificate, ceiling: c });
            }
        }
        let half = n as f64 + padding;
        let expected = rho * (2.0 * half).powi(d as i32);
        if expected > POINT_BUDGET {
            return Err(Error::Budget {
                what: "expected Poisson points".into(),
                required: expected as u128,
                limit: POINT_BUDGET as u128,
            });
        }
        let leaf = (2.0 / rho).powf(1.0 / d as f64);
        let max_levels = (63 / d).min(30);
        let levels = if half > 0.0 {
            ((2.0 * half / leaf).log2().ceil().max(0.0) as u32).min(max_levels)
        } else {
            0
        };
        Ok(ContinuousSampler {
            g,
            rho,
            d: d as usize,
            norm,
            n: n as f64,
            half,
            levels,
            certificate,
        })
    }

    pub fn certificate(&self) -> f64 {
        self.certificate
    }

    pub fn padding(&self) -> f64 {
        self.half - self.n
    }

    fn layout<R: Rng>(&self, rng: &mut R) -> Result<Layout> {
        let d = self.d;
        let mean = self.rho * (2.0 * self.half).powi(d as i32);
        let count = if mean > 0.0 {
            Poisson::new(mean).map_err(|e| Error::param(e.to_string()))?.sample(rng) as usize
        } else {
            0
        };
        let cells = 1u64 << self.levels;
        let width = 2.0 * self.half;
        let mut raw: Vec<(u64, usize)> = Vec::with_capacity(count);
        let mut coords = vec![0.0; count * d];
        for i in 0..count {
            let mut code = 0u64;
            let mut cell = [0u64; MAX_DIM];
            for j in 0..d {
                let x = (rng.random::<f64>() - 0.5) * width;
                coords[i * d + j] = x;
                cell[j] = (((x + self.half) / width * cells as f64) as u64).min(cells - 1);
            }
            for b in 0..self.levels {
                for (j, c) in cell.iter().enumerate().take(d) {
                    code |= ((c >> b) & 1) << (b as usize * d + j);
                }
            }
            raw.push((code, i));
        }
        raw.sort_by_key(|&(code, _)| code);
        let mut pos = Vec::with_capacity(count * d);
        let mut codes = Vec::with_capacity(count);
        let mut inside = Vec::with_capacity(count);
        for &(code, i) in &raw {
            let p = &coords[i * d..(i + 1) * d];
            pos.extend_from_slice(p);
            codes.push(code);
            inside.push(p.iter().all(|v| v.abs() <= self.n));
        }
        Ok(Layout { pos, codes, inside })
    }

    fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        self.norm.distance(a, b)
    }

    /// Draws one configuration and returns the record, plus the graph when
    /// `keep_graph` is set.
    pub fn sample_graph(&self, seed: SeedSpec, threshold: f64, keep_graph: bool) -> Result<(ExceedanceRecord, Option<GraphSample>)> {
        let d = self.d;
        let layout = self.layout(&mut seed.rng(stream::POINTS))?;
        let mut rng = seed.rng(stream::EDGES);
        let count = layout.codes.len();
        let mut incident = vec![0.0f64; count];
        let mut edges = Vec::new();
        let mut best: Option<f64> = None;
        let width = 2.0 * self.half;
        let total_bits = self.levels as usize * d;
        let mut stack: Vec<(u32, u64, [f64; MAX_DIM])> = Vec::new();
        let mut gap = vec![0.0f64; d];

        for a in 0..count {
            if !layout.inside[a] {
                continue;
            }
            let x = &layout.pos[a * d..(a + 1) * d];
            let mut root = [0.0; MAX_DIM];
            root.iter_mut().take(d).for_each(|v| *v = -self.half);
            stack.clear();
            stack.push((0, 0, root));
            while let Some((level, prefix, lo)) = stack.pop() {
                let shift = total_bits - level as usize * d;
                let first = if shift >= 64 { 0 } else { prefix << shift };
                let last = if shift >= 64 { u64::MAX } else { ((prefix + 1) << shift).wrapping_sub(1) };
                let s = layout.codes.partition_point(|&c| c < first);
                let e = layout.codes.partition_point(|&c| c <= last);
                if s >= e {
                    continue;
                }
                let side = width / (1u64 << level) as f64;
                for j in 0..d {
                    let l = lo[j];
                    gap[j] = (l - x[j]).max(x[j] - (l + side)).max(0.0);
                }
                let p = self.g.eval(self.norm.norm(&gap));
                if p <= 0.0 {
                    continue;
                }
                if level == self.levels || (e - s) as f64 * p <= 1.0 {
                    let mut idx = (s as u64).saturating_add(geometric_skip(&mut rng, p));
                    while idx < e as u64 {
                        let b = idx as usize;
                        idx = idx.saturating_add(1).saturating_add(geometric_skip(&mut rng, p));
                        if b == a || (layout.inside[b] && b < a) {
                            continue;
                        }
                        let y = &layout.pos[b * d..(b + 1) * d];
                        let r = self.dist(x, y);
                        if rng.random::<f64>() * p >= self.g.eval(r) {
                            continue;
                        }
                        incident[a] = incident[a].max(r);
                        if layout.inside[b] {
                            incident[b] = incident[b].max(r);
                        }
                        best = Some(best.map_or(r, |v: f64| v.max(r)));
                        if keep_graph {
                            edges.push((a, b, r));
                        }
                    }
                } else {
                    let half_side = side / 2.0;
                    for c in 0..(1u64 << d) {
                        let mut child = lo;
                        for (j, v) in child.iter_mut().enumerate().take(d) {
                            if (c >> j) & 1 == 1 {
                                *v += half_side;
                            }
                        }
                        stack.push((level + 1, (prefix << d) | c, child));
                    }
                }
            }
        }
        let w_count = (0..count).filter(|&i| layout.inside[i] && incident[i] > threshold).count() as u64;
        let rec = ExceedanceRecord {
            replicate: seed.replicate,
            e_star: best,
            w_count,
            w_prime_count: None,
            threshold_used: threshold,
            truncation_certificate: self.certificate,
        };
        let graph = keep_graph.then(|| GraphSample {
            points: layout.pos.chunks(d).map(|c| c.to_vec()).collect(),
            edges,
            n: self.n,
            padding: self.padding(),
        });
        Ok((rec, graph))
    }

    pub fn sample(&self, seed: SeedSpec, threshold: f64) -> Result<ExceedanceRecord> {
        Ok(self.sample_graph(seed, threshold, false)?.0)
    }
}

#[allow(clippy::too_many_arguments)]
pub fn sample_continuous(
    g: &ConnectionFunction,
    rho: f64,
    d: u32,
    norm: NormKind,
    n: u64,
    padding: f64,
    threshold: f64,
    seed: SeedSpec,
) -> Result<ExceedanceRecord> {
    ContinuousSampler::new(*g, rho, d, norm, n, padding, None)?.sample(seed, threshold)
}
