use rand::Rng;

use super::{exp1, geometric_skip, stream, ExceedanceRecord, SeedSpec};
use crate::connection::{ConnectionFunction, LatticeDomain, ShellTail};
use crate::error::{Error, Result};
use crate::geometry::{NormKind, Window};

const SITE_BUDGET: u128 = 1 << 26;

/// Exact sampler for undirected long-range percolation on ℤ^d observed in
/// `B_n = [-n, n]^d`.
///
/// Window pairs are enumerated per displacement with geometric skipping, so
/// the work is proportional to the number of displacement classes plus the
/// number of present edges. Edges to the outside are independent across
/// window vertices, so each vertex's outside maximum is drawn by inverse
/// transform from `exp(-T_x(s))`, `T_x(s)` being the weight of outside sites
/// farther than `s`.
#[derive(Debug, Clone)]
pub struct UndirectedSampler {
    g: ConnectionFunction,
    window: Window,
    sites: usize,
    tail: ShellTail,
}

/// Per-replicate maxima; 0 means "no edge".
#[derive(Debug, Clone)]
pub(crate) struct Draw {
    incident: Vec<u64>,
    later: Vec<u64>,
}

/// `d = 1` maxima split by where the far endpoint lies.
#[derive(Debug, Clone, Copy)]
pub(crate) struct D1Parts {
    pub window_max: u64,
    pub left_max: u64,
    pub right_max: u64,
}

impl UndirectedSampler {
    /// `allow_high_dim` lifts the `d ≤ 2` restriction; cost per outside draw
    /// grows with the window surface.
    pub fn new(g: ConnectionFunction, d: u32, n: u64, norm: NormKind, allow_high_dim: bool) -> Result<Self> {
        norm.require_one_norm()?;
        if d >= 3 && !allow_high_dim {
            return Err(Error::param(
                "undirected lattice sampling for d >= 3 needs the high-dimension override",
            ));
        }
        let window = Window::new(d, n)?;
        let sites = window.vertex_count()?;
        if sites > SITE_BUDGET {
            return Err(Error::Budget {
                what: "window sites".into(),
                required: sites,
                limit: SITE_BUDGET,
            });
        }
        // d = 1 keeps the one-sided tail S(u); higher d the full shell tail
        let domain = if d == 1 { LatticeDomain::Quadrant } else { LatticeDomain::Full };
        Ok(UndirectedSampler {
            g,
            window,
            sites: sites as usize,
            tail: ShellTail::new(g, d, domain)?,
        })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    fn p(&self, k: u64) -> f64 {
        self.g.eval(k as f64)
    }

    /// Calls `visit(i, j, k)` for every present window edge `{x_i, x_j}`,
    /// `i < j` in window order, of length `k`.
    fn window_edges<R: Rng, V: FnMut(usize, usize, u64)>(&self, rng: &mut R, mut visit: V) {
        let d = self.window.d as usize;
        let n = self.window.n as i64;
        let side = self.window.side() as i64;
        if d == 1 {
            for k in 1..side as u64 {
                let p = self.p(k);
                if p <= 0.0 {
                    break;
                }
                let pairs = side as u64 - k;
                let mut pos = geometric_skip(rng, p);
                while pos < pairs {
                    visit(pos as usize, (pos + k) as usize, k);
                    pos = pos.saturating_add(1).saturating_add(geometric_skip(rng, p));
                }
            }
            return;
        }
        // displacements v with first nonzero coordinate positive
        let span = 2 * side - 1;
        let total = (span as u64).pow(d as u32);
        let mut v = vec![0i64; d];
        let mut x = vec![0i64; d];
        let mut y = vec![0i64; d];
        let mut lo = vec![0i64; d];
        let mut ext = vec![0i64; d];
        for code in 0..total {
            let mut c = code;
            for j in (0..d).rev() {
                v[j] = (c % span as u64) as i64 - (side - 1);
                c /= span as u64;
            }
            match v.iter().find(|&&a| a != 0) {
                Some(&a) if a > 0 => {}
                _ => continue,
            }
            let k: u64 = v.iter().map(|a| a.unsigned_abs()).sum();
            let p = self.p(k);
            if p <= 0.0 {
                continue;
            }
            let mut pairs = 1u64;
            for j in 0..d {
                ext[j] = side - v[j].abs();
                lo[j] = if v[j] >= 0 { -n } else { -n - v[j] };
                pairs *= ext[j] as u64;
            }
            let mut pos = geometric_skip(rng, p);
            while pos < pairs {
                let mut c = pos;
                for j in (0..d).rev() {
                    x[j] = lo[j] + (c % ext[j] as u64) as i64;
                    c /= ext[j] as u64;
                    y[j] = x[j] + v[j];
                }
                let a = self.window.index_of(&x) as usize;
                let b = self.window.index_of(&y) as usize;
                visit(a.min(b), a.max(b), k);
                pos = pos.saturating_add(1).saturating_add(geometric_skip(rng, p));
            }
        }
    }

    /// Largest present window edge of an independent copy of the window
    /// edge set.
    pub(crate) fn window_pair_max<R: Rng>(&self, rng: &mut R) -> u64 {
        let mut best = 0;
        self.window_edges(rng, |_, _, k| best = best.max(k));
        best
    }

    /// Outside maximum in one direction for `d = 1`: the far endpoint lies
    /// beyond distance `gap`.
    fn one_sided_max<R: Rng>(&self, rng: &mut R, gap: u64) -> u64 {
        let e = exp1(rng);
        if self.tail.tail(gap) <= e {
            0
        } else {
            self.tail.inverse(e).unwrap_or(0)
        }
    }

    /// Suffix weights `Σ_{k>s} h_x(k) w(k)` of window sites around `x`.
    fn inside_suffix(&self, x: &[i64]) -> Vec<f64> {
        let n = self.window.n as i64;
        let mut hist = vec![1.0f64];
        for &xj in x {
            let reach = (n + xj.abs()) as usize;
            let mut c = vec![0.0f64; reach + 1];
            c[0] = 1.0;
            for (m, cm) in c.iter_mut().enumerate().skip(1) {
                let m = m as i64;
                *cm = ((xj - m >= -n) as u8 + (xj + m <= n) as u8) as f64;
            }
            let mut next = vec![0.0f64; hist.len() + reach];
            for (a, &ha) in hist.iter().enumerate() {
                if ha == 0.0 {
                    continue;
                }
                for (b, &cb) in c.iter().enumerate() {
                    next[a + b] += ha * cb;
                }
            }
            hist = next;
        }
        let mut suffix = vec![0.0; hist.len()];
        let mut acc = 0.0;
        for k in (0..hist.len()).rev() {
            suffix[k] = acc;
            if k > 0 {
                acc += hist[k] * self.g.edge_weight(k as f64);
            }
        }
        suffix
    }

    fn outside_max_general<R: Rng>(&self, rng: &mut R, x: &[i64]) -> u64 {
        let e = exp1(rng);
        let inside = self.inside_suffix(x);
        let reach = inside.len() as u64 - 1;
        let outer = |s: u64| -> f64 {
            let w = inside.get(s as usize).copied().unwrap_or(0.0);
            (self.tail.tail(s) - w).max(0.0)
        };
        if outer(0) <= e {
            return 0;
        }
        if self.tail.tail(reach) > e {
            return self.tail.inverse(e).unwrap_or(0);
        }
        let (mut lo, mut hi) = (0u64, reach);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if outer(mid) > e {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    pub(crate) fn draw(&self, seed: SeedSpec) -> (Draw, D1Parts) {
        let mut incident = vec![0u64; self.sites];
        let mut later = vec![0u64; self.sites];
        let mut window_max = 0;
        let mut rng = seed.rng(stream::WINDOW);
        self.window_edges(&mut rng, |i, j, k| {
            incident[i] = incident[i].max(k);
            incident[j] = incident[j].max(k);
            later[i] = later[i].max(k);
            window_max = window_max.max(k);
        });
        let mut rng = seed.rng(stream::OUTSIDE);
        let mut parts = D1Parts {
            window_max,
            left_max: 0,
            right_max: 0,
        };
        if self.window.d == 1 {
            let n2 = 2 * self.window.n;
            for i in 0..self.sites {
                let left = self.one_sided_max(&mut rng, i as u64);
                let right = self.one_sided_max(&mut rng, n2 - i as u64);
                parts.left_max = parts.left_max.max(left);
                parts.right_max = parts.right_max.max(right);
                let out = left.max(right);
                incident[i] = incident[i].max(out);
                later[i] = later[i].max(out);
            }
        } else {
            let mut x = vec![0i64; self.window.d as usize];
            for i in 0..self.sites {
                self.window.vertex_at(i as u64, &mut x);
                let out = self.outside_max_general(&mut rng, &x);
                parts.left_max = parts.left_max.max(out);
                incident[i] = incident[i].max(out);
                later[i] = later[i].max(out);
            }
        }
        (Draw { incident, later }, parts)
    }

    pub(crate) fn sample_d1_parts(&self, seed: SeedSpec) -> D1Parts {
        self.draw(seed).1
    }

    pub fn sample(&self, seed: SeedSpec, threshold: f64) -> ExceedanceRecord {
        let (draw, _) = self.draw(seed);
        let best = draw.incident.iter().copied().max().unwrap_or(0);
        ExceedanceRecord {
            replicate: seed.replicate,
            e_star: (best > 0).then_some(best as f64),
            w_count: draw.incident.iter().filter(|&&m| m as f64 > threshold).count() as u64,
            w_prime_count: Some(draw.later.iter().filter(|&&m| m as f64 > threshold).count() as u64),
            threshold_used: threshold,
            truncation_certificate: 0.0,
        }
    }
}

pub fn sample_discrete_undirected(
    g: &ConnectionFunction,
    d: u32,
    n: u64,
    threshold: f64,
    seed: SeedSpec,
) -> Result<ExceedanceRecord> {
    Ok(UndirectedSampler::new(*g, d, n, NormKind::OneNorm, false)?.sample(seed, threshold))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{self, UndirectedD1};
    use crate::connection;

    const F2: ConnectionFunction = ConnectionFunction::F { alpha: 2.0 };

    #[test]
    fn high_dimension_is_gated() {
        let g = ConnectionFunction::F { alpha: 4.0 };
        assert!(UndirectedSampler::new(g, 3, 1, NormKind::OneNorm, false).is_err());
        assert!(UndirectedSampler::new(g, 3, 1, NormKind::OneNorm, true).is_ok());
        assert!(UndirectedSampler::new(g, 1, 1, NormKind::TwoNorm, false).is_err());
    }

    #[test]
    fn window_pair_frequencies() {
        // each pair at distance k appears with probability g(k)
        let g = ConnectionFunction::G1 { lambda: 0.3 };
        let s = UndirectedSampler::new(g, 2, 1, NormKind::OneNorm, false).unwrap();
        let m = 20_000;
        let mut count = std::collections::HashMap::new();
        for r in 0..m {
            let mut rng = SeedSpec::new(1, r).rng(0);
            s.window_edges(&mut rng, |i, j, _| *count.entry((i, j)).or_insert(0u32) += 1);
        }
        let pts = crate::geometry::enumerate_window(2, 1).unwrap();
        for i in 0..9 {
            for j in (i + 1)..9 {
                let k: i64 = pts[i].iter().zip(&pts[j]).map(|(a, b)| (a - b).abs()).sum();
                let p = g.eval(k as f64);
                let f = *count.get(&(i, j)).unwrap_or(&0) as f64 / m as f64;
                assert!((f - p).abs() < 5.0 * (p * (1.0 - p) / m as f64).sqrt(), "{i} {j}");
            }
        }
    }

    #[test]
    fn outside_tail_matches_offset_sum() {
        let g = ConnectionFunction::F { alpha: 3.0 };
        let s = UndirectedSampler::new(g, 2, 2, NormKind::OneNorm, false).unwrap();
        for x in [[0i64, 0], [2, -1], [-2, 2]] {
            let inside = s.inside_suffix(&x);
            for r in [0u64, 2, 5] {
                let ours = s.tail.tail(r) - inside.get(r as usize).copied().unwrap_or(0.0);
                let oracle =
                    connection::tail_sum_lattice_offset(&g, 2, &s.window, &x, r as f64, 1e-12).unwrap().value;
                assert!((ours - oracle).abs() < 1e-9, "{x:?} r={r}: {ours} vs {oracle}");
            }
        }
    }

    #[test]
    fn n0_matches_full_line_tail() {
        let s = UndirectedSampler::new(F2, 1, 0, NormKind::OneNorm, false).unwrap();
        let u = UndirectedD1::with_table(F2, 4096).unwrap();
        let m = 20_000;
        let e: Vec<f64> = (0..m).map(|i| s.sample(SeedSpec::new(3, i), 0.0).e_star_or_zero()).collect();
        for t in [0.0, 1.0, 3.0, 10.0] {
            let f = e.iter().filter(|&&v| v <= t).count() as f64 / m as f64;
            assert!((f - u.cdf(0, t)).abs() < 0.015, "t={t}");
        }
    }

    #[test]
    fn records_are_consistent() {
        let s = UndirectedSampler::new(F2, 1, 30, NormKind::OneNorm, false).unwrap();
        for i in 0..300 {
            let r = s.sample(SeedSpec::new(8, i), 25.0);
            assert_eq!(r.w_count >= 1, r.e_star_or_zero() > 25.0);
            assert!(r.w_prime_count.unwrap() <= r.w_count);
        }
    }

    #[test]
    fn w_prime_mean_matches_exact() {
        let s = UndirectedSampler::new(F2, 1, 100, NormKind::OneNorm, false).unwrap();
        let m = 4000;
        let counts: Vec<f64> =
            (0..m).map(|i| s.sample(SeedSpec::new(21, i), 50.0).w_prime_count.unwrap() as f64).collect();
        let mean = counts.iter().sum::<f64>() / m as f64;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
        let exact = analytic::expected_exceedances(crate::Model::Discrete, &F2, 1.0, 1, NormKind::OneNorm, 100, 50.0)
            .unwrap();
        assert!((mean - exact).abs() < 3.5 * (var / m as f64).sqrt(), "{mean} vs {exact}");
    }

    #[test]
    fn d2_longest_edge_matches_pair_formula() {
        let g = ConnectionFunction::F { alpha: 3.0 };
        let s = UndirectedSampler::new(g, 2, 1, NormKind::OneNorm, false).unwrap();
        let m = 10_000;
        let e: Vec<f64> = (0..m).map(|i| s.sample(SeedSpec::new(6, i), 0.0).e_star_or_zero()).collect();
        for t in [1.0, 2.0, 4.0] {
            let f = e.iter().filter(|&&v| v <= t).count() as f64 / m as f64;
            let i = analytic::undirected_exponent_general(&g, 2, 1, t, 1 << 20).unwrap();
            assert!((f - (-i).exp()).abs() < 0.02, "t={t}: {f} vs {}", (-i).exp());
        }
    }
}
