//! ECDFs, Kolmogorov-Smirnov distances, DKW bands, total variation to a
//! Poisson law and log-log rate fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special;

/// Sorted sample with its right-continuous ECDF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    sorted: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::param("empirical distribution needs at least one sample"));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::param("samples must not be NaN"));
        }
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(EmpiricalDistribution { sorted: samples })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// `F̂(x)`.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    /// `F̂(x⁻)`.
    pub fn ecdf_left(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v < x) as f64 / self.len() as f64
    }

    /// Lower empirical quantile.
    pub fn quantile(&self, p: f64) -> f64 {
        let m = self.len();
        let idx = ((p * m as f64).ceil() as usize).clamp(1, m) - 1;
        self.sorted[idx]
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    pub fn mean(&self) -> f64 {
        self.sorted.iter().sum::<f64>() / self.len() as f64
    }
}

/// `sup_x |F̂(x) - F(x)|` for a continuous reference CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(emp: &EmpiricalDistribution, cdf: F) -> f64 {
    ks_distance_with_atoms(emp, &cdf, &cdf)
}

/// Kolmogorov-Smirnov distance against a CDF that may jump; `cdf_left(x)`
/// must return `F(x⁻)`. Checking both one-sided limits at every sample
/// point is exact because `F̂` is constant between them.
pub fn ks_distance_with_atoms<F, L>(emp: &EmpiricalDistribution, cdf: F, cdf_left: L) -> f64
where
    F: Fn(f64) -> f64,
    L: Fn(f64) -> f64,
{
    let m = emp.len() as f64;
    let v = emp.values();
    let mut best: f64 = 0.0;
    let mut i = 0;
    while i < v.len() {
        let x = v[i];
        let mut j = i;
        while j < v.len() && v[j] == x {
            j += 1;
        }
        let below = i as f64 / m;
        let at = j as f64 / m;
        best = best.max((at - cdf(x)).abs()).max((below - cdf_left(x)).abs());
        i = j;
    }
    best.min(1.0)
}

/// DKW half-width `sqrt(ln(2/δ) / (2m))`.
pub fn dkw_epsilon(m: usize, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * m as f64)).sqrt()
}

/// Histogram of nonnegative integer observations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntHistogram {
    pub counts: Vec<u64>,
}

impl IntHistogram {
    pub fn from_values<I: IntoIterator<Item = u64>>(values: I) -> Self {
        let mut h = IntHistogram::default();
        for v in values {
            h.add(v);
        }
        h
    }

    pub fn add(&mut self, v: u64) {
        let v = v as usize;
        if self.counts.len() <= v {
            self.counts.resize(v + 1, 0);
        }
        self.counts[v] += 1;
    }

    /// Associative merge of two shards.
    pub fn merge(&mut self, other: &IntHistogram) {
        if self.counts.len() < other.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        let t = self.total();
        if t == 0 {
            return 0.0;
        }
        self.counts.iter().enumerate().map(|(k, &c)| k as f64 * c as f64).sum::<f64>() / t as f64
    }

    pub fn variance(&self) -> f64 {
        let t = self.total() as f64;
        if t < 2.0 {
            return 0.0;
        }
        let mu = self.mean();
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| c as f64 * (k as f64 - mu).powi(2))
            .sum::<f64>()
            / (t - 1.0)
    }

    pub fn pmf(&self, k: usize) -> f64 {
        let t = self.total();
        if t == 0 {
            0.0
        } else {
            self.counts.get(k).copied().unwrap_or(0) as f64 / t as f64
        }
    }
}

pub fn poisson_pmf(mu: f64, k: u64) -> f64 {
    if mu == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (-mu + k as f64 * mu.ln() - special::ln_gamma(k as f64 + 1.0)).exp()
}

/// Plug-in total variation distance between the histogram's empirical law and
/// Poisson(μ), with the Poisson mass beyond the histogram support included.
pub fn tv_to_poisson(hist: &IntHistogram, mu: f64) -> Result<f64> {
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::param(format!("Poisson mean must be nonnegative, got {mu}")));
    }
    let mut sum = 0.0;
    let mut covered = 0.0;
    for k in 0..hist.counts.len() {
        let p = poisson_pmf(mu, k as u64);
        covered += p;
        sum += (hist.pmf(k) - p).abs();
    }
    sum += (1.0 - covered).max(0.0);
    Ok((0.5 * sum).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
}

impl RateFit {
    pub fn predict(&self, n: f64) -> f64 {
        (self.intercept + self.slope * n.ln()).exp()
    }
}

/// Least-squares slope of `ln(value)` against `ln(n)`.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::param("fit_rate needs at least three points"));
    }
    if points.iter().any(|&(n, v)| !(n > 0.0) || !(v > 0.0)) {
        return Err(Error::param("fit_rate needs positive n and values"));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::param("fit_rate needs at least two distinct n"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = (rss / (k - 2.0) / sxx).sqrt();
    Ok(RateFit { slope, intercept, stderr })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ecdf_steps() {
        let e = EmpiricalDistribution::new(vec![3.0, 1.0, 2.0, 2.0]).unwrap();
        assert_eq!(e.ecdf(0.5), 0.0);
        assert_eq!(e.ecdf(2.0), 0.75);
        assert_eq!(e.ecdf_left(2.0), 0.25);
        assert_eq!(e.ecdf(3.0), 1.0);
        assert_eq!(e.median(), 2.0);
        assert!(EmpiricalDistribution::new(vec![]).is_err());
    }

    #[test]
    fn ks_examples() {
        let e = EmpiricalDistribution::new(vec![0.0]).unwrap();
        let normal_like = |x: f64| 1.0 / (1.0 + (-x).exp());
        assert!((ks_distance(&e, normal_like) - 0.5).abs() < 1e-15);
        let e = EmpiricalDistribution::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let step = |x: f64| e.ecdf(x);
        let left = |x: f64| e.ecdf_left(x);
        assert_eq!(ks_distance_with_atoms(&e, step, left), 0.0);
    }

    #[test]
    fn ks_with_atom_at_zero() {
        // half the mass at 0, the rest uniform on (0, 1]
        let cdf = |x: f64| if x < 0.0 { 0.0 } else { (0.5 + 0.5 * x).min(1.0) };
        let left = |x: f64| if x <= 0.0 { 0.0 } else { (0.5 + 0.5 * x).min(1.0) };
        let mut s = vec![0.0; 500];
        s.extend((1..=500).map(|i| i as f64 / 500.0));
        let e = EmpiricalDistribution::new(s).unwrap();
        assert!(ks_distance_with_atoms(&e, cdf, left) < 2e-3);
    }

    #[test]
    fn dkw_examples() {
        assert!((dkw_epsilon(10_000, 0.01) - 0.016276).abs() < 1e-6);
        assert!((dkw_epsilon(400, 0.05) / dkw_epsilon(100, 0.05) - 0.5).abs() < 1e-15);
        let lim = (2f64.ln() / 200.0).sqrt();
        assert!((dkw_epsilon(100, 1.0 - 1e-12) - lim).abs() < 1e-9);
    }

    #[test]
    fn tv_examples() {
        let h = IntHistogram::from_values([0, 0, 0]);
        assert_eq!(tv_to_poisson(&h, 0.0).unwrap(), 0.0);
        assert!((tv_to_poisson(&h, 2f64.ln()).unwrap() - 0.5).abs() < 1e-15);
        // histogram proportional to the Poisson(1) pmf up to 1e6 counts
        let mut h = IntHistogram::default();
        for k in 0..12 {
            h.counts.push((poisson_pmf(1.0, k) * 1e9).round() as u64);
        }
        assert!(tv_to_poisson(&h, 1.0).unwrap() < 1e-6);
        assert!(tv_to_poisson(&h, -1.0).is_err());
    }

    #[test]
    fn histogram_merge_is_associative() {
        let a = IntHistogram::from_values([0, 1, 1, 4]);
        let b = IntHistogram::from_values([2, 2]);
        let c = IntHistogram::from_values([7]);
        let mut ab = a.clone();
        ab.merge(&b);
        ab.merge(&c);
        let mut bc = b.clone();
        bc.merge(&c);
        let mut a2 = a.clone();
        a2.merge(&bc);
        assert_eq!(ab, a2);
        assert_eq!(ab.total(), 7);
    }

    #[test]
    fn fit_rate_examples() {
        let pts: Vec<(f64, f64)> = [10.0, 100.0, 1000.0, 1e4].iter().map(|&n| (n, 1.0 / n)).collect();
        let f = fit_rate(&pts).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12 && f.stderr < 1e-12);
        let pts: Vec<(f64, f64)> = [10.0, 100.0, 1000.0].iter().map(|&n| (n, 3.0)).collect();
        assert!(fit_rate(&pts).unwrap().slope.abs() < 1e-12);
        assert!(fit_rate(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
        assert!(fit_rate(&[(1.0, 1.0), (2.0, 1.0)]).is_err());
    }
}
