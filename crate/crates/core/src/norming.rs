//! Norming sequences `(c_n, b_n)` for the Fréchet, Gumbel and Weibull regimes,
//! together with the limit laws they lead to.

use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::connection::{ConnectionFunction, LatticeDomain};
use crate::error::{Error, Result};
use crate::geometry::{self, NormKind};
use crate::model::Model;
use crate::special;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitLaw {
    Frechet { beta: f64 },
    Gumbel,
    Weibull { gamma: f64 },
    /// Heavy-tailed limit of the undirected `d = 1`, `α = 2` chain on the
    /// scale `c_n = k·n`.
    ZStar { k: f64 },
}

impl LimitLaw {
    pub fn cdf(&self, r: f64) -> f64 {
        match *self {
            LimitLaw::Frechet { beta } => {
                if r <= 0.0 {
                    0.0
                } else {
                    (-r.powf(-beta)).exp()
                }
            }
            LimitLaw::Gumbel => (-(-r).exp()).exp(),
            LimitLaw::Weibull { gamma } => {
                if r > 0.0 {
                    1.0
                } else {
                    (-(-r).powf(gamma)).exp()
                }
            }
            LimitLaw::ZStar { k } => {
                if r <= 0.0 {
                    0.0
                } else {
                    (-analytic::dichotomy_asymptote(k, r)).exp()
                }
            }
        }
    }

    /// Inverse CDF, used to draw reference samples from the limit law.
    pub fn quantile(&self, p: f64) -> f64 {
        match *self {
            LimitLaw::Frechet { beta } => (-p.ln()).powf(-1.0 / beta),
            LimitLaw::Gumbel => -(-p.ln()).ln(),
            LimitLaw::Weibull { gamma } => -(-p.ln()).powf(1.0 / gamma),
            LimitLaw::ZStar { .. } => {
                special::find_root(|r| self.cdf(r) - p, 1e-12, 1e12, 1e-14).unwrap_or(f64::NAN)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormingCase {
    Frechet,
    GumbelG1,
    GumbelG2,
    Weibull,
}

/// How the Gumbel centering `b_n = b̃_n + c_n·K` gets its shift `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ShiftRule {
    None,
    Constant { k: f64 },
    /// Recomputed per `n` by [`root_calibrated_shift`].
    Calibrated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormingSchedule {
    pub case: NormingCase,
    pub model: Model,
    pub law: LimitLaw,
    pub g: ConnectionFunction,
    pub d: u32,
    pub rho: f64,
    pub norm: NormKind,
    /// Scale constant of the Fréchet and Weibull cases (unused otherwise).
    pub k: f64,
    pub shift: ShiftRule,
}

impl NormingSchedule {
    pub fn c(&self, n: u64) -> Result<f64> {
        let nf = n as f64;
        let df = self.d as f64;
        match (self.case, self.g) {
            (NormingCase::Frechet, ConnectionFunction::F { alpha }) => Ok(self.k * nf.powf(df / (alpha - df))),
            (NormingCase::Weibull, ConnectionFunction::W { alpha, .. }) => Ok(self.k * nf.powf(-df / (alpha + 1.0))),
            (NormingCase::GumbelG1, ConnectionFunction::G1 { lambda }) => {
                Ok(erlang_scale(lambda, self.d, self.b_tilde(n)?))
            }
            (NormingCase::GumbelG2, ConnectionFunction::G2 { lambda, .. }) => Ok(1.0 / lambda),
            _ => Err(Error::param("norming case does not match the connection family")),
        }
    }

    /// Uncorrected centering `b̃_n` (zero for Fréchet, `M` for Weibull).
    pub fn b_tilde(&self, n: u64) -> Result<f64> {
        if n < 2 {
            return Err(Error::param("norming sequences need n >= 2"));
        }
        let df = self.d as f64;
        match self.g {
            ConnectionFunction::F { .. } => Ok(0.0),
            ConnectionFunction::W { m, .. } => Ok(m),
            ConnectionFunction::G1 { lambda } => erlang_upper_quantile(lambda, self.d, (n as f64).powf(-df)),
            ConnectionFunction::G2 { lambda, alpha } => Ok(gumbel_g2_center(self.d, alpha, lambda, n)),
        }
    }

    /// The additive constant `K` (or `K_n`) in `b_n = b̃_n + c_n·K`.
    pub fn shift_at(&self, n: u64) -> Result<f64> {
        match self.shift {
            ShiftRule::None => Ok(0.0),
            ShiftRule::Constant { k } => Ok(k),
            ShiftRule::Calibrated => root_calibrated_shift(self.model, &self.g, self.rho, self.d, self.norm, n),
        }
    }

    pub fn b(&self, n: u64) -> Result<f64> {
        match self.case {
            NormingCase::Frechet => Ok(0.0),
            NormingCase::Weibull => self.b_tilde(n),
            _ => Ok(self.b_tilde(n)? + self.c(n)? * self.shift_at(n)?),
        }
    }

    /// Absolute length `c_n r + b_n`.
    pub fn threshold(&self, n: u64, r: f64) -> Result<f64> {
        Ok(self.c(n)? * r + self.b(n)?)
    }

    /// `(e - b_n) / c_n`.
    pub fn normalize(&self, n: u64, e: f64) -> Result<f64> {
        Ok((e - self.b(n)?) / self.c(n)?)
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho.is_finite() && rho > 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("rho must be positive, got {rho}")))
    }
}

/// Leading constant `C` of `(count of window sites) · P(max > t) ≈ 2^d n^d C t^{d-α}`.
fn frechet_c(d: u32, alpha: f64, rho: f64, model: Model, norm: NormKind) -> f64 {
    let df = d as f64;
    match model.lattice_domain() {
        None => rho * rho * geometry::surface_constant(norm, d) / (alpha - df),
        Some(dom) => {
            let kappa = geometry::surface_constant(NormKind::OneNorm, d);
            let kappa = match dom {
                LatticeDomain::Full => kappa,
                LatticeDomain::Quadrant => kappa / 2f64.powi(d as i32),
            };
            kappa / (alpha - df)
        }
    }
}

/// Fréchet scale `K = (2^{-d} C^{-1})^{1/(d-α)}` so that `c_n = K n^{d/(α-d)}`
/// makes the expected exceedance count converge to `r^{d-α}`.
pub fn frechet_constant(d: u32, alpha: f64, rho: f64, model: Model, norm: NormKind) -> Result<f64> {
    ConnectionFunction::F { alpha }.validate(d)?;
    check_rho(rho)?;
    let c = frechet_c(d, alpha, rho, model, norm);
    let df = d as f64;
    Ok((2f64.powi(-(d as i32)) / c).powf(1.0 / (df - alpha)))
}

pub fn frechet_schedule(d: u32, alpha: f64, rho: f64, model: Model, norm: NormKind) -> Result<NormingSchedule> {
    let k = frechet_constant(d, alpha, rho, model, norm)?;
    Ok(NormingSchedule {
        case: NormingCase::Frechet,
        model,
        law: LimitLaw::Frechet { beta: alpha - d as f64 },
        g: ConnectionFunction::F { alpha },
        d,
        rho,
        norm,
        k,
        shift: ShiftRule::None,
    })
}

/// Weibull scale for the continuous model with `g = W(M, α)`:
/// near `s = M`, `G(M - u) ≈ κ M^{d-1-α} u^{α+1}/(α+1)`.
pub fn weibull_constant(d: u32, alpha: f64, rho: f64, m: f64, norm: NormKind) -> Result<f64> {
    ConnectionFunction::W { m, alpha }.validate(d)?;
    check_rho(rho)?;
    let kappa = geometry::surface_constant(norm, d);
    let c = rho * rho * kappa * m.powf(d as f64 - 1.0 - alpha) / (alpha + 1.0);
    Ok((2f64.powi(-(d as i32)) / c).powf(1.0 / (alpha + 1.0)))
}

pub fn weibull_schedule(d: u32, alpha: f64, rho: f64, m: f64, norm: NormKind) -> Result<NormingSchedule> {
    let k = weibull_constant(d, alpha, rho, m, norm)?;
    Ok(NormingSchedule {
        case: NormingCase::Weibull,
        model: Model::Continuous,
        law: LimitLaw::Weibull { gamma: alpha + 1.0 },
        g: ConnectionFunction::W { m, alpha },
        d,
        rho,
        norm,
        k,
        shift: ShiftRule::None,
    })
}

/// `ln P(Erlang(λ, d) > t)`.
fn erlang_ln_survival(lambda: f64, d: u32, t: f64) -> f64 {
    let x = lambda * t.max(0.0);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..d {
        term *= x / k as f64;
        sum += term;
    }
    -x + sum.ln()
}

fn check_erlang(lambda: f64, d: u32) -> Result<()> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::param(format!("lambda must be positive, got {lambda}")));
    }
    if d == 0 {
        return Err(Error::param("d must be at least 1"));
    }
    Ok(())
}

/// Smallest `t` with `P(Erlang(λ, d) > t) ≤ q`, solved on the log survival
/// function so tiny `q` keep full relative precision.
pub fn erlang_upper_quantile(lambda: f64, d: u32, q: f64) -> Result<f64> {
    check_erlang(lambda, d)?;
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::param(format!("tail probability must lie in (0,1), got {q}")));
    }
    let target = q.ln();
    let f = |t: f64| erlang_ln_survival(lambda, d, t) - target;
    let mut hi = (d as f64 - target) / lambda;
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    special::find_root(f, 0.0, hi, 1e-15)
}

/// Generalized inverse of the Erlang(λ, d) CDF.
pub fn erlang_quantile(lambda: f64, d: u32, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::param(format!("probability must lie in (0,1), got {p}")));
    }
    erlang_upper_quantile(lambda, d, 1.0 - p)
}

pub fn erlang_cdf(lambda: f64, d: u32, t: f64) -> f64 {
    -erlang_ln_survival(lambda, d, t).exp_m1()
}

/// `a(t) = Σ_{k<d} (d-1)!/(d-k-1)! λ^{-(k+1)} t^{-k}`.
pub fn erlang_scale(lambda: f64, d: u32, t: f64) -> f64 {
    let mut sum = 0.0;
    let mut falling = 1.0;
    for k in 0..d {
        if k > 0 {
            falling *= (d - k) as f64;
        }
        sum += falling * lambda.powi(-(k as i32 + 1)) * t.powi(-(k as i32));
    }
    sum
}

/// Closed-form shift `ln(κ(d-1)!) - d ln λ` for the directed quadrant model
/// with `g = G1(λ)`.
pub fn gumbel_g1_lattice_shift(d: u32, lambda: f64) -> f64 {
    let kappa = geometry::surface_constant(NormKind::OneNorm, d);
    let fact: f64 = (1..d).map(|i| i as f64).product();
    (kappa * fact).ln() - d as f64 * lambda.ln()
}

pub fn gumbel_g1_schedule(d: u32, lambda: f64, model: Model, rho: f64, norm: NormKind) -> Result<NormingSchedule> {
    check_erlang(lambda, d)?;
    check_rho(rho)?;
    let shift = match model {
        Model::Dlrpq => ShiftRule::Constant {
            k: gumbel_g1_lattice_shift(d, lambda),
        },
        _ => ShiftRule::Calibrated,
    };
    Ok(NormingSchedule {
        case: NormingCase::GumbelG1,
        model,
        law: LimitLaw::Gumbel,
        g: ConnectionFunction::G1 { lambda },
        d,
        rho,
        norm,
        k: 0.0,
        shift,
    })
}

/// `(c_n, b̃_n)` for `d = 2`, `g = G1(λ)` through the lower Lambert branch.
pub fn gumbel_g1_lambert_d2(lambda: f64, n: u64) -> Result<(f64, f64)> {
    check_erlang(lambda, 2)?;
    let nf = n as f64;
    let u = -1.0 / (std::f64::consts::E * nf * nf);
    let w = lambert_w_minus1(u)?;
    let b = -(w + 1.0) / lambda;
    Ok((1.0 / lambda + 1.0 / (lambda * lambda * b), b))
}

/// `λ^{-1}(d ln n + (d/α - 1) ln(d ln n) - ln Γ(d/α))`.
pub fn gumbel_g2_center(d: u32, alpha: f64, lambda: f64, n: u64) -> f64 {
    let df = d as f64;
    let ln_n = (n as f64).ln();
    (df * ln_n + (df / alpha - 1.0) * (df * ln_n).ln() - special::ln_gamma(df / alpha)) / lambda
}

pub fn gumbel_g2_schedule(
    d: u32,
    alpha: f64,
    lambda: f64,
    model: Model,
    rho: f64,
    norm: NormKind,
) -> Result<NormingSchedule> {
    let g = ConnectionFunction::G2 { lambda, alpha };
    g.validate(d)?;
    check_rho(rho)?;
    Ok(NormingSchedule {
        case: NormingCase::GumbelG2,
        model,
        law: LimitLaw::Gumbel,
        g,
        d,
        rho,
        norm,
        k: 0.0,
        shift: ShiftRule::Calibrated,
    })
}

/// Lower real branch `W_{-1}` of the Lambert function on `(-1/e, 0)`.
pub fn lambert_w_minus1(u: f64) -> Result<f64> {
    let inv_e = (-1f64).exp();
    if !(u < 0.0) || u < -inv_e * (1.0 + 4.0 * f64::EPSILON) || u.is_nan() {
        return Err(Error::param(format!("lambert_w_minus1 needs -1/e <= u < 0, got {u}")));
    }
    if u <= -inv_e {
        return Ok(-1.0);
    }
    let q = std::f64::consts::E * u + 1.0;
    let mut w = if q < 0.3 {
        // branch-point series in p = -sqrt(2(eu + 1))
        let p = -(2.0 * q).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else {
        let l1 = (-u).ln();
        let l2 = (-l1).ln();
        l1 - l2 + l2 / l1
    };
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - u;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = (w - step).min(-1.0);
        if (next - w).abs() <= 1e-16 * w.abs() {
            w = next;
            break;
        }
        w = next;
    }
    Ok(w)
}

/// Shift `K_n = (b_n - b̃_n)/c_n` where `b_n` solves "expected number of
/// exceedances equals one". Lattice models use the smooth shell-tail surrogate
/// because the lattice count is a step function of the threshold.
pub fn root_calibrated_shift(
    model: Model,
    g: &ConnectionFunction,
    rho: f64,
    d: u32,
    norm: NormKind,
    n: u64,
) -> Result<f64> {
    let (b_tilde, c) = match *g {
        ConnectionFunction::G1 { lambda } => {
            let b = erlang_upper_quantile(lambda, d, (n as f64).powf(-(d as f64)))?;
            (b, erlang_scale(lambda, d, b))
        }
        ConnectionFunction::G2 { lambda, alpha } => (gumbel_g2_center(d, alpha, lambda, n), 1.0 / lambda),
        _ => return Err(Error::param("root calibration applies to the Gumbel families only")),
    };
    let b = calibrated_center(model, g, rho, d, norm, n, b_tilde, c)?;
    Ok((b - b_tilde) / c)
}

#[allow(clippy::too_many_arguments)]
fn calibrated_center(
    model: Model,
    g: &ConnectionFunction,
    rho: f64,
    d: u32,
    norm: NormKind,
    n: u64,
    b_tilde: f64,
    c: f64,
) -> Result<f64> {
    let lo = (b_tilde - 10.0 * c).max(0.0);
    let hi = b_tilde + 10.0 * c;
    let f = |t: f64| {
        analytic::calibration_exceedances(model, g, rho, d, norm, n, t)
            .map(|beta| beta.ln())
            .unwrap_or(f64::NAN)
    };
    special::find_root(f, lo, hi, 1e-15).map_err(|_| Error::Bracket { lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_law_values() {
        let e1 = (-1f64).exp();
        assert!((LimitLaw::Frechet { beta: 2.0 }.cdf(1.0) - e1).abs() < 1e-15);
        assert!((LimitLaw::Gumbel.cdf(0.0) - e1).abs() < 1e-15);
        assert!((LimitLaw::Weibull { gamma: 2.0 }.cdf(-1.0) - e1).abs() < 1e-15);
        assert_eq!(LimitLaw::Weibull { gamma: 2.0 }.cdf(0.5), 1.0);
        assert_eq!(LimitLaw::Frechet { beta: 2.0 }.cdf(-0.5), 0.0);
        for law in [LimitLaw::Frechet { beta: 2.0 }, LimitLaw::Gumbel, LimitLaw::Weibull { gamma: 2.0 }] {
            for p in [0.01, 0.3, 0.5, 0.9] {
                assert!((law.cdf(law.quantile(p)) - p).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn frechet_constant_examples() {
        let k = frechet_constant(1, 3.0, 1.0, Model::Continuous, NormKind::OneNorm).unwrap();
        assert!((k - 2f64.sqrt()).abs() < 1e-14);
        assert!(frechet_constant(1, 1.0, 1.0, Model::Continuous, NormKind::OneNorm).is_err());
        // lattice d=1, α=2: C = 2, K = 4
        let k = frechet_constant(1, 2.0, 1.0, Model::Discrete, NormKind::OneNorm).unwrap();
        assert!((k - 4.0).abs() < 1e-12);
        // C ∝ ρ² ⇒ K scales with 4^{1/(α-d)} when ρ doubles
        let k1 = frechet_constant(2, 3.5, 1.0, Model::Continuous, NormKind::TwoNorm).unwrap();
        let k2 = frechet_constant(2, 3.5, 2.0, Model::Continuous, NormKind::TwoNorm).unwrap();
        assert!((k2 / k1 - 4f64.powf(1.0 / 1.5)).abs() < 1e-12);
    }

    #[test]
    fn frechet_exceedance_limit() {
        let s = frechet_schedule(1, 3.0, 1.0, Model::Continuous, NormKind::OneNorm).unwrap();
        let n = 100_000;
        let t = s.threshold(n, 1.0).unwrap();
        let beta = analytic::expected_exceedances(Model::Continuous, &s.g, 1.0, 1, NormKind::OneNorm, n, t).unwrap();
        assert!((beta - 1.0).abs() < 1e-3, "{beta}");
    }

    #[test]
    fn weibull_constant_examples() {
        let k = weibull_constant(1, 1.0, 1.0, 1.0, NormKind::OneNorm).unwrap();
        assert!((k - 0.5f64.sqrt()).abs() < 1e-14);
        let s = weibull_schedule(1, 1.0, 1.0, 1.0, NormKind::OneNorm).unwrap();
        let n = 100_000;
        let t = s.threshold(n, -1.0).unwrap();
        let beta = analytic::expected_exceedances(Model::Continuous, &s.g, 1.0, 1, NormKind::OneNorm, n, t).unwrap();
        assert!((beta - 1.0).abs() < 1e-2, "{beta}");
        let t0 = s.threshold(n, 0.0).unwrap();
        let beta0 = analytic::expected_exceedances(Model::Continuous, &s.g, 1.0, 1, NormKind::OneNorm, n, t0).unwrap();
        assert_eq!(beta0, 0.0);
    }

    #[test]
    fn erlang_quantile_examples() {
        for n in [10u64, 1000, 1_000_000] {
            let t = erlang_quantile(1.0, 1, 1.0 - 1.0 / n as f64).unwrap();
            assert!((t - (n as f64).ln()).abs() < 1e-8);
            let t = erlang_upper_quantile(1.0, 1, 1.0 / n as f64).unwrap();
            assert!((t - (n as f64).ln()).abs() < 1e-12);
        }
        assert!((erlang_quantile(2.0, 1, 0.5).unwrap() - 2f64.ln() / 2.0).abs() < 1e-14);
        let t = erlang_quantile(1.0, 2, 0.9).unwrap();
        assert!((t - 3.8897202).abs() < 1e-7);
        for d in 1..=4 {
            for p in [0.01, 0.2, 0.5, 0.77, 0.999] {
                let t = erlang_quantile(1.7, d, p).unwrap();
                assert!((erlang_cdf(1.7, d, t) - p).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn lambert_examples() {
        let inv_e = -(-1f64).exp();
        assert_eq!(lambert_w_minus1(inv_e).unwrap(), -1.0);
        assert!((lambert_w_minus1(-0.1).unwrap() + 3.5771520).abs() < 1e-7);
        let u = -2.0 * (-2f64).exp();
        assert!((lambert_w_minus1(u).unwrap() + 2.0).abs() < 1e-12);
        assert!(lambert_w_minus1(0.1).is_err());
        assert!(lambert_w_minus1(-0.5).is_err());
    }

    #[test]
    fn lambert_route_matches_quantile_route() {
        for lambda in [0.5, 1.0, 3.0] {
            for n in [10u64, 1000, 1_000_000] {
                let (c, b) = gumbel_g1_lambert_d2(lambda, n).unwrap();
                let s = gumbel_g1_schedule(2, lambda, Model::Dlrpq, 1.0, NormKind::OneNorm).unwrap();
                assert!((s.b_tilde(n).unwrap() - b).abs() < 1e-8);
                assert!((s.c(n).unwrap() - c).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn g1_d1_schedule() {
        let s = gumbel_g1_schedule(1, 2.0, Model::Dlrpq, 1.0, NormKind::OneNorm).unwrap();
        for n in [10u64, 1000, 1_000_000] {
            assert!((s.c(n).unwrap() - 0.5).abs() < 1e-12);
            assert!((s.b_tilde(n).unwrap() - (n as f64).ln() / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn g2_center_examples() {
        assert!((gumbel_g2_center(1, 1.0, 1.0, 1000) - 1000f64.ln()).abs() < 1e-12);
        let mut prev = gumbel_g2_center(2, 0.7, 1.3, 3);
        for n in 4..200 {
            let v = gumbel_g2_center(2, 0.7, 1.3, n);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn gumbel_scale_nonincreasing() {
        for d in 1..=3 {
            let s = gumbel_g1_schedule(d, 0.8, Model::Dlrpq, 1.0, NormKind::OneNorm).unwrap();
            let mut prev = f64::INFINITY;
            for n in [3u64, 10, 100, 1000, 100_000] {
                let c = s.c(n).unwrap();
                assert!(c > 0.0 && c <= prev + 1e-15);
                prev = c;
            }
        }
    }

    #[test]
    fn lattice_g1_calibration_matches_closed_form() {
        let g = ConnectionFunction::G1 { lambda: 1.0 };
        let k = root_calibrated_shift(Model::Dlrpq, &g, 1.0, 1, NormKind::OneNorm, 10_000).unwrap();
        assert!((k - 2f64.ln()).abs() < 1e-3, "{k}");
        assert!((gumbel_g1_lattice_shift(1, 1.0) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn calibrated_root_gives_unit_mean() {
        let s = gumbel_g2_schedule(1, 2.0, 1.0, Model::Continuous, 1.0, NormKind::OneNorm).unwrap();
        let n = 800;
        let b = s.b(n).unwrap();
        let beta = analytic::expected_exceedances(Model::Continuous, &s.g, 1.0, 1, NormKind::OneNorm, n, b).unwrap();
        assert!((beta - 1.0).abs() < 1e-10);
    }

    #[test]
    fn g2_shift_stabilizes() {
        let g = ConnectionFunction::G2 { lambda: 1.0, alpha: 1.0 };
        let ks: Vec<f64> = [1000u64, 2000, 4000, 8000, 16000]
            .iter()
            .map(|&n| root_calibrated_shift(Model::Continuous, &g, 1.0, 1, NormKind::OneNorm, n).unwrap())
            .collect();
        let diffs: Vec<f64> = ks.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        assert!(diffs.last().unwrap() < diffs.first().unwrap(), "{ks:?}");
        assert!(*diffs.last().unwrap() < 1e-3, "{ks:?}");
    }

    #[test]
    fn g2_shift_drifts_when_alpha_is_not_one() {
        // b̃_n lives on the scale of λ s^α, the calibrated root on the length
        // scale, so for α = 2 the shift keeps moving by about ln 2 per doubling
        let g = ConnectionFunction::G2 { lambda: 1.0, alpha: 2.0 };
        let k1 = root_calibrated_shift(Model::Continuous, &g, 1.0, 1, NormKind::OneNorm, 8000).unwrap();
        let k2 = root_calibrated_shift(Model::Continuous, &g, 1.0, 1, NormKind::OneNorm, 16000).unwrap();
        assert!((k1 - k2) > 0.4, "{k1} {k2}");
    }
}
