//! Connection-function families, per-edge weights `-ln(1-g)`, continuum tail
//! masses `∫_{‖z‖>r} g(z) dz` and lattice shell sums of edge weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, NormKind, Window};
use crate::special;

/// One of the four supported families of connection functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum ConnectionFunction {
    /// `1 - exp(-s^{-α})`, polynomial decay.
    F { alpha: f64 },
    /// `1 - exp(-e^{-λ s})`.
    G1 { lambda: f64 },
    /// `exp(-λ s^α)`.
    G2 { lambda: f64, alpha: f64 },
    /// `M^{-α} (M - s)^α` on `[0, M]`, zero beyond.
    W { m: f64, alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailMethod {
    ClosedForm,
    Quadrature,
    ShellSum,
}

/// A nonnegative integral or series value with a certified error bar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailMass {
    pub value: f64,
    pub truncation_error: f64,
    pub method: TailMethod,
}

impl TailMass {
    fn exact_zero(method: TailMethod) -> Self {
        TailMass {
            value: 0.0,
            truncation_error: 0.0,
            method,
        }
    }

    pub fn upper(&self) -> f64 {
        self.value + self.truncation_error
    }

    pub fn lower(&self) -> f64 {
        (self.value - self.truncation_error).max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeDomain {
    Full,
    Quadrant,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be positive and finite, got {v}")))
    }
}

impl ConnectionFunction {
    /// Checks the family parameters; `F` additionally needs `α > d` so that
    /// `∫ g` is finite.
    pub fn validate(&self, d: u32) -> Result<()> {
        match *self {
            ConnectionFunction::F { alpha } => {
                positive("alpha", alpha)?;
                if alpha <= d as f64 {
                    return Err(Error::param(format!(
                        "family F needs alpha > d for a finite tail (alpha={alpha}, d={d})"
                    )));
                }
                Ok(())
            }
            ConnectionFunction::G1 { lambda } => positive("lambda", lambda),
            ConnectionFunction::G2 { lambda, alpha } => {
                positive("lambda", lambda)?;
                positive("alpha", alpha)
            }
            ConnectionFunction::W { m, alpha } => {
                positive("M", m)?;
                positive("alpha", alpha)
            }
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            ConnectionFunction::F { alpha } => {
                if s <= 0.0 {
                    1.0
                } else {
                    -(-s.powf(-alpha)).exp_m1()
                }
            }
            ConnectionFunction::G1 { lambda } => -(-(-lambda * s).exp()).exp_m1(),
            ConnectionFunction::G2 { lambda, alpha } => (-lambda * s.powf(alpha)).exp(),
            ConnectionFunction::W { m, alpha } => {
                if s >= m {
                    0.0
                } else {
                    ((m - s.max(0.0)) / m).powf(alpha)
                }
            }
        }
    }

    /// `-ln(1 - g(s))`; `+∞` where `g(s) = 1`.
    pub fn edge_weight(&self, s: f64) -> f64 {
        match *self {
            ConnectionFunction::F { alpha } => {
                if s <= 0.0 {
                    f64::INFINITY
                } else {
                    s.powf(-alpha)
                }
            }
            ConnectionFunction::G1 { lambda } => (-lambda * s).exp(),
            ConnectionFunction::G2 { lambda, alpha } => {
                let x = lambda * s.powf(alpha);
                if x <= 0.0 {
                    f64::INFINITY
                } else {
                    -special::ln1m_exp_neg(x)
                }
            }
            ConnectionFunction::W { m, alpha } => {
                if s >= m {
                    0.0
                } else if s <= 0.0 {
                    f64::INFINITY
                } else {
                    -(-((m - s) / m).powf(alpha)).ln_1p()
                }
            }
        }
    }

    /// Distance beyond which `g` vanishes, if any.
    pub fn support_radius(&self) -> Option<f64> {
        match *self {
            ConnectionFunction::W { m, .. } => Some(m),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Continuum tail masses
// ---------------------------------------------------------------------------

/// Value of `κ ∫_r^∞ s^{d-1} g(s) ds` via closed forms (incomplete gamma,
/// alternating series, finite binomial sums). Used as the fast evaluator and
/// as the independent route against quadrature.
pub fn tail_mass_closed_form(g: &ConnectionFunction, d: u32, norm: NormKind, r: f64) -> Result<f64> {
    g.validate(d)?;
    let kappa = geometry::surface_constant(norm, d);
    let r = r.max(0.0);
    let df = d as f64;
    let radial = match *g {
        ConnectionFunction::F { alpha } => {
            if r >= 1.0 {
                // Σ_j (-1)^{j+1}/j! r^{d-jα}/(jα-d)
                let mut sum = 0.0;
                let mut fact = 1.0;
                for j in 1..200 {
                    fact *= j as f64;
                    let jf = j as f64;
                    let term = r.powf(df - jf * alpha) / (fact * (jf * alpha - df));
                    sum += if j % 2 == 1 { term } else { -term };
                    if term < 1e-18 * sum.abs() {
                        break;
                    }
                }
                sum
            } else {
                let b = 1.0 - df / alpha;
                if r == 0.0 {
                    special::gamma(b) / df
                } else {
                    let x = r.powf(-alpha);
                    (special::lower_gamma(b, x) - x.powf(-df / alpha) * (-(-x).exp_m1())) / df
                }
            }
        }
        ConnectionFunction::G1 { lambda } => {
            let mut sum = 0.0;
            let mut fact = 1.0;
            for j in 1..400 {
                fact *= j as f64;
                let term = special::erlang_moment_tail(d, j as f64 * lambda, r) / fact;
                sum += if j % 2 == 1 { term } else { -term };
                if term < 1e-18 * sum.abs() {
                    break;
                }
            }
            sum
        }
        ConnectionFunction::G2 { lambda, alpha } => {
            let a = df / alpha;
            lambda.powf(-a) / alpha * special::upper_gamma(a, lambda * r.powf(alpha))
        }
        ConnectionFunction::W { m, alpha } => w_radial_tail(d, m, alpha, r),
    };
    Ok(kappa * radial.max(0.0))
}

/// `∫_r^M s^{d-1} M^{-α}(M-s)^α ds` by binomial expansion of `s^{d-1}` in `M-s`.
fn w_radial_tail(d: u32, m: f64, alpha: f64, r: f64) -> f64 {
    let u = m - r.max(0.0);
    if u <= 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    for j in 0..d as u64 {
        let c = geometry::binomial(d as u64 - 1, j).unwrap_or(0) as f64;
        let p = alpha + j as f64 + 1.0;
        let term = c * m.powi((d as u64 - 1 - j) as i32) * u.powf(p) / p;
        sum += if j % 2 == 0 { term } else { -term };
    }
    sum * m.powf(-alpha)
}

/// Cutoff radius beyond which the analytic tail expansion is used, and the
/// expansion `(value, error)` of `∫_S^∞ s^{d-1} g(s) ds`.
fn analytic_tail(g: &ConnectionFunction, d: u32, r: f64) -> (f64, f64, f64) {
    let df = d as f64;
    match *g {
        ConnectionFunction::F { alpha } => {
            // g = Σ (-1)^{j+1} v^j / j!, v = s^{-α} ≤ 1e-3 beyond S
            let s = r.max(1e3f64.powf(1.0 / alpha));
            let mut value = 0.0;
            let mut fact = 1.0;
            for j in 1..=3 {
                fact *= j as f64;
                let jf = j as f64;
                let t = s.powf(df - jf * alpha) / (fact * (jf * alpha - df));
                value += if j % 2 == 1 { t } else { -t };
            }
            let err = s.powf(df - 4.0 * alpha) / (24.0 * (4.0 * alpha - df));
            (s, value, err)
        }
        ConnectionFunction::G1 { lambda } => {
            let s = r.max(3.0 * std::f64::consts::LN_10 / lambda);
            let mut value = 0.0;
            let mut fact = 1.0;
            for j in 1..=3 {
                fact *= j as f64;
                let t = special::erlang_moment_tail(d, j as f64 * lambda, s) / fact;
                value += if j % 2 == 1 { t } else { -t };
            }
            let err = special::erlang_moment_tail(d, 4.0 * lambda, s) / 24.0;
            (s, value, err)
        }
        ConnectionFunction::G2 { lambda, alpha } => {
            // integrand itself is below 1e-300 beyond this radius
            let s = r.max((745.0 / lambda).powf(1.0 / alpha));
            (s, 0.0, 0.0)
        }
        ConnectionFunction::W { m, .. } => (r.max(m), 0.0, 0.0),
    }
}

/// Quadrature route for `∫_{‖z‖>r} g(z) dz`: adaptive Gauss-Kronrod on
/// `[r, S]` plus an analytic expansion of the tail beyond `S`.
pub fn tail_mass_quadrature(g: &ConnectionFunction, d: u32, norm: NormKind, r: f64) -> Result<TailMass> {
    g.validate(d)?;
    let r = r.max(0.0);
    if let Some(m) = g.support_radius() {
        if r >= m {
            return Ok(TailMass::exact_zero(TailMethod::Quadrature));
        }
    }
    let kappa = geometry::surface_constant(norm, d);
    let (cut, tail, tail_err) = analytic_tail(g, d, r);
    let integrand = |s: f64| s.powi(d as i32 - 1) * g.eval(s);
    // split the range geometrically so panels near r are not starved
    let mut value = 0.0;
    let mut err = 0.0;
    let mut lo = r;
    while lo < cut {
        let hi = if lo < 1.0 { (lo + 1.0).min(cut) } else { (2.0 * lo).min(cut) };
        let (v, e) = special::integrate(integrand, lo, hi, 1e-15);
        value += v;
        err += e;
        lo = hi;
    }
    value += tail;
    err += tail_err;
    Ok(TailMass {
        value: kappa * value,
        truncation_error: kappa * (err + 4.0 * f64::EPSILON * value.abs()),
        method: TailMethod::Quadrature,
    })
}

/// `∫_{‖z‖>r} g(z) dz` with a certified error: closed forms for `W` and
/// `G2`, quadrature plus analytic tail bound for `F` and `G1`.
pub fn tail_mass_continuum(g: &ConnectionFunction, d: u32, norm: NormKind, r: f64) -> Result<TailMass> {
    g.validate(d)?;
    match g {
        ConnectionFunction::W { m, .. } if r >= *m => Ok(TailMass::exact_zero(TailMethod::ClosedForm)),
        ConnectionFunction::W { .. } | ConnectionFunction::G2 { .. } => {
            let value = tail_mass_closed_form(g, d, norm, r)?;
            Ok(TailMass {
                value,
                truncation_error: 1e-13 * value,
                method: TailMethod::ClosedForm,
            })
        }
        _ => tail_mass_quadrature(g, d, norm, r),
    }
}

// ---------------------------------------------------------------------------
// Lattice shell sums
// ---------------------------------------------------------------------------

fn poly_mul_linear(p: &[f64], root_shift: f64) -> Vec<f64> {
    // p(z) * (z + root_shift)
    let mut out = vec![0.0; p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i + 1] += c;
        out[i] += c * root_shift;
    }
    out
}

/// Coefficients (ascending powers) of the polynomial `P` with `P(k)` equal to
/// the shell count at distance `k ≥ 1`.
pub fn count_polynomial(d: u32, domain: LatticeDomain) -> Vec<f64> {
    match domain {
        LatticeDomain::Quadrant => {
            // (z)(z+1)...(z+d-2)/(d-1)!
            let mut p = vec![1.0];
            for m in 0..(d as i64 - 1) {
                p = poly_mul_linear(&p, m as f64);
            }
            let fact: f64 = (1..d).map(|i| i as f64).product();
            p.iter().map(|c| c / fact).collect()
        }
        LatticeDomain::Full => {
            let mut total = vec![0.0; d as usize];
            for i in 1..=d {
                // 2^i C(d,i) (z-1)...(z-i+1)/(i-1)!
                let mut p = vec![1.0];
                for m in 1..i {
                    p = poly_mul_linear(&p, -(m as f64));
                }
                let fact: f64 = (1..i).map(|j| j as f64).product();
                let scale = 2f64.powi(i as i32) * geometry::binomial(d as u64, i as u64).unwrap() as f64 / fact;
                for (j, c) in p.iter().enumerate() {
                    total[j] += scale * c;
                }
            }
            total
        }
    }
}

fn poly_eval(p: &[f64], z: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * z + c)
}

fn shell_multiplicity(d: u32, domain: LatticeDomain, k: u64, poly: &[f64]) -> f64 {
    if k == 0 {
        return 0.0;
    }
    if k < 1 << 20 {
        let exact = match domain {
            LatticeDomain::Full => geometry::shell_count(d, k),
            LatticeDomain::Quadrant => geometry::quadrant_shell_count(d, k),
        };
        if let Ok(c) = exact {
            return c as f64;
        }
    }
    poly_eval(poly, k as f64)
}

/// Lower and upper bounds on `∫_p^∞ P(z) w(z) dz`.
fn weighted_integral_bounds(g: &ConnectionFunction, poly: &[f64], p: f64) -> (f64, f64) {
    match *g {
        ConnectionFunction::F { alpha } => {
            let v: f64 = poly
                .iter()
                .enumerate()
                .map(|(j, c)| c * p.powf(j as f64 + 1.0 - alpha) / (alpha - j as f64 - 1.0))
                .sum();
            (v, v)
        }
        ConnectionFunction::G1 { lambda } => {
            let v: f64 = poly
                .iter()
                .enumerate()
                .map(|(j, c)| c * special::erlang_moment_tail(j as u32 + 1, lambda, p))
                .sum();
            (v, v)
        }
        ConnectionFunction::G2 { lambda, alpha } => {
            // w = -ln(1-v) with v = e^{-λ z^α}: v ≤ w ≤ v/(1-v(p)) on [p, ∞)
            let v: f64 = poly
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    let a = (j as f64 + 1.0) / alpha;
                    c * lambda.powf(-a) / alpha * special::upper_gamma(a, lambda * p.powf(alpha))
                })
                .sum();
            let vp = (-lambda * p.powf(alpha)).exp();
            (v, v / (1.0 - vp))
        }
        ConnectionFunction::W { .. } => (0.0, 0.0),
    }
}

/// Smooth surrogate `∫_t^∞ P(z) w(z) dz` of the shell tail, where `P` is the
/// shell-count polynomial. Unlike the lattice sum it is continuous and
/// strictly decreasing in `t`, which root-finders need.
pub fn shell_tail_integral(g: &ConnectionFunction, d: u32, domain: LatticeDomain, t: f64) -> Result<f64> {
    g.validate(d)?;
    let poly = count_polynomial(d, domain);
    let t = t.max(1.0);
    if let ConnectionFunction::W { m, .. } = *g {
        if t >= m {
            return Ok(0.0);
        }
        let (v, _) = special::integrate(|z| poly_eval(&poly, z) * g.edge_weight(z), t, m, 1e-14);
        return Ok(v);
    }
    let (lo, hi) = weighted_integral_bounds(g, &poly, t);
    Ok(0.5 * (lo + hi))
}

/// Certified `Σ_{k>⌊r⌋} count(k) · w(k)` over ℤ^d or ℚ(d) with the one-norm.
///
/// The explicit partial sum is extended until the integral sandwich
/// `∫_{K+1}^∞ f ≤ Σ_{k>K} f(k) ≤ ∫_K^∞ f` is narrower than `2 · tol`.
pub fn tail_sum_lattice(
    g: &ConnectionFunction,
    d: u32,
    r: f64,
    domain: LatticeDomain,
    tol: f64,
) -> Result<TailMass> {
    g.validate(d)?;
    const TERM_BUDGET: u64 = 1 << 31;
    let k0 = if r < 0.0 { 1 } else { r.floor() as u64 + 1 };
    let poly = count_polynomial(d, domain);
    let term = |k: u64| shell_multiplicity(d, domain, k, &poly) * g.edge_weight(k as f64);

    if let Some(m) = g.support_radius() {
        let mut sum = 0.0;
        let mut k = k0;
        while (k as f64) < m {
            sum += term(k);
            k += 1;
        }
        return Ok(TailMass {
            value: sum,
            truncation_error: 4.0 * f64::EPSILON * sum,
            method: TailMethod::ShellSum,
        });
    }

    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut next = k0;
    let mut upto = k0.max(8 * d as u64) + 32;
    loop {
        while next <= upto {
            // Neumaier summation
            let t = term(next);
            let s = sum + t;
            if sum.abs() >= t.abs() {
                comp += (sum - s) + t;
            } else {
                comp += (t - s) + sum;
            }
            sum = s;
            next += 1;
        }
        let (lo, _) = weighted_integral_bounds(g, &poly, (upto + 1) as f64);
        let (_, hi) = weighted_integral_bounds(g, &poly, upto as f64);
        let half = 0.5 * (hi - lo).max(0.0);
        let partial = sum + comp;
        let value = partial + 0.5 * (lo + hi);
        let rounding = 4.0 * f64::EPSILON * value.abs();
        let err = half + rounding;
        if err <= tol {
            return Ok(TailMass {
                value,
                truncation_error: err,
                method: TailMethod::ShellSum,
            });
        }
        if upto >= TERM_BUDGET || rounding > tol {
            return Err(Error::Tolerance {
                tolerance: tol,
                best_bound: err,
            });
        }
        upto = (upto * 2).min(TERM_BUDGET);
    }
}

/// Certified `Σ_{y ∉ B_n, ‖y-x‖₁ > r} w(‖y-x‖₁)` for a window vertex `x`,
/// as the full-lattice tail minus the in-window sum.
pub fn tail_sum_lattice_offset(
    g: &ConnectionFunction,
    d: u32,
    window: &Window,
    x: &[i64],
    r: f64,
    tol: f64,
) -> Result<TailMass> {
    if x.len() != d as usize || !window.contains(x) {
        return Err(Error::param("vertex must lie in the window"));
    }
    let full = tail_sum_lattice(g, d, r, LatticeDomain::Full, tol)?;
    let count = window.vertex_count()?;
    let mut inside = 0.0;
    let mut y = vec![0i64; d as usize];
    for idx in 0..count as u64 {
        window.vertex_at(idx, &mut y);
        let dist: i64 = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
        if dist as f64 > r && dist > 0 {
            inside += g.edge_weight(dist as f64);
        }
    }
    Ok(TailMass {
        value: (full.value - inside).max(0.0),
        truncation_error: full.truncation_error + 4.0 * f64::EPSILON * full.value,
        method: TailMethod::ShellSum,
    })
}

// ---------------------------------------------------------------------------
// Tabulated shell tails for repeated queries
// ---------------------------------------------------------------------------

/// Precomputed suffix sums `T(u) = Σ_{k>u} count(k) w(k)` for integer `u`,
/// with an Euler-Maclaurin evaluator beyond the table. Built once, then
/// shared read-only by samplers and exact CDFs.
#[derive(Debug, Clone)]
pub struct ShellTail {
    g: ConnectionFunction,
    d: u32,
    domain: LatticeDomain,
    poly: Vec<f64>,
    suffix: Vec<f64>,
}

impl ShellTail {
    /// Default number of tabulated shells for heavy-tailed families.
    pub const DEFAULT_TABLE: u64 = 1 << 20;

    pub fn new(g: ConnectionFunction, d: u32, domain: LatticeDomain) -> Result<Self> {
        Self::with_table(g, d, domain, Self::DEFAULT_TABLE)
    }

    pub fn with_table(g: ConnectionFunction, d: u32, domain: LatticeDomain, table: u64) -> Result<Self> {
        g.validate(d)?;
        let poly = count_polynomial(d, domain);
        let term = |k: u64| shell_multiplicity(d, domain, k, &poly) * g.edge_weight(k as f64);
        let kmax = match g {
            ConnectionFunction::W { m, .. } => m.ceil() as u64,
            ConnectionFunction::F { .. } => table.max(64),
            _ => {
                // extend until terms underflow
                let mut k = 1u64;
                while term(k) > 1e-320 || k < 8 {
                    k *= 2;
                    if k > table.max(64) * 64 {
                        break;
                    }
                }
                k
            }
        };
        let mut suffix = vec![0.0; kmax as usize + 1];
        let mut acc = Self::asymptotic(&g, &poly, kmax);
        suffix[kmax as usize] = acc;
        for u in (0..kmax).rev() {
            acc += term(u + 1);
            suffix[u as usize] = acc;
        }
        Ok(ShellTail { g, d, domain, poly, suffix })
    }

    /// Euler-Maclaurin estimate of `Σ_{k>u} P(k) w(k)` for large `u`.
    fn asymptotic(g: &ConnectionFunction, poly: &[f64], u: u64) -> f64 {
        match *g {
            ConnectionFunction::F { alpha } => {
                let p = u as f64 + 1.0;
                let (integral, _) = weighted_integral_bounds(g, poly, p);
                let f = |z: f64| poly_eval(poly, z) * z.powf(-alpha);
                let h = 1e-3 * p;
                let fp = (f(p + h) - f(p - h)) / (2.0 * h);
                integral + 0.5 * f(p) - fp / 12.0
            }
            _ => 0.0,
        }
    }

    pub fn family(&self) -> &ConnectionFunction {
        &self.g
    }

    pub fn dimension(&self) -> u32 {
        self.d
    }

    pub fn domain(&self) -> LatticeDomain {
        self.domain
    }

    pub fn table_len(&self) -> u64 {
        self.suffix.len() as u64 - 1
    }

    /// `Σ_{k>u} count(k) w(k)`.
    pub fn tail(&self, u: u64) -> f64 {
        match self.suffix.get(u as usize) {
            Some(v) => *v,
            None => Self::asymptotic(&self.g, &self.poly, u),
        }
    }

    /// Tail over distances strictly greater than the real threshold `t`.
    pub fn tail_above(&self, t: f64) -> f64 {
        if t < 0.0 {
            self.tail(0)
        } else if t >= u64::MAX as f64 {
            0.0
        } else {
            self.tail(t.floor() as u64)
        }
    }

    /// Smallest integer `s` with `tail(s) ≤ level`; `None` when already
    /// `tail(0) ≤ level`.
    pub fn inverse(&self, level: f64) -> Option<u64> {
        if self.tail(0) <= level {
            return None;
        }
        let len = self.table_len();
        if self.tail(len) <= level {
            // binary search for the first index with suffix ≤ level
            let idx = self.suffix.partition_point(|&v| v > level) as u64;
            return Some(idx);
        }
        let mut lo = len;
        let mut hi = len.saturating_mul(2);
        while self.tail(hi) > level {
            lo = hi;
            if hi >= u64::MAX / 4 {
                return Some(u64::MAX / 2);
            }
            hi = hi.saturating_mul(2);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.tail(mid) > level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(hi)
    }
}
