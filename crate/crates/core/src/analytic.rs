//! Exact finite-n distributions of the longest edge, expected exceedance
//! counts, the `d = 1`, `α = 2` dichotomy and Poisson approximation bounds.

use serde::{Deserialize, Serialize};

use crate::connection::{self, ConnectionFunction, LatticeDomain, ShellTail, TailMass};
use crate::error::{Error, Result};
use crate::geometry::{NormKind, Window};
use crate::model::Model;
use crate::norming::LimitLaw;

/// Relative tolerance requested from certified lattice series.
const SERIES_RTOL: f64 = 1e-12;

/// A probability with a certified enclosing interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probability {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Probability {
    /// `exp(-m)` for an exponent known up to `±err`.
    fn from_exponent(m: f64, err: f64) -> Self {
        Probability {
            value: (-m).exp(),
            lower: (-(m + err)).exp(),
            upper: (-(m - err).max(0.0)).exp(),
        }
    }
}

fn lattice_tail(g: &ConnectionFunction, d: u32, t: f64, domain: LatticeDomain) -> Result<TailMass> {
    let scale = connection::tail_sum_lattice(g, d, -1.0, domain, 1e-6)?.value;
    connection::tail_sum_lattice(g, d, t, domain, (SERIES_RTOL * scale).max(1e-300))
}

fn window_sites(d: u32, n: u64) -> Result<f64> {
    Ok(Window::new(d, n)?.vertex_count()? as f64)
}

/// CDF of the longest edge at the origin under the Palm measure,
/// `exp(-ρ ∫_{‖x‖>r} g(x) dx)`.
pub fn typical_edge_cdf(g: &ConnectionFunction, rho: f64, d: u32, norm: NormKind, r: f64) -> Result<Probability> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::param("rho must be positive"));
    }
    let tm = connection::tail_mass_continuum(g, d, norm, r)?;
    Ok(Probability::from_exponent(rho * tm.value, rho * tm.truncation_error))
}

/// CDF of the longest edge of the directed models on the lattice, where the
/// per-vertex maxima are independent.
pub fn directed_max_cdf(g: &ConnectionFunction, d: u32, n: u64, r: f64, variant: Model) -> Result<Probability> {
    let domain = match variant {
        Model::Dlrp => LatticeDomain::Full,
        Model::Dlrpq => LatticeDomain::Quadrant,
        _ => return Err(Error::param("directed_max_cdf needs the dlrp or dlrpq model")),
    };
    let sites = window_sites(d, n)?;
    let tm = lattice_tail(g, d, r, domain)?;
    Ok(Probability::from_exponent(sites * tm.value, sites * tm.truncation_error))
}

/// Exact `d = 1` undirected computations on a precomputed one-sided tail table
/// `S(u) = Σ_{k>u} w(k)`.
#[derive(Debug, Clone)]
pub struct UndirectedD1 {
    tail: ShellTail,
}

impl UndirectedD1 {
    pub fn new(g: ConnectionFunction) -> Result<Self> {
        Ok(UndirectedD1 {
            tail: ShellTail::new(g, 1, LatticeDomain::Quadrant)?,
        })
    }

    pub fn with_table(g: ConnectionFunction, table: u64) -> Result<Self> {
        Ok(UndirectedD1 {
            tail: ShellTail::with_table(g, 1, LatticeDomain::Quadrant, table)?,
        })
    }

    pub fn family(&self) -> &ConnectionFunction {
        self.tail.family()
    }

    fn w(&self, k: u64) -> f64 {
        self.tail.family().edge_weight(k as f64)
    }

    /// `I = Σ_i (Σ_{y: |y-x_i|>t} w - Σ_{k<i, |x_i-x_k|>t} w)`; the CDF of the
    /// longest edge at `t` is `exp(-I)`.
    pub fn exponent(&self, n: u64, t: f64) -> f64 {
        let sites = 2 * n + 1;
        let t0 = if t < 0.0 { 0 } else { t.floor() as u64 };
        let full = 2.0 * self.tail.tail(t0);
        let mut correction = 0.0;
        // pairs inside the window at distance j occur 2n+1-j times
        for j in (t0 + 1)..sites {
            correction += (sites - j) as f64 * self.w(j);
        }
        sites as f64 * full - correction
    }

    /// Per-vertex exponents `I_i`, `i = 1..=2n+1`, in increasing order.
    pub fn vertex_exponents(&self, n: u64, t: f64) -> Vec<f64> {
        let sites = 2 * n + 1;
        let t0 = if t < 0.0 { 0 } else { t.floor() as u64 };
        let full = 2.0 * self.tail.tail(t0);
        let mut out = Vec::with_capacity(sites as usize);
        let mut inner = 0.0;
        for i in 1..=sites {
            // earlier vertices sit at distances 1..i-1
            if i >= 2 && i - 1 > t0 {
                inner += self.w(i - 1);
            }
            out.push((full - inner).max(0.0));
        }
        out
    }

    pub fn cdf(&self, n: u64, t: f64) -> f64 {
        (-self.exponent(n, t)).exp()
    }

    /// Exact mean number of vertices `x_i` whose edge to some not-yet-listed
    /// vertex exceeds `t`.
    pub fn expected_exceedances(&self, n: u64, t: f64) -> f64 {
        self.vertex_exponents(n, t).iter().map(|i| -(-i).exp_m1()).sum()
    }

    /// Exact mean number of window vertices with some incident edge longer
    /// than `t` (the exceedance count `W(n)`).
    pub fn expected_incident_exceedances(&self, n: u64, t: f64) -> f64 {
        let t0 = if t < 0.0 { 0 } else { t.floor() as u64 };
        (2 * n + 1) as f64 * -(-2.0 * self.tail.tail(t0)).exp_m1()
    }
}

/// `P(e_n* ≤ t)` for undirected percolation on ℤ, together with the exponent.
pub fn undirected_cdf_d1(g: &ConnectionFunction, n: u64, t: f64) -> Result<(f64, f64)> {
    let table = if let ConnectionFunction::F { .. } = g {
        // the table only needs to cover the window and the threshold
        ((2 * n + 2).max(t.max(0.0) as u64 + 2)).clamp(1 << 10, ShellTail::DEFAULT_TABLE)
    } else {
        ShellTail::DEFAULT_TABLE
    };
    let u = UndirectedD1::with_table(*g, table)?;
    let i = u.exponent(n, t);
    Ok(((-i).exp(), i))
}

/// Exponent of `P(e_n* ≤ t)` for undirected percolation on ℤ^d by direct
/// pair enumeration, `O(N²)` in the number of window sites `N`.
pub fn undirected_exponent_general(g: &ConnectionFunction, d: u32, n: u64, t: f64, pair_budget: u128) -> Result<f64> {
    let window = Window::new(d, n)?;
    let count = window.vertex_count()?;
    let pairs = count * count.saturating_sub(1) / 2;
    if pairs > pair_budget {
        return Err(Error::Budget {
            what: "window pairs".into(),
            required: pairs,
            limit: pair_budget,
        });
    }
    let full = lattice_tail(g, d, t, LatticeDomain::Full)?.value;
    let pts = crate::geometry::enumerate_window(d, n)?;
    let mut inner = 0.0;
    for (i, x) in pts.iter().enumerate() {
        for y in &pts[..i] {
            let dist: i64 = x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum();
            if dist as f64 > t {
                inner += g.edge_weight(dist as f64);
            }
        }
    }
    Ok(count as f64 * full - inner)
}

/// Expected exceedance count `β_n` at the absolute threshold `t`.
pub fn expected_exceedances(
    model: Model,
    g: &ConnectionFunction,
    rho: f64,
    d: u32,
    norm: NormKind,
    n: u64,
    t: f64,
) -> Result<f64> {
    match model {
        Model::Continuous => {
            if !(rho > 0.0 && rho.is_finite()) {
                return Err(Error::param("rho must be positive"));
            }
            let tm = connection::tail_mass_continuum(g, d, norm, t)?;
            Ok(rho * (2.0 * n as f64).powi(d as i32) * -(-rho * tm.value).exp_m1())
        }
        Model::Dlrp | Model::Dlrpq => {
            norm.require_one_norm()?;
            let sites = window_sites(d, n)?;
            let tm = lattice_tail(g, d, t, model.lattice_domain().unwrap())?;
            Ok(sites * -(-tm.value).exp_m1())
        }
        Model::Discrete => {
            norm.require_one_norm()?;
            if d != 1 {
                return Err(Error::param("exact undirected exceedance counts are implemented for d = 1"));
            }
            let table = ((2 * n + 2).max(t.max(0.0) as u64 + 2)).clamp(1 << 10, ShellTail::DEFAULT_TABLE);
            Ok(UndirectedD1::with_table(*g, table)?.expected_exceedances(n, t))
        }
    }
}

/// Smooth version of [`expected_exceedances`] used for root calibration: the
/// lattice shell tail is replaced by its integral surrogate.
pub fn calibration_exceedances(
    model: Model,
    g: &ConnectionFunction,
    rho: f64,
    d: u32,
    norm: NormKind,
    n: u64,
    t: f64,
) -> Result<f64> {
    match model.lattice_domain() {
        None => expected_exceedances(model, g, rho, d, norm, n, t),
        Some(domain) => {
            let sites = window_sites(d, n)?;
            let s = connection::shell_tail_integral(g, d, domain, t)?;
            Ok(sites * -(-s).exp_m1())
        }
    }
}

/// Large-n limit of the exponent for `d = 1`, `α = 2`, undirected, with the
/// threshold `t = k·n·r`: `4/(kr)` once `kr ≥ 2`, and
/// `2/(kr) + 1 + ln(2/(kr))` below, where window-internal pairs matter.
pub fn dichotomy_asymptote(k: f64, r: f64) -> f64 {
    let x = k * r;
    if x >= 2.0 {
        4.0 / x
    } else {
        2.0 / x + 1.0 + (2.0 / x).ln()
    }
}

/// Calibrated heavy-tailed limit law of the `d = 1`, `α = 2` dichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZStarLaw {
    /// Scale: thresholds are `k·n·r`.
    pub k: f64,
    /// Constant part `1 + ln(2/k)` of the exponent below the dichotomy point.
    pub c: f64,
}

impl ZStarLaw {
    pub fn new(k: f64) -> Self {
        ZStarLaw {
            k,
            c: 1.0 + (2.0 / k).ln(),
        }
    }

    /// Threshold where the exponent switches form.
    pub fn switch_point(&self) -> f64 {
        2.0 / self.k
    }

    pub fn mu(&self, r: f64) -> f64 {
        if r >= self.switch_point() {
            4.0 / (self.k * r)
        } else {
            2.0 / (self.k * r) + self.c - r.ln()
        }
    }

    pub fn cdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            0.0
        } else {
            (-self.mu(r)).exp()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DichotomyReport {
    pub r: f64,
    pub k: f64,
    /// `(n, I_n)` along the grid.
    pub trace: Vec<(u64, f64)>,
    /// Richardson values `(10 I_{10n} - I_n)/9`, keyed by the larger `n`.
    pub richardson: Vec<(u64, f64)>,
    pub mu: f64,
    /// Gap between the last two Richardson values.
    pub convergence: f64,
    pub asymptote: f64,
}

pub const DICHOTOMY_GRID: [u64; 4] = [1_000, 10_000, 100_000, 1_000_000];

/// Limit of the exact exponent `I_n` at `t = k·n·r` for `d = 1`, `α = 2`,
/// extrapolated along `n ∈ {10³,…,10⁶}`. Fails if the last two extrapolated
/// values differ by more than `rel_tol` relative.
pub fn dichotomy_limit(r: f64, k: f64, rel_tol: f64) -> Result<DichotomyReport> {
    dichotomy_limit_on(r, k, rel_tol, &DICHOTOMY_GRID)
}

pub fn dichotomy_limit_on(r: f64, k: f64, rel_tol: f64, grid: &[u64]) -> Result<DichotomyReport> {
    if !(r > 0.0 && k > 0.0) {
        return Err(Error::param("dichotomy needs r > 0 and k > 0"));
    }
    if grid.len() < 3 {
        return Err(Error::param("dichotomy grid needs at least three sizes"));
    }
    let u = UndirectedD1::new(ConnectionFunction::F { alpha: 2.0 })?;
    let trace: Vec<(u64, f64)> = grid.iter().map(|&n| (n, u.exponent(n, k * n as f64 * r))).collect();
    let richardson: Vec<(u64, f64)> = trace
        .windows(2)
        .map(|w| {
            let ratio = w[1].0 as f64 / w[0].0 as f64;
            (w[1].0, (ratio * w[1].1 - w[0].1) / (ratio - 1.0))
        })
        .collect();
    let last = richardson[richardson.len() - 1].1;
    let prev = richardson[richardson.len() - 2].1;
    let convergence = (last - prev).abs();
    if convergence > rel_tol * last.abs() {
        return Err(Error::NotConverged {
            tolerance: rel_tol,
            trace,
        });
    }
    Ok(DichotomyReport {
        r,
        k,
        trace,
        richardson,
        mu: last,
        convergence,
        asymptote: dichotomy_asymptote(k, r),
    })
}

/// Poisson approximation bounds for the exceedance count of the continuous
/// model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonBoundReport {
    pub beta_n: f64,
    pub dtv_bound: f64,
    pub dw_bound: f64,
    pub tail_mass_used: TailMass,
}

pub fn poisson_bounds(
    g: &ConnectionFunction,
    rho: f64,
    d: u32,
    norm: NormKind,
    n: u64,
    t: f64,
) -> Result<PoissonBoundReport> {
    let tm = connection::tail_mass_continuum(g, d, norm, t)?;
    let beta = expected_exceedances(Model::Continuous, g, rho, d, norm, n, t)?;
    let vol = rho * (2.0 * n as f64).powi(d as i32);
    let sq = tm.value * tm.value;
    let (tv_factor, w_factor) = if beta > 0.0 {
        ((1.0 / beta).min(1.0), beta.powf(-0.5).min(1.0))
    } else {
        (1.0, 1.0)
    };
    Ok(PoissonBoundReport {
        beta_n: beta,
        dtv_bound: vol * tv_factor * sq,
        dw_bound: 3.0 * vol * w_factor * sq,
        tail_mass_used: tm,
    })
}

pub fn limit_cdf(law: &LimitLaw, r: f64) -> f64 {
    law.cdf(r)
}
