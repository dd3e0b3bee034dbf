//! Batch commands behind the `lrp` binary: simulation, analytic tables,
//! norming tables and rate sweeps. Every command returns its output as data
//! and, when given a directory, writes CSV and JSON files there.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::config::{ExactTable, ExperimentConfig, Padding, Threshold};
use crate::connection::ConnectionFunction;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::norming::{self, LimitLaw, NormingCase, NormingSchedule, ShiftRule};
use crate::sampler::continuous::{padding_for_ceiling, ContinuousSampler};
use crate::sampler::directed::DirectedSampler;
use crate::sampler::undirected::UndirectedSampler;
use crate::sampler::{run_replicates, ExceedanceRecord, SeedSpec};
use crate::stats::{self, EmpiricalDistribution, IntHistogram};

/// Norming schedule for a model and family.
///
/// The undirected and directed lattice models with the `W` family have no
/// Weibull limit; they get the nominal scale `c_n = n^{-d/(α+1)}`, `b_n = M`
/// so that runs can be compared with the continuous case.
pub fn schedule_for(model: Model, g: &ConnectionFunction, d: u32, rho: f64, norm: crate::geometry::NormKind) -> Result<NormingSchedule> {
    match *g {
        ConnectionFunction::F { alpha } => norming::frechet_schedule(d, alpha, rho, model, norm),
        ConnectionFunction::G1 { lambda } => norming::gumbel_g1_schedule(d, lambda, model, rho, norm),
        ConnectionFunction::G2 { lambda, alpha } => norming::gumbel_g2_schedule(d, alpha, lambda, model, rho, norm),
        ConnectionFunction::W { m, alpha } => {
            if model == Model::Continuous {
                return norming::weibull_schedule(d, alpha, rho, m, norm);
            }
            g.validate(d)?;
            Ok(NormingSchedule {
                case: NormingCase::Weibull,
                model,
                law: LimitLaw::Weibull { gamma: alpha + 1.0 },
                g: *g,
                d,
                rho,
                norm,
                k: 1.0,
                shift: ShiftRule::None,
            })
        }
    }
}

pub fn config_schedule(cfg: &ExperimentConfig) -> Result<NormingSchedule> {
    schedule_for(cfg.model, &cfg.connection, cfg.d, cfg.rho, cfg.norm)
}

/// Master seed of grid point `n`, so every `n` gets its own streams.
pub fn grid_seed(seed: u64, n: u64) -> u64 {
    let mut z = seed ^ n.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One sampler per model, built once per window size.
#[derive(Debug, Clone)]
pub enum ModelSampler {
    Continuous(ContinuousSampler),
    Directed(DirectedSampler),
    Undirected(UndirectedSampler),
}

impl ModelSampler {
    pub fn build(cfg: &ExperimentConfig, n: u64) -> Result<Self> {
        let g = cfg.connection;
        Ok(match cfg.model {
            Model::Continuous => {
                let (padding, ceiling) = match cfg.padding {
                    Padding::Fixed(r) => (r, None),
                    Padding::Ceiling(c) => (padding_for_ceiling(&g, cfg.rho, cfg.d, cfg.norm, n, c)?, Some(c)),
                };
                ModelSampler::Continuous(ContinuousSampler::new(g, cfg.rho, cfg.d, cfg.norm, n, padding, ceiling)?)
            }
            Model::Dlrp | Model::Dlrpq => ModelSampler::Directed(DirectedSampler::new(g, cfg.d, n, cfg.model, cfg.norm)?),
            Model::Discrete => {
                ModelSampler::Undirected(UndirectedSampler::new(g, cfg.d, n, cfg.norm, cfg.allow_high_dim)?)
            }
        })
    }

    pub fn sample(&self, seed: SeedSpec, threshold: f64) -> Result<ExceedanceRecord> {
        match self {
            ModelSampler::Continuous(s) => s.sample(seed, threshold),
            ModelSampler::Directed(s) => Ok(s.sample(seed, threshold)),
            ModelSampler::Undirected(s) => Ok(s.sample(seed, threshold)),
        }
    }

    pub fn padding(&self) -> f64 {
        match self {
            ModelSampler::Continuous(s) => s.padding(),
            _ => 0.0,
        }
    }

    pub fn certificate(&self) -> f64 {
        match self {
            ModelSampler::Continuous(s) => s.certificate(),
            _ => 0.0,
        }
    }
}

fn absolute_threshold(cfg: &ExperimentConfig, schedule: Option<&NormingSchedule>, n: u64) -> Result<f64> {
    match cfg.threshold {
        Threshold::Absolute(t) => Ok(t),
        Threshold::R(r) => match schedule {
            Some(s) => s.threshold(n, r),
            None => Err(Error::param("threshold r needs a norming schedule")),
        },
    }
}

/// Records of all replicates at window size `n`, in replicate order.
pub fn simulate_n(cfg: &ExperimentConfig, n: u64, workers: usize) -> Result<(Vec<ExceedanceRecord>, f64, f64)> {
    let schedule = config_schedule(cfg).ok();
    let threshold = absolute_threshold(cfg, schedule.as_ref(), n)?;
    let sampler = ModelSampler::build(cfg, n)?;
    let recs = run_replicates(cfg.replicates, grid_seed(cfg.seed, n), workers, |s| sampler.sample(s, threshold))?;
    Ok((recs, sampler.padding(), sampler.certificate()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcdfPoint {
    pub r: f64,
    pub ecdf: f64,
    pub limit_cdf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateRow {
    pub n: u64,
    pub master_seed: u64,
    pub replicates: u64,
    pub threshold: f64,
    pub c_n: Option<f64>,
    pub b_n: Option<f64>,
    pub padding: f64,
    pub certificate: f64,
    pub e_star_mean: f64,
    pub e_star_median: f64,
    pub ks_to_limit: Option<f64>,
    pub w_histogram: Vec<u64>,
    pub w_mean: f64,
    pub beta_n: Option<f64>,
    pub tv_to_poisson: Option<f64>,
    pub ecdf: Vec<EcdfPoint>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateSummary {
    pub config: ExperimentConfig,
    pub law: Option<LimitLaw>,
    pub rows: Vec<SimulateRow>,
}

pub const SIMULATE_HEADER: &str = "n,replicate,e_star,normalized,w_count,w_prime_count,threshold,certificate";

fn opt_f64(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Runs every grid point and returns the per-replicate CSV with the summary.
pub fn simulate(cfg: &ExperimentConfig, workers: usize) -> Result<(String, SimulateSummary)> {
    cfg.validate()?;
    let schedule = config_schedule(cfg).ok();
    let mut csv = String::from(SIMULATE_HEADER);
    csv.push('\n');
    let mut rows = Vec::new();
    for &n in &cfg.n_grid {
        let start = Instant::now();
        let (recs, padding, certificate) = simulate_n(cfg, n, workers)?;
        let norming = schedule.as_ref().and_then(|s| Some((s.c(n).ok()?, s.b(n).ok()?)));
        for r in &recs {
            let normalized = norming.map(|(c, b)| (r.e_star_or_zero() - b) / c);
            writeln!(
                csv,
                "{},{},{},{},{},{},{},{}",
                n,
                r.replicate,
                opt_f64(r.e_star),
                opt_f64(normalized),
                r.w_count,
                r.w_prime_count.map(|v| v.to_string()).unwrap_or_default(),
                r.threshold_used,
                r.truncation_certificate
            )
            .expect("writing to a String");
        }
        let e_vals: Vec<f64> = recs.iter().map(|r| r.e_star_or_zero()).collect();
        let emp = EmpiricalDistribution::new(e_vals)?;
        let counts = recs.iter().map(|r| r.w_prime_count.unwrap_or(r.w_count));
        let hist = IntHistogram::from_values(counts);
        let threshold = recs[0].threshold_used;
        let beta_n = analytic::expected_exceedances(cfg.model, &cfg.connection, cfg.rho, cfg.d, cfg.norm, n, threshold).ok();
        let tv = match beta_n {
            Some(b) => Some(stats::tv_to_poisson(&hist, b)?),
            None => None,
        };
        let (ks, ecdf) = match (norming, schedule.as_ref()) {
            (Some((c, b)), Some(s)) => {
                let z = EmpiricalDistribution::new(emp.values().iter().map(|e| (e - b) / c).collect())?;
                let ks = stats::ks_distance(&z, |x| s.law.cdf(x));
                let pts = cfg
                    .r_grid
                    .iter()
                    .map(|&r| EcdfPoint {
                        r,
                        ecdf: z.ecdf(r),
                        limit_cdf: s.law.cdf(r),
                    })
                    .collect();
                (Some(ks), pts)
            }
            _ => (None, Vec::new()),
        };
        rows.push(SimulateRow {
            n,
            master_seed: grid_seed(cfg.seed, n),
            replicates: cfg.replicates,
            threshold,
            c_n: norming.map(|p| p.0),
            b_n: norming.map(|p| p.1),
            padding,
            certificate,
            e_star_mean: emp.mean(),
            e_star_median: emp.median(),
            ks_to_limit: ks,
            w_mean: hist.mean(),
            w_histogram: hist.counts,
            beta_n,
            tv_to_poisson: tv,
            ecdf,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    let summary = SimulateSummary {
        config: cfg.clone(),
        law: schedule.map(|s| s.law),
        rows,
    };
    Ok((csv, summary))
}

fn write_out(out: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join(name), text)?;
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("summary serializes");
    s.push('\n');
    s
}

pub fn cmd_simulate(cfg: &ExperimentConfig, workers: usize, out: Option<&Path>) -> Result<SimulateSummary> {
    let (csv, summary) = simulate(cfg, workers)?;
    if let Some(dir) = out {
        write_out(dir, "simulate.csv", &csv)?;
        write_out(dir, "summary.json", &to_json(&summary))?;
    }
    Ok(summary)
}

/// A CSV table with its header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

fn r_grid_or_default(cfg: &ExperimentConfig) -> Vec<f64> {
    if cfg.r_grid.is_empty() {
        vec![0.25, 0.5, 1.0, 2.0, 4.0]
    } else {
        cfg.r_grid.clone()
    }
}

/// Analytic CDF of the longest edge at absolute length `t`, with a band.
fn longest_edge_cdf(cfg: &ExperimentConfig, n: u64, t: f64) -> Result<analytic::Probability> {
    let g = &cfg.connection;
    match cfg.model {
        Model::Continuous => {
            let pb = analytic::poisson_bounds(g, cfg.rho, cfg.d, cfg.norm, n, t)?;
            let v = (-pb.beta_n).exp();
            Ok(analytic::Probability {
                value: v,
                lower: (v - pb.dtv_bound).max(0.0),
                upper: (v + pb.dtv_bound).min(1.0),
            })
        }
        Model::Dlrp | Model::Dlrpq => analytic::directed_max_cdf(g, cfg.d, n, t, cfg.model),
        Model::Discrete => {
            if cfg.d != 1 {
                return Err(Error::param("exact undirected tables are implemented for d = 1"));
            }
            let (v, _) = analytic::undirected_cdf_d1(g, n, t)?;
            Ok(analytic::Probability {
                value: v,
                lower: v,
                upper: v,
            })
        }
    }
}

pub fn exact_table(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    let g = cfg.connection;
    let grid = r_grid_or_default(cfg);
    match cfg.exact {
        ExactTable::Typical => {
            let mut t = Table::new(&["r", "cdf", "lower", "upper"]);
            for &r in &grid {
                let p = analytic::typical_edge_cdf(&g, cfg.rho, cfg.d, cfg.norm, r)?;
                t.rows.push(vec![r, p.value, p.lower, p.upper]);
            }
            Ok(t)
        }
        ExactTable::LongestEdge => {
            let s = config_schedule(cfg)?;
            let mut t = Table::new(&["n", "r", "threshold", "cdf", "lower", "upper", "limit_cdf"]);
            for &n in &cfg.n_grid {
                for &r in &grid {
                    let th = s.threshold(n, r)?;
                    let p = longest_edge_cdf(cfg, n, th)?;
                    t.rows.push(vec![n as f64, r, th, p.value, p.lower, p.upper, s.law.cdf(r)]);
                }
            }
            Ok(t)
        }
        ExactTable::Dichotomy => {
            if cfg.model != Model::Discrete || cfg.d != 1 || g != (ConnectionFunction::F { alpha: 2.0 }) {
                return Err(Error::param("the dichotomy table needs the discrete model, d = 1 and F with alpha = 2"));
            }
            let k = config_schedule(cfg)?.k;
            let mut t = Table::new(&["r", "inv_r", "mu", "gap", "asymptote", "convergence"]);
            for &r in &grid {
                let rep = analytic::dichotomy_limit(r, k, 0.01)?;
                t.rows.push(vec![r, 1.0 / r, rep.mu, rep.mu - 1.0 / r, rep.asymptote, rep.convergence]);
            }
            Ok(t)
        }
        ExactTable::PoissonBounds => {
            if cfg.model != Model::Continuous {
                return Err(Error::param("Poisson bounds are implemented for the continuous model"));
            }
            let s = config_schedule(cfg)?;
            let mut t = Table::new(&["n", "r", "threshold", "beta_n", "dtv_bound", "dw_bound"]);
            for &n in &cfg.n_grid {
                for &r in &grid {
                    let th = s.threshold(n, r)?;
                    let pb = analytic::poisson_bounds(&g, cfg.rho, cfg.d, cfg.norm, n, th)?;
                    t.rows.push(vec![n as f64, r, th, pb.beta_n, pb.dtv_bound, pb.dw_bound]);
                }
            }
            Ok(t)
        }
    }
}

pub fn cmd_exact(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<Table> {
    let t = exact_table(cfg)?;
    if let Some(dir) = out {
        write_out(dir, "exact.csv", &t.to_csv())?;
    }
    Ok(t)
}

/// `(n, c_n, b̃_n, b_n, K)` per grid point. For `G1` with `d = 2` the Lambert
/// route is added next to the quantile route, and for calibrated shifts the
/// change of `K_n` from the previous row.
pub fn norming_table(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    let s = config_schedule(cfg)?;
    let lambert = matches!(cfg.connection, ConnectionFunction::G1 { .. }) && cfg.d == 2;
    let mut cols = vec!["n", "c_n", "b_tilde", "b_n", "shift"];
    if lambert {
        cols.extend(["lambert_c", "lambert_b", "route_gap"]);
    }
    if s.shift == ShiftRule::Calibrated {
        cols.push("shift_change");
    }
    let mut t = Table::new(&cols);
    let mut prev: Option<f64> = None;
    for &n in &cfg.n_grid {
        let c = s.c(n)?;
        let bt = s.b_tilde(n)?;
        let k = match s.case {
            NormingCase::Frechet | NormingCase::Weibull => s.k,
            _ => s.shift_at(n)?,
        };
        let b = match s.case {
            NormingCase::Frechet | NormingCase::Weibull => s.b(n)?,
            _ => bt + c * k,
        };
        let mut row = vec![n as f64, c, bt, b, k];
        if let (true, ConnectionFunction::G1 { lambda }) = (lambert, cfg.connection) {
            let (lc, lb) = norming::gumbel_g1_lambert_d2(lambda, n)?;
            row.extend([lc, lb, (lc - c).abs().max((lb - bt).abs())]);
        }
        if s.shift == ShiftRule::Calibrated {
            row.push(prev.map(|p| k - p).unwrap_or(f64::NAN));
            prev = Some(k);
        }
        t.rows.push(row);
    }
    Ok(t)
}

pub fn cmd_norming(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<Table> {
    let t = norming_table(cfg)?;
    if let Some(dir) = out {
        write_out(dir, "norming.csv", &t.to_csv())?;
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    /// What was measured along the grid.
    pub quantity: String,
    pub r: f64,
    pub fit: stats::RateFit,
    pub table: Table,
}

/// Rate of convergence along the `n` grid at the configured `r`: the
/// total-variation bound for the continuous model, and the gap between the
/// exact CDF and the limit law for the lattice models.
pub fn sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let r = match cfg.threshold {
        Threshold::R(r) => r,
        Threshold::Absolute(_) => return Err(Error::param("sweep needs a normalized threshold r")),
    };
    let s = config_schedule(cfg)?;
    let mut pts = Vec::new();
    for &n in &cfg.n_grid {
        let th = s.threshold(n, r)?;
        let v = match cfg.model {
            Model::Continuous => analytic::poisson_bounds(&cfg.connection, cfg.rho, cfg.d, cfg.norm, n, th)?.dtv_bound,
            _ => (longest_edge_cdf(cfg, n, th)?.value - s.law.cdf(r)).abs(),
        };
        pts.push((n as f64, v));
    }
    let fit = stats::fit_rate(&pts)?;
    let mut table = Table::new(&["n", "value", "fitted"]);
    for &(n, v) in &pts {
        table.rows.push(vec![n, v, fit.predict(n)]);
    }
    let quantity = match cfg.model {
        Model::Continuous => "dtv_bound",
        _ => "cdf_gap",
    };
    Ok(SweepReport {
        quantity: quantity.into(),
        r,
        fit,
        table,
    })
}

pub fn cmd_sweep(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<SweepReport> {
    let rep = sweep(cfg)?;
    if let Some(dir) = out {
        write_out(dir, "sweep.csv", &rep.table.to_csv())?;
        write_out(dir, "sweep.json", &to_json(&rep))?;
    }
    Ok(rep)
}
