use proptest::prelude::*;

use longedge::analytic::{self, UndirectedD1};
use longedge::connection::{self, ConnectionFunction, LatticeDomain, ShellTail};
use longedge::geometry::{self, NormKind};
use longedge::model::Model;
use longedge::norming;
use longedge::sampler::{run_replicates, stream, SeedSpec};
use longedge::stats::{self, EmpiricalDistribution, IntHistogram};
use rand::Rng;

fn family() -> impl Strategy<Value = ConnectionFunction> {
    prop_oneof![
        (2.2f64..6.0).prop_map(|alpha| ConnectionFunction::F { alpha }),
        (0.3f64..3.0).prop_map(|lambda| ConnectionFunction::G1 { lambda }),
        (0.3f64..3.0, 0.5f64..3.0).prop_map(|(lambda, alpha)| ConnectionFunction::G2 { lambda, alpha }),
        (0.5f64..4.0, 0.5f64..3.0).prop_map(|(m, alpha)| ConnectionFunction::W { m, alpha }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ball_count_is_sum_of_shells(d in 1u32..=4, k in 0u64..=20) {
        let shells: u128 = (0..=k).map(|j| geometry::shell_count(d, j).unwrap()).sum();
        let side = 2 * k as i64 + 1;
        let mut ball = 0u128;
        let total = (side as u128).pow(d);
        for idx in 0..total {
            let mut rest = idx;
            let mut norm = 0i64;
            for _ in 0..d {
                norm += ((rest % side as u128) as i64 - k as i64).abs();
                rest /= side as u128;
            }
            if norm <= k as i64 {
                ball += 1;
            }
        }
        prop_assert_eq!(shells, ball);
    }

    #[test]
    fn quadrant_shells_below_full(d in 1u32..=6, k in 1u64..=200) {
        prop_assert!(geometry::quadrant_shell_count(d, k).unwrap() <= geometry::shell_count(d, k).unwrap());
    }

    #[test]
    fn continuum_tail_is_nonincreasing(g in family(), r in 0.0f64..8.0, dr in 0.0f64..3.0) {
        let d = 1;
        let a = connection::tail_mass_continuum(&g, d, NormKind::OneNorm, r).unwrap().value;
        let b = connection::tail_mass_continuum(&g, d, NormKind::OneNorm, r + dr).unwrap().value;
        prop_assert!(b <= a * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn lattice_tail_is_nonincreasing(g in family(), r in 0.0f64..30.0, dr in 0.5f64..10.0, d in 1u32..=2) {
        prop_assume!(g.validate(d).is_ok());
        let a = connection::tail_sum_lattice(&g, d, r, LatticeDomain::Full, 1e-9).unwrap();
        let b = connection::tail_sum_lattice(&g, d, r + dr, LatticeDomain::Full, 1e-9).unwrap();
        prop_assert!(b.value - b.truncation_error <= a.value + a.truncation_error);
    }

    #[test]
    fn shell_tail_inverse_brackets_level(alpha in 1.2f64..4.0, level in 1e-9f64..0.5) {
        let t = ShellTail::with_table(ConnectionFunction::F { alpha }, 1, LatticeDomain::Quadrant, 4096).unwrap();
        match t.inverse(level) {
            None => prop_assert!(t.tail(0) <= level),
            Some(s) => {
                prop_assert!(t.tail(s) <= level);
                prop_assert!(s == 0 || t.tail(s - 1) > level);
            }
        }
    }

    #[test]
    fn cdfs_are_monotone_probabilities(alpha in 2.2f64..5.0, n in 0u64..40, r in 0.0f64..50.0, dr in 0.0f64..20.0) {
        let g = ConnectionFunction::F { alpha };
        let u = UndirectedD1::with_table(g, 1 << 12).unwrap();
        let (a, b) = (u.cdf(n, r), u.cdf(n, r + dr));
        prop_assert!((0.0..=1.0).contains(&a) && a <= b + 1e-15);
        let q = analytic::directed_max_cdf(&g, 1, n, r, Model::Dlrpq).unwrap().value;
        let p = analytic::directed_max_cdf(&g, 1, n, r, Model::Dlrp).unwrap().value;
        // coupling sandwich: quadrant ≥ undirected ≥ directed
        prop_assert!(q + 1e-12 >= a && a + 1e-12 >= p, "{} {} {}", q, a, p);
    }

    #[test]
    fn typical_cdf_monotone(g in family(), r in 0.0f64..6.0, dr in 0.0f64..2.0) {
        let a = analytic::typical_edge_cdf(&g, 1.0, 1, NormKind::OneNorm, r).unwrap();
        let b = analytic::typical_edge_cdf(&g, 1.0, 1, NormKind::OneNorm, r + dr).unwrap();
        prop_assert!(a.lower <= a.value && a.value <= a.upper);
        prop_assert!((0.0..=1.0).contains(&a.value) && a.value <= b.value + 1e-12);
    }

    #[test]
    fn erlang_quantile_residual(lambda in 0.2f64..5.0, d in 1u32..=4, p in 0.001f64..0.999) {
        let t = norming::erlang_quantile(lambda, d, p).unwrap();
        prop_assert!((norming::erlang_cdf(lambda, d, t) - p).abs() <= 1e-12);
    }

    #[test]
    fn lambert_branch(u in -0.3678794411714423f64..-1e-300) {
        let w = norming::lambert_w_minus1(u).unwrap();
        prop_assert!(w <= -1.0);
        prop_assert!((w * w.exp() - u).abs() <= 1e-12 * u.abs().max(1e-300) + 1e-15);
    }

    #[test]
    fn gumbel_scale_nonincreasing(lambda in 0.3f64..3.0, d in 1u32..=3, n in 3u64..10_000) {
        let s = norming::gumbel_g1_schedule(d, lambda, Model::Dlrpq, 1.0, NormKind::OneNorm).unwrap();
        let (a, b) = (s.c(n).unwrap(), s.c(n + 1).unwrap());
        prop_assert!(a > 0.0 && b <= a * (1.0 + 1e-12));
    }

    #[test]
    fn normalize_inverts_threshold(alpha in 1.5f64..5.0, n in 2u64..100_000, r in -3.0f64..3.0) {
        let s = norming::frechet_schedule(1, alpha, 1.0, Model::Continuous, NormKind::OneNorm).unwrap();
        let t = s.threshold(n, r).unwrap();
        prop_assert!((s.normalize(n, t).unwrap() - r).abs() <= 1e-9 * (1.0 + r.abs()));
    }

    #[test]
    fn ks_invariant_under_monotone_maps(xs in prop::collection::vec(0.01f64..10.0, 1..60)) {
        let cdf = |x: f64| 1.0 - (-x).exp();
        let a = stats::ks_distance(&EmpiricalDistribution::new(xs.clone()).unwrap(), cdf);
        let ys: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let b = stats::ks_distance(&EmpiricalDistribution::new(ys).unwrap(), |y: f64| cdf(y.exp()));
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn histogram_merge_associative(a in prop::collection::vec(0u64..20, 0..30),
                                   b in prop::collection::vec(0u64..20, 0..30),
                                   c in prop::collection::vec(0u64..20, 0..30)) {
        let (ha, hb, hc) = (IntHistogram::from_values(a), IntHistogram::from_values(b), IntHistogram::from_values(c));
        let mut left = ha.clone();
        left.merge(&hb);
        left.merge(&hc);
        let mut bc = hb.clone();
        bc.merge(&hc);
        let mut right = ha.clone();
        right.merge(&bc);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn replicates_independent_of_workers(seed in any::<u64>(), m in 1u64..64, w in 2usize..6) {
        let f = |s: SeedSpec| Ok(s.rng(stream::TYPICAL).random::<u64>());
        prop_assert_eq!(run_replicates(m, seed, 1, f).unwrap(), run_replicates(m, seed, w, f).unwrap());
    }
}

#[test]
fn dkw_band_holds_empirically() {
    let m = 200;
    let delta = 0.05;
    let eps = stats::dkw_epsilon(m, delta);
    let outside = run_replicates(200, 4242, 4, |s| {
        let mut rng = s.rng(stream::TYPICAL);
        let xs: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
        let ks = stats::ks_distance(&EmpiricalDistribution::new(xs)?, |x| x.clamp(0.0, 1.0));
        Ok(ks > eps)
    })
    .unwrap();
    let frac = outside.iter().filter(|&&b| b).count() as f64 / 200.0;
    assert!(frac <= delta + 0.02, "{frac}");
}

#[test]
fn tv_zero_for_exact_pmf() {
    let mut h = IntHistogram::default();
    for k in 0..15 {
        h.counts.push((stats::poisson_pmf(2.0, k) * 1e12).round() as u64);
    }
    assert!(stats::tv_to_poisson(&h, 2.0).unwrap() < 1e-8);
    assert!(stats::tv_to_poisson(&h, 2.5).unwrap() > 0.05);
}
