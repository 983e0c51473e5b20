use proptest::prelude::*;
use renewalkit::stats::{ks_critical_1pct, ks_statistic};
use renewalkit::{DistributionSpec, Moment, RngStream};

fn d(s: &str) -> DistributionSpec {
    s.parse().unwrap()
}

const CONTINUOUS: [&str; 6] = [
    "exp:2",
    "unif:0,1",
    "unif:-2,5",
    "pareto:3,1",
    "lognorm:0.2,0.6",
    "cauchy:1,0.5",
];

#[test]
fn exponential_mean_over_a_million_draws() {
    let e = d("exp:2");
    let mut rng = RngStream::new(17, 0);
    let n = 1_000_000;
    let mean = (0..n).map(|_| e.sample(&mut rng)).sum::<f64>() / n as f64;
    assert!((mean - 0.5).abs() < 0.005, "mean {mean}");
}

#[test]
fn empirical_cdf_passes_ks_per_family() {
    for (i, lit) in CONTINUOUS.iter().enumerate() {
        let dist = d(lit);
        let mut rng = RngStream::new(1000 + i as u64, 0);
        let xs: Vec<f64> = (0..100_000).map(|_| dist.sample(&mut rng)).collect();
        let stat = ks_statistic(&xs, |x| dist.cdf(x));
        assert!(stat < ks_critical_1pct(xs.len()), "{lit}: D = {stat}");
    }
}

#[test]
fn two_point_frequencies() {
    let y = d("twopoint:0.3,1,4");
    let mut rng = RngStream::new(5, 0);
    let n = 100_000;
    let ones = (0..n).filter(|_| y.sample(&mut rng) == 1.0).count() as f64 / n as f64;
    // binomial sd ~ 0.00145
    assert!((ones - 0.3).abs() < 0.006, "{ones}");
}

#[test]
fn running_mean_within_four_standard_errors() {
    for (i, lit) in ["exp:2", "unif:0,1", "pareto:3,1", "lognorm:0.2,0.6", "twopoint:0.3,1,4", "det:2.5"]
        .iter()
        .enumerate()
    {
        let dist = d(lit);
        let mean = dist.mean().finite().unwrap();
        let var = dist.variance().finite().unwrap();
        let mut rng = RngStream::new(77 + i as u64, 3);
        let n = 1_000_000;
        let sample_mean = (0..n).map(|_| dist.sample(&mut rng)).sum::<f64>() / n as f64;
        let se = (var / n as f64).sqrt();
        assert!((sample_mean - mean).abs() <= 4.0 * se + 1e-12, "{lit}: {sample_mean} vs {mean}");
    }
}

/// Adaptive Simpson quadrature; independent of the closed forms under test.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[test]
fn truncated_mean_matches_quadrature_of_survival() {
    for lit in ["exp:0.7", "unif:0.5,2", "pareto:2.5,0.8", "pareto:1,1", "lognorm:0,1", "lognorm:1.2,0.4"] {
        let dist = d(lit);
        for t in [0.3f64, 0.9, 1.7, 4.0, 12.0] {
            let lo = dist.support_min().max(0.0);
            let below = t.min(lo);
            let oracle = below
                + if t > lo {
                    simpson(&|u| 1.0 - dist.cdf(u), lo, t, 1e-12)
                } else {
                    0.0
                };
            let closed = dist.truncated_mean(t).finite().unwrap();
            assert!((closed - oracle).abs() < 1e-9, "{lit} T={t}: {closed} vs {oracle}");
        }
    }
}

#[test]
fn truncated_mean_by_enumeration_for_discrete_laws() {
    let y = d("twopoint:0.25,1,3");
    for t in [0.5f64, 1.0, 2.0, 3.0, 5.0] {
        let expect = 0.25 * t.min(1.0) + 0.75 * t.min(3.0);
        assert_eq!(y.truncated_mean(t), Moment::Finite(expect));
    }
}

#[test]
fn second_moment_matches_quadrature() {
    // E[X^2] = ∫ 2u (1 - F(u)) du for X >= 0
    for lit in ["exp:1.5", "unif:0,3", "lognorm:0,0.5", "pareto:6,1"] {
        let dist = d(lit);
        let oracle: f64 = (0..200)
            .map(|k| simpson(&|u| 2.0 * u * (1.0 - dist.cdf(u)), k as f64, k as f64 + 1.0, 1e-13))
            .sum();
        let closed = dist.second_moment().finite().unwrap();
        assert!((closed - oracle).abs() < 1e-6 * closed.max(1.0), "{lit}: {closed} vs {oracle}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), stream in any::<u64>(), idx in 0usize..CONTINUOUS.len()) {
        let dist = d(CONTINUOUS[idx]);
        let mut a = RngStream::new(seed, stream);
        let mut b = RngStream::new(seed, stream);
        for _ in 0..50 {
            prop_assert_eq!(dist.sample(&mut a).to_bits(), dist.sample(&mut b).to_bits());
        }
    }

    #[test]
    fn quantile_is_monotone(u in 0.001f64..0.999, v in 0.001f64..0.999, idx in 0usize..CONTINUOUS.len()) {
        let dist = d(CONTINUOUS[idx]);
        let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
        prop_assert!(dist.quantile(lo) <= dist.quantile(hi));
    }

    #[test]
    fn literal_round_trips(rate in 0.01f64..100.0, a in -50.0f64..50.0, w in 0.01f64..50.0) {
        for s in [format!("exp:{rate}"), format!("unif:{a},{}", a + w), format!("cauchy:{a},{w}")] {
            let parsed: DistributionSpec = s.parse().unwrap();
            prop_assert_eq!(parsed.to_string().parse::<DistributionSpec>().unwrap(), parsed);
        }
    }
}
