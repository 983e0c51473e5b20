//! Small sample-statistics helpers shared by the estimators and models.

/// Two-sided 95% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Asymptotic Kolmogorov distribution quantile at 0.99, i.e. the 1% critical
/// value of `sqrt(n) * D_n`.
pub const KOLMOGOROV_99: f64 = 1.627_6;

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance; 0 for fewer than two points.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

pub fn std_error(xs: &[f64]) -> f64 {
    (variance(xs) / xs.len() as f64).sqrt()
}

/// Linear-interpolation quantile (Hyndman–Fan type 7) of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Median and interquartile range.
pub fn median_iqr(xs: &[f64]) -> (f64, f64) {
    let s = sorted(xs);
    (
        quantile_sorted(&s, 0.5),
        quantile_sorted(&s, 0.75) - quantile_sorted(&s, 0.25),
    )
}

/// Running means `m_k = (x_1 + ... + x_k) / k`.
pub fn running_mean(xs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    xs.iter()
        .enumerate()
        .map(|(i, x)| {
            acc += x;
            acc / (i + 1) as f64
        })
        .collect()
}

/// One-sample Kolmogorov–Smirnov statistic `sup |F_n - F|` against a
/// continuous `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let s = sorted(samples);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// 1% critical value of the KS statistic for `n` samples, with Stephens'
/// finite-sample correction.
pub fn ks_critical_1pct(n: usize) -> f64 {
    let rn = (n as f64).sqrt();
    KOLMOGOROV_99 / (rn + 0.12 + 0.11 / rn)
}
