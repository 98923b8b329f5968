//! Empirical statistics against reference distributions.

use arctic_kernel::airy::tracy_widom_f2;
use arctic_kernel::Result;

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / m - f).max(f - i as f64 / m)
        })
        .fold(0.0, f64::max)
}

/// Total variation distance between empirical counts and probabilities.
pub fn tv_distance(counts: &[usize], probs: &[f64]) -> f64 {
    let total: usize = counts.iter().sum();
    0.5 * counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| (c as f64 / total as f64 - p).abs())
        .sum::<f64>()
}

/// Expected total variation of a multinomial sample of size `m`, to
/// leading order: `sum_i sqrt(p_i (1 - p_i) / (2 pi m))`.
pub fn expected_tv(probs: &[f64], m: usize) -> f64 {
    probs
        .iter()
        .map(|p| (p * (1.0 - p) / (2.0 * std::f64::consts::PI * m as f64)).sqrt())
        .sum()
}

pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Counts in `bins` equal cells of `[lo, hi)`; values outside are dropped.
pub fn histogram(xs: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<usize> {
    let mut h = vec![0; bins];
    let w = (hi - lo) / bins as f64;
    for &x in xs {
        if x >= lo && x < hi {
            h[(((x - lo) / w) as usize).min(bins - 1)] += 1;
        }
    }
    h
}

/// `F_2` tabulated on a uniform grid and linearly interpolated; 0 below the
/// grid, 1 above it.
#[derive(Debug, Clone)]
pub struct F2Table {
    lo: f64,
    step: f64,
    values: Vec<f64>,
}

impl F2Table {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        let cells = ((hi - lo) / step).ceil() as usize;
        let values = (0..=cells)
            .map(|i| tracy_widom_f2(lo + i as f64 * step))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { lo, step, values })
    }

    /// Grid on `[-8, 6]` with spacing 0.02; interpolation error below 1e-4.
    pub fn standard() -> Result<Self> {
        Self::new(-8.0, 6.0, 0.02)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let t = (x - self.lo) / self.step;
        if t <= 0.0 {
            return 0.0;
        }
        let i = t.floor() as usize;
        if i + 1 >= self.values.len() {
            return 1.0;
        }
        let f = t - i as f64;
        self.values[i] * (1.0 - f) + self.values[i + 1] * f
    }
}
