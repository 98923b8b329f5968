//! Experiments behind the CLI commands and the acceptance suite.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use arctic_kernel::airy::{airy_fdd, tracy_widom_f2, FddSpec};
use arctic_kernel::center::{green_prob_aztec_with, green_prob_plane, GreenSiteSet};
use arctic_kernel::extended_kernel::{gap_probability, scaling, AztecKernel, GapSpec};
use arctic_kernel::tiling::{
    boundary_process, derive_seed, enumerate_tilings, particles_from_tiling, polar_regions,
    sample_tiling, Tiling, DEFAULT_ENUM_CAP,
};

use crate::report::{Failure, StatsRecord};
use crate::stats::{expected_tv, histogram, ks_distance, mean_and_stderr, tv_distance, F2Table};

/// Stream tag mixed into the seed of the rounding jitter, so it never
/// correlates with the sampler's own stream.
const JITTER_STREAM: u64 = 0x6a69_7474_6572;

/// Boundary threshold `n/sqrt2 + 2^{-5/6} (gamma - tau^2) n^{1/3}`.
pub fn boundary_threshold(n: usize, tau: f64, gamma: f64) -> f64 {
    scaling::a_n(tau, n) + scaling::c_n(n) * gamma
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryFdd {
    pub n: usize,
    pub taus: Vec<f64>,
    pub gammas: Vec<f64>,
    pub lines: Vec<usize>,
    pub thresholds: Vec<f64>,
    pub finite: f64,
    pub limit: f64,
    pub difference: f64,
}

/// Finite-`n` probability that the top particle of line `2 floor(b_n(tau_j)/2)`
/// stays below the boundary threshold for every `j`, next to the Airy limit.
pub fn boundary_fdd(k: &AztecKernel, taus: &[f64], gammas: &[f64]) -> Result<BoundaryFdd, Failure> {
    if k.a() != 1.0 {
        return Err(Failure::Input("boundary statistics use a = 1".into()));
    }
    if taus.len() != gammas.len() || taus.is_empty() {
        return Err(Failure::Input("need one gamma per tau".into()));
    }
    let n = k.n();
    let lines: Vec<usize> = taus
        .iter()
        .map(|&t| scaling::lattice_point(t, 0.0, n).0)
        .collect();
    let thresholds: Vec<f64> = taus
        .iter()
        .zip(gammas)
        .map(|(&t, &g)| boundary_threshold(n, t, g))
        .collect();
    let finite = gap_probability(k, &GapSpec::new(lines.clone(), thresholds.clone())?)?;
    let limit = if taus.len() == 1 {
        tracy_widom_f2(gammas[0])?
    } else {
        airy_fdd(&FddSpec::new(taus.to_vec(), gammas.to_vec())?)?
    };
    Ok(BoundaryFdd {
        n,
        taus: taus.to_vec(),
        gammas: gammas.to_vec(),
        lines,
        thresholds,
        finite,
        limit,
        difference: (finite - limit).abs(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McBoundary {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// Off-center rescaled time and the boundary abscissa it maps to.
    pub tau: f64,
    pub abscissa: f64,
    /// KS distance of the literal rescaling `(X_n(0) - n/sqrt2)/c_n`, a
    /// lattice variable.
    pub ks_raw: f64,
    /// KS distance after uniform jitter across the spacing-2 lattice that
    /// `X_n(0)` lives on.
    pub ks_center: f64,
    pub ks_off_center: f64,
    pub mean: StatsRecord,
    pub histogram_range: (f64, f64),
    pub histogram: Vec<usize>,
}

/// Samples `X_n(0)` and `X_n(2^{-1/6} n^{2/3} tau)` from uniformly random
/// tilings and compares the rescaled values with `F_2`. Sample `i` uses
/// `derive_seed(seed, i)`, so results do not depend on the thread count.
pub fn mc_boundary(
    n: usize,
    samples: usize,
    seed: u64,
    tau: f64,
    f2: &F2Table,
) -> Result<McBoundary, Failure> {
    if samples == 0 {
        return Err(Failure::Input("sample count must be at least 1".into()));
    }
    let nf = n as f64;
    let abscissa = 2f64.powf(-1.0 / 6.0) * nf.powf(2.0 / 3.0) * tau;
    if abscissa.abs() > nf {
        return Err(Failure::Input(format!(
            "tau = {tau} maps outside the diamond"
        )));
    }
    let draws: Vec<(f64, f64, f64, f64)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| -> Result<_, Failure> {
            let t = sample_tiling(n, 1.0, derive_seed(seed, i))?;
            let b = boundary_process(&particles_from_tiling(&t));
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed ^ JITTER_STREAM, i));
            Ok((
                b.value_at(0.0)?,
                b.value_at(abscissa)?,
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ))
        })
        .collect::<Result<_, _>>()?;
    let (c, centre) = (scaling::c_n(n), nf * std::f64::consts::FRAC_1_SQRT_2);
    let raw: Vec<f64> = draws.iter().map(|d| (d.0 - centre) / c).collect();
    let z0: Vec<f64> = draws.iter().map(|d| (d.0 + d.2 - centre) / c).collect();
    let zt: Vec<f64> = draws
        .iter()
        .map(|d| (d.1 + d.3 - centre) / c + tau * tau)
        .collect();
    let (mean, std_error) = mean_and_stderr(&z0);
    let range = (-6.0, 4.0);
    Ok(McBoundary {
        n,
        samples,
        seed,
        tau,
        abscissa,
        ks_raw: ks_distance(&raw, |x| f2.cdf(x)),
        ks_center: ks_distance(&z0, |x| f2.cdf(x)),
        ks_off_center: ks_distance(&zt, |x| f2.cdf(x)),
        mean: StatsRecord {
            value: mean,
            std_error,
            samples,
            n,
            a: 1.0,
            seed,
            command: "mc-boundary".into(),
        },
        histogram_range: range,
        histogram: histogram(&z0, range.0, range.1, 40),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplerTv {
    pub n: usize,
    pub a: f64,
    pub samples: usize,
    pub support: usize,
    pub tv: f64,
    pub expected_tv: f64,
}

/// Total variation between sampler frequencies and the enumerated measure.
pub fn sampler_tv(n: usize, a: f64, samples: usize, seed: u64) -> Result<SamplerTv, Failure> {
    let exact = enumerate_tilings(n, a, DEFAULT_ENUM_CAP)?;
    let z: f64 = exact.iter().map(|(_, w)| w).sum();
    let probs: Vec<f64> = exact.iter().map(|(_, w)| w / z).collect();
    let index: HashMap<&Tiling, usize> =
        exact.iter().enumerate().map(|(i, (t, _))| (t, i)).collect();
    let counts = (0..samples as u64)
        .into_par_iter()
        .try_fold(
            || vec![0usize; probs.len()],
            |mut acc, i| -> Result<_, Failure> {
                let t = sample_tiling(n, a, derive_seed(seed, i))?;
                let j = index
                    .get(&t)
                    .ok_or_else(|| Failure::Invariant("sampled tiling not enumerated".into()))?;
                acc[*j] += 1;
                Ok(acc)
            },
        )
        .try_reduce(
            || vec![0usize; probs.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    Ok(SamplerTv {
        n,
        a,
        samples,
        support: probs.len(),
        tv: tv_distance(&counts, &probs),
        expected_tv: expected_tv(&probs, samples),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProppRow {
    pub sites: Vec<(i64, i64)>,
    pub plane: f64,
    pub orders: Vec<usize>,
    pub aztec: Vec<f64>,
    pub errors: Vec<f64>,
    pub decreasing: bool,
}

/// Green-site probabilities in diamonds of the given kernels against the
/// plane value.
pub fn propp_row(kernels: &[AztecKernel], sites: &GreenSiteSet) -> Result<ProppRow, Failure> {
    let plane = green_prob_plane(sites)?;
    let aztec = kernels
        .iter()
        .map(|k| green_prob_aztec_with(k, sites))
        .collect::<Result<Vec<_>, _>>()?;
    let errors: Vec<f64> = aztec.iter().map(|v| (v - plane).abs()).collect();
    Ok(ProppRow {
        sites: sites.sites().to_vec(),
        plane,
        orders: kernels.iter().map(|k| k.n()).collect(),
        decreasing: errors.windows(2).all(|w| w[1] < w[0]),
        aztec,
        errors,
    })
}

/// The site sets `{(0,0)}` and `{(0,0), (u,l)}` with `|u|, |l| <= radius`.
pub fn center_site_sets(radius: i64) -> Vec<GreenSiteSet> {
    let mut out = vec![GreenSiteSet::new(vec![(0, 0)]).expect("single site")];
    for u in -radius..=radius {
        for l in -radius..=radius {
            if (u, l) != (0, 0) {
                out.push(GreenSiteSet::new(vec![(0, 0), (u, l)]).expect("distinct sites"));
            }
        }
    }
    out
}

/// Summary of a sampled tiling for the `sample` command.
pub fn tiling_summary(t: &Tiling, a: f64) -> serde_json::Value {
    let regions = polar_regions(t);
    let frozen =
        regions.north.len() + regions.south.len() + regions.west.len() + regions.east.len();
    let boundary = boundary_process(&particles_from_tiling(t));
    let mut v = t.to_json(a);
    v["polar_counts"] = serde_json::json!({
        "north": regions.north.len(),
        "south": regions.south.len(),
        "west": regions.west.len(),
        "east": regions.east.len(),
        "temperate": regions.temperate.len(),
    });
    v["frozen_fraction"] = serde_json::json!(frozen as f64 / t.dominoes.len() as f64);
    v["boundary"] = serde_json::json!(boundary.vertices);
    v
}
