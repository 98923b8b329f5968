//! Invariant suites. Each check records the measured value, the tolerance it
//! is held to and whether it passed.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use arctic_kernel::airy::{
    airy_ai, airy_heat_kernel, airy_kernel_equal_time, extended_airy_kernel, AiryQuery,
};
use arctic_kernel::center::{
    limiting_kernel, p_kernel, p_kernel_arc, p_kernel_double, LatticeVector,
};
use arctic_kernel::extended_kernel::{
    correlation, gap_probability, rescaled_kernel, rescaled_phi, AztecKernel, GapSpec,
};
use arctic_kernel::krawtchouk::{
    hermite_limit_kernel, hermite_limit_poly, poly, KrawtchoukParams, KrawtchoukTable,
};
use arctic_kernel::numerics::{det_real, QuadratureGrid};
use arctic_kernel::tiling::{
    enumerate_tilings, particles_from_tiling, ParticleConfiguration, DEFAULT_ENUM_CAP,
};

use crate::experiments::{boundary_fdd, center_site_sets, mc_boundary, propp_row, sampler_tv};
use crate::report::Failure;
use crate::stats::F2Table;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    /// Passes when `value <= tolerance`.
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            passed: value <= tolerance,
            detail: String::new(),
        }
    }

    /// Passes when `values` strictly decreases and its last entry is at most `last_max`.
    pub fn decreasing(name: impl Into<String>, values: &[f64], last_max: f64) -> Self {
        let last = *values.last().unwrap_or(&f64::NAN);
        let passed = values.windows(2).all(|w| w[1] < w[0]) && last <= last_max;
        Self {
            name: name.into(),
            value: last,
            tolerance: last_max,
            passed,
            detail: values
                .iter()
                .map(|v| format!("{v:.3e}"))
                .collect::<Vec<_>>()
                .join(", "),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Bruteforce,
    Identity,
    Propp,
    Hermite,
    Airy,
    Fdd,
    Mc,
    Scaling,
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport, Failure> {
    let start = Instant::now();
    let checks = match suite {
        Suite::Bruteforce => {
            let mut c = bruteforce_checks()?;
            c.extend(fredholm_checks(seed)?);
            c
        }
        Suite::Identity => {
            let mut c = contour_checks(50, seed)?;
            c.extend(krawtchouk_checks());
            c
        }
        Suite::Propp => propp_checks()?,
        Suite::Hermite => {
            let mut c = krawtchouk_checks();
            c.extend(hermite_checks()?);
            c
        }
        Suite::Airy => airy_checks()?,
        Suite::Fdd => boundary_checks()?,
        Suite::Mc => mc_checks(10_000, 1_000_000, seed)?,
        Suite::Scaling => scaling_checks()?,
    };
    let name = serde_json::to_value(suite)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default();
    Ok(SuiteReport {
        suite: name,
        passed: checks.iter().all(|c| c.passed),
        checks,
        seconds: start.elapsed().as_secs_f64(),
    })
}

struct Ensemble {
    n: usize,
    configs: Vec<(ParticleConfiguration, f64)>,
}

impl Ensemble {
    fn new(n: usize, a: f64) -> Result<Self, Failure> {
        let tilings = enumerate_tilings(n, a, DEFAULT_ENUM_CAP)?;
        let z: f64 = tilings.iter().map(|(_, w)| w).sum();
        Ok(Self {
            n,
            configs: tilings
                .iter()
                .map(|(t, w)| (particles_from_tiling(t), w / z))
                .collect(),
        })
    }

    fn sites(&self) -> Vec<(usize, i64)> {
        (1..2 * self.n)
            .flat_map(|r| {
                let lo = ParticleConfiguration::window_floor(self.n, r);
                (lo..=ParticleConfiguration::window_ceiling(r)).map(move |x| (r, x))
            })
            .collect()
    }

    fn expect(&self, f: impl Fn(&ParticleConfiguration) -> bool) -> f64 {
        self.configs
            .iter()
            .filter(|(c, _)| f(c))
            .map(|(_, p)| p)
            .sum()
    }
}

const BRUTE_CASES: [(usize, f64); 4] = [(2, 1.0), (2, 0.5), (3, 1.0), (3, 0.5)];

/// One- and two-point correlations and top-particle distributions against
/// enumeration.
pub fn bruteforce_checks() -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    for (n, a) in BRUTE_CASES {
        let ens = Ensemble::new(n, a)?;
        let k = AztecKernel::new(n, a)?;
        let sites = ens.sites();
        let occ = |c: &ParticleConfiguration, (r, x): (usize, i64)| c.lines[r].contains(&x);
        let mut worst: f64 = 0.0;
        for (i, &p) in sites.iter().enumerate() {
            worst = worst.max((correlation(&k, &[p])? - ens.expect(|c| occ(c, p))).abs());
            for &q in &sites[i + 1..] {
                worst = worst.max(
                    (correlation(&k, &[p, q])? - ens.expect(|c| occ(c, p) && occ(c, q))).abs(),
                );
            }
        }
        out.push(Check::below(
            format!("correlations n={n} a={a}"),
            worst,
            1e-8,
        ));
        let mut worst: f64 = 0.0;
        for r in 1..2 * n {
            for l in
                ParticleConfiguration::window_floor(n, r)..=ParticleConfiguration::window_ceiling(r)
            {
                let det = gap_probability(&k, &GapSpec::new(vec![r], vec![l as f64])?)?;
                worst = worst.max((det - ens.expect(|c| c.top(r) <= l)).abs());
            }
        }
        out.push(Check::below(
            format!("top-particle CDFs n={n} a={a}"),
            worst,
            1e-8,
        ));
    }
    Ok(out)
}

/// `det(I + g K_n)` against the enumerated expectation of `prod (1 + g)`.
pub fn fredholm_checks(seed: u64) -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    let n = 2;
    for a in [1.0, 0.5] {
        let ens = Ensemble::new(n, a)?;
        let k = AztecKernel::new(n, a)?;
        let sites = ens.sites();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let g: Vec<f64> = sites.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut m = vec![vec![0.0; sites.len()]; sites.len()];
            for (i, &(r, x)) in sites.iter().enumerate() {
                for (j, &(s, y)) in sites.iter().enumerate() {
                    m[i][j] = (i == j) as u8 as f64 + g[i] * k.kernel(r, x, s, y)?;
                }
            }
            let brute: f64 = ens
                .configs
                .iter()
                .map(|(c, p)| {
                    p * sites
                        .iter()
                        .zip(&g)
                        .filter(|((r, x), _)| c.lines[*r].contains(x))
                        .map(|(_, gi)| 1.0 + gi)
                        .product::<f64>()
                })
                .sum();
            worst = worst.max((det_real(&m)? - brute).abs());
        }
        out.push(Check::below(
            format!("Fredholm expansion n={n} a={a}"),
            worst,
            1e-8,
        ));
    }
    Ok(out)
}

/// Contour-integral kernel against the Krawtchouk-sum evaluator at random
/// queries. The bottom site of an even line is always occupied and is
/// represented by a unit row and column, so queries avoid it.
pub fn contour_checks(queries: usize, seed: u64) -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    for n in [6usize, 12] {
        for a in [0.5, 0.9] {
            let k = AztecKernel::new(n, a)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 8 ^ (a * 10.0) as u64);
            let draw = |rng: &mut ChaCha8Rng| loop {
                let line = rng.gen_range(1..2 * n);
                let (lo, hi) = k.prm.window(line);
                let x = rng.gen_range(lo..=hi);
                if !(line % 2 == 0 && x == lo) {
                    return (line, x);
                }
            };
            let mut worst: f64 = 0.0;
            let mut worst_odd: f64 = 0.0;
            for _ in 0..queries {
                let ((r, x), (s, y)) = (draw(&mut rng), draw(&mut rng));
                worst = worst.max((k.kernel(r, x, s, y)? - k.kernel_contour(r, x, s, y)?).abs());
                let odd = |l: usize| if l % 2 == 0 { l - 1 } else { l };
                let (r, s) = (odd(r), odd(s));
                let (x, y) = (x.min(k.prm.window(r).1), y.min(k.prm.window(s).1));
                worst_odd = worst_odd
                    .max((k.kernel_krawtchouk(r, x, s, y)? - k.kernel_contour(r, x, s, y)?).abs());
            }
            out.push(Check::below(
                format!("contour vs exact kernel n={n} a={a}"),
                worst,
                1e-8,
            ));
            out.push(Check::below(
                format!("contour vs Krawtchouk sum, odd lines, n={n} a={a}"),
                worst_odd,
                1e-8,
            ));
        }
    }
    Ok(out)
}

/// Orthonormality of the Krawtchouk functions and the reflection symmetry
/// `p_k(n - x) = (-1)^{k-x} p^{n/2-x} q^{x-n/2} p_{n-k}(x)`.
pub fn krawtchouk_checks() -> Vec<Check> {
    let mut worst: f64 = 0.0;
    for q in [0.3, 0.5, 0.7] {
        for n in [12usize, 30, 40] {
            let t = KrawtchoukTable::new(KrawtchoukParams::new(n, q).expect("valid parameters"));
            for j in 0..=12 {
                for k in 0..=12 {
                    let s: f64 = (0..=n as i64).map(|x| t.psi(j, x) * t.psi(k, x)).sum();
                    worst = worst.max((s - (j == k) as u8 as f64).abs());
                }
            }
        }
    }
    let mut worst_sym: f64 = 0.0;
    for n in 1..=15usize {
        let prm = KrawtchoukParams::new(n, 0.4).expect("valid parameters");
        let (p, q, nf) = (prm.p, prm.q, n as f64);
        for k in 0..=n as i64 {
            for x in 0..=n as i64 {
                let lhs = poly(k, n as i64 - x, &prm);
                let sign = if (k - x).rem_euclid(2) == 0 {
                    1.0
                } else {
                    -1.0
                };
                let rhs = sign
                    * p.powf(nf / 2.0 - x as f64)
                    * q.powf(x as f64 - nf / 2.0)
                    * poly(n as i64 - k, x, &prm);
                worst_sym = worst_sym.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
            }
        }
    }
    vec![
        Check::below("Krawtchouk orthonormality", worst, 1e-10),
        Check::below("Krawtchouk reflection symmetry", worst_sym, 1e-9),
    ]
}

/// Hermite limits of Krawtchouk polynomials and of the scaled multi-line
/// kernel, strictly improving along `n = 100, 400, 1600`.
pub fn hermite_checks() -> Result<Vec<Check>, Failure> {
    let ns = [100usize, 400, 1600];
    let mut out = Vec::new();
    for (k, xi, q) in [(2usize, 0.6, 0.5), (3, -0.4, 0.3), (5, 1.1, 0.5)] {
        let r = hermite_limit_poly(k, xi, q, &ns)?;
        out.push(Check::decreasing(
            format!("Hermite limit of p_{k} at xi={xi}, q={q}"),
            &r.values,
            0.1,
        ));
    }
    for (r, xi, s, eta) in [(1usize, 0.5, 2usize, 0.5), (2, 0.9, 1, 0.2)] {
        let rep = hermite_limit_kernel(r, xi, s, eta, 0.5, &ns)?;
        out.push(Check::decreasing(
            format!("Hermite kernel limit ({r}, {xi}; {s}, {eta})"),
            &rep.values,
            0.1,
        ));
    }
    Ok(out)
}

/// Airy ODE residual, equal-time kernel against direct quadrature.
pub fn airy_checks() -> Result<Vec<Check>, Failure> {
    let h = 0.002;
    let mut worst: f64 = 0.0;
    let mut x = -15.0;
    while x <= 15.0 {
        let f = |t: f64| airy_ai(t);
        let d2 = (-f(x + 2.0 * h)? + 16.0 * f(x + h)? - 30.0 * f(x)? + 16.0 * f(x - h)?
            - f(x - 2.0 * h)?)
            / (12.0 * h * h);
        worst = worst.max((d2 - x * f(x)?).abs());
        x += 0.37;
    }
    let grid = QuadratureGrid::composite(60, 20, 0.0, 28.0);
    let mut worst_k: f64 = 0.0;
    for (x, y) in [
        (-2.0, -1.5),
        (0.0, 0.0),
        (0.3, 1.7),
        (-3.0, 2.0),
        (1.0, 1.0 + 1e-8),
    ] {
        let direct =
            grid.integrate(|l| airy_ai(x + l).unwrap_or(0.0) * airy_ai(y + l).unwrap_or(0.0));
        worst_k = worst_k.max((airy_kernel_equal_time(x, y)? - direct).abs());
    }
    Ok(vec![
        Check::below("Airy ODE residual on [-15, 15]", worst, 1e-8),
        Check::below("equal-time Airy kernel closed form", worst_k, 1e-8),
    ])
}

const SCALING_ORDERS: [usize; 3] = [50, 100, 200];

/// Rescaled extended kernel against the extended Airy kernel on both sides
/// of the diagonal in time, and its transition part against the heat kernel.
pub fn scaling_checks() -> Result<Vec<Check>, Failure> {
    let kernels = SCALING_ORDERS
        .iter()
        .map(|&n| AztecKernel::new(n, 1.0))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for (t1, x1, t2, x2) in [
        (0.0, 0.5, 0.0, 0.5),
        (1.0, 0.0, 0.0, 0.5),
        (0.0, -1.0, 0.5, 0.5),
    ] {
        let errs = kernels
            .iter()
            .map(|k| -> Result<f64, Failure> {
                let v = rescaled_kernel(k, t1, x1, t2, x2)?;
                let a = extended_airy_kernel(AiryQuery {
                    tau: v.tau,
                    xi: v.xi,
                    tau2: v.tau2,
                    xi2: v.xi2,
                })?;
                Ok((v.value - a).abs())
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(Check::decreasing(
            format!("rescaled kernel at ({t1}, {x1}; {t2}, {x2})"),
            &errs,
            f64::INFINITY,
        ));
    }
    let (t1, x1, t2, x2) = (-0.5, 0.0, 0.5, 0.0);
    let errs: Vec<f64> = SCALING_ORDERS
        .iter()
        .map(|&n| {
            let v = rescaled_phi(n, t1, x1, t2, x2);
            (v.value - airy_heat_kernel(v.tau2 - v.tau, v.xi, v.xi2)).abs()
        })
        .collect();
    out.push(Check::decreasing(
        format!("transition part at ({t1}, {x1}; {t2}, {x2})"),
        &errs,
        f64::INFINITY,
    ));
    Ok(out)
}

/// Finite-`n` boundary distributions against `F_2` and the two-time Airy
/// distribution along `n = 50, 100, 200`.
pub fn boundary_checks() -> Result<Vec<Check>, Failure> {
    let kernels = SCALING_ORDERS
        .iter()
        .map(|&n| AztecKernel::new(n, 1.0))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for g in [-1.0, 0.0, 1.0] {
        let errs = kernels
            .iter()
            .map(|k| Ok(boundary_fdd(k, &[0.0], &[g])?.difference))
            .collect::<Result<Vec<_>, Failure>>()?;
        out.push(Check::decreasing(
            format!("one-time gap vs F2 at gamma={g}"),
            &errs,
            0.05,
        ));
    }
    for g in [-1.0, 0.0, 1.0] {
        let errs = kernels
            .iter()
            .map(|k| Ok(boundary_fdd(k, &[0.0, 1.0], &[g, g])?.difference))
            .collect::<Result<Vec<_>, Failure>>()?;
        out.push(Check::decreasing(
            format!("two-time gap (tau = 0, 1) at gamma={g}"),
            &errs,
            f64::INFINITY,
        ));
    }
    Ok(out)
}

/// Regression band for the jittered KS distance at `n = 100`, `10^4` samples,
/// seed 7. Calibrated from the first run, which gave 0.050.
pub const KS_BAND: f64 = 0.07;

/// Monte Carlo boundary statistics and the sampler against enumeration.
pub fn mc_checks(samples: usize, tv_samples: usize, seed: u64) -> Result<Vec<Check>, Failure> {
    let f2 = F2Table::standard()?;
    let mc = mc_boundary(100, samples, seed, 0.5, &f2)?;
    let mean = mc.mean.value;
    let mut out = vec![
        Check::below(
            "KS distance of rescaled X_n(0), n=100",
            mc.ks_center,
            KS_BAND,
        )
        .with_detail(format!(
            "literal lattice rescaling: {:.4}; tau=0.5: {:.4}",
            mc.ks_raw, mc.ks_off_center
        )),
        Check {
            name: "rescaled sample mean in [-2.2, -1.4]".into(),
            value: mean,
            tolerance: 0.0,
            passed: (-2.2..=-1.4).contains(&mean),
            detail: format!("standard error {:.4}", mc.mean.std_error),
        },
    ];
    for a in [1.0, 0.5] {
        let tv = sampler_tv(3, a, tv_samples, seed)?;
        out.push(
            Check::below(
                format!("sampler TV vs enumeration n=3 a={a}"),
                tv.tv,
                3.0 * tv.expected_tv,
            )
            .with_detail(format!(
                "{} samples, expected TV {:.2e}",
                tv.samples, tv.expected_tv
            )),
        );
    }
    Ok(out)
}

/// Diamond-to-plane convergence of green-site probabilities, the two
/// formulas for `P` and the limiting-kernel identity.
pub fn propp_checks() -> Result<Vec<Check>, Failure> {
    propp_checks_at(&[51, 101, 201])
}

pub fn propp_checks_at(orders: &[usize]) -> Result<Vec<Check>, Failure> {
    let kernels = orders
        .iter()
        .map(|&n| AztecKernel::new(n, 1.0))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = center_site_sets(2)
        .iter()
        .map(|s| propp_row(&kernels, s))
        .collect::<Result<Vec<_>, _>>()?;
    let failing: Vec<_> = rows
        .iter()
        .filter(|r| !r.decreasing)
        .map(|r| r.sites.clone())
        .collect();
    let final_gap = rows
        .iter()
        .map(|r| *r.errors.last().unwrap_or(&0.0))
        .fold(0.0, f64::max);
    let mut worst_p: f64 = 0.0;
    for x in -3..=3i64 {
        for y in -3..=3i64 {
            let v = LatticeVector::new(x, y);
            let d = p_kernel_double(v)?;
            worst_p = worst_p.max((p_kernel(v)? - d).norm());
            if x + y >= 1 && (x + y) % 2 == 1 {
                worst_p = worst_p.max((p_kernel_arc(v)? - d).norm());
            }
        }
    }
    let i = Complex64::new(0.0, 1.0);
    let mut worst_id: f64 = 0.0;
    for (du, dl) in [(1i64, 1i64), (2, 1), (0, 1)] {
        let lhs = limiting_kernel(du, dl, 0, 0)?;
        let (x, y) = (du - 1, -du + 2 * dl);
        let rhs = i.powi((du + 2 * dl).rem_euclid(4) as i32)
            * (p_kernel(LatticeVector::new(x, y))?
                + i * p_kernel(LatticeVector::new(x + 1, y - 1))?);
        worst_id = worst_id.max((lhs - rhs).norm());
    }
    Ok(vec![
        Check {
            name: format!("green probabilities approach the plane along n = {orders:?}"),
            value: failing.len() as f64,
            tolerance: 0.0,
            passed: failing.is_empty(),
            detail: format!(
                "{} of {} site sets not strictly decreasing: {failing:?}",
                failing.len(),
                rows.len()
            ),
        },
        Check::below(
            format!("largest gap at n = {}", orders.last().copied().unwrap_or(0)),
            final_gap,
            0.02,
        ),
        Check::below(
            "P from the double integral vs arc and theta forms",
            worst_p,
            1e-8,
        ),
        Check::below("limiting kernel vs P identity", worst_id, 1e-8),
    ])
}
