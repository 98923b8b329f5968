//! Airy function, extended Airy kernel, Airy-process finite-dimensional
//! distributions and the Tracy–Widom distribution `F2`.
//!
//! `Ai` is tabulated with its derivative on a 0.25-spaced grid over
//! `[-12, 12]` by Taylor steps of the Airy equation: backward from the
//! asymptotic values at `x = 12` (the direction in which `Ai` dominates)
//! and forward through the oscillatory region. Between grid points a local
//! Taylor series is summed; outside the grid the asymptotic expansions are
//! used directly.

use crate::error::{Error, Result};
use crate::numerics::{self, gauss_legendre, QuadratureGrid, FREDHOLM_TOL};
use std::f64::consts::PI;
use std::sync::OnceLock;

const GRID_STEP: f64 = 0.25;
const GRID_EDGE: f64 = 12.0;
const MIN_ARG: f64 = -200.0;
const TAYLOR_TERMS: usize = 40;

/// `(Ai, Ai')` at `x0 + h` from `(Ai, Ai')` at `x0`.
fn taylor(x0: f64, y: f64, dy: f64, h: f64) -> (f64, f64) {
    let mut a = [0.0; TAYLOR_TERMS + 1];
    a[0] = y;
    a[1] = dy;
    a[2] = x0 * y / 2.0;
    for m in 1..TAYLOR_TERMS - 1 {
        a[m + 2] = (x0 * a[m] + a[m - 1]) / ((m + 2) as f64 * (m + 1) as f64);
    }
    let (mut v, mut d) = (0.0, 0.0);
    for m in (0..=TAYLOR_TERMS).rev() {
        v = v * h + a[m];
        if m >= 1 {
            d = d * h + m as f64 * a[m];
        }
    }
    (v, d)
}

/// Coefficients `u_k` and `v_k` of the asymptotic series.
fn asymptotic_coeffs() -> &'static [(f64, f64)] {
    static C: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    C.get_or_init(|| {
        let mut out = vec![(1.0, 1.0)];
        let mut u = 1.0;
        for k in 1..60 {
            let kf = k as f64;
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            out.push((u, -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u));
        }
        out
    })
}

/// Sums `sum_k sign_k c_k / zeta^k` over the selected indices until terms
/// stop decreasing.
fn asymptotic_sum(
    zeta: f64,
    pick: impl Fn(usize) -> Option<(usize, f64)>,
    coeff: impl Fn(usize) -> f64,
) -> f64 {
    let mut total = 0.0;
    let mut last = f64::INFINITY;
    let mut i = 0;
    while let Some((k, sign)) = pick(i) {
        if k >= asymptotic_coeffs().len() {
            break;
        }
        let term = sign * coeff(k) / zeta.powi(k as i32);
        if term.abs() > last {
            break;
        }
        total += term;
        last = term.abs();
        if last < 1e-18 * total.abs() {
            break;
        }
        i += 1;
    }
    total
}

fn asymptotic_positive(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let c = asymptotic_coeffs();
    let alt = |k: usize| Some((k, if k % 2 == 0 { 1.0 } else { -1.0 }));
    let su = asymptotic_sum(zeta, alt, |k| c[k].0);
    let sv = asymptotic_sum(zeta, alt, |k| c[k].1);
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    (e * su / x.powf(0.25), -e * sv * x.powf(0.25))
}

fn asymptotic_negative(x: f64) -> (f64, f64) {
    let t = -x;
    let zeta = 2.0 / 3.0 * t.powf(1.5);
    let c = asymptotic_coeffs();
    let even = |i: usize| Some((2 * i, if i % 2 == 0 { 1.0 } else { -1.0 }));
    let odd = |i: usize| Some((2 * i + 1, if i % 2 == 0 { 1.0 } else { -1.0 }));
    let (pu, qu) = (
        asymptotic_sum(zeta, even, |k| c[k].0),
        asymptotic_sum(zeta, odd, |k| c[k].0),
    );
    let (pv, qv) = (
        asymptotic_sum(zeta, even, |k| c[k].1),
        asymptotic_sum(zeta, odd, |k| c[k].1),
    );
    let (s, co) = (zeta + PI / 4.0).sin_cos();
    let ai = (s * pu - co * qu) / (PI.sqrt() * t.powf(0.25));
    let aip = -t.powf(0.25) / PI.sqrt() * (co * pv + s * qv);
    (ai, aip)
}

fn table() -> &'static [(f64, f64)] {
    static T: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    T.get_or_init(|| {
        let steps = (2.0 * GRID_EDGE / GRID_STEP).round() as usize;
        let mut t = vec![(0.0, 0.0); steps + 1];
        t[steps] = asymptotic_positive(GRID_EDGE);
        // Backward through the decaying region, in small substeps.
        for i in (0..steps).rev() {
            let x0 = -GRID_EDGE + (i + 1) as f64 * GRID_STEP;
            let mut cur = t[i + 1];
            for sub in 0..4 {
                let xs = x0 - sub as f64 * GRID_STEP / 4.0;
                cur = taylor(xs, cur.0, cur.1, -GRID_STEP / 4.0);
            }
            t[i] = cur;
            if x0 - GRID_STEP <= 0.0 {
                break;
            }
        }
        // Forward from the origin through the oscillatory region.
        let zero = steps / 2;
        for i in (0..zero).rev() {
            let x0 = -GRID_EDGE + (i + 1) as f64 * GRID_STEP;
            let mut cur = t[i + 1];
            for sub in 0..4 {
                let xs = x0 - sub as f64 * GRID_STEP / 4.0;
                cur = taylor(xs, cur.0, cur.1, -GRID_STEP / 4.0);
            }
            t[i] = cur;
        }
        t
    })
}

/// Largest `|x|` accepted by the public evaluators.
pub const AIRY_RANGE: f64 = 30.0;

/// `(Ai(x), Ai'(x))` for `|x| <= 30`.
pub fn airy_pair(x: f64) -> Result<(f64, f64)> {
    if !(x.abs() <= AIRY_RANGE) {
        return Err(Error::Input(format!(
            "Airy argument {x} outside [-{AIRY_RANGE}, {AIRY_RANGE}]"
        )));
    }
    pair(x)
}

/// Unrestricted evaluation used inside integrals, valid for `x >= -200`.
fn pair(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() || x < MIN_ARG {
        return Err(Error::Input(format!("Airy argument {x} below {MIN_ARG}")));
    }
    if x >= GRID_EDGE {
        return Ok(asymptotic_positive(x));
    }
    if x <= -GRID_EDGE {
        return Ok(asymptotic_negative(x));
    }
    let i = ((x + GRID_EDGE) / GRID_STEP).round() as usize;
    let x0 = -GRID_EDGE + i as f64 * GRID_STEP;
    let (y, dy) = table()[i];
    Ok(taylor(x0, y, dy, x - x0))
}

pub fn airy_ai(x: f64) -> Result<f64> {
    Ok(airy_pair(x)?.0)
}

pub fn airy_ai_prime(x: f64) -> Result<f64> {
    Ok(airy_pair(x)?.1)
}

fn ai(x: f64) -> f64 {
    pair(x).map(|p| p.0).unwrap_or(0.0)
}

/// Arguments of `A(tau, xi; tau2, xi2)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AiryQuery {
    pub tau: f64,
    pub xi: f64,
    pub tau2: f64,
    pub xi2: f64,
}

/// Upper end of the lambda range: past it `Ai(min(xi) + lambda) < 1e-22`.
fn lambda_cutoff(xi_min: f64) -> f64 {
    (18.0 - xi_min).max(1.0)
}

/// Gaps `tau2 - tau` above this are integrated directly over the negative
/// half-line; below it the rewrite through the full-line Gaussian is used,
/// since the direct integrand decays too slowly.
const DIRECT_GAP: f64 = 0.5;

/// Quadrature for the lambda-integral at time difference `d = tau - tau2`,
/// returned with the sign and the Gaussian correction flag.
fn lambda_grid(d: f64, xi_min: f64) -> (QuadratureGrid, f64, bool) {
    if d >= 0.0 || -d <= DIRECT_GAP {
        let hi = lambda_cutoff(xi_min);
        (
            QuadratureGrid::composite(hi.ceil() as usize, 20, 0.0, hi),
            1.0,
            d < 0.0,
        )
    } else {
        // e^{-lambda |d|} below 1e-17 past 40 / |d|.
        let lo = -(40.0 / -d).max(1.0);
        let panels = (2.0 * -lo).ceil() as usize;
        (QuadratureGrid::composite(panels, 20, lo, 0.0), -1.0, false)
    }
}

/// `A` at `d = tau - tau2 != 0` from tabulated Airy values on a lambda grid.
fn off_diagonal(
    d: f64,
    grid: &QuadratureGrid,
    sign: f64,
    gauss: bool,
    x: f64,
    y: f64,
    ax: &[f64],
    ay: &[f64],
) -> f64 {
    let s: f64 = grid
        .nodes
        .iter()
        .zip(&grid.weights)
        .zip(ax.iter().zip(ay))
        .map(|((l, w), (a, b))| w * (-l * d).exp() * a * b)
        .sum();
    if gauss {
        s - airy_heat_kernel(-d, x, y)
    } else {
        sign * s
    }
}

#[cfg(test)]
fn half_line_integral(d: f64, xi: f64, xi2: f64) -> f64 {
    let hi = lambda_cutoff(xi.min(xi2));
    let g = QuadratureGrid::composite(hi.ceil() as usize, 20, 0.0, hi);
    g.integrate(|l| (-l * d).exp() * ai(xi + l) * ai(xi2 + l))
}

/// `int_R e^{lambda t} Ai(xi + lambda) Ai(xi2 + lambda) dlambda` for `t > 0`.
pub fn airy_heat_kernel(t: f64, xi: f64, xi2: f64) -> f64 {
    (4.0 * PI * t).powf(-0.5)
        * (t.powi(3) / 12.0 - (xi + xi2) * t / 2.0 - (xi - xi2).powi(2) / (4.0 * t)).exp()
}

/// Extended Airy kernel. Equal times use the closed form; for `tau > tau2`
/// the damped integral is evaluated directly; for `tau < tau2` the
/// integral over the negative half-line is rewritten as the positive
/// half-line minus the full-line Gaussian.
pub fn extended_airy_kernel(q: AiryQuery) -> Result<f64> {
    let AiryQuery { tau, xi, tau2, xi2 } = q;
    for v in [tau, xi, tau2, xi2] {
        if !v.is_finite() {
            return Err(Error::Input("non-finite Airy kernel argument".into()));
        }
    }
    if xi.min(xi2) < MIN_ARG + 1.0 {
        return Err(Error::Input(format!(
            "levels below {} are not supported",
            MIN_ARG + 1.0
        )));
    }
    if tau == tau2 {
        return airy_kernel_equal_time(xi, xi2);
    }
    let d = tau - tau2;
    let (grid, sign, gauss) = lambda_grid(d, xi.min(xi2));
    let ax: Vec<f64> = grid.nodes.iter().map(|l| ai(xi + l)).collect();
    let ay: Vec<f64> = grid.nodes.iter().map(|l| ai(xi2 + l)).collect();
    Ok(off_diagonal(d, &grid, sign, gauss, xi, xi2, &ax, &ay))
}

/// `(Ai(x) Ai'(y) - Ai'(x) Ai(y)) / (x - y)`, with `Ai'(x)^2 - x Ai(x)^2` on
/// the diagonal and a Taylor expansion very close to it.
pub fn airy_kernel_equal_time(x: f64, y: f64) -> Result<f64> {
    if (x - y).abs() < 1e-6 {
        // The diagonal varies like -Ai^2, so the midpoint value is accurate to O((x - y)^2).
        let m = 0.5 * (x + y);
        let (am, dm) = pair(m)?;
        return Ok(dm * dm - m * am * am);
    }
    let (ax, dx) = pair(x)?;
    let (ay, dy) = pair(y)?;
    Ok((ax * dy - dx * ay) / (x - y))
}

/// Times, levels and quadrature for an Airy-process distribution function.
#[derive(Debug, Clone, PartialEq)]
pub struct FddSpec {
    pub times: Vec<f64>,
    pub levels: Vec<f64>,
    pub nodes: usize,
    pub upper: f64,
}

impl FddSpec {
    pub fn new(times: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        Self::with_quadrature(times, levels, 64, 12.0)
    }

    pub fn with_quadrature(
        times: Vec<f64>,
        levels: Vec<f64>,
        nodes: usize,
        upper: f64,
    ) -> Result<Self> {
        if times.is_empty() || times.len() != levels.len() {
            return Err(Error::Input(
                "need equally many times and levels, at least one".into(),
            ));
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Input("times must be strictly increasing".into()));
        }
        if nodes < 2 {
            return Err(Error::Input("need at least two nodes per time".into()));
        }
        if levels.iter().any(|&l| !(l < upper) || l < -40.0) {
            return Err(Error::Input(format!("levels must lie in [-40, {upper})")));
        }
        Ok(Self {
            times,
            levels,
            nodes,
            upper,
        })
    }
}

/// Nyström value of `det(I - f^{1/2} A f^{1/2})` at one resolution.
fn fdd_nystrom(spec: &FddSpec) -> Result<f64> {
    let m = spec.times.len();
    let k = spec.nodes;
    let (u, w) = gauss_legendre(k);
    let mut pts = Vec::with_capacity(m * k);
    for j in 0..m {
        let (lo, hi) = (spec.levels[j], spec.upper);
        for i in 0..k {
            pts.push((
                j,
                0.5 * (hi - lo) * (u[i] + 1.0) + lo,
                0.5 * (hi - lo) * w[i],
            ));
        }
    }
    let n = pts.len();
    let mut mat = vec![vec![0.0; n]; n];
    for ja in 0..m {
        for jb in 0..m {
            let block = |j: usize| j * k..(j + 1) * k;
            if ja == jb {
                for a in block(ja) {
                    for b in block(jb) {
                        mat[a][b] = airy_kernel_equal_time(pts[a].1, pts[b].1)?;
                    }
                }
                continue;
            }
            let d = spec.times[ja] - spec.times[jb];
            let (grid, sign, gauss) = lambda_grid(d, spec.levels[ja].min(spec.levels[jb]));
            let tab = |j: usize| -> Vec<Vec<f64>> {
                block(j)
                    .map(|a| grid.nodes.iter().map(|l| ai(pts[a].1 + l)).collect())
                    .collect()
            };
            let (ta, tb) = (tab(ja), tab(jb));
            for (ia, a) in block(ja).enumerate() {
                for (ib, b) in block(jb).enumerate() {
                    mat[a][b] =
                        off_diagonal(d, &grid, sign, gauss, pts[a].1, pts[b].1, &ta[ia], &tb[ib]);
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            mat[a][b] = (a == b) as u8 as f64 - (pts[a].2 * pts[b].2).sqrt() * mat[a][b];
        }
    }
    numerics::det_real(&mat)
}

/// `P[A(tau_j) <= xi_j for all j]`, checked against a run with twice the
/// nodes per time.
pub fn airy_fdd(spec: &FddSpec) -> Result<f64> {
    let coarse = fdd_nystrom(spec)?;
    let fine = fdd_nystrom(&FddSpec {
        nodes: 2 * spec.nodes,
        ..spec.clone()
    })?;
    if (fine - coarse).abs() > FREDHOLM_TOL.max(1e-6 * (spec.times.len() as f64 - 1.0)) {
        return Err(Error::Convergence {
            what: "Airy-process Fredholm determinant".into(),
            coarse,
            fine,
        });
    }
    Ok(fine)
}

/// Tracy–Widom GUE distribution function.
pub fn tracy_widom_f2(xi: f64) -> Result<f64> {
    if xi >= 12.0 {
        return Ok(1.0);
    }
    airy_fdd(&FddSpec::new(vec![0.0], vec![xi])?)
}

/// `F2` at one resolution, for convergence studies.
pub fn tracy_widom_f2_with(xi: f64, nodes: usize, upper: f64) -> Result<f64> {
    fdd_nystrom(&FddSpec::with_quadrature(
        vec![0.0],
        vec![xi],
        nodes,
        upper,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: the two Maclaurin series, accurate near the origin.
    fn maclaurin(x: f64) -> (f64, f64) {
        let c1 = 0.355_028_053_887_817_2;
        let c2 = 0.258_819_403_792_806_8;
        let (mut f, mut g) = (1.0, x);
        let (mut tf, mut tg) = (1.0, x);
        let (mut df, mut dg) = (0.0, 1.0);
        let (mut tdf, mut tdg) = (0.0f64, 1.0f64);
        let mut k = 1.0;
        while k < 200.0 {
            tf *= x * x * x / ((3.0 * k - 1.0) * (3.0 * k));
            tg *= x * x * x / ((3.0 * k) * (3.0 * k + 1.0));
            f += tf;
            g += tg;
            tdf = if k == 1.0 {
                x * x / 2.0
            } else {
                tdf * x * x * x / ((3.0 * k - 3.0) * (3.0 * k - 1.0))
            };
            tdg = tdg * x * x * x / ((3.0 * k - 2.0) * (3.0 * k));
            df += tdf;
            dg += tdg;
            k += 1.0;
        }
        (c1 * f - c2 * g, c1 * df - c2 * dg)
    }

    #[test]
    fn values_at_origin() {
        let (a, d) = airy_pair(0.0).unwrap();
        assert!((a - 0.355_028_053_887_817).abs() < 1e-14);
        assert!((d + 0.258_819_403_792_806_8).abs() < 1e-14);
    }

    #[test]
    fn matches_maclaurin_near_origin() {
        let mut x = -4.0;
        while x <= 3.0 {
            let (a, d) = airy_pair(x).unwrap();
            let (ma, md) = maclaurin(x);
            assert!((a - ma).abs() < 1e-12, "x={x}: {a} vs {ma}");
            assert!((d - md).abs() < 1e-12, "x={x}: {d} vs {md}");
            x += 0.13;
        }
    }

    #[test]
    fn wronskian_and_ode_residual() {
        // Ai and Bi are not both available; use the ODE instead.
        let h = 0.002;
        let mut x = -15.0;
        while x <= 15.0 {
            let f = |t: f64| airy_ai(t).unwrap();
            let d2 = (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h)
                - f(x - 2.0 * h))
                / (12.0 * h * h);
            assert!((d2 - x * f(x)).abs() < 1e-8, "x={x}");
            let dnum = (f(x + h) - f(x - h)) / (2.0 * h);
            assert!((dnum - airy_ai_prime(x).unwrap()).abs() < 1e-4 * (1.0 + x.abs()));
            x += 0.37;
        }
    }

    #[test]
    fn continuity_at_table_edges() {
        for edge in [-GRID_EDGE, GRID_EDGE] {
            let i = ((edge + GRID_EDGE) / GRID_STEP).round() as usize;
            let (a1, d1) = table()[i];
            let (a2, d2) = if edge > 0.0 {
                asymptotic_positive(edge)
            } else {
                asymptotic_negative(edge)
            };
            assert!((a1 - a2).abs() < 1e-13, "edge {edge}");
            assert!((d1 - d2).abs() < 1e-12, "edge {edge}");
        }
        let (a, _) = asymptotic_negative(-12.0);
        let (t, _) = taylor(-11.75, table()[1].0, table()[1].1, -0.25);
        assert!((a - t).abs() < 1e-13);
    }

    #[test]
    fn decay_and_range() {
        let (a2, a3, a4) = (
            airy_ai(2.0).unwrap(),
            airy_ai(3.0).unwrap(),
            airy_ai(4.0).unwrap(),
        );
        assert!(a4 < a3 && a3 < a2 && a4 > 0.0);
        assert!(airy_ai(f64::NAN).is_err());
        assert!(airy_ai(-500.0).is_err());
        assert!(airy_ai(30.5).is_err() && airy_ai(-30.5).is_err());
        assert!(airy_ai(30.0).unwrap() > 0.0);
    }

    #[test]
    fn equal_time_kernel() {
        let q = |xi, xi2| {
            extended_airy_kernel(AiryQuery {
                tau: 0.3,
                xi,
                tau2: 0.3,
                xi2,
            })
            .unwrap()
        };
        let ap0 = airy_ai_prime(0.0).unwrap();
        assert!((q(0.0, 0.0) - ap0 * ap0).abs() < 1e-14);
        assert!((q(0.4, -1.1) - q(-1.1, 0.4)).abs() < 1e-15);
        // Direct lambda-quadrature oracle.
        for (x, y) in [(0.0, 0.0), (0.5, -0.7), (-2.0, 1.5), (-3.0, -3.2)] {
            let direct = half_line_integral(0.0, x, y);
            assert!((q(x, y) - direct).abs() < 1e-10, "{x} {y}");
        }
    }

    #[test]
    fn full_line_gaussian_identity() {
        for (t, x, y) in [(1.0, 0.3, -0.4), (0.5, 1.0, 1.0), (2.0, -1.0, 0.5)] {
            let g = QuadratureGrid::composite(400, 16, -100.0 / t - 20.0, 25.0);
            let direct = g.integrate(|l| (l * t).exp() * ai(x + l) * ai(y + l));
            assert!(
                (direct - airy_heat_kernel(t, x, y)).abs() < 1e-8,
                "t={t}: {direct} vs {}",
                airy_heat_kernel(t, x, y)
            );
        }
    }

    #[test]
    fn tracy_widom_values() {
        let f0 = tracy_widom_f2(0.0).unwrap();
        assert!((f0 - 0.969_372_828_355_9).abs() < 1e-6, "F2(0) = {f0}");
        assert!(tracy_widom_f2(-6.0).unwrap() < 0.01);
        assert!(tracy_widom_f2(4.0).unwrap() > 0.999);
        assert!(tracy_widom_f2(8.0).unwrap() >= 0.9999);
        let a = tracy_widom_f2_with(-1.0, 64, 8.0).unwrap();
        let b = tracy_widom_f2_with(-1.0, 64, 12.0).unwrap();
        assert!((a - b).abs() < 1e-7);
        let mut prev = 0.0;
        for k in -8..=6 {
            let v = tracy_widom_f2(k as f64 * 0.5).unwrap();
            assert!((0.0..=1.0).contains(&v) && v >= prev);
            prev = v;
        }
    }

    #[test]
    fn two_time_distributions() {
        let single = tracy_widom_f2(-1.0).unwrap();
        let far = airy_fdd(&FddSpec::new(vec![-10.0, 0.0], vec![-1.0, 11.5]).unwrap()).unwrap();
        assert!((far - single).abs() < 1e-6);
        // Decorrelation: the excess over the product of marginals decays like gap^-2.
        let product = single * tracy_widom_f2(0.0).unwrap();
        let excess = |g: f64| {
            airy_fdd(&FddSpec::new(vec![0.0, g], vec![-1.0, 0.0]).unwrap()).unwrap() - product
        };
        let (e10, e20, e40) = (excess(10.0), excess(20.0), excess(40.0));
        assert!(e10 > 0.0 && e10 < 2.5e-4, "{e10}");
        assert!(e20 < 1e-4);
        assert!((e20 * 400.0 - e40 * 1600.0).abs() < 1e-4);
        let shifted = airy_fdd(&FddSpec::new(vec![3.0, 4.0], vec![-1.0, 0.0]).unwrap()).unwrap();
        let base = airy_fdd(&FddSpec::new(vec![0.0, 1.0], vec![-1.0, 0.0]).unwrap()).unwrap();
        assert!((shifted - base).abs() < 1e-8);
        assert!(base <= single.min(tracy_widom_f2(0.0).unwrap()) + 1e-9);
    }

    #[test]
    fn equal_time_operator_is_a_contraction() {
        for xi in [-4.0, -1.0, 2.0] {
            let (u, w) = gauss_legendre(48);
            let (lo, hi) = (xi, 12.0);
            let x: Vec<f64> = u.iter().map(|t| 0.5 * (hi - lo) * (t + 1.0) + lo).collect();
            let w: Vec<f64> = w.iter().map(|v| 0.5 * (hi - lo) * v).collect();
            let m: Vec<Vec<f64>> = (0..48)
                .map(|i| {
                    (0..48)
                        .map(|j| (w[i] * w[j]).sqrt() * airy_kernel_equal_time(x[i], x[j]).unwrap())
                        .collect()
                })
                .collect();
            for ev in jacobi_eigenvalues(m) {
                assert!(ev > -1e-10 && ev < 1.0 + 1e-8, "xi={xi}: eigenvalue {ev}");
            }
        }
    }

    /// Cyclic Jacobi rotations, an independent symmetric eigensolver.
    fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
        let n = a.len();
        for _ in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i][j] * a[i][j])
                .sum();
            if off < 1e-30 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[k][p], a[k][q]);
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[p][k], a[q][k]);
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        (0..n).map(|i| a[i][i]).collect()
    }

    #[test]
    fn composition_is_resolution_stable() {
        // int A(tau, xi; sigma, mu) A(sigma, mu; tau, xi) dmu over mu in [-6, 10].
        let comp = |panels: usize| {
            QuadratureGrid::composite(panels, 16, -6.0, 10.0).integrate(|mu| {
                let a = extended_airy_kernel(AiryQuery {
                    tau: 0.0,
                    xi: 0.5,
                    tau2: 0.7,
                    xi2: mu,
                })
                .unwrap();
                let b = extended_airy_kernel(AiryQuery {
                    tau: 0.7,
                    xi: mu,
                    tau2: 0.0,
                    xi2: 0.5,
                })
                .unwrap();
                a * b
            })
        };
        let (c1, c2) = (comp(8), comp(16));
        assert!(c1.is_finite() && (c1 - c2).abs() < 1e-6, "{c1} {c2}");
    }

    #[test]
    fn branch_choice_is_seamless() {
        // Around the switch between the Gaussian rewrite and the direct negative integral.
        for (x, y) in [(0.3, -0.2), (-2.0, 1.0)] {
            let below = extended_airy_kernel(AiryQuery {
                tau: 0.0,
                xi: x,
                tau2: DIRECT_GAP,
                xi2: y,
            })
            .unwrap();
            let g = QuadratureGrid::composite(400, 20, -100.0, 0.0);
            let direct = -g.integrate(|l| (l * DIRECT_GAP).exp() * ai(x + l) * ai(y + l));
            assert!((below - direct).abs() < 1e-9, "{below} vs {direct}");
            let t = 2.0;
            let above = extended_airy_kernel(AiryQuery {
                tau: 0.0,
                xi: x,
                tau2: t,
                xi2: y,
            })
            .unwrap();
            let rewrite = half_line_integral(-t, x, y) - airy_heat_kernel(t, x, y);
            assert!(
                (above - rewrite).abs() < 1e-9 * (1.0 + rewrite.abs()),
                "{above} vs {rewrite}"
            );
        }
    }
}
