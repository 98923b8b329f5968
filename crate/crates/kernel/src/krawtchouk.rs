//! Krawtchouk weights and orthonormal polynomials, the single-line
//! Krawtchouk kernel, the multi-line `L` kernel and the Hermite limit.

use crate::error::{Error, Result};
use crate::numerics::{
    self, binomial, ln_binomial, ContourSpec, ConvergenceReport, QuadratureGrid,
};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrawtchoukParams {
    pub n: usize,
    pub q: f64,
    pub p: f64,
}

impl KrawtchoukParams {
    pub fn new(n: usize, q: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("degree bound n must be at least 1".into()));
        }
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Input(format!("q must lie in (0, 1), got {q}")));
        }
        Ok(Self { n, q, p: 1.0 - q })
    }

    /// The parameters induced by the tiling weight `a`: `q = a^2 / (1 + a^2)`.
    pub fn from_aztec_weight(n: usize, a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Input(format!("weight must be positive, got {a}")));
        }
        let a2 = a * a;
        let mut prm = Self::new(n, a2 / (1.0 + a2))?;
        prm.p = 1.0 / (1.0 + a2);
        Ok(prm)
    }

    fn check_x(&self, x: i64) -> Result<()> {
        if x < 0 || x > self.n as i64 {
            return Err(Error::Input(format!("site {x} outside 0..={}", self.n)));
        }
        Ok(())
    }
}

pub fn ln_weight(x: i64, prm: &KrawtchoukParams) -> f64 {
    let n = prm.n as i64;
    ln_binomial(n, x) + x as f64 * prm.q.ln() + (n - x) as f64 * prm.p.ln()
}

/// `C(n, x) q^x p^(n - x)`.
pub fn weight(x: i64, prm: &KrawtchoukParams) -> Result<f64> {
    prm.check_x(x)?;
    Ok(ln_weight(x, prm).exp())
}

fn recurrence_coeffs(k: usize, prm: &KrawtchoukParams) -> (f64, f64) {
    let n = prm.n as f64;
    let kf = k as f64;
    let a_k = (prm.p * prm.q * kf * (n - kf + 1.0)).sqrt();
    let b_k = prm.q * (n - kf) + kf * prm.p;
    (a_k, b_k)
}

/// Orthonormal polynomial `p_k` at a real argument; zero for `k` outside `0..=n`.
pub fn poly_real(k: i64, x: f64, prm: &KrawtchoukParams) -> f64 {
    if k < 0 || k > prm.n as i64 {
        return 0.0;
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    for j in 0..k as usize {
        let (a_j, b_j) = recurrence_coeffs(j, prm);
        let (a_next, _) = recurrence_coeffs(j + 1, prm);
        let next = ((b_j - x) * cur - a_j * prev) / a_next;
        prev = cur;
        cur = next;
    }
    cur
}

/// Orthonormal Krawtchouk polynomial `p_k(x; q, n)`.
pub fn poly(k: i64, x: i64, prm: &KrawtchoukParams) -> f64 {
    poly_real(k, x as f64, prm)
}

/// `p_k(x)` from its contour-integral definition.
pub fn poly_contour(k: i64, x: i64, prm: &KrawtchoukParams) -> Result<f64> {
    if k < 0 || k > prm.n as i64 {
        return Ok(0.0);
    }
    prm.check_x(x)?;
    let n = prm.n as i64;
    let (p, q) = (prm.p, prm.q);
    let radius = 0.5 * (1.0 / p).min(1.0 / q);
    let f = |z: Complex64| {
        (1.0 + p * z).powi(x as i32) * (1.0 - q * z).powi((n - x) as i32) / z.powi(k as i32 + 1)
    };
    let nodes = (2 * (n as usize + 2)).next_power_of_two().max(64);
    let v = numerics::integrate_contour(f, &ContourSpec::circle(radius, nodes))?;
    let norm = binomial(n, k).sqrt().recip() * (q * p).powf(-(k as f64) / 2.0);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * norm * v.re)
}

/// Weighted polynomials `psi_k(x) = p_k(x) w(x)^(1/2)` for all `k, x` in
/// `0..=n`, built once and shared read-only.
#[derive(Debug, Clone)]
pub struct KrawtchoukTable {
    pub prm: KrawtchoukParams,
    psi: Vec<f64>,
    ln_binom: Vec<f64>,
}

impl KrawtchoukTable {
    pub fn new(prm: KrawtchoukParams) -> Self {
        let n = prm.n;
        let mut psi = vec![0.0; (n + 1) * (n + 1)];
        let mut fwd = vec![0.0; n + 1];
        let mut bwd = vec![0.0; n + 2];
        for x in 0..=n {
            let xf = x as f64;
            // Forward in k from psi_0 = w^(1/2); unstable once psi_k(x) decays in k.
            let (mut prev, mut cur) = (0.0, (0.5 * ln_weight(x as i64, &prm)).exp());
            fwd[0] = cur;
            for k in 0..n {
                let (a_k, b_k) = recurrence_coeffs(k, &prm);
                let (a_next, _) = recurrence_coeffs(k + 1, &prm);
                let next = ((b_k - xf) * cur - a_k * prev) / a_next;
                prev = cur;
                cur = next;
                fwd[k + 1] = cur;
            }
            // Backward from psi_n(x) = (-1)^x w(n - x)^(1/2), stable where forward is not.
            bwd[n + 1] = 0.0;
            let sign = if x % 2 == 0 { 1.0 } else { -1.0 };
            bwd[n] = sign * (0.5 * ln_weight((n - x) as i64, &prm)).exp();
            for k in (1..=n).rev() {
                let (a_k, b_k) = recurrence_coeffs(k, &prm);
                let a_next = if k < n {
                    recurrence_coeffs(k + 1, &prm).0
                } else {
                    0.0
                };
                bwd[k - 1] = ((b_k - xf) * bwd[k] - a_next * bwd[k + 1]) / a_k;
            }
            // Splice where the two agree best among non-negligible values.
            let size = |k: usize| fwd[k].abs().min(bwd[k].abs());
            let peak = (0..=n)
                .map(size)
                .filter(|v| v.is_finite())
                .fold(0.0, f64::max);
            let splice = (0..=n)
                .filter(|&k| size(k).is_finite() && size(k) >= 1e-3 * peak)
                .min_by(|&i, &j| {
                    let rel = |k: usize| (fwd[k] - bwd[k]).abs() / (fwd[k].abs() + bwd[k].abs());
                    rel(i).total_cmp(&rel(j))
                })
                .unwrap_or(n);
            let row = &mut psi[x * (n + 1)..(x + 1) * (n + 1)];
            for k in 0..=n {
                row[k] = if k <= splice { fwd[k] } else { bwd[k] };
            }
        }
        let ln_binom = (0..=n as i64).map(|k| ln_binomial(n as i64, k)).collect();
        Self { prm, psi, ln_binom }
    }

    pub fn n(&self) -> usize {
        self.prm.n
    }

    /// `psi_k(x)`, zero outside `0..=n` in `k`.
    pub fn psi(&self, k: i64, x: i64) -> f64 {
        let n = self.prm.n as i64;
        if k < 0 || k > n || x < 0 || x > n {
            return 0.0;
        }
        self.psi[x as usize * (n as usize + 1) + k as usize]
    }

    pub fn kernel_single(&self, r: usize, x: i64, y: i64) -> f64 {
        (0..r as i64).map(|k| self.psi(k, x) * self.psi(k, y)).sum()
    }

    fn term(&self, k: i64, r: i64, x: i64, s: i64, y: i64) -> f64 {
        let n = self.prm.n as i64;
        if k + r < 0 || k + s < 0 || k + r > n || k + s > n {
            return 0.0;
        }
        let ratio =
            (0.5 * (self.ln_binom[(k + r) as usize] - self.ln_binom[(k + s) as usize])).exp();
        ratio * self.psi(k + r, x) * self.psi(k + s, y)
    }

    /// `L_{n,q}(r, x; s, y)`.
    pub fn l_kernel(&self, r: usize, x: i64, s: usize, y: i64) -> f64 {
        let n = self.prm.n as i64;
        let (r, s) = (r as i64, s as i64);
        if r <= s {
            (-r..0).map(|k| self.term(k, r, x, s, y)).sum()
        } else {
            -(0..=n - r).map(|k| self.term(k, r, x, s, y)).sum::<f64>()
        }
    }

    /// The sum of every `L`-type term over all `k`; for `r > s` this is the
    /// part separating the two branches.
    pub fn l_full_sum(&self, r: usize, x: i64, s: usize, y: i64) -> f64 {
        let n = self.prm.n as i64;
        let (r, s) = (r as i64, s as i64);
        (-r.max(s)..=n).map(|k| self.term(k, r, x, s, y)).sum()
    }
}

/// Christoffel–Darboux kernel `K_{r,n,q}(x, y)` with `r` terms.
pub fn kernel_single(r: usize, x: i64, y: i64, prm: &KrawtchoukParams) -> Result<f64> {
    prm.check_x(x)?;
    prm.check_x(y)?;
    if r > prm.n + 1 {
        return Err(Error::Input(format!(
            "rank {r} exceeds n + 1 = {}",
            prm.n + 1
        )));
    }
    Ok(KrawtchoukTable::new(*prm).kernel_single(r, x, y))
}

pub fn l_kernel(r: usize, x: i64, s: usize, y: i64, prm: &KrawtchoukParams) -> Result<f64> {
    for v in [r, s] {
        if v == 0 || v > prm.n {
            return Err(Error::Input(format!(
                "line index {v} outside 1..={}",
                prm.n
            )));
        }
    }
    prm.check_x(x)?;
    prm.check_x(y)?;
    Ok(KrawtchoukTable::new(*prm).l_kernel(r, x, s, y))
}

/// Probability that the `r`-point Krawtchouk ensemble occupies exactly the
/// sites `h`, as `det(K_{r,n,q}(h_i, h_j))`.
pub fn ensemble_prob(h: &[i64], prm: &KrawtchoukParams) -> Result<f64> {
    for (i, &x) in h.iter().enumerate() {
        prm.check_x(x)?;
        if h[..i].contains(&x) {
            return Err(Error::Input(format!("duplicate site {x}")));
        }
    }
    let r = h.len();
    if r > prm.n + 1 {
        return Err(Error::Input(format!(
            "{r} particles cannot fit in {} sites",
            prm.n + 1
        )));
    }
    let table = KrawtchoukTable::new(*prm);
    let m: Vec<Vec<f64>> = h
        .iter()
        .map(|&x| h.iter().map(|&y| table.kernel_single(r, x, y)).collect())
        .collect();
    numerics::det_real(&m)
}

/// Unnormalised Vandermonde-squared weight of a configuration.
pub fn ensemble_weight(h: &[i64], prm: &KrawtchoukParams) -> f64 {
    let mut v = 1.0;
    for i in 0..h.len() {
        for j in 0..i {
            let d = (h[i] - h[j]) as f64;
            v *= d * d;
        }
    }
    v * h.iter().map(|&x| ln_weight(x, prm).exp()).product::<f64>()
}

/// `Z_{r,n,q}` by summation over all `r`-subsets; refuses more than `cap` subsets.
pub fn partition_function(r: usize, prm: &KrawtchoukParams, cap: usize) -> Result<f64> {
    let count = binomial(prm.n as i64 + 1, r as i64);
    if count > cap as f64 {
        return Err(Error::Resource(format!("{count} subsets exceed cap {cap}")));
    }
    let mut total = 0.0;
    let mut h: Vec<i64> = (0..r as i64).collect();
    let n = prm.n as i64;
    loop {
        total += ensemble_weight(&h, prm);
        let mut i = r;
        loop {
            if i == 0 {
                return Ok(total);
            }
            i -= 1;
            if h[i] < n - (r - 1 - i) as i64 {
                h[i] += 1;
                for j in i + 1..r {
                    h[j] = h[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Normalised Hermite polynomial `h_k`, orthonormal against `e^{-x^2}`.
pub fn hermite_fn(k: usize, xi: f64) -> f64 {
    let h0 = PI.powf(-0.25);
    if k == 0 {
        return h0;
    }
    let (mut prev, mut cur) = (h0, 2f64.sqrt() * xi * h0);
    for j in 1..k {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * xi * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn ln_fact(k: usize) -> f64 {
    numerics::ln_factorial(k as u64)
}

/// Extended Hermite kernel `K_{H,I}(r, xi; s, eta)`.
///
/// For `r > s` the defining series converges only conditionally. It is
/// evaluated as the finite sum over negative indices minus the complete
/// series, which with `d = r - s` equals
/// `2^{d/2} e^{(eta^2 - xi^2)/2} [(xi - eta)_+^{d-1}/(d-1)! - sum_{j<d} h_j(xi) c_j(eta)]`,
/// `c_j(eta) = int_eta^inf h_j(u) (u - eta)^{d-1}/(d-1)! e^{-u^2} du`.
pub fn hermite_kernel_i(r: usize, xi: f64, s: usize, eta: f64) -> f64 {
    let gauss = (-(xi * xi + eta * eta) / 2.0).exp();
    let (ri, si) = (r as i64, s as i64);
    let lower = -(ri.min(si));
    let finite: f64 = (lower..0)
        .map(|j| {
            let (a, b) = ((si + j) as usize, (ri + j) as usize);
            (0.5 * (ln_fact(a) - ln_fact(b))).exp() * hermite_fn(b, xi) * hermite_fn(a, eta)
        })
        .sum::<f64>()
        * gauss;
    if r <= s {
        return finite;
    }
    finite - hermite_complete_series(r - s, xi, eta)
}

fn hermite_complete_series(d: usize, xi: f64, eta: f64) -> f64 {
    let fact = ln_fact(d - 1).exp();
    let ramp = |u: f64| {
        if u > eta {
            (u - eta).powi(d as i32 - 1) / fact
        } else {
            0.0
        }
    };
    let grid = QuadratureGrid::composite(32, 16, eta, eta.max(0.0) + 10.0);
    let projection: f64 = (0..d)
        .map(|j| {
            hermite_fn(j, xi) * grid.integrate(|u| hermite_fn(j, u) * ramp(u) * (-u * u).exp())
        })
        .sum();
    2f64.powf(d as f64 / 2.0) * ((eta * eta - xi * xi) / 2.0).exp() * (ramp(xi) - projection)
}

fn decreasing_report(resolutions: &[usize], values: Vec<f64>) -> ConvergenceReport {
    let converged = values.windows(2).all(|w| w[1] < w[0]);
    ConvergenceReport {
        resolutions: resolutions.to_vec(),
        estimated_error: *values.last().unwrap_or(&0.0),
        values,
        converged,
    }
}

/// Discrepancy `|p_k(qn + xi sqrt(2npq)) - (-1)^k pi^{1/4} h_k(xi)|` along
/// `ns`; `converged` means strictly decreasing.
pub fn hermite_limit_poly(k: usize, xi: f64, q: f64, ns: &[usize]) -> Result<ConvergenceReport> {
    let limit = if k % 2 == 0 { 1.0 } else { -1.0 } * PI.powf(0.25) * hermite_fn(k, xi);
    let mut values = Vec::with_capacity(ns.len());
    for &n in ns {
        let prm = KrawtchoukParams::new(n, q)?;
        let nf = n as f64;
        let x = q * nf + xi * (2.0 * nf * prm.p * q).sqrt();
        values.push((poly_real(k as i64, x, &prm) - limit).abs());
    }
    Ok(decreasing_report(ns, values))
}

/// The scaled `L` kernel at the lattice points nearest to the rescaled
/// arguments; the Hermite side uses the effective rescaled coordinates of
/// those lattice points.
pub fn scaled_l_kernel(
    r: usize,
    xi: f64,
    s: usize,
    eta: f64,
    n: usize,
    q: f64,
) -> Result<(f64, f64, f64)> {
    let prm = KrawtchoukParams::new(n, q)?;
    let nf = n as f64;
    let scale = (2.0 * nf * prm.p * q).sqrt();
    let x = (q * nf + xi * scale).round() as i64;
    let y = (q * nf + eta * scale).round() as i64;
    let xi_eff = (x as f64 - q * nf) / scale;
    let eta_eff = (y as f64 - q * nf) / scale;
    let table = KrawtchoukTable::new(prm);
    let sign = if (s as i64 - r as i64).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    let factor = sign * nf.powf((s as f64 - r as f64) / 2.0) * scale;
    Ok((factor * table.l_kernel(r, x, s, y), xi_eff, eta_eff))
}

/// Discrepancy between the scaled `L` kernel and `K_{H,I}` along `ns`.
pub fn hermite_limit_kernel(
    r: usize,
    xi: f64,
    s: usize,
    eta: f64,
    q: f64,
    ns: &[usize],
) -> Result<ConvergenceReport> {
    let mut values = Vec::with_capacity(ns.len());
    for &n in ns {
        let (v, xe, ye) = scaled_l_kernel(r, xi, s, eta, n, q)?;
        values.push((v - hermite_kernel_i(r, xe, s, ye)).abs());
    }
    Ok(decreasing_report(ns, values))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: `[z^k] (1+pz)^x (1-qz)^{n-x}` by direct binomial expansion.
    fn poly_by_coefficients(k: i64, x: i64, prm: &KrawtchoukParams) -> f64 {
        let n = prm.n as i64;
        let (p, q) = (prm.p, prm.q);
        let mut c = 0.0;
        for i in 0..=k {
            c += binomial(x, i)
                * p.powi(i as i32)
                * binomial(n - x, k - i)
                * (-q).powi((k - i) as i32);
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sign * c / binomial(n, k).sqrt() / (q * p).powf(k as f64 / 2.0)
    }

    #[test]
    fn weight_examples() {
        let prm = KrawtchoukParams::new(7, 0.3).unwrap();
        assert!((weight(0, &prm).unwrap() - 0.7f64.powi(7)).abs() < 1e-15);
        let half = KrawtchoukParams::new(1, 0.5).unwrap();
        assert!((weight(1, &half).unwrap() - 0.5).abs() < 1e-15);
        let prm = KrawtchoukParams::new(20, 0.3).unwrap();
        let total: f64 = (0..=20).map(|x| weight(x, &prm).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-13);
        assert!(weight(21, &prm).is_err());
    }

    #[test]
    fn low_degree_polynomials() {
        let prm = KrawtchoukParams::new(9, 0.35).unwrap();
        for x in 0..=9 {
            assert_eq!(poly(0, x, &prm), 1.0);
            let expect = (prm.q * 9.0 - x as f64) / (9.0 * prm.p * prm.q).sqrt();
            assert!((poly(1, x, &prm) - expect).abs() < 1e-13);
        }
        assert_eq!(poly(-1, 3, &prm), 0.0);
        assert_eq!(poly(10, 3, &prm), 0.0);
    }

    #[test]
    fn recurrence_matches_coefficients_and_contour() {
        for n in [5usize, 12, 20] {
            let prm = KrawtchoukParams::new(n, 0.37).unwrap();
            for k in 0..=8.min(n as i64) {
                for x in 0..=n as i64 {
                    let rec = poly(k, x, &prm);
                    let coef = poly_by_coefficients(k, x, &prm);
                    let cont = poly_contour(k, x, &prm).unwrap();
                    let scale = 1.0 + rec.abs();
                    assert!((rec - coef).abs() < 1e-9 * scale, "n={n} k={k} x={x}");
                    assert!((rec - cont).abs() < 1e-9 * scale, "n={n} k={k} x={x}");
                }
            }
        }
    }

    #[test]
    fn orthonormality() {
        for q in [0.3, 0.5, 0.7] {
            for n in [12usize, 30, 40] {
                let table = KrawtchoukTable::new(KrawtchoukParams::new(n, q).unwrap());
                for j in 0..=12 {
                    for k in 0..=12 {
                        let s: f64 = (0..=n as i64)
                            .map(|x| table.psi(j, x) * table.psi(k, x))
                            .sum();
                        let d = if j == k { 1.0 } else { 0.0 };
                        assert!((s - d).abs() < 1e-10, "q={q} n={n} j={j} k={k} s={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn reflection_symmetry() {
        for n in 1..=15usize {
            let prm = KrawtchoukParams::new(n, 0.4).unwrap();
            let (p, q) = (prm.p, prm.q);
            for k in 0..=n as i64 {
                for x in 0..=n as i64 {
                    let lhs = poly(k, n as i64 - x, &prm);
                    let sign = if (k - x).rem_euclid(2) == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    let rhs = sign
                        * p.powf(n as f64 / 2.0 - x as f64)
                        * q.powf(-(n as f64) / 2.0 + x as f64)
                        * poly(n as i64 - k, x, &prm);
                    assert!(
                        (lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()),
                        "n={n} k={k} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn single_line_kernel() {
        let prm = KrawtchoukParams::new(1, 0.3).unwrap();
        for x in 0..=1 {
            assert!(
                (kernel_single(1, x, x, &prm).unwrap() - weight(x, &prm).unwrap()).abs() < 1e-15
            );
        }
        let prm = KrawtchoukParams::new(20, 0.45).unwrap();
        let t = KrawtchoukTable::new(prm);
        let trace: f64 = (0..=20).map(|x| t.kernel_single(5, x, x)).sum();
        assert!((trace - 5.0).abs() < 1e-10);
        for x in 0..=20 {
            for z in 0..=20 {
                assert_eq!(t.kernel_single(5, x, z), t.kernel_single(5, z, x));
                let proj: f64 = (0..=20)
                    .map(|y| t.kernel_single(5, x, y) * t.kernel_single(5, y, z))
                    .sum();
                assert!((proj - t.kernel_single(5, x, z)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn ensemble_probabilities() {
        let a: f64 = 0.8;
        let prm = KrawtchoukParams::from_aztec_weight(1, a).unwrap();
        assert!((ensemble_prob(&[1], &prm).unwrap() - a * a / (1.0 + a * a)).abs() < 1e-14);
        let prm = KrawtchoukParams::new(6, 0.3).unwrap();
        for x in 0..=6 {
            assert!((ensemble_prob(&[x], &prm).unwrap() - weight(x, &prm).unwrap()).abs() < 1e-14);
        }
        let prm = KrawtchoukParams::new(4, 0.3).unwrap();
        let z = partition_function(2, &prm, 1000).unwrap();
        let mut total = 0.0;
        for x in 0..=4 {
            for y in x + 1..=4 {
                let p = ensemble_prob(&[x, y], &prm).unwrap();
                assert!((p - ensemble_weight(&[x, y], &prm) / z).abs() < 1e-13);
                total += p;
            }
        }
        assert!((total - 1.0).abs() < 1e-13);
        assert!(matches!(ensemble_prob(&[2, 2], &prm), Err(Error::Input(_))));
    }

    #[test]
    fn l_kernel_reduces_to_single_line() {
        let prm = KrawtchoukParams::new(10, 0.5).unwrap();
        let t = KrawtchoukTable::new(prm);
        for r in 1..=10 {
            for x in 0..=10 {
                for y in 0..=10 {
                    assert!((t.l_kernel(r, x, r, y) - t.kernel_single(r, x, y)).abs() < 1e-12);
                }
            }
        }
        let q = 0.27;
        let prm = KrawtchoukParams::new(1, q).unwrap();
        assert!((l_kernel(1, 1, 1, 1, &prm).unwrap() - q).abs() < 1e-15);
    }

    #[test]
    fn hermite_functions() {
        assert!((hermite_fn(0, 1.3) - PI.powf(-0.25)).abs() < 1e-15);
        assert_eq!(hermite_fn(1, 0.0), 0.0);
        let g = QuadratureGrid::composite(40, 20, -12.0, 12.0);
        for k in 0..=6 {
            let norm = g.integrate(|x| hermite_fn(k, x).powi(2) * (-x * x).exp());
            assert!((norm - 1.0).abs() < 1e-8, "k={k} norm={norm}");
        }
    }

    #[test]
    fn hermite_kernel_properties() {
        let (xi, eta) = (0.3, -0.8);
        let single = hermite_kernel_i(1, xi, 1, eta);
        let expect = hermite_fn(0, xi) * hermite_fn(0, eta) * (-(xi * xi + eta * eta) / 2.0).exp();
        assert!((single - expect).abs() < 1e-15);
        assert!((hermite_kernel_i(3, xi, 3, eta) - hermite_kernel_i(3, eta, 3, xi)).abs() < 1e-14);
        let g = QuadratureGrid::composite(40, 20, -12.0, 12.0);
        for r in 1..=4 {
            let tr = g.integrate(|x| hermite_kernel_i(r, x, r, x));
            assert!((tr - r as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn hermite_limits() {
        let r = hermite_limit_poly(0, 0.7, 0.3, &[50, 100]).unwrap();
        assert!(r.values.iter().all(|&v| v < 1e-12));
        let r = hermite_limit_poly(1, 0.0, 0.5, &[100, 400]).unwrap();
        assert!(r.values.iter().all(|&v| v < 1e-12));
        let r = hermite_limit_kernel(1, 0.5, 2, 0.5, 0.5, &[100, 400, 1600]).unwrap();
        assert!(r.converged, "{r:?}");
        let r = hermite_limit_kernel(2, 0.9, 1, 0.2, 0.5, &[100, 400, 1600]).unwrap();
        assert!(r.converged, "{r:?}");
        assert!(r.estimated_error < 1e-3, "{r:?}");
    }
}
