//! The extended Krawtchouk kernel of the zig-zag particle process.
//!
//! Lines are indexed `1..=2n-1` and line `R` carries the window
//! `[-n + ceil(R/2), ceil(R/2)]`. The default evaluator is exact up to
//! rounding: odd-odd entries come from Krawtchouk sums, even lines are
//! reached through the one-step transfer relations of the contour
//! integrand, each involving two neighbouring sites only. The one site
//! those relations cannot reach, the bottom of an even line, is occupied
//! with probability one, so its row and column are replaced by unit
//! vectors; every correlation determinant is unchanged. The contour form
//! is kept as an independent cross-check.

use crate::dd::{roots_of_unity, CDd, Dd};
use crate::error::{Error, Result};
use crate::krawtchouk::{KrawtchoukParams, KrawtchoukTable};
use crate::numerics::{self, binomial, ContourSpec, DEFAULT_DET_CAP};
use crate::tiling::ParticleConfiguration;
use num_complex::Complex64;

/// `phi_{t,t+1}` for even `t`.
pub fn alpha_step(d: i64, a: f64) -> f64 {
    match d {
        0 => 1.0,
        1 => a,
        _ => 0.0,
    }
}

/// `phi_{t,t+1}` for odd `t`.
pub fn beta_step(d: i64, a: f64) -> f64 {
    if d <= 0 {
        a.powi((-d) as i32)
    } else {
        0.0
    }
}

fn step(t: usize, d: i64, a: f64) -> f64 {
    if t % 2 == 0 {
        alpha_step(d, a)
    } else {
        beta_step(d, a)
    }
}

/// `phi_{r,s}(x, y)`, the convolution of the single-line steps from line
/// `r` to line `s`; zero unless `r < s`.
pub fn phi(r: usize, s: usize, x: i64, y: i64, a: f64) -> f64 {
    if r >= s {
        return 0.0;
    }
    let m_alpha = (r..s).filter(|t| t % 2 == 0).count() as i64;
    let m_beta = (s - r) as i64 - m_alpha;
    let d = y - x;
    let mut total = 0.0;
    for u in 0..=m_alpha {
        let descent = u - d;
        if descent < 0 {
            continue;
        }
        let ways = if m_beta == 0 {
            if descent == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            binomial(descent + m_beta - 1, m_beta - 1)
        };
        total += binomial(m_alpha, u) * a.powi(u as i32) * ways * a.powi(descent as i32);
    }
    total
}

fn line_split(line: usize) -> (i64, i64) {
    let r = line.div_ceil(2) as i64;
    (r, 2 * r - line as i64)
}

/// `phi_{r,s}` from its Fourier integral over the unit circle; `a < 1`.
pub fn phi_fourier(r: usize, s: usize, x: i64, y: i64, a: f64) -> Result<f64> {
    if r >= s {
        return Ok(0.0);
    }
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Input(
            "the Fourier form of phi needs 0 < a < 1".into(),
        ));
    }
    let (rr, e1) = line_split(r);
    let (ss, e2) = line_split(s);
    let g_exp = (rr - e1) - (ss - e2);
    let f = |z: Complex64| {
        z.powi((y - x - 1) as i32)
            * (1.0 - a * z).powi(g_exp as i32)
            * (1.0 + a / z).powi((ss - rr) as i32)
    };
    let v =
        numerics::integrate_contour_converged(f, &ContourSpec::circle(1.0, 64), 1e-14, 1 << 16)?;
    Ok(v.re)
}

/// `G_{n, 2r - e1, 2s - e2}(z, w)`.
#[allow(clippy::too_many_arguments)]
pub fn g_factor(
    n: usize,
    r: i64,
    s: i64,
    e1: i64,
    e2: i64,
    z: Complex64,
    w: Complex64,
    a: f64,
) -> Result<Complex64> {
    let n = n as i64;
    let den = (1.0 - a * z).powi((n - r + e1) as i32) * (1.0 + a / z).powi(r as i32);
    let num = (1.0 - a * w).powi((n - s + e2) as i32) * (1.0 + a / w).powi(s as i32);
    if den.norm() == 0.0 || !den.is_finite() || !num.is_finite() {
        return Err(Error::Singularity(format!(
            "G is singular at z = {z}, w = {w}"
        )));
    }
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AztecKernelParams {
    pub n: usize,
    pub a: f64,
}

impl AztecKernelParams {
    pub fn new(n: usize, a: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("order n must be at least 1".into()));
        }
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::Input(format!(
                "weight a must lie in (0, 1], got {a}"
            )));
        }
        Ok(Self { n, a })
    }

    pub fn window(&self, line: usize) -> (i64, i64) {
        (
            ParticleConfiguration::window_floor(self.n, line),
            ParticleConfiguration::window_ceiling(line),
        )
    }
}

/// One kernel entry `K_n(r, x; s, y)` with line indices `r, s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KernelQuery {
    pub r: usize,
    pub x: i64,
    pub s: usize,
    pub y: i64,
}

/// Evaluator holding the Krawtchouk table for `q = a^2 / (1 + a^2)`.
#[derive(Debug, Clone)]
pub struct AztecKernel {
    pub prm: AztecKernelParams,
    table: KrawtchoukTable,
}

impl AztecKernel {
    pub fn new(n: usize, a: f64) -> Result<Self> {
        let prm = AztecKernelParams::new(n, a)?;
        let table = KrawtchoukTable::new(KrawtchoukParams::from_aztec_weight(n, a)?);
        Ok(Self { prm, table })
    }

    pub fn n(&self) -> usize {
        self.prm.n
    }

    pub fn a(&self) -> f64 {
        self.prm.a
    }

    fn check(&self, line: usize, x: i64) -> Result<()> {
        let n = self.prm.n;
        if line == 0 || line >= 2 * n {
            return Err(Error::Input(format!(
                "line {line} outside 1..={}",
                2 * n - 1
            )));
        }
        let (lo, hi) = self.prm.window(line);
        if x < lo || x > hi {
            return Err(Error::Input(format!(
                "site {x} outside the window [{lo}, {hi}] of line {line}"
            )));
        }
        Ok(())
    }

    /// `K_n(r, x; s, y)`.
    pub fn kernel(&self, r: usize, x: i64, s: usize, y: i64) -> Result<f64> {
        self.check(r, x)?;
        self.check(s, y)?;
        Ok(self.tilde(r, x, s, y)? - phi(r, s, x, y, self.prm.a))
    }

    pub fn query(&self, q: KernelQuery) -> Result<f64> {
        self.kernel(q.r, q.x, q.s, q.y)
    }

    /// `K_n + phi`, the part without the transition term.
    pub fn kernel_tilde(&self, r: usize, x: i64, s: usize, y: i64) -> Result<f64> {
        self.check(r, x)?;
        self.check(s, y)?;
        self.tilde(r, x, s, y)
    }

    fn tilde(&self, r: usize, x: i64, s: usize, y: i64) -> Result<f64> {
        let n = self.prm.n as i64;
        let a = self.prm.a;
        let at_bottom = |line: usize, site: i64| line % 2 == 0 && site == -n + (line / 2) as i64;
        if at_bottom(r, x) || at_bottom(s, y) {
            // Always occupied: unit row and column give an equivalent kernel there.
            let delta = (r == s && x == y) as u8 as f64;
            return Ok(delta + phi(r, s, x, y, a));
        }
        if r % 2 == 0 {
            return Ok(self.tilde(r + 1, x, s, y)? + a * self.tilde(r + 1, x + 1, s, y)?);
        }
        if s % 2 == 0 {
            // Both one-step relations into and out of line s, combined.
            return Ok(
                (self.tilde(r, x, s + 1, y)? - a * self.tilde(r, x, s - 1, y - 1)?) / (1.0 + a * a),
            );
        }
        Ok(self.odd(r, x, s, y) + phi(r, s, x, y, a))
    }

    fn odd(&self, r_line: usize, x_site: i64, s_line: usize, y_site: i64) -> f64 {
        let n = self.prm.n;
        let r = n - (r_line - 1) / 2;
        let s = n - (s_line - 1) / 2;
        let x = x_site + r as i64 - 1;
        let y = y_site + s as i64 - 1;
        let nn = n as i64;
        let sign = if (r as i64 - s as i64) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        let ratio = (0.5 * (numerics::ln_binomial(nn, y) - numerics::ln_binomial(nn, x))).exp();
        sign * ratio * self.table.l_kernel(r, x, s, y)
    }

    /// `K_n` on two odd lines through the Krawtchouk-polynomial identity.
    pub fn kernel_krawtchouk(&self, r: usize, x: i64, s: usize, y: i64) -> Result<f64> {
        self.check(r, x)?;
        self.check(s, y)?;
        if r % 2 == 0 || s % 2 == 0 {
            return Err(Error::Input(
                "the Krawtchouk identity covers odd lines only".into(),
            ));
        }
        Ok(self.odd(r, x, s, y))
    }

    /// `K_n` by contour quadrature: the inner integral is done exactly as a
    /// Laurent-coefficient sum, the outer one on a circle in double-double
    /// arithmetic for `a < 1` and on a vertical line for `a = 1`.
    pub fn kernel_contour(&self, r: usize, x: i64, s: usize, y: i64) -> Result<f64> {
        self.check(r, x)?;
        self.check(s, y)?;
        self.contour(r, x, s, y)
    }

    fn contour(&self, r_line: usize, x: i64, s_line: usize, y: i64) -> Result<f64> {
        let (n, a) = (self.prm.n, self.prm.a);
        if a < 1.0 {
            ContourProblem::new(n, a, r_line, x, s_line, y, r_line >= s_line).circle_dd()
        } else {
            ContourProblem::new(n, a, r_line, x, s_line, y, true).line()
        }
    }
}

/// The single remaining contour integral
/// `(1/2 pi i) ∮ z^{-x-1} (1 - a z)^{-A} (1 + a/z)^{-r} h(z) dz`,
/// where `h` is the Laurent polynomial left by the inner integral.
struct ContourProblem {
    a: f64,
    x: i64,
    big_a: i64,
    r: i64,
    /// `h(z) = sum_k coeffs[k] z^(e_lo + k)`.
    e_lo: i64,
    coeffs: Vec<Dd>,
    left_above: bool,
}

impl ContourProblem {
    /// `inner` expands `z / (z - w)` for `|w| < |z|`.
    fn new(n: usize, a: f64, r_line: usize, x: i64, s_line: usize, y: i64, inner: bool) -> Self {
        let n = n as i64;
        let (r, e1) = line_split(r_line);
        let (s, e2) = line_split(s_line);
        let big_a = n - r + e1;
        let a_prime = n - s + e2;
        let binoms = |m: i64| -> Vec<Dd> {
            let mut out = vec![Dd::ONE];
            for k in 0..m {
                let prev = *out.last().unwrap();
                out.push(prev * Dd::from_f64((m - k) as f64) / Dd::from_f64((k + 1) as f64));
            }
            out
        };
        let cs = binoms(s);
        let ca = binoms(a_prime);
        let ad = Dd::from_f64(a);
        let mut pow = vec![Dd::ONE];
        for _ in 0..(s + a_prime) {
            let p = *pow.last().unwrap() * ad;
            pow.push(p);
        }
        let (lo, hi) = (y - s, y + a_prime);
        let mut full = vec![Dd::ZERO; (hi - lo + 1) as usize];
        for i in 0..=s {
            for t in 0..=a_prime {
                let e = y + t - i;
                let mut term = cs[i as usize] * ca[t as usize] * pow[(i + t) as usize];
                if t % 2 == 1 {
                    term = -term;
                }
                let slot = &mut full[(e - lo) as usize];
                *slot = *slot + term;
            }
        }
        let (e_lo, coeffs) = if inner {
            let top = hi.min(0);
            if top < lo {
                (0, Vec::new())
            } else {
                (lo, full[..(top - lo + 1) as usize].to_vec())
            }
        } else {
            let bottom = lo.max(1);
            if bottom > hi {
                (0, Vec::new())
            } else {
                (
                    bottom,
                    full[(bottom - lo) as usize..].iter().map(|&c| -c).collect(),
                )
            }
        };
        Self {
            a,
            x,
            big_a,
            r,
            e_lo,
            coeffs,
            left_above: r_line >= s_line,
        }
    }

    /// `z f(z)` in ordinary precision.
    fn eval_f64(&self, z: Complex64) -> Complex64 {
        let mut h = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            h = h * z + c.to_f64();
        }
        z.powi((self.r - self.x + self.e_lo) as i32) * h
            / ((1.0 - self.a * z).powi(self.big_a as i32) * (z + self.a).powi(self.r as i32))
    }

    fn eval_dd(&self, z: CDd) -> CDd {
        let mut h = CDd::default();
        for c in self.coeffs.iter().rev() {
            h = h * z + CDd::real(*c);
        }
        let a = Dd::from_f64(self.a);
        let one_minus = CDd::ONE - z.scale(a);
        let plus = z + CDd::real(a);
        z.powi(self.r - self.x + self.e_lo) * h / (one_minus.powi(self.big_a) * plus.powi(self.r))
    }

    /// Radius minimising the peak of the integrand, and that peak. The scan
    /// stays in the middle half of `(a, 1/a)` on a log scale so that the
    /// trapezoid rule keeps a geometric convergence rate of at least `a^{1/2}`.
    fn pick_radius(&self) -> (f64, f64) {
        let (lo, hi) = (self.a.ln(), -self.a.ln());
        let mut best = (f64::INFINITY, 1.0);
        for k in 8..=24 {
            let rho = (lo + (hi - lo) * k as f64 / 32.0).exp();
            let peak = (0..64)
                .map(|j| {
                    let z = Complex64::from_polar(rho, std::f64::consts::TAU * j as f64 / 64.0);
                    self.eval_f64(z).norm()
                })
                .fold(0.0, f64::max);
            if peak < best.0 {
                best = (peak, rho);
            }
        }
        (best.1, best.0)
    }

    fn circle_dd(&self) -> Result<f64> {
        if self.coeffs.is_empty() {
            return Ok(0.0);
        }
        let (rho, peak) = self.pick_radius();
        let rho = Dd::from_f64(rho);
        // Double-double rounding of the node values sets the noise floor.
        let floor = 1e-29 * peak;
        let trapezoid = |nodes: usize| -> f64 {
            let mut acc = CDd::default();
            for w in roots_of_unity(nodes) {
                acc = acc + self.eval_dd(w.scale(rho));
            }
            (acc.re / Dd::from_f64(nodes as f64)).to_f64()
        };
        let mut nodes = 64;
        let mut prev = trapezoid(nodes);
        while nodes < 1 << 18 {
            nodes *= 2;
            let next = trapezoid(nodes);
            if (next - prev).abs() <= (1e-14 * next.abs().max(1.0)).max(floor) {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::Convergence {
            what: "circle contour for the extended kernel".into(),
            coarse: trapezoid(nodes / 2),
            fine: prev,
        })
    }

    /// `a = 1`: the inner circle shrinks to a small radius and the outer
    /// contour is the vertical line `Re z = 1/2`, or `Re z = -1/2` when the
    /// left line is below the right line. The `1/z` tail is subtracted in
    /// closed form.
    fn line(&self) -> Result<f64> {
        if self.coeffs.is_empty() {
            return Ok(0.0);
        }
        let alpha = if self.left_above { 0.5 } else { -0.5 };
        // z f(z) -> (-1)^A c_{x+A} as z -> infinity.
        let k = self.x + self.big_a - self.e_lo;
        let c_inf = if k >= 0 && (k as usize) < self.coeffs.len() {
            let c = self.coeffs[k as usize].to_f64();
            if self.big_a % 2 == 0 {
                c
            } else {
                -c
            }
        } else {
            0.0
        };
        let pole = Complex64::new(alpha - 1.0, 0.0);
        let f = |z: Complex64| self.eval_f64(z) / z - c_inf / (z - pole);
        let v = numerics::integrate_contour_converged(
            f,
            &ContourSpec::line(alpha, 64),
            1e-12,
            1 << 14,
        )?;
        Ok(v.re + c_inf)
    }
}

/// `K_n` for one query.
pub fn kernel(q: KernelQuery, prm: AztecKernelParams) -> Result<f64> {
    AztecKernel::new(prm.n, prm.a)?.query(q)
}

/// Real lattice positions of the edge scaling.
pub mod scaling {
    pub fn c_n(n: usize) -> f64 {
        2f64.powf(-5.0 / 6.0) * (n as f64).powf(1.0 / 3.0)
    }

    /// `n (1 + 1/sqrt 2) + 2^{-1/6} tau n^{2/3}`, the (even) line index.
    pub fn b_n(tau: f64, n: usize) -> f64 {
        let nf = n as f64;
        nf * (1.0 + std::f64::consts::FRAC_1_SQRT_2)
            + 2f64.powf(-1.0 / 6.0) * tau * nf.powf(2.0 / 3.0)
    }

    pub fn a_n(tau: f64, n: usize) -> f64 {
        let nf = n as f64;
        nf * std::f64::consts::FRAC_1_SQRT_2
            - 2f64.powf(-5.0 / 6.0) * tau * tau * nf.powf(1.0 / 3.0)
    }

    /// `(tau, xi)` of the lattice point `(line, x)`.
    pub fn coordinates(line: usize, x: i64, n: usize) -> (f64, f64) {
        let nf = n as f64;
        let tau = (line as f64 - nf * (1.0 + std::f64::consts::FRAC_1_SQRT_2))
            / (2f64.powf(-1.0 / 6.0) * nf.powf(2.0 / 3.0));
        (tau, (x as f64 - a_n(tau, n)) / c_n(n))
    }

    /// Even line `2 floor(b_n / 2)` and site `floor(a_n + c_n xi)`.
    pub fn lattice_point(tau: f64, xi: f64, n: usize) -> (usize, i64) {
        let line = 2 * (b_n(tau, n) / 2.0).floor() as usize;
        (line, (a_n(tau, n) + c_n(n) * xi).floor() as i64)
    }
}

fn conjugation(n: usize, r: usize, x: i64, s: usize, y: i64) -> f64 {
    let (tau, xi) = scaling::coordinates(r, x, n);
    let (tau2, xi2) = scaling::coordinates(s, y, n);
    let half_lines = (s as f64 - r as f64) / 2.0;
    let e = (x - y) as f64 + 2.0 * half_lines;
    (2f64.sqrt() - 1.0).powf(e)
        * (xi * tau - xi2 * tau2 - tau.powi(3) / 3.0 + tau2.powi(3) / 3.0).exp()
}

/// `K_n^*`, the gauge-conjugated kernel used for edge asymptotics (`a = 1`,
/// even lines); determinants are unchanged.
pub fn conjugated_kernel(k: &AztecKernel, r: usize, x: i64, s: usize, y: i64) -> Result<f64> {
    if k.a() != 1.0 {
        return Err(Error::Input(
            "the conjugated kernel is defined for a = 1".into(),
        ));
    }
    Ok(conjugation(k.n(), r, x, s, y) * k.kernel(r, x, s, y)?)
}

/// A rescaled kernel value together with the effective coordinates of the
/// lattice points actually used.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RescaledValue {
    pub value: f64,
    pub tau: f64,
    pub xi: f64,
    pub tau2: f64,
    pub xi2: f64,
}

/// `L_n^* = c_n K_n^*` at the lattice points nearest below the scaling
/// positions of `(tau, xi)` and `(tau2, xi2)`.
pub fn rescaled_kernel(
    k: &AztecKernel,
    tau: f64,
    xi: f64,
    tau2: f64,
    xi2: f64,
) -> Result<RescaledValue> {
    let n = k.n();
    let (r, x) = scaling::lattice_point(tau, xi, n);
    let (s, y) = scaling::lattice_point(tau2, xi2, n);
    let value = scaling::c_n(n) * conjugated_kernel(k, r, x, s, y)?;
    let (te, xe) = scaling::coordinates(r, x, n);
    let (te2, xe2) = scaling::coordinates(s, y, n);
    Ok(RescaledValue {
        value,
        tau: te,
        xi: xe,
        tau2: te2,
        xi2: xe2,
    })
}

/// The rescaled transition part `c_n (conjugation) phi`, for `a = 1`.
pub fn rescaled_phi(n: usize, tau: f64, xi: f64, tau2: f64, xi2: f64) -> RescaledValue {
    let (r, x) = scaling::lattice_point(tau, xi, n);
    let (s, y) = scaling::lattice_point(tau2, xi2, n);
    let value = scaling::c_n(n) * conjugation(n, r, x, s, y) * phi(r, s, x, y, 1.0);
    let (te, xe) = scaling::coordinates(r, x, n);
    let (te2, xe2) = scaling::coordinates(s, y, n);
    RescaledValue {
        value,
        tau: te,
        xi: xe,
        tau2: te2,
        xi2: xe2,
    }
}

/// `det(K_n(z_i, z_j))` for points `z = (line, site)`. Points above their
/// line's ceiling carry no particle and give 0.
pub fn correlation(k: &AztecKernel, points: &[(usize, i64)]) -> Result<f64> {
    for (i, p) in points.iter().enumerate() {
        if points[..i].contains(p) {
            return Err(Error::Input(format!("duplicate point {p:?}")));
        }
    }
    if points
        .iter()
        .any(|&(line, y)| line > 0 && y > ParticleConfiguration::window_ceiling(line))
    {
        return Ok(0.0);
    }
    let m: Vec<Vec<f64>> = points
        .iter()
        .map(|&(r, x)| {
            points
                .iter()
                .map(|&(s, y)| k.kernel(r, x, s, y))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    if m.is_empty() {
        return Ok(1.0);
    }
    numerics::det_real(&m)
}

/// Thresholds `x_1^{r_k} <= l_k` on increasing lines `r_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSpec {
    pub lines: Vec<usize>,
    pub thresholds: Vec<f64>,
}

impl GapSpec {
    pub fn new(lines: Vec<usize>, thresholds: Vec<f64>) -> Result<Self> {
        if lines.len() != thresholds.len() {
            return Err(Error::Input("lines and thresholds differ in length".into()));
        }
        if lines.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input("gap lines must be strictly increasing".into()));
        }
        Ok(Self { lines, thresholds })
    }

    /// The sites `(r_k, x)` with `l_k < x <= ceil(r_k / 2)`.
    pub fn index_set(&self, n: usize) -> Result<Vec<(usize, i64)>> {
        let mut out = Vec::new();
        for (&line, &l) in self.lines.iter().zip(&self.thresholds) {
            let floor = ParticleConfiguration::window_floor(n, line);
            if !(l >= floor as f64) {
                return Err(Error::Input(format!(
                    "threshold {l} below the window floor {floor} of line {line}"
                )));
            }
            let start = l.floor() as i64 + 1;
            out.extend((start..=ParticleConfiguration::window_ceiling(line)).map(|x| (line, x)));
        }
        Ok(out)
    }
}

/// `P[x_1^{r_k} <= l_k for all k] = det(I - K_n)` over the index set.
pub fn gap_probability(k: &AztecKernel, g: &GapSpec) -> Result<f64> {
    let set = g.index_set(k.n())?;
    for &(line, _) in &set {
        if line == 0 || line >= 2 * k.n() {
            return Err(Error::Input(format!(
                "line {line} outside 1..={}",
                2 * k.n() - 1
            )));
        }
    }
    let mut entries = vec![0.0; set.len() * set.len()];
    for (i, &(r, x)) in set.iter().enumerate() {
        for (j, &(s, y)) in set.iter().enumerate() {
            entries[i * set.len() + j] = k.kernel(r, x, s, y)?;
        }
    }
    let idx: Vec<usize> = (0..set.len()).collect();
    numerics::fredholm_det_discrete(&idx, |i, j| -entries[i * set.len() + j], DEFAULT_DET_CAP)
}

/// Unnormalised weight `prod_r det(phi_{r,r+1}(x_j^r, x_k^{r+1}))` of a
/// particle array `lines[0..=2n]`, each line holding the same number of
/// particles in decreasing order.
pub fn path_family_weight(lines: &[Vec<i64>], a: f64) -> Result<f64> {
    if lines.len() < 2 {
        return Err(Error::Input("need at least the two boundary lines".into()));
    }
    let count = lines[0].len();
    if lines.iter().any(|l| l.len() != count) {
        return Err(Error::Input(
            "every line must carry the same number of particles".into(),
        ));
    }
    let mut w = 1.0;
    for t in 0..lines.len() - 1 {
        let m: Vec<Vec<f64>> = lines[t]
            .iter()
            .map(|&u| lines[t + 1].iter().map(|&v| step(t, v - u, a)).collect())
            .collect();
        w *= numerics::det_real(&m)?;
        if w == 0.0 {
            return Ok(0.0);
        }
    }
    Ok(w)
}
