//! Contour quadrature, Gauss–Legendre grids, pivoted determinants and
//! resolution-doubling convergence checks.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// `ln k!`, exact summation below 20 and a Stirling series above.
pub fn ln_factorial(k: u64) -> f64 {
    if k < 20 {
        return (2..=k).map(|i| (i as f64).ln()).sum();
    }
    let x = k as f64;
    let x2 = x * x;
    (x + 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2)
        + 1.0 / (1260.0 * x * x2 * x2)
        - 1.0 / (1680.0 * x * x2 * x2 * x2)
}

/// `ln C(n, k)`; `-inf` outside `0 <= k <= n`.
pub fn ln_binomial(n: i64, k: i64) -> f64 {
    if k < 0 || k > n || n < 0 {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n as u64) - ln_factorial(k as u64) - ln_factorial((n - k) as u64)
}

/// `C(n, k)` as a float; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || k > n || n < 0 {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    if c < 9.0e15 {
        c.round()
    } else {
        c
    }
}

/// Default absolute tolerance for kernel entries.
pub const KERNEL_TOL: f64 = 1e-9;
/// Default absolute tolerance for Fredholm determinants.
pub const FREDHOLM_TOL: f64 = 1e-7;
/// Largest index set accepted by [`fredholm_det_discrete`].
pub const DEFAULT_DET_CAP: usize = 4096;

/// Matrices at or above this size are reduced in log-magnitude form.
const LOG_DET_THRESHOLD: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourKind {
    Circle {
        center: Complex64,
        radius: f64,
    },
    /// Upward line `Re z = abscissa`, compactified by `z = abscissa + i tan u`.
    VerticalLine {
        abscissa: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub kind: ContourKind,
    pub nodes: usize,
}

impl ContourSpec {
    pub fn circle(radius: f64, nodes: usize) -> Self {
        Self {
            kind: ContourKind::Circle {
                center: Complex64::new(0.0, 0.0),
                radius,
            },
            nodes,
        }
    }

    pub fn line(abscissa: f64, nodes: usize) -> Self {
        Self {
            kind: ContourKind::VerticalLine { abscissa },
            nodes,
        }
    }

    fn validate(&self) -> Result<()> {
        match self.kind {
            ContourKind::Circle { radius, .. } => {
                if !(radius > 0.0) || !radius.is_finite() {
                    return Err(Error::Input(format!(
                        "circle radius must be positive, got {radius}"
                    )));
                }
                if self.nodes < 8 || self.nodes % 2 != 0 {
                    return Err(Error::Input(format!(
                        "circle quadrature needs an even node count >= 8, got {}",
                        self.nodes
                    )));
                }
            }
            ContourKind::VerticalLine { abscissa } => {
                if !abscissa.is_finite() {
                    return Err(Error::Input("line abscissa must be finite".into()));
                }
                if self.nodes < 2 {
                    return Err(Error::Input(
                        "line quadrature needs at least 2 nodes".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Nodes and weights of a quadrature rule on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
}

impl QuadratureGrid {
    pub fn gauss_legendre(n: usize, lo: f64, hi: f64) -> Self {
        let (x, w) = gauss_legendre(n);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        Self {
            nodes: x.iter().map(|t| mid + half * t).collect(),
            weights: w.iter().map(|v| half * v).collect(),
            lo,
            hi,
        }
    }

    /// `panels` equal Gauss–Legendre panels of `per_panel` nodes each.
    pub fn composite(panels: usize, per_panel: usize, lo: f64, hi: f64) -> Self {
        let (x, w) = gauss_legendre(per_panel);
        let h = (hi - lo) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * per_panel);
        let mut weights = Vec::with_capacity(panels * per_panel);
        for p in 0..panels {
            let a = lo + p as f64 * h;
            for (t, v) in x.iter().zip(&w) {
                nodes.push(a + 0.5 * h * (t + 1.0));
                weights.push(0.5 * h * v);
            }
        }
        Self {
            nodes,
            weights,
            lo,
            hi,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                z
            } else {
                p1
            };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pnm1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// `(1/2πi) ∮ f(z) dz` over the contour.
pub fn integrate_contour(f: impl Fn(Complex64) -> Complex64, c: &ContourSpec) -> Result<Complex64> {
    c.validate()?;
    let mut acc = Complex64::new(0.0, 0.0);
    match c.kind {
        ContourKind::Circle { center, radius } => {
            let n = c.nodes;
            for k in 0..n {
                let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
                let z = center + radius * e;
                let v = f(z);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::Singularity(format!(
                        "integrand non-finite at z = {z}"
                    )));
                }
                acc += v * (z - center);
            }
            Ok(acc / n as f64)
        }
        ContourKind::VerticalLine { abscissa } => {
            let (u, w) = gauss_legendre(c.nodes);
            for (ui, wi) in u.iter().zip(&w) {
                let t = 0.5 * PI * ui;
                let z = Complex64::new(abscissa, t.tan());
                let v = f(z);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::Singularity(format!(
                        "integrand non-finite at z = {z}"
                    )));
                }
                let sec2 = 1.0 / (t.cos() * t.cos());
                acc += v * (0.5 * PI * wi * sec2);
            }
            // dz = i sec²u du, and 1/(2πi) leaves 1/(2π).
            Ok(acc / (2.0 * PI))
        }
    }
}

/// Doubles the node count from `c.nodes` until successive values differ by
/// less than `tol`, up to `max_nodes`.
pub fn integrate_contour_converged(
    f: impl Fn(Complex64) -> Complex64,
    c: &ContourSpec,
    tol: f64,
    max_nodes: usize,
) -> Result<Complex64> {
    let mut spec = *c;
    let mut prev = integrate_contour(&f, &spec)?;
    while spec.nodes * 2 <= max_nodes {
        spec.nodes *= 2;
        let next = integrate_contour(&f, &spec)?;
        if (next - prev).norm() < tol {
            return Ok(next);
        }
        prev = next;
    }
    let coarse = integrate_contour(
        &f,
        &ContourSpec {
            nodes: spec.nodes / 2,
            ..spec
        },
    )?;
    Err(Error::Convergence {
        what: "contour quadrature".into(),
        coarse: coarse.re,
        fine: prev.re,
    })
}

/// Determinant in sign/phase and log-magnitude form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    /// Unit-modulus phase (±1 for real matrices); zero for singular input.
    pub phase: Complex64,
    pub log_abs: f64,
}

impl LogDet {
    pub fn value(&self) -> Complex64 {
        if self.phase == Complex64::new(0.0, 0.0) {
            return self.phase;
        }
        self.phase * self.log_abs.exp()
    }
}

fn check_square<T>(m: &[Vec<T>]) -> Result<usize> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Input("matrix is not square".into()));
    }
    Ok(n)
}

/// Pivoted LU reduction to log form.
pub fn log_det_complex(m: &[Vec<Complex64>]) -> Result<LogDet> {
    let n = check_square(m)?;
    if m.iter()
        .flatten()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::Input("matrix has a non-finite entry".into()));
    }
    let mut a: Vec<Vec<Complex64>> = m.to_vec();
    let mut phase = Complex64::new(1.0, 0.0);
    let mut log_abs = 0.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap();
        if a[piv][col].norm() == 0.0 {
            return Ok(LogDet {
                phase: Complex64::new(0.0, 0.0),
                log_abs: f64::NEG_INFINITY,
            });
        }
        if piv != col {
            a.swap(piv, col);
            phase = -phase;
        }
        let p = a[col][col];
        phase *= p / p.norm();
        log_abs += p.norm().ln();
        let (top, rest) = a.split_at_mut(col + 1);
        let prow = &top[col];
        for row in rest.iter_mut() {
            let factor = row[col] / p;
            if factor.norm() == 0.0 {
                continue;
            }
            for k in col + 1..n {
                row[k] -= factor * prow[k];
            }
        }
    }
    Ok(LogDet { phase, log_abs })
}

/// Real counterpart of [`log_det_complex`].
pub fn log_det_real(m: &[Vec<f64>]) -> Result<LogDet> {
    let n = check_square(m)?;
    if m.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Input("matrix has a non-finite entry".into()));
    }
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut sign = 1.0;
    let mut log_abs = 0.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col] == 0.0 {
            return Ok(LogDet {
                phase: Complex64::new(0.0, 0.0),
                log_abs: f64::NEG_INFINITY,
            });
        }
        if piv != col {
            a.swap(piv, col);
            sign = -sign;
        }
        let p = a[col][col];
        sign *= p.signum();
        log_abs += p.abs().ln();
        let (top, rest) = a.split_at_mut(col + 1);
        let prow = &top[col];
        for row in rest.iter_mut() {
            let factor = row[col] / p;
            if factor == 0.0 {
                continue;
            }
            for k in col + 1..n {
                row[k] -= factor * prow[k];
            }
        }
    }
    Ok(LogDet {
        phase: Complex64::new(sign, 0.0),
        log_abs,
    })
}

fn direct_det_complex(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap();
        if a[piv][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        let (top, rest) = a.split_at_mut(col + 1);
        let prow = &top[col];
        for row in rest.iter_mut() {
            let factor = row[col] / p;
            for k in col + 1..n {
                row[k] -= factor * prow[k];
            }
        }
    }
    det
}

/// Determinant by partial-pivoted elimination; the empty matrix gives 1.
pub fn det_complex(m: &[Vec<Complex64>]) -> Result<Complex64> {
    let n = check_square(m)?;
    if n > LOG_DET_THRESHOLD {
        return Ok(log_det_complex(m)?.value());
    }
    if m.iter()
        .flatten()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::Input("matrix has a non-finite entry".into()));
    }
    Ok(direct_det_complex(m))
}

pub fn det_real(m: &[Vec<f64>]) -> Result<f64> {
    let d = log_det_real(m)?;
    Ok(d.value().re)
}

/// `det(I + M)` with `M_ij = kernel(s_i, s_j)` over the index set `s`.
/// Any `g` weighting belongs inside `kernel`.
pub fn fredholm_det_discrete<I: Copy>(
    index_set: &[I],
    kernel: impl Fn(I, I) -> f64,
    cap: usize,
) -> Result<f64> {
    if index_set.len() > cap {
        return Err(Error::Resource(format!(
            "index set of size {} exceeds cap {}",
            index_set.len(),
            cap
        )));
    }
    let m: Vec<Vec<f64>> = index_set
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            index_set
                .iter()
                .enumerate()
                .map(|(j, &b)| kernel(a, b) + if i == j { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    det_real(&m)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ConvergenceReport {
    pub resolutions: Vec<usize>,
    pub values: Vec<f64>,
    pub estimated_error: f64,
    pub converged: bool,
}

/// Evaluates `f` at each resolution; the error estimate is the gap between
/// the last two values.
pub fn richardson_check(
    mut f: impl FnMut(usize) -> f64,
    resolutions: &[usize],
    tol: f64,
) -> Result<ConvergenceReport> {
    if resolutions.len() < 2 {
        return Err(Error::Input("need at least two resolutions".into()));
    }
    let values: Vec<f64> = resolutions.iter().map(|&r| f(r)).collect();
    let k = values.len();
    let estimated_error = (values[k - 1] - values[k - 2]).abs();
    Ok(ConvergenceReport {
        resolutions: resolutions.to_vec(),
        values,
        estimated_error,
        converged: estimated_error < tol,
    })
}
