//! Local statistics at the center of the diamond.
//!
//! `P` is the inverse Kasteleyn kernel of the full-plane square lattice,
//! evaluated at integer offsets `x + iy`; it vanishes unless `x + y` is odd.
//! Green particles sit at `v = u + 1/2 + i(-u + 2l + 1/2)`, i.e. on the black
//! square with lower-left corner `(u, 2l - u)`, and mark a domino whose
//! lower-left square is that one. Their plane correlations are
//! `|det R(v_j - v_k)|` with `R(v) = P(v - 1) + iP(v - i)`; in the order-`n`
//! diamond they are determinants of the extended kernel with `a = 1`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended_kernel::{correlation, AztecKernel};
use crate::numerics::{det_complex, gauss_legendre};
use crate::tiling::AztecDiamond;

/// Offsets with `|x|, |y| <= MEMO_RADIUS` are served from a precomputed table.
pub const MEMO_RADIUS: i64 = 64;

const ARC_TOL: f64 = 1e-13;
const MAX_NODES: usize = 1 << 14;
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeVector {
    pub x: i64,
    pub y: i64,
}

impl LatticeVector {
    pub fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }
}

/// Distinct green sites given by their `(u, l)` labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreenSiteSet {
    sites: Vec<(i64, i64)>,
}

impl GreenSiteSet {
    pub fn new(sites: Vec<(i64, i64)>) -> Result<Self> {
        for (i, s) in sites.iter().enumerate() {
            if sites[..i].contains(s) {
                return Err(Error::Input(format!("duplicate green site {s:?}")));
            }
        }
        Ok(Self { sites })
    }

    pub fn sites(&self) -> &[(i64, i64)] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Lower-left corner `(m, l)` of the black square carrying site `j`.
    pub fn square(&self, j: usize) -> (i64, i64) {
        let (u, l) = self.sites[j];
        (u, 2 * l - u)
    }

    /// `v_j - v_k` as a lattice vector.
    pub fn difference(&self, j: usize, k: usize) -> LatticeVector {
        let (uj, lj) = self.sites[j];
        let (uk, lk) = self.sites[k];
        LatticeVector::new(uj - uk, uk - uj + 2 * (lj - lk))
    }
}

type Rule = Arc<(Vec<f64>, Vec<f64>)>;

fn rule(nodes: usize) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(nodes)
        .or_insert_with(|| Arc::new(gauss_legendre(nodes)))
        .clone()
}

fn gl_integral(lo: f64, hi: f64, nodes: usize, f: impl Fn(f64) -> Complex64) -> Complex64 {
    let r = rule(nodes);
    let (x, w) = (&r.0, &r.1);
    let (half, mid) = (0.5 * (hi - lo), 0.5 * (hi + lo));
    x.iter()
        .zip(w)
        .map(|(t, v)| f(mid + half * t) * (half * v))
        .sum()
}

/// Doubles the node count until two successive values agree to `tol`.
fn converged(
    what: &str,
    start: usize,
    tol: f64,
    f: impl Fn(usize) -> Complex64,
) -> Result<Complex64> {
    let mut nodes = start;
    let mut prev = f(nodes);
    while nodes < MAX_NODES {
        nodes *= 2;
        let next = f(nodes);
        if (next - prev).norm() <= tol * next.norm().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    let fine = f(nodes);
    Err(Error::Convergence {
        what: what.into(),
        coarse: prev.norm(),
        fine: fine.norm(),
    })
}

fn start_nodes(v: LatticeVector) -> usize {
    (64 + 2 * (v.x.unsigned_abs() + v.y.unsigned_abs()) as usize).next_power_of_two()
}

/// The double Fourier integral for `P`, nested: Gauss–Legendre in `theta`
/// on `(-pi, 0)` and `(0, pi)`, periodic trapezoid in `phi`. Nodes never
/// touch the singular lines `sin(theta) = 0`, and for `sin(theta) != 0` the
/// inner integrand is analytic in a strip of half-width `asinh|sin(theta)|`.
pub fn p_kernel_double(v: LatticeVector) -> Result<Complex64> {
    let (x, y) = (v.x as f64, v.y as f64);
    let inner = |theta: f64| -> Complex64 {
        let s = theta.sin();
        let strip = s.abs().asinh();
        let m = (v.y.unsigned_abs() as f64 + 40.0 / strip).ceil().max(64.0) as usize;
        let h = 2.0 * PI / m as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let phi = -PI + j as f64 * h;
            acc += Complex64::from_polar(1.0, -y * phi) / Complex64::new(2.0 * phi.sin(), 2.0 * s);
        }
        acc * h * Complex64::from_polar(1.0, x * theta)
    };
    let outer = |nodes: usize| {
        (gl_integral(-PI, 0.0, nodes, inner) + gl_integral(0.0, PI, nodes, inner)) / (4.0 * PI * PI)
    };
    converged(
        "double integral for P",
        start_nodes(v).min(128),
        1e-11,
        outer,
    )
}

fn check_arc_domain(v: LatticeVector) -> Result<()> {
    let d = v.x + v.y;
    if d < 1 || d % 2 == 0 {
        return Err(Error::Input(format!(
            "arc formula needs x + y odd and >= 1, got ({}, {})",
            v.x, v.y
        )));
    }
    Ok(())
}

/// The half-circle integral for `P` with a fixed number of nodes.
pub fn p_kernel_arc_nodes(v: LatticeVector, nodes: usize) -> Result<Complex64> {
    check_arc_domain(v)?;
    let e0 = (v.x - v.y + 1) / 2;
    let e1 = (v.x + v.y - 1) / 2;
    let f = |t: f64| {
        let w = Complex64::from_polar(1.0, t);
        w.powi(e0 as i32) * (w - 1.0).powi(e1 as i32) / (w + 1.0).powi(e1 as i32 + 1)
    };
    Ok(
        I.powi((v.x - 1).rem_euclid(4) as i32) * gl_integral(-0.5 * PI, 0.5 * PI, nodes, f)
            / (2.0 * PI),
    )
}

/// `P` from the arc integral over the right half of the unit circle;
/// defined for `x + y` odd and positive.
pub fn p_kernel_arc(v: LatticeVector) -> Result<Complex64> {
    check_arc_domain(v)?;
    converged("arc integral for P", start_nodes(v), ARC_TOL, |m| {
        p_kernel_arc_nodes(v, m).unwrap()
    })
}

/// `P` for every offset from a single `theta` integral, after the inner
/// integral has been done by residues.
fn p_kernel_theta(v: LatticeVector) -> Result<Complex64> {
    if (v.x + v.y).rem_euclid(2) == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let k = (v.x + v.y - 1).div_euclid(2);
    let x = v.x as f64;
    let value = |nodes: usize| {
        if k >= 0 {
            let f = |t: f64| {
                let (p, q) = (
                    Complex64::from_polar(1.0, t) + I,
                    Complex64::from_polar(1.0, -t) + I,
                );
                Complex64::from_polar(1.0, x * t) * q.powi(k as i32) / p.powi(k as i32 + 1)
            };
            gl_integral(0.0, PI, nodes, f) / (2.0 * PI)
        } else {
            let m = -k as i32;
            let f = |t: f64| {
                let (p, q) = (
                    Complex64::from_polar(1.0, t) + I,
                    Complex64::from_polar(1.0, -t) + I,
                );
                Complex64::from_polar(1.0, x * t) * p.powi(m - 1) / q.powi(m)
            };
            -gl_integral(-PI, 0.0, nodes, f) / (2.0 * PI)
        }
    };
    converged("theta integral for P", start_nodes(v), ARC_TOL, value)
}

fn memo() -> &'static [Complex64] {
    static TABLE: OnceLock<Vec<Complex64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let side = 2 * MEMO_RADIUS + 1;
        let mut out = Vec::with_capacity((side * side) as usize);
        for x in -MEMO_RADIUS..=MEMO_RADIUS {
            for y in -MEMO_RADIUS..=MEMO_RADIUS {
                out.push(
                    p_kernel_theta(LatticeVector::new(x, y))
                        .expect("P converges on the memo range"),
                );
            }
        }
        out
    })
}

/// `P(x + iy)` for any lattice offset.
pub fn p_kernel(v: LatticeVector) -> Result<Complex64> {
    if v.x.abs() <= MEMO_RADIUS && v.y.abs() <= MEMO_RADIUS {
        let side = 2 * MEMO_RADIUS + 1;
        return Ok(memo()[((v.x + MEMO_RADIUS) * side + v.y + MEMO_RADIUS) as usize]);
    }
    p_kernel_theta(v)
}

/// `R(v) = P(v - 1) + i P(v - i)`.
pub fn r_kernel(v: LatticeVector) -> Result<Complex64> {
    Ok(p_kernel(LatticeVector::new(v.x - 1, v.y))?
        + I * p_kernel(LatticeVector::new(v.x, v.y - 1))?)
}

/// `det R(v_j - v_k)`; real up to rounding.
pub fn green_det_plane(sites: &GreenSiteSet) -> Result<Complex64> {
    let m = sites.len();
    if m == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mat = (0..m)
        .map(|j| {
            (0..m)
                .map(|k| r_kernel(sites.difference(j, k)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    det_complex(&mat)
}

/// Probability of green particles at all `sites` under the maximal-entropy
/// plane measure.
pub fn green_prob_plane(sites: &GreenSiteSet) -> Result<f64> {
    Ok(green_det_plane(sites)?.norm())
}

/// `(line, site)` of the extended kernel carrying green site `(u, l)` in the
/// order-`n` diamond, `n` odd.
pub fn aztec_point(u: i64, l: i64, n: usize) -> Result<(usize, i64)> {
    if n % 2 == 0 {
        return Err(Error::Input(format!(
            "green sites are labelled for odd orders, got {n}"
        )));
    }
    let line = 2 * l + n as i64 + 1;
    if line < 1 || line >= 2 * n as i64 || !(AztecDiamond { n }).contains(u, 2 * l - u) {
        return Err(Error::Input(format!(
            "site ({u}, {l}) lies outside the order-{n} diamond"
        )));
    }
    Ok((line as usize, 2 * l - u + 1))
}

/// Green-particle probability in a diamond whose kernel (`a = 1`, odd order)
/// is already built.
pub fn green_prob_aztec_with(k: &AztecKernel, sites: &GreenSiteSet) -> Result<f64> {
    if k.a() != 1.0 {
        return Err(Error::Input(
            "green-site statistics use the uniform weight a = 1".into(),
        ));
    }
    let pts = sites
        .sites()
        .iter()
        .map(|&(u, l)| aztec_point(u, l, k.n()))
        .collect::<Result<Vec<_>>>()?;
    correlation(k, &pts)
}

/// Green-particle probability in the uniformly random order-`n` diamond.
pub fn green_prob_aztec(sites: &GreenSiteSet, n: usize) -> Result<f64> {
    if sites.is_empty() {
        return Ok(1.0);
    }
    if n % 2 == 0 {
        return Err(Error::Input(format!(
            "green sites are labelled for odd orders, got {n}"
        )));
    }
    green_prob_aztec_with(&AztecKernel::new(n, 1.0)?, sites)
}

/// Large-`n` limit of the extended kernel between green sites `j` and `k`:
/// `(1/2pi i) int w^{u_j - u_k} ((1 - w)/(w(1 + w)))^{l_j - l_k} dw/w` over the
/// right half circle when `l_j >= l_k`, and minus the same integrand over
/// the left half circle when `l_j < l_k`.
pub fn limiting_kernel(uj: i64, lj: i64, uk: i64, lk: i64) -> Result<Complex64> {
    let p = (uj - uk) as i32;
    let q = (lj - lk) as i32;
    let f = |t: f64| {
        let w = Complex64::from_polar(1.0, t);
        w.powi(p) * ((1.0 - w) / (w * (1.0 + w))).powi(q)
    };
    let start = (64 + 4 * (p.unsigned_abs() + q.unsigned_abs()) as usize).next_power_of_two();
    if q >= 0 {
        converged("limiting kernel", start, ARC_TOL, |m| {
            gl_integral(-0.5 * PI, 0.5 * PI, m, f) / (2.0 * PI)
        })
    } else {
        converged("limiting kernel", start, ARC_TOL, |m| {
            -gl_integral(0.5 * PI, 1.5 * PI, m, f) / (2.0 * PI)
        })
    }
}
