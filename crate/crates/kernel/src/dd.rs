//! Double-double arithmetic, enough for contour quadrature whose integrand
//! peaks many orders of magnitude above the result.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[cfg(test)]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::from_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::from_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ONE: CDd = CDd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    pub fn real(x: Dd) -> Self {
        CDd {
            re: x,
            im: Dd::ZERO,
        }
    }

    pub fn scale(self, k: Dd) -> Self {
        CDd {
            re: self.re * k,
            im: self.im * k,
        }
    }

    pub fn recip(self) -> Self {
        let d = self.re * self.re + self.im * self.im;
        CDd {
            re: self.re / d,
            im: -(self.im / d),
        }
    }

    pub fn powi(self, k: i64) -> Self {
        let mut base = if k < 0 { self.recip() } else { self };
        let mut e = k.unsigned_abs();
        let mut acc = CDd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `exp(i theta)` by Taylor series; intended for `|theta| <= pi / 4`.
    pub fn cis(theta: Dd) -> Self {
        let mut term = CDd::ONE;
        let mut sum = CDd::ONE;
        let it = CDd {
            re: Dd::ZERO,
            im: theta,
        };
        for k in 1..40 {
            term = (term * it).scale(Dd::ONE / Dd::from_f64(k as f64));
            sum = sum + term;
            if term.re.hi.abs() + term.im.hi.abs() < 1e-34 {
                break;
            }
        }
        sum
    }

    #[cfg(test)]
    pub fn norm_f64(self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
}

impl Add for CDd {
    type Output = CDd;
    fn add(self, b: CDd) -> CDd {
        CDd {
            re: self.re + b.re,
            im: self.im + b.im,
        }
    }
}

impl Sub for CDd {
    type Output = CDd;
    fn sub(self, b: CDd) -> CDd {
        CDd {
            re: self.re - b.re,
            im: self.im - b.im,
        }
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, b: CDd) -> CDd {
        CDd {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

impl Div for CDd {
    type Output = CDd;
    fn div(self, b: CDd) -> CDd {
        self * b.recip()
    }
}

/// The `n` roots of unity in double-double precision, built in blocks of
/// 64 so that no long product chain accumulates.
pub(crate) fn roots_of_unity(n: usize) -> Vec<CDd> {
    let step = (Dd::PI + Dd::PI) / Dd::from_f64(n as f64);
    let base = CDd::cis(step);
    let block = 64.min(n);
    let mut small = Vec::with_capacity(block);
    let mut cur = CDd::ONE;
    for _ in 0..block {
        small.push(cur);
        cur = cur * base;
    }
    let mut out = Vec::with_capacity(n);
    let mut anchor = CDd::ONE;
    let jump = if block < n {
        anchor_step(step, block)
    } else {
        CDd::ONE
    };
    while out.len() < n {
        for s in &small {
            if out.len() == n {
                break;
            }
            out.push(anchor * *s);
        }
        anchor = anchor * jump;
    }
    out
}

fn anchor_step(step: Dd, block: usize) -> CDd {
    let theta = step * Dd::from_f64(block as f64);
    // Reduce by halving so the series argument stays small.
    let mut halvings = 0;
    let mut t = theta;
    while t.hi.abs() > 0.5 {
        t = t * Dd::from_f64(0.5);
        halvings += 1;
    }
    let mut c = CDd::cis(t);
    for _ in 0..halvings {
        c = c * c;
    }
    c
}
