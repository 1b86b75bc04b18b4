//! Double-double arithmetic (about 106 bits) and exact-phase roots of unity.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
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

const PI_4: Dd = Dd { hi: std::f64::consts::FRAC_PI_4, lo: 3.061616997868383e-17 };

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// `a / b` for f64 operands, correct to double-double precision.
    pub fn ratio(a: f64, b: f64) -> Self {
        Dd::from_f64(a).div_f64(b)
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let (s, t) = two_sum(self.hi, -p);
        let r = (t - e) + self.lo + s;
        let q2 = r / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

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
    #[inline]
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi));
        Dd { hi, lo }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: CDd = CDd { re: Dd::ONE, im: Dd::ZERO };

    pub fn conj(self) -> Self {
        CDd { re: self.re, im: -self.im }
    }

    pub fn scale(self, s: Dd) -> Self {
        CDd { re: self.re * s, im: self.im * s }
    }

    pub fn scale_f64(self, s: f64) -> Self {
        CDd { re: self.re.mul_f64(s), im: self.im.mul_f64(s) }
    }

    pub fn powu(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = CDd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc
    }
}

impl Add for CDd {
    type Output = CDd;
    #[inline]
    fn add(self, o: CDd) -> CDd {
        CDd { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Mul for CDd {
    type Output = CDd;
    #[inline]
    fn mul(self, o: CDd) -> CDd {
        CDd { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

/// `(cos x, sin x)` for `0 ≤ x ≤ π/4` by Taylor series.
fn cos_sin_small(x: Dd) -> (Dd, Dd) {
    let x2 = x * x;
    let mut sin = x;
    let mut cos = Dd::ONE;
    let mut term_s = x;
    let mut term_c = Dd::ONE;
    for n in 1..30u32 {
        let k = 2.0 * n as f64;
        term_c = (term_c * x2).div_f64(-(k - 1.0) * k);
        term_s = (term_s * x2).div_f64(-k * (k + 1.0));
        cos = cos + term_c;
        sin = sin + term_s;
        if term_c.hi.abs() < 1e-34 && term_s.hi.abs() < 1e-34 {
            break;
        }
    }
    (cos, sin)
}

/// `e^{2πi k/L}` to double-double accuracy; symmetries of the octants are
/// applied on exact integers.
pub fn root_of_unity(k: u64, l: u64) -> CDd {
    let k = k % l;
    let k8 = 8 * k as u128;
    let l = l as u128;
    let oct = (k8 / l) as u64;
    let (c, s) = if oct.is_multiple_of(2) {
        let num = (k8 - oct as u128 * l) as f64;
        cos_sin_small(PI_4 * Dd::ratio(num, l as f64))
    } else {
        let num = ((oct as u128 + 1) * l - k8) as f64;
        let (c, s) = cos_sin_small(PI_4 * Dd::ratio(num, l as f64));
        (s, c)
    };
    let (re, im) = match oct / 2 {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    };
    CDd { re, im }
}
