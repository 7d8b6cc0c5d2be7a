//! Slow but precise fixed-point arithmetic, ~115 decimal digits.
//!
//! This crate exists to provide reference values for the double-precision
//! special functions in the main library. Everything is built from integer
//! arithmetic on a `BigInt` mantissa scaled by 2^-PREC, so the only inputs
//! are the series definitions themselves: Machin's formula for pi, the
//! atanh series for logarithms, Taylor series for exp/sin/cos, and the
//! Stirling series with argument shifting for log-gamma.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Working precision in bits.
pub const PREC: u32 = 384;

/// Fixed-point real number: `value = m / 2^PREC`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fx {
    m: BigInt,
}

impl Fx {
    pub fn zero() -> Fx {
        Fx { m: BigInt::zero() }
    }

    pub fn one() -> Fx {
        Fx {
            m: BigInt::one() << PREC,
        }
    }

    pub fn from_i64(n: i64) -> Fx {
        Fx {
            m: BigInt::from(n) << PREC,
        }
    }

    /// Exact conversion: f64 is a dyadic rational.
    pub fn from_f64(x: f64) -> Fx {
        let (mant, exp) = integer_decode(x);
        let mut m = BigInt::from(mant);
        let shift = exp + PREC as i64;
        if shift >= 0 {
            m <<= shift as u32;
        } else {
            m = round_shr(m, (-shift) as u32);
        }
        Fx { m }
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Fx {
        let m = round_div(&(num << PREC), den);
        Fx { m }
    }

    pub fn from_big_rational(r: &BigRational) -> Fx {
        Fx::from_ratio(r.numer(), r.denom())
    }

    /// Parse a decimal string, e.g. "-3.14159".
    pub fn from_dec_str(s: &str) -> Fx {
        let s = s.trim();
        let (sign, digits) = match s.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1i64, s),
        };
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((a, b)) => (a, b),
            None => (digits, ""),
        };
        let mut num = BigInt::zero();
        for c in int_part.chars().chain(frac_part.chars()) {
            num = num * 10 + (c.to_digit(10).expect("decimal digit") as i64);
        }
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let v = Fx::from_ratio(&num, &den);
        if sign < 0 {
            v.neg()
        } else {
            v
        }
    }

    pub fn to_f64(&self) -> f64 {
        // split into the top 64 bits and an exponent to stay in f64 range
        let bits = self.m.bits() as i64;
        if bits <= 1000 {
            return self.m.to_f64().unwrap_or(0.0) / 2f64.powi(PREC as i32);
        }
        let shift = bits - 64;
        let top = (&self.m >> (shift as u32)).to_f64().unwrap_or(0.0);
        top * 2f64.powi((shift - PREC as i64) as i32)
    }

    pub fn add(&self, o: &Fx) -> Fx {
        Fx { m: &self.m + &o.m }
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        Fx { m: &self.m - &o.m }
    }

    pub fn neg(&self) -> Fx {
        Fx { m: -&self.m }
    }

    pub fn abs(&self) -> Fx {
        Fx { m: self.m.abs() }
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        Fx {
            m: round_shr(&self.m * &o.m, PREC),
        }
    }

    pub fn div(&self, o: &Fx) -> Fx {
        assert!(!o.m.is_zero(), "division by zero");
        Fx {
            m: round_div(&(&self.m << PREC), &o.m),
        }
    }

    pub fn mul_i64(&self, n: i64) -> Fx {
        Fx { m: &self.m * n }
    }

    pub fn div_i64(&self, n: i64) -> Fx {
        Fx {
            m: round_div(&self.m, &BigInt::from(n)),
        }
    }

    /// Multiply by 2^k (k may be negative).
    pub fn shl(&self, k: i64) -> Fx {
        if k >= 0 {
            Fx {
                m: &self.m << (k as u32),
            }
        } else {
            Fx {
                m: round_shr(self.m.clone(), (-k) as u32),
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn cmp_abs(&self, o: &Fx) -> core::cmp::Ordering {
        self.m.abs().cmp(&o.m.abs())
    }

    /// True if |self| < 2^-bits.
    pub fn smaller_than_2pow(&self, bits: u32) -> bool {
        self.m.abs() < (BigInt::one() << (PREC - bits.min(PREC)))
    }

    pub fn sqrt(&self) -> Fx {
        assert!(!self.m.is_negative(), "sqrt of negative");
        Fx {
            m: (&self.m << PREC).sqrt(),
        }
    }

    pub fn floor_i64(&self) -> i64 {
        (&self.m >> PREC).to_i64().expect("floor fits i64")
    }

    pub fn round_i64(&self) -> i64 {
        let half = BigInt::one() << (PREC - 1);
        ((&self.m + half) >> PREC).to_i64().expect("round fits i64")
    }
}

fn integer_decode(x: f64) -> (i64, i64) {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let mut exponent = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = if exponent == 0 {
        (bits & 0xf_ffff_ffff_ffff) << 1
    } else {
        (bits & 0xf_ffff_ffff_ffff) | 0x10_0000_0000_0000
    };
    exponent -= 1075;
    (sign * mantissa as i64, exponent)
}

fn round_shr(m: BigInt, k: u32) -> BigInt {
    if k == 0 {
        return m;
    }
    let half = BigInt::one() << (k - 1);
    if m.is_negative() {
        -((-m + half) >> k)
    } else {
        (m + half) >> k
    }
}

fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let (mut q, r): (BigInt, BigInt) = num.div_rem(den);
    let two_r: BigInt = &r * 2;
    if two_r.abs() >= den.abs() {
        if (num.sign() == Sign::Minus) ^ (den.sign() == Sign::Minus) {
            q -= 1;
        } else {
            q += 1;
        }
    }
    q
}

/// atan(1/n) for integer n >= 2, by the Taylor series.
fn atan_inv(n: i64) -> Fx {
    let n2 = n * n;
    let mut term = Fx::one().div_i64(n);
    let mut acc = term.clone();
    let mut k = 1i64;
    loop {
        term = term.div_i64(-n2);
        let contrib = term.div_i64(2 * k + 1);
        if contrib.is_zero() {
            break;
        }
        acc = acc.add(&contrib);
        k += 1;
    }
    acc
}

/// pi by Machin's formula.
pub fn pi() -> Fx {
    atan_inv(5).mul_i64(16).sub(&atan_inv(239).mul_i64(4))
}

/// ln 2 = 2 atanh(1/3).
pub fn ln2() -> Fx {
    let third = Fx::one().div_i64(3);
    atanh_small(&third).mul_i64(2)
}

/// atanh(t) for |t| < 1/2, by the series.
fn atanh_small(t: &Fx) -> Fx {
    let t2 = t.mul(t);
    let mut pow = t.clone();
    let mut acc = t.clone();
    let mut k = 1i64;
    loop {
        pow = pow.mul(&t2);
        let contrib = pow.div_i64(2 * k + 1);
        if contrib.is_zero() {
            break;
        }
        acc = acc.add(&contrib);
        k += 1;
    }
    acc
}

/// Natural logarithm, x > 0.
pub fn ln(x: &Fx) -> Fx {
    assert!(!x.is_negative() && !x.is_zero(), "ln of non-positive");
    // write x = m * 2^k with m in [1, 2)
    let one = Fx::one();
    let two = Fx::from_i64(2);
    let mut m = x.clone();
    let mut k = 0i64;
    while m.cmp_abs(&two) != core::cmp::Ordering::Less {
        m = m.shl(-1);
        k += 1;
    }
    while m.cmp_abs(&one) == core::cmp::Ordering::Less {
        m = m.shl(1);
        k -= 1;
    }
    // ln m = 2 atanh((m-1)/(m+1)), argument <= 1/3
    let t = m.sub(&one).div(&m.add(&one));
    let lnm = atanh_small(&t).mul_i64(2);
    lnm.add(&ln2().mul_i64(k))
}

/// atan for any real t.
pub fn atan(t: &Fx) -> Fx {
    if t.is_negative() {
        return atan(&t.neg()).neg();
    }
    if t.cmp_abs(&Fx::one()) == core::cmp::Ordering::Greater {
        // atan t = pi/2 - atan(1/t)
        return pi().shl(-1).sub(&atan(&Fx::one().div(t)));
    }
    // halve the angle until the series converges quickly
    let quarter = Fx::one().shl(-2);
    if t.cmp_abs(&quarter) == core::cmp::Ordering::Greater {
        let one = Fx::one();
        let half_arg = t.div(&one.add(&one.add(&t.mul(t)).sqrt()));
        return atan(&half_arg).mul_i64(2);
    }
    // Taylor series
    let t2 = t.mul(t);
    let mut pow = t.clone();
    let mut acc = t.clone();
    let mut k = 1i64;
    loop {
        pow = pow.mul(&t2);
        let contrib = pow.div_i64(if k % 2 == 1 { -(2 * k + 1) } else { 2 * k + 1 });
        if contrib.is_zero() {
            break;
        }
        acc = acc.add(&contrib);
        k += 1;
    }
    acc
}

pub fn atan2(y: &Fx, x: &Fx) -> Fx {
    if x.is_zero() && y.is_zero() {
        return Fx::zero();
    }
    if !x.is_negative() && !x.is_zero() {
        atan(&y.div(x))
    } else if x.is_negative() {
        if y.is_negative() {
            atan(&y.div(x)).sub(&pi())
        } else {
            atan(&y.div(x)).add(&pi())
        }
    } else if y.is_negative() {
        pi().shl(-1).neg()
    } else {
        pi().shl(-1)
    }
}

/// exp(x) by range reduction and Taylor series.
pub fn exp(x: &Fx) -> Fx {
    let l2 = ln2();
    let k = x.div(&l2).round_i64();
    let r = x.sub(&l2.mul_i64(k));
    let mut term = Fx::one();
    let mut acc = Fx::one();
    let mut n = 1i64;
    loop {
        term = term.mul(&r).div_i64(n);
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
        n += 1;
    }
    acc.shl(k)
}

/// sin and cos together, by range reduction mod pi/2.
pub fn sin_cos(x: &Fx) -> (Fx, Fx) {
    let half_pi = pi().shl(-1);
    let q = x.div(&half_pi).round_i64();
    let r = x.sub(&half_pi.mul_i64(q));
    let (s, c) = sin_cos_small(&r);
    match q.rem_euclid(4) {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    }
}

fn sin_cos_small(r: &Fx) -> (Fx, Fx) {
    let r2 = r.mul(r);
    // sin
    let mut term = r.clone();
    let mut sin = r.clone();
    let mut n = 1i64;
    loop {
        term = term.mul(&r2).div_i64(-(2 * n) * (2 * n + 1));
        if term.is_zero() {
            break;
        }
        sin = sin.add(&term);
        n += 1;
    }
    // cos
    let mut term = Fx::one();
    let mut cos = Fx::one();
    let mut n = 1i64;
    loop {
        term = term.mul(&r2).div_i64(-(2 * n - 1) * (2 * n));
        if term.is_zero() {
            break;
        }
        cos = cos.add(&term);
        n += 1;
    }
    (sin, cos)
}

/// Complex fixed-point number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFx {
    pub re: Fx,
    pub im: Fx,
}

impl CFx {
    pub fn new(re: Fx, im: Fx) -> CFx {
        CFx { re, im }
    }

    pub fn from_f64(re: f64, im: f64) -> CFx {
        CFx::new(Fx::from_f64(re), Fx::from_f64(im))
    }

    pub fn zero() -> CFx {
        CFx::new(Fx::zero(), Fx::zero())
    }

    pub fn one() -> CFx {
        CFx::new(Fx::one(), Fx::zero())
    }

    pub fn add(&self, o: &CFx) -> CFx {
        CFx::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &CFx) -> CFx {
        CFx::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> CFx {
        CFx::new(self.re.neg(), self.im.neg())
    }

    pub fn mul(&self, o: &CFx) -> CFx {
        CFx::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn div(&self, o: &CFx) -> CFx {
        let d = o.re.mul(&o.re).add(&o.im.mul(&o.im));
        CFx::new(
            self.re.mul(&o.re).add(&self.im.mul(&o.im)).div(&d),
            self.im.mul(&o.re).sub(&self.re.mul(&o.im)).div(&d),
        )
    }

    pub fn norm_sq(&self) -> Fx {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    /// Principal logarithm.
    pub fn ln(&self) -> CFx {
        let r2 = self.norm_sq();
        CFx::new(ln(&r2).shl(-1), atan2(&self.im, &self.re))
    }

    pub fn exp(&self) -> CFx {
        let e = exp(&self.re);
        let (s, c) = sin_cos(&self.im);
        CFx::new(e.mul(&c), e.mul(&s))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn dist_f64(&self, o: &CFx) -> f64 {
        self.sub(o).norm_sq().to_f64().sqrt()
    }

    pub fn abs_f64(&self) -> f64 {
        self.norm_sq().to_f64().sqrt()
    }
}

/// Exact Bernoulli numbers B_0..B_n by the defining recurrence.
pub fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        // sum_{k=0}^{m} C(m+1,k) B_k = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (k, bk) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bk;
            // C(m+1, k+1) = C(m+1,k) * (m+1-k)/(k+1)
            binom = binom * BigInt::from((m + 1 - k) as u64) / BigInt::from((k + 1) as u64);
        }
        let c = BigRational::from_integer(BigInt::from((m + 1) as u64));
        b.push(-acc / c);
    }
    b
}

/// Principal log-gamma by argument shifting and the Stirling series.
///
/// Valid away from the poles; intended for |Im z| up to a few hundred.
pub fn lgamma(z: &CFx) -> CFx {
    const SHIFT_TO: i64 = 96;
    const STIRLING_TERMS: usize = 48;
    if z.im.is_negative() {
        let conj = CFx::new(z.re.clone(), z.im.neg());
        let r = lgamma(&conj);
        return CFx::new(r.re, r.im.neg());
    }
    let mut acc = CFx::zero();
    let mut w = z.clone();
    while w.re.floor_i64() < SHIFT_TO {
        acc = acc.sub(&w.ln());
        w = w.add(&CFx::one());
    }
    // Stirling: (w - 1/2) ln w - w + ln(2 pi)/2 + sum B_2n / ((2n)(2n-1) w^(2n-1))
    let half = CFx::new(Fx::one().shl(-1), Fx::zero());
    let lnw = w.ln();
    let mut s = w.sub(&half).mul(&lnw).sub(&w);
    let two_pi = pi().mul_i64(2);
    s = s.add(&CFx::new(ln(&two_pi).shl(-1), Fx::zero()));
    let bern = bernoulli(2 * STIRLING_TERMS);
    let w2 = w.mul(&w);
    let mut wpow = w.clone(); // w^(2n-1)
    for n in 1..=STIRLING_TERMS {
        let b = &bern[2 * n];
        let denom = BigInt::from((2 * n * (2 * n - 1)) as u64);
        let coeff = Fx::from_ratio(b.numer(), &(b.denom() * denom));
        let term = CFx::new(coeff, Fx::zero()).div(&wpow);
        s = s.add(&term);
        wpow = wpow.mul(&w2);
    }
    s.add(&acc)
}
