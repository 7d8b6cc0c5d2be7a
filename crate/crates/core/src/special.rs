//! Complex log-gamma, stable gamma quotients, the standard bump function and
//! its Mellin transform. Everything downstream (Whittaker functions, residue
//! series, archimedean L-factors) is built on these.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
// required for float methods in no_std builds; redundant when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::C64;

/// Stirling coefficients B_{2n} / ((2n)(2n-1)), n = 1..12, as exact ratios.
const STIRLING: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
    77683.0 / 5796.0,
    -236364091.0 / 1506960.0,
];

const LN_2PI_HALF: f64 = 0.918938533204672741780329736405617639861; // ln(2 pi)/2

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecialFnError {
    /// Gamma argument at a non-positive integer.
    Pole,
    /// A pole in a gamma quotient without a matching pole to cancel it.
    UncancelledPole,
}

impl fmt::Display for SpecialFnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialFnError::Pole => write!(f, "gamma argument at a non-positive integer"),
            SpecialFnError::UncancelledPole => {
                write!(f, "gamma quotient has an uncancelled pole")
            }
        }
    }
}

fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Principal-branch log-gamma.
///
/// Continuous on the plane cut along the negative real axis, real on (0, oo),
/// and `exp(log_gamma(z)) = Gamma(z)`. Uses the Stirling series after raising
/// the argument, and the reflection formula for `Re z < 1/2`.
pub fn log_gamma(z: C64) -> Result<C64, SpecialFnError> {
    if is_nonpositive_integer(z) {
        return Err(SpecialFnError::Pole);
    }
    Ok(log_gamma_unchecked(z))
}

fn log_gamma_unchecked(z: C64) -> C64 {
    if z.im < 0.0 {
        return log_gamma_unchecked(z.conj()).conj();
    }
    if z.re < 0.5 {
        // reflection: log G(z) = ln pi - log sin(pi z) - log G(1 - z)
        return C64::new(PI.ln(), 0.0) - log_sin_pi_upper(z) - log_gamma_unchecked(C64::new(1.0, 0.0) - z);
    }
    let mut shift = C64::new(0.0, 0.0);
    let mut w = z;
    while w.norm_sqr() < 100.0 {
        shift -= w.ln();
        w += 1.0;
    }
    let lnw = w.ln();
    let mut acc = (w - 0.5) * lnw - w + LN_2PI_HALF;
    let w2 = w * w;
    let mut wpow = w;
    for c in STIRLING {
        acc += c / wpow;
        wpow *= w2;
    }
    acc + shift
}

/// log sin(pi z) on the branch that keeps the reflection formula continuous,
/// for Im z >= 0.
fn log_sin_pi_upper(z: C64) -> C64 {
    // sin(pi z) = -exp(-i pi z) (1 - exp(2 pi i z)) / (2i)
    let i = C64::new(0.0, 1.0);
    let q = (2.0 * PI * i * z).exp(); // |q| <= 1 for Im z >= 0
    -i * PI * z - C64::new(2_f64.ln(), 0.0) + i * (PI / 2.0) + (C64::new(1.0, 0.0) - q).ln()
}

/// Gamma(z) via `log_gamma`.
pub fn gamma(z: C64) -> Result<C64, SpecialFnError> {
    log_gamma(z).map(|l| l.exp())
}

/// Stable product of gamma quotients in log space:
/// `prod Gamma(num_i) / prod Gamma(den_j)`.
///
/// Poles are allowed only when they cancel pairwise between the numerator
/// and denominator lists; each such pair contributes its finite limit.
pub fn gamma_ratio(numerators: &[C64], denominators: &[C64]) -> Result<C64, SpecialFnError> {
    let mut log_acc = C64::new(0.0, 0.0);
    let mut num_poles: Vec<f64> = Vec::new();
    let mut den_poles: Vec<f64> = Vec::new();
    for &z in numerators {
        if is_nonpositive_integer(z) {
            num_poles.push(-z.re);
        } else {
            log_acc += log_gamma_unchecked(z);
        }
    }
    for &z in denominators {
        if is_nonpositive_integer(z) {
            den_poles.push(-z.re);
        } else {
            log_acc -= log_gamma_unchecked(z);
        }
    }
    if num_poles.len() != den_poles.len() {
        return Err(SpecialFnError::UncancelledPole);
    }
    let mut ratio = C64::new(1.0, 0.0);
    for (&a, &b) in num_poles.iter().zip(den_poles.iter()) {
        // lim Gamma(-a+e)/Gamma(-b+e) = (-1)^(a-b) b!/a!
        let sign = if ((a - b) as i64) % 2 == 0 { 1.0 } else { -1.0 };
        let lf = ln_factorial(b as u64) - ln_factorial(a as u64);
        ratio *= sign * lf.exp();
    }
    Ok(ratio * log_acc.exp())
}

fn ln_factorial(n: u64) -> f64 {
    let mut acc = 0.0;
    for k in 2..=n {
        acc += (k as f64).ln();
    }
    acc
}

/// A smooth bump with compact support.
#[derive(Debug, Clone, PartialEq)]
pub enum BumpFunction {
    /// `exp(4 - 1/((u-1)(2-u)))` mapped onto the support interval; peak value 1.
    StandardExp { support: (f64, f64) },
    /// User-supplied piecewise polynomial on `knots[i]..knots[i+1]`,
    /// clamped to [0, 1]. Smoothness is the caller's responsibility.
    Piecewise { knots: Vec<f64>, polys: Vec<Vec<f64>> },
}

impl Default for BumpFunction {
    fn default() -> Self {
        BumpFunction::StandardExp { support: (1.0, 2.0) }
    }
}

impl BumpFunction {
    pub fn standard() -> Self {
        Self::default()
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            BumpFunction::StandardExp { support } => *support,
            BumpFunction::Piecewise { knots, .. } => (knots[0], knots[knots.len() - 1]),
        }
    }

    pub fn eval(&self, y: f64) -> f64 {
        match self {
            BumpFunction::StandardExp { support: (a, b) } => {
                if y <= *a || y >= *b {
                    return 0.0;
                }
                let u = 1.0 + (y - a) / (b - a);
                (4.0 - 1.0 / ((u - 1.0) * (2.0 - u))).exp()
            }
            BumpFunction::Piecewise { knots, polys } => {
                if y <= knots[0] || y >= knots[knots.len() - 1] {
                    return 0.0;
                }
                let mut i = 0;
                while i + 2 < knots.len() && y >= knots[i + 1] {
                    i += 1;
                }
                let mut acc = 0.0;
                for &c in polys[i].iter().rev() {
                    acc = acc * (y - knots[i]) + c;
                }
                acc.clamp(0.0, 1.0)
            }
        }
    }
}

/// A Mellin-transform value together with a quadrature-tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinValue {
    pub argument: C64,
    pub value: C64,
    pub truncation_error: f64,
}

/// Mellin transform `f^(s) = int_0^oo f(y) y^s dy/y`.
///
/// The integrand vanishes to all orders at the support endpoints, so the
/// composite midpoint rule converges superalgebraically; the node count is
/// scaled with |Im s| to resolve the oscillation and the error is estimated
/// by comparing against the half-resolution rule.
pub fn mellin_f(f: &BumpFunction, s: C64) -> MellinValue {
    let n = 128 + 2 * (s.im.abs().ceil() as usize);
    let coarse = mellin_midpoint(f, s, n / 2);
    let fine = mellin_midpoint(f, s, n);
    MellinValue {
        argument: s,
        value: fine,
        truncation_error: (fine - coarse).norm(),
    }
}

fn mellin_midpoint(f: &BumpFunction, s: C64, n: usize) -> C64 {
    let (a, b) = f.support();
    let h = (b - a) / n as f64;
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..n {
        let y = a + (j as f64 + 0.5) * h;
        let w = f.eval(y);
        if w != 0.0 {
            // y^(s-1) = exp((s-1) ln y)
            acc += w * ((s - 1.0) * y.ln()).exp();
        }
    }
    acc * h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn log_gamma_trivial_values() {
        let lg1 = log_gamma(c(1.0, 0.0)).unwrap();
        assert!(lg1.norm() < 1e-14);
        let lg_half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((lg_half.re - PI.sqrt().ln()).abs() < 1e-14);
        assert!(lg_half.im.abs() < 1e-14);
    }

    #[test]
    fn log_gamma_pole_error() {
        assert_eq!(log_gamma(c(0.0, 0.0)), Err(SpecialFnError::Pole));
        assert_eq!(log_gamma(c(-3.0, 0.0)), Err(SpecialFnError::Pole));
    }

    #[test]
    fn log_gamma_recursion_on_strip() {
        // log G(z+1) = log G(z) + log z on a deterministic pseudo-random grid
        let rng = crate::rng::CounterRng::new(7);
        for k in 0..100 {
            let re = -10.0 + 20.0 * rng.uniform(2 * k);
            let mut im = -100.0 + 200.0 * rng.uniform(2 * k + 1);
            if im.abs() < 1e-3 {
                im += 0.5; // stay off the real axis where the cut lives
            }
            let z = c(re, im);
            let lhs = log_gamma(z + 1.0).unwrap();
            let rhs = log_gamma(z).unwrap() + z.ln();
            assert!(
                (lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()),
                "recursion failed at z = {z}"
            );
        }
    }

    #[test]
    fn gamma_ratio_trivial() {
        let z = c(5.0, 0.0);
        let r = gamma_ratio(&[z + 1.0], &[z]).unwrap();
        assert!((r - c(5.0, 0.0)).norm() < 1e-12);
        let r = gamma_ratio(&[c(0.5, 0.0), c(0.5, 0.0)], &[c(1.0, 0.0)]).unwrap();
        assert!((r - c(PI, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gamma_ratio_cancels_poles() {
        // Gamma(-2+e)/Gamma(-4+e) -> (-1)^2 * 4!/2! = 12... with the pairing
        // convention lim Gamma(-a+e)/Gamma(-b+e) = (-1)^(a-b) b!/a!
        let r = gamma_ratio(&[c(-2.0, 0.0)], &[c(-4.0, 0.0)]).unwrap();
        assert!((r - c(12.0, 0.0)).norm() < 1e-10);
        assert_eq!(
            gamma_ratio(&[c(-2.0, 0.0)], &[c(1.0, 0.0)]),
            Err(SpecialFnError::UncancelledPole)
        );
    }

    #[test]
    fn gamma_ratio_matches_composition() {
        let num = c(0.5, 20.0);
        let den = c(0.5, 10.0);
        let direct = (log_gamma(num).unwrap() - log_gamma(den).unwrap()).exp();
        let ratio = gamma_ratio(&[num], &[den]).unwrap();
        assert!((direct - ratio).norm() <= 1e-12 * direct.norm());
    }

    #[test]
    fn bump_shape() {
        let f = BumpFunction::standard();
        assert_eq!(f.eval(0.99), 0.0);
        assert_eq!(f.eval(2.01), 0.0);
        assert!((f.eval(1.5) - 1.0).abs() < 1e-15);
        for k in 1..20 {
            let y = 1.0 + 0.05 * k as f64;
            let v = f.eval(y);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn mellin_real_for_real_argument() {
        let f = BumpFunction::standard();
        let v0 = mellin_f(&f, c(0.0, 0.0));
        assert!(v0.value.re > 0.0);
        assert!(v0.value.im.abs() < 1e-15);
        let v = mellin_f(&f, c(2.5, 0.0));
        assert!(v.value.im.abs() < 1e-15);
        assert!(v.truncation_error < 1e-12);
    }

    #[test]
    fn mellin_decay_in_t() {
        // the bump transform decays roughly like exp(-c sqrt t): about
        // 400x between t = 10 and t = 60
        let f = BumpFunction::standard();
        let near = mellin_f(&f, c(0.0, 10.0)).value.norm();
        let far = mellin_f(&f, c(0.0, 60.0)).value.norm();
        assert!(far < near * 1e-2);
    }
}
