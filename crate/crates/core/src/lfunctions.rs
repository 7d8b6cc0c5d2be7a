//! Local L-factors and the Satake dictionary, power sums of Satake
//! parameters through Fourier coefficients, archimedean factors, analytic
//! conductors, Katz–Sarnak density kernels, and the prime sums of the
//! explicit formula.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
// required for float methods in no_std builds; redundant when std is linked
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use crate::geometry::{rat_i, Rat};
use crate::special::{log_gamma, SpecialFnError};
use crate::spectral::SpectralParameter;
use crate::C64;

/// The two dual-group representations carrying L-functions here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LKind {
    /// degree 4
    Spin,
    /// degree 5
    Std,
}

/// Exact Satake dictionary: X = a + 1/a + b + 1/b,
/// Y = (a + 1/a)(b + 1/b) + 1.
pub fn satake_to_xy(alpha: &Rat, beta: &Rat) -> (Rat, Rat) {
    assert!(!alpha.is_zero() && !beta.is_zero());
    let sa = alpha + Rat::one() / alpha;
    let sb = beta + Rat::one() / beta;
    (&sa + &sb, &sa * &sb + Rat::one())
}

/// Same dictionary over complex parameters.
pub fn satake_to_xy_c(alpha: C64, beta: C64) -> (C64, C64) {
    let one = C64::new(1.0, 0.0);
    let sa = alpha + one / alpha;
    let sb = beta + one / beta;
    (sa + sb, sa * sb + one)
}

/// A local Euler factor as the exact coefficient vector of its reciprocal
/// polynomial in p^-s (degree 4 for Spin, 5 for Std).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFactor {
    pub kind: LKind,
    pub coefficients: Vec<Rat>,
}

/// The displayed polynomial coefficients at given (X, Y).
pub fn local_factor(kind: LKind, x: &Rat, y: &Rat) -> LocalFactor {
    let coefficients = match kind {
        LKind::Spin => vec![
            Rat::one(),
            -x.clone(),
            y + Rat::one(),
            -x.clone(),
            Rat::one(),
        ],
        LKind::Std => {
            let mid = x * x - y - Rat::one();
            vec![
                Rat::one(),
                -y.clone(),
                mid.clone(),
                -mid,
                y.clone(),
                -Rat::one(),
            ]
        }
    };
    LocalFactor { kind, coefficients }
}

/// The Satake root multiset of a local factor.
pub fn satake_roots(kind: LKind, alpha: &Rat, beta: &Rat) -> Vec<Rat> {
    match kind {
        LKind::Spin => vec![
            alpha.clone(),
            Rat::one() / alpha,
            beta.clone(),
            Rat::one() / beta,
        ],
        LKind::Std => vec![
            alpha * beta,
            alpha / beta,
            beta / alpha,
            Rat::one() / (alpha * beta),
            Rat::one(),
        ],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PowerSumError {
    /// k must be >= 1
    BadIndex,
}

impl fmt::Display for PowerSumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "power-sum index must be at least 1")
    }
}

/// Power sums of the Satake parameters, written as exact linear
/// combinations of Fourier coefficients A(p^i, p^j): the accessor supplies
/// those coefficients.
pub fn power_sum<F>(kind: LKind, k: u32, a: F) -> Result<Rat, PowerSumError>
where
    F: Fn(u32, u32) -> Rat,
{
    if k == 0 {
        return Err(PowerSumError::BadIndex);
    }
    let one = Rat::one();
    Ok(match kind {
        LKind::Spin => match k {
            1 => a(0, 1),
            2 => a(0, 2) - a(1, 0) - &one,
            3 => a(0, 3) - a(1, 1),
            _ => a(0, k) - a(1, k - 2) + a(1, k - 4) - a(0, k - 4),
        },
        LKind::Std => match k {
            1 => a(1, 0),
            2 => a(2, 0) - a(0, 2) + &one,
            _ => a(k, 0) - a(k - 2, 2) + a(k - 3, 2) - a(k - 3, 0) + &one,
        },
    })
}

/// Power sums from the local-factor coefficients by Newton's identities:
/// p_k = sum_{i<k} (-1)^(i-1) e_i p_{k-i} + (-1)^(k-1) k e_k. Independent of
/// the Fourier-coefficient route.
pub fn power_sums_newton(factor: &LocalFactor, k_max: u32) -> Vec<Rat> {
    // reciprocal polynomial prod(1 - u_i T) = sum (-1)^i e_i T^i
    let deg = factor.coefficients.len() - 1;
    let e: Vec<Rat> = (0..=deg)
        .map(|i| {
            let sign = if i % 2 == 0 { Rat::one() } else { -Rat::one() };
            sign * &factor.coefficients[i]
        })
        .collect();
    let mut p: Vec<Rat> = vec![Rat::zero(); k_max as usize + 1];
    for k in 1..=k_max as usize {
        let mut acc = Rat::zero();
        for i in 1..k.min(deg + 1) {
            let sign = if (i - 1) % 2 == 0 { Rat::one() } else { -Rat::one() };
            acc += sign * &e[i] * &p[k - i];
        }
        if k <= deg {
            let sign = if (k - 1) % 2 == 0 { Rat::one() } else { -Rat::one() };
            acc += sign * rat_i(k as i64) * &e[k];
        }
        p[k] = acc;
    }
    p
}

/// Archimedean factor: the product of Gamma_R(s + shift) over the displayed
/// shifts, Gamma_R(s) = pi^(-s/2) Gamma(s/2).
pub fn archimedean_factor(
    kind: LKind,
    s: C64,
    mu: &SpectralParameter,
) -> Result<C64, SpecialFnError> {
    let shifts: Vec<C64> = match kind {
        LKind::Spin => vec![mu.mu1, -mu.mu1, mu.mu2, -mu.mu2],
        LKind::Std => vec![
            C64::new(1.0, 0.0),
            mu.mu1 + mu.mu2,
            mu.mu1 - mu.mu2,
            mu.mu2 - mu.mu1,
            -mu.mu1 - mu.mu2,
        ],
    };
    let mut log_acc = C64::new(0.0, 0.0);
    for sh in shifts {
        let z = s + sh;
        log_acc += log_gamma(z / 2.0)? - z / 2.0 * PI.ln();
    }
    Ok(log_acc.exp())
}

/// Analytic-conductor proxy: Spin (1+|mu1|)^2 (1+|mu2|)^2,
/// Std (1+|mu1+mu2|)^2 (1+|mu1-mu2|)^2.
pub fn conductor_proxy(kind: LKind, mu: &SpectralParameter) -> f64 {
    match kind {
        LKind::Spin => ((1.0 + mu.mu1.norm()) * (1.0 + mu.mu2.norm())).powi(2),
        LKind::Std => {
            ((1.0 + (mu.mu1 + mu.mu2).norm()) * (1.0 + (mu.mu1 - mu.mu2).norm())).powi(2)
        }
    }
}

/// The classical symmetry-type kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryGroup {
    U,
    SOEven,
    SOOdd,
    O,
    Sp,
}

/// Smooth part of W_G at x, and the weight of its atom at 0.
pub fn density_kernel(group: SymmetryGroup, x: f64) -> (f64, f64) {
    let sinc2 = if x == 0.0 {
        1.0
    } else {
        (2.0 * PI * x).sin() / (2.0 * PI * x)
    };
    match group {
        SymmetryGroup::U => (1.0, 0.0),
        SymmetryGroup::SOEven => (1.0 + sinc2, 0.0),
        SymmetryGroup::SOOdd => (1.0 - sinc2, 1.0),
        SymmetryGroup::O => (1.0, 0.5),
        SymmetryGroup::Sp => (1.0 - sinc2, 0.0),
    }
}

/// An even test function given through its compactly supported piecewise
/// polynomial Fourier transform on [-delta, delta].
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSpec {
    pub delta: f64,
    /// pieces on [0, delta] (even extension implied): (lo, hi, poly coeffs
    /// in xi)
    pub pieces: Vec<(f64, f64, Vec<f64>)>,
}

impl PhiSpec {
    /// Triangle hat: phi^ = (1 - |xi|/delta)+, so phi(x) = delta sinc^2(delta x).
    pub fn tent(delta: f64) -> Self {
        PhiSpec {
            delta,
            pieces: vec![(0.0, delta, vec![1.0, -1.0 / delta])],
        }
    }

    /// Cubic B-spline: phi^ = B3(2 xi / delta), C^2, so
    /// phi(x) = (delta/2) sinc^4(delta x / 2).
    pub fn bspline3(delta: f64) -> Self {
        let r = 2.0 / delta; // u = r xi
        // |u| <= 1: (4 - 6u^2 + 3u^3)/6; 1 <= u <= 2: (2-u)^3/6
        let p1 = vec![
            4.0 / 6.0,
            0.0,
            -r * r,
            0.5 * r * r * r,
        ];
        // (2-u)^3/6 = (8 - 12u + 6u^2 - u^3)/6
        let p2 = vec![
            8.0 / 6.0,
            -2.0 * r,
            r * r,
            -r * r * r / 6.0,
        ];
        PhiSpec {
            delta,
            pieces: vec![(0.0, delta / 2.0, p1), (delta / 2.0, delta, p2)],
        }
    }

    pub fn eval_hat(&self, xi: f64) -> f64 {
        let a = xi.abs();
        for (lo, hi, c) in &self.pieces {
            if a >= *lo && a <= *hi {
                let mut acc = 0.0;
                for ck in c.iter().rev() {
                    acc = acc * a + ck;
                }
                return acc;
            }
        }
        0.0
    }

    /// phi^(0) = int phi.
    pub fn hat_at_zero(&self) -> f64 {
        self.eval_hat(0.0)
    }

    /// phi(0) = int phi^.
    pub fn at_zero(&self) -> f64 {
        2.0 * self
            .pieces
            .iter()
            .map(|(lo, hi, c)| poly_integral(c, *lo, *hi))
            .sum::<f64>()
    }

    /// phi(x) = 2 sum over pieces of int poly(xi) cos(2 pi x xi) d xi, with
    /// the oscillatory pieces integrated in closed form.
    pub fn eval(&self, x: f64) -> f64 {
        let omega = 2.0 * PI * x;
        let mut acc = 0.0;
        for (lo, hi, c) in &self.pieces {
            if omega.abs() < 1e-3 {
                // near-static regime: plain Gauss quadrature of the piece
                acc += gauss16(|xi| poly_eval(c, xi) * (omega * xi).cos(), *lo, *hi);
            } else {
                acc += filon_poly_cos(c, *lo, *hi, omega);
            }
        }
        2.0 * acc
    }
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for ck in c.iter().rev() {
        acc = acc * x + ck;
    }
    acc
}

fn poly_integral(c: &[f64], lo: f64, hi: f64) -> f64 {
    let mut acc = 0.0;
    for (k, ck) in c.iter().enumerate() {
        acc += ck / (k as f64 + 1.0) * (hi.powi(k as i32 + 1) - lo.powi(k as i32 + 1));
    }
    acc
}

/// Exact int_lo^hi poly(xi) cos(omega xi) d xi by repeated integration by
/// parts (poly degree <= 3).
fn filon_poly_cos(c: &[f64], lo: f64, hi: f64, omega: f64) -> f64 {
    // I_n^cos = int xi^n cos, I_n^sin = int xi^n sin; by parts:
    // I_n^cos = [xi^n sin/w] - (n/w) I_{n-1}^sin
    // I_n^sin = [-xi^n cos/w] + (n/w) I_{n-1}^cos
    let mut total = 0.0;
    for (n, ck) in c.iter().enumerate() {
        if *ck != 0.0 {
            total += ck * int_pow_cos(n as u32, lo, hi, omega);
        }
    }
    total
}

fn int_pow_cos(n: u32, lo: f64, hi: f64, w: f64) -> f64 {
    if n == 0 {
        return ((w * hi).sin() - (w * lo).sin()) / w;
    }
    let boundary = (hi.powi(n as i32) * (w * hi).sin() - lo.powi(n as i32) * (w * lo).sin()) / w;
    boundary - n as f64 / w * int_pow_sin(n - 1, lo, hi, w)
}

fn int_pow_sin(n: u32, lo: f64, hi: f64, w: f64) -> f64 {
    if n == 0 {
        return ((w * lo).cos() - (w * hi).cos()) / w;
    }
    let boundary = (-hi.powi(n as i32) * (w * hi).cos() + lo.powi(n as i32) * (w * lo).cos()) / w;
    boundary + n as f64 / w * int_pow_cos(n - 1, lo, hi, w)
}

fn gauss16<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let (x, w) = crate::quad::gauss_legendre(16);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut acc = 0.0;
    for i in 0..16 {
        acc += w[i] * f(mid + half * x[i]);
    }
    acc * half
}

/// int phi(x) W_G(x) dx over the real line, by panelled quadrature of the
/// smooth part plus the atom weight times phi(0). The truncation tail is
/// bounded by the phi = O(x^-4) decay of the spline spec.
pub fn density_pairing(group: SymmetryGroup, phi: &PhiSpec, half_range: f64) -> f64 {
    let panels = (half_range * 4.0).ceil() as usize;
    let (nodes, weights) = crate::quad::gauss_legendre(10);
    let h = half_range / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = p as f64 * h;
        let mid = lo + 0.5 * h;
        for i in 0..10 {
            let x = mid + 0.5 * h * nodes[i];
            let (smooth, _) = density_kernel(group, x);
            acc += weights[i] * phi.eval(x) * smooth;
        }
    }
    let (_, atom) = density_kernel(group, 0.0);
    // even integrand: double the [0, R] half
    acc * h + atom * phi.eval(0.0)
}

/// Primes up to n by a sieve.
pub fn primes_up_to(n: usize) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut is_comp = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if !is_comp[p] {
            out.push(p as u64);
            let mut q = p * p;
            while q <= n {
                is_comp[q] = true;
                q += p;
            }
        }
    }
    out
}

/// One term of the explicit-formula prime sum:
/// P_k = (2 / log c) sum_p (power sum at p, degree k)
///       phihat(k log p / log c) log p / p^(k/2).
pub fn prime_sum_term<F>(phi: &PhiSpec, c: f64, k: u32, power_sum_at: F) -> f64
where
    F: Fn(u64) -> f64,
{
    let log_c = c.ln();
    // phihat support (-delta, delta) truncates p at c^(delta/k)
    let p_max = (phi.delta * log_c / k as f64).exp().min(1e8) as usize;
    let mut acc = 0.0;
    for p in primes_up_to(p_max) {
        let lp = (p as f64).ln();
        let w = phi.eval_hat(k as f64 * lp / log_c);
        if w != 0.0 {
            acc += power_sum_at(p) * w * lp / (p as f64).powf(k as f64 / 2.0);
        }
    }
    2.0 / log_c * acc
}

/// The constant stream (2/log c) sum_p phihat(k log p / log c) log p / p^(k/2):
/// at k = 2 it converges to phi(0)/2 with an O(1/log c) error.
pub fn symmetry_constant_stream(phi: &PhiSpec, c: f64, k: u32) -> f64 {
    prime_sum_term(phi, c, k, |_| 1.0)
}

/// Full explicit-formula prime sum sum_{k <= k_max} P_k for one L-kind,
/// with Fourier coefficients supplied per prime by the accessor
/// a(p, i, j) = A(p^i, p^j).
pub fn one_level_prime_sum<F>(
    kind: LKind,
    phi: &PhiSpec,
    c: f64,
    k_max: u32,
    a: F,
) -> Result<f64, PowerSumError>
where
    F: Fn(u64, u32, u32) -> f64,
{
    let mut total = 0.0;
    for k in 1..=k_max {
        total += prime_sum_term(phi, c, k, |p| {
            // assemble the rational power-sum formula in float form
            let af = |i: u32, j: u32| -> f64 { a(p, i, j) };
            match kind {
                LKind::Spin => match k {
                    1 => af(0, 1),
                    2 => af(0, 2) - af(1, 0) - 1.0,
                    3 => af(0, 3) - af(1, 1),
                    _ => af(0, k) - af(1, k - 2) + af(1, k - 4) - af(0, k - 4),
                },
                LKind::Std => match k {
                    1 => af(1, 0),
                    2 => af(2, 0) - af(0, 2) + 1.0,
                    _ => af(k, 0) - af(k - 2, 2) + af(k - 3, 2) - af(k - 3, 0) + 1.0,
                },
            }
        });
    }
    Ok(total)
}
