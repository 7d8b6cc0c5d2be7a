//! Spectral parameters mu = (mu1, mu2), their temperedness classification
//! and Weyl orbit, the normalisation constant c_mu, the harmonic size
//! C(mu), and the two-parameter family of test functions F.

use alloc::vec::Vec;
use core::f64::consts::PI;
// required for float methods in no_std builds; redundant when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::special::{log_gamma, BumpFunction, SpecialFnError};
use crate::C64;

/// Bound towards the Ramanujan conjecture: |Re mu_i| <= 9/22.
pub const RAMANUJAN_BOUND: f64 = 9.0 / 22.0;

const TOL: f64 = 1e-9;

/// An archimedean spectral parameter, stored with 0 <= Im mu1 <= Im mu2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParameter {
    pub mu1: C64,
    pub mu2: C64,
}

impl SpectralParameter {
    /// Normalising constructor: moves each entry into the upper half plane
    /// by a sign flip (an allowed Weyl move) and orders by imaginary part.
    pub fn new(mu1: C64, mu2: C64) -> Self {
        let fix = |z: C64| {
            if z.im < 0.0 || (z.im == 0.0 && z.re < 0.0) {
                -z
            } else {
                z
            }
        };
        let a = fix(mu1);
        let b = fix(mu2);
        if a.im <= b.im {
            SpectralParameter { mu1: a, mu2: b }
        } else {
            SpectralParameter { mu1: b, mu2: a }
        }
    }

    /// Keeps the entries exactly as given (orbit computations).
    pub fn raw(mu1: C64, mu2: C64) -> Self {
        SpectralParameter { mu1, mu2 }
    }

    pub fn is_degenerate(&self) -> bool {
        self.mu1.norm() < TOL
            || (self.mu1 - self.mu2).norm() < TOL
            || (self.mu1 + self.mu2).norm() < TOL
    }
}

/// Temperedness classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralClass {
    Tempered,
    /// Carries R(mu) = max |Re mu_i|.
    NonTempered(f64),
    Invalid,
}

/// Classify a spectral parameter: purely imaginary entries are tempered;
/// mu2 = -conj(mu1) with 0 < |Re mu1| <= 9/22 is non-tempered; anything
/// else violates unitarity or the Ramanujan bound.
pub fn classify(mu: &SpectralParameter) -> SpectralClass {
    let r1 = mu.mu1.re.abs();
    let r2 = mu.mu2.re.abs();
    if r1 < TOL && r2 < TOL {
        return SpectralClass::Tempered;
    }
    let conj_paired = (mu.mu2 + mu.mu1.conj()).norm() < TOL || (mu.mu2 - mu.mu1.conj()).norm() < TOL;
    if conj_paired && r1 > 0.0 && r1 <= RAMANUJAN_BOUND + TOL && r2 <= RAMANUJAN_BOUND + TOL {
        return SpectralClass::NonTempered(r1.max(r2));
    }
    SpectralClass::Invalid
}

/// All sign/swap images of {mu1, mu2}; the cardinality divides 8.
pub fn weyl_orbit(mu: &SpectralParameter) -> Vec<(C64, C64)> {
    let mut out: Vec<(C64, C64)> = Vec::new();
    for &s1 in &[1.0, -1.0] {
        for &s2 in &[1.0, -1.0] {
            for &swap in &[false, true] {
                let (a, b) = if swap { (mu.mu2, mu.mu1) } else { (mu.mu1, mu.mu2) };
                let cand = (s1 * a, s2 * b);
                if !out
                    .iter()
                    .any(|&(p, q)| (p - cand.0).norm() < TOL && (q - cand.1).norm() < TOL)
                {
                    out.push(cand);
                }
            }
        }
    }
    out
}

/// The Whittaker normalisation factor c_mu: a pi-power times the quotient of
/// the four completed gamma factors by the moduli of their tempered values.
pub fn c_mu(mu: &SpectralParameter) -> Result<C64, SpecialFnError> {
    let (m1, m2) = (mu.mu1, mu.mu2);
    let half = C64::new(0.5, 0.0);
    let num = [
        half + m1,
        half + m2,
        half * (C64::new(1.0, 0.0) + m1 + m2),
        half * (C64::new(1.0, 0.0) - m1 + m2),
    ];
    let mut log_acc = (-m1 - 2.0 * m2 - 2.0) * PI.ln();
    for z in num {
        log_acc += log_gamma(z)?;
    }
    // |Gamma| factors at the imaginary parts
    let t1 = m1.im;
    let t2 = m2.im;
    let den = [
        C64::new(0.5, (t1 + t2) / 2.0),
        C64::new(0.5, t1),
        C64::new(0.5, t2),
        C64::new(0.5, (t2 - t1) / 2.0),
    ];
    for z in den {
        log_acc -= C64::new(log_gamma(z)?.re, 0.0);
    }
    Ok(log_acc.exp())
}

/// C(mu) = prod (1 + |.|)^(-1/2) over mu1, mu2, mu1+mu2, mu2-mu1.
pub fn harmonic_size_c(mu: &SpectralParameter) -> f64 {
    let factors = [
        mu.mu1.norm(),
        mu.mu2.norm(),
        (mu.mu1 + mu.mu2).norm(),
        (mu.mu2 - mu.mu1).norm(),
    ];
    factors.iter().map(|a| (1.0 + a).powf(-0.5)).product()
}

/// Plancherel-measure proxy T = T1 T2 (T2 + T1)(T2 - T1).
pub fn plancherel_t(t1: f64, t2: f64) -> f64 {
    t1 * t2 * (t2 + t1) * (t2 - t1)
}

/// The test function F = [R^(1/2)] f(X1 y1) f(X2 y2) y1^(i(tau1+tau2)) y2^(i tau2).
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunctionSpec {
    pub f: BumpFunction,
    pub tau1: f64,
    pub tau2: f64,
    pub x1: f64,
    pub x2: f64,
    pub r1: f64,
    pub r2: f64,
    pub normalized: bool,
}

impl TestFunctionSpec {
    pub fn new(tau1: f64, tau2: f64, x1: f64, x2: f64) -> Self {
        assert!(tau1 <= tau2, "require tau1 <= tau2");
        assert!(x1 >= 1.0 && x2 >= 1.0, "require X_i >= 1");
        TestFunctionSpec {
            f: BumpFunction::standard(),
            tau1,
            tau2,
            x1,
            x2,
            r1: 1.0,
            r2: 1.0,
            normalized: false,
        }
    }

    pub fn normalized(tau1: f64, tau2: f64, x1: f64, x2: f64, r1: f64, r2: f64) -> Self {
        assert!(r1 >= 1.0 && r2 >= 1.0, "require R_i >= 1");
        TestFunctionSpec {
            f: BumpFunction::standard(),
            tau1,
            tau2,
            x1,
            x2,
            r1,
            r2,
            normalized: true,
        }
    }

    /// R = R1 R2 (R1 + R2)(R2 - R1 + 1); the final factor keeps R nonzero
    /// on the wall R1 = R2.
    pub fn r_factor(&self) -> f64 {
        self.r1 * self.r2 * (self.r1 + self.r2) * (self.r2 - self.r1 + 1.0)
    }

    pub fn prefactor(&self) -> f64 {
        if self.normalized {
            self.r_factor().sqrt()
        } else {
            1.0
        }
    }

    pub fn t_powers(&self) -> (f64, f64) {
        (self.tau1 + self.tau2, self.tau2)
    }

    /// The support box [1/X1, 2/X1] x [1/X2, 2/X2] (for the standard bump).
    pub fn support_box(&self) -> ((f64, f64), (f64, f64)) {
        let (a, b) = self.f.support();
        ((a / self.x1, b / self.x1), (a / self.x2, b / self.x2))
    }

    pub fn eval(&self, y1: f64, y2: f64) -> C64 {
        let m = self.f.eval(self.x1 * y1) * self.f.eval(self.x2 * y2);
        if m == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let (t1, t2) = self.t_powers();
        let phase = t1 * y1.ln() + t2 * y2.ln();
        self.prefactor() * m * C64::new(phase.cos(), phase.sin())
    }
}

/// kappa_f = (int f(u)^2 u^(-4) du/u) (int f(u)^2 u^(-3) du/u):
/// the exact constant in ||F||^2 = X1^4 X2^3 R kappa_f.
pub fn kappa_f(f: &BumpFunction) -> f64 {
    moment(f, -5.0) * moment(f, -4.0)
}

fn moment(f: &BumpFunction, pow: f64) -> f64 {
    let (a, b) = f.support();
    let n = 4096;
    let h = (b - a) / n as f64;
    let mut acc = 0.0;
    for j in 0..n {
        let u = a + (j as f64 + 0.5) * h;
        let v = f.eval(u);
        acc += v * v * u.powf(pow);
    }
    acc * h
}

/// ||F||^2 in closed form under the measure y^(-2 eta) dy1 dy2/(y1 y2).
pub fn f_norm_sq(spec: &TestFunctionSpec) -> f64 {
    let r = if spec.normalized { spec.r_factor() } else { 1.0 };
    spec.x1.powi(4) * spec.x2.powi(3) * r * kappa_f(&spec.f)
}

/// ||F||^2 by direct 2-D quadrature; the independent check on `f_norm_sq`.
pub fn f_norm_sq_quadrature(spec: &TestFunctionSpec) -> f64 {
    let ((a1, b1), (a2, b2)) = spec.support_box();
    let n = 768;
    let h1 = (b1 - a1) / n as f64;
    let h2 = (b2 - a2) / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let y1: f64 = a1 + (i as f64 + 0.5) * h1;
        let f1 = spec.f.eval(spec.x1 * y1);
        if f1 == 0.0 {
            continue;
        }
        let w1 = f1 * f1 * y1.powi(-5);
        let mut inner = 0.0;
        for j in 0..n {
            let y2: f64 = a2 + (j as f64 + 0.5) * h2;
            let f2 = spec.f.eval(spec.x2 * y2);
            inner += f2 * f2 * y2.powi(-4);
        }
        acc += w1 * inner;
    }
    let r = if spec.normalized { spec.r_factor() } else { 1.0 };
    acc * h1 * h2 * r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn classify_cases() {
        let t = SpectralParameter::new(c(0.0, 2.0), c(0.0, 5.0));
        assert_eq!(classify(&t), SpectralClass::Tempered);

        let n = SpectralParameter::new(c(0.25, 3.0), c(-0.25, 3.0));
        match classify(&n) {
            SpectralClass::NonTempered(r) => assert!((r - 0.25).abs() < 1e-12),
            other => panic!("expected non-tempered, got {other:?}"),
        }

        let bad = SpectralParameter::new(c(0.5, 1.0), c(0.0, 2.0));
        assert_eq!(classify(&bad), SpectralClass::Invalid);
    }

    #[test]
    fn classify_weyl_invariant() {
        let mu = SpectralParameter::new(c(0.25, 3.0), c(-0.25, 3.0));
        let class = classify(&mu);
        for (a, b) in weyl_orbit(&mu) {
            assert_eq!(classify(&SpectralParameter::new(a, b)), class);
        }
    }

    #[test]
    fn weyl_orbit_sizes() {
        let zero = SpectralParameter::new(c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(weyl_orbit(&zero).len(), 1);
        let generic = SpectralParameter::new(c(0.0, 1.0), c(0.0, 2.0));
        assert_eq!(weyl_orbit(&generic).len(), 8);
        let diag = SpectralParameter::new(c(0.0, 1.0), c(0.0, 1.0));
        assert_eq!(weyl_orbit(&diag).len(), 4);
    }

    #[test]
    fn c_mu_modulus_tempered() {
        // for purely imaginary mu the gamma quotient has modulus 1 and
        // |c_mu| = pi^(-2)
        for (t1, t2) in [(1.0, 2.0), (0.5, 4.0), (3.0, 3.0)] {
            let mu = SpectralParameter::new(c(0.0, t1), c(0.0, t2));
            let v = c_mu(&mu).unwrap();
            assert!(
                (v.norm() - PI.powi(-2)).abs() < 1e-12,
                "|c_mu| = {} at ({t1}, {t2})",
                v.norm()
            );
        }
        // mu = 0: conjugate-symmetric arguments give a real positive value
        let v = c_mu(&SpectralParameter::new(c(0.0, 0.0), c(0.0, 0.0))).unwrap();
        assert!(v.im.abs() < 1e-14 && v.re > 0.0);
    }

    #[test]
    fn harmonic_size_values() {
        let mu0 = SpectralParameter::new(c(0.0, 0.0), c(0.0, 0.0));
        assert!((harmonic_size_c(&mu0) - 1.0).abs() < 1e-15);
        let mu = SpectralParameter::new(c(0.0, 1.0), c(0.0, 2.0));
        assert!((harmonic_size_c(&mu) - (48.0f64).powf(-0.5)).abs() < 1e-14);
        let mu = SpectralParameter::new(c(0.0, 10.0), c(0.0, 30.0));
        let expect = (11.0f64 * 31.0 * 41.0 * 21.0).powf(-0.5);
        assert!((harmonic_size_c(&mu) - expect).abs() < 1e-14);
        // Weyl invariance: each factor permutes
        for (a, b) in weyl_orbit(&SpectralParameter::new(c(0.25, 3.0), c(-0.25, 3.0))) {
            let v = harmonic_size_c(&SpectralParameter::raw(a, b));
            let w = harmonic_size_c(&SpectralParameter::new(c(0.25, 3.0), c(-0.25, 3.0)));
            assert!((v - w).abs() < 1e-12);
        }
    }

    #[test]
    fn plancherel_positive() {
        assert!(plancherel_t(2.0, 7.0) > 0.0);
        assert_eq!(plancherel_t(3.0, 3.0), 0.0);
    }

    #[test]
    fn f_eval_support_and_modulus() {
        let spec = TestFunctionSpec::new(0.0, 0.0, 2.0, 3.0);
        // outside the support box
        assert_eq!(spec.eval(1.5, 0.5), c(0.0, 0.0));
        assert_eq!(spec.eval(0.1, 0.5), c(0.0, 0.0));
        // tau = 0, unnormalised: real non-negative
        let v = spec.eval(0.7, 0.5);
        assert!(v.im == 0.0 && v.re >= 0.0);

        // normalised: |F| at the bump peak equals R^(1/2) f(1.5)^2
        let spec = TestFunctionSpec::normalized(1.0, 2.0, 2.0, 4.0, 1.0, 1.0);
        let v = spec.eval(1.5 / 2.0, 1.5 / 4.0);
        let want = spec.r_factor().sqrt() * spec.f.eval(1.5) * spec.f.eval(1.5);
        assert!((v.norm() - want).abs() < 1e-12);
        // R = 1*1*2*1 = 2
        assert!((spec.r_factor() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn f_norm_closed_form_vs_quadrature() {
        let spec = TestFunctionSpec::normalized(0.0, 0.0, 1.0, 1.0, 1.0, 1.0);
        let closed = f_norm_sq(&spec);
        let quad = f_norm_sq_quadrature(&spec);
        assert!(
            (closed - quad).abs() < 1e-10 * closed,
            "closed {closed} vs quad {quad}"
        );
        // X1 = X2 = 1, R1 = R2 = 1: ||F||^2 = 2 kappa_f
        assert!((closed - 2.0 * kappa_f(&spec.f)).abs() < 1e-14 * closed);
    }

    #[test]
    fn f_norm_scaling_laws() {
        let base = TestFunctionSpec::normalized(0.0, 0.0, 1.0, 1.0, 1.0, 1.0);
        let x1_doubled = TestFunctionSpec::normalized(0.0, 0.0, 2.0, 1.0, 1.0, 1.0);
        let x2_doubled = TestFunctionSpec::normalized(0.0, 0.0, 1.0, 2.0, 1.0, 1.0);
        let b = f_norm_sq(&base);
        assert!((f_norm_sq(&x1_doubled) / b - 16.0).abs() < 1e-12);
        assert!((f_norm_sq(&x2_doubled) / b - 8.0).abs() < 1e-12);
        // and the quadrature route obeys the same laws
        let bq = f_norm_sq_quadrature(&base);
        assert!((f_norm_sq_quadrature(&x1_doubled) / bq - 16.0).abs() < 1e-8);
        assert!((f_norm_sq_quadrature(&x2_doubled) / bq - 8.0).abs() < 1e-8);
    }

    #[test]
    fn f_norm_grid_matches_closed_form() {
        // 5x5 grid in (X1, X2), 1e-10 relative
        for i in 0..5 {
            for j in 0..5 {
                let spec = TestFunctionSpec::normalized(
                    0.0,
                    0.0,
                    1.0 + i as f64,
                    1.0 + j as f64,
                    2.0,
                    3.0,
                );
                let closed = f_norm_sq(&spec);
                let quad = f_norm_sq_quadrature(&spec);
                assert!(
                    (closed - quad).abs() <= 1e-10 * closed,
                    "X = ({}, {}): closed {closed} vs quad {quad}",
                    spec.x1,
                    spec.x2
                );
            }
        }
    }
}
