//! Cross-checks of the double-precision special functions against the
//! independent fixed-point oracle, plus the Paley–Wiener decay fit for the
//! bump Mellin transform.

use gsp4_core::special::{gamma_ratio, log_gamma, mellin_f, BumpFunction};
use gsp4_core::Complex64;
use hiprec::{lgamma, CFx, Fx};

/// lgamma(3+4i) computed by the fixed-point Stirling-with-recursion oracle.
const LG_3_4I_RE: &str = "-1.7566267846037841105306041816232757851567066070613445016";
const LG_3_4I_IM: &str = "4.7426644380346579281948894075500227408883033517116461135";

#[test]
fn log_gamma_matches_frozen_oracle_value() {
    let oracle = lgamma(&CFx::from_f64(3.0, 4.0));
    // the oracle itself reproduces the frozen 50-digit value
    let frozen = CFx::new(Fx::from_dec_str(LG_3_4I_RE), Fx::from_dec_str(LG_3_4I_IM));
    assert!(oracle.dist_f64(&frozen) < 1e-40);
    // and the f64 implementation agrees to 1e-12 relative
    let got = log_gamma(Complex64::new(3.0, 4.0)).unwrap();
    let (or, oi) = oracle.to_f64();
    let diff = (got - Complex64::new(or, oi)).norm();
    assert!(
        diff <= 1e-12 * got.norm(),
        "impl {got} vs oracle ({or}, {oi})"
    );
}

#[test]
fn log_gamma_oracle_scan_over_strip() {
    // points across the strip used downstream, including the reflection
    // region Re z < 1/2 and the lower half plane
    let pts = [
        (0.25, 0.0),
        (7.5, 0.0),
        (0.3, 55.0),
        (-2.2, 0.7),
        (-6.8, 3.0),
        (-0.4, -12.0),
        (4.0, -40.0),
        (0.5, 100.0),
        (-9.9, 91.3),
    ];
    for (re, im) in pts {
        let got = log_gamma(Complex64::new(re, im)).unwrap();
        let (or, oi) = lgamma(&CFx::from_f64(re, im)).to_f64();
        let want = Complex64::new(or, oi);
        assert!(
            (got - want).norm() <= 1e-12 * (1.0 + want.norm()),
            "mismatch at z = ({re}, {im}): impl {got}, oracle {want}"
        );
    }
}

#[test]
fn gamma_ratio_matches_oracle() {
    // c_mu-style quotient with large imaginary parts
    let nums = [Complex64::new(0.5, 20.0), Complex64::new(1.5, 7.0)];
    let dens = [Complex64::new(0.5, 13.0), Complex64::new(1.0, 14.0)];
    let got = gamma_ratio(&nums, &dens).unwrap();
    let mut acc = CFx::zero();
    for z in nums {
        acc = acc.add(&lgamma(&CFx::from_f64(z.re, z.im)));
    }
    for z in dens {
        acc = acc.sub(&lgamma(&CFx::from_f64(z.re, z.im)));
    }
    let (or, oi) = acc.exp().to_f64();
    let want = Complex64::new(or, oi);
    assert!((got - want).norm() <= 1e-12 * want.norm());
}

/// Paley–Wiener shape: |f^(sigma+it)| <= C_A |s|^(-A) C^(|sigma|+A).
///
/// Because |f^| only decays like exp(-c sqrt t), the weighted envelope
/// |f^| |s|^A peaks near t = 4A^2/c^2; the constant is fitted on a range
/// containing that peak and validated beyond it.
#[test]
fn mellin_paley_wiener_fit() {
    let f = BumpFunction::standard();
    let base: f64 = 2.0; // growth base tied to supp f = [1, 2]
    let sigmas = [-4.0, -2.0, 0.0, 1.0, 2.5, 4.0];
    for a in 1..=6 {
        let mut c_a: f64 = 0.0;
        for &sigma in &sigmas {
            for k in 1..=40 {
                let t = 10.0 * k as f64; // 10..400
                let s = Complex64::new(sigma, t);
                let v = mellin_f(&f, s).value.norm();
                let bound_core = s.norm().powi(-(a as i32)) * base.powf(sigma.abs() + a as f64);
                c_a = c_a.max(v / bound_core);
            }
        }
        // validation range: the fitted constant must keep dominating
        for &sigma in &sigmas {
            for k in 1..=20 {
                let t = 400.0 + 10.0 * k as f64; // 410..600
                let s = Complex64::new(sigma, t);
                let v = mellin_f(&f, s).value.norm();
                let bound = c_a * s.norm().powi(-(a as i32)) * base.powf(sigma.abs() + a as f64);
                assert!(
                    v <= bound * (1.0 + 1e-9),
                    "A={a} sigma={sigma} t={t}: {v:.3e} > {bound:.3e}"
                );
            }
        }
        assert!(c_a.is_finite() && c_a > 0.0);
    }
}

/// Monotone domination: the fitted envelope C(sigma, A)(1+|t|)^(-A) stays
/// above |f^| as t grows, for each tested A.
#[test]
fn mellin_monotone_domination() {
    let f = BumpFunction::standard();
    let sigma = 0.5;
    for a in [1i32, 3, 5] {
        // fit the envelope constant over a range containing the peak of
        // |f^| (1+t)^A, then check domination on a far window
        let mut envelope: f64 = 0.0;
        for k in 1..=40 {
            let t = 10.0 * k as f64; // 10..400
            let v = mellin_f(&f, Complex64::new(sigma, t)).value.norm();
            envelope = envelope.max(v * (1.0 + t).powi(a));
        }
        for k in 1..=10 {
            let t = 400.0 + 20.0 * k as f64; // 420..600
            let v = mellin_f(&f, Complex64::new(sigma, t)).value.norm();
            assert!(
                v * (1.0 + t).powi(a) <= envelope,
                "A={a}: |f^| not dominated by C(sigma,A)(1+t)^-A at t={t}"
            );
        }
    }
}
