//! The completed GSp(4) Whittaker function via its four-fold Mellin–Barnes
//! representation, evaluated on shared-step vertical lattices.
//!
//! The integrand factorises as
//!   A(s1) B(s2) · G3(s3) G3b(s3-s1-s2) (pi y1)^(-s3) · G4a(s4-s1) G4b(s4-s2) (pi y2)^(-s4)
//! with every gamma factor living on an arithmetic progression once all four
//! contours share the same imaginary step. Summation is then organised as
//!   sum_m U(m; y1) D(m; y2),
//! where U collapses the s3-line and D collapses the s4-line against the
//! y-independent convolution table C_{j4}(m) = sum_{j1+j2=m} A G4a B G4b.
//! This makes the cost per evaluation O(N^2) after an O(N^2 log N) setup.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
// required for float methods in no_std builds; redundant when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::quad::convolve;
use crate::special::log_gamma;
use crate::spectral::SpectralParameter;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub enum WhittakerError {
    /// The contour abscissae violate the admissibility inequalities.
    ContourViolation(&'static str),
    /// The truncated lattice does not decay enough at the boundary.
    NonConvergence { boundary_fraction: f64 },
}

impl fmt::Display for WhittakerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WhittakerError::ContourViolation(s) => write!(f, "contour violation: {s}"),
            WhittakerError::NonConvergence { boundary_fraction } => write!(
                f,
                "lattice boundary carries fraction {boundary_fraction:.2e} of the mass; raise height_cut"
            ),
        }
    }
}

/// Contour data for the four vertical lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub sigma: [f64; 4],
    pub height_cut: f64,
    pub nodes_per_unit: u32,
}

impl ContourSpec {
    /// Default admissible contour for a given parameter:
    /// sigma = (|Re mu1| + 1/2, |Re mu2| + 1/2, sigma1 + sigma2 + 1/2,
    /// max(sigma1, sigma2) + 1/2), with the height chosen so the Stirling
    /// tail at the boundary is below `tol` relative to the peak.
    pub fn for_mu(mu: &SpectralParameter, tol: f64) -> Self {
        let s1 = mu.mu1.re.abs() + 0.5;
        let s2 = mu.mu2.re.abs() + 0.5;
        let sigma = [s1, s2, s1 + s2 + 0.5, s1.max(s2) + 0.5];
        let im_max = mu.mu1.im.abs().max(mu.mu2.im.abs());
        // slowest marginal decay is exp(-pi t / 2); add a polynomial margin
        let height = im_max + (4.0 / PI) * ((1.0 / tol).ln() + 3.0 * (2.0 + im_max).ln()) + 4.0;
        ContourSpec {
            sigma,
            height_cut: height,
            nodes_per_unit: 8,
        }
    }

    pub fn validate(&self, mu: &SpectralParameter) -> Result<(), WhittakerError> {
        let [s1, s2, s3, s4] = self.sigma;
        if s1 <= mu.mu1.re.abs() {
            return Err(WhittakerError::ContourViolation("sigma1 <= |Re mu1|"));
        }
        if s2 <= mu.mu2.re.abs() {
            return Err(WhittakerError::ContourViolation("sigma2 <= |Re mu2|"));
        }
        if s3 <= s1 + s2 {
            return Err(WhittakerError::ContourViolation("sigma3 <= sigma1 + sigma2"));
        }
        if s4 <= s1.max(s2) {
            return Err(WhittakerError::ContourViolation("sigma4 <= max(sigma1, sigma2)"));
        }
        if self.height_cut <= 0.0 || self.nodes_per_unit == 0 {
            return Err(WhittakerError::ContourViolation("empty lattice"));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        1.0 / self.nodes_per_unit as f64
    }

    pub fn half_points(&self) -> i64 {
        (self.height_cut * self.nodes_per_unit as f64).ceil() as i64
    }
}

/// A value with its reported tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhittakerValue {
    pub value: C64,
    pub error_estimate: f64,
}

/// Gamma-factor tables for a fixed (mu, contour); reusable across y.
pub struct WhittakerEvaluator {
    contour: ContourSpec,
    n: i64,
    h: f64,
    g3: Vec<C64>,
    g3b: Vec<C64>, // index k + 3N, k = j3 - m
    /// conv table C_{j4}(m), row-major in j4.
    conv: Vec<Vec<C64>>,
    /// marginal boundary fractions per axis, for error reporting
    tail_fraction: f64,
}

fn gamma_on_lattice(sigma: f64, offset: C64, n_lo: i64, n_hi: i64, h: f64) -> Vec<C64> {
    (n_lo..=n_hi)
        .map(|j| {
            let s = C64::new(sigma, j as f64 * h);
            log_gamma((s + offset) / 2.0).map(|l| l.exp()).unwrap_or(C64::new(0.0, 0.0))
        })
        .collect()
}

fn boundary_fraction(t: &[C64]) -> f64 {
    let maxv = t.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if maxv == 0.0 {
        return 1.0;
    }
    (t[0].norm() + t[t.len() - 1].norm()) / maxv
}

impl WhittakerEvaluator {
    pub fn new(mu: &SpectralParameter, contour: &ContourSpec) -> Result<Self, WhittakerError> {
        contour.validate(mu)?;
        let n = contour.half_points();
        let h = contour.step();
        let [s1, s2, s3, s4] = contour.sigma;
        let nn = n;
        // A(j1) = Gamma((s1+mu1)/2) Gamma((s1-mu1)/2), likewise B
        let g = |sig: f64, off: C64, lo: i64, hi: i64| gamma_on_lattice(sig, off, lo, hi, h);
        let a1 = g(s1, mu.mu1, -nn, nn);
        let a2 = g(s1, -mu.mu1, -nn, nn);
        let a: Vec<C64> = a1.iter().zip(&a2).map(|(x, y)| x * y).collect();
        let b1 = g(s2, mu.mu2, -nn, nn);
        let b2 = g(s2, -mu.mu2, -nn, nn);
        let b: Vec<C64> = b1.iter().zip(&b2).map(|(x, y)| x * y).collect();
        let zero = C64::new(0.0, 0.0);
        let g3 = g(s3, zero, -nn, nn);
        let g3b = g(s3 - s1 - s2, zero, -3 * nn, 3 * nn);
        let g4a = g(s4 - s1, zero, -2 * nn, 2 * nn);
        let g4b = g(s4 - s2, zero, -2 * nn, 2 * nn);

        let tails = [
            boundary_fraction(&a),
            boundary_fraction(&b),
            boundary_fraction(&g3),
            boundary_fraction(&g3b),
            boundary_fraction(&g4a),
            boundary_fraction(&g4b),
        ];
        let tail_fraction: f64 = tails.iter().sum();
        if tail_fraction > 1e-2 {
            return Err(WhittakerError::NonConvergence {
                boundary_fraction: tail_fraction,
            });
        }

        // C_{j4}(m) = sum_{j1+j2=m} [A(j1) G4a(j4-j1)] [B(j2) G4b(j4-j2)]
        let size = (2 * nn + 1) as usize;
        let mut conv_rows: Vec<Vec<C64>> = Vec::with_capacity(size);
        for j4 in -nn..=nn {
            let av: Vec<C64> = (-nn..=nn)
                .map(|j1| a[(j1 + nn) as usize] * g4a[(j4 - j1 + 2 * nn) as usize])
                .collect();
            let bv: Vec<C64> = (-nn..=nn)
                .map(|j2| b[(j2 + nn) as usize] * g4b[(j4 - j2 + 2 * nn) as usize])
                .collect();
            // index m + 2N in the result, m = j1 + j2 in [-2N, 2N]
            conv_rows.push(convolve(&av, &bv));
        }
        Ok(WhittakerEvaluator {
            contour: *contour,
            n,
            h,
            g3,
            g3b,
            conv: conv_rows,
            tail_fraction,
        })
    }

    pub fn contour(&self) -> &ContourSpec {
        &self.contour
    }

    pub fn half_n(&self) -> i64 {
        self.n
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    /// Weighted s3-line table: like `u_table` but with an extra per-node
    /// factor (used by the Mellin route, where the weight is the bump
    /// transform). `extra` is indexed by j3 + half_n.
    pub fn u_table_weighted(&self, y1_eff: f64, extra: &[C64]) -> Vec<C64> {
        let n = self.n;
        let lp = (PI * y1_eff).ln();
        let s3 = self.contour.sigma[2];
        let base = (-s3 * lp).exp();
        let mut out = vec![C64::new(0.0, 0.0); (4 * n + 1) as usize];
        let w3: Vec<C64> = (-n..=n)
            .map(|j| {
                let t = j as f64 * self.h;
                self.g3[(j + n) as usize]
                    * base
                    * C64::new((t * lp).cos(), -(t * lp).sin())
                    * extra[(j + n) as usize]
            })
            .collect();
        for m in -2 * n..=2 * n {
            let mut acc = C64::new(0.0, 0.0);
            for j3 in -n..=n {
                acc += w3[(j3 + n) as usize] * self.g3b[(j3 - m + 3 * n) as usize];
            }
            out[(m + 2 * n) as usize] = acc;
        }
        out
    }

    /// Weighted s4-line table, mirroring `u_table_weighted`.
    pub fn d_table_weighted(&self, y2_eff: f64, extra: &[C64]) -> Vec<C64> {
        let n = self.n;
        let lp = (PI * y2_eff).ln();
        let s4 = self.contour.sigma[3];
        let base = (-s4 * lp).exp();
        let mut out = vec![C64::new(0.0, 0.0); (4 * n + 1) as usize];
        for j4 in -n..=n {
            let t = j4 as f64 * self.h;
            let w4 =
                base * C64::new((t * lp).cos(), -(t * lp).sin()) * extra[(j4 + n) as usize];
            let row = &self.conv[(j4 + n) as usize];
            for (m, r) in row.iter().enumerate() {
                out[m] += w4 * r;
            }
        }
        out
    }

    /// (h / 2 pi)^4 sum_m U(m) D(m): the bare four-fold lattice sum, without
    /// the y^eta prefactor.
    pub fn contract_tables(&self, u: &[C64], d: &[C64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (uu, dd) in u.iter().zip(d.iter()) {
            acc += uu * dd;
        }
        acc * (self.h / (2.0 * PI)).powi(4)
    }

    /// The boundary-mass fraction used in the error estimates.
    pub fn tail_fraction(&self) -> f64 {
        self.tail_fraction
    }

    /// U(m; y1) = sum_{j3} Gamma(s3/2) (pi y1)^(-s3) Gamma((s3 - s1 - s2 - i m h)/2).
    pub fn u_table(&self, y1: f64) -> Vec<C64> {
        let n = self.n;
        let lp = (PI * y1).ln();
        let s3 = self.contour.sigma[2];
        let base = (-s3 * lp).exp();
        let mut out = vec![C64::new(0.0, 0.0); (4 * n + 1) as usize];
        // (pi y1)^(-s3 - i t) = base * e^(-i t lp)
        let w3: Vec<C64> = (-n..=n)
            .map(|j| {
                let t = j as f64 * self.h;
                self.g3[(j + n) as usize] * base * C64::new((t * lp).cos(), -(t * lp).sin())
            })
            .collect();
        for m in -2 * n..=2 * n {
            let mut acc = C64::new(0.0, 0.0);
            for j3 in -n..=n {
                acc += w3[(j3 + n) as usize] * self.g3b[(j3 - m + 3 * n) as usize];
            }
            out[(m + 2 * n) as usize] = acc;
        }
        out
    }

    /// D(m; y2) = sum_{j4} (pi y2)^(-s4) C_{j4}(m).
    pub fn d_table(&self, y2: f64) -> Vec<C64> {
        let n = self.n;
        let lp = (PI * y2).ln();
        let s4 = self.contour.sigma[3];
        let base = (-s4 * lp).exp();
        let mut out = vec![C64::new(0.0, 0.0); (4 * n + 1) as usize];
        for j4 in -n..=n {
            let t = j4 as f64 * self.h;
            let w4 = base * C64::new((t * lp).cos(), -(t * lp).sin());
            let row = &self.conv[(j4 + n) as usize];
            for (m, r) in row.iter().enumerate() {
                out[m] += w4 * r;
            }
        }
        out
    }

    /// Contract precomputed U and D tables into the completed Whittaker value.
    pub fn eval_from_tables(&self, y1: f64, y2: f64, u: &[C64], d: &[C64]) -> WhittakerValue {
        let mut acc = C64::new(0.0, 0.0);
        for (uu, dd) in u.iter().zip(d.iter()) {
            acc += uu * dd;
        }
        let quad_weight = (self.h / (2.0 * PI)).powi(4);
        let y_eta = y1 * y1 * y2.powf(1.5);
        let value = acc * quad_weight * y_eta;
        WhittakerValue {
            value,
            error_estimate: value.norm() * self.tail_fraction * 10.0 + 1e-300,
        }
    }

    /// Completed Whittaker function W*(y) with the overall constant set to 1.
    pub fn eval(&self, y1: f64, y2: f64) -> WhittakerValue {
        let u = self.u_table(y1);
        let d = self.d_table(y2);
        self.eval_from_tables(y1, y2, &u, &d)
    }

    /// Evaluate on a y-grid, reusing the per-line tables.
    pub fn eval_grid(&self, y1s: &[f64], y2s: &[f64]) -> Vec<Vec<WhittakerValue>> {
        let us: Vec<Vec<C64>> = y1s.iter().map(|&y1| self.u_table(y1)).collect();
        let ds: Vec<Vec<C64>> = y2s.iter().map(|&y2| self.d_table(y2)).collect();
        y1s.iter()
            .enumerate()
            .map(|(i, &y1)| {
                y2s.iter()
                    .enumerate()
                    .map(|(j, &y2)| self.eval_from_tables(y1, y2, &us[i], &ds[j]))
                    .collect()
            })
            .collect()
    }
}

/// One-shot completed Whittaker function.
pub fn completed_whittaker(
    mu: &SpectralParameter,
    y: (f64, f64),
    contour: &ContourSpec,
) -> Result<WhittakerValue, WhittakerError> {
    assert!(y.0 > 0.0 && y.1 > 0.0, "y must be positive");
    Ok(WhittakerEvaluator::new(mu, contour)?.eval(y.0, y.1))
}

/// The product |Gamma((1+2i Im mu1)/2) Gamma((1+2i Im mu2)/2)
/// Gamma((1+i Im(mu1+mu2))/2) Gamma((1+i Im(mu2-mu1))/2)| dividing W* in the
/// normalised Whittaker function.
pub fn gamma_norm_product(mu: &SpectralParameter) -> f64 {
    let t1 = mu.mu1.im;
    let t2 = mu.mu2.im;
    let args = [
        C64::new(0.5, t1),
        C64::new(0.5, t2),
        C64::new(0.5, (t1 + t2) / 2.0),
        C64::new(0.5, (t2 - t1) / 2.0),
    ];
    let mut log_abs = 0.0;
    for z in args {
        log_abs += log_gamma(z).expect("arguments off poles").re;
    }
    log_abs.exp()
}

/// Normalised Whittaker function: W*(y) / |Gamma-product|. Continuous in mu
/// but not holomorphic.
pub fn normalized_whittaker(
    mu: &SpectralParameter,
    y: (f64, f64),
    contour: &ContourSpec,
) -> Result<WhittakerValue, WhittakerError> {
    let w = completed_whittaker(mu, y, contour)?;
    let norm = gamma_norm_product(mu);
    Ok(WhittakerValue {
        value: w.value / norm,
        error_estimate: w.error_estimate / norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu(a: (f64, f64), b: (f64, f64)) -> SpectralParameter {
        SpectralParameter::raw(C64::new(a.0, a.1), C64::new(b.0, b.1))
    }

    #[test]
    fn contour_validation() {
        let m = mu((0.0, 1.0), (0.0, 2.0));
        let c = ContourSpec::for_mu(&m, 1e-10);
        assert!(c.validate(&m).is_ok());
        let bad = ContourSpec {
            sigma: [0.5, 0.5, 0.9, 1.0],
            ..c
        };
        assert!(matches!(
            bad.validate(&m),
            Err(WhittakerError::ContourViolation(_))
        ));
        let m_wide = mu((0.4, 1.0), (-0.4, 1.0));
        let too_narrow = ContourSpec {
            sigma: [0.3, 0.9, 1.8, 1.4],
            ..c
        };
        assert!(too_narrow.validate(&m_wide).is_err());
    }

    #[test]
    fn nonconvergence_reported() {
        let m = mu((0.0, 1.0), (0.0, 2.0));
        let c = ContourSpec {
            sigma: [0.5, 0.5, 1.5, 1.0],
            height_cut: 3.0, // far too small for Im mu2 = 2
            nodes_per_unit: 4,
        };
        assert!(matches!(
            WhittakerEvaluator::new(&m, &c),
            Err(WhittakerError::NonConvergence { .. })
        ));
    }

    #[test]
    fn symmetry_in_mu_swap_and_sign() {
        // the integrand is symmetric under mu1 <-> mu2 and mu1 -> -mu1
        let c_tol = 1e-9;
        let base = mu((0.0, 1.0), (0.0, 2.0));
        let contour = ContourSpec::for_mu(&base, c_tol);
        let y = (0.9, 1.1);
        let v0 = completed_whittaker(&base, y, &contour).unwrap().value;
        let swapped = completed_whittaker(&mu((0.0, 2.0), (0.0, 1.0)), y, &contour)
            .unwrap()
            .value;
        let flipped = completed_whittaker(&mu((0.0, -1.0), (0.0, 2.0)), y, &contour)
            .unwrap()
            .value;
        assert!((v0 - swapped).norm() <= 1e-8 * v0.norm(), "swap");
        assert!((v0 - flipped).norm() <= 1e-8 * v0.norm(), "sign flip");
    }

    #[test]
    fn real_for_tempered() {
        let m = mu((0.0, 1.0), (0.0, 2.0));
        let contour = ContourSpec::for_mu(&m, 1e-9);
        let ev = WhittakerEvaluator::new(&m, &contour).unwrap();
        for (y1, y2) in [(1.0, 1.0), (0.5, 1.5), (2.0, 0.7)] {
            let v = ev.eval(y1, y2).value;
            assert!(
                v.im.abs() <= 1e-8 * v.norm().max(1e-30),
                "Im = {} at y = ({y1}, {y2})",
                v.im
            );
        }
    }

    #[test]
    fn contour_independence() {
        let m = mu((0.0, 1.0), (0.0, 2.0));
        let c1 = ContourSpec::for_mu(&m, 1e-9);
        let c2 = ContourSpec {
            sigma: [0.8, 1.1, 2.5, 1.7],
            height_cut: c1.height_cut + 3.0,
            nodes_per_unit: 10,
        };
        let y = (1.0, 1.0);
        let v1 = completed_whittaker(&m, y, &c1).unwrap();
        let v2 = completed_whittaker(&m, y, &c2).unwrap();
        let err = v1.error_estimate + v2.error_estimate + 1e-8 * v1.value.norm();
        assert!(
            (v1.value - v2.value).norm() <= err,
            "contours disagree: {} vs {}",
            v1.value,
            v2.value
        );
    }

    #[test]
    fn exponential_decay_in_y1() {
        let m = mu((0.0, 1.0), (0.0, 2.0));
        let contour = ContourSpec::for_mu(&m, 1e-9);
        let ev = WhittakerEvaluator::new(&m, &contour).unwrap();
        let near = ev.eval(1.0, 1.0).value.norm();
        let far = ev.eval(8.0, 1.0).value.norm();
        assert!(far * 1e3 < near, "near {near:.3e}, far {far:.3e}");
    }

    #[test]
    fn grid_matches_single_evals() {
        let m = mu((0.0, 1.5), (0.0, 2.5));
        let contour = ContourSpec::for_mu(&m, 1e-8);
        let ev = WhittakerEvaluator::new(&m, &contour).unwrap();
        let y1s = [0.8, 1.3];
        let y2s = [0.9, 1.7];
        let grid = ev.eval_grid(&y1s, &y2s);
        for (i, &y1) in y1s.iter().enumerate() {
            for (j, &y2) in y2s.iter().enumerate() {
                let single = ev.eval(y1, y2).value;
                assert!((grid[i][j].value - single).norm() <= 1e-12 * single.norm());
            }
        }
    }

    #[test]
    fn normalized_ratio_is_gamma_product() {
        let m = mu((0.0, 1.0), (0.0, 2.0));
        let contour = ContourSpec::for_mu(&m, 1e-9);
        let w = completed_whittaker(&m, (1.0, 1.0), &contour).unwrap().value;
        let wn = normalized_whittaker(&m, (1.0, 1.0), &contour).unwrap().value;
        let ratio = (w / wn).re;
        assert!((ratio - gamma_norm_product(&m)).abs() <= 1e-10 * ratio.abs());
    }
}
