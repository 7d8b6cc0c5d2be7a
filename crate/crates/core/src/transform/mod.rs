//! The spectral transform I(mu) = <W~_mu, F> by three independent routes:
//! direct 2-D quadrature against the Whittaker function, the four-fold
//! Mellin–Barnes formula with the bump transform in the integrand, and the
//! residue expansion. The routes share no code path beyond the gamma
//! function, so their agreement is the module's strongest self-check.

use alloc::vec::Vec;
use core::fmt;
// required for float methods in no_std builds; redundant when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::special::mellin_f;
use crate::spectral::{harmonic_size_c, SpectralParameter, TestFunctionSpec};
use crate::whittaker::{ContourSpec, WhittakerError, WhittakerEvaluator};
use crate::C64;

pub mod series;
pub mod symbolic;

pub use series::{
    cancellation_defect, non_cancelling_defect, residue_series_eval, residue_series_sum,
    residue_sum_stable, GaussPair, ResidueSeriesId, SeriesError, SeriesTruncation, SeriesValue,
};
pub use symbolic::{SeriesLabel, SURVIVORS};

#[derive(Debug, Clone, PartialEq)]
pub enum TransformError {
    Whittaker(WhittakerError),
    Series(SeriesError),
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformError::Whittaker(e) => write!(f, "{e}"),
            TransformError::Series(e) => write!(f, "{e}"),
        }
    }
}

impl From<WhittakerError> for TransformError {
    fn from(e: WhittakerError) -> Self {
        TransformError::Whittaker(e)
    }
}

impl From<SeriesError> for TransformError {
    fn from(e: SeriesError) -> Self {
        TransformError::Series(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformValue {
    pub value: C64,
    pub error_estimate: f64,
}

/// I(mu) through the four-fold Mellin–Barnes integral: the Whittaker lattice
/// with the y-powers replaced by bump transforms and X powers.
pub fn transform_mellin(
    mu: &SpectralParameter,
    spec: &TestFunctionSpec,
    tol: f64,
) -> Result<TransformValue, TransformError> {
    let contour = ContourSpec::for_mu(mu, tol);
    let ev = WhittakerEvaluator::new(mu, &contour)?;
    Ok(transform_mellin_with(&ev, mu, spec))
}

/// Mellin route against a prebuilt evaluator (reusable across tau and X).
pub fn transform_mellin_with(
    ev: &WhittakerEvaluator,
    mu: &SpectralParameter,
    spec: &TestFunctionSpec,
) -> TransformValue {
    let n = ev.half_n();
    let h = ev.step();
    let (t1, t2) = spec.t_powers();
    let [_, _, s3, s4] = ev.contour().sigma;
    // f^(-2 + i t1 - u3) and f^(-3/2 + i t2 - u4) per lattice node
    let f1: Vec<C64> = (-n..=n)
        .map(|j| {
            let u3 = C64::new(s3, j as f64 * h);
            mellin_f(&spec.f, C64::new(-2.0, t1) - u3).value
        })
        .collect();
    let f2: Vec<C64> = (-n..=n)
        .map(|j| {
            let u4 = C64::new(s4, j as f64 * h);
            mellin_f(&spec.f, C64::new(-1.5, t2) - u4).value
        })
        .collect();
    // (pi / X)^(-u) matches the (pi y)^(-u) node weights at y_eff = 1/X
    let u = ev.u_table_weighted(1.0 / spec.x1, &f1);
    let d = ev.d_table_weighted(1.0 / spec.x2, &f2);
    let bare = ev.contract_tables(&u, &d);
    // global factor X1^(2 - i t1) X2^(3/2 - i t2), the gamma normaliser, and
    // the R^(1/2) prefactor
    let xf = (C64::new(2.0, -t1) * spec.x1.ln()).exp() * (C64::new(1.5, -t2) * spec.x2.ln()).exp();
    let norm = crate::whittaker::gamma_norm_product(mu);
    let value = bare * xf * spec.prefactor() / norm;
    TransformValue {
        value,
        error_estimate: value.norm() * ev.tail_fraction() * 10.0 + 1e-300,
    }
}

/// I(mu) by direct 2-D quadrature of the normalised Whittaker function
/// against F over the support box, with the measure y^(-2 eta) dy/(y1 y2).
pub fn transform_direct(
    mu: &SpectralParameter,
    spec: &TestFunctionSpec,
    tol: f64,
) -> Result<TransformValue, TransformError> {
    let contour = ContourSpec::for_mu(mu, tol);
    let ev = WhittakerEvaluator::new(mu, &contour)?;
    let (t1, t2) = spec.t_powers();
    let n1 = 48 + (1.6 * t1.abs()).ceil() as usize;
    let n2 = 48 + (1.6 * t2.abs()).ceil() as usize;
    let coarse = direct_quadrature(&ev, mu, spec, (n1 * 2) / 3, (n2 * 2) / 3);
    let fine = direct_quadrature(&ev, mu, spec, n1, n2);
    Ok(TransformValue {
        value: fine,
        error_estimate: (fine - coarse).norm() + fine.norm() * ev.tail_fraction() * 10.0,
    })
}

fn direct_quadrature(
    ev: &WhittakerEvaluator,
    mu: &SpectralParameter,
    spec: &TestFunctionSpec,
    n1: usize,
    n2: usize,
) -> C64 {
    let ((a1, b1), (a2, b2)) = spec.support_box();
    let h1 = (b1 - a1) / n1 as f64;
    let h2 = (b2 - a2) / n2 as f64;
    let y1s: Vec<f64> = (0..n1).map(|i| a1 + (i as f64 + 0.5) * h1).collect();
    let y2s: Vec<f64> = (0..n2).map(|j| a2 + (j as f64 + 0.5) * h2).collect();
    let grid = ev.eval_grid(&y1s, &y2s);
    let norm = crate::whittaker::gamma_norm_product(mu);
    let mut acc = C64::new(0.0, 0.0);
    for (i, &y1) in y1s.iter().enumerate() {
        for (j, &y2) in y2s.iter().enumerate() {
            let w = grid[i][j].value / norm;
            let f = spec.eval(y1, y2);
            if f != C64::new(0.0, 0.0) {
                acc += w * f * y1.powi(-5) * y2.powi(-4);
            }
        }
    }
    acc * h1 * h2
}

/// One row of the localisation table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalisationRow {
    pub mu: (C64, C64),
    pub abs_transform: f64,
    pub harmonic_size: f64,
    /// |I(mu)| / C(mu)
    pub ratio: f64,
}

/// |I(mu)| against the harmonic size C(mu) across a parameter grid.
pub fn localisation_profile(
    spec: &TestFunctionSpec,
    grid: &[SpectralParameter],
    tol: f64,
) -> Result<Vec<LocalisationRow>, TransformError> {
    let mut rows = Vec::with_capacity(grid.len());
    for mu in grid {
        let v = transform_mellin(mu, spec, tol)?;
        let c = harmonic_size_c(mu);
        rows.push(LocalisationRow {
            mu: (mu.mu1, mu.mu2),
            abs_transform: v.value.norm(),
            harmonic_size: c,
            ratio: v.value.norm() / c,
        });
    }
    Ok(rows)
}

/// The tau-integrated spectral weight
/// h_{T1,T2}(mu) = int g(tau1/T1) g(tau2/T2) |I_tau(mu)|^2 dtau1 dtau2,
/// with g the standard bump (so tau_i ranges over [T_i, 2T_i]).
/// Non-negative by construction and decaying once Im mu leaves the box.
pub fn h_weight(
    t1: f64,
    t2: f64,
    mu: &SpectralParameter,
    grid_n: usize,
    tol: f64,
) -> Result<f64, TransformError> {
    let contour = ContourSpec::for_mu(mu, tol);
    let ev = WhittakerEvaluator::new(mu, &contour)?;
    let g = crate::special::BumpFunction::standard();
    let (lo1, hi1) = (t1, 2.0 * t1);
    let (lo2, hi2) = (t2, 2.0 * t2);
    let h1 = (hi1 - lo1) / grid_n as f64;
    let h2 = (hi2 - lo2) / grid_n as f64;
    let mut acc = 0.0;
    for i in 0..grid_n {
        let tau1 = lo1 + (i as f64 + 0.5) * h1;
        for j in 0..grid_n {
            let tau2 = lo2 + (j as f64 + 0.5) * h2;
            if tau1 > tau2 {
                continue; // the family is defined for tau1 <= tau2
            }
            let spec = TestFunctionSpec::new(tau1, tau2, 1.0, 1.0);
            let v = transform_mellin_with(&ev, mu, &spec);
            let w = g.eval(tau1 / t1) * g.eval(tau2 / t2);
            acc += w * v.value.norm_sqr();
        }
    }
    Ok(acc * h1 * h2)
}
