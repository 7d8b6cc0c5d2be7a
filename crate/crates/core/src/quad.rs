//! Quadrature utilities: Gauss–Legendre rules, an oscillation-aware adaptive
//! tensor cubature for low dimensions, and Richardson extrapolation for
//! power-law series tails.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
// required for float methods in no_std builds; redundant when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::C64;

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_n'(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre on [a, b] with fixed panels; for smooth 1-D
/// integrands with moderate oscillation.
pub fn panel_gauss<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, panels: usize, order: usize) -> C64 {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for i in 0..order {
            acc += w[i] * f(mid + 0.5 * h * x[i]);
        }
    }
    acc * (0.5 * h)
}

#[derive(Debug, Clone, Copy)]
pub struct CubatureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_cells: usize,
    /// Per-axis Gauss order used inside each cell.
    pub order: usize,
    /// Cells whose estimated phase span exceeds this (radians) are split
    /// before their error estimate is trusted.
    pub phase_split_threshold: f64,
    /// Uniform pre-subdivision of every axis before adaptivity starts;
    /// needed when the support is thin inside the bounding box.
    pub initial_splits: usize,
}

impl Default for CubatureSpec {
    fn default() -> Self {
        CubatureSpec {
            rel_tol: 1e-7,
            abs_tol: 1e-12,
            max_cells: 200_000,
            order: 4,
            phase_split_threshold: 1.6,
            initial_splits: 1,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CubatureResult {
    pub value: C64,
    pub error_estimate: f64,
    pub cells: usize,
    pub converged: bool,
}

struct Cell {
    lo: Vec<f64>,
    hi: Vec<f64>,
    value: C64,
    error: f64,
    split_dim: usize,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// Adaptive tensor-product cubature over an axis-aligned box.
///
/// `value` is the full integrand; `phase` is the total phase of its
/// oscillatory factors in radians, used only to decide subdivision. Cells
/// with small phase span are handled by the embedded Gauss pair; others are
/// split along the axis with the largest phase variation.
pub fn adaptive_cubature<F, P>(
    lo: &[f64],
    hi: &[f64],
    value: F,
    phase: P,
    spec: &CubatureSpec,
) -> CubatureResult
where
    F: Fn(&[f64]) -> C64,
    P: Fn(&[f64]) -> f64,
{
    let dim = lo.len();
    assert_eq!(dim, hi.len());
    let rule_hi = gauss_legendre(spec.order);
    let rule_lo = gauss_legendre(spec.order.saturating_sub(2).max(1));

    let eval_cell = |clo: &[f64], chi: &[f64]| -> (C64, f64, usize) {
        let (v_hi, resasc) = tensor_gauss_with_variation(clo, chi, &rule_hi, &value);
        let v_lo = tensor_gauss(clo, chi, &rule_lo, &value);
        // QUADPACK-style rescaling: the raw difference tracks the error of
        // the low rule, which is far above that of the high rule
        let delta = (v_hi - v_lo).norm();
        let err = if resasc > 0.0 && delta > 0.0 {
            resasc * ((200.0 * delta / resasc).powf(1.5)).min(1.0)
        } else {
            delta
        };
        // phase span along each axis through the cell centre
        let mut centre = vec![0.0; dim];
        for d in 0..dim {
            centre[d] = 0.5 * (clo[d] + chi[d]);
        }
        let p0 = phase(&centre);
        let mut worst_dim = 0;
        let mut worst_span = -1.0;
        let mut probe = centre.clone();
        for d in 0..dim {
            probe[d] = clo[d] + 0.01 * (chi[d] - clo[d]);
            let pa = phase(&probe);
            probe[d] = chi[d] - 0.01 * (chi[d] - clo[d]);
            let pb = phase(&probe);
            probe[d] = centre[d];
            let span = (pa - p0).abs().max((pb - p0).abs()) * 2.0;
            // prefer wide oscillatory axes; fall back to geometric width
            let score = span + 1e-9 * (chi[d] - clo[d]);
            if score > worst_span {
                worst_span = score;
                worst_dim = d;
            }
        }
        let err = if worst_span > spec.phase_split_threshold {
            err.max(v_hi.norm() + v_lo.norm()).max(1e-300) * (1.0 + worst_span)
        } else {
            err
        };
        (v_hi, err, worst_dim)
    };

    let mut heap = BinaryHeap::new();
    let mut total = C64::new(0.0, 0.0);
    let mut total_err = 0.0;
    let mut cells = 0usize;
    // initial uniform grid
    let splits = spec.initial_splits.max(1);
    let mut idx = vec![0usize; dim];
    'grid: loop {
        let mut clo = vec![0.0; dim];
        let mut chi = vec![0.0; dim];
        for d in 0..dim {
            let h = (hi[d] - lo[d]) / splits as f64;
            clo[d] = lo[d] + idx[d] as f64 * h;
            chi[d] = clo[d] + h;
        }
        let (v, e, sd) = eval_cell(&clo, &chi);
        total += v;
        total_err += e;
        cells += 1;
        heap.push(Cell {
            lo: clo,
            hi: chi,
            value: v,
            error: e,
            split_dim: sd,
        });
        for d in 0..dim {
            idx[d] += 1;
            if idx[d] < splits {
                continue 'grid;
            }
            idx[d] = 0;
        }
        break;
    }

    while cells < spec.max_cells {
        let tol = spec.abs_tol.max(spec.rel_tol * total.norm());
        if total_err <= tol {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        if worst.error <= tol / (heap.len() + 1) as f64 {
            heap.push(worst);
            break;
        }
        total -= worst.value;
        total_err -= worst.error;
        let d = worst.split_dim;
        let mid = 0.5 * (worst.lo[d] + worst.hi[d]);
        for half in 0..2 {
            let mut clo = worst.lo.clone();
            let mut chi = worst.hi.clone();
            if half == 0 {
                chi[d] = mid;
            } else {
                clo[d] = mid;
            }
            let (v, e, sd) = eval_cell(&clo, &chi);
            total += v;
            total_err += e;
            heap.push(Cell {
                lo: clo,
                hi: chi,
                value: v,
                error: e,
                split_dim: sd,
            });
        }
        cells += 1;
    }

    let tol = spec.abs_tol.max(spec.rel_tol * total.norm());
    CubatureResult {
        value: total,
        error_estimate: total_err,
        cells,
        converged: total_err <= tol,
    }
}

/// Tensor Gauss rule returning both the integral and a variation measure
/// (the weighted L1 deviation from the cell mean), used for error scaling.
fn tensor_gauss_with_variation<F: Fn(&[f64]) -> C64>(
    lo: &[f64],
    hi: &[f64],
    rule: &(Vec<f64>, Vec<f64>),
    f: &F,
) -> (C64, f64) {
    let dim = lo.len();
    let (nodes, weights) = rule;
    let n = nodes.len();
    let mut idx = vec![0usize; dim];
    let mut x = vec![0.0; dim];
    let mut vol = 1.0;
    for d in 0..dim {
        vol *= hi[d] - lo[d];
    }
    let jac = vol / 2f64.powi(dim as i32);
    let mut vals: Vec<(f64, C64)> = Vec::new();
    'outer: loop {
        let mut w = jac;
        for d in 0..dim {
            let t = nodes[idx[d]];
            x[d] = 0.5 * (lo[d] + hi[d]) + 0.5 * (hi[d] - lo[d]) * t;
            w *= weights[idx[d]];
        }
        vals.push((w, f(&x)));
        for d in 0..dim {
            idx[d] += 1;
            if idx[d] < n {
                continue 'outer;
            }
            idx[d] = 0;
        }
        break;
    }
    let mut acc = C64::new(0.0, 0.0);
    for &(w, v) in &vals {
        acc += w * v;
    }
    let mean = acc / vol;
    let mut resasc = 0.0;
    for &(w, v) in &vals {
        resasc += w.abs() * (v - mean).norm();
    }
    (acc, resasc)
}

fn tensor_gauss<F: Fn(&[f64]) -> C64>(
    lo: &[f64],
    hi: &[f64],
    rule: &(Vec<f64>, Vec<f64>),
    f: &F,
) -> C64 {
    let dim = lo.len();
    let (nodes, weights) = rule;
    let n = nodes.len();
    let mut idx = vec![0usize; dim];
    let mut x = vec![0.0; dim];
    let mut jac = 1.0;
    for d in 0..dim {
        jac *= 0.5 * (hi[d] - lo[d]);
    }
    let mut acc = C64::new(0.0, 0.0);
    'outer: loop {
        let mut w = jac;
        for d in 0..dim {
            let t = nodes[idx[d]];
            x[d] = 0.5 * (lo[d] + hi[d]) + 0.5 * (hi[d] - lo[d]) * t;
            w *= weights[idx[d]];
        }
        acc += w * f(&x);
        // odometer
        for d in 0..dim {
            idx[d] += 1;
            if idx[d] < n {
                continue 'outer;
            }
            idx[d] = 0;
        }
        break;
    }
    acc
}

/// In-place iterative radix-2 FFT (forward for `inverse = false`).
pub fn fft(buf: &mut [C64], inverse: bool) {
    let n = buf.len();
    assert!(n.is_power_of_two());
    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let ang = sign * 2.0 * core::f64::consts::PI / len as f64;
        let wl = C64::new(ang.cos(), ang.sin());
        let mut i = 0;
        while i < n {
            let mut w = C64::new(1.0, 0.0);
            for k in 0..len / 2 {
                let u = buf[i + k];
                let v = buf[i + k + len / 2] * w;
                buf[i + k] = u + v;
                buf[i + k + len / 2] = u - v;
                w *= wl;
            }
            i += len;
        }
        len <<= 1;
    }
    if inverse {
        let scale = 1.0 / n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }
}

/// Linear convolution of two equal-length sequences via FFT;
/// result has length 2 len - 1.
pub fn convolve(a: &[C64], b: &[C64]) -> Vec<C64> {
    let out_len = a.len() + b.len() - 1;
    let n = out_len.next_power_of_two();
    let mut fa = vec![C64::new(0.0, 0.0); n];
    let mut fb = vec![C64::new(0.0, 0.0); n];
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    fft(&mut fa, false);
    fft(&mut fb, false);
    for i in 0..n {
        fa[i] *= fb[i];
    }
    fft(&mut fa, true);
    fa.truncate(out_len);
    fa
}

/// Sum `sum_{k>=0} t(k)` for terms with a power-law tail
/// `t(k) ~ c k^(-s) (1 + O(1/k))`, `s >= 2`, by Richardson extrapolation of
/// the partial sums at n, 2n, 4n, 8n.
pub fn power_tail_sum<F: Fn(u64) -> C64>(term: F, s: f64, n0: u64) -> C64 {
    let ns = [n0, 2 * n0, 4 * n0, 8 * n0];
    let mut partial = [C64::new(0.0, 0.0); 4];
    let mut acc = C64::new(0.0, 0.0);
    let mut next = 0usize;
    for k in 0..ns[3] {
        if next < 4 && k == ns[next] {
            partial[next] = acc;
            next += 1;
        }
        acc += term(k);
    }
    partial[3] = acc;
    // model: S_n = S + a n^(1-s) + b n^(-s) + c n^(-s-1)
    let powers = [1.0 - s, -s, -s - 1.0];
    let mut m = [[C64::new(0.0, 0.0); 4]; 4];
    let mut rhs = [C64::new(0.0, 0.0); 4];
    for (j, &n) in ns.iter().enumerate() {
        let nf = n as f64;
        m[j][0] = C64::new(1.0, 0.0);
        for (i, &p) in powers.iter().enumerate() {
            m[j][i + 1] = C64::new(nf.powf(p), 0.0);
        }
        rhs[j] = partial[j];
    }
    solve4(&mut m, &mut rhs);
    rhs[0]
}

/// Solve a 4x4 complex linear system in place (partial pivoting).
pub fn solve4_pub(m: &mut [[C64; 4]; 4], rhs: &mut [C64; 4]) {
    solve4(m, rhs)
}

fn solve4(m: &mut [[C64; 4]; 4], rhs: &mut [C64; 4]) {
    for col in 0..4 {
        let mut piv = col;
        for r in col + 1..4 {
            if m[r][col].norm() > m[piv][col].norm() {
                piv = r;
            }
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        let d = m[col][col];
        for r in 0..4 {
            if r != col && m[r][col].norm() > 0.0 {
                let factor = m[r][col] / d;
                for c in col..4 {
                    let sub = factor * m[col][c];
                    m[r][c] -= sub;
                }
                let sub = factor * rhs[col];
                rhs[r] -= sub;
            }
        }
    }
    for col in 0..4 {
        rhs[col] /= m[col][col];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(5);
        // degree 9 is exact for a 5-point rule
        let mut acc = 0.0;
        for i in 0..5 {
            acc += w[i] * x[i].powi(8);
        }
        assert!((acc - 2.0 / 9.0).abs() < 1e-13);
    }

    #[test]
    fn panel_gauss_cosine() {
        let v = panel_gauss(|x| C64::new((10.0 * x).cos(), 0.0), 0.0, 1.0, 20, 8);
        assert!((v.re - (10.0f64).sin() / 10.0).abs() < 1e-12);
    }

    #[test]
    fn cubature_separable_oscillatory() {
        // int_0^1 int_0^1 cos(8x) cos(8y) = (sin 8 / 8)^2
        let spec = CubatureSpec {
            rel_tol: 1e-9,
            ..Default::default()
        };
        let f = |x: &[f64]| C64::new((8.0 * x[0]).cos() * (8.0 * x[1]).cos(), 0.0);
        let p = |x: &[f64]| 8.0 * (x[0] + x[1]);
        let r = adaptive_cubature(&[0.0, 0.0], &[1.0, 1.0], f, p, &spec);
        let exact = (8.0f64.sin() / 8.0).powi(2);
        assert!(r.converged);
        assert!((r.value.re - exact).abs() < 1e-8, "got {}", r.value.re);
    }

    #[test]
    fn cubature_3d_gaussian() {
        let f = |x: &[f64]| C64::new((-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp(), 0.0);
        let r = adaptive_cubature(
            &[-4.0, -4.0, -4.0],
            &[4.0, 4.0, 4.0],
            f,
            |_| 0.0,
            &CubatureSpec {
                rel_tol: 1e-8,
                ..Default::default()
            },
        );
        let exact = PI.sqrt().powi(3) * {
            // erf(4)^3 correction is ~1e-7 relative; use erf(4) ~ 0.99999998458
            0.99999998458274209f64.powi(3)
        };
        assert!((r.value.re - exact).abs() < 1e-6 * exact);
    }

    #[test]
    fn fft_convolution_matches_direct() {
        let a: Vec<C64> = (0..13).map(|k| C64::new(k as f64, (k * k) as f64 * 0.1)).collect();
        let b: Vec<C64> = (0..13).map(|k| C64::new(1.0 / (k + 1) as f64, -(k as f64))).collect();
        let conv = convolve(&a, &b);
        for m in 0..25 {
            let mut direct = C64::new(0.0, 0.0);
            for i in 0..13 {
                if m >= i && m - i < 13 {
                    direct += a[i] * b[m - i];
                }
            }
            assert!((conv[m] - direct).norm() < 1e-10 * (1.0 + direct.norm()));
        }
    }

    #[test]
    fn tail_sum_zeta2() {
        // sum 1/(k+1)^2 = pi^2/6
        let v = power_tail_sum(|k| C64::new(1.0 / ((k + 1) as f64).powi(2), 0.0), 2.0, 256);
        assert!((v.re - PI * PI / 6.0).abs() < 1e-10, "got {}", v.re);
    }
}
