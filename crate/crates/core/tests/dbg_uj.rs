use gsp4_core::arith::*;
use gsp4_core::geometry::WeylKind;
use gsp4_core::spectral::TestFunctionSpec;
use std::time::Instant;

#[test]
fn u_vs_j() {
    let spec = TestFunctionSpec::new(0.0, 0.0, 1.0, 1.0);
    let q = QuadratureSpec { rel_tol: 1e-6, abs_tol: 1e-13, max_cells: 300_000, seed: 1 };
    for (w, c, m, n) in [
        (WeylKind::Aba, (1i64, 1i64), (2i64, 2i64), (2i64, 2i64)),
        (WeylKind::Bab, (1, 1), (2, 1), (2, 1)),
        (WeylKind::W0, (1, 1), (2, 1), (2, 1)),
    ] {
        let t0 = Instant::now();
        let lhs = u_side_integral(w, c, m, n, &spec, &q);
        let a = a_w_argument(w, m, n, c);
        let j = j_transform(w, a, &spec, &q);
        let rhs = j.value / ((c.0 * c.1) as f64);
        println!(
            "{:?}: U {:+.8e}{:+.8e}i ({} cells, conv {})  J/(c1c2) {:+.8e}{:+.8e}i ({} cells)  rel {:.2e}  [{:.1}s]",
            w, lhs.value.re, lhs.value.im, lhs.cells, lhs.converged,
            rhs.re, rhs.im, j.cells,
            (lhs.value - rhs).norm() / rhs.norm(),
            t0.elapsed().as_secs_f64()
        );
    }
}
