use gsp4_core::geometry::*;

fn xi_zeta_aba(x1: f64, x2: f64, x4: f64) -> (f64, f64, f64, f64) {
    let xi1 = (x1 * x1 + 1.0).powi(2) + (x1 * x4 + x2).powi(2);
    let xi2 = x1 * x1 + x2 * x2 + x4 * x4 + 1.0;
    let z1 = x1 * x2 - x4;
    let z2 = x1 * x1 * x2 - x1.powi(3) * x4 - x1 * x4.powi(3) - x2 * x4 * x4 - 2.0 * x1 * x4;
    (xi1, xi2, z1, z2)
}

#[test]
fn orientation() {
    // x in U_aba (x5 = 0, x3 = x4), c = (2, 3)
    let (x1v, x2v, x4v) = (0.7, -0.4, 1.3);
    let x = UnipotentF { x1: x1v, x2: x2v, x4: x4v, x5: 0.0 };
    let (c1, c2) = (2.0f64, 3.0f64);
    let w = WeylKind::Aba.element().matrix.to_f64();
    let (xi1, xi2, z1, z2) = xi_zeta_aba(x1v, x2v, x4v);
    // predicted from the displayed transform (at y = 1, M = (1,1)):
    let y1_pred = c2 * xi1.sqrt() / (c1 * c1 * xi2);
    let y2_pred = c1 * c1 * xi2 / (c2 * c2 * xi1);
    let n1_pred = c2 * z1 / (c1 * c1 * xi2);
    let n5_pred = c1 * c1 * z2 / (c2 * c2 * xi1);
    for (name, cs) in [
        ("c*", c_star(&rat_i(2), &rat_i(3)).to_f64()),
        ("c*^-1", c_star(&rat(1, 2), &rat(1, 3)).to_f64()),
    ] {
        let g = mat_mul_f64(&cs, &mat_mul_f64(&w, &x.to_matrix()));
        let (n, (y1, y2), _) = iwasawa_decompose(&g);
        println!(
            "{name}: y=({y1:.6}, {y2:.6}) vs pred ({y1_pred:.6}, {y2_pred:.6}); n1 {:+.6} vs {n1_pred:+.6}; n5 {:+.6} vs {n5_pred:+.6}",
            n.x1, n.x5
        );
    }
}
