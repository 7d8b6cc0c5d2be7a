//! Matrix-level GSp(4): the symplectic form, Weyl elements, the unipotent
//! group in its explicit coordinates, torus embeddings, the additive
//! character, and exact Iwasawa/Bruhat decompositions. This is the oracle
//! layer that the explicit formulas elsewhere are checked against.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_rational::BigRational;
// required for float methods in no_std builds; redundant when std is linked
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Signed, Zero};

use crate::C64;

pub type Rat = BigRational;

pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// eta = (2, 3/2), the modular-character exponent used by measures and
/// normalisations.
pub const ETA: (f64, f64) = (2.0, 1.5);

/// `y^eta = y1^2 y2^(3/2)`.
pub fn y_pow_eta(y1: f64, y2: f64) -> f64 {
    y1 * y1 * y2.powf(1.5)
}

/// Dense exact 4x4 matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat4(pub [[Rat; 4]; 4]);

impl fmt::Debug for Mat4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for r in &self.0 {
            s.push('[');
            for e in r {
                s.push_str(&format!("{e} "));
            }
            s.push(']');
        }
        write!(f, "{s}")
    }
}

impl Mat4 {
    pub fn zero() -> Mat4 {
        Mat4(core::array::from_fn(|_| core::array::from_fn(|_| Rat::zero())))
    }

    pub fn identity() -> Mat4 {
        let mut m = Mat4::zero();
        for i in 0..4 {
            m.0[i][i] = Rat::one();
        }
        m
    }

    pub fn from_i64(rows: [[i64; 4]; 4]) -> Mat4 {
        Mat4(core::array::from_fn(|i| core::array::from_fn(|j| rat_i(rows[i][j]))))
    }

    /// The standard symplectic form J = [[0, I], [-I, 0]].
    pub fn j_form() -> Mat4 {
        Mat4::from_i64([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
    }

    pub fn mul(&self, o: &Mat4) -> Mat4 {
        let mut out = Mat4::zero();
        for i in 0..4 {
            for k in 0..4 {
                if self.0[i][k].is_zero() {
                    continue;
                }
                for j in 0..4 {
                    if !o.0[k][j].is_zero() {
                        out.0[i][j] += &self.0[i][k] * &o.0[k][j];
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat4 {
        Mat4(core::array::from_fn(|i| core::array::from_fn(|j| self.0[j][i].clone())))
    }

    pub fn scale(&self, c: &Rat) -> Mat4 {
        Mat4(core::array::from_fn(|i| core::array::from_fn(|j| &self.0[i][j] * c)))
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|r| r.iter().all(|e| e.is_integer()))
    }

    pub fn to_f64(&self) -> [[f64; 4]; 4] {
        core::array::from_fn(|i| core::array::from_fn(|j| rat_to_f64(&self.0[i][j])))
    }

    /// Similitude of a GSp(4) element: the lambda with g^T J g = lambda J,
    /// or None if g is not in the group.
    pub fn similitude(&self) -> Option<Rat> {
        let j = Mat4::j_form();
        let gtjg = self.transpose().mul(&j).mul(self);
        let lambda = gtjg.0[0][2].clone();
        let expect = j.scale(&lambda);
        if gtjg == expect && !lambda.is_zero() {
            Some(lambda)
        } else {
            None
        }
    }

    pub fn is_symplectic(&self) -> bool {
        self.similitude().map(|l| l.is_one()).unwrap_or(false)
    }

    /// Exact inverse via Gauss–Jordan; panics if singular.
    pub fn inverse(&self) -> Mat4 {
        let mut a: Vec<Vec<Rat>> = (0..4)
            .map(|i| {
                let mut row: Vec<Rat> = self.0[i].to_vec();
                for j in 0..4 {
                    row.push(if i == j { Rat::one() } else { Rat::zero() });
                }
                row
            })
            .collect();
        for col in 0..4 {
            let piv = (col..4).find(|&r| !a[r][col].is_zero()).expect("singular matrix");
            a.swap(col, piv);
            let d = a[col][col].clone();
            for j in 0..8 {
                a[col][j] = &a[col][j] / &d;
            }
            for r in 0..4 {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..8 {
                        let sub = &f * &a[col][j];
                        a[r][j] -= sub;
                    }
                }
            }
        }
        Mat4(core::array::from_fn(|i| core::array::from_fn(|j| a[i][j + 4].clone())))
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    big_to_f64(r.numer()) / big_to_f64(r.denom())
}

fn big_to_f64(b: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    b.to_f64().unwrap_or(f64::NAN)
}

/// Generators of the Weyl group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    Alpha,
    Beta,
}

/// The eight Weyl classes, named by a reduced word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeylKind {
    Id,
    A,
    B,
    Ab,
    Ba,
    Aba,
    Bab,
    W0,
}

impl WeylKind {
    pub const ALL: [WeylKind; 8] = [
        WeylKind::Id,
        WeylKind::A,
        WeylKind::B,
        WeylKind::Ab,
        WeylKind::Ba,
        WeylKind::Aba,
        WeylKind::Bab,
        WeylKind::W0,
    ];

    pub fn word(self) -> &'static [Gen] {
        use Gen::*;
        match self {
            WeylKind::Id => &[],
            WeylKind::A => &[Alpha],
            WeylKind::B => &[Beta],
            WeylKind::Ab => &[Alpha, Beta],
            WeylKind::Ba => &[Beta, Alpha],
            WeylKind::Aba => &[Alpha, Beta, Alpha],
            WeylKind::Bab => &[Beta, Alpha, Beta],
            WeylKind::W0 => &[Alpha, Beta, Alpha, Beta],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WeylKind::Id => "id",
            WeylKind::A => "a",
            WeylKind::B => "b",
            WeylKind::Ab => "ab",
            WeylKind::Ba => "ba",
            WeylKind::Aba => "aba",
            WeylKind::Bab => "bab",
            WeylKind::W0 => "w0",
        }
    }

    pub fn element(self) -> WeylElement {
        WeylElement {
            kind: self,
            matrix: weyl_matrix(self.word()),
        }
    }

    /// Word length; also the dimension of `U_w`.
    pub fn length(self) -> usize {
        self.word().len()
    }
}

/// A Weyl element: reduced word plus its exact generator-product matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub kind: WeylKind,
    pub matrix: Mat4,
}

pub fn gen_matrix(g: Gen) -> Mat4 {
    // alpha rotates both symplectic planes, beta reflects the long root;
    // the (4,3) entry of alpha must be -1 for alpha^T J alpha = J to hold
    match g {
        Gen::Alpha => Mat4::from_i64([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]),
        Gen::Beta => Mat4::from_i64([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0]]),
    }
}

/// Product of generator matrices for a word over {alpha, beta}.
pub fn weyl_matrix(word: &[Gen]) -> Mat4 {
    let mut m = Mat4::identity();
    for &g in word {
        m = m.mul(&gen_matrix(g));
    }
    m
}

/// Two group elements represent the same Weyl class iff they differ by a
/// diagonal torus element.
pub fn same_weyl_coset(a: &Mat4, b: &Mat4) -> bool {
    let q = a.mul(&b.inverse());
    for i in 0..4 {
        for j in 0..4 {
            if i != j && !q.0[i][j].is_zero() {
                return false;
            }
        }
    }
    true
}

/// Coordinates on the unipotent group U: entries x1, x2, x4, x5 with
/// x3 = x4 + x1 x5 dependent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unipotent {
    pub x1: Rat,
    pub x2: Rat,
    pub x4: Rat,
    pub x5: Rat,
}

impl Unipotent {
    pub fn zero() -> Unipotent {
        Unipotent {
            x1: Rat::zero(),
            x2: Rat::zero(),
            x4: Rat::zero(),
            x5: Rat::zero(),
        }
    }

    pub fn new(x1: Rat, x2: Rat, x4: Rat, x5: Rat) -> Unipotent {
        Unipotent { x1, x2, x4, x5 }
    }

    pub fn x3(&self) -> Rat {
        &self.x4 + &self.x1 * &self.x5
    }

    pub fn to_matrix(&self) -> Mat4 {
        let mut m = Mat4::identity();
        m.0[0][1] = self.x1.clone();
        m.0[0][2] = self.x2.clone();
        m.0[0][3] = self.x3();
        m.0[1][2] = self.x4.clone();
        m.0[1][3] = self.x5.clone();
        m.0[3][2] = -self.x1.clone();
        m
    }

    /// Read coordinates off a matrix known to lie in U.
    pub fn from_matrix(m: &Mat4) -> Option<Unipotent> {
        let u = Unipotent {
            x1: m.0[0][1].clone(),
            x2: m.0[0][2].clone(),
            x4: m.0[1][2].clone(),
            x5: m.0[1][3].clone(),
        };
        if &u.to_matrix() == m {
            Some(u)
        } else {
            None
        }
    }

    /// Group law (matrix product of the two coordinate matrices).
    pub fn compose(&self, b: &Unipotent) -> Unipotent {
        Unipotent {
            x1: &self.x1 + &b.x1,
            x5: &self.x5 + &b.x5,
            x4: &self.x4 + &b.x4 - &self.x5 * &b.x1,
            x2: &self.x2 + &b.x2 + &self.x1 * &b.x4 - self.x3() * &b.x1,
        }
    }

    pub fn inverse(&self) -> Unipotent {
        let x1 = -self.x1.clone();
        let x5 = -self.x5.clone();
        let x4 = -(&self.x4 + &self.x5 * &self.x1);
        let x2 = -(&self.x2 + &self.x1 * &x4 - self.x3() * &x1);
        Unipotent { x1, x2, x4, x5 }
    }

    pub fn is_integral(&self) -> bool {
        self.x1.is_integer() && self.x2.is_integer() && self.x4.is_integer() && self.x5.is_integer()
    }

    /// Left reduction modulo U(Z): the unique representative of U(Z)·x with
    /// all four coordinates in [0, 1). Returns (reduced, u) with u x reduced.
    pub fn reduce_left_mod_z(&self) -> (Unipotent, Unipotent) {
        // coordinates are fixed in the order x1, x5, x4, x2 because of the
        // group-law couplings
        let a1 = -self.x1.floor();
        let a5 = -self.x5.floor();
        // (u x)4 = a4 + x4 - a5 x1
        let partial4 = &self.x4 - &a5 * &self.x1;
        let a4 = -partial4.floor();
        // (u x)2 = a2 + x2 + a1 x4 - a3 x1, with a3 = a4 + a1 a5
        let a3 = &a4 + &a1 * &a5;
        let partial2 = &self.x2 + &a1 * &self.x4 - &a3 * &self.x1;
        let a2 = -partial2.floor();
        let u = Unipotent::new(a1, a2, a4, a5);
        let red = u.compose(self);
        (red, u)
    }

    pub fn to_f64(&self) -> UnipotentF {
        UnipotentF {
            x1: rat_to_f64(&self.x1),
            x2: rat_to_f64(&self.x2),
            x4: rat_to_f64(&self.x4),
            x5: rat_to_f64(&self.x5),
        }
    }
}

/// Floating-point unipotent coordinates (Iwasawa output, quadrature input).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnipotentF {
    pub x1: f64,
    pub x2: f64,
    pub x4: f64,
    pub x5: f64,
}

impl UnipotentF {
    pub fn zero() -> Self {
        UnipotentF {
            x1: 0.0,
            x2: 0.0,
            x4: 0.0,
            x5: 0.0,
        }
    }

    pub fn x3(&self) -> f64 {
        self.x4 + self.x1 * self.x5
    }

    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            m[i][i] = 1.0;
        }
        m[0][1] = self.x1;
        m[0][2] = self.x2;
        m[0][3] = self.x3();
        m[1][2] = self.x4;
        m[1][3] = self.x5;
        m[3][2] = -self.x1;
        m
    }
}

/// iota(y) = diag(y1 y2^(1/2), y2^(1/2), 1/(y1 y2^(1/2)), 1/y2^(1/2)).
pub fn iota_f64(y1: f64, y2: f64) -> [[f64; 4]; 4] {
    let s = y2.sqrt();
    let mut m = [[0.0; 4]; 4];
    m[0][0] = y1 * s;
    m[1][1] = s;
    m[2][2] = 1.0 / (y1 * s);
    m[3][3] = 1.0 / s;
    m
}

/// c* = diag(1/c1, c1/c2, c1, c2/c1).
pub fn c_star(c1: &Rat, c2: &Rat) -> Mat4 {
    let mut m = Mat4::zero();
    m.0[0][0] = Rat::one() / c1;
    m.0[1][1] = c1 / c2;
    m.0[2][2] = c1.clone();
    m.0[3][3] = c2 / c1;
    m
}

pub fn mat_mul_f64(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            if a[i][k] != 0.0 {
                for j in 0..4 {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

/// Iwasawa decomposition g = x · iota(y) · k of a real symplectic matrix,
/// through the Siegel upper half-space: Z = (A i + B)(C i + D)^(-1) = X + iY
/// determines x and y, and k is recovered by division.
///
/// Returns (x, (y1, y2), k).
pub fn iwasawa_decompose(g: &[[f64; 4]; 4]) -> (UnipotentF, (f64, f64), [[f64; 4]; 4]) {
    let a = [[g[0][0], g[0][1]], [g[1][0], g[1][1]]];
    let b = [[g[0][2], g[0][3]], [g[1][2], g[1][3]]];
    let c = [[g[2][0], g[2][1]], [g[3][0], g[3][1]]];
    let d = [[g[2][2], g[2][3]], [g[3][2], g[3][3]]];
    let i = C64::new(0.0, 1.0);
    // N = A i + B, M = C i + D, Z = N M^(-1)
    let n: [[C64; 2]; 2] = core::array::from_fn(|r| core::array::from_fn(|s| i * a[r][s] + b[r][s]));
    let m: [[C64; 2]; 2] = core::array::from_fn(|r| core::array::from_fn(|s| i * c[r][s] + d[r][s]));
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let minv = [
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ];
    let mut z = [[C64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for s in 0..2 {
            for k in 0..2 {
                z[r][s] += n[r][k] * minv[k][s];
            }
        }
    }
    let yb = [[z[0][0].im, z[0][1].im], [z[1][0].im, z[1][1].im]];
    let xb = [[z[0][0].re, z[0][1].re], [z[1][0].re, z[1][1].re]];
    // Y = [[d1^2 + x1^2 d2^2, x1 d2^2], [x1 d2^2, d2^2]]
    let d2sq = yb[1][1];
    let x1 = 0.5 * (yb[0][1] + yb[1][0]) / d2sq;
    let d1sq = yb[0][0] - x1 * x1 * d2sq;
    let y2 = d2sq;
    let y1 = (d1sq / d2sq).sqrt();
    // X = [[x2 + x1 x3, x3], [x4 + x1 x5, x5]] with x3 = x4 + x1 x5
    let x5 = xb[1][1];
    let x3 = 0.5 * (xb[0][1] + xb[1][0]);
    let x4 = x3 - x1 * x5;
    let x2 = xb[0][0] - x1 * x3;
    let x = UnipotentF { x1, x2, x4, x5 };
    // k = iota(y)^(-1) x^(-1) g
    let xm = x.to_matrix();
    let xm_inv = invert_f64(&xm);
    let mut iot_inv = [[0.0; 4]; 4];
    let s = y2.sqrt();
    iot_inv[0][0] = 1.0 / (y1 * s);
    iot_inv[1][1] = 1.0 / s;
    iot_inv[2][2] = y1 * s;
    iot_inv[3][3] = s;
    let k = mat_mul_f64(&iot_inv, &mat_mul_f64(&xm_inv, g));
    (x, (y1, y2), k)
}

fn invert_f64(m: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut a = [[0.0; 8]; 4];
    for i in 0..4 {
        for j in 0..4 {
            a[i][j] = m[i][j];
        }
        a[i][i + 4] = 1.0;
    }
    for col in 0..4 {
        let mut piv = col;
        for r in col + 1..4 {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        a.swap(col, piv);
        let d = a[col][col];
        for j in 0..8 {
            a[col][j] /= d;
        }
        for r in 0..4 {
            if r != col {
                let f = a[r][col];
                for j in 0..8 {
                    a[r][j] -= f * a[col][j];
                }
            }
        }
    }
    core::array::from_fn(|i| core::array::from_fn(|j| a[i][j + 4]))
}

/// Additive character index M = (m1, m2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharacterIndex {
    pub m1: i64,
    pub m2: i64,
}

impl CharacterIndex {
    pub fn new(m1: i64, m2: i64) -> Self {
        CharacterIndex { m1, m2 }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.m1 != 0 && self.m2 != 0
    }
}

/// Exact phase of psi_M at rational unipotent coordinates:
/// m1 x1 + m2 x5, reduced mod 1.
pub fn psi_phase(m: CharacterIndex, x: &Unipotent) -> Rat {
    let p = rat_i(m.m1) * &x.x1 + rat_i(m.m2) * &x.x5;
    &p - p.floor()
}

/// psi_M(x) = e(m1 x1 + m2 x5) as a complex number.
pub fn psi_value(m: CharacterIndex, x: &Unipotent) -> C64 {
    phase_to_c64(&psi_phase(m, x))
}

pub fn phase_to_c64(phase: &Rat) -> C64 {
    let p = rat_to_f64(phase);
    let two_pi = 2.0 * core::f64::consts::PI;
    C64::new((two_pi * p).cos(), (two_pi * p).sin())
}

/// Coordinate subsets spanning U_w = U ∩ w^(-1) (lower unipotent) w, per
/// Weyl class. Indices over {x1, x2, x4, x5}; x3 follows from the others.
pub fn u_w_coords(w: WeylKind) -> &'static [usize] {
    match w {
        WeylKind::Id => &[],
        WeylKind::A => &[1],
        WeylKind::B => &[5],
        WeylKind::Ab => &[4, 5],
        WeylKind::Ba => &[1, 2],
        WeylKind::Aba => &[1, 2, 4],
        WeylKind::Bab => &[2, 4, 5],
        WeylKind::W0 => &[1, 2, 4, 5],
    }
}

/// Build an element of U_w from coordinate values in the order given by
/// `u_w_coords(w)`.
pub fn unipotent_in_u_w(w: WeylKind, vals: &[Rat]) -> Unipotent {
    let coords = u_w_coords(w);
    assert_eq!(coords.len(), vals.len());
    let mut x = Unipotent::zero();
    for (&c, v) in coords.iter().zip(vals.iter()) {
        match c {
            1 => x.x1 = v.clone(),
            2 => x.x2 = v.clone(),
            4 => x.x4 = v.clone(),
            5 => x.x5 = v.clone(),
            _ => unreachable!(),
        }
    }
    x
}

/// Membership in the opposite unipotent: m is the transpose of a U-matrix.
#[cfg(test)]
fn is_in_transposed_u(m: &Mat4) -> bool {
    Unipotent::from_matrix(&m.transpose()).is_some()
}

/// Errors from the exact Bruhat decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruhatError {
    NotSymplectic,
    CellNotFound,
    Inconsistent(&'static str),
}

impl fmt::Display for BruhatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BruhatError::NotSymplectic => write!(f, "matrix is not in Sp(4, Q)"),
            BruhatError::CellNotFound => write!(f, "no Bruhat cell matches the rank pattern"),
            BruhatError::Inconsistent(s) => write!(f, "inconsistent decomposition: {s}"),
        }
    }
}

/// Exact Bruhat data: g = x · w · sign · c*(c) · x', with x in U(Q),
/// x' in U_w(Q), c positive rationals, and sign = diag(e1, e2, e1, e2).
#[derive(Debug, Clone)]
pub struct BruhatDecomposition {
    pub x: Unipotent,
    pub w: WeylKind,
    pub sign: (i8, i8),
    pub c: (Rat, Rat),
    pub x_prime: Unipotent,
}

impl BruhatDecomposition {
    pub fn sign_matrix(&self) -> Mat4 {
        let mut m = Mat4::zero();
        let e1 = rat_i(self.sign.0 as i64);
        let e2 = rat_i(self.sign.1 as i64);
        m.0[0][0] = e1.clone();
        m.0[1][1] = e2.clone();
        m.0[2][2] = e1;
        m.0[3][3] = e2;
        m
    }

    pub fn reconstruct(&self) -> Mat4 {
        self.x
            .to_matrix()
            .mul(&self.w.element().matrix)
            .mul(&self.sign_matrix())
            .mul(&c_star(&self.c.0, &self.c.1))
            .mul(&self.x_prime.to_matrix())
    }
}

/// Basis permutation (e1, e2, e4, e3): conjugation by this involution maps
/// U onto an honestly upper-triangular unipotent group, so triangular
/// elimination and rank-pattern arguments apply verbatim.
fn perm_conj(m: &Mat4) -> Mat4 {
    const P: [usize; 4] = [0, 1, 3, 2];
    Mat4(core::array::from_fn(|i| {
        core::array::from_fn(|j| m.0[P[i]][P[j]].clone())
    }))
}

/// Rank of the lower-left i x j submatrix (rows 4-i..4, cols 0..j).
fn lower_left_rank(m: &Mat4, i: usize, j: usize) -> usize {
    let mut a: Vec<Vec<Rat>> = (4 - i..4).map(|r| m.0[r][..j].to_vec()).collect();
    let mut rank = 0;
    for col in 0..j {
        if let Some(p) = (rank..i).find(|&r| !a[r][col].is_zero()) {
            a.swap(rank, p);
            for r in rank + 1..i {
                if !a[r][col].is_zero() {
                    let f = &a[r][col] / &a[rank][col];
                    for cc in col..j {
                        let sub = &f * &a[rank][cc];
                        a[r][cc] -= sub;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

fn rank_pattern(m: &Mat4) -> [[usize; 4]; 4] {
    let p = perm_conj(m);
    core::array::from_fn(|i| core::array::from_fn(|j| lower_left_rank(&p, i + 1, j + 1)))
}

/// The Bruhat cell of g, detected by matching lower-left rank patterns (in
/// the triangularising basis) against the eight Weyl matrices.
pub fn bruhat_cell(g: &Mat4) -> Option<WeylKind> {
    let pat = rank_pattern(g);
    WeylKind::ALL
        .into_iter()
        .find(|w| rank_pattern(&w.element().matrix) == pat)
}

/// Exact Bruhat decomposition of g in Sp(4, Q) by staircase elimination in
/// the triangularising basis; the result is canonicalised so that x' has no
/// component along U ∩ w U w^(-1).
pub fn bruhat_decompose(g: &Mat4) -> Result<BruhatDecomposition, BruhatError> {
    if !g.is_symplectic() {
        return Err(BruhatError::NotSymplectic);
    }
    let mut m = perm_conj(g);
    let mut u1 = Mat4::identity(); // accumulates x in the permuted basis
    let mut u2 = Mat4::identity(); // accumulates x' in the permuted basis
    let mut claimed = [false; 4];
    for j in 0..4 {
        // pivot: bottommost unclaimed nonzero in column j
        let i = (0..4)
            .rev()
            .find(|&r| !claimed[r] && !m.0[r][j].is_zero())
            .ok_or(BruhatError::Inconsistent("singular"))?;
        claimed[i] = true;
        // clear the column above the pivot: row r += c * row i  (r < i)
        for r in 0..i {
            if !m.0[r][j].is_zero() {
                let c = -(&m.0[r][j] / &m.0[i][j]);
                for col in 0..4 {
                    let add = &c * &m.0[i][col];
                    m.0[r][col] += add;
                }
                // g' = u1 m u2 is invariant: u1 <- u1 * (I + c E_{r,i})^(-1)
                for row in 0..4 {
                    let sub = &c * &u1.0[row][r].clone();
                    u1.0[row][i] -= sub;
                }
            }
        }
        // clear the pivot row to the right: col jj += c * col j (jj > j)
        for jj in j + 1..4 {
            if !m.0[i][jj].is_zero() {
                let c = -(&m.0[i][jj] / &m.0[i][j]);
                for row in 0..4 {
                    let add = &c * &m.0[row][j];
                    m.0[row][jj] += add;
                }
                // u2 <- (I + c E_{j,jj})^(-1) * u2
                for col in 0..4 {
                    let sub = &c * &u2.0[jj][col].clone();
                    u2.0[j][col] -= sub;
                }
            }
        }
    }
    // now g' = u1 · m · u2 with m monomial; map back to the original basis
    let x_m = perm_conj(&u1);
    let xp_m = perm_conj(&u2);
    let mono = perm_conj(&m);
    let x = Unipotent::from_matrix(&x_m).ok_or(BruhatError::Inconsistent("x not in U"))?;
    let xp_raw = Unipotent::from_matrix(&xp_m).ok_or(BruhatError::Inconsistent("x' not in U"))?;
    // identify the Weyl class from the support of the monomial part
    let w = WeylKind::ALL
        .into_iter()
        .find(|w| {
            let wm = &w.element().matrix;
            (0..4).all(|i| (0..4).all(|j| wm.0[i][j].is_zero() == mono.0[i][j].is_zero()))
        })
        .ok_or(BruhatError::CellNotFound)?;
    // torus: mono = w_can · t
    let t = w.element().matrix.inverse().mul(&mono);
    for i in 0..4 {
        for j in 0..4 {
            if i != j && !t.0[i][j].is_zero() {
                return Err(BruhatError::Inconsistent("torus not diagonal"));
            }
        }
    }
    // canonicalise: strip from x' its component along U ∩ w U w^(-1) and
    // absorb it into x through w t
    let (h, xp) = split_off_u_w(w, &xp_raw);
    let wt = w.element().matrix.mul(&t);
    let absorbed = wt.mul(&h.to_matrix()).mul(&wt.inverse());
    let absorbed_u =
        Unipotent::from_matrix(&absorbed).ok_or(BruhatError::Inconsistent("absorb"))?;
    let x = x.compose(&absorbed_u);
    // sign bookkeeping: t = sign · c* with positive c
    let t1 = t.0[0][0].clone();
    let t2 = t.0[1][1].clone();
    if t.0[2][2] != Rat::one() / &t1 || t.0[3][3] != Rat::one() / &t2 {
        return Err(BruhatError::Inconsistent("torus shape"));
    }
    let e1 = if t1.is_negative() { -1i8 } else { 1 };
    let e2 = if t2.is_negative() { -1i8 } else { 1 };
    let at1 = t1.abs();
    let at2 = t2.abs();
    // positive torus in c* coordinates: |t1| = 1/c1, |t2| = c1/c2
    let c1 = Rat::one() / &at1;
    let c2 = &c1 / &at2;
    let dec = BruhatDecomposition {
        x,
        w,
        sign: (e1, e2),
        c: (c1, c2),
        x_prime: xp,
    };
    if &dec.reconstruct() != g {
        return Err(BruhatError::Inconsistent("reconstruction"));
    }
    Ok(dec)
}

/// Split x' = h ∘ x_w with h supported on the complement coordinates
/// (the roots kept positive by w) and x_w in U_w.
pub fn split_off_u_w(w: WeylKind, xp: &Unipotent) -> (Unipotent, Unipotent) {
    let inw = u_w_coords(w);
    let mut h = Unipotent::zero();
    let mut t = Unipotent::zero();
    // x1 and x5 split directly
    if inw.contains(&1) {
        t.x1 = xp.x1.clone();
    } else {
        h.x1 = xp.x1.clone();
    }
    if inw.contains(&5) {
        t.x5 = xp.x5.clone();
    } else {
        h.x5 = xp.x5.clone();
    }
    // x'4 = h4 + t4 - h5 t1
    let rem4 = &xp.x4 + &h.x5 * &t.x1;
    if inw.contains(&4) {
        t.x4 = rem4;
    } else {
        h.x4 = rem4;
    }
    // x'2 = h2 + t2 + h1 t4 - h3 t1, with h3 = h4 + h1 h5
    let h3 = &h.x4 + &h.x1 * &h.x5;
    let rem2 = &xp.x2 - &h.x1 * &t.x4 + &h3 * &t.x1;
    if inw.contains(&2) {
        t.x2 = rem2;
    } else {
        h.x2 = rem2;
    }
    debug_assert_eq!(&h.compose(&t), xp);
    (h, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    fn rat_rng(rng: &CounterRng, ctr: u64, span: i64, den: i64) -> Rat {
        let n = (rng.uniform(ctr) * (2 * span * den) as f64) as i64 - span * den;
        rat(n, den)
    }

    #[test]
    fn generators_are_symplectic() {
        for g in [Gen::Alpha, Gen::Beta] {
            assert!(gen_matrix(g).is_symplectic());
        }
        let w0 = weyl_matrix(WeylKind::W0.word());
        assert!(w0.is_symplectic());
        // (alpha beta)^4 lands in the torus (it is -I), so it is the
        // identity Weyl class; alpha^2 = -I likewise
        let ab = weyl_matrix(&[Gen::Alpha, Gen::Beta]);
        let ab4 = ab.mul(&ab).mul(&ab).mul(&ab);
        assert!(same_weyl_coset(&ab4, &Mat4::identity()));
        let a2 = gen_matrix(Gen::Alpha).mul(&gen_matrix(Gen::Alpha));
        assert_eq!(a2, Mat4::identity().scale(&rat_i(-1)));
    }

    #[test]
    fn weyl_word_identity() {
        assert_eq!(weyl_matrix(&[]), Mat4::identity());
    }

    #[test]
    fn weyl_group_has_eight_classes() {
        // enumerate all words up to length 6 and count coset classes
        let mut words: Vec<Vec<Gen>> = alloc::vec![alloc::vec![]];
        let mut frontier: Vec<Vec<Gen>> = alloc::vec![alloc::vec![]];
        for _ in 0..6 {
            let mut next = Vec::new();
            for w in &frontier {
                for g in [Gen::Alpha, Gen::Beta] {
                    let mut nw = w.clone();
                    nw.push(g);
                    next.push(nw);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let mut reps: Vec<Mat4> = Vec::new();
        for w in &words {
            let m = weyl_matrix(w);
            if !reps.iter().any(|r| same_weyl_coset(r, &m)) {
                reps.push(m);
            }
        }
        assert_eq!(reps.len(), 8);
        for (i, a) in WeylKind::ALL.iter().enumerate() {
            for b in WeylKind::ALL.iter().skip(i + 1) {
                assert!(!same_weyl_coset(&a.element().matrix, &b.element().matrix));
            }
        }
    }

    #[test]
    fn u_w_coords_conjugate_lower() {
        for w in WeylKind::ALL {
            assert_eq!(u_w_coords(w).len(), w.length());
            let wm = w.element().matrix;
            let winv = wm.inverse();
            let vals: Vec<Rat> = (0..w.length()).map(|k| rat(2 * k as i64 + 3, 7)).collect();
            let x = unipotent_in_u_w(w, &vals);
            let conj = wm.mul(&x.to_matrix()).mul(&winv);
            assert!(
                is_in_transposed_u(&conj),
                "w = {w:?}: conjugate not in transposed U: {conj:?}"
            );
            // closure under the group law
            let vals2: Vec<Rat> = (0..w.length()).map(|k| rat(k as i64 + 1, 3)).collect();
            let y = unipotent_in_u_w(w, &vals2);
            let prod = x.compose(&y);
            let inw = u_w_coords(w);
            for (coord, val) in [
                (1usize, prod.x1.clone()),
                (2, prod.x2.clone()),
                (4, prod.x4.clone()),
                (5, prod.x5.clone()),
            ] {
                if !inw.contains(&coord) {
                    assert!(val.is_zero(), "w = {w:?}: U_w not closed in coord {coord}");
                }
            }
        }
    }

    #[test]
    fn unipotent_group_law_matches_matrices() {
        let rng = CounterRng::new(3);
        for t in 0..20 {
            let a = Unipotent::new(
                rat_rng(&rng, 4 * t, 5, 6),
                rat_rng(&rng, 4 * t + 1, 5, 6),
                rat_rng(&rng, 4 * t + 2, 5, 6),
                rat_rng(&rng, 4 * t + 3, 5, 6),
            );
            let b = Unipotent::new(
                rat_rng(&rng, 4 * t + 100, 5, 4),
                rat_rng(&rng, 4 * t + 101, 5, 4),
                rat_rng(&rng, 4 * t + 102, 5, 4),
                rat_rng(&rng, 4 * t + 103, 5, 4),
            );
            let prod = a.compose(&b);
            assert_eq!(prod.to_matrix(), a.to_matrix().mul(&b.to_matrix()));
            let inv = a.inverse();
            assert_eq!(a.compose(&inv), Unipotent::zero());
            assert!(a.to_matrix().is_symplectic());
        }
    }

    #[test]
    fn psi_is_exact_and_homomorphic() {
        let m = CharacterIndex::new(2, 3);
        let x = Unipotent::new(rat(1, 4), rat_i(0), rat_i(0), rat(1, 6));
        // 2/4 + 3/6 = 1 -> phase 0
        assert!(psi_phase(m, &x).is_zero());
        assert!((psi_value(m, &x) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((psi_value(m, &Unipotent::zero()) - C64::new(1.0, 0.0)).norm() < 1e-15);
        // homomorphism in the abelianised coordinates
        let rng = CounterRng::new(11);
        for t in 0..10 {
            let a = Unipotent::new(
                rat_rng(&rng, 4 * t, 3, 5),
                rat_rng(&rng, 4 * t + 1, 3, 5),
                rat_rng(&rng, 4 * t + 2, 3, 5),
                rat_rng(&rng, 4 * t + 3, 3, 5),
            );
            let b = Unipotent::new(
                rat_rng(&rng, 4 * t + 50, 3, 7),
                rat_rng(&rng, 4 * t + 51, 3, 7),
                rat_rng(&rng, 4 * t + 52, 3, 7),
                rat_rng(&rng, 4 * t + 53, 3, 7),
            );
            let lhs = psi_phase(m, &a.compose(&b));
            let rhs = psi_phase(m, &a) + psi_phase(m, &b);
            let diff = &lhs - &rhs;
            assert!(diff.is_integer(), "psi not multiplicative");
        }
    }

    #[test]
    fn iwasawa_of_torus_and_unipotent() {
        // g = iota(y): x = 0, same y, k = id
        let g = iota_f64(1.7, 0.6);
        let (x, (y1, y2), k) = iwasawa_decompose(&g);
        assert!(x.x1.abs() < 1e-12 && x.x2.abs() < 1e-12);
        assert!((y1 - 1.7).abs() < 1e-12 && (y2 - 0.6).abs() < 1e-12);
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((k[i][j] - e).abs() < 1e-10);
            }
        }
        // g = u in U(R): recovers coordinates, y = (1,1)
        let u = UnipotentF {
            x1: 0.3,
            x2: -1.2,
            x4: 0.8,
            x5: 2.5,
        };
        let (x, (y1, y2), _) = iwasawa_decompose(&u.to_matrix());
        assert!((x.x1 - u.x1).abs() < 1e-12);
        assert!((x.x2 - u.x2).abs() < 1e-12);
        assert!((x.x4 - u.x4).abs() < 1e-12);
        assert!((x.x5 - u.x5).abs() < 1e-12);
        assert!((y1 - 1.0).abs() < 1e-12 && (y2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn iwasawa_reconstructs_generic_element() {
        let rng = CounterRng::new(5);
        for t in 0..10 {
            let u = Unipotent::new(
                rat_rng(&rng, 4 * t, 2, 3),
                rat_rng(&rng, 4 * t + 1, 2, 3),
                rat_rng(&rng, 4 * t + 2, 2, 3),
                rat_rng(&rng, 4 * t + 3, 2, 3),
            );
            let w = WeylKind::ALL[(rng.u64_at(1000 + t) % 8) as usize];
            let g = u.to_matrix().mul(&w.element().matrix).to_f64();
            let (x, (y1, y2), k) = iwasawa_decompose(&g);
            assert!(y1 > 0.0 && y2 > 0.0);
            let kt: [[f64; 4]; 4] = core::array::from_fn(|i| core::array::from_fn(|j| k[j][i]));
            let ktk = mat_mul_f64(&kt, &k);
            for i in 0..4 {
                for j in 0..4 {
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((ktk[i][j] - e).abs() < 1e-10, "k not orthogonal");
                }
            }
            let rec = mat_mul_f64(&x.to_matrix(), &mat_mul_f64(&iota_f64(y1, y2), &k));
            for i in 0..4 {
                for j in 0..4 {
                    assert!((rec[i][j] - g[i][j]).abs() < 1e-10, "reconstruction");
                }
            }
        }
    }

    #[test]
    fn y_of_c_star_eta_power() {
        // y(c*)^eta = 1/(c1 c2) checked through the Iwasawa route
        for (c1, c2) in [(1i64, 1i64), (2, 3), (5, 2), (7, 7)] {
            let cs = c_star(&rat_i(c1), &rat_i(c2)).to_f64();
            let (_, (y1, y2), _) = iwasawa_decompose(&cs);
            let lhs = y_pow_eta(y1, y2);
            let rhs = 1.0 / (c1 as f64 * c2 as f64);
            assert!((lhs - rhs).abs() < 1e-12 * rhs.abs());
        }
    }

    #[test]
    fn bruhat_trivial_cases() {
        let id = Mat4::identity();
        let d = bruhat_decompose(&id).unwrap();
        assert_eq!(d.w, WeylKind::Id);
        assert_eq!(d.c, (Rat::one(), Rat::one()));
        assert_eq!(d.x, Unipotent::zero());
        assert_eq!(d.x_prime, Unipotent::zero());

        let w0 = WeylKind::W0.element().matrix;
        let d = bruhat_decompose(&w0).unwrap();
        assert_eq!(d.w, WeylKind::W0);
        assert_eq!(d.c, (Rat::one(), Rat::one()));
        assert_eq!(d.x, Unipotent::zero());
        assert_eq!(d.x_prime, Unipotent::zero());
        assert_eq!(d.sign, (1, 1));
    }

    #[test]
    fn bruhat_round_trip_all_cells() {
        let rng = CounterRng::new(17);
        for (t, w) in WeylKind::ALL.into_iter().enumerate() {
            for trial in 0..5 {
                let seed = (t * 10 + trial) as u64;
                let x = Unipotent::new(
                    rat_rng(&rng, 8 * seed, 3, 4),
                    rat_rng(&rng, 8 * seed + 1, 3, 4),
                    rat_rng(&rng, 8 * seed + 2, 3, 4),
                    rat_rng(&rng, 8 * seed + 3, 3, 4),
                );
                let nvals = w.length();
                let vals: Vec<Rat> = (0..nvals)
                    .map(|k| rat_rng(&rng, 8 * seed + 4 + k as u64, 3, 5))
                    .collect();
                let xp = unipotent_in_u_w(w, &vals);
                let c1 = rat(
                    1 + (rng.u64_at(900 + seed) % 5) as i64,
                    1 + (rng.u64_at(901 + seed) % 3) as i64,
                );
                let c2 = rat(
                    1 + (rng.u64_at(902 + seed) % 5) as i64,
                    1 + (rng.u64_at(903 + seed) % 3) as i64,
                );
                let g = x
                    .to_matrix()
                    .mul(&w.element().matrix)
                    .mul(&c_star(&c1, &c2))
                    .mul(&xp.to_matrix());
                let d = bruhat_decompose(&g).expect("decompose");
                assert_eq!(d.w, w, "wrong cell");
                assert_eq!(d.reconstruct(), g);
                assert_eq!(d.sign, (1, 1));
                assert_eq!(d.c, (c1, c2));
                assert_eq!(d.x_prime, xp);
                assert_eq!(d.x, x);
            }
        }
    }

    #[test]
    fn bruhat_handles_signs() {
        // negative torus entries are recorded as a sign matrix
        let mut t = Mat4::zero();
        t.0[0][0] = rat_i(-2);
        t.0[1][1] = rat(1, 3);
        t.0[2][2] = rat(-1, 2);
        t.0[3][3] = rat_i(3);
        assert!(t.is_symplectic());
        let d = bruhat_decompose(&t).unwrap();
        assert_eq!(d.w, WeylKind::Id);
        assert_eq!(d.sign, (-1, 1));
        assert_eq!(d.reconstruct(), t);
    }

    #[test]
    fn left_reduction_mod_uz() {
        let rng = CounterRng::new(23);
        for t in 0..10 {
            let x = Unipotent::new(
                rat_rng(&rng, 4 * t, 9, 7),
                rat_rng(&rng, 4 * t + 1, 9, 7),
                rat_rng(&rng, 4 * t + 2, 9, 7),
                rat_rng(&rng, 4 * t + 3, 9, 7),
            );
            let (red, u) = x.reduce_left_mod_z();
            assert!(u.is_integral());
            assert_eq!(u.compose(&x), red);
            for v in [&red.x1, &red.x2, &red.x4, &red.x5] {
                assert!(!v.is_negative() && *v < Rat::one(), "coordinate not reduced");
            }
        }
    }
}
