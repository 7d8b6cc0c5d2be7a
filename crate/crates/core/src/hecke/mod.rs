//! Exact Hecke combinatorics: coset representatives of the similitude-m
//! Hecke set, the bivariate generating series of Fourier coefficients, and
//! the Eisenstein eigenvalue families with their Hecke relation.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)]
use num_traits::{One, Zero};

use crate::geometry::{rat_i, Mat4, Rat};

pub mod plaurent;
pub mod poly;

pub use plaurent::{LambdaPoly, PLaurent};
pub use poly::Poly2;

/// One left-coset representative: block matrix [[A, B D / m], [0, D]] with
/// A = [[a1, a], [0, a2]] upper triangular, B symmetric, and D = m (A^T)^-1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CosetRep {
    pub m: i64,
    pub a1: i64,
    pub a2: i64,
    pub a: i64,
    pub b1: i64,
    pub b2: i64,
    pub b3: i64,
}

impl CosetRep {
    /// The 4x4 integral matrix of similitude m.
    pub fn matrix(&self) -> Mat4 {
        let CosetRep {
            m,
            a1,
            a2,
            a,
            b1,
            b2,
            b3,
        } = *self;
        // D = m (A^T)^(-1) = [[m/a1, 0], [-m a/(a1 a2), m/a2]]
        let d11 = m / a1;
        let d21 = -(m * a) / (a1 * a2);
        let d22 = m / a2;
        // B D / m
        let top = [
            [rat_i(b1 * d11 + b2 * d21) / rat_i(m), rat_i(b2 * d22) / rat_i(m)],
            [rat_i(b2 * d11 + b3 * d21) / rat_i(m), rat_i(b3 * d22) / rat_i(m)],
        ];
        let mut g = Mat4::zero();
        g.0[0][0] = rat_i(a1);
        g.0[0][1] = rat_i(a);
        g.0[1][1] = rat_i(a2);
        g.0[0][2] = top[0][0].clone();
        g.0[0][3] = top[0][1].clone();
        g.0[1][2] = top[1][0].clone();
        g.0[1][3] = top[1][1].clone();
        g.0[2][2] = rat_i(d11);
        g.0[3][2] = rat_i(d21);
        g.0[3][3] = rat_i(d22);
        g
    }
}

/// Complete set of left-coset representatives of the similitude-m Hecke set.
pub fn coset_reps(m: i64) -> Vec<CosetRep> {
    assert!(m >= 1);
    let divisors: Vec<i64> = (1..=m).filter(|d| m % d == 0).collect();
    let mut out = Vec::new();
    for &a1 in &divisors {
        for &a2 in &divisors {
            for a in 0..a2 {
                if (m * a) % (a1 * a2) != 0 {
                    continue;
                }
                // B D = [[b1 m/a1 - b2 m a/(a1 a2), b2 m/a2],
                //        [b2 m/a1 - b3 m a/(a1 a2), b3 m/a2]] = 0 mod m
                for b1 in 0..m {
                    for b2 in 0..m {
                        // b2 m / a2 = 0 mod m  <=>  a2 | b2
                        if b2 % a2 != 0 {
                            continue;
                        }
                        // entry (1,1): a1 a2 | b1 a2 - b2 a
                        if (b1 * a2 - b2 * a) % (a1 * a2) != 0 {
                            continue;
                        }
                        for b3 in 0..m {
                            if b3 % a2 != 0 {
                                continue;
                            }
                            if (b2 * a2 - b3 * a) % (a1 * a2) != 0 {
                                continue;
                            }
                            out.push(CosetRep {
                                m,
                                a1,
                                a2,
                                a,
                                b1,
                                b2,
                                b3,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Whether two representatives generate the same left coset: g1 g2^(-1)
/// integral symplectic with similitude 1.
pub fn same_left_coset(g1: &CosetRep, g2: &CosetRep) -> bool {
    let q = g1.matrix().mul(&g2.matrix().inverse());
    q.is_integral() && q.is_symplectic()
}

/// The similitude-m Hecke set cardinality through the table rows for T(p),
/// classified by the A-block; an independent enumeration used to cross-check
/// `coset_reps` at primes.
pub fn coset_count_prime_by_table(p: i64) -> i64 {
    // A = I: all of b1, b2, b3 mod p.
    // A = [[1, a], [0, p]]: b2 = b3 = 0, b1 mod p, a mod p.
    // A = [[p, 0], [0, 1]]: b1 = b2 = 0, b3 mod p.
    // A = [[p, 0], [0, p]]: B = 0.
    p * p * p + p * p + p + 1
}

/// Row-by-row tally for T(p^2), from the coset table classified by A-block.
pub fn coset_count_prime_sq_by_table(p: i64) -> i64 {
    let mut total = 0;
    // A = I, D = p^2 I: B free mod p^2
    total += p.pow(6);
    // A = [[1, a], [0, p]], a mod p: b2, b3 = 0 mod p, b1 free mod p^2
    total += p * (p * p * p * p);
    // A = [[1, a], [0, p^2]], a mod p^2: b2 = b3 = 0, b1 free mod p^2
    total += p * p * p * p;
    // A = [[p, 0], [0, 1]]: b1, b2 = 0 mod p, b3 free mod p^2
    total += p * p * (p * p);
    // A = p I: B = 0 mod p
    total += p * p * p;
    // A = [[p, a], [0, p]], a in 1..p: b3 = 0, b2 = 0 mod p, b1 determined
    // mod p by b2: p choices for b2/p, p for b1 within its class
    total += (p - 1) * p * p;
    // A = [[p, a p], [0, p^2]], a mod p: b2 = b3 = 0, b1 = 0 mod p
    total += p * p;
    // A = [[p^2, 0], [0, 1]]: b1 = b2 = 0, b3 free mod p^2
    total += p * p;
    // A = [[p^2, 0], [0, p]]: b1 = b2 = 0, b3 = 0 mod p
    total += p;
    // A = p^2 I: B = 0
    total += 1;
    total
}

/// The bivariate generating series of Fourier coefficients, expanded to
/// (i_max, j_max): coefficients are exact polynomials in X, Y.
#[derive(Debug, Clone)]
pub struct BivariateSeries {
    pub i_max: usize,
    pub j_max: usize,
    coeffs: BTreeMap<(usize, usize), Poly2>,
}

impl BivariateSeries {
    pub fn coeff(&self, i: usize, j: usize) -> &Poly2 {
        self.coeffs
            .get(&(i, j))
            .expect("coefficient within the expanded range")
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &Poly2)> {
        self.coeffs.iter()
    }
}

/// Coefficients of the standard quintic 1 - Y u + (X^2 - Y - 1) u^2
/// - (X^2 - Y - 1) u^3 + Y u^4 - u^5.
pub fn std_quintic() -> Vec<Poly2> {
    let x2 = Poly2::x().mul(&Poly2::x());
    let mid = x2.sub(&Poly2::y()).sub(&Poly2::one());
    vec![
        Poly2::one(),
        Poly2::y().neg(),
        mid.clone(),
        mid.neg(),
        Poly2::y(),
        Poly2::one().neg(),
    ]
}

/// Coefficients of the spinor quartic 1 - X v + (Y + 1) v^2 - X v^3 + v^4.
pub fn spin_quartic() -> Vec<Poly2> {
    vec![
        Poly2::one(),
        Poly2::x().neg(),
        Poly2::y().add(&Poly2::one()),
        Poly2::x().neg(),
        Poly2::one(),
    ]
}

/// Power-series expansion of the generating function
///   [(1-u)(1+u)(1+u v^2) - X (1-u) u v] / [quintic(u) quartic(v)]
/// by exact long division.
pub fn fourier_series(i_max: usize, j_max: usize) -> BivariateSeries {
    let inv_std = poly::invert_series(&std_quintic(), i_max);
    let inv_spin = poly::invert_series(&spin_quartic(), j_max);
    // numerator monomials (u-power, v-power, coefficient polynomial):
    // 1 + u v^2 - u^2 - u^3 v^2 - X u v + X u^2 v
    let numerator: [(usize, usize, Poly2); 6] = [
        (0, 0, Poly2::one()),
        (1, 2, Poly2::one()),
        (2, 0, Poly2::one().neg()),
        (3, 2, Poly2::one().neg()),
        (1, 1, Poly2::x().neg()),
        (2, 1, Poly2::x()),
    ];
    let mut coeffs = BTreeMap::new();
    for i in 0..=i_max {
        for j in 0..=j_max {
            let mut acc = Poly2::zero();
            for (a, b, c) in &numerator {
                if i >= *a && j >= *b {
                    acc = acc.add(&c.mul(&inv_std[i - a]).mul(&inv_spin[j - b]));
                }
            }
            coeffs.insert((i, j), acc);
        }
    }
    BivariateSeries {
        i_max,
        j_max,
        coeffs,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeckeError {
    MissingPrime(u64),
}

impl fmt::Display for HeckeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeckeError::MissingPrime(p) => write!(f, "no local data supplied for prime {p}"),
        }
    }
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Assemble the Fourier coefficient A(M) = prod_p B(p^(v_p m1), p^(v_p m2))
/// from per-prime Satake data (X_p, Y_p), exactly.
pub fn assemble_a(
    m: (u64, u64),
    local: &BTreeMap<u64, (Rat, Rat)>,
) -> Result<Rat, HeckeError> {
    let mut exponents: BTreeMap<u64, (u32, u32)> = BTreeMap::new();
    for (p, e) in factorize(m.0) {
        exponents.entry(p).or_insert((0, 0)).0 = e;
    }
    for (p, e) in factorize(m.1) {
        exponents.entry(p).or_insert((0, 0)).1 = e;
    }
    let mut acc = Rat::one();
    for (p, (i, j)) in exponents {
        let (x, y) = local.get(&p).ok_or(HeckeError::MissingPrime(p))?;
        let series = fourier_series(i as usize, j as usize);
        acc *= series.coeff(i as usize, j as usize).eval(x, y);
    }
    Ok(acc)
}

/// The three Eisenstein families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EisensteinFamily {
    /// minimal parabolic, parameters (s1, s2) symbolic
    Minimal,
    /// Siegel parabolic, parameter s and a GL(2) eigenvalue lambda
    Siegel,
    /// Klingen parabolic, parameter s and a GL(2) eigenvalue lambda
    Klingen,
}

/// Symbolic eigenvalue data of an Eisenstein family at one prime.
#[derive(Debug, Clone)]
pub struct EisensteinData {
    pub lambda_p: PLaurent,
    pub lambda_p2: PLaurent,
    /// eigenvalue of the second generator T^(2)_{0,1}(p)
    pub lambda01: PLaurent,
    pub x_p: PLaurent,
    pub y_p: PLaurent,
}

/// The closed forms of the Eisenstein Hecke eigenvalues and their Satake
/// data. Exponents are in the lattice p^((a s1 + b s2 + c)/2); the Klingen
/// family uses half-integer powers of p^s, and lambda_{p^2} is expressed as
/// lambda^2 - 1 throughout.
pub fn eisenstein_data(family: EisensteinFamily) -> EisensteinData {
    use EisensteinFamily::*;
    let p = |a: i64, b: i64, c: i64| PLaurent::p_sym(a, b, c);
    let pl = |a: i64, b: i64, c: i64| PLaurent::monomial(a, b, c, LambdaPoly::lambda());
    let pl2 = |a: i64, b: i64, c: i64| PLaurent::monomial(a, b, c, LambdaPoly::lambda_sq_minus_one());
    match family {
        Minimal => {
            // X = p^s2 + p^-s2 + p^(s1-s2) + p^(s2-s1)
            let x = p(0, 2, 0)
                .add(&p(0, -2, 0))
                .add(&p(2, -2, 0))
                .add(&p(-2, 2, 0));
            // Y = 1 + p^s1 + p^-s1 + p^(2s2-s1) + p^(s1-2s2)
            let y = PLaurent::constant(Rat::one())
                .add(&p(2, 0, 0))
                .add(&p(-2, 0, 0))
                .add(&p(-2, 4, 0))
                .add(&p(2, -4, 0));
            // lambda(p) = p^(3/2) X
            let lambda_p = PLaurent::p_pow_half(3).mul(&x);
            // lambda(p^2) = p^3 (p^(2s2) + p^(-2s2) + p^s1 + p^-s1
            //   + p^(2s2-2s1) + p^(2s1-2s2) + p^(s1-2s2) + p^(2s2-s1)
            //   + 2 - 1/p)
            let inner = p(0, 4, 0)
                .add(&p(0, -4, 0))
                .add(&p(2, 0, 0))
                .add(&p(-2, 0, 0))
                .add(&p(-4, 4, 0))
                .add(&p(4, -4, 0))
                .add(&p(2, -4, 0))
                .add(&p(-2, 4, 0))
                .add(&PLaurent::constant(rat_i(2)))
                .sub(&PLaurent::p_pow_half(-2));
            let lambda_p2 = PLaurent::p_pow_half(6).mul(&inner);
            // lambda01 = p^2 Y - 1
            let lambda01 =
                PLaurent::p_pow_half(4).mul(&y).sub(&PLaurent::constant(Rat::one()));
            EisensteinData {
                lambda_p,
                lambda_p2,
                lambda01,
                x_p: x,
                y_p: y,
            }
        }
        Siegel => {
            // X = p^s + p^-s + lambda, Y = 1 + (p^s + p^-s) lambda
            let x = p(2, 0, 0).add(&p(-2, 0, 0)).add(&pl(0, 0, 0));
            let y = PLaurent::constant(Rat::one())
                .add(&pl(2, 0, 0))
                .add(&pl(-2, 0, 0));
            let lambda_p = PLaurent::p_pow_half(3).mul(&x);
            // lambda(p^2) = p^3 (p^2s + (p-1)/p + p^-2s
            //                + (p^s + p^-s) lambda + lambda^2 - 1)
            let inner = p(4, 0, 0)
                .add(&p(-4, 0, 0))
                .add(&PLaurent::constant(Rat::one()))
                .sub(&PLaurent::p_pow_half(-2))
                .add(&pl(2, 0, 0))
                .add(&pl(-2, 0, 0))
                .add(&pl2(0, 0, 0));
            let lambda_p2 = PLaurent::p_pow_half(6).mul(&inner);
            let lambda01 =
                PLaurent::p_pow_half(4).mul(&y).sub(&PLaurent::constant(Rat::one()));
            EisensteinData {
                lambda_p,
                lambda_p2,
                lambda01,
                x_p: x,
                y_p: y,
            }
        }
        Klingen => {
            // X = (p^(s/2) + p^(-s/2)) lambda, Y = p^s + p^-s + lambda^2 - 1
            let x = pl(1, 0, 0).add(&pl(-1, 0, 0));
            let y = p(2, 0, 0).add(&p(-2, 0, 0)).add(&pl2(0, 0, 0));
            let lambda_p = PLaurent::p_pow_half(3).mul(&x);
            // lambda(p^2) = p^3 ((p-1)/p + (p^s + 1 + p^-s)(lambda^2 - 1))
            let inner = PLaurent::constant(Rat::one())
                .sub(&PLaurent::p_pow_half(-2))
                .add(&pl2(2, 0, 0))
                .add(&pl2(0, 0, 0))
                .add(&pl2(-2, 0, 0));
            let lambda_p2 = PLaurent::p_pow_half(6).mul(&inner);
            let lambda01 =
                PLaurent::p_pow_half(4).mul(&y).sub(&PLaurent::constant(Rat::one()));
            EisensteinData {
                lambda_p,
                lambda_p2,
                lambda01,
                x_p: x,
                y_p: y,
            }
        }
    }
}

/// The Hecke-relation residual
/// lambda(p^2) - [lambda(p)^2 - p lambda01 - (p^3 + p^2 + p)], symbolically.
pub fn hecke_relation_residual_symbolic(data: &EisensteinData) -> PLaurent {
    let p1 = PLaurent::p_pow_half(2);
    let p2 = PLaurent::p_pow_half(4);
    let p3 = PLaurent::p_pow_half(6);
    let rhs = data
        .lambda_p
        .mul(&data.lambda_p)
        .sub(&p1.mul(&data.lambda01))
        .sub(&p3.add(&p2).add(&p1));
    data.lambda_p2.sub(&rhs)
}

/// The same residual for a concrete rational triple (no family structure).
pub fn hecke_relation_residual_rational(
    lambda_p: &Rat,
    lambda_p2: &Rat,
    lambda01: &Rat,
    p: i64,
) -> Rat {
    let pr = rat_i(p);
    lambda_p2 - (lambda_p * lambda_p - &pr * lambda01 - (&pr * &pr * &pr + &pr * &pr + &pr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;

    #[test]
    fn coset_counts() {
        assert_eq!(coset_reps(1).len(), 1);
        for p in [2i64, 3, 5, 7] {
            let reps = coset_reps(p);
            assert_eq!(reps.len() as i64, coset_count_prime_by_table(p), "p={p}");
            assert_eq!(reps.len() as i64, p * p * p + p * p + p + 1);
        }
        for p in [2i64, 3] {
            let reps = coset_reps(p * p);
            assert_eq!(
                reps.len() as i64,
                coset_count_prime_sq_by_table(p),
                "p^2, p={p}"
            );
        }
    }

    #[test]
    fn coset_reps_have_similitude_m() {
        for m in [1i64, 2, 3, 4, 6] {
            for rep in coset_reps(m) {
                let g = rep.matrix();
                assert!(g.is_integral(), "rep not integral: {rep:?}");
                let lambda = g.similitude().expect("in GSp(4)");
                assert_eq!(lambda, rat_i(m), "wrong similitude: {rep:?}");
            }
        }
    }

    #[test]
    fn coset_reps_pairwise_distinct() {
        for m in [2i64, 3, 4] {
            let reps = coset_reps(m);
            for i in 0..reps.len() {
                for j in i + 1..reps.len() {
                    assert!(
                        !same_left_coset(&reps[i], &reps[j]),
                        "duplicate cosets at m={m}: {:?} {:?}",
                        reps[i],
                        reps[j]
                    );
                }
            }
        }
    }

    #[test]
    fn series_low_coefficients() {
        let s = fourier_series(3, 3);
        assert_eq!(s.coeff(0, 0), &Poly2::one());
        assert_eq!(s.coeff(0, 1), &Poly2::x());
        assert_eq!(s.coeff(1, 0), &Poly2::y());
    }

    #[test]
    fn specialization_identities_to_order_ten() {
        // sum_j B(1, p^j) v^j * quartic(v) = 1
        let s = fourier_series(0, 14);
        let col: Vec<Poly2> = (0..=14).map(|j| s.coeff(0, j).clone()).collect();
        let prod = poly::mul_series(&col, &spin_quartic(), 10);
        assert_eq!(prod[0], Poly2::one());
        for c in &prod[1..=10] {
            assert!(c.is_zero(), "spin identity fails: {}", c.render());
        }
        // sum_i B(p^i, 1) u^i * quintic(u) = 1 - u^2
        let s = fourier_series(14, 0);
        let row: Vec<Poly2> = (0..=14).map(|i| s.coeff(i, 0).clone()).collect();
        let prod = poly::mul_series(&row, &std_quintic(), 10);
        assert_eq!(prod[0], Poly2::one());
        assert_eq!(prod[2], Poly2::constant(-1));
        for (k, c) in prod.iter().enumerate().take(11) {
            if k != 0 && k != 2 {
                assert!(c.is_zero(), "std identity fails at {k}: {}", c.render());
            }
        }
    }

    #[test]
    fn assemble_multiplicative() {
        let mut local = BTreeMap::new();
        local.insert(2u64, (rat(3, 2), rat(5, 3)));
        local.insert(3u64, (rat(-1, 2), rat(7, 4)));
        // A(1,1) = 1
        assert_eq!(assemble_a((1, 1), &local).unwrap(), Rat::one());
        // A(p, q) = Y_p X_q for distinct primes
        let v = assemble_a((2, 3), &local).unwrap();
        assert_eq!(v, rat(5, 3) * rat(-1, 2));
        // missing prime errors
        assert_eq!(
            assemble_a((5, 1), &local),
            Err(HeckeError::MissingPrime(5))
        );
        // A(p, p) = B(p, p)(X_p, Y_p)
        let series = fourier_series(1, 1);
        let want = series.coeff(1, 1).eval(&rat(3, 2), &rat(5, 3));
        assert_eq!(assemble_a((2, 2), &local).unwrap(), want);
    }

    #[test]
    fn eisenstein_satake_consistency() {
        // X = p^(-3/2) lambda(p) and Y = p^(-2)(lambda01 + 1), symbolically
        for family in [
            EisensteinFamily::Minimal,
            EisensteinFamily::Siegel,
            EisensteinFamily::Klingen,
        ] {
            let d = eisenstein_data(family);
            let x_back = PLaurent::p_pow_half(-3).mul(&d.lambda_p);
            assert!(x_back.sub(&d.x_p).is_zero(), "{family:?}: X mismatch");
            let y_back = PLaurent::p_pow_half(-4)
                .mul(&d.lambda01.add(&PLaurent::constant(Rat::one())));
            assert!(y_back.sub(&d.y_p).is_zero(), "{family:?}: Y mismatch");
        }
    }

    #[test]
    fn hecke_relation_all_families() {
        for family in [
            EisensteinFamily::Minimal,
            EisensteinFamily::Siegel,
            EisensteinFamily::Klingen,
        ] {
            let d = eisenstein_data(family);
            let res = hecke_relation_residual_symbolic(&d);
            assert!(
                res.is_zero(),
                "{family:?}: residual has {} terms",
                res.num_terms()
            );
            // rational spot-check through the evaluation map
            let v = res.eval(&rat(3, 2), &rat(5, 7), &rat(2, 1), &rat(11, 4));
            assert!(v.is_zero());
        }
    }

    #[test]
    fn hecke_relation_negative_control() {
        // a random unrelated triple does not satisfy the relation
        let r = hecke_relation_residual_rational(&rat(7, 2), &rat(5, 3), &rat(1, 4), 3);
        assert!(!r.is_zero());
    }
}
