//! Symbolic Laurent layer for the Eisenstein eigenvalue identities: formal
//! sums of monomials p^((a s1 + b s2 + c)/2) with coefficients polynomial in
//! the GL(2) eigenvalue symbol lambda. Half-integer powers of p and of p^s
//! both live in the exponent lattice, and lambda_{p^2} is rewritten as
//! lambda^2 - 1 on entry.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::{One, Zero};

type Rat = BigRational;

/// Coefficient: polynomial in the symbol lambda with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaPoly(pub Vec<Rat>);

impl LambdaPoly {
    pub fn zero() -> Self {
        LambdaPoly(Vec::new())
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LambdaPoly(vec![c])
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    /// lambda itself.
    pub fn lambda() -> Self {
        LambdaPoly(vec![Rat::zero(), Rat::one()])
    }

    /// lambda_{p^2} = lambda^2 - 1.
    pub fn lambda_sq_minus_one() -> Self {
        LambdaPoly(vec![-Rat::one(), Rat::zero(), Rat::one()])
    }

    fn trim(mut self) -> Self {
        while self.0.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in o.0.iter().enumerate() {
            out[i] += c;
        }
        LambdaPoly(out).trim()
    }

    pub fn neg(&self) -> Self {
        LambdaPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LambdaPoly(out).trim()
    }

    pub fn eval(&self, lambda: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * lambda + c;
        }
        acc
    }
}

/// Exponent key: p^((a s1 + b s2 + c) / 2).
pub type PExp = (i64, i64, i64);

/// Formal Laurent sum over the exponent lattice.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PLaurent {
    terms: BTreeMap<PExp, LambdaPoly>,
}

impl PLaurent {
    pub fn zero() -> Self {
        PLaurent::default()
    }

    /// A single monomial coeff * p^((a s1 + b s2 + c)/2).
    pub fn monomial(a: i64, b: i64, c: i64, coeff: LambdaPoly) -> Self {
        let mut t = PLaurent::zero();
        if !coeff.is_zero() {
            t.terms.insert((a, b, c), coeff);
        }
        t
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(0, 0, 0, LambdaPoly::constant(c))
    }

    /// p^(c/2), so p itself is `p_pow_half(2)`.
    pub fn p_pow_half(c: i64) -> Self {
        Self::monomial(0, 0, c, LambdaPoly::one())
    }

    /// p^(a s1/2 + b s2/2 + c/2).
    pub fn p_sym(a: i64, b: i64, c: i64) -> Self {
        Self::monomial(a, b, c, LambdaPoly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            let merged = match out.terms.get(k) {
                Some(e) => e.add(v),
                None => v.clone(),
            };
            if merged.is_zero() {
                out.terms.remove(k);
            } else {
                out.terms.insert(*k, merged);
            }
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        PLaurent {
            terms: self.terms.iter().map(|(k, v)| (*k, v.neg())).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = PLaurent::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &o.terms {
                let k = (ka.0 + kb.0, ka.1 + kb.1, ka.2 + kb.2);
                let prod = va.mul(vb);
                let merged = match out.terms.get(&k) {
                    Some(e) => e.add(&prod),
                    None => prod,
                };
                if merged.is_zero() {
                    out.terms.remove(&k);
                } else {
                    out.terms.insert(k, merged);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        self.mul(&Self::constant(c.clone()))
    }

    /// Evaluate with rational witnesses a = p^(s1/2), b = p^(s2/2),
    /// q = p^(1/2), and a rational lambda.
    pub fn eval(&self, a: &Rat, b: &Rat, q: &Rat, lambda: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for ((ea, eb, ec), coeff) in &self.terms {
            acc += coeff.eval(lambda) * pow_rat(a, *ea) * pow_rat(b, *eb) * pow_rat(q, *ec);
        }
        acc
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

fn pow_rat(x: &Rat, e: i64) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e.unsigned_abs() {
        acc *= x;
    }
    if e < 0 {
        Rat::one() / acc
    } else {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;

    #[test]
    fn lambda_poly_basics() {
        let l = LambdaPoly::lambda();
        let sq = l.mul(&l);
        assert_eq!(
            sq.add(&LambdaPoly::constant(-Rat::one())),
            LambdaPoly::lambda_sq_minus_one()
        );
        assert_eq!(sq.eval(&rat(3, 2)), rat(9, 4));
    }

    #[test]
    fn plaurent_cancellation() {
        // (p^(s1/2) + p^(-s1/2))^2 - p^s1 - p^(-s1) - 2 = 0
        let t = PLaurent::p_sym(1, 0, 0).add(&PLaurent::p_sym(-1, 0, 0));
        let sq = t.mul(&t);
        let rest = PLaurent::p_sym(2, 0, 0)
            .add(&PLaurent::p_sym(-2, 0, 0))
            .add(&PLaurent::constant(rat(2, 1)));
        assert!(sq.sub(&rest).is_zero());
    }

    #[test]
    fn eval_matches_structure() {
        let t = PLaurent::monomial(1, -1, 3, LambdaPoly::lambda());
        // value = lambda * a * q^3 / b
        let v = t.eval(&rat(2, 1), &rat(3, 1), &rat(5, 1), &rat(7, 1));
        assert_eq!(v, rat(7 * 2 * 125, 3));
    }
}
