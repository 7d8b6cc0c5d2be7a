//! Dense-enough bivariate integer polynomials in the symbols X, Y, used for
//! the Fourier-coefficient generating series. Exact BigInt coefficients:
//! every identity in this corner of the crate is a polynomial identity.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
// required for float methods in no_std builds; redundant when std is linked
#[allow(unused_imports)]
use num_traits::Float;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial in Z[X, Y], keyed by (deg X, deg Y).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = Poly2::zero();
        if c != 0 {
            p.terms.insert((0, 0), BigInt::from(c));
        }
        p
    }

    pub fn one() -> Self {
        Poly2::constant(1)
    }

    pub fn x() -> Self {
        Poly2::monomial(1, 0, 1)
    }

    pub fn y() -> Self {
        Poly2::monomial(0, 1, 1)
    }

    pub fn monomial(dx: u32, dy: u32, c: i64) -> Self {
        let mut p = Poly2::zero();
        if c != 0 {
            p.terms.insert((dx, dy), BigInt::from(c));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, o: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            let e = out.terms.entry(*k).or_insert_with(BigInt::zero);
            *e += v;
            if e.is_zero() {
                out.terms.remove(k);
            }
        }
        out
    }

    pub fn sub(&self, o: &Poly2) -> Poly2 {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for ((ax, ay), ac) in &self.terms {
            for ((bx, by), bc) in &o.terms {
                let k = (ax + bx, ay + by);
                let e = out.terms.entry(k).or_insert_with(BigInt::zero);
                *e += ac * bc;
                if e.is_zero() {
                    out.terms.remove(&k);
                }
            }
        }
        out
    }

    /// Exact evaluation at rational (x, y).
    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for ((dx, dy), c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for _ in 0..*dx {
                t *= x;
            }
            for _ in 0..*dy {
                t *= y;
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        use num_traits::ToPrimitive;
        let mut acc = 0.0;
        for ((dx, dy), c) in &self.terms {
            acc += c.to_f64().unwrap_or(f64::NAN) * x.powi(*dx as i32) * y.powi(*dy as i32);
        }
        acc
    }

    /// Canonical display: terms by total degree descending, then X-degree
    /// descending, e.g. "X^2*Y - 3*X + 1".
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        let mut out = String::new();
        for (i, k) in keys.iter().enumerate() {
            let c = &self.terms[k];
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let vars = render_vars(k.0, k.1);
            if mag.is_one() && !vars.is_empty() {
                out.push_str(&vars);
            } else if vars.is_empty() {
                out.push_str(&format!("{mag}"));
            } else {
                out.push_str(&format!("{mag}*{vars}"));
            }
        }
        out
    }
}

fn render_vars(dx: u32, dy: u32) -> String {
    let mut s = String::new();
    if dx > 0 {
        s.push('X');
        if dx > 1 {
            s.push_str(&format!("^{dx}"));
        }
    }
    if dy > 0 {
        if !s.is_empty() {
            s.push('*');
        }
        s.push('Y');
        if dy > 1 {
            s.push_str(&format!("^{dy}"));
        }
    }
    s
}

/// Power series in one variable with Poly2 coefficients, truncated.
pub fn invert_series(denominator: &[Poly2], order: usize) -> Vec<Poly2> {
    // denominator[0] must be 1
    assert!(denominator[0] == Poly2::one(), "leading coefficient must be 1");
    let mut inv: Vec<Poly2> = Vec::with_capacity(order + 1);
    inv.push(Poly2::one());
    for n in 1..=order {
        // c_n = - sum_{k=1..n} d_k c_{n-k}
        let mut acc = Poly2::zero();
        for k in 1..=n.min(denominator.len() - 1) {
            acc = acc.add(&denominator[k].mul(&inv[n - k]));
        }
        inv.push(acc.neg());
    }
    inv
}

/// Multiply truncated series (same variable).
pub fn mul_series(a: &[Poly2], b: &[Poly2], order: usize) -> Vec<Poly2> {
    let mut out = alloc::vec![Poly2::zero(); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        for (j, bj) in b.iter().enumerate() {
            if i + j > order {
                break;
            }
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    out
}
