//! Symbolic residue bookkeeping for the four-fold Mellin–Barnes transform.
//!
//! Terms are linear-form data: every gamma argument, Mellin argument and
//! power exponent is an exact rational combination of the symbols
//! mu1, mu2, r1..r4, k1..k4. Shifting a contour to the left across the poles
//! of one gamma factor is a substitution on these forms, so the full residue
//! tree (16 series after the r3, r4, r2 shifts; 32 after r1) is generated
//! mechanically rather than copied by hand. The printed tables are then
//! checked against this engine, and the swap cancellations are verified
//! structurally, term by term.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::geometry::rat;

type Rat = BigRational;

pub const N_SYMS: usize = 10;

/// Symbol order: mu1, mu2, r1, r2, r3, r4, k1, k2, k3, k4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sym {
    Mu1 = 0,
    Mu2 = 1,
    R1 = 2,
    R2 = 3,
    R3 = 4,
    R4 = 5,
    K1 = 6,
    K2 = 7,
    K3 = 8,
    K4 = 9,
}

pub const K_SYMS: [Sym; 4] = [Sym::K1, Sym::K2, Sym::K3, Sym::K4];

/// A linear form c0 + sum c_i s_i with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinForm {
    pub cst: Rat,
    pub co: [Rat; N_SYMS],
}

impl LinForm {
    pub fn zero() -> Self {
        LinForm {
            cst: Rat::zero(),
            co: core::array::from_fn(|_| Rat::zero()),
        }
    }

    pub fn constant(c: Rat) -> Self {
        let mut f = LinForm::zero();
        f.cst = c;
        f
    }

    pub fn sym(s: Sym) -> Self {
        let mut f = LinForm::zero();
        f.co[s as usize] = Rat::one();
        f
    }

    pub fn add(&self, o: &LinForm) -> Self {
        LinForm {
            cst: &self.cst + &o.cst,
            co: core::array::from_fn(|i| &self.co[i] + &o.co[i]),
        }
    }

    pub fn sub(&self, o: &LinForm) -> Self {
        LinForm {
            cst: &self.cst - &o.cst,
            co: core::array::from_fn(|i| &self.co[i] - &o.co[i]),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        LinForm {
            cst: &self.cst * c,
            co: core::array::from_fn(|i| &self.co[i] * c),
        }
    }

    pub fn coeff(&self, s: Sym) -> &Rat {
        &self.co[s as usize]
    }

    /// Substitute s := value into this form.
    pub fn subst(&self, s: Sym, value: &LinForm) -> Self {
        let c = self.co[s as usize].clone();
        if c.is_zero() {
            return self.clone();
        }
        let mut out = self.clone();
        out.co[s as usize] = Rat::zero();
        out.add(&value.scale(&c))
    }

    /// Swap the coefficients of two symbols.
    pub fn swap_syms(&self, a: Sym, b: Sym) -> Self {
        let mut out = self.clone();
        out.co.swap(a as usize, b as usize);
        out
    }

    pub fn depends_on(&self, s: Sym) -> bool {
        !self.co[s as usize].is_zero()
    }

    pub fn render(&self) -> String {
        const NAMES: [&str; N_SYMS] = [
            "mu1", "mu2", "r1", "r2", "r3", "r4", "k1", "k2", "k3", "k4",
        ];
        let mut s = String::new();
        if !self.cst.is_zero() {
            s.push_str(&format!("{}", self.cst));
        }
        for i in 0..N_SYMS {
            if !self.co[i].is_zero() {
                if !s.is_empty() && !self.co[i].is_negative() {
                    s.push('+');
                }
                s.push_str(&format!("{}*{}", self.co[i], NAMES[i]));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

/// Summation-range constraint attached to one k-index of a residue series:
/// the linear combination `sum coeffs[i] k_(i+1) >= min_value` restricts
/// which poles were actually crossed by the contour shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KConstraint {
    pub coeffs: [i64; 4],
    pub min_value: i64,
}

impl KConstraint {
    pub fn swap_k(&self, a: Sym, b: Sym) -> KConstraint {
        let mut c = *self;
        c.coeffs.swap(a as usize - Sym::K1 as usize, b as usize - Sym::K1 as usize);
        c
    }
}

/// One residue series: a coefficient, 1/k! factors with alternating signs,
/// the remaining gamma factors, and the two Mellin-argument offsets
/// alpha = (alpha1, alpha2); pi- and X-powers are determined by alpha.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    /// rational multiplier collecting the residue factors (16 for a full
    /// four-level extraction)
    pub coeff: Rat,
    /// k-symbols carrying (-1)^k / k!
    pub k_syms: Vec<Sym>,
    /// arguments of the remaining Gamma factors
    pub gammas: Vec<LinForm>,
    /// alpha1 = r1+r2+r3 and alpha2 = r1+r2+r4 after substitutions
    pub alpha1: LinForm,
    pub alpha2: LinForm,
    /// range constraints from partially-crossed pole families
    pub ranges: Vec<KConstraint>,
}

impl Term {
    /// The initial integrand of the r-variable form of the transform:
    /// gammas Gamma((r1±mu1)/2) Gamma((r2±mu2)/2) Gamma((r1+r2+r3)/2)
    /// Gamma(r3/2) Gamma((r1+r4)/2) Gamma((r2+r4)/2).
    pub fn integrand() -> Term {
        let half = rat(1, 2);
        let g = |f: LinForm| f.scale(&half);
        let r1 = LinForm::sym(Sym::R1);
        let r2 = LinForm::sym(Sym::R2);
        let r3 = LinForm::sym(Sym::R3);
        let r4 = LinForm::sym(Sym::R4);
        let m1 = LinForm::sym(Sym::Mu1);
        let m2 = LinForm::sym(Sym::Mu2);
        Term {
            coeff: Rat::one(),
            k_syms: vec![],
            gammas: vec![
                g(r1.add(&m1)),
                g(r1.sub(&m1)),
                g(r2.add(&m2)),
                g(r2.sub(&m2)),
                g(r1.add(&r2).add(&r3)),
                g(r3.clone()),
                g(r1.add(&r4)),
                g(r2.add(&r4)),
            ],
            alpha1: r1.add(&r2).add(&r3),
            alpha2: r1.add(&r2).add(&r4),
            ranges: vec![],
        }
    }

    fn subst_all(&mut self, s: Sym, value: &LinForm) {
        for gm in &mut self.gammas {
            *gm = gm.subst(s, value);
        }
        self.alpha1 = self.alpha1.subst(s, value);
        self.alpha2 = self.alpha2.subst(s, value);
    }

    /// Collect the residues at the poles of gamma factor `idx` in variable
    /// `var`, introducing the counting symbol `k`. The range of crossed
    /// poles is derived from the contour ordering (see `crossing_range`).
    pub fn take_residue(&self, idx: usize, var: Sym, k: Sym) -> Term {
        let mut t = self.clone();
        let g = t.gammas.remove(idx);
        let c = g.coeff(var).clone();
        assert!(!c.is_zero(), "gamma factor does not involve the variable");
        if let Some(range) = crossing_range(&g, var, k) {
            t.ranges.push(range);
        }
        // solve g = -k for var: var = (-k - (g - c*var)) / c
        let mut rest = g.clone();
        rest.co[var as usize] = Rat::zero();
        let value = LinForm::sym(k).add(&rest).scale(&(-Rat::one() / &c));
        t.subst_all(var, &value);
        // residue of Gamma(g) d var at g = -k is (-1)^k / (k! c)
        t.coeff = &t.coeff / &c;
        t.k_syms.push(k);
        t
    }

    pub fn swap_k(&self, a: Sym, b: Sym) -> Term {
        let mut t = self.clone();
        for g in &mut t.gammas {
            *g = g.swap_syms(a, b);
        }
        t.alpha1 = t.alpha1.swap_syms(a, b);
        t.alpha2 = t.alpha2.swap_syms(a, b);
        t.ranges = t.ranges.iter().map(|r| r.swap_k(a, b)).collect();
        t
    }

    /// Structural equality up to reordering of the gamma factors and k-lists.
    pub fn equivalent(&self, other: &Term) -> bool {
        if self.coeff != other.coeff {
            return false;
        }
        if self.alpha1 != other.alpha1 || self.alpha2 != other.alpha2 {
            return false;
        }
        let key = |f: &LinForm| f.render();
        let mut g1: Vec<String> = self.gammas.iter().map(key).collect();
        let mut g2: Vec<String> = other.gammas.iter().map(key).collect();
        g1.sort();
        g2.sort();
        if g1 != g2 {
            return false;
        }
        let mut k1: Vec<usize> = self.k_syms.iter().map(|s| *s as usize).collect();
        let mut k2: Vec<usize> = other.k_syms.iter().map(|s| *s as usize).collect();
        k1.sort();
        k2.sort();
        if k1 != k2 {
            return false;
        }
        let mut r1: Vec<String> = self.ranges.iter().map(|r| format!("{r:?}")).collect();
        let mut r2: Vec<String> = other.ranges.iter().map(|r| format!("{r:?}")).collect();
        r1.sort();
        r2.sort();
        r1 == r2
    }
}

/// Identifier for the residue series in the two-stage labelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeriesLabel {
    /// 'A'..'D': which (r3, r4) pole pair.
    pub stage34: char,
    /// 'a'..'d': which r2 pole.
    pub stage2: char,
    /// 0 for the 16-series level; '1'..'4' for the 32-series level.
    pub stage1: char,
}

impl SeriesLabel {
    pub fn name(&self) -> String {
        if self.stage1 == ' ' {
            format!("{}{}", self.stage34, self.stage2)
        } else {
            format!("{}{}{}", self.stage34, self.stage2, self.stage1)
        }
    }
}

/// The eight surviving series of the full extraction.
pub const SURVIVORS: [&str; 8] = ["Aa1", "Aa2", "Ab1", "Ab2", "Ba1", "Ba2", "Bb1", "Bb2"];

/// The four cancellation pairs proven through the Gauss summation.
pub const GAUSS_CANCEL_PAIRS: [(&str, &str); 4] =
    [("Ca1", "Ca2"), ("Cb1", "Cb2"), ("Da1", "Db1"), ("Da2", "Db2")];

/// All 32 labelled series from the full four-level extraction: the r1 shift
/// applies to the eight 'a'/'b' families left after the first-level swap
/// cancellations remove the 'c'/'d' ones in pairs.
pub fn full_extraction() -> Vec<(SeriesLabel, Term)> {
    let level16 = extraction_16();
    let mut out = Vec::new();
    for (lab, term) in level16 {
        if lab.stage2 != 'a' && lab.stage2 != 'b' {
            continue;
        }
        // r1-stage: remaining gamma factors involving r1
        for (idx, g) in term.gammas.iter().enumerate() {
            if !g.depends_on(Sym::R1) {
                continue;
            }
            let stage1 = classify_pole_r1(g);
            let t = term.take_residue(idx, Sym::R1, Sym::K1);
            out.push((
                SeriesLabel {
                    stage34: lab.stage34,
                    stage2: lab.stage2,
                    stage1,
                },
                t,
            ));
        }
    }
    out
}

/// The 16 series after shifting r3, r4 and then r2.
pub fn extraction_16() -> Vec<(SeriesLabel, Term)> {
    let base = Term::integrand();
    let mut out = Vec::new();
    // r3-stage: Gamma(r3/2) -> A/B families, Gamma((r1+r2+r3)/2) -> C/D
    let r3_poles: Vec<(usize, bool)> = base
        .gammas
        .iter()
        .enumerate()
        .filter(|(_, g)| g.depends_on(Sym::R3))
        .map(|(i, g)| (i, !g.depends_on(Sym::R1)))
        .collect();
    for (i3, pure_r3) in r3_poles {
        let t3 = base.take_residue(i3, Sym::R3, Sym::K3);
        // r4-stage: Gamma((r1+r4)/2) vs Gamma((r2+r4)/2)
        let r4_poles: Vec<(usize, bool)> = t3
            .gammas
            .iter()
            .enumerate()
            .filter(|(_, g)| g.depends_on(Sym::R4))
            .map(|(i, g)| (i, g.depends_on(Sym::R1)))
            .collect();
        for (i4, uses_r1) in r4_poles {
            let t4 = t3.take_residue(i4, Sym::R4, Sym::K4);
            let stage34 = match (pure_r3, uses_r1) {
                (true, true) => 'A',
                (true, false) => 'B',
                (false, true) => 'C',
                (false, false) => 'D',
            };
            // r2-stage: all remaining gammas with r2
            let r2_poles: Vec<usize> = t4
                .gammas
                .iter()
                .enumerate()
                .filter(|(_, g)| g.depends_on(Sym::R2))
                .map(|(i, _)| i)
                .collect();
            for i2 in r2_poles {
                let stage2 = classify_pole_r2(&t4.gammas[i2]);
                let t2 = t4.take_residue(i2, Sym::R2, Sym::K2);
                out.push((
                    SeriesLabel {
                        stage34,
                        stage2,
                        stage1: ' ',
                    },
                    t2,
                ));
            }
        }
    }
    out
}

/// Classify an r2 pole family by the paper's letters: mu2-poles are 'a'
/// (pole at r2 = +mu2 - ...) or 'b' (r2 = -mu2 - ...); r1-coupled poles are
/// 'c' (r2 = +r1 + ...) or 'd' (r2 = -r1 + ...). The pole location carries
/// -coeff(x)/coeff(r2) as the multiplier of x.
fn classify_pole_r2(g: &LinForm) -> char {
    let cv = g.coeff(Sym::R2).clone();
    let m2 = g.coeff(Sym::Mu2).clone();
    if !m2.is_zero() {
        if m2.is_positive() != cv.is_positive() {
            'a'
        } else {
            'b'
        }
    } else {
        let r1 = g.coeff(Sym::R1).clone();
        if r1.is_positive() != cv.is_positive() {
            'c'
        } else {
            'd'
        }
    }
}

/// Same idea at the r1 stage: poles at r1 = +mu1... are '1', -mu1 '2',
/// +mu2 '3', -mu2 '4'.
fn classify_pole_r1(g: &LinForm) -> char {
    let cv = g.coeff(Sym::R1).clone();
    let m1 = g.coeff(Sym::Mu1).clone();
    let m2 = g.coeff(Sym::Mu2).clone();
    if !m1.is_zero() {
        if m1.is_positive() != cv.is_positive() {
            '1'
        } else {
            '2'
        }
    } else if m2.is_positive() != cv.is_positive() {
        '3'
    } else {
        '4'
    }
}

/// Decide which poles of Gamma(g) in `var` are crossed when the contour is
/// shifted to -infinity. The pole at g = -k sits at
/// var = -(k + rest)/c_v; it is crossed iff its real part is below the
/// contour abscissa rho_var. Evaluated at an exact rational witness for the
/// contour ordering 0 < rho_4, rho_3 and 1/2 < rho_2 < rho_1 < 1 (with
/// tempered real parts), which fixes the integer thresholds; the witness
/// value is asserted to be safely non-integral.
///
/// Returns None when every k >= 0 is crossed.
fn crossing_range(g: &LinForm, var: Sym, k_new: Sym) -> Option<KConstraint> {
    // witness abscissae
    let rho = |s: Sym| match s {
        Sym::R1 => rat(7, 8),
        Sym::R2 => rat(5, 8),
        Sym::R3 | Sym::R4 => rat(1, 4),
        _ => Rat::zero(), // tempered witness: Re mu = 0
    };
    let cv = g.coeff(var).clone();
    // location(k, k_old) = -(1/cv) (k_new + sum_k c_k k_old + theta),
    // theta = const + sum_{rho} c_rho rho + mu-parts (Re = 0 at the witness)
    let mut theta = g.cst.clone();
    for s in [Sym::R1, Sym::R2, Sym::R3, Sym::R4] {
        if s != var {
            theta += g.coeff(s) * rho(s);
        }
    }
    // crossed iff -(1/cv)(combo + theta) < rho_var,
    // i.e. combo > -cv rho_var - theta   (cv > 0)
    //      combo < -cv rho_var - theta   (cv < 0)
    // where combo = k_new + sum c_k k_old (integer since the c_k are).
    let bound = -&cv * rho(var) - &theta;
    let mut coeffs = [0i64; 4];
    coeffs[k_new as usize - Sym::K1 as usize] = 1;
    let mut all_integer = true;
    for (i, k) in K_SYMS.iter().enumerate() {
        let c = g.coeff(*k).clone();
        if !c.is_zero() {
            if c.is_integer() {
                coeffs[i] += rat_to_i64(&c);
            } else {
                all_integer = false;
            }
        }
    }
    assert!(all_integer, "non-integer k coefficient in pole location");
    assert!(
        !bound.is_integer(),
        "ambiguous crossing threshold; witness hit an integer"
    );
    if cv.is_positive() {
        // combo >= floor(bound) + 1
        let min_value = rat_floor_i64(&bound) + 1;
        if min_value <= lower_bound_of(&coeffs) {
            None
        } else {
            Some(KConstraint { coeffs, min_value })
        }
    } else {
        // combo <= ceil(bound) - 1 = floor(bound); normalise to >= form
        let max_value = rat_floor_i64(&bound);
        let neg: [i64; 4] = core::array::from_fn(|i| -coeffs[i]);
        if -max_value <= lower_bound_of(&neg) {
            None
        } else {
            Some(KConstraint {
                coeffs: neg,
                min_value: -max_value,
            })
        }
    }
}

/// Minimum of sum coeffs[i] k_i over k_i >= 0 (finite only when all
/// nonnegative contributions can be zeroed; negative coefficients make it
/// unbounded below, represented by a very small value).
fn lower_bound_of(coeffs: &[i64; 4]) -> i64 {
    if coeffs.iter().any(|&c| c < 0) {
        i64::MIN / 2
    } else {
        0
    }
}

fn rat_to_i64(r: &Rat) -> i64 {
    use num_traits::ToPrimitive;
    r.to_integer().to_i64().expect("small integer")
}

fn rat_floor_i64(r: &Rat) -> i64 {
    use num_traits::ToPrimitive;
    r.floor().to_integer().to_i64().expect("small integer")
}

/// Fetch a labelled series from the 32-series extraction.
pub fn series_by_name(name: &str) -> Option<Term> {
    full_extraction()
        .into_iter()
        .find(|(l, _)| l.name() == name)
        .map(|(_, t)| t)
}
