//! Brute-force GSp(4) Kloosterman sums at small moduli.
//!
//! Double-coset representatives gamma = x · c* w · x' (the torus acting
//! through w, so that the cells contain integral points for all c) are
//! enumerated by a
//! congruence-driven search: the sixteen matrix entries are polynomials in
//! the unipotent coordinates, and fixing coordinates one at a time turns
//! each new integrality requirement into a linear congruence with finitely
//! many solutions in [0, 1). A grid fallback (with the documented
//! denominator bound) covers the rare branches with no linear entry, and a
//! doubling certificate guards its completeness. Candidates are grouped
//! into double cosets by closing them under integral right translations.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::geometry::{
    c_star, psi_phase, rat_i, u_w_coords, unipotent_in_u_w, CharacterIndex, Mat4, Rat, Unipotent,
    WeylKind,
};
use crate::C64;

/// Key of a Kloosterman sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KloostermanKey {
    pub w: WeylKind,
    pub c: (i64, i64),
    pub m: CharacterIndex,
    pub n: CharacterIndex,
}

/// The modulus-divisibility half of the compatibility table.
pub fn cell_condition(w: WeylKind, c: (i64, i64)) -> bool {
    let (c1, c2) = c;
    match w {
        WeylKind::Id => c1 == 1 && c2 == 1,
        WeylKind::A => c2 == 1,
        WeylKind::B => c1 == 1,
        WeylKind::Ab => c1 % c2 == 0,
        WeylKind::Ba => c2 % (c1 * c1) == 0,
        WeylKind::Aba => (c1 * c1) % c2 == 0,
        WeylKind::Bab => c2 % c1 == 0,
        WeylKind::W0 => true,
    }
}

/// The character half of the compatibility table.
pub fn character_condition(key: &KloostermanKey) -> bool {
    let (c1, c2) = key.c;
    let (m1, m2) = (key.m.m1, key.m.m2);
    let (n1, n2) = (key.n.m1, key.n.m2);
    match key.w {
        WeylKind::Id => m1 == n1 && m2 == n2,
        WeylKind::A => m2 == 0 && n2 == 0,
        WeylKind::B => m1 == 0 && n1 == 0,
        WeylKind::Ab => m2 == 0 && n1 == 0,
        WeylKind::Ba => m1 == 0 && n2 == 0,
        WeylKind::Aba => m2 * c1 * c1 == n2 * c2 * c2,
        WeylKind::Bab => m1 * c2 == n1 * c1 * c1,
        WeylKind::W0 => true,
    }
}

/// Exact table lookup: compatibility of a key.
pub fn compatibility(key: &KloostermanKey) -> bool {
    cell_condition(key.w, key.c) && character_condition(key)
}

/// One double-coset representative.
#[derive(Debug, Clone)]
pub struct DoubleCosetRep {
    pub x: Unipotent,
    pub x_prime: Unipotent,
    pub gamma: Mat4,
}

impl DoubleCosetRep {
    /// Exact phase of psi_M(x) psi_N(x'), as a rational mod 1.
    pub fn phase(&self, m: CharacterIndex, n: CharacterIndex) -> Rat {
        let p = psi_phase(m, &self.x) + psi_phase(n, &self.x_prime);
        &p - p.floor()
    }
}

/// Search bounds for the enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundProfile {
    /// Grid denominators are `(c1 c2)^2 * multiplier` in the fallback path.
    pub denominator_multiplier: i64,
}

impl Default for BoundProfile {
    fn default() -> Self {
        BoundProfile {
            denominator_multiplier: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KloostermanError {
    /// The character sum is not constant on a double coset.
    IllDefined,
    /// Enumeration changed when the denominator bound was doubled.
    Unstable,
    Incompatible,
}

impl fmt::Display for KloostermanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KloostermanError::IllDefined => write!(f, "character sum is not well-defined"),
            KloostermanError::Unstable => {
                write!(f, "enumeration not stable under denominator growth")
            }
            KloostermanError::Incompatible => write!(f, "key fails the compatibility table"),
        }
    }
}

// ---------------------------------------------------------------------------
// small exact multivariate polynomials for the matrix entries

const NV: usize = 8; // x1, x2, x4, x5, then up to four U_w coordinates

#[derive(Debug, Clone, PartialEq, Eq)]
struct MPoly {
    terms: BTreeMap<[u8; NV], Rat>,
}

impl MPoly {
    fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    fn constant(c: Rat) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert([0; NV], c);
        }
        p
    }

    fn var(i: usize) -> Self {
        let mut e = [0u8; NV];
        e[i] = 1;
        let mut p = MPoly::zero();
        p.terms.insert(e, Rat::one());
        p
    }

    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            let e = out.terms.entry(*k).or_insert_with(Rat::zero);
            *e += v;
            if e.is_zero() {
                out.terms.remove(k);
            }
        }
        out
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = MPoly::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &o.terms {
                let k: [u8; NV] = core::array::from_fn(|i| ka[i] + kb[i]);
                let e = out.terms.entry(k).or_insert_with(Rat::zero);
                *e += va * vb;
                if e.is_zero() {
                    out.terms.remove(&k);
                }
            }
        }
        out
    }

    fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Substitute the assigned variables; the result involves only
    /// unassigned ones.
    fn reduce(&self, assign: &[Option<Rat>; NV]) -> MPoly {
        let mut out = MPoly::zero();
        for (k, v) in &self.terms {
            let mut coeff = v.clone();
            let mut key = [0u8; NV];
            for i in 0..NV {
                if k[i] == 0 {
                    continue;
                }
                match &assign[i] {
                    Some(val) => {
                        for _ in 0..k[i] {
                            coeff *= val;
                        }
                    }
                    None => key[i] = k[i],
                }
            }
            let e = out.terms.entry(key).or_insert_with(Rat::zero);
            *e += coeff;
            if e.is_zero() {
                out.terms.remove(&key);
            }
        }
        out
    }

    fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&[0; NV]).cloned(),
            _ => None,
        }
    }

    /// If the polynomial is a v + b in exactly one variable, return
    /// (variable, a, b).
    fn as_univariate_linear(&self) -> Option<(usize, Rat, Rat)> {
        let mut var = None;
        let mut a = Rat::zero();
        let mut b = Rat::zero();
        for (k, v) in &self.terms {
            let nz: Vec<usize> = (0..NV).filter(|&i| k[i] > 0).collect();
            match nz.len() {
                0 => b = v.clone(),
                1 => {
                    if k[nz[0]] != 1 {
                        return None;
                    }
                    match var {
                        None => {
                            var = Some(nz[0]);
                            a = v.clone();
                        }
                        Some(existing) if existing == nz[0] => a += v,
                        _ => return None,
                    }
                }
                _ => return None,
            }
        }
        var.map(|i| (i, a, b))
    }

    fn vars_used(&self) -> Vec<usize> {
        let mut used = [false; NV];
        for k in self.terms.keys() {
            for i in 0..NV {
                if k[i] > 0 {
                    used[i] = true;
                }
            }
        }
        (0..NV).filter(|&i| used[i]).collect()
    }
}

// ---------------------------------------------------------------------------

/// Entry polynomials of gamma = X(v) w c* X'(u) in the 8 coordinates.
fn gamma_entry_polys(w: WeylKind, c: (i64, i64)) -> [[MPoly; 4]; 4] {
    // symbolic unipotent matrices
    let x_mat = symbolic_unipotent([0, 1, 2, 3]);
    let coords = u_w_coords(w);
    let mut slot = [usize::MAX; 4]; // positions of x1, x2, x4, x5
    for (pos, &coord) in coords.iter().enumerate() {
        slot[match coord {
            1 => 0,
            2 => 1,
            4 => 2,
            5 => 3,
            _ => unreachable!(),
        }] = 4 + pos;
    }
    let xp_mat = symbolic_unipotent_partial(slot);
    let cw = c_star(&rat_i(c.0), &rat_i(c.1)).mul(&w.element().matrix);
    // m = (c* w) xp
    let mut m: [[MPoly; 4]; 4] = core::array::from_fn(|_| core::array::from_fn(|_| MPoly::zero()));
    for i in 0..4 {
        for k in 0..4 {
            if cw.0[i][k].is_zero() {
                continue;
            }
            for j in 0..4 {
                m[i][j] = m[i][j].add(&xp_mat[k][j].scale(&cw.0[i][k]));
            }
        }
    }
    // gamma = x * m
    let mut g: [[MPoly; 4]; 4] = core::array::from_fn(|_| core::array::from_fn(|_| MPoly::zero()));
    for i in 0..4 {
        for k in 0..4 {
            for j in 0..4 {
                let prod = x_mat[i][k].mul(&m[k][j]);
                g[i][j] = g[i][j].add(&prod);
            }
        }
    }
    g
}

/// Generic U-matrix with coordinates at the given variable indices.
fn symbolic_unipotent(idx: [usize; 4]) -> [[MPoly; 4]; 4] {
    let [i1, i2, i4, i5] = idx;
    let one = MPoly::constant(Rat::one());
    let v1 = MPoly::var(i1);
    let v2 = MPoly::var(i2);
    let v4 = MPoly::var(i4);
    let v5 = MPoly::var(i5);
    let v3 = v4.add(&v1.mul(&v5));
    let zero = MPoly::zero;
    [
        [one.clone(), v1.clone(), v2, v3],
        [zero(), one.clone(), v4, v5],
        [zero(), zero(), one.clone(), zero()],
        [zero(), zero(), v1.scale(&-Rat::one()), one],
    ]
}

/// Generic U_w-matrix: the slots array maps coordinate positions
/// (x1, x2, x4, x5) to variable indices, usize::MAX meaning the coordinate
/// is zero.
fn symbolic_unipotent_partial(slot: [usize; 4]) -> [[MPoly; 4]; 4] {
    let get = |s: usize| {
        if slot[s] == usize::MAX {
            MPoly::zero()
        } else {
            MPoly::var(slot[s])
        }
    };
    let one = MPoly::constant(Rat::one());
    let v1 = get(0);
    let v2 = get(1);
    let v4 = get(2);
    let v5 = get(3);
    let v3 = v4.add(&v1.mul(&v5));
    let zero = MPoly::zero;
    [
        [one.clone(), v1.clone(), v2, v3],
        [zero(), one.clone(), v4, v5],
        [zero(), zero(), one.clone(), zero()],
        [zero(), zero(), v1.scale(&-Rat::one()), one],
    ]
}

/// Depth-first congruence search for all integral specialisations with
/// coordinates in [0, 1).
struct Search {
    entries: Vec<MPoly>,
    grid_denominator: i64,
    fallback_used: bool,
    solutions: Vec<[Rat; NV]>,
    node_budget: u64,
}

impl Search {
    fn run(&mut self, assign: &mut [Option<Rat>; NV]) {
        if self.node_budget == 0 {
            return;
        }
        self.node_budget -= 1;
        // reduce all entries; prune on non-integer constants, find the best
        // single-variable linear entry
        let mut best: Option<(usize, Rat, Rat, u64)> = None;
        let mut residuals: Vec<MPoly> = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let r = e.reduce(assign);
            if let Some(cst) = r.as_constant() {
                if !cst.is_integer() {
                    return; // contradiction
                }
                continue;
            }
            if let Some((v, a, b)) = r.as_univariate_linear() {
                // number of integer points of a t + b for t in [0,1):
                // k runs over an interval of length |a|
                let count = rat_ceil_count(&a);
                if best.as_ref().map(|(_, _, _, c)| count < *c).unwrap_or(true) {
                    best = Some((v, a, b, count));
                }
            }
            residuals.push(r);
        }
        if residuals.is_empty() {
            // fully determined and integral
            let sol: [Rat; NV] =
                core::array::from_fn(|i| assign[i].clone().unwrap_or_else(Rat::zero));
            self.solutions.push(sol);
            return;
        }
        if let Some((v, a, b, _)) = best {
            // a t + b integral, t in [0,1): t = (k - b)/a
            for k in integer_range(&b, &a) {
                let t = (Rat::from_integer(k.clone()) - &b) / &a;
                debug_assert!(!t.is_negative() && t < Rat::one());
                assign[v] = Some(t);
                self.run(assign);
                assign[v] = None;
            }
            return;
        }
        // fallback: grid over the lowest-index unassigned variable that
        // actually occurs
        self.fallback_used = true;
        let var = residuals
            .iter()
            .flat_map(|r| r.vars_used())
            .find(|&v| assign[v].is_none());
        let Some(var) = var else { return };
        for t in 0..self.grid_denominator {
            assign[var] = Some(Rat::new(BigInt::from(t), BigInt::from(self.grid_denominator)));
            self.run(assign);
            assign[var] = None;
        }
    }
}

fn rat_ceil_count(a: &Rat) -> u64 {
    // number of integers in a half-open interval of length |a|
    a.abs().ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

/// Integers k with (k - b)/a in [0, 1).
fn integer_range(b: &Rat, a: &Rat) -> Vec<BigInt> {
    let (lo, hi) = if a.is_positive() {
        (b.clone(), b + a) // k in [b, b+a)
    } else {
        (b + a, b.clone()) // k in (b+a, b], flipped to [lo, hi) care below
    };
    let mut out = Vec::new();
    let mut k = lo.ceil().to_integer();
    if a.is_negative() {
        // interval (lo, hi]: start strictly above lo
        if Rat::from_integer(k.clone()) == lo {
            k += 1;
        }
        while Rat::from_integer(k.clone()) <= hi {
            out.push(k.clone());
            k += 1;
        }
    } else {
        while Rat::from_integer(k.clone()) < hi {
            out.push(k.clone());
            k += 1;
        }
    }
    out
}

/// Right reduction of x' in U_w modulo U_w(Z): all active coordinates into
/// [0, 1).
fn reduce_right_mod_z_in_u_w(w: WeylKind, xp: &Unipotent) -> Unipotent {
    let coords = u_w_coords(w);
    let has = |c: usize| coords.contains(&c);
    // choose b in U_w(Z) with (xp ∘ b) reduced; order x1, x5, x4, x2
    let mut b = Unipotent::zero();
    if has(1) {
        b.x1 = -xp.x1.floor();
    }
    if has(5) {
        b.x5 = -xp.x5.floor();
    }
    if has(4) {
        // (xp b).x4 = xp.x4 + b.x4 - xp.x5 * b.x1
        let partial = &xp.x4 - &xp.x5 * &b.x1;
        b.x4 = -partial.floor();
    }
    if has(2) {
        // (xp b).x2 = xp.x2 + b.x2 + xp.x1 b.x4 - xp.x3 b.x1
        let partial = &xp.x2 + &xp.x1 * &b.x4 - xp.x3() * &b.x1;
        b.x2 = -partial.floor();
    }
    let red = xp.compose(&b);
    debug_assert!(u_w_coords(w)
        .iter()
        .all(|&c| coord(&red, c) >= &Rat::zero() && coord(&red, c) < &Rat::one()));
    red
}

fn coord(x: &Unipotent, c: usize) -> &Rat {
    match c {
        1 => &x.x1,
        2 => &x.x2,
        4 => &x.x4,
        5 => &x.x5,
        _ => unreachable!(),
    }
}

fn pair_key(x: &Unipotent, xp: &Unipotent) -> String {
    format!(
        "{}|{}|{}|{}|{}|{}|{}|{}",
        x.x1, x.x2, x.x4, x.x5, xp.x1, xp.x2, xp.x4, xp.x5
    )
}

/// The orbit of a representative pair under integral right translations,
/// with left reduction re-applied; used both to merge raw candidates into
/// double cosets and to check phase constancy.
fn right_translation_orbit(
    w: WeylKind,
    c: (i64, i64),
    x0: &Unipotent,
    xp0: &Unipotent,
    cap: usize,
) -> Vec<(Unipotent, Unipotent)> {
    let cw = c_star(&rat_i(c.0), &rat_i(c.1)).mul(&w.element().matrix);
    let cw_inv = cw.inverse();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    let mut orbit = Vec::new();
    seen.insert(pair_key(x0, xp0));
    queue.push_back((x0.clone(), xp0.clone()));
    while let Some((x, xp)) = queue.pop_front() {
        orbit.push((x.clone(), xp.clone()));
        if orbit.len() >= cap {
            break;
        }
        for d in [1usize, 2, 4, 5] {
            for s in [1i64, -1] {
                let mut gen = Unipotent::zero();
                match d {
                    1 => gen.x1 = rat_i(s),
                    2 => gen.x2 = rat_i(s),
                    4 => gen.x4 = rat_i(s),
                    5 => gen.x5 = rat_i(s),
                    _ => unreachable!(),
                }
                let xp_full = xp.compose(&gen);
                let (h, xt) = crate::geometry::split_off_u_w(w, &xp_full);
                // absorb h leftwards through c* w
                let conj = cw.mul(&h.to_matrix()).mul(&cw_inv);
                let Some(conj_u) = Unipotent::from_matrix(&conj) else {
                    continue; // leaves the unipotent: translation not allowed
                };
                let x_new = x.compose(&conj_u);
                let (x_red, _) = x_new.reduce_left_mod_z();
                let xt_red = reduce_right_mod_z_in_u_w(w, &xt);
                let key = pair_key(&x_red, &xt_red);
                if seen.insert(key) {
                    queue.push_back((x_red, xt_red));
                }
            }
        }
    }
    orbit
}

/// Complete list of double-coset representatives of the (w, c)-cell.
///
/// Returns the representatives and whether the fallback grid was used
/// anywhere (the congruence-driven part of the search is exhaustive on its
/// own).
pub fn enumerate_cell(
    w: WeylKind,
    c: (i64, i64),
    profile: &BoundProfile,
) -> (Vec<DoubleCosetRep>, bool) {
    let entries = gamma_entry_polys(w, c);
    let n_vars = 4 + w.length();
    let mut flat = Vec::new();
    for row in &entries {
        for e in row {
            flat.push(e.clone());
        }
    }
    let mut search = Search {
        entries: flat,
        grid_denominator: (c.0 * c.1).pow(2) * profile.denominator_multiplier,
        fallback_used: false,
        solutions: Vec::new(),
        node_budget: 50_000_000,
    };
    let mut assign: [Option<Rat>; NV] = core::array::from_fn(|_| None);
    for i in n_vars..NV {
        assign[i] = Some(Rat::zero());
    }
    search.run(&mut assign);

    // materialise candidates, verify, and merge into double cosets
    let coords = u_w_coords(w);
    let mut reps: Vec<DoubleCosetRep> = Vec::new();
    let mut claimed: BTreeSet<String> = BTreeSet::new();
    for sol in &search.solutions {
        let x = Unipotent::new(sol[0].clone(), sol[1].clone(), sol[2].clone(), sol[3].clone());
        let vals: Vec<Rat> = (0..coords.len()).map(|k| sol[4 + k].clone()).collect();
        let xp = unipotent_in_u_w(w, &vals);
        let gamma = x
            .to_matrix()
            .mul(&c_star(&rat_i(c.0), &rat_i(c.1)))
            .mul(&w.element().matrix)
            .mul(&xp.to_matrix());
        if !gamma.is_integral() || !gamma.is_symplectic() {
            continue;
        }
        let key = pair_key(&x, &xp);
        if claimed.contains(&key) {
            continue;
        }
        // claim the whole right-translation orbit for this coset
        let orbit = right_translation_orbit(w, c, &x, &xp, 100_000);
        for (ox, oxp) in &orbit {
            claimed.insert(pair_key(ox, oxp));
        }
        reps.push(DoubleCosetRep { x, x_prime: xp, gamma });
    }
    (reps, search.fallback_used)
}

/// Continuous reparametrisation invariance: the decomposition
/// gamma = x w c* x' is only unique up to
///   x -> x (w c*) xi (w c*)^(-1),   x' -> xi^(-1) x'
/// for xi in U ∩ w^(-1) U w (the coordinates complementary to U_w), so the
/// character phase must be constant along those directions.
pub fn continuous_invariance(key: &KloostermanKey) -> bool {
    let w = key.w;
    let complement: Vec<usize> = [1usize, 2, 4, 5]
        .into_iter()
        .filter(|c| !u_w_coords(w).contains(c))
        .collect();
    let cw = c_star(&rat_i(key.c.0), &rat_i(key.c.1)).mul(&w.element().matrix);
    let cw_inv = cw.inverse();
    for d in complement {
        let mut xi = Unipotent::zero();
        match d {
            1 => xi.x1 = Rat::one(),
            2 => xi.x2 = Rat::one(),
            4 => xi.x4 = Rat::one(),
            5 => xi.x5 = Rat::one(),
            _ => unreachable!(),
        }
        let conj_m = cw.mul(&xi.to_matrix()).mul(&cw_inv);
        let Some(conj) = Unipotent::from_matrix(&conj_m) else {
            return false;
        };
        // phase shift along the one-parameter family:
        // m1 conj1 + m2 conj5 - n1 xi1 - n2 xi5 must vanish identically
        let shift = rat_i(key.m.m1) * &conj.x1
            + rat_i(key.m.m2) * &conj.x5
            - rat_i(key.n.m1) * &xi.x1
            - rat_i(key.n.m2) * &xi.x5;
        if !shift.is_zero() {
            return false;
        }
    }
    true
}

/// Discrete well-definedness: the phase is constant on every enumerated
/// double coset (checked on the whole right-translation orbit), and the
/// continuous reparametrisation invariance holds.
pub fn well_definedness_check(key: &KloostermanKey, profile: &BoundProfile) -> bool {
    if !continuous_invariance(key) {
        return false;
    }
    let (reps, _) = enumerate_cell(key.w, key.c, profile);
    for rep in &reps {
        let base = rep.phase(key.m, key.n);
        let orbit = right_translation_orbit(key.w, key.c, &rep.x, &rep.x_prime, 100_000);
        for (ox, oxp) in &orbit {
            let p = psi_phase(key.m, ox) + psi_phase(key.n, oxp);
            let p = &p - p.floor();
            if p != base {
                return false;
            }
        }
    }
    true
}

/// A Kloosterman value: float total plus the exact phase multiset.
#[derive(Debug, Clone)]
pub struct KloostermanValue {
    pub value: C64,
    pub phases: Vec<Rat>,
    pub cell_size: usize,
}

/// Kl_w(c, M, N) = sum over double cosets of psi_M(x) psi_N(x'), phases
/// exact; checked stable under doubling the fallback denominator bound.
pub fn kloosterman_sum(
    key: &KloostermanKey,
    profile: &BoundProfile,
) -> Result<KloostermanValue, KloostermanError> {
    if !compatibility(key) {
        return Err(KloostermanError::Incompatible);
    }
    if !well_definedness_check(key, profile) {
        return Err(KloostermanError::IllDefined);
    }
    let (reps, fallback) = enumerate_cell(key.w, key.c, profile);
    if fallback {
        // certify by doubling the denominator bound
        let doubled = BoundProfile {
            denominator_multiplier: profile.denominator_multiplier * 2,
        };
        let (reps2, _) = enumerate_cell(key.w, key.c, &doubled);
        if reps2.len() != reps.len() {
            return Err(KloostermanError::Unstable);
        }
    }
    let phases: Vec<Rat> = reps.iter().map(|r| r.phase(key.m, key.n)).collect();
    let mut value = C64::new(0.0, 0.0);
    for p in &phases {
        value += crate::geometry::phase_to_c64(p);
    }
    Ok(KloostermanValue {
        value,
        phases,
        cell_size: reps.len(),
    })
}
