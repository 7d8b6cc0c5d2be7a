//! Numeric evaluation of the residue series: each symbolic term is compiled
//! into lookup tables indexed by integer combinations of (k1..k4), with the
//! gamma factors kept in log space for range safety. The same machinery
//! drives the eight surviving series, the Gauss-cancellation pairs (with an
//! extrapolated k1-sum, since those series only converge polynomially in
//! k1), and the structural negative controls.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
// required for float methods in no_std builds; redundant when std is linked
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{Signed, ToPrimitive};

use super::symbolic::{full_extraction, LinForm, SeriesLabel, Sym, Term, SURVIVORS};
use crate::special::{log_gamma, mellin_f};
use crate::spectral::{SpectralParameter, TestFunctionSpec};
use crate::whittaker::gamma_norm_product;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesError {
    UnknownLabel(String),
    NotASurvivor(String),
    /// A gamma argument lands within `1e-6` of a non-positive integer.
    PoleCollision,
    /// mu1 = 0 or mu1 = ±mu2: the series parametrisation degenerates.
    DegenerateParameter,
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::UnknownLabel(s) => write!(f, "unknown series label {s}"),
            SeriesError::NotASurvivor(s) => write!(f, "series {s} is not one of the 8 survivors"),
            SeriesError::PoleCollision => write!(f, "gamma argument too close to a pole"),
            SeriesError::DegenerateParameter => write!(f, "degenerate spectral parameter"),
        }
    }
}

/// Identifier for a residue series from the 32-label table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueSeriesId(pub SeriesLabel);

impl ResidueSeriesId {
    pub fn from_name(name: &str) -> Result<Self, SeriesError> {
        let mut ch = name.chars();
        let (Some(a), Some(b), Some(c), None) = (ch.next(), ch.next(), ch.next(), ch.next())
        else {
            return Err(SeriesError::UnknownLabel(String::from(name)));
        };
        let label = SeriesLabel {
            stage34: a,
            stage2: b,
            stage1: c,
        };
        if !("ABCD".contains(a) && "ab".contains(b) && "1234".contains(c)) {
            return Err(SeriesError::UnknownLabel(String::from(name)));
        }
        Ok(ResidueSeriesId(label))
    }

    /// Whether the series survives the cancellations.
    pub fn survives(&self) -> bool {
        SURVIVORS.contains(&self.0.name().as_str())
    }
}

/// Truncation box for the quadruple sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTruncation {
    pub k_max: [usize; 4],
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        SeriesTruncation { k_max: [32; 4] }
    }
}

impl SeriesTruncation {
    pub fn uniform(k: usize) -> Self {
        SeriesTruncation { k_max: [k; 4] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: C64,
    /// Magnitude of the outermost truncation shell; a proxy for the tail.
    pub tail_estimate: f64,
}

/// One factor's lookup table: value(k) = table[(sum offsets·k) - n_min].
struct FactorTable {
    offsets: [i64; 4],
    n_min: i64,
    values: Vec<C64>,
}

impl FactorTable {
    #[inline]
    fn index(&self, k: &[i64; 4]) -> usize {
        let mut n = -self.n_min;
        for i in 0..4 {
            n += self.offsets[i] * k[i];
        }
        n as usize
    }
}

fn lin_k_offsets(f: &LinForm) -> [i64; 4] {
    core::array::from_fn(|i| {
        let c = &f.co[Sym::K1 as usize + i];
        assert!(c.is_integer(), "non-integer k coefficient");
        c.to_integer().to_i64().expect("small k coefficient")
    })
}

fn lin_constant(f: &LinForm, mu: &SpectralParameter, r1: C64) -> C64 {
    let base = C64::new(rat_f(&f.cst), 0.0);
    base + rat_f(&f.co[Sym::Mu1 as usize]) * mu.mu1
        + rat_f(&f.co[Sym::Mu2 as usize]) * mu.mu2
        + rat_f(&f.co[Sym::R1 as usize]) * r1
}

fn rat_f(r: &num_rational::BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

fn range_of(offsets: &[i64; 4], k_max: &[usize; 4]) -> (i64, i64) {
    let mut lo = 0i64;
    let mut hi = 0i64;
    for i in 0..4 {
        let reach = offsets[i] * k_max[i] as i64;
        lo += reach.min(0);
        hi += reach.max(0);
    }
    (lo, hi)
}

/// A symbolic term compiled against numeric (mu, F) data.
pub(crate) struct CompiledSeries {
    gammas: Vec<FactorTable>, // log-gamma values
    fhat1: FactorTable,
    fhat2: FactorTable,
    /// linear weight: exp(w0 + sum w_i k_i) collects the pi and X powers
    w0: C64,
    w: [f64; 4],
    /// overall constant: residue coefficient / gamma-norm, times prefactor
    scale: C64,
    ln_fact: Vec<f64>,
    k_max: [usize; 4],
    /// which k-axes actually occur in the term (16-level terms have no k1)
    active: [bool; 4],
}

impl CompiledSeries {
    pub(crate) fn new(
        term: &Term,
        mu: &SpectralParameter,
        spec: &TestFunctionSpec,
        trunc: &SeriesTruncation,
    ) -> Result<Self, SeriesError> {
        Self::new_with_r1(term, C64::new(0.0, 0.0), mu, spec, trunc)
    }

    /// Compile with a numeric value substituted for the r1 symbol (used by
    /// the group-contour evaluation, where r1 stays on its line).
    pub(crate) fn new_with_r1(
        term: &Term,
        r1: C64,
        mu: &SpectralParameter,
        spec: &TestFunctionSpec,
        trunc: &SeriesTruncation,
    ) -> Result<Self, SeriesError> {
        assert!(
            term.ranges.is_empty(),
            "numeric evaluation requires full k-ranges"
        );
        let mut active = [false; 4];
        for s in &term.k_syms {
            active[*s as usize - Sym::K1 as usize] = true;
        }
        let mut k_max = trunc.k_max;
        for i in 0..4 {
            if !active[i] {
                k_max[i] = 0;
            }
        }
        let (t1, t2) = spec.t_powers();
        // gamma tables in log space
        let mut gammas = Vec::new();
        for g in &term.gammas {
            let offsets = lin_k_offsets(g);
            let z0 = lin_constant(g, mu, r1);
            let (lo, hi) = range_of(&offsets, &k_max);
            let mut values = Vec::with_capacity((hi - lo + 1) as usize);
            for n in lo..=hi {
                let z = z0 + n as f64;
                // pole guard: non-positive integers on the real axis
                if z.im.abs() < 1e-6 && z.re < 0.5 && (z.re - z.re.round()).abs() < 1e-6 {
                    return Err(SeriesError::PoleCollision);
                }
                values.push(log_gamma(z).map_err(|_| SeriesError::PoleCollision)?);
            }
            gammas.push(FactorTable {
                offsets,
                n_min: lo,
                values,
            });
        }
        // Mellin tables: f^(-2 + i t1 - alpha1), f^(-3/2 + i t2 - alpha2)
        let build_fhat = |alpha: &LinForm, base: C64| -> FactorTable {
            let a_off = lin_k_offsets(alpha);
            let offsets: [i64; 4] = core::array::from_fn(|i| -a_off[i]);
            let b0 = base - lin_constant(alpha, mu, r1);
            let (lo, hi) = range_of(&offsets, &k_max);
            let values = (lo..=hi)
                .map(|n| mellin_f(&spec.f, b0 + n as f64).value)
                .collect();
            FactorTable {
                offsets,
                n_min: lo,
                values,
            }
        };
        let fhat1 = build_fhat(&term.alpha1, C64::new(-2.0, t1));
        let fhat2 = build_fhat(&term.alpha2, C64::new(-1.5, t2));
        // pi and X powers: pi^(-a1-a2) X1^(2 - i t1 + a1) X2^(3/2 - i t2 + a2)
        let ln_pi = PI.ln();
        let lx1 = spec.x1.ln();
        let lx2 = spec.x2.ln();
        let a1c = lin_constant(&term.alpha1, mu, r1);
        let a2c = lin_constant(&term.alpha2, mu, r1);
        let a1k = lin_k_offsets(&term.alpha1);
        let a2k = lin_k_offsets(&term.alpha2);
        let w0 = -(a1c + a2c) * ln_pi
            + (C64::new(2.0, -t1) + a1c) * lx1
            + (C64::new(1.5, -t2) + a2c) * lx2;
        let w: [f64; 4] = core::array::from_fn(|i| {
            -(a1k[i] + a2k[i]) as f64 * ln_pi + a1k[i] as f64 * lx1 + a2k[i] as f64 * lx2
        });
        let coeff = rat_f(&term.coeff);
        let scale = C64::new(coeff * spec.prefactor() / gamma_norm_product(mu), 0.0);
        let km = k_max.iter().max().unwrap();
        let mut ln_fact = Vec::with_capacity(km + 2);
        let mut acc = 0.0;
        ln_fact.push(0.0);
        for k in 1..=(km + 1) {
            acc += (k as f64).ln();
            ln_fact.push(acc);
        }
        Ok(CompiledSeries {
            gammas,
            fhat1,
            fhat2,
            w0,
            w,
            scale,
            ln_fact,
            k_max,
            active,
        })
    }

    #[inline]
    fn term_at(&self, k: &[i64; 4]) -> C64 {
        let mut log_sum = self.w0;
        for g in &self.gammas {
            log_sum += g.values[g.index(k)];
        }
        let mut sign = 1.0;
        for i in 0..4 {
            if !self.active[i] {
                continue;
            }
            log_sum += C64::new(self.w[i] * k[i] as f64 - self.ln_fact[k[i] as usize], 0.0);
            if k[i] & 1 == 1 {
                sign = -sign;
            }
        }
        let f1 = self.fhat1.values[self.fhat1.index(k)];
        let f2 = self.fhat2.values[self.fhat2.index(k)];
        sign * log_sum.exp() * f1 * f2
    }

    /// Plain truncated sum over the k-box, with the outer-shell magnitude.
    fn sum_box(&self) -> SeriesValue {
        let mut acc = C64::new(0.0, 0.0);
        let mut shell = 0.0;
        let km = self.k_max;
        let mut k = [0i64; 4];
        for k1 in 0..=km[0] as i64 {
            k[0] = k1;
            for k2 in 0..=km[1] as i64 {
                k[1] = k2;
                for k3 in 0..=km[2] as i64 {
                    k[2] = k3;
                    for k4 in 0..=km[3] as i64 {
                        k[3] = k4;
                        let t = self.term_at(&k);
                        acc += self.scale * t;
                        if k1 == km[0] as i64
                            || k2 == km[1] as i64
                            || k3 == km[2] as i64
                            || k4 == km[3] as i64
                        {
                            shell += (self.scale * t).norm();
                        }
                    }
                }
            }
        }
        SeriesValue {
            value: acc,
            tail_estimate: 2.0 * shell,
        }
    }
}

/// Stable evaluation of the full residue expansion (the sum of the eight
/// surviving series).
///
/// Summed naively, each surviving series swells to ~1e10 times the final
/// answer along its k1 axis (the gamma factor with +k1 grows against the
/// Mellin and pi powers before the factorials win), and the swell only
/// cancels across series — hopeless in double precision. Keeping the last
/// contour unshifted avoids this: by the verified swap cancellations,
///   sum(8 survivors) = sum over the groups Aa, Ab, Ba, Bb of
///                      (1/2pi i) int_(rho1) [k2,k3,k4-sums] dr1,
/// and each group integrand is small and decaying on the line. The k2, k3,
/// k4 sums swell only mildly (~1e5).
pub fn residue_sum_stable(
    mu: &SpectralParameter,
    spec: &TestFunctionSpec,
    trunc: &SeriesTruncation,
) -> Result<SeriesValue, SeriesError> {
    check_parameter(mu)?;
    let groups = super::symbolic::extraction_16();
    let rho1 = 0.75f64.max(mu.mu1.re.abs() + 0.25);
    let im_max = mu.mu1.im.abs().max(mu.mu2.im.abs());
    let (t1, t2) = spec.t_powers();
    let height = im_max + t1.abs().max(t2.abs()) * 0.0 + 30.0;
    let npu = 10.0;
    let n_nodes = (height * npu).ceil() as i64;
    let h = 1.0 / npu;
    let mut acc = C64::new(0.0, 0.0);
    let mut tail = 0.0;
    for (label, term) in &groups {
        if label.stage2 != 'a' && label.stage2 != 'b' {
            continue;
        }
        let mut boundary = 0.0;
        for j in -n_nodes..=n_nodes {
            let r1 = C64::new(rho1, j as f64 * h);
            let inner = group_inner_sum(term, r1, mu, spec, trunc)?;
            // d r1 / (2 pi i) on the vertical line is dt / (2 pi)
            acc += inner * (h / (2.0 * core::f64::consts::PI));
            if j.abs() >= n_nodes - 1 {
                boundary += inner.norm() * h;
            }
        }
        tail += boundary;
    }
    Ok(SeriesValue {
        value: acc,
        tail_estimate: tail,
    })
}

/// The k2, k3, k4 sum of one 16-level group at a fixed point on the r1 line.
///
/// Groups with two gamma factors growing along k2 (the D-branch leftovers)
/// have only polynomial k2-decay, by the same hypergeometric mechanism as
/// the Gauss pairs; their k2-axis is extrapolated, the rest are summed
/// plainly.
fn group_inner_sum(
    term: &Term,
    r1: C64,
    mu: &SpectralParameter,
    spec: &TestFunctionSpec,
    trunc: &SeriesTruncation,
) -> Result<C64, SeriesError> {
    let growing_k2 = term
        .gammas
        .iter()
        .filter(|g| g.coeff(super::symbolic::Sym::K2).is_positive())
        .count();
    if growing_k2 < 2 {
        let compiled = CompiledSeries::new_with_r1(term, r1, mu, spec, trunc)?;
        return Ok(compiled.sum_box().value);
    }
    const K2_CUT: usize = 512;
    let mut big = *trunc;
    big.k_max[1] = K2_CUT;
    let compiled = CompiledSeries::new_with_r1(term, r1, mu, spec, &big)?;
    let mut acc = C64::new(0.0, 0.0);
    for k3 in 0..=trunc.k_max[2] as i64 {
        for k4 in 0..=trunc.k_max[3] as i64 {
            let k = [0i64, 0, k3, k4];
            let s_exponent = (2 + k3 + k4) as f64;
            acc += axis_extrapolated(&compiled, 1, k, s_exponent, K2_CUT);
        }
    }
    Ok(acc * compiled.scale)
}

fn check_parameter(mu: &SpectralParameter) -> Result<(), SeriesError> {
    if mu.is_degenerate() {
        return Err(SeriesError::DegenerateParameter);
    }
    Ok(())
}

fn term_by_label(label: &SeriesLabel) -> Option<Term> {
    full_extraction()
        .into_iter()
        .find(|(l, _)| l == label)
        .map(|(_, t)| t)
}

/// Evaluate one of the eight surviving residue series.
pub fn residue_series_eval(
    id: ResidueSeriesId,
    mu: &SpectralParameter,
    spec: &TestFunctionSpec,
    trunc: &SeriesTruncation,
) -> Result<SeriesValue, SeriesError> {
    check_parameter(mu)?;
    if !id.survives() {
        return Err(SeriesError::NotASurvivor(id.0.name()));
    }
    let term = term_by_label(&id.0).ok_or_else(|| SeriesError::UnknownLabel(id.0.name()))?;
    let compiled = CompiledSeries::new(&term, mu, spec, trunc)?;
    Ok(compiled.sum_box())
}

/// Sum of the eight surviving series: the residue expansion of the full
/// transform I(mu).
pub fn residue_series_sum(
    mu: &SpectralParameter,
    spec: &TestFunctionSpec,
    trunc: &SeriesTruncation,
) -> Result<SeriesValue, SeriesError> {
    let mut acc = C64::new(0.0, 0.0);
    let mut tail = 0.0;
    for name in SURVIVORS {
        let v = residue_series_eval(ResidueSeriesId::from_name(name)?, mu, spec, trunc)?;
        acc += v.value;
        tail += v.tail_estimate;
    }
    Ok(SeriesValue {
        value: acc,
        tail_estimate: tail,
    })
}

/// The four pairs of the extra-cancellation lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussPair {
    Ca,
    Cb,
    D1,
    D2,
}

impl GaussPair {
    pub fn members(self) -> (&'static str, &'static str) {
        match self {
            GaussPair::Ca => ("Ca1", "Ca2"),
            GaussPair::Cb => ("Cb1", "Cb2"),
            GaussPair::D1 => ("Da1", "Db1"),
            GaussPair::D2 => ("Da2", "Db2"),
        }
    }

    /// The summation axis along which the pair cancels (the slot of the
    /// flipped parameter): the C-pairs differ by a mu1 flip and cancel over
    /// the k1-sum, the D-pairs by a mu2 flip over k2. That axis converges
    /// only polynomially and is extrapolated.
    fn cancel_axis(self) -> usize {
        match self {
            GaussPair::Ca | GaussPair::Cb => 0,
            GaussPair::D1 | GaussPair::D2 => 1,
        }
    }
}

/// Cancellation defect |sum of pair| / max |member| for a Gauss pair.
///
/// The members' k1-sums converge only like k1^-(2+k3+k4), so the k1 axis is
/// summed to a large cut-off with Richardson extrapolation of the power-law
/// tail; k2, k3, k4 run over the truncation box. The defect then decays to
/// the extrapolation floor as the box grows.
pub fn cancellation_defect(
    pair: GaussPair,
    mu: &SpectralParameter,
    spec: &TestFunctionSpec,
    trunc: &SeriesTruncation,
) -> Result<f64, SeriesError> {
    check_parameter(mu)?;
    let (n1, n2) = pair.members();
    let (s1, s2) = pair_sums(n1, n2, pair.cancel_axis(), mu, spec, trunc)?;
    let defect = (s1 + s2).norm() / s1.norm().max(s2.norm()).max(1e-300);
    Ok(defect)
}

/// The same ratio for two surviving series (which do not cancel); the
/// negative control for the cancellation tests. Survivors converge
/// factorially, so the plain box sum is used.
pub fn non_cancelling_defect(
    a: &str,
    b: &str,
    mu: &SpectralParameter,
    spec: &TestFunctionSpec,
    trunc: &SeriesTruncation,
) -> Result<f64, SeriesError> {
    check_parameter(mu)?;
    let s1 = residue_series_eval(ResidueSeriesId::from_name(a)?, mu, spec, trunc)?.value;
    let s2 = residue_series_eval(ResidueSeriesId::from_name(b)?, mu, spec, trunc)?.value;
    Ok((s1 + s2).norm() / s1.norm().max(s2.norm()).max(1e-300))
}

fn pair_sums(
    name1: &str,
    name2: &str,
    axis: usize,
    mu: &SpectralParameter,
    spec: &TestFunctionSpec,
    trunc: &SeriesTruncation,
) -> Result<(C64, C64), SeriesError> {
    let t1 = term_by_label(&ResidueSeriesId::from_name(name1)?.0)
        .ok_or_else(|| SeriesError::UnknownLabel(String::from(name1)))?;
    let t2 = term_by_label(&ResidueSeriesId::from_name(name2)?.0)
        .ok_or_else(|| SeriesError::UnknownLabel(String::from(name2)))?;
    // the cancellation axis is extrapolated: compile with a long axis
    const EXTRAP_CUT: usize = 2048;
    let mut big = *trunc;
    big.k_max[axis] = EXTRAP_CUT;
    let c1 = CompiledSeries::new(&t1, mu, spec, &big)?;
    let c2 = CompiledSeries::new(&t2, mu, spec, &big)?;
    let mut sum1 = C64::new(0.0, 0.0);
    let mut sum2 = C64::new(0.0, 0.0);
    let others: [usize; 3] = match axis {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        _ => unreachable!("cancellation axes are k1 and k2"),
    };
    for a in 0..=trunc.k_max[others[0]] as i64 {
        for b in 0..=trunc.k_max[others[1]] as i64 {
            for c in 0..=trunc.k_max[others[2]] as i64 {
                // the hypergeometric tail exponent is 2 + k3 + k4 for both
                // cancellation axes
                let mut k = [0i64; 4];
                k[others[0]] = a;
                k[others[1]] = b;
                k[others[2]] = c;
                let s_exponent = (2 + k[2] + k[3]) as f64;
                sum1 += axis_extrapolated(&c1, axis, k, s_exponent, EXTRAP_CUT);
                sum2 += axis_extrapolated(&c2, axis, k, s_exponent, EXTRAP_CUT);
            }
        }
    }
    Ok((sum1 * c1.scale, sum2 * c2.scale))
}

/// Partial sum along one k-axis with Richardson extrapolation against the
/// known power-law tail: S_n = S + a n^(1-s) + b n^(-s) + c n^(-s-1).
fn axis_extrapolated(c: &CompiledSeries, axis: usize, mut k: [i64; 4], s: f64, cut: usize) -> C64 {
    let ns = [cut as i64 / 8, cut as i64 / 4, cut as i64 / 2, cut as i64];
    let mut partial = [C64::new(0.0, 0.0); 4];
    let mut acc = C64::new(0.0, 0.0);
    let mut next = 0;
    for kv in 0..ns[3] {
        if next < 3 && kv == ns[next] {
            partial[next] = acc;
            next += 1;
        }
        k[axis] = kv;
        acc += c.term_at(&k);
    }
    partial[3] = acc;
    // if the terms already died out, skip the extrapolation
    if (partial[3] - partial[2]).norm() < 1e-300 + 1e-16 * partial[3].norm() {
        return partial[3];
    }
    let powers = [1.0 - s, -s, -s - 1.0];
    let mut m = [[C64::new(0.0, 0.0); 4]; 4];
    let mut rhs = partial;
    for (j, &n) in ns.iter().enumerate() {
        let nf = n as f64;
        m[j][0] = C64::new(1.0, 0.0);
        for (i, &p) in powers.iter().enumerate() {
            m[j][i + 1] = C64::new(nf.powf(p), 0.0);
        }
    }
    crate::quad::solve4_pub(&mut m, &mut rhs);
    rhs[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu(a: (f64, f64), b: (f64, f64)) -> SpectralParameter {
        SpectralParameter::raw(C64::new(a.0, a.1), C64::new(b.0, b.1))
    }

    #[test]
    fn id_parsing_and_survivor_flag() {
        assert!(ResidueSeriesId::from_name("Aa1").unwrap().survives());
        assert!(ResidueSeriesId::from_name("Bb2").unwrap().survives());
        assert!(!ResidueSeriesId::from_name("Ca1").unwrap().survives());
        assert!(ResidueSeriesId::from_name("Zz9").is_err());
    }

    #[test]
    fn degenerate_mu_rejected() {
        let spec = TestFunctionSpec::new(1.0, 2.0, 1.0, 1.0);
        let m = mu((0.0, 1.0), (0.0, 1.0));
        let id = ResidueSeriesId::from_name("Aa1").unwrap();
        assert_eq!(
            residue_series_eval(id, &m, &spec, &SeriesTruncation::uniform(4)),
            Err(SeriesError::DegenerateParameter)
        );
    }

    #[test]
    fn zero_truncation_matches_leading_term_structure() {
        // the (0,0,0,0) term of Aa1 is
        // 16 f^(-2+i t1-mu1-mu2) f^(-3/2+i t2-mu2) pi^(mu1+2mu2)
        //   Gamma(mu1)Gamma(mu2)Gamma((mu1+mu2)/2)Gamma((-mu1+mu2)/2) / norm
        let m = mu((0.0, 1.0), (0.0, 2.0));
        let spec = TestFunctionSpec::new(1.0, 2.0, 1.0, 1.0);
        let id = ResidueSeriesId::from_name("Aa1").unwrap();
        let got = residue_series_eval(id, &m, &spec, &SeriesTruncation::uniform(0))
            .unwrap()
            .value;
        let (t1, t2) = spec.t_powers();
        let m1 = m.mu1;
        let m2 = m.mu2;
        let f1 = mellin_f(&spec.f, C64::new(-2.0, t1) - m1 - m2).value;
        let f2 = mellin_f(&spec.f, C64::new(-1.5, t2) - m2).value;
        let gam = (log_gamma(m1).unwrap()
            + log_gamma(m2).unwrap()
            + log_gamma((m1 + m2) / 2.0).unwrap()
            + log_gamma((m2 - m1) / 2.0).unwrap())
        .exp();
        let want = 16.0 * f1 * f2 * (-(m1 + 2.0 * m2) * PI.ln()).exp() * gam
            / gamma_norm_product(&m);
        assert!(
            (got - want).norm() <= 1e-12 * want.norm(),
            "got {got}, want {want}"
        );
    }

    #[test]
    fn series_converges_with_box_growth() {
        let m = mu((0.0, 1.0), (0.0, 2.0));
        let spec = TestFunctionSpec::new(1.0, 2.0, 1.0, 1.0);
        let id = ResidueSeriesId::from_name("Aa1").unwrap();
        let v16 = residue_series_eval(id, &m, &spec, &SeriesTruncation::uniform(16)).unwrap();
        let v24 = residue_series_eval(id, &m, &spec, &SeriesTruncation::uniform(24)).unwrap();
        let v32 = residue_series_eval(id, &m, &spec, &SeriesTruncation::uniform(32)).unwrap();
        assert!((v24.value - v32.value).norm() < 1e-10 * v32.value.norm().max(1e-10));
        assert!((v16.value - v32.value).norm() < 1e-6 * v32.value.norm().max(1e-10));
        assert!(v32.tail_estimate < 1e-10 * v32.value.norm().max(1e-10));
    }

    #[test]
    fn gauss_pair_defect_small_and_control_large() {
        let m = mu((0.0, 1.0), (0.0, 2.0));
        let spec = TestFunctionSpec::new(1.0, 2.0, 1.0, 1.0);
        let trunc = SeriesTruncation::uniform(8);
        let d = cancellation_defect(GaussPair::Ca, &m, &spec, &trunc).unwrap();
        assert!(d < 1e-8, "Ca defect {d:.3e}");
        // negative control: two survivors do not cancel. Evaluated at a
        // resonant X = 2 sample where the box sums are well conditioned
        // (at X = 1 the swelling parts dominate and are antisymmetric).
        let mr = mu((0.0, 4.0), (0.0, 7.0));
        let spec_r = TestFunctionSpec::new(4.0, 7.0, 2.0, 2.0);
        let ctrl =
            non_cancelling_defect("Aa1", "Ab1", &mr, &spec_r, &SeriesTruncation::uniform(24))
                .unwrap();
        assert!(ctrl > 1e-2, "control defect {ctrl:.3e}");
    }

    #[test]
    fn defect_decreases_with_truncation() {
        let m = mu((0.0, 1.0), (0.0, 2.0));
        let spec = TestFunctionSpec::new(1.0, 2.0, 1.0, 1.0);
        let d0 = cancellation_defect(GaussPair::D1, &m, &spec, &SeriesTruncation::uniform(0))
            .unwrap();
        let d4 = cancellation_defect(GaussPair::D1, &m, &spec, &SeriesTruncation::uniform(4))
            .unwrap();
        let d8 = cancellation_defect(GaussPair::D1, &m, &spec, &SeriesTruncation::uniform(8))
            .unwrap();
        // the k2..k4 box hardly matters once k1 is extrapolated, but the
        // defect must not grow and must be tiny at the end
        assert!(d8 <= d4.max(d0) * 10.0);
        assert!(d8 < 1e-8, "D1 defect {d8:.3e}");
    }
}
